//! Balanced collections and the Kohlberg criterion.

use num_traits::{One, Signed, Zero};

use super::simplex::{lp_solve, LpProblem, Relation};
use crate::coalition::Coalition;
use crate::game::{Allocation, TuGame};
use crate::rational::Rational;

/// Positive weights `λ_S` with `Σ λ_S 1_S = 1_N`, if any exist.
///
/// Maximizes the smallest weight `t`; the collection is balanced iff
/// `t > 0`. Empty collections and collections containing `∅` are rejected.
pub fn balanced_weights(n: usize, coalitions: &[Coalition]) -> Option<Vec<Rational>> {
    let grand = Coalition::grand(n);
    if coalitions.is_empty()
        || coalitions
            .iter()
            .any(|s| s.is_empty() || !s.is_subset_of(grand))
    {
        return None;
    }
    let m = coalitions.len();
    // variables: λ_1..λ_m, t
    let mut objective = vec![Rational::zero(); m + 1];
    objective[m] = -Rational::one();
    let mut p = LpProblem::new(objective);
    for k in 0..n {
        let mut row: Vec<Rational> = coalitions
            .iter()
            .map(|s| {
                if s.contains(k) {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        row.push(Rational::zero());
        p.add(row, Relation::Eq, Rational::one());
    }
    for idx in 0..m {
        let mut row = vec![Rational::zero(); m + 1];
        row[idx] = Rational::one();
        row[m] = -Rational::one();
        p.add(row, Relation::Ge, Rational::zero());
        p.set_lower(idx, Rational::zero());
    }
    let (mut x, _) = lp_solve(&p).optimal()?;
    let t = x.pop().expect("min weight");
    t.is_positive().then_some(x)
}

pub fn is_balanced_collection(n: usize, coalitions: &[Coalition]) -> bool {
    balanced_weights(n, coalitions).is_some()
}

/// One level of the Kohlberg test: the coalitions with excess at least
/// `level` and whether they form a balanced collection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KohlbergLevel {
    pub level: Rational,
    pub coalitions: Vec<Coalition>,
    pub balanced: bool,
}

/// Cumulative excess levels of the proper coalitions at `x`, highest first.
pub fn kohlberg_levels(v: &TuGame, x: &Allocation) -> Vec<KohlbergLevel> {
    let mut by_excess: Vec<(Rational, Coalition)> =
        v.proper_coalitions().map(|s| (v.excess(s, x), s)).collect();
    by_excess.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut levels = Vec::new();
    let mut members = Vec::new();
    let mut k = 0;
    while k < by_excess.len() {
        let level = by_excess[k].0.clone();
        while k < by_excess.len() && by_excess[k].0 == level {
            members.push(by_excess[k].1);
            k += 1;
        }
        let balanced = is_balanced_collection(v.n(), &members);
        levels.push(KohlbergLevel {
            level,
            coalitions: members.clone(),
            balanced,
        });
    }
    levels
}

/// Kohlberg's characterization of the pre-nucleolus: `x` is efficient and
/// every cumulative excess level is balanced.
pub fn satisfies_kohlberg(v: &TuGame, x: &Allocation) -> bool {
    v.is_efficient(x) && kohlberg_levels(v, x).iter().all(|l| l.balanced)
}
