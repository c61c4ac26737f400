//! Least core, its vertices and core membership.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::simplex::{lp_solve, LpProblem, Relation};
use crate::coalition::Coalition;
use crate::game::{Allocation, TuGame};
use crate::linalg::{solve_square, Matrix, RowBasis};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LeastCoreError {
    #[error("least core needs at least two players, got {0}")]
    TooFewPlayers(usize),
    #[error("vertex enumeration is capped at {cap} players, got {n}")]
    TooManyPlayers { n: usize, cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeastCoreResult {
    pub epsilon: Rational,
    pub witness: Allocation,
    /// Proper coalitions whose excess at the witness equals `epsilon`.
    pub tight: Vec<Coalition>,
    /// Proper coalitions with excess `epsilon` at every least-core point.
    pub universally_tight: Vec<Coalition>,
}

impl LeastCoreResult {
    /// Dimension of the least-core polytope.
    pub fn dimension(&self) -> usize {
        let n = self.witness.len();
        let mut basis = RowBasis::new();
        basis.insert(&vec![Rational::one(); n]);
        for s in &self.universally_tight {
            basis.insert(&indicator(*s, n));
        }
        n - basis.rank()
    }
}

pub(crate) fn indicator(s: Coalition, n: usize) -> Vec<Rational> {
    (0..n)
        .map(|k| {
            if s.contains(k) {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
        .collect()
}

/// An affine slice of allocations: `x(N) = v(N)`, `x(T) = v(T) - level_T`
/// for the fixed coalitions, and `x(S) >= v(S) - ε` for the free ones.
pub(crate) struct Face<'a> {
    pub v: &'a TuGame,
    pub fixed: &'a [(Coalition, Rational)],
    pub free: &'a [Coalition],
}

impl Face<'_> {
    // Variables are x_0..x_{n-1} followed by ε.
    fn base_problem(&self, objective: Vec<Rational>) -> LpProblem {
        let n = self.v.n();
        let mut p = LpProblem::new(objective);
        let width = p.num_vars();
        let row = |s: Coalition| {
            let mut r = indicator(s, n);
            r.resize(width, Rational::zero());
            r
        };
        p.add(
            row(self.v.grand()),
            Relation::Eq,
            self.v.grand_value().clone(),
        );
        for (t, level) in self.fixed {
            p.add(row(*t), Relation::Eq, self.v.value(*t) - level);
        }
        p
    }

    /// Minimum uniform excess bound over the free coalitions and a witness.
    pub fn minimize(&self) -> (Rational, Allocation) {
        let n = self.v.n();
        let mut objective = vec![Rational::zero(); n + 1];
        objective[n] = Rational::one();
        let mut p = self.base_problem(objective);
        for &s in self.free {
            let mut r = indicator(s, n);
            r.push(Rational::one());
            p.add(r, Relation::Ge, self.v.value(s).clone());
        }
        let (mut x, eps) = lp_solve(&p)
            .optimal()
            .expect("least-core program is feasible and bounded");
        x.truncate(n);
        (eps, Allocation::new(x))
    }

    /// Free coalitions whose constraint is tight across the whole optimal
    /// face at level `eps`. `candidates` must contain every such coalition.
    ///
    /// Each round maximizes the summed slack (capped at 1 per coalition) of
    /// the remaining candidates; any candidate with positive slack is not
    /// universally tight. A zero optimum certifies the rest.
    pub fn universally_tight(&self, eps: &Rational, candidates: Vec<Coalition>) -> Vec<Coalition> {
        let n = self.v.n();
        let mut remaining = candidates;
        while !remaining.is_empty() {
            let width = n + remaining.len();
            let mut objective = vec![Rational::zero(); width];
            for c in objective.iter_mut().skip(n) {
                *c = -Rational::one();
            }
            let mut p = self.base_problem(objective);
            let row = |s: Coalition| {
                let mut r = indicator(s, n);
                r.resize(width, Rational::zero());
                r
            };
            for &s in self.free {
                if !remaining.contains(&s) {
                    p.add(row(s), Relation::Ge, self.v.value(s) - eps);
                }
            }
            for (k, &s) in remaining.iter().enumerate() {
                let mut r = row(s);
                r[n + k] = -Rational::one();
                p.add(r, Relation::Ge, self.v.value(s) - eps);
                p.set_lower(n + k, Rational::zero());
                p.set_upper(n + k, Rational::one());
            }
            let (x, value) = lp_solve(&p).optimal().expect("face is nonempty");
            if value.is_zero() {
                break;
            }
            let before = remaining.len();
            let mut k = 0;
            remaining.retain(|_| {
                let keep = !x[n + k].is_positive();
                k += 1;
                keep
            });
            debug_assert!(remaining.len() < before);
        }
        remaining
    }
}

/// The least-core value, a witness and the tight families.
pub fn least_core(v: &TuGame) -> Result<LeastCoreResult, LeastCoreError> {
    if v.n() < 2 {
        return Err(LeastCoreError::TooFewPlayers(v.n()));
    }
    let free: Vec<Coalition> = v.proper_coalitions().collect();
    let face = Face {
        v,
        fixed: &[],
        free: &free,
    };
    let (epsilon, witness) = face.minimize();
    let mut tight: Vec<Coalition> = free
        .iter()
        .copied()
        .filter(|&s| v.excess(s, &witness) == epsilon)
        .collect();
    tight.sort();
    let mut universally_tight = face.universally_tight(&epsilon, tight.clone());
    universally_tight.sort();
    Ok(LeastCoreResult {
        epsilon,
        witness,
        tight,
        universally_tight,
    })
}

pub const DEFAULT_VERTEX_CAP: usize = 6;

/// All vertices of the least-core polytope, sorted and deduplicated.
///
/// A vertex pins the affine hull of the least core plus `d` further tight
/// constraints, where `d` is the least-core dimension. Only constraints that
/// can be tight somewhere in the least core are tried.
pub fn least_core_vertices(v: &TuGame, cap_n: usize) -> Result<Vec<Allocation>, LeastCoreError> {
    let n = v.n();
    if n > cap_n {
        return Err(LeastCoreError::TooManyPlayers { n, cap: cap_n });
    }
    let lc = least_core(v)?;
    let eps = &lc.epsilon;

    let mut hull_rows: Vec<(Vec<Rational>, Rational)> =
        vec![(vec![Rational::one(); n], v.grand_value().clone())];
    let mut basis = RowBasis::new();
    basis.insert(&hull_rows[0].0);
    for &s in &lc.universally_tight {
        let row = indicator(s, n);
        if basis.insert(&row) {
            hull_rows.push((row, v.value(s) - eps));
        }
    }
    let d = n - basis.rank();
    if d == 0 {
        return Ok(vec![lc.witness]);
    }

    let free: Vec<Coalition> = v.proper_coalitions().collect();
    let fixed: Vec<(Coalition, Rational)> = lc
        .universally_tight
        .iter()
        .map(|&s| (s, eps.clone()))
        .collect();
    let candidates: Vec<Coalition> = free
        .iter()
        .copied()
        .filter(|s| !lc.universally_tight.contains(s))
        .filter(|&s| can_be_tight(v, &free, &fixed, eps, s))
        .collect();

    let mut found: BTreeSet<Vec<Rational>> = BTreeSet::new();
    let mut chosen = Vec::with_capacity(d);
    choose(
        &candidates,
        d,
        0,
        &mut chosen,
        &mut |subset: &[Coalition]| {
            let mut rows = hull_rows.clone();
            let mut check = basis.clone();
            for &s in subset {
                let row = indicator(s, n);
                if !check.insert(&row) {
                    return;
                }
                rows.push((row, v.value(s) - eps));
            }
            let a = Matrix::from_rows(rows.iter().map(|r| r.0.clone()).collect());
            let b: Vec<Rational> = rows.iter().map(|r| r.1.clone()).collect();
            let Ok(x) = solve_square(&a, &b) else {
                return;
            };
            let x = Allocation::new(x);
            if free.iter().all(|&s| &v.excess(s, &x) <= eps) {
                found.insert(x.into_vec());
            }
        },
    );
    Ok(found.into_iter().map(Allocation::new).collect())
}

fn choose(
    items: &[Coalition],
    k: usize,
    from: usize,
    chosen: &mut Vec<Coalition>,
    visit: &mut impl FnMut(&[Coalition]),
) {
    if chosen.len() == k {
        visit(chosen);
        return;
    }
    for idx in from..items.len() {
        if items.len() - idx < k - chosen.len() {
            break;
        }
        chosen.push(items[idx]);
        choose(items, k, idx + 1, chosen, visit);
        chosen.pop();
    }
}

// Minimum excess gap of `s` over the least core is zero.
fn can_be_tight(
    v: &TuGame,
    free: &[Coalition],
    fixed: &[(Coalition, Rational)],
    eps: &Rational,
    s: Coalition,
) -> bool {
    let n = v.n();
    let mut p = LpProblem::new(indicator(s, n));
    p.add(
        vec![Rational::one(); n],
        Relation::Eq,
        v.grand_value().clone(),
    );
    for (t, level) in fixed {
        p.add(indicator(*t, n), Relation::Eq, v.value(*t) - level);
    }
    for &t in free {
        p.add(indicator(t, n), Relation::Ge, v.value(t) - eps);
    }
    let (_, min_sum) = lp_solve(&p).optimal().expect("least core is nonempty");
    min_sum == v.value(s) - eps
}

/// Efficiency and nonpositive excess for every coalition.
pub fn core_contains(v: &TuGame, x: &Allocation) -> bool {
    x.len() == v.n() && v.is_efficient(x) && v.excess_vector(x).iter().all(|e| !e.is_positive())
}

pub fn core_nonempty(v: &TuGame) -> bool {
    match least_core(v) {
        Ok(lc) => !lc.epsilon.is_positive(),
        // A single player always owns v(N).
        Err(_) => true,
    }
}
