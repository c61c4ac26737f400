//! Sequential-LP pre-nucleolus and reconstruction from tight coalitions.

use num_traits::One;

use super::least_core::{indicator, Face};
use crate::coalition::Coalition;
use crate::game::{Allocation, TuGame};
use crate::linalg::{solve_full_rank, LinalgError, Matrix, RowBasis};
use crate::rational::Rational;

/// One level of the sequential scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleLevel {
    pub epsilon: Rational,
    pub fixed: Vec<Coalition>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleRun {
    pub levels: Vec<OracleLevel>,
    pub allocation: Allocation,
}

/// Pre-nucleolus by repeatedly minimizing the largest free excess and
/// fixing the coalitions tight across the optimal face.
///
/// Coalitions whose characteristic vector falls in the span of the fixed
/// ones have constant excess from then on and leave the program. Every
/// level raises the rank, so at most `n - 1` levels are solved.
pub fn prenucleolus_lp_run(v: &TuGame) -> OracleRun {
    let n = v.n();
    if n == 1 {
        return OracleRun {
            levels: Vec::new(),
            allocation: Allocation::new(vec![v.grand_value().clone()]),
        };
    }
    let mut basis = RowBasis::new();
    basis.insert(&vec![Rational::one(); n]);
    let mut fixed: Vec<(Coalition, Rational)> = Vec::new();
    let mut free: Vec<Coalition> = v.proper_coalitions().collect();
    let mut levels = Vec::new();
    while basis.rank() < n {
        let face = Face {
            v,
            fixed: &fixed,
            free: &free,
        };
        let (eps, witness) = face.minimize();
        let candidates: Vec<Coalition> = free
            .iter()
            .copied()
            .filter(|&s| v.excess(s, &witness) == eps)
            .collect();
        let mut tight = face.universally_tight(&eps, candidates);
        tight.sort();
        assert!(!tight.is_empty(), "optimal face has a tight free coalition");
        for &s in &tight {
            basis.insert(&indicator(s, n));
            fixed.push((s, eps.clone()));
        }
        free.retain(|&s| !basis.contains(&indicator(s, n)));
        levels.push(OracleLevel {
            epsilon: eps,
            fixed: tight,
        });
    }

    let mut rows = vec![vec![Rational::one(); n]];
    let mut rhs = vec![v.grand_value().clone()];
    for (s, eps) in &fixed {
        rows.push(indicator(*s, n));
        rhs.push(v.value(*s) - eps);
    }
    let x = solve_full_rank(&Matrix::from_rows(rows), &rhs).expect("fixed system pins a point");
    OracleRun {
        levels,
        allocation: Allocation::new(x),
    }
}

pub fn prenucleolus_lp_oracle(v: &TuGame) -> Allocation {
    prenucleolus_lp_run(v).allocation
}

/// Solves `y(S) = x(S)` for `S` in `coalitions`; the stacked characteristic
/// vectors must have rank `n`.
pub fn reconstruct_from_tight(
    v: &TuGame,
    coalitions: &[Coalition],
    x: &Allocation,
) -> Result<Allocation, LinalgError> {
    let n = v.n();
    if x.len() != n {
        return Err(LinalgError::Dimension(format!(
            "allocation of length {} for {n} players",
            x.len()
        )));
    }
    let a = Matrix::from_rows(coalitions.iter().map(|&s| indicator(s, n)).collect());
    let b: Vec<Rational> = coalitions.iter().map(|&s| x.coalition_sum(s)).collect();
    if coalitions.is_empty() {
        return Err(LinalgError::Singular);
    }
    solve_full_rank(&a, &b).map(Allocation::new)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{example_game, example_nucleolus};
    use crate::rational::{int, ratio};

    fn c(ids: &[usize]) -> Coalition {
        Coalition::from_ids(ids.iter().copied())
    }

    #[test]
    fn example_prenucleolus() {
        let v = example_game();
        let run = prenucleolus_lp_run(&v);
        assert_eq!(run.allocation.clone().into_vec(), example_nucleolus());
        assert_eq!(run.levels[0].epsilon, int(-2));
        assert!(run.levels.len() <= 3);
    }

    #[test]
    fn symmetric_three_player_game() {
        let pairs = [[1, 2], [1, 3], [2, 3]].map(|p| (c(&p), int(1)));
        let v = TuGame::from_entries(3, pairs.into_iter().chain([(Coalition::grand(3), int(1))]))
            .unwrap();
        assert_eq!(prenucleolus_lp_oracle(&v).into_vec(), vec![ratio(1, 3); 3]);
    }

    #[test]
    fn single_player() {
        let v = TuGame::from_entries(1, [(Coalition::grand(1), int(7))]).unwrap();
        assert_eq!(prenucleolus_lp_oracle(&v).into_vec(), vec![int(7)]);
    }

    #[test]
    fn reconstruction_from_selection() {
        let v = example_game();
        let nu = Allocation::new(example_nucleolus());
        let family = [
            c(&[1]),
            c(&[3]),
            c(&[4]),
            c(&[2, 3]),
            c(&[1, 2, 3]),
            c(&[1, 2, 4]),
        ];
        let b: Vec<Rational> = family.iter().map(|&s| nu.coalition_sum(s)).collect();
        assert_eq!(
            b,
            vec![ratio(5, 2), int(2), int(2), ratio(11, 2), int(8), int(8)]
        );
        assert_eq!(reconstruct_from_tight(&v, &family, &nu).unwrap(), nu);
    }

    #[test]
    fn reconstruction_identity_and_rank_deficiency() {
        let v = example_game();
        let x = Allocation::new(vec![int(1), int(-2), ratio(3, 5), int(4)]);
        let singles: Vec<Coalition> = (0..4).map(Coalition::singleton).collect();
        assert_eq!(reconstruct_from_tight(&v, &singles, &x).unwrap(), x);
        assert_eq!(
            reconstruct_from_tight(&v, &[c(&[1, 2]), c(&[3, 4])], &x),
            Err(LinalgError::Singular)
        );
    }
}
