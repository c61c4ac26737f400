//! Pre-kernel search by iterated quadratic minimization over payoff
//! equivalence classes.
//!
//! Inside the class of allocations sharing a selection `𝒮`, the objective
//! `h(x) = Σ_{i<j} (s_ij - s_ji)² + (x(N) - v(N))²` is the quadratic
//! `‖Eᵀx - α‖²`. Each step solves the class's normal equations `Q x = a`
//! (minimum-norm when singular), recomputes the selection and repeats.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::coalition::Coalition;
use crate::game::{Allocation, GameError, TuGame};
use crate::linalg::{dot, min_norm_solve, LinalgError, Matrix};
use crate::rational::Rational;
use crate::surplus::{lex_selection, surplus_matrix, unordered_pairs, PairSelection};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("degenerate class system: {0}")]
    Degenerate(#[from] LinalgError),
    #[error("iteration cap must be at least 1")]
    ZeroCap,
}

/// The quadratic data of one payoff equivalence class.
///
/// Columns of `e` follow the unordered pairs `i<j` row by row, then the
/// efficiency column `1_N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassSystem {
    pub e: Matrix,
    pub alpha: Vec<Rational>,
    pub q: Matrix,
    pub a: Vec<Rational>,
}

impl ClassSystem {
    pub fn n(&self) -> usize {
        self.e.rows()
    }
}

fn indicator(s: Coalition, n: usize) -> Vec<Rational> {
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

/// `E_ij = 1_{S_ji} - 1_{S_ij}`, `α_ij = v(S_ji) - v(S_ij)`, `E_0 = 1_N`,
/// `α_0 = v(N)`, `Q = E Eᵀ`, `a = E α`.
pub fn build_system(v: &TuGame, sel: &PairSelection) -> ClassSystem {
    let n = v.n();
    let mut columns: Vec<Vec<Rational>> = Vec::new();
    let mut alpha = Vec::new();
    for (i, j) in unordered_pairs(n) {
        let s_ij = sel.get(i, j);
        let s_ji = sel.get(j, i);
        let col = indicator(s_ji, n)
            .into_iter()
            .zip(indicator(s_ij, n))
            .map(|(p, q)| p - q)
            .collect();
        columns.push(col);
        alpha.push(v.value(s_ji) - v.value(s_ij));
    }
    columns.push(vec![Rational::one(); n]);
    alpha.push(v.grand_value().clone());

    let e = Matrix::from_fn(n, columns.len(), |r, c| columns[c][r].clone());
    let q = e.mul(&e.transpose());
    let a = e.mul_vec(&alpha);
    ClassSystem { e, alpha, q, a }
}

/// `h(x)` from the surplus matrix.
pub fn h_value(v: &TuGame, x: &Allocation) -> Rational {
    let m = surplus_matrix(v, x);
    let imbalance: Rational = unordered_pairs(v.n())
        .map(|(i, j)| {
            let f = m.get(i, j) - m.get(j, i);
            &f * &f
        })
        .sum();
    let f0 = x.total() - v.grand_value();
    imbalance + &f0 * &f0
}

/// `⟨x, Qx⟩ - 2⟨x, a⟩ + ‖α‖²`, which is `‖Eᵀx - α‖²`.
pub fn h_gamma_value(sys: &ClassSystem, x: &Allocation) -> Rational {
    let qx = sys.q.mul_vec(x);
    let two = Rational::from_integer(2.into());
    dot(x, &qx) - two * dot(x, &sys.a) + dot(&sys.alpha, &sys.alpha)
}

/// Minimum-norm solution of `Q x = a`.
pub fn gamma_step(sys: &ClassSystem) -> Result<Allocation, SolveError> {
    Ok(Allocation::new(min_norm_solve(&sys.q, &sys.a)?))
}

/// Efficiency plus balanced maximum surpluses, exactly.
pub fn is_prekernel(v: &TuGame, x: &Allocation) -> bool {
    x.len() == v.n() && v.is_efficient(x) && surplus_matrix(v, x).is_balanced()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Converged,
    IterationCapHit,
    /// The selection repeated at a point that is not a pre-kernel element.
    DegenerateSystem,
}

#[derive(Debug, Clone)]
pub struct Iteration {
    pub x: Allocation,
    pub selection: PairSelection,
    pub system: ClassSystem,
}

#[derive(Debug, Clone)]
pub struct SolveTrace {
    pub iterations: Vec<Iteration>,
    pub terminal: Allocation,
    pub status: SolveStatus,
}

impl SolveTrace {
    /// Number of gamma steps taken.
    pub fn steps(&self) -> usize {
        self.iterations.len()
    }
}

fn binomial2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Step bound `C(n,2) - 1` for converged runs.
pub fn step_bound(n: usize) -> usize {
    binomial2(n).saturating_sub(1)
}

/// Default safeguard cap `C(n,2) + n`.
pub fn default_max_iter(n: usize) -> usize {
    binomial2(n) + n
}

/// Iterates `x ↦ Γ(𝒮(x))` from `start` until a pre-kernel element is hit.
pub fn solve_prekernel(
    v: &TuGame,
    start: &Allocation,
    max_iter: usize,
) -> Result<SolveTrace, SolveError> {
    v.check_allocation(start)?;
    if max_iter == 0 {
        return Err(SolveError::ZeroCap);
    }
    let mut iterations: Vec<Iteration> = Vec::new();
    let mut x = start.clone();
    if is_prekernel(v, &x) {
        return Ok(SolveTrace {
            iterations,
            terminal: x,
            status: SolveStatus::Converged,
        });
    }
    while iterations.len() < max_iter {
        let selection = lex_selection(v, &x);
        if iterations
            .last()
            .is_some_and(|it| it.selection == selection)
        {
            log::warn!("selection repeated at {x} without balancing surpluses");
            return Ok(SolveTrace {
                iterations,
                terminal: x,
                status: SolveStatus::DegenerateSystem,
            });
        }
        let system = build_system(v, &selection);
        let next = gamma_step(&system)?;
        iterations.push(Iteration {
            x,
            selection,
            system,
        });
        x = next;
        if is_prekernel(v, &x) {
            if iterations.len() > step_bound(v.n()) {
                log::warn!(
                    "converged after {} steps, above the bound {}",
                    iterations.len(),
                    step_bound(v.n())
                );
            }
            return Ok(SolveTrace {
                iterations,
                terminal: x,
                status: SolveStatus::Converged,
            });
        }
    }
    Ok(SolveTrace {
        iterations,
        terminal: x,
        status: SolveStatus::IterationCapHit,
    })
}

/// [`solve_prekernel`] from the equal split with the default cap.
pub fn prekernel_point(v: &TuGame) -> Result<SolveTrace, SolveError> {
    solve_prekernel(v, &Allocation::equal_split(v), default_max_iter(v.n()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{example_game, example_nucleolus, replication_games};
    use crate::rational::{int, ratio};

    fn ints(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    fn y0() -> Allocation {
        Allocation::new(ints(&[10, 0, 0, 0]))
    }

    fn y1() -> Allocation {
        Allocation::new(vec![
            ratio(128, 37),
            ratio(98, 37),
            ratio(91, 37),
            ratio(60, 37),
        ])
    }

    fn y2() -> Allocation {
        Allocation::new(vec![
            ratio(329, 127),
            ratio(423, 127),
            ratio(255, 127),
            ratio(279, 127),
        ])
    }

    fn system_at(x: &Allocation) -> ClassSystem {
        let v = example_game();
        build_system(&v, &lex_selection(&v, x))
    }

    #[test]
    fn first_class_system() {
        let sys = system_at(&y0());
        assert_eq!(sys.e.column(0), ints(&[-1, 1, 1, 0]));
        assert_eq!(sys.e.column(6), ints(&[1, 1, 1, 1]));
        assert_eq!(sys.alpha, ints(&[3, -3, -3, 0, -3, -3, 10]));
        assert_eq!(sys.q.row(0), &ints(&[4, 0, -1, 1])[..]);
        assert_eq!(sys.a, ints(&[13, 19, 16, 4]));
        assert!(sys.q.is_symmetric());
        assert_eq!(gamma_step(&sys).unwrap(), y1());
    }

    #[test]
    fn second_and_third_class_systems() {
        let sys = system_at(&y1());
        assert_eq!(sys.alpha, ints(&[3, -3, -6, -6, -3, -3, 10]));
        assert_eq!(sys.q.row(0), &ints(&[5, 2, -1, 2])[..]);
        assert_eq!(sys.a, ints(&[22, 31, 16, 7]));
        assert_eq!(gamma_step(&sys).unwrap(), y2());

        let sys = system_at(&y2());
        assert_eq!(sys.q.row(0), &ints(&[6, 4, 0, 1])[..]);
        assert_eq!(sys.a, ints(&[31, 37, 13, 10]));
        assert_eq!(gamma_step(&sys).unwrap().into_vec(), example_nucleolus());
    }

    #[test]
    fn h_and_h_gamma_agree_on_generating_points() {
        let v = example_game();
        let nu = Allocation::new(example_nucleolus());
        for x in [y0(), y1(), y2(), nu.clone()] {
            let sys = system_at(&x);
            assert_eq!(h_gamma_value(&sys, &x), h_value(&v, &x));
        }
        assert_eq!(h_value(&v, &nu), int(0));
        assert!(h_value(&v, &y0()) > int(0));
    }

    #[test]
    fn h_at_start_matches_surplus_differences() {
        // Independent check: brute-force surpluses over coalitions.
        let v = example_game();
        let x = y0();
        let s = |i: usize, j: usize| {
            v.coalitions()
                .filter(|c| c.contains(i) && !c.contains(j))
                .map(|c| v.excess(c, &x))
                .max()
                .unwrap()
        };
        let mut expected = int(0);
        for i in 0..4 {
            for j in i + 1..4 {
                let f = s(i, j) - s(j, i);
                expected += &f * &f;
            }
        }
        assert_eq!(h_value(&v, &x), expected);
    }

    #[test]
    fn worked_example_converges_in_three_steps() {
        let v = example_game();
        let trace = solve_prekernel(&v, &y0(), default_max_iter(4)).unwrap();
        assert_eq!(trace.status, SolveStatus::Converged);
        assert_eq!(trace.steps(), 3);
        assert_eq!(trace.iterations[1].x, y1());
        assert_eq!(trace.iterations[2].x, y2());
        assert_eq!(trace.terminal.into_vec(), example_nucleolus());
    }

    #[test]
    fn starting_at_the_solution_takes_no_steps() {
        let v = example_game();
        let nu = Allocation::new(example_nucleolus());
        let trace = solve_prekernel(&v, &nu, 5).unwrap();
        assert_eq!(trace.steps(), 0);
        assert_eq!(trace.terminal, nu);
    }

    #[test]
    fn replication_games_share_the_point() {
        for (k, v) in replication_games().iter().enumerate() {
            let trace = prekernel_point(v).unwrap();
            assert_eq!(trace.status, SolveStatus::Converged, "game {}", k + 1);
            assert_eq!(
                trace.terminal.clone().into_vec(),
                example_nucleolus(),
                "game {}",
                k + 1
            );
        }
    }

    #[test]
    fn prekernel_membership() {
        let v = example_game();
        assert!(is_prekernel(&v, &Allocation::new(example_nucleolus())));
        assert!(!is_prekernel(&v, &y0()));
        let two = TuGame::from_entries(2, [(Coalition::grand(2), int(10))]).unwrap();
        assert!(is_prekernel(&two, &Allocation::new(ints(&[5, 5]))));
        assert!(!is_prekernel(&two, &Allocation::new(ints(&[6, 4]))));
    }

    #[test]
    fn two_player_game_solves_in_one_step() {
        let two = TuGame::from_entries(2, [(Coalition::grand(2), int(10))]).unwrap();
        let trace = solve_prekernel(&two, &Allocation::new(ints(&[10, 0])), 3).unwrap();
        assert_eq!(trace.status, SolveStatus::Converged);
        assert_eq!(trace.steps(), 1);
        assert_eq!(trace.terminal.into_vec(), ints(&[5, 5]));
    }

    #[test]
    fn cap_is_reported() {
        let v = example_game();
        let trace = solve_prekernel(&v, &y0(), 1).unwrap();
        assert_eq!(trace.status, SolveStatus::IterationCapHit);
        assert_eq!(trace.terminal, y1());
        assert_eq!(
            solve_prekernel(&v, &y0(), 0).unwrap_err(),
            SolveError::ZeroCap
        );
    }

    #[test]
    fn default_caps() {
        assert_eq!(step_bound(2), 0);
        assert_eq!(step_bound(4), 5);
        assert_eq!(default_max_iter(4), 10);
    }
}
