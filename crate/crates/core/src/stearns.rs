//! Bilateral transfer scheme converging to a kernel element.

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::coalition::Coalition;
use crate::game::{Allocation, GameError, TuGame};
use crate::rational::Rational;
use crate::surplus::{pair_order, surplus_matrix};

pub const DEFAULT_MAX_STEPS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferStep {
    /// `(i*, j*)`: `j*` pays `i*`.
    pub pair: (usize, usize),
    pub delta: Rational,
    pub delta_star: Rational,
    pub x_after: Allocation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferTrace {
    pub steps: Vec<TransferStep>,
    pub terminal: Allocation,
    /// `δ*/v(N)` at the terminal point.
    pub relative_gap: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StearnsError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("start {0} is not an imputation")]
    NotAnImputation(Allocation),
    #[error("tolerance must be positive")]
    NonPositiveTolerance,
    #[error("step cap reached with relative gap {}", .0.relative_gap)]
    StepCapHit(Box<TransferTrace>),
    #[error("player {} is at its singleton worth and cannot pay", .0.steps.last().map_or(0, |s| s.pair.1 + 1))]
    Stalled(Box<TransferTrace>),
}

/// Largest surplus imbalance `s_ij - s_ji` over ordered pairs, with the
/// first maximizing pair in pair order.
pub fn max_imbalance(v: &TuGame, x: &Allocation) -> ((usize, usize), Rational) {
    let m = surplus_matrix(v, x);
    let mut best: Option<((usize, usize), Rational)> = None;
    for (i, j) in pair_order(v.n()) {
        let d = m.get(i, j) - m.get(j, i);
        if best.as_ref().is_none_or(|(_, b)| d > *b) {
            best = Some(((i, j), d));
        }
    }
    best.unwrap_or(((0, 0), Rational::zero()))
}

/// Runs maximal transfers from `start` until `δ*/v(N) <= tol`.
pub fn stearns_solve(
    v: &TuGame,
    start: &Allocation,
    tol: &Rational,
    max_steps: usize,
) -> Result<TransferTrace, StearnsError> {
    v.check_allocation(start)?;
    if !v.is_imputation(start) {
        return Err(StearnsError::NotAnImputation(start.clone()));
    }
    if !tol.is_positive() {
        return Err(StearnsError::NonPositiveTolerance);
    }
    let two = Rational::from_integer(2.into());
    let mut steps: Vec<TransferStep> = Vec::new();
    let mut x = start.clone();
    loop {
        let ((i, j), delta_star) = max_imbalance(v, &x);
        let relative_gap = &delta_star / v.grand_value();
        if let Some(prev) = steps.last() {
            if delta_star > prev.delta_star {
                log::debug!("imbalance rose from {} to {delta_star}", prev.delta_star);
            }
        }
        let finish = |steps: Vec<TransferStep>, terminal: Allocation| TransferTrace {
            steps,
            terminal,
            relative_gap: relative_gap.clone(),
        };
        if &relative_gap <= tol {
            return Ok(finish(steps, x));
        }
        if steps.len() >= max_steps {
            return Err(StearnsError::StepCapHit(Box::new(finish(steps, x))));
        }
        let room = &x[j] - v.value(Coalition::singleton(j));
        let delta = (&delta_star / &two).min(room);
        let x_after = x.transfer(j, i, &delta);
        let stalled = delta.is_zero();
        steps.push(TransferStep {
            pair: (i, j),
            delta,
            delta_star,
            x_after: x_after.clone(),
        });
        if stalled {
            return Err(StearnsError::Stalled(Box::new(finish(steps, x))));
        }
        x = x_after;
    }
}
