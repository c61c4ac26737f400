//! Exhaustive game-property predicates and the Shapley value.
//!
//! Superadditivity and convexity scan coalition pairs directly, which costs
//! `O(4^n)` comparisons; the outer loop runs in parallel.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{Allocation, TuGame};
use crate::coalition::Coalition;
use crate::rational::Rational;

/// `v(S) <= v(T)` for all `∅ ≠ S ⊆ T`.
pub fn is_monotone(v: &TuGame) -> bool {
    monotone_values(v.n(), v.values())
}

fn monotone_values(n: usize, values: &[Rational]) -> bool {
    (1u32..1 << n).into_par_iter().all(|t| {
        let t = Coalition::from_mask(t);
        t.subsets()
            .skip(1)
            .all(|s| values[s.index()] <= values[t.index()])
    })
}

/// `v(S) + v(T) <= v(S ∪ T)` for disjoint `S, T`.
pub fn is_superadditive(v: &TuGame) -> bool {
    let grand = v.grand();
    (0u32..1 << v.n()).into_par_iter().all(|s| {
        let s = Coalition::from_mask(s);
        grand
            .difference(s)
            .subsets()
            .all(|t| v.value(s) + v.value(t) <= *v.value(s.union(t)))
    })
}

/// Supermodularity: `v(S) + v(T) <= v(S ∪ T) + v(S ∩ T)` for all pairs.
pub fn is_convex(v: &TuGame) -> bool {
    let size = 1u32 << v.n();
    (0..size).into_par_iter().all(|s| {
        let s = Coalition::from_mask(s);
        (s.mask()..size)
            .map(Coalition::from_mask)
            .all(|t| v.value(s) + v.value(t) <= v.value(s.union(t)) + v.value(s.intersection(t)))
    })
}

/// Monotonicity of the zero-normalized game `v(S) - Σ_{k∈S} v({k})`.
pub fn is_zero_monotone(v: &TuGame) -> bool {
    let singles = Allocation::new(
        (0..v.n())
            .map(|k| v.value(Coalition::singleton(k)).clone())
            .collect(),
    );
    let normalized: Vec<Rational> = singles
        .all_coalition_sums()
        .iter()
        .zip(v.values())
        .map(|(s, val)| val - s)
        .collect();
    monotone_values(v.n(), &normalized)
}

/// Players `k` with `v(S) = 0` for every coalition `S` not containing `k`.
pub fn veto_players(v: &TuGame) -> Coalition {
    let players =
        (0..v.n()).filter(|&k| v.grand().without(k).subsets().all(|s| v.value(s).is_zero()));
    Coalition::from_players(players)
}

/// The Shapley value as the weighted average of marginal contributions,
/// `φ_k = Σ_{S ⊆ N∖{k}} |S|!(n-|S|-1)!/n! · (v(S ∪ {k}) - v(S))`.
pub fn shapley_value(v: &TuGame) -> Allocation {
    let n = v.n();
    let factorial = |m: usize| -> BigInt { (1..=m).fold(BigInt::one(), |acc, k| acc * k) };
    let n_fact = factorial(n);
    let weights: Vec<Rational> = (0..n)
        .map(|s| Rational::new(factorial(s) * factorial(n - s - 1), n_fact.clone()))
        .collect();
    let phi = (0..n)
        .map(|k| {
            v.grand()
                .without(k)
                .subsets()
                .fold(Rational::zero(), |acc, s| {
                    acc + &weights[s.len()] * (v.value(s.with(k)) - v.value(s))
                })
        })
        .collect();
    Allocation::new(phi)
}
