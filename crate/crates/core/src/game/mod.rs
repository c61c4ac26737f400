//! TU games in characteristic-function form, allocations, and excesses.

mod properties;
pub(crate) mod reduced;

pub use properties::{
    is_convex, is_monotone, is_superadditive, is_zero_monotone, shapley_value, veto_players,
};
pub use reduced::{reduced_game, ReducedGame};

use std::fmt;
use std::ops::{Deref, Index};

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::coalition::{Coalition, MAX_PLAYERS};
use crate::rational::{format_vector, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("player count {0} outside the supported range 1..={MAX_PLAYERS}")]
    PlayerCount(usize),
    #[error("expected {expected} coalition values, got {got}")]
    ValueCount { expected: usize, got: usize },
    #[error("v(∅) must be 0, got {0}")]
    NonZeroEmpty(Rational),
    #[error(
        "grand coalition value required and positive (v(N) > 0 is a standing assumption), got {0}"
    )]
    NonPositiveGrand(Rational),
    #[error("allocation has {got} entries but the game has {expected} players")]
    ArityMismatch { expected: usize, got: usize },
    #[error("coalition {0} is not a subset of the player set")]
    InvalidCoalition(Coalition),
    #[error("coalition must be nonempty")]
    EmptyCoalition,
}

/// A transferable-utility game: `n` players and a worth for each of the
/// `2^n` coalitions, indexed by coalition mask.
#[derive(Clone, PartialEq, Eq)]
pub struct TuGame {
    n: usize,
    values: Vec<Rational>,
}

impl TuGame {
    /// Validated constructor: `values[0] = 0` and `values[2^n - 1] > 0`.
    pub fn new(n: usize, values: Vec<Rational>) -> Result<Self, GameError> {
        let game = Self::new_unrestricted(n, values)?;
        if !game.grand_value().is_positive() {
            return Err(GameError::NonPositiveGrand(game.grand_value().clone()));
        }
        Ok(game)
    }

    /// Like [`TuGame::new`] but without the `v(N) > 0` requirement. Reduced
    /// games and strategically equivalent transforms can legitimately leave
    /// the positive orthant.
    pub fn new_unrestricted(n: usize, values: Vec<Rational>) -> Result<Self, GameError> {
        if n == 0 || n > MAX_PLAYERS {
            return Err(GameError::PlayerCount(n));
        }
        let expected = 1usize << n;
        if values.len() != expected {
            return Err(GameError::ValueCount {
                expected,
                got: values.len(),
            });
        }
        if !values[0].is_zero() {
            return Err(GameError::NonZeroEmpty(values[0].clone()));
        }
        Ok(TuGame { n, values })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(Coalition) -> Rational) -> Result<Self, GameError> {
        if n == 0 || n > MAX_PLAYERS {
            return Err(GameError::PlayerCount(n));
        }
        Self::new(n, Coalition::all(n).map(&mut f).collect())
    }

    /// Game with the listed worths; every other coalition is worth 0.
    pub fn from_entries<I>(n: usize, entries: I) -> Result<Self, GameError>
    where
        I: IntoIterator<Item = (Coalition, Rational)>,
    {
        if n == 0 || n > MAX_PLAYERS {
            return Err(GameError::PlayerCount(n));
        }
        let mut values = vec![Rational::zero(); 1 << n];
        let grand = Coalition::grand(n);
        for (s, val) in entries {
            if !s.is_subset_of(grand) {
                return Err(GameError::InvalidCoalition(s));
            }
            values[s.index()] = val;
        }
        Self::new(n, values)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grand(&self) -> Coalition {
        Coalition::grand(self.n)
    }

    pub fn value(&self, s: Coalition) -> &Rational {
        &self.values[s.index()]
    }

    pub fn grand_value(&self) -> &Rational {
        &self.values[self.values.len() - 1]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn coalitions(&self) -> impl Iterator<Item = Coalition> {
        Coalition::all(self.n)
    }

    /// Coalitions other than `∅` and `N`.
    pub fn proper_coalitions(&self) -> impl Iterator<Item = Coalition> {
        (1..(1u32 << self.n) - 1).map(Coalition::from_mask)
    }

    pub fn check_allocation(&self, x: &Allocation) -> Result<(), GameError> {
        if x.len() != self.n {
            return Err(GameError::ArityMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// `e(S, x) = v(S) - x(S)`.
    pub fn excess(&self, s: Coalition, x: &Allocation) -> Rational {
        self.value(s) - x.coalition_sum(s)
    }

    /// Excess of every coalition, in mask order.
    pub fn excess_vector(&self, x: &Allocation) -> Vec<Rational> {
        assert_eq!(x.len(), self.n, "allocation arity");
        x.all_coalition_sums()
            .into_iter()
            .zip(&self.values)
            .map(|(sum, v)| v - sum)
            .collect()
    }

    /// The indirect function `π(x) = max_S (v(S) - x(S))`, taken over all
    /// coalitions including `∅`, so it is never negative.
    pub fn indirect_function(&self, x: &Allocation) -> Rational {
        self.excess_vector(x)
            .into_iter()
            .max()
            .expect("game has at least the empty coalition")
    }

    /// `δ₁(x) = max_{k, S ⊆ N∖{k}} |v(S ∪ {k}) - v(S) - x_k|`, the transfer
    /// size beyond which maximum surpluses can be read off the indirect
    /// function.
    pub fn delta_one(&self, x: &Allocation) -> Rational {
        assert_eq!(x.len(), self.n, "allocation arity");
        let mut best = Rational::zero();
        for k in 0..self.n {
            for s in self.grand().without(k).subsets() {
                let d = (self.value(s.with(k)) - self.value(s) - &x[k]).abs();
                if d > best {
                    best = d;
                }
            }
        }
        best
    }

    pub fn is_efficient(&self, x: &Allocation) -> bool {
        x.total() == *self.grand_value()
    }

    /// `x_k >= v({k})` for all players and efficient.
    pub fn is_imputation(&self, x: &Allocation) -> bool {
        self.is_efficient(x) && (0..self.n).all(|k| x[k] >= *self.value(Coalition::singleton(k)))
    }

    /// Strategically equivalent game `t·v + m` where `m` is the additive game
    /// generated by the vector `shift`.
    pub fn affine_transform(&self, t: &Rational, shift: &[Rational]) -> TuGame {
        assert_eq!(shift.len(), self.n, "shift arity");
        let m = Allocation::new(shift.to_vec());
        let values = self
            .coalitions()
            .map(|s| t * self.value(s) + m.coalition_sum(s))
            .collect();
        TuGame::new_unrestricted(self.n, values).expect("same shape")
    }

    /// Relabels players: old player `k` becomes player `perm[k]`.
    pub fn permute(&self, perm: &[usize]) -> TuGame {
        assert_eq!(perm.len(), self.n, "permutation arity");
        let mut values = vec![Rational::zero(); self.values.len()];
        for s in self.coalitions() {
            let image = Coalition::from_players(s.players().map(|k| perm[k]));
            values[image.index()] = self.value(s).clone();
        }
        TuGame::new_unrestricted(self.n, values).expect("same shape")
    }

    /// Sum of two games on the same player set.
    pub fn add(&self, other: &TuGame) -> TuGame {
        assert_eq!(self.n, other.n, "player count");
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + b)
            .collect();
        TuGame::new_unrestricted(self.n, values).expect("same shape")
    }
}

impl fmt::Debug for TuGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for s in self.coalitions().skip(1) {
            if !self.value(s).is_zero() {
                m.entry(&s, &self.value(s).to_string());
            }
        }
        m.finish()
    }
}

/// A payoff vector. Efficiency is checked on demand, not enforced: the
/// pre-kernel iteration passes through inefficient points.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Allocation(Vec<Rational>);

impl Allocation {
    pub fn new(x: Vec<Rational>) -> Self {
        Allocation(x)
    }

    pub fn zeros(n: usize) -> Self {
        Allocation(vec![Rational::zero(); n])
    }

    /// `v(N)/n` to every player.
    pub fn equal_split(game: &TuGame) -> Self {
        let share = game.grand_value() / Rational::from_integer(game.n().into());
        Allocation(vec![share; game.n()])
    }

    pub fn into_vec(self) -> Vec<Rational> {
        self.0
    }

    /// `x(S) = Σ_{k∈S} x_k`; zero for the empty coalition.
    pub fn coalition_sum(&self, s: Coalition) -> Rational {
        s.players().map(|k| &self.0[k]).sum()
    }

    pub fn total(&self) -> Rational {
        self.0.iter().sum()
    }

    /// `x(S)` for all `2^n` coalitions, built incrementally over masks.
    pub fn all_coalition_sums(&self) -> Vec<Rational> {
        let n = self.0.len();
        let mut sums = Vec::with_capacity(1 << n);
        sums.push(Rational::zero());
        for mask in 1u32..1 << n {
            let low = mask.trailing_zeros() as usize;
            let rest = &sums[(mask & (mask - 1)) as usize];
            sums.push(rest + &self.0[low]);
        }
        sums
    }

    /// `x^{i,j,δ}`: moves `delta` from player `i` to player `j`.
    pub fn transfer(&self, i: usize, j: usize, delta: &Rational) -> Allocation {
        let mut y = self.clone();
        y.0[i] -= delta;
        y.0[j] += delta;
        y
    }

    pub fn restrict(&self, s: Coalition) -> Vec<Rational> {
        s.players().map(|k| self.0[k].clone()).collect()
    }
}

impl Deref for Allocation {
    type Target = [Rational];

    fn deref(&self) -> &[Rational] {
        &self.0
    }
}

impl Index<usize> for Allocation {
    type Output = Rational;

    fn index(&self, k: usize) -> &Rational {
        &self.0[k]
    }
}

impl From<Vec<Rational>> for Allocation {
    fn from(x: Vec<Rational>) -> Self {
        Allocation(x)
    }
}

impl fmt::Display for Allocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_vector(&self.0))
    }
}

impl fmt::Debug for Allocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::example_game;
    use crate::rational::{int, ratio};

    fn alloc(xs: &[(i64, i64)]) -> Allocation {
        Allocation::new(xs.iter().map(|&(p, q)| ratio(p, q)).collect())
    }

    fn c(ids: &[usize]) -> Coalition {
        Coalition::from_ids(ids.iter().copied())
    }

    #[test]
    fn coalition_sums() {
        let x = alloc(&[(10, 1), (0, 1), (0, 1), (0, 1)]);
        assert_eq!(x.coalition_sum(c(&[1])), int(10));
        assert_eq!(x.coalition_sum(Coalition::EMPTY), int(0));
        let nu = alloc(&[(5, 2), (7, 2), (2, 1), (2, 1)]);
        assert_eq!(nu.coalition_sum(Coalition::grand(4)), int(10));
    }

    #[test]
    fn excess_values_from_worked_example() {
        let v = example_game();
        let y0 = alloc(&[(10, 1), (0, 1), (0, 1), (0, 1)]);
        assert_eq!(v.excess(c(&[1]), &y0), int(-10));
        assert_eq!(v.excess(Coalition::EMPTY, &y0), int(0));
        let y1 = alloc(&[(128, 37), (98, 37), (91, 37), (60, 37)]);
        assert_eq!(v.excess(v.grand(), &y1), ratio(-7, 37));
    }

    #[test]
    fn excess_vector_of_y1_matches_printed_trace() {
        let v = example_game();
        let y1 = alloc(&[(128, 37), (98, 37), (91, 37), (60, 37)]);
        let printed = [
            0, -128, -98, -115, -91, -219, -78, -95, -60, -188, -158, -64, -151, -279, -138, -7,
        ];
        let expected: Vec<Rational> = printed.iter().map(|&p| ratio(p, 37)).collect();
        assert_eq!(v.excess_vector(&y1), expected);
    }

    #[test]
    fn excess_vector_of_y2_matches_printed_trace() {
        let v = example_game();
        let y2 = alloc(&[(329, 127), (423, 127), (255, 127), (279, 127)]);
        let printed = [
            0, -329, -423, -371, -255, -584, -297, -245, -279, -608, -702, -269, -534, -863, -576,
            -16,
        ];
        let expected: Vec<Rational> = printed.iter().map(|&p| ratio(p, 127)).collect();
        assert_eq!(v.excess_vector(&y2), expected);
    }

    #[test]
    fn least_core_level_at_nucleolus() {
        let v = example_game();
        let nu = alloc(&[(5, 2), (7, 2), (2, 1), (2, 1)]);
        let exc = v.excess_vector(&nu);
        let max_proper = exc[1..15].iter().max().unwrap();
        assert_eq!(*max_proper, int(-2));
    }

    #[test]
    fn zero_game_has_zero_excesses() {
        let v = TuGame::new_unrestricted(2, vec![int(0); 4]).unwrap();
        assert!(v
            .excess_vector(&Allocation::zeros(2))
            .iter()
            .all(Zero::is_zero));
        assert_eq!(v.indirect_function(&Allocation::zeros(2)), int(0));
        assert_eq!(v.delta_one(&Allocation::zeros(2)), int(0));
    }

    #[test]
    fn indirect_function_examples() {
        let v = example_game();
        let nu = alloc(&[(5, 2), (7, 2), (2, 1), (2, 1)]);
        assert_eq!(v.indirect_function(&nu), int(0));
        let y0 = alloc(&[(10, 1), (0, 1), (0, 1), (0, 1)]);
        // Brute force over all 16 coalitions: {2,3} and {2,3,4} reach 3.
        assert_eq!(v.indirect_function(&y0), int(3));
    }

    #[test]
    fn delta_one_examples() {
        let v = example_game();
        let y0 = alloc(&[(10, 1), (0, 1), (0, 1), (0, 1)]);
        assert_eq!(v.delta_one(&y0), int(10));
        // Independent brute force over (k, S ⊆ N∖{k}); the maximum is
        // |v(N) - v({1,3,4}) - 7/2| at k = 2.
        let nu = alloc(&[(5, 2), (7, 2), (2, 1), (2, 1)]);
        assert_eq!(v.delta_one(&nu), ratio(13, 2));
    }

    #[test]
    fn constructor_rejects_bad_games() {
        assert!(matches!(
            TuGame::new(2, vec![int(0), int(0), int(0), int(0)]),
            Err(GameError::NonPositiveGrand(_))
        ));
        assert!(matches!(
            TuGame::new(2, vec![int(1), int(0), int(0), int(3)]),
            Err(GameError::NonZeroEmpty(_))
        ));
        assert!(matches!(
            TuGame::new(2, vec![int(0); 3]),
            Err(GameError::ValueCount {
                expected: 4,
                got: 3
            })
        ));
        assert!(matches!(
            TuGame::new(0, vec![]),
            Err(GameError::PlayerCount(0))
        ));
    }

    #[test]
    fn permute_relabels_coalitions() {
        let v = example_game();
        // Swap players 1 and 2.
        let w = v.permute(&[1, 0, 2, 3]);
        assert_eq!(w.value(c(&[1, 3])), &int(3));
        assert_eq!(w.value(c(&[2, 3])), &int(0));
        assert_eq!(w.permute(&[1, 0, 2, 3]), v);
    }
}
