#![allow(dead_code)]

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tugame::rational::ratio;
use tugame::{Allocation, Coalition, Rational, TuGame};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rational<R: Rng>(rng: &mut R, lo: i64, hi: i64) -> Rational {
    let q = rng.gen_range(1..=4);
    ratio(rng.gen_range(lo * q..=hi * q), q)
}

/// Convex game from Harsanyi dividends: nonnegative on coalitions of size
/// two or more, arbitrary on singletons.
pub fn random_convex_game<R: Rng>(rng: &mut R, n: usize) -> TuGame {
    let mut dividends = vec![Rational::from_integer(0.into()); 1 << n];
    for s in Coalition::all(n).skip(1) {
        dividends[s.index()] = if s.len() == 1 {
            small_rational(rng, -3, 3)
        } else if rng.gen_bool(0.6) {
            small_rational(rng, 0, 6)
        } else {
            Rational::from_integer(0.into())
        };
    }
    let total: Rational = dividends.iter().sum();
    if !total.is_positive() {
        let pair = Coalition::from_players([0, 1]);
        dividends[pair.index()] += -total + Rational::from_integer(1.into());
    }
    TuGame::from_fn(n, |s| {
        s.subsets().map(|t| dividends[t.index()].clone()).sum()
    })
    .expect("positive grand value")
}

/// Arbitrary game with positive `v(N)`.
pub fn random_game<R: Rng>(rng: &mut R, n: usize) -> TuGame {
    let grand = Coalition::grand(n);
    TuGame::from_fn(n, |s| {
        if s.is_empty() {
            Rational::from_integer(0.into())
        } else if s == grand {
            small_rational(rng, 1, 12)
        } else {
            small_rational(rng, -4, 8)
        }
    })
    .expect("valid game")
}

pub fn random_allocation<R: Rng>(rng: &mut R, n: usize) -> Allocation {
    Allocation::new((0..n).map(|_| small_rational(rng, -5, 8)).collect())
}

/// Additive shift vector.
pub fn random_measure<R: Rng>(rng: &mut R, n: usize) -> Vec<Rational> {
    (0..n).map(|_| small_rational(rng, -6, 6)).collect()
}

pub fn random_scale<R: Rng>(rng: &mut R) -> Rational {
    ratio(rng.gen_range(1..=9), rng.gen_range(1..=5))
}

pub mod strategies {
    use num_traits::Signed;
    use proptest::collection::vec;
    use proptest::prelude::*;
    use tugame::rational::ratio;
    use tugame::{Allocation, Coalition, Rational, TuGame};

    pub fn rational(lo: i64, hi: i64) -> impl Strategy<Value = Rational> {
        (1i64..=4).prop_flat_map(move |q| (lo * q..=hi * q).prop_map(move |p| ratio(p, q)))
    }

    /// Arbitrary game with positive `v(N)` on `n` players.
    pub fn game(n: impl Strategy<Value = usize>) -> impl Strategy<Value = TuGame> {
        n.prop_flat_map(|n| {
            (vec(rational(-4, 8), (1 << n) - 2), rational(1, 12)).prop_map(move |(inner, grand)| {
                let mut values = vec![Rational::from_integer(0.into())];
                values.extend(inner);
                values.push(grand);
                TuGame::new(n, values).expect("valid game")
            })
        })
    }

    /// Convex game from Harsanyi dividends, nonnegative beyond singletons.
    pub fn convex_game(n: impl Strategy<Value = usize>) -> impl Strategy<Value = TuGame> {
        n.prop_flat_map(|n| {
            let larger = (1usize << n) - 1 - n;
            let dividend =
                prop_oneof![3 => rational(0, 6), 2 => Just(Rational::from_integer(0.into()))];
            (vec(rational(-3, 3), n), vec(dividend, larger)).prop_map(move |(singles, rest)| {
                let mut d = vec![Rational::from_integer(0.into()); 1 << n];
                let mut rest = rest.into_iter();
                for s in Coalition::all(n).skip(1) {
                    d[s.index()] = if s.len() == 1 {
                        singles[s.players().next().unwrap()].clone()
                    } else {
                        rest.next().unwrap()
                    };
                }
                let total: Rational = d.iter().sum();
                if !total.is_positive() {
                    let pair = Coalition::from_players([0, 1]);
                    d[pair.index()] += -total + Rational::from_integer(1.into());
                }
                TuGame::from_fn(n, |s| s.subsets().map(|t| d[t.index()].clone()).sum())
                    .expect("positive grand value")
            })
        })
    }

    pub fn allocation(n: usize) -> impl Strategy<Value = Allocation> {
        vec(rational(-5, 8), n).prop_map(Allocation::new)
    }

    pub fn game_and_allocation(
        game: impl Strategy<Value = TuGame>,
    ) -> impl Strategy<Value = (TuGame, Allocation)> {
        game.prop_flat_map(|v| {
            let n = v.n();
            (Just(v), allocation(n))
        })
    }

    /// Positive scale and additive shift for an `n`-player game.
    pub fn affine(n: usize) -> impl Strategy<Value = (Rational, Vec<Rational>)> {
        (
            (1i64..=9, 1i64..=5).prop_map(|(p, q)| ratio(p, q)),
            vec(rational(-6, 6), n),
        )
    }
}
