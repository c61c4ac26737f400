//! Maximum surpluses and the lexicographically smallest most effective
//! coalitions.
//!
//! For an ordered pair `(i, j)` the maximum surplus `s_ij(x)` is the largest
//! excess over coalitions containing `i` but not `j`. The coalitions that
//! attain it are the most effective ones for `(i, j)`; among them the
//! selection keeps the smallest under [`Coalition`]'s total order
//! (cardinality first, then lexicographic). Two allocations whose selections
//! agree on every ordered pair lie in the same payoff equivalence class.

use std::fmt;

use crate::coalition::Coalition;
use crate::game::{Allocation, TuGame};
use crate::rational::Rational;

/// The fixed ordering of ordered player pairs: `(i, j)` with `i < j` in
/// row-major order, then the reversed pairs `(2,1), (3,1), (3,2), (4,1), …`.
pub fn pair_order(n: usize) -> Vec<(usize, usize)> {
    let forward = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
    let backward = (1..n).flat_map(|i| (0..i).map(move |j| (i, j)));
    forward.chain(backward).collect()
}

/// Unordered pairs `i < j` in row-major order.
pub fn unordered_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

/// `s[i][j] = s_ij(x, v)`; the diagonal is zero and carries no meaning.
#[derive(Clone, PartialEq, Eq)]
pub struct SurplusMatrix {
    n: usize,
    entries: Vec<Rational>,
}

impl SurplusMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        self.entries
            .chunks(self.n)
            .map(<[Rational]>::to_vec)
            .collect()
    }

    /// `s_ij = s_ji` for every pair.
    pub fn is_balanced(&self) -> bool {
        unordered_pairs(self.n).all(|(i, j)| self.get(i, j) == self.get(j, i))
    }
}

impl fmt::Debug for SurplusMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.entries.chunks(self.n) {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Per-pair sweep result: the maximum excess and the smallest coalition
/// attaining it.
struct PairBest {
    surplus: Rational,
    coalition: Coalition,
}

/// One pass over all coalitions, updating every admissible `(i, j)` cell.
fn sweep(v: &TuGame, x: &Allocation) -> Vec<Option<PairBest>> {
    let n = v.n();
    assert!(n >= 2, "maximum surpluses need at least two players");
    let excesses = v.excess_vector(x);
    let mut best: Vec<Option<PairBest>> = (0..n * n).map(|_| None).collect();
    let grand = v.grand();
    // Coalitions containing i but not j are nonempty and never N.
    for s in v.proper_coalitions() {
        let e = &excesses[s.index()];
        let outside = grand.difference(s);
        for i in s.players() {
            for j in outside.players() {
                let cell = &mut best[i * n + j];
                let replace = match cell {
                    None => true,
                    Some(b) => *e > b.surplus || (*e == b.surplus && s < b.coalition),
                };
                if replace {
                    *cell = Some(PairBest {
                        surplus: e.clone(),
                        coalition: s,
                    });
                }
            }
        }
    }
    best
}

pub fn surplus_matrix(v: &TuGame, x: &Allocation) -> SurplusMatrix {
    let n = v.n();
    let entries = sweep(v, x)
        .into_iter()
        .map(|b| b.map_or_else(|| Rational::from_integer(0.into()), |b| b.surplus))
        .collect();
    SurplusMatrix { n, entries }
}

/// All coalitions in `𝒢_ij` whose excess equals `s_ij(x)`, ascending by the
/// coalition order.
pub fn most_effective(v: &TuGame, x: &Allocation, i: usize, j: usize) -> Vec<Coalition> {
    assert!(
        i != j && i < v.n() && j < v.n(),
        "need two distinct players"
    );
    let excesses = v.excess_vector(x);
    let admissible: Vec<Coalition> = v
        .coalitions()
        .filter(|s| s.contains(i) && !s.contains(j))
        .collect();
    let max = admissible
        .iter()
        .map(|s| &excesses[s.index()])
        .max()
        .expect("𝒢_ij is nonempty");
    let mut result: Vec<Coalition> = admissible
        .iter()
        .copied()
        .filter(|s| excesses[s.index()] == *max)
        .collect();
    result.sort();
    result
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SelectedPair {
    pub i: usize,
    pub j: usize,
    pub coalition: Coalition,
}

/// The selection `𝒮(x)`: one coalition per ordered pair, in [`pair_order`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PairSelection {
    n: usize,
    pairs: Vec<SelectedPair>,
}

impl PairSelection {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> &[SelectedPair] {
        &self.pairs
    }

    /// `S_ij` for the ordered pair `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> Coalition {
        assert!(i != j);
        // Forward pairs come first, then the reversed block.
        let n = self.n;
        let idx = if i < j {
            i * n - i * (i + 1) / 2 + (j - i - 1)
        } else {
            n * (n - 1) / 2 + i * (i - 1) / 2 + j
        };
        let p = &self.pairs[idx];
        debug_assert_eq!((p.i, p.j), (i, j));
        p.coalition
    }

    /// Selected coalitions in pair order (with repetitions).
    pub fn coalitions(&self) -> Vec<Coalition> {
        self.pairs.iter().map(|p| p.coalition).collect()
    }

    /// Distinct selected coalitions, ascending by the coalition order.
    pub fn distinct(&self) -> Vec<Coalition> {
        let mut set = self.coalitions();
        set.sort();
        set.dedup();
        set
    }
}

impl fmt::Display for PairSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs.iter().map(|p| p.coalition.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Computes `𝒮(x)`: for each ordered pair, the most effective coalitions of
/// minimum cardinality, then the lexicographic minimum among those.
pub fn lex_selection(v: &TuGame, x: &Allocation) -> PairSelection {
    let n = v.n();
    let best = sweep(v, x);
    let pairs = pair_order(n)
        .into_iter()
        .map(|(i, j)| SelectedPair {
            i,
            j,
            coalition: best[i * n + j].as_ref().expect("admissible pair").coalition,
        })
        .collect();
    PairSelection { n, pairs }
}

/// Same payoff equivalence class: the selections agree pair by pair.
pub fn same_class(a: &PairSelection, b: &PairSelection) -> bool {
    assert_eq!(a.n, b.n, "selections over different player sets");
    a.pairs == b.pairs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::example_game;
    use crate::rational::{int, ratio};

    fn c(ids: &[usize]) -> Coalition {
        Coalition::from_ids(ids.iter().copied())
    }

    fn y0() -> Allocation {
        Allocation::new(vec![int(10), int(0), int(0), int(0)])
    }

    fn nu() -> Allocation {
        Allocation::new(vec![ratio(5, 2), ratio(7, 2), int(2), int(2)])
    }

    #[test]
    fn pair_order_matches_printed_listing() {
        let one_based: Vec<(usize, usize)> = pair_order(4)
            .into_iter()
            .map(|(i, j)| (i + 1, j + 1))
            .collect();
        assert_eq!(
            one_based,
            vec![
                (1, 2),
                (1, 3),
                (1, 4),
                (2, 3),
                (2, 4),
                (3, 4),
                (2, 1),
                (3, 1),
                (3, 2),
                (4, 1),
                (4, 2),
                (4, 3)
            ]
        );
    }

    #[test]
    fn surplus_matrix_at_nucleolus() {
        let s = surplus_matrix(&example_game(), &nu());
        for i in 0..4 {
            for j in 0..4 {
                let expected = match (i, j) {
                    _ if i == j => int(0),
                    (0, 1) | (1, 0) => ratio(-5, 2),
                    _ => int(-2),
                };
                assert_eq!(s.get(i, j), &expected, "s_{}{}", i + 1, j + 1);
            }
        }
        assert!(s.is_balanced());
    }

    #[test]
    fn surplus_at_starting_point() {
        let s = surplus_matrix(&example_game(), &y0());
        assert_eq!(s.get(0, 1), &int(-10));
        assert!(!s.is_balanced());
    }

    #[test]
    fn zero_two_player_game() {
        let v = TuGame::new_unrestricted(2, vec![int(0); 4]).unwrap();
        let x = Allocation::zeros(2);
        let s = surplus_matrix(&v, &x);
        assert_eq!(s.get(0, 1), &int(0));
        assert_eq!(s.get(1, 0), &int(0));
        assert_eq!(most_effective(&v, &x, 0, 1), vec![c(&[1])]);
    }

    #[test]
    fn most_effective_for_pair_one_two() {
        let me = most_effective(&example_game(), &y0(), 0, 1);
        assert_eq!(me, vec![c(&[1]), c(&[1, 3]), c(&[1, 4]), c(&[1, 3, 4])]);
        let rev = most_effective(&example_game(), &y0(), 1, 0);
        assert!(rev.contains(&c(&[2, 3])));
    }

    #[test]
    fn selection_at_starting_point_matches_listing() {
        let sel = lex_selection(&example_game(), &y0());
        let expected: Vec<Coalition> = [
            &[1][..],
            &[1, 2, 4],
            &[1, 2, 3],
            &[2],
            &[2, 3],
            &[2, 3],
            &[2, 3],
            &[2, 3],
            &[3],
            &[2, 3, 4],
            &[4],
            &[4],
        ]
        .iter()
        .map(|ids| c(ids))
        .collect();
        assert_eq!(sel.coalitions(), expected);
        assert_eq!(sel.get(0, 1), c(&[1]));
        assert_eq!(sel.get(3, 0), c(&[2, 3, 4]));
    }

    #[test]
    fn hypothetical_without_singleton_picks_one_three() {
        // Lower the worth of {1} so its excess at y0 drops below -10.
        let v = example_game();
        let mut values = v.values().to_vec();
        values[c(&[1]).index()] = int(-1);
        let w = TuGame::new(4, values).unwrap();
        let me = most_effective(&w, &y0(), 0, 1);
        assert_eq!(me, vec![c(&[1, 3]), c(&[1, 4]), c(&[1, 3, 4])]);
        assert_eq!(lex_selection(&w, &y0()).get(0, 1), c(&[1, 3]));
    }

    #[test]
    fn selection_at_nucleolus_covers_expected_collection() {
        let sel = lex_selection(&example_game(), &nu());
        let expected = vec![
            c(&[1]),
            c(&[3]),
            c(&[4]),
            c(&[2, 3]),
            c(&[1, 2, 3]),
            c(&[1, 2, 4]),
        ];
        assert_eq!(sel.distinct(), expected);
    }

    #[test]
    fn class_membership() {
        let v = example_game();
        let a = lex_selection(&v, &y0());
        assert!(same_class(&a, &a.clone()));
        let y1 = Allocation::new(vec![
            ratio(128, 37),
            ratio(98, 37),
            ratio(91, 37),
            ratio(60, 37),
        ]);
        assert!(!same_class(&a, &lex_selection(&v, &y1)));
        // Away from ties, small zero-sum perturbations keep the class.
        let base = lex_selection(&v, &y1);
        let eps = ratio(1, 1000);
        for z in [[1, -1, 0, 0], [0, 1, -1, 0], [1, 1, -1, -1], [-3, 1, 1, 1]] {
            let moved: Vec<Rational> = y1.iter().zip(z).map(|(a, d)| a + &eps * int(d)).collect();
            let sel = lex_selection(&v, &Allocation::new(moved));
            assert!(same_class(&base, &sel), "perturbation {z:?}");
        }
    }
}
