//! Coalitions as player bitmasks.
//!
//! Player `k` (0-based) is a member iff bit `k` is set. Players are printed
//! 1-based, so the mask `0b101` displays as `{1,3}`.

use std::cmp::Ordering;
use std::fmt;

/// Largest player count a [`Coalition`] mask can address.
pub const MAX_PLAYERS: usize = 24;

/// A subset of the player set, stored as a bitmask.
///
/// The [`Ord`] implementation is the total order used to break ties between
/// most effective coalitions: smaller cardinality first, then lexicographic
/// comparison of the ascending member lists (`{1,3} < {1,4} < {2,3}`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Coalition(u32);

impl Coalition {
    pub const EMPTY: Coalition = Coalition(0);

    pub const fn from_mask(mask: u32) -> Self {
        Coalition(mask)
    }

    /// The grand coalition on `n` players.
    pub fn grand(n: usize) -> Self {
        debug_assert!(n <= MAX_PLAYERS);
        Coalition(((1u64 << n) - 1) as u32)
    }

    pub fn singleton(player: usize) -> Self {
        Coalition(1 << player)
    }

    /// Builds a coalition from 0-based player indices.
    pub fn from_players<I: IntoIterator<Item = usize>>(players: I) -> Self {
        Coalition(players.into_iter().fold(0, |m, p| m | (1 << p)))
    }

    /// Builds a coalition from 1-based player ids, as written in the literature.
    pub fn from_ids<I: IntoIterator<Item = usize>>(ids: I) -> Self {
        Self::from_players(ids.into_iter().map(|id| id - 1))
    }

    pub const fn mask(self) -> u32 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, player: usize) -> bool {
        self.0 >> player & 1 == 1
    }

    pub fn is_subset_of(self, other: Coalition) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: Coalition) -> Coalition {
        Coalition(self.0 | other.0)
    }

    pub fn intersection(self, other: Coalition) -> Coalition {
        Coalition(self.0 & other.0)
    }

    pub fn difference(self, other: Coalition) -> Coalition {
        Coalition(self.0 & !other.0)
    }

    pub fn with(self, player: usize) -> Coalition {
        Coalition(self.0 | 1 << player)
    }

    pub fn without(self, player: usize) -> Coalition {
        Coalition(self.0 & !(1 << player))
    }

    /// Complement relative to the grand coalition on `n` players.
    pub fn complement(self, n: usize) -> Coalition {
        Coalition::grand(n).difference(self)
    }

    /// Ascending 0-based member indices.
    pub fn players(self) -> Players {
        Players(self.0)
    }

    /// Iterates every subset of `self`, including the empty set and `self`.
    pub fn subsets(self) -> Subsets {
        Subsets {
            universe: self.0,
            next: Some(0),
        }
    }

    /// All `2^n` coalitions on `n` players in mask order.
    pub fn all(n: usize) -> impl Iterator<Item = Coalition> {
        (0..1u32 << n).map(Coalition)
    }

    /// 0/1 characteristic vector of length `n`.
    pub fn indicator(self, n: usize) -> Vec<i32> {
        (0..n).map(|k| i32::from(self.contains(k))).collect()
    }
}

impl Ord for Coalition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            // Equal cardinality: the first differing member in the sorted
            // lists is the lowest bit of the symmetric difference.
            let diff = self.0 ^ other.0;
            if diff == 0 {
                Ordering::Equal
            } else if self.0 & (diff & diff.wrapping_neg()) != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }
}

impl PartialOrd for Coalition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.players().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", p + 1)?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Iterator over the members of a coalition.
#[derive(Clone)]
pub struct Players(u32);

impl Iterator for Players {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let p = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(p)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Players {}

/// Iterator over all subsets of a fixed mask, in increasing mask order.
pub struct Subsets {
    universe: u32,
    next: Option<u32>,
}

impl Iterator for Subsets {
    type Item = Coalition;

    fn next(&mut self) -> Option<Coalition> {
        let cur = self.next?;
        self.next = if cur == self.universe {
            None
        } else {
            // Standard submask increment.
            Some((cur.wrapping_sub(self.universe)) & self.universe)
        };
        Some(Coalition(cur))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(ids: &[usize]) -> Coalition {
        Coalition::from_ids(ids.iter().copied())
    }

    #[test]
    fn order_is_cardinality_then_lexicographic() {
        assert!(c(&[1, 3]) < c(&[1, 4]));
        assert!(c(&[1, 4]) < c(&[2, 3]));
        assert!(c(&[4]) < c(&[1, 2]));
        assert!(c(&[1, 2, 4]) < c(&[1, 3, 4]));
        assert_eq!(c(&[2, 3]).cmp(&c(&[2, 3])), Ordering::Equal);
    }

    #[test]
    fn order_matches_sorted_member_lists() {
        let n = 6;
        let all: Vec<Coalition> = Coalition::all(n).collect();
        for &a in &all {
            for &b in &all {
                let la: Vec<usize> = a.players().collect();
                let lb: Vec<usize> = b.players().collect();
                let expected = la.len().cmp(&lb.len()).then_with(|| la.cmp(&lb));
                assert_eq!(a.cmp(&b), expected, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn subsets_enumerates_every_submask_once() {
        let s = c(&[1, 3, 4]);
        let subs: Vec<u32> = s.subsets().map(Coalition::mask).collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.windows(2).all(|w| w[0] < w[1]));
        assert!(subs.iter().all(|&m| m & !s.mask() == 0));
        assert_eq!(Coalition::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn display_is_one_based() {
        assert_eq!(c(&[1, 3, 4]).to_string(), "{1,3,4}");
        assert_eq!(Coalition::EMPTY.to_string(), "{}");
        assert_eq!(Coalition::grand(4).mask(), 15);
    }
}
