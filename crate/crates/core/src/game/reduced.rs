//! Davis/Maschler reduced games.

use super::{Allocation, GameError, TuGame};
use crate::coalition::Coalition;
use crate::rational::Rational;

/// A game on a sub-population. `players[k]` is the original (0-based) index
/// of local player `k`; local order follows original order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedGame {
    pub game: TuGame,
    pub players: Vec<usize>,
}

impl ReducedGame {
    /// Maps a coalition of local players back to original player labels.
    pub fn embed(&self, local: Coalition) -> Coalition {
        embed(local, &self.players)
    }
}

pub(crate) fn embed(local: Coalition, players: &[usize]) -> Coalition {
    Coalition::from_players(local.players().map(|k| players[k]))
}

/// The Davis/Maschler reduced game on `s` at `x`:
///
/// - `v_{S,x}(∅) = 0`
/// - `v_{S,x}(S) = v(N) - x(N∖S)`
/// - `v_{S,x}(T) = max_{Q ⊆ N∖S} (v(T ∪ Q) - x(Q))` otherwise.
pub fn reduced_game(v: &TuGame, s: Coalition, x: &Allocation) -> Result<ReducedGame, GameError> {
    v.check_allocation(x)?;
    if s.is_empty() {
        return Err(GameError::EmptyCoalition);
    }
    if !s.is_subset_of(v.grand()) {
        return Err(GameError::InvalidCoalition(s));
    }
    let players: Vec<usize> = s.players().collect();
    let outside = v.grand().difference(s);
    let m = players.len();
    let local_grand = Coalition::grand(m);

    let mut values = Vec::with_capacity(1 << m);
    for local in Coalition::all(m) {
        let value = if local.is_empty() {
            Rational::from_integer(0.into())
        } else if local == local_grand {
            v.grand_value() - x.coalition_sum(outside)
        } else {
            let t = embed(local, &players);
            outside
                .subsets()
                .map(|q| v.value(t.union(q)) - x.coalition_sum(q))
                .max()
                .expect("at least the empty recruitment")
        };
        values.push(value);
    }
    let game = TuGame::new_unrestricted(m, values)?;
    Ok(ReducedGame { game, players })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::example_game;
    use crate::game::is_convex;
    use crate::rational::{int, ratio};

    fn nu() -> Allocation {
        Allocation::new(vec![ratio(5, 2), ratio(7, 2), int(2), int(2)])
    }

    #[test]
    fn two_player_reduction_at_nucleolus() {
        let v = example_game();
        let r = reduced_game(&v, Coalition::from_ids([1, 2]), &nu()).unwrap();
        assert_eq!(r.players, vec![0, 1]);
        assert_eq!(r.game.grand_value(), &int(6));
        assert_eq!(r.game.value(Coalition::from_ids([1])), &int(0));
        assert_eq!(r.game.value(Coalition::from_ids([2])), &int(1));
        assert!(is_convex(&r.game));
    }

    #[test]
    fn reducing_to_grand_coalition_is_identity() {
        let v = example_game();
        let x = Allocation::new(vec![int(1), int(2), int(3), int(4)]);
        let r = reduced_game(&v, v.grand(), &x).unwrap();
        assert_eq!(r.game, v);
    }

    #[test]
    fn reindexing_preserves_order() {
        let v = example_game();
        let r = reduced_game(&v, Coalition::from_ids([2, 4]), &nu()).unwrap();
        assert_eq!(r.players, vec![1, 3]);
        assert_eq!(r.embed(Coalition::from_ids([2])), Coalition::from_ids([4]));
        // v(N) - x({1,3}) = 10 - 9/2
        assert_eq!(r.game.grand_value(), &ratio(11, 2));
    }

    #[test]
    fn rejects_empty_coalition() {
        let v = example_game();
        assert_eq!(
            reduced_game(&v, Coalition::EMPTY, &nu()),
            Err(GameError::EmptyCoalition)
        );
    }
}
