//! Audit of the per-player reduced-game procedure for the nucleolus.
//!
//! For each player `i` the procedure repeatedly picks an essential
//! coalition `S` of the current game, keeps `S` if `i ∈ S` and its
//! complement otherwise, pays off the removed players and passes to a
//! reduced game on the survivors. When only `i` is left, its worth is read
//! off as `ν_i`. The payoffs of removed players are where the procedure is
//! underdetermined: they must be supplied, or are taken from an arbitrary
//! least-core point, and this module records every level where that choice
//! is not forced.

use thiserror::Error;

use crate::coalition::Coalition;
use crate::game::reduced::embed;
use crate::game::{is_convex, Allocation, GameError, ReducedGame, TuGame};
use crate::lp::{
    least_core, least_core_vertices, prenucleolus_lp_oracle, LeastCoreError, LeastCoreResult,
    DEFAULT_VERTEX_CAP,
};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RgpError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    LeastCore(#[from] LeastCoreError),
    #[error("keep {keep} and removed {removed} do not partition {n} players")]
    Partition {
        keep: Coalition,
        removed: Coalition,
        n: usize,
    },
    #[error("expected {expected} payoffs for removed players, got {got}")]
    RemovedPayoffs { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Essential {
    pub coalition: Coalition,
    pub epsilon: Rational,
    /// `false` when no coalition is tight on the whole least core and the
    /// choice fell back to a set tight at one witness.
    pub forced: bool,
    pub alternatives: Vec<Coalition>,
    pub least_core: LeastCoreResult,
}

/// First universally tight least-core coalition in coalition order.
pub fn essential_coalition(v: &TuGame) -> Result<Essential, RgpError> {
    let lc = least_core(v)?;
    let (alternatives, forced) = if lc.universally_tight.is_empty() {
        (lc.tight.clone(), false)
    } else {
        (lc.universally_tight.clone(), true)
    };
    Ok(Essential {
        coalition: alternatives[0],
        epsilon: lc.epsilon.clone(),
        forced,
        alternatives,
        least_core: lc,
    })
}

/// `v'(T) = max(v(T), v(T ∪ removed) - x(removed))` on `keep`, with
/// `v'(keep) = v(N) - x(removed)`. `x_removed` lists the removed players'
/// payoffs in ascending player order.
pub fn rgp_reduce(
    v: &TuGame,
    keep: Coalition,
    removed: Coalition,
    x_removed: &[Rational],
) -> Result<ReducedGame, RgpError> {
    let grand = v.grand();
    if keep.is_empty() || !keep.intersection(removed).is_empty() || keep.union(removed) != grand {
        return Err(RgpError::Partition {
            keep,
            removed,
            n: v.n(),
        });
    }
    if x_removed.len() != removed.len() {
        return Err(RgpError::RemovedPayoffs {
            expected: removed.len(),
            got: x_removed.len(),
        });
    }
    let paid: Rational = x_removed.iter().sum();
    let players: Vec<usize> = keep.players().collect();
    let m = players.len();
    let local_grand = Coalition::grand(m);
    let game = TuGame::new_unrestricted(
        m,
        Coalition::all(m)
            .map(|t| {
                if t.is_empty() {
                    Rational::from_integer(0.into())
                } else if t == local_grand {
                    v.grand_value() - &paid
                } else {
                    let orig = embed(t, &players);
                    let recruit = v.value(orig.union(removed)) - &paid;
                    v.value(orig).clone().max(recruit)
                }
            })
            .collect(),
    )?;
    Ok(ReducedGame { game, players })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    MatchesNucleolus,
    SelectionAmbiguous,
    Mismatch,
}

/// One shrinking step in the run for `player`. Coalitions use original
/// player labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelRecord {
    pub player: usize,
    pub level: usize,
    pub players: Coalition,
    pub epsilon: Rational,
    pub dimension: usize,
    pub chosen: Coalition,
    pub alternatives: Vec<Coalition>,
    pub forced: bool,
    pub removed: Coalition,
    pub removed_payoffs: Vec<Rational>,
    /// Positive-dimensional least core or unforced choice, with nothing
    /// supplied to pin the removed payoffs.
    pub ambiguous: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgpRun {
    pub per_player: Vec<Rational>,
    pub levels: Vec<LevelRecord>,
    pub nucleolus: Allocation,
    pub verdict: Verdict,
}

impl RgpRun {
    pub fn ambiguity_flags(&self) -> impl Iterator<Item = &LevelRecord> {
        self.levels.iter().filter(|l| l.ambiguous)
    }
}

/// Runs the procedure for every player in ascending order and compares the
/// outcome with the sequential-LP pre-nucleolus.
pub fn run_rgp_procedure(v: &TuGame, supplied: Option<&Allocation>) -> Result<RgpRun, RgpError> {
    if let Some(x) = supplied {
        v.check_allocation(x)?;
    }
    if !is_convex(v) {
        log::warn!("game is not convex; running the procedure for demonstration only");
    }
    let n = v.n();
    let mut per_player = Vec::with_capacity(n);
    let mut levels = Vec::new();
    for i in 0..n {
        let mut current = ReducedGame {
            game: v.clone(),
            players: (0..n).collect(),
        };
        let mut level = 0;
        while current.game.n() > 1 {
            let g = &current.game;
            let local_i = current
                .players
                .iter()
                .position(|&p| p == i)
                .expect("tracked player survives");
            let ess = essential_coalition(g)?;
            let keep = if ess.coalition.contains(local_i) {
                ess.coalition
            } else {
                g.grand().difference(ess.coalition)
            };
            let removed = g.grand().difference(keep);
            let removed_payoffs: Vec<Rational> = removed
                .players()
                .map(|k| match supplied {
                    Some(x) => x[current.players[k]].clone(),
                    None => ess.least_core.witness[k].clone(),
                })
                .collect();
            let dimension = ess.least_core.dimension();
            let to_orig = |s: Coalition| embed(s, &current.players);
            levels.push(LevelRecord {
                player: i,
                level,
                players: to_orig(g.grand()),
                epsilon: ess.epsilon.clone(),
                dimension,
                chosen: to_orig(ess.coalition),
                alternatives: ess.alternatives.iter().map(|&s| to_orig(s)).collect(),
                forced: ess.forced,
                removed: to_orig(removed),
                removed_payoffs: removed_payoffs.clone(),
                ambiguous: supplied.is_none() && (dimension > 0 || !ess.forced),
            });
            let reduced = rgp_reduce(g, keep, removed, &removed_payoffs)?;
            let players = reduced
                .players
                .iter()
                .map(|&k| current.players[k])
                .collect();
            current = ReducedGame {
                game: reduced.game,
                players,
            };
            level += 1;
        }
        per_player.push(current.game.grand_value().clone());
    }

    let nucleolus = prenucleolus_lp_oracle(v);
    let verdict = if levels.iter().any(|l| l.ambiguous) {
        Verdict::SelectionAmbiguous
    } else if per_player == *nucleolus {
        Verdict::MatchesNucleolus
    } else {
        Verdict::Mismatch
    };
    Ok(RgpRun {
        per_player,
        levels,
        nucleolus,
        verdict,
    })
}

/// Two full runs fed with distinct least-core vertices whose outcomes
/// differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmbiguityWitness {
    pub first: (Allocation, RgpRun),
    pub second: (Allocation, RgpRun),
}

/// Searches pairs of least-core vertices for two runs with different
/// per-player results. `None` when the least core has fewer than two
/// vertices or every pair agrees.
pub fn ambiguity_witness(v: &TuGame) -> Result<Option<AmbiguityWitness>, RgpError> {
    let vertices = least_core_vertices(v, DEFAULT_VERTEX_CAP)?;
    let runs: Vec<RgpRun> = vertices
        .iter()
        .map(|x| run_rgp_procedure(v, Some(x)))
        .collect::<Result<_, _>>()?;
    for a in 0..runs.len() {
        for b in a + 1..runs.len() {
            if runs[a].per_player != runs[b].per_player {
                return Ok(Some(AmbiguityWitness {
                    first: (vertices[a].clone(), runs[a].clone()),
                    second: (vertices[b].clone(), runs[b].clone()),
                }));
            }
        }
    }
    Ok(None)
}
