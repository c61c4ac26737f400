//! Reference games with known solutions.

use crate::coalition::Coalition;
use crate::game::TuGame;
use crate::rational::{int, parse_rational, Rational};

/// Four-player convex game with veto player 2:
/// `v({1,2}) = v({2,3}) = v({2,3,4}) = 3`, `v({1,2,3}) = v({1,2,4}) = 6`,
/// `v(N) = 10`, zero elsewhere. Its pre-nucleolus is `(5/2, 7/2, 2, 2)`.
pub fn example_game() -> TuGame {
    let entries = [
        (&[1, 2][..], 3),
        (&[2, 3], 3),
        (&[2, 3, 4], 3),
        (&[1, 2, 3], 6),
        (&[1, 2, 4], 6),
        (&[1, 2, 3, 4], 10),
    ];
    TuGame::from_entries(
        4,
        entries
            .iter()
            .map(|(ids, val)| (Coalition::from_ids(ids.iter().copied()), int(*val))),
    )
    .expect("valid game")
}

/// Worths for masks 1..=15 of ten games sharing the example game's
/// pre-kernel point `(5/2, 7/2, 2, 2)`. None of them is convex.
const REPLICATION_TABLE: [&str; 10] = [
    "-16/27 -39/46 272/107 1/45 -38/83 65/27 271/45 1/45 -33/79 -35/52 271/45 -3/37 -47/88 317/136 10",
    "-21/79 15/29 125/31 3/47 -28/95 216/79 285/47 3/47 -83/152 9/38 285/47 23/65 -7/57 93/32 10",
    "-21/52 7/52 381/143 -23/32 -50/31 135/52 169/32 -23/32 -96/95 -17/36 169/32 -79/68 -237/142 94/37 10",
    "-13/43 14/139 169/64 -9/52 15/74 116/43 303/52 -9/52 -61/45 29/53 303/52 -7/20 -6/7 91/29 10",
    "-13/43 14/139 169/64 -9/52 15/74 116/43 303/52 -9/52 13/90 -20/21 303/52 -7/20 9/14 95/58 10",
    "-13/43 14/139 169/64 -9/52 15/74 116/43 303/52 -9/52 13/90 29/53 303/52 -7/20 9/14 91/29 10",
    "-6/61 2/61 273/97 4/23 1/48 177/61 142/23 4/23 4/29 25/93 142/23 -81/89 -19/25 123/58 10",
    "-6/61 2/61 273/97 4/23 1/48 177/61 142/23 4/23 4/29 25/93 142/23 23/39 -19/25 105/292 10",
    "-6/61 2/61 273/97 4/23 1/48 177/61 142/23 4/23 4/29 25/93 142/23 23/39 37/50 123/58 10",
    "-6/61 2/61 273/97 4/23 1/48 177/61 142/23 4/23 4/29 25/93 142/23 23/39 37/50 105/29 10",
];

/// The ten related games `v₁ … v₁₀` with the same single-valued pre-kernel
/// as [`example_game`].
pub fn replication_games() -> Vec<TuGame> {
    REPLICATION_TABLE
        .iter()
        .map(|row| {
            let values: Vec<Rational> = std::iter::once(int(0))
                .chain(
                    row.split_whitespace()
                        .map(|t| parse_rational(t).expect("table entry")),
                )
                .collect();
            TuGame::new(4, values).expect("valid game")
        })
        .collect()
}

/// Pre-kernel (and pre-nucleolus) of [`example_game`].
pub fn example_nucleolus() -> Vec<Rational> {
    use crate::rational::ratio;
    vec![ratio(5, 2), ratio(7, 2), int(2), int(2)]
}
