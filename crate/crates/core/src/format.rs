//! Plain-text game files.
//!
//! ```text
//! # comment
//! players 3
//! 1,2   1
//! m:5   1/2
//! 1,2,3 2
//! ```
//!
//! A `players <n>` header, then one coalition per line given either as
//! 1-based member ids or as `m:<mask>`, followed by its worth. Omitted
//! coalitions are worth 0. `v(N)` must be listed and positive.

use std::collections::HashMap;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::coalition::{Coalition, MAX_PLAYERS};
use crate::game::{GameError, TuGame};
use crate::rational::{format_rational, parse_rational, ParseRationalError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("missing `players <n>` header")]
    MissingHeader,
    #[error("line {line}: expected `players <n>`, found `{text}`")]
    BadHeader { line: usize, text: String },
    #[error("line {line}: player count {n} outside 1..={max}")]
    PlayerCount { line: usize, n: usize, max: usize },
    #[error("line {line}: expected `<coalition> <worth>`")]
    BadEntry { line: usize },
    #[error("line {line}: {source}")]
    Coalition {
        line: usize,
        source: CoalitionParseError,
    },
    #[error("line {line}: the empty coalition is always worth 0")]
    EmptyCoalition { line: usize },
    #[error("line {line}: coalition {coalition} already given on line {first}")]
    Duplicate {
        line: usize,
        first: usize,
        coalition: Coalition,
    },
    #[error("line {line}: {source}")]
    Value {
        line: usize,
        source: ParseRationalError,
    },
    #[error("grand coalition value required and positive: v(N) must be listed")]
    MissingGrand,
    #[error("grand coalition value required and positive: got v(N) = {0}")]
    NonPositiveGrand(String),
    #[error(transparent)]
    Game(#[from] GameError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoalitionParseError {
    #[error("malformed coalition `{0}`")]
    Malformed(String),
    #[error("player {id} outside 1..={n}")]
    OutOfRange { id: usize, n: usize },
    #[error("player {0} listed twice")]
    Repeated(usize),
    #[error("mask {mask} has bits beyond {n} players")]
    MaskRange { mask: u64, n: usize },
}

/// Parses `1,3,4`, `{1,3,4}`, `{}` or `m:<mask>` for an `n`-player game.
pub fn parse_coalition(token: &str, n: usize) -> Result<Coalition, CoalitionParseError> {
    let malformed = || CoalitionParseError::Malformed(token.to_string());
    if let Some(mask) = token.strip_prefix("m:") {
        let mask: u64 = mask.parse().map_err(|_| malformed())?;
        if mask >> n != 0 {
            return Err(CoalitionParseError::MaskRange { mask, n });
        }
        return Ok(Coalition::from_mask(mask as u32));
    }
    let inner = match token.strip_prefix('{') {
        Some(rest) => rest.strip_suffix('}').ok_or_else(malformed)?,
        None => token,
    };
    let mut s = Coalition::EMPTY;
    if inner.is_empty() {
        return if token.starts_with('{') {
            Ok(s)
        } else {
            Err(malformed())
        };
    }
    for part in inner.split(',') {
        let id: usize = part.trim().parse().map_err(|_| malformed())?;
        if id == 0 || id > n {
            return Err(CoalitionParseError::OutOfRange { id, n });
        }
        if s.contains(id - 1) {
            return Err(CoalitionParseError::Repeated(id));
        }
        s = s.with(id - 1);
    }
    Ok(s)
}

/// Parses game-file text, refusing more than `max_n` players.
pub fn parse_game(text: &str, max_n: usize) -> Result<TuGame, FormatError> {
    let max_n = max_n.min(MAX_PLAYERS);
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header) = lines.next().ok_or(FormatError::MissingHeader)?;
    let n = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["players", count] => count.parse::<usize>().map_err(|_| FormatError::BadHeader {
            line: header_line,
            text: header.to_string(),
        })?,
        _ => {
            return Err(FormatError::BadHeader {
                line: header_line,
                text: header.to_string(),
            })
        }
    };
    if n == 0 || n > max_n {
        return Err(FormatError::PlayerCount {
            line: header_line,
            n,
            max: max_n,
        });
    }

    let mut values = vec![Rational::zero(); 1 << n];
    let mut seen: HashMap<Coalition, usize> = HashMap::new();
    for (line, text) in lines {
        let [coalition, worth] = text.split_whitespace().collect::<Vec<_>>()[..] else {
            return Err(FormatError::BadEntry { line });
        };
        let s = parse_coalition(coalition, n)
            .map_err(|source| FormatError::Coalition { line, source })?;
        if s.is_empty() {
            return Err(FormatError::EmptyCoalition { line });
        }
        if let Some(&first) = seen.get(&s) {
            return Err(FormatError::Duplicate {
                line,
                first,
                coalition: s,
            });
        }
        seen.insert(s, line);
        values[s.index()] =
            parse_rational(worth).map_err(|source| FormatError::Value { line, source })?;
    }
    let grand = Coalition::grand(n);
    if !seen.contains_key(&grand) {
        return Err(FormatError::MissingGrand);
    }
    if !values[grand.index()].is_positive() {
        return Err(FormatError::NonPositiveGrand(format_rational(
            &values[grand.index()],
        )));
    }
    Ok(TuGame::new(n, values)?)
}

/// Canonical text: header, then every nonzero coalition in mask order plus
/// the grand coalition.
pub fn serialize_game(v: &TuGame) -> String {
    let mut out = format!("players {}\n", v.n());
    for s in v.coalitions().skip(1) {
        let worth = v.value(s);
        if worth.is_zero() && s != v.grand() {
            continue;
        }
        let ids: Vec<String> = s.players().map(|k| (k + 1).to_string()).collect();
        out.push_str(&format!("{} {}\n", ids.join(","), format_rational(worth)));
    }
    out
}

/// Comma-separated rationals, e.g. `10,0,5/2`.
pub fn parse_vector(text: &str) -> Result<Vec<Rational>, ParseRationalError> {
    text.split(',').map(|t| parse_rational(t.trim())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::example_game;
    use crate::rational::{int, ratio};

    const EXAMPLE: &str = "\
# four players, veto player 2
players 4
1,2     3
2,3     3
2,3,4   3
1,2,3   6
1,2,4   6
1,2,3,4 10
";

    #[test]
    fn parses_example() {
        assert_eq!(parse_game(EXAMPLE, 12).unwrap(), example_game());
    }

    #[test]
    fn round_trip_is_canonical() {
        let v = example_game();
        let text = serialize_game(&v);
        assert_eq!(parse_game(&text, 12).unwrap(), v);
        assert_eq!(serialize_game(&parse_game(EXAMPLE, 12).unwrap()), text);
        assert!(text.starts_with("players 4\n1,2 3\n"));
    }

    #[test]
    fn masks_and_fractions() {
        // Denominators carry no sign.
        assert!(parse_game("players 3\nm:7 -4/-2\n", 12).is_err());
        let v = parse_game("players 3\nm:3 1/2\n{1,2,3} 2\n", 12).unwrap();
        assert_eq!(v.value(Coalition::from_ids([1, 2])), &ratio(1, 2));
        assert_eq!(v.grand_value(), &int(2));
    }

    #[test]
    fn missing_grand_value() {
        let err = parse_game("players 2\n1 1\n", 12).unwrap_err();
        assert_eq!(err, FormatError::MissingGrand);
        assert!(err
            .to_string()
            .contains("grand coalition value required and positive"));
        let err = parse_game("players 2\n1,2 0\n", 12).unwrap_err();
        assert!(matches!(err, FormatError::NonPositiveGrand(_)));
    }

    #[test]
    fn duplicate_line_is_reported() {
        let err = parse_game("players 2\n1,2 3\n\n2,1 4\n", 12).unwrap_err();
        assert_eq!(
            err,
            FormatError::Duplicate {
                line: 4,
                first: 2,
                coalition: Coalition::grand(2)
            }
        );
    }

    #[test]
    fn other_errors() {
        assert_eq!(
            parse_game("# nothing\n", 12),
            Err(FormatError::MissingHeader)
        );
        assert!(matches!(
            parse_game("players 13\n", 12),
            Err(FormatError::PlayerCount { n: 13, .. })
        ));
        assert!(matches!(
            parse_game("players 2\n3 1\n", 12),
            Err(FormatError::Coalition { line: 2, .. })
        ));
        assert!(matches!(
            parse_game("players 2\n{} 1\n", 12),
            Err(FormatError::EmptyCoalition { line: 2 })
        ));
        assert!(matches!(
            parse_game("players 2\n1,2 x\n", 12),
            Err(FormatError::Value { line: 2, .. })
        ));
        assert!(matches!(
            parse_game("players 2\n1,2\n", 12),
            Err(FormatError::BadEntry { line: 2 })
        ));
    }

    #[test]
    fn coalition_tokens() {
        assert_eq!(parse_coalition("1,3", 4), Ok(Coalition::from_ids([1, 3])));
        assert_eq!(parse_coalition("{2}", 4), Ok(Coalition::from_ids([2])));
        assert_eq!(parse_coalition("m:10", 4), Ok(Coalition::from_ids([2, 4])));
        assert!(parse_coalition("m:16", 4).is_err());
        assert!(parse_coalition("1,1", 4).is_err());
        assert!(parse_coalition("", 4).is_err());
    }

    #[test]
    fn vectors() {
        assert_eq!(
            parse_vector("10, 0,5/2").unwrap(),
            vec![int(10), int(0), ratio(5, 2)]
        );
        assert!(parse_vector("1,,2").is_err());
    }
}
