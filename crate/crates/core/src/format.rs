//! The `.csg` game text format.
//!
//! ```text
//! # optional comments
//! n=3
//! 110
//! 101
//! ```
//!
//! The first non-comment line is `n=<voters>`, followed by one shift-minimal
//! winning coalition per line in decreasing lexicographic order. Several
//! games may share a file when separated by blank lines.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::coalition::Coalition;
use crate::error::{FormatError, GameError};
use crate::game::CompleteGame;

/// Renders one game record (without a trailing blank line).
pub fn write_game(game: &CompleteGame) -> String {
    let mut out = String::new();
    writeln!(out, "n={}", game.n()).unwrap();
    for c in game.min_winning() {
        writeln!(out, "{c}").unwrap();
    }
    out
}

/// Parses exactly one game.
pub fn parse_game(text: &str) -> Result<CompleteGame, FormatError> {
    let mut games = parse_games(text)?;
    match games.len() {
        1 => Ok(games.pop().unwrap()),
        0 => Err(FormatError::Malformed {
            line: text.lines().count().max(1),
            message: "no game found".into(),
        }),
        _ => Err(FormatError::Malformed {
            line: 1,
            message: format!("expected one game, found {}", games.len()),
        }),
    }
}

pub fn parse_game_file(path: &Path) -> Result<CompleteGame, FormatError> {
    let text = fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_game(&text)
}

struct Pending {
    n: usize,
    header_line: usize,
    rows: Vec<(usize, Coalition)>,
}

/// Parses a blank-line separated sequence of games.
pub fn parse_games(text: &str) -> Result<Vec<CompleteGame>, FormatError> {
    let mut games = Vec::new();
    let mut pending: Option<Pending> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.starts_with('#') {
            continue;
        }
        if line.is_empty() {
            if let Some(p) = pending.take() {
                games.push(finish(p)?);
            }
            continue;
        }
        match &mut pending {
            None => {
                let n = line
                    .strip_prefix("n=")
                    .and_then(|v| v.trim().parse::<usize>().ok())
                    .ok_or_else(|| FormatError::Malformed {
                        line: line_no,
                        message: format!("expected `n=<voters>`, found {line:?}"),
                    })?;
                crate::coalition::check_voters(n).map_err(|e| FormatError::Malformed {
                    line: line_no,
                    message: e.to_string(),
                })?;
                pending = Some(Pending {
                    n,
                    header_line: line_no,
                    rows: Vec::new(),
                });
            }
            Some(p) => {
                if line.len() != p.n {
                    return Err(FormatError::Malformed {
                        line: line_no,
                        message: format!("coalition {line:?} has length {}, expected {}", line.len(), p.n),
                    });
                }
                let c: Coalition = line.parse().map_err(|e: GameError| FormatError::Malformed {
                    line: line_no,
                    message: e.to_string(),
                })?;
                if c.is_empty() {
                    return Err(FormatError::Malformed {
                        line: line_no,
                        message: "the empty coalition cannot be minimal winning".into(),
                    });
                }
                if let Some(&(_, prev)) = p.rows.last() {
                    if prev <= c {
                        return Err(FormatError::Ordering {
                            line: line_no,
                            prev,
                            next: c,
                        });
                    }
                }
                for &(_, earlier) in &p.rows {
                    if c.shift_le(earlier) {
                        return Err(FormatError::Antichain {
                            line: line_no,
                            source: GameError::NotAntichain {
                                lower: c,
                                upper: earlier,
                            },
                        });
                    }
                    if earlier.shift_le(c) {
                        return Err(FormatError::Antichain {
                            line: line_no,
                            source: GameError::NotAntichain {
                                lower: earlier,
                                upper: c,
                            },
                        });
                    }
                }
                p.rows.push((line_no, c));
            }
        }
    }
    if let Some(p) = pending.take() {
        games.push(finish(p)?);
    }
    Ok(games)
}

fn finish(p: Pending) -> Result<CompleteGame, FormatError> {
    if p.rows.is_empty() {
        return Err(FormatError::Malformed {
            line: p.header_line,
            message: "a game needs at least one minimal winning coalition".into(),
        });
    }
    Ok(CompleteGame::new(p.n, p.rows.into_iter().map(|(_, c)| c).collect())?)
}
