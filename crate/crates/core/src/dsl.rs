// Copyright 2026 The aqss Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Text formats for access structures.
//!
//! Line-oriented DSL (`#` starts a comment):
//!
//! ```text
//! players: Alice Bob Carol      # optional
//! structure: Alice Bob, Bob Carol
//! ```
//!
//! Without a `players:` line, and when every token is made of uppercase ASCII
//! letters only, each letter is one player: `structure: ABC, BD, EFG`.
//!
//! A JSON document `{"players": [...], "structure": [[...], ...]}` is accepted
//! as well; `players` is optional there too.

use serde::Deserialize;

use crate::access::{AccessStructure, PlayerId, PlayerSet};
use crate::error::{Error, Result};

/// Parses either the line DSL or the JSON form (detected by a leading `{`).
pub fn parse_access_structure(text: &str) -> Result<AccessStructure> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_dsl(text)
    }
}

struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn tokens(body: &str, line: usize, offset: usize) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in body.char_indices().chain(std::iter::once((body.len(), ' '))) {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push(Token {
                    text: &body[s..i],
                    line,
                    column: offset + body[..s].chars().count() + 1,
                });
                start = None;
            }
            _ => {}
        }
    }
    out
}

fn parse_dsl(text: &str) -> Result<AccessStructure> {
    let mut players: Option<Vec<Token<'_>>> = None;
    let mut structure: Option<Vec<Vec<Token<'_>>>> = None;
    let mut last_line = 1;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let indent = content.chars().count() - trimmed.chars().count();
        let (keyword, rest) = match trimmed.split_once(':') {
            Some(pair) => pair,
            None => return Err(syntax(line_no, indent + 1, "expected `players:` or `structure:`")),
        };
        let body_col = indent + keyword.chars().count() + 1;
        match keyword.trim() {
            "players" => {
                if structure.is_some() {
                    return Err(syntax(line_no, indent + 1, "`players:` must precede `structure:`"));
                }
                if players.is_some() {
                    return Err(syntax(line_no, indent + 1, "duplicate `players:` line"));
                }
                let toks = tokens(rest, line_no, body_col);
                if toks.is_empty() {
                    return Err(syntax(line_no, body_col + 1, "`players:` needs at least one player"));
                }
                players = Some(toks);
            }
            "structure" => {
                if structure.is_some() {
                    return Err(syntax(line_no, indent + 1, "duplicate `structure:` line"));
                }
                if rest.trim().is_empty() {
                    return Err(Error::EmptyStructure);
                }
                let mut sets = Vec::new();
                let mut col = body_col;
                for part in rest.split(',') {
                    let toks = tokens(part, line_no, col);
                    if toks.is_empty() {
                        return Err(syntax(line_no, col + 1, "empty authorized set"));
                    }
                    sets.push(toks);
                    col += part.chars().count() + 1;
                }
                structure = Some(sets);
            }
            other => return Err(syntax(line_no, indent + 1, format!("unknown keyword `{other}`"))),
        }
    }

    let structure = structure.ok_or_else(|| syntax(last_line, 1, "missing `structure:` line"))?;

    let player = |t: &Token<'_>| {
        PlayerId::new(t.text).map_err(|_| syntax(t.line, t.column, format!("invalid player `{}`", t.text)))
    };

    match players {
        Some(declared) => {
            let universe = declared.iter().map(player).collect::<Result<PlayerSet>>()?;
            let mut sets = Vec::with_capacity(structure.len());
            for toks in &structure {
                let mut set = PlayerSet::new();
                for t in toks {
                    let p = player(t)?;
                    if !universe.contains(&p) {
                        return Err(Error::UndeclaredPlayer {
                            player: t.text.to_string(),
                            line: t.line,
                            column: t.column,
                        });
                    }
                    set.insert(p);
                }
                sets.push(set);
            }
            AccessStructure::new(universe, sets)
        }
        None => {
            let compact = structure
                .iter()
                .flatten()
                .all(|t| t.text.chars().all(|c| c.is_ascii_uppercase()));
            let mut sets = Vec::with_capacity(structure.len());
            for toks in &structure {
                let mut set = PlayerSet::new();
                for t in toks {
                    if compact {
                        for c in t.text.chars() {
                            set.insert(PlayerId::new(c.to_string())?);
                        }
                    } else {
                        set.insert(player(t)?);
                    }
                }
                sets.push(set);
            }
            AccessStructure::reduce_to_minimal(sets)
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonDocument {
    players: Option<Vec<String>>,
    structure: Vec<Vec<String>>,
}

fn parse_json(text: &str) -> Result<AccessStructure> {
    let doc: JsonDocument = serde_json::from_str(text).map_err(|e| syntax(e.line(), e.column(), e.to_string()))?;
    if doc.structure.is_empty() {
        return Err(Error::EmptyStructure);
    }
    let sets = doc
        .structure
        .into_iter()
        .map(PlayerSet::from_labels)
        .collect::<Result<Vec<_>>>()?;
    match doc.players {
        Some(players) => {
            let universe = PlayerSet::from_labels(players)?;
            for set in &sets {
                if let Some(p) = set.iter().find(|p| !universe.contains(p)) {
                    return Err(Error::UndeclaredPlayer {
                        player: p.to_string(),
                        line: 0,
                        column: 0,
                    });
                }
            }
            AccessStructure::new(universe, sets)
        }
        None => AccessStructure::reduce_to_minimal(sets),
    }
}
