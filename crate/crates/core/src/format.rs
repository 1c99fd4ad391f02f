// SPDX-License-Identifier: Apache-2.0

//! Text formats for circuits, permutations and cost databases.
//!
//! Circuit files hold one gate per line (`NOT(t)`, `CNOT(c,t)`, `CV(c,t)`,
//! `CVDG(c,t)`), applied top to bottom; `#` starts a comment. Permutation
//! files hold a single `perm: p0 .. p7` line. Database files start with a
//! `qsynthdb v1` header followed by one `<rank> <cost> <gates...>` record per
//! line in ascending rank order.

use std::fs;
use std::io;
use std::path::Path;

use thiserror::Error;

use crate::binperm::{BinPerm, BinPermError, PATTERNS};
use crate::engine::{CosetOrder, CostDatabase, RecordError};
use crate::gate::{Circuit, Gate, GateError, GateKind};

pub const DB_MAGIC: &str = "qsynthdb";
pub const DB_VERSION: &str = "v1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

/// Parses one gate token such as `CV(1,2)`. Errors carry a column offset
/// (0-based) within the token.
pub fn parse_gate(token: &str) -> Result<Gate, (usize, String)> {
    let open = token
        .find('(')
        .ok_or((0, format!("expected `(` in gate `{token}`")))?;
    let kind = match &token[..open] {
        "NOT" => GateKind::Not,
        "CNOT" => GateKind::Cnot,
        "CV" => GateKind::Cv,
        "CVDG" => GateKind::Cvdg,
        other => return Err((0, format!("unknown gate `{other}`"))),
    };
    let close = token.len() - 1;
    if !token.ends_with(')') {
        return Err((close, format!("expected `)` at end of `{token}`")));
    }
    let body = &token[open + 1..close];
    let mut wires = Vec::new();
    let mut offset = open + 1;
    for part in body.split(',') {
        let col = offset + (part.len() - part.trim_start().len());
        let w: u8 = part
            .trim()
            .parse()
            .map_err(|_| (col, format!("bad wire `{}`", part.trim())))?;
        wires.push((w, col));
        offset += part.len() + 1;
    }
    let (control, (target, tcol)) = match (kind, wires.as_slice()) {
        (GateKind::Not, [t]) => (None, *t),
        (GateKind::Not, _) => return Err((open, "NOT takes one wire".into())),
        (_, [c, t]) => (Some(*c), *t),
        (k, _) => return Err((open, format!("{} takes two wires", k.mnemonic()))),
    };
    Gate::new(kind, control.map(|c| c.0), target).map_err(|e| {
        let col = match e {
            GateError::BadWire(w) if control.is_some_and(|c| c.0 == w) => control.unwrap().1,
            _ => tcol,
        };
        (col, e.to_string())
    })
}

pub fn parse_circuit(text: &str) -> Result<Circuit, ParseError> {
    let mut gates = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let code = raw.split('#').next().unwrap_or("");
        let token = code.trim();
        if token.is_empty() {
            continue;
        }
        let start = code.len() - code.trim_start().len();
        let compact: String = token.chars().filter(|c| !c.is_whitespace()).collect();
        let gate = parse_gate(&compact).map_err(|(col, msg)| ParseError::new(i + 1, start + col + 1, msg))?;
        gates.push(gate);
    }
    Ok(Circuit::new(gates))
}

/// Canonical text: one gate per line, newline-terminated.
pub fn format_circuit(c: &Circuit) -> String {
    c.gates().iter().map(|g| format!("{g}\n")).collect()
}

pub fn parse_perm(text: &str) -> Result<BinPerm, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("")))
        .filter(|(_, l)| !l.trim().is_empty());
    let (lineno, line) = lines
        .next()
        .ok_or_else(|| ParseError::new(1, 1, "empty permutation text"))?;
    if let Some((extra, _)) = lines.next() {
        return Err(ParseError::new(extra, 1, "unexpected extra line"));
    }
    let body_start = line.len() - line.trim_start().len();
    let body = line.trim_start();
    let rest = body
        .strip_prefix("perm:")
        .ok_or_else(|| ParseError::new(lineno, body_start + 1, "expected `perm:`"))?;
    let mut images = Vec::with_capacity(PATTERNS);
    let mut col = body_start + "perm:".len();
    for tok in rest.split(' ') {
        col += 1;
        if tok.is_empty() {
            continue;
        }
        let v: u8 = tok
            .trim()
            .parse()
            .map_err(|_| ParseError::new(lineno, col, format!("bad image `{tok}`")))?;
        images.push((v, col));
        col += tok.len();
    }
    if images.len() != PATTERNS {
        return Err(ParseError::new(
            lineno,
            body_start + 1,
            format!("expected {PATTERNS} images, found {}", images.len()),
        ));
    }
    let arr: [u8; PATTERNS] = std::array::from_fn(|i| images[i].0);
    BinPerm::new(arr).map_err(|e| {
        let bad = match e {
            BinPermError::OutOfRange(v) => images.iter().find(|x| x.0 == v),
            BinPermError::Duplicate(v) => images.iter().filter(|x| x.0 == v).nth(1),
        };
        let message = match e {
            BinPermError::Duplicate(v) => format!("duplicate image {v}"),
            other => other.to_string(),
        };
        ParseError::new(lineno, bad.map_or(1, |b| b.1), message)
    })
}

pub fn format_perm(p: &BinPerm) -> String {
    format!("perm: {p}\n")
}

#[derive(Debug, Error)]
pub enum DbFileError {
    #[error("cannot access database file: {0}")]
    Io(#[from] io::Error),
    #[error("bad database header: {0}")]
    Header(String),
    #[error("unsupported database version `{0}` (expected {DB_VERSION})")]
    Version(String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("record for rank {rank} (line {line}) failed verification: {source}")]
    Record {
        line: usize,
        rank: usize,
        #[source]
        source: RecordError,
    },
}

fn header_line(db: &CostDatabase) -> String {
    format!(
        "{DB_MAGIC} {DB_VERSION} max_cost={} generators={} order={}",
        db.max_cost(),
        db.generators_token(),
        db.order().token()
    )
}

pub fn format_db(db: &CostDatabase) -> String {
    let mut out = header_line(db);
    out.push('\n');
    for (rank, e) in db.records() {
        out.push_str(&format!("{rank} {}", e.cost));
        for g in e.witness.gates() {
            out.push_str(&format!(" {g}"));
        }
        out.push('\n');
    }
    out
}

fn parse_header(line: &str) -> Result<CostDatabase, DbFileError> {
    let fields: Vec<&str> = line.split(' ').collect();
    match fields.as_slice() {
        [magic, version, max_cost, generators, order] => {
            if *magic != DB_MAGIC {
                return Err(DbFileError::Header(format!(
                    "expected `{DB_MAGIC}`, found `{magic}`"
                )));
            }
            if *version != DB_VERSION {
                return Err(DbFileError::Version(version.to_string()));
            }
            let value = |field: &str, key: &str| -> Result<String, DbFileError> {
                field
                    .strip_prefix(key)
                    .and_then(|s| s.strip_prefix('='))
                    .map(str::to_string)
                    .ok_or_else(|| DbFileError::Header(format!("expected `{key}=...`, found `{field}`")))
            };
            let max_cost: u32 = value(max_cost, "max_cost")?
                .parse()
                .map_err(|_| DbFileError::Header(format!("bad max_cost in `{max_cost}`")))?;
            let free_nots = match value(generators, "generators")?.as_str() {
                "cnot,cv,cvdg" => false,
                "not,cnot,cv,cvdg" => true,
                other => return Err(DbFileError::Header(format!("unknown generator set `{other}`"))),
            };
            let order_tok = value(order, "order")?;
            let order = CosetOrder::from_token(&order_tok)
                .ok_or_else(|| DbFileError::Header(format!("unknown order `{order_tok}`")))?;
            Ok(CostDatabase::new(max_cost, order, free_nots))
        }
        [magic, version, ..] if *magic == DB_MAGIC && *version != DB_VERSION => {
            Err(DbFileError::Version(version.to_string()))
        }
        _ => Err(DbFileError::Header(format!("malformed header `{line}`"))),
    }
}

/// Parses and re-verifies a database. Every witness is evaluated against its
/// key; the first bad record is reported.
pub fn parse_db(text: &str) -> Result<CostDatabase, DbFileError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| DbFileError::Header("empty file".into()))?;
    let mut db = parse_header(header)?;
    let mut last_rank: Option<usize> = None;
    for (i, line) in lines {
        let lineno = i + 1;
        if line.is_empty() {
            continue;
        }
        let syntax = |message: String| DbFileError::Syntax {
            line: lineno,
            message,
        };
        let mut fields = line.split(' ');
        let rank: usize = fields
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| syntax("bad rank".into()))?;
        let key = BinPerm::unrank(rank).map_err(|e| syntax(e.to_string()))?;
        if last_rank.is_some_and(|r| r >= rank) {
            return Err(syntax(format!("rank {rank} out of order")));
        }
        last_rank = Some(rank);
        let cost: u32 = fields
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| syntax("bad cost".into()))?;
        let witness = fields
            .map(|tok| parse_gate(tok).map_err(|(_, m)| syntax(m)))
            .collect::<Result<Circuit, _>>()?;
        let record_err = |source| DbFileError::Record {
            line: lineno,
            rank,
            source,
        };
        db.check_record(&key, cost, &witness).map_err(record_err)?;
        db.insert(&key, cost, witness).map_err(record_err)?;
    }
    Ok(db)
}

pub fn save_db(db: &CostDatabase, path: impl AsRef<Path>) -> Result<(), DbFileError> {
    fs::write(path, format_db(db))?;
    Ok(())
}

pub fn load_db(path: impl AsRef<Path>) -> Result<CostDatabase, DbFileError> {
    parse_db(&fs::read_to_string(path)?)
}
