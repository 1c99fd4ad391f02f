// SPDX-License-Identifier: Apache-2.0

//! The four-valued qubit alphabet and 3-wire truth-table entries.

use std::fmt;

use crate::error::RangeError;

/// Number of wires handled by the engine.
pub const WIRES: usize = 3;

/// Number of four-valued truth-table entries (4^3).
pub const ENTRY_COUNT: usize = 64;

/// A single-wire value: the two basis states plus `V|0>` and `V|1>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QValue {
    B0,
    B1,
    V0,
    V1,
}

impl QValue {
    pub const ALL: [QValue; 4] = [QValue::B0, QValue::B1, QValue::V0, QValue::V1];

    pub const fn code(self) -> u8 {
        match self {
            QValue::B0 => 0,
            QValue::B1 => 1,
            QValue::V0 => 2,
            QValue::V1 => 3,
        }
    }

    pub fn from_code(code: u8) -> Result<Self, RangeError> {
        match code {
            0 => Ok(QValue::B0),
            1 => Ok(QValue::B1),
            2 => Ok(QValue::V0),
            3 => Ok(QValue::V1),
            _ => Err(RangeError::new("value code", code as usize, 3)),
        }
    }

    pub const fn is_binary(self) -> bool {
        matches!(self, QValue::B0 | QValue::B1)
    }
}

impl fmt::Display for QValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QValue::B0 => "0",
            QValue::B1 => "1",
            QValue::V0 => "V0",
            QValue::V1 => "V1",
        })
    }
}

/// Single-wire operation applied to the target of a gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ValueOp {
    Not,
    V,
    Vdag,
}

impl ValueOp {
    pub const ALL: [ValueOp; 3] = [ValueOp::Not, ValueOp::V, ValueOp::Vdag];

    pub const fn inverse(self) -> Self {
        match self {
            ValueOp::Not => ValueOp::Not,
            ValueOp::V => ValueOp::Vdag,
            ValueOp::Vdag => ValueOp::V,
        }
    }

    /// Image table indexed by value code.
    const fn table(self) -> [u8; 4] {
        match self {
            // (B0 B1)(V0 V1)
            ValueOp::Not => [1, 0, 3, 2],
            // B0 -> V0 -> B1 -> V1 -> B0
            ValueOp::V => [2, 3, 1, 0],
            ValueOp::Vdag => [3, 2, 0, 1],
        }
    }
}

/// Applies `op` to a single wire value.
pub fn value_map(op: ValueOp, v: QValue) -> QValue {
    match op.table()[v.code() as usize] {
        0 => QValue::B0,
        1 => QValue::B1,
        2 => QValue::V0,
        _ => QValue::V1,
    }
}

/// One row of the four-valued truth table: a value on each of the three wires.
///
/// Wire 0 is the most significant base-4 digit of the index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Entry(pub [QValue; WIRES]);

impl Entry {
    pub fn new(v0: QValue, v1: QValue, v2: QValue) -> Self {
        Entry([v0, v1, v2])
    }

    pub fn index(self) -> usize {
        entry_index(self)
    }

    pub fn wire(self, w: usize) -> QValue {
        self.0[w]
    }

    pub fn with_wire(mut self, w: usize, v: QValue) -> Self {
        self.0[w] = v;
        self
    }

    pub fn is_binary(self) -> bool {
        self.0.iter().all(|v| v.is_binary())
    }

    /// The binary pattern `4*v0 + 2*v1 + v2`, if every wire is binary.
    pub fn binary_pattern(self) -> Option<u8> {
        if !self.is_binary() {
            return None;
        }
        Some(self.0.iter().fold(0, |acc, v| (acc << 1) | v.code()))
    }

    /// The entry holding binary pattern `p` (`p < 8`).
    pub fn from_pattern(p: u8) -> Self {
        let bit = |w: usize| {
            if (p >> (WIRES - 1 - w)) & 1 == 1 {
                QValue::B1
            } else {
                QValue::B0
            }
        };
        Entry([bit(0), bit(1), bit(2)])
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

pub fn entry_index(e: Entry) -> usize {
    e.0.iter().fold(0, |acc, v| acc * 4 + v.code() as usize)
}

pub fn entry_from_index(i: usize) -> Result<Entry, RangeError> {
    if i >= ENTRY_COUNT {
        return Err(RangeError::new("entry index", i, ENTRY_COUNT - 1));
    }
    let digit = |w: usize| QValue::from_code(((i >> (2 * (WIRES - 1 - w))) & 3) as u8);
    Ok(Entry([digit(0)?, digit(1)?, digit(2)?]))
}

/// Entry index of binary pattern `p`.
pub const fn pattern_entry_index(p: u8) -> usize {
    let p = p as usize;
    ((p >> 2) & 1) * 16 + ((p >> 1) & 1) * 4 + (p & 1)
}
