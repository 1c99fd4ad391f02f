// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use thiserror::Error;

use crate::binperm::{restricted_perm, BinPerm, S8_ORDER};
use crate::gate::{circuit_perm, Circuit};

/// Number of NOT-free reversible functions: every NOT-free circuit fixes the
/// all-zero pattern, so G is the stabiliser of pattern 0 in S8.
pub const NOT_FREE_ORDER: usize = 5040;

/// Which side of a NOT-free circuit the NOT layer sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CosetOrder {
    /// `g = a * h`: NOT layer applied first (left coset).
    #[default]
    NotFirst,
    /// `g = h * a`: NOT layer applied last.
    NotLast,
}

impl CosetOrder {
    pub fn token(self) -> &'static str {
        match self {
            CosetOrder::NotFirst => "notfirst",
            CosetOrder::NotLast => "notlast",
        }
    }

    pub fn from_token(s: &str) -> Option<Self> {
        match s {
            "notfirst" => Some(CosetOrder::NotFirst),
            "notlast" => Some(CosetOrder::NotLast),
            _ => None,
        }
    }

    /// Combines a NOT layer with a NOT-free function in this order.
    pub fn combine(self, not_layer: &BinPerm, circuit: &BinPerm) -> BinPerm {
        match self {
            CosetOrder::NotFirst => not_layer.compose(circuit),
            CosetOrder::NotLast => circuit.compose(not_layer),
        }
    }

    /// The NOT-free residual `h` with `combine(a, h) = g`.
    pub fn residual(self, not_layer: &BinPerm, g: &BinPerm) -> BinPerm {
        match self {
            CosetOrder::NotFirst => not_layer.inverse().compose(g),
            CosetOrder::NotLast => g.compose(&not_layer.inverse()),
        }
    }
}

impl fmt::Display for CosetOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DbEntry {
    pub cost: u32,
    pub witness: Circuit,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecordError {
    #[error("duplicate record")]
    Duplicate,
    #[error("witness has {len} gates but cost is {cost}")]
    LengthMismatch { len: usize, cost: u32 },
    #[error("witness contains NOT gates")]
    ContainsNot,
    #[error("witness two-qubit cost {actual} differs from recorded cost {cost}")]
    CostMismatch { actual: u32, cost: u32 },
    #[error("witness does not restrict to the keyed permutation")]
    WrongFunction,
    #[error("cost {cost} exceeds database max_cost {max}")]
    AboveMaxCost { cost: u32, max: u32 },
}

/// Minimum costs and witnesses for reversible functions, indexed by rank.
///
/// `G[k]` is the set of ranks whose minimum cost is exactly `k`. In the default
/// (NOT-free) mode every witness is a word of two-qubit gates of length `k`.
#[derive(Clone, PartialEq, Eq)]
pub struct CostDatabase {
    entries: Vec<Option<DbEntry>>,
    layers: Vec<Vec<usize>>,
    max_cost: u32,
    order: CosetOrder,
    free_nots: bool,
    exhausted: bool,
}

impl CostDatabase {
    pub fn new(max_cost: u32, order: CosetOrder, free_nots: bool) -> Self {
        CostDatabase {
            entries: vec![None; S8_ORDER],
            layers: vec![Vec::new(); max_cost as usize + 1],
            max_cost,
            order,
            free_nots,
            exhausted: false,
        }
    }

    /// Generator set label written to database headers.
    pub fn generators_token(&self) -> &'static str {
        if self.free_nots {
            "not,cnot,cv,cvdg"
        } else {
            "cnot,cv,cvdg"
        }
    }

    pub fn max_cost(&self) -> u32 {
        self.max_cost
    }

    pub fn order(&self) -> CosetOrder {
        self.order
    }

    pub fn set_order(&mut self, order: CosetOrder) {
        self.order = order;
    }

    pub fn free_nots(&self) -> bool {
        self.free_nots
    }

    pub(crate) fn mark_exhausted(&mut self) {
        self.exhausted = true;
    }

    /// Truncates the cost range after a search stopped early.
    pub(crate) fn truncate(&mut self, max_cost: u32) {
        for k in (max_cost as usize + 1)..self.layers.len() {
            for r in std::mem::take(&mut self.layers[k]) {
                self.entries[r] = None;
            }
        }
        self.layers.truncate(max_cost as usize + 1);
        self.max_cost = max_cost;
    }

    /// True when every function reachable by the generator set is present.
    pub fn is_complete(&self) -> bool {
        let full = if self.free_nots { S8_ORDER } else { NOT_FREE_ORDER };
        self.exhausted || self.len() == full
    }

    /// Inserts a record unless the function already has one.
    ///
    /// Returns `Ok(false)` for a function already present at equal or lower
    /// cost.
    pub fn insert(&mut self, key: &BinPerm, cost: u32, witness: Circuit) -> Result<bool, RecordError> {
        if cost > self.max_cost {
            return Err(RecordError::AboveMaxCost {
                cost,
                max: self.max_cost,
            });
        }
        let r = key.rank();
        if self.entries[r].is_some() {
            return Ok(false);
        }
        self.entries[r] = Some(DbEntry { cost, witness });
        let layer = &mut self.layers[cost as usize];
        let at = layer.partition_point(|&x| x < r);
        layer.insert(at, r);
        Ok(true)
    }

    /// Checks a single record's witness against its key.
    pub fn check_record(&self, key: &BinPerm, cost: u32, witness: &Circuit) -> Result<(), RecordError> {
        if cost > self.max_cost {
            return Err(RecordError::AboveMaxCost {
                cost,
                max: self.max_cost,
            });
        }
        if !self.free_nots {
            if !witness.is_not_free() {
                return Err(RecordError::ContainsNot);
            }
            if witness.len() != cost as usize {
                return Err(RecordError::LengthMismatch {
                    len: witness.len(),
                    cost,
                });
            }
        }
        if witness.cost() != cost {
            return Err(RecordError::CostMismatch {
                actual: witness.cost(),
                cost,
            });
        }
        if restricted_perm(&circuit_perm(witness)).as_ref() != Some(key) {
            return Err(RecordError::WrongFunction);
        }
        Ok(())
    }

    /// Re-verifies every record; returns the first failing rank.
    pub fn verify(&self) -> Result<(), (usize, RecordError)> {
        for (r, e) in self.records() {
            let key = BinPerm::unrank(r).expect("stored rank is valid");
            self.check_record(&key, e.cost, &e.witness)
                .map_err(|err| (r, err))?;
        }
        Ok(())
    }

    pub fn lookup(&self, g: &BinPerm) -> Option<&DbEntry> {
        self.entries[g.rank()].as_ref()
    }

    pub fn cost_of(&self, g: &BinPerm) -> Option<u32> {
        self.lookup(g).map(|e| e.cost)
    }

    pub fn contains(&self, g: &BinPerm) -> bool {
        self.entries[g.rank()].is_some()
    }

    /// Ranks in `G[k]`, ascending.
    pub fn layer(&self, k: u32) -> &[usize] {
        self.layers.get(k as usize).map_or(&[], Vec::as_slice)
    }

    pub fn layer_perms(&self, k: u32) -> Vec<BinPerm> {
        self.layer(k)
            .iter()
            .map(|&r| BinPerm::unrank(r).expect("stored rank is valid"))
            .collect()
    }

    /// `|G[k]|` for `k = 0..=max_cost`.
    pub fn layer_sizes(&self) -> Vec<usize> {
        self.layers.iter().map(Vec::len).collect()
    }

    pub fn len(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Records in ascending rank order.
    pub fn records(&self) -> impl Iterator<Item = (usize, &DbEntry)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .filter_map(|(r, e)| e.as_ref().map(|e| (r, e)))
    }

    /// Largest cost present.
    pub fn diameter(&self) -> Option<u32> {
        self.layers.iter().rposition(|l| !l.is_empty()).map(|k| k as u32)
    }
}

impl fmt::Debug for CostDatabase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CostDatabase")
            .field("max_cost", &self.max_cost)
            .field("layer_sizes", &self.layer_sizes())
            .field("order", &self.order)
            .field("free_nots", &self.free_nots)
            .field("complete", &self.is_complete())
            .finish()
    }
}
