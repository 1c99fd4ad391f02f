// SPDX-License-Identifier: Apache-2.0

//! Minimum-cost synthesis of a reversible function as a NOT layer plus a
//! NOT-free circuit.
//!
//! The NOT layers partition S8 into eight cosets of the NOT-free functions, so
//! exactly one of the eight residuals `h_a` is NOT-free. Its minimum cost is
//! read from a [`CostDatabase`] when one covers the bound, and otherwise found
//! by iterative deepening over two-qubit gate words.

use std::fmt;

use thiserror::Error;

use super::database::{CosetOrder, CostDatabase};
use super::trajectory::{for_each_word, word_to_circuit, ExactDepthSearch};
use crate::binperm::{restricted_perm, BinPerm, NotLayer};
use crate::gate::{circuit_perm, Circuit};

/// A NOT layer and a NOT-free circuit realising a target function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Synthesis {
    pub target: BinPerm,
    pub not_layer: NotLayer,
    pub circuit: Circuit,
    pub cost: u32,
    pub order: CosetOrder,
}

impl Synthesis {
    /// The complete gate sequence including the NOT gates.
    pub fn full_circuit(&self) -> Circuit {
        let nots = Circuit::new(self.not_layer.gates());
        match self.order {
            CosetOrder::NotFirst => nots.concat(&self.circuit),
            CosetOrder::NotLast => self.circuit.concat(&nots),
        }
    }

    /// Re-evaluates both the coset form and the full gate sequence.
    pub fn realizes(&self, target: &BinPerm) -> bool {
        let Some(h) = restricted_perm(&circuit_perm(&self.circuit)) else {
            return false;
        };
        self.circuit.is_not_free()
            && self.circuit.cost() == self.cost
            && self.order.combine(&self.not_layer.as_binperm(), &h) == *target
            && restricted_perm(&circuit_perm(&self.full_circuit())).as_ref() == Some(target)
    }
}

impl fmt::Display for Synthesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "mask={} cost={} [{}]",
            self.not_layer.mask(),
            self.cost,
            self.circuit
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("minimum cost of {target} exceeds bound {bound}")]
    BoundExceeded { target: BinPerm, bound: u32 },
    #[error("synthesized circuit for {target} failed re-evaluation")]
    Verification { target: BinPerm },
}

fn verified(s: Synthesis) -> Result<Synthesis, SynthError> {
    if s.realizes(&s.target) {
        Ok(s)
    } else {
        Err(SynthError::Verification { target: s.target })
    }
}

/// The eight `(NOT layer, residual)` pairs for `g`, in mask order.
fn residuals(g: &BinPerm, order: CosetOrder) -> impl Iterator<Item = (NotLayer, BinPerm)> + '_ {
    NotLayer::all().map(move |a| (a, order.residual(&a.as_binperm(), g)))
}

/// Minimum-cost synthesis of `g` with cost at most `bound`, NOT layer first.
///
/// Uses `db` for costs it covers and iterative deepening beyond them.
pub fn expressing(g: &BinPerm, bound: u32, db: Option<&CostDatabase>) -> Result<Synthesis, SynthError> {
    let order = db.map_or(CosetOrder::NotFirst, CostDatabase::order);
    expressing_with(g, bound, db, order)
}

pub fn expressing_with(
    g: &BinPerm,
    bound: u32,
    db: Option<&CostDatabase>,
    order: CosetOrder,
) -> Result<Synthesis, SynthError> {
    let exceeded = || SynthError::BoundExceeded { target: *g, bound };
    let db = db.filter(|d| !d.free_nots());

    let mut searched_to = None;
    if let Some(db) = db {
        let best = residuals(g, order)
            .filter_map(|(a, h)| db.lookup(&h).map(|e| (e.cost, a, e)))
            .min_by_key(|&(cost, a, _)| (cost, a));
        if let Some((cost, a, entry)) = best {
            if cost > bound {
                return Err(exceeded());
            }
            return verified(Synthesis {
                target: *g,
                not_layer: a,
                circuit: entry.witness.clone(),
                cost,
                order,
            });
        }
        if db.is_complete() || db.max_cost() >= bound {
            return Err(exceeded());
        }
        searched_to = Some(db.max_cost());
    }

    // Every NOT-free circuit fixes the all-zero pattern, so only residuals
    // with h(0) = 0 can be realised.
    let mut searches: Vec<(NotLayer, ExactDepthSearch)> = residuals(g, order)
        .filter(|(_, h)| h.apply(0) == 0)
        .map(|(a, h)| (a, ExactDepthSearch::new(&h)))
        .collect();
    let start = searched_to.map_or(0, |k| k + 1);
    for depth in start..=bound {
        for (a, search) in &mut searches {
            if let Some(circuit) = search.run(depth) {
                return verified(Synthesis {
                    target: *g,
                    not_layer: *a,
                    circuit,
                    cost: depth,
                    order,
                });
            }
        }
    }
    Err(exceeded())
}

/// Every NOT-free gate word of exactly `k` two-qubit gates which, combined
/// with a NOT layer (applied first), realises `g`. Lexicographic order.
pub fn enumerate_min_impls(g: &BinPerm, k: u32) -> Vec<Synthesis> {
    enumerate_impls_with(g, k, CosetOrder::NotFirst)
}

pub fn enumerate_impls_with(g: &BinPerm, k: u32, order: CosetOrder) -> Vec<Synthesis> {
    let wanted: Vec<(NotLayer, BinPerm)> = residuals(g, order).collect();
    let mut out = Vec::new();
    for_each_word(k, |word, traj| {
        let Some(h) = traj.binperm() else { return };
        if let Some(&(a, _)) = wanted.iter().find(|(_, r)| *r == h) {
            out.push(Synthesis {
                target: *g,
                not_layer: a,
                circuit: word_to_circuit(word),
                cost: k,
                order,
            });
        }
    });
    debug_assert!(out.iter().all(|s| s.realizes(g)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binperm::NamedPerm;
    use crate::gate::Gate;

    #[test]
    fn identity_and_not_layers_cost_zero() {
        let s = expressing(&BinPerm::IDENTITY, 0, None).unwrap();
        assert_eq!((s.not_layer.mask(), s.cost), (0, 0));
        assert!(s.circuit.is_empty());
        for a in NotLayer::all() {
            let s = expressing(&a.as_binperm(), 0, None).unwrap();
            assert_eq!(s.not_layer, a);
            assert_eq!(s.cost, 0);
            assert!(s.circuit.is_empty());
        }
    }

    #[test]
    fn peres_and_toffoli_by_dfs() {
        let p = expressing(&NamedPerm::Peres.perm(), 5, None).unwrap();
        assert_eq!(p.cost, 4);
        assert!(p.realizes(&NamedPerm::Peres.perm()));
        let t = expressing(&NamedPerm::Toffoli.perm(), 6, None).unwrap();
        assert_eq!(t.cost, 5);
        assert_eq!(
            expressing(&NamedPerm::Toffoli.perm(), 3, None),
            Err(SynthError::BoundExceeded {
                target: NamedPerm::Toffoli.perm(),
                bound: 3
            })
        );
    }

    #[test]
    fn not_last_orientation() {
        let g = NotLayer::new(3)
            .unwrap()
            .as_binperm()
            .compose(&NamedPerm::Peres.perm());
        let s = expressing_with(&g, 5, None, CosetOrder::NotLast).unwrap();
        assert!(s.realizes(&g));
        assert_eq!(s.order, CosetOrder::NotLast);
    }

    #[test]
    fn enumerate_small_cases() {
        let id = enumerate_min_impls(&BinPerm::IDENTITY, 0);
        assert_eq!(id.len(), 1);
        assert!(id[0].circuit.is_empty());
        let cnot = restricted_perm(&Gate::cnot(1, 0).perm()).unwrap();
        let one = enumerate_min_impls(&cnot, 1);
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].circuit, Circuit::new(vec![Gate::cnot(1, 0)]));
        // CV.CV, CVDG.CVDG
        assert_eq!(enumerate_min_impls(&cnot, 2).len(), 2);
    }

    #[test]
    fn realizes_rejects_wrong_target() {
        let s = expressing(&NamedPerm::Peres.perm(), 5, None).unwrap();
        assert!(!s.realizes(&NamedPerm::Toffoli.perm()));
    }
}
