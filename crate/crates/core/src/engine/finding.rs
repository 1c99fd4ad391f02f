// SPDX-License-Identifier: Apache-2.0

//! Layered breadth-first search over partial permutations.
//!
//! Layer `k` holds every partial permutation first reached by a word of `k`
//! two-qubit gates. Restricting a layer to the binary entries and discarding
//! functions already seen at lower cost yields `G[k]`.
//!
//! Frontier expansion can be split across threads. Candidates are merged in
//! frontier order, so layer contents, witnesses and the resulting database do
//! not depend on the thread count.

use std::collections::HashSet;
use std::mem::size_of;
use std::thread;

use thiserror::Error;

use super::database::{CosetOrder, CostDatabase};
use crate::binperm::restricted_perm;
use crate::gate::{gate_perm, not_gates, two_qubit_gates, Circuit, Gate};
use crate::mvl::{pattern_entry_index, PartialPerm};

/// Domain bits of the eight binary entries.
const BINARY_DOMAIN: u64 = {
    let mut m = 0u64;
    let mut p = 0;
    while p < 8 {
        m |= 1 << pattern_entry_index(p);
        p += 1;
    }
    m
};

/// Rough per-state footprint: the hash set copy, the layer copy and the
/// parent link plus table overhead.
const BYTES_PER_STATE: usize = 2 * size_of::<PartialPerm>() + size_of::<Parent>() + 16;

#[derive(Debug, Clone)]
pub struct FindingOptions {
    /// Also expand the NOT gates at cost 0.
    pub free_nots: bool,
    /// Drop states on which some binary entry is banned. Such states never
    /// restrict to a reversible function, and domains only shrink.
    pub prune_dead: bool,
    /// Ceiling on the estimated search memory, in bytes.
    pub memory_limit: Option<usize>,
    pub threads: usize,
    pub order: CosetOrder,
}

impl Default for FindingOptions {
    fn default() -> Self {
        FindingOptions {
            free_nots: false,
            prune_dead: true,
            memory_limit: None,
            threads: 1,
            order: CosetOrder::NotFirst,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Parent {
    layer: u32,
    index: u32,
    /// Index into the full gate catalog.
    gate: u8,
}

/// Partial permutations first reached at cost `depth`, with witness links.
#[derive(Debug, Clone)]
pub struct SearchLayer {
    pub depth: u32,
    states: Vec<PartialPerm>,
    parents: Vec<Option<Parent>>,
}

impl SearchLayer {
    pub fn states(&self) -> &[PartialPerm] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

/// Per-layer statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayerStats {
    pub depth: u32,
    /// `|B[k]|`: distinct partial permutations first reached at this depth.
    pub states: usize,
    /// Distinct reversible functions among the layer's restrictions (`pre_G[k]`).
    pub restricted: usize,
    /// `|G[k]|`.
    pub new_functions: usize,
}

/// Retained BFS layers.
#[derive(Debug, Clone)]
pub struct LayeredSearch {
    layers: Vec<SearchLayer>,
    exhausted: bool,
}

#[derive(Debug, Error)]
pub enum FindingError {
    #[error(
        "memory budget of {limit} bytes exceeded while expanding layer {}; last completed layer is {last_completed}",
        last_completed + 1
    )]
    BudgetExceeded {
        limit: usize,
        last_completed: u32,
        partial: Box<Finding>,
    },
}

/// Output of [`finding`].
#[derive(Debug, Clone)]
pub struct Finding {
    pub db: CostDatabase,
    pub stats: Vec<LayerStats>,
    /// False when the search stopped on the memory budget.
    pub finished: bool,
}

enum Step {
    Done,
    OverBudget,
}

impl LayeredSearch {
    fn new(opts: &FindingOptions) -> (Self, HashSet<PartialPerm>) {
        let mut seen = HashSet::new();
        seen.insert(PartialPerm::identity());
        let mut layer0 = SearchLayer {
            depth: 0,
            states: vec![PartialPerm::identity()],
            parents: vec![None],
        };
        if opts.free_nots {
            close_under_nots(&mut layer0, &mut seen, opts);
        }
        (
            LayeredSearch {
                layers: vec![layer0],
                exhausted: false,
            },
            seen,
        )
    }

    /// Runs the search up to `max_cost`, stopping early on the memory budget.
    pub fn run(max_cost: u32, opts: &FindingOptions) -> (Self, bool) {
        let (mut search, mut seen) = Self::new(opts);
        let mut within_budget = true;
        while (search.layers.len() as u32) <= max_cost && !search.exhausted {
            match search.expand(&mut seen, opts) {
                Step::Done => {}
                Step::OverBudget => {
                    within_budget = false;
                    break;
                }
            }
        }
        (search, within_budget)
    }

    fn expand(&mut self, seen: &mut HashSet<PartialPerm>, opts: &FindingOptions) -> Step {
        let depth = self.layers.len() as u32;
        let frontier = self.layers.last().expect("layer 0 exists");
        let candidates = expand_frontier(frontier, seen, opts);

        let mut layer = SearchLayer {
            depth,
            states: Vec::new(),
            parents: Vec::new(),
        };
        for (state, index, gate) in candidates {
            if seen.insert(state) {
                layer.states.push(state);
                layer.parents.push(Some(Parent {
                    layer: depth - 1,
                    index,
                    gate,
                }));
                if over_budget(seen.len(), opts) {
                    return Step::OverBudget;
                }
            }
        }
        if opts.free_nots {
            close_under_nots(&mut layer, seen, opts);
            if over_budget(seen.len(), opts) {
                return Step::OverBudget;
            }
        }
        if layer.states.is_empty() {
            self.exhausted = true;
        }
        self.layers.push(layer);
        Step::Done
    }

    pub fn layers(&self) -> &[SearchLayer] {
        &self.layers
    }

    /// True when the last expansion produced no new states (closure reached).
    pub fn is_exhausted(&self) -> bool {
        self.exhausted
    }

    /// Witness word of state `index` in layer `depth`.
    pub fn witness(&self, depth: u32, index: usize) -> Circuit {
        let catalog = crate::gate::gate_catalog();
        let mut gates: Vec<Gate> = Vec::new();
        let (mut d, mut i) = (depth, index as u32);
        while let Some(p) = self.layers[d as usize].parents[i as usize] {
            gates.push(catalog[p.gate as usize]);
            d = p.layer;
            i = p.index;
        }
        gates.reverse();
        Circuit::new(gates)
    }

    fn build(&self, max_cost: u32, opts: &FindingOptions) -> (CostDatabase, Vec<LayerStats>) {
        let mut db = CostDatabase::new(max_cost, opts.order, opts.free_nots);
        let mut stats = Vec::with_capacity(self.layers.len());
        for layer in self.layers.iter().filter(|l| l.depth <= max_cost) {
            let mut restricted = HashSet::new();
            let mut fresh = 0;
            for (i, state) in layer.states.iter().enumerate() {
                if let Some(g) = restricted_perm(state) {
                    restricted.insert(g);
                    if !db.contains(&g) {
                        let witness = self.witness(layer.depth, i);
                        db.insert(&g, layer.depth, witness)
                            .expect("layer depth within max_cost");
                        fresh += 1;
                    }
                }
            }
            stats.push(LayerStats {
                depth: layer.depth,
                states: layer.states.len(),
                restricted: restricted.len(),
                new_functions: fresh,
            });
        }
        if self.exhausted {
            db.mark_exhausted();
        }
        (db, stats)
    }
}

fn over_budget(states: usize, opts: &FindingOptions) -> bool {
    opts.memory_limit
        .is_some_and(|limit| states.saturating_mul(BYTES_PER_STATE) > limit)
}

fn is_dead(p: &PartialPerm) -> bool {
    p.domain_mask() & BINARY_DOMAIN != BINARY_DOMAIN
}

/// Children of the frontier under the two-qubit gates that are not yet in
/// `seen`, in (frontier index, gate) order. Duplicates within the layer are
/// left for the caller's sequential merge.
fn expand_frontier(
    frontier: &SearchLayer,
    seen: &HashSet<PartialPerm>,
    opts: &FindingOptions,
) -> Vec<(PartialPerm, u32, u8)> {
    let gens: Vec<(u8, PartialPerm)> = two_qubit_gates()
        .iter()
        .map(|g| (g.catalog_index() as u8, gate_perm(g)))
        .collect();
    let expand_slice = |start: usize, slice: &[PartialPerm]| {
        let mut out = Vec::new();
        for (offset, state) in slice.iter().enumerate() {
            for (gi, gp) in &gens {
                let child = state.compose(gp);
                if (opts.prune_dead && is_dead(&child)) || seen.contains(&child) {
                    continue;
                }
                out.push((child, (start + offset) as u32, *gi));
            }
        }
        out
    };

    let threads = opts.threads.max(1);
    let states = &frontier.states;
    if threads == 1 || states.len() < 2 * threads {
        return expand_slice(0, states);
    }
    let chunk = states.len().div_ceil(threads);
    thread::scope(|scope| {
        let handles: Vec<_> = states
            .chunks(chunk)
            .enumerate()
            .map(|(i, slice)| {
                let expand_slice = &expand_slice;
                scope.spawn(move || expand_slice(i * chunk, slice))
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("expansion worker panicked"))
            .collect()
    })
}

/// Adds every state reachable from the layer by NOT gates (cost 0).
fn close_under_nots(layer: &mut SearchLayer, seen: &mut HashSet<PartialPerm>, opts: &FindingOptions) {
    let nots: Vec<(u8, PartialPerm)> = not_gates()
        .iter()
        .map(|g| (g.catalog_index() as u8, gate_perm(g)))
        .collect();
    let mut i = 0;
    while i < layer.states.len() {
        let state = layer.states[i];
        for (gi, gp) in &nots {
            let child = state.compose(gp);
            if opts.prune_dead && is_dead(&child) {
                continue;
            }
            if seen.insert(child) {
                layer.states.push(child);
                layer.parents.push(Some(Parent {
                    layer: layer.depth,
                    index: i as u32,
                    gate: *gi,
                }));
            }
        }
        i += 1;
    }
}

/// Builds `G[0..=max_cost]` with witnesses.
///
/// On memory-budget exhaustion the database up to the last completed layer is
/// returned inside the error.
pub fn finding(max_cost: u32, opts: &FindingOptions) -> Result<Finding, FindingError> {
    let (search, within_budget) = LayeredSearch::run(max_cost, opts);
    let completed = search.layers.len() as u32 - 1;
    if within_budget {
        let (db, stats) = search.build(max_cost, opts);
        return Ok(Finding {
            db,
            stats,
            finished: true,
        });
    }
    let (db, stats) = search.build(completed, opts);
    Err(FindingError::BudgetExceeded {
        limit: opts.memory_limit.unwrap_or(0),
        last_completed: completed,
        partial: Box::new(Finding {
            db,
            stats,
            finished: false,
        }),
    })
}

/// Runs [`finding`] until no new states appear; the database's cost range
/// ends at the first empty layer.
pub fn finding_complete(opts: &FindingOptions) -> Result<Finding, FindingError> {
    // the NOT-free search closes at depth 13
    const CAP: u32 = 64;
    let mut f = finding(CAP, opts)?;
    let last = f.stats.len() as u32 - 1;
    f.db.truncate(last);
    Ok(f)
}
