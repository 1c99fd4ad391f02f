// SPDX-License-Identifier: Apache-2.0

//! Depth-first search over NOT-free gate words, tracking only where the eight
//! binary inputs currently are.
//!
//! Two words with the same binary trajectory agree on every extension
//! restricted to binary inputs, so this 8-byte state is all the DFS needs.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::binperm::{BinPerm, PATTERNS};
use crate::gate::{gate_entry_table, two_qubit_gates, Circuit, Gate};
use crate::mvl::{entry_from_index, pattern_entry_index, ENTRY_COUNT};

const BANNED: u8 = 0xFF;

struct Tables {
    gates: Vec<Gate>,
    images: Vec<[u8; ENTRY_COUNT]>,
    /// Per entry, per wire: base-4 digit.
    digits: [[u8; 3]; ENTRY_COUNT],
    /// `pattern_of[e]` is the binary pattern of entry `e`, or `BANNED`.
    pattern_of: [u8; ENTRY_COUNT],
}

fn tables() -> &'static Tables {
    static T: OnceLock<Tables> = OnceLock::new();
    T.get_or_init(|| {
        let gates = two_qubit_gates();
        let images = gates.iter().map(gate_entry_table).collect();
        let mut digits = [[0u8; 3]; ENTRY_COUNT];
        let mut pattern_of = [BANNED; ENTRY_COUNT];
        for (i, (d, p)) in digits.iter_mut().zip(pattern_of.iter_mut()).enumerate() {
            let e = entry_from_index(i).expect("i < 64");
            *d = e.0.map(|v| v.code());
            if let Some(b) = e.binary_pattern() {
                *p = b;
            }
        }
        Tables {
            gates,
            images,
            digits,
            pattern_of,
        }
    })
}

/// Current entry index of each binary input pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) struct Trajectory([u8; PATTERNS]);

impl Trajectory {
    pub fn start() -> Self {
        Trajectory(std::array::from_fn(|p| pattern_entry_index(p as u8) as u8))
    }

    /// Target trajectory realising `g` with binary outputs.
    pub fn of_binperm(g: &BinPerm) -> Self {
        Trajectory(g.images().map(|y| pattern_entry_index(y) as u8))
    }

    /// Applies generator `gi`; `None` if some binary input hits the banned set.
    #[inline]
    pub fn step(&self, gi: usize) -> Option<Self> {
        let table = &tables().images[gi];
        let mut out = [0u8; PATTERNS];
        for (o, &e) in out.iter_mut().zip(&self.0) {
            let y = table[e as usize];
            if y == BANNED {
                return None;
            }
            *o = y;
        }
        Some(Trajectory(out))
    }

    pub fn binperm(&self) -> Option<BinPerm> {
        let t = tables();
        let mut images = [0u8; PATTERNS];
        for (o, &e) in images.iter_mut().zip(&self.0) {
            let p = t.pattern_of[e as usize];
            if p == BANNED {
                return None;
            }
            *o = p;
        }
        BinPerm::new(images).ok()
    }

    /// Admissible lower bound on gates needed to reach `target`: every gate
    /// changes at most one wire of each entry.
    fn distance(&self, target: &Trajectory) -> u32 {
        let d = &tables().digits;
        self.0
            .iter()
            .zip(&target.0)
            .map(|(&a, &b)| {
                let (a, b) = (&d[a as usize], &d[b as usize]);
                (0..3).filter(|&w| a[w] != b[w]).count() as u32
            })
            .max()
            .unwrap_or(0)
    }
}

pub(crate) fn generator(gi: usize) -> Gate {
    tables().gates[gi]
}

pub(crate) fn generator_count() -> usize {
    tables().gates.len()
}

/// Finds the lexicographically smallest NOT-free word of exactly `depth`
/// gates whose binary trajectory equals `target`.
pub(crate) struct ExactDepthSearch {
    target: Trajectory,
    /// Trajectories already shown to fail with the given remaining depth.
    failed: HashMap<Trajectory, u32>,
    pub nodes: u64,
}

impl ExactDepthSearch {
    pub fn new(target: &BinPerm) -> Self {
        ExactDepthSearch {
            target: Trajectory::of_binperm(target),
            failed: HashMap::new(),
            nodes: 0,
        }
    }

    pub fn run(&mut self, depth: u32) -> Option<Circuit> {
        let mut word = Vec::with_capacity(depth as usize);
        self.dfs(Trajectory::start(), depth, &mut word)
            .then(|| word.into_iter().map(generator).collect())
    }

    fn dfs(&mut self, state: Trajectory, remaining: u32, word: &mut Vec<usize>) -> bool {
        self.nodes += 1;
        if remaining == 0 {
            return state == self.target;
        }
        if state.distance(&self.target) > remaining {
            return false;
        }
        if self.failed.get(&state).is_some_and(|&r| r == remaining) {
            return false;
        }
        for gi in 0..generator_count() {
            if let Some(next) = state.step(gi) {
                word.push(gi);
                if self.dfs(next, remaining - 1, word) {
                    return true;
                }
                word.pop();
            }
        }
        self.failed.insert(state, remaining);
        false
    }
}

/// Visits every NOT-free word of exactly `depth` gates that keeps all binary
/// inputs inside the domain, in lexicographic order.
pub(crate) fn for_each_word(depth: u32, mut visit: impl FnMut(&[usize], &Trajectory)) {
    fn go(
        state: Trajectory,
        remaining: u32,
        word: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize], &Trajectory),
    ) {
        if remaining == 0 {
            visit(word, &state);
            return;
        }
        for gi in 0..generator_count() {
            if let Some(next) = state.step(gi) {
                word.push(gi);
                go(next, remaining - 1, word, visit);
                word.pop();
            }
        }
    }
    let mut word = Vec::with_capacity(depth as usize);
    go(Trajectory::start(), depth, &mut word, &mut visit);
}

pub(crate) fn word_to_circuit(word: &[usize]) -> Circuit {
    word.iter().map(|&gi| generator(gi)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binperm::restricted_perm;
    use crate::gate::circuit_perm;

    #[test]
    fn trajectory_agrees_with_partial_perm() {
        let mut count = 0;
        for_each_word(3, |word, t| {
            count += 1;
            let c = word_to_circuit(word);
            assert_eq!(t.binperm(), restricted_perm(&circuit_perm(&c)));
        });
        assert!(count > 0);
    }

    #[test]
    fn exact_depth_finds_cnot_and_respects_depth() {
        let g = restricted_perm(&Gate::cnot(0, 2).perm()).unwrap();
        let mut s = ExactDepthSearch::new(&g);
        assert_eq!(s.run(0), None);
        assert_eq!(s.run(1), Some(Circuit::new(vec![Gate::cnot(0, 2)])));
        let mut s = ExactDepthSearch::new(&BinPerm::IDENTITY);
        assert_eq!(s.run(0), Some(Circuit::empty()));
        // lexicographically first identity word of length 2
        assert_eq!(
            s.run(2),
            Some(Circuit::new(vec![Gate::cnot(0, 1), Gate::cnot(0, 1)]))
        );
    }

    #[test]
    fn distance_is_zero_on_target() {
        let t = Trajectory::start();
        assert_eq!(t.distance(&t), 0);
    }
}
