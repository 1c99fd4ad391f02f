// SPDX-License-Identifier: Apache-2.0

//! Exact minimum-cost synthesis of 3-qubit reversible circuits over NOT,
//! CNOT, controlled-V and controlled-V-dagger gates.
//!
//! Each wire carries one of four values (`0`, `1`, `V|0>`, `V|1>`). Gates act
//! as partial permutations of the 64 resulting truth-table entries, undefined
//! wherever a control wire is non-binary. A breadth-first search over NOT-free
//! gate words yields, for every cost `k`, the set `G[k]` of reversible
//! functions whose cheapest NOT-free realisation uses `k` two-qubit gates.
//! Input-side NOT layers then extend this to all of S8.

pub mod binperm;
pub mod engine;
pub mod error;
pub mod format;
pub mod gate;
pub mod mvl;

pub use binperm::{BinPerm, NamedPerm, NotLayer};
pub use engine::{CosetOrder, CostDatabase, Finding, FindingOptions, Synthesis};
pub use gate::{Circuit, Gate, GateKind, WirePerm};
pub use mvl::{Entry, PartialPerm, QValue};
