// SPDX-License-Identifier: Apache-2.0

//! Search and synthesis: the layered BFS producing `G[k]`, NOT-layer coset
//! machinery, minimum-cost synthesis and the `G[4]` analyses.

pub mod analysis;
pub mod database;
pub mod expressing;
pub mod finding;
mod trajectory;

pub use analysis::{
    classify_g4, not_layer_law_violations, s8_layer, validate_free_nots, verify_theorem2, FreeNotsReport,
    G4Member, G4Report, Theorem2Report,
};
pub use database::{CosetOrder, CostDatabase, DbEntry, RecordError, NOT_FREE_ORDER};
pub use expressing::{
    enumerate_impls_with, enumerate_min_impls, expressing, expressing_with, SynthError, Synthesis,
};
pub use finding::{
    finding, finding_complete, Finding, FindingError, FindingOptions, LayerStats, LayeredSearch, SearchLayer,
};
