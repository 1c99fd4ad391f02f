// SPDX-License-Identifier: Apache-2.0

//! Four-valued logic: qubit values, truth-table entries and partial
//! permutations over them.

pub mod oracle;
pub mod pperm;
pub mod value;

pub use oracle::{unitary_value_oracle, OracleReport};
pub use pperm::{pp_apply, pp_compose, pp_identity, pp_inverse, PartialPerm, PermBuildError};
pub use value::{
    entry_from_index, entry_index, pattern_entry_index, value_map, Entry, QValue, ValueOp, ENTRY_COUNT, WIRES,
};
