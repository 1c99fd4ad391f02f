// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// An integer argument fell outside its valid range.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{what} {value} out of range (max {max})")]
pub struct RangeError {
    pub what: &'static str,
    pub value: usize,
    pub max: usize,
}

impl RangeError {
    pub fn new(what: &'static str, value: usize, max: usize) -> Self {
        RangeError { what, value, max }
    }
}
