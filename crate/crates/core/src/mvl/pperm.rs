// SPDX-License-Identifier: Apache-2.0

//! Partial injections on the 64 truth-table entries.
//!
//! A gate or cascade is modelled as a partial permutation: the domain holds
//! the entries on which it is defined, and its complement is the banned set
//! (entries that would drive a control wire with a non-binary value).
//! Composition is left to right, matching circuit diagram order.

use std::fmt;

use super::value::ENTRY_COUNT;
use crate::error::RangeError;

/// Partial injective map on entry indices `0..64`.
///
/// Images outside the domain are stored as zero so that derived equality and
/// hashing compare exactly `(domain, map restricted to domain)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialPerm {
    domain: u64,
    images: [u8; ENTRY_COUNT],
}

impl PartialPerm {
    pub const fn identity() -> Self {
        let mut images = [0u8; ENTRY_COUNT];
        let mut i = 0;
        while i < ENTRY_COUNT {
            images[i] = i as u8;
            i += 1;
        }
        PartialPerm {
            domain: u64::MAX,
            images,
        }
    }

    pub const fn empty() -> Self {
        PartialPerm {
            domain: 0,
            images: [0u8; ENTRY_COUNT],
        }
    }

    /// Builds a partial permutation from `(input, output)` pairs.
    ///
    /// Fails when an index is out of range, an input repeats, or two inputs
    /// share an image.
    pub fn from_pairs<I>(pairs: I) -> Result<Self, PermBuildError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut p = PartialPerm::empty();
        let mut image_set = 0u64;
        for (x, y) in pairs {
            for v in [x, y] {
                if v >= ENTRY_COUNT {
                    return Err(RangeError::new("entry index", v, ENTRY_COUNT - 1).into());
                }
            }
            if p.domain & (1 << x) != 0 {
                return Err(PermBuildError::DuplicateInput(x));
            }
            if image_set & (1 << y) != 0 {
                return Err(PermBuildError::DuplicateImage(y));
            }
            p.domain |= 1 << x;
            image_set |= 1 << y;
            p.images[x] = y as u8;
        }
        Ok(p)
    }

    /// Builds a partial permutation from a function returning `None` on the
    /// banned set. Panics if the function is not injective.
    pub fn from_fn(mut f: impl FnMut(usize) -> Option<usize>) -> Self {
        Self::from_pairs((0..ENTRY_COUNT).filter_map(|x| f(x).map(|y| (x, y))))
            .expect("from_fn requires an injective map on entry indices")
    }

    pub const fn domain_mask(&self) -> u64 {
        self.domain
    }

    pub const fn banned_mask(&self) -> u64 {
        !self.domain
    }

    pub fn domain_size(&self) -> usize {
        self.domain.count_ones() as usize
    }

    pub fn is_total(&self) -> bool {
        self.domain == u64::MAX
    }

    pub fn contains(&self, x: usize) -> bool {
        x < ENTRY_COUNT && self.domain & (1 << x) != 0
    }

    pub fn apply(&self, x: usize) -> Option<usize> {
        self.contains(x).then(|| self.images[x] as usize)
    }

    pub fn image_mask(&self) -> u64 {
        self.iter().fold(0, |m, (_, y)| m | (1 << y))
    }

    /// Iterates over `(input, image)` pairs in input order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..ENTRY_COUNT)
            .filter(move |&x| self.domain & (1 << x) != 0)
            .map(move |x| (x, self.images[x] as usize))
    }

    /// `self` then `next`: `(self ; next)(x) = next(self(x))`.
    pub fn compose(&self, next: &PartialPerm) -> PartialPerm {
        let mut out = PartialPerm::empty();
        let mut rest = self.domain;
        while rest != 0 {
            let x = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let y = self.images[x] as usize;
            if next.domain & (1 << y) != 0 {
                out.domain |= 1 << x;
                out.images[x] = next.images[y];
            }
        }
        out
    }

    pub fn inverse(&self) -> PartialPerm {
        let mut out = PartialPerm::empty();
        for (x, y) in self.iter() {
            out.domain |= 1 << y;
            out.images[y] = x as u8;
        }
        out
    }

    /// Identity restricted to `mask`.
    pub fn partial_identity(mask: u64) -> PartialPerm {
        let mut out = PartialPerm::identity();
        out.domain = mask;
        for x in 0..ENTRY_COUNT {
            if mask & (1 << x) == 0 {
                out.images[x] = 0;
            }
        }
        out
    }
}

impl Default for PartialPerm {
    fn default() -> Self {
        PartialPerm::identity()
    }
}

impl fmt::Debug for PartialPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.iter()).finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PermBuildError {
    #[error(transparent)]
    Range(#[from] RangeError),
    #[error("entry {0} appears twice as an input")]
    DuplicateInput(usize),
    #[error("entry {0} appears twice as an image")]
    DuplicateImage(usize),
}

pub fn pp_identity() -> PartialPerm {
    PartialPerm::identity()
}

pub fn pp_compose(f: &PartialPerm, g: &PartialPerm) -> PartialPerm {
    f.compose(g)
}

pub fn pp_inverse(f: &PartialPerm) -> PartialPerm {
    f.inverse()
}

pub fn pp_apply(f: &PartialPerm, x: usize) -> Option<usize> {
    f.apply(x)
}
