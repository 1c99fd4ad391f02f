// SPDX-License-Identifier: Apache-2.0

//! Reversible 3-bit functions (elements of S8), the NOT group, ranking and
//! closure.
//!
//! Binary pattern `i` encodes the wires as `i = 4*v0 + 2*v1 + v2`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::error::RangeError;
use crate::gate::{two_qubit_gates, GateKind, WirePerm};
use crate::mvl::{pattern_entry_index, value_map, Entry, PartialPerm, QValue, ValueOp, WIRES};

pub const PATTERNS: usize = 8;

/// |S8|
pub const S8_ORDER: usize = 40320;

/// A permutation of the 8 binary patterns; `images[i]` is the output for input `i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinPerm([u8; PATTERNS]);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BinPermError {
    #[error("image {0} out of range (0..=7)")]
    OutOfRange(u8),
    #[error("image {0} appears more than once")]
    Duplicate(u8),
}

impl BinPerm {
    pub const IDENTITY: BinPerm = BinPerm([0, 1, 2, 3, 4, 5, 6, 7]);

    pub fn new(images: [u8; PATTERNS]) -> Result<Self, BinPermError> {
        let mut seen = 0u8;
        for &y in &images {
            if y as usize >= PATTERNS {
                return Err(BinPermError::OutOfRange(y));
            }
            if seen & (1 << y) != 0 {
                return Err(BinPermError::Duplicate(y));
            }
            seen |= 1 << y;
        }
        Ok(BinPerm(images))
    }

    pub fn identity() -> Self {
        BinPerm::IDENTITY
    }

    pub fn images(&self) -> [u8; PATTERNS] {
        self.0
    }

    pub fn apply(&self, x: u8) -> u8 {
        self.0[x as usize]
    }

    /// `self` then `next`.
    pub fn compose(&self, next: &BinPerm) -> BinPerm {
        BinPerm(self.0.map(|y| next.0[y as usize]))
    }

    pub fn inverse(&self) -> BinPerm {
        let mut out = [0u8; PATTERNS];
        for (x, &y) in self.0.iter().enumerate() {
            out[y as usize] = x as u8;
        }
        BinPerm(out)
    }

    pub fn is_identity(&self) -> bool {
        *self == BinPerm::IDENTITY
    }

    /// Lexicographic (Lehmer code) index in `0..40320`.
    pub fn rank(&self) -> usize {
        let mut r = 0;
        for i in 0..PATTERNS {
            let smaller_after = self.0[i + 1..].iter().filter(|&&y| y < self.0[i]).count();
            r = r * (PATTERNS - i) + smaller_after;
        }
        r
    }

    pub fn unrank(rank: usize) -> Result<BinPerm, RangeError> {
        if rank >= S8_ORDER {
            return Err(RangeError::new("permutation rank", rank, S8_ORDER - 1));
        }
        let mut digits = [0usize; PATTERNS];
        let mut r = rank;
        for i in (0..PATTERNS).rev() {
            let base = PATTERNS - i;
            digits[i] = r % base;
            r /= base;
        }
        let mut pool: Vec<u8> = (0..PATTERNS as u8).collect();
        let mut out = [0u8; PATTERNS];
        for (slot, &d) in out.iter_mut().zip(&digits) {
            *slot = pool.remove(d);
        }
        Ok(BinPerm(out))
    }

    /// Smallest `n >= 1` with `self^n = identity`.
    pub fn order(&self) -> usize {
        let mut p = *self;
        let mut n = 1;
        while !p.is_identity() {
            p = p.compose(self);
            n += 1;
        }
        n
    }

    /// Moves each input/output bit of wire `w` to wire `sigma[w]`.
    pub fn relabel_wires(&self, sigma: &WirePerm) -> BinPerm {
        let r = |p: u8| -> u8 {
            let mut out = 0u8;
            for w in 0..WIRES as u8 {
                if (p >> (2 - w)) & 1 == 1 {
                    out |= 1 << (2 - sigma.apply(w));
                }
            }
            out
        };
        let mut images = [0u8; PATTERNS];
        for x in 0..PATTERNS as u8 {
            images[r(x) as usize] = r(self.0[x as usize]);
        }
        BinPerm(images)
    }
}

impl fmt::Debug for BinPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for BinPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, y) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{y}")?;
        }
        Ok(())
    }
}

/// A layer of input-side NOT gates; bit `w` of the mask flips wire `w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NotLayer(u8);

impl NotLayer {
    pub fn new(mask: u8) -> Result<Self, RangeError> {
        if mask >= 8 {
            return Err(RangeError::new("NOT mask", mask as usize, 7));
        }
        Ok(NotLayer(mask))
    }

    pub fn all() -> impl Iterator<Item = NotLayer> {
        (0..8).map(NotLayer)
    }

    pub fn mask(&self) -> u8 {
        self.0
    }

    pub fn flips_wire(&self, w: usize) -> bool {
        self.0 & (1 << w) != 0
    }

    /// Pattern-level XOR mask (wire 0 is the high bit of a pattern).
    fn pattern_mask(&self) -> u8 {
        (0..WIRES)
            .filter(|&w| self.flips_wire(w))
            .fold(0, |m, w| m | (1 << (WIRES - 1 - w)))
    }

    pub fn as_binperm(&self) -> BinPerm {
        let m = self.pattern_mask();
        BinPerm(std::array::from_fn(|x| x as u8 ^ m))
    }

    pub fn as_partial_perm(&self) -> PartialPerm {
        PartialPerm::from_fn(|x| {
            let mut e = crate::mvl::entry_from_index(x).ok()?;
            for w in 0..WIRES {
                if self.flips_wire(w) {
                    e = e.with_wire(w, value_map(ValueOp::Not, e.wire(w)));
                }
            }
            Some(e.index())
        })
    }

    pub fn compose(&self, other: &NotLayer) -> NotLayer {
        NotLayer(self.0 ^ other.0)
    }

    /// NOT gates realising this layer, wire order.
    pub fn gates(&self) -> Vec<crate::gate::Gate> {
        (0..WIRES as u8)
            .filter(|&w| self.flips_wire(w as usize))
            .map(crate::gate::Gate::not)
            .collect()
    }
}

/// The function induced on the 8 binary entries, if they are all in the
/// domain and all map to binary entries.
pub fn restricted_perm(p: &PartialPerm) -> Option<BinPerm> {
    let mut images = [0u8; PATTERNS];
    for (x, slot) in images.iter_mut().enumerate() {
        let y = p.apply(pattern_entry_index(x as u8))?;
        *slot = crate::mvl::entry_from_index(y).ok()?.binary_pattern()?;
    }
    // a partial injection mapping S into S is a bijection of S
    Some(BinPerm(images))
}

/// The map from binary input patterns to (possibly non-binary) output
/// entries; `None` if some binary input is banned.
pub fn restricted_map(p: &PartialPerm) -> Option<[Entry; PATTERNS]> {
    let mut out = [Entry::new(QValue::B0, QValue::B0, QValue::B0); PATTERNS];
    for (x, slot) in out.iter_mut().enumerate() {
        let y = p.apply(pattern_entry_index(x as u8))?;
        *slot = crate::mvl::entry_from_index(y).ok()?;
    }
    Some(out)
}

pub fn bp_identity() -> BinPerm {
    BinPerm::IDENTITY
}

pub fn bp_compose(f: &BinPerm, g: &BinPerm) -> BinPerm {
    f.compose(g)
}

pub fn bp_inverse(f: &BinPerm) -> BinPerm {
    f.inverse()
}

pub fn rank(g: &BinPerm) -> usize {
    g.rank()
}

pub fn unrank(r: usize) -> Result<BinPerm, RangeError> {
    BinPerm::unrank(r)
}

/// Fixed-size membership set over S8 indexed by rank.
#[derive(Clone, PartialEq, Eq)]
pub struct PermSet {
    bits: Vec<u64>,
    len: usize,
}

impl PermSet {
    pub fn new() -> Self {
        PermSet {
            bits: vec![0; S8_ORDER.div_ceil(64)],
            len: 0,
        }
    }

    /// Returns true if newly inserted.
    pub fn insert(&mut self, p: &BinPerm) -> bool {
        self.insert_rank(p.rank())
    }

    pub fn insert_rank(&mut self, r: usize) -> bool {
        let (w, b) = (r / 64, r % 64);
        let fresh = self.bits[w] & (1 << b) == 0;
        if fresh {
            self.bits[w] |= 1 << b;
            self.len += 1;
        }
        fresh
    }

    pub fn contains(&self, p: &BinPerm) -> bool {
        self.contains_rank(p.rank())
    }

    pub fn contains_rank(&self, r: usize) -> bool {
        self.bits[r / 64] & (1 << (r % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn ranks(&self) -> impl Iterator<Item = usize> + '_ {
        (0..S8_ORDER).filter(|&r| self.contains_rank(r))
    }
}

impl Default for PermSet {
    fn default() -> Self {
        PermSet::new()
    }
}

impl fmt::Debug for PermSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PermSet({} elements)", self.len)
    }
}

fn closure_set(generators: &[BinPerm]) -> PermSet {
    let mut seen = PermSet::new();
    seen.insert(&BinPerm::IDENTITY);
    let mut work = vec![BinPerm::IDENTITY];
    while let Some(p) = work.pop() {
        for g in generators {
            let q = p.compose(g);
            if seen.insert(&q) {
                work.push(q);
            }
        }
    }
    seen
}

/// Subgroup of S8 generated by `generators`.
pub fn generate_closure<'a, I>(generators: I) -> BTreeSet<BinPerm>
where
    I: IntoIterator<Item = &'a BinPerm>,
{
    let gens: Vec<BinPerm> = generators.into_iter().copied().collect();
    closure_set(&gens)
        .ranks()
        .map(|r| BinPerm::unrank(r).expect("rank < 40320"))
        .collect()
}

/// Size of the generated subgroup, without materialising it.
pub fn closure_size<'a, I>(generators: I) -> usize
where
    I: IntoIterator<Item = &'a BinPerm>,
{
    let gens: Vec<BinPerm> = generators.into_iter().copied().collect();
    closure_set(&gens).len()
}

/// The three single-wire NOT layers.
pub fn single_not_layers() -> Vec<BinPerm> {
    (0..WIRES).map(|w| NotLayer(1 << w).as_binperm()).collect()
}

/// Binary restrictions of the six CNOT gates.
pub fn cnot_restrictions() -> Vec<BinPerm> {
    two_qubit_gates()
        .iter()
        .filter(|g| g.kind() == GateKind::Cnot)
        .map(|g| restricted_perm(&g.perm()).expect("CNOT preserves binary entries"))
        .collect()
}

/// Closure size of NOT layers, CNOTs and `g`.
pub fn universality_closure_size(g: &BinPerm) -> usize {
    let mut gens = single_not_layers();
    gens.extend(cnot_restrictions());
    gens.push(*g);
    closure_size(&gens)
}

/// True iff NOT gates, CNOT gates and `g` generate all of S8.
pub fn is_universal(g: &BinPerm) -> bool {
    universality_closure_size(g) == S8_ORDER
}

/// Well-known named reversible functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedPerm {
    Identity,
    Toffoli,
    Peres,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown permutation name `{0}` (expected toffoli, peres or identity)")]
pub struct UnknownName(pub String);

impl FromStr for NamedPerm {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "identity" => Ok(NamedPerm::Identity),
            "toffoli" => Ok(NamedPerm::Toffoli),
            "peres" => Ok(NamedPerm::Peres),
            _ => Err(UnknownName(s.to_string())),
        }
    }
}

impl NamedPerm {
    pub fn perm(self) -> BinPerm {
        let f: fn(u8, u8, u8) -> (u8, u8, u8) = match self {
            NamedPerm::Identity => |a, b, c| (a, b, c),
            // (A, B, C) -> (A, B, C ^ AB)
            NamedPerm::Toffoli => |a, b, c| (a, b, c ^ (a & b)),
            // (A, B, C) -> (A, A ^ B, C ^ AB)
            NamedPerm::Peres => |a, b, c| (a, a ^ b, c ^ (a & b)),
        };
        let images = std::array::from_fn(|x| {
            let x = x as u8;
            let (a, b, c) = f(x >> 2 & 1, x >> 1 & 1, x & 1);
            4 * a + 2 * b + c
        });
        BinPerm::new(images).expect("named functions are reversible")
    }
}

pub fn named_perm(name: &str) -> Result<BinPerm, UnknownName> {
    name.parse::<NamedPerm>().map(NamedPerm::perm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::{circuit_perm, gate_perm, Circuit, Gate};
    use proptest::prelude::*;

    fn bp(v: [u8; 8]) -> BinPerm {
        BinPerm::new(v).unwrap()
    }

    fn arb_binperm() -> impl Strategy<Value = BinPerm> {
        (0..S8_ORDER).prop_map(|r| BinPerm::unrank(r).unwrap())
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            BinPerm::new([0, 0, 2, 3, 4, 5, 6, 7]),
            Err(BinPermError::Duplicate(0))
        );
        assert_eq!(
            BinPerm::new([0, 1, 2, 3, 4, 5, 6, 8]),
            Err(BinPermError::OutOfRange(8))
        );
    }

    #[test]
    fn restricted_perm_examples() {
        assert_eq!(restricted_perm(&PartialPerm::identity()), Some(BinPerm::IDENTITY));
        let cnot02 = bp([0, 1, 2, 3, 5, 4, 7, 6]);
        assert_eq!(restricted_perm(&gate_perm(&Gate::cnot(0, 2))), Some(cnot02));
        assert_eq!(restricted_perm(&gate_perm(&Gate::cv(0, 2))), None);
        let vv = Circuit::new(vec![Gate::cv(0, 2), Gate::cv(0, 2)]);
        assert_eq!(restricted_perm(&circuit_perm(&vv)), Some(cnot02));
    }

    #[test]
    fn restricted_map_examples() {
        let m = restricted_map(&gate_perm(&Gate::cv(0, 2))).unwrap();
        assert_eq!(m[4].index(), 18);
        let id = restricted_map(&PartialPerm::identity()).unwrap();
        for p in 0..8u8 {
            assert_eq!(id[p as usize], Entry::from_pattern(p));
        }
        let c = Circuit::new(vec![Gate::cv(0, 1), Gate::cv(1, 2)]);
        assert!(restricted_map(&circuit_perm(&c)).is_none());
    }

    #[test]
    fn group_examples() {
        let g = bp([0, 1, 2, 3, 5, 4, 7, 6]);
        assert!(g.compose(&g).is_identity());
        assert!(g.compose(&g.inverse()).is_identity());
        assert_eq!(BinPerm::IDENTITY.compose(&g), g);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(BinPerm::IDENTITY.rank(), 0);
        assert_eq!(bp([7, 6, 5, 4, 3, 2, 1, 0]).rank(), 40319);
        assert!(BinPerm::unrank(40320).is_err());
        // rank order agrees with lexicographic order of image arrays
        let mut prev = BinPerm::unrank(0).unwrap();
        for r in 1..S8_ORDER {
            let cur = BinPerm::unrank(r).unwrap();
            assert!(prev < cur);
            assert_eq!(cur.rank(), r);
            prev = cur;
        }
    }

    #[test]
    fn not_layer_group_laws_exhaustive() {
        for a in NotLayer::all() {
            for b in NotLayer::all() {
                let ab = a.as_binperm().compose(&b.as_binperm());
                assert_eq!(ab.is_identity(), a == b);
                assert_eq!(ab, a.compose(&b).as_binperm());
                let pab = a.as_partial_perm().compose(&b.as_partial_perm());
                assert_eq!(pab == PartialPerm::identity(), a == b);
            }
            assert!(a.as_partial_perm().is_total());
            assert_eq!(restricted_perm(&a.as_partial_perm()), Some(a.as_binperm()));
            let x: [u8; 8] = std::array::from_fn(|i| i as u8);
            let m = a.as_binperm();
            for i in x {
                assert_eq!(m.apply(i), i ^ m.apply(0));
            }
        }
        assert!(NotLayer::new(8).is_err());
    }

    #[test]
    fn closure_examples() {
        assert_eq!(generate_closure(&[]).len(), 1);
        assert_eq!(closure_size(&single_not_layers()), 8);
        let mut gens = single_not_layers();
        gens.extend(cnot_restrictions());
        assert_eq!(closure_size(&gens), 1344);
        let affine = generate_closure(&gens);
        assert_eq!(generate_closure(&affine), affine);
        gens.push(NamedPerm::Toffoli.perm());
        assert_eq!(closure_size(&gens), 40320);
    }

    #[test]
    fn universality_examples() {
        assert!(!is_universal(&BinPerm::IDENTITY));
        assert_eq!(universality_closure_size(&BinPerm::IDENTITY), 1344);
        assert!(is_universal(&NamedPerm::Toffoli.perm()));
        assert!(is_universal(&NamedPerm::Peres.perm()));
    }

    #[test]
    fn named_examples() {
        assert_eq!(named_perm("toffoli").unwrap(), bp([0, 1, 2, 3, 4, 5, 7, 6]));
        assert_eq!(named_perm("peres").unwrap(), bp([0, 1, 2, 3, 6, 7, 5, 4]));
        assert_eq!(named_perm("identity").unwrap(), BinPerm::IDENTITY);
        assert!(named_perm("fredkin").is_err());
    }

    #[test]
    fn relabel_matches_circuit_conjugation() {
        let c = Circuit::new(vec![
            Gate::cnot(0, 1),
            Gate::cnot(1, 2),
            Gate::cv(0, 2),
            Gate::cv(0, 2),
        ]);
        let p = restricted_perm(&circuit_perm(&c)).unwrap();
        for sigma in WirePerm::all() {
            let conj = crate::gate::conjugate_by_wire_perm(&c, &sigma);
            assert_eq!(
                restricted_perm(&circuit_perm(&conj)).unwrap(),
                p.relabel_wires(&sigma)
            );
            assert_eq!(circuit_perm(&conj), sigma.relabel_perm(&circuit_perm(&c)));
        }
    }

    proptest! {
        #[test]
        fn rank_roundtrip(g in arb_binperm()) {
            prop_assert_eq!(BinPerm::unrank(g.rank()).unwrap(), g);
        }

        #[test]
        fn cyclic_closure_has_order_size(g in arb_binperm()) {
            prop_assert_eq!(closure_size(&[g]), g.order());
        }

        #[test]
        fn closure_monotone(a in arb_binperm(), b in arb_binperm()) {
            let small = generate_closure(&[a]);
            let big = generate_closure(&[a, b]);
            prop_assert!(small.is_subset(&big));
        }

        #[test]
        fn closure_idempotent_on_cyclic_groups(a in arb_binperm()) {
            let once = generate_closure(&[a]);
            prop_assert_eq!(generate_closure(&once), once);
        }

        #[test]
        fn group_laws(a in arb_binperm(), b in arb_binperm(), c in arb_binperm()) {
            prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
            prop_assert!(a.compose(&a.inverse()).is_identity());
            prop_assert_eq!(bp_identity().compose(&a), a);
        }
    }
}
