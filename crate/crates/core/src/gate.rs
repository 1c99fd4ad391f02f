// SPDX-License-Identifier: Apache-2.0

//! Gate catalog, circuits and their partial-permutation semantics.

use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::mvl::{entry_from_index, value_map, Entry, PartialPerm, QValue, ValueOp, ENTRY_COUNT, WIRES};

/// Gate kinds in canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    Not,
    Cnot,
    Cv,
    Cvdg,
}

impl GateKind {
    pub const fn value_op(self) -> ValueOp {
        match self {
            GateKind::Not | GateKind::Cnot => ValueOp::Not,
            GateKind::Cv => ValueOp::V,
            GateKind::Cvdg => ValueOp::Vdag,
        }
    }

    pub const fn is_controlled(self) -> bool {
        !matches!(self, GateKind::Not)
    }

    /// CV or CVDG.
    pub const fn is_controlled_root(self) -> bool {
        matches!(self, GateKind::Cv | GateKind::Cvdg)
    }

    pub const fn cost(self) -> u32 {
        match self {
            GateKind::Not => 0,
            _ => 1,
        }
    }

    pub const fn mnemonic(self) -> &'static str {
        match self {
            GateKind::Not => "NOT",
            GateKind::Cnot => "CNOT",
            GateKind::Cv => "CV",
            GateKind::Cvdg => "CVDG",
        }
    }

    pub const fn inverse(self) -> Self {
        match self {
            GateKind::Cv => GateKind::Cvdg,
            GateKind::Cvdg => GateKind::Cv,
            k => k,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GateError {
    #[error("wire {0} out of range (0..=2)")]
    BadWire(u8),
    #[error("control and target are both wire {0}")]
    ControlIsTarget(u8),
    #[error("{0} gate requires a control wire")]
    MissingControl(&'static str),
    #[error("NOT gate takes no control wire")]
    UnexpectedControl,
}

/// A gate: kind, target wire, and control wire for the controlled kinds.
///
/// Ordering is the canonical enumeration order: kind, then control, then target.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gate {
    kind: GateKind,
    control: Option<u8>,
    target: u8,
}

impl Gate {
    pub fn new(kind: GateKind, control: Option<u8>, target: u8) -> Result<Self, GateError> {
        if target as usize >= WIRES {
            return Err(GateError::BadWire(target));
        }
        match (kind.is_controlled(), control) {
            (false, Some(_)) => return Err(GateError::UnexpectedControl),
            (true, None) => return Err(GateError::MissingControl(kind.mnemonic())),
            (true, Some(c)) if c as usize >= WIRES => return Err(GateError::BadWire(c)),
            (true, Some(c)) if c == target => return Err(GateError::ControlIsTarget(c)),
            _ => {}
        }
        Ok(Gate {
            kind,
            control,
            target,
        })
    }

    fn controlled(kind: GateKind, c: u8, t: u8) -> Self {
        Gate::new(kind, Some(c), t).expect("invalid wire pair")
    }

    /// Panics on an invalid wire.
    pub fn not(t: u8) -> Self {
        Gate::new(GateKind::Not, None, t).expect("invalid wire")
    }

    /// Panics on an invalid wire pair.
    pub fn cnot(c: u8, t: u8) -> Self {
        Gate::controlled(GateKind::Cnot, c, t)
    }

    pub fn cv(c: u8, t: u8) -> Self {
        Gate::controlled(GateKind::Cv, c, t)
    }

    pub fn cvdg(c: u8, t: u8) -> Self {
        Gate::controlled(GateKind::Cvdg, c, t)
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn control(&self) -> Option<u8> {
        self.control
    }

    pub fn target(&self) -> u8 {
        self.target
    }

    pub fn cost(&self) -> u32 {
        self.kind.cost()
    }

    pub fn inverse(&self) -> Gate {
        Gate {
            kind: self.kind.inverse(),
            ..*self
        }
    }

    pub fn relabel(&self, sigma: &WirePerm) -> Gate {
        Gate {
            kind: self.kind,
            control: self.control.map(|c| sigma.apply(c)),
            target: sigma.apply(self.target),
        }
    }

    /// Position in [`gate_catalog`].
    pub fn catalog_index(&self) -> usize {
        catalog()
            .iter()
            .position(|g| g == self)
            .expect("every valid gate is in the catalog")
    }

    /// Applies the gate to a single entry; `None` if the entry is banned.
    pub fn apply_entry(&self, e: Entry) -> Option<Entry> {
        let t = self.target as usize;
        let fire = match self.control {
            None => true,
            Some(c) => match e.wire(c as usize) {
                QValue::B0 => false,
                QValue::B1 => true,
                QValue::V0 | QValue::V1 => return None,
            },
        };
        Some(if fire {
            e.with_wire(t, value_map(self.kind.value_op(), e.wire(t)))
        } else {
            e
        })
    }

    pub fn perm(&self) -> PartialPerm {
        gate_perm(self)
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.control {
            None => write!(f, "{}({})", self.kind.mnemonic(), self.target),
            Some(c) => write!(f, "{}({},{})", self.kind.mnemonic(), c, self.target),
        }
    }
}

impl fmt::Debug for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Number of gates in the catalog.
pub const GATE_COUNT: usize = 21;

fn catalog() -> &'static [Gate; GATE_COUNT] {
    static CATALOG: OnceLock<[Gate; GATE_COUNT]> = OnceLock::new();
    CATALOG.get_or_init(|| {
        let mut gates = Vec::with_capacity(GATE_COUNT);
        gates.extend((0..WIRES as u8).map(Gate::not));
        for kind in [GateKind::Cnot, GateKind::Cv, GateKind::Cvdg] {
            for c in 0..WIRES as u8 {
                for t in 0..WIRES as u8 {
                    if c != t {
                        gates.push(Gate::controlled(kind, c, t));
                    }
                }
            }
        }
        debug_assert!(gates.windows(2).all(|w| w[0] < w[1]));
        gates.try_into().expect("21 gates")
    })
}

/// All 21 gates in canonical order: NOTs by target, then CNOT, CV, CVDG by
/// `(control, target)`.
pub fn gate_catalog() -> Vec<Gate> {
    catalog().to_vec()
}

/// The 18 two-qubit gates in canonical order.
pub fn two_qubit_gates() -> Vec<Gate> {
    catalog()[WIRES..].to_vec()
}

pub fn not_gates() -> Vec<Gate> {
    catalog()[..WIRES].to_vec()
}

fn perm_table() -> &'static [PartialPerm; GATE_COUNT] {
    static TABLE: OnceLock<[PartialPerm; GATE_COUNT]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let v: Vec<PartialPerm> = catalog().iter().map(build_gate_perm).collect();
        v.try_into().expect("21 gate perms")
    })
}

fn build_gate_perm(g: &Gate) -> PartialPerm {
    PartialPerm::from_fn(|x| {
        let e = entry_from_index(x).expect("x < 64");
        g.apply_entry(e).map(|y| y.index())
    })
}

/// Semantics of a single gate: total for NOT; for controlled gates the domain
/// is the 32 entries whose control wire is binary.
pub fn gate_perm(g: &Gate) -> PartialPerm {
    perm_table()[g.catalog_index()]
}

/// Entry-level image table of a gate, `0xFF` on the banned set.
pub fn gate_entry_table(g: &Gate) -> [u8; ENTRY_COUNT] {
    let p = gate_perm(g);
    let mut t = [0xFFu8; ENTRY_COUNT];
    for (x, y) in p.iter() {
        t[x] = y as u8;
    }
    t
}

/// A bijection of the wires `{0, 1, 2}`: wire `w` is relabelled `map[w]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WirePerm([u8; WIRES]);

impl WirePerm {
    pub fn new(map: [u8; WIRES]) -> Option<Self> {
        let mut seen = [false; WIRES];
        for &w in &map {
            if w as usize >= WIRES || std::mem::replace(&mut seen[w as usize], true) {
                return None;
            }
        }
        Some(WirePerm(map))
    }

    pub const fn identity() -> Self {
        WirePerm([0, 1, 2])
    }

    pub fn swap(a: u8, b: u8) -> Option<Self> {
        let mut m = [0, 1, 2];
        m.swap(a as usize, b as usize);
        WirePerm::new(m)
    }

    /// All six wire permutations, lexicographic.
    pub fn all() -> Vec<WirePerm> {
        const P: [[u8; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        P.iter().map(|&m| WirePerm(m)).collect()
    }

    pub fn apply(&self, w: u8) -> u8 {
        self.0[w as usize]
    }

    pub fn map(&self) -> [u8; WIRES] {
        self.0
    }

    /// Moves the value on wire `w` to wire `map[w]`.
    pub fn relabel_entry(&self, e: Entry) -> Entry {
        let mut out = e;
        for w in 0..WIRES {
            out.0[self.0[w] as usize] = e.0[w];
        }
        out
    }

    /// Conjugates a partial permutation by entry relabelling.
    pub fn relabel_perm(&self, p: &PartialPerm) -> PartialPerm {
        let r = |x: usize| self.relabel_entry(entry_from_index(x).expect("x < 64")).index();
        PartialPerm::from_pairs(p.iter().map(|(x, y)| (r(x), r(y))))
            .expect("relabelling preserves injectivity")
    }
}

/// An ordered gate sequence, leftmost gate applied first.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Circuit(Vec<Gate>);

impl Circuit {
    pub fn new(gates: Vec<Gate>) -> Self {
        Circuit(gates)
    }

    pub fn empty() -> Self {
        Circuit(Vec::new())
    }

    pub fn gates(&self) -> &[Gate] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, g: Gate) {
        self.0.push(g);
    }

    /// Number of two-qubit gates.
    pub fn cost(&self) -> u32 {
        self.0.iter().map(Gate::cost).sum()
    }

    pub fn is_not_free(&self) -> bool {
        self.0.iter().all(|g| g.kind() != GateKind::Not)
    }

    pub fn concat(&self, other: &Circuit) -> Circuit {
        Circuit(self.0.iter().chain(&other.0).copied().collect())
    }

    pub fn perm(&self) -> PartialPerm {
        circuit_perm(self)
    }
}

impl From<Vec<Gate>> for Circuit {
    fn from(v: Vec<Gate>) -> Self {
        Circuit(v)
    }
}

impl FromIterator<Gate> for Circuit {
    fn from_iter<I: IntoIterator<Item = Gate>>(iter: I) -> Self {
        Circuit(iter.into_iter().collect())
    }
}

impl fmt::Debug for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.0).finish()
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

pub fn circuit_perm(c: &Circuit) -> PartialPerm {
    c.0.iter()
        .fold(PartialPerm::identity(), |acc, g| acc.compose(&gate_perm(g)))
}

/// Reverses the sequence and swaps CV with CVDG.
pub fn circuit_inverse(c: &Circuit) -> Circuit {
    c.0.iter().rev().map(Gate::inverse).collect()
}

pub fn conjugate_by_wire_perm(c: &Circuit, sigma: &WirePerm) -> Circuit {
    c.0.iter().map(|g| g.relabel(sigma)).collect()
}
