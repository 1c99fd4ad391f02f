// SPDX-License-Identifier: Apache-2.0

//! Coset checks over a built database and the structure of `G[4]`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::database::{CosetOrder, CostDatabase, NOT_FREE_ORDER};
use super::expressing::{enumerate_min_impls, Synthesis};
use super::finding::{finding, FindingError, FindingOptions};
use crate::binperm::{is_universal, restricted_perm, BinPerm, NotLayer, PermSet, S8_ORDER};
use crate::gate::{circuit_perm, conjugate_by_wire_perm, two_qubit_gates, Circuit, GateKind, WirePerm};

/// `{ a * g : a in N, g in G[k] }` under the database's coset order.
pub fn s8_layer(db: &CostDatabase, k: u32) -> BTreeSet<BinPerm> {
    let order = db.order();
    db.layer_perms(k)
        .iter()
        .flat_map(|g| NotLayer::all().map(move |a| order.combine(&a.as_binperm(), g)))
        .collect()
}

/// `(cost, mask)` of one product `a * g`.
pub type Origin = (u32, u8);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theorem2Report {
    pub max_cost: u32,
    pub order: CosetOrder,
    /// `(|G[k]|, |S8[k]|)` per cost.
    pub layer_sizes: Vec<(usize, usize)>,
    /// Distinct elements across all `S8[k]` layers.
    pub s8_distinct: usize,
    /// Products `a * g` that coincide: `(first (k, mask), second (k, mask), element)`.
    pub layer_collisions: Vec<(Origin, Origin, BinPerm)>,
    /// Mask pairs `a != b` with `a*G ∩ b*G` non-empty.
    pub coset_overlaps: Vec<(u8, u8)>,
    /// Targets in the covered set whose number of NOT-free residuals is not 1.
    pub residual_violations: Vec<(BinPerm, usize)>,
    pub complete: bool,
    /// `|∪ G[k]|` and `|∪ S8[k]|`; checked against 5040 / 40320 when complete.
    pub g_total: usize,
    pub s8_total: usize,
    pub diameter: Option<u32>,
}

impl Theorem2Report {
    pub fn passed(&self) -> bool {
        let totals_ok = !self.complete || (self.g_total == NOT_FREE_ORDER && self.s8_total == S8_ORDER);
        self.layer_collisions.is_empty()
            && self.coset_overlaps.is_empty()
            && self.residual_violations.is_empty()
            && totals_ok
    }
}

/// Checks the NOT-layer coset decomposition over everything in `db`.
pub fn verify_theorem2(db: &CostDatabase) -> Theorem2Report {
    let order = db.order();
    let mut owner: HashMap<BinPerm, (u32, u8)> = HashMap::new();
    let mut collisions = Vec::new();
    let mut cosets: Vec<PermSet> = (0..8).map(|_| PermSet::new()).collect();
    let mut layer_sizes = Vec::new();

    for k in 0..=db.max_cost() {
        let layer = db.layer_perms(k);
        let s8 = s8_layer(db, k);
        layer_sizes.push((layer.len(), s8.len()));
        for g in &layer {
            for a in NotLayer::all() {
                let x = order.combine(&a.as_binperm(), g);
                cosets[a.mask() as usize].insert(&x);
                if let Some(&prev) = owner.get(&x) {
                    collisions.push((prev, (k, a.mask()), x));
                } else {
                    owner.insert(x, (k, a.mask()));
                }
            }
        }
    }

    let mut coset_overlaps = Vec::new();
    for a in 0..8u8 {
        for b in (a + 1)..8 {
            if cosets[a as usize]
                .ranks()
                .any(|r| cosets[b as usize].contains_rank(r))
            {
                coset_overlaps.push((a, b));
            }
        }
    }

    let mut residual_violations = Vec::new();
    for x in owner.keys() {
        let hits = NotLayer::all()
            .filter(|a| db.contains(&order.residual(&a.as_binperm(), x)))
            .count();
        if hits != 1 {
            residual_violations.push((*x, hits));
        }
    }
    residual_violations.sort();

    Theorem2Report {
        max_cost: db.max_cost(),
        order,
        layer_sizes,
        s8_distinct: owner.len(),
        layer_collisions: collisions,
        coset_overlaps,
        residual_violations,
        complete: db.is_complete(),
        g_total: db.len(),
        s8_total: owner.len(),
        diameter: db.diameter(),
    }
}

/// A member of `G[4]` that has no all-CNOT implementation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct G4Member {
    pub perm: BinPerm,
    pub witness: Circuit,
    /// All cost-4 implementations.
    pub implementations: Vec<Synthesis>,
    /// `(controlled-V gates, CNOT gates)` counts appearing among the implementations.
    pub compositions: BTreeSet<(usize, usize)>,
    pub universal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct G4Report {
    pub total: usize,
    pub feynman_only: Vec<BinPerm>,
    pub controlled: Vec<G4Member>,
    /// Orbits of the controlled members under the six wire permutations.
    pub orbits: Vec<Vec<BinPerm>>,
}

impl G4Report {
    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.orbits.iter().map(Vec::len).collect()
    }

    pub fn all_universal(&self) -> bool {
        self.controlled.iter().all(|m| m.universal)
    }

    /// True when every implementation of every controlled member uses three
    /// controlled-V gates and one CNOT.
    pub fn all_three_roots_one_cnot(&self) -> bool {
        self.controlled
            .iter()
            .all(|m| m.compositions.iter().all(|&c| c == (3, 1)))
    }
}

fn composition(c: &Circuit) -> (usize, usize) {
    let roots = c.gates().iter().filter(|g| g.kind().is_controlled_root()).count();
    let cnots = c.gates().iter().filter(|g| g.kind() == GateKind::Cnot).count();
    (roots, cnots)
}

/// Restrictions of all length-`k` words over the six CNOT gates.
fn cnot_word_functions(k: u32) -> PermSet {
    let cnots: Vec<BinPerm> = two_qubit_gates()
        .iter()
        .filter(|g| g.kind() == GateKind::Cnot)
        .map(|g| restricted_perm(&circuit_perm(&Circuit::new(vec![*g]))).expect("CNOT is binary"))
        .collect();
    let mut level = vec![BinPerm::IDENTITY];
    for _ in 0..k {
        level = level
            .iter()
            .flat_map(|p| cnots.iter().map(move |c| p.compose(c)))
            .collect();
    }
    let mut set = PermSet::new();
    for p in &level {
        set.insert(p);
    }
    set
}

/// Splits `G[4]` into functions with an all-CNOT length-4 word and the rest,
/// and groups the rest into wire-permutation orbits.
pub fn classify_g4(db: &CostDatabase) -> G4Report {
    assert!(db.max_cost() >= 4, "classify_g4 needs a database built to cost 4");
    let cnot_words = cnot_word_functions(4);
    let mut feynman_only = Vec::new();
    let mut controlled = Vec::new();
    for (g, &r) in db.layer_perms(4).iter().zip(db.layer(4)) {
        if cnot_words.contains_rank(r) {
            feynman_only.push(*g);
            continue;
        }
        let witness = db.lookup(g).expect("layer member has a record").witness.clone();
        let implementations = enumerate_min_impls(g, 4);
        let compositions = implementations.iter().map(|s| composition(&s.circuit)).collect();
        controlled.push(G4Member {
            perm: *g,
            witness,
            implementations,
            compositions,
            universal: is_universal(g),
        });
    }

    let members: BTreeSet<BinPerm> = controlled.iter().map(|m| m.perm).collect();
    let mut assigned = BTreeSet::new();
    let mut orbits = Vec::new();
    for m in &controlled {
        if assigned.contains(&m.perm) {
            continue;
        }
        let orbit: BTreeSet<BinPerm> = WirePerm::all()
            .iter()
            .filter_map(|s| restricted_perm(&circuit_perm(&conjugate_by_wire_perm(&m.witness, s))))
            .collect();
        debug_assert!(orbit.is_subset(&members));
        assigned.extend(orbit.iter().copied());
        orbits.push(orbit.into_iter().collect());
    }

    G4Report {
        total: db.layer(4).len(),
        feynman_only,
        controlled,
        orbits,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeNotsReport {
    pub max_cost: u32,
    pub checked: usize,
    /// `(function, NOT-free cost, cost with free NOTs)`.
    pub mismatches: Vec<(BinPerm, u32, Option<u32>)>,
    /// `|S8[k]|` as reached by the free-NOT search.
    pub free_layer_sizes: Vec<usize>,
}

impl FreeNotsReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares NOT-free costs with costs when NOT gates may appear anywhere at
/// cost 0, for every function in `G[0..=max_cost]`.
pub fn validate_free_nots(max_cost: u32, opts: &FindingOptions) -> Result<FreeNotsReport, FindingError> {
    let base = finding(
        max_cost,
        &FindingOptions {
            free_nots: false,
            ..opts.clone()
        },
    )?;
    let free = finding(
        max_cost,
        &FindingOptions {
            free_nots: true,
            ..opts.clone()
        },
    )?;
    let mut mismatches = Vec::new();
    let mut checked = 0;
    for (r, e) in base.db.records() {
        let g = BinPerm::unrank(r).expect("valid rank");
        checked += 1;
        let free_cost = free.db.cost_of(&g);
        if free_cost != Some(e.cost) {
            mismatches.push((g, e.cost, free_cost));
        }
    }
    Ok(FreeNotsReport {
        max_cost,
        checked,
        mismatches,
        free_layer_sizes: free.db.layer_sizes(),
    })
}

/// `(mask, |a * G[<=k]|)` per NOT layer, keyed by mask.
pub fn coset_sizes(db: &CostDatabase) -> BTreeMap<u8, usize> {
    let order = db.order();
    NotLayer::all()
        .map(|a| {
            let n = (0..=db.max_cost())
                .flat_map(|k| db.layer_perms(k))
                .map(|g| order.combine(&a.as_binperm(), &g))
                .collect::<BTreeSet<_>>()
                .len();
            (a.mask(), n)
        })
        .collect()
}

/// Exhaustive check that the NOT layers form an elementary abelian group of
/// order 8 acting on binary patterns and four-valued entries alike. Returns
/// the number of failed checks.
pub fn not_layer_law_violations() -> usize {
    let all: Vec<NotLayer> = NotLayer::all().collect();
    let id = NotLayer::new(0).expect("mask 0");
    let mut bad = 0;
    let mut check = |ok: bool| bad += usize::from(!ok);
    let images: BTreeSet<BinPerm> = all.iter().map(NotLayer::as_binperm).collect();
    check(images.len() == 8);
    for a in &all {
        check(a.compose(&id) == *a && id.compose(a) == *a);
        check(a.compose(a) == id);
        check(a.as_partial_perm().is_total());
        check(restricted_perm(&a.as_partial_perm()) == Some(a.as_binperm()));
        check(restricted_perm(&circuit_perm(&Circuit::new(a.gates()))) == Some(a.as_binperm()));
        for b in &all {
            check(a.compose(b) == b.compose(a));
            check(a.compose(b).as_binperm() == a.as_binperm().compose(&b.as_binperm()));
            check(a.compose(b).as_partial_perm() == a.as_partial_perm().compose(&b.as_partial_perm()));
            for c in &all {
                check(a.compose(b).compose(c) == a.compose(&b.compose(c)));
            }
        }
    }
    bad
}
