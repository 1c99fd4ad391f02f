// SPDX-License-Identifier: Apache-2.0

//! Acceptance suite. Prints one PASS/FAIL line per criterion followed by
//! indented detail, and exits nonzero if any criterion fails.

use std::fs;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use qsynth_core::binperm::{
    bp_compose, closure_size, cnot_restrictions, restricted_perm, single_not_layers, BinPerm, S8_ORDER,
};
use qsynth_core::engine::{
    classify_g4, enumerate_min_impls, expressing, finding, finding_complete, not_layer_law_violations,
    s8_layer, validate_free_nots, verify_theorem2, CosetOrder, FindingError, FindingOptions, NOT_FREE_ORDER,
};
use qsynth_core::format::{format_circuit, format_db, format_perm, parse_circuit, parse_db, parse_perm};
use qsynth_core::gate::{circuit_perm, gate_catalog, two_qubit_gates, Circuit, Gate, GateKind};
use qsynth_core::mvl::{pattern_entry_index, unitary_value_oracle, PartialPerm};
use qsynth_core::NamedPerm;

const EXPECTED_G: [usize; 6] = [1, 6, 30, 52, 84, 156];
const EXPECTED_S8: [usize; 6] = [8, 48, 240, 416, 672, 1248];
const EXPECTED_G6: usize = 398;
const EXPECTED_G7: usize = 540;
const EXPECTED_S8_TO_5: usize = 2632;
const FAST_LIMIT: Duration = Duration::from_secs(60);
const EXTENDED_LIMIT: Duration = Duration::from_secs(3600);
const MEMORY_CEILING: usize = 4 << 30;
const RANDOM_CASES: usize = 1000;

type Run = (Option<i32>, String);
type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    details: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            passed: true,
            details: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        let mark = if ok { "ok" } else { "MISMATCH" };
        self.details.push(format!("{mark}: {}", what.into()));
        self.passed &= ok;
    }

    fn note(&mut self, what: impl Into<String>) {
        self.details.push(format!("note: {}", what.into()));
    }
}

fn qsynth(args: &[&str]) -> Run {
    let o = Command::new(env!("CARGO_BIN_EXE_qsynth"))
        .args(args)
        .output()
        .expect("spawn qsynth");
    (o.status.code(), String::from_utf8_lossy(&o.stdout).into_owned())
}

fn field<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(": ")))
}

fn table_core() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let f = finding(5, &FindingOptions::default()).expect("no memory limit");
    let elapsed = start.elapsed();
    for k in 0..=5u32 {
        let g = f.db.layer(k).len();
        let s = s8_layer(&f.db, k).len();
        let (eg, es) = (EXPECTED_G[k as usize], EXPECTED_S8[k as usize]);
        o.check(
            g == eg && s == es,
            format!("k={k}: |G|={g} (expected {eg}), |S8|={s} (expected {es})"),
        );
    }
    o.check(elapsed < FAST_LIMIT, format!("finding(5) took {:.2?}", elapsed));
    o
}

fn table_extended() -> Outcome {
    let mut o = Outcome::new();
    let opts = FindingOptions {
        memory_limit: Some(MEMORY_CEILING),
        ..FindingOptions::default()
    };
    let start = Instant::now();
    match finding(7, &opts) {
        Ok(f) => {
            let elapsed = start.elapsed();
            let (g6, g7) = (f.db.layer(6).len(), f.db.layer(7).len());
            o.check(g6 == EXPECTED_G6, format!("|G[6]|={g6} (expected {EXPECTED_G6})"));
            o.check(g7 == EXPECTED_G7, format!("|G[7]|={g7} (expected {EXPECTED_G7})"));
            o.check(
                elapsed < EXTENDED_LIMIT,
                format!("finding(7) took {:.2?}", elapsed),
            );
            let peak = f.stats.iter().map(|s| s.states).max().unwrap_or(0);
            o.note(format!(
                "memory ceiling {MEMORY_CEILING} bytes; largest layer {peak} states"
            ));
        }
        Err(FindingError::BudgetExceeded { last_completed, .. }) => {
            o.check(
                false,
                format!("memory ceiling hit; achieved depth {last_completed}"),
            );
        }
    }
    o
}

fn verify_cli_witness(out: &str, target: &BinPerm) -> bool {
    let Some(gates) = field(out, "circuit") else {
        return false;
    };
    let text: String = gates.split(' ').map(|g| format!("{g}\n")).collect();
    match parse_circuit(&text) {
        Ok(c) => restricted_perm(&circuit_perm(&c)) == Some(*target),
        Err(_) => false,
    }
}

fn synthesis_regressions() -> Outcome {
    let mut o = Outcome::new();
    for (name, target, cost) in [
        ("peres", NamedPerm::Peres.perm(), "4"),
        ("toffoli", NamedPerm::Toffoli.perm(), "5"),
    ] {
        for extra in [&[][..], &["--dfs"][..]] {
            let mut args = vec!["synth", "--name", name];
            args.extend_from_slice(extra);
            let start = Instant::now();
            let (code, out) = qsynth(&args);
            let elapsed = start.elapsed();
            let got = field(&out, "cost").unwrap_or("?");
            let mode = if extra.is_empty() { "table" } else { "dfs" };
            o.check(
                code == Some(0) && got == cost,
                format!("synth {name} ({mode}): cost {got} (expected {cost}), exit {code:?}"),
            );
            o.check(
                verify_cli_witness(&out, &target),
                format!("{name} ({mode}) witness re-evaluates to target"),
            );
            o.check(
                elapsed < FAST_LIMIT,
                format!("{name} ({mode}) took {:.2?}", elapsed),
            );
        }
    }
    let (code, _) = qsynth(&["synth", "--name", "toffoli", "--bound", "4"]);
    o.check(
        code == Some(1),
        format!("toffoli with bound 4 exits {code:?} (expected 1)"),
    );
    o
}

fn implementation_counts() -> Outcome {
    let mut o = Outcome::new();
    let peres_witness = Circuit::new(vec![
        Gate::cv(1, 2),
        Gate::cnot(0, 1),
        Gate::cvdg(1, 2),
        Gate::cv(0, 2),
    ]);
    let toffoli_witness = Circuit::new(vec![
        Gate::cv(1, 2),
        Gate::cnot(0, 1),
        Gate::cvdg(1, 2),
        Gate::cnot(0, 1),
        Gate::cv(0, 2),
    ]);
    for (name, target, k, min, witness) in [
        ("peres", NamedPerm::Peres.perm(), 4, 2, peres_witness),
        ("toffoli", NamedPerm::Toffoli.perm(), 5, 4, toffoli_witness),
    ] {
        let impls = enumerate_min_impls(&target, k);
        o.check(
            impls.len() >= min,
            format!(
                "{name} at cost {k}: {} implementations (at least {min})",
                impls.len()
            ),
        );
        let found = impls
            .iter()
            .any(|s| s.circuit == witness && s.not_layer.mask() == 0);
        o.check(found, format!("{name} witness {witness} present"));
        o.check(
            impls.iter().all(|s| s.realizes(&target)),
            format!("{name} implementations re-evaluate"),
        );
    }
    let none = enumerate_min_impls(&NamedPerm::Toffoli.perm(), 4);
    o.check(
        none.is_empty(),
        format!("toffoli at cost 4: {} implementations (expected 0)", none.len()),
    );
    o
}

fn g4_analysis() -> Outcome {
    let mut o = Outcome::new();
    let db = finding(4, &FindingOptions::default())
        .expect("no memory limit")
        .db;
    let r = classify_g4(&db);
    o.check(r.total == 84, format!("|G[4]| = {}", r.total));
    o.check(
        r.feynman_only.len() == 60,
        format!("CNOT-only members: {} (expected 60)", r.feynman_only.len()),
    );
    o.check(
        r.controlled.len() == 24,
        format!("other members: {} (expected 24)", r.controlled.len()),
    );
    o.check(r.all_universal(), "all 24 are universal with NOT and CNOT");
    o.check(
        r.orbit_sizes() == vec![6; 4],
        format!("orbit sizes {:?} (expected four of 6)", r.orbit_sizes()),
    );
    o
}

fn coset_suite() -> Outcome {
    let mut o = Outcome::new();
    let db5 = finding(5, &FindingOptions::default())
        .expect("no memory limit")
        .db;
    let r5 = verify_theorem2(&db5);
    o.check(
        r5.layer_collisions.is_empty() && r5.coset_overlaps.is_empty(),
        format!(
            "cosets to k=5 disjoint ({} collisions, {} overlapping mask pairs)",
            r5.layer_collisions.len(),
            r5.coset_overlaps.len()
        ),
    );
    o.check(
        r5.s8_distinct == EXPECTED_S8_TO_5,
        format!(
            "distinct S8 elements to k=5: {} (expected {EXPECTED_S8_TO_5})",
            r5.s8_distinct
        ),
    );
    let laws = not_layer_law_violations();
    o.check(
        laws == 0,
        format!("NOT-layer group laws, exhaustive: {laws} violations"),
    );

    let full = finding_complete(&FindingOptions::default())
        .expect("no memory limit")
        .db;
    o.check(
        full.is_complete(),
        format!("search closes at cost {:?}", full.diameter()),
    );
    for order in [CosetOrder::NotFirst, CosetOrder::NotLast] {
        let mut d = full.clone();
        d.set_order(order);
        let r = verify_theorem2(&d);
        o.check(
            r.residual_violations.is_empty(),
            format!("{}: exactly one residual in G for every target", order.token()),
        );
        o.check(
            r.g_total == NOT_FREE_ORDER && r.s8_total == S8_ORDER && r.passed(),
            format!("{}: |G| = {}, coverage {}", order.token(), r.g_total, r.s8_total),
        );
    }
    o
}

fn binary_block_circuit(rng: &mut StdRng) -> Circuit {
    let catalog = gate_catalog();
    let mut c = Circuit::empty();
    for _ in 0..rng.gen_range(0..10) {
        let g = catalog[rng.gen_range(0..catalog.len())];
        c.push(g);
        if g.kind() == GateKind::Cv || g.kind() == GateKind::Cvdg || rng.gen_bool(0.5) {
            c.push(g);
        }
    }
    c
}

fn property_suites() -> Outcome {
    let mut o = Outcome::new();
    let mut rng = StdRng::seed_from_u64(0xacce);
    let catalog = gate_catalog();
    let random_pp = |rng: &mut StdRng| {
        let n = rng.gen_range(0..6);
        circuit_perm(&(0..n).map(|_| catalog[rng.gen_range(0..catalog.len())]).collect())
    };

    let mut bad = 0;
    for _ in 0..RANDOM_CASES {
        let (f, g, h) = (random_pp(&mut rng), random_pp(&mut rng), random_pp(&mut rng));
        let id = PartialPerm::identity();
        let fi = f.inverse();
        let ok = f.compose(&g).compose(&h) == f.compose(&g.compose(&h))
            && f.compose(&id) == f
            && id.compose(&f) == f
            && f.compose(&fi) == PartialPerm::partial_identity(f.domain_mask())
            && fi.compose(&f) == PartialPerm::partial_identity(f.image_mask())
            && fi.inverse() == f
            && f.compose(&g).inverse() == g.inverse().compose(&fi);
        bad += usize::from(!ok);
    }
    o.check(
        bad == 0,
        format!("partial-permutation laws on {RANDOM_CASES} random triples: {bad} failures"),
    );

    let oracle = unitary_value_oracle();
    o.check(
        oracle.passed(),
        format!(
            "exact unitary value oracle: {} checks, {} mismatches",
            oracle.checked,
            oracle.mismatches.len()
        ),
    );

    let pairs: Vec<(u8, u8)> = two_qubit_gates()
        .iter()
        .filter(|g| g.kind() == GateKind::Cnot)
        .map(|g| (g.control().expect("controlled"), g.target()))
        .collect();
    let squares_ok = pairs.iter().all(|&(c, t)| {
        let sq = circuit_perm(&Circuit::new(vec![Gate::cv(c, t), Gate::cv(c, t)]));
        let cnot = Gate::cnot(c, t).perm();
        (0..8u8).all(|b| {
            let x = pattern_entry_index(b);
            sq.apply(x) == cnot.apply(x)
        })
    });
    o.check(
        squares_ok && pairs.len() == 6,
        format!("CV^2 = CNOT on binary entries for {} wire pairs", pairs.len()),
    );

    let mut bad = 0;
    for _ in 0..RANDOM_CASES {
        let (a, b) = (binary_block_circuit(&mut rng), binary_block_circuit(&mut rng));
        let (pa, pb) = (circuit_perm(&a), circuit_perm(&b));
        let ok = match (restricted_perm(&pa), restricted_perm(&pb)) {
            (Some(ra), Some(rb)) => restricted_perm(&pa.compose(&pb)) == Some(bp_compose(&ra, &rb)),
            _ => false,
        };
        bad += usize::from(!ok);
    }
    o.check(
        bad == 0,
        format!("restriction multiplicativity on {RANDOM_CASES} random pairs: {bad} failures"),
    );

    let nots = single_not_layers();
    let mut affine = nots.clone();
    affine.extend(cnot_restrictions());
    let mut all = affine.clone();
    all.push(NamedPerm::Toffoli.perm());
    let sizes = [closure_size(&nots), closure_size(&affine), closure_size(&all)];
    o.check(
        sizes == [8, 1344, 40320],
        format!("closure sizes {sizes:?} (expected [8, 1344, 40320])"),
    );

    let db = finding(5, &FindingOptions::default())
        .expect("no memory limit")
        .db;
    let mut pool: Vec<BinPerm> = (0..=5).flat_map(|k| s8_layer(&db, k)).collect();
    pool.shuffle(&mut rng);
    let disagreements = pool
        .iter()
        .take(50)
        .filter(|g| {
            let a = expressing(g, 5, Some(&db)).map(|s| s.cost).ok();
            let b = expressing(g, 5, None).map(|s| s.cost).ok();
            a.is_none() || a != b
        })
        .count();
    o.check(
        disagreements == 0,
        format!("database and search costs on 50 random targets: {disagreements} disagreements"),
    );

    for k in 0..=4 {
        let r = validate_free_nots(k, &FindingOptions::default()).expect("no memory limit");
        o.check(
            r.passed(),
            format!(
                "free NOTs at k={k}: {} functions checked, {} cheaper",
                r.checked,
                r.mismatches.len()
            ),
        );
    }
    o
}

fn formats_and_determinism() -> Outcome {
    let mut o = Outcome::new();
    let mut rng = StdRng::seed_from_u64(0xf0);
    let catalog = gate_catalog();

    let mut bad = 0;
    for _ in 0..RANDOM_CASES {
        let c: Circuit = (0..rng.gen_range(0..16))
            .map(|_| catalog[rng.gen_range(0..catalog.len())])
            .collect();
        let text = format_circuit(&c);
        bad += usize::from(parse_circuit(&text).ok().as_ref() != Some(&c));
        let p = BinPerm::unrank(rng.gen_range(0..S8_ORDER)).expect("rank in range");
        bad += usize::from(parse_perm(&format_perm(&p)).ok() != Some(p));
    }
    o.check(
        bad == 0,
        format!("circuit and permutation text roundtrips ({RANDOM_CASES} each): {bad} failures"),
    );

    for k in [3, 7] {
        let db = finding(k, &FindingOptions::default())
            .expect("no memory limit")
            .db;
        let text = format_db(&db);
        let ok = match parse_db(&text) {
            Ok(back) => back == db && format_db(&back) == text,
            Err(_) => false,
        };
        o.check(
            ok,
            format!("database text roundtrip to k={k} ({} records)", db.len()),
        );
    }

    let dir = tempfile::tempdir().expect("temp dir");
    let mut runs: Vec<(Vec<String>, Vec<Run>)> = Vec::new();
    let cases: [&[&str]; 3] = [
        &["table", "--max-cost", "7"],
        &["table", "--max-cost", "4", "--free-nots"],
        &["synth", "--name", "toffoli", "--all-at-min"],
    ];
    for case in cases {
        let mut outs = Vec::new();
        for t in ["1", "2", "4"] {
            let mut args = case.to_vec();
            if case[0] == "table" {
                args.extend(["--threads", t]);
            }
            outs.push(qsynth(&args));
        }
        runs.push((case.iter().map(|s| s.to_string()).collect(), outs));
    }
    for (args, outs) in &runs {
        let same = outs.windows(2).all(|w| w[0] == w[1]) && outs[0].0 == Some(0);
        let across = if args[0] == "table" {
            "1, 2, 4 threads"
        } else {
            "three runs"
        };
        o.check(
            same,
            format!("`{}` byte-identical across {across}", args.join(" ")),
        );
    }
    let mut files = Vec::new();
    for t in ["1", "2", "4"] {
        let path = dir.path().join(format!("db{t}"));
        let p = path.to_str().expect("utf-8 path");
        qsynth(&["db", "build", "--max-cost", "13", "--threads", t, "--out", p]);
        files.push(fs::read(&path).unwrap_or_default());
    }
    o.check(
        !files[0].is_empty() && files.windows(2).all(|w| w[0] == w[1]),
        "`db build --max-cost 13` files byte-identical across 1, 2, 4 threads",
    );
    o
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("table reproduction to cost 5", table_core),
        ("table reproduction at costs 6 and 7", table_extended),
        (
            "synthesis regressions for peres and toffoli",
            synthesis_regressions,
        ),
        ("implementation counts", implementation_counts),
        ("G[4] analysis", g4_analysis),
        ("coset decomposition suite", coset_suite),
        ("property suites", property_suites),
        (
            "format roundtrips and deterministic CLI output",
            formats_and_determinism,
        ),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let n = i + 1;
        let start = Instant::now();
        let outcome = run();
        let verdict = if outcome.passed { "PASS" } else { "FAIL" };
        println!("criterion {n}: {verdict} {name} ({:.2?})", start.elapsed());
        for d in &outcome.details {
            println!("    {d}");
        }
        if !outcome.passed {
            failed.push(n);
        }
    }
    let passed = criteria.len() - failed.len();
    println!("acceptance: {passed}/{} criteria passed", criteria.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
