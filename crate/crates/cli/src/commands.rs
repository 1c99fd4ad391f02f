// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use thiserror::Error;

use qsynth_core::binperm::{restricted_map, restricted_perm, universality_closure_size, BinPerm, S8_ORDER};
use qsynth_core::engine::{
    classify_g4 as g4_report, enumerate_impls_with, expressing_with, finding, not_layer_law_violations,
    verify_theorem2, CosetOrder, CostDatabase, Finding, FindingError, FindingOptions, SynthError,
};
use qsynth_core::format::{load_db, parse_circuit, parse_perm, save_db};
use qsynth_core::gate::{circuit_perm, Circuit};
use qsynth_core::mvl::{entry_from_index, Entry, ENTRY_COUNT};
use qsynth_core::NamedPerm;

use crate::{
    BuildArgs, EvalArgs, InputsArg, OrderArg, SearchArgs, SynthArgs, TableArgs, UniversalArgs, VerifyArgs,
};

/// Every 3-bit reversible function has a NOT-free residual well below this.
pub const DEFAULT_BOUND: u32 = 16;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    NotFound(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Budget(String),
    #[error("output error: {0}")]
    Output(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::NotFound(_) => 1,
            CliError::Input(_) | CliError::Output(_) => 2,
            CliError::Budget(_) => 3,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<CostDatabase> {
    load_db(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn options(search: &SearchArgs, free_nots: bool) -> Result<FindingOptions> {
    if search.threads == 0 {
        return Err(CliError::Input("--threads must be at least 1".into()));
    }
    Ok(FindingOptions {
        free_nots,
        threads: search.threads,
        memory_limit: search.mem_limit_mb.map(|mb| mb.saturating_mul(1 << 20)),
        ..FindingOptions::default()
    })
}

/// Accepts `perm: 0 1 ...` or the bare list of images.
fn perm_from_arg(text: &str) -> Result<BinPerm> {
    let t = text.trim();
    let line = if t.starts_with("perm:") {
        t.to_string()
    } else {
        format!("perm: {t}")
    };
    parse_perm(&line).map_err(|e| CliError::Input(format!("bad permutation: {}", e.message)))
}

fn circuit_from_file(path: &Path) -> Result<Circuit> {
    parse_circuit(&read_file(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn join_gates(c: &Circuit) -> String {
    if c.is_empty() {
        "(none)".into()
    } else {
        c.to_string()
    }
}

fn write_table(out: &mut dyn Write, db: &CostDatabase, max_cost: u32) -> io::Result<()> {
    if db.free_nots() {
        writeln!(out, "# NOT gates free at any position")?;
        writeln!(out, "Cost k\t|S8[k]|")?;
        for k in 0..=max_cost {
            writeln!(out, "{k}\t{}", db.layer(k).len())?;
        }
    } else {
        writeln!(out, "Cost k\t|G[k]|\t|S8[k]|")?;
        for k in 0..=max_cost {
            let g = db.layer(k).len();
            writeln!(out, "{k}\t{g}\t{}", 8 * g)?;
        }
    }
    Ok(())
}

fn budget_error(e: FindingError) -> (Box<Finding>, CliError) {
    let FindingError::BudgetExceeded {
        limit,
        last_completed,
        partial,
        ..
    } = e;
    let msg = format!(
        "memory budget of {limit} bytes exceeded while expanding layer {}; completed layers 0..={last_completed}",
        last_completed + 1
    );
    (partial, CliError::Budget(msg))
}

pub fn table(args: &TableArgs, out: &mut dyn Write) -> Result<()> {
    if let Some(path) = &args.db {
        let db = load(path)?;
        if db.free_nots() != args.free_nots {
            return Err(CliError::Input(
                "database NOT mode does not match --free-nots".into(),
            ));
        }
        if args.max_cost > db.max_cost() && !db.is_complete() {
            return Err(CliError::Input(format!(
                "database covers costs up to {}, requested {}",
                db.max_cost(),
                args.max_cost
            )));
        }
        write_table(out, &db, args.max_cost)?;
        return Ok(());
    }
    let opts = options(&args.search, args.free_nots)?;
    match finding(args.max_cost, &opts) {
        Ok(f) => Ok(write_table(out, &f.db, args.max_cost)?),
        Err(e) => {
            let (partial, err) = budget_error(e);
            write_table(out, &partial.db, partial.db.max_cost())?;
            Err(err)
        }
    }
}

pub fn synth(args: &SynthArgs, out: &mut dyn Write) -> Result<()> {
    let target = if let Some(name) = &args.name {
        name.parse::<NamedPerm>()
            .map_err(|e| CliError::Input(e.to_string()))?
            .perm()
    } else if let Some(p) = &args.perm {
        perm_from_arg(p)?
    } else if let Some(path) = &args.perm_file {
        parse_perm(&read_file(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?
    } else {
        unreachable!("clap enforces a target")
    };
    let db = args.db.as_deref().map(load).transpose()?;
    if db.as_ref().is_some_and(CostDatabase::free_nots) {
        return Err(CliError::Input("synthesis needs a NOT-free database".into()));
    }
    let order = match (args.order, &db) {
        (Some(OrderArg::Notfirst), _) => CosetOrder::NotFirst,
        (Some(OrderArg::Notlast), _) => CosetOrder::NotLast,
        (None, Some(d)) => d.order(),
        (None, None) => CosetOrder::NotFirst,
    };
    // deep targets are far cheaper to look up than to search for
    let db = match db {
        Some(d) => Some(d),
        None if args.dfs => None,
        None => Some(
            finding(args.bound, &FindingOptions::default())
                .expect("no memory limit")
                .db,
        ),
    };
    let db = db.map(|mut d| {
        d.set_order(order);
        d
    });

    let s = expressing_with(&target, args.bound, db.as_ref(), order)
        .map_err(|e: SynthError| CliError::NotFound(e.to_string()))?;
    writeln!(out, "target: {target}")?;
    writeln!(out, "order: {}", order.token())?;
    writeln!(out, "not_mask: {}", s.not_layer.mask())?;
    writeln!(out, "cost: {}", s.cost)?;
    writeln!(out, "gates: {}", join_gates(&s.circuit))?;
    writeln!(out, "circuit: {}", join_gates(&s.full_circuit()))?;
    writeln!(
        out,
        "verified: {}",
        if s.realizes(&target) { "yes" } else { "no" }
    )?;
    if args.all_at_min {
        let all = enumerate_impls_with(&target, s.cost, order);
        writeln!(out, "implementations: {}", all.len())?;
        for imp in &all {
            writeln!(out, "mask={} {}", imp.not_layer.mask(), join_gates(&imp.circuit))?;
        }
    }
    Ok(())
}

fn entry_label(e: Entry, pattern: Option<u8>) -> String {
    match pattern {
        Some(p) => format!("{p} {e}"),
        None => format!("{e}"),
    }
}

pub fn eval(args: &EvalArgs, out: &mut dyn Write) -> Result<()> {
    let c = circuit_from_file(&args.circuit)?;
    let p = circuit_perm(&c);
    let inputs: Vec<Entry> = match args.inputs {
        InputsArg::Binary => (0..8).map(Entry::from_pattern).collect(),
        InputsArg::All => (0..ENTRY_COUNT)
            .map(|i| entry_from_index(i).expect("index in range"))
            .collect(),
    };
    writeln!(out, "cost: {}", c.cost())?;
    let mut banned = Vec::new();
    for e in &inputs {
        let label = entry_label(*e, e.binary_pattern());
        match p.apply(e.index()) {
            Some(y) => {
                let img = entry_from_index(y).expect("image in range");
                writeln!(out, "{label} -> {}", entry_label(img, img.binary_pattern()))?;
            }
            None => {
                writeln!(out, "{label} -> banned")?;
                banned.push(*e);
            }
        }
    }
    let listed: Vec<String> = banned.iter().map(|e| e.to_string()).collect();
    writeln!(out, "banned: {} of {}", banned.len(), inputs.len())?;
    if !listed.is_empty() {
        writeln!(out, "banned inputs: {}", listed.join(" "))?;
    }
    match (restricted_perm(&p), restricted_map(&p)) {
        (Some(g), _) => writeln!(out, "perm: {g}")?,
        (None, Some(_)) => writeln!(out, "perm: none (binary inputs reach non-binary values)")?,
        (None, None) => writeln!(out, "perm: none (binary inputs are banned)")?,
    }
    Ok(())
}

pub fn universal(args: &UniversalArgs, out: &mut dyn Write) -> Result<()> {
    let g = if let Some(path) = &args.circuit {
        let c = circuit_from_file(path)?;
        restricted_perm(&circuit_perm(&c))
            .ok_or_else(|| CliError::Input("circuit does not realize a binary reversible function".into()))?
    } else if let Some(p) = &args.perm {
        perm_from_arg(p)?
    } else {
        unreachable!("clap enforces a source")
    };
    let n = universality_closure_size(&g);
    writeln!(out, "perm: {g}")?;
    writeln!(out, "closure: {n}")?;
    writeln!(out, "universal: {}", if n == S8_ORDER { "yes" } else { "no" })?;
    Ok(())
}

pub fn classify_g4(path: &Path, out: &mut dyn Write) -> Result<()> {
    let db = load(path)?;
    if db.free_nots() || db.max_cost() < 4 {
        return Err(CliError::Input(
            "classify-g4 needs a NOT-free database covering cost 4".into(),
        ));
    }
    let r = g4_report(&db);
    writeln!(out, "G[4]: {}", r.total)?;
    writeln!(out, "cnot_only: {}", r.feynman_only.len())?;
    writeln!(out, "with_roots: {}", r.controlled.len())?;
    let universal = r.controlled.iter().filter(|m| m.universal).count();
    writeln!(out, "universal: {universal}/{}", r.controlled.len())?;
    let sizes: Vec<String> = r.orbit_sizes().iter().map(|s| s.to_string()).collect();
    writeln!(out, "orbits: {} (sizes {})", r.orbits.len(), sizes.join(" "))?;
    for (i, orbit) in r.orbits.iter().enumerate() {
        writeln!(out, "orbit {i}:")?;
        for g in orbit {
            let m = r
                .controlled
                .iter()
                .find(|m| m.perm == *g)
                .expect("orbit members are classified");
            let comps: Vec<String> = m
                .compositions
                .iter()
                .map(|(roots, cnots)| format!("{roots}v+{cnots}cnot"))
                .collect();
            writeln!(
                out,
                "  perm: {g} | {} | implementations: {} | {}",
                m.witness,
                m.implementations.len(),
                comps.join(",")
            )?;
        }
    }
    Ok(())
}

pub fn verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<()> {
    debug_assert!(args.theorem2);
    let db = load(&args.db)?;
    if db.free_nots() {
        return Err(CliError::Input("coset checks need a NOT-free database".into()));
    }
    let r = verify_theorem2(&db);
    let laws = not_layer_law_violations();
    writeln!(out, "order: {}", r.order.token())?;
    writeln!(out, "max_cost: {}", r.max_cost)?;
    writeln!(out, "complete: {}", if r.complete { "yes" } else { "no" })?;
    writeln!(out, "Cost k\t|G[k]|\t|S8[k]|")?;
    for (k, (g, s)) in r.layer_sizes.iter().enumerate() {
        writeln!(out, "{k}\t{g}\t{s}")?;
    }
    writeln!(out, "s8_distinct: {}", r.s8_distinct)?;
    writeln!(out, "layer_collisions: {}", r.layer_collisions.len())?;
    writeln!(out, "coset_overlaps: {}", r.coset_overlaps.len())?;
    writeln!(out, "residual_violations: {}", r.residual_violations.len())?;
    if r.complete {
        writeln!(out, "totals: {} / {}", r.g_total, r.s8_total)?;
    }
    writeln!(out, "not_layer_law_violations: {laws}")?;
    let ok = r.passed() && laws == 0;
    writeln!(out, "result: {}", if ok { "PASS" } else { "FAIL" })?;
    if ok {
        Ok(())
    } else {
        Err(CliError::NotFound("coset decomposition check failed".into()))
    }
}

pub fn db_build(args: &BuildArgs, out: &mut dyn Write) -> Result<()> {
    let opts = options(&args.search, false)?;
    let save = |db: &CostDatabase| {
        save_db(db, &args.out).map_err(|e| CliError::Input(format!("{}: {e}", args.out.display())))
    };
    let (f, err) = match finding(args.max_cost, &opts) {
        Ok(f) => (Box::new(f), None),
        Err(e) => {
            let (partial, err) = budget_error(e);
            (partial, Some(err))
        }
    };
    save(&f.db)?;
    writeln!(
        out,
        "wrote {} records (costs 0..={})",
        f.db.len(),
        f.db.max_cost()
    )?;
    write_table(out, &f.db, f.db.max_cost())?;
    match err {
        Some(e) => Err(e),
        None => Ok(()),
    }
}
