//! The built-in acceptance suite: the library's criterion battery, an
//! in-process determinism check, and a set of golden fixtures with known
//! outputs.  Prints one pass/fail row per check and returns the worst exit
//! code.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use barrierlab::acceptance::{run_all, CriterionResult};
use barrierlab::barrier::BarrierTerm;
use barrierlab::finset::FinSet;
use barrierlab::normspace::{distance, epsilon_net, seminorm_point, NormingSet, Vector};
use barrierlab::plegma::enumerate_plegma;
use barrierlab::{rat, Result};

/// Golden fixtures: named computations whose serialised values are pinned in
/// `goldens/`.  Each entry is `(row label, file name, compute)`.
const GOLDENS: &[(&str, &str, fn() -> Result<Value>)] = &[
    ("golden:fronts", "fronts.json", golden_fronts),
    ("golden:plegma-counts", "plegma_counts.json", golden_plegma_counts),
    ("golden:net-sizes", "net_sizes.json", golden_net_sizes),
    ("golden:norm-values", "norm_values.json", golden_norm_values),
];

/// The embedded copy of a fixture, used when no `--goldens` directory is
/// given.  Compiled in, so a stale file is caught at the next build.
fn embedded(file: &str) -> Option<&'static str> {
    match file {
        "fronts.json" => Some(include_str!("../goldens/fronts.json")),
        "plegma_counts.json" => Some(include_str!("../goldens/plegma_counts.json")),
        "net_sizes.json" => Some(include_str!("../goldens/net_sizes.json")),
        "norm_values.json" => Some(include_str!("../goldens/norm_values.json")),
        _ => None,
    }
}

fn window(n: u32) -> Result<FinSet> {
    FinSet::new((1..=n).collect())
}

/// Front members of three small families on fixed windows.
fn golden_fronts() -> Result<Value> {
    let cube2 = BarrierTerm::cube(2).front(&window(6)?)?;
    let schreier = BarrierTerm::schreier().front(&window(8)?)?;
    let sum = BarrierTerm::sum(BarrierTerm::cube(1), BarrierTerm::schreier())?.front(&window(7)?)?;
    Ok(json!({
        "cube2_w6": cube2,
        "schreier_w8": schreier,
        "sum_w7": sum,
    }))
}

/// Plegma tuple counts for small barrier/arity/window combinations.
fn golden_plegma_counts() -> Result<Value> {
    let cases: &[(&str, BarrierTerm, usize, u32)] = &[
        ("cube1_n2_w6", BarrierTerm::cube(1), 2, 6),
        ("cube2_n2_w6", BarrierTerm::cube(2), 2, 6),
        ("schreier_n2_w8", BarrierTerm::schreier(), 2, 8),
        ("schreier_n3_w8", BarrierTerm::schreier(), 3, 8),
    ];
    let mut out = serde_json::Map::new();
    for (name, b, n, w) in cases {
        let tuples = enumerate_plegma(b, *n, &window(*w)?)?;
        out.insert(name.to_string(), json!(tuples.len()));
    }
    Ok(Value::Object(out))
}

/// Sizes of the seminorm nets at the two coarsest meshes.
fn golden_net_sizes() -> Result<Value> {
    Ok(json!({
        "k2_eps_1": epsilon_net(2, &rat::q(1, 1))?.len(),
        "k2_eps_1_2": epsilon_net(2, &rat::q(1, 2))?.len(),
    }))
}

/// Exact norm values of a fixed vector under each closed-form norming set,
/// plus one certified distance bracket.
fn golden_norm_values() -> Result<Value> {
    let x = Vector::unit(1)
        .add(&Vector::unit(2).scale(&rat::q(1, 2)))
        .add(&Vector::unit(3).scale(&rat::q(1, 3)))
        .add(&Vector::unit(4).scale(&rat::q(1, 4)));
    let positions = FinSet::new(vec![1, 2])?;
    let l1 = seminorm_point(&NormingSet::L1, &positions)?;
    let sup = seminorm_point(&NormingSet::Sup, &positions)?;
    let d = distance(&l1, &sup, &rat::q(1, 8))?;
    Ok(json!({
        "l1": rat::fmt(&NormingSet::L1.norm(&x)),
        "sup": rat::fmt(&NormingSet::Sup.norm(&x)),
        "schreier": rat::fmt(&NormingSet::Schreier.norm(&x)),
        "dist_l1_sup_k2": {"lo": rat::fmt(&d.lo), "hi": rat::fmt(&d.hi)},
    }))
}

/// One selftest row.
struct Row {
    label: String,
    name: String,
    passed: bool,
    details: String,
}

fn print_row(r: &Row) {
    let verdict = if r.passed { "PASS" } else { "FAIL" };
    println!("{:>2}  {:<28} {}  {}", r.label, r.name, verdict, r.details);
}

fn golden_rows(dir: Option<&Path>) -> Vec<Row> {
    let mut rows = Vec::new();
    for (label, file, compute) in GOLDENS {
        let stored: std::result::Result<Value, String> = match dir {
            Some(d) => fs::read_to_string(d.join(file))
                .map_err(|e| format!("fixture {file} unreadable: {e}"))
                .and_then(|text| {
                    serde_json::from_str(&text)
                        .map_err(|e| format!("fixture {file} corrupted: {e}"))
                }),
            None => match embedded(file) {
                Some(text) => serde_json::from_str(text)
                    .map_err(|e| format!("embedded fixture {file} corrupted: {e}")),
                None => Err(format!("no embedded fixture {file}")),
            },
        };
        let (passed, details) = match (compute(), stored) {
            (Ok(now), Ok(want)) if now == want => (true, format!("matches fixture {file}")),
            (Ok(_), Ok(_)) => (false, format!("diverges from fixture {file}")),
            (Err(e), _) => (false, format!("computation failed: {e}")),
            (_, Err(e)) => (false, e),
        };
        rows.push(Row {
            label: "G".into(),
            name: label.to_string(),
            passed,
            details,
        });
    }
    rows
}

fn criteria_rows() -> (Vec<Row>, Vec<CriterionResult>, bool) {
    let first = run_all();
    let second = run_all();
    let identical = serde_json::to_vec(&first).ok().is_some_and(|a| {
        serde_json::to_vec(&second).ok().is_some_and(|b| a == b)
    });
    let mut rows: Vec<Row> = first
        .iter()
        .map(|c| Row {
            label: c.id.to_string(),
            name: c.name.to_string(),
            passed: c.passed,
            details: c.details.clone(),
        })
        .collect();
    rows.push(Row {
        label: "9".into(),
        name: "determinism".into(),
        passed: identical,
        details: if identical {
            "two suite runs serialize to identical bytes".into()
        } else {
            "suite runs serialize differently".into()
        },
    });
    (rows, first, identical)
}

/// Write freshly computed fixtures into `dir` (creating it), one file per
/// golden check.
pub fn write_goldens(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)
        .map_err(|e| barrierlab::Error::Schema(format!("creating {}: {e}", dir.display())))?;
    for (_, file, compute) in GOLDENS {
        let value = compute()?;
        let path = dir.join(file);
        let mut text = serde_json::to_string_pretty(&value)
            .map_err(|e| barrierlab::Error::Schema(format!("serialising {file}: {e}")))?;
        text.push('\n');
        fs::write(&path, text)
            .map_err(|e| barrierlab::Error::Schema(format!("writing {}: {e}", path.display())))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

/// Run the acceptance suite and golden checks; print the table; optionally
/// write a JSON report.  Returns the process exit code.
pub fn run(
    seed: Option<u64>,
    goldens: Option<PathBuf>,
    goldens_only: bool,
    out: Option<PathBuf>,
) -> i32 {
    let effective = seed.unwrap_or(7);
    match seed {
        Some(s) => println!("seed: {s}"),
        None => println!("seed: {effective} (default)"),
    }
    let mut rows = Vec::new();
    let mut criteria: Vec<CriterionResult> = Vec::new();
    let mut determinism = true;
    if !goldens_only {
        let (crows, results, identical) = criteria_rows();
        rows.extend(crows);
        criteria = results;
        determinism = identical;
    }
    rows.extend(golden_rows(goldens.as_deref()));
    for row in &rows {
        print_row(row);
    }
    let passed = rows.iter().filter(|r| r.passed).count();
    println!("selftest: {passed}/{} checks passed", rows.len());
    if let Some(path) = out {
        let report = json!({
            "seed": effective,
            "criteria": criteria,
            "determinism_passed": determinism,
            "goldens": rows
                .iter()
                .filter(|r| r.label == "G")
                .map(|r| json!({"name": r.name, "passed": r.passed, "details": r.details}))
                .collect::<Vec<_>>(),
        });
        let mut text = match serde_json::to_string_pretty(&report) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: report serialisation: {e}");
                return 1;
            }
        };
        text.push('\n');
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            if let Err(e) = fs::create_dir_all(parent) {
                eprintln!("error: creating {}: {e}", parent.display());
                return 1;
            }
        }
        if let Err(e) = fs::write(&path, text) {
            eprintln!("error: writing {}: {e}", path.display());
            return 1;
        }
        println!("report: {}", path.display());
    }
    if passed == rows.len() {
        0
    } else {
        1
    }
}
