//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the lines are printed on every `cargo test`.

use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use quantale::k0::{
    idempotent_kernels, image_of_kernel, is_projective, k0_equal, projective_classes, CardinalityInvariant, Evidence,
    K0Element, K0Invariant, K0Verdict, DEFAULT_KERNEL_BUDGET,
};
use quantale::module::PowerModule;
use quantale_workbench::enumerate::{enumerate_quantales, DEFAULT_ASSIGNMENT_BUDGET, FROZEN_COUNT_UP_TO_FOUR};
use quantale_workbench::fixtures::{self, corpus, COUNTER};
use quantale_workbench::format::{parse, Kind};
use quantale_workbench::suites::{run_suite, Options, Suite, SuiteResult};
use quantale_workbench::workspace::{Structure, Workspace};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Runs `suite` on every valid structure of `kind` accepted by `filter`.
fn run_over(
    ws: &Workspace,
    kind: Kind,
    suite: Suite,
    opts: &Options,
    filter: impl Fn(&Structure) -> bool,
) -> Result<Vec<SuiteResult>, String> {
    ws.valid(kind)
        .filter(|(_, s)| filter(s))
        .map(|(name, s)| run_suite(suite, name, s, opts).map_err(|e| format!("{suite} {name}: {e}")))
        .collect()
}

fn totals(results: &[SuiteResult]) -> Result<u64, String> {
    if let Some(bad) = results.iter().find(|r| !r.passed()) {
        return Err(format!("{} {}: {:?}", bad.suite, bad.structure, bad.witnesses));
    }
    Ok(results.iter().map(|r| r.cases_total).sum())
}

fn axiom_suites() -> Outcome {
    let ws = corpus();
    for e in &ws.entries {
        if let Err(err) = &e.structure {
            return Err(format!("{} {} rejected: {err}", e.kind.keyword(), e.name));
        }
    }
    for (file, src) in COUNTER {
        let ws = Workspace::from_source(src).map_err(|e| format!("{file}: {e}"))?;
        let errors: Vec<String> = ws
            .entries
            .iter()
            .filter_map(|e| e.structure.as_ref().err().map(ToString::to_string))
            .collect();
        ensure(errors.len() == 1 && !errors[0].is_empty(), || format!("{file}: {errors:?}"))?;
    }
    Ok(format!("{} fixtures accepted, 6 counter-fixtures rejected", ws.entries.len()))
}

fn module_laws() -> Outcome {
    let ws = corpus();
    let opts = Options::default();
    let mut results = run_over(&ws, Kind::Module, Suite::Basicmq, &opts, |_| true)?;
    results.extend(run_over(&ws, Kind::Module, Suite::Qxprop, &opts, |_| true)?);
    let n = totals(&results)?;
    ensure(n >= 500, || format!("only {n} instance checks"))?;
    Ok(format!("{n} instance checks, 0 failures"))
}

fn named_quantales(ws: &Workspace, names: &[&str]) -> Vec<(String, Structure)> {
    names
        .iter()
        .map(|&n| (n.to_owned(), Structure::Quantale(Arc::clone(ws.quantale(n).expect("fixture")))))
        .collect()
}

fn kernel_suite(suite: Suite, expected: &[&str]) -> Outcome {
    let ws = corpus();
    let opts = Options::default();
    let mut summary = Vec::new();
    for ((name, s), want) in named_quantales(&ws, &["B2", "L3"]).iter().zip(expected) {
        let r = run_suite(suite, name, s, &opts).map_err(|e| e.to_string())?;
        totals(std::slice::from_ref(&r))?;
        ensure(r.notes.iter().any(|n| n == want), || format!("{name}: {:?}", r.notes))?;
        summary.push(format!("{name}: {want}"));
    }
    Ok(summary.join("; "))
}

fn ideal_congruences() -> Outcome {
    let ws = corpus();
    let opts = Options::default();
    let results = run_over(&ws, Kind::Module, Suite::Icong, &opts, |s| {
        matches!(s, Structure::Module(m) if m.len() <= 6)
    })?;
    let n = totals(&results)?;
    let shared: Vec<String> = results
        .iter()
        .flat_map(|r| {
            r.notes
                .iter()
                .filter(|n| n.contains("shared by"))
                .map(move |n| format!("{}: {n}", r.structure))
        })
        .collect();
    ensure(!shared.is_empty(), || "no fixture has two congruences with one ⊥-class".into())?;
    Ok(format!("{} modules, {n} checks; {}", results.len(), shared[0]))
}

fn quantale_congruences() -> Outcome {
    let ws = corpus();
    let results = run_over(&ws, Kind::Quantale, Suite::Qicong, &Options::default(), |_| true)?;
    let n = totals(&results)?;
    Ok(format!("{} quantales, {n} checks", results.len()))
}

fn saturation() -> Outcome {
    let ws = corpus();
    let opts = Options::default();
    let mut results = run_over(&ws, Kind::Quantale, Suite::Satquo, &opts, |_| true)?;
    results.extend(run_over(&ws, Kind::Quantale, Suite::Itop, &opts, |_| true)?);
    results.extend(run_over(&ws, Kind::Relation, Suite::Satquo, &opts, |_| true)?);
    let n = totals(&results)?;
    Ok(format!("{n} checks over all singleton and two-pair relations"))
}

fn projectivity() -> Outcome {
    let ws = corpus();
    let b2 = Arc::clone(ws.quantale("B2").map_err(|e| e.to_string())?);
    let kernels = idempotent_kernels(&b2, 2, DEFAULT_KERNEL_BUDGET).map_err(|e| e.to_string())?;
    for k in &kernels {
        let image = image_of_kernel(k).map_err(|e| e.to_string())?;
        let rows: Vec<usize> = (0..2)
            .map(|x| {
                let row = image.power.encode(&k.row(x));
                image.embedding.iter().position(|&e| e == row).expect("row in image")
            })
            .collect();
        let cert = is_projective(&image.module, &rows, 0).map_err(|e| format!("{k}: {e}"))?;
        ensure(cert.projective && matches!(cert.evidence, Evidence::Splitting { .. }), || {
            format!("image of {k} not certified")
        })?;
    }
    let m3 = ws.module("M3b").map_err(|e| e.to_string())?;
    let gens = m3.carrier().join_irreducibles();
    let cert = is_projective(m3, &gens, DEFAULT_KERNEL_BUDGET).map_err(|e| e.to_string())?;
    ensure(
        !cert.projective && matches!(cert.evidence, Evidence::Exhausted { .. }),
        || "3-atom diamond not refuted by exhaustion".into(),
    )?;
    Ok(format!(
        "{} idempotents of M_2(B2) split; 3-atom diamond has no section (kernel cross-check agrees: {})",
        kernels.len(),
        cert.cross_checked
    ))
}

fn integral_corollaries() -> Outcome {
    let inv = enumerate_quantales(4, DEFAULT_ASSIGNMENT_BUDGET).map_err(|e| e.to_string())?;
    ensure(inv.quantales.len() == FROZEN_COUNT_UP_TO_FOUR, || {
        format!("{} quantales, frozen value {FROZEN_COUNT_UP_TO_FOUR}", inv.quantales.len())
    })?;
    let integral: Vec<_> = inv.quantales.iter().filter(|e| e.flags.classification.integral).collect();
    for e in &integral {
        let q = &e.quantale;
        ensure(e.flags.simple == (q.len() <= 2), || format!("simplicity fails on {q:?}"))?;
        ensure(e.flags.semisimple == e.flags.classification.frame, || format!("semisimplicity fails on {q:?}"))?;
    }
    Ok(format!("{} quantales, {} integral", inv.quantales.len(), integral.len()))
}

fn k0_sanity() -> Outcome {
    let ws = corpus();
    let b2 = Arc::clone(ws.quantale("B2").map_err(|e| e.to_string())?);
    let inv = projective_classes(&b2, 2, DEFAULT_KERNEL_BUDGET).map_err(|e| e.to_string())?;
    let free_class = |rank: usize| -> Result<usize, String> {
        let index: Vec<String> = (0..rank).map(|i| format!("x{i}")).collect();
        let free = PowerModule::new(Arc::clone(&b2), &index).module;
        inv.class_of(&free)
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("B2^{rank} missing from inventory"))
    };
    let (one, two) = (free_class(1)?, free_class(2)?);
    let invariants: [&dyn K0Invariant; 1] = [&CardinalityInvariant];
    let eq = |a: &K0Element, b: &K0Element| k0_equal(&inv, a, b, 2, &invariants).map_err(|e| e.to_string());
    let sum = eq(&K0Element::difference(vec![one, one], vec![]), &K0Element::class(two))?;
    ensure(matches!(sum, K0Verdict::Equal { .. }), || format!("[B2¹]⊕[B2¹] vs [B2²]: {sum:?}"))?;
    let apart = eq(&K0Element::class(one), &K0Element::class(two))?;
    ensure(
        apart
            == K0Verdict::Distinct {
                invariant: "cardinality".into(),
                lhs: 2,
                rhs: 4,
            },
        || format!("[B2¹] vs [B2²]: {apart:?}"),
    )?;
    ensure(inv.classes[0].representative.len() == 1, || "class 0 is not the zero module".into())?;
    for c in 0..inv.len() {
        let v = eq(&K0Element::difference(vec![c, 0], vec![]), &K0Element::class(c))?;
        ensure(matches!(v, K0Verdict::Equal { .. }), || format!("[P{c}]+[0] vs [P{c}]: {v:?}"))?;
        ensure(inv.add(c, 0).map_err(|e| e.to_string())? == Some(c), || format!("[P{c}]⊕[0]"))?;
    }
    Ok(format!("{} classes; equal, distinct 2 vs 4, [0] neutral", inv.len()))
}

fn qwb(args: &[&str]) -> Result<(i32, String), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_qwb"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    Ok((out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned()))
}

fn cli() -> Outcome {
    let once = parse(fixtures::CORPUS).map_err(|e| e.to_string())?.to_text();
    let twice = parse(&once).map_err(|e| e.to_string())?.to_text();
    ensure(once == twice, || "canonical form is not a fixed point".into())?;
    let dir = std::env::temp_dir().join(format!("qwb-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let canonical = dir.join("canonical.qw");
    std::fs::write(&canonical, &once).map_err(|e| e.to_string())?;
    let (code, out) = qwb(&["fmt", canonical.to_str().expect("utf-8 path")])?;
    ensure(code == 0 && out == once, || format!("qwb fmt exit {code}, output differs"))?;
    let (code, _) = qwb(&["verify", "--all-fixtures", "all"])?;
    ensure(code == 0, || format!("verify --all-fixtures all exited {code}"))?;
    for (file, src) in COUNTER {
        let path = dir.join(file);
        std::fs::write(&path, src).map_err(|e| e.to_string())?;
        let (code, out) = qwb(&["check", path.to_str().expect("utf-8 path")])?;
        ensure(code == 1 && out.contains("witness:"), || format!("check {file}: exit {code}\n{out}"))?;
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok("round trip byte-identical; all suites exit 0; 6 counter-fixtures exit 1 with witness".into())
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, u64, fn() -> Outcome); 11] = [
        (1, "axiom suites", 1, axiom_suites),
        (2, "module laws and i^v identities", 5, module_laws),
        (3, "adjoint transforms", 30, || kernel_suite(Suite::Adjoint, &["16 kernels", "81 kernels"])),
        (4, "matrix quantale and endomorphisms", 60, || {
            kernel_suite(Suite::Matrixendo, &["16 kernels, 256 pairs", "81 kernels, 6561 pairs"])
        }),
        (5, "module ideal congruences", 30, ideal_congruences),
        (6, "quantale ideal congruences", 10, quantale_congruences),
        (7, "saturation quotients", 60, saturation),
        (8, "projectivity", 60, projectivity),
        (9, "integral simple and semisimple", 300, integral_corollaries),
        (10, "K0 over B2", 10, k0_sanity),
        (11, "command line", 120, cli),
    ];
    let mut failed = 0;
    for (n, name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let within = elapsed <= Duration::from_secs(limit);
        let (verdict, detail) = match (&outcome, within) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("{d}; over time limit")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {n:>2} {verdict} {name} ({:.3} s, limit {limit} s): {detail}",
            elapsed.as_secs_f64()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
