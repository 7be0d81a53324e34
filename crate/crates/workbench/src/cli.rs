//! The `qwb` command line: argument definitions, dispatch, and reports.

use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use quantale::congruence::{enumerate_congruences, DEFAULT_ENUMERATION_BOUND};
use quantale::ideals::{bottom_class, IdealElements};
use quantale::k0::{k0_equal, projective_classes, CardinalityInvariant, K0Element, K0Invariant, DEFAULT_KERNEL_BUDGET};
use quantale::module::{is_isomorphic, PowerModule};
use quantale::saturation::RelationSpec;
use quantale::transforms::TransformSpace;
use quantale::{Error, FiniteSupLattice, QModule, Quantale, Result};

use crate::enumerate::{enumerate_quantales, DEFAULT_ASSIGNMENT_BUDGET};
use crate::fixtures;
use crate::format::{parse, Document, Item, Kind};
use crate::suites::{verify_all, verify_structure, Options, Selection, SuiteResult};
use crate::workspace::{quantale_decls, Workspace};

#[derive(Parser, Debug)]
#[command(name = "qwb", version, about = "Workbench for finite quantales and quantale modules")]
pub struct Cli {
    /// Structure file to load; the bundled fixture corpus when omitted.
    #[arg(long, global = true, value_name = "FILE")]
    pub fixtures: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate every declaration of a structure file.
    Check {
        /// Defaults to `--fixtures` or the bundled corpus.
        file: Option<PathBuf>,
    },
    /// Compute residuals, ideals, congruences, saturated sets, quotients,
    /// transforms or projective classes of a named structure.
    Compute {
        #[arg(value_enum)]
        what: Target,
        structure: String,
        /// Pairs such as "(0,h) (a,b)" for `saturated` and `quotient`.
        #[arg(long)]
        relation: Option<String>,
        /// Enumeration bound: carrier size for congruences, generators for `k0`.
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Run property suites on one structure or on every structure.
    Verify {
        /// `STRUCTURE [SUITE]`, or `[SUITE]` with `--all-fixtures`.
        #[arg(num_args = 0..=2)]
        args: Vec<String>,
        #[arg(long)]
        all_fixtures: bool,
        #[arg(long)]
        suite: Option<String>,
        /// Index size for kernel suites.
        #[arg(long, default_value_t = 2)]
        size: usize,
        /// Carrier bound for congruence enumeration.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_BOUND)]
        bound: usize,
    },
    /// Enumerate all quantales on lattices up to a size, up to isomorphism.
    Enumerate {
        #[arg(long, default_value_t = 4)]
        size: usize,
    },
    /// Print the canonical form of a structure file.
    Fmt { file: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Residuals,
    Ideals,
    Congruences,
    Saturated,
    Quotient,
    Transform,
    K0,
}

/// The machine-readable result of one command.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub structure: Option<String>,
    pub suite: Option<String>,
    pub cases_total: u64,
    pub cases_failed: u64,
    pub witnesses: Vec<String>,
    pub millis: u128,
    pub results: Vec<SuiteResult>,
    pub output: Vec<String>,
}

impl Report {
    fn new(command: &str) -> Self {
        Self {
            command: command.to_owned(),
            structure: None,
            suite: None,
            cases_total: 0,
            cases_failed: 0,
            witnesses: Vec::new(),
            millis: 0,
            results: Vec::new(),
            output: Vec::new(),
        }
    }

    fn absorb(&mut self, results: Vec<SuiteResult>) {
        for r in &results {
            self.cases_total += r.cases_total;
            self.cases_failed += r.cases_failed;
            self.witnesses
                .extend(r.witnesses.iter().map(|w| format!("{} {}: {w}", r.suite, r.structure)));
            let verdict = if r.passed() { "ok  " } else { "FAIL" };
            self.output.push(format!(
                "{verdict} {:<10} {:<8} {}/{} cases passed",
                r.suite,
                r.structure,
                r.cases_total - r.cases_failed,
                r.cases_total
            ));
            self.output.extend(r.notes.iter().map(|n| format!("     {n}")));
            self.output.extend(r.witnesses.iter().map(|w| format!("     witness: {w}")));
        }
        self.results.extend(results);
    }

    pub fn passed(&self) -> bool {
        self.cases_failed == 0
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => serde_json::to_string_pretty(self).expect("report serializes"),
            OutputFormat::Text if self.command == "fmt" => self.output.join("\n"),
            OutputFormat::Text => {
                let mut s = self.output.join("\n");
                if !s.is_empty() {
                    s.push('\n');
                }
                s.push_str(&format!(
                    "{}: {} cases, {} failed ({} ms)",
                    self.command, self.cases_total, self.cases_failed, self.millis
                ));
                s
            }
        }
    }
}

/// Exit code for an error: 3 for exhausted budgets, 2 for input problems,
/// 1 for any other verified failure.
pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } | Error::CarrierTooLarge { .. } => 3,
        Error::Parse { .. } | Error::UnknownStructure(_) | Error::UnknownElement(_) | Error::DuplicateElement(_) => 2,
        _ => 1,
    }
}

/// Runs a parsed command line. Returns the report, or the error that
/// stopped the command.
pub fn run(cli: &Cli) -> Result<Report> {
    let start = Instant::now();
    let mut report = match &cli.command {
        Command::Check { file } => check(&read_source(file.as_ref().or(cli.fixtures.as_ref()))?)?,
        Command::Fmt { file } => {
            let doc = parse(&read_source(Some(file))?)?;
            let mut r = Report::new("fmt");
            r.output.push(doc.to_text().trim_end().to_owned());
            r
        }
        Command::Compute {
            what,
            structure,
            relation,
            bound,
        } => {
            let ws = load(cli)?;
            let mut r = compute(&ws, *what, structure, relation.as_deref(), *bound)?;
            r.structure = Some(structure.clone());
            r
        }
        Command::Verify {
            args,
            all_fixtures,
            suite,
            size,
            bound,
        } => {
            let ws = load(cli)?;
            let opts = Options {
                size: *size,
                bound: *bound,
                ..Options::default()
            };
            verify(&ws, args, *all_fixtures, suite.as_deref(), &opts)?
        }
        Command::Enumerate { size } => enumerate(*size)?,
    };
    report.millis = start.elapsed().as_millis();
    Ok(report)
}

fn read_source(path: Option<&PathBuf>) -> Result<String> {
    match path {
        None => Ok(fixtures::CORPUS.to_owned()),
        Some(p) => std::fs::read_to_string(p).map_err(|e| Error::Parse {
            line: 0,
            column: 0,
            message: format!("cannot read {}: {e}", p.display()),
        }),
    }
}

fn load(cli: &Cli) -> Result<Workspace> {
    Workspace::from_source(&read_source(cli.fixtures.as_ref())?)
}

fn check(src: &str) -> Result<Report> {
    let ws = Workspace::from_source(src)?;
    let mut report = Report::new("check");
    let mut results = Vec::new();
    for e in &ws.entries {
        let mut r = SuiteResult {
            suite: "validate".into(),
            structure: e.name.clone(),
            cases_total: 1,
            cases_failed: 0,
            witnesses: vec![],
            notes: vec![],
        };
        match &e.structure {
            Ok(s) => {
                if let crate::workspace::Structure::Quantale(q) = s {
                    let c = q.classify();
                    r.notes.push(format!(
                        "unital={} commutative={} integral={} frame={}",
                        c.unital, c.commutative, c.integral, c.frame
                    ));
                }
            }
            Err(err) => {
                r.cases_failed = 1;
                r.witnesses.push(format!("{} {}: {err}", e.kind.keyword(), e.name));
            }
        }
        results.push(r);
    }
    report.absorb(results);
    Ok(report)
}

fn verify(
    ws: &Workspace,
    args: &[String],
    all_fixtures: bool,
    suite_flag: Option<&str>,
    opts: &Options,
) -> Result<Report> {
    let usage = |m: String| Error::UnknownStructure(m);
    let (structure, positional_suite) = match (all_fixtures, args) {
        (true, []) => (None, None),
        (true, [s]) => (None, Some(s.as_str())),
        (true, _) => return Err(usage("with --all-fixtures only a suite may be given".into())),
        (false, [name]) => (Some(name.as_str()), None),
        (false, [name, s]) => (Some(name.as_str()), Some(s.as_str())),
        (false, _) => return Err(usage("verify needs a structure name or --all-fixtures".into())),
    };
    let suite_name = match (positional_suite, suite_flag) {
        (Some(a), Some(b)) if a != b => return Err(usage(format!("conflicting suites {a} and {b}"))),
        (a, b) => a.or(b).unwrap_or("all"),
    };
    let selection: Selection = suite_name.parse().map_err(usage)?;
    let mut report = Report::new("verify");
    report.suite = Some(selection.to_string());
    report.structure = structure.map(str::to_owned);
    let results = match structure {
        Some(name) => verify_structure(ws, name, selection, opts)?,
        None => verify_all(ws, selection, opts)?,
    };
    report.absorb(results);
    Ok(report)
}

fn enumerate(size: usize) -> Result<Report> {
    let inv = enumerate_quantales(size, DEFAULT_ASSIGNMENT_BUDGET)?;
    let mut report = Report::new("enumerate");
    let mut integral_checks = SuiteResult {
        suite: "intsimple".into(),
        structure: format!("size≤{size}"),
        cases_total: 0,
        cases_failed: 0,
        witnesses: vec![],
        notes: vec![],
    };
    for (i, e) in inv.quantales.iter().enumerate() {
        let q = &e.quantale;
        let f = e.flags;
        let c = f.classification;
        report.output.push(format!(
            "#{i:<3} L{} |Q|={} mul=[{}] unit={} unital={} commutative={} integral={} frame={} simple={} semisimple={}",
            e.lattice,
            q.len(),
            table_rows(q),
            q.unit().map_or("-", |u| q.name(u)),
            c.unital,
            c.commutative,
            c.integral,
            c.frame,
            f.simple,
            f.semisimple
        ));
        if c.integral {
            for (ok, what) in [
                (f.simple == (q.len() <= 2), "simple ⇔ |Q| ≤ 2"),
                (f.semisimple == c.frame, "semisimple ⇔ frame"),
            ] {
                integral_checks.cases_total += 1;
                if !ok {
                    integral_checks.cases_failed += 1;
                    integral_checks.witnesses.push(format!("#{i}: {what} fails"));
                }
            }
        }
    }
    let integral = inv.quantales.iter().filter(|e| e.flags.classification.integral).count();
    integral_checks.notes.push(format!(
        "{} lattices, {} assignments, {} quantales up to isomorphism, {integral} integral",
        inv.lattices.len(),
        inv.assignments_tried,
        inv.quantales.len()
    ));
    report.absorb(vec![integral_checks]);
    Ok(report)
}

fn table_rows(q: &Quantale) -> String {
    q.elements()
        .map(|a| q.elements().map(|b| q.name(q.mul(a, b))).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("; ")
}

/// A grid with a corner label, column headers and one row per `rows` entry.
fn grid(corner: &str, rows: &[String], cols: &[String], cell: impl Fn(usize, usize) -> String) -> Vec<String> {
    let body: Vec<Vec<String>> = (0..rows.len())
        .map(|i| (0..cols.len()).map(|j| cell(i, j)).collect())
        .collect();
    let mut width = corner.chars().count();
    for s in rows.iter().chain(cols).chain(body.iter().flatten()) {
        width = width.max(s.chars().count());
    }
    let pad = |s: &str| format!("{s}{}", " ".repeat(width - s.chars().count()));
    let mut out = vec![std::iter::once(pad(corner))
        .chain(cols.iter().map(|c| pad(c)))
        .collect::<Vec<_>>()
        .join(" ")
        .trim_end()
        .to_owned()];
    for (name, row) in rows.iter().zip(&body) {
        out.push(
            std::iter::once(pad(name))
                .chain(row.iter().map(|c| pad(c)))
                .collect::<Vec<_>>()
                .join(" ")
                .trim_end()
                .to_owned(),
        );
    }
    out
}

fn relation_for(ws: &Workspace, name: &str, relation: Option<&str>) -> Result<RelationSpec> {
    match relation {
        Some(text) => {
            let q = ws.quantale(name)?;
            let doc = parse(&format!("relation R over Q {{ pairs {text}; }}"))?;
            let Some(Item::Relation(d)) = doc.items.first() else {
                unreachable!("one relation declared")
            };
            RelationSpec::from_names(Arc::clone(q), &d.pairs)
        }
        None => match ws.relation(name) {
            Ok(r) => Ok(r.clone()),
            Err(_) => Err(Error::UnknownStructure(format!(
                "{name} is not a relation; pass --relation for a quantale"
            ))),
        },
    }
}

fn compute(ws: &Workspace, what: Target, name: &str, relation: Option<&str>, bound: Option<usize>) -> Result<Report> {
    let mut report = Report::new(&format!("compute {}", target_name(what)));
    let out = &mut report.output;
    match what {
        Target::Residuals => match ws.lookup(name, &[Kind::Quantale, Kind::Module])?.kind {
            Kind::Quantale => {
                let q = ws.quantale(name)?;
                let names = q.lattice().names().to_vec();
                out.push("a\\b (row a, column b)".into());
                out.extend(grid("\\", &names, &names, |a, b| q.name(q.left_residual(a, b)).to_owned()));
                out.push("b/a (row b, column a)".into());
                out.extend(grid("/", &names, &names, |b, a| q.name(q.right_residual(b, a)).to_owned()));
            }
            _ => {
                let m = ws.module(name)?;
                let (qn, mn) = (m.scalars().lattice().names().to_vec(), m.carrier().names().to_vec());
                out.push("a*\\v (row a, column v)".into());
                out.extend(grid("*\\", &qn, &mn, |a, v| m.name(m.under(a, v)).to_owned()));
                out.push("v/*w (row v, column w)".into());
                out.extend(grid("/*", &mn, &mn, |v, w| m.scalars().name(m.over(v, w)).to_owned()));
            }
        },
        Target::Ideals => match ws.lookup(name, &[Kind::Quantale, Kind::Module])?.kind {
            Kind::Quantale => {
                let q = ws.quantale(name)?;
                let elems = q.ideal_elements()?;
                out.push(format!("ideal elements: {{{}}}", names(q.lattice(), &elems)));
                for i in elems {
                    let members = q.lattice().interval(q.bottom(), i);
                    out.push(format!("[{},{}] = {{{}}}", q.name(q.bottom()), q.name(i), names(q.lattice(), &members)));
                }
            }
            _ => {
                let m = ws.module(name)?;
                let elems = m.ideal_elements()?;
                out.push(format!("ideal elements: {{{}}}", names(m.carrier(), &elems)));
                for v in elems {
                    let members = m.carrier().interval(m.bottom(), v);
                    out.push(format!("[{},{}] = {{{}}}", m.name(m.bottom()), m.name(v), names(m.carrier(), &members)));
                }
            }
        },
        Target::Congruences => {
            let bound = bound.unwrap_or(DEFAULT_ENUMERATION_BOUND);
            let (all, l) = match ws.lookup(name, &[Kind::Quantale, Kind::Module])?.kind {
                Kind::Quantale => {
                    let q = ws.quantale(name)?;
                    (enumerate_congruences(&**q, bound)?, q.lattice().clone())
                }
                _ => {
                    let m = ws.module(name)?;
                    (enumerate_congruences(m, bound)?, m.carrier().clone())
                }
            };
            out.push(format!("{} congruences", all.len()));
            for t in &all {
                out.push(format!("{}   ⊥-class {{{}}}", t.describe(&l), names(&l, &bottom_class(&l, t))));
            }
        }
        Target::Saturated => {
            let spec = relation_for(ws, name, relation)?;
            let q = spec.quantale();
            let set = spec.saturated_set()?;
            out.push(format!("Q_R = {{{}}}", names(q.lattice(), &set)));
            let rho = spec.rho_table()?;
            out.push(format!(
                "ρ_R: {}",
                q.elements()
                    .map(|a| format!("{}↦{}", q.name(a), q.name(rho[a])))
                    .collect::<Vec<_>>()
                    .join(" ")
            ));
        }
        Target::Quotient => {
            let spec = relation_for(ws, name, relation)?;
            let quotient = spec.quotient()?;
            let doc = Document {
                items: quantale_decls(&format!("{name}_R"), &quotient.quantale).to_vec(),
            };
            out.push(format!(
                "{} elements: {{{}}}",
                quotient.elements.len(),
                names(spec.quantale().lattice(), &quotient.elements)
            ));
            out.extend(doc.to_text().trim_end().lines().map(str::to_owned));
        }
        Target::Transform => {
            let k = ws.kernel(name)?;
            let space = TransformSpace::for_kernel(k);
            let forward = space.transform(k)?;
            let inverse = space.inverse_map(k);
            let (src, tgt) = (&space.source.module, &space.target.module);
            out.push(format!("kernel {k}"));
            out.push("h_k:".into());
            out.extend(src.elements().map(|f| format!("  {} ↦ {}", src.name(f), tgt.name(forward.apply(f)))));
            out.push("λ_k:".into());
            out.extend(tgt.elements().map(|g| format!("  {} ↦ {}", tgt.name(g), src.name(inverse[g]))));
        }
        Target::K0 => {
            let q = ws.quantale(name)?;
            let bound = bound.unwrap_or(2);
            k0_report(out, q, bound)?;
        }
    }
    Ok(report)
}

fn k0_report(out: &mut Vec<String>, q: &Arc<Quantale>, bound: usize) -> Result<()> {
    let inv = projective_classes(q, bound, DEFAULT_KERNEL_BUDGET)?;
    let free: Vec<QModule> = (0..=bound)
        .map(|r| {
            let index: Vec<String> = (0..r).map(|i| format!("x{i}")).collect();
            PowerModule::new(Arc::clone(&inv.scalars), &index).module
        })
        .collect();
    out.push(format!("{} projective classes from idempotent kernels of size ≤ {bound}", inv.len()));
    for (i, class) in inv.classes.iter().enumerate() {
        let m = &class.representative;
        let mut label = String::new();
        for (r, f) in free.iter().enumerate() {
            if f.len() == m.len() && is_isomorphic(f, m)?.is_some() {
                label = format!(" ≅ free of rank {r}");
            }
        }
        let kernel = class.kernel.as_ref().map_or("-".to_owned(), ToString::to_string);
        out.push(format!("[P{i}] |M|={}{label} kernel {kernel}", m.len()));
    }
    let invariants: [&dyn K0Invariant; 1] = [&CardinalityInvariant];
    let nonzero: Vec<usize> = (1..inv.len()).collect();
    for (a, &i) in nonzero.iter().enumerate() {
        for &j in &nonzero[a..] {
            if let Some(k) = inv.add(i, j)? {
                let v = k0_equal(&inv, &K0Element::difference(vec![i, j], vec![]), &K0Element::class(k), bound, &invariants)?;
                out.push(format!("[P{i}] + [P{j}] vs [P{k}]: {}", verdict(&v)));
            }
        }
    }
    if let [i, j, ..] = nonzero[..] {
        let v = k0_equal(&inv, &K0Element::class(i), &K0Element::class(j), bound, &invariants)?;
        out.push(format!("[P{i}] vs [P{j}]: {}", verdict(&v)));
    }
    Ok(())
}

fn verdict(v: &quantale::k0::K0Verdict) -> String {
    use quantale::k0::K0Verdict::*;
    match v {
        Equal { stabilizer } if stabilizer.is_empty() => "equal".into(),
        Equal { stabilizer } => format!(
            "equal (stabilized by {})",
            stabilizer.iter().map(|c| format!("[P{c}]")).collect::<Vec<_>>().join(" + ")
        ),
        Distinct { invariant, lhs, rhs } => format!("distinct ({invariant} {lhs} ≠ {rhs})"),
        Unknown => "unknown".into(),
    }
}

fn target_name(t: Target) -> String {
    t.to_possible_value().expect("named").get_name().to_owned()
}

fn names(l: &FiniteSupLattice, elems: &[quantale::Elem]) -> String {
    elems.iter().map(|&e| l.name(e)).collect::<Vec<_>>().join(",")
}
