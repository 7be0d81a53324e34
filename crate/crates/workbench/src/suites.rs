//! Exhaustive property suites over structures of a workspace.
//!
//! Each suite checks one family of statements on every applicable element,
//! ideal, congruence, kernel or relation, and records how many instances
//! were checked and a witness for every failure.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use quantale::congruence::{
    enumerate_congruences, generated_by_enumeration, is_congruence, is_semisimple, is_simple, quotient_quantale,
    simple_quotient_congruences, Congruence, Host,
};
use quantale::ideals::{bottom_class, is_ideal, quantale_theta, Ideal, IdealElements, UnitalView};
use quantale::iso::quantale_isomorphism;
use quantale::k0::{idempotent_kernels, image_of_kernel, is_projective, Evidence};
use quantale::lattice::Radix;
use quantale::module::{validate_hom, Handedness};
use quantale::quantale::unitalize;
use quantale::saturation::RelationSpec;
use quantale::transforms::{all_kernels, Kernel, TransformSpace};
use quantale::{Elem, Error, QModule, Quantale, Result};

use crate::format::Kind;
use crate::workspace::{Structure, Workspace};

/// Witnesses kept per result; failures beyond this are only counted.
const MAX_WITNESSES: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Basicmq,
    Qxprop,
    Icong,
    Qicong,
    Matrixendo,
    Adjoint,
    Satquo,
    Itop,
    Simple,
    Proj,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Basicmq,
        Suite::Qxprop,
        Suite::Icong,
        Suite::Qicong,
        Suite::Matrixendo,
        Suite::Adjoint,
        Suite::Satquo,
        Suite::Itop,
        Suite::Simple,
        Suite::Proj,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Basicmq => "basicmq",
            Suite::Qxprop => "qxprop",
            Suite::Icong => "icong",
            Suite::Qicong => "qicong",
            Suite::Matrixendo => "matrixendo",
            Suite::Adjoint => "adjoint",
            Suite::Satquo => "satquo",
            Suite::Itop => "itop",
            Suite::Simple => "simple",
            Suite::Proj => "proj",
        }
    }

    pub fn applies_to(self, kind: Kind) -> bool {
        use Suite::*;
        match kind {
            Kind::Quantale => matches!(self, Qicong | Matrixendo | Adjoint | Satquo | Itop | Simple | Proj),
            Kind::Module => matches!(self, Basicmq | Qxprop | Icong | Proj),
            Kind::Kernel => self == Adjoint,
            Kind::Relation => self == Satquo,
            Kind::Lattice => false,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A suite name or `all`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selection {
    One(Suite),
    All,
}

impl Selection {
    pub fn suites(self) -> Vec<Suite> {
        match self {
            Selection::One(s) => vec![s],
            Selection::All => Suite::ALL.to_vec(),
        }
    }
}

impl FromStr for Selection {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "all" {
            return Ok(Selection::All);
        }
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .map(Selection::One)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

impl fmt::Display for Selection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Selection::One(s) => s.fmt(f),
            Selection::All => f.write_str("all"),
        }
    }
}

/// Budgets and sizes shared by all suites.
#[derive(Clone, Copy, Debug)]
pub struct Options {
    /// Index size `|X|` for kernel suites.
    pub size: usize,
    /// Carrier bound for congruence enumeration.
    pub bound: usize,
    /// Cap on the number of kernels enumerated, `|Q|^(size·size)`.
    pub kernel_budget: u128,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            size: 2,
            bound: quantale::congruence::DEFAULT_ENUMERATION_BOUND,
            kernel_budget: 1 << 12,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub structure: String,
    pub cases_total: u64,
    pub cases_failed: u64,
    pub witnesses: Vec<String>,
    pub notes: Vec<String>,
}

impl SuiteResult {
    fn new(suite: &str, structure: &str) -> Self {
        Self {
            suite: suite.to_owned(),
            structure: structure.to_owned(),
            cases_total: 0,
            cases_failed: 0,
            witnesses: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.cases_failed == 0
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases_total += 1;
        if !ok {
            self.fail(witness());
        }
    }

    fn fail(&mut self, witness: String) {
        self.cases_failed += 1;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(witness);
        }
    }

    /// Counts `r` as one case; an error becomes the witness.
    fn check_ok<T>(&mut self, label: &str, r: Result<T>) -> Option<T> {
        self.cases_total += 1;
        match r {
            Ok(t) => Some(t),
            Err(e) => {
                self.fail(format!("{label}: {e}"));
                None
            }
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

/// Runs the selected suites on one named structure. Fails with
/// [`Error::UnknownStructure`] when the structure is missing or when no
/// selected suite applies to it.
pub fn verify_structure(ws: &Workspace, name: &str, selection: Selection, opts: &Options) -> Result<Vec<SuiteResult>> {
    let entry = ws.lookup(name, &[Kind::Quantale, Kind::Module, Kind::Kernel, Kind::Relation, Kind::Lattice])?;
    let suites: Vec<Suite> = selection.suites().into_iter().filter(|s| s.applies_to(entry.kind)).collect();
    if suites.is_empty() {
        return Err(Error::UnknownStructure(format!(
            "suite {selection} does not apply to {} {name}",
            entry.kind.keyword()
        )));
    }
    match &entry.structure {
        Ok(s) => suites.into_iter().map(|suite| run_suite(suite, name, s, opts)).collect(),
        Err(e) => Ok(vec![invalid(entry.kind, name, e)]),
    }
}

/// Runs the selected suites on every structure of the workspace, in file
/// order. Invalid declarations are reported as failed validation cases.
pub fn verify_all(ws: &Workspace, selection: Selection, opts: &Options) -> Result<Vec<SuiteResult>> {
    let mut out = Vec::new();
    for entry in &ws.entries {
        match &entry.structure {
            Err(e) => out.push(invalid(entry.kind, &entry.name, e)),
            Ok(s) => {
                for suite in selection.suites().into_iter().filter(|x| x.applies_to(entry.kind)) {
                    out.push(run_suite(suite, &entry.name, s, opts)?);
                }
            }
        }
    }
    Ok(out)
}

fn invalid(kind: Kind, name: &str, e: &Error) -> SuiteResult {
    let mut r = SuiteResult::new("validate", name);
    r.check(false, || format!("{} {name}: {e}", kind.keyword()));
    r
}

pub fn run_suite(suite: Suite, name: &str, s: &Structure, opts: &Options) -> Result<SuiteResult> {
    let mut r = SuiteResult::new(suite.name(), name);
    match (suite, s) {
        (Suite::Basicmq, Structure::Module(m)) => basicmq(&mut r, m)?,
        (Suite::Qxprop, Structure::Module(m)) => qxprop(&mut r, m)?,
        (Suite::Icong, Structure::Module(m)) => icong(&mut r, m, opts)?,
        (Suite::Proj, Structure::Module(m)) => proj_module(&mut r, m, opts)?,
        (Suite::Qicong, Structure::Quantale(q)) => qicong(&mut r, q, opts)?,
        (Suite::Matrixendo, Structure::Quantale(q)) => matrixendo(&mut r, q, opts)?,
        (Suite::Adjoint, Structure::Quantale(q)) => adjoint_all(&mut r, q, opts)?,
        (Suite::Adjoint, Structure::Kernel(k)) => adjoint_one(&mut r, &TransformSpace::for_kernel(k), k)?,
        (Suite::Satquo, Structure::Quantale(q)) => satquo(&mut r, q, opts)?,
        (Suite::Satquo, Structure::Relation(spec)) => satquo_relation(&mut r, spec, opts)?,
        (Suite::Itop, Structure::Quantale(q)) => itop(&mut r, q)?,
        (Suite::Simple, Structure::Quantale(q)) => simple(&mut r, q, opts)?,
        (Suite::Proj, Structure::Quantale(q)) => proj_quantale(&mut r, q, opts)?,
        _ => {
            return Err(Error::UnknownStructure(format!(
                "suite {suite} does not apply to {name}"
            )))
        }
    }
    Ok(r)
}

fn basicmq(r: &mut SuiteResult, m: &QModule) -> Result<()> {
    let q = m.scalars();
    let l = m.carrier();
    let (sn, vn) = (|a: Elem| q.name(a).to_owned(), |v: Elem| m.name(v).to_owned());
    for a in q.elements() {
        for v in m.elements() {
            for b in q.elements() {
                if q.leq(a, b) {
                    r.check(m.leq(m.act(a, v), m.act(b, v)), || {
                        format!("(i) {}≤{} but {}*{} ≰ {}*{}", sn(a), sn(b), sn(a), vn(v), sn(b), vn(v))
                    });
                }
                r.check(
                    m.under(q.join(a, b), v) == l.meet(m.under(a, v), m.under(b, v)),
                    || format!("(ii) ({}∨{})*\\{} is not a meet", sn(a), sn(b), vn(v)),
                );
            }
            r.check(m.leq(m.act(a, m.under(a, v)), v), || {
                format!("(iv) {}*({}*\\{}) ≰ {}", sn(a), sn(a), vn(v), vn(v))
            });
            r.check(m.leq(v, m.under(a, m.act(a, v))), || {
                format!("(v) {} ≰ {}*\\({}*{})", vn(v), sn(a), sn(a), vn(v))
            });
            for w in m.elements() {
                if m.leq(v, w) {
                    r.check(m.leq(m.act(a, v), m.act(a, w)), || {
                        format!("(i) {}≤{} but {}*{} ≰ {}*{}", vn(v), vn(w), sn(a), vn(v), sn(a), vn(w))
                    });
                }
                r.check(
                    m.under(a, l.meet(v, w)) == l.meet(m.under(a, v), m.under(a, w)),
                    || format!("(ii) {}*\\({}∧{}) is not a meet", sn(a), vn(v), vn(w)),
                );
                r.check(
                    m.over(m.under(a, v), w) == q.left_residual(a, m.over(v, w)),
                    || format!("(vi) a={} v={} w={}", sn(a), vn(v), vn(w)),
                );
            }
        }
    }
    for v in m.elements() {
        for w in m.elements() {
            let vw = m.over(v, w);
            r.check(m.leq(m.act(vw, w), v), || format!("(iii) v={} w={}", vn(v), vn(w)));
            r.check(m.over(m.act(vw, w), w) == vw, || format!("(vii) v={} w={}", vn(v), vn(w)));
            for u in m.elements() {
                r.check(m.over(l.meet(v, w), u) == q.meet(m.over(v, u), m.over(w, u)), || {
                    format!("(ii) ({}∧{})/*{} is not a meet", vn(v), vn(w), vn(u))
                });
                r.check(m.over(v, l.join(w, u)) == q.meet(vw, m.over(v, u)), || {
                    format!("(ii) {}/*({}∨{}) is not a meet", vn(v), vn(w), vn(u))
                });
            }
        }
    }
    let view = UnitalView::new(m)?;
    let um = view.module();
    let one = um.scalars().unit().expect("unital view");
    if view.is_lifted() {
        r.note("(viii) and (ix) evaluated over Q[e]");
    }
    for v in m.elements() {
        let vv = um.over(v, v);
        r.check(um.scalars().leq(one, vv), || format!("(viii) 1 ≰ {}/*{}", vn(v), vn(v)));
        r.check(um.act(vv, v) == v, || format!("(ix) ({}/*{})*{} ≠ {}", vn(v), vn(v), vn(v), vn(v)));
    }
    Ok(())
}

fn module_ideals(r: &mut SuiteResult, m: &QModule) -> Vec<Ideal> {
    r.check_ok("ideal elements", m.ideal_elements())
        .unwrap_or_default()
        .into_iter()
        .map(|generator| Ideal { generator })
        .collect()
}

fn qxprop(r: &mut SuiteResult, m: &QModule) -> Result<()> {
    let view = UnitalView::new(m)?;
    let um = view.module();
    let p = um.scalars();
    let one = p.unit().expect("unital view");
    let vn = |v: Elem| m.name(v).to_owned();
    let ideals = module_ideals(r, m);
    for ideal in &ideals {
        let g = m.name(ideal.generator).to_owned();
        let ihat: Vec<Elem> = m.elements().map(|v| view.i_hat(ideal, v)).collect();
        r.check(ihat[m.bottom()] == p.top(), || format!("(iv) i^⊥ ≠ ⊤ for I=[⊥,{g}]"));
        for v in m.elements() {
            let iv = ihat[v];
            for a in p.elements() {
                r.check(p.leq(p.mul(a, iv), iv), || {
                    format!("(i) I=[⊥,{g}] a={} v={}", p.name(a), vn(v))
                });
                if p.leq(one, a) {
                    r.check(p.mul(a, iv) == iv, || format!("(ii) I=[⊥,{g}] a={} v={}", p.name(a), vn(v)));
                }
                r.check(view.i_hat(ideal, um.act(a, v)) == p.right_residual(iv, a), || {
                    format!("(v) I=[⊥,{g}] a={} v={}", p.name(a), vn(v))
                });
            }
            for w in m.elements() {
                if m.leq(v, w) {
                    r.check(p.leq(ihat[w], iv), || format!("(iii) I=[⊥,{g}] v={} w={}", vn(v), vn(w)));
                }
                r.check(ihat[m.join(v, w)] == p.meet(iv, ihat[w]), || {
                    format!("(iv) I=[⊥,{g}] v={} w={}", vn(v), vn(w))
                });
            }
        }
    }
    r.note(format!("{} ideals", ideals.len()));
    Ok(())
}

fn icong(r: &mut SuiteResult, m: &QModule, opts: &Options) -> Result<()> {
    let all = enumerate_congruences(m, opts.bound)?;
    let l = m.carrier();
    let view = UnitalView::new(m)?;
    let mut by_bottom: BTreeMap<Vec<Elem>, Vec<&Congruence>> = BTreeMap::new();
    for theta in &all {
        let class = bottom_class(l, theta);
        r.check(is_ideal(m, &class), || format!("⊥-class of {} is not an ideal", theta.describe(l)));
        by_bottom.entry(class).or_default().push(theta);
    }
    let ideals = module_ideals(r, m);
    for ideal in &ideals {
        let members = ideal.members(l);
        let g = m.name(ideal.generator);
        let theta_i = view.theta(ideal);
        r.check(is_congruence(m, &theta_i), || format!("θ_[⊥,{g}] is not a congruence"));
        r.check(bottom_class(l, &theta_i) == members, || format!("⊥/θ_[⊥,{g}] ≠ [⊥,{g}]"));
        for theta in by_bottom.get(&members).into_iter().flatten() {
            r.check(theta.is_finer_than(&theta_i), || {
                format!("{} has ⊥-class [⊥,{g}] but is not below θ_[⊥,{g}]", theta.describe(l))
            });
        }
        for v in m.elements() {
            for w in m.elements() {
                let same_scalar = view.i_hat(ideal, v) == view.i_hat(ideal, w);
                r.check(same_scalar == view.cross_term_in_ideal(ideal, v, w), || {
                    format!("I=[⊥,{g}] v={} w={}: i^v = i^w is not equivalent to the cross term", m.name(v), m.name(w))
                });
            }
        }
    }
    let classes: Vec<Vec<Elem>> = ideals.iter().map(|i| i.members(l)).collect();
    r.check(by_bottom.keys().all(|c| classes.contains(c)) && by_bottom.len() == classes.len(), || {
        "⊥-classes of congruences differ from the ideals".into()
    });
    r.note(format!(
        "θ_I maximal among {} enumerated congruences for each of {} ideals",
        all.len(),
        ideals.len()
    ));
    for (class, thetas) in &by_bottom {
        if thetas.len() > 1 {
            r.note(format!(
                "⊥-class {{{}}} is shared by {} congruences",
                names(l, class),
                thetas.len()
            ));
        }
    }
    Ok(())
}

fn names(l: &quantale::FiniteSupLattice, elems: &[Elem]) -> String {
    elems.iter().map(|&e| l.name(e)).collect::<Vec<_>>().join(",")
}

fn two_sided(q: &Quantale) -> Vec<Elem> {
    q.elements().filter(|&i| q.is_two_sided(i)).collect()
}

fn qicong(r: &mut SuiteResult, q: &Quantale, opts: &Options) -> Result<()> {
    let all = enumerate_congruences(q, opts.bound)?;
    let l = q.lattice();
    for theta in &all {
        let class = bottom_class(l, theta);
        let top = l.join_all(class.iter().copied());
        r.check(q.is_two_sided(top) && class == l.interval(l.bottom(), top), || {
            format!("⊥-class of {} is not [⊥,i] for a two-sided i", theta.describe(l))
        });
    }
    let sided = two_sided(q);
    for &i in &sided {
        r.check(q.is_ideal_element(i), || format!("{} is two-sided but not an ideal generator", q.name(i)));
        let theta_i = quantale_theta(q, i)?;
        let members = l.interval(l.bottom(), i);
        let n = q.name(i);
        r.check(is_congruence(q, &theta_i), || format!("θ_{n} is not a congruence"));
        r.check(bottom_class(l, &theta_i) == members, || format!("⊥/θ_{n} ≠ [⊥,{n}]"));
        for theta in all.iter().filter(|t| bottom_class(l, t) == members) {
            r.check(theta.is_finer_than(&theta_i), || {
                format!("{} has ⊥-class [⊥,{n}] but is not below θ_{n}", theta.describe(l))
            });
        }
    }
    r.note(format!(
        "θ_i maximal among {} enumerated congruences for each of {} two-sided elements",
        all.len(),
        sided.len()
    ));
    Ok(())
}

fn check_kernel_space(opts: &Options, q: &Quantale) -> Result<usize> {
    let needed = (q.len() as u128)
        .checked_pow((opts.size * opts.size) as u32)
        .unwrap_or(u128::MAX);
    if needed > opts.kernel_budget {
        return Err(Error::BudgetExceeded {
            what: "kernels",
            needed,
            budget: opts.kernel_budget,
        });
    }
    Ok(needed as usize)
}

fn matrixendo(r: &mut SuiteResult, q: &Arc<Quantale>, opts: &Options) -> Result<()> {
    let count = check_kernel_space(opts, q)?;
    let n = opts.size;
    let kernels: Vec<Kernel> = all_kernels(q, n, n, Handedness::Left).collect();
    let radix = Radix::uniform(q.len(), n * n);
    let space = TransformSpace::for_kernel(&kernels[0]);
    let free = &space.source.module;
    let forward: Vec<Vec<Elem>> = kernels.iter().map(|k| space.forward_map(k)).collect();
    for (k, fwd) in kernels.iter().zip(&forward) {
        r.check_ok(&format!("η({k}) is a homomorphism"), validate_hom(free, free, fwd.clone()));
    }
    for (i, k) in kernels.iter().enumerate() {
        for (j, l) in kernels.iter().enumerate() {
            let star = radix.encode(&k.star(l)?.entries);
            let composed = forward[i].iter().map(|&f| forward[j][f]);
            r.check(forward[star].iter().copied().eq(composed), || format!("η({k}⋆{l}) ≠ η({l})∘η({k})"));
            let join: Vec<Elem> = k.entries.iter().zip(&l.entries).map(|(&a, &b)| q.join(a, b)).collect();
            let joined = forward[i].iter().zip(&forward[j]).map(|(&f, &g)| free.join(f, g));
            r.check(forward[radix.encode(&join)].iter().copied().eq(joined), || {
                format!("η({k}∨{l}) ≠ η({k})∨η({l})")
            });
        }
    }
    if q.unit().is_some() {
        let id = Kernel::identity(q, n)?;
        r.check(forward[radix.encode(&id.entries)].iter().enumerate().all(|(f, &g)| f == g), || {
            "η(id) is not the identity".into()
        });
        for (k, fwd) in kernels.iter().zip(&forward) {
            let hom = validate_hom(free, free, fwd.clone())?;
            let back = space.kernel_of_endo(q, &hom)?;
            r.check(back.entries == k.entries, || format!("kernel of η({k}) is {back}"));
        }
    } else {
        r.note("no unit: identity and endomorphism-to-kernel checks skipped");
    }
    r.note(format!("{count} kernels, {} pairs", count * count));
    Ok(())
}

fn adjoint_one(r: &mut SuiteResult, space: &TransformSpace, k: &Kernel) -> Result<()> {
    let report = space.check_adjoint(k)?;
    r.check(report.counterexample.is_none(), || {
        let (f, g) = report.counterexample.expect("counterexample");
        format!(
            "{k}: h f ≤ g and f ≤ λ g disagree at f={} g={}",
            space.source.module.name(f),
            space.target.module.name(g)
        )
    });
    r.check(report.residuum_matches, || format!("{k}: λ is not the residuum of h"));
    let nucleus = space.nucleus_of(k);
    r.check(nucleus.violation.is_none(), || {
        format!("{k}: λ∘h {}", nucleus.violation.clone().unwrap_or_default())
    });
    Ok(())
}

fn adjoint_all(r: &mut SuiteResult, q: &Arc<Quantale>, opts: &Options) -> Result<()> {
    let count = check_kernel_space(opts, q)?;
    let n = opts.size;
    let mut space = None;
    for k in all_kernels(q, n, n, Handedness::Left) {
        let space = space.get_or_insert_with(|| TransformSpace::for_kernel(&k));
        adjoint_one(r, space, &k)?;
    }
    r.note(format!("{count} kernels"));
    Ok(())
}

/// Compares the quotient by saturation with the quotient by the
/// enumerated congruence generated by the same pairs.
fn satquo_one(r: &mut SuiteResult, spec: &RelationSpec, bound: usize) -> Result<()> {
    let q = spec.quantale();
    let label = spec
        .pairs()
        .iter()
        .map(|&(a, b)| format!("({},{})", q.name(a), q.name(b)))
        .collect::<Vec<_>>()
        .join(" ");
    let oracle = generated_by_enumeration(q, spec.pairs(), bound)?;
    let Some(generated) = r.check_ok(&format!("R={{{label}}}"), spec.congruence_generated()) else {
        return Ok(());
    };
    r.check(generated == oracle, || {
        format!(
            "R={{{label}}}: ker ρ = {} but generated congruence is {}",
            generated.describe(q.lattice()),
            oracle.describe(q.lattice())
        )
    });
    let Some(by_rho) = r.check_ok(&format!("R={{{label}}} quotient"), spec.quotient()) else {
        return Ok(());
    };
    let by_theta = quotient_quantale(q, &oracle)?;
    r.check(quantale_isomorphism(&by_rho.quantale, &by_theta.structure).is_some(), || {
        format!("R={{{label}}}: Q_R is not isomorphic to Q/θ_R")
    });
    Ok(())
}

fn satquo(r: &mut SuiteResult, q: &Arc<Quantale>, opts: &Options) -> Result<()> {
    let pairs: Vec<(Elem, Elem)> = q.elements().flat_map(|a| q.elements().map(move |b| (a, b))).collect();
    let mut singles = Vec::with_capacity(pairs.len());
    for &p in &pairs {
        let spec = RelationSpec::new(Arc::clone(q), vec![p])?;
        satquo_one(r, &spec, opts.bound)?;
        singles.push(spec.saturated_set().unwrap_or_default());
    }
    let mut doubles = 0usize;
    for (i, &p) in pairs.iter().enumerate() {
        for (j, &p2) in pairs.iter().enumerate().skip(i + 1) {
            doubles += 1;
            let spec = RelationSpec::new(Arc::clone(q), vec![p, p2])?;
            satquo_one(r, &spec, opts.bound)?;
            let bigger = spec.saturated_set().unwrap_or_default();
            r.check(bigger.iter().all(|s| singles[i].contains(s) && singles[j].contains(s)), || {
                format!(
                    "R ⊆ R' but Q_R' ⊄ Q_R for R'={{({},{}) ({},{})}}",
                    q.name(p.0),
                    q.name(p.1),
                    q.name(p2.0),
                    q.name(p2.1)
                )
            });
        }
    }
    let all = enumerate_congruences(&**q, opts.bound)?;
    let l = q.lattice();
    for i in two_sided(q) {
        let spec = RelationSpec::new(Arc::clone(q), vec![(q.bottom(), i)])?;
        let theta = spec.congruence_generated()?;
        let members = l.interval(l.bottom(), i);
        let n = q.name(i);
        r.check(bottom_class(l, &theta) == members, || format!("⊥-class generated by (⊥,{n}) ≠ [⊥,{n}]"));
        for other in all.iter().filter(|t| bottom_class(l, t) == members) {
            r.check(theta.is_finer_than(other), || {
                format!("{} has ⊥-class [⊥,{n}] but does not contain (⊥,{n})", other.describe(l))
            });
        }
    }
    r.note(format!("{} singleton and {doubles} two-pair relations", pairs.len()));
    Ok(())
}

fn satquo_relation(r: &mut SuiteResult, spec: &RelationSpec, opts: &Options) -> Result<()> {
    satquo_one(r, spec, opts.bound)?;
    if let Ok(set) = spec.saturated_set() {
        let q = spec.quantale();
        r.note(format!("Q_R = {{{}}}", names(q.lattice(), &set)));
    }
    Ok(())
}

fn itop(r: &mut SuiteResult, q: &Arc<Quantale>) -> Result<()> {
    let l = q.lattice();
    for i in two_sided(q) {
        let spec = RelationSpec::new(Arc::clone(q), vec![(q.bottom(), i)])?;
        let n = q.name(i);
        if let Some(set) = r.check_ok(&format!("R={{(⊥,{n})}}"), spec.saturated_set()) {
            r.check(set == l.interval(i, l.top()), || {
                format!("Q_R = {{{}}} ≠ [{n},⊤]", names(l, &set))
            });
        }
    }
    Ok(())
}

fn simple(r: &mut SuiteResult, q: &Quantale, opts: &Options) -> Result<()> {
    let all = enumerate_congruences(q, opts.bound)?;
    let is_s = is_simple(q, opts.bound)?;
    let is_ss = is_semisimple(q, opts.bound)?;
    for theta in simple_quotient_congruences(&all) {
        let quotient = quotient_quantale(q, theta)?.structure;
        r.check(is_simple(&quotient, opts.bound)?, || {
            format!("quotient by coatom {} is not simple", theta.describe(q.lattice()))
        });
    }
    let c = q.classify();
    if c.integral {
        r.check(is_s == (q.len() <= 2), || format!("integral, |Q|={}, simple={is_s}", q.len()));
        r.check(is_ss == c.frame, || format!("integral, frame={}, semisimple={is_ss}", c.frame));
    }
    r.note(format!(
        "{} congruences; simple={is_s} semisimple={is_ss} integral={} frame={}",
        all.len(),
        c.integral,
        c.frame
    ));
    Ok(())
}

fn proj_module(r: &mut SuiteResult, m: &QModule, opts: &Options) -> Result<()> {
    let gens = m.carrier().join_irreducibles();
    if let Some(cert) = r.check_ok("projectivity search", is_projective(m, &gens, opts.kernel_budget)) {
        let how = match &cert.evidence {
            Evidence::Splitting { kernel, .. } => format!("split by idempotent kernel {kernel}"),
            Evidence::Exhausted { sections_tried } => format!("no section among {sections_tried} candidates"),
        };
        r.note(format!(
            "projective={} ({how}; cross-checked={})",
            cert.projective, cert.cross_checked
        ));
    }
    Ok(())
}

fn proj_quantale(r: &mut SuiteResult, q: &Arc<Quantale>, opts: &Options) -> Result<()> {
    let scalars = if q.unit().is_some() {
        Arc::clone(q)
    } else {
        r.note("no unit: kernels taken over Q[e]");
        Arc::new(unitalize(q)?.quantale)
    };
    check_kernel_space(opts, &scalars)?;
    let kernels = idempotent_kernels(&scalars, opts.size, opts.kernel_budget)?;
    let mut space = None;
    for k in &kernels {
        let space = space.get_or_insert_with(|| TransformSpace::for_kernel(k));
        let image = image_of_kernel(k)?;
        let forward = space.forward_map(k);
        r.check(image.embedding.iter().all(|&f| forward[f] == f), || {
            format!("h_{k} is not the identity on its image")
        });
        let gens: Vec<Elem> = (0..k.rows.len())
            .map(|x| {
                let row = image.power.encode(&k.row(x));
                image.embedding.iter().position(|&e| e == row).expect("row in image")
            })
            .collect();
        if let Some(cert) = r.check_ok(&format!("image of {k}"), is_projective(&image.module, &gens, 0)) {
            r.check(cert.projective, || format!("image of idempotent {k} not certified projective"));
        }
    }
    r.note(format!("{} idempotent kernels of size {}", kernels.len(), opts.size));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::corpus;

    fn run(name: &str, suite: Suite) -> SuiteResult {
        let ws = corpus();
        let mut rs = verify_structure(&ws, name, Selection::One(suite), &Options::default()).unwrap();
        rs.pop().unwrap()
    }

    #[test]
    fn every_suite_passes_on_the_corpus() {
        let ws = corpus();
        for r in verify_all(&ws, Selection::All, &Options::default()).unwrap() {
            assert!(r.passed(), "{} {}: {:?}", r.suite, r.structure, r.witnesses);
            assert!(r.cases_total > 0, "{} {}", r.suite, r.structure);
        }
    }

    #[test]
    fn l3_icong_counts() {
        let r = run("L3l", Suite::Icong);
        assert!(r.notes[0].contains("3 enumerated congruences for each of 3 ideals"), "{:?}", r.notes);
    }

    #[test]
    fn b2_matrixendo_counts() {
        let r = run("B2", Suite::Matrixendo);
        assert_eq!(r.notes.last().unwrap(), "16 kernels, 256 pairs");
    }

    #[test]
    fn diamond_has_a_shared_bottom_class() {
        let r = run("D4b", Suite::Icong);
        assert!(r.notes.iter().any(|n| n.starts_with("⊥-class {0} is shared by")), "{:?}", r.notes);
    }

    #[test]
    fn counter_fixtures_fail_validation() {
        for (_, src) in crate::fixtures::COUNTER {
            let ws = Workspace::from_source(src).unwrap();
            let rs = verify_all(&ws, Selection::All, &Options::default()).unwrap();
            let bad: Vec<_> = rs.iter().filter(|r| !r.passed()).collect();
            assert_eq!(bad.len(), 1);
            assert_eq!(bad[0].suite, "validate");
            assert!(!bad[0].witnesses.is_empty());
        }
    }

    #[test]
    fn inapplicable_suite_is_rejected() {
        let ws = corpus();
        assert!(verify_structure(&ws, "C2", Selection::All, &Options::default()).is_err());
        assert!(verify_structure(&ws, "B2l", Selection::One(Suite::Itop), &Options::default()).is_err());
    }
}
