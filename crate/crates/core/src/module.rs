//! Quantale modules, their homomorphisms, and the standard constructions
//! on them: free (function) modules, submodules, direct sums, the order
//! dual with the residuated action, and hom-objects.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::iso;
use crate::lattice::{check_join_preserving, Elem, FiniteSupLattice, Radix};
use crate::quantale::{unitalize, Quantale, Unitalization};

/// Right modules are stored as left modules over the opposite quantale;
/// this flag records which side the action originally came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Handedness {
    Left,
    Right,
}

impl Handedness {
    pub fn flip(self) -> Self {
        match self {
            Handedness::Left => Handedness::Right,
            Handedness::Right => Handedness::Left,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QModule {
    scalars: Arc<Quantale>,
    carrier: FiniteSupLattice,
    // a * v at [a * m + v]
    action: Vec<Elem>,
    handedness: Handedness,
    // a *\ v at [a * m + v]
    under: Vec<Elem>,
    // v /* w at [v * m + w], a scalar
    over: Vec<Elem>,
}

impl QModule {
    /// Validates (M2), then (M1), then (M3) when the scalars are unital.
    pub fn new(scalars: Arc<Quantale>, carrier: FiniteSupLattice, action: Vec<Elem>) -> Result<Self> {
        Self::with_handedness(scalars, carrier, action, Handedness::Left)
    }

    pub fn with_handedness(
        scalars: Arc<Quantale>,
        carrier: FiniteSupLattice,
        action: Vec<Elem>,
        handedness: Handedness,
    ) -> Result<Self> {
        let (k, m) = (scalars.len(), carrier.len());
        if action.len() != k * m {
            return Err(Error::TableShape {
                expected: k * m,
                found: action.len(),
            });
        }
        if let Some(&bad) = action.iter().find(|&&x| x >= m) {
            return Err(Error::UnknownElement(format!("#{bad}")));
        }
        let act = |a: Elem, v: Elem| action[a * m + v];
        let q = &*scalars;
        let l = &carrier;
        for a in q.elements() {
            if act(a, l.bottom()) != l.bottom() {
                return Err(Error::M2Violation {
                    clause: "a * ⊥ = ⊥",
                    witness: format!("a = {}", q.name(a)),
                });
            }
        }
        for v in l.elements() {
            if act(q.bottom(), v) != l.bottom() {
                return Err(Error::M2Violation {
                    clause: "⊥ * v = ⊥",
                    witness: format!("v = {}", l.name(v)),
                });
            }
        }
        for a in q.elements() {
            for v in l.elements() {
                for w in v + 1..m {
                    if act(a, l.join(v, w)) != l.join(act(a, v), act(a, w)) {
                        return Err(Error::M2Violation {
                            clause: "a * (v ∨ w) = a * v ∨ a * w",
                            witness: format!("a = {}, v = {}, w = {}", q.name(a), l.name(v), l.name(w)),
                        });
                    }
                }
            }
        }
        for a in q.elements() {
            for b in a + 1..k {
                for v in l.elements() {
                    if act(q.join(a, b), v) != l.join(act(a, v), act(b, v)) {
                        return Err(Error::M2Violation {
                            clause: "(a ∨ b) * v = a * v ∨ b * v",
                            witness: format!("a = {}, b = {}, v = {}", q.name(a), q.name(b), l.name(v)),
                        });
                    }
                }
            }
        }
        for a in q.elements() {
            for b in q.elements() {
                for v in l.elements() {
                    if act(q.mul(a, b), v) != act(a, act(b, v)) {
                        return Err(Error::M1Violation {
                            a: q.name(a).to_owned(),
                            b: q.name(b).to_owned(),
                            v: l.name(v).to_owned(),
                        });
                    }
                }
            }
        }
        if let Some(one) = q.unit() {
            if let Some(v) = l.elements().find(|&v| act(one, v) != v) {
                return Err(Error::M3Violation {
                    v: l.name(v).to_owned(),
                });
            }
        }
        let mut under = vec![0; k * m];
        for a in q.elements() {
            for v in l.elements() {
                under[a * m + v] = l.join_all(l.elements().filter(|&u| l.leq(act(a, u), v)));
            }
        }
        let mut over = vec![0; m * m];
        for v in l.elements() {
            for w in l.elements() {
                over[v * m + w] = q.lattice().join_all(q.elements().filter(|&b| l.leq(act(b, w), v)));
            }
        }
        Ok(Self {
            scalars,
            carrier,
            action,
            handedness,
            under,
            over,
        })
    }

    /// Action given by names, one row per scalar.
    pub fn from_rows<S: AsRef<str>>(
        scalars: Arc<Quantale>,
        carrier: FiniteSupLattice,
        rows: &[Vec<S>],
    ) -> Result<Self> {
        let (k, m) = (scalars.len(), carrier.len());
        if rows.len() != k || rows.iter().any(|r| r.len() != m) {
            return Err(Error::TableShape {
                expected: k * m,
                found: rows.iter().map(Vec::len).sum(),
            });
        }
        let mut action = Vec::with_capacity(k * m);
        for row in rows {
            for s in row {
                action.push(carrier.elem(s.as_ref())?);
            }
        }
        Self::new(scalars, carrier, action)
    }

    /// The quantale acting on itself by left multiplication.
    pub fn regular(q: Arc<Quantale>) -> Self {
        let carrier = q.lattice().clone();
        let action = q.mul_table().to_vec();
        Self::new(q, carrier, action).expect("quantale acts on itself")
    }

    /// A sup-lattice as a module over a two-element quantale whose top acts
    /// as the identity.
    pub fn over_two_element(q: Arc<Quantale>, carrier: FiniteSupLattice) -> Result<Self> {
        if q.len() != 2 {
            return Err(Error::CarrierTooLarge { size: q.len(), bound: 2 });
        }
        let m = carrier.len();
        let mut action = vec![carrier.bottom(); 2 * m];
        for v in 0..m {
            action[q.top() * m + v] = v;
        }
        Self::new(q, carrier, action)
    }

    pub fn scalars(&self) -> &Quantale {
        &self.scalars
    }

    pub fn scalars_arc(&self) -> &Arc<Quantale> {
        &self.scalars
    }

    pub fn carrier(&self) -> &FiniteSupLattice {
        &self.carrier
    }

    pub fn handedness(&self) -> Handedness {
        self.handedness
    }

    pub fn action_table(&self) -> &[Elem] {
        &self.action
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        self.carrier.elements()
    }

    pub fn name(&self, v: Elem) -> &str {
        self.carrier.name(v)
    }

    pub fn elem(&self, name: &str) -> Result<Elem> {
        self.carrier.elem(name)
    }

    pub fn bottom(&self) -> Elem {
        self.carrier.bottom()
    }

    pub fn top(&self) -> Elem {
        self.carrier.top()
    }

    #[inline]
    pub fn leq(&self, v: Elem, w: Elem) -> bool {
        self.carrier.leq(v, w)
    }

    #[inline]
    pub fn join(&self, v: Elem, w: Elem) -> Elem {
        self.carrier.join(v, w)
    }

    #[inline]
    pub fn act(&self, a: Elem, v: Elem) -> Elem {
        self.action[a * self.len() + v]
    }

    /// `a *\ v = ⋁{u | a * u <= v}`
    #[inline]
    pub fn under(&self, a: Elem, v: Elem) -> Elem {
        self.under[a * self.len() + v]
    }

    /// `v /* w = ⋁{b ∈ Q | b * w <= v}`
    #[inline]
    pub fn over(&self, v: Elem, w: Elem) -> Elem {
        self.over[v * self.len() + w]
    }

    /// Both action residuals for named arguments: `(a *\ v, v /* w)`.
    pub fn action_residuals(&self, a: &str, v: &str, w: &str) -> Result<(Elem, Elem)> {
        let a = self.scalars.elem(a)?;
        let (v, w) = (self.elem(v)?, self.elem(w)?);
        Ok((self.under(a, v), self.over(v, w)))
    }

    pub fn same_scalars(&self, other: &QModule) -> bool {
        Arc::ptr_eq(&self.scalars, &other.scalars) || *self.scalars == *other.scalars
    }

    /// Least subset containing `generators` and closed under joins (bottom
    /// included) and the action.
    pub fn submodule_generated(&self, generators: &[Elem]) -> Vec<Elem> {
        let mut inside = vec![false; self.len()];
        let mut members = vec![self.bottom()];
        inside[self.bottom()] = true;
        for &g in generators {
            if !inside[g] {
                inside[g] = true;
                members.push(g);
            }
        }
        let mut changed = true;
        while changed {
            changed = false;
            let snapshot = members.clone();
            for &v in &snapshot {
                for a in self.scalars.elements() {
                    let av = self.act(a, v);
                    if !inside[av] {
                        inside[av] = true;
                        members.push(av);
                        changed = true;
                    }
                }
                for &w in &snapshot {
                    let vw = self.join(v, w);
                    if !inside[vw] {
                        inside[vw] = true;
                        members.push(vw);
                        changed = true;
                    }
                }
            }
        }
        members.sort_unstable();
        members
    }

    /// The submodule on a join- and action-closed subset, with its embedding.
    pub fn submodule(&self, subset: &[Elem]) -> Result<(QModule, Vec<Elem>)> {
        let (carrier, embedding) = self.carrier.join_closed_subset(subset)?;
        let m = embedding.len();
        let mut action = Vec::with_capacity(self.scalars.len() * m);
        for a in self.scalars.elements() {
            for &v in &embedding {
                let av = self.act(a, v);
                let pos = embedding.binary_search(&av).map_err(|_| {
                    Error::ClosureViolation(format!(
                        "{} * {} = {} leaves the subset",
                        self.scalars.name(a),
                        self.name(v),
                        self.name(av)
                    ))
                })?;
                action.push(pos);
            }
        }
        let module = QModule::with_handedness(self.scalars.clone(), carrier, action, self.handedness)?;
        Ok((module, embedding))
    }

    /// The same module viewed over `Q[e]`, with `e` acting as the identity:
    /// `(a ∨ ε) * v = a * v ∨ ε * v`.
    pub fn over_unitalization(&self, u: &Unitalization) -> Result<QModule> {
        let k2 = u.quantale.len();
        let m = self.len();
        let mut action = vec![0; k2 * m];
        for x in 0..k2 {
            let (a, with_e) = (x / 2, x % 2 == 1);
            for v in self.elements() {
                let av = self.act(a, v);
                action[x * m + v] = if with_e { self.join(av, v) } else { av };
            }
        }
        QModule::with_handedness(Arc::new(u.quantale.clone()), self.carrier.clone(), action, self.handedness)
    }

    /// Same module with relabelled carrier elements.
    pub fn relabel(&self, names: Vec<String>) -> Result<QModule> {
        Ok(QModule {
            carrier: self.carrier.relabel(names)?,
            ..self.clone()
        })
    }

    /// Same carrier and action over an isomorphic copy of the scalars;
    /// `scalar_iso[a]` is the image of scalar `a` in `target`.
    pub fn transport(&self, target: Arc<Quantale>, scalar_iso: &[Elem]) -> Result<QModule> {
        let m = self.len();
        let mut action = vec![0; target.len() * m];
        for a in self.scalars.elements() {
            for v in self.elements() {
                action[scalar_iso[a] * m + v] = self.act(a, v);
            }
        }
        QModule::with_handedness(target, self.carrier.clone(), action, self.handedness)
    }
}

/// The order dual `M^op` with action `a ∗op v = a ∗\ v`, as a module of the
/// opposite handedness (a left module over the opposite quantale).
pub fn op_module(m: &QModule) -> QModule {
    let carrier = m.carrier.dual();
    let scalars = Arc::new(m.scalars.opposite());
    let k = m.scalars.len();
    let n = m.len();
    let mut action = vec![0; k * n];
    for a in 0..k {
        for v in 0..n {
            action[a * n + v] = m.under(a, v);
        }
    }
    QModule::with_handedness(scalars, carrier, action, m.handedness.flip()).expect("dual module")
}

/// The function module `Q^X` with pointwise order and action. When `Q` is
/// unital this is the free module on `X` with basis `e_x`.
#[derive(Clone, Debug)]
pub struct PowerModule {
    pub module: QModule,
    pub index: Vec<String>,
    pub radix: Radix,
}

impl PowerModule {
    pub fn new<S: AsRef<str>>(q: Arc<Quantale>, index: &[S]) -> Self {
        let index: Vec<String> = index.iter().map(|s| s.as_ref().to_owned()).collect();
        let factors: Vec<&FiniteSupLattice> = vec![q.lattice(); index.len()];
        let carrier = FiniteSupLattice::product(&factors);
        let radix = Radix::uniform(q.len(), index.len());
        let n = carrier.len();
        let mut action = vec![0; q.len() * n];
        for f in 0..n {
            let tuple = radix.decode(f);
            for a in q.elements() {
                let af: Vec<Elem> = tuple.iter().map(|&x| q.mul(a, x)).collect();
                action[a * n + f] = radix.encode(&af);
            }
        }
        let module = QModule::new(q, carrier, action).expect("function module");
        Self { module, index, radix }
    }

    pub fn tuple(&self, f: Elem) -> Vec<Elem> {
        self.radix.decode(f)
    }

    pub fn encode(&self, tuple: &[Elem]) -> Elem {
        self.radix.encode(tuple)
    }

    pub fn arity(&self) -> usize {
        self.index.len()
    }

    /// `e_x`, defined when the scalars are unital.
    pub fn basis(&self, x: usize) -> Option<Elem> {
        let q = self.module.scalars();
        let one = q.unit()?;
        let t: Vec<Elem> = (0..self.arity())
            .map(|y| if y == x { one } else { q.bottom() })
            .collect();
        Some(self.encode(&t))
    }

    pub fn basis_vectors(&self) -> Option<Vec<Elem>> {
        (0..self.arity()).map(|x| self.basis(x)).collect()
    }
}

/// The free module over `X`: `Q^X` when `Q` is unital, otherwise `Q[e]^X`.
#[derive(Clone, Debug)]
pub struct FreeModule {
    pub power: PowerModule,
    pub basis: Vec<Elem>,
    /// Present when the scalars had to be unitalized first.
    pub unitalization: Option<Unitalization>,
}

pub fn free_module<S: AsRef<str>>(q: &Arc<Quantale>, index: &[S]) -> Result<FreeModule> {
    let (scalars, unitalization) = if q.unit().is_some() {
        (q.clone(), None)
    } else {
        let u = unitalize(q)?;
        (Arc::new(u.quantale.clone()), Some(u))
    };
    let power = PowerModule::new(scalars, index);
    let basis = power.basis_vectors().expect("unital scalars");
    Ok(FreeModule {
        power,
        basis,
        unitalization,
    })
}

impl FreeModule {
    pub fn module(&self) -> &QModule {
        &self.power.module
    }
}

/// Direct sum (product and coproduct) of two modules over the same scalars.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub module: QModule,
    pub radix: Radix,
}

impl DirectSum {
    pub fn inject_left(&self, v: Elem, right_bottom: Elem) -> Elem {
        self.radix.encode(&[v, right_bottom])
    }

    pub fn inject_right(&self, w: Elem, left_bottom: Elem) -> Elem {
        self.radix.encode(&[left_bottom, w])
    }

    pub fn project(&self, p: Elem) -> (Elem, Elem) {
        let t = self.radix.decode(p);
        (t[0], t[1])
    }
}

pub fn direct_sum(m: &QModule, n: &QModule) -> Result<DirectSum> {
    if !m.same_scalars(n) {
        return Err(Error::ScalarMismatch);
    }
    let carrier = FiniteSupLattice::product(&[m.carrier(), n.carrier()]);
    let radix = Radix::new(vec![m.len(), n.len()]);
    let size = carrier.len();
    let q = m.scalars();
    let mut action = vec![0; q.len() * size];
    for p in 0..size {
        let t = radix.decode(p);
        for a in q.elements() {
            action[a * size + p] = radix.encode(&[m.act(a, t[0]), n.act(a, t[1])]);
        }
    }
    let module = QModule::with_handedness(m.scalars.clone(), carrier, action, m.handedness)?;
    Ok(DirectSum { module, radix })
}

/// Direct sum of a list of modules; the empty sum is the zero module.
pub fn direct_sum_all(q: &Arc<Quantale>, parts: &[&QModule]) -> Result<QModule> {
    let mut acc = zero_module(q.clone());
    for p in parts {
        if acc.len() == 1 {
            if !p.same_scalars(&acc) {
                return Err(Error::ScalarMismatch);
            }
            acc = (*p).clone();
        } else {
            acc = direct_sum(&acc, p)?.module;
        }
    }
    Ok(acc)
}

/// The one-element module `{⊥}`.
pub fn zero_module(q: Arc<Quantale>) -> QModule {
    let carrier = FiniteSupLattice::validate(&["⊥"], &[]).expect("one point");
    let action = vec![0; q.len()];
    QModule::new(q, carrier, action).expect("zero module")
}

/// A validated module homomorphism, stored as its element map.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModuleHom {
    pub map: Vec<Elem>,
}

impl ModuleHom {
    pub fn apply(&self, v: Elem) -> Elem {
        self.map[v]
    }

    /// `other ∘ self`
    pub fn then(&self, other: &ModuleHom) -> ModuleHom {
        ModuleHom {
            map: self.map.iter().map(|&v| other.map[v]).collect(),
        }
    }

    pub fn identity(m: &QModule) -> ModuleHom {
        ModuleHom {
            map: m.elements().collect(),
        }
    }
}

/// Checks joins, bottom and `f(a * v) = a * f(v)`.
pub fn validate_hom(source: &QModule, target: &QModule, map: Vec<Elem>) -> Result<ModuleHom> {
    if !source.same_scalars(target) {
        return Err(Error::ScalarMismatch);
    }
    check_join_preserving(source.carrier(), target.carrier(), &map)?;
    check_equivariant(source, target, &map)?;
    Ok(ModuleHom { map })
}

fn check_equivariant(source: &QModule, target: &QModule, map: &[Elem]) -> Result<()> {
    for a in source.scalars().elements() {
        for v in source.elements() {
            if map[source.act(a, v)] != target.act(a, map[v]) {
                return Err(Error::NotEquivariant {
                    a: source.scalars().name(a).to_owned(),
                    v: source.name(v).to_owned(),
                });
            }
        }
    }
    Ok(())
}

/// The unique homomorphism out of a free module with prescribed basis
/// images: `f(v) = ⋁_x v(x) * f(e_x)`.
pub fn extend_from_basis(free: &PowerModule, target: &QModule, assignment: &[Elem]) -> Result<ModuleHom> {
    let source = &free.module;
    if !source.same_scalars(target) {
        return Err(Error::ScalarMismatch);
    }
    if assignment.len() != free.arity() {
        return Err(Error::TableShape {
            expected: free.arity(),
            found: assignment.len(),
        });
    }
    let map = source
        .elements()
        .map(|v| {
            let t = free.tuple(v);
            target
                .carrier()
                .join_all(t.iter().zip(assignment).map(|(&c, &img)| target.act(c, img)))
        })
        .collect();
    validate_hom(source, target, map)
}

const HOM_SEARCH_BUDGET: u128 = 50_000_000;

/// All homomorphisms `source -> target` whose value on each join-irreducible
/// `j` satisfies `allowed(j, image)`. A homomorphism is determined by its
/// values on join-irreducibles, so candidates are enumerated there, extended
/// by joins, and validated. Output order is lexicographic in the
/// join-irreducible assignment.
pub fn homs_restricted<F>(source: &QModule, target: &QModule, allowed: F) -> Result<Vec<ModuleHom>>
where
    F: Fn(Elem, Elem) -> bool,
{
    if !source.same_scalars(target) {
        return Err(Error::ScalarMismatch);
    }
    let irreducibles = source.carrier().join_irreducibles();
    let options: Vec<Vec<Elem>> = irreducibles
        .iter()
        .map(|&j| target.elements().filter(|&t| allowed(j, t)).collect())
        .collect();
    let needed: u128 = options.iter().map(|o| o.len() as u128).product();
    if needed > HOM_SEARCH_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "homomorphism candidates",
            needed,
            budget: HOM_SEARCH_BUDGET,
        });
    }
    let below: Vec<Vec<usize>> = source
        .elements()
        .map(|v| {
            (0..irreducibles.len())
                .filter(|&k| source.leq(irreducibles[k], v))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut assignment = vec![0; irreducibles.len()];
    search_assignments(
        0,
        &irreducibles,
        &options,
        &mut assignment,
        &mut |assignment: &[Elem]| {
            let map: Vec<Elem> = below
                .iter()
                .map(|ks| target.carrier().join_all(ks.iter().map(|&k| assignment[k])))
                .collect();
            if check_join_preserving(source.carrier(), target.carrier(), &map).is_ok()
                && check_equivariant(source, target, &map).is_ok()
            {
                out.push(ModuleHom { map });
            }
        },
        source,
        target,
    );
    Ok(out)
}

fn search_assignments(
    k: usize,
    irreducibles: &[Elem],
    options: &[Vec<Elem>],
    assignment: &mut Vec<Elem>,
    emit: &mut dyn FnMut(&[Elem]),
    source: &QModule,
    target: &QModule,
) {
    if k == irreducibles.len() {
        emit(assignment);
        return;
    }
    for &t in &options[k] {
        // monotone on the irreducibles assigned so far
        let ok = (0..k).all(|i| {
            let (ji, jk) = (irreducibles[i], irreducibles[k]);
            (!source.leq(ji, jk) || target.leq(assignment[i], t))
                && (!source.leq(jk, ji) || target.leq(t, assignment[i]))
        });
        if ok {
            assignment[k] = t;
            search_assignments(k + 1, irreducibles, options, assignment, emit, source, target);
        }
    }
}

pub fn homs(source: &QModule, target: &QModule) -> Result<Vec<ModuleHom>> {
    homs_restricted(source, target, |_, _| true)
}

/// `hom(M, N)` with pointwise order, and with the action `(a • h)(v) = a * h(v)`
/// when the scalars are commutative.
#[derive(Clone, Debug)]
pub struct HomObject {
    pub homs: Vec<ModuleHom>,
    pub lattice: FiniteSupLattice,
    pub module: Option<QModule>,
}

pub fn hom_object(source: &QModule, target: &QModule) -> Result<HomObject> {
    let homs = homs(source, target)?;
    let n = homs.len();
    let mut leq = vec![false; n * n];
    for (i, f) in homs.iter().enumerate() {
        for (j, g) in homs.iter().enumerate() {
            leq[i * n + j] = source.elements().all(|v| target.leq(f.map[v], g.map[v]));
        }
    }
    let names = (0..n).map(|i| format!("h{i}")).collect();
    let lattice = FiniteSupLattice::from_relation(names, leq)?;
    let q = source.scalars();
    let module = if q.classify().commutative {
        let mut action = vec![0; q.len() * n];
        for a in q.elements() {
            for (i, h) in homs.iter().enumerate() {
                let scaled: Vec<Elem> = h.map.iter().map(|&w| target.act(a, w)).collect();
                action[a * n + i] = homs
                    .iter()
                    .position(|g| g.map == scaled)
                    .ok_or_else(|| Error::ClosureViolation("a • h is not a homomorphism".into()))?;
            }
        }
        Some(QModule::new(source.scalars.clone(), lattice.clone(), action)?)
    } else {
        None
    };
    Ok(HomObject { homs, lattice, module })
}

/// An isomorphism `source -> target` if one exists. Candidates are
/// pre-filtered by cardinality, order degrees and action orbit sizes; the
/// bijection search runs in lexicographic order.
pub fn is_isomorphic(source: &QModule, target: &QModule) -> Result<Option<ModuleHom>> {
    if !source.same_scalars(target) {
        return Err(Error::ScalarMismatch);
    }
    if source.len() != target.len() {
        return Ok(None);
    }
    let sig = |m: &QModule| -> Vec<(usize, usize, usize, usize)> {
        m.elements()
            .map(|v| {
                let (up, down) = m.carrier().degree(v);
                let mut orbit: Vec<Elem> = m.scalars().elements().map(|a| m.act(a, v)).collect();
                orbit.sort_unstable();
                orbit.dedup();
                let fixing = m.scalars().elements().filter(|&a| m.act(a, v) == v).count();
                (up, down, orbit.len(), fixing)
            })
            .collect()
    };
    let Some(candidates) = iso::candidates_by_signature(&sig(source), &sig(target)) else {
        return Ok(None);
    };
    let q = source.scalars();
    let found = iso::find_bijection(&candidates, |partial, i| {
        if !iso::order_consistent(source.carrier(), target.carrier(), partial, i) {
            return false;
        }
        for (j, fj) in partial.iter().enumerate() {
            let Some(fj) = *fj else { continue };
            for a in q.elements() {
                let aj = source.act(a, j);
                if j != i && aj != i {
                    continue;
                }
                if let Some(faj) = partial[aj] {
                    if faj != target.act(a, fj) {
                        return false;
                    }
                }
            }
        }
        true
    });
    Ok(found.map(|map| ModuleHom { map }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::chain;

    fn b2() -> Arc<Quantale> {
        Arc::new(Quantale::meet_quantale(chain(&["⊥", "⊤"])).unwrap())
    }

    fn l3() -> Arc<Quantale> {
        Arc::new(
            Quantale::from_rows(
                chain(&["0", "h", "1"]),
                &[vec!["0", "0", "0"], vec!["0", "0", "h"], vec!["0", "h", "1"]],
                Some("1"),
            )
            .unwrap(),
        )
    }

    fn diamond() -> FiniteSupLattice {
        FiniteSupLattice::validate(
            &["⊥", "a", "b", "⊤"],
            &[("⊥", "a"), ("⊥", "b"), ("a", "⊤"), ("b", "⊤")],
        )
        .unwrap()
    }

    #[test]
    fn regular_and_two_element_modules_validate() {
        QModule::regular(l3());
        QModule::over_two_element(b2(), diamond()).unwrap();
    }

    #[test]
    fn broken_l3_action_is_rejected() {
        let q = l3();
        let rows = vec![vec!["0", "0", "0"], vec!["0", "0", "1"], vec!["0", "h", "1"]];
        let err = QModule::from_rows(q.clone(), q.lattice().clone(), &rows).unwrap_err();
        assert_eq!(
            err,
            Error::M1Violation {
                a: "h".into(),
                b: "h".into(),
                v: "1".into()
            }
        );
    }

    #[test]
    fn free_module_examples() {
        let f = free_module(&b2(), &["x", "y"]).unwrap();
        assert_eq!(f.module().len(), 4);
        assert_eq!(f.module().name(f.basis[0]), "(⊤,⊥)");
        let f = free_module(&l3(), &["x"]).unwrap();
        assert_eq!(f.module().len(), 3);
        let z0 = Arc::new(Quantale::from_rows(chain(&["⊥", "⊤"]), &[vec!["⊥", "⊥"], vec!["⊥", "⊥"]], None).unwrap());
        let f = free_module(&z0, &["x"]).unwrap();
        assert_eq!(f.module().len(), 4);
        assert!(f.unitalization.is_some());
    }

    #[test]
    fn action_residual_examples() {
        let m = QModule::regular(l3());
        let (under, _) = m.action_residuals("h", "0", "0").unwrap();
        assert_eq!(m.name(under), "h");
        let (_, over) = m.action_residuals("1", "h", "1").unwrap();
        assert_eq!(m.scalars().name(over), "h");
        let one = m.scalars().unit().unwrap();
        for v in m.elements() {
            assert!(m.scalars().leq(one, m.over(v, v)));
        }
    }

    #[test]
    fn op_module_is_involutive() {
        let m = QModule::regular(l3());
        let op = op_module(&m);
        assert_eq!(op.handedness(), Handedness::Right);
        let h = op.scalars().elem("h").unwrap();
        let zero = op.elem("0").unwrap();
        assert_eq!(op.name(op.act(h, zero)), "h");
        let back = op_module(&op);
        assert_eq!(back.action_table(), m.action_table());
        assert_eq!(back.carrier(), m.carrier());
        assert_eq!(back.scalars(), m.scalars());
    }

    #[test]
    fn b2_op_is_b2_under_label_swap() {
        let m = QModule::regular(b2());
        let op = op_module(&m);
        // ⊤ acts as identity and ⊥ sends everything to the new bottom ⊤.
        let (bot, top) = (0, 1);
        assert_eq!(op.act(top, bot), bot);
        assert_eq!(op.act(top, top), top);
        assert_eq!(op.act(bot, bot), op.bottom());
        assert_eq!(op.act(bot, top), op.bottom());
    }

    #[test]
    fn submodule_examples() {
        let f = free_module(&b2(), &["x", "y"]).unwrap();
        let m = f.module();
        assert_eq!(m.submodule_generated(&[]), vec![m.bottom()]);
        let e1 = f.basis[0];
        assert_eq!(m.submodule_generated(&[e1]), vec![m.bottom(), e1]);
        assert_eq!(m.submodule_generated(&f.basis).len(), 4);
    }

    #[test]
    fn direct_sum_examples() {
        let b = QModule::regular(b2());
        let s = direct_sum(&b, &b).unwrap();
        let sq = QModule::over_two_element(b2(), diamond()).unwrap();
        assert!(is_isomorphic(&s.module, &sq).unwrap().is_some());
        let l = QModule::regular(l3());
        let s = direct_sum(&l, &l).unwrap();
        let h = l.scalars().elem("h").unwrap();
        let v = s.module.elem("(1,h)").unwrap();
        assert_eq!(s.module.name(s.module.act(h, v)), "(h,0)");
        assert_eq!(direct_sum(&l, &b).unwrap_err(), Error::ScalarMismatch);
    }

    #[test]
    fn homs_and_extension() {
        let l = QModule::regular(l3());
        validate_hom(&l, &l, l.elements().collect()).unwrap();
        let free = free_module(&l3(), &["x"]).unwrap();
        let h = l.elem("h").unwrap();
        let f = extend_from_basis(&free.power, &l, &[h]).unwrap();
        for v in free.module().elements() {
            let c = free.power.tuple(v)[0];
            assert_eq!(f.apply(v), l.act(c, h));
        }
        let swap = vec![0, 2, 1];
        assert!(matches!(
            validate_hom(&l, &l, swap),
            Err(Error::NotJoinPreserving { .. })
        ));
    }

    #[test]
    fn hom_object_of_b2() {
        let b = QModule::regular(b2());
        let obj = hom_object(&b, &b).unwrap();
        assert_eq!(obj.homs.len(), 2);
        assert_eq!(obj.homs[0].map, vec![0, 0]);
        assert_eq!(obj.homs[1].map, vec![0, 1]);
        let j = obj.lattice.join(0, 1);
        assert_eq!(obj.homs[j].map, vec![0, 1]);
        assert!(obj.module.is_some());
    }

    #[test]
    fn isomorphism_prefilters() {
        let b = QModule::regular(b2());
        let l = QModule::over_two_element(b2(), chain(&["0", "h", "1"])).unwrap();
        assert!(is_isomorphic(&b, &l).unwrap().is_none());
        assert_eq!(is_isomorphic(&l, &l).unwrap().unwrap().map, vec![0, 1, 2]);
    }
}
