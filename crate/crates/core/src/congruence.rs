//! Congruences as partitions of a carrier, their enumeration, and quotients.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{Elem, FiniteSupLattice};
use crate::module::QModule;
use crate::quantale::Quantale;

/// Default carrier bound for exhaustive partition enumeration.
pub const DEFAULT_ENUMERATION_BOUND: usize = 7;

/// A partition stored as a restricted growth string: `classes[e]` is the
/// class of `e`, classes numbered by first occurrence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Congruence {
    classes: Vec<usize>,
}

impl Congruence {
    /// Canonicalizes arbitrary labels.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut seen: Vec<(usize, usize)> = Vec::new();
        let classes = labels
            .iter()
            .map(|&l| match seen.iter().find(|(x, _)| *x == l) {
                Some(&(_, c)) => c,
                None => {
                    let c = seen.len();
                    seen.push((l, c));
                    c
                }
            })
            .collect();
        Self { classes }
    }

    /// Partition by the value of a key function.
    pub fn kernel_of<K: PartialEq>(n: usize, key: impl Fn(Elem) -> K) -> Self {
        let keys: Vec<K> = (0..n).map(key).collect();
        let labels: Vec<usize> = (0..n)
            .map(|i| (0..=i).find(|&j| keys[j] == keys[i]).expect("self"))
            .collect();
        Self::from_labels(&labels)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            classes: (0..n).collect(),
        }
    }

    pub fn all(n: usize) -> Self {
        Self { classes: vec![0; n] }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn labels(&self) -> &[usize] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.iter().max().map_or(0, |m| m + 1)
    }

    #[inline]
    pub fn related(&self, a: Elem, b: Elem) -> bool {
        self.classes[a] == self.classes[b]
    }

    pub fn class_of(&self, a: Elem) -> Vec<Elem> {
        (0..self.len()).filter(|&b| self.related(a, b)).collect()
    }

    pub fn classes(&self) -> Vec<Vec<Elem>> {
        (0..self.class_count())
            .map(|c| (0..self.len()).filter(|&e| self.classes[e] == c).collect())
            .collect()
    }

    /// `self ⊆ other` as relations.
    pub fn is_finer_than(&self, other: &Congruence) -> bool {
        (0..self.len()).all(|a| (0..self.len()).all(|b| !self.related(a, b) || other.related(a, b)))
    }

    pub fn intersection(&self, other: &Congruence) -> Congruence {
        let n = self.len();
        Congruence::kernel_of(n, |e| (self.classes[e], other.classes[e]))
    }

    pub fn is_identity(&self) -> bool {
        self.class_count() == self.len()
    }

    pub fn is_all(&self) -> bool {
        self.class_count() <= 1
    }

    /// Renders the classes as `{a,b} {c}` using element names.
    pub fn describe(&self, lattice: &FiniteSupLattice) -> String {
        self.classes()
            .iter()
            .map(|c| {
                let names: Vec<&str> = c.iter().map(|&e| lattice.name(e)).collect();
                format!("{{{}}}", names.join(","))
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// A structure whose congruences and ideals can be computed: a module, or a
/// quantale with two-sided ideals.
pub trait Host {
    fn lattice(&self) -> &FiniteSupLattice;

    /// Elements an ideal containing `v` must also contain besides the
    /// elements below `v`.
    fn operation_images(&self, v: Elem) -> Vec<Elem>;

    /// The generator of the principal ideal `(v]`.
    fn ideal_generator(&self, v: Elem) -> Elem;

    fn is_ideal_element(&self, v: Elem) -> bool {
        self.ideal_generator(v) == v
    }

    /// First failure of compatibility with the non-lattice operations.
    fn operation_witness(&self, theta: &Congruence) -> Option<String>;
}

impl Host for QModule {
    fn lattice(&self) -> &FiniteSupLattice {
        self.carrier()
    }

    fn operation_images(&self, v: Elem) -> Vec<Elem> {
        self.scalars().elements().map(|a| self.act(a, v)).collect()
    }

    /// `⊤ * v ∨ v`, which is `⊤ * v` whenever the scalars are unital.
    fn ideal_generator(&self, v: Elem) -> Elem {
        self.join(self.act(self.scalars().top(), v), v)
    }

    fn operation_witness(&self, theta: &Congruence) -> Option<String> {
        let q = self.scalars();
        for v in self.elements() {
            for w in v + 1..self.len() {
                if !theta.related(v, w) {
                    continue;
                }
                for a in q.elements() {
                    if !theta.related(self.act(a, v), self.act(a, w)) {
                        return Some(format!(
                            "{} ~ {} but {} * {} !~ {} * {}",
                            self.name(v),
                            self.name(w),
                            q.name(a),
                            self.name(v),
                            q.name(a),
                            self.name(w)
                        ));
                    }
                }
            }
        }
        None
    }
}

impl Host for Quantale {
    fn lattice(&self) -> &FiniteSupLattice {
        Quantale::lattice(self)
    }

    fn operation_images(&self, v: Elem) -> Vec<Elem> {
        self.elements()
            .flat_map(|a| [self.mul(a, v), self.mul(v, a)])
            .collect()
    }

    /// `⊤v⊤ ∨ ⊤v ∨ v⊤ ∨ v`, which is `⊤v⊤` whenever the quantale is unital.
    fn ideal_generator(&self, v: Elem) -> Elem {
        let t = self.top();
        let tv = self.mul(t, v);
        self.lattice()
            .join_all([self.mul(tv, t), tv, self.mul(v, t), v])
    }

    fn operation_witness(&self, theta: &Congruence) -> Option<String> {
        for a in self.elements() {
            for b in a + 1..self.len() {
                if !theta.related(a, b) {
                    continue;
                }
                for c in self.elements() {
                    if !theta.related(self.mul(c, a), self.mul(c, b)) {
                        return Some(format!(
                            "{} ~ {} but {}·{} !~ {}·{}",
                            self.name(a),
                            self.name(b),
                            self.name(c),
                            self.name(a),
                            self.name(c),
                            self.name(b)
                        ));
                    }
                    if !theta.related(self.mul(a, c), self.mul(b, c)) {
                        return Some(format!(
                            "{} ~ {} but {}·{} !~ {}·{}",
                            self.name(a),
                            self.name(b),
                            self.name(a),
                            self.name(c),
                            self.name(b),
                            self.name(c)
                        ));
                    }
                }
            }
        }
        None
    }
}

/// First failure of `theta` being a congruence of `host`: binary joins are
/// checked before the host operations.
pub fn congruence_witness<H: Host + ?Sized>(host: &H, theta: &Congruence) -> Option<String> {
    let l = host.lattice();
    if theta.len() != l.len() {
        return Some("partition size differs from carrier".into());
    }
    for a in l.elements() {
        for b in a + 1..l.len() {
            if !theta.related(a, b) {
                continue;
            }
            for c in l.elements() {
                if !theta.related(l.join(a, c), l.join(b, c)) {
                    return Some(format!(
                        "{} ~ {} but {} ∨ {} !~ {} ∨ {}",
                        l.name(a),
                        l.name(b),
                        l.name(a),
                        l.name(c),
                        l.name(b),
                        l.name(c)
                    ));
                }
            }
        }
    }
    host.operation_witness(theta)
}

pub fn is_congruence<H: Host + ?Sized>(host: &H, theta: &Congruence) -> bool {
    congruence_witness(host, theta).is_none()
}

/// Every congruence of `host`, in lexicographic order of restricted growth
/// strings. Fails with [`Error::CarrierTooLarge`] above `bound` elements.
pub fn enumerate_congruences<H: Host + ?Sized>(host: &H, bound: usize) -> Result<Vec<Congruence>> {
    let n = host.lattice().len();
    if n > bound {
        return Err(Error::CarrierTooLarge { size: n, bound });
    }
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    fn go<H: Host + ?Sized>(i: usize, max: usize, rgs: &mut Vec<usize>, host: &H, out: &mut Vec<Congruence>) {
        if i == rgs.len() {
            let theta = Congruence {
                classes: rgs.clone(),
            };
            if is_congruence(host, &theta) {
                out.push(theta);
            }
            return;
        }
        let limit = if i == 0 { 0 } else { max + 1 };
        for c in 0..=limit {
            rgs[i] = c;
            go(i + 1, max.max(c), rgs, host, out);
        }
    }
    if n > 0 {
        go(0, 0, &mut rgs, host, &mut out);
    }
    Ok(out)
}

/// The smallest congruence containing all `pairs`, as the intersection of
/// every enumerated congruence that contains them.
pub fn generated_by_enumeration<H: Host + ?Sized>(host: &H, pairs: &[(Elem, Elem)], bound: usize) -> Result<Congruence> {
    let n = host.lattice().len();
    Ok(enumerate_congruences(host, bound)?
        .into_iter()
        .filter(|t| pairs.iter().all(|&(a, b)| t.related(a, b)))
        .fold(Congruence::all(n), |acc, t| acc.intersection(&t)))
}

/// Lattice on the classes of a lattice congruence, ordered by
/// `[a] <= [b]  iff  a ∨ b ~ b`; each class is named after its largest
/// element.
fn quotient_lattice(l: &FiniteSupLattice, theta: &Congruence) -> Result<(FiniteSupLattice, Vec<Elem>)> {
    let classes = theta.classes();
    let reps: Vec<Elem> = classes
        .iter()
        .map(|c| l.join_all(c.iter().copied()))
        .collect();
    let names: Vec<String> = reps.iter().map(|&r| l.name(r).to_owned()).collect();
    let k = classes.len();
    let mut leq = vec![false; k * k];
    for i in 0..k {
        for j in 0..k {
            leq[i * k + j] = theta.related(l.join(reps[i], reps[j]), reps[j]);
        }
    }
    Ok((FiniteSupLattice::from_relation(names, leq)?, reps))
}

/// A quotient together with the projection from the host carrier.
#[derive(Clone, Debug)]
pub struct Quotient<T> {
    pub structure: T,
    pub projection: Vec<Elem>,
}

pub fn quotient_quantale(q: &Quantale, theta: &Congruence) -> Result<Quotient<Quantale>> {
    if let Some(w) = congruence_witness(q, theta) {
        return Err(Error::LawViolation {
            law: "congruence",
            witness: w,
        });
    }
    let (lattice, reps) = quotient_lattice(q.lattice(), theta)?;
    let k = reps.len();
    let projection = theta.labels().to_vec();
    let mut mul = Vec::with_capacity(k * k);
    for &a in &reps {
        for &b in &reps {
            mul.push(projection[q.mul(a, b)]);
        }
    }
    let unit = q.unit().map(|u| projection[u]);
    let structure = Quantale::new(lattice, mul, unit)?;
    Ok(Quotient { structure, projection })
}

pub fn quotient_module(m: &QModule, theta: &Congruence) -> Result<Quotient<QModule>> {
    if let Some(w) = congruence_witness(m, theta) {
        return Err(Error::LawViolation {
            law: "congruence",
            witness: w,
        });
    }
    let (lattice, reps) = quotient_lattice(m.carrier(), theta)?;
    let k = reps.len();
    let projection = theta.labels().to_vec();
    let q = m.scalars();
    let mut action = Vec::with_capacity(q.len() * k);
    for a in q.elements() {
        for &v in &reps {
            action.push(projection[m.act(a, v)]);
        }
    }
    let structure = QModule::with_handedness(Arc::clone(m.scalars_arc()), lattice, action, m.handedness())?;
    Ok(Quotient { structure, projection })
}

/// Only the identity and the all-relation (or a single element).
pub fn is_simple(q: &Quantale, bound: usize) -> Result<bool> {
    let all = enumerate_congruences(q, bound)?;
    Ok(q.len() == 1 || all.len() == 2)
}

/// The identity is the intersection of the congruences with simple quotient.
pub fn is_semisimple(q: &Quantale, bound: usize) -> Result<bool> {
    let all = enumerate_congruences(q, bound)?;
    Ok(semisimple_from(&all, q.len()))
}

/// Congruences whose quotient is simple: the all-relation and the coatoms
/// of the congruence lattice.
pub fn simple_quotient_congruences(all: &[Congruence]) -> Vec<&Congruence> {
    all.iter()
        .filter(|t| {
            t.is_all()
                || !all
                    .iter()
                    .any(|u| u != *t && !u.is_all() && t.is_finer_than(u))
        })
        .collect()
}

pub(crate) fn semisimple_from(all: &[Congruence], n: usize) -> bool {
    simple_quotient_congruences(all)
        .into_iter()
        .fold(Congruence::all(n), |acc, t| acc.intersection(t))
        .is_identity()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::chain;

    fn l3() -> Quantale {
        Quantale::from_rows(
            chain(&["0", "h", "1"]),
            &[vec!["0", "0", "0"], vec!["0", "0", "h"], vec!["0", "h", "1"]],
            Some("1"),
        )
        .unwrap()
    }

    #[test]
    fn l3_module_congruences() {
        let m = QModule::regular(Arc::new(l3()));
        let all = enumerate_congruences(&m, DEFAULT_ENUMERATION_BOUND).unwrap();
        let labels: Vec<&[usize]> = all.iter().map(|t| t.labels()).collect();
        assert_eq!(labels, vec![&[0, 0, 0][..], &[0, 0, 1][..], &[0, 1, 2][..]]);
    }

    #[test]
    fn b2_has_two_congruences() {
        let b2 = Quantale::meet_quantale(chain(&["⊥", "⊤"])).unwrap();
        let all = enumerate_congruences(&b2, DEFAULT_ENUMERATION_BOUND).unwrap();
        assert_eq!(all.len(), 2);
        assert!(is_simple(&b2, 7).unwrap());
    }

    #[test]
    fn l3_quotient_is_b2() {
        let q = l3();
        let theta = Congruence::from_labels(&[0, 0, 1]);
        let quo = quotient_quantale(&q, &theta).unwrap().structure;
        let b2 = Quantale::meet_quantale(chain(&["⊥", "⊤"])).unwrap();
        assert!(crate::iso::quantale_isomorphism(&quo, &b2).is_some());
        let one = quotient_quantale(&q, &Congruence::all(3)).unwrap().structure;
        assert_eq!(one.len(), 1);
        let same = quotient_quantale(&q, &Congruence::identity(3)).unwrap().structure;
        assert!(crate::iso::quantale_isomorphism(&same, &q).is_some());
    }

    #[test]
    fn l3_is_neither_simple_nor_semisimple() {
        let q = l3();
        assert!(!is_simple(&q, 7).unwrap());
        assert!(!is_semisimple(&q, 7).unwrap());
        let frame = Quantale::meet_quantale(chain(&["0", "h", "1"])).unwrap();
        assert!(is_semisimple(&frame, 7).unwrap());
    }

    #[test]
    fn one_element_quantale_is_simple() {
        let q = Quantale::meet_quantale(chain(&["*"])).unwrap();
        assert!(is_simple(&q, 7).unwrap());
    }

    #[test]
    fn too_large_carrier_is_rejected() {
        let names: Vec<String> = (0..8).map(|i| i.to_string()).collect();
        let q = Quantale::meet_quantale(chain(&names)).unwrap();
        assert_eq!(
            enumerate_congruences(&q, 7).unwrap_err(),
            Error::CarrierTooLarge { size: 8, bound: 7 }
        );
    }
}
