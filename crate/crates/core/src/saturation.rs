//! Elements saturated with respect to a binary relation, the nucleus `ρ_R`,
//! and the quotient it induces.

use std::sync::Arc;

use serde::Serialize;

use crate::congruence::Congruence;
use crate::error::{Error, Result};
use crate::lattice::{residuum_of_map, Elem};
use crate::quantale::{check_quantale_hom, Quantale};

/// A finite relation `R ⊆ Q²`.
#[derive(Clone, Debug)]
pub struct RelationSpec {
    q: Arc<Quantale>,
    pairs: Vec<(Elem, Elem)>,
}

impl RelationSpec {
    pub fn new(q: Arc<Quantale>, pairs: Vec<(Elem, Elem)>) -> Result<Self> {
        if let Some(&(a, b)) = pairs.iter().find(|&&(a, b)| a >= q.len() || b >= q.len()) {
            return Err(Error::UnknownElement(format!("({a},{b})")));
        }
        Ok(Self { q, pairs })
    }

    pub fn from_names<S: AsRef<str>>(q: Arc<Quantale>, pairs: &[(S, S)]) -> Result<Self> {
        let pairs = pairs
            .iter()
            .map(|(a, b)| Ok((q.elem(a.as_ref())?, q.elem(b.as_ref())?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(q, pairs)
    }

    pub fn quantale(&self) -> &Quantale {
        &self.q
    }

    pub fn pairs(&self) -> &[(Elem, Elem)] {
        &self.pairs
    }

    /// The pairs `(a, b)` with `f(a) = f(b)`.
    pub fn kernel_of_map(q: Arc<Quantale>, f: &[Elem]) -> Self {
        let pairs = q
            .elements()
            .flat_map(|a| q.elements().map(move |b| (a, b)))
            .filter(|&(a, b)| f[a] == f[b])
            .collect();
        Self { q, pairs }
    }

    pub fn extended(&self, more: &[(Elem, Elem)]) -> Result<Self> {
        let mut pairs = self.pairs.clone();
        pairs.extend_from_slice(more);
        Self::new(Arc::clone(&self.q), pairs)
    }

    /// First failing clause for `s`. Only clause (i) is checked when the
    /// quantale is unital, since it implies the other three.
    pub fn saturation_witness(&self, s: Elem) -> Option<SaturationViolation> {
        let q = &*self.q;
        let unital = q.unit().is_some();
        let le = |x: Elem| q.leq(x, s);
        for &(a, b) in &self.pairs {
            for c in q.elements() {
                for d in q.elements() {
                    if le(q.mul(q.mul(c, a), d)) != le(q.mul(q.mul(c, b), d)) {
                        return Some(SaturationViolation::new(q, 1, (a, b), Some(c), Some(d)));
                    }
                }
            }
            if unital {
                continue;
            }
            for c in q.elements() {
                if le(q.mul(a, c)) != le(q.mul(b, c)) {
                    return Some(SaturationViolation::new(q, 2, (a, b), None, Some(c)));
                }
            }
            for c in q.elements() {
                if le(q.mul(c, a)) != le(q.mul(c, b)) {
                    return Some(SaturationViolation::new(q, 3, (a, b), Some(c), None));
                }
            }
            if le(a) != le(b) {
                return Some(SaturationViolation::new(q, 4, (a, b), None, None));
            }
        }
        None
    }

    pub fn is_saturated(&self, s: Elem) -> bool {
        self.saturation_witness(s).is_none()
    }

    /// `Q_R`, checked to be closed under meets and under `s/q`, `q\s`.
    pub fn saturated_set(&self) -> Result<Vec<Elem>> {
        let q = &*self.q;
        let set: Vec<Elem> = q.elements().filter(|&s| self.is_saturated(s)).collect();
        let member = |x: Elem| set.contains(&x);
        if !member(q.top()) {
            return Err(Error::ClosureViolation("empty meet ⊤ is not saturated".into()));
        }
        for &s in &set {
            for &t in &set {
                if !member(q.meet(s, t)) {
                    return Err(Error::ClosureViolation(format!(
                        "{} ∧ {} is not saturated",
                        q.name(s),
                        q.name(t)
                    )));
                }
            }
            for x in q.elements() {
                if !member(q.right_residual(s, x)) || !member(q.left_residual(x, s)) {
                    return Err(Error::ClosureViolation(format!(
                        "a residual of {} by {} is not saturated",
                        q.name(s),
                        q.name(x)
                    )));
                }
            }
        }
        Ok(set)
    }

    /// The table of `ρ_R(a) = ⋀{s ∈ Q_R | a ≤ s}`.
    pub fn rho_table(&self) -> Result<Vec<Elem>> {
        let q = &*self.q;
        let set = self.saturated_set()?;
        Ok(q
            .elements()
            .map(|a| q.lattice().meet_all(set.iter().copied().filter(|&s| q.leq(a, s))))
            .collect())
    }

    pub fn rho(&self, a: Elem) -> Result<Elem> {
        Ok(self.rho_table()?[a])
    }

    /// `ker ρ_R`.
    pub fn congruence_generated(&self) -> Result<Congruence> {
        let rho = self.rho_table()?;
        Ok(Congruence::kernel_of(self.q.len(), |a| rho[a]))
    }

    /// `Q_R` with join `ρ(s ∨ t)`, product `ρ(s·t)`, and unit `ρ(1)`.
    pub fn quotient(&self) -> Result<RelationQuotient> {
        let q = &*self.q;
        let rho = self.rho_table()?;
        if let Some(w) = nucleus_witness(q, &rho) {
            return Err(Error::LawViolation {
                law: "quantic nucleus",
                witness: w,
            });
        }
        let elements = self.saturated_set()?;
        let lattice = q.lattice().induced(&elements);
        let pos = |x: Elem| elements.iter().position(|&e| e == x).expect("saturated");
        let mut mul = Vec::with_capacity(elements.len().pow(2));
        for &s in &elements {
            for &t in &elements {
                mul.push(pos(rho[q.mul(s, t)]));
            }
        }
        let unit = q.unit().map(|u| pos(rho[u]));
        let quantale = Quantale::new(lattice, mul, unit)?;
        let projection = rho.iter().map(|&r| pos(r)).collect();
        Ok(RelationQuotient {
            quantale,
            elements,
            projection,
        })
    }
}

/// A quotient on the saturated elements.
#[derive(Clone, Debug)]
pub struct RelationQuotient {
    pub quantale: Quantale,
    /// The saturated elements, in the order of the quotient's carrier.
    pub elements: Vec<Elem>,
    /// `a ↦ ρ_R(a)` as an index into the quotient.
    pub projection: Vec<Elem>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SaturationViolation {
    /// Clause number, 1 to 4.
    pub clause: u8,
    pub pair: (String, String),
    pub c: Option<String>,
    pub d: Option<String>,
}

impl SaturationViolation {
    fn new(q: &Quantale, clause: u8, (a, b): (Elem, Elem), c: Option<Elem>, d: Option<Elem>) -> Self {
        let name = |x: Elem| q.name(x).to_owned();
        Self {
            clause,
            pair: (name(a), name(b)),
            c: c.map(name),
            d: d.map(name),
        }
    }
}

/// First failure of `map` being a quantic nucleus: monotone, extensive,
/// idempotent, and `j(a)j(b) ≤ j(ab)`.
pub fn nucleus_witness(q: &Quantale, map: &[Elem]) -> Option<String> {
    for a in q.elements() {
        if !q.leq(a, map[a]) {
            return Some(format!("not extensive at {}", q.name(a)));
        }
        if map[map[a]] != map[a] {
            return Some(format!("not idempotent at {}", q.name(a)));
        }
        for b in q.elements() {
            if q.leq(a, b) && !q.leq(map[a], map[b]) {
                return Some(format!("not monotone at {} ≤ {}", q.name(a), q.name(b)));
            }
            if !q.leq(q.mul(map[a], map[b]), map[q.mul(a, b)]) {
                return Some(format!("j({})j({}) ≰ j({}·{})", q.name(a), q.name(b), q.name(a), q.name(b)));
            }
        }
    }
    None
}

/// Fixpoints of `γ = f_* ∘ f` for a quantale homomorphism `f`, asserted to
/// coincide with the `ker f`-saturated elements.
pub fn saturation_of_hom(source: &Arc<Quantale>, target: &Quantale, f: &[Elem]) -> Result<Vec<Elem>> {
    check_quantale_hom(source, target, f)?;
    let residuum = residuum_of_map(source.lattice(), target.lattice(), f)?;
    let fixpoints: Vec<Elem> = source
        .elements()
        .filter(|&a| residuum.residuum[f[a]] == a)
        .collect();
    let saturated = RelationSpec::kernel_of_map(Arc::clone(source), f).saturated_set()?;
    if saturated != fixpoints {
        return Err(Error::ClosureViolation(
            "nucleus fixpoints differ from kernel-saturated elements".into(),
        ));
    }
    Ok(fixpoints)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::{generated_by_enumeration, quotient_quantale};
    use crate::iso::quantale_isomorphism;
    use crate::lattice::chain;

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

    fn spec(pairs: &[(&str, &str)]) -> RelationSpec {
        RelationSpec::from_names(l3(), pairs).unwrap()
    }

    #[test]
    fn saturation_on_l3() {
        let r = spec(&[("0", "h")]);
        assert!(r.is_saturated(1));
        let w = r.saturation_witness(0).unwrap();
        assert_eq!((w.clause, w.c.as_deref(), w.d.as_deref()), (1, Some("1"), Some("1")));
        assert_eq!(r.saturated_set().unwrap(), vec![1, 2]);
        assert_eq!(spec(&[]).saturated_set().unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn rho_and_generated_congruence() {
        let r = spec(&[("0", "h")]);
        assert_eq!(r.rho(0).unwrap(), 1);
        assert_eq!(r.congruence_generated().unwrap().labels(), &[0, 0, 1]);
        assert!(spec(&[]).congruence_generated().unwrap().is_identity());
        assert!(spec(&[("0", "1")]).congruence_generated().unwrap().is_all());
        let oracle = generated_by_enumeration(&*l3(), r.pairs(), 7).unwrap();
        assert_eq!(oracle, r.congruence_generated().unwrap());
    }

    #[test]
    fn quotient_matches_congruence_quotient() {
        let r = spec(&[("0", "h")]);
        let quo = r.quotient().unwrap();
        assert_eq!(quo.quantale.len(), 2);
        let theta = r.congruence_generated().unwrap();
        let other = quotient_quantale(&l3(), &theta).unwrap().structure;
        assert!(quantale_isomorphism(&quo.quantale, &other).is_some());
        let same = spec(&[]).quotient().unwrap().quantale;
        assert!(quantale_isomorphism(&same, &l3()).is_some());
    }

    #[test]
    fn saturation_of_homs() {
        let q = l3();
        let id: Vec<Elem> = q.elements().collect();
        assert_eq!(saturation_of_hom(&q, &q, &id).unwrap(), vec![0, 1, 2]);
        let r = spec(&[("0", "h")]);
        let quo = r.quotient().unwrap();
        assert_eq!(saturation_of_hom(&q, &quo.quantale, &quo.projection).unwrap(), vec![1, 2]);
        let point = Quantale::meet_quantale(chain(&["*"])).unwrap();
        assert_eq!(saturation_of_hom(&q, &point, &[0, 0, 0]).unwrap(), vec![2]);
    }

    #[test]
    fn non_unital_uses_all_clauses() {
        let z0 = Arc::new(
            Quantale::from_rows(chain(&["⊥", "⊤"]), &[vec!["⊥", "⊥"], vec!["⊥", "⊥"]], None).unwrap(),
        );
        let r = RelationSpec::from_names(z0, &[("⊥", "⊤")]).unwrap();
        let w = r.saturation_witness(0).unwrap();
        assert_eq!(w.clause, 4);
        assert_eq!(r.saturated_set().unwrap(), vec![1]);
    }
}
