//! Ideals of modules and two-sided ideals of quantales, the scalars `i^v`,
//! and the congruences `θ_I` and `θ_i` they determine.
//!
//! Every ideal is principal, so an [`Ideal`] is stored by its generator and
//! the downset is materialized on demand. Computations that need a unit are
//! carried out over `Q[e]` when the scalars have none.

use std::fmt;

use serde::Serialize;

use crate::congruence::{Congruence, Host};
use crate::error::{Error, Result};
use crate::lattice::{Elem, FiniteSupLattice};
use crate::module::QModule;
use crate::quantale::{id_subquantale, unitalize, Quantale, Unitalization};

/// A principal ideal `[⊥, generator]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Ideal {
    pub generator: Elem,
}

impl Ideal {
    pub fn contains(&self, lattice: &FiniteSupLattice, v: Elem) -> bool {
        lattice.leq(v, self.generator)
    }

    pub fn members(&self, lattice: &FiniteSupLattice) -> Vec<Elem> {
        lattice.interval(lattice.bottom(), self.generator)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum IdealClause {
    /// Closed under joins, including the empty join.
    Joins,
    DownwardClosed,
    /// Closed under the action, or under both products.
    Operations,
}

impl fmt::Display for IdealClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IdealClause::Joins => "(i) joins",
            IdealClause::DownwardClosed => "(ii) downward closed",
            IdealClause::Operations => "(iii) action",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdealViolation {
    pub clause: IdealClause,
    pub witness: String,
}

/// First failing ideal clause for `subset`, checked in order.
pub fn ideal_witness<H: Host + ?Sized>(host: &H, subset: &[Elem]) -> Option<IdealViolation> {
    let l = host.lattice();
    let mut member = vec![false; l.len()];
    for &v in subset {
        member[v] = true;
    }
    let fail = |clause, witness| Some(IdealViolation { clause, witness });
    if !member[l.bottom()] {
        return fail(IdealClause::Joins, format!("{} (empty join) missing", l.name(l.bottom())));
    }
    for &v in subset {
        for &w in subset {
            let j = l.join(v, w);
            if !member[j] {
                return fail(
                    IdealClause::Joins,
                    format!("{} ∨ {} = {} missing", l.name(v), l.name(w), l.name(j)),
                );
            }
        }
    }
    for &v in subset {
        if let Some(u) = l.elements().find(|&u| l.leq(u, v) && !member[u]) {
            return fail(
                IdealClause::DownwardClosed,
                format!("{} missing below {}", l.name(u), l.name(v)),
            );
        }
    }
    for &v in subset {
        if let Some(u) = host.operation_images(v).into_iter().find(|&u| !member[u]) {
            return fail(
                IdealClause::Operations,
                format!("{} missing, image of {}", l.name(u), l.name(v)),
            );
        }
    }
    None
}

pub fn is_ideal<H: Host + ?Sized>(host: &H, subset: &[Elem]) -> bool {
    ideal_witness(host, subset).is_none()
}

/// The ideal generated by `subset`: `[⊥, ⊤ ∗ ⋁S]` for modules and
/// `[⊥, ⊤·⋁S·⊤]` for quantales, with `⊤` read in `Q[e]` when there is no unit.
pub fn ideal_generated<H: Host + ?Sized>(host: &H, subset: &[Elem]) -> Ideal {
    let join = host.lattice().join_all(subset.iter().copied());
    Ideal {
        generator: host.ideal_generator(join),
    }
}

/// All ideal elements, with the closure properties asserted: join-closure
/// always, closure under the action when the scalars commute (modules), and
/// closure under products (quantales).
pub trait IdealElements: Host {
    fn ideal_elements(&self) -> Result<Vec<Elem>>;
}

impl IdealElements for QModule {
    fn ideal_elements(&self) -> Result<Vec<Elem>> {
        let elems: Vec<Elem> = self.elements().filter(|&v| self.is_ideal_element(v)).collect();
        self.carrier().join_closed_subset(&elems)?;
        if self.scalars().classify().commutative {
            for &v in &elems {
                for a in self.scalars().elements() {
                    let av = self.act(a, v);
                    if !elems.contains(&av) {
                        return Err(Error::ClosureViolation(format!(
                            "{} * {} = {} is not an ideal element",
                            self.scalars().name(a),
                            self.name(v),
                            self.name(av)
                        )));
                    }
                }
            }
        }
        Ok(elems)
    }
}

impl IdealElements for Quantale {
    fn ideal_elements(&self) -> Result<Vec<Elem>> {
        let elems: Vec<Elem> = self.elements().filter(|&v| self.is_ideal_element(v)).collect();
        let sub = id_subquantale(self)?;
        if sub.elements != elems {
            return Err(Error::ClosureViolation(
                "two-sided elements disagree with ideal generators".into(),
            ));
        }
        Ok(elems)
    }
}

/// A module together with an equivalent copy over unital scalars: the module
/// itself, or the same carrier and action over `Q[e]`.
#[derive(Clone, Debug)]
pub struct UnitalView {
    module: QModule,
    lift: Option<Unitalization>,
}

impl UnitalView {
    pub fn new(m: &QModule) -> Result<Self> {
        if m.scalars().unit().is_some() {
            return Ok(Self {
                module: m.clone(),
                lift: None,
            });
        }
        let lift = unitalize(m.scalars())?;
        Ok(Self {
            module: m.over_unitalization(&lift)?,
            lift: Some(lift),
        })
    }

    /// The module over unital scalars. Its carrier is the original carrier.
    pub fn module(&self) -> &QModule {
        &self.module
    }

    pub fn scalars(&self) -> &Quantale {
        self.module.scalars()
    }

    pub fn is_lifted(&self) -> bool {
        self.lift.is_some()
    }

    /// Index in the unital scalars of an original scalar.
    pub fn scalar(&self, a: Elem) -> Elem {
        self.lift.as_ref().map_or(a, |u| u.embedding[a])
    }

    /// `i^v = ⋁{a | a ∗ v ∈ I} = ⋁I /∗ v`.
    pub fn i_hat(&self, ideal: &Ideal, v: Elem) -> Elem {
        self.module.over(ideal.generator, v)
    }

    /// `v θ_I w` iff `i^v = i^w`.
    pub fn theta(&self, ideal: &Ideal) -> Congruence {
        Congruence::kernel_of(self.module.len(), |v| self.i_hat(ideal, v))
    }

    /// The pairwise form `i^v ∗ w ∨ i^w ∗ v ∈ I`.
    pub fn cross_term_in_ideal(&self, ideal: &Ideal, v: Elem, w: Elem) -> bool {
        let m = &self.module;
        let x = m.join(m.act(self.i_hat(ideal, v), w), m.act(self.i_hat(ideal, w), v));
        ideal.contains(m.carrier(), x)
    }
}

pub fn i_hat(m: &QModule, ideal: &Ideal, v: Elem) -> Result<Elem> {
    Ok(UnitalView::new(m)?.i_hat(ideal, v))
}

/// The largest module congruence whose class of `⊥` is `ideal`.
pub fn theta_from_ideal(m: &QModule, ideal: &Ideal) -> Result<Congruence> {
    check_ideal_generator(m, ideal)?;
    Ok(UnitalView::new(m)?.theta(ideal))
}

fn check_ideal_generator<H: Host + ?Sized>(host: &H, ideal: &Ideal) -> Result<()> {
    if host.is_ideal_element(ideal.generator) {
        Ok(())
    } else {
        Err(Error::ClosureViolation(format!(
            "{} does not generate an ideal",
            host.lattice().name(ideal.generator)
        )))
    }
}

/// The class of `⊥`.
pub fn bottom_class(lattice: &FiniteSupLattice, theta: &Congruence) -> Vec<Elem> {
    theta.class_of(lattice.bottom())
}

/// `a θ_i b` iff `i/a = i/b` and `a\i = b\i`, residuals taken in `Q[e]` when
/// `Q` has no unit. The class of `⊥` is `[⊥, i]`.
pub fn quantale_theta(q: &Quantale, i: Elem) -> Result<Congruence> {
    if !q.is_two_sided(i) {
        return Err(Error::NotTwoSided(q.name(i).to_owned()));
    }
    let n = q.len();
    if q.unit().is_some() {
        return Ok(Congruence::kernel_of(n, |a| {
            (q.right_residual(i, a), q.left_residual(a, i))
        }));
    }
    let u = unitalize(q)?;
    let p = &u.quantale;
    let emb = &u.embedding;
    Ok(Congruence::kernel_of(n, |a| {
        (p.right_residual(emb[i], emb[a]), p.left_residual(emb[a], emb[i]))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::enumerate_congruences;
    use crate::lattice::chain;
    use crate::module::{free_module, op_module};
    use std::sync::Arc;

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

    fn z0() -> Arc<Quantale> {
        Arc::new(
            Quantale::from_rows(chain(&["⊥", "⊤"]), &[vec!["⊥", "⊥"], vec!["⊥", "⊥"]], None).unwrap(),
        )
    }

    #[test]
    fn trivial_ideals() {
        let m = QModule::regular(l3());
        assert!(is_ideal(&m, &[0]));
        assert!(is_ideal(&m, &[0, 1, 2]));
        assert!(is_ideal(&m, &[0, 1]));
        assert_eq!(ideal_witness(&m, &[]).unwrap().clause, IdealClause::Joins);
    }

    #[test]
    fn non_downset_in_b2_squared() {
        let b2 = Arc::new(Quantale::meet_quantale(chain(&["⊥", "⊤"])).unwrap());
        let f = free_module(&b2, &["x", "y"]).unwrap();
        let m = f.module();
        let e = |s: &str| m.elem(s).unwrap();
        let w = ideal_witness(m, &[e("(⊥,⊥)"), e("(⊤,⊥)"), e("(⊤,⊤)")]).unwrap();
        assert_eq!(w.clause, IdealClause::DownwardClosed);
        assert!(w.witness.contains("(⊥,⊤)"));
    }

    #[test]
    fn generated_ideals() {
        let m = QModule::regular(l3());
        assert_eq!(ideal_generated(&m, &[]).generator, 0);
        assert_eq!(ideal_generated(&m, &[1]).generator, 1);
    }

    #[test]
    fn i_hat_on_l3() {
        let m = QModule::regular(l3());
        let ideal = Ideal { generator: 1 };
        assert_eq!(i_hat(&m, &ideal, 2).unwrap(), 1);
        assert_eq!(i_hat(&m, &ideal, 0).unwrap(), 2);
        assert_eq!(i_hat(&m, &ideal, 1).unwrap(), 2);
    }

    #[test]
    fn theta_on_l3() {
        let m = QModule::regular(l3());
        let t = |g| theta_from_ideal(&m, &Ideal { generator: g }).unwrap();
        assert!(t(0).is_identity());
        assert_eq!(t(1).labels(), &[0, 0, 1]);
        assert!(t(2).is_all());
    }

    #[test]
    fn theta_is_largest_with_its_bottom_class() {
        for q in [l3(), z0()] {
            let m = QModule::regular(Arc::clone(&q));
            for g in m.ideal_elements().unwrap() {
                let ideal = Ideal { generator: g };
                let theta = theta_from_ideal(&m, &ideal).unwrap();
                assert_eq!(bottom_class(m.carrier(), &theta), ideal.members(m.carrier()));
                for other in enumerate_congruences(&m, 7).unwrap() {
                    let bc = bottom_class(m.carrier(), &other);
                    assert!(is_ideal(&m, &bc));
                    if bc == ideal.members(m.carrier()) {
                        assert!(other.is_finer_than(&theta));
                    }
                }
            }
        }
    }

    #[test]
    fn z0_ideal_elements_through_lift() {
        let m = QModule::regular(z0());
        assert_eq!(m.ideal_elements().unwrap(), vec![0, 1]);
        let theta = theta_from_ideal(&m, &Ideal { generator: 0 }).unwrap();
        assert!(theta.is_identity());
    }

    #[test]
    fn quantale_theta_examples() {
        let q = l3();
        assert_eq!(quantale_theta(&q, 1).unwrap().labels(), &[0, 0, 1]);
        assert!(quantale_theta(&q, 2).unwrap().is_all());
        let z = z0();
        assert!(quantale_theta(&z, 0).unwrap().is_identity());
        let ps = Quantale::from_rows(
            chain(&["0", "a", "1"]),
            &[vec!["0", "0", "0"], vec!["0", "a", "1"], vec!["0", "1", "1"]],
            Some("a"),
        );
        // `a` is a unit but `a·⊤ = ⊤`, so it is not two-sided.
        let ps = ps.unwrap();
        assert_eq!(quantale_theta(&ps, 1).unwrap_err(), Error::NotTwoSided("a".into()));
    }

    #[test]
    fn dual_interval_is_ideal_of_op_module() {
        let m = QModule::regular(l3());
        let op = op_module(&m);
        for v in m.ideal_elements().unwrap() {
            assert!(op.is_ideal_element(v));
        }
    }
}
