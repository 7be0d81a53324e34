//! Projectivity through idempotent kernels, isomorphism classes of
//! projective modules, and a bounded semi-decision for equality in `K0`.
//!
//! Over a quantale without unit every computation here runs over `Q[e]`,
//! whose modules and projectives are the same as those of `Q`.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ideals::UnitalView;
use crate::lattice::Elem;
use crate::module::{
    direct_sum_all, extend_from_basis, homs_restricted, is_isomorphic, zero_module, Handedness, ModuleHom,
    PowerModule, QModule,
};
use crate::quantale::{unitalize, Quantale};
use crate::transforms::{all_kernels, Kernel};

/// Default cap on `|Q|^(n·n)` for idempotent kernel enumeration.
pub const DEFAULT_KERNEL_BUDGET: u128 = 1 << 20;

/// Modules larger than this are not compared in `K0` searches.
pub const MAX_COMPARED_SIZE: usize = 1024;

/// Every `k ∈ M_n(Q)` with `k ⋆ k = k`, in lexicographic order of entries.
pub fn idempotent_kernels(q: &Arc<Quantale>, n: usize, budget: u128) -> Result<Vec<Kernel>> {
    let needed = (q.len() as u128).checked_pow((n * n) as u32).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded {
            what: "square kernels",
            needed,
            budget,
        });
    }
    Ok(all_kernels(q, n, n, Handedness::Left)
        .filter(Kernel::is_idempotent)
        .collect())
}

/// `Q · {k(x,_)}`: the submodule of `Q^X` generated by the rows of `k`.
#[derive(Clone, Debug)]
pub struct KernelImage {
    pub module: QModule,
    /// Carrier elements of `module` as elements of `Q^X`.
    pub embedding: Vec<Elem>,
    pub power: PowerModule,
}

pub fn image_of_kernel(k: &Kernel) -> Result<KernelImage> {
    if !k.is_square() {
        return Err(Error::NotSquare);
    }
    let power = PowerModule::new(Arc::clone(&k.q), &k.rows);
    let rows: Vec<Elem> = (0..k.rows.len()).map(|x| power.encode(&k.row(x))).collect();
    let members = power.module.submodule_generated(&rows);
    let (module, embedding) = power.module.submodule(&members)?;
    Ok(KernelImage {
        module,
        embedding,
        power,
    })
}

#[derive(Clone, Debug)]
pub enum Evidence {
    /// `π ∘ μ = id` for the basis projection `π: Q^X → M`, with the
    /// idempotent kernel `k(x,_) = μ(x)`.
    Splitting { section: ModuleHom, kernel: Kernel },
    /// No section exists among all homomorphisms `M → Q^X` lying over `π`.
    Exhausted { sections_tried: usize },
}

#[derive(Clone, Debug)]
pub struct ProjectivityCertificate {
    pub projective: bool,
    pub evidence: Evidence,
    /// The free module `Q^X` the splitting search ran in.
    pub free: PowerModule,
    /// The idempotent-kernel search was also run and agreed.
    pub cross_checked: bool,
}

/// Decides projectivity of `m` with generators `generators` by searching a
/// section of `π: Q^X → M`, `π(e_x) = x`. The kernel read off a section is
/// checked to be idempotent. When `|Q|^(n·n)` is within `cross_check_budget`
/// the verdict is compared with a search over idempotent kernels whose image
/// is isomorphic to `m`.
pub fn is_projective(m: &QModule, generators: &[Elem], cross_check_budget: u128) -> Result<ProjectivityCertificate> {
    let mut gens: Vec<Elem> = Vec::with_capacity(generators.len());
    for &g in generators {
        if !gens.contains(&g) {
            gens.push(g);
        }
    }
    if m.submodule_generated(&gens).len() != m.len() {
        return Err(Error::NotGenerating);
    }
    let view = UnitalView::new(m)?;
    let m = view.module();
    let q = m.scalars_arc();
    let index: Vec<&str> = gens.iter().map(|&g| m.name(g)).collect();
    let free = PowerModule::new(Arc::clone(q), &index);
    let pi = extend_from_basis(&free, m, &gens)?;
    let sections = homs_restricted(m, &free.module, |j, t| pi.apply(t) == j)?;
    let found = sections
        .iter()
        .find(|mu| m.elements().all(|v| pi.apply(mu.apply(v)) == v));
    let (projective, evidence) = match found {
        Some(mu) => {
            let entries: Vec<Elem> = gens.iter().flat_map(|&g| free.tuple(mu.apply(g))).collect();
            let names: Vec<String> = index.iter().map(|s| (*s).to_owned()).collect();
            let kernel = Kernel::new(Arc::clone(q), names.clone(), names, entries, Handedness::Left)?;
            if !kernel.is_idempotent() {
                return Err(Error::LawViolation {
                    law: "idempotent kernel from section",
                    witness: kernel.to_string(),
                });
            }
            (
                true,
                Evidence::Splitting {
                    section: mu.clone(),
                    kernel,
                },
            )
        }
        None => (
            false,
            Evidence::Exhausted {
                sections_tried: sections.len(),
            },
        ),
    };
    let cross_checked = match idempotent_kernels(q, gens.len(), cross_check_budget) {
        Ok(kernels) => {
            let mut any = false;
            for k in kernels {
                let image = image_of_kernel(&k)?;
                if image.module.len() == m.len() && is_isomorphic(&image.module, m)?.is_some() {
                    any = true;
                    break;
                }
            }
            if any != projective {
                return Err(Error::LawViolation {
                    law: "projectivity cross-check",
                    witness: format!("section search says {projective}, kernel search says {any}"),
                });
            }
            true
        }
        Err(Error::BudgetExceeded { .. }) => false,
        Err(e) => return Err(e),
    };
    Ok(ProjectivityCertificate {
        projective,
        evidence,
        free,
        cross_checked,
    })
}

/// An isomorphism class of projective modules with a representative.
#[derive(Clone, Debug)]
pub struct ProjectiveClass {
    pub representative: QModule,
    /// An idempotent kernel whose image is the representative; absent for
    /// the zero class.
    pub kernel: Option<Kernel>,
}

/// Projective classes found as images of idempotent kernels.
#[derive(Clone, Debug)]
pub struct ClassInventory {
    pub scalars: Arc<Quantale>,
    pub classes: Vec<ProjectiveClass>,
}

/// Images of all idempotent `n × n` kernels for `n ≤ gen_bound`, up to
/// isomorphism. Class 0 is always `[{⊥}]`.
pub fn projective_classes(q: &Arc<Quantale>, gen_bound: usize, budget: u128) -> Result<ClassInventory> {
    let scalars = if q.unit().is_some() {
        Arc::clone(q)
    } else {
        Arc::new(unitalize(q)?.quantale)
    };
    let mut inv = ClassInventory {
        classes: vec![ProjectiveClass {
            representative: zero_module(Arc::clone(&scalars)),
            kernel: None,
        }],
        scalars,
    };
    for n in 1..=gen_bound {
        for k in idempotent_kernels(&inv.scalars, n, budget)? {
            let image = image_of_kernel(&k)?.module;
            if inv.class_of(&image)?.is_none() {
                inv.classes.push(ProjectiveClass {
                    representative: image,
                    kernel: Some(k),
                });
            }
        }
    }
    Ok(inv)
}

impl ClassInventory {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, m: &QModule) -> Result<Option<usize>> {
        for (i, c) in self.classes.iter().enumerate() {
            if c.representative.len() == m.len() && is_isomorphic(&c.representative, m)?.is_some() {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// Direct sum of the listed classes.
    pub fn sum(&self, classes: &[usize]) -> Result<QModule> {
        let parts: Vec<&QModule> = classes.iter().map(|&c| &self.classes[c].representative).collect();
        direct_sum_all(&self.scalars, &parts)
    }

    /// The class of `[a] ⊕ [b]`, if it is in the inventory.
    pub fn add(&self, a: usize, b: usize) -> Result<Option<usize>> {
        self.class_of(&self.sum(&[a, b])?)
    }

    /// The same classes over an isomorphic quantale; `iso[a]` is the image
    /// of scalar `a`.
    pub fn transport(&self, target: Arc<Quantale>, iso: &[Elem]) -> Result<ClassInventory> {
        let classes = self
            .classes
            .iter()
            .map(|c| {
                Ok(ProjectiveClass {
                    representative: c.representative.transport(Arc::clone(&target), iso)?,
                    kernel: c
                        .kernel
                        .as_ref()
                        .map(|k| {
                            let entries = k.entries.iter().map(|&e| iso[e]).collect();
                            Kernel::new(Arc::clone(&target), k.rows.clone(), k.cols.clone(), entries, k.side)
                        })
                        .transpose()?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(ClassInventory {
            scalars: target,
            classes,
        })
    }
}

/// A formal difference `Σ plus − Σ minus` of inventory classes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct K0Element {
    pub plus: Vec<usize>,
    pub minus: Vec<usize>,
}

impl K0Element {
    pub fn class(c: usize) -> Self {
        Self {
            plus: vec![c],
            minus: vec![],
        }
    }

    pub fn difference(plus: Vec<usize>, minus: Vec<usize>) -> Self {
        Self { plus, minus }
    }

    pub fn add(&self, other: &K0Element) -> Self {
        let mut plus = self.plus.clone();
        plus.extend(&other.plus);
        let mut minus = self.minus.clone();
        minus.extend(&other.minus);
        Self { plus, minus }
    }
}

/// A monoid homomorphism from projective modules under `⊕` to positive
/// integers under multiplication; it extends to `K0` and can separate
/// elements.
pub trait K0Invariant {
    fn name(&self) -> &str;
    fn value(&self, m: &QModule) -> u128;
}

/// `|M|`, multiplicative under direct sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CardinalityInvariant;

impl K0Invariant for CardinalityInvariant {
    fn name(&self) -> &str {
        "cardinality"
    }

    fn value(&self, m: &QModule) -> u128 {
        m.len() as u128
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum K0Verdict {
    /// `lhs ⊕ P ≅ rhs ⊕ P` for the listed classes `P`.
    Equal { stabilizer: Vec<usize> },
    Distinct { invariant: String, lhs: u128, rhs: u128 },
    Unknown,
}

/// Semi-decides `e1 = e2` in `K0`: equal when
/// `Σ plus(e1) ⊕ Σ minus(e2) ⊕ P ≅ Σ plus(e2) ⊕ Σ minus(e1) ⊕ P` for some
/// `P` made of at most `search_bound` inventory classes; distinct when an
/// invariant separates the two sides; unknown otherwise.
pub fn k0_equal(
    inv: &ClassInventory,
    e1: &K0Element,
    e2: &K0Element,
    search_bound: usize,
    invariants: &[&dyn K0Invariant],
) -> Result<K0Verdict> {
    let mut lhs_classes = e1.plus.clone();
    lhs_classes.extend(&e2.minus);
    let mut rhs_classes = e2.plus.clone();
    rhs_classes.extend(&e1.minus);
    for inv_fn in invariants {
        let eval = |cs: &[usize]| -> u128 {
            cs.iter()
                .map(|&c| inv_fn.value(&inv.classes[c].representative))
                .product()
        };
        let (l, r) = (eval(&lhs_classes), eval(&rhs_classes));
        if l != r {
            return Ok(K0Verdict::Distinct {
                invariant: inv_fn.name().to_owned(),
                lhs: l,
                rhs: r,
            });
        }
    }
    for size in 0..=search_bound {
        for p in multisets(inv.len(), size) {
            let mut l = lhs_classes.clone();
            l.extend(&p);
            let mut r = rhs_classes.clone();
            r.extend(&p);
            let size_of = |cs: &[usize]| -> usize {
                cs.iter()
                    .map(|&c| inv.classes[c].representative.len())
                    .try_fold(1usize, |acc, n| acc.checked_mul(n))
                    .unwrap_or(usize::MAX)
            };
            if size_of(&l) > MAX_COMPARED_SIZE || size_of(&r) > MAX_COMPARED_SIZE {
                continue;
            }
            let (lm, rm) = (inv.sum(&l)?, inv.sum(&r)?);
            if lm.len() == rm.len() && is_isomorphic(&lm, &rm)?.is_some() {
                return Ok(K0Verdict::Equal { stabilizer: p });
            }
        }
    }
    Ok(K0Verdict::Unknown)
}

/// Non-decreasing sequences of length `size` over `0..n`.
fn multisets(n: usize, size: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for c in start..n {
            cur.push(c);
            go(c, n, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, size, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{chain, FiniteSupLattice};
    use crate::module::free_module;

    fn b2() -> Arc<Quantale> {
        Arc::new(Quantale::meet_quantale(chain(&["⊥", "⊤"])).unwrap())
    }

    fn kernel(q: &Arc<Quantale>, rows: &[&[&str]]) -> Kernel {
        let rows: Vec<Vec<&str>> = rows.iter().map(|r| r.to_vec()).collect();
        Kernel::from_rows(q, &rows).unwrap()
    }

    #[test]
    fn idempotents_of_b2() {
        let q = b2();
        let ks = idempotent_kernels(&q, 2, DEFAULT_KERNEL_BUDGET).unwrap();
        let id = Kernel::identity(&q, 2).unwrap();
        assert!(ks.contains(&id));
        assert!(ks.contains(&kernel(&q, &[&["⊤", "⊤"], &["⊥", "⊥"]])));
        assert!(!ks.contains(&kernel(&q, &[&["⊥", "⊤"], &["⊥", "⊥"]])));
        assert!(matches!(
            idempotent_kernels(&q, 5, 1000),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn kernel_images() {
        let q = b2();
        let id = image_of_kernel(&Kernel::identity(&q, 2).unwrap()).unwrap();
        assert_eq!(id.module.len(), 4);
        let k = image_of_kernel(&kernel(&q, &[&["⊤", "⊤"], &["⊥", "⊥"]])).unwrap();
        assert_eq!(k.embedding.len(), 2);
        assert_eq!(k.power.tuple(k.embedding[1]), vec![1, 1]);
        let zero = image_of_kernel(&kernel(&q, &[&["⊥", "⊥"], &["⊥", "⊥"]])).unwrap();
        assert_eq!(zero.module.len(), 1);
    }

    #[test]
    fn chain_over_b2_is_projective() {
        let q = b2();
        let m = QModule::over_two_element(Arc::clone(&q), chain(&["0", "h", "1"])).unwrap();
        let cert = is_projective(&m, &[1, 2], DEFAULT_KERNEL_BUDGET).unwrap();
        assert!(cert.projective);
        assert!(cert.cross_checked);
        let Evidence::Splitting { section, .. } = &cert.evidence else { panic!() };
        assert_eq!(cert.free.tuple(section.apply(1)), vec![1, 0]);
        assert_eq!(cert.free.tuple(section.apply(2)), vec![1, 1]);
    }

    #[test]
    fn free_module_is_projective() {
        let q = b2();
        let f = free_module(&q, &["x", "y"]).unwrap();
        let cert = is_projective(f.module(), &f.basis, DEFAULT_KERNEL_BUDGET).unwrap();
        assert!(cert.projective);
    }

    #[test]
    fn three_atom_diamond_is_not_projective() {
        let q = b2();
        let m3 = FiniteSupLattice::validate(
            &["0", "a", "b", "c", "1"],
            &[("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")],
        )
        .unwrap();
        let m = QModule::over_two_element(q, m3).unwrap();
        let cert = is_projective(&m, &[1, 2, 3], DEFAULT_KERNEL_BUDGET).unwrap();
        assert!(!cert.projective);
        assert!(matches!(cert.evidence, Evidence::Exhausted { .. }));
        assert_eq!(is_projective(&m, &[1, 2], 0).unwrap_err(), Error::NotGenerating);
    }

    #[test]
    fn k0_over_b2() {
        let q = b2();
        let inv = projective_classes(&q, 1, DEFAULT_KERNEL_BUDGET).unwrap();
        assert_eq!(inv.len(), 2);
        let inv = projective_classes(&q, 2, DEFAULT_KERNEL_BUDGET).unwrap();
        let b1 = inv.class_of(&QModule::regular(Arc::clone(&q))).unwrap().unwrap();
        let f2 = free_module(&q, &["x", "y"]).unwrap();
        let b2sq = inv.class_of(f2.module()).unwrap().unwrap();
        let card: [&dyn K0Invariant; 1] = [&CardinalityInvariant];
        let sum = K0Element::class(b1).add(&K0Element::class(b1));
        assert_eq!(
            k0_equal(&inv, &sum, &K0Element::class(b2sq), 1, &card).unwrap(),
            K0Verdict::Equal { stabilizer: vec![] }
        );
        assert!(matches!(
            k0_equal(&inv, &K0Element::class(b1), &K0Element::class(b2sq), 1, &card).unwrap(),
            K0Verdict::Distinct { lhs: 2, rhs: 4, .. }
        ));
        let mm = K0Element::difference(vec![b1], vec![b1]);
        let zz = K0Element::difference(vec![0], vec![0]);
        assert!(matches!(k0_equal(&inv, &mm, &zz, 0, &card).unwrap(), K0Verdict::Equal { .. }));
        assert_eq!(inv.add(0, b1).unwrap(), Some(b1));
        assert_eq!(inv.add(b1, 0).unwrap(), Some(b1));
    }
}
