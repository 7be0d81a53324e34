//! Module transforms with a Q-valued kernel, their inverse transforms, the
//! matrix quantale, and the correspondence between square kernels and
//! endomorphisms of free modules.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lattice::{residuum_of_map, Elem, FiniteSupLattice, Radix};
use crate::module::{validate_hom, Handedness, ModuleHom, PowerModule, QModule};
use crate::quantale::Quantale;

/// A matrix `k ∈ Q^{X×Y}`, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kernel {
    pub q: Arc<Quantale>,
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub entries: Vec<Elem>,
    pub side: Handedness,
}

impl Kernel {
    pub fn new(q: Arc<Quantale>, rows: Vec<String>, cols: Vec<String>, entries: Vec<Elem>, side: Handedness) -> Result<Self> {
        if entries.len() != rows.len() * cols.len() {
            return Err(Error::TableShape {
                expected: rows.len() * cols.len(),
                found: entries.len(),
            });
        }
        if let Some(&bad) = entries.iter().find(|&&e| e >= q.len()) {
            return Err(Error::UnknownElement(format!("#{bad}")));
        }
        Ok(Self {
            q,
            rows,
            cols,
            entries,
            side,
        })
    }

    /// Square left kernel over `x0, x1, ...` from a row-major entry list.
    pub fn square(q: &Arc<Quantale>, n: usize, entries: Vec<Elem>) -> Result<Self> {
        let index = default_index(n);
        Self::new(q.clone(), index.clone(), index, entries, Handedness::Left)
    }

    /// Left kernel from rows of element names.
    pub fn from_rows<S: AsRef<str>>(q: &Arc<Quantale>, rows: &[Vec<S>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::TableShape {
                    expected: r * c,
                    found: rows.iter().map(Vec::len).sum(),
                });
            }
            for s in row {
                entries.push(q.elem(s.as_ref())?);
            }
        }
        Self::new(q.clone(), default_index(r), default_index(c), entries, Handedness::Left)
    }

    /// The unit matrix `id(x, y) = 1` iff `x = y`.
    pub fn identity(q: &Arc<Quantale>, n: usize) -> Result<Self> {
        let one = q.unit().ok_or(Error::NotUnital)?;
        let entries = (0..n * n)
            .map(|i| if i / n == i % n { one } else { q.bottom() })
            .collect();
        Self::square(q, n, entries)
    }

    #[inline]
    pub fn at(&self, x: usize, y: usize) -> Elem {
        self.entries[x * self.cols.len() + y]
    }

    pub fn is_square(&self) -> bool {
        self.rows.len() == self.cols.len()
    }

    /// Row `x` as a tuple over the column index.
    pub fn row(&self, x: usize) -> Vec<Elem> {
        let c = self.cols.len();
        self.entries[x * c..(x + 1) * c].to_vec()
    }

    /// `(self ⋆ other)(x, y) = ⋁_z self(x, z) · other(z, y)`; right kernels
    /// multiply in the opposite quantale so that `h_{k⋆l} = h_l ∘ h_k` holds
    /// on both sides.
    pub fn star(&self, other: &Kernel) -> Result<Kernel> {
        if self.cols.len() != other.rows.len() {
            return Err(Error::TableShape {
                expected: self.cols.len(),
                found: other.rows.len(),
            });
        }
        let q = &self.q;
        let (r, m, c) = (self.rows.len(), self.cols.len(), other.cols.len());
        let mut entries = Vec::with_capacity(r * c);
        for x in 0..r {
            for y in 0..c {
                entries.push(q.lattice().join_all((0..m).map(|z| match self.side {
                    Handedness::Left => q.mul(self.at(x, z), other.at(z, y)),
                    Handedness::Right => q.mul(other.at(z, y), self.at(x, z)),
                })));
            }
        }
        Kernel::new(q.clone(), self.rows.clone(), other.cols.clone(), entries, self.side)
    }

    pub fn is_idempotent(&self) -> bool {
        self.is_square() && self.star(self).map(|k| k.entries == self.entries).unwrap_or(false)
    }

    /// Evaluates the transform on a tuple `f ∈ Q^X`:
    /// left `h f(y) = ⋁_x f(x)·k(x,y)`, right `h f(y) = ⋁_x k(x,y)·f(x)`.
    pub fn apply(&self, f: &[Elem]) -> Vec<Elem> {
        let q = &self.q;
        (0..self.cols.len())
            .map(|y| {
                q.lattice().join_all((0..self.rows.len()).map(|x| match self.side {
                    Handedness::Left => q.mul(f[x], self.at(x, y)),
                    Handedness::Right => q.mul(self.at(x, y), f[x]),
                }))
            })
            .collect()
    }

    /// Evaluates the inverse transform on `g ∈ Q^Y`:
    /// left `λ g(x) = ⋀_y g(y)/k(x,y)`, right `λ g(x) = ⋀_y k(x,y)\g(y)`.
    pub fn apply_inverse(&self, g: &[Elem]) -> Vec<Elem> {
        let q = &self.q;
        (0..self.rows.len())
            .map(|x| {
                q.lattice().meet_all((0..self.cols.len()).map(|y| match self.side {
                    Handedness::Left => q.right_residual(g[y], self.at(x, y)),
                    Handedness::Right => q.left_residual(self.at(x, y), g[y]),
                }))
            })
            .collect()
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for x in 0..self.rows.len() {
            if x > 0 {
                f.write_str("; ")?;
            }
            let row: Vec<&str> = self.row(x).iter().map(|&e| self.q.name(e)).collect();
            f.write_str(&row.join(" "))?;
        }
        f.write_str("]")
    }
}

fn default_index(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

/// The scalars over which `Q^X` is a left module for the given side.
fn side_scalars(q: &Arc<Quantale>, side: Handedness) -> Arc<Quantale> {
    match side {
        Handedness::Left => q.clone(),
        Handedness::Right => Arc::new(q.opposite()),
    }
}

/// The pair of function modules `Q^X`, `Q^Y` that transforms with a given
/// shape act between. Build once and reuse across many kernels.
#[derive(Clone, Debug)]
pub struct TransformSpace {
    pub source: PowerModule,
    pub target: PowerModule,
    pub side: Handedness,
}

impl TransformSpace {
    pub fn new<S: AsRef<str>>(q: &Arc<Quantale>, rows: &[S], cols: &[S], side: Handedness) -> Self {
        let scalars = side_scalars(q, side);
        let source = PowerModule::new(scalars.clone(), rows);
        let target = if rows.len() == cols.len() && rows.iter().zip(cols).all(|(a, b)| a.as_ref() == b.as_ref()) {
            source.clone()
        } else {
            PowerModule::new(scalars, cols)
        };
        Self { source, target, side }
    }

    pub fn for_kernel(k: &Kernel) -> Self {
        Self::new(&k.q, &k.rows, &k.cols, k.side)
    }

    /// `h_k` as an element map `Q^X -> Q^Y`.
    pub fn forward_map(&self, k: &Kernel) -> Vec<Elem> {
        self.source
            .module
            .elements()
            .map(|f| self.target.encode(&k.apply(&self.source.tuple(f))))
            .collect()
    }

    /// `λ_k` as an element map `Q^Y -> Q^X`.
    pub fn inverse_map(&self, k: &Kernel) -> Vec<Elem> {
        self.target
            .module
            .elements()
            .map(|g| self.source.encode(&k.apply_inverse(&self.target.tuple(g))))
            .collect()
    }

    /// `h_k`, validated as a module homomorphism.
    pub fn transform(&self, k: &Kernel) -> Result<ModuleHom> {
        validate_hom(&self.source.module, &self.target.module, self.forward_map(k))
    }

    /// Checks `h_k f <= g  <=>  f <= λ_k g` at every pair and compares `λ_k`
    /// with the residuum of `h_k` computed independently by joins.
    pub fn check_adjoint(&self, k: &Kernel) -> Result<AdjointReport> {
        let forward = self.forward_map(k);
        let inverse = self.inverse_map(k);
        let (src, tgt) = (self.source.module.carrier(), self.target.module.carrier());
        let mut counterexample = None;
        let mut pairs = 0usize;
        'outer: for f in src.elements() {
            for g in tgt.elements() {
                pairs += 1;
                if tgt.leq(forward[f], g) != src.leq(f, inverse[g]) {
                    counterexample = Some((f, g));
                    break 'outer;
                }
            }
        }
        let residuum = residuum_of_map(src, tgt, &forward)?;
        Ok(AdjointReport {
            pairs_checked: pairs,
            counterexample,
            residuum_matches: residuum.residuum == inverse,
        })
    }

    /// `ν = λ_k ∘ h_k` together with the result of the nucleus checks.
    pub fn nucleus_of(&self, k: &Kernel) -> NucleusReport {
        let forward = self.forward_map(k);
        let inverse = self.inverse_map(k);
        let map: Vec<Elem> = forward.iter().map(|&g| inverse[g]).collect();
        let violation = check_module_nucleus(&self.source.module, &map);
        NucleusReport { map, violation }
    }

    /// The kernel of an endomorphism of a free module: `k(x, y) = h(e_x)(y)`.
    pub fn kernel_of_endo(&self, q: &Arc<Quantale>, h: &ModuleHom) -> Result<Kernel> {
        let n = self.source.arity();
        let mut entries = Vec::with_capacity(n * n);
        for x in 0..n {
            let ex = self.source.basis(x).ok_or(Error::NotUnital)?;
            entries.extend(self.source.tuple(h.apply(ex)));
        }
        Kernel::new(q.clone(), self.source.index.clone(), self.source.index.clone(), entries, self.side)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjointReport {
    pub pairs_checked: usize,
    pub counterexample: Option<(Elem, Elem)>,
    pub residuum_matches: bool,
}

impl AdjointReport {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none() && self.residuum_matches
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NucleusReport {
    pub map: Vec<Elem>,
    pub violation: Option<String>,
}

/// Checks that `map` is monotone, extensive, idempotent and satisfies
/// `a * ν(f) <= ν(a * f)`. Returns a description of the first failure.
pub fn check_module_nucleus(m: &QModule, map: &[Elem]) -> Option<String> {
    for f in m.elements() {
        if !m.leq(f, map[f]) {
            return Some(format!("not extensive at {}", m.name(f)));
        }
        if map[map[f]] != map[f] {
            return Some(format!("not idempotent at {}", m.name(f)));
        }
        for g in m.elements() {
            if m.leq(f, g) && !m.leq(map[f], map[g]) {
                return Some(format!("not monotone at {} <= {}", m.name(f), m.name(g)));
            }
        }
        for a in m.scalars().elements() {
            if !m.leq(m.act(a, map[f]), map[m.act(a, f)]) {
                return Some(format!(
                    "{} * ν({}) not below ν({} * {})",
                    m.scalars().name(a),
                    m.name(f),
                    m.scalars().name(a),
                    m.name(f)
                ));
            }
        }
    }
    None
}

/// `h_k` for a single kernel, building the function modules on the fly.
pub fn transform(k: &Kernel) -> Result<ModuleHom> {
    TransformSpace::for_kernel(k).transform(k)
}

/// `λ_k` for a single kernel.
pub fn inverse_transform(k: &Kernel) -> Vec<Elem> {
    TransformSpace::for_kernel(k).inverse_map(k)
}

pub fn check_adjoint(k: &Kernel) -> Result<AdjointReport> {
    TransformSpace::for_kernel(k).check_adjoint(k)
}

pub fn nucleus_of(k: &Kernel) -> NucleusReport {
    TransformSpace::for_kernel(k).nucleus_of(k)
}

/// Every kernel of the given shape, in lexicographic order of entries.
pub fn all_kernels(q: &Arc<Quantale>, rows: usize, cols: usize, side: Handedness) -> impl Iterator<Item = Kernel> + '_ {
    let radix = Radix::uniform(q.len(), rows * cols);
    let (ri, ci) = (default_index(rows), default_index(cols));
    (0..radix.total()).map(move |i| Kernel {
        q: q.clone(),
        rows: ri.clone(),
        cols: ci.clone(),
        entries: radix.decode(i),
        side,
    })
}

/// `M_X(Q)`: square matrices with pointwise join and the `⋆` product.
#[derive(Clone, Debug)]
pub struct MatrixQuantale {
    pub quantale: Quantale,
    pub scalars: Arc<Quantale>,
    pub n: usize,
    pub radix: Radix,
}

impl MatrixQuantale {
    pub fn kernel(&self, e: Elem) -> Kernel {
        Kernel::square(&self.scalars, self.n, self.radix.decode(e)).expect("matrix entry")
    }

    pub fn elem_of(&self, k: &Kernel) -> Elem {
        self.radix.encode(&k.entries)
    }
}

/// Builds and validates `M_n(Q)`. The unit is the identity matrix when `Q`
/// is unital; otherwise the result is validated without a declared unit.
pub fn matrix_quantale(q: &Arc<Quantale>, n: usize) -> Result<MatrixQuantale> {
    let factors: Vec<&FiniteSupLattice> = vec![q.lattice(); n * n];
    let lattice = FiniteSupLattice::product(&factors);
    let radix = Radix::uniform(q.len(), n * n);
    let size = lattice.len();
    let mut names = Vec::with_capacity(size);
    for e in 0..size {
        let k = Kernel::square(q, n, radix.decode(e))?;
        names.push(k.to_string());
    }
    let lattice = lattice.relabel(names)?;
    let decoded: Vec<Kernel> = (0..size)
        .map(|e| Kernel::square(q, n, radix.decode(e)))
        .collect::<Result<_>>()?;
    let mut mul = Vec::with_capacity(size * size);
    for h in &decoded {
        for k in &decoded {
            mul.push(radix.encode(&h.star(k)?.entries));
        }
    }
    let unit = match q.unit() {
        Some(_) => Some(radix.encode(&Kernel::identity(q, n)?.entries)),
        None => None,
    };
    let quantale = Quantale::new(lattice, mul, unit)?;
    Ok(MatrixQuantale {
        quantale,
        scalars: q.clone(),
        n,
        radix,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::chain;

    fn b2() -> Arc<Quantale> {
        Arc::new(Quantale::meet_quantale(chain(&["⊥", "⊤"])).unwrap())
    }

    fn k(q: &Arc<Quantale>, rows: &[&[&str]]) -> Kernel {
        let rows: Vec<Vec<&str>> = rows.iter().map(|r| r.to_vec()).collect();
        Kernel::from_rows(q, &rows).unwrap()
    }

    #[test]
    fn transform_example() {
        let q = b2();
        let kernel = k(&q, &[&["⊤", "⊥"], &["⊥", "⊥"]]);
        assert_eq!(kernel.apply(&[1, 1]), vec![1, 0]);
        assert_eq!(kernel.apply_inverse(&[1, 0]), vec![1, 1]);
    }

    #[test]
    fn identity_and_zero_kernels() {
        let q = b2();
        let space = TransformSpace::new(&q, &["x0", "x1"], &["x0", "x1"], Handedness::Left);
        let id = Kernel::identity(&q, 2).unwrap();
        let n = space.source.module.len();
        assert_eq!(space.forward_map(&id), (0..n).collect::<Vec<_>>());
        assert_eq!(space.inverse_map(&id), (0..n).collect::<Vec<_>>());
        let zero = Kernel::square(&q, 2, vec![0; 4]).unwrap();
        let m = &space.source.module;
        assert!(space.forward_map(&zero).iter().all(|&g| g == m.bottom()));
        assert!(space.inverse_map(&zero).iter().all(|&f| f == m.top()));
        assert!(space.check_adjoint(&zero).unwrap().holds());
    }

    #[test]
    fn nucleus_example() {
        let q = b2();
        let kernel = k(&q, &[&["⊤", "⊤"], &["⊥", "⊥"]]);
        let space = TransformSpace::for_kernel(&kernel);
        let report = space.nucleus_of(&kernel);
        assert_eq!(report.violation, None);
        let e = |t: &[Elem]| space.source.encode(t);
        assert_eq!(report.map[e(&[1, 0])], e(&[1, 1]));
        assert_eq!(report.map[e(&[0, 1])], e(&[0, 1]));
    }

    #[test]
    fn matrix_product_example() {
        let q = b2();
        let a = k(&q, &[&["⊤", "⊤"], &["⊥", "⊥"]]);
        let b = k(&q, &[&["⊥", "⊥"], &["⊤", "⊤"]]);
        assert_eq!(a.star(&b).unwrap().entries, a.entries);
        let mq = matrix_quantale(&q, 2).unwrap();
        assert_eq!(mq.quantale.len(), 16);
        let id = mq.elem_of(&Kernel::identity(&q, 2).unwrap());
        assert_eq!(mq.quantale.unit(), Some(id));
        let m1 = matrix_quantale(&q, 1).unwrap();
        assert!(crate::iso::quantale_isomorphism(&m1.quantale, &q).is_some());
    }

    #[test]
    fn kernel_roundtrip_over_b2() {
        let q = b2();
        let space = TransformSpace::new(&q, &["x0", "x1"], &["x0", "x1"], Handedness::Left);
        for kernel in all_kernels(&q, 2, 2, Handedness::Left) {
            let h = space.transform(&kernel).unwrap();
            assert_eq!(space.kernel_of_endo(&q, &h).unwrap().entries, kernel.entries);
        }
    }

    #[test]
    fn idempotent_examples() {
        let q = b2();
        assert!(k(&q, &[&["⊤", "⊤"], &["⊥", "⊥"]]).is_idempotent());
        assert!(!k(&q, &[&["⊥", "⊤"], &["⊥", "⊥"]]).is_idempotent());
    }
}
