//! Finite quantales: a sup-lattice with an associative product that
//! distributes over joins in both arguments.

use serde::Serialize;

use crate::error::{Error, Result, Side};
use crate::lattice::{Elem, FiniteSupLattice};

/// Exhaustively computed classification flags.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub unital: bool,
    pub commutative: bool,
    pub integral: bool,
    pub frame: bool,
}

/// Which absorption condition selects the sided elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sidedness {
    /// `⊤·a <= a`
    Left,
    /// `a·⊤ <= a`
    Right,
    /// both
    Two,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quantale {
    lattice: FiniteSupLattice,
    mul: Vec<Elem>,
    unit: Option<Elem>,
    flags: Classification,
    // a\b at [a * n + b]
    left_res: Vec<Elem>,
    // b/a at [b * n + a]
    right_res: Vec<Elem>,
}

impl Quantale {
    /// Validates a product table (`mul[a * n + b] = a·b`) on a lattice.
    ///
    /// Checks, in order: bottom absorption, distributivity over binary joins
    /// on both sides, associativity, and the unit law for a declared unit.
    /// When no unit is declared one is searched for, so `unit()` reports the
    /// monoid unit whenever it exists.
    pub fn new(lattice: FiniteSupLattice, mul: Vec<Elem>, unit: Option<Elem>) -> Result<Self> {
        let n = lattice.len();
        if mul.len() != n * n {
            return Err(Error::TableShape {
                expected: n * n,
                found: mul.len(),
            });
        }
        if let Some(&bad) = mul.iter().find(|&&x| x >= n) {
            return Err(Error::UnknownElement(format!("#{bad}")));
        }
        let name = |e: Elem| lattice.name(e).to_owned();
        let m = |a: Elem, b: Elem| mul[a * n + b];
        let bot = lattice.bottom();
        for a in 0..n {
            if m(a, bot) != bot || m(bot, a) != bot {
                return Err(Error::BottomNotAbsorbed { a: name(a) });
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in b + 1..n {
                    let bc = lattice.join(b, c);
                    if m(a, bc) != lattice.join(m(a, b), m(a, c)) {
                        return Err(Error::NotDistributive {
                            side: Side::Left,
                            a: name(a),
                            b: name(b),
                            c: name(c),
                        });
                    }
                    if m(bc, a) != lattice.join(m(b, a), m(c, a)) {
                        return Err(Error::NotDistributive {
                            side: Side::Right,
                            a: name(a),
                            b: name(b),
                            c: name(c),
                        });
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = m(a, b);
                for c in 0..n {
                    if m(ab, c) != m(a, m(b, c)) {
                        return Err(Error::NotAssociative {
                            a: name(a),
                            b: name(b),
                            c: name(c),
                        });
                    }
                }
            }
        }
        let is_unit = |u: Elem| (0..n).find(|&a| m(u, a) != a || m(a, u) != a);
        let unit = match unit {
            Some(u) => {
                if u >= n {
                    return Err(Error::UnknownElement(format!("#{u}")));
                }
                if let Some(a) = is_unit(u) {
                    return Err(Error::UnitLaw { a: name(a) });
                }
                Some(u)
            }
            None => (0..n).find(|&u| is_unit(u).is_none()),
        };
        let mut left_res = vec![0; n * n];
        let mut right_res = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                left_res[a * n + b] = lattice.join_all((0..n).filter(|&c| lattice.leq(m(a, c), b)));
                right_res[b * n + a] = lattice.join_all((0..n).filter(|&c| lattice.leq(m(c, a), b)));
            }
        }
        let commutative = (0..n).all(|a| (0..n).all(|b| m(a, b) == m(b, a)));
        let integral = unit == Some(lattice.top());
        let frame = integral && (0..n).all(|a| (0..n).all(|b| m(a, b) == lattice.meet(a, b)));
        let flags = Classification {
            unital: unit.is_some(),
            commutative,
            integral,
            frame,
        };
        Ok(Self {
            lattice,
            mul,
            unit,
            flags,
            left_res,
            right_res,
        })
    }

    /// Validates a table given by element names, one row per left factor.
    pub fn from_rows<S: AsRef<str>>(
        lattice: FiniteSupLattice,
        rows: &[Vec<S>],
        unit: Option<&str>,
    ) -> Result<Self> {
        let n = lattice.len();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::TableShape {
                expected: n * n,
                found: rows.iter().map(Vec::len).sum(),
            });
        }
        let mut mul = Vec::with_capacity(n * n);
        for row in rows {
            for s in row {
                mul.push(lattice.elem(s.as_ref())?);
            }
        }
        let unit = unit.map(|u| lattice.elem(u)).transpose()?;
        Self::new(lattice, mul, unit)
    }

    /// A quantale whose product is the lattice meet (a frame when the
    /// lattice is distributive).
    pub fn meet_quantale(lattice: FiniteSupLattice) -> Result<Self> {
        let n = lattice.len();
        let mul = (0..n * n).map(|i| lattice.meet(i / n, i % n)).collect();
        let top = lattice.top();
        Self::new(lattice, mul, Some(top))
    }

    pub fn lattice(&self) -> &FiniteSupLattice {
        &self.lattice
    }

    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lattice.is_empty()
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        self.lattice.elements()
    }

    pub fn name(&self, e: Elem) -> &str {
        self.lattice.name(e)
    }

    pub fn elem(&self, name: &str) -> Result<Elem> {
        self.lattice.elem(name)
    }

    pub fn bottom(&self) -> Elem {
        self.lattice.bottom()
    }

    pub fn top(&self) -> Elem {
        self.lattice.top()
    }

    pub fn unit(&self) -> Option<Elem> {
        self.unit
    }

    pub fn mul_table(&self) -> &[Elem] {
        &self.mul
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a * self.len() + b]
    }

    #[inline]
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.lattice.leq(a, b)
    }

    #[inline]
    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.lattice.join(a, b)
    }

    #[inline]
    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.lattice.meet(a, b)
    }

    /// `a\b = ⋁{c | a·c <= b}`
    #[inline]
    pub fn left_residual(&self, a: Elem, b: Elem) -> Elem {
        self.left_res[a * self.len() + b]
    }

    /// `b/a = ⋁{c | c·a <= b}`
    #[inline]
    pub fn right_residual(&self, b: Elem, a: Elem) -> Elem {
        self.right_res[b * self.len() + a]
    }

    /// Both residuals of named elements: `(a\b, b/a)`.
    pub fn residuals(&self, a: &str, b: &str) -> Result<(Elem, Elem)> {
        let (a, b) = (self.elem(a)?, self.elem(b)?);
        Ok((self.left_residual(a, b), self.right_residual(b, a)))
    }

    pub fn classify(&self) -> Classification {
        self.flags
    }

    /// The same lattice with the product reversed.
    pub fn opposite(&self) -> Self {
        let n = self.len();
        let mul = (0..n * n).map(|i| self.mul(i % n, i / n)).collect();
        Self::new(self.lattice.clone(), mul, self.unit).expect("opposite of a quantale")
    }

    /// Elements absorbing `⊤` on the requested side.
    pub fn sided_elements(&self, side: Sidedness) -> Vec<Elem> {
        let top = self.top();
        self.elements()
            .filter(|&a| {
                let right = self.leq(self.mul(a, top), a);
                let left = self.leq(self.mul(top, a), a);
                match side {
                    Sidedness::Left => left,
                    Sidedness::Right => right,
                    Sidedness::Two => left && right,
                }
            })
            .collect()
    }

    pub fn is_two_sided(&self, a: Elem) -> bool {
        let top = self.top();
        self.leq(self.mul(a, top), a) && self.leq(self.mul(top, a), a)
    }

    /// Elements with `⊤·a·⊤ = a` literally.
    pub fn strict_two_sided_elements(&self) -> Vec<Elem> {
        let top = self.top();
        self.elements()
            .filter(|&a| self.mul(self.mul(top, a), top) == a)
            .collect()
    }

    /// Elements on which the absorption predicate and the literal
    /// `⊤·a·⊤ = a` predicate disagree. Always empty for unital quantales.
    pub fn two_sided_discrepancies(&self) -> Vec<Elem> {
        let strict = self.strict_two_sided_elements();
        self.elements()
            .filter(|&a| self.is_two_sided(a) != strict.contains(&a))
            .collect()
    }

    /// Restricts the quantale to a subset closed under joins and products.
    /// The result is validated independently; it may be non-unital.
    pub fn subquantale(&self, subset: &[Elem]) -> Result<(Self, Vec<Elem>)> {
        let (lattice, embedding) = self.lattice.join_closed_subset(subset)?;
        let m = embedding.len();
        let pos = |x: Elem| embedding.iter().position(|&e| e == x);
        let mut mul = Vec::with_capacity(m * m);
        for &a in &embedding {
            for &b in &embedding {
                let ab = self.mul(a, b);
                mul.push(pos(ab).ok_or_else(|| {
                    Error::ClosureViolation(format!(
                        "{}·{} = {} leaves the subset",
                        self.name(a),
                        self.name(b),
                        self.name(ab)
                    ))
                })?);
            }
        }
        let unit = self.unit.and_then(pos);
        Ok((Self::new(lattice, mul, unit)?, embedding))
    }

    /// Same structure with new element names.
    pub fn relabel(&self, names: Vec<String>) -> Result<Self> {
        Ok(Self {
            lattice: self.lattice.relabel(names)?,
            ..self.clone()
        })
    }
}

/// The subquantale of two-sided elements.
#[derive(Clone, Debug)]
pub struct IdSubquantale {
    pub elements: Vec<Elem>,
    pub quantale: Quantale,
    pub equals_whole: bool,
}

/// Restriction of the quantale to its two-sided elements. A closure failure
/// is reported as [`Error::ClosureViolation`].
pub fn id_subquantale(q: &Quantale) -> Result<IdSubquantale> {
    let elements = q.sided_elements(Sidedness::Two);
    let (quantale, _) = q.subquantale(&elements)?;
    Ok(IdSubquantale {
        equals_whole: elements.len() == q.len(),
        elements,
        quantale,
    })
}

/// The unitalization `Q[e]` together with the embedding `a ↦ a ∨ ⊥`.
#[derive(Clone, Debug)]
pub struct Unitalization {
    pub quantale: Quantale,
    pub embedding: Vec<Elem>,
    /// The adjoined unit `e`.
    pub unit: Elem,
}

impl Unitalization {
    /// Index of `a ∨ ε` where `with_unit` selects `ε = e`.
    pub fn pair(&self, a: Elem, with_unit: bool) -> Elem {
        2 * a + usize::from(with_unit)
    }
}

/// Adjoins a fresh unit `e`: the carrier is `{a ∨ ε | a ∈ Q, ε ∈ {⊥, e}}`,
/// ordered componentwise, with the four product cases
///
/// ```text
/// (a ∨ ⊥)(a' ∨ ⊥) = aa'
/// (a ∨ e)(a' ∨ ⊥) = aa' ∨ a'
/// (a ∨ ⊥)(a' ∨ e) = aa' ∨ a
/// (a ∨ e)(a' ∨ e) = (aa' ∨ a ∨ a') ∨ e
/// ```
///
/// Element `2a` is `a ∨ ⊥` and `2a + 1` is `a ∨ e`. The embedding is checked
/// to be an injective quantale homomorphism.
pub fn unitalize(q: &Quantale) -> Result<Unitalization> {
    let n = q.len();
    let l = q.lattice();
    let e_name = fresh_name(l, "e");
    let bot = q.bottom();
    let mut names = Vec::with_capacity(2 * n);
    for a in 0..n {
        names.push(l.name(a).to_owned());
        names.push(if a == bot {
            e_name.clone()
        } else {
            format!("{}∨{}", l.name(a), e_name)
        });
    }
    let m = 2 * n;
    let mut leq = vec![false; m * m];
    for x in 0..m {
        for y in 0..m {
            leq[x * m + y] = l.leq(x / 2, y / 2) && (x % 2 <= y % 2);
        }
    }
    let lattice = FiniteSupLattice::from_relation(names, leq)?;
    let mut mul = vec![0; m * m];
    for x in 0..m {
        for y in 0..m {
            let (a, ea) = (x / 2, x % 2 == 1);
            let (b, eb) = (y / 2, y % 2 == 1);
            let ab = q.mul(a, b);
            mul[x * m + y] = match (ea, eb) {
                (false, false) => 2 * ab,
                (true, false) => 2 * q.join(ab, b),
                (false, true) => 2 * q.join(ab, a),
                (true, true) => 2 * q.join(q.join(ab, a), b) + 1,
            };
        }
    }
    let unit = 2 * bot + 1;
    let quantale = Quantale::new(lattice, mul, Some(unit))?;
    let embedding: Vec<Elem> = (0..n).map(|a| 2 * a).collect();
    check_quantale_hom(q, &quantale, &embedding)?;
    Ok(Unitalization {
        quantale,
        embedding,
        unit,
    })
}

/// The quantale of subsets of a finite semigroup with union as join and
/// `Y·Z = {yz | y ∈ Y, z ∈ Z}`. Subsets are indexed by bitmask (bit `i` for
/// semigroup element `i`) and named `{x,y}` (the empty set is `∅`).
pub fn powerset_quantale<S: AsRef<str>>(elements: &[S], table: &[Vec<S>]) -> Result<Quantale> {
    let k = elements.len();
    if k == 0 {
        return Err(Error::EmptyCarrier);
    }
    if k > 8 {
        return Err(Error::CarrierTooLarge { size: k, bound: 8 });
    }
    let names: Vec<&str> = elements.iter().map(|s| s.as_ref()).collect();
    let idx = |s: &str| {
        names
            .iter()
            .position(|&x| x == s)
            .ok_or_else(|| Error::UnknownElement(s.to_owned()))
    };
    if table.len() != k || table.iter().any(|r| r.len() != k) {
        return Err(Error::TableShape {
            expected: k * k,
            found: table.iter().map(Vec::len).sum(),
        });
    }
    let mut sg = vec![0usize; k * k];
    for (i, row) in table.iter().enumerate() {
        for (j, s) in row.iter().enumerate() {
            sg[i * k + j] = idx(s.as_ref())?;
        }
    }
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                if sg[sg[a * k + b] * k + c] != sg[a * k + sg[b * k + c]] {
                    return Err(Error::NotAssociative {
                        a: names[a].to_owned(),
                        b: names[b].to_owned(),
                        c: names[c].to_owned(),
                    });
                }
            }
        }
    }
    let n = 1usize << k;
    let set_names: Vec<String> = (0..n)
        .map(|mask| {
            if mask == 0 {
                return "∅".to_owned();
            }
            let members: Vec<&str> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| names[i]).collect();
            format!("{{{}}}", members.join(","))
        })
        .collect();
    let mut leq = vec![false; n * n];
    for x in 0..n {
        for y in 0..n {
            leq[x * n + y] = x & y == x;
        }
    }
    let lattice = FiniteSupLattice::from_relation(set_names, leq)?;
    let mut mul = vec![0; n * n];
    for x in 0..n {
        for y in 0..n {
            let mut prod = 0;
            for i in (0..k).filter(|i| x >> i & 1 == 1) {
                for j in (0..k).filter(|j| y >> j & 1 == 1) {
                    prod |= 1 << sg[i * k + j];
                }
            }
            mul[x * n + y] = prod;
        }
    }
    Quantale::new(lattice, mul, None)
}

/// Checks that `f` preserves joins, bottom and products.
pub fn check_quantale_hom(source: &Quantale, target: &Quantale, f: &[Elem]) -> Result<()> {
    crate::lattice::check_join_preserving(source.lattice(), target.lattice(), f)?;
    for a in source.elements() {
        for b in source.elements() {
            if f[source.mul(a, b)] != target.mul(f[a], f[b]) {
                return Err(Error::LawViolation {
                    law: "product preservation",
                    witness: format!("f({}·{}) != f({})·f({})", source.name(a), source.name(b), source.name(a), source.name(b)),
                });
            }
        }
    }
    Ok(())
}

fn fresh_name(l: &FiniteSupLattice, base: &str) -> String {
    let mut name = base.to_owned();
    while l.elem(&name).is_ok() {
        name.push('\'');
    }
    name
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::chain;

    fn b2() -> Quantale {
        Quantale::meet_quantale(chain(&["⊥", "⊤"])).unwrap()
    }

    fn l3() -> Quantale {
        Quantale::from_rows(
            chain(&["0", "h", "1"]),
            &[vec!["0", "0", "0"], vec!["0", "0", "h"], vec!["0", "h", "1"]],
            Some("1"),
        )
        .unwrap()
    }

    fn z0() -> Quantale {
        Quantale::from_rows(chain(&["⊥", "⊤"]), &[vec!["⊥", "⊥"], vec!["⊥", "⊥"]], None).unwrap()
    }

    fn ps2() -> Quantale {
        powerset_quantale(&["p", "q"], &[vec!["p", "p"], vec!["q", "q"]]).unwrap()
    }

    #[test]
    fn b2_flags() {
        assert_eq!(
            b2().classify(),
            Classification {
                unital: true,
                commutative: true,
                integral: true,
                frame: true
            }
        );
    }

    #[test]
    fn l3_flags() {
        let f = l3().classify();
        assert!(f.unital && f.commutative && f.integral && !f.frame);
    }

    #[test]
    fn m3_meet_is_not_distributive() {
        let m3 = FiniteSupLattice::validate(
            &["⊥", "a", "b", "c", "⊤"],
            &[("⊥", "a"), ("⊥", "b"), ("⊥", "c"), ("a", "⊤"), ("b", "⊤"), ("c", "⊤")],
        )
        .unwrap();
        assert!(matches!(
            Quantale::meet_quantale(m3),
            Err(Error::NotDistributive { .. })
        ));
    }

    #[test]
    fn residual_examples() {
        let q = b2();
        let (top_under_bot, _) = q.residuals("⊤", "⊥").unwrap();
        assert_eq!(q.name(top_under_bot), "⊥");
        let q = l3();
        let (h_under_0, _) = q.residuals("h", "0").unwrap();
        assert_eq!(q.name(h_under_0), "h");
        for b in q.elements() {
            assert_eq!(q.left_residual(q.bottom(), b), q.top());
        }
        assert_eq!(q.residuals("x", "0"), Err(Error::UnknownElement("x".into())));
    }

    #[test]
    fn ps2_is_neither_unital_nor_commutative() {
        let q = ps2();
        let f = q.classify();
        assert!(!f.unital && !f.commutative);
        let p = q.elem("{p}").unwrap();
        let pq = q.elem("{p,q}").unwrap();
        let qq = q.elem("{q}").unwrap();
        assert_eq!(q.mul(p, qq), p);
        assert_eq!(q.mul(pq, p), pq);
        for y in q.elements() {
            assert_eq!(q.mul(y, q.bottom()), q.bottom());
        }
        assert!(q.sided_elements(Sidedness::Right).contains(&p));
        assert!(!q.sided_elements(Sidedness::Left).contains(&p));
    }

    #[test]
    fn non_associative_semigroup_is_rejected() {
        // (y·x)·x = y but y·(x·x) = x
        let err = powerset_quantale(&["x", "y"], &[vec!["y", "x"], vec!["x", "x"]]).unwrap_err();
        assert!(matches!(err, Error::NotAssociative { .. }));
    }

    #[test]
    fn z0_unitalization() {
        let u = unitalize(&z0()).unwrap();
        let q = &u.quantale;
        assert_eq!(q.len(), 4);
        let names: Vec<&str> = q.elements().map(|e| q.name(e)).collect();
        assert_eq!(names, vec!["⊥", "e", "⊤", "⊤∨e"]);
        let e = q.elem("e").unwrap();
        let top = q.elem("⊤").unwrap();
        assert_eq!(q.mul(e, e), e);
        assert_eq!(q.mul(top, top), q.elem("⊥").unwrap());
        assert_eq!(q.mul(e, top), top);
        assert_eq!(q.unit(), Some(e));
    }

    #[test]
    fn id_subquantale_examples() {
        let s = id_subquantale(&l3()).unwrap();
        assert!(s.equals_whole);
        let s = id_subquantale(&ps2()).unwrap();
        let q = ps2();
        let names: Vec<&str> = s.elements.iter().map(|&e| q.name(e)).collect();
        assert_eq!(names, vec!["∅", "{p,q}"]);
        assert!(!s.equals_whole);
        assert!(id_subquantale(&b2()).unwrap().equals_whole);
    }

    #[test]
    fn z0_two_sided_predicates_disagree_at_top() {
        let q = z0();
        assert_eq!(q.sided_elements(Sidedness::Two), vec![0, 1]);
        assert_eq!(q.strict_two_sided_elements(), vec![0]);
        assert_eq!(q.two_sided_discrepancies(), vec![1]);
        assert!(l3().two_sided_discrepancies().is_empty());
    }
}
