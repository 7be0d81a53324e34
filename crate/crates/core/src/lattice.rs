//! Finite sup-lattices with precomputed join and meet tables.
//!
//! Elements are opaque names; internally every element is an index into
//! the carrier (an [`Elem`]). All structure is held in explicit tables so
//! that every law can be checked by enumeration.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Index of an element in a carrier.
pub type Elem = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSupLattice {
    names: Vec<String>,
    index: HashMap<String, Elem>,
    leq: Vec<bool>,
    join: Vec<Elem>,
    meet: Vec<Elem>,
    bottom: Elem,
    top: Elem,
}

impl FiniteSupLattice {
    /// Builds a lattice from element names and order pairs `(a, b)` meaning
    /// `a <= b`. The pairs may be covers or any generating relation; the
    /// reflexive-transitive closure is taken.
    pub fn validate<S: AsRef<str>>(elements: &[S], pairs: &[(S, S)]) -> Result<Self> {
        let names: Vec<String> = elements.iter().map(|s| s.as_ref().to_owned()).collect();
        let index = name_index(&names)?;
        let n = names.len();
        let mut leq = vec![false; n * n];
        for (a, b) in pairs {
            let a = lookup(&index, a.as_ref())?;
            let b = lookup(&index, b.as_ref())?;
            leq[a * n + b] = true;
        }
        Self::from_relation(names, leq)
    }

    /// Builds a lattice from a relation matrix (`leq[a * n + b]`), closing it
    /// reflexively and transitively.
    pub fn from_relation(names: Vec<String>, mut leq: Vec<bool>) -> Result<Self> {
        let index = name_index(&names)?;
        let n = names.len();
        if leq.len() != n * n {
            return Err(Error::TableShape {
                expected: n * n,
                found: leq.len(),
            });
        }
        for a in 0..n {
            leq[a * n + a] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if leq[a * n + b] && leq[b * n + a] {
                    return Err(Error::NotAPartialOrder {
                        a: names[a].clone(),
                        b: names[b].clone(),
                    });
                }
            }
        }
        let bottom = (0..n)
            .find(|&b| (0..n).all(|x| leq[b * n + x]))
            .ok_or(Error::NoBottom)?;
        let mut join = vec![0; n * n];
        for a in 0..n {
            for b in a..n {
                let upper: Vec<Elem> = (0..n)
                    .filter(|&u| leq[a * n + u] && leq[b * n + u])
                    .collect();
                let least = upper
                    .iter()
                    .copied()
                    .find(|&u| upper.iter().all(|&w| leq[u * n + w]))
                    .ok_or_else(|| Error::NoLeastUpperBound {
                        a: names[a].clone(),
                        b: names[b].clone(),
                    })?;
                join[a * n + b] = least;
                join[b * n + a] = least;
            }
        }
        let top = (0..n).fold(bottom, |acc, x| join[acc * n + x]);
        // With a bottom and all binary joins every pair has a meet: the join
        // of its (non-empty) set of lower bounds.
        let mut meet = vec![0; n * n];
        for a in 0..n {
            for b in a..n {
                let m = (0..n)
                    .filter(|&l| leq[l * n + a] && leq[l * n + b])
                    .fold(bottom, |acc, x| join[acc * n + x]);
                meet[a * n + b] = m;
                meet[b * n + a] = m;
            }
        }
        Ok(Self {
            names,
            index,
            leq,
            join,
            meet,
            bottom,
            top,
        })
    }

    /// Componentwise product of lattices. Element `i` of the product is the
    /// tuple obtained from [`Radix::decode`] with the factor sizes (first
    /// factor most significant).
    pub fn product(factors: &[&FiniteSupLattice]) -> Self {
        let radix = Radix::new(factors.iter().map(|f| f.len()).collect());
        let n = radix.total();
        let tuples: Vec<Vec<Elem>> = (0..n).map(|i| radix.decode(i)).collect();
        let names: Vec<String> = tuples
            .iter()
            .map(|t| {
                let parts: Vec<&str> = t
                    .iter()
                    .zip(factors)
                    .map(|(&e, f)| f.name(e))
                    .collect();
                format!("({})", parts.join(","))
            })
            .collect();
        let mut leq = vec![false; n * n];
        let mut join = vec![0; n * n];
        let mut meet = vec![0; n * n];
        let mut buf = vec![0; factors.len()];
        for (i, ti) in tuples.iter().enumerate() {
            for (j, tj) in tuples.iter().enumerate() {
                leq[i * n + j] = factors
                    .iter()
                    .enumerate()
                    .all(|(k, f)| f.leq(ti[k], tj[k]));
                for (k, f) in factors.iter().enumerate() {
                    buf[k] = f.join(ti[k], tj[k]);
                }
                join[i * n + j] = radix.encode(&buf);
                for (k, f) in factors.iter().enumerate() {
                    buf[k] = f.meet(ti[k], tj[k]);
                }
                meet[i * n + j] = radix.encode(&buf);
            }
        }
        let bottom = radix.encode(&factors.iter().map(|f| f.bottom()).collect::<Vec<_>>());
        let top = radix.encode(&factors.iter().map(|f| f.top()).collect::<Vec<_>>());
        let index = names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Self {
            names,
            index,
            leq,
            join,
            meet,
            bottom,
            top,
        }
    }

    /// The sub-lattice on a subset that is closed under binary joins and
    /// contains bottom. Meets are recomputed inside the subset. Returns the
    /// lattice together with the embedding into `self`.
    pub fn join_closed_subset(&self, subset: &[Elem]) -> Result<(Self, Vec<Elem>)> {
        let mut elems = subset.to_vec();
        elems.sort_unstable();
        elems.dedup();
        let pos: HashMap<Elem, usize> = elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        if !pos.contains_key(&self.bottom) {
            return Err(Error::ClosureViolation(format!(
                "bottom `{}` missing",
                self.name(self.bottom)
            )));
        }
        for &a in &elems {
            for &b in &elems {
                if !pos.contains_key(&self.join(a, b)) {
                    return Err(Error::ClosureViolation(format!(
                        "{} v {} leaves the subset",
                        self.name(a),
                        self.name(b)
                    )));
                }
            }
        }
        Ok((self.induced(&elems), elems))
    }

    /// The lattice induced on a subset by the restricted order, which must
    /// itself be a lattice with a bottom (e.g. a meet-closed subset
    /// containing top, or a join-closed subset containing bottom).
    pub fn induced(&self, elems: &[Elem]) -> Self {
        let names: Vec<String> = elems.iter().map(|&e| self.names[e].clone()).collect();
        let m = elems.len();
        let mut leq = vec![false; m * m];
        for (i, &a) in elems.iter().enumerate() {
            for (j, &b) in elems.iter().enumerate() {
                leq[i * m + j] = self.leq(a, b);
            }
        }
        Self::from_relation(names, leq).expect("induced order on a lattice subset")
    }

    /// The order dual: same names, reversed order, joins and meets swapped.
    pub fn dual(&self) -> Self {
        let n = self.len();
        let mut leq = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                leq[a * n + b] = self.leq(b, a);
            }
        }
        Self {
            names: self.names.clone(),
            index: self.index.clone(),
            leq,
            join: self.meet.clone(),
            meet: self.join.clone(),
            bottom: self.top,
            top: self.bottom,
        }
    }

    /// Same order, new element names.
    pub fn relabel(&self, names: Vec<String>) -> Result<Self> {
        assert_eq!(names.len(), self.len());
        let index = name_index(&names)?;
        Ok(Self {
            names,
            index,
            ..self.clone()
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, e: Elem) -> &str {
        &self.names[e]
    }

    pub fn elem(&self, name: &str) -> Result<Elem> {
        lookup(&self.index, name)
    }

    pub fn bottom(&self) -> Elem {
        self.bottom
    }

    pub fn top(&self) -> Elem {
        self.top
    }

    #[inline]
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.leq[a * self.len() + b]
    }

    #[inline]
    pub fn lt(&self, a: Elem, b: Elem) -> bool {
        a != b && self.leq(a, b)
    }

    #[inline]
    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.join[a * self.len() + b]
    }

    #[inline]
    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.meet[a * self.len() + b]
    }

    /// Join of an arbitrary family; bottom for the empty family.
    pub fn join_all<I: IntoIterator<Item = Elem>>(&self, items: I) -> Elem {
        items
            .into_iter()
            .fold(self.bottom, |acc, x| self.join(acc, x))
    }

    /// Meet of an arbitrary family; top for the empty family.
    pub fn meet_all<I: IntoIterator<Item = Elem>>(&self, items: I) -> Elem {
        items.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    /// Join of a set of named elements.
    pub fn join_of<S: AsRef<str>>(&self, names: &[S]) -> Result<Elem> {
        let elems = names
            .iter()
            .map(|s| self.elem(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.join_all(elems))
    }

    /// Meet of a set of named elements.
    pub fn meet_of<S: AsRef<str>>(&self, names: &[S]) -> Result<Elem> {
        let elems = names
            .iter()
            .map(|s| self.elem(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.meet_all(elems))
    }

    /// The closed interval `[lo, hi]`.
    pub fn interval(&self, lo: Elem, hi: Elem) -> Vec<Elem> {
        self.elements()
            .filter(|&x| self.leq(lo, x) && self.leq(x, hi))
            .collect()
    }

    /// `true` when `x` is not bottom and not the join of the elements strictly
    /// below it.
    pub fn is_join_irreducible(&self, x: Elem) -> bool {
        x != self.bottom && self.join_all(self.elements().filter(|&y| self.lt(y, x))) != x
    }

    pub fn join_irreducibles(&self) -> Vec<Elem> {
        self.elements()
            .filter(|&x| self.is_join_irreducible(x))
            .collect()
    }

    /// Pairs `(a, b)` with `b` covering `a`.
    pub fn covers(&self) -> Vec<(Elem, Elem)> {
        let mut out = Vec::new();
        for a in self.elements() {
            for b in self.elements() {
                if self.lt(a, b) && !self.elements().any(|c| self.lt(a, c) && self.lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Number of elements strictly above and strictly below each element.
    pub fn degree(&self, x: Elem) -> (usize, usize) {
        let up = self.elements().filter(|&y| self.lt(x, y)).count();
        let down = self.elements().filter(|&y| self.lt(y, x)).count();
        (up, down)
    }
}

/// A map between finite sup-lattices that preserves joins, paired with its
/// residuum (upper adjoint).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResiduatedMap {
    pub forward: Vec<Elem>,
    pub residuum: Vec<Elem>,
}

impl ResiduatedMap {
    /// `forward(x) <= y  <=>  x <= residuum(y)` at every pair.
    pub fn adjunction_holds(&self, source: &FiniteSupLattice, target: &FiniteSupLattice) -> bool {
        source.elements().all(|x| {
            target
                .elements()
                .all(|y| target.leq(self.forward[x], y) == source.leq(x, self.residuum[y]))
        })
    }
}

/// Checks that `f` preserves bottom and binary joins.
pub fn check_join_preserving(
    source: &FiniteSupLattice,
    target: &FiniteSupLattice,
    f: &[Elem],
) -> Result<()> {
    if f.len() != source.len() {
        return Err(Error::TableShape {
            expected: source.len(),
            found: f.len(),
        });
    }
    if f[source.bottom()] != target.bottom() {
        return Err(Error::BottomNotPreserved);
    }
    for a in source.elements() {
        for b in a + 1..source.len() {
            if f[source.join(a, b)] != target.join(f[a], f[b]) {
                return Err(Error::NotJoinPreserving {
                    a: source.name(a).to_owned(),
                    b: source.name(b).to_owned(),
                });
            }
        }
    }
    Ok(())
}

/// Residuum of a join-preserving map: `y ↦ ⋁{x | f(x) <= y}`.
pub fn residuum_of_map(
    source: &FiniteSupLattice,
    target: &FiniteSupLattice,
    f: &[Elem],
) -> Result<ResiduatedMap> {
    check_join_preserving(source, target, f)?;
    let residuum = target
        .elements()
        .map(|y| source.join_all(source.elements().filter(|&x| target.leq(f[x], y))))
        .collect();
    Ok(ResiduatedMap {
        forward: f.to_vec(),
        residuum,
    })
}

/// Mixed-radix encoding of tuples, first coordinate most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Radix {
    sizes: Vec<usize>,
}

impl Radix {
    pub fn new(sizes: Vec<usize>) -> Self {
        Self { sizes }
    }

    pub fn uniform(base: usize, len: usize) -> Self {
        Self::new(vec![base; len])
    }

    pub fn total(&self) -> usize {
        self.sizes.iter().product()
    }

    pub fn arity(&self) -> usize {
        self.sizes.len()
    }

    pub fn encode(&self, digits: &[Elem]) -> Elem {
        debug_assert_eq!(digits.len(), self.sizes.len());
        digits
            .iter()
            .zip(&self.sizes)
            .fold(0, |acc, (&d, &s)| acc * s + d)
    }

    pub fn decode(&self, mut i: Elem) -> Vec<Elem> {
        let mut out = vec![0; self.sizes.len()];
        for k in (0..self.sizes.len()).rev() {
            out[k] = i % self.sizes[k];
            i /= self.sizes[k];
        }
        out
    }
}

fn name_index(names: &[String]) -> Result<HashMap<String, Elem>> {
    if names.is_empty() {
        return Err(Error::EmptyCarrier);
    }
    let mut index = HashMap::with_capacity(names.len());
    for (i, s) in names.iter().enumerate() {
        if index.insert(s.clone(), i).is_some() {
            return Err(Error::DuplicateElement(s.clone()));
        }
    }
    Ok(index)
}

fn lookup(index: &HashMap<String, Elem>, name: &str) -> Result<Elem> {
    index
        .get(name)
        .copied()
        .ok_or_else(|| Error::UnknownElement(name.to_owned()))
}

/// The chain `names[0] < names[1] < ...`.
pub fn chain<S: AsRef<str>>(names: &[S]) -> FiniteSupLattice {
    let pairs: Vec<(&str, &str)> = names
        .windows(2)
        .map(|w| (w[0].as_ref(), w[1].as_ref()))
        .collect();
    let elems: Vec<&str> = names.iter().map(|s| s.as_ref()).collect();
    FiniteSupLattice::validate(&elems, &pairs).expect("chain")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> FiniteSupLattice {
        FiniteSupLattice::validate(
            &["⊥", "a", "b", "⊤"],
            &[("⊥", "a"), ("⊥", "b"), ("a", "⊤"), ("b", "⊤")],
        )
        .unwrap()
    }

    #[test]
    fn two_chain_is_valid() {
        let l = chain(&["⊥", "⊤"]);
        assert_eq!(l.name(l.bottom()), "⊥");
        assert_eq!(l.name(l.top()), "⊤");
    }

    #[test]
    fn diamond_joins_and_meets() {
        let l = diamond();
        let (a, b) = (l.elem("a").unwrap(), l.elem("b").unwrap());
        assert_eq!(l.name(l.join(a, b)), "⊤");
        assert_eq!(l.name(l.meet(a, b)), "⊥");
    }

    #[test]
    fn missing_upper_bound_is_reported() {
        let err = FiniteSupLattice::validate(&["⊥", "a", "b"], &[("⊥", "a"), ("⊥", "b")]).unwrap_err();
        assert_eq!(
            err,
            Error::NoLeastUpperBound {
                a: "a".into(),
                b: "b".into()
            }
        );
    }

    #[test]
    fn cycle_is_not_a_partial_order() {
        let err = FiniteSupLattice::validate(&["x", "y"], &[("x", "y"), ("y", "x")]).unwrap_err();
        assert!(matches!(err, Error::NotAPartialOrder { .. }));
    }

    #[test]
    fn empty_join_and_meet() {
        let l = chain(&["⊥", "⊤"]);
        assert_eq!(l.join_of::<&str>(&[]).unwrap(), l.bottom());
        assert_eq!(l.meet_of::<&str>(&[]).unwrap(), l.top());
        assert_eq!(diamond().join_of(&["a", "b"]).map(|e| diamond().name(e).to_owned()).unwrap(), "⊤");
        let l3 = chain(&["0", "h", "1"]);
        assert_eq!(l3.name(l3.meet_of(&["h", "1"]).unwrap()), "h");
        assert_eq!(l3.join_of(&["q"]), Err(Error::UnknownElement("q".into())));
    }

    #[test]
    fn residuum_examples() {
        let b2 = chain(&["⊥", "⊤"]);
        let id = residuum_of_map(&b2, &b2, &[0, 1]).unwrap();
        assert_eq!(id.residuum, vec![0, 1]);

        let l3 = chain(&["0", "h", "1"]);
        let constant = residuum_of_map(&l3, &l3, &[0, 0, 0]).unwrap();
        assert_eq!(constant.residuum, vec![2, 2, 2]);

        // x ↦ x·h on the three-element chain with h·h = 0.
        let f = residuum_of_map(&l3, &l3, &[0, 0, 1]).unwrap();
        assert_eq!(f.residuum, vec![1, 2, 2]);
        assert!(f.adjunction_holds(&l3, &l3));
    }

    #[test]
    fn non_monotone_map_is_rejected() {
        let l3 = chain(&["0", "h", "1"]);
        assert!(matches!(
            residuum_of_map(&l3, &l3, &[0, 2, 1]),
            Err(Error::NotJoinPreserving { .. })
        ));
    }

    #[test]
    fn dual_is_an_involution() {
        let l3 = chain(&["0", "h", "1"]);
        let d = l3.dual();
        assert_eq!(d.name(d.top()), "0");
        assert_eq!(d.name(d.bottom()), "1");
        assert_eq!(d.dual(), l3);
    }

    #[test]
    fn product_matches_validated_order() {
        let l3 = chain(&["0", "h", "1"]);
        let p = FiniteSupLattice::product(&[&l3, &diamond()]);
        let pairs: Vec<(String, String)> = p
            .covers()
            .into_iter()
            .map(|(a, b)| (p.name(a).to_owned(), p.name(b).to_owned()))
            .collect();
        let again = FiniteSupLattice::validate(p.names(), &pairs).unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn join_irreducibles_of_diamond() {
        let l = diamond();
        assert_eq!(l.join_irreducibles(), vec![1, 2]);
    }
}
