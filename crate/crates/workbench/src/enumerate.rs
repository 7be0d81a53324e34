//! Enumeration of all quantales on small lattices, up to isomorphism.
//!
//! Lattices are generated from partial orders whose labelling is a linear
//! extension. Products are chosen freely on pairs of join-irreducibles and
//! extended by `a·b = ⋁{x·y | x ≤ a, y ≤ b}`; tables failing validation are
//! dropped, the unit is searched, and isomorphic copies are removed by
//! taking the least table under lattice automorphisms.

use std::collections::BTreeSet;

use serde::Serialize;

use quantale::congruence::{enumerate_congruences, simple_quotient_congruences, Congruence};
use quantale::iso::{find_bijection, order_consistent};
use quantale::lattice::Radix;
use quantale::quantale::Classification;
use quantale::{Elem, Error, FiniteSupLattice, Quantale, Result};

/// Number of quantales on lattices with at most four elements, up to
/// isomorphism, as produced by [`enumerate_quantales`].
pub const FROZEN_COUNT_UP_TO_FOUR: usize = 144;

/// Default cap on the number of product assignments tried.
pub const DEFAULT_ASSIGNMENT_BUDGET: u128 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Flags {
    #[serde(flatten)]
    pub classification: Classification,
    pub simple: bool,
    pub semisimple: bool,
}

#[derive(Clone, Debug)]
pub struct EnumeratedQuantale {
    /// Index into [`Inventory::lattices`].
    pub lattice: usize,
    pub quantale: Quantale,
    pub flags: Flags,
}

#[derive(Clone, Debug)]
pub struct Inventory {
    pub lattices: Vec<FiniteSupLattice>,
    pub quantales: Vec<EnumeratedQuantale>,
    pub assignments_tried: u128,
}

fn element_names(n: usize) -> Vec<String> {
    match n {
        0 => vec![],
        1 => vec!["⊥".into()],
        _ => std::iter::once("⊥".to_owned())
            .chain((0..n - 2).map(|i| char::from(b'a' + i as u8).to_string()))
            .chain(std::iter::once("⊤".to_owned()))
            .collect(),
    }
}

/// Order-preserving bijections of `l` onto itself.
pub fn automorphisms(l: &FiniteSupLattice) -> Vec<Vec<Elem>> {
    let n = l.len();
    let mut out = Vec::new();
    let mut perm: Vec<Elem> = (0..n).collect();
    permutations(&mut perm, 0, &mut |p| {
        if l.elements().all(|a| l.elements().all(|b| l.leq(a, b) == l.leq(p[a], p[b]))) {
            out.push(p.to_vec());
        }
    });
    out.sort();
    out
}

fn permutations(p: &mut Vec<Elem>, k: usize, visit: &mut impl FnMut(&[Elem])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, visit);
        p.swap(k, i);
    }
}

fn lattices_isomorphic(a: &FiniteSupLattice, b: &FiniteSupLattice) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let candidates = vec![(0..b.len()).collect::<Vec<_>>(); a.len()];
    find_bijection(&candidates, |partial, i| order_consistent(a, b, partial, i)).is_some()
}

/// All lattices with exactly `n` elements, one per isomorphism class.
pub fn lattices_of_size(n: usize) -> Vec<FiniteSupLattice> {
    if n == 0 {
        return vec![];
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut found: Vec<FiniteSupLattice> = Vec::new();
    for mask in 0u64..1 << pairs.len() {
        let mut leq = vec![false; n * n];
        for (bit, &(i, j)) in pairs.iter().enumerate() {
            leq[i * n + j] = mask >> bit & 1 == 1;
        }
        let closed = (0..n).all(|i| {
            (0..n).all(|j| (0..n).all(|k| !(leq[i * n + j] && leq[j * n + k]) || leq[i * n + k]))
        });
        if !closed {
            continue;
        }
        let Ok(l) = FiniteSupLattice::from_relation(element_names(n), leq) else {
            continue;
        };
        if !found.iter().any(|f| lattices_isomorphic(f, &l)) {
            found.push(l);
        }
    }
    found
}

/// `e` with `e·a = a = a·e` for all `a`.
fn find_unit(n: usize, mul: &[Elem]) -> Option<Elem> {
    (0..n).find(|&e| (0..n).all(|a| mul[e * n + a] == a && mul[a * n + e] == a))
}

/// Least relabelling of `mul` under the given automorphisms.
fn canonical(n: usize, mul: &[Elem], autos: &[Vec<Elem>]) -> Vec<Elem> {
    autos
        .iter()
        .map(|p| {
            let mut t = vec![0; n * n];
            for a in 0..n {
                for b in 0..n {
                    t[p[a] * n + p[b]] = p[mul[a * n + b]];
                }
            }
            t
        })
        .min()
        .expect("identity automorphism")
}

/// Distinct quantale tables on `l` up to automorphism, in increasing order.
fn quantale_tables(l: &FiniteSupLattice) -> (BTreeSet<Vec<Elem>>, u128) {
    let n = l.len();
    let joins = l.join_irreducibles();
    let below: Vec<Vec<usize>> = l
        .elements()
        .map(|a| (0..joins.len()).filter(|&x| l.leq(joins[x], a)).collect())
        .collect();
    let autos = automorphisms(l);
    let radix = Radix::uniform(n, joins.len() * joins.len());
    let mut tables = BTreeSet::new();
    let j = joins.len();
    for code in 0..radix.total() {
        let assign = radix.decode(code);
        let assign = &assign;
        let mut mul = Vec::with_capacity(n * n);
        for a in l.elements() {
            for b in l.elements() {
                mul.push(l.join_all(
                    below[a]
                        .iter()
                        .flat_map(|&x| below[b].iter().map(move |&y| assign[x * j + y])),
                ));
            }
        }
        if Quantale::new(l.clone(), mul.clone(), find_unit(n, &mul)).is_ok() {
            tables.insert(canonical(n, &mul, &autos));
        }
    }
    (tables, radix.total() as u128)
}

fn flags(q: &Quantale) -> Result<Flags> {
    let all: Vec<Congruence> = enumerate_congruences(q, q.len().max(1))?;
    let semisimple = simple_quotient_congruences(&all)
        .into_iter()
        .fold(Congruence::all(q.len()), |acc, t| acc.intersection(t))
        .is_identity();
    Ok(Flags {
        classification: q.classify(),
        simple: q.len() == 1 || all.len() == 2,
        semisimple,
    })
}

/// Every quantale on every lattice with at most `size_bound` elements, up to
/// isomorphism, ordered by lattice size, lattice, then product table.
pub fn enumerate_quantales(size_bound: usize, budget: u128) -> Result<Inventory> {
    let lattices: Vec<FiniteSupLattice> = (1..=size_bound).flat_map(lattices_of_size).collect();
    let needed: u128 = lattices
        .iter()
        .map(|l| {
            let j = l.join_irreducibles().len() as u32;
            (l.len() as u128).checked_pow(j * j).unwrap_or(u128::MAX)
        })
        .fold(0u128, u128::saturating_add);
    if needed > budget {
        return Err(Error::BudgetExceeded {
            what: "product assignments",
            needed,
            budget,
        });
    }
    let mut quantales = Vec::new();
    let mut tried = 0;
    for (index, l) in lattices.iter().enumerate() {
        let (tables, count) = quantale_tables(l);
        tried += count;
        for mul in tables {
            let unit = find_unit(l.len(), &mul);
            let quantale = Quantale::new(l.clone(), mul, unit)?;
            let flags = flags(&quantale)?;
            quantales.push(EnumeratedQuantale {
                lattice: index,
                quantale,
                flags,
            });
        }
    }
    Ok(Inventory {
        lattices,
        quantales,
        assignments_tried: tried,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use quantale::iso::quantale_isomorphism;

    #[test]
    fn lattice_counts() {
        let counts: Vec<usize> = (1..=5).map(|n| lattices_of_size(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 5]);
    }

    /// Every table on the lattice, validated and compared pairwise.
    fn brute_force(l: &FiniteSupLattice) -> Vec<Quantale> {
        let n = l.len();
        let radix = Radix::uniform(n, n * n);
        let mut found: Vec<Quantale> = Vec::new();
        for code in 0..radix.total() {
            let mul = radix.decode(code);
            let unit = (0..n).find(|&e| (0..n).all(|a| mul[e * n + a] == a && mul[a * n + e] == a));
            if let Ok(q) = Quantale::new(l.clone(), mul, unit) {
                if !found.iter().any(|p| quantale_isomorphism(p, &q).is_some()) {
                    found.push(q);
                }
            }
        }
        found
    }

    #[test]
    fn agrees_with_brute_force_up_to_three() {
        let inv = enumerate_quantales(3, DEFAULT_ASSIGNMENT_BUDGET).unwrap();
        for (i, l) in inv.lattices.iter().enumerate() {
            let ours: Vec<&Quantale> = inv.quantales.iter().filter(|e| e.lattice == i).map(|e| &e.quantale).collect();
            let oracle = brute_force(l);
            assert_eq!(ours.len(), oracle.len(), "lattice of size {}", l.len());
            for q in &oracle {
                assert!(ours.iter().any(|p| quantale_isomorphism(p, q).is_some()));
            }
        }
    }

    #[test]
    fn size_one_and_two() {
        let one = enumerate_quantales(1, DEFAULT_ASSIGNMENT_BUDGET).unwrap();
        assert_eq!(one.quantales.len(), 1);
        let two = enumerate_quantales(2, DEFAULT_ASSIGNMENT_BUDGET).unwrap();
        let on_chain: Vec<&Quantale> = two.quantales.iter().filter(|e| e.lattice == 1).map(|e| &e.quantale).collect();
        let c2 = two.lattices[1].clone();
        let b2 = Quantale::meet_quantale(c2.clone()).unwrap();
        let z0 = Quantale::new(c2, vec![0; 4], None).unwrap();
        for q in [b2, z0] {
            assert!(on_chain.iter().any(|p| quantale_isomorphism(p, &q).is_some()));
        }
    }

    #[test]
    fn frozen_count_up_to_four() {
        let inv = enumerate_quantales(4, DEFAULT_ASSIGNMENT_BUDGET).unwrap();
        let per: Vec<usize> = (0..inv.lattices.len())
            .map(|i| inv.quantales.iter().filter(|e| e.lattice == i).count())
            .collect();
        assert_eq!(per, vec![1, 2, 12, 28, 101]);
        assert_eq!(inv.quantales.len(), FROZEN_COUNT_UP_TO_FOUR);
        for e in &inv.quantales {
            assert!(Quantale::new(e.quantale.lattice().clone(), e.quantale.mul_table().to_vec(), e.quantale.unit()).is_ok());
        }
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            enumerate_quantales(5, DEFAULT_ASSIGNMENT_BUDGET),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
