//! Backtracking search for structure-preserving bijections.

use crate::lattice::{Elem, FiniteSupLattice};
use crate::quantale::Quantale;

/// Searches bijections `source -> target` in lexicographic order.
///
/// `candidates[i]` lists the admissible images of source element `i`;
/// `consistent(partial, i)` is called right after `i` is assigned and must
/// check every constraint that involves `i` and already-assigned elements.
pub fn find_bijection<F>(candidates: &[Vec<Elem>], mut consistent: F) -> Option<Vec<Elem>>
where
    F: FnMut(&[Option<Elem>], Elem) -> bool,
{
    let n = candidates.len();
    let mut partial: Vec<Option<Elem>> = vec![None; n];
    let mut used = vec![false; n];
    fn go<F: FnMut(&[Option<Elem>], Elem) -> bool>(
        i: usize,
        candidates: &[Vec<Elem>],
        partial: &mut Vec<Option<Elem>>,
        used: &mut Vec<bool>,
        consistent: &mut F,
    ) -> bool {
        if i == candidates.len() {
            return true;
        }
        for &t in &candidates[i] {
            if used[t] {
                continue;
            }
            partial[i] = Some(t);
            used[t] = true;
            if consistent(partial, i) && go(i + 1, candidates, partial, used, consistent) {
                return true;
            }
            used[t] = false;
            partial[i] = None;
        }
        false
    }
    if go(0, candidates, &mut partial, &mut used, &mut consistent) {
        Some(partial.into_iter().map(|x| x.expect("complete")).collect())
    } else {
        None
    }
}

/// Candidate lists from per-element invariants: `i` may map to `t` only if
/// their signatures agree. `None` when the signature multisets differ.
pub fn candidates_by_signature<T: Ord + Clone>(source: &[T], target: &[T]) -> Option<Vec<Vec<Elem>>> {
    if source.len() != target.len() {
        return None;
    }
    let mut a = source.to_vec();
    let mut b = target.to_vec();
    a.sort();
    b.sort();
    if a != b {
        return None;
    }
    Some(
        source
            .iter()
            .map(|s| (0..target.len()).filter(|&t| &target[t] == s).collect())
            .collect(),
    )
}

/// Order isomorphism check on a newly assigned element.
pub fn order_consistent(
    source: &FiniteSupLattice,
    target: &FiniteSupLattice,
    partial: &[Option<Elem>],
    i: Elem,
) -> bool {
    let fi = partial[i].expect("assigned");
    partial.iter().enumerate().all(|(j, fj)| match fj {
        Some(fj) => {
            source.leq(i, j) == target.leq(fi, *fj) && source.leq(j, i) == target.leq(*fj, fi)
        }
        None => true,
    })
}

/// An isomorphism of quantales (order and product preserving bijection).
pub fn quantale_isomorphism(p: &Quantale, q: &Quantale) -> Option<Vec<Elem>> {
    let sig = |x: &Quantale| -> Vec<(usize, usize, bool, bool, usize)> {
        x.elements()
            .map(|a| {
                let (up, down) = x.lattice().degree(a);
                let fixed = x.elements().filter(|&b| x.mul(a, b) == b).count();
                (up, down, x.mul(a, a) == a, x.unit() == Some(a), fixed)
            })
            .collect()
    };
    let candidates = candidates_by_signature(&sig(p), &sig(q))?;
    find_bijection(&candidates, |partial, i| {
        if !order_consistent(p.lattice(), q.lattice(), partial, i) {
            return false;
        }
        for (j, fj) in partial.iter().enumerate() {
            let Some(fj) = *fj else { continue };
            for (k, fk) in partial.iter().enumerate() {
                let Some(fk) = *fk else { continue };
                let jk = p.mul(j, k);
                if j != i && k != i && jk != i {
                    continue;
                }
                if let Some(fjk) = partial[jk] {
                    if fjk != q.mul(fj, fk) {
                        return false;
                    }
                }
            }
        }
        true
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::chain;

    #[test]
    fn chain_has_only_identity_automorphism() {
        let l = chain(&["0", "1", "2"]);
        let q = Quantale::meet_quantale(l).unwrap();
        assert_eq!(quantale_isomorphism(&q, &q), Some(vec![0, 1, 2]));
    }

    #[test]
    fn relabelled_quantale_is_isomorphic() {
        let q = Quantale::from_rows(
            chain(&["0", "h", "1"]),
            &[vec!["0", "0", "0"], vec!["0", "0", "h"], vec!["0", "h", "1"]],
            Some("1"),
        )
        .unwrap();
        let r = q.relabel(vec!["a".into(), "b".into(), "c".into()]).unwrap();
        assert!(quantale_isomorphism(&q, &r).is_some());
        let frame = Quantale::meet_quantale(chain(&["0", "h", "1"])).unwrap();
        assert!(quantale_isomorphism(&q, &frame).is_none());
    }
}
