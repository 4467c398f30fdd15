//! Isomorphism testing for small groups by generator-image search.

use std::collections::VecDeque;

use super::abstract_group::AbstractGroup;
use crate::error::{Error, Result};

pub const ISO_CAP: usize = 64;

fn invariants(g: &AbstractGroup) -> (usize, Vec<usize>, usize, Vec<usize>, usize) {
    let mut orders = g.element_orders();
    orders.sort_unstable();
    let mut class_sizes: Vec<usize> = g.conjugacy_classes().iter().map(Vec::len).collect();
    class_sizes.sort_unstable();
    (
        g.order(),
        orders,
        g.center().len(),
        class_sizes,
        g.derived_subgroup().len(),
    )
}

/// Extends the partial map defined by generator images over the subgroup
/// they generate; `None` on any conflict with the homomorphism property or
/// with injectivity.
fn extend(a: &AbstractGroup, b: &AbstractGroup, gens: &[usize], imgs: &[usize]) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; a.order()];
    let mut used = vec![false; b.order()];
    map[a.identity()] = b.identity();
    used[b.identity()] = true;
    let mut queue = VecDeque::from([a.identity()]);
    while let Some(x) = queue.pop_front() {
        for (&g, &h) in gens.iter().zip(imgs) {
            let y = a.mul(x, g);
            let fy = b.mul(map[x], h);
            if map[y] == usize::MAX {
                if used[fy] {
                    return None;
                }
                map[y] = fy;
                used[fy] = true;
                queue.push_back(y);
            } else if map[y] != fy {
                return None;
            }
        }
    }
    Some(map)
}

/// An isomorphism `a → b` as an element map, if one exists.
pub fn find_isomorphism(a: &AbstractGroup, b: &AbstractGroup) -> Result<Option<Vec<usize>>> {
    for g in [a, b] {
        if g.order() > ISO_CAP {
            return Err(Error::GroupCap {
                what: "isomorphism search",
                order: g.order(),
                cap: ISO_CAP,
            });
        }
    }
    if invariants(a) != invariants(b) {
        return Ok(None);
    }
    let gens = a.generators();
    let (oa, ob) = (a.element_orders(), b.element_orders());
    let class_size = |g: &AbstractGroup| -> Vec<usize> {
        let mut out = vec![0; g.order()];
        for c in g.conjugacy_classes() {
            for &x in &c {
                out[x] = c.len();
            }
        }
        out
    };
    let (ca, cb) = (class_size(a), class_size(b));
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| {
            (0..b.order())
                .filter(|&h| ob[h] == oa[g] && cb[h] == ca[g])
                .collect()
        })
        .collect();

    fn search(
        a: &AbstractGroup,
        b: &AbstractGroup,
        gens: &[usize],
        candidates: &[Vec<usize>],
        imgs: &mut Vec<usize>,
    ) -> Option<Vec<usize>> {
        let depth = imgs.len();
        if depth == gens.len() {
            return extend(a, b, gens, imgs);
        }
        for &h in &candidates[depth] {
            imgs.push(h);
            if extend(a, b, &gens[..=depth], imgs).is_some() {
                if let Some(m) = search(a, b, gens, candidates, imgs) {
                    return Some(m);
                }
            }
            imgs.pop();
        }
        None
    }

    let map = search(a, b, &gens, &candidates, &mut Vec::new());
    Ok(map.filter(|m| m.iter().all(|&x| x != usize::MAX)))
}

pub fn isomorphic(a: &AbstractGroup, b: &AbstractGroup) -> Result<bool> {
    Ok(find_isomorphism(a, b)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::named;

    #[test]
    fn basic_cases() {
        let d8 = named::dihedral(8);
        assert!(isomorphic(&d8, &d8).unwrap());
        assert!(!isomorphic(&named::cyclic(4), &named::klein()).unwrap());
        assert!(!isomorphic(&d8, &named::quaternion()).unwrap());
        let z2xz4 = named::cyclic(2).direct_product(&named::cyclic(4)).unwrap();
        let z4xz2 = named::cyclic(4).direct_product(&named::cyclic(2)).unwrap();
        assert!(isomorphic(&z2xz4, &z4xz2).unwrap());
        assert!(isomorphic(&named::cyclic(6), &named::cyclic(2).direct_product(&named::cyclic(3)).unwrap()).unwrap());
        assert!(find_isomorphism(&named::cyclic(128), &named::cyclic(128)).is_err());
    }

    #[test]
    fn map_is_homomorphism() {
        let a = named::z2xd8();
        let b = named::dihedral(8).direct_product(&named::cyclic(2)).unwrap();
        let m = find_isomorphism(&a, &b).unwrap().unwrap();
        for x in 0..16 {
            for y in 0..16 {
                assert_eq!(m[a.mul(x, y)], b.mul(m[x], m[y]));
            }
        }
    }
}
