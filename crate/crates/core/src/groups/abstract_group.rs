//! Finite groups given by a multiplication table.

use std::collections::{BTreeSet, VecDeque};

use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Largest group for which a full multiplication table is materialised.
pub const TABLE_CAP: usize = 8192;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractGroup {
    order: usize,
    table: Vec<u32>,
    identity: usize,
    inverse: Vec<u32>,
}

/// A quotient `G/N` with its coset bookkeeping.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: AbstractGroup,
    /// Coset index of every element of the parent group.
    pub coset_of: Vec<usize>,
    /// Lowest-index representative of every coset; `reps[identity] = identity`.
    pub reps: Vec<usize>,
}

impl AbstractGroup {
    /// Validates the group axioms (associativity on all triples up to order
    /// 64, on a deterministic sample beyond that).
    pub fn from_table(table: Vec<Vec<usize>>, identity: usize) -> Result<Self> {
        let n = table.len();
        if n == 0 || identity >= n || table.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument("table must be a non-empty square grid".into()));
        }
        if table.iter().flatten().any(|&x| x >= n) {
            return Err(Error::InvalidArgument("table entry out of range".into()));
        }
        let flat: Vec<u32> = table.iter().flatten().map(|&x| x as u32).collect();
        Self::from_flat(n, flat, identity)
    }

    pub(crate) fn from_flat(n: usize, table: Vec<u32>, identity: usize) -> Result<Self> {
        if n > TABLE_CAP {
            return Err(Error::GroupCap {
                what: "multiplication table",
                order: n,
                cap: TABLE_CAP,
            });
        }
        let at = |a: usize, b: usize| table[a * n + b] as usize;
        for a in 0..n {
            if at(identity, a) != a || at(a, identity) != a {
                return Err(Error::InvalidArgument(format!("{identity} is not an identity")));
            }
        }
        let mut inverse = vec![0u32; n];
        for a in 0..n {
            let Some(b) = (0..n).find(|&b| at(a, b) == identity) else {
                return Err(Error::InvalidArgument(format!("element {a} has no inverse")));
            };
            if at(b, a) != identity {
                return Err(Error::InvalidArgument(format!("element {a} has no two-sided inverse")));
            }
            inverse[a] = b as u32;
        }
        let step = if n <= 64 { 1 } else { n / 61 + 1 };
        for a in (0..n).step_by(step) {
            for b in (0..n).step_by(step) {
                for c in (0..n).step_by(step) {
                    if at(at(a, b), c) != at(a, at(b, c)) {
                        return Err(Error::InvalidArgument(format!(
                            "table is not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(AbstractGroup {
            order: n,
            table,
            identity,
            inverse,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    pub fn pow(&self, a: usize, e: usize) -> usize {
        (0..e).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    pub fn conjugate(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inv(g))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn element_orders(&self) -> Vec<usize> {
        (0..self.order).map(|a| self.element_order(a)).collect()
    }

    pub fn exponent(&self) -> usize {
        self.element_orders()
            .into_iter()
            .fold(1, |acc, o| crate::numth::lcm(acc as u64, o as u64) as usize)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.order)
            .filter(|&z| (0..self.order).all(|g| self.mul(z, g) == self.mul(g, z)))
            .collect()
    }

    pub fn is_subgroup(&self, s: &[usize]) -> bool {
        let set: BTreeSet<usize> = s.iter().copied().collect();
        !set.is_empty()
            && set.iter().all(|&x| x < self.order)
            && set.contains(&self.identity)
            && set.iter().all(|&a| set.contains(&self.inv(a)))
            && set.iter().all(|&a| set.iter().all(|&b| set.contains(&self.mul(a, b))))
    }

    fn require_subgroup(&self, s: &[usize]) -> Result<()> {
        if self.is_subgroup(s) {
            Ok(())
        } else {
            Err(Error::NotSubgroup(format!("{} indices do not form a subgroup", s.len())))
        }
    }

    /// Whether the subgroup `s` is normal.
    pub fn is_normal(&self, s: &[usize]) -> Result<bool> {
        self.require_subgroup(s)?;
        let set: BTreeSet<usize> = s.iter().copied().collect();
        Ok((0..self.order).all(|g| set.iter().all(|&h| set.contains(&self.conjugate(g, h)))))
    }

    /// Subgroup generated by `gens`, sorted by index.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order).filter(|&i| seen[i]).collect()
    }

    /// Smallest normal subgroup containing `s`.
    pub fn normal_closure(&self, s: &[usize]) -> Vec<usize> {
        let gens: BTreeSet<usize> = s
            .iter()
            .flat_map(|&h| (0..self.order).map(move |g| (g, h)))
            .map(|(g, h)| self.conjugate(g, h))
            .collect();
        let gens: Vec<usize> = gens.into_iter().collect();
        self.generated(&gens)
    }

    /// A generating set, picked greedily by descending element order.
    pub fn generators(&self) -> Vec<usize> {
        let orders = self.element_orders();
        let mut cand: Vec<usize> = (0..self.order).collect();
        cand.sort_by_key(|&a| (std::cmp::Reverse(orders[a]), a));
        let mut gens = Vec::new();
        let mut span = vec![self.identity];
        for a in cand {
            if span.len() == self.order {
                break;
            }
            if span.binary_search(&a).is_err() {
                gens.push(a);
                span = self.generated(&gens);
            }
        }
        gens
    }

    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut class_of = vec![usize::MAX; self.order];
        let mut classes = Vec::new();
        let start = std::iter::once(self.identity).chain((0..self.order).filter(|&a| a != self.identity));
        for a in start {
            if class_of[a] != usize::MAX {
                continue;
            }
            let cls: BTreeSet<usize> = (0..self.order).map(|g| self.conjugate(g, a)).collect();
            for &x in &cls {
                class_of[x] = classes.len();
            }
            classes.push(cls.into_iter().collect());
        }
        classes
    }

    pub fn derived_subgroup(&self) -> Vec<usize> {
        let comms: BTreeSet<usize> = (0..self.order)
            .flat_map(|a| (0..self.order).map(move |b| (a, b)))
            .map(|(a, b)| self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b))))
            .collect();
        self.generated(&comms.into_iter().collect::<Vec<_>>())
    }

    /// Left cosets `gN`, each represented by its lowest index, identity first.
    pub fn quotient(&self, n: &[usize]) -> Result<Quotient> {
        if !self.is_normal(n)? {
            return Err(Error::NotNormal);
        }
        let mut coset_of = vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        let start = std::iter::once(self.identity).chain((0..self.order).filter(|&a| a != self.identity));
        for g in start {
            if coset_of[g] != usize::MAX {
                continue;
            }
            for &h in n {
                coset_of[self.mul(g, h)] = reps.len();
            }
            reps.push(g);
        }
        let m = reps.len();
        let table: Vec<u32> = (0..m * m)
            .map(|k| coset_of[self.mul(reps[k / m], reps[k % m])] as u32)
            .collect();
        Ok(Quotient {
            group: AbstractGroup::from_flat(m, table, 0)?,
            coset_of,
            reps,
        })
    }

    /// The subgroup `s` as a group in its own right; element `i` of the result
    /// is `s[i]` after sorting.
    pub fn restrict(&self, s: &[usize]) -> Result<(AbstractGroup, Vec<usize>)> {
        self.require_subgroup(s)?;
        let mut idx: Vec<usize> = s.to_vec();
        idx.sort_unstable();
        idx.dedup();
        let pos = |x: usize| idx.binary_search(&x).expect("closed subgroup");
        let m = idx.len();
        let table: Vec<u32> = (0..m * m)
            .map(|k| pos(self.mul(idx[k / m], idx[k % m])) as u32)
            .collect();
        let group = AbstractGroup::from_flat(m, table, pos(self.identity))?;
        Ok((group, idx))
    }

    pub fn direct_product(&self, other: &AbstractGroup) -> Result<AbstractGroup> {
        let (a, b) = (self.order, other.order);
        let n = a * b;
        if n > TABLE_CAP {
            return Err(Error::GroupCap {
                what: "multiplication table",
                order: n,
                cap: TABLE_CAP,
            });
        }
        let table: Vec<u32> = (0..n * n)
            .map(|k| {
                let (x, y) = (k / n, k % n);
                (self.mul(x / b, y / b) * b + other.mul(x % b, y % b)) as u32
            })
            .collect();
        AbstractGroup::from_flat(n, table, self.identity * b + other.identity)
    }

    pub fn to_json(&self) -> Value {
        json!({ "order": self.order, "table": self.table(), "identity": self.identity })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let table: Vec<Vec<usize>> = serde_json::from_value(v["table"].clone())?;
        let identity = v["identity"]
            .as_u64()
            .ok_or_else(|| Error::InvalidArgument("missing identity".into()))?;
        let g = Self::from_table(table, identity as usize)?;
        if v["order"].as_u64() != Some(g.order as u64) {
            return Err(Error::InvalidArgument("order disagrees with the table".into()));
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::named;

    #[test]
    fn quotient_of_cyclic() {
        let z6 = named::cyclic(6);
        let sub = z6.generated(&[2]);
        assert_eq!(sub, vec![0, 2, 4]);
        let q = z6.quotient(&sub).unwrap();
        assert_eq!(q.group.order(), 2);
        assert_eq!(q.reps, vec![0, 1]);
        let all: Vec<usize> = (0..6).collect();
        assert_eq!(z6.quotient(&all).unwrap().group.order(), 1);
    }

    #[test]
    fn normality() {
        let s3 = named::symmetric3();
        let transposition = (0..6).find(|&a| s3.element_order(a) == 2).unwrap();
        let sub = s3.generated(&[transposition]);
        assert!(!s3.is_normal(&sub).unwrap());
        assert_eq!(s3.normal_closure(&sub).len(), 6);
        assert!(s3.is_normal(&s3.center()).unwrap());
        assert!(s3.is_normal(&[0, 1]).is_err() || s3.is_subgroup(&[0, 1]));
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(AbstractGroup::from_table(vec![vec![0, 1], vec![1, 1]], 0).is_err());
        assert!(AbstractGroup::from_table(vec![vec![0, 0], vec![0, 0]], 0).is_err());
    }

    #[test]
    fn classes_of_q8() {
        let q8 = named::quaternion();
        assert_eq!(q8.conjugacy_classes().len(), 5);
        assert_eq!(q8.center().len(), 2);
        assert_eq!(q8.derived_subgroup().len(), 2);
    }
}
