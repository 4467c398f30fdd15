//! Exact character tables.
//!
//! General groups go through the Burnside–Dixon method: central characters
//! are the common eigenvectors of the class-sum structure matrices, found
//! over a prime field `F_l` with `l ≡ 1 (mod exp G)`, and each character
//! value is lifted back to `Q(ζ_e)` by recovering the eigenvalue
//! multiplicities of the represented element. Abelian groups have a direct
//! construction that extends characters one cyclic factor at a time.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::abstract_group::AbstractGroup;
use crate::cyclo::{CycScalar, Rational};
use crate::error::{Error, Result};
use crate::numth::{self, mod_inv, mod_pow, mul_mod};

pub const DEFAULT_CHARTABLE_CAP: usize = 1024;

#[derive(Clone, Debug)]
pub struct CharacterTable {
    group_order: usize,
    exponent: usize,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    /// `characters[c][k]` is the value of character `c` on class `k`.
    characters: Vec<Vec<CycScalar>>,
}

impl CharacterTable {
    pub fn compute(g: &AbstractGroup) -> Result<Self> {
        Self::compute_capped(g, DEFAULT_CHARTABLE_CAP)
    }

    pub fn compute_capped(g: &AbstractGroup, cap: usize) -> Result<Self> {
        if g.order() > cap {
            return Err(Error::GroupCap {
                what: "character table",
                order: g.order(),
                cap,
            });
        }
        if g.is_abelian() {
            abelian_table(g)
        } else {
            dixon_table(g)
        }
    }

    /// Burnside–Dixon for any group, abelian or not.
    pub fn compute_dixon(g: &AbstractGroup) -> Result<Self> {
        dixon_table(g)
    }

    pub fn group_order(&self) -> usize {
        self.group_order
    }

    pub fn exponent(&self) -> usize {
        self.exponent
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, element: usize) -> usize {
        self.class_of[element]
    }

    pub fn len(&self) -> usize {
        self.characters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.characters.is_empty()
    }

    pub fn characters(&self) -> &[Vec<CycScalar>] {
        &self.characters
    }

    pub fn dim(&self, chi: usize) -> usize {
        let v = self.characters[chi][0].as_rational().expect("degree is rational");
        v.as_small().expect("small degree").0 as usize
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..self.len()).map(|c| self.dim(c)).collect()
    }

    pub fn value(&self, chi: usize, element: usize) -> &CycScalar {
        &self.characters[chi][self.class_of[element]]
    }

    /// Values of `chi` on every element, in element order.
    pub fn element_values(&self, chi: usize) -> Vec<CycScalar> {
        self.class_of
            .iter()
            .map(|&k| self.characters[chi][k].clone())
            .collect()
    }

    /// `(1/|G|) Σ_g f(g) conj(h(g))` for class functions given per element.
    pub fn inner_product(&self, f: &[CycScalar], h: &[CycScalar]) -> CycScalar {
        let sum = f
            .iter()
            .zip(h)
            .fold(CycScalar::zero(), |acc, (a, b)| &acc + &(a * &b.conj()));
        sum.scale(&Rational::new(1, self.group_order as i64))
    }

    /// Index of the character equal to `values` (given per element), if any.
    pub fn find(&self, values: &[CycScalar]) -> Option<usize> {
        (0..self.len()).find(|&c| {
            self.classes
                .iter()
                .enumerate()
                .all(|(k, cls)| values[cls[0]] == self.characters[c][k])
        })
    }

    /// Exact row orthogonality plus `Σ d² = |G|`.
    pub fn verify(&self) -> bool {
        let sizes: Vec<Rational> = self
            .classes
            .iter()
            .map(|c| Rational::from_int(c.len() as i64))
            .collect();
        let n = self.group_order as i64;
        let rows_ok = (0..self.len()).all(|a| {
            (0..=a).all(|b| {
                let s = (0..self.classes.len()).fold(CycScalar::zero(), |acc, k| {
                    &acc + &(&self.characters[a][k] * &self.characters[b][k].conj()).scale(&sizes[k])
                });
                s == CycScalar::from_int(if a == b { n } else { 0 })
            })
        });
        let dsum: usize = self.dims().iter().map(|d| d * d).sum();
        rows_ok && dsum == self.group_order && self.len() == self.classes.len()
    }

    /// Characters vanishing off the given set of (central) elements.
    pub fn supported_on(&self, support: &[usize]) -> Vec<usize> {
        (0..self.len())
            .filter(|&c| {
                self.classes.iter().enumerate().all(|(k, cls)| {
                    cls.iter().any(|x| support.contains(x)) || self.characters[c][k].is_zero()
                })
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "classes": self.classes,
            "characters": self.characters
                .iter()
                .map(|row| row.iter().map(CycScalar::to_json).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "dims": self.dims(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let classes: Vec<Vec<usize>> = serde_json::from_value(v["classes"].clone())?;
        let characters = v["characters"]
            .as_array()
            .ok_or_else(|| Error::InvalidArgument("missing characters".into()))?
            .iter()
            .map(|row| crate::cyclo::vector_from_json(row).map_err(Error::InvalidArgument))
            .collect::<Result<Vec<_>>>()?;
        let group_order = classes.iter().map(Vec::len).sum();
        let mut class_of = vec![usize::MAX; group_order];
        for (k, cls) in classes.iter().enumerate() {
            for &x in cls {
                if x >= group_order || class_of[x] != usize::MAX {
                    return Err(Error::InvalidArgument("classes do not partition the group".into()));
                }
                class_of[x] = k;
            }
        }
        let exponent = characters
            .iter()
            .flatten()
            .fold(1u64, |acc: u64, s: &CycScalar| numth::lcm(acc, s.order())) as usize;
        let t = CharacterTable {
            group_order,
            exponent,
            classes,
            class_of,
            characters,
        };
        if !t.verify() {
            return Err(Error::Inconsistent("character table fails orthogonality".into()));
        }
        Ok(t)
    }
}

fn class_data(g: &AbstractGroup) -> (Vec<Vec<usize>>, Vec<usize>) {
    let classes = g.conjugacy_classes();
    let mut class_of = vec![0; g.order()];
    for (k, cls) in classes.iter().enumerate() {
        for &x in cls {
            class_of[x] = k;
        }
    }
    (classes, class_of)
}

fn finish(
    g: &AbstractGroup,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    mut characters: Vec<Vec<CycScalar>>,
    exponent: usize,
) -> Result<CharacterTable> {
    let key = |row: &Vec<CycScalar>| -> (bool, usize, Vec<Rational>) {
        let trivial = row.iter().all(CycScalar::is_one);
        let d = row[0].as_rational().and_then(|q| q.as_small()).map_or(0, |q| q.0 as usize);
        let flat = row
            .iter()
            .flat_map(|s| s.embed(exponent as u64).expect("divides exponent").power_coeffs().to_vec())
            .collect();
        (!trivial, d, flat)
    };
    characters.sort_by_cached_key(key);
    let t = CharacterTable {
        group_order: g.order(),
        exponent,
        classes,
        class_of,
        characters,
    };
    if !t.verify() {
        return Err(Error::Inconsistent("computed character table fails orthogonality".into()));
    }
    Ok(t)
}

fn abelian_table(g: &AbstractGroup) -> Result<CharacterTable> {
    let n = g.order();
    let e = g.exponent();
    let (classes, class_of) = class_data(g);
    // Characters as exponents: χ(x) = ζ_e^{a[x]}; None outside the current subgroup.
    let mut members = vec![g.identity()];
    let mut chars: Vec<Vec<Option<usize>>> = vec![{
        let mut v = vec![None; n];
        v[g.identity()] = Some(0);
        v
    }];
    let mut in_sub = vec![false; n];
    in_sub[g.identity()] = true;
    for x in 0..n {
        if in_sub[x] {
            continue;
        }
        let mut t = 1;
        let mut xt = x;
        while !in_sub[xt] {
            xt = g.mul(xt, x);
            t += 1;
        }
        // t is minimal with x^t in the current subgroup
        let mut powers = vec![g.identity()];
        for _ in 1..t {
            powers.push(g.mul(*powers.last().expect("non-empty"), x));
        }
        let mut next = Vec::with_capacity(chars.len() * t);
        for psi in &chars {
            let a = psi[xt].expect("x^t lies in the subgroup");
            for b in (0..e).filter(|&b| (t * b) % e == a) {
                let mut v = vec![None; n];
                for (s, &p) in powers.iter().enumerate() {
                    for &h in &members {
                        v[g.mul(h, p)] = Some((psi[h].expect("member") + s * b) % e);
                    }
                }
                next.push(v);
            }
        }
        chars = next;
        members = powers
            .iter()
            .flat_map(|&p| members.iter().map(move |&h| (h, p)))
            .map(|(h, p)| g.mul(h, p))
            .collect();
        for &m in &members {
            in_sub[m] = true;
        }
    }
    if chars.len() != n {
        return Err(Error::Inconsistent("abelian character count mismatch".into()));
    }
    let characters = chars
        .into_iter()
        .map(|v| {
            classes
                .iter()
                .map(|cls| CycScalar::root_of_unity(e as u64, v[cls[0]].expect("total") as i64))
                .collect()
        })
        .collect();
    finish(g, classes, class_of, characters, e)
}

struct ModField {
    p: u64,
}

impl ModField {
    fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.p)
    }
    fn inv(&self, a: u64) -> u64 {
        mod_inv(a, self.p).expect("nonzero")
    }
}

/// Reduced row echelon form over `F_p`; returns pivot columns.
fn rref_mod(f: &ModField, rows: &mut Vec<Vec<u64>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let inv = f.inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pr = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let k = row[c];
                for (x, y) in row.iter_mut().zip(&pr) {
                    *x = f.sub(*x, f.mul(k, *y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

fn nullspace_mod(f: &ModField, m: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let n = m.first().map_or(0, Vec::len);
    let mut rows = m.to_vec();
    let pivots = rref_mod(f, &mut rows);
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0; n];
            v[free] = 1;
            for (row, &pc) in rows.iter().zip(&pivots) {
                v[pc] = f.sub(0, row[free]);
            }
            v
        })
        .collect()
}

/// Characteristic polynomial (low degree first) via Hessenberg reduction.
fn charpoly_mod(f: &ModField, m: &[Vec<u64>]) -> Vec<u64> {
    let n = m.len();
    let mut h = m.to_vec();
    for c in 1..n {
        let Some(i) = (c..n).find(|&i| h[i][c - 1] != 0) else {
            continue;
        };
        if i != c {
            h.swap(i, c);
            for row in h.iter_mut() {
                row.swap(i, c);
            }
        }
        let inv = f.inv(h[c][c - 1]);
        for j in c + 1..n {
            let u = f.mul(h[j][c - 1], inv);
            if u == 0 {
                continue;
            }
            for k in 0..n {
                let t = f.mul(u, h[c][k]);
                h[j][k] = f.sub(h[j][k], t);
            }
            for row in h.iter_mut() {
                let t = f.mul(u, row[j]);
                row[c] = f.add(row[c], t);
            }
        }
    }
    // p_m = (x - h_mm) p_{m-1} - Σ_{i<m} h_{i,m} (Π_{j=i+1}^{m} h_{j,j-1}) p_{i-1}
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for m in 0..n {
        let prev = &polys[m];
        let mut p = vec![0u64; m + 2];
        for (d, &c) in prev.iter().enumerate() {
            p[d + 1] = f.add(p[d + 1], c);
            p[d] = f.sub(p[d], f.mul(h[m][m], c));
        }
        let mut t = 1u64;
        for i in (0..m).rev() {
            t = f.mul(t, h[i + 1][i]);
            let coef = f.mul(h[i][m], t);
            if coef == 0 {
                continue;
            }
            for (d, &c) in polys[i].iter().enumerate() {
                p[d] = f.sub(p[d], f.mul(coef, c));
            }
        }
        polys.push(p);
    }
    polys.pop().expect("non-empty")
}

fn roots_mod(f: &ModField, poly: &[u64]) -> Vec<u64> {
    (0..f.p)
        .filter(|&x| {
            poly.iter()
                .rev()
                .fold(0u64, |acc, &c| f.add(f.mul(acc, x), c))
                == 0
        })
        .collect()
}

/// Splits `space` (rows in RREF) into eigenspaces of `op` restricted to it.
fn split(f: &ModField, op: &[Vec<u64>], space: &[Vec<u64>]) -> Vec<Vec<Vec<u64>>> {
    let d = space.len();
    let k = op.len();
    let pivots: Vec<usize> = space
        .iter()
        .map(|r| r.iter().position(|&x| x != 0).expect("nonzero row"))
        .collect();
    // image of each basis vector, in basis coordinates (read off the pivots)
    let mut r = vec![vec![0u64; d]; d];
    for (col, b) in space.iter().enumerate() {
        for (row, &pc) in pivots.iter().enumerate() {
            r[row][col] = (0..k).fold(0, |acc, j| f.add(acc, f.mul(op[pc][j], b[j])));
        }
    }
    let roots = roots_mod(f, &charpoly_mod(f, &r));
    if roots.len() <= 1 {
        return vec![space.to_vec()];
    }
    roots
        .into_iter()
        .map(|lambda| {
            let shifted: Vec<Vec<u64>> = (0..d)
                .map(|i| {
                    (0..d)
                        .map(|j| if i == j { f.sub(r[i][j], lambda) } else { r[i][j] })
                        .collect()
                })
                .collect();
            let mut vecs: Vec<Vec<u64>> = nullspace_mod(f, &shifted)
                .into_iter()
                .map(|c| {
                    (0..k)
                        .map(|j| (0..d).fold(0, |acc, t| f.add(acc, f.mul(c[t], space[t][j]))))
                        .collect()
                })
                .collect();
            rref_mod(f, &mut vecs);
            vecs
        })
        .collect()
}

fn dixon_table(g: &AbstractGroup) -> Result<CharacterTable> {
    let n = g.order();
    let e = g.exponent();
    let (classes, class_of) = class_data(g);
    let k = classes.len();
    let lower = (n as u64).max(2 * (n as f64).sqrt().ceil() as u64 + 1).max(4096);
    let p = numth::prime_congruent_one(e as u64, lower);
    let f = ModField { p };

    // structure[i][j][l] = #{x ∈ C_i : x⁻¹ z_l ∈ C_j}, z_l the first element of C_l
    let mut structure = vec![vec![vec![0u64; k]; k]; k];
    for (i, ci) in classes.iter().enumerate() {
        for &x in ci {
            let xi = g.inv(x);
            for (l, cl) in classes.iter().enumerate() {
                structure[i][class_of[g.mul(xi, cl[0])]][l] += 1;
            }
        }
    }

    let identity_space: Vec<Vec<u64>> = (0..k)
        .map(|i| (0..k).map(|j| (i == j) as u64).collect())
        .collect();
    let mut spaces = vec![identity_space];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..2 {
        let combo: Vec<Vec<u64>> = {
            let coeffs: Vec<u64> = (0..k).map(|_| rng.gen_range(0..p)).collect();
            (0..k)
                .map(|j| {
                    (0..k)
                        .map(|l| (0..k).fold(0, |acc, i| f.add(acc, f.mul(coeffs[i], structure[i][j][l]))))
                        .collect()
                })
                .collect()
        };
        spaces = spaces
            .into_iter()
            .flat_map(|s| if s.len() > 1 { split(&f, &combo, &s) } else { vec![s] })
            .collect();
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
    }
    for op in &structure {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        spaces = spaces
            .into_iter()
            .flat_map(|s| if s.len() > 1 { split(&f, op, &s) } else { vec![s] })
            .collect();
    }
    if spaces.len() != k || spaces.iter().any(|s| s.len() != 1) {
        return Err(Error::Inconsistent("class algebra did not split into lines".into()));
    }

    let id_class = class_of[g.identity()];
    let inv_class: Vec<usize> = classes.iter().map(|c| class_of[g.inv(c[0])]).collect();
    let sizes: Vec<u64> = classes.iter().map(|c| c.len() as u64 % p).collect();
    let z = mod_pow(numth::primitive_root(p), (p - 1) / e as u64, p);
    let z_inv = f.inv(z);
    let e_inv = f.inv(e as u64 % p);
    // power_class[j][t] = class of (z_j)^t
    let power_class: Vec<Vec<usize>> = classes
        .iter()
        .map(|c| {
            let mut x = g.identity();
            (0..e)
                .map(|_| {
                    let cls = class_of[x];
                    x = g.mul(x, c[0]);
                    cls
                })
                .collect()
        })
        .collect();
    let max_d = (n as f64).sqrt().floor() as u64;

    let mut characters = Vec::with_capacity(k);
    for s in spaces {
        let v = &s[0];
        if v[id_class] == 0 {
            return Err(Error::Inconsistent("central character vanishes at the identity".into()));
        }
        let scale = f.inv(v[id_class]);
        let omega: Vec<u64> = v.iter().map(|&x| f.mul(x, scale)).collect();
        let denom = (0..k).fold(0, |acc, j| {
            f.add(acc, f.mul(f.mul(omega[j], omega[inv_class[j]]), f.inv(sizes[j])))
        });
        let d2 = f.mul(n as u64 % p, f.inv(denom));
        let d = (1..=max_d)
            .find(|&d| d * d % p == d2)
            .ok_or_else(|| Error::Inconsistent("no integer character degree".into()))?;
        let modvals: Vec<u64> = (0..k)
            .map(|j| f.mul(f.mul(d, omega[j]), f.inv(sizes[j])))
            .collect();
        let mut row = Vec::with_capacity(k);
        for pc in &power_class {
            let mut raw = vec![Rational::zero(); e];
            for (s_idx, slot) in raw.iter_mut().enumerate() {
                let zs = mod_pow(z_inv, s_idx as u64, p);
                let mut acc = 0u64;
                let mut zst = 1u64;
                for &cls in pc.iter() {
                    acc = f.add(acc, f.mul(modvals[cls], zst));
                    zst = f.mul(zst, zs);
                }
                let m = f.mul(acc, e_inv);
                if m > d {
                    return Err(Error::Inconsistent("eigenvalue multiplicity out of range".into()));
                }
                *slot = Rational::from_int(m as i64);
            }
            row.push(CycScalar::canonicalize(e as u64, raw)?);
        }
        characters.push(row);
    }
    finish(g, classes, class_of, characters, e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::named;

    fn same_tables(a: &CharacterTable, b: &CharacterTable) -> bool {
        a.classes() == b.classes() && a.characters() == b.characters()
    }

    #[test]
    fn small_abelian() {
        let z2 = CharacterTable::compute(&named::cyclic(2)).unwrap();
        assert_eq!(z2.len(), 2);
        assert_eq!(z2.characters()[1][1], CycScalar::from_int(-1));
        let v4 = CharacterTable::compute(&named::klein()).unwrap();
        assert_eq!(v4.dims(), vec![1, 1, 1, 1]);
    }

    #[test]
    fn quaternion_table() {
        let q8 = named::quaternion();
        let t = CharacterTable::compute(&q8).unwrap();
        assert_eq!(t.dims(), vec![1, 1, 1, 1, 2]);
        let two_dim = 4;
        let center = q8.center();
        assert_eq!(t.supported_on(&center), vec![two_dim]);
        let vals: Vec<i64> = t.characters()[two_dim]
            .iter()
            .map(|v| v.as_rational().unwrap().as_small().unwrap().0)
            .collect();
        let mut sorted = vals.clone();
        sorted.sort();
        assert_eq!(sorted, vec![-2, 0, 0, 0, 2]);
    }

    #[test]
    fn s3_has_no_center_supported_character() {
        let s3 = named::symmetric3();
        let t = CharacterTable::compute(&s3).unwrap();
        assert_eq!(t.dims(), vec![1, 1, 2]);
        assert!(t.supported_on(&s3.center()).is_empty());
    }

    #[test]
    fn abelian_and_dixon_agree() {
        for g in [named::cyclic(6), named::cyclic(8), named::klein(), named::cyclic(2).direct_product(&named::cyclic(4)).unwrap()] {
            let a = CharacterTable::compute(&g).unwrap();
            let d = CharacterTable::compute_dixon(&g).unwrap();
            assert!(same_tables(&a, &d));
        }
    }

    #[test]
    fn nonabelian_tables_verify() {
        for g in [named::dihedral(8), named::dihedral(10), named::z2xd8(), named::symmetric3()] {
            let t = CharacterTable::compute(&g).unwrap();
            assert!(t.verify());
            assert_eq!(t.len(), g.conjugacy_classes().len());
        }
    }

    #[test]
    fn cap_enforced() {
        assert!(matches!(
            CharacterTable::compute_capped(&named::cyclic(20), 10),
            Err(Error::GroupCap { .. })
        ));
    }
}
