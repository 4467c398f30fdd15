//! Codes over `GF(p^k)`: GF-linear codes and the coarser Z_p-linear
//! (additive) subgroups of `GF(p^k)^n`.

use std::sync::Arc;

use serde_json::{json, Value};

use super::field::{Elem, Field, LinearForm};
use crate::error::{Error, Result};
use crate::numth;

/// Largest codeword count enumerated by [`LinearCode::codewords`] and friends.
pub const ENUMERATION_CAP: u64 = 1 << 20;

/// Reduced row echelon form over Z_p, zero rows dropped.
pub(crate) fn zp_reduce(mut rows: Vec<Vec<u64>>, p: u64) -> Vec<Vec<u64>> {
    let width = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..width {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = numth::mod_inv(rows[r][col], p).expect("nonzero mod p");
        for x in rows[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..rows.len() {
            let f = rows[i][col];
            if i != r && f != 0 {
                for c in 0..width {
                    rows[i][c] = (rows[i][c] + (p - f) * rows[r][c]) % p;
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

/// Basis of `{x : row·x = 0 for every row}` in `Z_p^width`.
pub(crate) fn zp_nullspace(rows: Vec<Vec<u64>>, width: usize, p: u64) -> Vec<Vec<u64>> {
    let rref = zp_reduce(rows, p);
    let pivots: Vec<usize> = rref
        .iter()
        .map(|r| r.iter().position(|&x| x != 0).expect("nonzero row"))
        .collect();
    (0..width)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0; width];
            v[free] = 1;
            for (row, &pc) in rref.iter().zip(&pivots) {
                v[pc] = (p - row[free]) % p;
            }
            v
        })
        .collect()
}

fn gf_reduce(field: &Field, mut rows: Vec<Vec<Elem>>) -> Vec<Vec<Elem>> {
    let width = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..width {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = field.inv(rows[r][col]).expect("nonzero");
        for x in rows[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        for i in 0..rows.len() {
            let f = rows[i][col];
            if i != r && f != 0 {
                for c in 0..width {
                    rows[i][c] = field.sub(rows[i][c], field.mul(f, rows[r][c]));
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

fn check_words(field: &Field, n: usize, rows: &[Vec<Elem>]) -> Result<()> {
    for row in rows {
        if row.len() != n {
            return Err(Error::InvalidArgument(format!("word of length {} in a code of length {n}", row.len())));
        }
        if row.iter().any(|&x| x as usize >= field.size()) {
            return Err(Error::InvalidArgument("symbol outside the field".into()));
        }
    }
    Ok(())
}

/// Z_p coordinates of a word, symbol by symbol.
fn expand(field: &Field, word: &[Elem]) -> Vec<u64> {
    word.iter().flat_map(|&x| field.coords(x)).collect()
}

fn contract(field: &Field, v: &[u64]) -> Vec<Elem> {
    v.chunks(field.k()).map(|c| field.from_coords(c)).collect()
}

fn weight(word: &[Elem]) -> usize {
    word.iter().filter(|&&x| x != 0).count()
}

fn count(base: u64, exp: usize) -> Option<u64> {
    base.checked_pow(exp as u32).filter(|&c| c <= ENUMERATION_CAP)
}

/// All `Σ c_i v_i` with coefficients in `0..base`, lowest combination first.
fn combinations(base: u64, vectors: &[Vec<Elem>], n: usize, add: impl Fn(Elem, Elem) -> Elem, scale: impl Fn(u64, Elem) -> Elem) -> Vec<Vec<Elem>> {
    let total = base.pow(vectors.len() as u32);
    (0..total)
        .map(|mut idx| {
            let mut w = vec![0; n];
            for v in vectors {
                let c = idx % base;
                idx /= base;
                if c != 0 {
                    for (x, &y) in w.iter_mut().zip(v) {
                        *x = add(*x, scale(c, y));
                    }
                }
            }
            w
        })
        .collect()
}

fn field_json(field: &Field, n: usize, rows: &[Vec<Elem>]) -> Value {
    json!({
        "p": field.p(),
        "k": field.k(),
        "irreducible": field.modulus(),
        "n": n,
        "generator": rows
            .iter()
            .map(|r| r.iter().map(|&x| field.coords(x)).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    })
}

fn parse_json(v: &Value) -> Result<(Arc<Field>, usize, Vec<Vec<Elem>>)> {
    let bad = |what: &str| Error::InvalidArgument(format!("code JSON: bad or missing {what}"));
    let p = v["p"].as_u64().ok_or_else(|| bad("p"))?;
    let k = v["k"].as_u64().ok_or_else(|| bad("k"))? as usize;
    let modulus: Option<Vec<u64>> = match &v["irreducible"] {
        Value::Null => None,
        m => Some(serde_json::from_value(m.clone()).map_err(|_| bad("irreducible"))?),
    };
    let field = Arc::new(Field::new(p, k, modulus)?);
    let n = v["n"].as_u64().ok_or_else(|| bad("n"))? as usize;
    let raw: Vec<Vec<Vec<u64>>> = serde_json::from_value(v["generator"].clone()).map_err(|_| bad("generator"))?;
    let rows = raw
        .iter()
        .map(|r| {
            r.iter()
                .map(|c| {
                    if c.len() != k || c.iter().any(|&d| d >= p) {
                        Err(bad("field element"))
                    } else {
                        Ok(field.from_coords(c))
                    }
                })
                .collect()
        })
        .collect::<Result<Vec<Vec<Elem>>>>()?;
    Ok((field, n, rows))
}

/// A GF(p^k)-linear code, kept as a reduced row echelon generator.
#[derive(Clone, Debug)]
pub struct LinearCode {
    field: Arc<Field>,
    n: usize,
    generator: Vec<Vec<Elem>>,
}

impl PartialEq for LinearCode {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field && self.n == other.n && self.generator == other.generator
    }
}

impl LinearCode {
    /// The span of `rows`; dependent rows are dropped.
    pub fn new(field: Arc<Field>, n: usize, rows: Vec<Vec<Elem>>) -> Result<Self> {
        check_words(&field, n, &rows)?;
        let generator = gf_reduce(&field, rows);
        Ok(LinearCode { field, n, generator })
    }

    pub fn zero(field: Arc<Field>, n: usize) -> Self {
        LinearCode {
            field,
            n,
            generator: Vec::new(),
        }
    }

    pub fn full(field: Arc<Field>, n: usize) -> Self {
        let generator = (0..n)
            .map(|i| (0..n).map(|j| (i == j) as Elem).collect())
            .collect();
        LinearCode { field, n, generator }
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Dimension over GF(p^k).
    pub fn dim(&self) -> usize {
        self.generator.len()
    }

    pub fn generator(&self) -> &[Vec<Elem>] {
        &self.generator
    }

    pub fn contains(&self, word: &[Elem]) -> bool {
        if word.len() != self.n {
            return false;
        }
        let mut rows = self.generator.clone();
        rows.push(word.to_vec());
        gf_reduce(&self.field, rows).len() == self.dim()
    }

    pub fn codewords(&self) -> Result<Vec<Vec<Elem>>> {
        let q = self.field.size() as u64;
        count(q, self.dim()).ok_or_else(|| Error::CodeTooLarge(format!("{q}^{} codewords", self.dim())))?;
        let f = &self.field;
        Ok(combinations(q, &self.generator, self.n, |a, b| f.add(a, b), |c, y| f.mul(c as Elem, y)))
    }

    pub fn to_additive(&self) -> AdditiveCode {
        let f = &self.field;
        let rows = self
            .generator
            .iter()
            .flat_map(|g| {
                (0..f.k()).map(move |i| {
                    let t = f.pow(f.theta(), i as u64);
                    expand(f, &g.iter().map(|&x| f.mul(t, x)).collect::<Vec<_>>())
                })
            })
            .collect();
        AdditiveCode::from_expanded(self.field.clone(), self.n, rows)
    }

    /// The ordinary dual `{x : Σ x_s y_s = 0 for all y in the code}`.
    pub fn dual(&self) -> LinearCode {
        let f = &self.field;
        let rref = &self.generator;
        let pivots: Vec<usize> = rref
            .iter()
            .map(|r| r.iter().position(|&x| x != 0).expect("nonzero row"))
            .collect();
        let rows = (0..self.n)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = vec![0; self.n];
                v[free] = 1;
                for (row, &pc) in rref.iter().zip(&pivots) {
                    v[pc] = f.neg(row[free]);
                }
                v
            })
            .collect();
        LinearCode::new(self.field.clone(), self.n, rows).expect("valid words")
    }

    /// The dual under `(x, y) ↦ Σ_s b(x_s·y_s)`. It is always GF-linear; a
    /// result that is not is reported as an inconsistency.
    pub fn dual_b(&self, b: &LinearForm) -> Result<LinearCode> {
        self.to_additive()
            .dual_b(b)
            .to_linear()
            .ok_or_else(|| Error::Inconsistent("b-dual of a linear code is not GF-linear".into()))
    }

    pub fn min_weight(&self) -> Result<Option<usize>> {
        Ok(self.codewords()?.iter().map(|w| weight(w)).filter(|&w| w > 0).min())
    }

    pub fn to_json(&self) -> Value {
        field_json(&self.field, self.n, &self.generator)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let (field, n, rows) = parse_json(v)?;
        Self::new(field, n, rows)
    }
}

/// The two duals of `d` agree as sets. Disagreement is an inconsistency,
/// not a `false`.
pub fn check_dual_equality(d: &LinearCode, b: &LinearForm) -> Result<bool> {
    let via_b = d.to_additive().dual_b(b);
    let ordinary = d.dual().to_additive();
    let k = d.field().k();
    if via_b.zp_dim() != k * (d.len() - d.dim()) {
        return Err(Error::Inconsistent(format!(
            "b-dual has Z_p-dimension {} instead of {}",
            via_b.zp_dim(),
            k * (d.len() - d.dim())
        )));
    }
    if via_b != ordinary {
        return Err(Error::Inconsistent("b-dual differs from the ordinary dual".into()));
    }
    Ok(true)
}

/// A Z_p-subspace of `GF(p^k)^n`, kept as a reduced echelon basis of the
/// Z_p expansion.
#[derive(Clone, Debug)]
pub struct AdditiveCode {
    field: Arc<Field>,
    n: usize,
    basis: Vec<Vec<u64>>,
}

impl PartialEq for AdditiveCode {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field && self.n == other.n && self.basis == other.basis
    }
}

impl AdditiveCode {
    /// The Z_p-span of `rows`.
    pub fn new(field: Arc<Field>, n: usize, rows: Vec<Vec<Elem>>) -> Result<Self> {
        check_words(&field, n, &rows)?;
        let rows = rows.iter().map(|w| expand(&field, w)).collect();
        Ok(Self::from_expanded(field, n, rows))
    }

    fn from_expanded(field: Arc<Field>, n: usize, rows: Vec<Vec<u64>>) -> Self {
        let basis = zp_reduce(rows, field.p());
        AdditiveCode { field, n, basis }
    }

    pub fn zero(field: Arc<Field>, n: usize) -> Self {
        AdditiveCode {
            field,
            n,
            basis: Vec::new(),
        }
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn zp_dim(&self) -> usize {
        self.basis.len()
    }

    /// Basis words, in echelon order.
    pub fn basis(&self) -> Vec<Vec<Elem>> {
        self.basis.iter().map(|v| contract(&self.field, v)).collect()
    }

    pub fn contains(&self, word: &[Elem]) -> bool {
        if word.len() != self.n {
            return false;
        }
        let mut rows = self.basis.clone();
        rows.push(expand(&self.field, word));
        zp_reduce(rows, self.field.p()).len() == self.zp_dim()
    }

    pub fn is_subcode_of(&self, other: &AdditiveCode) -> bool {
        self.basis().iter().all(|w| other.contains(w))
    }

    pub fn codewords(&self) -> Result<Vec<Vec<Elem>>> {
        let p = self.field.p();
        count(p, self.zp_dim()).ok_or_else(|| Error::CodeTooLarge(format!("{p}^{} codewords", self.zp_dim())))?;
        let f = &self.field;
        let basis = self.basis();
        Ok(combinations(p, &basis, self.n, |a, b| f.add(a, b), |c, y| f.mul(f.scalar(c), y)))
    }

    /// `{x : Σ_s b(x_s·y_s) = 0 for all y}`, solved over Z_p.
    pub fn dual_b(&self, b: &LinearForm) -> AdditiveCode {
        let f = &self.field;
        let k = f.k();
        let constraints = self
            .basis()
            .iter()
            .map(|y| {
                (0..self.n * k)
                    .map(|c| {
                        let t = f.pow(f.theta(), (c % k) as u64);
                        b.pair(f, t, y[c / k])
                    })
                    .collect()
            })
            .collect();
        let null = zp_nullspace(constraints, self.n * k, f.p());
        Self::from_expanded(self.field.clone(), self.n, null)
    }

    pub fn is_gf_linear(&self) -> bool {
        let f = &self.field;
        self.basis()
            .iter()
            .all(|w| self.contains(&w.iter().map(|&x| f.mul(f.theta(), x)).collect::<Vec<_>>()))
    }

    /// The same set as a GF-linear code, when it is one.
    pub fn to_linear(&self) -> Option<LinearCode> {
        if !self.is_gf_linear() {
            return None;
        }
        let code = LinearCode::new(self.field.clone(), self.n, self.basis()).ok()?;
        (code.dim() * self.field.k() == self.zp_dim()).then_some(code)
    }

    pub fn min_weight(&self) -> Result<Option<usize>> {
        Ok(self.codewords()?.iter().map(|w| weight(w)).filter(|&w| w > 0).min())
    }

    pub fn to_json(&self) -> Value {
        let mut v = field_json(&self.field, self.n, &self.basis());
        v["additive"] = Value::Bool(true);
        v
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let (field, n, rows) = parse_json(v)?;
        Self::new(field, n, rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf4() -> Arc<Field> {
        Arc::new(Field::new(2, 2, None).unwrap())
    }

    #[test]
    fn trivial_duals() {
        let f = gf4();
        let b = LinearForm::constant_term(&f);
        let zero = LinearCode::zero(f.clone(), 3);
        assert_eq!(zero.dual_b(&b).unwrap(), LinearCode::full(f.clone(), 3));
        assert_eq!(LinearCode::full(f.clone(), 3).dual_b(&b).unwrap().dim(), 0);
    }

    #[test]
    fn span_one_theta() {
        let f = gf4();
        let t = f.theta();
        let d = LinearCode::new(f.clone(), 2, vec![vec![1, t]]).unwrap();
        let b = LinearForm::constant_term(&f);
        assert_eq!(d.to_additive().dual_b(&b).zp_dim(), 2);
        assert_eq!(d.min_weight().unwrap(), Some(2));
        assert!(check_dual_equality(&d, &b).unwrap());
    }

    #[test]
    fn b_dual_by_brute_force() {
        let f = gf4();
        let b = LinearForm::new(&f, vec![1, 1]).unwrap();
        let d = LinearCode::new(f.clone(), 2, vec![vec![1, f.theta()]]).unwrap();
        let dual = d.to_additive().dual_b(&b);
        let words = d.codewords().unwrap();
        for x0 in f.elements() {
            for x1 in f.elements() {
                let x = [x0, x1];
                let orth = words
                    .iter()
                    .all(|y| (b.pair(&f, x[0], y[0]) + b.pair(&f, x[1], y[1])) % 2 == 0);
                assert_eq!(dual.contains(&x), orth);
            }
        }
    }

    #[test]
    fn repetition_and_full() {
        let f = gf4();
        let rep = LinearCode::new(f.clone(), 3, vec![vec![1, 1, 1]]).unwrap();
        assert_eq!(rep.min_weight().unwrap(), Some(3));
        assert_eq!(LinearCode::full(f, 2).min_weight().unwrap(), Some(1));
    }

    #[test]
    fn additive_subcode() {
        let f = gf4();
        let c0 = AdditiveCode::new(f.clone(), 1, vec![vec![1]]).unwrap();
        assert_eq!(c0.zp_dim(), 1);
        assert!(!c0.is_gf_linear());
        assert!(c0.is_subcode_of(&LinearCode::full(f, 1).to_additive()));
    }

    #[test]
    fn json_round_trip() {
        let f = gf4();
        let d = LinearCode::new(f, 2, vec![vec![1, 2]]).unwrap();
        assert_eq!(LinearCode::from_json(&d.to_json()).unwrap(), d);
    }
}
