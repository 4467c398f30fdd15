//! Table-driven arithmetic in `GF(p^k)`.
//!
//! An element `a_0 + a_1 θ + … + a_{k-1} θ^{k-1}` (θ a root of the defining
//! polynomial) is stored as the integer `Σ a_i p^i`, so `0` and `1` are the
//! field's zero and one and the ordering is the obvious total order.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::numth;

/// Largest field size for which tables are built.
pub const FIELD_CAP: usize = 1024;

pub type Elem = u32;

#[derive(Clone, Debug)]
pub struct Field {
    p: u64,
    k: usize,
    q: usize,
    modulus: Vec<u64>,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
}

/// Default defining polynomial (low degree first, monic): Conway
/// polynomials for the small fields, `x - g` with `g` the least primitive
/// root when `k = 1`.
pub fn default_modulus(p: u64, k: usize) -> Option<Vec<u64>> {
    if k == 1 {
        return Some(vec![(p - numth::primitive_root(p)) % p, 1]);
    }
    let m: &[u64] = match (p, k) {
        (2, 2) => &[1, 1, 1],
        (2, 3) => &[1, 1, 0, 1],
        (2, 4) => &[1, 1, 0, 0, 1],
        (2, 5) => &[1, 0, 1, 0, 0, 1],
        (2, 6) => &[1, 1, 0, 1, 1, 0, 1],
        (2, 7) => &[1, 1, 0, 0, 0, 0, 0, 1],
        (2, 8) => &[1, 0, 1, 1, 1, 0, 0, 0, 1],
        (3, 2) => &[2, 2, 1],
        (3, 3) => &[1, 2, 0, 1],
        (3, 4) => &[2, 0, 0, 2, 1],
        (5, 2) => &[2, 4, 1],
        (5, 3) => &[3, 3, 0, 1],
        (7, 2) => &[3, 6, 1],
        (7, 3) => &[4, 0, 6, 1],
        (11, 2) => &[2, 7, 1],
        (13, 2) => &[2, 12, 1],
        (17, 2) => &[3, 16, 1],
        (19, 2) => &[2, 18, 1],
        (23, 2) => &[5, 21, 1],
        (31, 2) => &[3, 29, 1],
        _ => return None,
    };
    Some(m.to_vec())
}

impl Field {
    /// `GF(p^k)` with the given monic defining polynomial (low degree
    /// first), or the default one.
    pub fn new(p: u64, k: usize, modulus: Option<Vec<u64>>) -> Result<Self> {
        if !numth::is_prime(p) {
            return Err(Error::InvalidArgument(format!("{p} is not prime")));
        }
        if k == 0 {
            return Err(Error::InvalidArgument("extension degree must be ≥ 1".into()));
        }
        let q = (p as usize)
            .checked_pow(k as u32)
            .filter(|&q| q <= FIELD_CAP)
            .ok_or_else(|| Error::InvalidArgument(format!("GF({p}^{k}) exceeds {FIELD_CAP} elements")))?;
        let modulus = match modulus {
            Some(m) => m,
            None => default_modulus(p, k).ok_or_else(|| {
                Error::InvalidArgument(format!("no default polynomial for GF({p}^{k})"))
            })?,
        };
        if modulus.len() != k + 1 || modulus[k] % p != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidArgument(format!(
                "defining polynomial must be monic of degree {k} with coefficients below {p}"
            )));
        }
        let digits = |x: usize| -> Vec<u64> {
            let mut v = Vec::with_capacity(k);
            let mut x = x as u64;
            for _ in 0..k {
                v.push(x % p);
                x /= p;
            }
            v
        };
        let pack = |v: &[u64]| -> Elem { v.iter().rev().fold(0u64, |acc, &d| acc * p + d) as Elem };
        let all: Vec<Vec<u64>> = (0..q).map(digits).collect();
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            for b in 0..q {
                let s: Vec<u64> = (0..k).map(|i| (all[a][i] + all[b][i]) % p).collect();
                add[a * q + b] = pack(&s);
                let mut prod = vec![0u64; 2 * k - 1];
                for i in 0..k {
                    for j in 0..k {
                        prod[i + j] = (prod[i + j] + all[a][i] * all[b][j]) % p;
                    }
                }
                for d in (k..prod.len()).rev() {
                    let c = prod[d];
                    if c != 0 {
                        for (t, &m) in modulus.iter().enumerate().take(k) {
                            prod[d - k + t] = (prod[d - k + t] + (p - c) * m % p) % p;
                        }
                        prod[d] = 0;
                    }
                }
                mul[a * q + b] = pack(&prod[..k]);
            }
        }
        let neg: Vec<Elem> = (0..q)
            .map(|a| (0..q).find(|&b| add[a * q + b] == 0).expect("additive inverse") as Elem)
            .collect();
        let mut inv = vec![0; q];
        for a in 1..q {
            match (1..q).find(|&b| mul[a * q + b] == 1) {
                Some(b) => inv[a] = b as Elem,
                None => return Err(Error::ReduciblePolynomial { p }),
            }
        }
        let f = Field {
            p,
            k,
            q,
            modulus,
            add,
            mul,
            neg,
            inv,
        };
        if q <= 64 {
            f.check_axioms()?;
        }
        Ok(f)
    }

    fn check_axioms(&self) -> Result<()> {
        let q = self.q as Elem;
        for a in 0..q {
            for b in 0..q {
                if self.add(a, b) != self.add(b, a) || self.mul(a, b) != self.mul(b, a) {
                    return Err(Error::Inconsistent("field tables are not commutative".into()));
                }
                for c in 0..q {
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c))
                        || self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c))
                    {
                        return Err(Error::Inconsistent("field tables violate the axioms".into()));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn size(&self) -> usize {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.q as Elem
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.q + b as usize]
    }

    pub fn inv(&self, a: Elem) -> Option<Elem> {
        (a != 0).then(|| self.inv[a as usize])
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        (0..e).fold(1, |acc, _| self.mul(acc, a))
    }

    /// `n · 1` for an integer scalar `n ∈ Z_p`.
    pub fn scalar(&self, n: u64) -> Elem {
        (n % self.p) as Elem
    }

    /// Z_p coordinates `a_0, …, a_{k-1}`.
    pub fn coords(&self, a: Elem) -> Vec<u64> {
        let mut x = a as u64;
        (0..self.k)
            .map(|_| {
                let d = x % self.p;
                x /= self.p;
                d
            })
            .collect()
    }

    pub fn from_coords(&self, v: &[u64]) -> Elem {
        v.iter().rev().fold(0u64, |acc, &d| acc * self.p + d % self.p) as Elem
    }

    /// The root θ of the defining polynomial.
    pub fn theta(&self) -> Elem {
        if self.k == 1 {
            self.neg(self.scalar(self.modulus[0]))
        } else {
            self.p as Elem
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "p": self.p, "k": self.k, "irreducible": self.modulus })
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for Field {}

/// A Z_p-linear form `b(x) = Σ c_i a_i` on `GF(p^k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    coeffs: Vec<u64>,
}

impl LinearForm {
    /// Rejects the zero form, and verifies exhaustively that
    /// `(x, y) ↦ b(x·y)` is non-degenerate.
    pub fn new(field: &Field, coeffs: Vec<u64>) -> Result<Self> {
        if coeffs.len() != field.k() {
            return Err(Error::InvalidArgument(format!(
                "linear form needs {} coefficients",
                field.k()
            )));
        }
        let coeffs: Vec<u64> = coeffs.into_iter().map(|c| c % field.p()).collect();
        if coeffs.iter().all(|&c| c == 0) {
            return Err(Error::DegenerateForm);
        }
        let b = LinearForm { coeffs };
        let degenerate = field
            .elements()
            .skip(1)
            .any(|x| field.elements().all(|y| b.eval(field, field.mul(x, y)) == 0));
        if degenerate {
            return Err(Error::DegenerateForm);
        }
        Ok(b)
    }

    /// The coefficient-extraction form `b(Σ a_i θ^i) = a_0`.
    pub fn constant_term(field: &Field) -> Self {
        let mut coeffs = vec![0; field.k()];
        coeffs[0] = 1;
        LinearForm { coeffs }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn eval(&self, field: &Field, x: Elem) -> u64 {
        field
            .coords(x)
            .iter()
            .zip(&self.coeffs)
            .fold(0, |acc, (a, c)| (acc + a * c) % field.p())
    }

    /// `b(x·y)`.
    pub fn pair(&self, field: &Field, x: Elem, y: Elem) -> u64 {
        self.eval(field, field.mul(x, y))
    }

    pub fn to_json(&self) -> Value {
        json!({ "coeffs": self.coeffs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf2_and_gf4() {
        let f2 = Field::new(2, 1, None).unwrap();
        assert_eq!(f2.add(1, 1), 0);
        let f4 = Field::new(2, 2, None).unwrap();
        let t = f4.theta();
        assert_eq!(f4.mul(t, t), f4.add(t, 1));
        for a in 1..4 {
            assert_eq!(f4.pow(a, 3), 1);
        }
    }

    #[test]
    fn default_polynomials_are_irreducible() {
        for (p, k) in [(2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (2, 7), (2, 8), (3, 2), (3, 3), (3, 4), (5, 2), (5, 3), (7, 2), (7, 3), (11, 2), (13, 2), (17, 2), (19, 2), (23, 2), (31, 2), (3, 1), (13, 1)] {
            let f = Field::new(p, k, None).unwrap();
            assert_eq!(f.size(), (p as usize).pow(k as u32));
        }
    }

    #[test]
    fn reducible_rejected() {
        // x² + 1 = (x + 1)² over Z_2
        assert!(matches!(
            Field::new(2, 2, Some(vec![1, 0, 1])),
            Err(Error::ReduciblePolynomial { p: 2 })
        ));
    }

    #[test]
    fn forms() {
        let f4 = Field::new(2, 2, None).unwrap();
        assert!(matches!(LinearForm::new(&f4, vec![0, 0]), Err(Error::DegenerateForm)));
        let b = LinearForm::new(&f4, vec![0, 1]).unwrap();
        assert_eq!(b.eval(&f4, f4.theta()), 1);
        assert_eq!(LinearForm::constant_term(&f4).eval(&f4, f4.theta()), 0);
    }
}
