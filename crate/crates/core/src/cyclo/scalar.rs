//! Elements of cyclotomic fields `Q(ζ_m)`.
//!
//! A value of order `m` is stored by its coordinates in the power basis
//! `1, ζ_m, …, ζ_m^{φ(m)-1}`, i.e. the remainder of the defining polynomial
//! modulo `Φ_m`. That remainder is unique, so equality and the zero test are
//! exact. Arithmetic between different orders embeds both sides into the lcm.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive};
use smallvec::{smallvec, SmallVec};

use super::rational::{big_gcd, exact_isqrt, Rational};
use crate::error::{Error, Result};
use crate::numth;

/// Largest cyclotomic order arithmetic will embed into.
pub const MAX_ORDER: u64 = 1 << 16;

pub(crate) type Coeffs = SmallVec<[Rational; 4]>;

#[derive(Clone)]
pub struct CycScalar {
    order: u32,
    coeffs: Coeffs,
}

/// Reduce a polynomial in `ζ_m` (arbitrary length) to canonical coordinates.
fn reduce(order: u64, mut buf: Vec<Rational>) -> Coeffs {
    let m = order as usize;
    if buf.len() > m {
        for j in m..buf.len() {
            if !buf[j].is_zero() {
                let c = std::mem::take(&mut buf[j]);
                buf[j % m] += &c;
            }
        }
        buf.truncate(m);
    }
    let phi = numth::cyclotomic_poly(order);
    let deg = phi.len() - 1;
    if buf.len() > deg {
        for d in (deg..buf.len()).rev() {
            if buf[d].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut buf[d]);
            for (t, &pc) in phi.iter().enumerate().take(deg) {
                if pc != 0 {
                    let delta = &c * &Rational::from_int(pc);
                    buf[d - deg + t] -= &delta;
                }
            }
        }
        buf.truncate(deg);
    }
    buf.resize(deg, Rational::zero());
    buf.into_iter().collect()
}

fn check_order(order: u64) -> u64 {
    assert!(
        order <= MAX_ORDER,
        "cyclotomic order {order} exceeds the cap {MAX_ORDER}"
    );
    order
}

impl CycScalar {
    /// Canonical representative of `Σ raw[j] ζ_order^j`.
    pub fn canonicalize(order: u64, raw: Vec<Rational>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidArgument("cyclotomic order must be ≥ 1".into()));
        }
        if order > MAX_ORDER {
            return Err(Error::OrderCap(order));
        }
        if raw.len() != order as usize {
            return Err(Error::InvalidArgument(format!(
                "expected {order} coefficients, got {}",
                raw.len()
            )));
        }
        Ok(Self::from_poly(order, raw))
    }

    /// Like [`canonicalize`](Self::canonicalize) but accepts any length.
    pub(crate) fn from_poly(order: u64, raw: Vec<Rational>) -> Self {
        CycScalar {
            order: order as u32,
            coeffs: reduce(order, raw),
        }
    }

    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_int(n))
    }

    pub fn from_rational(q: Rational) -> Self {
        CycScalar {
            order: 1,
            coeffs: smallvec![q],
        }
    }

    /// `ζ_m^j`.
    pub fn root_of_unity(m: u64, j: i64) -> Self {
        check_order(m);
        let e = j.rem_euclid(m as i64) as usize;
        let mut raw = vec![Rational::zero(); m as usize];
        raw[e] = Rational::one();
        Self::from_poly(m, raw)
    }

    /// The imaginary unit, `ζ_4`.
    pub fn i() -> Self {
        Self::root_of_unity(4, 1)
    }

    pub fn order(&self) -> u64 {
        self.order as u64
    }

    /// Canonical coordinates (length `φ(order)`).
    pub fn power_coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Canonical coefficients padded to length `order`.
    pub fn coeffs(&self) -> Vec<Rational> {
        let mut v: Vec<Rational> = self.coeffs.to_vec();
        v.resize(self.order as usize, Rational::zero());
        v
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Rational::is_zero)
    }

    /// The value as a rational, when it is one.
    pub fn as_rational(&self) -> Option<Rational> {
        self.coeffs[1..]
            .iter()
            .all(Rational::is_zero)
            .then(|| self.coeffs[0].clone())
    }

    /// Value-preserving embedding into `Q(ζ_new_order)`.
    pub fn embed(&self, new_order: u64) -> Result<Self> {
        if new_order == 0 || new_order % self.order() != 0 {
            return Err(Error::InvalidArgument(format!(
                "cannot embed order {} into order {new_order}",
                self.order
            )));
        }
        if new_order > MAX_ORDER {
            return Err(Error::OrderCap(new_order));
        }
        Ok(self.embed_unchecked(new_order))
    }

    fn embed_unchecked(&self, new_order: u64) -> Self {
        if new_order == self.order() {
            return self.clone();
        }
        if self.order == 1 {
            let mut coeffs: Coeffs = smallvec![Rational::zero(); numth::euler_phi(new_order) as usize];
            coeffs[0] = self.coeffs[0].clone();
            return CycScalar {
                order: new_order as u32,
                coeffs,
            };
        }
        let t = (new_order / self.order()) as usize;
        let mut raw = vec![Rational::zero(); new_order as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                raw[j * t] = c.clone();
            }
        }
        Self::from_poly(new_order, raw)
    }

    pub(crate) fn unify_order(a: u64, b: u64) -> u64 {
        check_order(numth::lcm(a, b))
    }

    /// Image under `ζ ↦ ζ^k` for `k` coprime to the order.
    pub fn galois(&self, k: u64) -> Self {
        let m = self.order();
        debug_assert_eq!(numth::gcd(k % m.max(1), m), 1);
        if m <= 2 {
            return self.clone();
        }
        let mut raw = vec![Rational::zero(); m as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                raw[(j as u64 * k % m) as usize] += c;
            }
        }
        Self::from_poly(m, raw)
    }

    /// Complex conjugate, `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        let m = self.order();
        if m <= 2 {
            return self.clone();
        }
        self.galois(m - 1)
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(q) = self.as_rational() {
            return q.recip().map(Self::from_rational);
        }
        let m = self.order();
        // x · Π_{k≠1} σ_k(x) is the (rational) field norm.
        let mut others = CycScalar::one();
        for k in 2..m {
            if numth::gcd(k, m) == 1 {
                others = &others * &self.galois(k);
            }
        }
        let norm = (self * &others).as_rational()?;
        Some(others.scale(&norm.recip()?))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        CycScalar {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = CycScalar::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `|x|²`, a totally real element.
    pub fn norm_sqr(&self) -> Self {
        self * &self.conj()
    }

    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }

    pub fn to_complex(&self) -> Complex64 {
        let m = self.order() as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| {
                let th = std::f64::consts::TAU * j as f64 / m;
                Complex64::new(th.cos(), th.sin()) * c.to_f64()
            })
            .sum()
    }

    /// `(n, j)` with `self = ζ_n^j`, `n = lcm(2, order)`, if `self` is a
    /// root of unity.
    pub fn as_root_of_unity(&self) -> Option<(u64, u64)> {
        let n = numth::lcm(2, self.order());
        (0..n).find_map(|j| (CycScalar::root_of_unity(n, j as i64) == *self).then_some((n, j)))
    }

    /// Positive square root of a non-negative rational, as a cyclotomic
    /// (`√2 = ζ_8 + ζ_8^{-1}`, `√p` from quadratic Gauss sums).
    pub fn sqrt_rational(q: &Rational) -> Result<Self> {
        if q.is_negative() {
            return Err(Error::InvalidArgument(format!("square root of negative {q}")));
        }
        if q.is_zero() {
            return Ok(CycScalar::zero());
        }
        // √(a/b) = √(ab) / b.
        let (a, b) = (q.numer(), q.denom());
        let n = &a * &b;
        let g = big_gcd(&a, &b);
        debug_assert!(g == BigInt::from(1));
        let (square, free) = split_square(&n)?;
        let mut root = CycScalar::from_rational(
            Rational::from_big(square, b).expect("nonzero denominator"),
        );
        for (p, _) in numth::factorize(free) {
            root = &root * &sqrt_prime(p);
        }
        Ok(root)
    }
}

fn split_square(n: &BigInt) -> Result<(BigInt, u64)> {
    if let Some(r) = exact_isqrt(n) {
        return Ok((r, 1));
    }
    let small = n
        .abs()
        .to_u64()
        .ok_or_else(|| Error::InvalidArgument("square root argument too large to factor".into()))?;
    let mut square = 1u64;
    let mut free = 1u64;
    for (p, e) in numth::factorize(small) {
        square *= p.pow(e / 2);
        if e % 2 == 1 {
            free *= p;
        }
    }
    Ok((BigInt::from(square), free))
}

fn sqrt_prime(p: u64) -> CycScalar {
    if p == 2 {
        return &CycScalar::root_of_unity(8, 1) + &CycScalar::root_of_unity(8, -1);
    }
    let mut raw = vec![Rational::zero(); p as usize];
    for a in 1..p {
        raw[a as usize] = Rational::from_int(numth::legendre(a as i64, p));
    }
    let gauss = CycScalar::from_poly(p, raw);
    if p % 4 == 1 {
        gauss
    } else {
        &(-CycScalar::i()) * &gauss
    }
}

impl PartialEq for CycScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let m = CycScalar::unify_order(self.order(), other.order());
        self.embed_unchecked(m).coeffs == other.embed_unchecked(m).coeffs
    }
}

impl Eq for CycScalar {}

impl Default for CycScalar {
    fn default() -> Self {
        CycScalar::zero()
    }
}

impl From<Rational> for CycScalar {
    fn from(q: Rational) -> Self {
        CycScalar::from_rational(q)
    }
}

impl From<i64> for CycScalar {
    fn from(n: i64) -> Self {
        CycScalar::from_int(n)
    }
}

impl<'a> Add<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    fn add(self, rhs: &'a CycScalar) -> CycScalar {
        if self.order == rhs.order {
            return CycScalar {
                order: self.order,
                coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
            };
        }
        if rhs.order == 1 {
            let mut out = self.clone();
            out.coeffs[0] += &rhs.coeffs[0];
            return out;
        }
        if self.order == 1 {
            let mut out = rhs.clone();
            out.coeffs[0] += &self.coeffs[0];
            return out;
        }
        let m = CycScalar::unify_order(self.order(), rhs.order());
        &self.embed_unchecked(m) + &rhs.embed_unchecked(m)
    }
}

impl<'a> Sub<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    fn sub(self, rhs: &'a CycScalar) -> CycScalar {
        self + &(-rhs)
    }
}

impl Neg for &CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        CycScalar {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        -&self
    }
}

impl<'a> Mul<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    fn mul(self, rhs: &'a CycScalar) -> CycScalar {
        if rhs.order == 1 {
            return self.scale(&rhs.coeffs[0]);
        }
        if self.order == 1 {
            return rhs.scale(&self.coeffs[0]);
        }
        if self.order != rhs.order {
            let m = CycScalar::unify_order(self.order(), rhs.order());
            return &self.embed_unchecked(m) * &rhs.embed_unchecked(m);
        }
        let n = self.coeffs.len();
        let mut buf = vec![Rational::zero(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    buf[i + j] += &(a * b);
                }
            }
        }
        CycScalar::from_poly(self.order(), buf)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $m(self, rhs: CycScalar) -> CycScalar {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Debug for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{q}");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match j {
                0 => write!(f, "{c}")?,
                _ => write!(f, "{c}·ζ{}^{j}", self.order)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn canonicalize_examples() {
        let minus_one = CycScalar::canonicalize(4, vec![q(0), q(0), q(1), q(0)]).unwrap();
        assert_eq!(minus_one, CycScalar::from_int(-1));
        let vanishing = CycScalar::canonicalize(3, vec![q(1), q(1), q(1)]).unwrap();
        assert!(vanishing.is_zero());
        let zeta2 = CycScalar::canonicalize(2, vec![q(0), q(1)]).unwrap();
        let zeta4_sq = CycScalar::canonicalize(4, vec![q(0), q(0), q(1), q(0)]).unwrap();
        assert_eq!(zeta2.embed(4).unwrap(), zeta4_sq);
        assert!(CycScalar::canonicalize(0, vec![]).is_err());
    }

    #[test]
    fn embed_examples() {
        let one2 = CycScalar::one().embed(2).unwrap();
        assert_eq!(one2.embed(4).unwrap(), CycScalar::one());
        assert_eq!(one2.embed(4).unwrap().order(), 4);
        let z2 = CycScalar::root_of_unity(2, 1);
        assert_eq!(z2.embed(8).unwrap(), CycScalar::root_of_unity(8, 4));
        let z3 = CycScalar::root_of_unity(3, 1);
        assert_eq!(z3.embed(12).unwrap(), CycScalar::root_of_unity(12, 4));
        assert!(z3.embed(8).is_err());
    }

    #[test]
    fn padded_coeffs_have_order_length() {
        let z = CycScalar::root_of_unity(8, 3);
        let c = z.coeffs();
        assert_eq!(c.len(), 8);
        assert!(c[4..].iter().all(Rational::is_zero));
    }

    #[test]
    fn inverse_and_sqrt() {
        let x = &CycScalar::from_int(1) + &CycScalar::root_of_unity(5, 2);
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
        for n in [2i64, 3, 5, 6, 7, 12, 50] {
            let r = CycScalar::sqrt_rational(&q(n)).unwrap();
            assert_eq!(&r * &r, CycScalar::from_int(n), "sqrt {n}");
            assert!(r.to_complex().re > 0.0);
        }
        let h = CycScalar::sqrt_rational(&Rational::new(1, 2)).unwrap();
        assert_eq!(&h * &h, CycScalar::from_rational(Rational::new(1, 2)));
    }

    #[test]
    fn root_of_unity_identification() {
        let w = CycScalar::root_of_unity(6, 1);
        let (n, j) = w.as_root_of_unity().unwrap();
        assert_eq!(CycScalar::root_of_unity(n, j as i64), w);
        assert!(CycScalar::from_int(2).as_root_of_unity().is_none());
    }

    fn arb_scalar() -> impl Strategy<Value = CycScalar> {
        (1u64..=24, proptest::collection::vec((-20i64..20, 1i64..6), 24)).prop_map(|(m, cs)| {
            let raw = cs.iter().take(m as usize).map(|&(n, d)| Rational::new(n, d)).collect();
            CycScalar::canonicalize(m, raw).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn ring_laws(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        }

        #[test]
        fn float_shadow_agrees(a in arb_scalar(), b in arb_scalar()) {
            let exact = (&a * &b).to_complex();
            let approx = a.to_complex() * b.to_complex();
            prop_assert!((exact - approx).norm() < 1e-9);
        }
    }
}
