//! Dense matrices over a cyclotomic field.
//!
//! Every entry of a `CycMatrix` carries the same cyclotomic order (the lcm
//! of the orders it was built from), so products and sums never re-embed
//! entry by entry. Multiplication skips zero entries: group elements here are
//! mostly monomial, which makes products close to linear in the dimension.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::linalg;
use super::rational::Rational;
use super::scalar::CycScalar;
use crate::error::{Error, Result};

#[derive(Clone)]
pub struct CycMatrix {
    rows: usize,
    cols: usize,
    order: u64,
    data: Vec<CycScalar>,
}

impl CycMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<CycScalar>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument("matrix dimensions must be positive".into()));
        }
        if entries.len() != rows * cols {
            return Err(Error::InvalidArgument(format!(
                "expected {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        let order = entries
            .iter()
            .try_fold(1u64, |acc, e| unify(acc, e.order()))?;
        let data = entries
            .into_iter()
            .map(|e| e.embed(order))
            .collect::<Result<_>>()?;
        Ok(CycMatrix {
            rows,
            cols,
            order,
            data,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> CycScalar) -> Self {
        let entries = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        Self::new(rows, cols, entries).expect("from_fn produced consistent entries")
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        Self::from_fn(r, c, |i, j| CycScalar::from_int(rows[i][j]))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| CycScalar::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| CycScalar::from_int((i == j) as i64))
    }

    pub fn scalar(n: usize, s: &CycScalar) -> Self {
        Self::identity(n).scale(s)
    }

    pub fn diag(d: &[CycScalar]) -> Self {
        let n = d.len();
        Self::from_fn(n, n, |i, j| if i == j { d[i].clone() } else { CycScalar::zero() })
    }

    /// Matrix with the given vectors as columns.
    pub fn from_columns(cols: &[Vec<CycScalar>]) -> Result<Self> {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        if cols.iter().any(|v| v.len() != r) {
            return Err(Error::InvalidArgument("columns have different lengths".into()));
        }
        let mut entries = Vec::with_capacity(r * c);
        for i in 0..r {
            for col in cols {
                entries.push(col[i].clone());
            }
        }
        Self::new(r, c, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> &CycScalar {
        &self.data[i * self.cols + j]
    }

    pub fn entries(&self) -> &[CycScalar] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<CycScalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<CycScalar> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn embed(&self, order: u64) -> Result<Self> {
        if order == self.order {
            return Ok(self.clone());
        }
        Ok(CycMatrix {
            rows: self.rows,
            cols: self.cols,
            order,
            data: self.data.iter().map(|e| e.embed(order)).collect::<Result<_>>()?,
        })
    }

    fn aligned(a: &CycMatrix, b: &CycMatrix) -> (CycMatrix, CycMatrix) {
        let m = CycScalar::unify_order(a.order, b.order);
        (
            a.embed(m).expect("lcm order"),
            b.embed(m).expect("lcm order"),
        )
    }

    pub fn checked_mul(&self, rhs: &CycMatrix) -> Result<CycMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch {
                op: "mul",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        if self.order != rhs.order {
            let (a, b) = Self::aligned(self, rhs);
            return a.checked_mul(&b);
        }
        let zero = CycScalar::zero().embed(self.order)?;
        let mut out = vec![zero; self.rows * rhs.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let slot = &mut out[i * rhs.cols + j];
                    let prod = a * b;
                    *slot = if slot.is_zero() { prod } else { &*slot + &prod };
                }
            }
        }
        Ok(CycMatrix {
            rows: self.rows,
            cols: rhs.cols,
            order: self.order,
            data: out,
        })
    }

    pub fn checked_add(&self, rhs: &CycMatrix) -> Result<CycMatrix> {
        if self.shape() != rhs.shape() {
            return Err(Error::ShapeMismatch {
                op: "add",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        if self.order != rhs.order {
            let (a, b) = Self::aligned(self, rhs);
            return a.checked_add(&b);
        }
        Ok(CycMatrix {
            rows: self.rows,
            cols: self.cols,
            order: self.order,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn checked_sub(&self, rhs: &CycMatrix) -> Result<CycMatrix> {
        self.checked_add(&-rhs)
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> CycMatrix {
        CycMatrix {
            rows: self.cols,
            cols: self.rows,
            order: self.order,
            data: (0..self.rows * self.cols)
                .map(|k| {
                    let (i, j) = (k / self.rows, k % self.rows);
                    self.get(j, i).conj()
                })
                .collect(),
        }
    }

    pub fn transpose(&self) -> CycMatrix {
        CycMatrix {
            rows: self.cols,
            cols: self.rows,
            order: self.order,
            data: (0..self.rows * self.cols)
                .map(|k| self.get(k % self.rows, k / self.rows).clone())
                .collect(),
        }
    }

    pub fn trace(&self) -> Result<CycScalar> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch {
                op: "trace",
                left: self.shape(),
                right: self.shape(),
            });
        }
        Ok((0..self.rows).fold(CycScalar::zero(), |acc, i| &acc + self.get(i, i)))
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &CycMatrix) -> CycMatrix {
        if self.order != rhs.order {
            let (a, b) = Self::aligned(self, rhs);
            return a.kron(&b);
        }
        let (r, c) = (self.rows * rhs.rows, self.cols * rhs.cols);
        let zero = CycScalar::zero().embed(self.order).expect("same order");
        let mut data = vec![zero; r * c];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        let b = rhs.get(k, l);
                        if !b.is_zero() {
                            data[(i * rhs.rows + k) * c + j * rhs.cols + l] = a * b;
                        }
                    }
                }
            }
        }
        CycMatrix {
            rows: r,
            cols: c,
            order: self.order,
            data,
        }
    }

    pub fn kron_all(factors: &[CycMatrix]) -> Option<CycMatrix> {
        let (first, rest) = factors.split_first()?;
        Some(rest.iter().fold(first.clone(), |acc, f| acc.kron(f)))
    }

    pub fn scale(&self, s: &CycScalar) -> CycMatrix {
        let data: Vec<CycScalar> = self.data.iter().map(|e| e * s).collect();
        CycMatrix::new(self.rows, self.cols, data).expect("same shape")
    }

    pub fn scale_rational(&self, q: &Rational) -> CycMatrix {
        CycMatrix {
            rows: self.rows,
            cols: self.cols,
            order: self.order,
            data: self.data.iter().map(|e| e.scale(q)).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> CycMatrix {
        let mut base = self.clone();
        let mut acc = CycMatrix::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn mul_vec(&self, v: &[CycScalar]) -> Result<Vec<CycScalar>> {
        if v.len() != self.cols {
            return Err(Error::ShapeMismatch {
                op: "mul_vec",
                left: self.shape(),
                right: (v.len(), 1),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = CycScalar::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc = &acc + &(a * x);
                    }
                }
                acc
            })
            .collect())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(CycScalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    /// `Some(λ)` when `self = λ·I`.
    pub fn as_scalar(&self) -> Option<CycScalar> {
        if !self.is_square() {
            return None;
        }
        let lambda = self.get(0, 0).clone();
        let ok = (0..self.rows).all(|i| {
            (0..self.cols).all(|j| {
                let e = self.get(i, j);
                if i == j {
                    *e == lambda
                } else {
                    e.is_zero()
                }
            })
        });
        ok.then_some(lambda)
    }

    pub fn is_unitary(&self) -> bool {
        self.is_square() && (&self.dagger() * self).is_identity()
    }

    pub fn is_hermitian(&self) -> bool {
        *self == self.dagger()
    }

    /// `Some(λ)` with `self = λ·reference` exactly, `None` if no such λ.
    /// The zero matrix is proportional to anything with `λ = 0`.
    pub fn is_proportional(&self, reference: &CycMatrix) -> Result<Option<CycScalar>> {
        if self.shape() != reference.shape() {
            return Err(Error::ShapeMismatch {
                op: "is_proportional",
                left: self.shape(),
                right: reference.shape(),
            });
        }
        let Some(pivot) = reference.data.iter().position(|e| !e.is_zero()) else {
            return Err(Error::ZeroReference);
        };
        let lambda = &self.data[pivot] * &reference.data[pivot].inv().expect("nonzero pivot");
        let ok = self
            .data
            .iter()
            .zip(&reference.data)
            .all(|(a, b)| *a == &lambda * b);
        Ok(ok.then_some(lambda))
    }

    pub fn det(&self) -> Result<CycScalar> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch {
                op: "det",
                left: self.shape(),
                right: self.shape(),
            });
        }
        Ok(linalg::determinant(self))
    }

    pub fn inverse(&self) -> Result<CycMatrix> {
        linalg::inverse(self)
    }

    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<CycScalar>> = (0..self.rows).map(|i| self.row(i)).collect();
        linalg::rank(rows)
    }

    /// Flattened canonical coordinates; equal keys mean equal matrices as
    /// long as both sides carry the same order.
    pub fn key(&self) -> Vec<Rational> {
        self.data
            .iter()
            .flat_map(|e| e.power_coeffs().iter().cloned())
            .collect()
    }

    /// Key of the matrix rescaled so its first non-zero entry is 1. Two
    /// matrices of equal order share this key iff they are proportional.
    pub fn projective_key(&self) -> Option<Vec<Rational>> {
        let pivot = self.data.iter().find(|e| !e.is_zero())?;
        let inv = pivot.inv()?;
        Some(self.scale(&inv).embed(self.order).ok()?.key())
    }

    pub fn to_complex(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).to_complex())
    }
}

fn unify(a: u64, b: u64) -> Result<u64> {
    let m = crate::numth::lcm(a, b);
    if m > super::scalar::MAX_ORDER {
        return Err(Error::OrderCap(m));
    }
    Ok(m)
}

impl PartialEq for CycMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.shape() == other.shape() && self.data.iter().zip(&other.data).all(|(a, b)| a == b)
    }
}

impl Eq for CycMatrix {}

impl std::fmt::Debug for CycMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "CycMatrix {}x{} (order {})", self.rows, self.cols, self.order)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<'a> Mul<&'a CycMatrix> for &'a CycMatrix {
    type Output = CycMatrix;
    /// Panics on a shape mismatch; use [`CycMatrix::checked_mul`] otherwise.
    fn mul(self, rhs: &'a CycMatrix) -> CycMatrix {
        self.checked_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl<'a> Add<&'a CycMatrix> for &'a CycMatrix {
    type Output = CycMatrix;
    fn add(self, rhs: &'a CycMatrix) -> CycMatrix {
        self.checked_add(rhs).expect("matrix sum shape mismatch")
    }
}

impl<'a> Sub<&'a CycMatrix> for &'a CycMatrix {
    type Output = CycMatrix;
    fn sub(self, rhs: &'a CycMatrix) -> CycMatrix {
        self.checked_sub(rhs).expect("matrix difference shape mismatch")
    }
}

impl Neg for &CycMatrix {
    type Output = CycMatrix;
    fn neg(self) -> CycMatrix {
        CycMatrix {
            rows: self.rows,
            cols: self.cols,
            order: self.order,
            data: self.data.iter().map(|e| -e).collect(),
        }
    }
}

/// Hermitian inner product `⟨u, v⟩ = Σ conj(u_i) v_i`.
pub fn inner(u: &[CycScalar], v: &[CycScalar]) -> CycScalar {
    u.iter()
        .zip(v)
        .filter(|(a, b)| !a.is_zero() && !b.is_zero())
        .fold(CycScalar::zero(), |acc, (a, b)| &acc + &(&a.conj() * b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hadamard() -> CycMatrix {
        CycMatrix::from_int_rows(&[&[1, 1], &[1, -1]])
    }

    #[test]
    fn basic_ops() {
        assert_eq!(CycMatrix::identity(4).trace().unwrap(), CycScalar::from_int(4));
        assert_eq!(
            CycMatrix::identity(2).kron(&CycMatrix::identity(2)),
            CycMatrix::identity(4)
        );
        let h = hadamard();
        assert_eq!(&h * &h, CycMatrix::scalar(2, &CycScalar::from_int(2)));
        assert!(CycMatrix::identity(2).checked_mul(&CycMatrix::identity(3)).is_err());
    }

    #[test]
    fn proportionality() {
        let i2 = CycMatrix::identity(2);
        let two = CycMatrix::scalar(2, &CycScalar::from_int(2));
        assert_eq!(two.is_proportional(&i2).unwrap(), Some(CycScalar::from_int(2)));
        assert_eq!(
            CycMatrix::zeros(2, 2).is_proportional(&i2).unwrap(),
            Some(CycScalar::zero())
        );
        let d = CycMatrix::diag(&[CycScalar::from_int(1), CycScalar::from_int(2)]);
        assert_eq!(d.is_proportional(&i2).unwrap(), None);
        assert!(matches!(
            i2.is_proportional(&CycMatrix::zeros(2, 2)),
            Err(Error::ZeroReference)
        ));
    }

    #[test]
    fn dagger_and_trace_identities() {
        let w = CycScalar::root_of_unity(8, 1);
        let a = CycMatrix::from_fn(3, 3, |i, j| w.pow((i * 3 + j) as u64));
        let b = CycMatrix::from_fn(3, 3, |i, j| CycScalar::from_int(i as i64 - 2 * j as i64));
        assert_eq!(a.dagger().dagger(), a);
        assert_eq!((&a * &b).trace().unwrap(), (&b * &a).trace().unwrap());
        assert_eq!((&a * &b).dagger(), &b.dagger() * &a.dagger());
    }
}
