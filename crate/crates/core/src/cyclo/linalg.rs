//! Exact Gaussian elimination over cyclotomic fields.

use super::matrix::{inner, CycMatrix};
use super::rational::Rational;
use super::scalar::CycScalar;
use crate::error::{Error, Result};

/// Reduced row echelon form in place. Zero rows are dropped; returns the
/// pivot column of each remaining row.
pub fn row_reduce(rows: &mut Vec<Vec<CycScalar>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        if !inv.is_one() {
            for x in rows[r].iter_mut().skip(c) {
                if !x.is_zero() {
                    *x = &*x * &inv;
                }
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            eliminate(row, &pivot_row, &f, c);
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

fn eliminate(row: &mut [CycScalar], pivot_row: &[CycScalar], f: &CycScalar, from: usize) {
    for (x, p) in row.iter_mut().zip(pivot_row).skip(from) {
        if !p.is_zero() {
            *x = &*x - &(f * p);
        }
    }
}

pub fn rank(mut rows: Vec<Vec<CycScalar>>) -> usize {
    row_reduce(&mut rows).len()
}

/// Basis of `{x : A x = 0}`.
pub fn nullspace(a: &CycMatrix) -> Vec<Vec<CycScalar>> {
    let mut rows: Vec<Vec<CycScalar>> = (0..a.rows()).map(|i| a.row(i)).collect();
    let pivots = row_reduce(&mut rows);
    let n = a.cols();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![CycScalar::zero(); n];
            v[f] = CycScalar::one();
            for (row, &pc) in rows.iter().zip(&pivots) {
                v[pc] = -&row[f];
            }
            v
        })
        .collect()
}

pub fn determinant(a: &CycMatrix) -> CycScalar {
    let n = a.rows();
    let mut m: Vec<Vec<CycScalar>> = (0..n).map(|i| a.row(i)).collect();
    let mut det = CycScalar::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return CycScalar::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det = &det * &m[c][c];
        let inv = m[c][c].inv().expect("nonzero pivot");
        let pivot_row = m[c].clone();
        for row in m.iter_mut().skip(c + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] * &inv;
            eliminate(row, &pivot_row, &f, c);
        }
    }
    det
}

pub fn inverse(a: &CycMatrix) -> Result<CycMatrix> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch {
            op: "inverse",
            left: a.shape(),
            right: a.shape(),
        });
    }
    let n = a.rows();
    let mut rows: Vec<Vec<CycScalar>> = (0..n)
        .map(|i| {
            let mut r = a.row(i);
            r.extend((0..n).map(|j| CycScalar::from_int((i == j) as i64)));
            r
        })
        .collect();
    let pivots = row_reduce(&mut rows);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(Error::Singular);
    }
    let entries = rows.into_iter().flat_map(|r| r.into_iter().skip(n)).collect();
    CycMatrix::new(n, n, entries)
}

/// Incrementally grown basis of a subspace, kept in reduced echelon form so
/// membership is a single reduction.
#[derive(Clone, Debug, Default)]
pub struct SpanBasis {
    rows: Vec<Vec<CycScalar>>,
    pivots: Vec<usize>,
}

impl SpanBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[CycScalar]) -> Vec<CycScalar> {
        let mut v = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            if !v[pc].is_zero() {
                let f = v[pc].clone();
                eliminate(&mut v, row, &f, 0);
            }
        }
        v
    }

    pub fn contains(&self, v: &[CycScalar]) -> bool {
        self.reduce(v).iter().all(CycScalar::is_zero)
    }

    /// Adds `v`; returns false when it was already in the span.
    pub fn insert(&mut self, v: &[CycScalar]) -> bool {
        let mut v = self.reduce(v);
        let Some(pc) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[pc].inv().expect("nonzero pivot");
        for x in v.iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        for row in self.rows.iter_mut() {
            if !row[pc].is_zero() {
                let f = row[pc].clone();
                eliminate(row, &v, &f, 0);
            }
        }
        self.rows.push(v);
        self.pivots.push(pc);
        true
    }

    pub fn vectors(&self) -> &[Vec<CycScalar>] {
        &self.rows
    }
}

/// Orthonormal basis of the span of `vectors` (Gram–Schmidt in input order).
/// Normalisation needs each squared norm to be rational, which holds for
/// every projector built from the group algebras in this crate.
pub fn orthonormal_basis(vectors: &[Vec<CycScalar>]) -> Result<Vec<Vec<CycScalar>>> {
    let mut ortho: Vec<(Vec<CycScalar>, CycScalar)> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for (u, uu) in &ortho {
            let c = &inner(u, &w) * &uu.inv().expect("nonzero norm");
            if !c.is_zero() {
                for (x, y) in w.iter_mut().zip(u) {
                    if !y.is_zero() {
                        *x = &*x - &(&c * y);
                    }
                }
            }
        }
        let ww = inner(&w, &w);
        if !ww.is_zero() {
            ortho.push((w, ww));
        }
    }
    ortho
        .into_iter()
        .map(|(w, ww)| normalize_with(&w, &ww))
        .collect()
}

/// `v / ‖v‖`, provided `‖v‖²` is rational.
pub fn normalize(v: &[CycScalar]) -> Result<Vec<CycScalar>> {
    let nn = inner(v, v);
    if nn.is_zero() {
        return Err(Error::InvalidArgument("cannot normalise the zero vector".into()));
    }
    normalize_with(v, &nn)
}

fn normalize_with(v: &[CycScalar], nn: &CycScalar) -> Result<Vec<CycScalar>> {
    let q: Rational = nn.as_rational().ok_or_else(|| {
        Error::NoExactNormalization(format!("squared norm {nn} is irrational"))
    })?;
    let inv_norm = CycScalar::sqrt_rational(&q)?
        .inv()
        .expect("positive norm");
    Ok(v.iter().map(|x| x * &inv_norm).collect())
}

/// Column space of `a` as an orthonormal list of vectors.
pub fn range_basis(a: &CycMatrix) -> Result<Vec<Vec<CycScalar>>> {
    let cols: Vec<Vec<CycScalar>> = (0..a.cols()).map(|j| a.column(j)).collect();
    let mut span = SpanBasis::new();
    let independent: Vec<Vec<CycScalar>> = cols
        .into_iter()
        .filter(|c| span.insert(c))
        .collect();
    orthonormal_basis(&independent)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> CycMatrix {
        CycMatrix::from_int_rows(rows)
    }

    #[test]
    fn det_and_inverse() {
        let a = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(determinant(&a), CycScalar::from_int(1));
        let inv = inverse(&a).unwrap();
        assert!((&a * &inv).is_identity());
        assert!(matches!(inverse(&m(&[&[1, 2], &[2, 4]])), Err(Error::Singular)));
    }

    #[test]
    fn complex_inverse() {
        let i = CycScalar::i();
        let a = CycMatrix::from_fn(2, 2, |r, c| if r == c { CycScalar::one() } else { i.clone() });
        let inv = inverse(&a).unwrap();
        assert!((&inv * &a).is_identity());
        assert_eq!(determinant(&a), CycScalar::from_int(2));
    }

    #[test]
    fn nullspace_dimension() {
        let a = m(&[&[1, 1, 0], &[0, 0, 0]]);
        let ns = nullspace(&a);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(a.mul_vec(v).unwrap().iter().all(CycScalar::is_zero));
        }
    }

    #[test]
    fn gram_schmidt_orthonormal() {
        let vs = vec![
            vec![CycScalar::one(), CycScalar::one(), CycScalar::zero()],
            vec![CycScalar::one(), CycScalar::zero(), CycScalar::one()],
        ];
        let on = orthonormal_basis(&vs).unwrap();
        assert_eq!(on.len(), 2);
        assert!(inner(&on[0], &on[1]).is_zero());
        assert!(inner(&on[0], &on[0]).is_one());
        assert!(inner(&on[1], &on[1]).is_one());
    }

    #[test]
    fn span_membership() {
        let mut s = SpanBasis::new();
        let a = vec![CycScalar::one(), CycScalar::from_int(2)];
        assert!(s.insert(&a));
        assert!(!s.insert(&[CycScalar::from_int(3), CycScalar::from_int(6)]));
        assert!(!s.contains(&[CycScalar::one(), CycScalar::zero()]));
    }
}
