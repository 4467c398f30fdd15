use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::characters::NormalSubgroup;
use crate::cyclo::{CycMatrix, CycScalar, Rational};
use crate::error::{Error, Result};

const TOLERANCE: f64 = 1e-9;
const ATTEMPTS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitMethod {
    /// `d_χ = 1`, nothing to split.
    Trivial,
    /// Exact spectral projectors of group elements commuting with the
    /// pieces found so far.
    Commuting,
    /// Spectral splitting in floating point, entries recovered exactly.
    Reconstructed,
    /// Spectral splitting in floating point, no exact form found.
    NumericOnly,
}

#[derive(Clone, Debug)]
pub enum Idempotent {
    Exact(CycMatrix),
    Numeric(DMatrix<Complex64>),
}

#[derive(Clone, Debug)]
pub struct IdempotentSplit {
    pub method: SplitMethod,
    pub idempotents: Vec<Idempotent>,
}

impl IdempotentSplit {
    pub fn exact(&self) -> Option<Vec<CycMatrix>> {
        self.idempotents
            .iter()
            .map(|e| match e {
                Idempotent::Exact(m) => Some(m.clone()),
                Idempotent::Numeric(_) => None,
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let method = match self.method {
            SplitMethod::Trivial => "trivial",
            SplitMethod::Commuting => "commuting",
            SplitMethod::Reconstructed => "reconstructed",
            SplitMethod::NumericOnly => "numeric-only",
        };
        let items: Vec<Value> = self
            .idempotents
            .iter()
            .map(|e| match e {
                Idempotent::Exact(m) => m.to_json(),
                Idempotent::Numeric(m) => json!({
                    "numeric": m.row_iter()
                        .map(|r| r.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>())
                        .collect::<Vec<_>>()
                }),
            })
            .collect();
        json!({ "method": method, "idempotents": items })
    }
}

fn rank_of(p: &CycMatrix) -> usize {
    p.trace()
        .ok()
        .and_then(|t| t.as_rational())
        .and_then(|r| r.as_small())
        .map_or(0, |(n, _)| n as usize)
}

/// Orthogonal projectors onto the eigenspaces of a unitary `m` with
/// `m^order = I`, by Lagrange interpolation over the `order`-th roots of
/// unity. Zero projectors are dropped.
fn spectral_projectors(m: &CycMatrix, order: usize) -> Vec<CycMatrix> {
    let n = m.rows();
    let roots: Vec<CycScalar> = (0..order)
        .map(|j| CycScalar::root_of_unity(order as u64, j as i64))
        .collect();
    let mut out = Vec::new();
    for (a, lambda) in roots.iter().enumerate() {
        let mut p = CycMatrix::identity(n);
        for (b, mu) in roots.iter().enumerate() {
            if a != b {
                let shifted = m - &CycMatrix::scalar(n, mu);
                let denom = (lambda - mu).inv().expect("distinct roots");
                p = (&p * &shifted).scale(&denom);
            }
        }
        if !p.is_zero() {
            out.push(p);
        }
    }
    out
}

/// Splits `χ̄` into `d_χ` orthogonal Hermitian idempotents of rank equal to
/// the multiplicity, lying in the group algebra of `N`.
pub fn primitive_idempotents(ns: &NormalSubgroup, chi: usize, seed: u64) -> Result<IdempotentSplit> {
    let projector = ns.projection(chi)?;
    let d = ns.degree(chi);
    let mult = ns.multiplicity(chi)?;
    if mult == 0 {
        return Err(Error::CharacterAbsent);
    }
    if d == 1 {
        return Ok(IdempotentSplit {
            method: SplitMethod::Trivial,
            idempotents: vec![Idempotent::Exact(projector)],
        });
    }
    if let Some(parts) = split_commuting(ns, &projector, mult) {
        verify(ns, &projector, &parts, mult)?;
        return Ok(IdempotentSplit {
            method: SplitMethod::Commuting,
            idempotents: parts.into_iter().map(Idempotent::Exact).collect(),
        });
    }
    split_numeric(ns, &projector, d, mult, seed)
}

fn split_commuting(ns: &NormalSubgroup, projector: &CycMatrix, mult: usize) -> Option<Vec<CycMatrix>> {
    let group = ns.group();
    let mut parts = vec![projector.clone()];
    for h in 0..group.order() {
        if parts.iter().all(|e| rank_of(e) == mult) {
            break;
        }
        let m = group.element(h);
        if parts.iter().any(|e| &(e * m) != &(m * e)) {
            continue;
        }
        let order = group.abstract_group().element_order(h);
        let projs = spectral_projectors(m, order);
        if projs.len() < 2 {
            continue;
        }
        parts = parts
            .into_iter()
            .flat_map(|e| {
                if rank_of(&e) == mult {
                    vec![e]
                } else {
                    projs.iter().map(|p| &e * p).filter(|x| !x.is_zero()).collect()
                }
            })
            .collect();
    }
    parts.iter().all(|e| rank_of(e) == mult).then_some(parts)
}

/// Hermitian, orthogonal, summing to `χ̄`, of the right rank, and with
/// `e g e ∝ e` for every `g` in `N`.
fn verify(ns: &NormalSubgroup, projector: &CycMatrix, parts: &[CycMatrix], mult: usize) -> Result<()> {
    let n = projector.rows();
    let mut sum = CycMatrix::zeros(n, n);
    for (i, e) in parts.iter().enumerate() {
        if !e.is_hermitian() || &(e * e) != e || rank_of(e) != mult {
            return Err(Error::Inconsistent(format!("idempotent {i} is not a projector of rank {mult}")));
        }
        for f in &parts[i + 1..] {
            if !(e * f).is_zero() {
                return Err(Error::Inconsistent("idempotents are not orthogonal".into()));
            }
        }
        for m in ns.group().elements() {
            let ege = &(e * m) * e;
            if !ege.is_zero() && ege.is_proportional(e)?.is_none() {
                return Err(Error::Inconsistent(format!("e_{i} g e_{i} is not proportional to e_{i}")));
            }
        }
        sum = &sum + e;
    }
    if &sum != projector {
        return Err(Error::Inconsistent("idempotents do not sum to the character projector".into()));
    }
    Ok(())
}

pub(crate) fn split_numeric(
    ns: &NormalSubgroup,
    projector: &CycMatrix,
    d: usize,
    mult: usize,
    seed: u64,
) -> Result<IdempotentSplit> {
    let p = projector.to_complex();
    let eig = p.clone().symmetric_eigen();
    let range: Vec<usize> = (0..eig.eigenvalues.len()).filter(|&i| eig.eigenvalues[i] > 0.5).collect();
    let q = DMatrix::from_fn(p.nrows(), range.len(), |r, c| eig.eigenvectors[(r, range[c])]);
    let mats: Vec<DMatrix<Complex64>> = ns.group().elements().iter().map(CycMatrix::to_complex).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut spread = Vec::new();
    for _ in 0..ATTEMPTS {
        let mut h = DMatrix::<Complex64>::zeros(p.nrows(), p.ncols());
        for m in &mats {
            let alpha = Complex64::new(rng.gen_range(-64i32..=64) as f64 / 64.0, 0.0);
            let beta = Complex64::new(0.0, rng.gen_range(-64i32..=64) as f64 / 64.0);
            h += (m + m.adjoint()) * alpha + (m - m.adjoint()) * beta;
        }
        let restricted = q.adjoint() * &h * &q;
        let e = restricted.symmetric_eigen();
        let mut order: Vec<usize> = (0..e.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| e.eigenvalues[a].total_cmp(&e.eigenvalues[b]));
        let mut clusters: Vec<Vec<usize>> = Vec::new();
        for &i in &order {
            match clusters.last_mut() {
                Some(c) if (e.eigenvalues[i] - e.eigenvalues[*c.last().unwrap()]).abs() < TOLERANCE => c.push(i),
                _ => clusters.push(vec![i]),
            }
        }
        spread.push(clusters.len());
        if clusters.len() != d || clusters.iter().any(|c| c.len() != mult) {
            continue;
        }
        let numeric: Vec<DMatrix<Complex64>> = clusters
            .iter()
            .map(|c| {
                let u = DMatrix::from_fn(q.ncols(), c.len(), |r, k| e.eigenvectors[(r, c[k])]);
                let w = &q * u;
                &w * w.adjoint()
            })
            .collect();
        if let Some(exact) = reconstruct(&numeric) {
            if verify(ns, projector, &exact, mult).is_ok() {
                return Ok(IdempotentSplit {
                    method: SplitMethod::Reconstructed,
                    idempotents: exact.into_iter().map(Idempotent::Exact).collect(),
                });
            }
        }
        return Ok(IdempotentSplit {
            method: SplitMethod::NumericOnly,
            idempotents: numeric.into_iter().map(Idempotent::Numeric).collect(),
        });
    }
    Err(Error::NumericSplit(format!(
        "expected {d} eigenvalue clusters of size {mult}; got cluster counts {spread:?}"
    )))
}

/// Reads every entry as a Gaussian rational with small denominator.
fn reconstruct(numeric: &[DMatrix<Complex64>]) -> Option<Vec<CycMatrix>> {
    numeric
        .iter()
        .map(|m| {
            let entries = m
                .iter()
                .map(|z| {
                    let re = Rational::approximate(z.re, 1 << 10)?;
                    let im = Rational::approximate(z.im, 1 << 10)?;
                    if (re.to_f64() - z.re).abs() > TOLERANCE || (im.to_f64() - z.im).abs() > TOLERANCE {
                        return None;
                    }
                    Some(&CycScalar::from_rational(re) + &CycScalar::i().scale(&im))
                })
                .collect::<Option<Vec<_>>>()?;
            // nalgebra iterates column-major
            let n = m.nrows();
            Some(CycMatrix::from_fn(n, m.ncols(), |r, c| entries[c * n + r].clone()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::groups::{FiniteMatrixGroup, DEFAULT_CAP};

    /// Two-qubit Paulis with phases, and the quaternion group generated by
    /// `iX ⊗ I`, `iZ ⊗ I` inside it.
    fn quaternion_pair() -> NormalSubgroup {
        let x = CycMatrix::from_int_rows(&[&[0, 1], &[1, 0]]);
        let z = CycMatrix::from_int_rows(&[&[1, 0], &[0, -1]]);
        let i2 = CycMatrix::identity(2);
        let gens = vec![x.kron(&i2), z.kron(&i2), i2.kron(&x), i2.kron(&z), CycMatrix::scalar(4, &CycScalar::i())];
        let g = Arc::new(FiniteMatrixGroup::close(&gens, DEFAULT_CAP).unwrap());
        let ix = g.index_of(&x.kron(&i2).scale(&CycScalar::i())).unwrap();
        let iz = g.index_of(&z.kron(&i2).scale(&CycScalar::i())).unwrap();
        let members = g.abstract_group().generated(&[ix, iz]);
        NormalSubgroup::new(g, &members).unwrap()
    }

    #[test]
    fn quaternion_splits_exactly() {
        let ns = quaternion_pair();
        assert_eq!(ns.order(), 8);
        let chi = (0..ns.table().len()).find(|&c| ns.degree(c) == 2).unwrap();
        assert_eq!(ns.multiplicity(chi).unwrap(), 2);
        let split = primitive_idempotents(&ns, chi, 1).unwrap();
        assert_eq!(split.method, SplitMethod::Commuting);
        let e = split.exact().unwrap();
        assert_eq!(e.len(), 2);
        assert!((&e[0] * &e[1]).is_zero());
        assert_eq!(e[0].rank(), 2);
    }

    #[test]
    fn numeric_path_agrees() {
        let ns = quaternion_pair();
        let chi = (0..ns.table().len()).find(|&c| ns.degree(c) == 2).unwrap();
        let proj = ns.projection(chi).unwrap();
        let split = split_numeric(&ns, &proj, 2, 2, 9).unwrap();
        let sum = split.idempotents.iter().fold(DMatrix::zeros(4, 4), |acc, e| match e {
            Idempotent::Exact(m) => acc + m.to_complex(),
            Idempotent::Numeric(m) => acc + m,
        });
        assert!((sum - proj.to_complex()).norm() < 1e-9);
    }

    #[test]
    fn absent_character_rejected() {
        let ns = quaternion_pair();
        let lin = (0..ns.table().len()).find(|&c| ns.degree(c) == 1).unwrap();
        assert!(matches!(primitive_idempotents(&ns, lin, 0), Err(Error::CharacterAbsent)));
    }
}
