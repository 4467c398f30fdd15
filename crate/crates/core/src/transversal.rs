//! Operations of tensor-product form that preserve a character code, and
//! their action on the logical basis.

use std::collections::HashSet;

use serde_json::{json, Value};

use crate::codes::{inertia_subgroup, CodeSpace, NormalSubgroup};
use crate::cyclo::{inner, CycMatrix, CycScalar, Rational};
use crate::error::{Error, Result};

/// Splits `m` into `n` factors of size `d × d` with `m = f_1 ⊗ … ⊗ f_n`,
/// any overall scalar carried by the first factor.
pub fn kron_factor(m: &CycMatrix, d: usize) -> Option<Vec<CycMatrix>> {
    let size = m.rows();
    if !m.is_square() || d == 0 || size % d != 0 {
        return None;
    }
    if size == d {
        return Some(vec![m.clone()]);
    }
    let rest = size / d;
    let block = |i: usize, j: usize| CycMatrix::from_fn(rest, rest, |r, c| m.get(i * rest + r, j * rest + c).clone());
    let (pi, pj) = (0..d * d).map(|x| (x / d, x % d)).find(|&(i, j)| !block(i, j).is_zero())?;
    let tail = block(pi, pj);
    let mut head = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            head.push(block(i, j).is_proportional(&tail).ok()??);
        }
    }
    let mut factors = vec![CycMatrix::new(d, d, head).ok()?];
    factors.extend(kron_factor(&tail, d)?);
    Some(factors)
}

/// Rescales a unitary so the first non-zero entry of its first column is
/// positive real, when that phase is cyclotomic. Returns the removed phase.
pub fn normalize_phase(m: &CycMatrix) -> (CycMatrix, Option<CycScalar>) {
    let Some(c) = m.column(0).into_iter().find(|x| !x.is_zero()) else {
        return (m.clone(), None);
    };
    let phase = c
        .norm_sqr()
        .as_rational()
        .and_then(|n2| CycScalar::sqrt_rational(&n2).ok())
        .and_then(|abs| abs.inv())
        .map(|r| &c * &r);
    match phase.as_ref().and_then(CycScalar::inv) {
        Some(inv) => (m.scale(&inv), phase),
        None => (m.clone(), None),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    /// An element of the ambient error group, by index.
    Group(usize),
    /// The `i`-th caller-supplied candidate.
    Extra(usize),
}

#[derive(Clone, Debug)]
pub struct TransversalOp {
    pub source: Source,
    pub name: Option<String>,
    pub factors: Option<Vec<CycMatrix>>,
    /// `V† g V`, phase-normalized.
    pub logical: CycMatrix,
    /// Phase removed from the raw logical action.
    pub phase: Option<CycScalar>,
}

#[derive(Clone, Debug)]
pub struct Excluded {
    pub source: Source,
    pub name: Option<String>,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct TransversalReport {
    pub ambient_dim: usize,
    pub code_dim: usize,
    pub ops: Vec<TransversalOp>,
    pub excluded: Vec<Excluded>,
    /// Number of logical actions distinct up to phase.
    pub distinct_actions: usize,
    /// Whether the products of reported actions stay in the set up to phase.
    pub closed: bool,
}

fn source_json(s: &Source) -> Value {
    match s {
        Source::Group(g) => json!({ "element": g }),
        Source::Extra(i) => json!({ "candidate": i }),
    }
}

impl TransversalReport {
    pub fn find(&self, source: &Source) -> Option<&TransversalOp> {
        self.ops.iter().find(|op| op.source == *source)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ambient_dim": self.ambient_dim,
            "code_dim": self.code_dim,
            "ops": self.ops.iter().map(|op| json!({
                "source": source_json(&op.source),
                "name": op.name,
                "factors": op.factors.as_ref().map(|f| f.iter().map(CycMatrix::to_json).collect::<Vec<_>>()),
                "logical": op.logical.to_json(),
                "phase": op.phase.as_ref().map(CycScalar::to_json),
            })).collect::<Vec<_>>(),
            "excluded": self.excluded.iter().map(|e| json!({
                "source": source_json(&e.source),
                "name": e.name,
                "reason": e.reason,
            })).collect::<Vec<_>>(),
            "distinct_actions": self.distinct_actions,
            "closed": self.closed,
        })
    }
}

/// A candidate unitary with its declared factorization across subsystems.
#[derive(Clone, Debug)]
pub struct TensorCandidate {
    pub name: String,
    pub factors: Vec<CycMatrix>,
    /// When given, must equal the Kronecker product of `factors`.
    pub claimed: Option<CycMatrix>,
}

impl TensorCandidate {
    pub fn new(name: impl Into<String>, factors: Vec<CycMatrix>) -> Self {
        TensorCandidate {
            name: name.into(),
            factors,
            claimed: None,
        }
    }

    fn assemble(&self) -> Result<CycMatrix> {
        let m = CycMatrix::kron_all(&self.factors)
            .ok_or_else(|| Error::InvalidArgument(format!("candidate {} has no factors", self.name)))?;
        if let Some(c) = &self.claimed {
            if *c != m {
                return Err(Error::InvalidArgument(format!(
                    "candidate {} is not the Kronecker product of its factors",
                    self.name
                )));
            }
        }
        Ok(m)
    }
}

/// `V† g V` when `g` maps the code onto itself, checked column by column.
fn logical_action(v: &CycMatrix, g: &CycMatrix) -> Result<Option<CycMatrix>> {
    let gv = g.checked_mul(v)?;
    let l = v.dagger().checked_mul(&gv)?;
    if v.checked_mul(&l)? != gv || !l.is_unitary() {
        return Ok(None);
    }
    Ok(Some(l))
}

fn closure_check(ops: &[CycMatrix]) -> (usize, bool) {
    let keys: HashSet<Vec<Rational>> = ops.iter().filter_map(|m| m.projective_key()).collect();
    let closed = ops.iter().all(|a| {
        ops.iter()
            .all(|b| (a * b).projective_key().is_some_and(|k| keys.contains(&k)))
    });
    (keys.len(), closed)
}

/// Lists the elements of `T(χ)` inside the ambient error group with their
/// logical actions, plus every candidate that normalizes `N` and commutes
/// with the projector. Every listed element is checked to preserve the code.
pub fn transversal_ops(
    ns: &NormalSubgroup,
    chi: usize,
    code: &CodeSpace,
    local_dim: Option<usize>,
    extras: &[TensorCandidate],
) -> Result<TransversalReport> {
    let v = code
        .logical_matrix()
        .ok_or_else(|| Error::NoExactNormalization("code has no exact orthonormal basis".into()))?;
    let inertia = inertia_subgroup(ns, chi)?;
    let ambient = ns.ambient();
    let mut ops = Vec::new();
    let mut excluded = Vec::new();
    for &g in &inertia.subgroup {
        let m = ambient.element(g);
        let l = logical_action(&v, m)?.ok_or_else(|| {
            Error::Inconsistent(format!("inertia element {g} does not preserve the code"))
        })?;
        let (logical, phase) = normalize_phase(&l);
        ops.push(TransversalOp {
            source: Source::Group(g),
            name: None,
            factors: local_dim.and_then(|d| kron_factor(m, d)),
            logical,
            phase,
        });
    }
    let p = code.projector();
    for (i, cand) in extras.iter().enumerate() {
        if let Some(d) = local_dim {
            if cand.factors.iter().any(|f| f.shape() != (d, d)) {
                return Err(Error::InvalidArgument(format!("candidate {} has a factor not of size {d}", cand.name)));
            }
        }
        let g = cand.assemble()?;
        if g.shape() != p.shape() {
            return Err(Error::ShapeMismatch {
                op: "transversal_ops",
                left: p.shape(),
                right: g.shape(),
            });
        }
        let exclude = |reason: String| Excluded {
            source: Source::Extra(i),
            name: Some(cand.name.clone()),
            reason,
        };
        if !g.is_unitary() {
            excluded.push(exclude("not unitary".into()));
            continue;
        }
        let gd = g.dagger();
        let outside = ns
            .members()
            .iter()
            .find(|&&a| ns.group().index_of(&(&(&g * ambient.element(a)) * &gd)).is_none());
        if let Some(a) = outside {
            excluded.push(exclude(format!("conjugation moves element {a} of N outside N")));
            continue;
        }
        if &g * p != p * &g {
            excluded.push(exclude("does not commute with the code projector".into()));
            continue;
        }
        let l = logical_action(&v, &g)?
            .ok_or_else(|| Error::Inconsistent(format!("candidate {} commutes with the projector yet moves the code", cand.name)))?;
        let (logical, phase) = normalize_phase(&l);
        ops.push(TransversalOp {
            source: Source::Extra(i),
            name: Some(cand.name.clone()),
            factors: Some(cand.factors.clone()),
            logical,
            phase,
        });
    }
    let actions: Vec<CycMatrix> = ops.iter().map(|o| o.logical.clone()).collect();
    let (distinct_actions, closed) = closure_check(&actions);
    Ok(TransversalReport {
        ambient_dim: code.ambient_dim(),
        code_dim: code.dim(),
        ops,
        excluded,
        distinct_actions,
        closed,
    })
}

/// A unitary on `𝓗 ⊗ 𝓗`, applied to every pair of matching subsystems of
/// two copies of a code.
#[derive(Clone, Debug)]
pub struct PairCandidate {
    pub name: String,
    pub unitary: CycMatrix,
}

impl PairCandidate {
    pub fn new(name: impl Into<String>, unitary: CycMatrix) -> Self {
        PairCandidate {
            name: name.into(),
            unitary,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PairOp {
    pub name: String,
    /// Action on `V ⊗ V`, phase-normalized.
    pub logical: CycMatrix,
    pub phase: Option<CycScalar>,
}

#[derive(Clone, Debug)]
pub struct TwoBlockReport {
    pub local_dim: usize,
    pub subsystems: usize,
    pub code_dim: usize,
    pub ops: Vec<PairOp>,
    /// Candidates rejected, with a diagnostic.
    pub excluded: Vec<(String, String)>,
    pub distinct_actions: usize,
    pub closed: bool,
}

impl TwoBlockReport {
    pub fn find(&self, name: &str) -> Option<&PairOp> {
        self.ops.iter().find(|op| op.name == name)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "local_dim": self.local_dim,
            "subsystems": self.subsystems,
            "code_dim": self.code_dim,
            "ops": self.ops.iter().map(|op| json!({
                "name": op.name,
                "logical": op.logical.to_json(),
                "phase": op.phase.as_ref().map(CycScalar::to_json),
            })).collect::<Vec<_>>(),
            "excluded": self.excluded.iter().map(|(n, r)| json!({ "name": n, "reason": r })).collect::<Vec<_>>(),
            "distinct_actions": self.distinct_actions,
            "closed": self.closed,
        })
    }
}

/// Applies `u` to each pair `(x_s, y_s)` of a vector on `𝓗^{⊗n} ⊗ 𝓗^{⊗n}`.
fn apply_pairwise(u: &CycMatrix, d: usize, n: usize, psi: &[CycScalar]) -> Vec<CycScalar> {
    let size = d.pow(n as u32);
    let mut cur = psi.to_vec();
    for s in 0..n {
        let stride = d.pow((n - 1 - s) as u32);
        let mut next = vec![CycScalar::zero(); cur.len()];
        for (idx, amp) in cur.iter().enumerate() {
            if amp.is_zero() {
                continue;
            }
            let (x, y) = (idx / size, idx % size);
            let (xs, ys) = ((x / stride) % d, (y / stride) % d);
            let col = xs * d + ys;
            for row in 0..d * d {
                let c = u.get(row, col);
                if c.is_zero() {
                    continue;
                }
                let (nx, ny) = (row / d, row % d);
                let out = (x + (nx * stride) - xs * stride) * size + (y + ny * stride) - ys * stride;
                next[out] = &next[out] + &(c * amp);
            }
        }
        cur = next;
    }
    cur
}

/// The image `(c, d)` of `a ⊗ b` under conjugation by `u` on every pair,
/// when it lies in `N × N`; both sides are given by local factors.
fn conjugate_pair(
    ns: &NormalSubgroup,
    u: &CycMatrix,
    a: &[CycMatrix],
    b: &[CycMatrix],
    d: usize,
) -> Result<Option<(usize, usize)>> {
    let ud = u.dagger();
    let mut left = Vec::with_capacity(a.len());
    let mut right = Vec::with_capacity(b.len());
    for (fa, fb) in a.iter().zip(b) {
        let m = &(u * &fa.kron(fb)) * &ud;
        let Some(f) = kron_factor(&m, d) else {
            return Ok(None);
        };
        left.push(f[0].clone());
        right.push(f[1].clone());
    }
    let c = CycMatrix::kron_all(&left).expect("non-empty");
    let e = CycMatrix::kron_all(&right).expect("non-empty");
    let ambient = ns.ambient();
    for &x in ns.members() {
        // c ⊗ e = (λc) ⊗ (e/λ); try every λ that puts the left side in N
        let Some(lambda) = ambient.element(x).is_proportional(&c)? else {
            continue;
        };
        let Some(inv) = lambda.inv() else { continue };
        if let Some(y) = ambient.index_of(&e.scale(&inv)).filter(|&y| ns.contains(y)) {
            return Ok(Some((x, y)));
        }
    }
    Ok(None)
}

/// Two copies of the code of `(N, χ)` on `n` subsystems of dimension `d`,
/// paired up so that each candidate acts on `(𝓗 ⊗ 𝓗)^{⊗n}`. A candidate
/// is kept when it normalizes `N × N` and fixes `χ ⊗ χ`; its logical action
/// is then read off the product basis and checked to preserve `𝓒 ⊗ 𝓒`.
pub fn two_block_transversal(
    ns: &NormalSubgroup,
    chi: usize,
    code: &CodeSpace,
    local_dim: usize,
    candidates: &[PairCandidate],
) -> Result<TwoBlockReport> {
    let size = code.ambient_dim();
    let d = local_dim;
    let n = (1..=usize::BITS)
        .find(|&n| d.checked_pow(n).is_some_and(|x| x == size))
        .ok_or_else(|| Error::InvalidArgument(format!("ambient dimension {size} is not a power of {d}")))? as usize;
    let basis = code
        .logical_basis()
        .ok_or_else(|| Error::NoExactNormalization("code has no exact orthonormal basis".into()))?;
    let ambient = ns.ambient();
    let factored: Vec<(usize, Vec<CycMatrix>)> = ns
        .members()
        .iter()
        .map(|&a| {
            kron_factor(ambient.element(a), d)
                .map(|f| (a, f))
                .ok_or_else(|| Error::InvalidArgument(format!("element {a} of N is not a tensor product")))
        })
        .collect::<Result<_>>()?;
    let identity = vec![CycMatrix::identity(d); n];
    let chi_of = |x: usize| ns.value(chi, x).expect("member").clone();

    let k = basis.len();
    let product: Vec<Vec<CycScalar>> = (0..k * k)
        .map(|ij| {
            let (u, v) = (&basis[ij / k], &basis[ij % k]);
            u.iter().flat_map(|a| v.iter().map(move |b| a * b)).collect()
        })
        .collect();

    let mut ops = Vec::new();
    let mut excluded = Vec::new();
    'cand: for cand in candidates {
        let u = &cand.unitary;
        if u.shape() != (d * d, d * d) || !u.is_unitary() {
            excluded.push((cand.name.clone(), format!("not a unitary of size {}", d * d)));
            continue;
        }
        // images of a ⊗ I and I ⊗ b determine the whole conjugation map
        let mut left = Vec::with_capacity(factored.len());
        let mut right = Vec::with_capacity(factored.len());
        for (a, f) in &factored {
            let l = conjugate_pair(ns, u, f, &identity, d)?;
            let r = conjugate_pair(ns, u, &identity, f, d)?;
            match (l, r) {
                (Some(l), Some(r)) => {
                    left.push(l);
                    right.push(r);
                }
                _ => {
                    excluded.push((cand.name.clone(), format!("does not normalize N × N at element {a}")));
                    continue 'cand;
                }
            }
        }
        let mut fixes = true;
        for (i, &(a, _)) in factored.iter().enumerate() {
            for (j, &(b, _)) in factored.iter().enumerate() {
                let c = ambient.mul(left[i].0, right[j].0);
                let e = ambient.mul(left[i].1, right[j].1);
                fixes &= &chi_of(c) * &chi_of(e) == &chi_of(a) * &chi_of(b);
            }
        }
        let images: Vec<Vec<CycScalar>> = product.iter().map(|psi| apply_pairwise(u, d, n, psi)).collect();
        let l = CycMatrix::from_fn(k * k, k * k, |r, c| inner(&product[r], &images[c]));
        let preserved = l.is_unitary()
            && images.iter().enumerate().all(|(c, img)| {
                let mut back = vec![CycScalar::zero(); img.len()];
                for (r, v) in product.iter().enumerate() {
                    let coef = l.get(r, c);
                    if !coef.is_zero() {
                        for (x, y) in back.iter_mut().zip(v) {
                            *x = &*x + &(coef * y);
                        }
                    }
                }
                back == *img
            });
        if !fixes {
            if preserved {
                return Err(Error::Inconsistent(format!(
                    "candidate {} moves the character yet preserves the code",
                    cand.name
                )));
            }
            excluded.push((cand.name.clone(), "does not fix the product character".into()));
            continue;
        }
        if !preserved {
            return Err(Error::Inconsistent(format!(
                "candidate {} fixes the product character yet moves the code",
                cand.name
            )));
        }
        let (logical, phase) = normalize_phase(&l);
        ops.push(PairOp {
            name: cand.name.clone(),
            logical,
            phase,
        });
    }
    let actions: Vec<CycMatrix> = ops.iter().map(|o| o.logical.clone()).collect();
    let (distinct_actions, closed) = closure_check(&actions);
    Ok(TwoBlockReport {
        local_dim: d,
        subsystems: n,
        code_dim: k * k,
        ops,
        excluded,
        distinct_actions,
        closed,
    })
}

/// Standard two-qubit candidates: identity, swap and controlled-X.
pub fn qubit_pair_candidates() -> Vec<PairCandidate> {
    vec![
        PairCandidate::new("identity", CycMatrix::identity(4)),
        PairCandidate::new(
            "swap",
            CycMatrix::from_int_rows(&[&[1, 0, 0, 0], &[0, 0, 1, 0], &[0, 1, 0, 0], &[0, 0, 0, 1]]),
        ),
        PairCandidate::new(
            "cnot",
            CycMatrix::from_int_rows(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 0, 1], &[0, 0, 1, 0]]),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::codes::character_code;
    use crate::error_basis::{pauli_basis, tensor_basis, ErrorGroup};
    use crate::groups::DEFAULT_CAP;

    fn m(rows: &[&[i64]]) -> CycMatrix {
        CycMatrix::from_int_rows(rows)
    }

    fn bitflip() -> (NormalSubgroup, usize, CodeSpace) {
        let p = pauli_basis(2).unwrap();
        let b = tensor_basis(&tensor_basis(&p, &p).unwrap(), &p).unwrap();
        let eg = ErrorGroup::from_basis(&b, Some(4), DEFAULT_CAP).unwrap();
        let g = Arc::new(eg.group().clone());
        let (i, z) = (CycMatrix::identity(2), m(&[&[1, 0], &[0, -1]]));
        let zzi = CycMatrix::kron_all(&[z.clone(), z.clone(), i.clone()]).unwrap();
        let izz = CycMatrix::kron_all(&[i.clone(), z.clone(), z]).unwrap();
        let minus = CycMatrix::scalar(8, &CycScalar::from_int(-1));
        let gens: Vec<usize> = [zzi, izz, minus].iter().map(|x| g.index_of(x).unwrap()).collect();
        let ns = NormalSubgroup::closure(g.clone(), &gens).unwrap();
        let ones: Vec<usize> = gens[..2].to_vec();
        let chi = ns.stabilized_character(&ones).unwrap().unwrap();
        let code = character_code(&ns, chi).unwrap();
        (ns, chi, code)
    }

    #[test]
    fn factorization_round_trip() {
        let x = m(&[&[0, 1], &[1, 0]]);
        let z = m(&[&[1, 0], &[0, -1]]);
        let big = CycMatrix::kron_all(&[x.clone(), z.clone(), x.scale(&CycScalar::i())]).unwrap();
        let f = kron_factor(&big, 2).unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(CycMatrix::kron_all(&f).unwrap(), big);
        let cnot = &qubit_pair_candidates()[2].unitary;
        assert!(kron_factor(cnot, 2).is_none());
    }

    #[test]
    fn bitflip_logical_paulis() {
        let (ns, chi, code) = bitflip();
        let x = m(&[&[0, 1], &[1, 0]]);
        let z = m(&[&[1, 0], &[0, -1]]);
        let i = CycMatrix::identity(2);
        let h = m(&[&[1, 1], &[1, -1]]).scale(&CycScalar::sqrt_rational(&Rational::new(1, 2)).unwrap());
        let extras = vec![
            TensorCandidate::new("xxx", vec![x.clone(), x.clone(), x.clone()]),
            TensorCandidate::new("zii", vec![z.clone(), i.clone(), i.clone()]),
            TensorCandidate::new("hhh", vec![h.clone(), h.clone(), h]),
        ];
        let r = transversal_ops(&ns, chi, &code, Some(2), &extras).unwrap();
        assert_eq!(r.ops.len(), 64 + 2);
        assert!(r.closed);
        assert_eq!(r.find(&Source::Extra(0)).unwrap().logical, x);
        assert_eq!(r.find(&Source::Extra(1)).unwrap().logical, z);
        assert_eq!(r.excluded.len(), 1);
        let g = ns.ambient();
        for &a in ns.members() {
            let op = r.find(&Source::Group(a)).unwrap();
            assert!(op.logical.is_identity());
            assert!(op.factors.as_ref().is_some_and(|f| f.len() == 3));
            assert_eq!(CycMatrix::kron_all(op.factors.as_ref().unwrap()).unwrap(), *g.element(a));
        }
    }

    #[test]
    fn false_factorization_rejected() {
        let (ns, chi, code) = bitflip();
        let x = m(&[&[0, 1], &[1, 0]]);
        let mut cand = TensorCandidate::new("bad", vec![x.clone(), x.clone(), x]);
        cand.claimed = Some(CycMatrix::identity(8));
        assert!(transversal_ops(&ns, chi, &code, Some(2), &[cand]).is_err());
    }

    #[test]
    fn bitflip_two_block() {
        let (ns, chi, code) = bitflip();
        let mut cands = qubit_pair_candidates();
        let h = m(&[&[1, 1], &[1, -1]]).scale(&CycScalar::sqrt_rational(&Rational::new(1, 2)).unwrap());
        cands.push(PairCandidate::new("h_i", h.kron(&CycMatrix::identity(2))));
        let r = two_block_transversal(&ns, chi, &code, 2, &cands).unwrap();
        assert_eq!(r.subsystems, 3);
        assert!(r.find("identity").unwrap().logical.is_identity());
        assert_eq!(r.find("swap").unwrap().logical, cands[1].unitary);
        assert_eq!(r.find("cnot").unwrap().logical, cands[2].unitary);
        assert_eq!(r.excluded.len(), 1);
        assert_eq!(r.excluded[0].0, "h_i");
    }

    #[test]
    fn phase_normalization() {
        let x = m(&[&[0, 1], &[1, 0]]);
        let (n, ph) = normalize_phase(&x.scale(&CycScalar::i()));
        assert_eq!(n, x);
        assert_eq!(ph, Some(CycScalar::i()));
    }
}
