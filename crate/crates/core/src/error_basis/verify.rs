use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use serde_json::{json, Value};

use super::NiceErrorBasis;
use crate::codes::{primitive_idempotents, NormalSubgroup};
use crate::cyclo::{inner, linalg, CycMatrix, CycScalar, Rational};
use crate::error::{Error, Result};
use crate::groups::{AbstractGroup, CharacterTable, FiniteMatrixGroup};

/// Per-condition outcome of checking a basis against the definition.
#[derive(Clone, Debug)]
pub struct NiceReport {
    pub dim: usize,
    pub size: usize,
    pub unitary_failures: Vec<usize>,
    pub identity_ok: bool,
    pub trace_failures: Vec<usize>,
    pub cocycle_failures: Vec<(usize, usize)>,
    /// Distinct multiplicative orders of the cocycle values.
    pub cocycle_orders: Vec<u64>,
    pub order_ok: bool,
    pub orthogonality_failures: Vec<(usize, usize)>,
    pub span_rank: usize,
    pub very_nice: bool,
}

impl NiceReport {
    pub fn passed(&self) -> bool {
        self.unitary_failures.is_empty()
            && self.identity_ok
            && self.trace_failures.is_empty()
            && self.cocycle_failures.is_empty()
            && self.order_ok
            && self.orthogonality_failures.is_empty()
            && self.span_rank == self.dim * self.dim
    }

    pub fn to_json(&self) -> Value {
        json!({
            "dim": self.dim,
            "size": self.size,
            "unitary": { "pass": self.unitary_failures.is_empty(), "failures": self.unitary_failures },
            "identity": { "pass": self.identity_ok },
            "trace": { "pass": self.trace_failures.is_empty(), "failures": self.trace_failures },
            "cocycle": {
                "pass": self.cocycle_failures.is_empty(),
                "failures": self.cocycle_failures,
                "orders": self.cocycle_orders,
            },
            "order": { "pass": self.order_ok },
            "orthogonality": {
                "pass": self.orthogonality_failures.is_empty(),
                "failures": self.orthogonality_failures,
            },
            "span": { "pass": self.span_rank == self.dim * self.dim, "rank": self.span_rank },
            "very_nice": self.very_nice,
            "pass": self.passed(),
        })
    }
}

/// `tr(A† B)` without forming the product.
fn trace_inner(a: &CycMatrix, b: &CycMatrix) -> CycScalar {
    inner(a.entries(), b.entries())
}

pub fn verify_nice(e: &NiceErrorBasis) -> NiceReport {
    let n = e.dim();
    let g = e.index_group();
    let size = e.len();
    let unitary_failures = (0..size).filter(|&i| !e.op(i).is_unitary()).collect();
    let identity_ok = e.op(g.identity()).is_identity();
    let dim = CycScalar::from_int(n as i64);
    let trace_failures = (0..size)
        .filter(|&i| {
            let want = if i == g.identity() { dim.clone() } else { CycScalar::zero() };
            e.op(i).trace().map_or(true, |t| t != want)
        })
        .collect();
    let mut cocycle_failures = Vec::new();
    let mut orders = BTreeSet::new();
    for a in 0..size {
        for b in 0..size {
            match e.cocycle(a, b).map(|w| w.as_root_of_unity()) {
                Some(Some((m, j))) => {
                    orders.insert(m / crate::numth::gcd(m, j));
                }
                _ => cocycle_failures.push((a, b)),
            }
        }
    }
    let mut orthogonality_failures = Vec::new();
    for a in 0..size {
        for b in a..size {
            let want = if a == b { dim.clone() } else { CycScalar::zero() };
            if trace_inner(e.op(a), e.op(b)) != want {
                orthogonality_failures.push((a, b));
            }
        }
    }
    // A Gram matrix n·I already forces full rank; the explicit elimination
    // is run where it is cheap.
    let span_rank = if size <= 64 {
        linalg::rank(e.ops().iter().map(|m| m.entries().to_vec()).collect())
    } else if orthogonality_failures.is_empty() {
        size
    } else {
        linalg::rank(e.ops().iter().map(|m| m.entries().to_vec()).collect())
    };
    let very_nice = e.ops().iter().all(|m| m.det().is_ok_and(|d| d.is_one()));
    NiceReport {
        dim: n,
        size,
        unitary_failures,
        identity_ok,
        trace_failures,
        cocycle_failures,
        cocycle_orders: orders.into_iter().collect(),
        order_ok: size == n * n,
        orthogonality_failures,
        span_rank,
        very_nice,
    }
}

/// An irreducible character vanishing off the center whose kernel is
/// trivial, or `None` if the group has none.
pub fn abstract_error_character(g: &AbstractGroup) -> Result<Option<(CharacterTable, usize)>> {
    let table = CharacterTable::compute(g)?;
    let center = g.center();
    let found = candidates(&table, g, &center).into_iter().next();
    Ok(found.map(|c| (table, c)))
}

fn candidates(table: &CharacterTable, g: &AbstractGroup, center: &[usize]) -> Vec<usize> {
    table
        .supported_on(center)
        .into_iter()
        .filter(|&c| {
            let deg = &table.characters()[c][0];
            (0..g.order()).all(|x| x == g.identity() || table.value(c, x) != deg)
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct AbstractErrorEvidence {
    pub table: CharacterTable,
    pub character: usize,
    pub degree: usize,
    pub center: Vec<usize>,
    /// Kernel `{g : χ(g) = χ(1)}` is trivial.
    pub kernel_trivial_by_character: bool,
    /// The reconstructed representation is injective.
    pub kernel_trivial_by_representation: Option<bool>,
    /// Coset representatives of `H/Z`, the identity first.
    pub coset_reps: Vec<usize>,
    pub basis: Option<NiceErrorBasis>,
    /// Whether the reconstructed operators are unitary.
    pub unitary: bool,
}

impl AbstractErrorEvidence {
    pub fn to_json(&self) -> Value {
        json!({
            "character": self.character,
            "values": self.table.characters()[self.character]
                .iter()
                .map(CycScalar::to_json)
                .collect::<Vec<_>>(),
            "classes": self.table.classes(),
            "degree": self.degree,
            "center": self.center,
            "kernel_trivial_by_character": self.kernel_trivial_by_character,
            "kernel_trivial_by_representation": self.kernel_trivial_by_representation,
            "coset_reps": self.coset_reps,
            "unitary": self.unitary,
            "basis": self.basis.as_ref().map(NiceErrorBasis::to_json),
        })
    }
}

/// Looks for an irreducible character of `h` supported on its center with
/// trivial kernel and, when one exists, rebuilds a nice error basis from
/// coset representatives of the center in the representation it affords.
pub fn verify_abstract_error_group(h: &FiniteMatrixGroup) -> Result<Option<AbstractErrorEvidence>> {
    let g = h.abstract_group();
    let table = CharacterTable::compute(g)?;
    let center = g.center();
    let cands = candidates(&table, g, &center);
    if cands.is_empty() {
        return Ok(None);
    }
    let traces: Vec<CycScalar> = (0..h.order()).map(|i| h.trace(i)).collect();
    let defining = table.find(&traces);
    let character = defining.filter(|c| cands.contains(c)).unwrap_or(cands[0]);
    let degree = table.dim(character);

    let rep = representation(h, &table, character, defining == Some(character))?;
    let quotient = g.quotient(&center)?;
    let (basis, unitary, kernel_by_rep) = match rep {
        Some((mats, unitary)) => {
            let ops = quotient.reps.iter().map(|&r| mats[r].clone()).collect();
            let basis = NiceErrorBasis::with_index_group(quotient.group.clone(), ops)?;
            let keys: HashSet<Vec<Rational>> = mats.iter().map(CycMatrix::key).collect();
            (Some(basis), unitary, Some(keys.len() == mats.len()))
        }
        None => (None, false, None),
    };
    if kernel_by_rep == Some(false) {
        return Err(Error::Inconsistent(
            "character kernel is trivial but the representation is not faithful".into(),
        ));
    }
    Ok(Some(AbstractErrorEvidence {
        table,
        character,
        degree,
        center,
        kernel_trivial_by_character: true,
        kernel_trivial_by_representation: kernel_by_rep,
        coset_reps: quotient.reps,
        basis,
        unitary,
    }))
}

/// Matrices of a representation affording `chi`, all at one common order.
/// Uses the group's own matrices when they already afford `chi`, otherwise
/// cuts the isotypic component out when `chi` occurs exactly once.
fn representation(
    h: &FiniteMatrixGroup,
    table: &CharacterTable,
    chi: usize,
    is_defining: bool,
) -> Result<Option<(Vec<CycMatrix>, bool)>> {
    if is_defining {
        let unitary = h.elements().iter().all(CycMatrix::is_unitary);
        return Ok(Some((h.elements().to_vec(), unitary)));
    }
    let traces: Vec<CycScalar> = (0..h.order()).map(|i| h.trace(i)).collect();
    let values = table.element_values(chi);
    let multiplicity = table.inner_product(&traces, &values);
    if multiplicity.is_one() {
        let d = table.dim(chi) as i64;
        let n = h.dim();
        let mut proj = CycMatrix::zeros(n, n);
        for (i, m) in h.elements().iter().enumerate() {
            if !values[i].is_zero() {
                proj = &proj + &m.scale(&values[i].conj());
            }
        }
        let proj = proj.scale_rational(&Rational::new(d, h.order() as i64));
        let cols: Vec<Vec<CycScalar>> = (0..n).map(|j| proj.column(j)).collect();
        return restrict(h, cols).map(Some);
    }
    if multiplicity.is_zero() {
        return Ok(None);
    }
    // several copies: the orbit of one vector in the range of a primitive
    // idempotent spans a single irreducible copy
    let all: Vec<usize> = (0..h.order()).collect();
    let ns = NormalSubgroup::new(Arc::new(h.clone()), &all)?;
    let local: Vec<CycScalar> = ns.members().iter().map(|&g| values[g].clone()).collect();
    let Some(chi_local) = ns.table().find(&local) else {
        return Err(Error::Inconsistent("character missing from the recomputed table".into()));
    };
    let Some(e) = primitive_idempotents(&ns, chi_local, 0)?.exact() else {
        return Ok(None);
    };
    let Some(v) = (0..e[0].cols()).map(|j| e[0].column(j)).find(|c| c.iter().any(|x| !x.is_zero())) else {
        return Err(Error::Inconsistent("zero idempotent".into()));
    };
    let orbit = h.elements().iter().map(|m| m.mul_vec(&v)).collect::<Result<Vec<_>>>()?;
    restrict(h, orbit).map(Some)
}

/// The group acting on the span of `cols`, which must be invariant, in an
/// orthonormal basis when one exists exactly.
fn restrict(h: &FiniteMatrixGroup, cols: Vec<Vec<CycScalar>>) -> Result<(Vec<CycMatrix>, bool)> {
    let mut span = linalg::SpanBasis::new();
    let independent: Vec<Vec<CycScalar>> = cols.into_iter().filter(|c| span.insert(c)).collect();
    let c = CycMatrix::from_columns(&independent)?;
    let cd = c.dagger();
    let proj = &(&c * &(&cd * &c).inverse()?) * &cd;
    let (v, unitary) = match linalg::range_basis(&proj) {
        Ok(cols) => (CycMatrix::from_columns(&cols)?, true),
        Err(Error::NoExactNormalization(_)) => (c, false),
        Err(e) => return Err(e),
    };
    // ρ(g) = (V†V)⁻¹ V† M_g V, which is V† M_g V for orthonormal V
    let vd = v.dagger();
    let left = if unitary { vd } else { &(&vd * &v).inverse()? * &vd };
    let mats = h.elements().iter().map(|m| &(&left * m) * &v).collect();
    Ok((mats, unitary))
}

/// The left regular representation by permutation matrices, with element
/// `i` of the result equal to the image of element `i` of `g`.
pub fn regular_representation(g: &AbstractGroup) -> Result<FiniteMatrixGroup> {
    let n = g.order();
    let perm = |a: usize| {
        CycMatrix::from_fn(n, n, |r, c| if g.mul(a, c) == r { CycScalar::one() } else { CycScalar::zero() })
    };
    let gens: Vec<CycMatrix> = g.generators().into_iter().map(perm).collect();
    let gens = if gens.is_empty() { vec![CycMatrix::identity(n)] } else { gens };
    let closed = FiniteMatrixGroup::close(&gens, n.max(1))?;
    let order: Vec<usize> = (0..n)
        .map(|a| closed.index_of(&perm(a)).ok_or_else(|| Error::Inconsistent("regular image missing".into())))
        .collect::<Result<_>>()?;
    if order.iter().enumerate().all(|(i, &j)| i == j) {
        return Ok(closed);
    }
    // reorder to match the abstract indexing through the JSON form, which
    // re-checks the table against the matrices
    let mut v = g.to_json();
    v["elements"] = Value::Array(order.iter().map(|&j| closed.element(j).to_json()).collect());
    FiniteMatrixGroup::from_json(&v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error_basis::{pauli_basis, tensor_basis};
    use crate::groups::DEFAULT_CAP;

    #[test]
    fn corrupted_basis_fails_trace() {
        let e = pauli_basis(2).unwrap();
        let mut ops = e.ops().to_vec();
        ops[3] = CycMatrix::identity(2);
        let bad = NiceErrorBasis::with_index_group(e.index_group().clone(), ops).unwrap();
        let r = verify_nice(&bad);
        assert_eq!(r.trace_failures, vec![3]);
        assert!(!r.passed());
        assert!(verify_nice(&e).passed());
    }

    #[test]
    fn renormalized_pauli_is_very_nice() {
        let e = pauli_basis(2).unwrap();
        assert!(!verify_nice(&e).very_nice);
        let r = verify_nice(&e.renormalized().unwrap());
        assert!(r.very_nice && r.passed());
    }

    #[test]
    fn tensor_cube() {
        let p = pauli_basis(2).unwrap();
        let p3 = tensor_basis(&tensor_basis(&p, &p).unwrap(), &p).unwrap();
        let r = verify_nice(&p3);
        assert!(r.passed());
        assert_eq!(r.size, 64);
    }

    #[test]
    fn regular_quaternion_reconstructs() {
        let q8 = crate::groups::named::quaternion();
        let reg = regular_representation(&q8).unwrap();
        assert_eq!(reg.abstract_group().table(), q8.table());
        let ev = verify_abstract_error_group(&reg).unwrap().unwrap();
        assert_eq!(ev.degree, 2);
        let b = ev.basis.unwrap();
        assert_eq!(b.len(), 4);
        assert!(verify_nice(&b).passed());
        let s3 = regular_representation(&crate::groups::named::symmetric3()).unwrap();
        assert!(verify_abstract_error_group(&s3).unwrap().is_none());
    }

    #[test]
    fn pauli_group_is_abstract_error_group() {
        let x = CycMatrix::from_int_rows(&[&[0, 1], &[1, 0]]);
        let z = CycMatrix::from_int_rows(&[&[1, 0], &[0, -1]]);
        let h = FiniteMatrixGroup::close(&[x, z], DEFAULT_CAP).unwrap();
        let ev = verify_abstract_error_group(&h).unwrap().unwrap();
        let b = ev.basis.unwrap();
        assert_eq!(b.len(), 4);
        assert!(verify_nice(&b).passed());
    }
}
