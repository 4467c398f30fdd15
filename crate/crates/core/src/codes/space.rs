use serde_json::{json, Value};

use crate::cyclo::{inner, linalg, vector_to_json, CycMatrix, CycScalar};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CodeKind {
    /// The isotypic component of a character.
    Character,
    /// The range of the `i`-th primitive idempotent.
    Idempotent(usize),
    /// Spanned by explicitly given vectors.
    Explicit,
}

impl CodeKind {
    pub fn label(&self) -> String {
        match self {
            CodeKind::Character => "character".into(),
            CodeKind::Idempotent(i) => format!("idempotent-{i}"),
            CodeKind::Explicit => "explicit".into(),
        }
    }
}

/// A subspace given by its orthogonal projector, with an orthonormal basis
/// of its range when one exists over the cyclotomics.
#[derive(Clone, Debug)]
pub struct CodeSpace {
    projector: CycMatrix,
    dim: usize,
    logical: Option<Vec<Vec<CycScalar>>>,
    kind: CodeKind,
    provenance: Value,
}

impl CodeSpace {
    /// Checks `P² = P = P†` exactly.
    pub fn from_projector(projector: CycMatrix, kind: CodeKind, provenance: Value) -> Result<Self> {
        if !projector.is_square() {
            return Err(Error::InvalidArgument("projector must be square".into()));
        }
        if &projector * &projector != projector || !projector.is_hermitian() {
            return Err(Error::Inconsistent("not an orthogonal projector".into()));
        }
        let dim = projector
            .trace()?
            .as_rational()
            .and_then(|t| t.as_small())
            .filter(|&(_, d)| d == 1)
            .map(|(t, _)| t as usize)
            .ok_or_else(|| Error::Inconsistent("projector trace is not an integer".into()))?;
        let logical = match linalg::range_basis(&projector) {
            Ok(b) => Some(b),
            Err(Error::NoExactNormalization(_)) => None,
            Err(e) => return Err(e),
        };
        Ok(CodeSpace {
            projector,
            dim,
            logical,
            kind,
            provenance,
        })
    }

    /// The span of exactly orthonormal vectors, which become the logical
    /// basis in the given order.
    pub fn from_orthonormal(vectors: Vec<Vec<CycScalar>>, kind: CodeKind, provenance: Value) -> Result<Self> {
        let n = vectors.first().map(Vec::len).ok_or_else(|| Error::InvalidArgument("no vectors".into()))?;
        for (i, u) in vectors.iter().enumerate() {
            if u.len() != n {
                return Err(Error::InvalidArgument("vectors of different lengths".into()));
            }
            for (j, v) in vectors.iter().enumerate().skip(i) {
                let want = if i == j { CycScalar::one() } else { CycScalar::zero() };
                if inner(u, v) != want {
                    return Err(Error::InvalidArgument(format!("vectors {i} and {j} are not orthonormal")));
                }
            }
        }
        let mut projector = CycMatrix::zeros(n, n);
        for v in &vectors {
            let col = CycMatrix::from_columns(std::slice::from_ref(v))?;
            projector = &projector + &(&col * &col.dagger());
        }
        Ok(CodeSpace {
            projector,
            dim: vectors.len(),
            logical: Some(vectors),
            kind,
            provenance,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.projector.rows()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn projector(&self) -> &CycMatrix {
        &self.projector
    }

    pub fn logical_basis(&self) -> Option<&[Vec<CycScalar>]> {
        self.logical.as_deref()
    }

    /// Logical basis vectors as the columns of an `n × k` isometry.
    pub fn logical_matrix(&self) -> Option<CycMatrix> {
        self.logical.as_ref().map(|l| CycMatrix::from_columns(l).expect("equal lengths"))
    }

    pub fn kind(&self) -> CodeKind {
        self.kind
    }

    pub fn provenance(&self) -> &Value {
        &self.provenance
    }

    pub fn contains(&self, v: &[CycScalar]) -> Result<bool> {
        Ok(self.projector.mul_vec(v)? == v)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.ambient_dim(),
            "dim": self.dim,
            "projector": self.projector.to_json(),
            "logical_basis": self.logical.as_ref().map(|l| l.iter().map(|v| vector_to_json(v)).collect::<Vec<_>>()),
            "kind": self.kind.label(),
            "provenance": self.provenance,
        })
    }
}

/// `λ` with `Π E Π = λ Π`, or `None` when `E` is not detected.
pub fn is_detectable(code: &CodeSpace, e: &CycMatrix) -> Result<Option<CycScalar>> {
    let n = code.ambient_dim();
    if e.shape() != (n, n) {
        return Err(Error::ShapeMismatch {
            op: "is_detectable",
            left: (n, n),
            right: e.shape(),
        });
    }
    if code.dim() == 0 {
        return Err(Error::InvalidArgument("the code is the zero space".into()));
    }
    match code.logical_matrix() {
        // with V orthonormal, ΠEΠ = V (V†EV) V† and V†EV = λI is the same test
        Some(v) => {
            let m = &v.dagger() * &(e * &v);
            Ok(m.as_scalar())
        }
        None => {
            let p = code.projector();
            (&(p * e) * p).is_proportional(p)
        }
    }
}

#[derive(Clone, Debug)]
pub struct CorrectabilityReport {
    pub size: usize,
    /// Pairs `(a, b)` for which `S_a† S_b` is not detected.
    pub failures: Vec<(usize, usize)>,
}

impl CorrectabilityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({ "size": self.size, "pairs": self.size * self.size, "failures": self.failures, "pass": self.passed() })
    }
}

/// Tests detectability of every `A†B` with `A, B ∈ S`.
pub fn is_correctable_set(code: &CodeSpace, s: &[CycMatrix]) -> Result<CorrectabilityReport> {
    let n = code.ambient_dim();
    if let Some(bad) = s.iter().find(|m| m.shape() != (n, n)) {
        return Err(Error::ShapeMismatch {
            op: "is_correctable_set",
            left: (n, n),
            right: bad.shape(),
        });
    }
    let mut failures = Vec::new();
    match code.logical_matrix() {
        // ⟨A v_i, B v_j⟩ is the (i, j) entry of V† A† B V
        Some(v) => {
            let images: Vec<CycMatrix> = s.iter().map(|a| a * &v).collect();
            for (a, wa) in images.iter().enumerate() {
                let wad = wa.dagger();
                for (b, wb) in images.iter().enumerate() {
                    if (&wad * wb).as_scalar().is_none() {
                        failures.push((a, b));
                    }
                }
            }
        }
        None => {
            for (a, ma) in s.iter().enumerate() {
                let mad = ma.dagger();
                for (b, mb) in s.iter().enumerate() {
                    if is_detectable(code, &(&mad * mb))?.is_none() {
                        failures.push((a, b));
                    }
                }
            }
        }
    }
    Ok(CorrectabilityReport { size: s.len(), failures })
}
