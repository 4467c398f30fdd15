//! Nice unitary error bases and the error groups they generate.

mod constructions;
mod verify;

pub use constructions::{egner_basis, egner_generators, gfpk_basis, pauli_basis, semidirect_basis, tensor_basis};
pub use verify::{abstract_error_character, regular_representation, verify_abstract_error_group, verify_nice, AbstractErrorEvidence, NiceReport};

use std::collections::HashMap;
use std::sync::OnceLock;

use serde_json::{json, Value};

use crate::cyclo::{CycMatrix, CycScalar, Rational};
use crate::error::{Error, Result};
use crate::groups::{AbstractGroup, FiniteMatrixGroup};
use crate::numth;

#[derive(Debug)]
pub struct NiceErrorBasis {
    dim: usize,
    index_group: AbstractGroup,
    ops: Vec<CycMatrix>,
    cocycle: OnceLock<Vec<Option<CycScalar>>>,
}

impl Clone for NiceErrorBasis {
    fn clone(&self) -> Self {
        NiceErrorBasis {
            dim: self.dim,
            index_group: self.index_group.clone(),
            ops: self.ops.clone(),
            cocycle: self.cocycle.clone(),
        }
    }
}

impl PartialEq for NiceErrorBasis {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.index_group == other.index_group && self.ops == other.ops
    }
}

/// Matrices embedded at a common order, keyed up to scalar multiples.
pub(crate) struct ProjectiveIndex {
    order: u64,
    map: HashMap<Vec<Rational>, usize>,
}

impl ProjectiveIndex {
    pub(crate) fn new(ops: &[CycMatrix]) -> Self {
        let order = ops.iter().fold(1, |acc, m| numth::lcm(acc, m.order()));
        let mut map = HashMap::new();
        for (i, m) in ops.iter().enumerate() {
            if let Some(k) = projective_key(m, order) {
                map.entry(k).or_insert(i);
            }
        }
        ProjectiveIndex { order, map }
    }

    pub(crate) fn find(&self, m: &CycMatrix) -> Option<usize> {
        let order = numth::lcm(self.order, m.order());
        if order != self.order {
            return None;
        }
        self.map.get(&projective_key(m, order)?).copied()
    }
}

fn projective_key(m: &CycMatrix, order: u64) -> Option<Vec<Rational>> {
    let pivot = m.entries().iter().find(|e| !e.is_zero())?;
    let scaled = m.scale(&pivot.inv()?);
    let l = numth::lcm(order, scaled.order());
    Some(scaled.embed(l).ok()?.key())
}

impl NiceErrorBasis {
    /// Wraps operators with a given index group without checking anything;
    /// [`verify_nice`] reports on the result.
    pub fn with_index_group(index_group: AbstractGroup, ops: Vec<CycMatrix>) -> Result<Self> {
        if ops.len() != index_group.order() {
            return Err(Error::InvalidArgument(format!(
                "{} operators for an index group of order {}",
                ops.len(),
                index_group.order()
            )));
        }
        let dim = ops[0].rows();
        if ops.iter().any(|m| m.shape() != (dim, dim)) {
            return Err(Error::InvalidArgument("operators must be square of one size".into()));
        }
        Ok(NiceErrorBasis {
            dim,
            index_group,
            ops,
            cocycle: OnceLock::new(),
        })
    }

    /// Derives the index group from the operators: `E_g E_h ∝ E_{g*h}`.
    /// Exactly one operator must be the identity matrix.
    pub fn from_ops(ops: Vec<CycMatrix>) -> Result<Self> {
        let n = ops.len();
        if n == 0 {
            return Err(Error::InvalidArgument("no operators".into()));
        }
        let identity = ops
            .iter()
            .position(CycMatrix::is_identity)
            .ok_or_else(|| Error::InvalidArgument("no operator equals the identity".into()))?;
        let index = ProjectiveIndex::new(&ops);
        if index.map.len() != n {
            return Err(Error::InvalidArgument("operators are not projectively distinct".into()));
        }
        let mut table = vec![vec![0usize; n]; n];
        for a in 0..n {
            for b in 0..n {
                let prod = ops[a].checked_mul(&ops[b])?;
                table[a][b] = index.find(&prod).ok_or_else(|| {
                    Error::InvalidArgument(format!(
                        "E_{a} E_{b} is not proportional to any operator"
                    ))
                })?;
            }
        }
        let group = AbstractGroup::from_table(table, identity)?;
        Self::with_index_group(group, ops)
    }

    /// The one-operator basis on a one-dimensional space.
    pub fn trivial() -> Self {
        Self::from_ops(vec![CycMatrix::identity(1)]).expect("trivial basis")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn index_group(&self) -> &AbstractGroup {
        &self.index_group
    }

    pub fn ops(&self) -> &[CycMatrix] {
        &self.ops
    }

    pub fn op(&self, g: usize) -> &CycMatrix {
        &self.ops[g]
    }

    /// `ω_{g,h}` with `E_g E_h = ω_{g,h} E_{g*h}`, or `None` where the
    /// product is not proportional to `E_{g*h}`.
    pub fn cocycle(&self, g: usize, h: usize) -> Option<&CycScalar> {
        self.cocycle_table()[g * self.len() + h].as_ref()
    }

    fn cocycle_table(&self) -> &[Option<CycScalar>] {
        self.cocycle.get_or_init(|| {
            let n = self.len();
            (0..n * n)
                .map(|k| {
                    let (g, h) = (k / n, k % n);
                    let prod = &self.ops[g] * &self.ops[h];
                    prod.is_proportional(&self.ops[self.index_group.mul(g, h)])
                        .ok()
                        .flatten()
                })
                .collect()
        })
    }

    /// Each operator rescaled by a root of unity so that its determinant is 1.
    pub fn renormalized(&self) -> Result<Self> {
        let n = self.dim as u64;
        let ops = self
            .ops
            .iter()
            .map(|m| {
                let det = m.det()?;
                let (order, j) = det.as_root_of_unity().ok_or_else(|| {
                    Error::InvalidArgument("determinant is not a root of unity".into())
                })?;
                // (ζ_{order·n}^{-j})^n = ζ_order^{-j} cancels the determinant
                let c = CycScalar::root_of_unity(order * n, -(j as i64));
                Ok(m.scale(&c))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::with_index_group(self.index_group.clone(), ops)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "dim": self.dim,
            "index_group": self.index_group.to_json(),
            "ops": self.ops.iter().map(CycMatrix::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let group = AbstractGroup::from_json(&v["index_group"])?;
        let ops = v["ops"]
            .as_array()
            .ok_or_else(|| Error::InvalidArgument("missing ops".into()))?
            .iter()
            .map(|m| CycMatrix::from_json(m).map_err(Error::InvalidArgument))
            .collect::<Result<Vec<_>>>()?;
        let b = Self::with_index_group(group, ops)?;
        if v["dim"].as_u64() != Some(b.dim as u64) {
            return Err(Error::InvalidArgument("dim disagrees with the operators".into()));
        }
        Ok(b)
    }
}

/// The finite group generated by a nice error basis, optionally together
/// with a primitive root of unity times the identity.
#[derive(Clone, Debug)]
pub struct ErrorGroup {
    group: FiniteMatrixGroup,
    basis: NiceErrorBasis,
    center: Vec<usize>,
    /// Element index of each basis operator.
    op_elements: Vec<usize>,
}

impl ErrorGroup {
    pub fn from_basis(basis: &NiceErrorBasis, phase: Option<u64>, cap: usize) -> Result<Self> {
        let mut gens: Vec<CycMatrix> = basis
            .ops()
            .iter()
            .filter(|m| !m.is_identity())
            .cloned()
            .collect();
        if let Some(m) = phase {
            gens.push(CycMatrix::scalar(basis.dim(), &CycScalar::root_of_unity(m, 1)));
        }
        if gens.is_empty() {
            gens.push(CycMatrix::identity(basis.dim()));
        }
        let group = FiniteMatrixGroup::close(&gens, cap)?;
        Self::from_group(group, basis.clone())
    }

    pub fn from_group(group: FiniteMatrixGroup, basis: NiceErrorBasis) -> Result<Self> {
        let center = group.center();
        if let Some(&z) = center.iter().find(|&&z| group.element(z).as_scalar().is_none()) {
            return Err(Error::CenterNotScalar(format!("central element {z} is not scalar")));
        }
        let op_elements = basis
            .ops()
            .iter()
            .map(|m| {
                group
                    .index_of(m)
                    .ok_or_else(|| Error::Inconsistent("basis operator missing from its group".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ErrorGroup {
            group,
            basis,
            center,
            op_elements,
        })
    }

    pub fn group(&self) -> &FiniteMatrixGroup {
        &self.group
    }

    pub fn basis(&self) -> &NiceErrorBasis {
        &self.basis
    }

    pub fn center(&self) -> &[usize] {
        &self.center
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn dim(&self) -> usize {
        self.group.dim()
    }

    pub fn element(&self, i: usize) -> &CycMatrix {
        self.group.element(i)
    }

    /// Group element index of basis operator `g`.
    pub fn op_element(&self, g: usize) -> usize {
        self.op_elements[g]
    }

    pub fn index_of(&self, m: &CycMatrix) -> Option<usize> {
        self.group.index_of(m)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "basis": self.basis.to_json(),
            "group": self.group.to_json(),
            "center": self.center,
        })
    }
}
