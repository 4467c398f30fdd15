//! Resolving command arguments to library objects.

use std::fs;
use std::io::Read;
use std::sync::Arc;

use serde_json::Value;

use crate::cyclo::CycMatrix;
use crate::error::{Error, Result};
use crate::error_basis::NiceErrorBasis;
use crate::gfpk::{Elem, Field, LinearForm};
use crate::groups::{named, AbstractGroup, FiniteMatrixGroup};
use crate::instances::Instance;
use crate::workspace::Workspace;

pub struct Context<'a> {
    pub workspace: Option<Workspace>,
    pub cap: usize,
    pub seed: u64,
    pub stdin: &'a mut dyn Read,
}

impl Context<'_> {
    /// `-` or nothing reads standard input; a name stored in the workspace
    /// loads that object; anything else is a file path.
    pub fn load(&mut self, arg: Option<&str>) -> Result<Value> {
        match arg {
            None | Some("-") => {
                let mut s = String::new();
                self.stdin.read_to_string(&mut s)?;
                Ok(serde_json::from_str(&s)?)
            }
            Some(name) => {
                if let Some(ws) = self.workspace.as_ref().filter(|ws| ws.contains(name)) {
                    return Ok(ws.load(name)?.1);
                }
                Ok(serde_json::from_str(&fs::read_to_string(name)?)?)
            }
        }
    }

    pub fn group(&mut self, arg: Option<&str>) -> Result<FiniteMatrixGroup> {
        let v = self.load(arg)?;
        to_group(&v, self.cap)
    }

    pub fn basis(&mut self, arg: Option<&str>) -> Result<NiceErrorBasis> {
        NiceErrorBasis::from_json(&self.load(arg)?)
    }

    /// A built-in group name (`q8`, `s3`, `z2xd8`, …) or any group input.
    pub fn abstract_group(&mut self, arg: Option<&str>) -> Result<AbstractGroup> {
        if let Some(g) = arg.and_then(|s| named::by_name(s).ok()) {
            return Ok(g);
        }
        let v = self.load(arg)?;
        if v.get("table").is_some() {
            return AbstractGroup::from_json(&v);
        }
        Ok(to_group(&v, self.cap)?.abstract_group().clone())
    }

    pub fn instance(&mut self, name: Option<&str>, setup: Option<&str>) -> Result<Instance> {
        match (name, setup) {
            (Some(n), None) => Instance::by_name(n, self.cap),
            (None, Some(s)) => {
                let v = self.load(Some(s))?;
                Instance::from_setup(&v)
            }
            _ => Err(Error::InvalidArgument("give exactly one of --instance or --setup".into())),
        }
    }
}

pub fn matrix(v: &Value) -> Result<CycMatrix> {
    CycMatrix::from_json(v).map_err(Error::InvalidArgument)
}

pub fn matrices(v: &Value) -> Result<Vec<CycMatrix>> {
    v.as_array()
        .ok_or_else(|| Error::InvalidArgument("expected a list of matrices".into()))?
        .iter()
        .map(matrix)
        .collect()
}

/// A group JSON, the closure of a basis, or the closure of a list of
/// matrices.
pub fn to_group(v: &Value, cap: usize) -> Result<FiniteMatrixGroup> {
    if v.get("elements").is_some() {
        return FiniteMatrixGroup::from_json(v);
    }
    let gens = if v.get("ops").is_some() {
        NiceErrorBasis::from_json(v)?.ops().to_vec()
    } else {
        matrices(v)?
    };
    let mut gens: Vec<CycMatrix> = gens.into_iter().filter(|m| !m.is_identity()).collect();
    if gens.is_empty() {
        let n = v["dim"].as_u64().unwrap_or(1) as usize;
        gens.push(CycMatrix::identity(n));
    }
    FiniteMatrixGroup::close(&gens, cap)
}

fn numbers(s: &str) -> Result<Vec<u64>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| Error::InvalidArgument(format!("not a non-negative integer: {t:?}")))
        })
        .collect()
}

pub fn indices(s: &str) -> Result<Vec<usize>> {
    Ok(numbers(s)?.into_iter().map(|x| x as usize).collect())
}

pub fn field(p: u64, k: usize, irreducible: Option<&str>) -> Result<Arc<Field>> {
    let modulus = irreducible.map(numbers).transpose()?;
    Ok(Arc::new(Field::new(p, k, modulus)?))
}

pub fn form(field: &Field, b: Option<&str>) -> Result<LinearForm> {
    match b {
        None => Ok(LinearForm::constant_term(field)),
        Some(s) => LinearForm::new(field, numbers(s)?),
    }
}

/// Rows separated by `;`, entries by `,`, each an element index below `q`.
pub fn words(field: &Field, s: &str) -> Result<Vec<Vec<Elem>>> {
    let q = field.size() as u64;
    s.split(';')
        .filter(|r| !r.trim().is_empty())
        .map(|r| {
            numbers(r)?
                .into_iter()
                .map(|x| {
                    if x < q {
                        Ok(x as Elem)
                    } else {
                        Err(Error::InvalidArgument(format!("{x} is not an element of GF({q})")))
                    }
                })
                .collect()
        })
        .collect()
}
