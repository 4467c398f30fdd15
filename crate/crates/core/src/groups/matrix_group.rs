//! Finite groups of cyclotomic matrices, generated by closure.

use std::collections::{HashMap, VecDeque};

use serde_json::Value;

use super::abstract_group::{AbstractGroup, TABLE_CAP};
use crate::cyclo::{CycMatrix, CycScalar, Rational};
use crate::error::{Error, Result};
use crate::numth;

pub const DEFAULT_CAP: usize = 65536;

#[derive(Clone, Debug)]
pub struct FiniteMatrixGroup {
    elements: Vec<CycMatrix>,
    group: AbstractGroup,
    generators: Vec<usize>,
    index: HashMap<Vec<Rational>, usize>,
}

impl FiniteMatrixGroup {
    /// Breadth-first closure of `gens`: element 0 is the identity, new
    /// elements are appended in discovery order of `x · g` for `x` in FIFO
    /// order and `g` in generator order.
    pub fn close(gens: &[CycMatrix], cap: usize) -> Result<Self> {
        let dim = match gens.first() {
            Some(g) => g.rows(),
            None => return Err(Error::InvalidArgument("at least one generator is required".into())),
        };
        for g in gens {
            if !g.is_square() || g.rows() != dim {
                return Err(Error::ShapeMismatch {
                    op: "close_generators",
                    left: (dim, dim),
                    right: g.shape(),
                });
            }
            if g.det()?.is_zero() {
                return Err(Error::Singular);
            }
        }
        let order = gens
            .iter()
            .fold(1u64, |acc, g| numth::lcm(acc, g.order()));
        if order > crate::cyclo::MAX_ORDER {
            return Err(Error::OrderCap(order));
        }
        let gens: Vec<CycMatrix> = gens.iter().map(|g| g.embed(order)).collect::<Result<_>>()?;
        let identity = CycMatrix::identity(dim).embed(order)?;

        let mut elements = vec![identity.clone()];
        let mut index = HashMap::from([(identity.key(), 0usize)]);
        // right[x][k] = index of elements[x] · gens[k]
        let mut right: Vec<Vec<u32>> = Vec::new();
        let mut parent: Vec<(usize, usize)> = vec![(0, 0)];
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            let mut row = Vec::with_capacity(gens.len());
            for (k, g) in gens.iter().enumerate() {
                let y = &elements[x] * g;
                let key = y.key();
                let j = match index.get(&key) {
                    Some(&j) => j,
                    None => {
                        if elements.len() >= cap {
                            return Err(Error::GroupTooLarge { cap });
                        }
                        let j = elements.len();
                        index.insert(key, j);
                        elements.push(y);
                        parent.push((x, k));
                        queue.push_back(j);
                        j
                    }
                };
                row.push(j as u32);
            }
            right.push(row);
        }

        let n = elements.len();
        if n > TABLE_CAP {
            return Err(Error::GroupCap {
                what: "multiplication table",
                order: n,
                cap: TABLE_CAP,
            });
        }
        // elements[j] = elements[parent] · gens[k] and discovery order puts
        // parents first, so row i fills left to right.
        let mut table = vec![0u32; n * n];
        for i in 0..n {
            table[i * n] = i as u32;
            for j in 1..n {
                let (p, k) = parent[j];
                let ip = table[i * n + p] as usize;
                table[i * n + j] = right[ip][k];
            }
        }
        let group = AbstractGroup::from_flat(n, table, 0)?;
        let generators = (0..gens.len())
            .map(|k| right[0][k] as usize)
            .collect();
        Ok(FiniteMatrixGroup {
            elements,
            group,
            generators,
            index,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].rows()
    }

    pub fn abstract_group(&self) -> &AbstractGroup {
        &self.group
    }

    pub fn elements(&self) -> &[CycMatrix] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &CycMatrix {
        &self.elements[i]
    }

    pub fn generator_indices(&self) -> &[usize] {
        &self.generators
    }

    pub fn identity(&self) -> usize {
        0
    }

    /// Common cyclotomic order of all elements.
    pub fn field_order(&self) -> u64 {
        self.elements[0].order()
    }

    pub fn index_of(&self, m: &CycMatrix) -> Option<usize> {
        if m.shape() != self.elements[0].shape() {
            return None;
        }
        let l = self.field_order();
        if l % m.order() != 0 {
            // The entries may still lie in the smaller field.
            return self.elements.iter().position(|e| e == m);
        }
        self.index.get(&m.embed(l).ok()?.key()).copied()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.group.mul(a, b)
    }

    pub fn inv(&self, a: usize) -> usize {
        self.group.inv(a)
    }

    /// Elements that are scalar multiples of the identity.
    pub fn scalar_elements(&self) -> Vec<usize> {
        (0..self.order())
            .filter(|&i| self.elements[i].as_scalar().is_some())
            .collect()
    }

    pub fn center(&self) -> Vec<usize> {
        self.group.center()
    }

    /// Whether every central element is a scalar matrix.
    pub fn center_is_scalar(&self) -> bool {
        self.center()
            .iter()
            .all(|&z| self.elements[z].as_scalar().is_some())
    }

    pub fn trace(&self, i: usize) -> CycScalar {
        self.elements[i].trace().expect("square")
    }

    /// The subgroup on the given indices, keeping their matrices.
    pub fn subgroup(&self, indices: &[usize]) -> Result<(FiniteMatrixGroup, Vec<usize>)> {
        let (group, idx) = self.group.restrict(indices)?;
        let elements: Vec<CycMatrix> = idx.iter().map(|&i| self.elements[i].clone()).collect();
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.key(), i))
            .collect();
        let sub = FiniteMatrixGroup {
            elements,
            group,
            generators: Vec::new(),
            index,
        };
        Ok((sub, idx))
    }

    /// Checks `elements[a]·elements[b] = elements[table[a][b]]` on every pair.
    pub fn verify_table(&self) -> bool {
        (0..self.order()).all(|a| {
            (0..self.order()).all(|b| &self.elements[a] * &self.elements[b] == self.elements[self.mul(a, b)])
        })
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.group.to_json();
        v["elements"] = Value::Array(self.elements.iter().map(CycMatrix::to_json).collect());
        v
    }

    /// Rebuilds a group from its JSON form, re-checking the table against
    /// the matrices.
    pub fn from_json(v: &Value) -> Result<Self> {
        let group = AbstractGroup::from_json(v)?;
        let elements = v["elements"]
            .as_array()
            .ok_or_else(|| Error::InvalidArgument("missing elements".into()))?
            .iter()
            .map(|e| CycMatrix::from_json(e).map_err(Error::InvalidArgument))
            .collect::<Result<Vec<_>>>()?;
        if elements.len() != group.order() || group.identity() != 0 {
            return Err(Error::InvalidArgument("elements disagree with the table".into()));
        }
        let l = elements.iter().fold(1, |acc, e| numth::lcm(acc, e.order()));
        let elements: Vec<CycMatrix> = elements.iter().map(|e| e.embed(l)).collect::<Result<_>>()?;
        let index: HashMap<Vec<Rational>, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.key(), i))
            .collect();
        let g = FiniteMatrixGroup {
            elements,
            group,
            generators: Vec::new(),
            index,
        };
        if g.index.len() != g.order() || !g.verify_table() {
            return Err(Error::Inconsistent("matrices do not realise the table".into()));
        }
        Ok(g)
    }
}
