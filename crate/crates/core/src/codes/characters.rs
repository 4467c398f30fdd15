use std::sync::Arc;

use serde_json::{json, Value};

use crate::cyclo::{CycMatrix, CycScalar, Rational};
use crate::error::{Error, Result};
use crate::groups::{CharacterTable, FiniteMatrixGroup};

/// `χ̄ = (d/|N|) Σ_g conj(χ(g)) M_g` for a character given by its value on
/// every element of `n`. The result is zero exactly when `χ` does not occur.
pub fn char_projection(n: &FiniteMatrixGroup, values: &[CycScalar]) -> Result<CycMatrix> {
    if values.len() != n.order() {
        return Err(Error::InvalidArgument(format!(
            "{} character values for a group of order {}",
            values.len(),
            n.order()
        )));
    }
    let norm = values
        .iter()
        .fold(CycScalar::zero(), |acc, v| &acc + &v.norm_sqr())
        .scale(&Rational::new(1, n.order() as i64));
    if !norm.is_one() {
        return Err(Error::NotIrreducible(format!("⟨χ, χ⟩ = {norm}")));
    }
    let degree = values[n.identity()]
        .as_rational()
        .filter(|d| d.is_integer() && !d.is_negative() && !d.is_zero())
        .ok_or_else(|| Error::NotIrreducible("χ(1) is not a positive integer".into()))?;
    let d = n.dim();
    let mut sum = CycMatrix::zeros(d, d);
    for (m, v) in n.elements().iter().zip(values) {
        if !v.is_zero() {
            sum = &sum + &m.scale(&v.conj());
        }
    }
    let scale = &degree * &Rational::new(1, n.order() as i64);
    Ok(sum.scale_rational(&scale))
}

/// A normal subgroup of a finite matrix group, with the character table of
/// the subgroup and the index translation both ways.
#[derive(Clone, Debug)]
pub struct NormalSubgroup {
    ambient: Arc<FiniteMatrixGroup>,
    members: Vec<usize>,
    group: FiniteMatrixGroup,
    table: CharacterTable,
    local: Vec<Option<usize>>,
}

impl NormalSubgroup {
    pub fn new(ambient: Arc<FiniteMatrixGroup>, members: &[usize]) -> Result<Self> {
        if !ambient.abstract_group().is_normal(members)? {
            return Err(Error::NotNormal);
        }
        let (group, members) = ambient.subgroup(members)?;
        let table = CharacterTable::compute(group.abstract_group())?;
        let mut local = vec![None; ambient.order()];
        for (i, &g) in members.iter().enumerate() {
            local[g] = Some(i);
        }
        Ok(NormalSubgroup {
            ambient,
            members,
            group,
            table,
            local,
        })
    }

    /// The smallest normal subgroup containing the given elements.
    pub fn closure(ambient: Arc<FiniteMatrixGroup>, gens: &[usize]) -> Result<Self> {
        let members = ambient.abstract_group().normal_closure(gens);
        Self::new(ambient, &members)
    }

    pub fn ambient(&self) -> &Arc<FiniteMatrixGroup> {
        &self.ambient
    }

    /// Ambient indices of the members, ascending.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn group(&self) -> &FiniteMatrixGroup {
        &self.group
    }

    pub fn table(&self) -> &CharacterTable {
        &self.table
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.local[g].is_some()
    }

    pub fn local(&self, g: usize) -> Option<usize> {
        self.local[g]
    }

    /// `χ(g)` for an ambient element `g` of the subgroup.
    pub fn value(&self, chi: usize, g: usize) -> Option<&CycScalar> {
        self.local[g].map(|i| self.table.value(chi, i))
    }

    pub fn degree(&self, chi: usize) -> usize {
        self.table.dim(chi)
    }

    pub fn projection(&self, chi: usize) -> Result<CycMatrix> {
        char_projection(&self.group, &self.table.element_values(chi))
    }

    /// How often `chi` occurs in the defining representation.
    pub fn multiplicity(&self, chi: usize) -> Result<usize> {
        let traces: Vec<CycScalar> = (0..self.group.order()).map(|i| self.group.trace(i)).collect();
        let m = self.table.inner_product(&traces, &self.table.element_values(chi));
        m.as_rational()
            .and_then(|r| r.as_small())
            .filter(|&(num, den)| den == 1 && num >= 0)
            .map(|(num, _)| num as usize)
            .ok_or_else(|| Error::Inconsistent(format!("multiplicity {m} is not a natural number")))
    }

    /// Ambient indices of `{h ∈ N : |χ(h)| = χ(1)}`, the elements acting as
    /// scalars on the isotypic component.
    pub fn character_center(&self, chi: usize) -> Vec<usize> {
        let d = self.degree(chi) as i64;
        let d2 = CycScalar::from_int(d * d);
        self.members
            .iter()
            .enumerate()
            .filter(|&(i, _)| self.table.value(chi, i).norm_sqr() == d2)
            .map(|(_, &g)| g)
            .collect()
    }

    /// The first occurring character taking the value `χ(1)` on each listed
    /// ambient element.
    pub fn stabilized_character(&self, fixed: &[usize]) -> Result<Option<usize>> {
        for chi in 0..self.table.len() {
            let d = &self.table.characters()[chi][0];
            let ok = fixed.iter().all(|&g| self.value(chi, g).is_some_and(|v| v == d));
            if ok && self.multiplicity(chi)? > 0 {
                return Ok(Some(chi));
            }
        }
        Ok(None)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "members": self.members,
            "order": self.order(),
            "characters": self.table.to_json(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct InducedCharacter {
    pub character: usize,
    pub degree: usize,
    pub multiplicity: usize,
    pub projector: CycMatrix,
}

/// Every irreducible character of `N` occurring in the ambient
/// representation. Equal multiplicities and a complete orthogonal family of
/// projectors are checked before returning.
pub fn induced_characters(ns: &NormalSubgroup) -> Result<Vec<InducedCharacter>> {
    let mut out = Vec::new();
    for chi in 0..ns.table().len() {
        let multiplicity = ns.multiplicity(chi)?;
        if multiplicity > 0 {
            out.push(InducedCharacter {
                character: chi,
                degree: ns.degree(chi),
                multiplicity,
                projector: ns.projection(chi)?,
            });
        }
    }
    if out.windows(2).any(|w| w[0].multiplicity != w[1].multiplicity) {
        return Err(Error::Inconsistent("induced characters have unequal multiplicities".into()));
    }
    let n = ns.ambient().dim();
    let mut sum = CycMatrix::zeros(n, n);
    for (i, a) in out.iter().enumerate() {
        sum = &sum + &a.projector;
        for b in &out[i + 1..] {
            if !(&a.projector * &b.projector).is_zero() {
                return Err(Error::Inconsistent("character projectors are not orthogonal".into()));
            }
        }
    }
    if !sum.is_identity() {
        return Err(Error::Inconsistent("character projectors do not sum to the identity".into()));
    }
    Ok(out)
}

#[derive(Clone, Debug, Default)]
pub struct LemmaReport {
    /// `(g, i)` with `g χ̄_i g⁻¹` not among the projectors.
    pub permutation_exceptions: Vec<(usize, usize)>,
    pub equal_degrees: bool,
    pub equal_multiplicities: bool,
    /// characters × multiplicity × degree = ambient dimension
    pub counting: bool,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.permutation_exceptions.is_empty() && self.equal_degrees && self.equal_multiplicities && self.counting
    }

    pub fn to_json(&self) -> Value {
        json!({
            "permutation_exceptions": self.permutation_exceptions,
            "equal_degrees": self.equal_degrees,
            "equal_multiplicities": self.equal_multiplicities,
            "counting": self.counting,
            "pass": self.passed(),
        })
    }
}

/// Conjugation by every ambient element permutes the character projectors,
/// and the occurring characters share degree and multiplicity.
pub fn check_lemmas(ns: &NormalSubgroup, induced: &[InducedCharacter]) -> LemmaReport {
    let keys: Vec<Vec<Rational>> = induced.iter().map(|c| c.projector.key()).collect();
    let ambient = ns.ambient();
    let mut permutation_exceptions = Vec::new();
    for g in 0..ambient.order() {
        let m = ambient.element(g);
        let minv = ambient.element(ambient.inv(g));
        for (i, c) in induced.iter().enumerate() {
            let conj = &(m * &c.projector) * minv;
            if !keys.contains(&conj.key()) {
                permutation_exceptions.push((g, i));
            }
        }
    }
    let all_eq = |f: fn(&InducedCharacter) -> usize| induced.windows(2).all(|w| f(&w[0]) == f(&w[1]));
    let counting = induced
        .first()
        .is_some_and(|c| induced.len() * c.multiplicity * c.degree == ambient.dim());
    LemmaReport {
        permutation_exceptions,
        equal_degrees: all_eq(|c| c.degree),
        equal_multiplicities: all_eq(|c| c.multiplicity),
        counting,
    }
}

/// The stabiliser of a character under conjugation, with left coset
/// representatives chosen as the lowest index in each coset.
#[derive(Clone, Debug)]
pub struct Inertia {
    pub character: usize,
    /// Ambient indices, ascending.
    pub subgroup: Vec<usize>,
    pub coset_reps: Vec<usize>,
    /// Coset number of every ambient element.
    pub coset_of: Vec<usize>,
}

impl Inertia {
    /// `|Ē / T(χ)|`, the number of distinct conjugates of `χ`.
    pub fn num_cosets(&self) -> usize {
        self.coset_reps.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.coset_of[g] == 0
    }

    pub fn to_json(&self) -> Value {
        json!({
            "character": self.character,
            "subgroup": self.subgroup,
            "order": self.subgroup.len(),
            "coset_reps": self.coset_reps,
            "r": self.num_cosets(),
        })
    }
}

pub fn inertia_subgroup(ns: &NormalSubgroup, chi: usize) -> Result<Inertia> {
    if ns.multiplicity(chi)? == 0 {
        return Err(Error::CharacterAbsent);
    }
    let ambient = ns.ambient();
    let g_abs = ambient.abstract_group();
    let subgroup: Vec<usize> = (0..ambient.order())
        .filter(|&g| {
            let ginv = g_abs.inv(g);
            ns.members().iter().all(|&h| {
                let c = g_abs.mul(g_abs.mul(ginv, h), g);
                ns.value(chi, c) == ns.value(chi, h)
            })
        })
        .collect();
    if !ns.members().iter().all(|h| subgroup.binary_search(h).is_ok()) {
        return Err(Error::Inconsistent("inertia subgroup does not contain N".into()));
    }
    // with N abelian and Ē abelian modulo scalars, conjugation only rescales,
    // so the stabiliser of a linear character is the centraliser of N
    let scalars = ambient.scalar_elements();
    if ns.group().abstract_group().is_abelian() && quotient_abelian(ambient, &scalars) {
        let centralizer: Vec<usize> = (0..ambient.order())
            .filter(|&g| ns.members().iter().all(|&h| g_abs.mul(g, h) == g_abs.mul(h, g)))
            .collect();
        if centralizer != subgroup {
            return Err(Error::Inconsistent("inertia subgroup differs from the centralizer of N".into()));
        }
    }
    let (coset_reps, coset_of) = left_cosets(ambient, &subgroup, &[]);
    Ok(Inertia {
        character: chi,
        subgroup,
        coset_reps,
        coset_of,
    })
}

fn quotient_abelian(g: &FiniteMatrixGroup, scalars: &[usize]) -> bool {
    let a = g.abstract_group();
    let derived = a.derived_subgroup();
    derived.iter().all(|d| scalars.contains(d))
}

/// Left cosets `gT` ordered by their lowest element; `preferred` elements
/// (in order) take precedence as representatives of their cosets.
pub(crate) fn left_cosets(g: &FiniteMatrixGroup, t: &[usize], preferred: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let a = g.abstract_group();
    let mut coset_of = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for x in 0..g.order() {
        if coset_of[x] == usize::MAX {
            let c = reps.len();
            reps.push(x);
            for &y in t {
                coset_of[a.mul(x, y)] = c;
            }
        }
    }
    let mut taken = vec![false; reps.len()];
    for &s in preferred {
        let c = coset_of[s];
        if !taken[c] {
            taken[c] = true;
            reps[c] = s;
        }
    }
    (reps, coset_of)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::DEFAULT_CAP;

    fn paulis(sites: usize, phase: bool) -> Arc<FiniteMatrixGroup> {
        let x = CycMatrix::from_int_rows(&[&[0, 1], &[1, 0]]);
        let z = CycMatrix::from_int_rows(&[&[1, 0], &[0, -1]]);
        let i = CycMatrix::identity(2);
        let mut gens = Vec::new();
        for s in 0..sites {
            for m in [&x, &z] {
                let f: Vec<CycMatrix> = (0..sites).map(|t| if t == s { m.clone() } else { i.clone() }).collect();
                gens.push(CycMatrix::kron_all(&f).unwrap());
            }
        }
        if phase {
            gens.push(CycMatrix::scalar(1 << sites, &CycScalar::i()));
        }
        Arc::new(FiniteMatrixGroup::close(&gens, DEFAULT_CAP).unwrap())
    }

    #[test]
    fn trivial_group_projects_to_identity() {
        let g = Arc::new(FiniteMatrixGroup::close(&[CycMatrix::identity(3)], DEFAULT_CAP).unwrap());
        let ns = NormalSubgroup::new(g, &[0]).unwrap();
        assert!(ns.projection(0).unwrap().is_identity());
    }

    #[test]
    fn full_qubit_group() {
        let g = paulis(1, false);
        let ns = NormalSubgroup::new(g.clone(), &(0..g.order()).collect::<Vec<_>>()).unwrap();
        let two = (0..ns.table().len()).find(|&c| ns.degree(c) == 2).unwrap();
        assert!(ns.projection(two).unwrap().is_identity());
        let induced = induced_characters(&ns).unwrap();
        assert_eq!(induced.len(), 1);
        let t = inertia_subgroup(&ns, two).unwrap();
        assert_eq!(t.num_cosets(), 1);
    }

    #[test]
    fn bell_characters() {
        let g = paulis(2, true);
        let x = CycMatrix::from_int_rows(&[&[0, 1], &[1, 0]]);
        let z = CycMatrix::from_int_rows(&[&[1, 0], &[0, -1]]);
        let xx = g.index_of(&x.kron(&x)).unwrap();
        let zz = g.index_of(&z.kron(&z)).unwrap();
        let ns = NormalSubgroup::closure(g.clone(), &[xx, zz]).unwrap();
        assert_eq!(ns.order(), 8);
        let induced = induced_characters(&ns).unwrap();
        assert_eq!(induced.len(), 4);
        assert!(induced.iter().all(|c| c.multiplicity == 1 && c.projector.rank() == 1));
        assert!(check_lemmas(&ns, &induced).passed());
        let chi = ns.stabilized_character(&[xx, zz]).unwrap().unwrap();
        let t = inertia_subgroup(&ns, chi).unwrap();
        assert_eq!(t.num_cosets(), 4);
        assert_eq!(t.subgroup.len() * 4, g.order());
    }

    #[test]
    fn irreducibility_is_checked() {
        let g = paulis(1, false);
        let twice: Vec<CycScalar> = vec![CycScalar::from_int(2); g.order()];
        assert!(matches!(char_projection(&g, &twice), Err(Error::NotIrreducible(_))));
    }

    #[test]
    fn non_normal_rejected() {
        let g = paulis(1, false);
        let x = g.index_of(&CycMatrix::from_int_rows(&[&[0, 1], &[1, 0]])).unwrap();
        assert!(matches!(NormalSubgroup::new(g, &[0, x]), Err(Error::NotNormal)));
    }
}
