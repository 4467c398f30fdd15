//! Built-in examples and the invariant suite run on them.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::codes::{
    character_code, check_lemmas, classify_errors, correctable_set, detectable_span_dimension, idempotent_frame,
    induced_characters, inertia_subgroup, primitive_idempotents, syndrome_frame, CodeKind, CodeSpace, NormalSubgroup,
};
use crate::cyclo::{CycMatrix, CycScalar, Rational};
use crate::error::{Error, Result};
use crate::error_basis::{egner_basis, gfpk_basis, pauli_basis, tensor_basis, verify_nice, ErrorGroup, NiceErrorBasis};
use crate::gfpk::{gfpk_code_report, invariance_scan, quantum_code_from_pair, AdditiveCode, Field, LinearForm, PairCode};
use crate::groups::FiniteMatrixGroup;
use crate::transversal::{qubit_pair_candidates, transversal_ops, two_block_transversal, TensorCandidate};

pub const NAMES: [&str; 5] = ["bitflip3", "bell2", "egner", "gf4-demo", "quaternion2"];

/// Normal closures sampled per instance by [`check_all`].
pub const RANDOM_SUBGROUPS: usize = 8;

/// Largest random normal closure whose characters are computed.
const RANDOM_ORDER_CAP: usize = 64;

/// An error group with a normal subgroup and a character of it present in
/// the defining representation.
#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub basis: Option<NiceErrorBasis>,
    pub group: Arc<FiniteMatrixGroup>,
    pub normal: NormalSubgroup,
    pub character: usize,
    /// Dimension of each tensor factor, when the space is a tensor power.
    pub local_dim: Option<usize>,
    /// Errors to correct, as ambient indices.
    pub syndrome_set: Option<Vec<usize>>,
    pub candidates: Vec<TensorCandidate>,
    pub pair: Option<PairCode>,
}

fn x() -> CycMatrix {
    CycMatrix::from_int_rows(&[&[0, 1], &[1, 0]])
}

fn z() -> CycMatrix {
    CycMatrix::from_int_rows(&[&[1, 0], &[0, -1]])
}

fn hadamard() -> CycMatrix {
    CycMatrix::from_int_rows(&[&[1, 1], &[1, -1]]).scale(&CycScalar::sqrt_rational(&Rational::new(1, 2)).expect("1/2"))
}

/// `m` on site `s` of `n` qubits.
fn on_site(m: &CycMatrix, s: usize, n: usize) -> CycMatrix {
    let f: Vec<CycMatrix> = (0..n).map(|t| if t == s { m.clone() } else { CycMatrix::identity(2) }).collect();
    CycMatrix::kron_all(&f).expect("non-empty")
}

fn index(g: &FiniteMatrixGroup, m: &CycMatrix) -> Result<usize> {
    g.index_of(m)
        .ok_or_else(|| Error::Inconsistent("instance element missing from its group".into()))
}

fn pauli_power(n: usize) -> Result<NiceErrorBasis> {
    let p = pauli_basis(2)?;
    let mut b = p.clone();
    for _ in 1..n {
        b = tensor_basis(&b, &p)?;
    }
    Ok(b)
}

/// The character equal to its degree on `fixed`, or else the first one
/// occurring in the representation.
fn pick_character(ns: &NormalSubgroup, fixed: &[usize]) -> Result<usize> {
    if !fixed.is_empty() {
        if let Some(c) = ns.stabilized_character(fixed)? {
            return Ok(c);
        }
    }
    for c in 0..ns.table().len() {
        if ns.multiplicity(c)? > 0 {
            return Ok(c);
        }
    }
    Err(Error::CharacterAbsent)
}

impl Instance {
    pub fn by_name(name: &str, cap: usize) -> Result<Instance> {
        match name {
            "bitflip3" => Self::bitflip3(cap),
            "bell2" => Self::bell2(cap),
            "egner" => Self::egner(cap),
            "gf4-demo" => Self::gf4_demo(cap),
            "quaternion2" => Self::quaternion2(cap),
            _ => Err(Error::InvalidArgument(format!(
                "unknown instance {name}; expected one of {}",
                NAMES.join(", ")
            ))),
        }
    }

    /// Three qubits, `N = ⟨Z⊗Z⊗I, I⊗Z⊗Z⟩` with `−I` added by normal closure,
    /// and the character trivial on both checks: the code `{|000⟩, |111⟩}`.
    pub fn bitflip3(cap: usize) -> Result<Instance> {
        let basis = pauli_power(3)?;
        let group = Arc::new(ErrorGroup::from_basis(&basis, Some(4), cap)?.group().clone());
        let i = CycMatrix::identity(2);
        let zzi = CycMatrix::kron_all(&[z(), z(), i.clone()]).expect("3 factors");
        let izz = CycMatrix::kron_all(&[i, z(), z()]).expect("3 factors");
        let checks = [index(&group, &zzi)?, index(&group, &izz)?];
        let normal = NormalSubgroup::closure(group.clone(), &checks)?;
        let character = pick_character(&normal, &checks)?;
        let mut s = vec![index(&group, &CycMatrix::identity(8))?];
        for site in 0..3 {
            s.push(index(&group, &on_site(&x(), site, 3))?);
        }
        let xs = vec![x(); 3];
        let candidates = vec![
            TensorCandidate::new("xxx", xs),
            TensorCandidate::new("zii", vec![z(), CycMatrix::identity(2), CycMatrix::identity(2)]),
            TensorCandidate::new("hhh", vec![hadamard(); 3]),
        ];
        Ok(Instance {
            name: "bitflip3".into(),
            basis: Some(basis),
            group,
            normal,
            character,
            local_dim: Some(2),
            syndrome_set: Some(s),
            candidates,
            pair: None,
        })
    }

    /// Two qubits, `N = ⟨X⊗X, Z⊗Z⟩`: four one-dimensional Bell codes.
    pub fn bell2(cap: usize) -> Result<Instance> {
        let basis = pauli_power(2)?;
        let group = Arc::new(ErrorGroup::from_basis(&basis, Some(4), cap)?.group().clone());
        let checks = [index(&group, &x().kron(&x()))?, index(&group, &z().kron(&z()))?];
        let normal = NormalSubgroup::closure(group.clone(), &checks)?;
        let character = pick_character(&normal, &checks)?;
        let s = vec![
            index(&group, &CycMatrix::identity(4))?,
            index(&group, &on_site(&x(), 0, 2))?,
            index(&group, &on_site(&z(), 0, 2))?,
            index(&group, &on_site(&(&x() * &z()), 0, 2))?,
        ];
        Ok(Instance {
            name: "bell2".into(),
            basis: Some(basis),
            group,
            normal,
            character,
            local_dim: Some(2),
            syndrome_set: Some(s),
            candidates: vec![TensorCandidate::new("hh", vec![hadamard(); 2])],
            pair: None,
        })
    }

    /// The semidirect-product basis with `N` the normal closure of
    /// `C = I ⊗ XZ`, a cyclic group of order 4 whose two faithful characters
    /// each occur twice.
    pub fn egner(cap: usize) -> Result<Instance> {
        let basis = egner_basis()?;
        let group = Arc::new(ErrorGroup::from_basis(&basis, None, cap)?.group().clone());
        let c = CycMatrix::identity(2).kron(&(&x() * &z()));
        let normal = NormalSubgroup::closure(group.clone(), &[index(&group, &c)?])?;
        let character = pick_character(&normal, &[])?;
        Ok(Instance {
            name: "egner".into(),
            basis: Some(basis),
            group,
            normal,
            character,
            local_dim: Some(2),
            syndrome_set: None,
            candidates: Vec::new(),
            pair: None,
        })
    }

    /// One `GF(4)` symbol: the pair `{0, 1} ⊂ GF(4)` with `b` the constant
    /// coefficient, and the same code cut out by the character trivial on
    /// the shift `C_1`.
    pub fn gf4_demo(cap: usize) -> Result<Instance> {
        let field = Arc::new(Field::new(2, 2, None)?);
        let b = LinearForm::constant_term(&field);
        let basis = gfpk_basis(&field, &b)?;
        let group = Arc::new(ErrorGroup::from_basis(&basis, None, cap)?.group().clone());
        let outer = AdditiveCode::new(field.clone(), 1, vec![vec![1], vec![field.theta()]])?;
        let inner = AdditiveCode::new(field.clone(), 1, vec![vec![1]])?;
        let pair = quantum_code_from_pair(&outer, &inner, &b, Some(vec![field.theta()]))?;
        let shift = index(&group, basis.op(field.size()))?;
        let normal = NormalSubgroup::closure(group.clone(), &[shift])?;
        let character = pick_character(&normal, &[shift])?;
        Ok(Instance {
            name: "gf4-demo".into(),
            basis: Some(basis),
            group,
            normal,
            character,
            local_dim: Some(4),
            syndrome_set: None,
            candidates: Vec::new(),
            pair: Some(pair),
        })
    }

    /// Two qubits with the quaternion group `⟨iX⊗I, iZ⊗I⟩` as `N`: its
    /// two-dimensional character occurs twice, so the code splits into
    /// idempotent codes.
    pub fn quaternion2(cap: usize) -> Result<Instance> {
        let basis = pauli_power(2)?;
        let group = Arc::new(ErrorGroup::from_basis(&basis, Some(4), cap)?.group().clone());
        let i = CycScalar::i();
        let gens = [
            index(&group, &on_site(&x(), 0, 2).scale(&i))?,
            index(&group, &on_site(&z(), 0, 2).scale(&i))?,
        ];
        let members = group.abstract_group().generated(&gens);
        let normal = NormalSubgroup::new(group.clone(), &members)?;
        let character = (0..normal.table().len())
            .find(|&c| normal.degree(c) == 2)
            .ok_or(Error::CharacterAbsent)?;
        Ok(Instance {
            name: "quaternion2".into(),
            basis: Some(basis),
            group,
            normal,
            character,
            local_dim: Some(2),
            syndrome_set: None,
            candidates: Vec::new(),
            pair: None,
        })
    }

    pub fn code(&self) -> Result<CodeSpace> {
        character_code(&self.normal, self.character)
    }

    pub fn syndrome_matrices(&self) -> Option<Vec<CycMatrix>> {
        self.syndrome_set
            .as_ref()
            .map(|s| s.iter().map(|&g| self.group.element(g).clone()).collect())
    }

    /// Normal closures of one or two random elements, skipping those above
    /// a fixed order.
    pub fn random_normal_subgroups(&self, count: usize, rng: &mut ChaCha8Rng) -> Result<Vec<NormalSubgroup>> {
        let mut out = Vec::with_capacity(count);
        let order = self.group.order();
        let mut attempts = 0;
        while out.len() < count {
            attempts += 1;
            if attempts > 64 * count.max(1) {
                return Err(Error::Inconsistent(format!("{}: too few small normal subgroups", self.name)));
            }
            let k = rng.gen_range(1..=2);
            let gens: Vec<usize> = (0..k).map(|_| rng.gen_range(0..order)).collect();
            let members = self.group.abstract_group().normal_closure(&gens);
            if members.len() <= RANDOM_ORDER_CAP {
                out.push(NormalSubgroup::new(self.group.clone(), &members)?);
            }
        }
        Ok(out)
    }

    /// A custom setup: `{"group", "normal", "character"?, "local_dim"?,
    /// "syndrome_set"?, "basis"?}` with `normal` listing elements whose
    /// normal closure is the subgroup and the character defaulting as for the
    /// built-in instances.
    pub fn from_setup(v: &Value) -> Result<Instance> {
        let bad = |what: &str| Error::InvalidArgument(format!("setup: {what}"));
        let indices = |key: &str| -> Result<Option<Vec<usize>>> {
            match &v[key] {
                Value::Null => Ok(None),
                Value::Array(a) => a
                    .iter()
                    .map(|x| x.as_u64().map(|x| x as usize).ok_or_else(|| bad(key)))
                    .collect::<Result<Vec<_>>>()
                    .map(Some),
                _ => Err(bad(key)),
            }
        };
        let group = Arc::new(FiniteMatrixGroup::from_json(&v["group"])?);
        let gens = indices("normal")?.ok_or_else(|| bad("missing normal"))?;
        if gens.iter().any(|&g| g >= group.order()) {
            return Err(bad("normal generator out of range"));
        }
        let normal = NormalSubgroup::closure(group.clone(), &gens)?;
        let character = match v["character"].as_u64() {
            Some(c) if (c as usize) < normal.table().len() => c as usize,
            Some(_) => return Err(bad("character out of range")),
            None => pick_character(&normal, &gens)?,
        };
        let syndrome_set = indices("syndrome_set")?;
        if syndrome_set.iter().flatten().any(|&g| g >= group.order()) {
            return Err(bad("syndrome element out of range"));
        }
        let basis = match &v["basis"] {
            Value::Null => None,
            b => Some(NiceErrorBasis::from_json(b)?),
        };
        Ok(Instance {
            name: v["name"].as_str().unwrap_or("custom").to_string(),
            basis,
            group,
            normal,
            character,
            local_dim: v["local_dim"].as_u64().map(|d| d as usize),
            syndrome_set,
            candidates: Vec::new(),
            pair: None,
        })
    }

    /// The form read by [`Instance::from_setup`].
    pub fn setup_json(&self) -> Value {
        json!({
            "name": self.name,
            "group": self.group.to_json(),
            "normal": self.normal.members(),
            "character": self.character,
            "local_dim": self.local_dim,
            "syndrome_set": self.syndrome_set,
            "basis": self.basis.as_ref().map(NiceErrorBasis::to_json),
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "dim": self.group.dim(),
            "group_order": self.group.order(),
            "normal_subgroup": self.normal.members(),
            "character": self.character,
            "local_dim": self.local_dim,
            "syndrome_set": self.syndrome_set,
        })
    }
}

fn section(pass: &mut bool, f: impl FnOnce() -> Result<(Value, bool)>) -> Value {
    match f() {
        Ok((v, ok)) => {
            *pass &= ok;
            v
        }
        Err(e) => {
            *pass = false;
            e.to_json()
        }
    }
}

/// Runs every structural check on an instance. The output depends only on
/// the instance and the seed.
pub fn check_all(inst: &Instance, seed: u64) -> Result<Value> {
    let ns = &inst.normal;
    let chi = inst.character;
    let mut pass = true;
    let mut out = serde_json::Map::new();
    out.insert("instance".into(), inst.to_json());
    out.insert("seed".into(), json!(seed));

    if let Some(basis) = &inst.basis {
        out.insert(
            "basis".into(),
            section(&mut pass, || {
                let r = verify_nice(basis);
                Ok((r.to_json(), r.passed()))
            }),
        );
    }
    let induced = induced_characters(ns);
    out.insert(
        "lemmas".into(),
        section(&mut pass, || {
            let induced = induced.as_ref().map_err(|e| Error::Inconsistent(e.to_string()))?;
            let r = check_lemmas(ns, induced);
            Ok((r.to_json(), r.passed()))
        }),
    );
    let code = character_code(ns, chi)?;
    let inertia = inertia_subgroup(ns, chi)?;
    out.insert("inertia".into(), inertia.to_json());
    out.insert(
        "code".into(),
        json!({ "dim": code.dim(), "ambient_dim": code.ambient_dim(), "multiplicity": ns.multiplicity(chi)? }),
    );

    let split = primitive_idempotents(ns, chi, seed);
    out.insert(
        "idempotents".into(),
        section(&mut pass, || {
            let s = split.as_ref().map_err(|e| Error::Inconsistent(e.to_string()))?;
            Ok((s.to_json(), true))
        }),
    );
    let exact = split.as_ref().ok().and_then(|s| s.exact());
    let idem_code = match &exact {
        Some(e) if e.len() > 1 => Some(CodeSpace::from_projector(
            e[0].clone(),
            CodeKind::Idempotent(0),
            json!({ "idempotent": 0 }),
        )?),
        _ => None,
    };

    out.insert(
        "classification".into(),
        section(&mut pass, || {
            let c = classify_errors(ns, &inertia, &code, idem_code.as_ref())?;
            Ok((c.to_json(), true))
        }),
    );
    out.insert(
        "dims".into(),
        section(&mut pass, || {
            let induced = induced.as_ref().map_err(|e| Error::Inconsistent(e.to_string()))?;
            let r = detectable_span_dimension(ns, &inertia, &code, induced)?;
            let ok = r.matches() || !r.abelian;
            Ok((r.to_json(), ok))
        }),
    );

    let s = inst.syndrome_matrices();
    out.insert(
        "syndrome".into(),
        section(&mut pass, || {
            let frame = syndrome_frame(ns, &inertia, &code, s.as_deref())?;
            let set = correctable_set(ns, &frame)?;
            Ok((
                json!({ "coset_reps": frame.coset_reps, "kernel": frame.kernel, "correctable": set.to_json() }),
                true,
            ))
        }),
    );
    if let Some(e) = exact.as_ref().filter(|e| e.len() > 1) {
        out.insert(
            "idempotent_syndrome".into(),
            section(&mut pass, || {
                let frame = idempotent_frame(ns, &inertia, e, None)?;
                let set = correctable_set(ns, &frame)?;
                Ok((
                    json!({ "coset_reps": frame.coset_reps, "blocks": e.len(), "correctable": set.to_json() }),
                    true,
                ))
            }),
        );
    }

    out.insert(
        "transversal".into(),
        section(&mut pass, || {
            let r = transversal_ops(ns, chi, &code, inst.local_dim, &inst.candidates)?;
            let extras: Vec<Value> = r
                .ops
                .iter()
                .filter(|o| o.name.is_some())
                .map(|o| json!({ "name": o.name, "logical": o.logical.to_json() }))
                .collect();
            let excluded: Vec<Value> = r
                .excluded
                .iter()
                .map(|e| json!({ "name": e.name, "reason": e.reason }))
                .collect();
            Ok((
                json!({
                    "count": r.ops.len(),
                    "distinct_actions": r.distinct_actions,
                    "closed": r.closed,
                    "candidates": extras,
                    "excluded": excluded,
                }),
                r.closed,
            ))
        }),
    );
    if inst.local_dim == Some(2) {
        out.insert(
            "two_block".into(),
            section(&mut pass, || {
                let r = two_block_transversal(ns, chi, &code, 2, &qubit_pair_candidates())?;
                Ok((r.to_json(), true))
            }),
        );
    }

    if let Some(pc) = &inst.pair {
        out.insert(
            "pair".into(),
            section(&mut pass, || {
                let scan = invariance_scan(pc)?;
                let report = gfpk_code_report(pc)?;
                let same = pc.code.projector() == code.projector();
                Ok((
                    json!({
                        "invariance": scan.to_json(&pc.field),
                        "report": report.to_json(&pc.field),
                        "matches_character_code": same,
                    }),
                    scan.matches() && same,
                ))
            }),
        );
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    out.insert(
        "random_normal_subgroups".into(),
        section(&mut pass, || {
            let mut rows = Vec::new();
            let mut exceptions = 0;
            for sub in inst.random_normal_subgroups(RANDOM_SUBGROUPS, &mut rng)? {
                let induced = induced_characters(&sub)?;
                let r = check_lemmas(&sub, &induced);
                exceptions += r.permutation_exceptions.len();
                exceptions += usize::from(!r.equal_degrees) + usize::from(!r.equal_multiplicities) + usize::from(!r.counting);
                rows.push(json!({ "order": sub.order(), "characters": induced.len(), "passed": r.passed() }));
            }
            Ok((json!({ "subgroups": rows, "exceptions": exceptions }), exceptions == 0))
        }),
    );
    out.insert("pass".into(), json!(pass));
    Ok(Value::Object(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::DEFAULT_CAP;

    #[test]
    fn every_instance_builds() {
        for name in NAMES {
            let inst = Instance::by_name(name, DEFAULT_CAP).unwrap();
            let code = inst.code().unwrap();
            assert!(code.dim() > 0, "{name}");
        }
        assert!(Instance::by_name("nope", DEFAULT_CAP).is_err());
    }

    #[test]
    fn gf4_views_agree() {
        let inst = Instance::gf4_demo(DEFAULT_CAP).unwrap();
        let code = inst.code().unwrap();
        assert_eq!(code.projector(), inst.pair.unwrap().code.projector());
    }

    #[test]
    fn setup_round_trip() {
        let inst = Instance::bell2(DEFAULT_CAP).unwrap();
        let back = Instance::from_setup(&inst.setup_json()).unwrap();
        assert_eq!(back.normal.members(), inst.normal.members());
        assert_eq!(back.character, inst.character);
        assert_eq!(back.syndrome_set, inst.syndrome_set);
        assert_eq!(back.code().unwrap().projector(), inst.code().unwrap().projector());
    }

    #[test]
    fn check_all_passes_on_every_instance() {
        for name in NAMES {
            let inst = Instance::by_name(name, DEFAULT_CAP).unwrap();
            let v = check_all(&inst, 3).unwrap();
            assert_eq!(v["pass"], json!(true), "{name}: {v:#}");
        }
    }
}
