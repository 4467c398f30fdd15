use nalgebra::DVector;
use num_complex::Complex64;
use serde_json::{json, Value};

use super::characters::{left_cosets, Inertia, NormalSubgroup};
use super::space::{is_correctable_set, CodeKind, CodeSpace};
use crate::cyclo::{inner, vector_to_json, CycMatrix, CycScalar, Rational};
use crate::error::{Error, Result};

const NUMERIC_ZERO: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct Syndrome {
    pub coset: usize,
    /// Which idempotent block, 0 for character frames.
    pub block: usize,
    pub projector: CycMatrix,
    /// Maps the syndrome subspace back onto the code isometrically.
    pub recovery: CycMatrix,
}

/// Orthogonal subspaces `g_i 𝓒` (or `g_i 𝓒(e_j)`) with the recovery
/// "project, then undo `g_i`".
#[derive(Clone, Debug)]
pub struct SyndromeFrame {
    pub code: CodeSpace,
    pub coset_reps: Vec<usize>,
    pub syndromes: Vec<Syndrome>,
    /// Ambient indices `K` with `⋃ g_i K` correctable: the character
    /// center for character codes, `N` for idempotent codes.
    pub kernel: Vec<usize>,
    /// `e_ij` with `e_ij e_k e_ij† = δ_jk e_i`, for idempotent frames.
    pub matrix_units: Option<Vec<Vec<CycMatrix>>>,
}

impl SyndromeFrame {
    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.code.kind().label(),
            "coset_reps": self.coset_reps,
            "syndromes": self.syndromes.iter().map(|s| json!({
                "coset": s.coset,
                "block": s.block,
                "projector": s.projector.to_json(),
            })).collect::<Vec<_>>(),
            "kernel": self.kernel,
        })
    }
}

/// Coset representatives for `Ē / T(χ)`, taken from `s` where `s` meets a
/// coset. `S†S` must be detected, and elements of `s` sharing a coset must
/// differ by an element of `kernel`.
fn choose_reps(
    ns: &NormalSubgroup,
    inertia: &Inertia,
    code: &CodeSpace,
    kernel: &[usize],
    s: Option<&[CycMatrix]>,
) -> Result<Vec<usize>> {
    let ambient = ns.ambient();
    let Some(s) = s else {
        return Ok(inertia.coset_reps.clone());
    };
    let report = is_correctable_set(code, s)?;
    if !report.passed() {
        return Err(Error::NotDetectable(format!(
            "S†S fails on pairs {:?}",
            report.failures
        )));
    }
    let idx = s
        .iter()
        .map(|m| {
            ambient
                .index_of(m)
                .ok_or_else(|| Error::InvalidArgument("an element of S is not in the error group".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let a = ambient.abstract_group();
    for (i, &x) in idx.iter().enumerate() {
        for &y in &idx[i + 1..] {
            if inertia.coset_of[x] == inertia.coset_of[y] && kernel.binary_search(&a.mul(a.inv(x), y)).is_err() {
                return Err(Error::Inconsistent(format!(
                    "elements {x} and {y} of S share a coset of T(χ) but not of the kernel"
                )));
            }
        }
    }
    Ok(left_cosets(ambient, &inertia.subgroup, &idx).0)
}

fn check_partition(syndromes: &[Syndrome], n: usize) -> Result<()> {
    let mut sum = CycMatrix::zeros(n, n);
    for (i, a) in syndromes.iter().enumerate() {
        for b in &syndromes[i + 1..] {
            if !(&a.projector * &b.projector).is_zero() {
                return Err(Error::Inconsistent(format!(
                    "syndrome subspaces ({}, {}) and ({}, {}) overlap",
                    a.coset, a.block, b.coset, b.block
                )));
            }
        }
        sum = &sum + &a.projector;
    }
    if !sum.is_identity() {
        return Err(Error::Inconsistent("syndrome subspaces do not fill the space".into()));
    }
    Ok(())
}

/// Frame for the character code `𝓒(χ)`.
pub fn syndrome_frame(
    ns: &NormalSubgroup,
    inertia: &Inertia,
    code: &CodeSpace,
    s: Option<&[CycMatrix]>,
) -> Result<SyndromeFrame> {
    let kernel = ns.character_center(inertia.character);
    let reps = choose_reps(ns, inertia, code, &kernel, s)?;
    let ambient = ns.ambient();
    let p = code.projector();
    let syndromes: Vec<Syndrome> = reps
        .iter()
        .enumerate()
        .map(|(i, &g)| {
            let m = ambient.element(g);
            let md = m.dagger();
            Syndrome {
                coset: i,
                block: 0,
                projector: &(m * p) * &md,
                recovery: p * &md,
            }
        })
        .collect();
    check_partition(&syndromes, code.ambient_dim())?;
    Ok(SyndromeFrame {
        code: code.clone(),
        coset_reps: reps,
        syndromes,
        kernel,
        matrix_units: None,
    })
}

/// `e_1j` for every `j`: a partial isometry from the range of `e_j` onto
/// the range of `e_1` of the form `e_1 h e_j / √λ`, `h ∈ N`.
fn first_row_units(ns: &NormalSubgroup, e: &[CycMatrix]) -> Result<Vec<CycMatrix>> {
    let mut row = vec![e[0].clone()];
    for ej in &e[1..] {
        let unit = ns
            .group()
            .elements()
            .iter()
            .find_map(|h| {
                let x = &(&e[0] * h) * ej;
                if x.is_zero() {
                    return None;
                }
                let lambda = (&x * &x.dagger()).is_proportional(&e[0]).ok()??.as_rational()?;
                let s = CycScalar::sqrt_rational(&lambda).ok()?;
                Some(x.scale(&s.inv()?))
            })
            .ok_or_else(|| Error::NoExactNormalization("no exact matrix unit between idempotents".into()))?;
        row.push(unit);
    }
    Ok(row)
}

/// Frame for the idempotent code `𝓒(e_1)`: subspaces `g_i 𝓒(e_j)`,
/// recovered by `e_1j g_i†`.
pub fn idempotent_frame(
    ns: &NormalSubgroup,
    inertia: &Inertia,
    idempotents: &[CycMatrix],
    s: Option<&[CycMatrix]>,
) -> Result<SyndromeFrame> {
    if idempotents.is_empty() {
        return Err(Error::InvalidArgument("no idempotents".into()));
    }
    let code = CodeSpace::from_projector(
        idempotents[0].clone(),
        CodeKind::Idempotent(0),
        json!({ "normal_subgroup": ns.members(), "character": inertia.character, "idempotent": 0 }),
    )?;
    let kernel = ns.members().to_vec();
    let reps = choose_reps(ns, inertia, &code, &kernel, s)?;
    let first = first_row_units(ns, idempotents)?;
    let d = idempotents.len();
    let units: Vec<Vec<CycMatrix>> = (0..d)
        .map(|i| (0..d).map(|j| &first[i].dagger() * &first[j]).collect())
        .collect();
    for i in 0..d {
        for j in 0..d {
            for (k, ek) in idempotents.iter().enumerate() {
                let got = &(&units[i][j] * ek) * &units[i][j].dagger();
                let ok = if j == k { got == idempotents[i] } else { got.is_zero() };
                if !ok {
                    return Err(Error::Inconsistent(format!("matrix unit e_{i}{j} fails on e_{k}")));
                }
            }
        }
    }
    let ambient = ns.ambient();
    let mut syndromes = Vec::with_capacity(reps.len() * d);
    for (i, &g) in reps.iter().enumerate() {
        let m = ambient.element(g);
        let md = m.dagger();
        for (j, ej) in idempotents.iter().enumerate() {
            syndromes.push(Syndrome {
                coset: i,
                block: j,
                projector: &(m * ej) * &md,
                recovery: &first[j] * &md,
            });
        }
    }
    check_partition(&syndromes, code.ambient_dim())?;
    Ok(SyndromeFrame {
        code,
        coset_reps: reps,
        syndromes,
        kernel,
        matrix_units: Some(units),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    pub syndrome: usize,
    pub probability: Rational,
    pub state: Vec<CycScalar>,
}

impl Branch {
    pub fn to_json(&self) -> Value {
        json!({
            "syndrome": self.syndrome,
            "probability": crate::cyclo::rational_to_json(&self.probability),
            "state": vector_to_json(&self.state),
        })
    }
}

/// Measures the syndrome and applies the matching correction. Branch
/// probabilities must be rational for the post-measurement state to be
/// normalised exactly.
pub fn recover(frame: &SyndromeFrame, state: &[CycScalar]) -> Result<Vec<Branch>> {
    if state.len() != frame.code.ambient_dim() {
        return Err(Error::ShapeMismatch {
            op: "recover",
            left: (frame.code.ambient_dim(), 1),
            right: (state.len(), 1),
        });
    }
    if !inner(state, state).is_one() {
        return Err(Error::NotNormalized);
    }
    let mut out = Vec::new();
    for (i, s) in frame.syndromes.iter().enumerate() {
        let proj = s.projector.mul_vec(state)?;
        let p = inner(&proj, &proj);
        if p.is_zero() {
            continue;
        }
        let p = p
            .as_rational()
            .ok_or_else(|| Error::NoExactNormalization(format!("syndrome {i} has irrational probability")))?;
        let norm = CycScalar::sqrt_rational(&p)?.inv().expect("nonzero");
        let post: Vec<CycScalar> = s.recovery.mul_vec(&proj)?.iter().map(|x| x * &norm).collect();
        out.push(Branch {
            syndrome: i,
            probability: p,
            state: post,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct NumericBranch {
    pub syndrome: usize,
    pub probability: f64,
    pub state: DVector<Complex64>,
}

/// Floating-point [`recover`], for states without an exact form.
pub fn recover_numeric(frame: &SyndromeFrame, state: &DVector<Complex64>) -> Result<Vec<NumericBranch>> {
    if (state.norm_squared() - 1.0).abs() > NUMERIC_ZERO {
        return Err(Error::NotNormalized);
    }
    let mut out = Vec::new();
    for (i, s) in frame.syndromes.iter().enumerate() {
        let proj = s.projector.to_complex() * state;
        let p = proj.norm_squared();
        if p <= NUMERIC_ZERO {
            continue;
        }
        let post = s.recovery.to_complex() * proj * Complex64::new(1.0 / p.sqrt(), 0.0);
        out.push(NumericBranch {
            syndrome: i,
            probability: p,
            state: post,
        });
    }
    Ok(out)
}

/// `c` with `u = c v` and `|c| = 1`.
pub(crate) fn phase_between(u: &[CycScalar], v: &[CycScalar]) -> Option<CycScalar> {
    let pivot = v.iter().position(|x| !x.is_zero())?;
    let c = &u[pivot] * &v[pivot].inv()?;
    let same = u.iter().zip(v).all(|(a, b)| *a == &c * b);
    (same && c.norm_sqr().is_one()).then_some(c)
}

#[derive(Clone, Debug)]
pub struct CorrectableSet {
    pub elements: Vec<usize>,
    /// Number of (element, test state) pairs simulated.
    pub simulations: usize,
}

impl CorrectableSet {
    pub fn to_json(&self) -> Value {
        json!({ "elements": self.elements, "size": self.elements.len(), "simulations": self.simulations })
    }
}

/// Logical basis states plus the normalised sum of the first two.
pub(crate) fn test_states(code: &CodeSpace) -> Result<Vec<Vec<CycScalar>>> {
    let basis = code
        .logical_basis()
        .ok_or_else(|| Error::NoExactNormalization("code has no exact orthonormal basis".into()))?;
    let mut states = basis.to_vec();
    if basis.len() >= 2 {
        let h = CycScalar::sqrt_rational(&Rational::new(1, 2))?;
        states.push(basis[0].iter().zip(&basis[1]).map(|(a, b)| &(a + b) * &h).collect());
    }
    Ok(states)
}

/// `⋃ g_i K` over the frame's coset representatives, each member checked
/// by simulating recovery on every test state.
pub fn correctable_set(ns: &NormalSubgroup, frame: &SyndromeFrame) -> Result<CorrectableSet> {
    let ambient = ns.ambient();
    let a = ambient.abstract_group();
    let mut elements: Vec<usize> = frame
        .coset_reps
        .iter()
        .flat_map(|&g| frame.kernel.iter().map(move |&k| a.mul(g, k)))
        .collect();
    elements.sort_unstable();
    elements.dedup();
    let states = test_states(&frame.code)?;
    let mut simulations = 0;
    for &e in &elements {
        let m = ambient.element(e);
        for psi in &states {
            let branches = recover(frame, &m.mul_vec(psi)?)?;
            if branches.is_empty() || branches.iter().any(|b| phase_between(&b.state, psi).is_none()) {
                return Err(Error::Inconsistent(format!("element {e} is not corrected by the frame")));
            }
            simulations += 1;
        }
    }
    Ok(CorrectableSet { elements, simulations })
}
