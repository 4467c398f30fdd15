use serde_json::{json, Value};

use super::characters::{Inertia, InducedCharacter, NormalSubgroup};
use super::space::{is_detectable, CodeSpace};
use crate::cyclo::{linalg, CycMatrix, CycScalar, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ErrorClass {
    /// Outside the inertia subgroup: detected by both code kinds.
    OutsideInertia,
    /// In the subgroup of `N` acting as scalars on the isotypic component:
    /// detected by the character code.
    CharacterCenter,
    /// In `N` but not scalar there: detected by the idempotent codes.
    Normal,
    /// In the inertia subgroup, outside `N`: no guarantee.
    Uncovered,
}

impl ErrorClass {
    pub fn label(&self) -> &'static str {
        match self {
            ErrorClass::OutsideInertia => "outside_inertia",
            ErrorClass::CharacterCenter => "character_center",
            ErrorClass::Normal => "normal",
            ErrorClass::Uncovered => "uncovered",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub classes: Vec<ErrorClass>,
    /// Direct detectability by the character code, per ambient element.
    pub detectable: Vec<bool>,
    /// Direct detectability by the first idempotent code, when given.
    pub idempotent_detectable: Option<Vec<bool>>,
    /// Elements that anti-commute up to a phase with some `a ∈ N`,
    /// `χ(a) ≠ 0`, all of which were confirmed outside the inertia subgroup.
    pub shortcut_hits: usize,
}

impl Classification {
    pub fn count(&self, class: ErrorClass) -> usize {
        self.classes.iter().filter(|&&c| c == class).count()
    }

    /// Detectable elements the classification makes no claim about.
    pub fn detectable_uncovered(&self) -> usize {
        self.classes
            .iter()
            .zip(&self.detectable)
            .filter(|&(&c, &d)| c == ErrorClass::Uncovered && d)
            .count()
    }

    pub fn to_json(&self) -> Value {
        let classes = [
            ErrorClass::OutsideInertia,
            ErrorClass::CharacterCenter,
            ErrorClass::Normal,
            ErrorClass::Uncovered,
        ];
        let mut counts = serde_json::Map::new();
        for c in classes {
            counts.insert(c.label().into(), json!(self.count(c)));
        }
        json!({
            "elements": self.classes.len(),
            "counts": counts,
            "classes": self.classes.iter().map(ErrorClass::label).collect::<Vec<_>>(),
            "detectable": self.detectable.iter().filter(|&&d| d).count(),
            "detectable_uncovered": self.detectable_uncovered(),
            "disagreements": 0,
            "shortcut_hits": self.shortcut_hits,
        })
    }
}

/// Sorts every element of the ambient group by which clause of the
/// detection theorem covers it, and checks each claim against `Π E Π ∝ Π`.
/// Any claim that fails the direct check is returned as an error.
pub fn classify_errors(
    ns: &NormalSubgroup,
    inertia: &Inertia,
    code: &CodeSpace,
    idempotent_code: Option<&CodeSpace>,
) -> Result<Classification> {
    let ambient = ns.ambient();
    let chi = inertia.character;
    let center = ns.character_center(chi);
    let g_abs = ambient.abstract_group();
    let scalars = ambient.scalar_elements();
    let mut classes = Vec::with_capacity(ambient.order());
    let mut detectable = Vec::with_capacity(ambient.order());
    let mut idem = idempotent_code.map(|_| Vec::with_capacity(ambient.order()));
    let mut disagreements = Vec::new();
    let mut shortcut_hits = 0;
    for g in 0..ambient.order() {
        let class = if !inertia.contains(g) {
            ErrorClass::OutsideInertia
        } else if center.binary_search(&g).is_ok() {
            ErrorClass::CharacterCenter
        } else if ns.contains(g) {
            ErrorClass::Normal
        } else {
            ErrorClass::Uncovered
        };
        let m = ambient.element(g);
        let d = is_detectable(code, m)?.is_some();
        if matches!(class, ErrorClass::OutsideInertia | ErrorClass::CharacterCenter) && !d {
            disagreements.push(format!("element {g} ({}) is not detected by the character code", class.label()));
        }
        if let (Some(icode), Some(v)) = (idempotent_code, idem.as_mut()) {
            let di = is_detectable(icode, m)?.is_some();
            if class != ErrorClass::Uncovered && !di {
                disagreements.push(format!("element {g} ({}) is not detected by the idempotent code", class.label()));
            }
            v.push(di);
        }
        // a g = ω g a with ω ≠ 1 and χ(a) ≠ 0 forces g outside T(χ)
        let shifted = ns.members().iter().any(|&a| {
            let ag = g_abs.mul(a, g);
            let ga = g_abs.mul(g, a);
            ag != ga
                && scalars.contains(&g_abs.mul(ag, g_abs.inv(ga)))
                && !ns.value(chi, a).expect("member").is_zero()
        });
        if shifted {
            shortcut_hits += 1;
            if class != ErrorClass::OutsideInertia {
                disagreements.push(format!("element {g} rescales a member of N yet lies in the inertia subgroup"));
            }
        }
        classes.push(class);
        detectable.push(d);
    }
    if !disagreements.is_empty() {
        return Err(Error::Inconsistent(format!(
            "{} classification disagreements, first: {}",
            disagreements.len(),
            disagreements[0]
        )));
    }
    Ok(Classification {
        classes,
        detectable,
        idempotent_detectable: idem,
        shortcut_hits,
    })
}

#[derive(Clone, Debug)]
pub struct SpanReport {
    /// Dimension of `{E : Π E Π ∝ Π}`, computed directly.
    pub rank: usize,
    /// `n² − (n²/r² − 1)`, when `r²` divides `n²`.
    pub formula: Option<usize>,
    /// Dimension of the block-scalar family, computed directly.
    pub d_dim: usize,
    /// `n²/r − n²/r² + 1`, when integral.
    pub d_formula: Option<usize>,
    pub r: usize,
    /// The block-scalar family together with the ambient elements outside
    /// the inertia subgroup spans the detectable operators.
    pub span_verified: bool,
    pub abelian: bool,
}

impl SpanReport {
    pub fn matches(&self) -> bool {
        self.formula == Some(self.rank) && self.d_formula == Some(self.d_dim) && self.span_verified
    }

    pub fn to_json(&self) -> Value {
        json!({
            "rank": self.rank,
            "formula": self.formula,
            "d_dim": self.d_dim,
            "d_formula": self.d_formula,
            "r": self.r,
            "span_verified": self.span_verified,
            "matches": self.matches(),
        })
    }
}

fn flatten(m: &CycMatrix) -> Vec<CycScalar> {
    m.entries().to_vec()
}

/// `vec(u v†)` for columns `u`, `v`.
fn outer(u: &[CycScalar], v: &[CycScalar]) -> Vec<CycScalar> {
    u.iter()
        .flat_map(|a| v.iter().map(move |b| a * &b.conj()))
        .collect()
}

/// Indices of a maximal independent set of columns.
fn pivot_columns(p: &CycMatrix) -> Vec<usize> {
    let mut span = linalg::SpanBasis::new();
    (0..p.cols()).filter(|&j| span.insert(&p.column(j))).collect()
}

/// Compares the dimension of the detectable operator space of a character
/// code with the counting formula, and rebuilds that space from the
/// block-scalar operators plus the group elements outside `T(χ)`. On an
/// abelian `N` a mismatch is an error; otherwise it is reported.
pub fn detectable_span_dimension(
    ns: &NormalSubgroup,
    inertia: &Inertia,
    code: &CodeSpace,
    induced: &[InducedCharacter],
) -> Result<SpanReport> {
    let n = code.ambient_dim();
    let p = code.projector();
    let k = Rational::from_int(code.dim() as i64);
    // E ↦ ΠEΠ − (tr(ΠE)/k)Π on matrix units E_ab; its kernel is the space
    let mut images = Vec::with_capacity(n * n);
    for a in 0..n {
        let col = p.column(a);
        for b in 0..n {
            let row = p.row(b);
            let t = p.get(b, a).scale(&k.recip().expect("nonzero code"));
            let img: Vec<CycScalar> = (0..n * n)
                .map(|ij| {
                    let (i, j) = (ij / n, ij % n);
                    &(&col[i] * &row[j]) - &(&t * p.get(i, j))
                })
                .collect();
            images.push(img);
        }
    }
    let rank = n * n - linalg::rank(images);

    let r = inertia.num_cosets();
    let n2 = (n * n) as u64;
    let r_u = r as u64;
    let formula = (n2 % (r_u * r_u) == 0).then(|| (n2 - (n2 / (r_u * r_u) - 1)) as usize);
    let d_formula = (n2 % (r_u * r_u) == 0).then(|| (n2 / r_u - n2 / (r_u * r_u) + 1) as usize);

    let mut family = vec![flatten(p)];
    for c in induced.iter().filter(|c| c.character != inertia.character) {
        let cols = pivot_columns(&c.projector);
        for &a in &cols {
            let u = c.projector.column(a);
            for &b in &cols {
                family.push(outer(&u, &c.projector.column(b)));
            }
        }
    }
    let d_dim = linalg::rank(family.clone());

    let ambient = ns.ambient();
    for g in (0..ambient.order()).filter(|&g| !inertia.contains(g)) {
        if is_detectable(code, ambient.element(g))?.is_none() {
            return Err(Error::Inconsistent(format!("element {g} outside the inertia subgroup is not detected")));
        }
        family.push(flatten(ambient.element(g)));
    }
    let span_verified = linalg::rank(family) == rank;
    let abelian = ns.group().abstract_group().is_abelian();
    let report = SpanReport {
        rank,
        formula,
        d_dim,
        d_formula,
        r,
        span_verified,
        abelian,
    };
    if abelian && !report.matches() {
        return Err(Error::Inconsistent(format!(
            "detectable span: rank {rank}, formula {formula:?}, block-scalar {d_dim} vs {d_formula:?}, spanned {span_verified}"
        )));
    }
    Ok(report)
}
