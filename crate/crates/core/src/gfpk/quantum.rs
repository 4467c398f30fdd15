//! Quantum codes from a pair `𝓒_0 ⊂ 𝓒` of additive codes over `GF(p^k)`,
//! acting on `n` copies of `C^{p^k}`.

use std::sync::Arc;

use serde_json::{json, Value};

use super::code::AdditiveCode;
use super::field::{Elem, Field, LinearForm};
use crate::codes::{is_correctable_set, is_detectable, CodeKind, CodeSpace};
use crate::cyclo::{CycMatrix, CycScalar, Rational};
use crate::error::{Error, Result};
use crate::groups::FiniteMatrixGroup;

/// Largest ambient dimension `p^{kn}` for which code spaces are built.
pub const AMBIENT_CAP: usize = 256;

/// Largest number of `(u, v)` pairs scanned by the brute-force invariance
/// check.
pub const SCAN_CAP: usize = 1 << 16;

/// The symbols of `index` in `GF(q)^n`, most significant first, matching
/// Kronecker order.
fn word_of(mut index: usize, q: usize, n: usize) -> Vec<Elem> {
    let mut w = vec![0; n];
    for s in (0..n).rev() {
        w[s] = (index % q) as Elem;
        index /= q;
    }
    w
}

fn index_of(word: &[Elem], q: usize) -> usize {
    word.iter().fold(0, |acc, &x| acc * q + x as usize)
}

fn ambient(field: &Field, n: usize) -> Result<usize> {
    field
        .size()
        .checked_pow(n as u32)
        .filter(|&d| d <= AMBIENT_CAP)
        .ok_or_else(|| Error::CodeTooLarge(format!("GF({})^{n} exceeds {AMBIENT_CAP} basis states", field.size())))
}

/// `Σ_s b(v_s·z_s)` mod p.
fn pairing(field: &Field, b: &LinearForm, v: &[Elem], z: &[Elem]) -> u64 {
    v.iter().zip(z).fold(0, |acc, (&x, &y)| (acc + b.pair(field, x, y)) % field.p())
}

/// `C_u D_v` on `n` subsystems: `|z⟩ ↦ ω^{b(v·z)} |z + u⟩`.
pub fn shift_clock(field: &Field, b: &LinearForm, u: &[Elem], v: &[Elem]) -> Result<CycMatrix> {
    let n = u.len();
    let dim = ambient(field, n)?;
    let q = field.size();
    let p = field.p();
    let mut m = CycMatrix::zeros(dim, dim);
    let mut entries = m.entries().to_vec();
    for col in 0..dim {
        let z = word_of(col, q, n);
        let row = index_of(&z.iter().zip(u).map(|(&a, &c)| field.add(a, c)).collect::<Vec<_>>(), q);
        entries[row * dim + col] = CycScalar::root_of_unity(p, pairing(field, b, v, &z) as i64);
    }
    m = CycMatrix::new(dim, dim, entries)?;
    Ok(m)
}

fn apply(field: &Field, b: &LinearForm, u: &[Elem], v: &[Elem], j: u64, psi: &[CycScalar]) -> Vec<CycScalar> {
    let q = field.size();
    let n = u.len();
    let p = field.p();
    let mut out = vec![CycScalar::zero(); psi.len()];
    for (col, amp) in psi.iter().enumerate() {
        if amp.is_zero() {
            continue;
        }
        let z = word_of(col, q, n);
        let row = index_of(&z.iter().zip(u).map(|(&a, &c)| field.add(a, c)).collect::<Vec<_>>(), q);
        let phase = CycScalar::root_of_unity(p, (pairing(field, b, v, &z) + j) as i64);
        out[row] = &phase * amp;
    }
    out
}

/// The code spanned by `|i_L⟩ ∝ Σ_{x ∈ 𝓒_0} |x + Σ_t i_t c_t⟩`, one vector
/// per coset of `𝓒_0` in `𝓒`.
#[derive(Clone, Debug)]
pub struct PairCode {
    pub field: Arc<Field>,
    pub b: LinearForm,
    pub outer: AdditiveCode,
    pub inner: AdditiveCode,
    /// Coset leaders `c_1, …, c_d` completing `𝓒_0` to `𝓒`.
    pub leaders: Vec<Vec<Elem>>,
    pub code: CodeSpace,
}

/// Builds the pair code. `leader`, when given, must lie in `𝓒 ∖ 𝓒_0` and
/// becomes the first coset leader; the rest are the lowest words (in
/// lexicographic symbol order) extending the span.
pub fn quantum_code_from_pair(
    outer: &AdditiveCode,
    inner: &AdditiveCode,
    b: &LinearForm,
    leader: Option<Vec<Elem>>,
) -> Result<PairCode> {
    let field = outer.field().clone();
    if *inner.field() != field || inner.len() != outer.len() {
        return Err(Error::InvalidArgument("codes over different spaces".into()));
    }
    if !inner.is_subcode_of(outer) {
        return Err(Error::InvalidArgument("inner code is not contained in the outer code".into()));
    }
    let codim = outer.zp_dim() - inner.zp_dim();
    if codim == 0 {
        return Err(Error::InvalidArgument("inner code has index 1 in the outer code".into()));
    }
    let n = outer.len();
    let dim = ambient(&field, n)?;
    let q = field.size();
    let mut leaders: Vec<Vec<Elem>> = Vec::new();
    let mut span = inner.basis();
    if let Some(c) = leader {
        if !outer.contains(&c) || inner.contains(&c) {
            return Err(Error::InvalidArgument("coset leader must lie in the outer code but not the inner one".into()));
        }
        span.push(c.clone());
        leaders.push(c);
    }
    let mut candidate = 0;
    while leaders.len() < codim {
        let w = word_of(candidate, q, n);
        candidate += 1;
        let current = AdditiveCode::new(field.clone(), n, span.clone())?;
        if outer.contains(&w) && !current.contains(&w) {
            span.push(w.clone());
            leaders.push(w);
        }
    }
    let words = inner.codewords()?;
    let p = field.p();
    let amp = CycScalar::sqrt_rational(&Rational::new(1, words.len() as i64))?;
    let logical: Vec<Vec<CycScalar>> = (0..p.pow(codim as u32))
        .map(|mut i| {
            let mut shift = vec![0; n];
            for c in &leaders {
                let coef = field.scalar(i % p);
                i /= p;
                for (s, &x) in shift.iter_mut().zip(c) {
                    *s = field.add(*s, field.mul(coef, x));
                }
            }
            let mut v = vec![CycScalar::zero(); dim];
            for x in &words {
                let y: Vec<Elem> = x.iter().zip(&shift).map(|(&a, &c)| field.add(a, c)).collect();
                v[index_of(&y, q)] = amp.clone();
            }
            v
        })
        .collect();
    let code = CodeSpace::from_orthonormal(
        logical,
        CodeKind::Explicit,
        json!({ "outer": outer.to_json(), "inner": inner.to_json(), "b": b.to_json() }),
    )?;
    Ok(PairCode {
        field,
        b: b.clone(),
        outer: outer.clone(),
        inner: inner.clone(),
        leaders,
        code,
    })
}

impl PairCode {
    pub fn len(&self) -> usize {
        self.outer.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outer.is_empty()
    }

    pub fn logical(&self) -> &[Vec<CycScalar>] {
        self.code.logical_basis().expect("built from vectors")
    }

    /// `𝓒^{⊥b}`.
    pub fn outer_dual(&self) -> AdditiveCode {
        self.outer.dual_b(&self.b)
    }

    /// The group generated by `C_u`, `u` over a basis of `𝓒_0`, and `D_v`,
    /// `v` over a basis of `𝓒^{⊥b}`.
    pub fn stabilizer(&self, cap: usize) -> Result<FiniteMatrixGroup> {
        let zero = vec![0; self.len()];
        let mut gens = Vec::new();
        for u in self.inner.basis() {
            gens.push(shift_clock(&self.field, &self.b, &u, &zero)?);
        }
        for v in self.outer_dual().basis() {
            gens.push(shift_clock(&self.field, &self.b, &zero, &v)?);
        }
        if gens.is_empty() {
            gens.push(CycMatrix::identity(self.code.ambient_dim()));
        }
        FiniteMatrixGroup::close(&gens, cap)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "field": self.field.to_json(),
            "b": self.b.to_json(),
            "outer": self.outer.to_json(),
            "inner": self.inner.to_json(),
            "leaders": self.leaders.iter().map(|w| w.iter().map(|&x| self.field.coords(x)).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "code": self.code.to_json(),
        })
    }
}

/// Outcome of scanning every `ω^j C_u D_v` for those fixing all logical
/// vectors.
#[derive(Clone, Debug)]
pub struct InvarianceReport {
    /// `(u, v, j)` fixing every `|i_L⟩`.
    pub fixing: Vec<(Vec<Elem>, Vec<Elem>, u64)>,
    /// `|𝓒_0| · |𝓒^{⊥b}|`.
    pub predicted: usize,
    /// Pairs on which the scan and `u ∈ 𝓒_0, v ∈ 𝓒^{⊥b}` disagree.
    pub mismatches: Vec<(Vec<Elem>, Vec<Elem>)>,
    pub scanned: usize,
}

impl InvarianceReport {
    pub fn matches(&self) -> bool {
        self.mismatches.is_empty() && self.fixing.len() == self.predicted
    }

    pub fn to_json(&self, field: &Field) -> Value {
        let w = |x: &[Elem]| x.iter().map(|&e| field.coords(e)).collect::<Vec<_>>();
        json!({
            "fixing": self.fixing.iter().map(|(u, v, j)| json!({"u": w(u), "v": w(v), "j": j})).collect::<Vec<_>>(),
            "predicted": self.predicted,
            "scanned": self.scanned,
            "mismatches": self.mismatches.len(),
            "matches": self.matches(),
        })
    }
}

/// Brute force over all `p · q^{2n}` phased operators.
pub fn invariance_scan(pc: &PairCode) -> Result<InvarianceReport> {
    let field = &pc.field;
    let q = field.size();
    let n = pc.len();
    let words = q.checked_pow(n as u32).unwrap_or(usize::MAX);
    if words.saturating_mul(words) > SCAN_CAP {
        return Err(Error::CodeTooLarge(format!("{} operator pairs exceed the scan cap {SCAN_CAP}", words * words)));
    }
    let dual = pc.outer_dual();
    let logical = pc.logical();
    let p = field.p();
    let mut fixing = Vec::new();
    let mut mismatches = Vec::new();
    let mut predicted = 0;
    for ui in 0..words {
        let u = word_of(ui, q, n);
        for vi in 0..words {
            let v = word_of(vi, q, n);
            let j = (0..p).find(|&j| logical.iter().all(|psi| apply(field, &pc.b, &u, &v, j, psi) == *psi));
            let expected = pc.inner.contains(&u) && dual.contains(&v);
            predicted += expected as usize;
            if expected != j.is_some() {
                mismatches.push((u.clone(), v.clone()));
            }
            if let Some(j) = j {
                fixing.push((u.clone(), v, j));
            }
        }
    }
    Ok(InvarianceReport {
        fixing,
        predicted,
        mismatches,
        scanned: words * words * p as usize,
    })
}

/// Every `C_u D_v` acting on at most `w` subsystems, lowest support first.
pub fn low_weight_operators(field: &Field, n: usize, w: usize) -> Vec<(Vec<Elem>, Vec<Elem>)> {
    let q = field.size();
    let mut out = vec![(vec![0; n], vec![0; n])];
    fn supports(n: usize, w: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == w {
            out.push(cur.clone());
            return;
        }
        for s in start..n {
            cur.push(s);
            supports(n, w, s + 1, cur, out);
            cur.pop();
        }
    }
    for weight in 1..=w.min(n) {
        let mut sets = Vec::new();
        supports(n, weight, 0, &mut Vec::new(), &mut sets);
        let local = q * q - 1;
        for set in sets {
            for mut combo in 0..local.pow(weight as u32) {
                let (mut u, mut v) = (vec![0; n], vec![0; n]);
                for &s in &set {
                    let pair = combo % local + 1;
                    combo /= local;
                    u[s] = (pair / q) as Elem;
                    v[s] = (pair % q) as Elem;
                }
                out.push((u, v));
            }
        }
    }
    out
}

/// Minimum distances of the pair and, for small ambient spaces, a direct
/// check of the error guarantees they imply.
#[derive(Clone, Debug)]
pub struct PairReport {
    pub outer_min_weight: Option<usize>,
    pub inner_dual_min_weight: Option<usize>,
    /// Guaranteed correctable weight `e`.
    pub e: usize,
    /// Operators of weight ≤ e checked as a correctable set.
    pub correct_checked: Option<usize>,
    pub correct_ok: Option<bool>,
    /// Operators of weight ≤ 2e checked for detection.
    pub detect_checked: Option<usize>,
    pub detect_ok: Option<bool>,
    /// A weight-one operator the code does not detect, if any.
    pub weight_one_undetected: Option<(Vec<Elem>, Vec<Elem>)>,
}

impl PairReport {
    pub fn to_json(&self, field: &Field) -> Value {
        let w = |x: &[Elem]| x.iter().map(|&e| field.coords(e)).collect::<Vec<_>>();
        json!({
            "outer_min_weight": self.outer_min_weight,
            "inner_dual_min_weight": self.inner_dual_min_weight,
            "e": self.e,
            "correct_checked": self.correct_checked,
            "correct_ok": self.correct_ok,
            "detect_checked": self.detect_checked,
            "detect_ok": self.detect_ok,
            "weight_one_undetected": self.weight_one_undetected.as_ref().map(|(u, v)| json!({"u": w(u), "v": w(v)})),
        })
    }
}

pub fn gfpk_code_report(pc: &PairCode) -> Result<PairReport> {
    let outer_min_weight = pc.outer.min_weight()?;
    let inner_dual_min_weight = pc.inner.dual_b(&pc.b).min_weight()?;
    let d = match (outer_min_weight, inner_dual_min_weight) {
        (Some(a), Some(b)) => a.min(b),
        (Some(a), None) | (None, Some(a)) => a,
        (None, None) => pc.len() + 1,
    };
    let e = (d.saturating_sub(1)) / 2;
    let mut report = PairReport {
        outer_min_weight,
        inner_dual_min_weight,
        e,
        correct_checked: None,
        correct_ok: None,
        detect_checked: None,
        detect_ok: None,
        weight_one_undetected: None,
    };
    let field = &pc.field;
    let n = pc.len();
    let ops = |w| -> Result<Vec<CycMatrix>> {
        low_weight_operators(field, n, w)
            .iter()
            .map(|(u, v)| shift_clock(field, &pc.b, u, v))
            .collect()
    };
    let correctable = ops(e)?;
    report.correct_checked = Some(correctable.len());
    report.correct_ok = Some(is_correctable_set(&pc.code, &correctable)?.passed());
    let detect = ops(2 * e)?;
    report.detect_checked = Some(detect.len());
    let mut all = true;
    for m in &detect {
        all &= is_detectable(&pc.code, m)?.is_some();
    }
    report.detect_ok = Some(all);
    for (u, v) in low_weight_operators(field, n, 1).into_iter().skip(1) {
        if is_detectable(&pc.code, &shift_clock(field, &pc.b, &u, &v)?)?.is_none() {
            report.weight_one_undetected = Some((u, v));
            break;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{char_projection, CodeKind};
    use crate::error_basis::gfpk_basis;
    use crate::groups::DEFAULT_CAP;

    fn gf(p: u64, k: usize) -> Arc<Field> {
        Arc::new(Field::new(p, k, None).unwrap())
    }

    #[test]
    fn gf4_single_symbol() {
        let f = gf(2, 2);
        let b = LinearForm::constant_term(&f);
        let outer = AdditiveCode::new(f.clone(), 1, vec![vec![1], vec![f.theta()]]).unwrap();
        let inner = AdditiveCode::new(f.clone(), 1, vec![vec![1]]).unwrap();
        let pc = quantum_code_from_pair(&outer, &inner, &b, Some(vec![f.theta()])).unwrap();
        let l = pc.logical();
        let t = f.theta() as usize;
        assert!(!l[0][0].is_zero() && !l[0][1].is_zero());
        assert!(!l[1][t].is_zero() && !l[1][f.add(f.theta(), 1) as usize].is_zero());
        let scan = invariance_scan(&pc).unwrap();
        assert_eq!(scan.scanned, 32);
        assert!(scan.matches());
    }

    #[test]
    fn shift_clock_matches_basis() {
        let f = gf(2, 2);
        let b = LinearForm::constant_term(&f);
        let basis = gfpk_basis(&f, &b).unwrap();
        for x in f.elements() {
            for y in f.elements() {
                let m = shift_clock(&f, &b, &[x], &[y]).unwrap();
                assert_eq!(&m, basis.op(x as usize * 4 + y as usize));
            }
        }
    }

    #[test]
    fn repetition_pair_matches_stabilizer_code() {
        let f = gf(2, 1);
        let b = LinearForm::constant_term(&f);
        let outer = AdditiveCode::new(f.clone(), 3, vec![vec![1, 1, 1], vec![1, 0, 0]]).unwrap();
        let inner = AdditiveCode::new(f.clone(), 3, vec![vec![1, 1, 1]]).unwrap();
        let pc = quantum_code_from_pair(&outer, &inner, &b, None).unwrap();
        assert_eq!(pc.code.dim(), 2);
        let stab = pc.stabilizer(DEFAULT_CAP).unwrap();
        assert_eq!(stab.order(), 4);
        let trivial = vec![CycScalar::one(); stab.order()];
        let proj = char_projection(&stab, &trivial).unwrap();
        assert_eq!(&proj, pc.code.projector());
        assert_eq!(pc.code.kind(), CodeKind::Explicit);
    }

    #[test]
    fn steane_corrects_single_errors() {
        let f = gf(2, 1);
        let b = LinearForm::constant_term(&f);
        let hamming = vec![
            vec![1, 0, 0, 0, 1, 1, 0],
            vec![0, 1, 0, 0, 1, 0, 1],
            vec![0, 0, 1, 0, 0, 1, 1],
            vec![0, 0, 0, 1, 1, 1, 1],
        ];
        let outer = AdditiveCode::new(f.clone(), 7, hamming).unwrap();
        let inner = outer.dual_b(&b);
        assert!(inner.is_subcode_of(&outer));
        let pc = quantum_code_from_pair(&outer, &inner, &b, None).unwrap();
        let r = gfpk_code_report(&pc).unwrap();
        assert_eq!((r.outer_min_weight, r.inner_dual_min_weight, r.e), (Some(3), Some(3), 1));
        assert_eq!(r.correct_checked, Some(22));
        assert_eq!(r.correct_ok, Some(true));
        assert_eq!(r.detect_ok, Some(true));
        assert!(r.weight_one_undetected.is_none());
    }

    #[test]
    fn weight_one_dual_word_is_undetected() {
        let f = gf(2, 2);
        let b = LinearForm::constant_term(&f);
        let outer = AdditiveCode::new(f.clone(), 1, vec![vec![1], vec![f.theta()]]).unwrap();
        let inner = AdditiveCode::new(f.clone(), 1, vec![vec![1]]).unwrap();
        let pc = quantum_code_from_pair(&outer, &inner, &b, None).unwrap();
        let r = gfpk_code_report(&pc).unwrap();
        assert_eq!(r.inner_dual_min_weight, Some(1));
        assert_eq!(r.e, 0);
        assert_eq!(r.correct_ok, Some(true));
        assert!(r.weight_one_undetected.is_some());
    }

    #[test]
    fn rejects_bad_pairs() {
        let f = gf(2, 1);
        let b = LinearForm::constant_term(&f);
        let c = AdditiveCode::new(f.clone(), 2, vec![vec![1, 1]]).unwrap();
        assert!(quantum_code_from_pair(&c, &c, &b, None).is_err());
        let z = AdditiveCode::zero(f.clone(), 2);
        assert!(quantum_code_from_pair(&c, &z, &b, Some(vec![0, 0])).is_err());
    }
}
