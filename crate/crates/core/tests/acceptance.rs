//! The ten acceptance criteria, one PASS/FAIL line each. Every derived
//! value is recomputed here from first principles and compared with the
//! library; a criterion also fails if it overruns its time budget.

use std::collections::{BTreeMap, BTreeSet};
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use errgroup::codes::{
    classify_errors, detectable_span_dimension, induced_characters, inertia_subgroup, recover, syndrome_frame,
    ErrorClass, NormalSubgroup,
};
use errgroup::cyclo::{CycMatrix, CycScalar, Rational};
use errgroup::error_basis::{
    egner_basis, egner_generators, gfpk_basis, pauli_basis, regular_representation, tensor_basis,
    verify_abstract_error_group, verify_nice, NiceErrorBasis,
};
use errgroup::gfpk::{check_dual_equality, invariance_scan, shift_clock, Elem, Field, LinearCode, LinearForm};
use errgroup::groups::{find_isomorphism, named, FiniteMatrixGroup, DEFAULT_CAP};
use errgroup::instances::{Instance, NAMES};
use errgroup::transversal::{transversal_ops, Source};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn mat(rows: &[&[i64]]) -> CycMatrix {
    CycMatrix::from_int_rows(rows)
}

fn neg(m: &CycMatrix) -> CycMatrix {
    -m
}

/// `Π E Π = λ Π` for some scalar λ, found from the first nonzero diagonal
/// entry of `Π`.
fn detects(p: &CycMatrix, m: &CycMatrix) -> bool {
    let pep = &(p * m) * p;
    let n = p.rows();
    let Some(i) = (0..n).find(|&i| !p.get(i, i).is_zero()) else {
        return pep.is_zero();
    };
    let lambda = pep.get(i, i) * &p.get(i, i).inv().unwrap();
    pep == p.scale(&lambda)
}

/// Unitarity, trace, cocycle, size and orthogonality conditions, checked
/// directly on the operator list.
fn nice_oracle(b: &NiceErrorBasis) -> Result<(), String> {
    let n = b.dim();
    let ops = b.ops();
    let id = b.index_group().identity();
    let g = b.index_group();
    ensure(ops.len() == n * n, || format!("{} operators in dimension {n}", ops.len()))?;
    let nn = CycScalar::from_int(n as i64);
    for (i, u) in ops.iter().enumerate() {
        ensure((u * &u.dagger()).is_identity(), || format!("E_{i} not unitary"))?;
        let t = e(u.trace())?;
        let want = if i == id { nn.clone() } else { CycScalar::zero() };
        ensure(t == want, || format!("tr E_{i} = {t:?}"))?;
        for (j, v) in ops.iter().enumerate() {
            let t = e((&u.dagger() * v).trace())?;
            let want = if i == j { nn.clone() } else { CycScalar::zero() };
            ensure(t == want, || format!("tr(E_{i}† E_{j}) wrong"))?;
            // E_i E_j = ω E_{ij} with ω a root of unity
            let prod = u * v;
            let k = g.mul(i, j);
            let target = &ops[k];
            let w = (0..n * n)
                .map(|x| (x / n, x % n))
                .find(|&(r, c)| !target.get(r, c).is_zero())
                .map(|(r, c)| prod.get(r, c) * &target.get(r, c).inv().unwrap())
                .unwrap();
            ensure(prod == target.scale(&w), || format!("E_{i}E_{j} not proportional to E_{k}"))?;
            ensure(w.as_root_of_unity().is_some(), || format!("ω({i},{j}) not a root of unity"))?;
        }
    }
    Ok(())
}

fn c1_nice_axioms() -> Check {
    let p2 = e(pauli_basis(2))?;
    let p3 = e(pauli_basis(3))?;
    let p2x3 = e(tensor_basis(&e(tensor_basis(&p2, &p2))?, &p2))?;
    let gf4 = Arc::new(e(Field::new(2, 2, None))?);
    let bases = [
        ("pauli(2)", p2.clone()),
        ("pauli(3)", p3),
        ("pauli(2)^3", p2x3),
        ("egner", e(egner_basis())?),
        ("gfpk(2,2)", e(gfpk_basis(&gf4, &LinearForm::constant_term(&gf4)))?),
    ];
    for (name, b) in &bases {
        let r = verify_nice(b);
        ensure(r.passed(), || format!("{name}: library report fails"))?;
        nice_oracle(b).map_err(|m| format!("{name}: {m}"))?;
    }
    Ok(format!("{} bases", bases.len()))
}

fn c2_egner_relations() -> Check {
    let [a, b, c] = egner_generators();
    let i4 = CycMatrix::identity(4);
    let a_inv = e(a.inverse())?;
    let rels = [
        ("A^4 = -I", a.pow(4) == neg(&i4)),
        ("B^2 = I", b.pow(2) == i4),
        ("C^2 = -I", c.pow(2) == neg(&i4)),
        ("AC = -CA", &a * &c == neg(&(&c * &a))),
        ("BC = CB", &b * &c == &c * &b),
        ("AB = -BA^-1", &a * &b == neg(&(&b * &a_inv))),
    ];
    for (name, ok) in rels {
        ensure(ok, || format!("{name} fails"))?;
    }
    let g = e(FiniteMatrixGroup::close(&[a, b, c], DEFAULT_CAP))?;
    let abs = g.abstract_group();
    let q = e(abs.quotient(&abs.center()))?.group;
    ensure(q.order() == 16, || format!("quotient order {}", q.order()))?;
    // element orders of Z2 × D8: one identity, eleven involutions, four of order 4
    let mut profile = BTreeMap::new();
    for x in 0..q.order() {
        *profile.entry(q.element_order(x)).or_insert(0) += 1;
    }
    ensure(profile == BTreeMap::from([(1, 1), (2, 11), (4, 4)]), || format!("order profile {profile:?}"))?;
    ensure(!q.is_abelian(), || "quotient is abelian".into())?;
    let iso = e(find_isomorphism(&q, &e(named::by_name("z2xd8"))?))?;
    ensure(iso.is_some(), || "no isomorphism to Z2 x D8".into())?;
    Ok(format!("|G| = {}, |G/Z| = 16", g.order()))
}

fn c3_abstract_round_trip() -> Check {
    let q8 = e(named::by_name("q8"))?;
    let reg = e(regular_representation(&q8))?;
    let i = CycScalar::i();
    let ix = mat(&[&[0, 1], &[1, 0]]).scale(&i);
    let iz = mat(&[&[1, 0], &[0, -1]]).scale(&i);
    let matrix_q8 = e(FiniteMatrixGroup::close(&[ix, iz], DEFAULT_CAP))?;
    ensure(matrix_q8.order() == 8, || "iX, iZ do not generate Q8".into())?;
    for (name, g) in [("regular Q8", reg), ("matrix Q8", matrix_q8)] {
        let ev = e(verify_abstract_error_group(&g))?.ok_or_else(|| format!("{name}: no character found"))?;
        ensure(ev.degree == 2, || format!("{name}: degree {}", ev.degree))?;
        let basis = ev.basis.as_ref().ok_or_else(|| format!("{name}: no basis reconstructed"))?;
        ensure(basis.len() == 4, || format!("{name}: {} operators", basis.len()))?;
        ensure(verify_nice(basis).passed(), || format!("{name}: reconstructed basis fails"))?;
        nice_oracle(basis).map_err(|m| format!("{name}: {m}"))?;
        // the character vanishes off the center: |χ(g)|² summed over Z is |G|
        let tbl = &ev.table;
        let chi = ev.character;
        for x in 0..g.order() {
            let v = tbl.value(chi, x);
            ensure(ev.center.contains(&x) || v.is_zero(), || format!("{name}: χ({x}) ≠ 0 off the center"))?;
        }
    }
    let s3 = e(regular_representation(&e(named::by_name("s3"))?))?;
    ensure(e(verify_abstract_error_group(&s3))?.is_none(), || "S3 accepted".into())?;
    Ok("Q8 → 4 operators, S3 rejected".into())
}

fn basis_state(n: usize, i: usize) -> Vec<CycScalar> {
    (0..n).map(|j| if i == j { CycScalar::one() } else { CycScalar::zero() }).collect()
}

fn outer(u: &[CycScalar], v: &[CycScalar]) -> CycMatrix {
    CycMatrix::from_fn(u.len(), v.len(), |i, j| &u[i] * &v[j].conj())
}

fn c4_bitflip() -> Check {
    let inst = e(Instance::by_name("bitflip3", DEFAULT_CAP))?;
    let code = e(inst.code())?;
    let want = &outer(&basis_state(8, 0), &basis_state(8, 0)) + &outer(&basis_state(8, 7), &basis_state(8, 7));
    ensure(*code.projector() == want, || "code is not span{|000>, |111>}".into())?;
    let inertia = e(inertia_subgroup(&inst.normal, inst.character))?;
    let induced = e(induced_characters(&inst.normal))?;
    let span = e(detectable_span_dimension(&inst.normal, &inertia, &code, &induced))?;
    ensure(span.r == 4, || format!("r = {}", span.r))?;
    // {E : ΠEΠ ∝ Π} has dimension n² − k² + 1 for a k-dimensional code
    let (n, k) = (8usize, 2usize);
    let oracle = n * n - k * k + 1;
    let formula = n * n - (n * n / (span.r * span.r) - 1);
    ensure(span.rank == oracle && oracle == 61 && formula == 61, || {
        format!("rank {} vs oracle {oracle}, formula {formula}", span.rank)
    })?;
    let cls = e(classify_errors(&inst.normal, &inertia, &code, None))?;
    let elems = inst.group.elements();
    ensure(elems.len() == 256, || format!("|Ē| = {}", elems.len()))?;
    let mut disagreements = 0;
    for (g, m) in elems.iter().enumerate() {
        let direct = detects(code.projector(), m);
        let guaranteed = matches!(cls.classes[g], ErrorClass::OutsideInertia | ErrorClass::CharacterCenter);
        if direct != cls.detectable[g] || (guaranteed && !direct) {
            disagreements += 1;
        }
    }
    ensure(disagreements == 0, || format!("{disagreements} disagreements"))?;
    Ok(format!("rank 61, r = 4, 256 elements, 0 disagreements"))
}

fn phase_equal(a: &[CycScalar], b: &[CycScalar]) -> bool {
    let Some(i) = b.iter().position(|x| !x.is_zero()) else {
        return false;
    };
    let c = &a[i] * &b[i].inv().unwrap();
    c.norm_sqr().is_one() && a.iter().zip(b).all(|(x, y)| *x == &c * y)
}

fn c5_recovery() -> Check {
    let inst = e(Instance::by_name("bitflip3", DEFAULT_CAP))?;
    let s = inst.syndrome_set.clone().ok_or("no syndrome set")?;
    let x = mat(&[&[0, 1], &[1, 0]]);
    let i2 = CycMatrix::identity(2);
    let want: Vec<CycMatrix> = vec![
        CycMatrix::identity(8),
        x.kron(&i2).kron(&i2),
        i2.kron(&x).kron(&i2),
        i2.kron(&i2).kron(&x),
    ];
    let same = s.len() == want.len() && want.iter().all(|w| s.iter().any(|&g| inst.group.element(g) == w));
    ensure(same, || "syndrome set is not {I, X1, X2, X3}".into())?;
    let mats: Vec<CycMatrix> = s.iter().map(|&g| inst.group.element(g).clone()).collect();
    let code = e(inst.code())?;
    let inertia = e(inertia_subgroup(&inst.normal, inst.character))?;
    let frame = e(syndrome_frame(&inst.normal, &inertia, &code, Some(&mats)))?;
    let reps: BTreeSet<usize> = frame.coset_reps.iter().copied().collect();
    ensure(reps == s.iter().copied().collect(), || format!("coset reps {:?} vs {s:?}", frame.coset_reps))?;
    let basis = code.logical_basis().ok_or("no logical basis")?.to_vec();
    let h = e(CycScalar::sqrt_rational(&Rational::new(1, 2)))?;
    let mut states = basis.clone();
    states.push(basis[0].iter().zip(&basis[1]).map(|(a, b)| &(a + b) * &h).collect());
    let a = inst.group.abstract_group();
    let mut errors = BTreeSet::new();
    for &g in &frame.coset_reps {
        for &c in &frame.kernel {
            errors.insert(a.mul(g, c));
        }
    }
    let mut runs = 0;
    for &g in &errors {
        let m = inst.group.element(g);
        for psi in &states {
            let branches = e(recover(&frame, &e(m.mul_vec(psi))?))?;
            ensure(!branches.is_empty(), || format!("no branch for element {g}"))?;
            for b in &branches {
                ensure(phase_equal(&b.state, psi), || format!("element {g} not corrected"))?;
            }
            runs += 1;
        }
    }
    Ok(format!("{} errors × {} states = {runs} recoveries", errors.len(), states.len()))
}

/// Field arithmetic rebuilt from the coordinate encoding and the defining
/// polynomial.
struct Oracle {
    p: u64,
    k: usize,
    modulus: Vec<u64>,
}

impl Oracle {
    fn new(f: &Field) -> Self {
        Oracle {
            p: f.p(),
            k: f.k(),
            modulus: f.modulus().to_vec(),
        }
    }

    fn digits(&self, a: Elem) -> Vec<u64> {
        let mut x = a as u64;
        (0..self.k)
            .map(|_| {
                let d = x % self.p;
                x /= self.p;
                d
            })
            .collect()
    }

    fn pack(&self, d: &[u64]) -> Elem {
        d.iter().rev().fold(0, |acc, &x| acc * self.p + x) as Elem
    }

    fn add(&self, a: Elem, b: Elem) -> Elem {
        let (x, y) = (self.digits(a), self.digits(b));
        self.pack(&x.iter().zip(&y).map(|(s, t)| (s + t) % self.p).collect::<Vec<_>>())
    }

    fn mul(&self, a: Elem, b: Elem) -> Elem {
        let (x, y, p, k) = (self.digits(a), self.digits(b), self.p, self.k);
        let mut prod = vec![0u64; 2 * k];
        for i in 0..k {
            for j in 0..k {
                prod[i + j] = (prod[i + j] + x[i] * y[j]) % p;
            }
        }
        for d in (k..2 * k).rev() {
            let c = prod[d];
            for i in 0..=k {
                prod[d - k + i] = (prod[d - k + i] + (p - c) * self.modulus[i]) % p;
            }
        }
        self.pack(&prod[..k])
    }

    fn dot(&self, u: &[Elem], v: &[Elem]) -> Elem {
        u.iter().zip(v).fold(0, |acc, (&a, &b)| self.add(acc, self.mul(a, b)))
    }

    fn form(&self, b: &[u64], z: Elem) -> u64 {
        self.digits(z).iter().zip(b).map(|(x, c)| x * c).sum::<u64>() % self.p
    }

    fn words(&self, n: usize) -> Vec<Vec<Elem>> {
        let q = self.p.pow(self.k as u32) as usize;
        (0..q.pow(n as u32))
            .map(|mut i| {
                let mut w = vec![0; n];
                for s in (0..n).rev() {
                    w[s] = (i % q) as Elem;
                    i /= q;
                }
                w
            })
            .collect()
    }

    /// `{y : b(x·y) = 0 ∀x ∈ D}` and `{y : x·y = 0 ∀x ∈ D}`.
    fn duals(&self, words: &[Vec<Elem>], n: usize, b: &[u64]) -> (BTreeSet<Vec<Elem>>, BTreeSet<Vec<Elem>>) {
        let all = self.words(n);
        let plain = all.iter().filter(|y| words.iter().all(|x| self.dot(x, y) == 0)).cloned().collect();
        let twisted = all
            .iter()
            .filter(|y| words.iter().all(|x| self.form(b, self.dot(x, y)) == 0))
            .cloned()
            .collect();
        (plain, twisted)
    }
}

fn check_dual(o: &Oracle, code: &LinearCode, b: &LinearForm) -> Result<(), String> {
    let words = e(code.codewords())?;
    let (plain, twisted) = o.duals(&words, code.len(), b.coeffs());
    ensure(plain == twisted, || "oracle duals differ".into())?;
    let lib: BTreeSet<_> = e(code.dual().codewords())?.into_iter().collect();
    let lib_b: BTreeSet<_> = e(e(code.dual_b(b))?.codewords())?.into_iter().collect();
    ensure(lib == plain && lib_b == twisted, || format!("library duals wrong for {:?}", code.generator()))?;
    ensure(e(check_dual_equality(code, b))?, || "library reports inequality".into())?;
    Ok(())
}

fn c6_dual_equality() -> Check {
    let gf4 = Arc::new(e(Field::new(2, 2, None))?);
    let o4 = Oracle::new(&gf4);
    let forms4: Vec<LinearForm> = [vec![1, 0], vec![0, 1], vec![1, 1]]
        .into_iter()
        .map(|c| e(LinearForm::new(&gf4, c)))
        .collect::<Result<_, _>>()?;
    let mut subspaces = 0;
    for n in 1..=2usize {
        // every subspace is spanned by at most n words
        let words = o4.words(n);
        let mut seen = BTreeSet::new();
        let mut gens: Vec<Vec<Vec<Elem>>> = vec![vec![]];
        gens.extend(words.iter().map(|w| vec![w.clone()]));
        if n == 2 {
            for a in &words {
                for b in &words {
                    gens.push(vec![a.clone(), b.clone()]);
                }
            }
        }
        for g in gens {
            let code = e(LinearCode::new(gf4.clone(), n, g))?;
            let key: BTreeSet<_> = e(code.codewords())?.into_iter().collect();
            if !seen.insert(key) {
                continue;
            }
            for b in &forms4 {
                check_dual(&o4, &code, b)?;
            }
        }
        // 1 + q + 1 subspaces of GF(4)^2, 2 of GF(4)^1
        let expected = if n == 1 { 2 } else { 7 };
        ensure(seen.len() == expected, || format!("{} subspaces of GF(4)^{n}", seen.len()))?;
        subspaces += seen.len();
    }
    let gf9 = Arc::new(e(Field::new(3, 2, None))?);
    let o9 = Oracle::new(&gf9);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let b9 = LinearForm::constant_term(&gf9);
    for _ in 0..20 {
        let rows = rng.gen_range(1..=2);
        let g: Vec<Vec<Elem>> = (0..rows)
            .map(|_| (0..2).map(|_| rng.gen_range(0..9) as Elem).collect())
            .collect();
        let code = e(LinearCode::new(gf9.clone(), 2, g))?;
        check_dual(&o9, &code, &b9)?;
    }
    Ok(format!("{subspaces} GF(4) subspaces, 20 random GF(9) codes"))
}

fn c7_eigenvalue_condition() -> Check {
    let inst = e(Instance::by_name("gf4-demo", DEFAULT_CAP))?;
    let pc = inst.pair.as_ref().ok_or("no code pair")?;
    let f = &pc.field;
    let o = Oracle::new(f);
    let logical = pc.code.logical_basis().ok_or("no logical basis")?;
    let outer_words = e(pc.outer.codewords())?;
    let inner_words: BTreeSet<_> = e(pc.inner.codewords())?.into_iter().collect();
    let (_, outer_dual_b) = o.duals(&outer_words, 1, pc.b.coeffs());
    let mut fixing = BTreeSet::new();
    let mut scanned = 0;
    for u in 0..4 as Elem {
        for v in 0..4 as Elem {
            let m = e(shift_clock(f, &pc.b, &[u], &[v]))?;
            for j in 0..2i64 {
                let op = m.scale(&CycScalar::root_of_unity(2, j));
                scanned += 1;
                if logical.iter().all(|psi| op.mul_vec(psi).map(|x| x == *psi).unwrap_or(false)) {
                    fixing.insert((vec![u], vec![v], j as u64));
                }
            }
        }
    }
    ensure(scanned == 32, || format!("{scanned} operators"))?;
    let fixed_pairs: BTreeSet<_> = fixing.iter().map(|(u, v, _)| (u.clone(), v.clone())).collect();
    let predicted: BTreeSet<_> = inner_words
        .iter()
        .flat_map(|u| outer_dual_b.iter().map(move |v| (u.clone(), v.clone())))
        .collect();
    ensure(fixed_pairs == predicted, || format!("fixing {fixed_pairs:?} vs predicted {predicted:?}"))?;
    let scan = e(invariance_scan(pc))?;
    let lib: BTreeSet<_> = scan.fixing.iter().cloned().collect();
    ensure(scan.matches() && lib == fixing, || "library scan differs".into())?;
    Ok(format!("{} of 32 phased operators fix the code", fixing.len()))
}

fn c8_transversal() -> Check {
    let inst = e(Instance::by_name("bitflip3", DEFAULT_CAP))?;
    let code = e(inst.code())?;
    let p = code.projector();
    let inertia = e(inertia_subgroup(&inst.normal, inst.character))?;
    for &g in &inertia.subgroup {
        let m = inst.group.element(g);
        ensure(&(m * p) * &m.dagger() == *p, || format!("element {g} moves the code"))?;
    }
    let report = e(transversal_ops(&inst.normal, inst.character, &code, inst.local_dim, &inst.candidates))?;
    let v = e(CycMatrix::from_columns(code.logical_basis().ok_or("no logical basis")?))?;
    let x = mat(&[&[0, 1], &[1, 0]]);
    let z = mat(&[&[1, 0], &[0, -1]]);
    let i2 = CycMatrix::identity(2);
    for (name, phys, want) in [("xxx", x.kron(&x).kron(&x), &x), ("zii", z.kron(&i2).kron(&i2), &z)] {
        let logical = &(&v.dagger() * &phys) * &v;
        ensure(logical == *want, || format!("{name}: V†UV is not the expected logical"))?;
        let idx = inst.candidates.iter().position(|c| c.name == name).ok_or(format!("{name} missing"))?;
        let op = report.find(&Source::Extra(idx)).ok_or(format!("{name} not accepted"))?;
        ensure(op.logical == *want, || format!("{name}: library logical differs"))?;
    }
    Ok(format!("{} inertia elements preserve the code", inertia.subgroup.len()))
}

/// Lemma checks recomputed from the character projectors.
fn lemma_oracle(ns: &NormalSubgroup) -> Result<(), String> {
    let amb = ns.ambient();
    let n_ord = ns.order() as i64;
    let mut projectors = Vec::new();
    for chi in 0..ns.table().len() {
        let d = ns.degree(chi) as i64;
        let mut acc = CycMatrix::zeros(amb.dim(), amb.dim());
        for &g in ns.members() {
            let c = ns.value(chi, g).unwrap().conj();
            acc = &acc + &amb.element(g).scale(&c);
        }
        let p = acc.scale_rational(&Rational::new(d, n_ord));
        let rank = p.rank();
        if rank > 0 {
            ensure(rank % d as usize == 0, || format!("rank {rank} not a multiple of {d}"))?;
            projectors.push((p.key(), d as usize, rank));
        }
    }
    let dims: BTreeSet<usize> = projectors.iter().map(|x| x.2).collect();
    let mults: BTreeSet<usize> = projectors.iter().map(|x| x.2 / x.1).collect();
    ensure(dims.len() == 1, || format!("dimensions {dims:?}"))?;
    ensure(mults.len() == 1, || format!("multiplicities {mults:?}"))?;
    let keys: BTreeSet<_> = projectors.iter().map(|x| x.0.clone()).collect();
    for g in amb.abstract_group().generators() {
        let m = amb.element(g);
        for chi in 0..ns.table().len() {
            let p = e(ns.projection(chi))?;
            if p.is_zero() {
                continue;
            }
            // the library projector must be one of the oracle's
            ensure(keys.contains(&p.key()), || format!("projector of character {chi} differs"))?;
            let moved = &(m * &p) * &m.dagger();
            ensure(keys.contains(&moved.key()), || format!("element {g} sends a projector outside the family"))?;
        }
    }
    Ok(())
}

fn c9_lemmas() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let mut total = 0;
    for name in NAMES {
        let inst = e(Instance::by_name(name, DEFAULT_CAP))?;
        for ns in e(inst.random_normal_subgroups(5, &mut rng))? {
            let induced = e(induced_characters(&ns))?;
            let r = errgroup::codes::check_lemmas(&ns, &induced);
            ensure(r.passed(), || format!("{name}: library lemma report fails"))?;
            lemma_oracle(&ns).map_err(|m| format!("{name}: {m}"))?;
            total += 1;
        }
    }
    ensure(total == 25, || format!("{total} subgroups"))?;
    Ok("25 normal subgroups, 0 exceptions".into())
}

fn c10_determinism() -> Check {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_errgroup"))
            .args(["check", "all", "--instance", "bitflip3", "--seed", "7"])
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    ensure(a.status.success(), || String::from_utf8_lossy(&a.stderr).into_owned())?;
    ensure(!a.stdout.is_empty() && a.stdout == b.stdout, || "outputs differ".into())?;
    Ok(format!("{} identical bytes", a.stdout.len()))
}

fn main() {
    let criteria: [(&str, u64, fn() -> Check); 10] = [
        ("nice-basis axioms", 10, c1_nice_axioms),
        ("non-abelian index group", 30, c2_egner_relations),
        ("abstract error group round trip", 5, c3_abstract_round_trip),
        ("bit-flip code", 60, c4_bitflip),
        ("syndrome recovery", 30, c5_recovery),
        ("twisted dual equality", 30, c6_dual_equality),
        ("eigenvalue condition", 5, c7_eigenvalue_condition),
        ("transversal inertia", 10, c8_transversal),
        ("lemma properties", 120, c9_lemmas),
        ("determinism", 60, c10_determinism),
    ];
    let mut failed = 0;
    for (i, (name, budget, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = f();
        let took = start.elapsed();
        let verdict = match result {
            Ok(detail) if took <= Duration::from_secs(*budget) => format!("PASS {}: {name} ({detail})", i + 1),
            Ok(detail) => format!("FAIL {}: {name} over budget {budget}s ({detail})", i + 1),
            Err(why) => format!("FAIL {}: {name}: {why}", i + 1),
        };
        if verdict.starts_with("FAIL") {
            failed += 1;
        }
        println!("{verdict} [{:.2}s]", took.as_secs_f64());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
