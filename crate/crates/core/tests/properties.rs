use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;
use serde_json::{json, Value};

use errgroup::cyclo::{CycMatrix, CycScalar};
use errgroup::error_basis::{pauli_basis, tensor_basis, verify_nice};
use errgroup::gfpk::{Elem, Field, LinearCode, LinearForm};
use errgroup::groups::named;
use errgroup::workspace::{canonical, Workspace};

fn small_field() -> impl Strategy<Value = Arc<Field>> {
    prop_oneof![Just((2u64, 1usize)), Just((2, 2)), Just((3, 1)), Just((3, 2)), Just((5, 1)), Just((2, 3))]
        .prop_map(|(p, k)| Arc::new(Field::new(p, k, None).unwrap()))
}

/// Entries drawn from {0, ±1, ±i, ±ω₃}.
fn cyc_matrix(n: usize) -> impl Strategy<Value = CycMatrix> {
    proptest::collection::vec(0..7u8, n * n).prop_map(move |v| {
        CycMatrix::from_fn(n, n, |i, j| match v[i * n + j] {
            0 => CycScalar::zero(),
            1 => CycScalar::one(),
            2 => CycScalar::from_int(-1),
            3 => CycScalar::i(),
            4 => -CycScalar::i(),
            5 => CycScalar::root_of_unity(3, 1),
            _ => CycScalar::root_of_unity(3, 2),
        })
    })
}

fn words(f: &Field, n: usize) -> Vec<Vec<Elem>> {
    let q = f.size();
    (0..q.pow(n as u32))
        .map(|mut i| {
            (0..n)
                .map(|_| {
                    let x = (i % q) as Elem;
                    i /= q;
                    x
                })
                .collect()
        })
        .collect()
}

fn set(c: &LinearCode) -> BTreeSet<Vec<Elem>> {
    c.codewords().unwrap().into_iter().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn field_axioms(f in small_field(), a in 0u32..27, b in 0u32..27, c in 0u32..27) {
        let q = f.size() as u32;
        let (a, b, c) = (a % q, b % q, c % q);
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        // Frobenius is additive
        let p = f.p();
        prop_assert_eq!(f.pow(f.add(a, b), p), f.add(f.pow(a, p), f.pow(b, p)));
    }

    #[test]
    fn duals_agree_with_brute_force(
        f in small_field(),
        seed in proptest::collection::vec(0u32..27, 0..6),
        bsel in 0usize..3,
    ) {
        let n = 2;
        let q = f.size() as u32;
        let rows: Vec<Vec<Elem>> = seed.chunks(n).filter(|c| c.len() == n).map(|c| c.iter().map(|x| x % q).collect()).collect();
        let code = LinearCode::new(f.clone(), n, rows).unwrap();
        let mut coeffs = vec![0u64; f.k()];
        coeffs[bsel % f.k()] = 1;
        let b = LinearForm::new(&f, coeffs).unwrap();
        let cw = set(&code);
        let dot = |x: &[Elem], y: &[Elem]| x.iter().zip(y).fold(0, |s, (&u, &v)| f.add(s, f.mul(u, v)));
        let brute: BTreeSet<Vec<Elem>> = words(&f, n).into_iter().filter(|y| cw.iter().all(|x| dot(x, y) == 0)).collect();
        prop_assert_eq!(&set(&code.dual()), &brute);
        prop_assert_eq!(&set(&code.dual_b(&b).unwrap()), &brute);
        prop_assert_eq!(set(&code.dual().dual()), cw.clone());
        prop_assert_eq!(cw.len() * brute.len(), f.size().pow(n as u32));
    }

    #[test]
    fn matrix_identities(a in cyc_matrix(2), b in cyc_matrix(2), c in cyc_matrix(2), d in cyc_matrix(2)) {
        prop_assert_eq!((&a * &b).dagger(), &b.dagger() * &a.dagger());
        prop_assert_eq!(&a.kron(&b) * &c.kron(&d), (&a * &c).kron(&(&b * &d)));
        prop_assert_eq!((&a * &b).trace().unwrap(), (&b * &a).trace().unwrap());
        prop_assert_eq!(a.dagger().dagger(), a.clone());
        let det = &a.det().unwrap() * &b.det().unwrap();
        prop_assert_eq!((&a * &b).det().unwrap(), det);
    }

    #[test]
    fn generated_subgroups_obey_lagrange(gens in proptest::collection::vec(0usize..16, 1..3)) {
        let g = named::by_name("z2xd8").unwrap();
        let h = g.generated(&gens);
        prop_assert!(g.is_subgroup(&h));
        prop_assert_eq!(g.order() % h.len(), 0);
        let n = g.normal_closure(&gens);
        prop_assert!(g.is_normal(&n).unwrap());
        prop_assert!(h.iter().all(|x| n.contains(x)));
        let q = g.quotient(&n).unwrap();
        prop_assert_eq!(q.group.order() * n.len(), g.order());
    }

    #[test]
    fn canonical_json_round_trips(keys in proptest::collection::vec("[a-z]{1,6}", 0..6), nums in proptest::collection::vec(-1000i64..1000, 0..6)) {
        let mut v = json!({});
        for (k, x) in keys.iter().zip(&nums) {
            v[k] = json!([x, {"s": k}]);
        }
        let text = canonical(&v);
        let back: Value = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &v);
        prop_assert_eq!(canonical(&back), text.clone());
        let tmp = tempfile::tempdir().unwrap();
        let mut ws = Workspace::open(tmp.path()).unwrap();
        ws.save("obj", "test", &v).unwrap();
        prop_assert_eq!(Workspace::open(tmp.path()).unwrap().load("obj").unwrap().1, v);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn tensor_products_stay_nice(p in prop_oneof![Just(2u64), Just(3)], q in prop_oneof![Just(2u64), Just(3)]) {
        let b = tensor_basis(&pauli_basis(p).unwrap(), &pauli_basis(q).unwrap()).unwrap();
        prop_assert_eq!(b.len(), (p * q * p * q) as usize);
        prop_assert!(verify_nice(&b).passed());
    }
}
