use std::collections::VecDeque;

use super::{ErrorGroup, NiceErrorBasis};
use crate::cyclo::{CycMatrix, CycScalar, Rational};
use crate::error::{Error, Result};
use crate::gfpk::{Field, LinearForm};
use crate::groups::{AbstractGroup, DEFAULT_CAP};
use crate::numth;

fn shift(q: usize, by: impl Fn(usize) -> usize) -> CycMatrix {
    CycMatrix::from_fn(q, q, |i, j| CycScalar::from_int((i == by(j)) as i64))
}

fn additive_group(n: usize, add: impl Fn(usize, usize) -> usize) -> AbstractGroup {
    let table = (0..n).map(|a| (0..n).map(|b| add(a, b)).collect()).collect();
    AbstractGroup::from_table(table, 0).expect("additive group table")
}

/// Shift/clock basis `E_(a,b) = C^a D^b` on `C^p`, stored at index `a·p + b`.
pub fn pauli_basis(p: u64) -> Result<NiceErrorBasis> {
    if !numth::is_prime(p) || p > 13 {
        return Err(Error::InvalidArgument(format!("{p} is not a prime ≤ 13")));
    }
    let n = p as usize;
    let c = shift(n, |j| (j + 1) % n);
    let d = CycMatrix::diag(&(0..n).map(|x| CycScalar::root_of_unity(p, x as i64)).collect::<Vec<_>>());
    let mut ops = Vec::with_capacity(n * n);
    for a in 0..n {
        let ca = c.pow(a as u64);
        for b in 0..n {
            ops.push(&ca * &d.pow(b as u64));
        }
    }
    let group = additive_group(n * n, |x, y| ((x / n + y / n) % n) * n + (x % n + y % n) % n);
    NiceErrorBasis::with_index_group(group, ops)
}

/// Kronecker products `E1_g ⊗ E2_h` at index `g·|G2| + h`.
pub fn tensor_basis(e1: &NiceErrorBasis, e2: &NiceErrorBasis) -> Result<NiceErrorBasis> {
    let group = e1.index_group().direct_product(e2.index_group())?;
    let ops = e1
        .ops()
        .iter()
        .flat_map(|a| e2.ops().iter().map(move |b| a.kron(b)))
        .collect();
    NiceErrorBasis::with_index_group(group, ops)
}

/// Basis on `H1-space ⊗ H2-space` with operators `h·φ(g) ⊗ g` for `h`, `g`
/// running over the basis operators of the two error groups. `phi` lists
/// `(element of H2, image)` pairs; the elements must generate `H2` and the
/// images must extend to a homomorphism into the normaliser of `H1` that
/// sends the center of `H2` to scalars.
pub fn semidirect_basis(h1: &ErrorGroup, h2: &ErrorGroup, phi: &[(CycMatrix, CycMatrix)]) -> Result<NiceErrorBasis> {
    let g2 = h2.group();
    let dim1 = h1.dim();
    let mut gens = Vec::with_capacity(phi.len());
    for (x, img) in phi {
        let i = g2
            .index_of(x)
            .ok_or_else(|| Error::InvalidArgument("a φ argument is not an element of H2".into()))?;
        if img.shape() != (dim1, dim1) {
            return Err(Error::ShapeMismatch {
                op: "semidirect_basis",
                left: (dim1, dim1),
                right: img.shape(),
            });
        }
        gens.push((i, img.clone()));
    }
    // extend along the Cayley graph; every edge is a relation to respect
    let mut map: Vec<Option<CycMatrix>> = vec![None; g2.order()];
    map[g2.identity()] = Some(CycMatrix::identity(dim1));
    let mut queue = VecDeque::from([g2.identity()]);
    while let Some(x) = queue.pop_front() {
        let fx = map[x].clone().expect("visited");
        for (g, img) in &gens {
            let y = g2.mul(x, *g);
            let fy = &fx * img;
            match &map[y] {
                Some(existing) if *existing != fy => {
                    return Err(Error::NotHomomorphism(format!(
                        "images disagree at element {y} of H2"
                    )))
                }
                Some(_) => {}
                None => {
                    map[y] = Some(fy);
                    queue.push_back(y);
                }
            }
        }
    }
    let map: Vec<CycMatrix> = map
        .into_iter()
        .collect::<Option<_>>()
        .ok_or_else(|| Error::InvalidArgument("φ arguments do not generate H2".into()))?;

    let h1_gens: Vec<&CycMatrix> = h1
        .basis()
        .ops()
        .iter()
        .collect();
    for g in 0..g2.order() {
        let inv = &map[g2.inv(g)];
        for x in &h1_gens {
            let conj = &(&map[g] * x) * inv;
            if h1.index_of(&conj).is_none() {
                return Err(Error::OutsideNormalizer(format!(
                    "φ of element {g} conjugates a basis operator out of H1"
                )));
            }
        }
    }
    for &z in h2.center() {
        if map[z].as_scalar().is_none() {
            return Err(Error::CenterNotScalar(format!("φ of central element {z} is not scalar")));
        }
    }

    let mut ops = Vec::with_capacity(h1.basis().len() * h2.basis().len());
    for h in h1.basis().ops() {
        for (b, g) in h2.basis().ops().iter().enumerate() {
            let phi_g = &map[h2.op_element(b)];
            ops.push((h * phi_g).kron(g));
        }
    }
    NiceErrorBasis::from_ops(ops)
}

fn unitary_hadamard() -> CycMatrix {
    let s = CycScalar::sqrt_rational(&Rational::new(1, 2)).expect("√(1/2)");
    CycMatrix::from_int_rows(&[&[1, 1], &[1, -1]]).scale(&s)
}

fn qubit_x() -> CycMatrix {
    CycMatrix::from_int_rows(&[&[0, 1], &[1, 0]])
}

fn qubit_z() -> CycMatrix {
    CycMatrix::from_int_rows(&[&[1, 0], &[0, -1]])
}

/// The semidirect-product basis with both factors the qubit error group and
/// `φ` sending bit and sign flip to the unitary Hadamard.
pub fn egner_basis() -> Result<NiceErrorBasis> {
    let qubit = ErrorGroup::from_basis(&pauli_basis(2)?, None, DEFAULT_CAP)?;
    let h = unitary_hadamard();
    semidirect_basis(&qubit, &qubit, &[(qubit_x(), h.clone()), (qubit_z(), h)])
}

/// The generators `A = i·XH ⊗ X`, `B = Z ⊗ I`, `C = I ⊗ XZ` of the same
/// error group up to scalars, with `H` the unitary Hadamard. Without the
/// factor `i`, `AB = BA⁻¹`; with it all of `A⁴ = −I`, `B² = I`, `C² = −I`,
/// `AC = −CA`, `BC = CB` and `AB = −BA⁻¹` hold.
pub fn egner_generators() -> [CycMatrix; 3] {
    let (x, z, h) = (qubit_x(), qubit_z(), unitary_hadamard());
    let i2 = CycMatrix::identity(2);
    [(&x * &h).kron(&x).scale(&CycScalar::i()), z.kron(&i2), i2.kron(&(&x * &z))]
}

/// `E(x, y) = C_x D_y` on `C^{p^k}` with `C_x|z⟩ = |z + x⟩` and
/// `D_y|z⟩ = ω^{b(y·z)}|z⟩`, stored at index `x·p^k + y`.
pub fn gfpk_basis(field: &Field, b: &LinearForm) -> Result<NiceErrorBasis> {
    let q = field.size();
    if q > 16 {
        return Err(Error::InvalidArgument(format!(
            "GF({}^{}) basis would act on a {q}-dimensional space; at most 16 is supported",
            field.p(),
            field.k()
        )));
    }
    let p = field.p();
    let mut ops = Vec::with_capacity(q * q);
    for x in field.elements() {
        let cx = shift(q, |z| field.add(z as u32, x) as usize);
        for y in field.elements() {
            let phases: Vec<CycScalar> = field
                .elements()
                .map(|z| CycScalar::root_of_unity(p, b.pair(field, y, z) as i64))
                .collect();
            ops.push(&cx * &CycMatrix::diag(&phases));
        }
    }
    let group = additive_group(q * q, |u, v| {
        let x = field.add((u / q) as u32, (v / q) as u32) as usize;
        let y = field.add((u % q) as u32, (v % q) as u32) as usize;
        x * q + y
    });
    NiceErrorBasis::with_index_group(group, ops)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error_basis::verify_nice;

    #[test]
    fn qubit_paulis() {
        let e = pauli_basis(2).unwrap();
        assert_eq!(e.len(), 4);
        assert_eq!(*e.op(1), qubit_z());
        assert_eq!(*e.op(2), qubit_x());
        let traces: Vec<CycScalar> = e.ops().iter().map(|m| m.trace().unwrap()).collect();
        assert_eq!(traces, vec![CycScalar::from_int(2), CycScalar::zero(), CycScalar::zero(), CycScalar::zero()]);
        assert_eq!(e.cocycle(1, 2), Some(&CycScalar::from_int(-1)));
        assert!(pauli_basis(4).is_err());
    }

    #[test]
    fn semidirect_with_trivial_phi_is_tensor() {
        let p = pauli_basis(2).unwrap();
        let g = ErrorGroup::from_basis(&p, None, DEFAULT_CAP).unwrap();
        let i2 = CycMatrix::identity(2);
        let sd = semidirect_basis(&g, &g, &[(qubit_x(), i2.clone()), (qubit_z(), i2)]).unwrap();
        let t = tensor_basis(&p, &p).unwrap();
        assert_eq!(sd.ops(), t.ops());
        assert!(verify_nice(&sd).passed());
    }

    #[test]
    fn semidirect_diagnostics() {
        let p = pauli_basis(2).unwrap();
        let g = ErrorGroup::from_basis(&p, None, DEFAULT_CAP).unwrap();
        let i2 = CycMatrix::identity(2);

        // S² ≠ I although X² = I
        let s = CycMatrix::diag(&[CycScalar::one(), CycScalar::i()]);
        assert!(matches!(
            semidirect_basis(&g, &g, &[(qubit_x(), s), (qubit_z(), i2.clone())]),
            Err(Error::NotHomomorphism(_))
        ));

        // a reflection by 30 degrees is an involution outside the Clifford group
        let r3 = CycScalar::sqrt_rational(&Rational::from_int(3)).unwrap();
        let half = Rational::new(1, 2);
        let w = CycMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => CycScalar::from_rational(half.clone()),
            (1, 1) => CycScalar::from_rational(-half.clone()),
            _ => r3.scale(&half),
        });
        assert!((&w * &w).is_identity());
        assert!(matches!(
            semidirect_basis(&g, &g, &[(qubit_x(), i2.clone()), (qubit_z(), w)]),
            Err(Error::OutsideNormalizer(_))
        ));

        // iI is central in the phased group but is sent to Z
        let phased = ErrorGroup::from_basis(&p, Some(4), DEFAULT_CAP).unwrap();
        let ii = CycMatrix::scalar(2, &CycScalar::i());
        assert!(matches!(
            semidirect_basis(&g, &phased, &[(qubit_x(), i2.clone()), (qubit_z(), i2), (ii, qubit_z())]),
            Err(Error::CenterNotScalar(_))
        ));
    }
}
