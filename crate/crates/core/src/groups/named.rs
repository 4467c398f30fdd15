//! Small reference groups by table.

use super::abstract_group::AbstractGroup;
use crate::error::{Error, Result};

fn build(n: usize, mul: impl Fn(usize, usize) -> usize) -> AbstractGroup {
    let table = (0..n).map(|a| (0..n).map(|b| mul(a, b)).collect()).collect();
    AbstractGroup::from_table(table, 0).expect("reference group table is valid")
}

pub fn cyclic(n: usize) -> AbstractGroup {
    build(n, |a, b| (a + b) % n)
}

/// Dihedral group of the given (even) order; element `2a + s` is `r^a s^s`.
pub fn dihedral(order: usize) -> AbstractGroup {
    assert!(order >= 2 && order % 2 == 0);
    let m = order / 2;
    build(order, |x, y| {
        let (a, s) = (x / 2, x % 2);
        let (b, t) = (y / 2, y % 2);
        // r^a s^s r^b s^t = r^{a ± b} s^{s+t}
        let rot = if s == 0 { (a + b) % m } else { (a + m - b % m) % m };
        2 * rot + (s ^ t)
    })
}

/// Quaternion group: elements `±1, ±i, ±j, ±k` as `2u + sign`.
pub fn quaternion() -> AbstractGroup {
    // unit products: (sign, unit) for unit ∈ {1, i, j, k}
    const T: [[(usize, usize); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    build(8, |x, y| {
        let (u, s) = (x / 2, x % 2);
        let (v, t) = (y / 2, y % 2);
        let (sign, w) = T[u][v];
        2 * w + (s ^ t ^ sign)
    })
}

/// Symmetric group on three points, elements in lexicographic order of
/// their permutation images.
pub fn symmetric3() -> AbstractGroup {
    let perms: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    build(6, |a, b| {
        // (a·b)(x) = a(b(x))
        let p: [usize; 3] = std::array::from_fn(|x| perms[a][perms[b][x]]);
        perms.iter().position(|q| *q == p).expect("closed")
    })
}

pub fn klein() -> AbstractGroup {
    build(4, |a, b| a ^ b)
}

pub fn z2xd8() -> AbstractGroup {
    cyclic(2).direct_product(&dihedral(8)).expect("small product")
}

/// Looks a group up by a short name (`z4`, `d8`, `q8`, `s3`, `klein`,
/// `z2xd8`, `z2xz2`).
pub fn by_name(name: &str) -> Result<AbstractGroup> {
    let lower = name.to_ascii_lowercase();
    match lower.as_str() {
        "q8" => return Ok(quaternion()),
        "s3" => return Ok(symmetric3()),
        "klein" | "z2xz2" | "v4" => return Ok(klein()),
        "z2xd8" => return Ok(z2xd8()),
        _ => {}
    }
    let parse = |s: &str| s.parse::<usize>().ok().filter(|&n| n >= 1 && n <= 4096);
    if let Some(n) = lower.strip_prefix('z').and_then(parse) {
        return Ok(cyclic(n));
    }
    if let Some(n) = lower.strip_prefix('d').and_then(parse).filter(|n| n % 2 == 0) {
        return Ok(dihedral(n));
    }
    Err(Error::InvalidArgument(format!("unknown group name {name:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_orders() {
        assert_eq!(dihedral(8).center().len(), 2);
        assert!(!dihedral(8).is_abelian());
        assert!(!quaternion().is_abelian());
        let q_orders = quaternion().element_orders();
        assert_eq!(q_orders.iter().filter(|&&o| o == 4).count(), 6);
        let d_orders = dihedral(8).element_orders();
        assert_eq!(d_orders.iter().filter(|&&o| o == 2).count(), 5);
        assert_eq!(symmetric3().center().len(), 1);
        assert_eq!(z2xd8().order(), 16);
        assert_eq!(by_name("z4").unwrap().exponent(), 4);
    }
}
