//! Monodromy models of the classical families and the Fano plane examples.

use super::monodromy::MonodromyData;
use super::perm::Perm;
use crate::error::{Error, Result};
use crate::frobset::gcd;

fn affine(n: u64, mul: u64, add: u64) -> Perm {
    let images = (0..n).map(|x| ((mul * x + add) % n) as u32).collect();
    Perm::from_images(images).expect("unit multiplier")
}

fn check(n: u64, q: u64) -> Result<()> {
    if n == 0 || gcd(n, q) != 1 {
        return Err(Error::invalid(format!("model needs gcd(n, q) = 1, got n = {n}, q = {q}")));
    }
    Ok(())
}

/// `x^n` over `F_q`: translations of `Z/n`, `τ = ×q`.
pub fn cyclic_model(n: u64, q: u64) -> Result<MonodromyData> {
    check(n, q)?;
    MonodromyData::new(vec![affine(n, 1, 1)], affine(n, q % n, 0))
}

/// `D_{n,a}` over `F_q`: `x ↦ ±x + b` on `Z/n`, `τ = ×q`.
pub fn dickson_model(n: u64, q: u64) -> Result<MonodromyData> {
    check(n, q)?;
    MonodromyData::new(vec![affine(n, 1, 1), affine(n, n - 1, 0)], affine(n, q % n, 0))
}

type Mat = [[u8; 3]; 3];

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let mut c = [[0u8; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = (0..3).fold(0, |s, k| s ^ (a[i][k] & b[k][j]));
        }
    }
    c
}

fn inv_transpose(a: &Mat) -> Mat {
    // over F_2 with det 1 the inverse is the adjugate
    let cof = |i: usize, j: usize| {
        let (r0, r1) = ((i + 1) % 3, (i + 2) % 3);
        let (c0, c1) = ((j + 1) % 3, (j + 2) % 3);
        (a[r0][c0] & a[r1][c1]) ^ (a[r0][c1] & a[r1][c0])
    };
    let mut inv = [[0u8; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            inv[j][i] = cof(i, j);
        }
    }
    debug_assert_eq!(mat_mul(a, &inv), [[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
    let mut t = [[0u8; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = inv[j][i];
        }
    }
    t
}

/// Row vector `v ↦ v·A` on the 7 nonzero vectors of `F_2³` (point `i` is the
/// vector with bits `i + 1`).
fn on_vectors(a: &Mat) -> Perm {
    let images = (1u8..8)
        .map(|v| {
            let bits = [v & 1, (v >> 1) & 1, (v >> 2) & 1];
            let w: u8 = (0..3).fold(0, |s, j| s | ((0..3).fold(0, |x, i| x ^ (bits[i] & a[i][j])) << j));
            (w - 1) as u32
        })
        .collect();
    Perm::from_images(images).expect("invertible matrix")
}

const FANO_GENS: [Mat; 2] = [[[0, 1, 0], [0, 0, 1], [1, 0, 0]], [[1, 1, 0], [0, 1, 0], [0, 0, 1]]];

/// `GL₃(2)` on Fano points and, in parallel, on Fano lines (a line is the
/// kernel of a nonzero functional `w`, acted on by `w ↦ w·A^{−T}`).
pub fn fano_actions() -> (Vec<Perm>, Vec<Perm>) {
    let points = FANO_GENS.iter().map(on_vectors).collect();
    let lines = FANO_GENS.iter().map(|a| on_vectors(&inv_transpose(a))).collect();
    (points, lines)
}

/// Points versus lines with `τ` trivial (`d = 1`).
pub fn fano_points_lines() -> Result<MonodromyData> {
    let (points, lines) = fano_actions();
    MonodromyData::with_second_action(points, Perm::identity(7), lines, Perm::identity(7))
}

/// `GL₃(2) × Z/2`: `T₁` is two copies of the points with `τ` swapping them,
/// `T₂` is points plus lines with `τ` trivial. Characters agree on `GL₃(2)`
/// and differ on the outer coset.
pub fn fano_outer_extension() -> Result<MonodromyData> {
    let (points, lines) = fano_actions();
    let doubled: Vec<Perm> = points
        .iter()
        .map(|g| {
            let images = g.images().iter().copied().chain(g.images().iter().map(|&j| j + 7)).collect();
            Perm::from_images(images).expect("doubled action")
        })
        .collect();
    let swap = Perm::from_images((0..14).map(|i| (i + 7) % 14).collect()).expect("swap");
    let sum: Vec<Perm> = points
        .iter()
        .zip(&lines)
        .map(|(p, l)| {
            let images = p.images().iter().copied().chain(l.images().iter().map(|&j| j + 7)).collect();
            Perm::from_images(images).expect("sum action")
        })
        .collect();
    MonodromyData::with_second_action(doubled, swap, sum, Perm::identity(14))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobset::FrobeniusSet;
    use crate::grouptheory::{coset_exceptionality, idp_trace_test, sdp_check, Mode, PermGroup};

    #[test]
    fn model_sets() {
        let e = coset_exceptionality(&cyclic_model(5, 3).unwrap(), Mode::Exceptional).unwrap();
        assert_eq!(e, FrobeniusSet::from_residues(4, [1, 2, 3]).unwrap());
        let m = dickson_model(5, 3).unwrap();
        assert_eq!(m.d(), 2);
        let e = coset_exceptionality(&m, Mode::Exceptional).unwrap();
        // {1, 3} mod 4 minimizes to {1} mod 2
        assert_eq!(e, FrobeniusSet::from_residues(4, [1, 3]).unwrap());
        assert_eq!(e, FrobeniusSet::from_residues(2, [1]).unwrap());
        assert!(cyclic_model(6, 3).is_err());
    }

    #[test]
    fn fano() {
        let (points, lines) = fano_actions();
        assert_eq!(PermGroup::generate(7, &points).unwrap().order(), 168);
        assert_eq!(PermGroup::generate(7, &lines).unwrap().order(), 168);
        let m = fano_points_lines().unwrap();
        assert_eq!(idp_trace_test(&m).unwrap(), FrobeniusSet::all());
        assert!(sdp_check(&m).unwrap().strong);
        let ext = fano_outer_extension().unwrap();
        assert_eq!(ext.d(), 2);
        let r = sdp_check(&ext).unwrap();
        assert!(r.characters_equal_on_g && !r.characters_equal_on_ghat && !r.strong);
        assert!(!r.induced_from_g && r.lemma_holds);
    }
}
