//! Nielsen classes of four involutions in `(Z/N)² ⋊ {±1}`, `N = p^{k+1}`.
//!
//! An entry `(−1; v)` acts by `w ↦ −w + v`. Translations conjugate every `v`
//! by the same shift, so tuples are stored with `v₁ = 0` as the pair
//! `(v₂, v₃)`; product-one forces `v₄ = v₃ − v₂`.

use serde::Serialize;

use super::{orbit_sizes, Equivalence};
use crate::error::{Error, Result};
use crate::gf::is_prime;
use crate::grouptheory::{Perm, PermGroup};

/// Largest supported `p^{k+1}`.
pub const MODULAR_LIMIT: u64 = 13;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModularNielsen {
    pub p: u64,
    pub k: u32,
    pub modulus: u64,
    /// inner classes, one per `±(v₂, v₃)` with `v₂, v₃` a basis
    pub inner_classes: usize,
    pub abs_class_count: usize,
    pub inner_braid_orbit_count: usize,
    pub inner_orbit_sizes: Vec<usize>,
}

type Vec2 = (u64, u64);

struct Ring {
    n: u64,
}

impl Ring {
    fn sub(&self, a: Vec2, b: Vec2) -> Vec2 {
        ((a.0 + self.n - b.0) % self.n, (a.1 + self.n - b.1) % self.n)
    }

    fn neg(&self, a: Vec2) -> Vec2 {
        self.sub((0, 0), a)
    }

    fn twice_minus(&self, a: Vec2, b: Vec2) -> Vec2 {
        self.sub(((2 * a.0) % self.n, (2 * a.1) % self.n), b)
    }

    fn key(&self, v2: Vec2, v3: Vec2) -> usize {
        let n = self.n;
        (((v2.0 * n + v2.1) * n + v3.0) * n + v3.1) as usize
    }

    fn unkey(&self, key: usize) -> (Vec2, Vec2) {
        let n = self.n;
        let mut k = key as u64;
        let v3_1 = k % n;
        k /= n;
        let v3_0 = k % n;
        k /= n;
        ((k / n, k % n), (v3_0, v3_1))
    }

    /// `±` class representative.
    fn canonical(&self, v2: Vec2, v3: Vec2) -> usize {
        self.key(v2, v3).min(self.key(self.neg(v2), self.neg(v3)))
    }

    fn apply(&self, m: [u64; 4], v: Vec2) -> Vec2 {
        ((m[0] * v.0 + m[1] * v.1) % self.n, (m[2] * v.0 + m[3] * v.1) % self.n)
    }

    /// `q_i` on the normalized tuple, renormalized.
    fn braid(&self, i: usize, v2: Vec2, v3: Vec2) -> (Vec2, Vec2) {
        let mut v = [(0, 0), v2, v3, self.sub(v3, v2)];
        let (a, b) = (v[i - 1], v[i]);
        v[i - 1] = self.twice_minus(a, b);
        v[i] = a;
        let base = v[0];
        (self.sub(v[1], base), self.sub(v[2], base))
    }
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra.max(rb)] = ra.min(rb);
    }
}

pub fn modular_nielsen(p: u64, k: u32) -> Result<ModularNielsen> {
    if p < 3 || !is_prime(p) {
        return Err(Error::invalid(format!("p must be an odd prime, got {p}")));
    }
    let n = p
        .checked_pow(k + 1)
        .filter(|&n| n <= MODULAR_LIMIT)
        .ok_or_else(|| Error::invalid(format!("p^(k+1) must be at most {MODULAR_LIMIT}")))?;
    let ring = Ring { n };
    let size = (n * n * n * n) as usize;
    let mut member = vec![false; size];
    for key in 0..size {
        let (v2, v3) = ring.unkey(key);
        let det = (v2.0 * v3.1 + n * n - v2.1 * v3.0 % n) % n;
        if det % p != 0 {
            member[ring.canonical(v2, v3)] = true;
        }
    }
    let classes: Vec<usize> = (0..size).filter(|&k| member[k]).collect();
    let mut braid_parent: Vec<usize> = (0..size).collect();
    let mut abs_parent: Vec<usize> = (0..size).collect();
    let units: Vec<u64> = (1..n).filter(|u| u % p != 0).collect();
    let mut mats: Vec<[u64; 4]> = vec![[1, 1, 0, 1], [1, 0, 1, 1]];
    mats.extend(units.iter().map(|&u| [u, 0, 0, 1]));
    for &key in &classes {
        let (v2, v3) = ring.unkey(key);
        for i in 1..=3 {
            let (a, b) = ring.braid(i, v2, v3);
            let image = ring.canonical(a, b);
            debug_assert!(member[image]);
            union(&mut braid_parent, key, image);
        }
        for m in &mats {
            union(&mut abs_parent, key, ring.canonical(ring.apply(*m, v2), ring.apply(*m, v3)));
        }
    }
    let mut sizes = std::collections::BTreeMap::new();
    for &key in &classes {
        *sizes.entry(find(&mut braid_parent, key)).or_insert(0usize) += 1;
    }
    let abs_roots: std::collections::BTreeSet<usize> = classes.iter().map(|&c| find(&mut abs_parent, c)).collect();
    Ok(ModularNielsen {
        p,
        k,
        modulus: n,
        inner_classes: classes.len(),
        abs_class_count: abs_roots.len(),
        inner_braid_orbit_count: sizes.len(),
        inner_orbit_sizes: sizes.into_values().collect(),
    })
}

/// `(−1; v₁), …, (−1; v_r)` as permutations of `(Z/n)²`, point `x·n + y`.
pub fn involution_tuple(n: u64, vs: &[Vec2]) -> Vec<Perm> {
    vs.iter()
        .map(|&(a, b)| {
            let images = (0..n * n)
                .map(|w| {
                    let (x, y) = (w / n, w % n);
                    (((a + n - x) % n) * n + (b + n - y) % n) as u32
                })
                .collect();
            Perm::from_images(images).expect("affine involution")
        })
        .collect()
}

/// Inner braid orbit count by the generic permutation machinery: every
/// product-one generating 4-tuple of involutions, modulo conjugation.
pub fn modular_nielsen_generic(n: u64) -> Result<(usize, usize)> {
    let points: Vec<Vec2> = (0..n * n).map(|w| (w / n, w % n)).collect();
    let ring = Ring { n };
    let all = involution_tuple(n, &points);
    let group = PermGroup::generate((n * n) as usize, &all)?;
    let mut tuples = Vec::new();
    for &v1 in &points {
        for &v2 in &points {
            for &v3 in &points {
                let v4 = ring.sub(ring.sub(v3, v2), ring.neg(v1));
                let t = involution_tuple(n, &[v1, v2, v3, v4]);
                if PermGroup::generate((n * n) as usize, &t)?.order() == group.order() {
                    tuples.push(t);
                }
            }
        }
    }
    let inner = orbit_sizes(&tuples, &Equivalence::Inner(group))?;
    Ok((inner.iter().sum(), inner.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grouptheory::product;
    use crate::nielsen::rh_genus;

    #[test]
    fn counts() {
        let r = modular_nielsen(3, 0).unwrap();
        assert_eq!((r.inner_classes, r.abs_class_count, r.inner_braid_orbit_count), (24, 1, 2));
        assert_eq!(modular_nielsen(5, 0).unwrap().inner_braid_orbit_count, 4);
        assert!(modular_nielsen(17, 0).is_err());
        assert!(modular_nielsen(9, 0).is_err());
    }

    #[test]
    fn generic_agrees() {
        assert_eq!(modular_nielsen_generic(3).unwrap(), (24, 2));
    }

    #[test]
    fn involutions() {
        let t = involution_tuple(3, &[(0, 0), (1, 0), (0, 1), (2, 1)]);
        assert!(product(&t, 9).is_identity());
        assert_eq!(t[0].fixed_points(), 1);
        assert_eq!(rh_genus(&t).unwrap(), 0);
    }
}
