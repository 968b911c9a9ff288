//! Branch cycles of Chebyshev-type covers and of their fiber-product limits.

use std::collections::BTreeSet;

use serde::Serialize;

use super::rh_genus;
use crate::error::{Error, Result};
use crate::grouptheory::{orbits, product, Perm};

/// Upper bound on the number of letters of a tower tuple.
pub const TOWER_DEGREE_CAP: u64 = 1 << 16;

fn check_odd(n: u64) -> Result<()> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::invalid(format!("n must be odd and at least 3, got {n}")));
    }
    Ok(())
}

/// `(g₁, g₂, g_∞⁻¹)` with `g_∞ = (1 2 … n)`, `g₁ = (1 n)(2 n−1)…`,
/// `g₂ = (n 2)(n−1 3)…`.
pub fn dickson_cycles(n: u64) -> Result<Vec<Perm>> {
    check_odd(n)?;
    let n32 = n as u32;
    let g1 = Perm::from_images((0..n32).map(|i| n32 - 1 - i).collect())?;
    let g2 = Perm::from_images((0..n32).map(|i| (n32 - i) % n32).collect())?;
    let g_inf = Perm::from_images((0..n32).map(|i| (i + 1) % n32).collect())?;
    Ok(vec![g1, g2, g_inf.inv()])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerCycles {
    pub n: u64,
    pub labels: Vec<u64>,
    /// letters of the constructed limit, `n^m`
    pub degree: u64,
    #[serde(serialize_with = "cycle_strings")]
    pub tuple: Vec<Perm>,
    pub product_one: bool,
    pub transitive: bool,
    /// the last entry is a product of disjoint `n`-cycles
    pub infinity_n_cycles: bool,
    pub genus: i64,
    /// the constructed degree differs from the `q^n` claimed for the limit
    pub degree_note: String,
}

fn cycle_strings<S: serde::Serializer>(tuple: &[Perm], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(tuple.iter().map(|g| g.to_string()))
}

/// `g` acting on coordinate `slot` of `(Z/n)^m` (coordinate 0 most significant).
fn on_coordinate(g: &Perm, n: u64, m: u32, slot: u32) -> Perm {
    let weight = n.pow(m - 1 - slot);
    let total = n.pow(m);
    let images = (0..total)
        .map(|k| {
            let digit = (k / weight) % n;
            (k - digit * weight + g.apply(digit as u32) as u64 * weight) as u32
        })
        .collect();
    Perm::from_images(images).expect("coordinate action")
}

/// Branch cycles for the limit of `T_{n,a₁}, …, T_{n,a_m}`: the pair of
/// involutions of the `j`-th cover acts on coordinate `j` of `(Z/n)^m`, the
/// relative labelling is the identity, and the last entry closes the product.
pub fn dickson_tower_cycles(n: u64, labels: &[u64]) -> Result<TowerCycles> {
    check_odd(n)?;
    let m = labels.len() as u32;
    if m == 0 {
        return Err(Error::invalid("need at least one label"));
    }
    let distinct: BTreeSet<u64> = labels.iter().copied().collect();
    if distinct.len() != labels.len() || distinct.contains(&0) {
        return Err(Error::invalid("labels must be distinct and nonzero"));
    }
    let degree = n
        .checked_pow(m)
        .filter(|&d| d <= TOWER_DEGREE_CAP)
        .ok_or_else(|| Error::cap("tower degree", (n as u128).saturating_pow(m), TOWER_DEGREE_CAP as u128))?;
    let base = dickson_cycles(n)?;
    let mut tuple = Vec::with_capacity(2 * m as usize + 1);
    for slot in 0..m {
        tuple.push(on_coordinate(&base[0], n, m, slot));
        tuple.push(on_coordinate(&base[1], n, m, slot));
    }
    tuple.push(product(&tuple, degree as usize).inv());
    let last = tuple.last().expect("nonempty");
    let infinity_n_cycles = last.cycle_type().iter().all(|&l| l as u64 == n);
    let product_one = product(&tuple, degree as usize).is_identity();
    let transitive = orbits(degree as usize, &tuple).len() == 1;
    if !(product_one && transitive && infinity_n_cycles) {
        return Err(Error::Invariant("tower branch cycles fail their defining conditions".into()));
    }
    let genus = rh_genus(&tuple)?;
    Ok(TowerCycles {
        n,
        labels: labels.to_vec(),
        degree,
        tuple,
        product_one,
        transitive,
        infinity_n_cycles,
        genus,
        degree_note: format!("constructed degree n^m = {degree}; the stated limit degree q^n is not reproduced"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grouptheory::group_from_gens;

    #[test]
    fn base_triple() {
        let t = dickson_cycles(5).unwrap();
        assert_eq!(t[0].to_string(), "(1 5)(2 4)");
        assert_eq!(t[1].to_string(), "(2 5)(3 4)");
        assert!(product(&t, 5).is_identity());
        assert_eq!(group_from_gens(&t).unwrap().order(), 10);
        assert_eq!(rh_genus(&t).unwrap(), 0);
        assert_eq!(dickson_tower_cycles(5, &[1]).unwrap().tuple, t);
    }

    #[test]
    fn staircase() {
        let t = dickson_tower_cycles(3, &[1, 2]).unwrap();
        assert_eq!(t.degree, 9);
        // (1,1) → (2,2) → (3,3) under the product of the first four entries
        let prod = product(&t.tuple[..4], 9);
        assert_eq!((prod.apply(0), prod.apply(4)), (4, 8));
        assert_eq!(t.genus, 1);
        assert!(dickson_tower_cycles(3, &[1, 1]).is_err());
        assert!(dickson_tower_cycles(4, &[1]).is_err());
    }
}
