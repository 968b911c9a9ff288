//! Frobenius progressions: sets of positive integers `t` determined by
//! `t mod d` and closed under multiplication by units mod `d`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// A union of full Frobenius progressions mod `modulus`.
/// Residue `0` stands for the class of the modulus.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FrobeniusSet {
    modulus: u64,
    residues: BTreeSet<u64>,
}

impl fmt::Debug for FrobeniusSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} mod {}", self.residues, self.modulus)
    }
}

impl fmt::Display for FrobeniusSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r: Vec<String> = self.residues.iter().map(|r| r.to_string()).collect();
        write!(f, "{{{}}} mod {}", r.join(","), self.modulus)
    }
}

fn units(d: u64) -> impl Iterator<Item = u64> {
    (1..=d).filter(move |&u| gcd(u, d) == 1).map(move |u| u % d)
}

impl FrobeniusSet {
    pub fn empty() -> FrobeniusSet {
        FrobeniusSet { modulus: 1, residues: BTreeSet::new() }
    }

    pub fn all() -> FrobeniusSet {
        FrobeniusSet { modulus: 1, residues: BTreeSet::from([0]) }
    }

    /// Unit closure of `residues` mod `d`, then modulus-minimized.
    pub fn from_residues(d: u64, residues: impl IntoIterator<Item = u64>) -> Result<FrobeniusSet> {
        if d == 0 {
            return Err(Error::invalid("modulus must be at least 1"));
        }
        let mut set = BTreeSet::new();
        for r in residues {
            let r = r % d;
            for u in units(d) {
                set.insert(r * u % d);
            }
        }
        Ok(FrobeniusSet { modulus: d, residues: set }.minimized())
    }

    /// Like [`FrobeniusSet::from_residues`] but rejects sets that are not
    /// already unit-closed.
    pub fn from_exact(d: u64, residues: impl IntoIterator<Item = u64>) -> Result<FrobeniusSet> {
        if d == 0 {
            return Err(Error::invalid("modulus must be at least 1"));
        }
        let set: BTreeSet<u64> = residues.into_iter().map(|r| r % d).collect();
        for &r in &set {
            for u in units(d) {
                if !set.contains(&(r * u % d)) {
                    return Err(Error::Invariant(format!(
                        "residue set {set:?} mod {d} is not closed under units ({r}·{u})"
                    )));
                }
            }
        }
        Ok(FrobeniusSet { modulus: d, residues: set }.minimized())
    }

    fn minimized(self) -> FrobeniusSet {
        let d = self.modulus;
        for d2 in 1..d {
            if !d.is_multiple_of(d2) {
                continue;
            }
            let fits = (0..d2).all(|r2| {
                let first = self.residues.contains(&r2);
                (r2..d).step_by(d2 as usize).all(|r| self.residues.contains(&r) == first)
            });
            if fits {
                let residues = self.residues.iter().map(|r| r % d2).collect();
                return FrobeniusSet { modulus: d2, residues };
            }
        }
        self
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn residues(&self) -> &BTreeSet<u64> {
        &self.residues
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    pub fn contains(&self, t: u64) -> bool {
        self.residues.contains(&(t % self.modulus))
    }

    fn combine(&self, other: &FrobeniusSet, keep: impl Fn(bool, bool) -> bool) -> FrobeniusSet {
        let l = lcm(self.modulus, other.modulus);
        let residues = (0..l).filter(|&r| keep(self.contains(r), other.contains(r))).collect();
        FrobeniusSet { modulus: l, residues }.minimized()
    }

    pub fn intersect(&self, other: &FrobeniusSet) -> FrobeniusSet {
        self.combine(other, |a, b| a && b)
    }

    pub fn union(&self, other: &FrobeniusSet) -> FrobeniusSet {
        self.combine(other, |a, b| a || b)
    }

    /// Membership for `t = 1..=n`.
    pub fn samples(&self, n: u64) -> Vec<bool> {
        (1..=n).map(|t| self.contains(t)).collect()
    }
}

/// The least modulus `d ≤ d_max` with a unit-closed residue set reproducing
/// `samples[t − 1]` for `t = 1..=T` exactly; `Ok(None)` when none exists.
/// Requires `T ≥ 2·d_max`.
pub fn fit_from_samples(samples: &[bool], d_max: u64) -> Result<Option<FrobeniusSet>> {
    let n = samples.len() as u64;
    if d_max == 0 || n < 2 * d_max {
        return Err(Error::invalid(format!(
            "fit needs at least 2·d_max = {} samples, got {n}",
            2 * d_max
        )));
    }
    'outer: for d in 1..=d_max {
        let mut class: Vec<Option<bool>> = vec![None; d as usize];
        for (i, &s) in samples.iter().enumerate() {
            let r = (i as u64 + 1) % d;
            match class[r as usize] {
                None => class[r as usize] = Some(s),
                Some(v) if v != s => continue 'outer,
                _ => {}
            }
        }
        let trues: Vec<u64> = (0..d).filter(|&r| class[r as usize] == Some(true)).collect();
        for &r in &trues {
            if units(d).any(|u| class[(r * u % d) as usize] != Some(true)) {
                continue 'outer;
            }
        }
        return FrobeniusSet::from_exact(d, trues).map(Some);
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(d: u64, r: &[u64]) -> FrobeniusSet {
        FrobeniusSet::from_residues(d, r.iter().copied()).unwrap()
    }

    #[test]
    fn examples() {
        let s = set(12, &[2]);
        assert_eq!((s.modulus(), s.residues().iter().copied().collect::<Vec<_>>()), (12, vec![2, 10]));
        assert!(s.contains(22));
        assert_eq!(set(6, &[0, 1, 2, 3, 4, 5]), FrobeniusSet::all());
        assert_eq!(set(7, &[1]).residues().len(), 6);
        assert_eq!(set(4, &[1, 2, 3]).intersect(&set(2, &[1])), set(4, &[1, 3]));
        assert_eq!(set(4, &[1]).intersect(&set(4, &[1])), set(4, &[1]));
        assert!(FrobeniusSet::from_exact(4, [1]).is_err());
    }

    #[test]
    fn fits() {
        assert_eq!(fit_from_samples(&[true; 12], 6).unwrap(), Some(FrobeniusSet::all()));
        let alt: Vec<bool> = (1..=12).map(|t| t % 2 == 1).collect();
        assert_eq!(fit_from_samples(&alt, 6).unwrap(), Some(set(2, &[1])));
        let x5: Vec<bool> = (1..=12).map(|t| t % 4 != 0).collect();
        assert_eq!(fit_from_samples(&x5, 6).unwrap(), Some(set(4, &[1, 2, 3])));
        // true only at t = 1: needs modulus > d_max
        let mut one = vec![false; 12];
        one[0] = true;
        assert_eq!(fit_from_samples(&one, 6).unwrap(), None);
        assert!(fit_from_samples(&one, 7).is_err());
    }
}
