//! Nielsen tuples, the Hurwitz braid action and Riemann–Hurwitz.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grouptheory::{product, Perm, PermGroup};

mod combinat;
mod modular;
mod tower;

pub use combinat::{difference_sets, rational_union_check, RationalUnion};
pub use modular::{involution_tuple, modular_nielsen, modular_nielsen_generic, ModularNielsen};
pub use tower::{dickson_cycles, dickson_tower_cycles, TowerCycles};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TupleCheck {
    pub product_one: bool,
    pub generation: bool,
    /// `None` when no classes were declared
    pub class_membership: Option<bool>,
}

impl TupleCheck {
    pub fn ok(&self) -> bool {
        self.product_one && self.generation && self.class_membership != Some(false)
    }
}

fn degree_of(tuple: &[Perm]) -> Result<usize> {
    let n = tuple.first().map(Perm::degree).ok_or_else(|| Error::invalid("empty tuple"))?;
    if tuple.iter().any(|g| g.degree() != n) {
        return Err(Error::invalid("tuple entries have different degrees"));
    }
    Ok(n)
}

/// Whether `g` is conjugate to `c` by an element of `group`.
pub fn conjugate_in(group: &PermGroup, g: &Perm, c: &Perm) -> bool {
    g.cycle_type() == c.cycle_type() && group.elements().iter().any(|h| &g.conj(h) == c)
}

/// Product-one, generation of `declared`, and (optionally) membership of the
/// entries in the classes of `class_reps` up to reordering.
pub fn validate_tuple(tuple: &[Perm], declared: &PermGroup, class_reps: Option<&[Perm]>) -> Result<TupleCheck> {
    let n = degree_of(tuple)?;
    if n != declared.degree() {
        return Err(Error::invalid("tuple and declared group have different degrees"));
    }
    let product_one = product(tuple, n).is_identity();
    let generated = PermGroup::generate(n, tuple)?;
    let generation = generated.order() == declared.order() && tuple.iter().all(|g| declared.contains(g));
    let class_membership = class_reps.map(|reps| {
        if reps.len() != tuple.len() {
            return false;
        }
        let mut used = vec![false; reps.len()];
        match_classes(declared, tuple, reps, &mut used)
    });
    Ok(TupleCheck { product_one, generation, class_membership })
}

fn match_classes(group: &PermGroup, rest: &[Perm], reps: &[Perm], used: &mut [bool]) -> bool {
    let Some((g, tail)) = rest.split_first() else {
        return true;
    };
    for j in 0..reps.len() {
        if !used[j] && conjugate_in(group, g, &reps[j]) {
            used[j] = true;
            if match_classes(group, tail, reps, used) {
                return true;
            }
            used[j] = false;
        }
    }
    false
}

/// Genus from `2(n + g − 1) = Σ ind(g_i)`.
pub fn rh_genus(tuple: &[Perm]) -> Result<i64> {
    let n = degree_of(tuple)?;
    if crate::grouptheory::orbits(n, tuple).len() != 1 {
        return Err(Error::invalid("tuple is not transitive"));
    }
    let total: usize = tuple.iter().map(Perm::index).sum();
    if total % 2 == 1 {
        return Err(Error::invalid("not a branch cycle description: odd index sum"));
    }
    let g = total as i64 / 2 - n as i64 + 1;
    if g < 0 {
        return Err(Error::invalid(format!("not a branch cycle description: genus {g}")));
    }
    Ok(g)
}

/// `q_i` (1-based, `i < r`) for positive `i`, its inverse for negative `i`.
pub fn braid_act(tuple: &[Perm], i: i32) -> Result<Vec<Perm>> {
    let r = tuple.len() as i32;
    let k = i.unsigned_abs() as usize;
    if i == 0 || i.abs() >= r {
        return Err(Error::invalid(format!("braid index {i} out of range for r = {r}")));
    }
    let mut out = tuple.to_vec();
    let (a, b) = (&tuple[k - 1], &tuple[k]);
    if i > 0 {
        out[k - 1] = a.mul(b).mul(&a.inv());
        out[k] = a.clone();
    } else {
        out[k - 1] = b.clone();
        out[k] = b.inv().mul(a).mul(b);
    }
    Ok(out)
}

/// Apply `q_{w₁}`, then `q_{w₂}`, and so on.
pub fn braid_word(tuple: &[Perm], word: &[i32]) -> Result<Vec<Perm>> {
    word.iter().try_fold(tuple.to_vec(), |t, &i| braid_act(&t, i))
}

/// Equivalence used when collecting orbits.
#[derive(Clone, Debug)]
pub enum Equivalence {
    None,
    /// conjugation by the group
    Inner(PermGroup),
    /// conjugation by a caller-supplied normalizing group
    Absolute(PermGroup),
}

impl Equivalence {
    /// Least conjugate of the tuple.
    pub fn canonical(&self, tuple: &[Perm]) -> Vec<Perm> {
        match self {
            Equivalence::None => tuple.to_vec(),
            Equivalence::Inner(g) | Equivalence::Absolute(g) => g
                .elements()
                .iter()
                .map(|h| tuple.iter().map(|x| x.conj(h)).collect::<Vec<_>>())
                .min()
                .expect("group has the identity"),
        }
    }
}

/// Orbit of `tuple` under the subgroup generated by the given braid words,
/// as sorted canonical forms.
pub fn orbit_under(tuple: &[Perm], words: &[Vec<i32>], equiv: &Equivalence) -> Result<Vec<Vec<Perm>>> {
    let start = equiv.canonical(tuple);
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(t) = queue.pop_front() {
        for w in words {
            let next = equiv.canonical(&braid_word(&t, w)?);
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

fn standard_words(r: usize) -> Vec<Vec<i32>> {
    (1..r as i32).map(|i| vec![i]).collect()
}

/// Orbit under the full Hurwitz monodromy group `H_r`.
pub fn braid_orbit(tuple: &[Perm], equiv: &Equivalence) -> Result<Vec<Vec<Perm>>> {
    orbit_under(tuple, &standard_words(tuple.len()), equiv)
}

/// The `H₄` orbit of a 4-tuple together with its partition into orbits of
/// `⟨(q₁q₂q₃)², q₁q₃⁻¹⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedOrbit {
    pub orbit: Vec<Vec<Perm>>,
    pub blocks: Vec<Vec<Vec<Perm>>>,
}

pub fn q2_reduced_orbit(tuple: &[Perm], equiv: &Equivalence) -> Result<ReducedOrbit> {
    if tuple.len() != 4 {
        return Err(Error::invalid("reduced orbits need r = 4"));
    }
    let orbit = braid_orbit(tuple, equiv)?;
    let words = vec![vec![1, 2, 3, 1, 2, 3], vec![1, -3]];
    let mut blocks = Vec::new();
    let mut placed: HashMap<Vec<Perm>, usize> = HashMap::new();
    for t in &orbit {
        if placed.contains_key(t) {
            continue;
        }
        let block = orbit_under(t, &words, equiv)?;
        for b in &block {
            placed.insert(b.clone(), blocks.len());
        }
        blocks.push(block);
    }
    Ok(ReducedOrbit { orbit, blocks })
}

/// Partition a set of tuples (closed under the braid action) into `H_r`
/// orbits; returns orbit sizes in order of first member.
pub fn orbit_sizes(tuples: &[Vec<Perm>], equiv: &Equivalence) -> Result<Vec<usize>> {
    let canon: BTreeSet<Vec<Perm>> = tuples.iter().map(|t| equiv.canonical(t)).collect();
    let mut done: BTreeSet<Vec<Perm>> = BTreeSet::new();
    let mut sizes = Vec::new();
    for t in &canon {
        if done.contains(t) {
            continue;
        }
        let orbit = braid_orbit(t, equiv)?;
        sizes.push(orbit.len());
        done.extend(orbit);
    }
    Ok(sizes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, s: &str) -> Perm {
        Perm::parse(s, Some(n)).unwrap()
    }

    #[test]
    fn validation() {
        let s3 = PermGroup::generate(3, &[p(3, "(1 2)"), p(3, "(1 2 3)")]).unwrap();
        let t = [p(3, "(1 2)"), p(3, "(1 2)"), p(3, "(1 2)")];
        let c = validate_tuple(&t, &PermGroup::generate(3, &[p(3, "(1 2)")]).unwrap(), None).unwrap();
        assert!(!c.product_one && c.generation);
        let s4 = PermGroup::generate(4, &[p(4, "(1 2)"), p(4, "(1 2 3 4)")]).unwrap();
        let c = validate_tuple(&[p(4, "(1 2)(3 4)"), p(4, "(1 2)(3 4)")], &s4, None).unwrap();
        assert!(c.product_one && !c.generation && !c.ok());
        let t = [p(3, "(1 2)"), p(3, "(2 3)"), p(3, "(1 3 2)")];
        assert!(!validate_tuple(&t, &s3, None).unwrap().product_one);
        let t = [p(3, "(1 2)"), p(3, "(2 3)"), p(3, "(1 2 3)")];
        let reps = [p(3, "(1 2 3)"), p(3, "(1 3)"), p(3, "(1 3)")];
        assert!(validate_tuple(&t, &s3, Some(&reps)).unwrap().ok());
        let reps = [p(3, "(1 2 3)"), p(3, "(1 2 3)"), p(3, "(1 3)")];
        assert_eq!(validate_tuple(&t, &s3, Some(&reps)).unwrap().class_membership, Some(false));
    }

    #[test]
    fn braids() {
        let (a, b, c) = (p(4, "(1 2)"), p(4, "(2 3)"), p(4, "(3 4)"));
        let t = vec![a.clone(), b.clone(), c.clone()];
        assert_eq!(braid_act(&t, 1).unwrap(), vec![a.mul(&b).mul(&a.inv()), a.clone(), c]);
        for i in [1, 2, -1, -2] {
            assert_eq!(braid_act(&braid_act(&t, i).unwrap(), -i).unwrap(), t);
        }
        assert!(braid_act(&t, 3).is_err());
        assert!(braid_act(&t, 0).is_err());
    }

    #[test]
    fn genus() {
        let sigma = p(5, "(1 2 3 4 5)");
        assert_eq!(rh_genus(&[sigma.clone(), sigma.inv()]).unwrap(), 0);
        assert!(rh_genus(&[p(4, "(1 2)"), p(4, "(1 2)")]).is_err());
    }
}
