//! Materialized permutation groups.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use super::perm::Perm;
use crate::error::{Error, Result};

/// Default bound on materialized group orders.
pub const GROUP_CAP: usize = 1_000_000;

#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    gens: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
}

impl std::fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PermGroup(degree {}, order {}, gens {:?})", self.degree, self.order(), self.gens)
    }
}

impl PermGroup {
    pub fn generate(degree: usize, gens: &[Perm]) -> Result<PermGroup> {
        PermGroup::generate_capped(degree, gens, GROUP_CAP)
    }

    /// Breadth-first closure of `gens`; element 0 is the identity.
    pub fn generate_capped(degree: usize, gens: &[Perm], cap: usize) -> Result<PermGroup> {
        if let Some(g) = gens.iter().find(|g| g.degree() != degree) {
            return Err(Error::invalid(format!("generator {g} has degree {}, expected {degree}", g.degree())));
        }
        let id = Perm::identity(degree);
        let mut elements = vec![id.clone()];
        let mut index = HashMap::from([(id, 0usize)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(k) = queue.pop_front() {
            for g in gens {
                let h = elements[k].mul(g);
                if !index.contains_key(&h) {
                    if elements.len() >= cap {
                        return Err(Error::cap("group order", elements.len() as u128 + 1, cap as u128));
                    }
                    index.insert(h.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(h);
                }
            }
        }
        Ok(PermGroup { degree, gens: gens.to_vec(), elements, index })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn gens(&self) -> &[Perm] {
        &self.gens
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn contains(&self, g: &Perm) -> bool {
        self.index.contains_key(g)
    }

    /// Position of `g` in [`PermGroup::elements`].
    pub fn position(&self, g: &Perm) -> Option<usize> {
        self.index.get(g).copied()
    }

    /// Orbits of the generators on `{0, …, n−1}`, each sorted, ordered by
    /// least point.
    pub fn orbits(&self) -> Vec<Vec<u32>> {
        orbits(self.degree, &self.gens)
    }

    pub fn is_transitive(&self) -> bool {
        self.degree <= 1 || self.orbits().len() == 1
    }

    pub fn stabilizer(&self, point: u32) -> Vec<&Perm> {
        self.elements.iter().filter(|g| g.apply(point) == point).collect()
    }
}

/// Orbits of the group generated by `gens`.
pub fn orbits(degree: usize, gens: &[Perm]) -> Vec<Vec<u32>> {
    let mut seen = vec![false; degree];
    let mut out = Vec::new();
    for start in 0..degree {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orbit = vec![start as u32];
        let mut k = 0;
        while k < orbit.len() {
            let i = orbit[k];
            for g in gens {
                let j = g.apply(i);
                if !seen[j as usize] {
                    seen[j as usize] = true;
                    orbit.push(j);
                }
            }
            k += 1;
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepAnalysis {
    pub degree: usize,
    pub order: usize,
    pub transitive: bool,
    pub primitive: bool,
    pub doubly_transitive: bool,
    /// centralizer in `S_n` is trivial
    pub self_normalizing: bool,
}

fn find(parent: &mut [u32], mut i: u32) -> u32 {
    while parent[i as usize] != i {
        parent[i as usize] = parent[parent[i as usize] as usize];
        i = parent[i as usize];
    }
    i
}

/// Size of the smallest block containing `0` and `j`.
fn minimal_block(degree: usize, gens: &[Perm], j: u32) -> usize {
    let mut parent: Vec<u32> = (0..degree as u32).collect();
    let mut queue = vec![(0u32, j)];
    parent[j as usize] = 0;
    while let Some((a, b)) = queue.pop() {
        for g in gens {
            let (x, y) = (find(&mut parent, g.apply(a)), find(&mut parent, g.apply(b)));
            if x != y {
                parent[y as usize] = x;
                queue.push((x, y));
            }
        }
    }
    let root = find(&mut parent, 0);
    (0..degree as u32).filter(|&i| find(&mut parent, i) == root).count()
}

pub fn analyze_rep(group: &PermGroup) -> RepAnalysis {
    let n = group.degree();
    let gens = group.gens();
    let transitive = group.is_transitive();
    let primitive = transitive && (1..n as u32).all(|j| minimal_block(n, gens, j) == n);
    let doubly_transitive = transitive && n >= 2 && {
        let pair_gens: Vec<Perm> = gens.iter().map(pair_action).collect();
        let diag_free = orbits(n * n, &pair_gens).into_iter().filter(|o| {
            let k = o[0] as usize;
            k / n != k % n
        });
        diag_free.count() == 1
    };
    RepAnalysis {
        degree: n,
        order: group.order(),
        transitive,
        primitive,
        doubly_transitive,
        self_normalizing: trivial_centralizer(group),
    }
}

/// Action on ordered pairs, `(a, b) ↦ a·n + b`.
pub fn pair_action(g: &Perm) -> Perm {
    let n = g.degree() as u32;
    let images = (0..n * n).map(|k| g.apply(k / n) * n + g.apply(k % n)).collect();
    Perm::from_images(images).expect("pair action of a permutation")
}

/// The centralizer of a permutation group is trivial iff each orbit has a
/// trivial centralizer (point stabilizers fix nothing else in the orbit) and
/// no two orbits are isomorphic (no two points have equal stabilizers).
fn trivial_centralizer(group: &PermGroup) -> bool {
    let orbs = group.orbits();
    let stab_of = |x: u32| -> Vec<usize> {
        group.elements().iter().enumerate().filter(|(_, g)| g.apply(x) == x).map(|(k, _)| k).collect()
    };
    let mut reps: Vec<Vec<usize>> = Vec::new();
    for orbit in &orbs {
        let x = orbit[0];
        let stab = stab_of(x);
        let fixed_in_orbit =
            orbit.iter().filter(|&&y| stab.iter().all(|&k| group.elements()[k].apply(y) == y)).count();
        if fixed_in_orbit > 1 {
            return false;
        }
        reps.push(stab);
    }
    for (a, orbit_a) in orbs.iter().enumerate() {
        let stab = &reps[a];
        for orbit_b in orbs.iter().skip(a + 1) {
            if orbit_b.len() == orbit_a.len() && orbit_b.iter().any(|&y| stab_of(y) == *stab) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(n: usize, gens: &[&str]) -> PermGroup {
        let gens: Vec<Perm> = gens.iter().map(|s| Perm::parse(s, Some(n)).unwrap()).collect();
        PermGroup::generate(n, &gens).unwrap()
    }

    #[test]
    fn orders() {
        assert_eq!(group(5, &["(1 2 3 4 5)"]).order(), 5);
        assert_eq!(group(5, &["(1 2 3 4 5)", "(2 5)(3 4)"]).order(), 10);
        assert_eq!(group(6, &["(1 2)", "(1 2 3 4 5 6)"]).order(), 720);
        assert!(matches!(
            PermGroup::generate_capped(6, &group(6, &["(1 2)", "(1 2 3 4 5 6)"]).gens, 100),
            Err(Error::Cap { .. })
        ));
    }

    #[test]
    fn analysis() {
        let d5 = analyze_rep(&group(5, &["(1 2 3 4 5)", "(2 5)(3 4)"]));
        assert!(d5.transitive && d5.primitive && !d5.doubly_transitive && d5.self_normalizing);
        let z4 = analyze_rep(&group(4, &["(1 2 3 4)"]));
        assert!(z4.transitive && !z4.primitive && !z4.self_normalizing);
        let s4 = analyze_rep(&group(4, &["(1 2)", "(1 2 3 4)"]));
        assert!(s4.primitive && s4.doubly_transitive && s4.self_normalizing);
        // regular Z/3 centralizes itself; two fixed points can be swapped
        assert!(!analyze_rep(&group(3, &["(1 2 3)"])).self_normalizing);
        assert!(!analyze_rep(&group(2, &["()"])).self_normalizing);
        assert!(analyze_rep(&group(1, &["()"])).self_normalizing);
    }
}
