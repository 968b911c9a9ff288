//! Rational unions of conjugacy classes and cyclic difference sets.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frobset::gcd;
use crate::grouptheory::{Perm, PermGroup};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalUnion {
    pub pass: bool,
    /// exponent modulo which `k` is taken
    pub exponent: u64,
    /// every `k` with no matching conjugator
    pub failing: Vec<u64>,
}

/// Conjugacy class index of every element of `group`.
fn class_ids(group: &PermGroup) -> Vec<usize> {
    let elems = group.elements();
    let mut id = vec![usize::MAX; elems.len()];
    let mut next = 0;
    for start in 0..elems.len() {
        if id[start] != usize::MAX {
            continue;
        }
        id[start] = next;
        let mut stack = vec![start];
        while let Some(k) = stack.pop() {
            for s in group.gens() {
                let j = index_of(group, &elems[k].conj(s));
                if id[j] == usize::MAX {
                    id[j] = next;
                    stack.push(j);
                }
            }
        }
        next += 1;
    }
    id
}

fn index_of(group: &PermGroup, g: &Perm) -> usize {
    group.position(g).expect("element of the group")
}

/// For each `k` prime to the orders of the class representatives, whether
/// some `h ∈ normalizer` maps the classes onto their `k`-th powers up to
/// reordering. `normalizer` must contain `group` and normalize it.
pub fn rational_union_check(classes: &[Perm], group: &PermGroup, normalizer: &PermGroup) -> Result<RationalUnion> {
    if classes.is_empty() {
        return Err(Error::invalid("no classes given"));
    }
    for c in classes {
        if !group.contains(c) {
            return Err(Error::invalid(format!("{c} is not in the group")));
        }
    }
    for h in normalizer.gens() {
        if group.gens().iter().any(|g| !group.contains(&g.conj(h))) {
            return Err(Error::invalid(format!("{h} does not normalize the group")));
        }
    }
    let ids = class_ids(group);
    let lookup: std::collections::HashMap<&Perm, usize> =
        group.elements().iter().enumerate().map(|(k, g)| (g, ids[k])).collect();
    let class_of = |g: &Perm| lookup[g];
    let exponent = classes.iter().fold(1u64, |e, c| {
        let o = c.order();
        e / gcd(e, o) * o
    });
    let mut conjugated: BTreeSet<Vec<usize>> = BTreeSet::new();
    for h in normalizer.elements() {
        let mut v: Vec<usize> = classes.iter().map(|c| class_of(&c.conj(h))).collect();
        v.sort_unstable();
        conjugated.insert(v);
    }
    let failing: Vec<u64> = (1..=exponent)
        .filter(|&k| gcd(k, exponent) == 1)
        .filter(|&k| {
            let mut powered: Vec<usize> = classes.iter().map(|c| class_of(&c.pow(k as i64))).collect();
            powered.sort_unstable();
            !conjugated.contains(&powered)
        })
        .collect();
    Ok(RationalUnion { pass: failing.is_empty(), exponent, failing })
}

/// All `k`-subsets of `Z/n` whose nonzero differences cover every nonzero
/// residue exactly `λ` times, one sorted representative (the least
/// translate) per translation class.
pub fn difference_sets(n: u64, k: u64, lambda: u64) -> Result<Vec<Vec<u64>>> {
    if n == 0 || k == 0 || k > n || n > 64 {
        return Err(Error::invalid(format!("need 1 ≤ k ≤ n ≤ 64, got n = {n}, k = {k}")));
    }
    let mut found = BTreeSet::new();
    // every translation class has a member containing 0
    let mut subset = vec![0u64];
    extend(n, k, lambda, &mut subset, &mut found);
    Ok(found.into_iter().collect())
}

fn extend(n: u64, k: u64, lambda: u64, subset: &mut Vec<u64>, found: &mut BTreeSet<Vec<u64>>) {
    if subset.len() as u64 == k {
        let mut counts = vec![0u64; n as usize];
        for &a in subset.iter() {
            for &b in subset.iter() {
                if a != b {
                    counts[((a + n - b) % n) as usize] += 1;
                }
            }
        }
        if counts[1..].iter().all(|&c| c == lambda) {
            found.insert(least_translate(n, subset));
        }
        return;
    }
    let from = subset.last().map_or(0, |&x| x + 1);
    for x in from..n {
        subset.push(x);
        extend(n, k, lambda, subset, found);
        subset.pop();
    }
}

fn least_translate(n: u64, set: &[u64]) -> Vec<u64> {
    (0..n)
        .map(|s| {
            let mut v: Vec<u64> = set.iter().map(|&x| (x + s) % n).collect();
            v.sort_unstable();
            v
        })
        .min()
        .expect("n ≥ 1")
}
