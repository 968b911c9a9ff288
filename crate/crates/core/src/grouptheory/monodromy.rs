//! Geometric monodromy with a Frobenius element, and the coset tests built on
//! it.

use serde::{Deserialize, Serialize};

use super::group::{orbits, PermGroup};
use super::perm::{parse_perms, Perm};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::frobset::FrobeniusSet;

/// `G` together with `τ` normalizing it. With a second action the
/// permutations live on `n₁ + n₂` points, `T₁` on the first `n₁`.
#[derive(Clone, Debug)]
pub struct MonodromyData {
    geom: PermGroup,
    tau: Perm,
    d: u64,
    split: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exceptional,
    PrExceptional,
}

/// JSON form: `{"geomGens": [...], "tau": "...", "d": 4, "action2": {...}}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MonodromySpec {
    pub geom_gens: Vec<String>,
    pub tau: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action2: Option<SecondAction>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SecondAction {
    pub geom_gens: Vec<String>,
    pub tau: String,
}

fn order_mod(tau: &Perm, geom: &PermGroup) -> u64 {
    let mut d = 1u64;
    let mut power = tau.clone();
    while !geom.contains(&power) {
        power = power.mul(tau);
        d += 1;
    }
    d
}

fn disjoint_sum(a: &Perm, b: &Perm) -> Perm {
    let n1 = a.degree() as u32;
    let images = a.images().iter().copied().chain(b.images().iter().map(|&j| j + n1)).collect();
    Perm::from_images(images).expect("disjoint sum")
}

impl MonodromyData {
    pub fn new(gens: Vec<Perm>, tau: Perm) -> Result<MonodromyData> {
        let n = tau.degree();
        let geom = PermGroup::generate(n, &gens)?;
        for g in &gens {
            if !geom.contains(&g.conj(&tau)) {
                return Err(Error::invalid(format!("τ = {tau} does not normalize the geometric group")));
            }
        }
        let d = order_mod(&tau, &geom);
        Ok(MonodromyData { geom, tau, d, split: n })
    }

    /// Adds `T₂` by parallel images of the same generators and of `τ`.
    pub fn with_second_action(gens1: Vec<Perm>, tau1: Perm, gens2: Vec<Perm>, tau2: Perm) -> Result<MonodromyData> {
        if gens1.len() != gens2.len() {
            return Err(Error::invalid("parallel generator lists differ in length"));
        }
        let n1 = tau1.degree();
        let first = MonodromyData::new(gens1.clone(), tau1.clone())?;
        let arith1 = PermGroup::generate(n1, &[gens1.clone(), vec![tau1.clone()]].concat())?;
        let gens: Vec<Perm> = gens1.iter().zip(&gens2).map(|(a, b)| disjoint_sum(a, b)).collect();
        let tau = disjoint_sum(&tau1, &tau2);
        let both = MonodromyData::new(gens.clone(), tau.clone())?;
        let arith = PermGroup::generate(tau.degree(), &[gens, vec![tau]].concat())?;
        if both.geom.order() != first.geom.order() || arith.order() != arith1.order() {
            return Err(Error::invalid("second action is not a function of the first (inconsistent parallel images)"));
        }
        Ok(MonodromyData { split: n1, ..both })
    }

    pub fn from_spec(spec: &MonodromySpec) -> Result<MonodromyData> {
        let all: Vec<&String> = spec.geom_gens.iter().chain([&spec.tau]).collect();
        let mut perms = parse_perms(&all, None)?;
        let tau = perms.pop().expect("tau present");
        let m = match &spec.action2 {
            None => MonodromyData::new(perms, tau)?,
            Some(second) => {
                let all2: Vec<&String> = second.geom_gens.iter().chain([&second.tau]).collect();
                let mut perms2 = parse_perms(&all2, None)?;
                let tau2 = perms2.pop().expect("tau present");
                MonodromyData::with_second_action(perms, tau, perms2, tau2)?
            }
        };
        if let Some(d) = spec.d {
            if d != m.d {
                return Err(Error::invalid(format!("declared d = {d}, but τ has order {} modulo G", m.d)));
            }
        }
        Ok(m)
    }

    pub fn geom(&self) -> &PermGroup {
        &self.geom
    }

    pub fn tau(&self) -> &Perm {
        &self.tau
    }

    /// Order of `τ` modulo `G`.
    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn degree1(&self) -> usize {
        self.split
    }

    pub fn has_second_action(&self) -> bool {
        self.split < self.tau.degree()
    }

    /// Elements of `G·τ^t`.
    pub fn coset(&self, t: u64) -> Vec<Perm> {
        let shift = self.tau.pow((t % self.d) as i64);
        self.geom.elements().iter().map(|g| g.mul(&shift)).collect()
    }

    /// Fixed points of `g` in `T₁` and `T₂`.
    fn traces(&self, g: &Perm) -> (usize, usize) {
        let fixed = |range: std::ops::Range<usize>| range.filter(|&i| g.apply(i as u32) == i as u32).count();
        (fixed(0..self.split), fixed(self.split..g.degree()))
    }

    fn residues_where(&self, pass: impl Fn(&Perm) -> bool + Sync) -> Result<FrobeniusSet> {
        let passing = Exec::default().map_range(self.d, |t| self.coset(t).iter().all(&pass));
        let residues = passing.iter().enumerate().filter(|(_, &ok)| ok).map(|(t, _)| t as u64);
        FrobeniusSet::from_exact(self.d, residues)
    }

    fn require_second(&self) -> Result<()> {
        if self.has_second_action() {
            Ok(())
        } else {
            Err(Error::invalid("trace tests need a second action"))
        }
    }
}

/// Residues `t mod d` whose coset `G·τ^t` has exactly one (exceptional) or
/// at least one (pr-exceptional) fixed point per element, on `T₁`.
pub fn coset_exceptionality(m: &MonodromyData, mode: Mode) -> Result<FrobeniusSet> {
    m.residues_where(|g| {
        let f = m.traces(g).0;
        match mode {
            Mode::Exceptional => f == 1,
            Mode::PrExceptional => f >= 1,
        }
    })
}

/// Residues where `fix(T₁(g)) > 0 ⇔ fix(T₂(g)) > 0` on the whole coset.
pub fn davenport_trace_test(m: &MonodromyData) -> Result<FrobeniusSet> {
    m.require_second()?;
    m.residues_where(|g| {
        let (a, b) = m.traces(g);
        (a > 0) == (b > 0)
    })
}

/// Residues where `fix(T₁(g)) = fix(T₂(g))` on the whole coset.
pub fn idp_trace_test(m: &MonodromyData) -> Result<FrobeniusSet> {
    m.require_second()?;
    m.residues_where(|g| {
        let (a, b) = m.traces(g);
        a == b
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SdpReport {
    /// both actions transitive on `⟨G, τ⟩` with point stabilizers inside `G`
    pub induced_from_g: bool,
    pub characters_equal_on_g: bool,
    pub characters_equal_on_ghat: bool,
    /// induced and equal on `G` implies equal on `⟨G, τ⟩`
    pub lemma_holds: bool,
    /// every residue passes the isovalence test
    pub strong: bool,
}

pub fn sdp_check(m: &MonodromyData) -> Result<SdpReport> {
    m.require_second()?;
    let idp = idp_trace_test(m)?;
    let on_g = idp.contains(m.d);
    let on_ghat = (0..m.d).all(|t| idp.contains(t));
    let n = m.tau.degree();
    let mut arith_gens = m.geom.gens().to_vec();
    arith_gens.push(m.tau.clone());
    let orbs = orbits(n, &arith_gens);
    let transitive_parts = orbs.len() == 2 && orbs[0].len() == m.split;
    let stab_in_g = (1..m.d).all(|t| {
        m.coset(t).iter().all(|g| g.apply(0) != 0 && g.apply(m.split as u32) != m.split as u32)
    });
    let induced = transitive_parts && stab_in_g;
    Ok(SdpReport {
        induced_from_g: induced,
        characters_equal_on_g: on_g,
        characters_equal_on_ghat: on_ghat,
        lemma_holds: !(induced && on_g) || on_ghat,
        strong: on_ghat,
    })
}

/// Coordinatewise action on `V₁ × V₂`, `(a, b) ↦ a·n₂ + b`.
pub fn fiber_tensor(g1: &[Perm], g2: &[Perm]) -> Result<Vec<Perm>> {
    if g1.len() != g2.len() {
        return Err(Error::invalid(format!("tuple lengths differ: {} vs {}", g1.len(), g2.len())));
    }
    let check = |gs: &[Perm]| -> Result<usize> {
        let n = gs.first().map(Perm::degree).unwrap_or(0);
        if gs.iter().any(|g| g.degree() != n) {
            return Err(Error::invalid("degree mismatch inside a tuple"));
        }
        Ok(n)
    };
    let (_, n2) = (check(g1)?, check(g2)? as u32);
    g1.iter()
        .zip(g2)
        .map(|(a, b)| {
            let n1 = a.degree() as u32;
            let images = (0..n1 * n2).map(|k| a.apply(k / n2) * n2 + b.apply(k % n2)).collect();
            Perm::from_images(images)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairDomain {
    Full,
    /// ordered pairs `(a, b)` with `a ≠ b`; needs a square degree
    OffDiagonal,
}

fn domain_orbits(gens: &[Perm], domain: PairDomain) -> Result<Vec<Vec<u32>>> {
    let n2 = gens.first().map(Perm::degree).ok_or_else(|| Error::invalid("no generators"))?;
    let all = orbits(n2, gens);
    Ok(match domain {
        PairDomain::Full => all,
        PairDomain::OffDiagonal => {
            let n = (n2 as f64).sqrt().round() as usize;
            if n * n != n2 {
                return Err(Error::invalid(format!("degree {n2} is not a square")));
            }
            all.into_iter().filter(|o| o[0] as usize / n != o[0] as usize % n).collect()
        }
    })
}

/// Orbit count of `⟨gens⟩` on the chosen domain of a product action.
pub fn component_count(gens: &[Perm], domain: PairDomain) -> Result<usize> {
    Ok(domain_orbits(gens, domain)?.len())
}

/// Number of `⟨gens⟩`-orbits mapped to themselves by `tau`: the components
/// defined over the base field.
pub fn stable_orbit_count(gens: &[Perm], tau: &Perm, domain: PairDomain) -> Result<usize> {
    let orbs = domain_orbits(gens, domain)?;
    Ok(orbs
        .iter()
        .filter(|o| {
            let img = tau.apply(o[0]);
            o.binary_search(&img).is_ok()
        })
        .count())
}

/// Off-diagonal component data of a model: `(geometric, stable, arithmetic)`.
pub fn offdiagonal_components(m: &MonodromyData) -> Result<(usize, usize, usize)> {
    let gens = fiber_tensor(m.geom.gens(), m.geom.gens())?;
    let tau = fiber_tensor(std::slice::from_ref(&m.tau), std::slice::from_ref(&m.tau))?.remove(0);
    let geometric = component_count(&gens, PairDomain::OffDiagonal)?;
    let stable = stable_orbit_count(&gens, &tau, PairDomain::OffDiagonal)?;
    let arithmetic = component_count(&[gens, vec![tau]].concat(), PairDomain::OffDiagonal)?;
    Ok((geometric, stable, arithmetic))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, s: &str) -> Perm {
        Perm::parse(s, Some(n)).unwrap()
    }

    #[test]
    fn z5_cosets() {
        let m = MonodromyData::new(vec![p(5, "(1 2 3 4 5)")], p(5, "(2 4 5 3)")).unwrap();
        assert_eq!(m.d(), 4);
        let e = coset_exceptionality(&m, Mode::Exceptional).unwrap();
        assert_eq!(e, FrobeniusSet::from_residues(4, [1, 2, 3]).unwrap());
        assert_eq!(coset_exceptionality(&m, Mode::PrExceptional).unwrap(), e);
        assert!(MonodromyData::new(vec![p(5, "(1 2 3 4 5)")], p(5, "(1 2)")).is_err());
    }

    #[test]
    fn z4_regular_vs_quotient() {
        let g1 = p(4, "(1 2 3 4)");
        let g2 = Perm::parse("(1 2)", Some(2)).unwrap();
        let m = MonodromyData::with_second_action(vec![g1.clone()], Perm::identity(4), vec![g2], Perm::identity(2))
            .unwrap();
        assert_eq!(m.d(), 1);
        assert!(davenport_trace_test(&m).unwrap().is_empty());
        let bad = MonodromyData::with_second_action(
            vec![g1],
            Perm::identity(4),
            vec![Perm::parse("(1 2 3)", Some(3)).unwrap()],
            Perm::identity(3),
        );
        assert!(bad.is_err());
    }

    #[test]
    fn components() {
        let sigma = p(5, "(1 2 3 4 5)");
        let gens = fiber_tensor(&[sigma.clone()], &[sigma]).unwrap();
        assert_eq!(component_count(&gens, PairDomain::OffDiagonal).unwrap(), 4);
        assert_eq!(component_count(&gens, PairDomain::Full).unwrap(), 5);
        assert!(fiber_tensor(&[p(2, "(1 2)")], &[]).is_err());
    }
}
