//! Empirical exceptionality: exhaustive evaluation of rational maps on
//! `P¹(F_{q^t})`.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::frobset::{fit_from_samples, FrobeniusSet};
use crate::gf::{FieldCtx, Tower, DEFAULT_CAP};
use crate::projmap::{Evaluator, RationalMap};

/// Default largest modulus tried by fits.
pub const DEFAULT_D_MAX: u64 = 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberCount {
    /// number of preimages
    pub size: u64,
    /// number of points of `P¹(F_{q^t})` with that many preimages
    pub values: u64,
}

/// Per-`t` scan record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRecord {
    pub t: u32,
    pub points: u64,
    pub bijective: bool,
    pub surjective: bool,
    pub image_size: u64,
    pub fibers: Vec<FiberCount>,
    /// lcm of cycle lengths, present iff bijective
    pub period: Option<u128>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FitStatus {
    Fitted,
    NoFit,
    NotAttempted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub map: String,
    pub field: String,
    pub t_max: u32,
    /// largest `t` scanned (scans stop at the field cap)
    pub t_reached: u32,
    pub stopped_at_cap: bool,
    pub records: Vec<ScanRecord>,
    /// modulus bound actually used: `min(d_max, t_reached / 2)`
    pub d_max: u64,
    pub fit_status: FitStatus,
    pub fitted: Option<FrobeniusSet>,
}

/// Scans maps defined over one base field `F_q`.
pub struct Scanner {
    tower: Tower,
    exec: Exec,
}

impl Scanner {
    pub fn new(base: Arc<FieldCtx>) -> Scanner {
        Scanner::with_cap(base, DEFAULT_CAP)
    }

    pub fn with_cap(base: Arc<FieldCtx>, cap: u64) -> Scanner {
        Scanner { tower: Tower::new(base, cap), exec: Exec::default() }
    }

    pub fn with_exec(mut self, exec: Exec) -> Scanner {
        self.exec = exec;
        self
    }

    pub fn base(&self) -> &Arc<FieldCtx> {
        self.tower.base()
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    fn evaluator(&self, f: &RationalMap, t: u32) -> Result<Evaluator> {
        if **f.ctx() != **self.base() {
            return Err(Error::FieldMismatch(format!(
                "map over {:?}, scanner over {:?}",
                f.ctx(),
                self.base()
            )));
        }
        let field = self.tower.level(t)?;
        if field.order() >= u32::MAX as u64 {
            return Err(Error::Unsupported("scan fields need fewer than 2^32 points".into()));
        }
        f.evaluator(&field)
    }

    /// Whether `f` permutes `P¹(F_{q^t})`. Stops at the first collision.
    pub fn is_bijective_on(&self, f: &RationalMap, t: u32) -> Result<bool> {
        let ev = self.evaluator(f, t)?;
        let n = ev.points();
        Ok(self.exec.all_distinct(n, n, |k| ev.image_key(k)))
    }

    /// Image of every point, indexed and valued by dense keys.
    pub fn images(&self, f: &RationalMap, t: u32) -> Result<Vec<u32>> {
        let ev = self.evaluator(f, t)?;
        Ok(self.exec.map_range(ev.points(), |k| ev.image_key(k) as u32))
    }

    fn fiber_sizes(&self, f: &RationalMap, t: u32) -> Result<Vec<u32>> {
        let images = self.images(f, t)?;
        let mut counts = vec![0u32; images.len()];
        for &y in &images {
            counts[y as usize] += 1;
        }
        Ok(counts)
    }

    /// Whether the images of all maps together cover `P¹(F_{q^t})`.
    pub fn surjective_union(&self, fs: &[RationalMap], t: u32) -> Result<bool> {
        if fs.is_empty() {
            return Err(Error::invalid("empty list of maps"));
        }
        let mut hit: Option<Vec<bool>> = None;
        for f in fs {
            let images = self.images(f, t)?;
            let h = hit.get_or_insert_with(|| vec![false; images.len()]);
            for &y in &images {
                h[y as usize] = true;
            }
        }
        Ok(hit.is_some_and(|h| h.iter().all(|&b| b)))
    }

    /// Equal image sets on `P¹(F_{q^t})`.
    pub fn dp_range_test(&self, f: &RationalMap, g: &RationalMap, t: u32) -> Result<bool> {
        let a = self.fiber_sizes(f, t)?;
        let b = self.fiber_sizes(g, t)?;
        Ok(a.iter().zip(&b).all(|(&x, &y)| (x > 0) == (y > 0)))
    }

    /// Equal fiber cardinalities over every point of `P¹(F_{q^t})`.
    pub fn idp_multiset_test(&self, f: &RationalMap, g: &RationalMap, t: u32) -> Result<bool> {
        Ok(self.fiber_sizes(f, t)? == self.fiber_sizes(g, t)?)
    }

    pub fn record(&self, f: &RationalMap, t: u32) -> Result<ScanRecord> {
        let images = self.images(f, t)?;
        let n = images.len();
        let mut counts = vec![0u32; n];
        for &y in &images {
            counts[y as usize] += 1;
        }
        let mut hist = std::collections::BTreeMap::new();
        for &c in &counts {
            *hist.entry(c as u64).or_insert(0u64) += 1;
        }
        let image_size = counts.iter().filter(|&&c| c > 0).count() as u64;
        let bijective = image_size == n as u64;
        let period = if bijective { Some(cycle_lcm(&images)?) } else { None };
        Ok(ScanRecord {
            t,
            points: n as u64,
            bijective,
            surjective: bijective,
            image_size,
            fibers: hist.into_iter().map(|(size, values)| FiberCount { size, values }).collect(),
            period,
        })
    }

    /// Bijectivity for `t = 1..` until `t_max` or the cap.
    pub fn bijectivity_samples(&self, f: &RationalMap, t_max: u32) -> Result<Vec<bool>> {
        let reach = self.tower.max_level(t_max);
        (1..=reach).map(|t| self.is_bijective_on(f, t)).collect()
    }

    pub fn exceptionality_scan(&self, f: &RationalMap, t_max: u32, d_max: u64) -> Result<ScanReport> {
        let reach = self.tower.max_level(t_max);
        if reach == 0 {
            return Err(Error::cap("field order", self.base().order() as u128, self.tower.cap() as u128));
        }
        let records = (1..=reach).map(|t| self.record(f, t)).collect::<Result<Vec<_>>>()?;
        let samples: Vec<bool> = records.iter().map(|r| r.bijective).collect();
        let d_eff = d_max.min(reach as u64 / 2);
        let (fit_status, fitted) = if d_eff == 0 {
            (FitStatus::NotAttempted, None)
        } else {
            match fit_from_samples(&samples, d_eff)? {
                Some(s) => (FitStatus::Fitted, Some(s)),
                None => (FitStatus::NoFit, None),
            }
        };
        Ok(ScanReport {
            map: f.spec(),
            field: self.base().spec(),
            t_max,
            t_reached: reach,
            stopped_at_cap: reach < t_max,
            records,
            d_max: d_eff,
            fit_status,
            fitted,
        })
    }

    /// `(t, m_t)` for every bijective `t ≤ t_max` under the cap.
    pub fn period_series(&self, f: &RationalMap, t_max: u32) -> Result<Vec<(u32, u128)>> {
        let reach = self.tower.max_level(t_max);
        let mut out = Vec::new();
        for t in 1..=reach {
            let images = self.images(f, t)?;
            if is_permutation(&images) {
                out.push((t, cycle_lcm(&images)?));
            }
        }
        Ok(out)
    }
}

fn is_permutation(images: &[u32]) -> bool {
    let mut seen = vec![false; images.len()];
    for &y in images {
        if std::mem::replace(&mut seen[y as usize], true) {
            return false;
        }
    }
    true
}

/// lcm of the cycle lengths of a permutation given by images.
pub fn cycle_lcm(perm: &[u32]) -> Result<u128> {
    let mut seen = vec![false; perm.len()];
    let mut lengths = std::collections::BTreeSet::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0u64;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i] as usize;
            len += 1;
        }
        lengths.insert(len);
    }
    let mut acc: u128 = 1;
    for l in lengths {
        let l = l as u128;
        let g = gcd128(acc, l);
        acc = (acc / g)
            .checked_mul(l)
            .ok_or_else(|| Error::Invariant("period overflows 128 bits".into()))?;
    }
    Ok(acc)
}

fn gcd128(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd128(b, a % b)
    }
}

/// [`Scanner::is_bijective_on`] over the map's own field, default cap.
pub fn is_bijective_on(f: &RationalMap, t: u32) -> Result<bool> {
    Scanner::new(f.ctx().clone()).is_bijective_on(f, t)
}

pub fn surjective_union(fs: &[RationalMap], t: u32) -> Result<bool> {
    let first = fs.first().ok_or_else(|| Error::invalid("empty list of maps"))?;
    Scanner::new(first.ctx().clone()).surjective_union(fs, t)
}

pub fn exceptionality_scan(f: &RationalMap, t_max: u32) -> Result<ScanReport> {
    Scanner::new(f.ctx().clone()).exceptionality_scan(f, t_max, DEFAULT_D_MAX)
}

pub fn dp_range_test(f: &RationalMap, g: &RationalMap, t: u32) -> Result<bool> {
    Scanner::new(f.ctx().clone()).dp_range_test(f, g, t)
}

pub fn idp_multiset_test(f: &RationalMap, g: &RationalMap, t: u32) -> Result<bool> {
    Scanner::new(f.ctx().clone()).idp_multiset_test(f, g, t)
}

pub fn period_series(f: &RationalMap, t_max: u32) -> Result<Vec<(u32, u128)>> {
    Scanner::new(f.ctx().clone()).period_series(f, t_max)
}
