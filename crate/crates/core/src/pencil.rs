//! Error sums of the pencil `y² = f(x) + λ` over `F_p` and their relation to
//! the off-diagonal points of `f(x) = f(y)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::grouptheory::{fiber_tensor, stable_orbit_count, MonodromyData, PairDomain};
use crate::projmap::Poly;

/// Largest `p` accepted by [`pencil_scan`].
pub const PENCIL_CAP: u64 = 499;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PencilReport {
    pub p: u64,
    /// coefficients, constant term first
    pub f: Vec<u64>,
    /// `E_λ` for `λ = 0, …, p − 1`
    pub errors: Vec<i64>,
    pub w: i64,
    pub n_f: u64,
    pub identity_ok: bool,
    pub k_f_estimate: u64,
    /// `|N_f − k_f·p|`
    pub deviation: u64,
}

pub fn pencil_scan(f: &Poly) -> Result<PencilReport> {
    pencil_scan_with(f, Exec::default())
}

pub fn pencil_scan_with(f: &Poly, exec: Exec) -> Result<PencilReport> {
    let field = f.ctx();
    let p = field.characteristic();
    if p == 2 {
        return Err(Error::invalid("pencil sums need odd characteristic"));
    }
    if field.degree() != 1 {
        return Err(Error::Unsupported("pencil sums are computed over prime fields".into()));
    }
    if p > PENCIL_CAP {
        return Err(Error::cap("pencil prime", p as u128, PENCIL_CAP as u128));
    }
    if f.degree().unwrap_or(0) < 1 {
        return Err(Error::invalid("f must have degree at least 1"));
    }
    let values: Vec<_> = (0..p).map(|x| f.eval(field.from_u64(x))).collect();
    // |{y : y² = c}| = 1 + χ(c)
    let errors = exec.map_range(p, |lambda| {
        let l = field.from_u64(lambda);
        values.iter().map(|&v| field.quadratic_character(field.add(v, l)) as i64).sum::<i64>()
    });
    let w: i64 = errors.iter().map(|e| e * e).sum();
    let mut by_value = vec![0u64; p as usize];
    for &v in &values {
        by_value[field.index(v) as usize] += 1;
    }
    let n_f: u64 = by_value.iter().map(|&c| c * c.saturating_sub(1)).sum();
    let identity_ok = w == (p * n_f) as i64;
    if !identity_ok {
        return Err(Error::Invariant(format!("W = {w} but p·N_f = {}", p * n_f)));
    }
    let k_f_estimate = (n_f + p / 2) / p;
    Ok(PencilReport {
        p,
        f: f.coeffs().iter().map(|&c| field.index(c)).collect(),
        errors,
        w,
        n_f,
        identity_ok,
        k_f_estimate,
        deviation: n_f.abs_diff(k_f_estimate * p),
    })
}

/// `(deg f)²(2√p + 1)`.
pub fn weil_envelope(deg: usize, p: u64) -> f64 {
    (deg * deg) as f64 * (2.0 * (p as f64).sqrt() + 1.0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KfCheck {
    pub p: u64,
    pub n_f: u64,
    pub k_f_estimate: u64,
    /// off-diagonal components defined over `F_p`, from the model
    pub stable_components: usize,
    /// `|N_f − stable·p|`
    pub deviation: u64,
    pub bound: f64,
    pub pass: bool,
}

/// Compare the point count of `f(x) = f(y)` off the diagonal with the number
/// of `F_p`-stable off-diagonal orbits of the model's monodromy.
pub fn kf_cross_check(f: &Poly, model: &MonodromyData) -> Result<KfCheck> {
    let deg = f.degree().unwrap_or(0);
    if model.degree1() != deg {
        return Err(Error::invalid(format!("model has degree {} but f has degree {deg}", model.degree1())));
    }
    let report = pencil_scan(f)?;
    let gens = fiber_tensor(model.geom().gens(), model.geom().gens())?;
    let tau = fiber_tensor(&[model.tau().clone()], &[model.tau().clone()])?.remove(0);
    let stable_components = stable_orbit_count(&gens, &tau, PairDomain::OffDiagonal)?;
    let deviation = report.n_f.abs_diff(stable_components as u64 * report.p);
    let bound = weil_envelope(deg, report.p);
    Ok(KfCheck {
        p: report.p,
        n_f: report.n_f,
        k_f_estimate: report.k_f_estimate,
        stable_components,
        deviation,
        bound,
        pass: deviation as f64 <= bound,
    })
}
