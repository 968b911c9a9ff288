//! Elliptic curves over `Q` and `F_ℓ`, Lattès maps `x(P) ↦ x([m]P)`, and the
//! exceptionality scans built on them.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::except::Scanner;
use crate::gf::{is_prime, make_field, FieldCtx, FieldElem, Tower};
use crate::projmap::{Poly, RationalMap};

/// Largest `m²` accepted by [`lattes_map`].
pub const LATTES_DEGREE_CAP: u64 = 1 << 12;

/// Largest field enumerated by point-count cross-checks.
pub const COUNT_CAP: u64 = 1 << 20;

/// A reduced fraction with positive denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Rational {
    pub num: i128,
    pub den: i128,
}

impl Rational {
    pub fn new(num: i128, den: i128) -> Result<Rational> {
        if den == 0 {
            return Err(Error::invalid("zero denominator"));
        }
        let g = gcd_i(num, den).max(1);
        let s = if den < 0 { -1 } else { 1 };
        Ok(Rational { num: s * num / g, den: s * den / g })
    }
}

fn gcd_i(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `y² + a₁xy + a₃y = x³ + a₂x² + a₄x + a₆` over `Q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EllipticCurveQ {
    pub a: [i64; 5],
    pub b2: i128,
    pub b4: i128,
    pub b6: i128,
    pub b8: i128,
    pub c4: i128,
    pub c6: i128,
    pub discriminant: i128,
    pub j: Rational,
}

impl EllipticCurveQ {
    pub fn new(a: [i64; 5]) -> Result<EllipticCurveQ> {
        let [a1, a2, a3, a4, a6] = a.map(i128::from);
        let b2 = a1 * a1 + 4 * a2;
        let b4 = 2 * a4 + a1 * a3;
        let b6 = a3 * a3 + 4 * a6;
        let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        let c4 = b2 * b2 - 24 * b4;
        let c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6;
        let discriminant = -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
        if discriminant == 0 {
            return Err(Error::invalid("singular curve"));
        }
        if 1728 * discriminant != c4 * c4 * c4 - c6 * c6 {
            return Err(Error::Invariant("1728Δ ≠ c4³ − c6²".into()));
        }
        let j = Rational::new(c4 * c4 * c4, discriminant)?;
        Ok(EllipticCurveQ { a, b2, b4, b6, b8, c4, c6, discriminant, j })
    }

    /// Parse `[a1,a2,a3,a4,a6]`.
    pub fn parse(spec: &str) -> Result<EllipticCurveQ> {
        let t = spec.trim();
        if t == "ogg" {
            return ogg_curve();
        }
        let body = t
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| Error::Parse { line: 1, col: 1, msg: "expected [a1,a2,a3,a4,a6]".into() })?;
        let parts: Vec<i64> = body
            .split(',')
            .map(|x| {
                x.trim().parse().map_err(|_| Error::Parse { line: 1, col: 1, msg: format!("bad coefficient {x:?}") })
            })
            .collect::<Result<_>>()?;
        let a: [i64; 5] = parts.try_into().map_err(|_| Error::invalid("need five coefficients"))?;
        EllipticCurveQ::new(a)
    }

    pub fn has_good_reduction(&self, l: u64) -> bool {
        self.discriminant.rem_euclid(l as i128) != 0
    }

    /// Short Weierstrass model `y² = x³ + Ax + B` over `F_ℓ`, `ℓ > 3`, with
    /// `A = −c₄/48`, `B = −c₆/864`.
    pub fn reduce(&self, l: u64) -> Result<EllipticCurveFq> {
        if l <= 3 || !is_prime(l) {
            return Err(Error::invalid(format!("reduction needs a prime ℓ > 3, got {l}")));
        }
        if !self.has_good_reduction(l) {
            return Err(Error::invalid(format!("bad reduction at {l}")));
        }
        let f = make_field(l, 1)?;
        let c4 = f.from_i64(self.c4.rem_euclid(l as i128) as i64);
        let c6 = f.from_i64(self.c6.rem_euclid(l as i128) as i64);
        let a = f.neg(f.div(c4, f.from_u64(48)).expect("ℓ > 3"));
        let b = f.neg(f.div(c6, f.from_u64(864)).expect("ℓ > 3"));
        EllipticCurveFq::new(f, a, b)
    }
}

/// The conductor-24 curve `y² + x³ + x² + x = 0`, as `Y² = X³ − X² + X` with
/// `X = −x`.
pub fn ogg_curve() -> Result<EllipticCurveQ> {
    let e = EllipticCurveQ::new([0, -1, 0, 1, 0])?;
    if e.j != (Rational { num: 2048, den: 3 }) || e.discriminant != -48 {
        return Err(Error::Invariant(format!("curve invariants j = {:?}, Δ = {}", e.j, e.discriminant)));
    }
    Ok(e)
}

/// `y² = x³ + ax + b` over a finite field of characteristic `> 3`.
#[derive(Clone, Debug)]
pub struct EllipticCurveFq {
    field: Arc<FieldCtx>,
    a: FieldElem,
    b: FieldElem,
    points: u64,
    trace: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Point {
    Infinity,
    Affine(FieldElem, FieldElem),
}

impl EllipticCurveFq {
    pub fn new(field: Arc<FieldCtx>, a: FieldElem, b: FieldElem) -> Result<EllipticCurveFq> {
        if field.characteristic() <= 3 {
            return Err(Error::Unsupported("short Weierstrass models need characteristic > 3".into()));
        }
        let f = &field;
        let disc = f.add(f.mul(f.from_u64(4), f.pow(a, 3)), f.mul(f.from_u64(27), f.square(b)));
        if disc.is_zero() {
            return Err(Error::invalid("singular curve"));
        }
        if field.order() > COUNT_CAP {
            return Err(Error::cap("point count field", field.order() as u128, COUNT_CAP as u128));
        }
        let mut e = EllipticCurveFq { field, a, b, points: 0, trace: 0 };
        let chi: i64 = e.field.elements().map(|x| e.field.quadratic_character(e.rhs(x)) as i64).sum();
        let q = e.field.order() as i64;
        e.points = (q + 1 + chi) as u64;
        e.trace = -chi;
        if (e.trace as f64).powi(2) > 4.0 * q as f64 {
            return Err(Error::Invariant(format!("Hasse bound violated: a = {}, q = {q}", e.trace)));
        }
        Ok(e)
    }

    pub fn field(&self) -> &Arc<FieldCtx> {
        &self.field
    }

    pub fn coefficients(&self) -> (FieldElem, FieldElem) {
        (self.a, self.b)
    }

    /// `|E(F)|`, including the point at infinity.
    pub fn point_count(&self) -> u64 {
        self.points
    }

    /// `q + 1 − |E(F)|`.
    pub fn trace(&self) -> i64 {
        self.trace
    }

    /// Same curve over an extension of its field.
    pub fn lift(&self, ext: &Arc<FieldCtx>) -> Result<EllipticCurveFq> {
        EllipticCurveFq::new(ext.clone(), ext.embed(&self.field, self.a)?, ext.embed(&self.field, self.b)?)
    }

    /// `x³ + ax + b`.
    pub fn rhs(&self, x: FieldElem) -> FieldElem {
        let f = &self.field;
        f.add(f.mul(f.add(f.square(x), self.a), x), self.b)
    }

    pub fn rhs_poly(&self) -> Poly {
        let f = &self.field;
        Poly::new(f.clone(), vec![self.b, self.a, f.zero(), f.one()])
    }

    pub fn points(&self) -> Vec<Point> {
        let f = &self.field;
        let mut out = vec![Point::Infinity];
        for x in f.elements() {
            if let Some(y) = f.sqrt(self.rhs(x)) {
                out.push(Point::Affine(x, y));
                if !y.is_zero() {
                    out.push(Point::Affine(x, f.neg(y)));
                }
            }
        }
        out
    }

    pub fn add(&self, p: Point, q: Point) -> Point {
        let f = &self.field;
        let (x1, y1, x2, y2) = match (p, q) {
            (Point::Infinity, r) | (r, Point::Infinity) => return r,
            (Point::Affine(x1, y1), Point::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let slope = if x1 == x2 {
            if f.add(y1, y2).is_zero() {
                return Point::Infinity;
            }
            let num = f.add(f.mul(f.from_u64(3), f.square(x1)), self.a);
            f.div(num, f.add(y1, y1)).expect("y ≠ 0")
        } else {
            f.div(f.sub(y2, y1), f.sub(x2, x1)).expect("x₁ ≠ x₂")
        };
        let x3 = f.sub(f.sub(f.square(slope), x1), x2);
        let y3 = f.sub(f.mul(slope, f.sub(x1, x3)), y1);
        Point::Affine(x3, y3)
    }

    pub fn mul(&self, m: u64, p: Point) -> Point {
        let mut acc = Point::Infinity;
        let mut base = p;
        let mut m = m;
        while m > 0 {
            if m & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            m >>= 1;
        }
        acc
    }

    /// `f_m` with `ψ_m = f_m` for odd `m` and `ψ_m = y·f_m` for even `m`.
    pub fn division_poly(&self, m: u64) -> Result<Poly> {
        Ok(self.division_polys(m)?.swap_remove(m as usize))
    }

    /// `f_0, …, f_m`.
    fn division_polys(&self, m: u64) -> Result<Vec<Poly>> {
        let f = &self.field;
        if m > 4 * LATTES_DEGREE_CAP {
            return Err(Error::cap("division polynomial index", m as u128, 4 * LATTES_DEGREE_CAP as u128));
        }
        let int = |c: &[i64]| Poly::from_ints(f, c);
        let (a, b) = (self.a, self.b);
        let fe = |c: FieldElem| Poly::constant(f, c);
        let x = Poly::x(f);
        let mut psi: Vec<Poly> = vec![Poly::zero(f), Poly::one(f), int(&[2])];
        // 3x⁴ + 6ax² + 12bx − a²
        let f3 = x
            .pow(4)
            .scale(f.from_u64(3))
            .add(&x.pow(2).scale(f.mul(f.from_u64(6), a)))
            .add(&x.scale(f.mul(f.from_u64(12), b)))
            .sub(&fe(f.square(a)));
        psi.push(f3);
        // 4(x⁶ + 5ax⁴ + 20bx³ − 5a²x² − 4abx − 8b² − a³)
        let f4 = x
            .pow(6)
            .add(&x.pow(4).scale(f.mul(f.from_u64(5), a)))
            .add(&x.pow(3).scale(f.mul(f.from_u64(20), b)))
            .sub(&x.pow(2).scale(f.mul(f.from_u64(5), f.square(a))))
            .sub(&x.scale(f.mul(f.from_u64(4), f.mul(a, b))))
            .sub(&fe(f.add(f.mul(f.from_u64(8), f.square(b)), f.pow(a, 3))))
            .scale(f.from_u64(4));
        psi.push(f4);
        let rhs2 = self.rhs_poly().pow(2);
        let half = f.inv(f.from_u64(2)).expect("odd characteristic");
        for n in 5..=m as usize {
            let k = n / 2;
            let next = if n % 2 == 1 {
                let first = psi[k + 2].mul(&psi[k].pow(3));
                let second = psi[k - 1].mul(&psi[k + 1].pow(3));
                if k % 2 == 0 {
                    rhs2.mul(&first).sub(&second)
                } else {
                    first.sub(&rhs2.mul(&second))
                }
            } else {
                let inner = psi[k + 2].mul(&psi[k - 1].pow(2)).sub(&psi[k - 2].mul(&psi[k + 1].pow(2)));
                psi[k].mul(&inner).scale(half)
            };
            psi.push(next);
        }
        psi.truncate(m as usize + 1);
        Ok(psi)
    }

    /// The degree-`m²` map `x(P) ↦ x([m]P)`.
    pub fn lattes_map(&self, m: u64) -> Result<RationalMap> {
        if m < 2 {
            return Err(Error::invalid("m must be at least 2"));
        }
        if m.is_multiple_of(self.field.characteristic()) {
            return Err(Error::Unsupported("m divisible by the characteristic".into()));
        }
        if m * m > LATTES_DEGREE_CAP {
            return Err(Error::cap("Lattès degree", (m * m) as u128, LATTES_DEGREE_CAP as u128));
        }
        let psi = self.division_polys(m + 1)?;
        let (fm, prev, next) = (&psi[m as usize], &psi[m as usize - 1], &psi[m as usize + 1]);
        let x = Poly::x(&self.field);
        let rhs = self.rhs_poly();
        let fm2 = fm.pow(2);
        let (num, den) = if m % 2 == 1 {
            (x.mul(&fm2).sub(&rhs.mul(&prev.mul(next))), fm2)
        } else {
            (x.mul(&rhs).mul(&fm2).sub(&prev.mul(next)), rhs.mul(&fm2))
        };
        let map = RationalMap::new(num, den)?;
        if map.degree() as u64 != m * m {
            return Err(Error::Invariant(format!("Lattès map of degree {} for m = {m}", map.degree())));
        }
        Ok(map)
    }
}

/// `s_t = α^t + β^t` for Frobenius eigenvalues `α, β` of trace `a`, degree `l`.
pub fn frobenius_power_sum(a: i64, l: u64, t: u32) -> i128 {
    let (mut prev, mut cur) = (2i128, a as i128);
    if t == 0 {
        return prev;
    }
    for _ in 1..t {
        (prev, cur) = (cur, a as i128 * cur - l as i128 * prev);
    }
    cur
}

fn power_sum_mod(a: i64, l: u64, t: u32, p: u64) -> u64 {
    let p = p as i128;
    let (mut prev, mut cur) = (2 % p, (a as i128).rem_euclid(p));
    if t == 0 {
        return prev as u64;
    }
    for _ in 1..t {
        (prev, cur) = (cur, (a as i128 * cur - l as i128 * prev).rem_euclid(p));
    }
    cur as u64
}

/// No element of the affine coset fixes two points: `1 ∓ s_t + ℓ^t ≢ 0 (p)`.
pub fn oit_predict(a_l: i64, l: u64, p: u64, t: u32) -> bool {
    let s = power_sum_mod(a_l, l, t, p) as i128;
    let lt = (0..t).fold(1i128, |acc, _| acc * l as i128 % p as i128);
    let p = p as i128;
    (1 - s + lt).rem_euclid(p) != 0 && (1 + s + lt).rem_euclid(p) != 0
}

/// Euler's criterion; `0` for multiples of `p`.
pub fn legendre(a: i128, p: u64) -> i8 {
    let p128 = p as i128;
    let r = a.rem_euclid(p128) as u64;
    if r == 0 {
        return 0;
    }
    let mut acc = 1u128;
    let mut base = r as u128;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u128;
        }
        base = base * base % p as u128;
        e >>= 1;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OitEntry {
    pub l: u64,
    pub a_l: i64,
    pub t: u32,
    pub predicted: bool,
    pub bijective: bool,
    /// `a_ℓ² − 4ℓ` is a non-residue mod `p`
    pub irreducible: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OitReport {
    pub p: u64,
    pub l_max: u64,
    pub t_max: u32,
    pub entries: Vec<OitEntry>,
    /// primes passed over, with the reason
    pub skipped: Vec<(u64, String)>,
    pub mismatches: usize,
    /// irreducible at `t = 1` but not bijective
    pub marker_failures: usize,
}

/// Compare [`oit_predict`] with brute bijectivity of the degree-`p²`
/// Lattès map for every prime `ℓ ≤ l_max` and `t ≤ t_max` under `cap`.
pub fn oit_scan(curve: &EllipticCurveQ, p: u64, l_max: u64, t_max: u32, cap: u64) -> Result<OitReport> {
    if p <= 3 || !is_prime(p) {
        return Err(Error::invalid(format!("p must be a prime > 3, got {p}")));
    }
    let mut entries = Vec::new();
    let mut skipped = Vec::new();
    for l in (2..=l_max).filter(|&l| is_prime(l)) {
        if l <= 3 {
            skipped.push((l, "characteristic 2 or 3".to_string()));
            continue;
        }
        if l == p {
            skipped.push((l, "ℓ = p".to_string()));
            continue;
        }
        if !curve.has_good_reduction(l) {
            skipped.push((l, "bad reduction".to_string()));
            continue;
        }
        let e = curve.reduce(l)?;
        let map = e.lattes_map(p)?;
        let scanner = Scanner::with_cap(e.field().clone(), cap);
        let a_l = e.trace();
        let irreducible = legendre(a_l as i128 * a_l as i128 - 4 * l as i128, p) == -1;
        for t in 1..=scanner.tower().max_level(t_max) {
            entries.push(OitEntry {
                l,
                a_l,
                t,
                predicted: oit_predict(a_l, l, p, t),
                bijective: scanner.is_bijective_on(&map, t)?,
                irreducible,
            });
        }
    }
    let mismatches = entries.iter().filter(|e| e.predicted != e.bijective).count();
    let marker_failures = entries.iter().filter(|e| e.t == 1 && e.irreducible && !e.bijective).count();
    Ok(OitReport { p, l_max, t_max, entries, skipped, mismatches, marker_failures })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MedianReport {
    pub l: u64,
    pub a_l: i64,
    pub supersingular: bool,
    /// `|E(F_{ℓ^t})|` from the power sums, for `t ≤ t_reached`
    pub counts: BTreeMap<u32, u128>,
    /// `t` with `|E(F_{ℓ^t})| = ℓ^t + 1`
    pub median_t: Vec<u32>,
    /// `t` whose count was confirmed by enumeration
    pub enumerated: Vec<u32>,
    pub t_reached: u32,
}

/// The `t ≤ t_max` (with `ℓ^t ≤ cap`) where the curve has exactly `ℓ^t + 1`
/// points. Counts for small `t` are confirmed by enumeration; a disagreement
/// is an invariant failure.
pub fn median_value_check(e: &EllipticCurveFq, t_max: u32, cap: u64) -> Result<MedianReport> {
    let base = e.field();
    if base.degree() != 1 {
        return Err(Error::Unsupported("median check expects a prime field".into()));
    }
    let l = base.order();
    let tower = Tower::new(base.clone(), cap);
    let t_reached = tower.max_level(t_max);
    let mut counts = BTreeMap::new();
    let mut median_t = Vec::new();
    let mut enumerated = Vec::new();
    for t in 1..=t_reached {
        let lt = (l as u128).pow(t);
        let count = (lt as i128 + 1 - frobenius_power_sum(e.trace(), l, t)) as u128;
        if t <= 3 && lt <= COUNT_CAP as u128 {
            let direct = e.lift(&tower.level(t)?)?.point_count() as u128;
            if direct != count {
                return Err(Error::Invariant(format!("t = {t}: {direct} points counted, {count} predicted")));
            }
            enumerated.push(t);
        }
        if count == lt + 1 {
            median_t.push(t);
        }
        counts.insert(t, count);
    }
    Ok(MedianReport {
        l,
        a_l: e.trace(),
        supersingular: e.trace() == 0,
        counts,
        median_t,
        enumerated,
        t_reached,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projmap::P1Point;

    #[test]
    fn ogg_invariants() {
        let e = ogg_curve().unwrap();
        assert_eq!((e.b2, e.b4, e.b6, e.b8), (-4, 2, 0, -1));
        assert_eq!((e.c4, e.c6), (-32, -224));
        assert!(!e.has_good_reduction(2) && !e.has_good_reduction(3));
        assert!((5..100).all(|l| !is_prime(l) || e.has_good_reduction(l)));
        assert!(e.reduce(3).is_err());
    }

    #[test]
    fn ogg_at_five() {
        // Y² = X³ − X² + X over F_5: X = 0 → 1 point, X = 1 → 2, X = 2 → 6 = 1, 2 points,
        // X = 3 → 21 = 1, 2 points, X = 4 → 52 = 2, none
        let e = ogg_curve().unwrap().reduce(5).unwrap();
        assert_eq!(e.point_count(), 8);
        assert_eq!(e.trace(), -2);
    }

    #[test]
    fn duplication() {
        let f = make_field(11, 1).unwrap();
        let (a, b) = (f.from_u64(2), f.from_u64(1));
        let e = EllipticCurveFq::new(f.clone(), a, b).unwrap();
        let m2 = e.lattes_map(2).unwrap();
        let num = Poly::from_ints(&f, &[4, -8, -4, 0, 1]);
        let den = Poly::from_ints(&f, &[4, 8, 0, 4]);
        assert_eq!(m2, RationalMap::new(num, den).unwrap());
        for m in 2..=7u64 {
            let map = e.lattes_map(m).unwrap();
            assert_eq!(map.degree() as u64, m * m);
            for pt in e.points() {
                if let Point::Affine(x, _) = pt {
                    let want = match e.mul(m, pt) {
                        Point::Infinity => P1Point::Infinity,
                        Point::Affine(x2, _) => P1Point::Finite(x2),
                    };
                    assert_eq!(map.eval_p1(&f, P1Point::Finite(x)).unwrap(), want, "m = {m}");
                }
            }
        }
        let six = e.lattes_map(6).unwrap();
        assert_eq!(six, e.lattes_map(2).unwrap().compose(&e.lattes_map(3).unwrap()).unwrap());
        assert!(matches!(e.lattes_map(11), Err(Error::Unsupported(_))));
    }

    #[test]
    fn predictions() {
        assert!(!oit_predict(0, 19, 5, 1));
        assert_eq!(frobenius_power_sum(0, 7, 3), 0);
        assert_eq!(frobenius_power_sum(2, 5, 2), 4 - 10);
        assert_eq!(legendre(2, 5), -1);
        assert_eq!(legendre(4, 5), 1);
    }

    #[test]
    fn ogg_scan() {
        let e = ogg_curve().unwrap();
        let r = oit_scan(&e, 5, 60, 1, 1 << 12).unwrap();
        assert_eq!(r.skipped.iter().map(|s| s.0).collect::<Vec<_>>(), vec![2, 3, 5]);
        assert_eq!(r.mismatches, 0, "{:?}", r.entries);
        assert_eq!(r.marker_failures, 0);
        for l in [5u64, 7, 11, 13, 17, 19, 23] {
            let el = e.reduce(l).unwrap();
            let m = median_value_check(&el, 4, 1 << 16).unwrap();
            if el.trace() == 0 {
                assert!(m.median_t.iter().all(|t| t % 2 == 1));
                assert!(m.median_t.contains(&1));
            } else {
                assert!(!m.median_t.contains(&1));
            }
            assert!(m.enumerated.contains(&2));
        }
    }
}
