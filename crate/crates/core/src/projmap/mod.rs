//! Rational self-maps of `P¹` over a finite field.
//!
//! Evaluation on `P¹` uses the homogeneous-limit convention: at a zero of
//! the denominator the value is `∞`; at `∞` the value is the ratio of
//! leading coefficients when the degrees agree, `∞` when the numerator has
//! larger degree and `0` otherwise.

mod decompose;
mod families;
mod parse;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{upoly, FieldCtx, FieldElem};

pub use decompose::{decompose_tame_poly, Decomposition};
pub use families::{
    binomial_mod, chebyshev, chebyshev_twist, cyclic, dickson, dickson_integer_coeffs, redei,
};
pub use parse::{parse_elem, parse_map};

/// Polynomial over a field, coefficients low-to-high, no trailing zeros.
#[derive(Clone)]
pub struct Poly {
    ctx: Arc<FieldCtx>,
    coeffs: Vec<FieldElem>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        *self.ctx == *other.ctx && self.coeffs == other.coeffs
    }
}

impl Eq for Poly {}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeff_literals())
    }
}

fn check_same(a: &FieldCtx, b: &FieldCtx) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::FieldMismatch(format!("{a:?} vs {b:?}")))
    }
}

impl Poly {
    pub fn new(ctx: Arc<FieldCtx>, mut coeffs: Vec<FieldElem>) -> Poly {
        upoly::trim(&mut coeffs);
        Poly { ctx, coeffs }
    }

    pub fn from_ints(ctx: &Arc<FieldCtx>, coeffs: &[i64]) -> Poly {
        let c = coeffs.iter().map(|&v| ctx.from_i64(v)).collect();
        Poly::new(ctx.clone(), c)
    }

    pub fn zero(ctx: &Arc<FieldCtx>) -> Poly {
        Poly::new(ctx.clone(), Vec::new())
    }

    pub fn constant(ctx: &Arc<FieldCtx>, c: FieldElem) -> Poly {
        Poly::new(ctx.clone(), vec![c])
    }

    pub fn one(ctx: &Arc<FieldCtx>) -> Poly {
        Poly::constant(ctx, ctx.one())
    }

    pub fn x(ctx: &Arc<FieldCtx>) -> Poly {
        Poly::monomial(ctx, ctx.one(), 1)
    }

    pub fn monomial(ctx: &Arc<FieldCtx>, c: FieldElem, n: usize) -> Poly {
        let mut v = vec![FieldElem::ZERO; n + 1];
        v[n] = c;
        Poly::new(ctx.clone(), v)
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs.get(i).copied().unwrap_or(FieldElem::ZERO)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> FieldElem {
        self.coeffs.last().copied().unwrap_or(FieldElem::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == self.ctx.one()
    }

    pub fn monic(&self) -> Poly {
        Poly::new(self.ctx.clone(), upoly::make_monic(&self.ctx, &self.coeffs))
    }

    pub fn add(&self, other: &Poly) -> Poly {
        Poly::new(self.ctx.clone(), upoly::add(&self.ctx, &self.coeffs, &other.coeffs))
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        Poly::new(self.ctx.clone(), upoly::sub(&self.ctx, &self.coeffs, &other.coeffs))
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        Poly::new(self.ctx.clone(), upoly::mul(&self.ctx, &self.coeffs, &other.coeffs))
    }

    pub fn scale(&self, c: FieldElem) -> Poly {
        Poly::new(self.ctx.clone(), upoly::scale(&self.ctx, &self.coeffs, c))
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.ctx.clone(), self.coeffs.iter().map(|&c| self.ctx.neg(c)).collect())
    }

    pub fn pow(&self, mut n: u32) -> Poly {
        let mut result = Poly::one(&self.ctx);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Quotient and remainder; error on a zero divisor.
    pub fn divrem(&self, other: &Poly) -> Result<(Poly, Poly)> {
        if other.is_zero() {
            return Err(Error::invalid("division by the zero polynomial"));
        }
        let (q, r) = upoly::divrem(&self.ctx, &self.coeffs, &other.coeffs);
        Ok((Poly::new(self.ctx.clone(), q), Poly::new(self.ctx.clone(), r)))
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Poly) -> Poly {
        Poly::new(self.ctx.clone(), upoly::gcd(&self.ctx, &self.coeffs, &other.coeffs))
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(self.ctx.clone(), upoly::derivative(&self.ctx, &self.coeffs))
    }

    pub fn eval(&self, x: FieldElem) -> FieldElem {
        upoly::eval(&self.ctx, &self.coeffs, x)
    }

    /// `self(inner(x))`.
    pub fn compose(&self, inner: &Poly) -> Poly {
        let mut acc = Poly::zero(&self.ctx);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&Poly::constant(&self.ctx, c));
        }
        acc
    }

    /// Same polynomial over an extension of its field.
    pub fn lift(&self, ext: &Arc<FieldCtx>) -> Result<Poly> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| ext.embed(&self.ctx, c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(ext.clone(), coeffs))
    }

    /// Coefficients as element literals, low-to-high.
    pub fn coeff_literals(&self) -> Vec<String> {
        self.coeffs.iter().map(|&c| self.ctx.format_elem(c)).collect()
    }
}

/// A point of `P¹`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum P1Point {
    Finite(FieldElem),
    Infinity,
}

/// Degree ≥ 1 rational map `num/den` with coprime parts and monic `den`.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMap {
    num: Poly,
    den: Poly,
}

impl fmt::Debug for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})/({:?})", self.num, self.den)
    }
}

impl RationalMap {
    /// Normalizes by the gcd and makes the denominator monic.
    pub fn new(num: Poly, den: Poly) -> Result<RationalMap> {
        check_same(&num.ctx, &den.ctx)?;
        if den.is_zero() {
            return Err(Error::invalid("zero denominator"));
        }
        let g = num.gcd(&den);
        let (mut num, _) = num.divrem(&g)?;
        let (mut den, _) = den.divrem(&g)?;
        let lc_inv = den.ctx.inv(den.leading()).expect("nonzero leading coefficient");
        num = num.scale(lc_inv);
        den = den.scale(lc_inv);
        let map = RationalMap { num, den };
        if map.degree() < 1 {
            return Err(Error::invalid("constant map has degree 0"));
        }
        Ok(map)
    }

    pub fn poly(p: Poly) -> Result<RationalMap> {
        let one = Poly::one(&p.ctx);
        RationalMap::new(p, one)
    }

    pub fn identity(ctx: &Arc<FieldCtx>) -> RationalMap {
        RationalMap { num: Poly::x(ctx), den: Poly::one(ctx) }
    }

    /// `x ↦ (a x + b)/(c x + d)`; error when `ad − bc = 0`.
    pub fn moebius(ctx: &Arc<FieldCtx>, m: [FieldElem; 4]) -> Result<RationalMap> {
        let [a, b, c, d] = m;
        if ctx.sub(ctx.mul(a, d), ctx.mul(b, c)).is_zero() {
            return Err(Error::invalid("singular transformation"));
        }
        RationalMap::new(Poly::new(ctx.clone(), vec![b, a]), Poly::new(ctx.clone(), vec![d, c]))
    }

    /// `x ↦ a x + b`; error when `a = 0`.
    pub fn affine(ctx: &Arc<FieldCtx>, a: FieldElem, b: FieldElem) -> Result<RationalMap> {
        if a.is_zero() {
            return Err(Error::invalid("singular transformation"));
        }
        RationalMap::poly(Poly::new(ctx.clone(), vec![b, a]))
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.num.ctx
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn degree(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    /// Value at `∞`.
    pub fn value_at_infinity(&self) -> P1Point {
        let dn = self.num.degree();
        let dd = self.den.degree().unwrap_or(0);
        match dn {
            None => P1Point::Finite(FieldElem::ZERO),
            Some(n) if n > dd => P1Point::Infinity,
            Some(n) if n == dd => {
                let ctx = self.ctx();
                P1Point::Finite(ctx.div(self.num.leading(), self.den.leading()).expect("monic den"))
            }
            Some(_) => P1Point::Finite(FieldElem::ZERO),
        }
    }

    fn eval_here(&self, x: P1Point) -> P1Point {
        match x {
            P1Point::Infinity => self.value_at_infinity(),
            P1Point::Finite(v) => {
                let d = self.den.eval(v);
                let n = self.num.eval(v);
                match self.ctx().div(n, d) {
                    Some(y) => P1Point::Finite(y),
                    None => P1Point::Infinity,
                }
            }
        }
    }

    /// Evaluate at a point of `P¹(field)`, where `field` is the map's field
    /// or an extension built over it.
    pub fn eval_p1(&self, field: &Arc<FieldCtx>, x: P1Point) -> Result<P1Point> {
        if **field == **self.ctx() {
            return Ok(self.eval_here(x));
        }
        Ok(self.lift(field)?.eval_here(x))
    }

    /// Same map over an extension field.
    pub fn lift(&self, ext: &Arc<FieldCtx>) -> Result<RationalMap> {
        if **ext == **self.ctx() {
            return Ok(self.clone());
        }
        Ok(RationalMap { num: self.num.lift(ext)?, den: self.den.lift(ext)? })
    }

    /// `self ∘ inner`, i.e. `x ↦ self(inner(x))`.
    pub fn compose(&self, inner: &RationalMap) -> Result<RationalMap> {
        check_same(self.ctx(), inner.ctx())?;
        let ctx = self.ctx();
        let n = self.degree();
        let (a, b) = (&inner.num, &inner.den);
        // homogeneous substitution Σ c_i A^i B^(n−i)
        let mut a_pows = vec![Poly::one(ctx)];
        let mut b_pows = vec![Poly::one(ctx)];
        for i in 1..=n {
            a_pows.push(a_pows[i - 1].mul(a));
            b_pows.push(b_pows[i - 1].mul(b));
        }
        let subst = |p: &Poly| {
            let mut acc = Poly::zero(ctx);
            for (i, &c) in p.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    acc = acc.add(&a_pows[i].mul(&b_pows[n - i]).scale(c));
                }
            }
            acc
        };
        RationalMap::new(subst(&self.num), subst(&self.den))
    }

    /// `α ∘ self ∘ α⁻¹` for `α(x) = a x + b`.
    pub fn affine_conjugate(&self, a: FieldElem, b: FieldElem) -> Result<RationalMap> {
        let ctx = self.ctx();
        let alpha = RationalMap::affine(ctx, a, b)?;
        let a_inv = ctx.inv(a).expect("checked nonzero");
        let alpha_inv = RationalMap::affine(ctx, a_inv, ctx.neg(ctx.mul(b, a_inv)))?;
        alpha.compose(self)?.compose(&alpha_inv)
    }

    /// `M ∘ self ∘ M'` with `M`, `M'` given as `[a, b, c, d]`.
    pub fn moebius_conjugate(&self, m: [FieldElem; 4], m2: [FieldElem; 4]) -> Result<RationalMap> {
        let ctx = self.ctx();
        let outer = RationalMap::moebius(ctx, m)?;
        let inner = RationalMap::moebius(ctx, m2)?;
        outer.compose(self)?.compose(&inner)
    }

    /// Compiled form for repeated evaluation over `field`.
    pub fn evaluator(&self, field: &Arc<FieldCtx>) -> Result<Evaluator> {
        let lifted = self.lift(field)?;
        Ok(Evaluator::new(&lifted))
    }

    /// `"poly:c0,c1,…"` or `"rat:…/…"` with element literals in parentheses
    /// for non-prime fields.
    pub fn spec(&self) -> String {
        let fmt_poly = |p: &Poly| {
            p.coeffs
                .iter()
                .map(|&c| {
                    let s = p.ctx.format_elem(c);
                    if p.ctx.degree() == 1 {
                        s
                    } else {
                        format!("({s})")
                    }
                })
                .collect::<Vec<_>>()
                .join(",")
        };
        if self.is_polynomial() {
            format!("poly:{}", fmt_poly(&self.num))
        } else {
            format!("rat:{}/{}", fmt_poly(&self.num), fmt_poly(&self.den))
        }
    }
}

/// `x^shift · Q(x^stride)` with `Q` dense.
struct Sparse {
    shift: u64,
    stride: u64,
    dense: Vec<FieldElem>,
}

impl Sparse {
    fn new(p: &Poly) -> Sparse {
        let nz: Vec<usize> = (0..p.coeffs.len()).filter(|&i| !p.coeffs[i].is_zero()).collect();
        let shift = nz.first().copied().unwrap_or(0);
        let mut stride = 0usize;
        for &i in &nz {
            stride = gcd_usize(stride, i - shift);
        }
        let stride = stride.max(1);
        let dense = if nz.is_empty() {
            Vec::new()
        } else {
            (shift..p.coeffs.len()).step_by(stride).map(|i| p.coeffs[i]).collect()
        };
        Sparse { shift: shift as u64, stride: stride as u64, dense }
    }

    #[inline]
    fn eval(&self, ctx: &FieldCtx, x: FieldElem) -> FieldElem {
        let y = match self.stride {
            1 => x,
            2 => ctx.square(x),
            s => ctx.pow(x, s),
        };
        let mut acc = FieldElem::ZERO;
        for &c in self.dense.iter().rev() {
            acc = ctx.add(ctx.mul(acc, y), c);
        }
        if self.shift == 0 {
            acc
        } else {
            ctx.mul(acc, ctx.pow(x, self.shift))
        }
    }
}

fn gcd_usize(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd_usize(b, a % b)
    }
}

/// A rational map compiled for fast evaluation over one field, addressed by
/// dense keys: `0..order` are finite points, `order` is `∞`.
pub struct Evaluator {
    ctx: Arc<FieldCtx>,
    num: Sparse,
    den: Sparse,
    den_is_one: bool,
    at_infinity: P1Point,
}

impl Evaluator {
    fn new(map: &RationalMap) -> Evaluator {
        Evaluator {
            ctx: map.ctx().clone(),
            num: Sparse::new(&map.num),
            den: Sparse::new(&map.den),
            den_is_one: map.den.degree() == Some(0),
            at_infinity: map.value_at_infinity(),
        }
    }

    pub fn field(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    /// Number of points of `P¹` over the field.
    pub fn points(&self) -> u64 {
        self.ctx.order() + 1
    }

    #[inline]
    pub fn eval(&self, x: P1Point) -> P1Point {
        match x {
            P1Point::Infinity => self.at_infinity,
            P1Point::Finite(v) => {
                let n = self.num.eval(&self.ctx, v);
                if self.den_is_one {
                    return P1Point::Finite(n);
                }
                let d = self.den.eval(&self.ctx, v);
                match self.ctx.div(n, d) {
                    Some(y) => P1Point::Finite(y),
                    None => P1Point::Infinity,
                }
            }
        }
    }

    #[inline]
    pub fn point(&self, key: u64) -> P1Point {
        if key == self.ctx.order() {
            P1Point::Infinity
        } else {
            P1Point::Finite(self.ctx.from_dense(key))
        }
    }

    #[inline]
    pub fn key(&self, x: P1Point) -> u64 {
        match x {
            P1Point::Infinity => self.ctx.order(),
            P1Point::Finite(v) => self.ctx.dense_key(v),
        }
    }

    /// Dense key of the image of the point with dense key `key`.
    #[inline]
    pub fn image_key(&self, key: u64) -> u64 {
        self.key(self.eval(self.point(key)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    #[test]
    fn eval_conventions() {
        let f3 = make_field(3, 1).unwrap();
        let sq = RationalMap::poly(Poly::from_ints(&f3, &[0, 0, 1])).unwrap();
        assert_eq!(sq.eval_p1(&f3, P1Point::Infinity).unwrap(), P1Point::Infinity);
        let inv = RationalMap::new(Poly::from_ints(&f3, &[1]), Poly::from_ints(&f3, &[0, 1])).unwrap();
        assert_eq!(inv.eval_p1(&f3, P1Point::Finite(f3.zero())).unwrap(), P1Point::Infinity);
        assert_eq!(inv.eval_p1(&f3, P1Point::Infinity).unwrap(), P1Point::Finite(f3.zero()));
        let r = RationalMap::new(Poly::from_ints(&f3, &[1, 0, 1]), Poly::from_ints(&f3, &[1, 1])).unwrap();
        assert_eq!(r.eval_p1(&f3, P1Point::Finite(f3.from_u64(2))).unwrap(), P1Point::Infinity);
        let other = make_field(5, 1).unwrap();
        assert!(matches!(r.eval_p1(&other, P1Point::Infinity), Err(Error::FieldMismatch(_))));
    }

    #[test]
    fn normalization() {
        let f5 = make_field(5, 1).unwrap();
        // (2x^2 + 2x)/(2x) = x + 1
        let r = RationalMap::new(Poly::from_ints(&f5, &[0, 2, 2]), Poly::from_ints(&f5, &[0, 2])).unwrap();
        assert!(r.is_polynomial());
        assert_eq!(r.num().coeffs(), Poly::from_ints(&f5, &[1, 1]).coeffs());
        assert!(RationalMap::new(Poly::from_ints(&f5, &[3]), Poly::from_ints(&f5, &[1])).is_err());
    }

    #[test]
    fn compositions() {
        let f7 = make_field(7, 1).unwrap();
        let x2 = RationalMap::poly(Poly::from_ints(&f7, &[0, 0, 1])).unwrap();
        let x3 = RationalMap::poly(Poly::from_ints(&f7, &[0, 0, 0, 1])).unwrap();
        let x6 = RationalMap::poly(Poly::from_ints(&f7, &[0, 0, 0, 0, 0, 0, 1])).unwrap();
        assert_eq!(x2.compose(&x3).unwrap(), x6);
        assert_eq!(x3.compose(&x2).unwrap(), x6);
        let inv = RationalMap::new(Poly::from_ints(&f7, &[1]), Poly::from_ints(&f7, &[0, 1])).unwrap();
        assert_eq!(inv.compose(&inv).unwrap(), RationalMap::identity(&f7));
    }

    #[test]
    fn conjugation_keeps_degree() {
        let f5 = make_field(5, 1).unwrap();
        let x3 = RationalMap::poly(Poly::from_ints(&f5, &[0, 0, 0, 1])).unwrap();
        let c = x3.affine_conjugate(f5.one(), f5.one()).unwrap();
        assert_eq!(c.degree(), 3);
        let x2 = RationalMap::poly(Poly::from_ints(&f5, &[0, 0, 1])).unwrap();
        assert_eq!(x2.affine_conjugate(f5.one(), f5.zero()).unwrap(), x2);
        let zero = f5.zero();
        assert!(x2.moebius_conjugate([zero, zero, zero, f5.one()], [f5.one(), zero, zero, f5.one()]).is_err());
    }

    #[test]
    fn evaluator_matches_direct() {
        let f = make_field(3, 4).unwrap();
        let r = RationalMap::new(Poly::from_ints(&f, &[1, 0, 2, 0, 1]), Poly::from_ints(&f, &[2, 1, 0, 1])).unwrap();
        let ev = r.evaluator(&f).unwrap();
        for k in 0..ev.points() {
            let x = ev.point(k);
            assert_eq!(ev.eval(x), r.eval_p1(&f, x).unwrap());
        }
    }
}
