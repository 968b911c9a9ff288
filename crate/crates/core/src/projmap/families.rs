//! The classical families: cyclic, Dickson, Chebyshev and its twists, Rédei.

use std::sync::Arc;

use super::{Poly, RationalMap};
use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElem};

fn binomial_small(n: u64, k: u64, p: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let (mut num, mut den) = (1u64, 1u64);
    for i in 0..k {
        num = num * ((n - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    num * mod_inv(den, p) % p
}

fn mod_inv(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    s0.rem_euclid(p as i128) as u64
}

/// `C(n, k) mod p` by Lucas' theorem.
pub fn binomial_mod(mut n: u64, mut k: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while k > 0 {
        let (ni, ki) = (n % p, k % p);
        if ki > ni {
            return 0;
        }
        acc = acc * binomial_small(ni, ki, p) % p;
        n /= p;
        k /= p;
    }
    acc
}

/// `c_i = n/(n−i)·C(n−i, i)` mod `p` for `0 ≤ i ≤ n/2`: the coefficient of
/// `(−a)^i x^(n−2i)` in `D_{n,a}`.
pub fn dickson_integer_coeffs(n: u64, p: u64) -> Vec<u64> {
    (0..=n / 2)
        .map(|i| {
            if i == 0 {
                1 % p
            } else {
                (binomial_mod(n - i, i, p) + binomial_mod(n - i - 1, i - 1, p)) % p
            }
        })
        .collect()
}

fn require_odd_char(ctx: &FieldCtx, family: &str) -> Result<()> {
    if ctx.characteristic() == 2 {
        Err(Error::invalid(format!("{family} needs odd characteristic")))
    } else {
        Ok(())
    }
}

fn require_degree(n: u64) -> Result<usize> {
    if n < 1 {
        return Err(Error::invalid("degree must be at least 1"));
    }
    usize::try_from(n).map_err(|_| Error::invalid("degree too large"))
}

/// `x^n`.
pub fn cyclic(ctx: &Arc<FieldCtx>, n: u64) -> Result<RationalMap> {
    let n = require_degree(n)?;
    RationalMap::poly(Poly::monomial(ctx, ctx.one(), n))
}

/// `D_{n,a} = Σ_{i ≤ n/2} n/(n−i)·C(n−i,i)·(−a)^i x^(n−2i)`.
pub fn dickson(ctx: &Arc<FieldCtx>, n: u64, a: FieldElem) -> Result<RationalMap> {
    require_odd_char(ctx, "dickson")?;
    let deg = require_degree(n)?;
    let c = dickson_integer_coeffs(n, ctx.characteristic());
    let minus_a = ctx.neg(a);
    let mut coeffs = vec![FieldElem::ZERO; deg + 1];
    let mut pow = ctx.one();
    for (i, &ci) in c.iter().enumerate() {
        coeffs[deg - 2 * i] = ctx.mul(ctx.from_u64(ci), pow);
        pow = ctx.mul(pow, minus_a);
    }
    RationalMap::poly(Poly::new(ctx.clone(), coeffs))
}

/// `T_n = D_{n,1}(2x)/2`.
pub fn chebyshev(ctx: &Arc<FieldCtx>, n: u64) -> Result<RationalMap> {
    require_odd_char(ctx, "chebyshev")?;
    let deg = require_degree(n)?;
    let c = dickson_integer_coeffs(n, ctx.characteristic());
    let two = ctx.from_u64(2);
    let half = ctx.inv(two).expect("odd characteristic");
    let mut coeffs = vec![FieldElem::ZERO; deg + 1];
    for (i, &ci) in c.iter().enumerate() {
        let e = deg - 2 * i;
        let mut v = ctx.mul(ctx.from_u64(ci), ctx.mul(ctx.pow(two, e as u64), half));
        if i % 2 == 1 {
            v = ctx.neg(v);
        }
        coeffs[e] = v;
    }
    RationalMap::poly(Poly::new(ctx.clone(), coeffs))
}

/// `T_{n,a}(x) = u·T_n(x/u)` with `u² = a`, expanded in powers of `a`:
/// the coefficient of `x^(n−2i)` is `c_i (−1)^i 2^(n−2i−1) a^(i−(n−1)/2)`.
pub fn chebyshev_twist(ctx: &Arc<FieldCtx>, n: u64, a: FieldElem) -> Result<RationalMap> {
    require_odd_char(ctx, "chebyshev twist")?;
    let deg = require_degree(n)?;
    if n.is_multiple_of(2) {
        return Err(Error::invalid("twisted Chebyshev needs odd n"));
    }
    let a_inv = ctx.inv(a).ok_or_else(|| Error::invalid("twist parameter must be nonzero"))?;
    let c = dickson_integer_coeffs(n, ctx.characteristic());
    let two = ctx.from_u64(2);
    let half_n = (n - 1) / 2;
    let mut coeffs = vec![FieldElem::ZERO; deg + 1];
    for (i, &ci) in c.iter().enumerate() {
        let e = deg - 2 * i;
        let mut v = ctx.mul(ctx.from_u64(ci), ctx.pow(two, e as u64 - 1));
        v = ctx.mul(v, ctx.pow(a_inv, half_n - i as u64));
        if i % 2 == 1 {
            v = ctx.neg(v);
        }
        coeffs[e] = v;
    }
    RationalMap::poly(Poly::new(ctx.clone(), coeffs))
}

/// Rédei function `R_a = Σ_{k even} C(n,k) a^(k/2) x^(n−k) / Σ_{k odd} C(n,k) a^((k−1)/2) x^(n−k)`,
/// the conjugate of `x^n` by `x ↦ (x − u)/(x + u)` with `u² = a`.
pub fn redei(ctx: &Arc<FieldCtx>, n: u64, a: FieldElem) -> Result<RationalMap> {
    require_odd_char(ctx, "redei")?;
    let deg = require_degree(n)?;
    if n.is_multiple_of(2) {
        return Err(Error::invalid("Rédei function needs odd n"));
    }
    if a.is_zero() || ctx.is_square(a) {
        return Err(Error::invalid("Rédei parameter must be a non-square"));
    }
    let p = ctx.characteristic();
    let mut num = vec![FieldElem::ZERO; deg + 1];
    let mut den = vec![FieldElem::ZERO; deg + 1];
    let mut a_pow = ctx.one();
    for k in 0..=deg {
        let c = ctx.mul(ctx.from_u64(binomial_mod(n, k as u64, p)), a_pow);
        if k % 2 == 0 {
            num[deg - k] = c;
        } else {
            den[deg - k] = c;
            a_pow = ctx.mul(a_pow, a);
        }
    }
    RationalMap::new(Poly::new(ctx.clone(), num), Poly::new(ctx.clone(), den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    fn ints(map: &RationalMap) -> Vec<u64> {
        map.num().coeffs().iter().map(|&c| map.ctx().index(c)).collect()
    }

    #[test]
    fn small_dickson() {
        let f7 = make_field(7, 1).unwrap();
        // x^3 − 3x
        assert_eq!(ints(&dickson(&f7, 3, f7.one()).unwrap()), vec![0, 4, 0, 1]);
        assert_eq!(ints(&dickson(&f7, 6, f7.zero()).unwrap()), vec![0, 0, 0, 0, 0, 0, 1]);
        assert!(dickson(&make_field(2, 1).unwrap(), 3, FieldElem::ZERO).is_err());
    }

    #[test]
    fn dickson_matches_recurrence() {
        let f = make_field(11, 1).unwrap();
        for a in 0..11 {
            let a = f.from_u64(a);
            let x = Poly::x(&f);
            let mut prev = Poly::constant(&f, f.from_u64(2));
            let mut cur = x.clone();
            for n in 2..=20u64 {
                let next = x.mul(&cur).sub(&prev.scale(a));
                prev = cur;
                cur = next;
                assert_eq!(dickson(&f, n, a).unwrap().num(), &cur, "n = {n}");
            }
        }
    }

    #[test]
    fn twisted_cubic() {
        let f5 = make_field(5, 1).unwrap();
        for a in 1..5 {
            let a = f5.from_u64(a);
            let t = chebyshev_twist(&f5, 3, a).unwrap();
            let want = Poly::new(
                f5.clone(),
                vec![f5.zero(), f5.from_i64(-3), f5.zero(), f5.mul(f5.from_u64(4), f5.inv(a).unwrap())],
            );
            assert_eq!(t.num(), &want);
        }
    }

    #[test]
    fn lucas() {
        let mut row = vec![1u128];
        for n in 1..=60u64 {
            let mut next = vec![1u128; n as usize + 1];
            for k in 1..n as usize {
                next[k] = row[k - 1] + row[k];
            }
            row = next;
            for p in [2u64, 3, 5, 7, 13] {
                for k in 0..=n {
                    assert_eq!(binomial_mod(n, k, p) as u128, row[k as usize] % p as u128);
                }
            }
        }
    }
}
