//! Tame two-step decompositions `f = g ∘ h` of polynomials.

use super::Poly;
use crate::error::{Error, Result};
use crate::gf::FieldElem;

/// Outcome of [`decompose_tame_poly`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decomposition {
    Indecomposable,
    /// Pairs `(g, h)` with `f = g ∘ h`, `h` monic with `h(0) = 0`, one per
    /// proper divisor `deg h` that admits a splitting.
    Decomposable(Vec<(Poly, Poly)>),
}

/// All tame splittings `f = g ∘ h` with `1 < deg h < deg f`.
///
/// `h` is the approximate `r`-th root of `f` (`r = deg f / deg h`) read off
/// the top coefficients; `g` is the `h`-adic expansion of `f`.
pub fn decompose_tame_poly(f: &Poly) -> Result<Decomposition> {
    let ctx = f.ctx().clone();
    let n = f.degree().ok_or_else(|| Error::invalid("zero polynomial"))?;
    let p = ctx.characteristic() as usize;
    if n % p == 0 {
        return Err(Error::Unsupported(format!(
            "wild decomposition: characteristic {p} divides degree {n}"
        )));
    }
    let lc = f.leading();
    let monic = f.scale(ctx.inv(lc).expect("nonzero leading coefficient"));
    let mut found = Vec::new();
    for m in 2..n {
        if n % m != 0 {
            continue;
        }
        let r = n / m;
        let r_inv = ctx.inv(ctx.from_u64(r as u64)).expect("r divides a degree prime to p");
        let mut h = vec![FieldElem::ZERO; m + 1];
        h[m] = ctx.one();
        for k in 1..m {
            let current = Poly::new(ctx.clone(), h.clone()).pow(r as u32);
            let diff = ctx.sub(monic.coeff(n - k), current.coeff(n - k));
            h[m - k] = ctx.mul(diff, r_inv);
        }
        let h = Poly::new(ctx.clone(), h);
        if let Some(g) = h_adic(&monic, &h) {
            let g = g.scale(lc);
            debug_assert_eq!(&g.compose(&h), f);
            found.push((g, h));
        }
    }
    Ok(if found.is_empty() {
        Decomposition::Indecomposable
    } else {
        Decomposition::Decomposable(found)
    })
}

/// `g` with `f = g(h)` if every `h`-adic digit of `f` is a constant.
fn h_adic(f: &Poly, h: &Poly) -> Option<Poly> {
    let ctx = f.ctx();
    let mut digits = Vec::new();
    let mut rest = f.clone();
    while !rest.is_zero() {
        let (q, r) = rest.divrem(h).ok()?;
        if r.degree().unwrap_or(0) > 0 {
            return None;
        }
        digits.push(r.coeff(0));
        rest = q;
    }
    Some(Poly::new(ctx.clone(), digits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;
    use crate::projmap::dickson;

    #[test]
    fn x6_plus_1() {
        let f5 = make_field(5, 1).unwrap();
        let f = Poly::from_ints(&f5, &[1, 0, 0, 0, 0, 0, 1]);
        let Decomposition::Decomposable(pairs) = decompose_tame_poly(&f).unwrap() else {
            panic!("x^6 + 1 decomposes");
        };
        assert_eq!(pairs.len(), 2);
        assert_eq!(pairs[0], (Poly::from_ints(&f5, &[1, 0, 0, 1]), Poly::from_ints(&f5, &[0, 0, 1])));
        assert_eq!(pairs[1], (Poly::from_ints(&f5, &[1, 0, 1]), Poly::from_ints(&f5, &[0, 0, 0, 1])));
    }

    #[test]
    fn wild_and_prime_degree() {
        let f5 = make_field(5, 1).unwrap();
        let x5 = Poly::monomial(&f5, f5.one(), 5);
        assert!(matches!(decompose_tame_poly(&x5), Err(Error::Unsupported(_))));
        let cubic = Poly::from_ints(&f5, &[1, 1, 0, 1]);
        assert_eq!(decompose_tame_poly(&cubic).unwrap(), Decomposition::Indecomposable);
    }

    #[test]
    fn dickson_15() {
        let f7 = make_field(7, 1).unwrap();
        for a in 1..7 {
            let a = f7.from_u64(a);
            let d15 = dickson(&f7, 15, a).unwrap();
            // D_{mn,a} = D_{m,a^n} ∘ D_{n,a}
            let outer3 = dickson(&f7, 3, f7.pow(a, 5)).unwrap();
            let outer5 = dickson(&f7, 5, f7.pow(a, 3)).unwrap();
            let d3 = dickson(&f7, 3, a).unwrap();
            let d5 = dickson(&f7, 5, a).unwrap();
            let Decomposition::Decomposable(pairs) = decompose_tame_poly(d15.num()).unwrap() else {
                panic!("D_15 decomposes");
            };
            assert_eq!(pairs.len(), 2);
            assert!(pairs.contains(&(outer3.num().clone(), d5.num().clone())));
            assert!(pairs.contains(&(outer5.num().clone(), d3.num().clone())));
        }
    }
}
