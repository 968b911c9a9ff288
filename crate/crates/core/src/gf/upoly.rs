//! Dense univariate polynomials over a [`FieldCtx`], stored low-to-high as
//! plain element vectors. Used by field construction and by `projmap`.

use super::{FieldCtx, FieldElem};

pub fn trim(v: &mut Vec<FieldElem>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

pub fn degree(a: &[FieldElem]) -> Option<usize> {
    a.iter().rposition(|c| !c.is_zero())
}

pub fn add(ctx: &FieldCtx, a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(FieldElem::ZERO);
        let y = b.get(i).copied().unwrap_or(FieldElem::ZERO);
        out.push(ctx.add(x, y));
    }
    trim(&mut out);
    out
}

pub fn sub(ctx: &FieldCtx, a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(FieldElem::ZERO);
        let y = b.get(i).copied().unwrap_or(FieldElem::ZERO);
        out.push(ctx.sub(x, y));
    }
    trim(&mut out);
    out
}

pub fn scale(ctx: &FieldCtx, a: &[FieldElem], c: FieldElem) -> Vec<FieldElem> {
    let mut out: Vec<FieldElem> = a.iter().map(|&x| ctx.mul(x, c)).collect();
    trim(&mut out);
    out
}

pub fn mul(ctx: &FieldCtx, a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![FieldElem::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] = ctx.add(out[i + j], ctx.mul(x, y));
            }
        }
    }
    trim(&mut out);
    out
}

/// Quotient and remainder. Panics on a zero divisor.
pub fn divrem(ctx: &FieldCtx, a: &[FieldElem], b: &[FieldElem]) -> (Vec<FieldElem>, Vec<FieldElem>) {
    let db = degree(b).expect("division by the zero polynomial");
    let mut r: Vec<FieldElem> = a.to_vec();
    trim(&mut r);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let lc_inv = ctx.inv(b[db]).expect("leading coefficient is nonzero");
    let mut q = vec![FieldElem::ZERO; r.len() - db];
    for i in (db..r.len()).rev() {
        let c = r[i];
        if c.is_zero() {
            continue;
        }
        let f = ctx.mul(c, lc_inv);
        q[i - db] = f;
        for j in 0..=db {
            r[i - db + j] = ctx.sub(r[i - db + j], ctx.mul(f, b[j]));
        }
    }
    r.truncate(db);
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

pub fn rem(ctx: &FieldCtx, a: &[FieldElem], m: &[FieldElem]) -> Vec<FieldElem> {
    divrem(ctx, a, m).1
}

pub fn mulmod(ctx: &FieldCtx, a: &[FieldElem], b: &[FieldElem], m: &[FieldElem]) -> Vec<FieldElem> {
    rem(ctx, &mul(ctx, a, b), m)
}

pub fn powmod(ctx: &FieldCtx, a: &[FieldElem], mut e: u64, m: &[FieldElem]) -> Vec<FieldElem> {
    let mut result = rem(ctx, &[ctx.one()], m);
    let mut base = rem(ctx, a, m);
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod(ctx, &result, &base, m);
        }
        e >>= 1;
        if e > 0 {
            base = mulmod(ctx, &base, &base, m);
        }
    }
    result
}

pub fn make_monic(ctx: &FieldCtx, a: &[FieldElem]) -> Vec<FieldElem> {
    match degree(a) {
        None => Vec::new(),
        Some(d) => {
            let inv = ctx.inv(a[d]).expect("nonzero leading coefficient");
            scale(ctx, &a[..=d], inv)
        }
    }
}

/// Monic gcd; the gcd of two zero polynomials is zero.
pub fn gcd(ctx: &FieldCtx, a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(ctx, &x, &y);
        x = y;
        y = r;
    }
    make_monic(ctx, &x)
}

pub fn eval(ctx: &FieldCtx, a: &[FieldElem], x: FieldElem) -> FieldElem {
    let mut acc = FieldElem::ZERO;
    for &c in a.iter().rev() {
        acc = ctx.add(ctx.mul(acc, x), c);
    }
    acc
}

pub fn derivative(ctx: &FieldCtx, a: &[FieldElem]) -> Vec<FieldElem> {
    let mut out: Vec<FieldElem> = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| ctx.mul(ctx.from_u64(i as u64), c))
        .collect();
    trim(&mut out);
    out
}

/// Rabin's irreducibility test for a monic polynomial over `ctx`.
pub fn is_irreducible(ctx: &FieldCtx, f: &[FieldElem]) -> bool {
    let r = match degree(f) {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(d) => d,
    };
    let x = vec![FieldElem::ZERO, ctx.one()];
    let q = ctx.order();
    let mut frob = Vec::with_capacity(r + 1);
    frob.push(x.clone());
    for i in 1..=r {
        let next = powmod(ctx, &frob[i - 1], q, f);
        frob.push(next);
    }
    if frob[r] != rem(ctx, &x, f) {
        return false;
    }
    for (s, _) in super::factorize(r as u64) {
        let g = gcd(ctx, &sub(ctx, &frob[r / s as usize], &x), f);
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}
