//! Finite fields `F_{p^k}` and relative extensions `F_q ⊂ F_{q^t}`.
//!
//! Every field is built over an explicit base: the prime field has no base,
//! an extension carries a monic irreducible modulus over its base. Elements
//! are opaque [`FieldElem`] handles whose meaning depends on the owning
//! [`FieldCtx`]:
//!
//! * prime fields: the residue itself;
//! * small fields (order ≤ [`TABLE_LIMIT`]): Zech logarithms, `0` is zero
//!   and `i + 1` is `g^i` for a fixed primitive `g`;
//! * larger fields: base handles packed into a `u64`, polynomial basis.
//!
//! Independently of the representation each element has a *canonical index*
//! `Σ index(c_i)·Q^i` (`c_i` its relative coordinates, `Q` the base order).
//! Digits of the canonical index in base `p` are the element literal, and an
//! element of an ancestor field keeps its canonical index when embedded.

pub mod tower;
pub mod upoly;

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};

pub use tower::Tower;

/// Default cap on the number of elements of any constructed field.
pub const DEFAULT_CAP: u64 = 1 << 24;
/// Fields up to this order get Zech-log tables.
pub const TABLE_LIMIT: u64 = 1 << 20;
const MAX_PACK: usize = 64;

/// Handle to an element of some [`FieldCtx`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Debug)]
pub struct FieldElem(u64);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Raw handle; only meaningful together with the owning context.
    pub fn raw(self) -> u64 {
        self.0
    }
}

struct Zech {
    q1: u64,
    half: u64,
    /// log -> canonical index
    exp: Vec<u32>,
    /// canonical index -> handle
    log: Vec<u32>,
    /// n -> handle of 1 + g^n
    zech: Vec<u32>,
}

enum Repr {
    Prime,
    Table(Box<Zech>),
    Poly { width: u32 },
}

/// A finite field, immutable after construction.
pub struct FieldCtx {
    p: u64,
    rel_degree: u32,
    degree: u32,
    order: u64,
    modulus: Vec<FieldElem>,
    base: Option<Arc<FieldCtx>>,
    repr: Repr,
    fingerprint: u64,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldCtx({}^{}", self.p, self.degree)?;
        if self.base.is_some() {
            write!(f, ", relative degree {}", self.rel_degree)?;
        }
        write!(f, ")")
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.fingerprint == other.fingerprint && self.order == other.order
    }
}

impl Eq for FieldCtx {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization by trial division, ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn checked_order(q: u64, t: u32, cap: u64) -> Result<u64> {
    let mut acc: u128 = 1;
    for _ in 0..t {
        acc *= q as u128;
        if acc > cap as u128 {
            let mut full: u128 = 1;
            for _ in 0..t {
                full = full.saturating_mul(q as u128);
            }
            return Err(Error::cap("field order", full, cap as u128));
        }
    }
    Ok(acc as u64)
}

fn bits_for(max_value: u64) -> u32 {
    64 - max_value.leading_zeros()
}

/// `F_{p^k}` with the default cap.
pub fn make_field(p: u64, k: u32) -> Result<Arc<FieldCtx>> {
    make_field_capped(p, k, DEFAULT_CAP)
}

pub fn make_field_capped(p: u64, k: u32, cap: u64) -> Result<Arc<FieldCtx>> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    if p >= 1 << 32 {
        return Err(Error::Unsupported(format!("characteristic {p} needs more than 32 bits")));
    }
    if k < 1 {
        return Err(Error::invalid("extension degree must be at least 1"));
    }
    checked_order(p, k, cap)?;
    let prime = Arc::new(FieldCtx::prime(p));
    if k == 1 {
        return Ok(prime);
    }
    make_extension_capped(&prime, k, cap)
}

/// Relative extension of degree `t` with the default cap.
pub fn make_extension(base: &Arc<FieldCtx>, t: u32) -> Result<Arc<FieldCtx>> {
    make_extension_capped(base, t, DEFAULT_CAP)
}

pub fn make_extension_capped(base: &Arc<FieldCtx>, t: u32, cap: u64) -> Result<Arc<FieldCtx>> {
    if t < 1 {
        return Err(Error::invalid("extension degree must be at least 1"));
    }
    let order = checked_order(base.order, t, cap)?;
    if t == 1 {
        return Ok(base.clone());
    }
    let modulus = least_irreducible(base, t);
    FieldCtx::extension(base.clone(), modulus, order).map(Arc::new)
}

/// Lexicographically least monic irreducible of degree `r` over `base`,
/// comparing `(c_0, c_1, …)` with `c_0` most significant.
fn least_irreducible(base: &FieldCtx, r: u32) -> Vec<FieldElem> {
    let q = base.order;
    if r == 1 {
        return vec![FieldElem::ZERO, base.one()];
    }
    let total = q.pow(r);
    // candidates with c_0 = 0 are divisible by x
    for n in q.pow(r - 1)..total {
        let mut coeffs = vec![FieldElem::ZERO; r as usize + 1];
        let mut m = n;
        for i in (0..r as usize).rev() {
            coeffs[i] = base.from_index(m % q);
            m /= q;
        }
        coeffs[r as usize] = base.one();
        if upoly::is_irreducible(base, &coeffs) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FieldCtx {
    fn prime(p: u64) -> FieldCtx {
        let mut h = DefaultHasher::new();
        p.hash(&mut h);
        FieldCtx {
            p,
            rel_degree: 1,
            degree: 1,
            order: p,
            modulus: vec![FieldElem::ZERO, FieldElem(1)],
            base: None,
            repr: Repr::Prime,
            fingerprint: h.finish(),
        }
    }

    fn extension(base: Arc<FieldCtx>, modulus: Vec<FieldElem>, order: u64) -> Result<FieldCtx> {
        let r = (modulus.len() - 1) as u32;
        let mut h = DefaultHasher::new();
        base.fingerprint.hash(&mut h);
        for &c in &modulus {
            base.index(c).hash(&mut h);
        }
        let width = base.handle_bits();
        if width as usize * r as usize > MAX_PACK {
            return Err(Error::Unsupported(format!(
                "relative degree {r} over a base with {width}-bit handles does not pack into 64 bits"
            )));
        }
        let mut ctx = FieldCtx {
            p: base.p,
            rel_degree: r,
            degree: base.degree * r,
            order,
            modulus,
            base: Some(base),
            repr: Repr::Poly { width },
            fingerprint: h.finish(),
        };
        if order <= TABLE_LIMIT {
            let zech = ctx.build_tables();
            ctx.repr = Repr::Table(Box::new(zech));
        }
        Ok(ctx)
    }

    /// Same field in the slow polynomial-basis representation.
    /// Extension fields only; used to build tables and as a test oracle.
    pub fn poly_oracle(&self) -> Option<FieldCtx> {
        let base = self.base.clone()?;
        let width = base.handle_bits();
        if width as usize * self.rel_degree as usize > MAX_PACK {
            return None;
        }
        Some(FieldCtx {
            p: self.p,
            rel_degree: self.rel_degree,
            degree: self.degree,
            order: self.order,
            modulus: self.modulus.clone(),
            base: Some(base),
            repr: Repr::Poly { width },
            fingerprint: self.fingerprint,
        })
    }

    fn build_tables(&self) -> Zech {
        let q = self.order;
        let q1 = q - 1;
        let factors: Vec<u64> = factorize(q1).into_iter().map(|(f, _)| f).collect();
        let one = self.one();
        let gen = (1..q)
            .map(|i| self.from_index(i))
            .find(|&g| factors.iter().all(|&f| self.pow(g, q1 / f) != one))
            .expect("multiplicative group is cyclic");
        let mut exp = vec![0u32; q1 as usize];
        let mut log = vec![0u32; q as usize];
        let mut cur = one;
        for i in 0..q1 {
            let idx = self.index(cur);
            exp[i as usize] = idx as u32;
            log[idx as usize] = (i + 1) as u32;
            cur = self.mul(cur, gen);
        }
        debug_assert_eq!(cur, one);
        let mut zech = vec![0u32; q1 as usize];
        for n in 0..q1 {
            let e = self.from_index(exp[n as usize] as u64);
            let s = self.add(e, one);
            zech[n as usize] = log[self.index(s) as usize];
        }
        let half = if self.p == 2 { 0 } else { q1 / 2 };
        Zech { q1, half, exp, log, zech }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    /// Absolute degree over the prime field.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Degree over the immediate base (1 for prime fields).
    pub fn rel_degree(&self) -> u32 {
        self.rel_degree
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn base(&self) -> Option<&Arc<FieldCtx>> {
        self.base.as_ref()
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    /// Relative modulus over the base, low-to-high, monic.
    /// For the prime field this is `x`.
    pub fn modulus(&self) -> &[FieldElem] {
        &self.modulus
    }

    /// Modulus as canonical indices of the base coefficients.
    pub fn modulus_indices(&self) -> Vec<u64> {
        match &self.base {
            Some(b) => self.modulus.iter().map(|&c| b.index(c)).collect(),
            None => vec![0, 1],
        }
    }

    /// `true` when `other` is this field or one of its bases.
    pub fn contains_subfield(&self, other: &FieldCtx) -> bool {
        let mut cur = Some(self);
        while let Some(c) = cur {
            if c == other {
                return true;
            }
            cur = c.base.as_deref();
        }
        false
    }

    pub fn is_table(&self) -> bool {
        matches!(self.repr, Repr::Table(_))
    }

    fn handle_bits(&self) -> u32 {
        match &self.repr {
            Repr::Prime => bits_for(self.p - 1),
            Repr::Table(_) => bits_for(self.order - 1),
            Repr::Poly { width } => width * self.rel_degree,
        }
    }

    #[inline]
    pub fn zero(&self) -> FieldElem {
        FieldElem::ZERO
    }

    #[inline]
    pub fn one(&self) -> FieldElem {
        match &self.repr {
            Repr::Prime | Repr::Table(_) => FieldElem(1),
            Repr::Poly { .. } => {
                let b = self.base.as_ref().expect("extension has a base");
                FieldElem(b.one().0)
            }
        }
    }

    /// Image of the integer `n` under `Z → F_p ⊂ self`.
    pub fn from_u64(&self, n: u64) -> FieldElem {
        self.from_index(n % self.p)
    }

    pub fn from_i64(&self, n: i64) -> FieldElem {
        self.from_index(n.rem_euclid(self.p as i64) as u64)
    }

    /// Element with the given canonical index.
    pub fn from_index(&self, idx: u64) -> FieldElem {
        debug_assert!(idx < self.order);
        match &self.repr {
            Repr::Prime => FieldElem(idx),
            Repr::Table(z) => FieldElem(z.log[idx as usize] as u64),
            Repr::Poly { width } => {
                let b = self.base.as_ref().expect("extension has a base");
                let q = b.order;
                let mut m = idx;
                let mut packed = 0u64;
                for i in 0..self.rel_degree {
                    packed |= b.from_index(m % q).0 << (i * width);
                    m /= q;
                }
                FieldElem(packed)
            }
        }
    }

    /// Canonical index in `0..order`.
    pub fn index(&self, e: FieldElem) -> u64 {
        match &self.repr {
            Repr::Prime => e.0,
            Repr::Table(z) => {
                if e.0 == 0 {
                    0
                } else {
                    z.exp[(e.0 - 1) as usize] as u64
                }
            }
            Repr::Poly { width } => {
                let b = self.base.as_ref().expect("extension has a base");
                let mask = (1u64 << width) - 1;
                let mut acc = 0u64;
                for i in (0..self.rel_degree).rev() {
                    acc = acc * b.order + b.index(FieldElem((e.0 >> (i * width)) & mask));
                }
                acc
            }
        }
    }

    /// A bijection onto `0..order` that is cheap to evaluate; not the
    /// canonical index. Used for seen-sets during scans.
    #[inline]
    pub fn dense_key(&self, e: FieldElem) -> u64 {
        match &self.repr {
            Repr::Prime | Repr::Table(_) => e.0,
            Repr::Poly { width } => {
                let b = self.base.as_ref().expect("extension has a base");
                let mask = (1u64 << width) - 1;
                let mut acc = 0u64;
                for i in (0..self.rel_degree).rev() {
                    acc = acc * b.order + b.dense_key(FieldElem((e.0 >> (i * width)) & mask));
                }
                acc
            }
        }
    }

    /// Inverse of [`FieldCtx::dense_key`].
    #[inline]
    pub fn from_dense(&self, k: u64) -> FieldElem {
        match &self.repr {
            Repr::Prime | Repr::Table(_) => FieldElem(k),
            Repr::Poly { width } => {
                let b = self.base.as_ref().expect("extension has a base");
                let q = b.order;
                let mut m = k;
                let mut packed = 0u64;
                for i in 0..self.rel_degree {
                    packed |= b.from_dense(m % q).0 << (i * width);
                    m /= q;
                }
                FieldElem(packed)
            }
        }
    }

    /// Relative coordinates over the base (for the prime field: `[e]`).
    pub fn coeffs(&self, e: FieldElem) -> Vec<FieldElem> {
        match &self.base {
            None => vec![e],
            Some(b) => {
                let q = b.order;
                let mut m = self.index(e);
                (0..self.rel_degree)
                    .map(|_| {
                        let c = b.from_index(m % q);
                        m /= q;
                        c
                    })
                    .collect()
            }
        }
    }

    pub fn from_coeffs(&self, coeffs: &[FieldElem]) -> Result<FieldElem> {
        match &self.base {
            None => match coeffs {
                [c] if c.0 < self.p => Ok(*c),
                _ => Err(Error::invalid("prime field element takes one residue")),
            },
            Some(b) => {
                if coeffs.len() > self.rel_degree as usize {
                    return Err(Error::invalid("too many coordinates"));
                }
                let mut idx = 0u64;
                for &c in coeffs.iter().rev() {
                    idx = idx * b.order + b.index(c);
                }
                Ok(self.from_index(idx))
            }
        }
    }

    /// Residues over `F_p`, low-to-high, length = absolute degree.
    pub fn residues(&self, e: FieldElem) -> Vec<u64> {
        let mut m = self.index(e);
        (0..self.degree)
            .map(|_| {
                let r = m % self.p;
                m /= self.p;
                r
            })
            .collect()
    }

    pub fn from_residues(&self, residues: &[i64]) -> Result<FieldElem> {
        if residues.len() > self.degree as usize {
            return Err(Error::invalid(format!(
                "element literal has {} residues, field degree is {}",
                residues.len(),
                self.degree
            )));
        }
        let mut idx = 0u64;
        for &r in residues.iter().rev() {
            idx = idx * self.p + r.rem_euclid(self.p as i64) as u64;
        }
        Ok(self.from_index(idx))
    }

    /// Embed an element of `from`, which must be this field or a base of it.
    pub fn embed(&self, from: &FieldCtx, e: FieldElem) -> Result<FieldElem> {
        if !self.contains_subfield(from) {
            return Err(Error::FieldMismatch(format!("{from:?} is not a subfield of {self:?}")));
        }
        Ok(self.from_index(from.index(e)))
    }

    /// All elements in lexicographic order of their residue vectors
    /// (first residue most significant), zero first.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        let k = self.degree;
        let p = self.p;
        (0..self.order).map(move |n| {
            let mut m = n;
            let mut idx = 0u64;
            for _ in 0..k {
                idx = idx * p + m % p;
                m /= p;
            }
            self.from_index(idx)
        })
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        match &self.repr {
            Repr::Prime => {
                let s = a.0 + b.0;
                FieldElem(if s >= self.p { s - self.p } else { s })
            }
            Repr::Table(z) => {
                if a.0 == 0 {
                    return b;
                }
                if b.0 == 0 {
                    return a;
                }
                let (la, lb) = (a.0 - 1, b.0 - 1);
                let n = if lb >= la { lb - la } else { lb + z.q1 - la };
                let s = z.zech[n as usize] as u64;
                if s == 0 {
                    return FieldElem::ZERO;
                }
                let l = la + s - 1;
                FieldElem(1 + if l >= z.q1 { l - z.q1 } else { l })
            }
            Repr::Poly { width } => self.lanes(*width, a, b, |bf, x, y| bf.add(x, y)),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        match &self.repr {
            Repr::Prime => FieldElem(if a.0 == 0 { 0 } else { self.p - a.0 }),
            Repr::Table(z) => {
                if a.0 == 0 || self.p == 2 {
                    return a;
                }
                let l = a.0 - 1 + z.half;
                FieldElem(1 + if l >= z.q1 { l - z.q1 } else { l })
            }
            Repr::Poly { width } => self.lanes(*width, a, FieldElem::ZERO, |bf, x, _| bf.neg(x)),
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        match &self.repr {
            Repr::Prime => FieldElem(if a.0 >= b.0 { a.0 - b.0 } else { a.0 + self.p - b.0 }),
            Repr::Table(_) => self.add(a, self.neg(b)),
            Repr::Poly { width } => self.lanes(*width, a, b, |bf, x, y| bf.sub(x, y)),
        }
    }

    #[inline]
    fn lanes(
        &self,
        width: u32,
        a: FieldElem,
        b: FieldElem,
        op: impl Fn(&FieldCtx, FieldElem, FieldElem) -> FieldElem,
    ) -> FieldElem {
        let bf = self.base.as_deref().expect("extension has a base");
        let mask = (1u64 << width) - 1;
        let mut out = 0u64;
        for i in 0..self.rel_degree {
            let s = i * width;
            let x = FieldElem((a.0 >> s) & mask);
            let y = FieldElem((b.0 >> s) & mask);
            out |= op(bf, x, y).0 << s;
        }
        FieldElem(out)
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        match &self.repr {
            Repr::Prime => FieldElem(a.0 * b.0 % self.p),
            Repr::Table(z) => {
                if a.0 == 0 || b.0 == 0 {
                    return FieldElem::ZERO;
                }
                let l = a.0 - 1 + b.0 - 1;
                FieldElem(1 + if l >= z.q1 { l - z.q1 } else { l })
            }
            Repr::Poly { width } => self.poly_mul(*width, a, b),
        }
    }

    fn poly_mul(&self, width: u32, a: FieldElem, b: FieldElem) -> FieldElem {
        let bf = self.base.as_deref().expect("extension has a base");
        let r = self.rel_degree as usize;
        let mask = (1u64 << width) - 1;
        let mut x = [FieldElem::ZERO; MAX_PACK];
        let mut y = [FieldElem::ZERO; MAX_PACK];
        for i in 0..r {
            x[i] = FieldElem((a.0 >> (i as u32 * width)) & mask);
            y[i] = FieldElem((b.0 >> (i as u32 * width)) & mask);
        }
        let mut prod = [FieldElem::ZERO; 2 * MAX_PACK];
        for i in 0..r {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..r {
                if !y[j].is_zero() {
                    prod[i + j] = bf.add(prod[i + j], bf.mul(x[i], y[j]));
                }
            }
        }
        for i in (r..2 * r - 1).rev() {
            let c = prod[i];
            if c.is_zero() {
                continue;
            }
            for j in 0..r {
                let m = self.modulus[j];
                if !m.is_zero() {
                    prod[i - r + j] = bf.sub(prod[i - r + j], bf.mul(c, m));
                }
            }
        }
        let mut out = 0u64;
        for (i, c) in prod.iter().enumerate().take(r) {
            out |= c.0 << (i as u32 * width);
        }
        FieldElem(out)
    }

    #[inline]
    pub fn square(&self, a: FieldElem) -> FieldElem {
        self.mul(a, a)
    }

    pub fn pow(&self, a: FieldElem, mut e: u64) -> FieldElem {
        if let Repr::Table(z) = &self.repr {
            if a.0 == 0 {
                return if e == 0 { FieldElem(1) } else { a };
            }
            let l = ((a.0 - 1) as u128 * (e % z.q1) as u128 % z.q1 as u128) as u64;
            return FieldElem(1 + l);
        }
        let mut result = self.one();
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(base, base);
            }
        }
        result
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: FieldElem) -> Option<FieldElem> {
        if a.is_zero() {
            return None;
        }
        Some(match &self.repr {
            Repr::Prime => {
                let (mut r0, mut r1) = (self.p as i64, a.0 as i64);
                let (mut s0, mut s1) = (0i64, 1i64);
                while r1 != 0 {
                    let q = r0 / r1;
                    (r0, r1) = (r1, r0 - q * r1);
                    (s0, s1) = (s1, s0 - q * s1);
                }
                FieldElem(s0.rem_euclid(self.p as i64) as u64)
            }
            Repr::Table(z) => {
                let l = a.0 - 1;
                FieldElem(1 + if l == 0 { 0 } else { z.q1 - l })
            }
            Repr::Poly { .. } => self.pow(a, self.order - 2),
        })
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Option<FieldElem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    /// `x ↦ x^Q` with `Q` the base order (identity on prime fields).
    pub fn frobenius(&self, a: FieldElem) -> FieldElem {
        match &self.base {
            None => a,
            Some(b) => self.pow(a, b.order),
        }
    }

    pub fn is_square(&self, a: FieldElem) -> bool {
        if a.is_zero() || self.p == 2 {
            return true;
        }
        match &self.repr {
            Repr::Table(_) => (a.0 - 1).is_multiple_of(2),
            _ => self.pow(a, (self.order - 1) / 2) == self.one(),
        }
    }

    /// Quadratic character: 0, 1 or -1.
    pub fn quadratic_character(&self, a: FieldElem) -> i8 {
        if a.is_zero() {
            0
        } else if self.is_square(a) {
            1
        } else {
            -1
        }
    }

    /// Some square root, if one exists.
    pub fn sqrt(&self, a: FieldElem) -> Option<FieldElem> {
        if a.is_zero() {
            return Some(a);
        }
        if let Repr::Table(z) = &self.repr {
            let l = a.0 - 1;
            if self.p == 2 {
                let l2 = if l.is_multiple_of(2) { l / 2 } else { (l + z.q1) / 2 };
                return Some(FieldElem(1 + l2));
            }
            return l.is_multiple_of(2).then(|| FieldElem(1 + l / 2));
        }
        if !self.is_square(a) {
            return None;
        }
        if self.p == 2 {
            return Some(self.pow(a, self.order / 2));
        }
        self.tonelli_shanks(a)
    }

    fn tonelli_shanks(&self, a: FieldElem) -> Option<FieldElem> {
        let q1 = self.order - 1;
        let s = q1.trailing_zeros();
        let odd = q1 >> s;
        let one = self.one();
        let minus_one = self.neg(one);
        let z = (1..self.order)
            .map(|i| self.from_index(i))
            .find(|&z| self.pow(z, q1 / 2) == minus_one)?;
        let mut m = s;
        let mut c = self.pow(z, odd);
        let mut t = self.pow(a, odd);
        let mut r = self.pow(a, odd.div_ceil(2));
        while t != one {
            let mut i = 0;
            let mut tt = t;
            while tt != one {
                tt = self.square(tt);
                i += 1;
                if i == m {
                    return None;
                }
            }
            let b = self.pow(c, 1 << (m - i - 1));
            m = i;
            c = self.square(b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        Some(r)
    }

    /// Field spec string `p^k`, or `p^k/t1/t2…` for relative chains.
    pub fn spec(&self) -> String {
        let mut chain = Vec::new();
        let mut cur = Some(self);
        while let Some(c) = cur {
            chain.push(c.rel_degree);
            cur = c.base.as_deref();
        }
        chain.reverse();
        let mut s = format!("{}^{}", self.p, chain.get(1).copied().unwrap_or(1));
        for r in chain.iter().skip(2) {
            s.push_str(&format!("/{r}"));
        }
        s
    }

    /// Element literal: residues low-to-high, comma separated.
    pub fn format_elem(&self, e: FieldElem) -> String {
        self.residues(e)
            .iter()
            .map(|r| r.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Parse a field spec `p^k` (also accepts a bare prime `p`).
pub fn parse_field_spec(spec: &str, cap: u64) -> Result<Arc<FieldCtx>> {
    let s = spec.trim();
    let (p_str, k_str) = match s.split_once('^') {
        Some((a, b)) => (a, b),
        None => (s, "1"),
    };
    let p: u64 = p_str.trim().parse().map_err(|_| Error::Parse {
        line: 1,
        col: 1,
        msg: format!("expected a prime in field spec {spec:?}"),
    })?;
    let k: u32 = k_str.trim().parse().map_err(|_| Error::Parse {
        line: 1,
        col: p_str.len() + 2,
        msg: format!("expected an exponent in field spec {spec:?}"),
    })?;
    make_field_capped(p, k, cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residues_of(f: &FieldCtx) -> Vec<u64> {
        f.modulus_indices()
    }

    #[test]
    fn small_moduli() {
        assert_eq!(residues_of(&make_field(2, 1).unwrap()), vec![0, 1]);
        assert_eq!(residues_of(&make_field(2, 2).unwrap()), vec![1, 1, 1]);
        assert_eq!(residues_of(&make_field(3, 2).unwrap()), vec![1, 0, 1]);
        // x^3 + 2x^2 + 1 is the first cubic over F_3 without roots
        assert_eq!(residues_of(&make_field(3, 3).unwrap()), vec![1, 0, 2, 1]);
    }

    #[test]
    fn errors() {
        assert!(matches!(make_field(4, 1), Err(Error::Invalid(_))));
        assert!(matches!(make_field(3, 0), Err(Error::Invalid(_))));
        assert!(matches!(make_field(2, 30), Err(Error::Cap { .. })));
        assert!(make_field_capped(2, 30, 1 << 31).is_ok());
    }

    #[test]
    fn representations_agree() {
        for (p, k) in [(2u64, 4u32), (3, 3), (5, 2), (7, 2)] {
            let f = make_field(p, k).unwrap();
            assert!(f.is_table());
            let slow = f.poly_oracle().unwrap();
            for i in 0..f.order() {
                for j in 0..f.order() {
                    let (a, b) = (f.from_index(i), f.from_index(j));
                    let (sa, sb) = (slow.from_index(i), slow.from_index(j));
                    assert_eq!(f.index(f.mul(a, b)), slow.index(slow.mul(sa, sb)));
                    assert_eq!(f.index(f.add(a, b)), slow.index(slow.add(sa, sb)));
                    assert_eq!(f.index(f.sub(a, b)), slow.index(slow.sub(sa, sb)));
                }
            }
        }
    }

    #[test]
    fn wilson_in_f9() {
        let f = make_field(3, 2).unwrap();
        let prod = f.elements().skip(1).fold(f.one(), |acc, x| f.mul(acc, x));
        assert_eq!(prod, f.neg(f.one()));
        let first: Vec<u64> = f.elements().take(4).map(|e| f.index(e)).collect();
        // residue vectors (0,0), (0,1), (0,2), (1,0)
        assert_eq!(first, vec![0, 3, 6, 1]);
    }

    #[test]
    fn relative_frobenius_fixes_base() {
        let f4 = make_field(2, 2).unwrap();
        let f64_ = make_extension(&f4, 3).unwrap();
        assert_eq!(f64_.order(), 64);
        let fixed: Vec<FieldElem> = f64_.elements().filter(|&x| f64_.frobenius(x) == x).collect();
        assert_eq!(fixed.len(), 4);
        let embedded: Vec<FieldElem> =
            f4.elements().map(|x| f64_.embed(&f4, x).unwrap()).collect();
        for x in fixed {
            assert!(embedded.contains(&x));
        }
        let f3 = make_field(3, 1).unwrap();
        assert_eq!(*make_extension(&f3, 1).unwrap(), *f3);
    }

    #[test]
    fn inverse_and_sqrt() {
        for f in [make_field(13, 1).unwrap(), make_field(5, 2).unwrap(), make_field(2, 3).unwrap()] {
            for x in f.elements().skip(1) {
                assert_eq!(f.mul(x, f.inv(x).unwrap()), f.one());
                let sq = f.square(x);
                let r = f.sqrt(sq).unwrap();
                assert_eq!(f.square(r), sq);
            }
        }
    }

    #[test]
    fn literals_roundtrip() {
        let f = make_field(5, 3).unwrap();
        let e = f.from_residues(&[1, 2, 3]).unwrap();
        assert_eq!(f.format_elem(e), "1,2,3");
        assert_eq!(f.index(e), 1 + 2 * 5 + 3 * 25);
        assert!(f.from_residues(&[1, 2, 3, 4]).is_err());
        let g = parse_field_spec("3^2", DEFAULT_CAP).unwrap();
        assert_eq!(g.order(), 9);
        assert!(matches!(parse_field_spec("x^2", DEFAULT_CAP), Err(Error::Parse { .. })));
    }
}
