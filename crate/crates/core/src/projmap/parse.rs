//! Map spec strings.
//!
//! ```text
//! poly:c0,c1,…        rat:c0,c1,…/d0,d1,…
//! cyclic:n            dickson:n,a
//! cheb:n              cheb:n,a   (twisted)
//! redei:n,a
//! ```
//!
//! A coefficient is an integer (reduced into the prime field) or an element
//! literal in parentheses, `(r0,r1,…)`, residues low-to-high.

use std::sync::Arc;

use super::{chebyshev, chebyshev_twist, cyclic, dickson, redei, Poly, RationalMap};
use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElem};

fn perr(col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line: 1, col, msg: msg.into() }
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Self {
        Cursor { s: s.as_bytes(), pos: 0 }
    }

    fn col(&self) -> usize {
        self.pos + 1
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(perr(self.col(), format!("expected '{}'", c as char)))
        }
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.s.len() && (self.s[self.pos] == b'-' || self.s[self.pos] == b'+') {
            self.pos += 1;
        }
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap_or("");
        text.parse().map_err(|_| perr(start + 1, "expected an integer"))
    }

    fn end(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(perr(self.col(), format!("unexpected '{}'", c as char))),
        }
    }

    fn elem(&mut self, ctx: &FieldCtx) -> Result<FieldElem> {
        let col = self.col();
        if self.eat(b'(') {
            let mut residues = vec![self.int()?];
            while self.eat(b',') {
                residues.push(self.int()?);
            }
            self.expect(b')')?;
            ctx.from_residues(&residues).map_err(|e| perr(col, e.to_string()))
        } else {
            Ok(ctx.from_i64(self.int()?))
        }
    }

    fn coeff_list(&mut self, ctx: &Arc<FieldCtx>) -> Result<Poly> {
        let mut coeffs = vec![self.elem(ctx)?];
        while self.eat(b',') {
            coeffs.push(self.elem(ctx)?);
        }
        Ok(Poly::new(ctx.clone(), coeffs))
    }
}

/// Parse an element literal: `r0,r1,…`, `(r0,r1,…)` or an integer.
pub fn parse_elem(ctx: &FieldCtx, s: &str) -> Result<FieldElem> {
    let mut cur = Cursor::new(s);
    let e = if cur.peek() == Some(b'(') {
        cur.elem(ctx)?
    } else {
        let col = cur.col();
        let mut residues = vec![cur.int()?];
        while cur.eat(b',') {
            residues.push(cur.int()?);
        }
        ctx.from_residues(&residues).map_err(|e| perr(col, e.to_string()))?
    };
    cur.end()?;
    Ok(e)
}

/// Parse a map spec over `ctx`.
pub fn parse_map(ctx: &Arc<FieldCtx>, spec: &str) -> Result<RationalMap> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| perr(1, "expected '<kind>:' prefix"))?;
    let offset = kind.len() + 1;
    let shift = |e: Error| match e {
        Error::Parse { line, col, msg } => Error::Parse { line, col: col + offset, msg },
        other => other,
    };
    let mut cur = Cursor::new(rest);
    let parsed = (|| -> Result<RationalMap> {
        let map = match kind.trim() {
            "poly" => {
                let p = cur.coeff_list(ctx)?;
                cur.end()?;
                RationalMap::poly(p)?
            }
            "rat" => {
                let num = cur.coeff_list(ctx)?;
                cur.expect(b'/')?;
                let den = cur.coeff_list(ctx)?;
                cur.end()?;
                RationalMap::new(num, den)?
            }
            "cyclic" => {
                let n = degree_arg(&mut cur)?;
                cur.end()?;
                cyclic(ctx, n)?
            }
            "dickson" | "redei" => {
                let n = degree_arg(&mut cur)?;
                cur.expect(b',')?;
                let a = cur.elem(ctx)?;
                cur.end()?;
                if kind.trim() == "dickson" {
                    dickson(ctx, n, a)?
                } else {
                    redei(ctx, n, a)?
                }
            }
            "cheb" => {
                let n = degree_arg(&mut cur)?;
                if cur.eat(b',') {
                    let a = cur.elem(ctx)?;
                    cur.end()?;
                    chebyshev_twist(ctx, n, a)?
                } else {
                    cur.end()?;
                    chebyshev(ctx, n)?
                }
            }
            other => return Err(perr(1, format!("unknown map kind {other:?}"))),
        };
        Ok(map)
    })();
    parsed.map_err(shift)
}

fn degree_arg(cur: &mut Cursor) -> Result<u64> {
    let col = cur.col();
    let n = cur.int()?;
    u64::try_from(n).map_err(|_| perr(col, "degree must be nonnegative"))
}
