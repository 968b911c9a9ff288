//! Permutations of `{0, …, n−1}` acting on the right.
//!
//! Text forms are 1-based: cycle notation `(1 2 3)(4 5)`, `()` for the
//! identity, or a one-line image list `[2,3,1]`.

use std::fmt;

use crate::error::{Error, Result};

/// `images[i]` is the image of point `i`. Products act on the right:
/// `i^(g·h) = (i^g)^h`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u32>,
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.iter().all(|c| c.len() == 1) {
            return write!(f, "()");
        }
        for c in cycles.iter().filter(|c| c.len() > 1) {
            let pts: Vec<String> = c.iter().map(|&i| (i + 1).to_string()).collect();
            write!(f, "({})", pts.join(" "))?;
        }
        Ok(())
    }
}

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm { images: (0..n as u32).collect() }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Perm> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i as usize >= n || std::mem::replace(&mut seen[i as usize], true) {
                return Err(Error::invalid(format!("{images:?} is not a permutation")));
            }
        }
        Ok(Perm { images })
    }

    /// Product of the given cycles (0-based points) on `n` points.
    pub fn from_cycles(n: usize, cycles: &[Vec<u32>]) -> Result<Perm> {
        let mut images: Vec<u32> = (0..n as u32).collect();
        let mut seen = vec![false; n];
        for c in cycles {
            for (k, &a) in c.iter().enumerate() {
                if a as usize >= n {
                    return Err(Error::invalid(format!("point {} exceeds degree {n}", a + 1)));
                }
                if std::mem::replace(&mut seen[a as usize], true) {
                    return Err(Error::invalid(format!("point {} repeated in cycles", a + 1)));
                }
                images[a as usize] = c[(k + 1) % c.len()];
            }
        }
        Ok(Perm { images })
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: u32) -> u32 {
        self.images[i as usize]
    }

    /// Same permutation on `n ≥ degree` points.
    pub fn extend(&self, n: usize) -> Perm {
        let mut images = self.images.clone();
        images.extend(self.images.len() as u32..n as u32);
        Perm { images }
    }

    /// `self` then `other`.
    pub fn mul(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm { images: self.images.iter().map(|&i| other.images[i as usize]).collect() }
    }

    pub fn inv(&self) -> Perm {
        let mut images = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j as usize] = i as u32;
        }
        Perm { images }
    }

    pub fn pow(&self, e: i64) -> Perm {
        let mut base = if e < 0 { self.inv() } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Perm::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// `h⁻¹·self·h`.
    pub fn conj(&self, h: &Perm) -> Perm {
        h.inv().mul(self).mul(h)
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// All cycles including fixed points, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.images.len()];
        let mut out = Vec::new();
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            let mut c = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                c.push(i as u32);
                i = self.images[i] as usize;
            }
            out.push(c);
        }
        out
    }

    /// Cycle lengths, descending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1u64, |acc, c| {
            let l = c.len() as u64;
            acc / crate::frobset::gcd(acc, l) * l
        })
    }

    pub fn fixed_points(&self) -> usize {
        self.images.iter().enumerate().filter(|&(i, &j)| i as u32 == j).count()
    }

    /// `n − #cycles`.
    pub fn index(&self) -> usize {
        self.degree() - self.cycles().len()
    }

    /// Parse cycle notation or a one-line list. `degree` pads cycle notation
    /// (and is checked against a list); without it the largest point wins.
    pub fn parse(s: &str, degree: Option<usize>) -> Result<Perm> {
        let t = s.trim();
        let perr = |msg: String| Error::Parse { line: 1, col: 1, msg };
        if let Some(body) = t.strip_prefix('[') {
            let body = body.strip_suffix(']').ok_or_else(|| perr("missing ']'".into()))?;
            let images = body
                .split(',')
                .filter(|x| !x.trim().is_empty())
                .map(|x| {
                    x.trim()
                        .parse::<u32>()
                        .ok()
                        .and_then(|v| v.checked_sub(1))
                        .ok_or_else(|| perr(format!("bad image {x:?}")))
                })
                .collect::<Result<Vec<u32>>>()?;
            if degree.is_some_and(|n| n != images.len()) {
                return Err(Error::invalid(format!("{s:?} does not have degree {}", degree.unwrap())));
            }
            return Perm::from_images(images);
        }
        let mut cycles = Vec::new();
        let bytes = t.as_bytes();
        let mut pos = 0;
        let mut max = 0usize;
        while pos < bytes.len() {
            match bytes[pos] {
                b' ' | b'\t' => pos += 1,
                b'(' => {
                    let close = t[pos..]
                        .find(')')
                        .map(|k| pos + k)
                        .ok_or_else(|| Error::Parse { line: 1, col: pos + 1, msg: "unclosed cycle".into() })?;
                    let mut c = Vec::new();
                    for tok in t[pos + 1..close].split(|ch: char| ch == ',' || ch.is_whitespace()) {
                        if tok.is_empty() {
                            continue;
                        }
                        let v: u32 = tok.parse().ok().filter(|&v| v >= 1).ok_or_else(|| Error::Parse {
                            line: 1,
                            col: pos + 2,
                            msg: format!("bad point {tok:?}"),
                        })?;
                        max = max.max(v as usize);
                        c.push(v - 1);
                    }
                    cycles.push(c);
                    pos = close + 1;
                }
                other => {
                    return Err(Error::Parse {
                        line: 1,
                        col: pos + 1,
                        msg: format!("unexpected '{}'", other as char),
                    })
                }
            }
        }
        let n = match degree {
            Some(n) if n < max => return Err(Error::invalid(format!("point {max} exceeds degree {n}"))),
            Some(n) => n,
            None => max,
        };
        Perm::from_cycles(n, &cycles)
    }
}

/// Parse several permutations onto their common degree.
pub fn parse_perms(specs: &[impl AsRef<str>], degree: Option<usize>) -> Result<Vec<Perm>> {
    let perms = specs.iter().map(|s| Perm::parse(s.as_ref(), degree)).collect::<Result<Vec<_>>>()?;
    let n = perms.iter().map(Perm::degree).max().unwrap_or(0).max(degree.unwrap_or(0));
    Ok(perms.into_iter().map(|p| p.extend(n)).collect())
}

/// Product `g₁·g₂·…·g_r` (left to right).
pub fn product(perms: &[Perm], degree: usize) -> Perm {
    perms.iter().fold(Perm::identity(degree), |acc, g| acc.mul(g))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn right_action() {
        let a = Perm::parse("(1 2)", Some(3)).unwrap();
        let b = Perm::parse("(2 3)", Some(3)).unwrap();
        // 1 → 2 → 3
        assert_eq!(a.mul(&b).apply(0), 2);
        assert_eq!(a.mul(&b).to_string(), "(1 3 2)");
        assert_eq!(a.mul(&b).order(), 3);
        assert!(a.mul(&a.inv()).is_identity());
    }

    #[test]
    fn parsing() {
        let p = Perm::parse("(1 2 3)(4 5)", None).unwrap();
        assert_eq!(p.degree(), 5);
        assert_eq!(p.cycle_type(), vec![3, 2]);
        assert_eq!(Perm::parse("[2,3,1,5,4]", None).unwrap(), p);
        assert_eq!(Perm::parse("()", Some(4)).unwrap(), Perm::identity(4));
        assert!(Perm::parse("(1 2", None).is_err());
        assert!(Perm::parse("(1 1)", None).is_err());
        assert!(Perm::parse("[1,1]", None).is_err());
        assert_eq!(Perm::parse(&p.to_string(), Some(5)).unwrap(), p);
    }
}
