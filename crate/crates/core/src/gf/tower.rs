//! Scan fields `F_{q^t}` over a fixed `F_q`, built as short relative chains.
//!
//! `F_{q^t}` is reached as `F_q ⊂ F_{q^s} ⊂ F_{q^t}` with `s` the largest
//! proper divisor of `t` whose level still fits a Zech table, so the top
//! layer has small relative degree over a table-backed field.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use super::{checked_order, make_extension_capped, FieldCtx, TABLE_LIMIT};
use crate::error::Result;

/// Memoized chain of extensions of one base field.
pub struct Tower {
    base: Arc<FieldCtx>,
    cap: u64,
    levels: Mutex<BTreeMap<u32, Arc<FieldCtx>>>,
}

impl Tower {
    pub fn new(base: Arc<FieldCtx>, cap: u64) -> Tower {
        Tower { base, cap, levels: Mutex::new(BTreeMap::new()) }
    }

    pub fn base(&self) -> &Arc<FieldCtx> {
        &self.base
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    /// Whether `q^t` is within the cap.
    pub fn fits(&self, t: u32) -> bool {
        checked_order(self.base.order(), t, self.cap).is_ok()
    }

    /// Largest `t ≤ t_max` with `q^t` within the cap (0 if none).
    pub fn max_level(&self, t_max: u32) -> u32 {
        (1..=t_max).take_while(|&t| self.fits(t)).last().unwrap_or(0)
    }

    /// A field of order `q^t` containing the base via coefficient injection.
    pub fn level(&self, t: u32) -> Result<Arc<FieldCtx>> {
        let order = checked_order(self.base.order(), t, self.cap)?;
        if t == 1 {
            return Ok(self.base.clone());
        }
        if let Some(f) = self.levels.lock().expect("tower lock").get(&t) {
            return Ok(f.clone());
        }
        let field = if order <= TABLE_LIMIT {
            make_extension_capped(&self.base, t, self.cap)?
        } else {
            let q = self.base.order() as u128;
            let s = (1..t)
                .rev()
                .find(|&s| t.is_multiple_of(s) && q.pow(s) <= TABLE_LIMIT as u128)
                .unwrap_or(1);
            let mid = self.level(s)?;
            make_extension_capped(&mid, t / s, self.cap)?
        };
        self.levels.lock().expect("tower lock").insert(t, field.clone());
        Ok(field)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    #[test]
    fn thirteen_to_the_sixth_goes_through_the_cube() {
        let tower = Tower::new(make_field(13, 1).unwrap(), crate::gf::DEFAULT_CAP);
        let top = tower.level(6).unwrap();
        assert_eq!(top.order(), 13u64.pow(6));
        assert_eq!(top.rel_degree(), 2);
        assert_eq!(top.base().unwrap().order(), 13u64.pow(3));
        assert!(top.contains_subfield(tower.base()));
        assert_eq!(tower.max_level(12), 6);
        assert!(tower.level(7).is_err());
    }
}
