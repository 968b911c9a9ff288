//! Execution mode for the data-parallel loops.
//!
//! With the `parallel` feature the scan loops run on the rayon pool; without
//! it, or with [`Exec::Sequential`], they run on the calling thread. Results
//! are identical in both modes.

#[cfg(feature = "parallel")]
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

#[cfg(feature = "parallel")]
const CHUNK: u64 = 1 << 14;

impl Exec {
    /// `f(i)` for every `i < n`, in order.
    pub fn map_range<T, F>(self, n: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                (0..n as usize).into_par_iter().with_min_len(CHUNK as usize).map(|i| f(i as u64)).collect()
            }
            _ => (0..n).map(f).collect(),
        }
    }

    /// Whether `key(i)` is pairwise distinct for `i < n`, all keys `< bound`.
    /// Stops at the first collision.
    pub fn all_distinct<F>(self, n: u64, bound: u64, key: F) -> bool
    where
        F: Fn(u64) -> u64 + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                let words: Vec<AtomicU64> = (0..bound.div_ceil(64)).map(|_| AtomicU64::new(0)).collect();
                let stop = AtomicBool::new(false);
                let chunks = n.div_ceil(CHUNK);
                (0..chunks).into_par_iter().for_each(|c| {
                    if stop.load(Ordering::Relaxed) {
                        return;
                    }
                    for i in c * CHUNK..((c + 1) * CHUNK).min(n) {
                        let k = key(i);
                        let bit = 1u64 << (k % 64);
                        if words[(k / 64) as usize].fetch_or(bit, Ordering::Relaxed) & bit != 0 {
                            stop.store(true, Ordering::Relaxed);
                            return;
                        }
                    }
                });
                !stop.load(Ordering::Relaxed)
            }
            _ => {
                let mut words = vec![0u64; bound.div_ceil(64) as usize];
                for i in 0..n {
                    let k = key(i);
                    let bit = 1u64 << (k % 64);
                    let w = &mut words[(k / 64) as usize];
                    if *w & bit != 0 {
                        return false;
                    }
                    *w |= bit;
                }
                true
            }
        }
    }
}
