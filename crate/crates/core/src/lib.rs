//! Exceptional covers over finite fields: permutation behaviour of rational
//! maps on `P¹(F_{q^t})`, Frobenius progressions, monodromy cosets, Nielsen
//! classes, Lattès maps and pencil character sums.

pub mod acceptance;
pub mod error;
pub mod except;
pub mod exec;
pub mod frobset;
pub mod gf;
pub mod grouptheory;
pub mod lattes;
pub mod nielsen;
pub mod pencil;
pub mod projmap;

pub use error::{Error, Result};
