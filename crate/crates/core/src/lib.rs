//! Exact computations for graded double Ore extensions `B = A_P[y1, y2; σ, ν]`
//! of Koszul AS-regular algebras: the auxiliary quadruple of maps, the
//! minimal free resolution of the trivial module, the Nakayama automorphism
//! and the twisted superpotential of `B`.

pub mod blockcalc;
pub mod error;
pub mod exact_linalg;
pub mod extension;
pub mod nakayama;
pub mod potential;
pub mod qalgebra;
pub mod quadruple;
pub mod resolution;

pub use error::{Error, Result, Violation};
