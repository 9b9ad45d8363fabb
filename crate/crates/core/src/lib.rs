//! Exact arithmetic for noncommutative tori with real multiplication.
//!
//! The crate covers periodic continued fractions of quadratic irrationals,
//! fundamental units and the index `π(p)`, the matrices `A` and `L_p` with
//! their cokernel groups `Z²/(I - L_p)Z²`, point counts of elliptic curves
//! over prime fields, and the skew Laurent ring `R[t, t⁻¹; α]` together with
//! its convolution presentation.

pub mod cli;
pub mod ecpoints;
pub mod error;
pub mod freealg;
pub mod intmat;
pub mod quadratic;
pub mod skewlaurent;
pub mod units;

pub use error::{Error, Result};
