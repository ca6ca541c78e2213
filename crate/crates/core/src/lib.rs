//! Synthesis of piecewise-constant controls for the left-invariant system
//! `q' = q (a + u0 b + Σ u_i X_i + r Z)` on `SL2 ⋉ H_d`, with verification in
//! exact group arithmetic, on the controlled quantum harmonic oscillator and on
//! the classical Liouville transport equation.

pub mod error;
pub mod lie;
pub mod numfmt;

pub use error::{Error, Result};
pub mod schedule;
pub mod sim;
pub mod synth;
pub mod quantum;
pub mod liouville;
