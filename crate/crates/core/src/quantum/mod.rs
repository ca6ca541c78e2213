//! Controlled harmonic-oscillator Schrödinger equation on a periodic grid,
//! the Hermite-basis oracle, and the reachable family of wavefunctions.

mod grid;
mod hermite;
mod io;
mod propagate;
mod target;

pub use grid::{distance_phase_invariant, GridShape, Spectral, WaveGrid};
pub use hermite::{hermite_analyze, hermite_functions, hermite_rotation_oracle, hermite_synthesize, HermiteCoeffs};
pub use io::{read_wave, write_wave};
pub use propagate::{propagate, propagate_with, SplitScheme, StepOptions};
pub use target::{build_target, reach_experiment, QuantumReachOptions, QuantumReport, QuantumTargetParams};
