//! Classical counterpart: exact affine-symplectic flows of the controlled
//! oscillator and the transport of phase-space densities.

mod density;
mod io;
mod map;
mod target;

pub use density::{lp_distance, lp_distance_with, pullback, pullback_with, DensitySource, PhaseGrid, ESCAPE_TOL};
pub use io::{read_density, write_density};
pub use map::{
    correspondence_check, lambda, lambda_inverse, schedule_map, segment_map, segment_map_physical,
    AffineSymplecticMap, CorrespondenceReport, CORRESPONDENCE_TOL,
};
pub use target::{build_target, reach_experiment, LiouvilleReachOptions, LiouvilleReport, LiouvilleTargetParams};
