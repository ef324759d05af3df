//! Repeated-pulse dynamics of a two-level system as an affine Bloch channel.

mod evolve;
mod failure;
mod linalg;
mod map;
mod power;

pub use evolve::{
    envelope_sequence, evolve, inversion_at_pulse, inversion_from_map, inversion_profile,
    inversion_sequence, local_maxima, Evolution, InversionPoint, ProfileGrid,
};
pub use failure::{
    average_failure_probability, average_failure_with, failure_probability,
    failure_probability_expansion, AverageFailure, AverageMode, DEFAULT_SEED,
};
pub use linalg::{BlochState, Complex, DensityMatrix, Mat2, AMPLITUDE_NORM_TOL, BLOCH_NORM_SLACK};
pub use map::{
    build_pulse_map, build_pulse_map_with_phase, density_after_pulse, discriminant,
    pulse_map_at_tau, single_pulse_state, PulseMap,
};
pub use power::{
    geometric_sum, geometric_sum_matrix, matrix_power, GeometricSumCoeffs, MatrixPower,
    PowerBranch, PowerDecomposition, TrigParts,
};
