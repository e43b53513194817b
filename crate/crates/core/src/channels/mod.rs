//! Single-qubit channels in the χ (process-matrix) representation.

mod chi;
mod models;
mod sampling;

pub use chi::{ChiMatrix, CHI_TOL};
pub use models::{
    calibrate_omega, chi_from_pauli_coefficients, compose, depolarizing, pauli_matrices, rotation_channel,
    rotation_unitary, twirl, unitary_to_chi, z_rotation, z_rotation_unitary, Axis, RotationParams,
};
pub(crate) use models::chi_from_liouville;
pub use sampling::{log_uniform, random_axis_rotation, random_cptp, uniform_axis, DeltaSpread, RandomRotation};
