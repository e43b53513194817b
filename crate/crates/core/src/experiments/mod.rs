//! Sweeps, threshold searches, Haar averages and noise ensembles.
//!
//! Work items are independent and gathered in input order, so every output
//! is identical for any worker count.

mod curve;
mod ensemble;
mod haar;
mod output;
mod threshold;

pub use curve::{gain_curve, rotation_gains};
pub use ensemble::{ensemble_study, EnsembleModel, EnsembleSpec};
pub use haar::{dep_coherent_sweep, haar_average_gain, haar_average_gains, HaarQuadrature, HaarPoint};
pub use output::{write_csv, write_json, Manifest};
pub use threshold::{
    find_crossing, find_threshold, haar_threshold, threshold_sphere, Crossing, SphereEntry, ThresholdResult,
    ThresholdSearch,
};
