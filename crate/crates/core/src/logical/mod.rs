//! Syndrome-averaged logical channels, concatenation and twirling gains.

mod concat;
mod engine;
mod gain;
pub mod zrot;

pub use concat::{concatenate, concatenate_levels, LogicalChannel, PhysicalNoise};
pub use engine::{LogicalMap, NoiseAssignment, LOGICAL_TOL};
pub use gain::{gain_delta, GainClass, GainPoint, GainRecord, GREY_THRESHOLD};
