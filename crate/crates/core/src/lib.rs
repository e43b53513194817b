//! Exact logical channels of the Steane code and its concatenations under
//! arbitrary single-qubit noise, with and without Pauli twirling.
//!
//! The crate is organised bottom-up:
//!
//! * [`pauli`] and [`code`]: Pauli arithmetic, the Steane code, the
//!   minimum-weight lookup decoder and coset phases.
//! * [`channels`]: single-qubit χ-matrices, noise models, the twirl and
//!   random-noise samplers.
//! * [`logical`]: the syndrome-averaged logical χ-matrix, hard-decoder
//!   concatenation, twirling gains and Z-rotation closed forms.
//! * [`experiments`]: sweeps, threshold searches, Haar averages and ensembles.
//! * [`verify`]: independent oracles (dense state-vector simulation,
//!   Pauli-frame averaging) used by the `verify` command and the tests.

use num_complex::Complex64;

pub mod channels;
pub mod code;
pub mod error;
pub mod experiments;
pub mod logical;
pub mod par;
pub mod pauli;
pub mod verify;

pub use channels::{ChiMatrix, RotationParams};
pub use code::{DecoderTable, StabilizerCode, Syndrome};
pub use error::{Error, Result};
pub use logical::{GainClass, GainRecord, LogicalChannel, LogicalMap, NoiseAssignment};
pub use par::ExecMode;
pub use pauli::{PauliLetter, PauliOperator};

/// `i^k` for `k = 0..4`.
pub(crate) const I_POW: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];
