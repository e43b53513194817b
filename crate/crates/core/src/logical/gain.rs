use std::fmt;

use serde::{Deserialize, Serialize};

use super::concat::{concatenate_levels, PhysicalNoise};
use super::engine::LogicalMap;
use crate::error::Result;
use crate::par::ExecMode;

/// Relative difference below which raw and twirled infidelities are "grey".
pub const GREY_THRESHOLD: f64 = 0.10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GainClass {
    Gain,
    Loss,
    Grey,
    /// Twirled infidelity is exactly zero.
    Undefined,
}

impl GainClass {
    pub fn classify(r_raw: f64, r_twirled: f64) -> Self {
        if r_twirled == 0.0 {
            return GainClass::Undefined;
        }
        let scale = r_raw.max(r_twirled);
        if (r_raw - r_twirled).abs() / scale < GREY_THRESHOLD {
            GainClass::Grey
        } else if r_raw > r_twirled {
            GainClass::Gain
        } else {
            GainClass::Loss
        }
    }
}

impl fmt::Display for GainClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GainClass::Gain => "gain",
            GainClass::Loss => "loss",
            GainClass::Grey => "grey",
            GainClass::Undefined => "undefined",
        })
    }
}

/// `δ_ℓ = r(Ē_ℓ) / r(Ē^T_ℓ)` at one level.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GainPoint {
    pub level: u32,
    pub r_raw: f64,
    pub r_twirled: f64,
    pub delta: Option<f64>,
    pub class: GainClass,
}

impl GainPoint {
    pub fn new(level: u32, r_raw: f64, r_twirled: f64) -> Self {
        let class = GainClass::classify(r_raw, r_twirled);
        let delta = (r_twirled != 0.0).then(|| r_raw / r_twirled);
        Self { level, r_raw, r_twirled, delta, class }
    }
}

/// Gains at levels `1..=levels`, from one raw and one twirled concatenation.
pub fn gain_delta(map: &LogicalMap, noise: &PhysicalNoise, levels: u32, mode: ExecMode) -> Result<Vec<GainPoint>> {
    let raw = concatenate_levels(map, noise, levels, false, mode)?;
    let tw = concatenate_levels(map, noise, levels, true, mode)?;
    Ok(raw
        .iter()
        .zip(&tw)
        .map(|(r, t)| GainPoint::new(r.level, r.chi.process_infidelity(), t.chi.process_infidelity()))
        .collect())
}

/// One output row: the noise descriptor plus a [`GainPoint`]. Descriptor
/// fields that do not apply to a model are left empty.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GainRecord {
    pub model: String,
    pub theta: Option<f64>,
    pub phi: Option<f64>,
    pub omega: Option<f64>,
    pub p: Option<f64>,
    pub mu_delta: Option<f64>,
    pub t: Option<f64>,
    pub seed: Option<u64>,
    pub sample: Option<u64>,
    pub level: u32,
    pub r_physical: f64,
    pub r_raw: f64,
    pub r_twirled: f64,
    pub delta: Option<f64>,
    pub class: Option<GainClass>,
}

impl GainRecord {
    /// Copies the descriptor from `template` and fills in the point.
    pub fn with_point(template: &GainRecord, point: &GainPoint) -> Self {
        GainRecord {
            level: point.level,
            r_raw: point.r_raw,
            r_twirled: point.r_twirled,
            delta: point.delta,
            class: Some(point.class),
            ..template.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{depolarizing, z_rotation, ChiMatrix};

    #[test]
    fn classification() {
        assert_eq!(GainClass::classify(1.0, 0.5), GainClass::Gain);
        assert_eq!(GainClass::classify(0.5, 1.0), GainClass::Loss);
        assert_eq!(GainClass::classify(1.0, 0.95), GainClass::Grey);
        assert_eq!(GainClass::classify(0.91, 1.0), GainClass::Grey);
        assert_eq!(GainClass::classify(0.89, 1.0), GainClass::Loss);
        assert_eq!(GainClass::classify(0.0, 0.0), GainClass::Undefined);
    }

    #[test]
    fn identity_noise_is_undefined() {
        let map = LogicalMap::steane();
        let pts = gain_delta(&map, &PhysicalNoise::Uniform(ChiMatrix::identity()), 1, ExecMode::Sequential).unwrap();
        assert_eq!(pts[0].class, GainClass::Undefined);
        assert_eq!(pts[0].delta, None);
    }

    #[test]
    fn pauli_noise_has_unit_gain() {
        let map = LogicalMap::steane();
        let pts = gain_delta(&map, &PhysicalNoise::Uniform(depolarizing(0.01).unwrap()), 2, ExecMode::Sequential).unwrap();
        for p in pts {
            assert_eq!(p.delta, Some(1.0));
            assert_eq!(p.class, GainClass::Grey);
        }
    }

    #[test]
    fn small_rotation_gain_near_three() {
        let map = LogicalMap::steane();
        let pts = gain_delta(&map, &PhysicalNoise::Uniform(z_rotation(0.01)), 1, ExecMode::Sequential).unwrap();
        assert!((pts[0].delta.unwrap() - 3.0).abs() < 1e-3);
        assert_eq!(pts[0].class, GainClass::Gain);
    }

    #[test]
    fn record_csv_row() {
        let template = GainRecord { model: "z-rotation".into(), omega: Some(0.1), ..Default::default() };
        let rec = GainRecord::with_point(&template, &GainPoint::new(1, 3e-6, 1e-6));
        let mut w = csv::Writer::from_writer(vec![]);
        w.serialize(&rec).unwrap();
        let s = String::from_utf8(w.into_inner().unwrap()).unwrap();
        let mut lines = s.lines();
        assert_eq!(
            lines.next().unwrap(),
            "model,theta,phi,omega,p,mu_delta,t,seed,sample,level,r_physical,r_raw,r_twirled,delta,class"
        );
        assert!(lines.next().unwrap().ends_with(",gain"));
    }
}
