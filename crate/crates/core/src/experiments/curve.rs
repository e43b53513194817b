use crate::channels::{rotation_channel, RotationParams};
use crate::error::{Error, Result};
use crate::logical::{gain_delta, GainPoint, GainRecord, LogicalMap, PhysicalNoise};
use crate::par::{self, ExecMode};

/// Gains at levels `1..=levels` for i.i.d. rotation noise.
pub fn rotation_gains(map: &LogicalMap, rotation: &RotationParams, levels: u32, mode: ExecMode) -> Result<Vec<GainPoint>> {
    gain_delta(map, &PhysicalNoise::Uniform(rotation_channel(rotation)), levels, mode)
}

/// `δ_ℓ(ω)` for every `ω` in `omegas` and `ℓ = 1..=levels`, ordered by `ω` then `ℓ`.
pub fn gain_curve(
    map: &LogicalMap,
    theta: f64,
    phi: f64,
    levels: u32,
    omegas: &[f64],
    mode: ExecMode,
) -> Result<Vec<GainRecord>> {
    if omegas.is_empty() {
        return Err(Error::Spec("omega grid is empty".into()));
    }
    let rows = par::try_map(mode, omegas, |&omega| -> Result<Vec<GainRecord>> {
        let rot = RotationParams::new(theta, phi, omega)?;
        let template = GainRecord {
            model: "rotation".into(),
            theta: Some(theta),
            phi: Some(phi),
            omega: Some(omega),
            r_physical: (omega / 2.0).sin().powi(2),
            ..Default::default()
        };
        Ok(rotation_gains(map, &rot, levels, mode)?.iter().map(|p| GainRecord::with_point(&template, p)).collect())
    })?;
    Ok(rows.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn curve_layout_and_boundary() {
        let map = LogicalMap::steane();
        let rows = gain_curve(&map, 0.0, 0.0, 2, &[0.1, PI], ExecMode::Sequential).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!((rows[0].omega, rows[0].level), (Some(0.1), 1));
        assert_eq!((rows[3].omega, rows[3].level), (Some(PI), 2));
        // ω = π flips every qubit: a logical Z with certainty either way
        assert!((rows[2].r_raw - 1.0).abs() < 1e-12);
        assert!((rows[2].delta.unwrap() - 1.0).abs() < 1e-12);
        assert!(gain_curve(&map, 0.0, 0.0, 1, &[], ExecMode::Sequential).is_err());
    }
}
