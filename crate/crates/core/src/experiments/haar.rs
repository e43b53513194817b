use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::channels::{calibrate_omega, compose, depolarizing, rotation_channel, Axis, ChiMatrix, RotationParams};
use crate::error::{Error, Result};
use crate::logical::{gain_delta, GainRecord, LogicalMap, PhysicalNoise};
use crate::par::{self, ExecMode};

/// Product rule over the sphere: Gauss-Legendre in `cos θ`, trapezoid in `φ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HaarQuadrature {
    pub n_theta: usize,
    pub n_phi: usize,
}

impl Default for HaarQuadrature {
    fn default() -> Self {
        Self { n_theta: 16, n_phi: 32 }
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration on `P_n`.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = vec![(0.0, 0.0); n];
    for i in 0..(n + 1) / 2 {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out[i] = (-x, w);
        out[n - 1 - i] = (x, w);
    }
    out
}

impl HaarQuadrature {
    pub fn validate(&self) -> Result<()> {
        if self.n_theta < 1 || self.n_phi < 1 {
            return Err(Error::Spec(format!("quadrature {}×{} needs at least one node each way", self.n_theta, self.n_phi)));
        }
        Ok(())
    }

    /// `(axis, weight)` with weights summing to one.
    pub fn nodes(&self) -> Vec<(Axis, f64)> {
        let mut out = Vec::with_capacity(self.n_theta * self.n_phi);
        for (x, w) in gauss_legendre(self.n_theta) {
            let theta = x.clamp(-1.0, 1.0).acos();
            for j in 0..self.n_phi {
                let phi = 2.0 * PI * j as f64 / self.n_phi as f64;
                out.push((Axis { theta, phi }, w / (2.0 * self.n_phi as f64)));
            }
        }
        out
    }

    pub fn doubled(&self) -> Self {
        Self { n_theta: 2 * self.n_theta, n_phi: 2 * self.n_phi }
    }
}

/// Sphere averages at one level.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HaarPoint {
    pub level: u32,
    pub mean_r_raw: f64,
    pub mean_r_twirled: f64,
    pub mean_delta: f64,
}

/// Averages of `r_raw`, `r_twirled` and `δ` over axes at levels `1..=levels`,
/// with physical channel `noise(axis)` on every qubit.
fn haar_average_with<F>(map: &LogicalMap, levels: u32, quad: &HaarQuadrature, mode: ExecMode, noise: F) -> Result<Vec<HaarPoint>>
where
    F: Fn(Axis) -> Result<ChiMatrix> + Sync + Send,
{
    quad.validate()?;
    let nodes = quad.nodes();
    let per_axis = par::try_map(mode, &nodes, |&(axis, _)| gain_delta(map, &PhysicalNoise::Uniform(noise(axis)?), levels, mode))?;
    let mut out: Vec<HaarPoint> =
        (1..=levels).map(|level| HaarPoint { level, mean_r_raw: 0.0, mean_r_twirled: 0.0, mean_delta: 0.0 }).collect();
    for ((_, w), pts) in nodes.iter().zip(&per_axis) {
        for (acc, p) in out.iter_mut().zip(pts) {
            let delta = p.delta.ok_or_else(|| Error::Spec("gain undefined for a quadrature axis".into()))?;
            acc.mean_r_raw += w * p.r_raw;
            acc.mean_r_twirled += w * p.r_twirled;
            acc.mean_delta += w * delta;
        }
    }
    Ok(out)
}

/// `δ̄_ℓ(ω)` for `ℓ = 1..=levels`: the gain of i.i.d. rotations by `ω`
/// averaged uniformly over rotation axes.
pub fn haar_average_gains(map: &LogicalMap, levels: u32, omega: f64, quad: &HaarQuadrature, mode: ExecMode) -> Result<Vec<HaarPoint>> {
    haar_average_with(map, levels, quad, mode, |axis| Ok(rotation_channel(&RotationParams::about(axis, omega))))
}

pub fn haar_average_gain(map: &LogicalMap, level: u32, omega: f64, quad: &HaarQuadrature, mode: ExecMode) -> Result<f64> {
    Ok(haar_average_gains(map, level, omega, quad, mode)?[level as usize - 1].mean_delta)
}

/// For each `p`, the rotation angle that keeps `dep(p) ∘ rotation` at
/// infidelity `r_target`, and the axis-averaged gains of that channel at
/// levels `1..=levels`. Infeasible `p` are skipped and reported.
///
/// In each row `r_raw`, `r_twirled` and `delta` are sphere averages.
pub fn dep_coherent_sweep(
    map: &LogicalMap,
    ps: &[f64],
    r_target: f64,
    levels: u32,
    quad: &HaarQuadrature,
    mode: ExecMode,
) -> Result<(Vec<GainRecord>, Vec<String>)> {
    if ps.is_empty() {
        return Err(Error::Spec("depolarizing grid is empty".into()));
    }
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for &p in ps {
        let omega = match calibrate_omega(p, r_target, Axis::Z) {
            Ok(w) => w,
            Err(e @ Error::Infeasible(_)) => {
                skipped.push(format!("p = {p}: {e}"));
                continue;
            }
            Err(e) => return Err(e),
        };
        let dep = depolarizing(p)?;
        let pts = haar_average_with(map, levels, quad, mode, |axis| compose(&dep, &rotation_channel(&RotationParams::about(axis, omega))))?;
        for pt in pts {
            rows.push(GainRecord {
                model: "dep-rotation".into(),
                omega: Some(omega),
                p: Some(p),
                level: pt.level,
                r_physical: r_target,
                r_raw: pt.mean_r_raw,
                r_twirled: pt.mean_r_twirled,
                delta: Some(pt.mean_delta),
                ..Default::default()
            });
        }
    }
    Ok((rows, skipped))
}
