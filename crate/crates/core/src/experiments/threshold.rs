use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::haar::{haar_average_gains, HaarQuadrature};
use super::curve::rotation_gains;
use crate::channels::RotationParams;
use crate::error::{Error, Result};
use crate::logical::LogicalMap;
use crate::par::{self, ExecMode};

/// Coarse scan of `[lo, hi]` on `coarse_points` equally spaced angles, then
/// bisection of the first `+ → −` sign change down to `tol`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdSearch {
    pub lo: f64,
    pub hi: f64,
    pub coarse_points: usize,
    pub tol: f64,
}

impl Default for ThresholdSearch {
    fn default() -> Self {
        Self { lo: 0.1, hi: 1.5, coarse_points: 15, tol: 1e-4 }
    }
}

impl ThresholdSearch {
    pub fn validate(&self) -> Result<()> {
        if !(self.lo > 0.0 && self.lo < self.hi && self.hi <= PI) {
            return Err(Error::Spec(format!("search interval [{}, {}] must lie in (0, π]", self.lo, self.hi)));
        }
        if self.coarse_points < 2 {
            return Err(Error::Spec("threshold search needs at least 2 coarse points".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Spec("threshold tolerance must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Crossing {
    pub omega_star: f64,
    /// `g > 0` at `bracket.0` and `g ≤ 0` at `bracket.1`.
    pub bracket: (f64, f64),
}

/// First downward zero crossing of `g`; `None` if `g` never changes sign from `+` to `−`.
pub fn find_crossing<F>(g: F, search: &ThresholdSearch) -> Result<Option<Crossing>>
where
    F: Fn(f64) -> Result<f64>,
{
    search.validate()?;
    let n = search.coarse_points;
    let step = (search.hi - search.lo) / (n - 1) as f64;
    let mut prev = (search.lo, g(search.lo)?);
    for k in 1..n {
        let w = if k == n - 1 { search.hi } else { search.lo + k as f64 * step };
        let cur = (w, g(w)?);
        if prev.1 > 0.0 && cur.1 <= 0.0 {
            let (mut a, mut b) = (prev.0, cur.0);
            while b - a > search.tol {
                let mid = 0.5 * (a + b);
                if g(mid)? > 0.0 {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            return Ok(Some(Crossing { omega_star: 0.5 * (a + b), bracket: (a, b) }));
        }
        prev = cur;
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdResult {
    /// `z`, `x`, `y`, `haar` or `theta,phi`.
    pub axis: String,
    pub theta: Option<f64>,
    pub phi: Option<f64>,
    pub level_lo: u32,
    pub level_hi: u32,
    pub omega_star: Option<f64>,
    pub bracket_lo: Option<f64>,
    pub bracket_hi: Option<f64>,
}

impl ThresholdResult {
    fn new(axis: String, theta: Option<f64>, phi: Option<f64>, levels: (u32, u32), c: Option<Crossing>) -> Self {
        Self {
            axis,
            theta,
            phi,
            level_lo: levels.0,
            level_hi: levels.1,
            omega_star: c.map(|c| c.omega_star),
            bracket_lo: c.map(|c| c.bracket.0),
            bracket_hi: c.map(|c| c.bracket.1),
        }
    }
}

fn check_levels(levels: (u32, u32)) -> Result<()> {
    if levels.0 == 0 || levels.0 >= levels.1 {
        return Err(Error::Spec(format!("level pair ({}, {}) must satisfy 1 ≤ lo < hi", levels.0, levels.1)));
    }
    Ok(())
}

/// `δ_hi(ω) − δ_lo(ω)` for a fixed rotation axis.
fn axis_gap(map: &LogicalMap, theta: f64, phi: f64, levels: (u32, u32), omega: f64, mode: ExecMode) -> Result<f64> {
    let pts = rotation_gains(map, &RotationParams::new(theta, phi, omega)?, levels.1, mode)?;
    let delta = |l: u32| {
        pts[l as usize - 1].delta.ok_or_else(|| Error::Spec(format!("gain undefined at level {l}, ω = {omega}")))
    };
    Ok(delta(levels.1)? - delta(levels.0)?)
}

/// Crossing of `δ_hi` and `δ_lo` for i.i.d. rotations about `(θ, φ)`.
pub fn find_threshold(
    map: &LogicalMap,
    axis_label: &str,
    theta: f64,
    phi: f64,
    levels: (u32, u32),
    search: &ThresholdSearch,
    mode: ExecMode,
) -> Result<ThresholdResult> {
    check_levels(levels)?;
    RotationParams::new(theta, phi, 0.0)?;
    let c = find_crossing(|w| axis_gap(map, theta, phi, levels, w, mode), search)?;
    Ok(ThresholdResult::new(axis_label.to_string(), Some(theta), Some(phi), levels, c))
}

/// Crossing of the Haar-averaged gains `δ̄_hi` and `δ̄_lo`.
pub fn haar_threshold(
    map: &LogicalMap,
    quad: &HaarQuadrature,
    levels: (u32, u32),
    search: &ThresholdSearch,
    mode: ExecMode,
) -> Result<ThresholdResult> {
    check_levels(levels)?;
    let c = find_crossing(
        |w| {
            let d = haar_average_gains(map, levels.1, w, quad, mode)?;
            Ok(d[levels.1 as usize - 1].mean_delta - d[levels.0 as usize - 1].mean_delta)
        },
        search,
    )?;
    Ok(ThresholdResult::new("haar".into(), None, None, levels, c))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SphereEntry {
    pub theta: f64,
    pub phi: f64,
    pub omega_star: Option<f64>,
}

/// Per-axis thresholds on `θ_i = iπ/(n_θ−1)`, `φ_j = 2πj/n_φ`, ordered by `θ` then `φ`.
/// The poles are computed once and repeated across `φ`.
pub fn threshold_sphere(
    map: &LogicalMap,
    n_theta: usize,
    n_phi: usize,
    levels: (u32, u32),
    search: &ThresholdSearch,
    mode: ExecMode,
) -> Result<Vec<SphereEntry>> {
    check_levels(levels)?;
    search.validate()?;
    if n_theta < 2 || n_phi < 1 {
        return Err(Error::Spec(format!("sphere grid {n_theta}×{n_phi} needs n_theta ≥ 2 and n_phi ≥ 1")));
    }
    let mut axes = Vec::new();
    for i in 0..n_theta {
        let theta = if i == n_theta - 1 { PI } else { i as f64 * PI / (n_theta - 1) as f64 };
        let pole = i == 0 || i == n_theta - 1;
        for j in 0..(if pole { 1 } else { n_phi }) {
            axes.push((i, theta, 2.0 * PI * j as f64 / n_phi as f64));
        }
    }
    let stars = par::try_map(mode, &axes, |&(_, theta, phi)| {
        Ok::<_, Error>(find_threshold(map, "", theta, phi, levels, search, ExecMode::Sequential)?.omega_star)
    })?;
    let mut out = Vec::with_capacity(n_theta * n_phi);
    for (&(i, theta, phi), star) in axes.iter().zip(stars) {
        if i == 0 || i == n_theta - 1 {
            out.extend((0..n_phi).map(|j| SphereEntry { theta, phi: 2.0 * PI * j as f64 / n_phi as f64, omega_star: star }));
        } else {
            out.push(SphereEntry { theta, phi, omega_star: star });
        }
    }
    Ok(out)
}
