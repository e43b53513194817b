use std::f64::consts::PI;

use nalgebra::{Matrix2, SMatrix};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal, UnitSphere};
use serde::{Deserialize, Serialize};

use super::chi::ChiMatrix;
use super::models::pauli_matrices;
use crate::error::{Error, Result};

type Matrix8 = SMatrix<Complex64, 8, 8>;

/// How the second parameter of `N(μ_δ, μ_δ)` is read.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeltaSpread {
    /// Variance μ_δ, i.e. standard deviation √μ_δ.
    #[default]
    Variance,
    /// Standard deviation μ_δ.
    StdDev,
}

impl DeltaSpread {
    pub fn std_dev(self, mu_delta: f64) -> f64 {
        match self {
            DeltaSpread::Variance => mu_delta.sqrt(),
            DeltaSpread::StdDev => mu_delta,
        }
    }
}

/// Uniformly distributed point on the unit sphere.
pub fn uniform_axis<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    UnitSphere.sample(rng)
}

/// A draw of `exp(-i(π/2)δ n̂·σ⃗)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomRotation {
    pub axis: [f64; 3],
    pub delta: f64,
    pub chi: ChiMatrix,
}

/// Rotation about a uniform axis by `δ ~ N(μ_δ, spread)`. Negative δ is kept.
pub fn random_axis_rotation<R: Rng + ?Sized>(
    rng: &mut R,
    mu_delta: f64,
    spread: DeltaSpread,
) -> Result<RandomRotation> {
    if !(mu_delta >= 0.0 && mu_delta.is_finite()) {
        return Err(Error::OutOfRange { name: "mu_delta", value: mu_delta, expected: "finite, ≥ 0" });
    }
    let axis = uniform_axis(rng);
    let sd = spread.std_dev(mu_delta);
    let delta = if sd > 0.0 { Normal::new(mu_delta, sd).expect("finite std-dev").sample(rng) } else { mu_delta };
    let (s, c) = (0.5 * PI * delta).sin_cos();
    let coeffs = [
        Complex64::new(c, 0.0),
        Complex64::new(0.0, -s * axis[0]),
        Complex64::new(0.0, -s * axis[1]),
        Complex64::new(0.0, -s * axis[2]),
    ];
    let chi = super::models::chi_from_pauli_coefficients(coeffs)?;
    Ok(RandomRotation { axis, delta, chi })
}

/// GUE draw: N(0,1) diagonal, N(0,1/√2) real and imaginary parts off the diagonal.
fn gue8<R: Rng + ?Sized>(rng: &mut R) -> Matrix8 {
    let diag = Normal::new(0.0, 1.0).unwrap();
    let off = Normal::new(0.0, std::f64::consts::FRAC_1_SQRT_2).unwrap();
    let mut h = Matrix8::zeros();
    for i in 0..8 {
        h[(i, i)] = Complex64::new(diag.sample(rng), 0.0);
        for j in i + 1..8 {
            let z = Complex64::new(off.sample(rng), off.sample(rng));
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    h
}

/// Random CPTP map from a 3-qubit dilation: `U = exp(-iHt)` with GUE `H`, acting on
/// system ⊗ |00⟩, ancillas traced out. The system is the most significant qubit.
pub fn random_cptp<R: Rng + ?Sized>(rng: &mut R, t: f64) -> Result<ChiMatrix> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::OutOfRange { name: "t", value: t, expected: "finite, ≥ 0" });
    }
    let h = gue8(rng);
    let eig = h.symmetric_eigen();
    let phases = Matrix8::from_diagonal(&eig.eigenvalues.map(|l| Complex64::from_polar(1.0, -l * t)));
    let u = eig.eigenvectors * phases * eig.eigenvectors.adjoint();

    let paulis = pauli_matrices();
    let mut m = [[Complex64::default(); 4]; 4];
    for k in 0..4 {
        let kraus = Matrix2::from_fn(|i, j| u[((i << 2) | k, j << 2)]);
        let c: [Complex64; 4] = std::array::from_fn(|p| (paulis[p] * kraus).trace() * 0.5);
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] += c[i] * c[j].conj();
            }
        }
    }
    ChiMatrix::new(m)
}

/// `exp(U(ln lo, ln hi))`.
pub fn log_uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        return lo;
    }
    rng.random_range(lo.ln()..hi.ln()).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::CHI_TOL;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rotation_limits_and_determinism() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = random_axis_rotation(&mut rng, 0.0, DeltaSpread::Variance).unwrap();
        assert!(r.chi.max_abs_diff(&ChiMatrix::identity()) < 1e-15);

        let a = random_axis_rotation(&mut ChaCha8Rng::seed_from_u64(9), 0.01, DeltaSpread::Variance).unwrap();
        let b = random_axis_rotation(&mut ChaCha8Rng::seed_from_u64(9), 0.01, DeltaSpread::Variance).unwrap();
        assert_eq!(a, b);
        let n = a.axis;
        assert!((n[0] * n[0] + n[1] * n[1] + n[2] * n[2] - 1.0).abs() < 1e-12);
        assert!((a.chi.process_infidelity() - (0.5 * PI * a.delta).sin().powi(2)).abs() < 1e-15);
    }

    #[test]
    fn rotation_ensemble_mean() {
        let mu = 0.05;
        let spread = DeltaSpread::StdDev;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 20_000;
        let mean: f64 = (0..n)
            .map(|_| random_axis_rotation(&mut rng, mu, spread).unwrap().chi.process_infidelity())
            .sum::<f64>()
            / n as f64;
        // scalar oracle on independent δ draws
        let normal = Normal::new(mu, spread.std_dev(mu)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let m = 200_000;
        let oracle: f64 = (0..m).map(|_| (0.5 * PI * normal.sample(&mut rng)).sin().powi(2)).sum::<f64>() / m as f64;
        assert!((mean - oracle).abs() / oracle < 0.03, "{mean} vs {oracle}");
    }

    #[test]
    fn cptp_identity_at_zero_time() {
        let chi = random_cptp(&mut ChaCha8Rng::seed_from_u64(5), 0.0).unwrap();
        assert!(chi.max_abs_diff(&ChiMatrix::identity()) < 1e-13);
    }

    #[test]
    fn cptp_draws_are_valid_and_reproducible() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let t = log_uniform(&mut rng, 1e-3, 1e-1);
            random_cptp(&mut rng, t).unwrap().validate(CHI_TOL).unwrap();
        }
        let a = random_cptp(&mut ChaCha8Rng::seed_from_u64(2), 0.05).unwrap();
        let b = random_cptp(&mut ChaCha8Rng::seed_from_u64(2), 0.05).unwrap();
        assert_eq!(a, b);
        assert!(!a.is_diagonal());
    }

    #[test]
    fn cptp_infidelity_grows_with_time() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let means: Vec<f64> = [1e-3, 1e-2, 1e-1]
            .iter()
            .map(|&t| (0..1000).map(|_| random_cptp(&mut rng, t).unwrap().process_infidelity()).sum::<f64>() / 1000.0)
            .collect();
        assert!(means[0] < means[1] && means[1] < means[2], "{means:?}");
    }

    #[test]
    fn log_uniform_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..1000 {
            let x = log_uniform(&mut rng, 1e-3, 1e-1);
            assert!((1e-3..1e-1).contains(&x));
        }
        assert_eq!(log_uniform(&mut rng, 0.5, 0.5), 0.5);
    }
}
