use std::f64::consts::PI;

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::chi::{ChiMatrix, CHI_TOL};
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// `[I, X, Y, Z]` as 2×2 matrices.
pub fn pauli_matrices() -> [Matrix2<Complex64>; 4] {
    [
        Matrix2::new(ONE, ZERO, ZERO, ONE),
        Matrix2::new(ZERO, ONE, ONE, ZERO),
        Matrix2::new(ZERO, -I, I, ZERO),
        Matrix2::new(ONE, ZERO, ZERO, -ONE),
    ]
}

/// Rotation axis in polar coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub theta: f64,
    pub phi: f64,
}

impl Axis {
    pub const Z: Axis = Axis { theta: 0.0, phi: 0.0 };
    pub const X: Axis = Axis { theta: PI / 2.0, phi: 0.0 };
    pub const Y: Axis = Axis { theta: PI / 2.0, phi: PI / 2.0 };

    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::OutOfRange { name: "theta", value: theta, expected: "[0, π]" });
        }
        if !(0.0..2.0 * PI).contains(&phi) {
            return Err(Error::OutOfRange { name: "phi", value: phi, expected: "[0, 2π)" });
        }
        Ok(Self { theta, phi })
    }

    pub fn unit_vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }
}

/// Axis-angle rotation `U = cos(ω/2)·I + i sin(ω/2)·n̂·σ⃗`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotationParams {
    pub theta: f64,
    pub phi: f64,
    pub omega: f64,
}

impl RotationParams {
    pub fn new(theta: f64, phi: f64, omega: f64) -> Result<Self> {
        Axis::new(theta, phi)?;
        if !omega.is_finite() {
            return Err(Error::OutOfRange { name: "omega", value: omega, expected: "finite" });
        }
        Ok(Self { theta, phi, omega })
    }

    pub fn about(axis: Axis, omega: f64) -> Self {
        Self { theta: axis.theta, phi: axis.phi, omega }
    }

    pub fn axis(&self) -> Axis {
        Axis { theta: self.theta, phi: self.phi }
    }

    /// Coefficients `c_i` of `U = Σ c_i P_i`.
    pub fn pauli_coefficients(&self) -> [Complex64; 4] {
        let (s, c) = (self.omega / 2.0).sin_cos();
        let n = self.axis().unit_vector();
        [Complex64::new(c, 0.0), I * (s * n[0]), I * (s * n[1]), I * (s * n[2])]
    }
}

/// χ of the unitary channel `ρ ↦ UρU†` with `U = Σ c_i P_i`: `χ_ij = c_i c_j*`.
pub fn chi_from_pauli_coefficients(c: [Complex64; 4]) -> Result<ChiMatrix> {
    let mut m = [[ZERO; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = c[i] * c[j].conj();
        }
    }
    ChiMatrix::new(m)
}

pub fn unitary_to_chi(u: &Matrix2<Complex64>) -> Result<ChiMatrix> {
    let deviation = (u.adjoint() * u - Matrix2::identity()).iter().map(|c| c.norm()).fold(0.0, f64::max);
    if deviation > CHI_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    let paulis = pauli_matrices();
    let c = std::array::from_fn(|i| (paulis[i] * u).trace() * 0.5);
    chi_from_pauli_coefficients(c)
}

pub fn z_rotation_unitary(omega: f64) -> Matrix2<Complex64> {
    rotation_unitary(&RotationParams::about(Axis::Z, omega))
}

pub fn rotation_unitary(p: &RotationParams) -> Matrix2<Complex64> {
    let c = p.pauli_coefficients();
    let paulis = pauli_matrices();
    (0..4).fold(Matrix2::zeros(), |acc, i| acc + paulis[i] * c[i])
}

pub fn rotation_channel(p: &RotationParams) -> ChiMatrix {
    chi_from_pauli_coefficients(p.pauli_coefficients()).expect("rotations are unitary")
}

pub fn z_rotation(omega: f64) -> ChiMatrix {
    rotation_channel(&RotationParams::about(Axis::Z, omega))
}

/// `ρ ↦ (1-p)ρ + p·I/2`, i.e. `χ = diag(1 - 3p/4, p/4, p/4, p/4)`.
pub fn depolarizing(p: f64) -> Result<ChiMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange { name: "depolarizing strength", value: p, expected: "[0, 1]" });
    }
    Ok(ChiMatrix::diagonal_unchecked([1.0 - 0.75 * p, p / 4.0, p / 4.0, p / 4.0]))
}

/// Pauli twirl: keeps the diagonal and zeroes the coherences.
pub fn twirl(x: &ChiMatrix) -> ChiMatrix {
    ChiMatrix::diagonal_unchecked(x.diagonal())
}

/// Row-major Liouville matrix `Σ χ_ij P_i ⊗ P_jᵀ`, acting on `vec(ρ)`.
fn liouville(chi: &ChiMatrix) -> Matrix4<Complex64> {
    let paulis = pauli_matrices();
    let mut s = Matrix4::zeros();
    for i in 0..4 {
        for j in 0..4 {
            let c = chi.entry(i, j);
            if c != ZERO {
                s += paulis[i].kronecker(&paulis[j].transpose()) * c;
            }
        }
    }
    s
}

/// `χ_ij = ⟨P_i ⊗ P_jᵀ, S⟩ / 4`; the basis is orthogonal with norm² 4.
pub(crate) fn chi_from_liouville(s: &Matrix4<Complex64>) -> [[Complex64; 4]; 4] {
    let paulis = pauli_matrices();
    let mut m = [[ZERO; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let basis = paulis[i].kronecker(&paulis[j].transpose());
            m[i][j] = (basis.adjoint() * s).trace() * 0.25;
        }
    }
    m
}

/// The channel "apply `b`, then `a`".
pub fn compose(a: &ChiMatrix, b: &ChiMatrix) -> Result<ChiMatrix> {
    let s = liouville(a) * liouville(b);
    ChiMatrix::new(chi_from_liouville(&s))
}

/// Rotation magnitude `ω` such that `dep(p) ∘ rotation(axis, ω)` has process
/// infidelity `r_target`, found by bisection on `[0, π]` to `|Δr| ≤ 1e-12`.
pub fn calibrate_omega(p: f64, r_target: f64, axis: Axis) -> Result<f64> {
    let dep = depolarizing(p)?;
    let infid = |omega: f64| -> Result<f64> {
        Ok(compose(&dep, &rotation_channel(&RotationParams::about(axis, omega)))?.process_infidelity())
    };
    let (mut lo, mut hi) = (0.0, PI);
    let (r_lo, r_hi) = (infid(lo)?, infid(hi)?);
    if r_target < r_lo - 1e-12 {
        return Err(Error::Infeasible(format!(
            "depolarizing strength {p} alone gives infidelity {r_lo:.6e} > target {r_target:.6e}"
        )));
    }
    if r_target > r_hi + 1e-12 {
        return Err(Error::Infeasible(format!("target infidelity {r_target} exceeds the reachable {r_hi}")));
    }
    if (r_target - r_lo).abs() <= 1e-12 {
        return Ok(0.0);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let r = infid(mid)?;
        if (r - r_target).abs() <= 1e-12 {
            return Ok(mid);
        }
        if r < r_target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < f64::EPSILON {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn unitary_examples() {
        let id = unitary_to_chi(&Matrix2::identity()).unwrap();
        assert!(id.max_abs_diff(&ChiMatrix::identity()) < 1e-15);

        let x = unitary_to_chi(&pauli_matrices()[1]).unwrap();
        assert!(x.max_abs_diff(&ChiMatrix::diagonal_unchecked([0.0, 1.0, 0.0, 0.0])) < 1e-15);

        let w: f64 = 0.37;
        let rz = unitary_to_chi(&z_rotation_unitary(w)).unwrap();
        let (s, co) = (w / 2.0).sin_cos();
        assert_abs_diff_eq!(rz.entry(0, 0).re, co * co, epsilon = 1e-15);
        assert_abs_diff_eq!(rz.entry(3, 3).re, s * s, epsilon = 1e-15);
        assert!((rz.entry(0, 3) - c(0.0, -co * s)).norm() < 1e-15);
        assert!((rz.entry(3, 0) - c(0.0, co * s)).norm() < 1e-15);
        for (i, j) in [(0, 1), (0, 2), (1, 1), (1, 2), (2, 2), (1, 3), (2, 3)] {
            assert_eq!(rz.entry(i, j).norm(), 0.0);
        }
    }

    #[test]
    fn non_unitary_rejected() {
        let m = Matrix2::new(ONE, ONE, ZERO, ONE);
        assert!(matches!(unitary_to_chi(&m), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn rotation_special_cases() {
        let w = 0.81;
        let z = rotation_channel(&RotationParams::new(0.0, 0.0, w).unwrap());
        assert!(z.max_abs_diff(&unitary_to_chi(&z_rotation_unitary(w)).unwrap()) < 1e-15);

        let x = rotation_channel(&RotationParams::about(Axis::X, w));
        assert_abs_diff_eq!(x.entry(1, 1).re, (w / 2.0).sin().powi(2), epsilon = 1e-15);
        assert!(x.entry(3, 3).norm() < 1e-30);

        let still = rotation_channel(&RotationParams::new(1.1, 4.0, 0.0).unwrap());
        assert!(still.max_abs_diff(&ChiMatrix::identity()) < 1e-15);

        assert!(RotationParams::new(-0.1, 0.0, 0.2).is_err());
        assert!(RotationParams::new(0.1, 2.0 * PI, 0.2).is_err());
    }

    #[test]
    fn depolarizing_examples() {
        assert_eq!(depolarizing(0.0).unwrap(), ChiMatrix::identity());
        assert_eq!(depolarizing(1.0).unwrap().diagonal(), [0.25; 4]);
        assert_abs_diff_eq!(depolarizing(0.01).unwrap().entry(0, 0).re, 0.9925, epsilon = 1e-15);
        assert_abs_diff_eq!(depolarizing(0.2).unwrap().process_infidelity(), 0.15, epsilon = 1e-15);
        assert!(depolarizing(1.5).is_err());
        assert!(depolarizing(-0.1).is_err());
    }

    #[test]
    fn twirl_examples() {
        let w: f64 = 0.6;
        let t = twirl(&z_rotation(w));
        let (s, co) = (w / 2.0).sin_cos();
        assert!(t.max_abs_diff(&ChiMatrix::diagonal_unchecked([co * co, 0.0, 0.0, s * s])) < 1e-15);
        let pauli = ChiMatrix::pauli_channel([0.9, 0.05, 0.03, 0.02]).unwrap();
        assert_eq!(twirl(&pauli), pauli);
    }

    #[test]
    fn process_infidelity_examples() {
        assert_eq!(ChiMatrix::identity().process_infidelity(), 0.0);
        let w: f64 = 0.3;
        assert_abs_diff_eq!(z_rotation(w).process_infidelity(), (w / 2.0).sin().powi(2), epsilon = 1e-16);
    }

    #[test]
    fn compose_examples() {
        let b = rotation_channel(&RotationParams::new(0.7, 1.9, 0.4).unwrap());
        assert!(compose(&ChiMatrix::identity(), &b).unwrap().max_abs_diff(&b) < 1e-15);
        assert!(compose(&b, &ChiMatrix::identity()).unwrap().max_abs_diff(&b) < 1e-15);
        let (p, q) = (0.13, 0.31);
        let pq = compose(&depolarizing(p).unwrap(), &depolarizing(q).unwrap()).unwrap();
        assert!(pq.max_abs_diff(&depolarizing(p + q - p * q).unwrap()) < 1e-15);
        // two Z rotations add
        let zz = compose(&z_rotation(0.2), &z_rotation(0.5)).unwrap();
        assert!(zz.max_abs_diff(&z_rotation(0.7)) < 1e-15);
    }

    #[test]
    fn compose_order_is_b_then_a() {
        // X-rotation then Z-rotation differs from the reverse; check against the unitary product.
        let a = RotationParams::about(Axis::Z, 0.9);
        let b = RotationParams::about(Axis::X, 0.5);
        let direct = unitary_to_chi(&(rotation_unitary(&a) * rotation_unitary(&b))).unwrap();
        let composed = compose(&rotation_channel(&a), &rotation_channel(&b)).unwrap();
        assert!(composed.max_abs_diff(&direct) < 1e-15);
        let reversed = compose(&rotation_channel(&b), &rotation_channel(&a)).unwrap();
        assert!(reversed.max_abs_diff(&direct) > 1e-3);
    }

    #[test]
    fn calibration() {
        let r = 0.003;
        assert_eq!(calibrate_omega(4.0 * r / 3.0, r, Axis::Z).unwrap(), 0.0);

        let w = 0.2;
        let target = (w / 2.0_f64).sin().powi(2);
        assert_abs_diff_eq!(calibrate_omega(0.0, target, Axis::Z).unwrap(), w, epsilon = 1e-10);

        // infidelity of dep(p)∘U is sin²(ω/2)(1 - p) + 3p/4 for any axis
        let p = 1e-4;
        let scalar = 2.0 * ((r - 0.75 * p) / (1.0 - p)).sqrt().asin();
        for axis in [Axis::Z, Axis::X, Axis::new(1.0, 2.5).unwrap()] {
            let omega = calibrate_omega(p, r, axis).unwrap();
            assert_abs_diff_eq!(omega, scalar, epsilon = 1e-9);
            let got = compose(&depolarizing(p).unwrap(), &rotation_channel(&RotationParams::about(axis, omega)))
                .unwrap()
                .process_infidelity();
            assert_abs_diff_eq!(got, r, epsilon = 1e-12);
        }
        assert!(matches!(calibrate_omega(0.01, r, Axis::Z), Err(Error::Infeasible(_))));
    }

    fn arb_rotation() -> impl Strategy<Value = RotationParams> {
        (0.0..PI, 0.0..2.0 * PI, -PI..PI).prop_map(|(t, p, w)| RotationParams::new(t, p, w).unwrap())
    }

    proptest! {
        #[test]
        fn rotations_are_valid_and_twirl_matches_expansion(r in arb_rotation()) {
            let chi = rotation_channel(&r);
            chi.validate(CHI_TOL).unwrap();
            let via_matrix = unitary_to_chi(&rotation_unitary(&r)).unwrap();
            prop_assert!(chi.max_abs_diff(&via_matrix) < 1e-14);
            let coeffs = r.pauli_coefficients();
            let t = twirl(&chi);
            for i in 0..4 {
                prop_assert!((t.entry(i, i).re - coeffs[i].norm_sqr()).abs() < 1e-15);
            }
            prop_assert_eq!(twirl(&t), t);
        }

        #[test]
        fn compose_is_associative(a in arb_rotation(), b in arb_rotation(), p in 0.0..1.0f64) {
            let (a, b, c) = (rotation_channel(&a), depolarizing(p).unwrap(), rotation_channel(&b));
            let left = compose(&compose(&a, &b).unwrap(), &c).unwrap();
            let right = compose(&a, &compose(&b, &c).unwrap()).unwrap();
            prop_assert!(left.max_abs_diff(&right) < 1e-13);
        }
    }
}
