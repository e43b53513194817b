//! Closed forms and recursion polynomials for i.i.d. Z-rotation noise.

use num_complex::Complex64;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ZrotClosedForms {
    /// `r(Ē₁)`, unprotected by twirling.
    pub r_raw: f64,
    /// `r(Ē^T₁)`, with twirled physical noise.
    pub r_twirled: f64,
    /// `[χ(Ē₁)]₀₃`.
    pub chi03: Complex64,
}

pub fn zrot_closed_forms(omega: f64) -> ZrotClosedForms {
    let c = |k: f64| (k * omega).cos();
    let r_raw = (32.0 - 21.0 * c(1.0) - 14.0 * c(3.0) + 3.0 * c(7.0)) / 64.0;
    let r_twirled = (256.0 - 231.0 * c(1.0) - 49.0 * c(3.0) + 21.0 * c(5.0) + 3.0 * c(7.0)) / 512.0;
    let chi03 = Complex64::new(0.0, -omega.sin().powi(3) * (9.0 * c(2.0) + 3.0 * c(4.0) + 2.0) / 8.0);
    ZrotClosedForms { r_raw, r_twirled, chi03 }
}

/// `f₀,₀(z) = z²(63 − 434z + 1260z² − 1848z³ + 1344z⁴ − 384z⁵)`.
///
/// Satisfies `1 − f₀,₀(1 − z) = f₀,₀(z)`, so it maps both `χ₀₀` and the
/// deficit `1 − χ₀₀` to their next-level values.
pub fn f00(z: f64) -> f64 {
    z * z * (63.0 + z * (-434.0 + z * (1260.0 + z * (-1848.0 + z * (1344.0 - 384.0 * z)))))
}

/// `f₀,₃(y) = −2y³(7 + 84y² + 192y⁴)`.
pub fn f03(y: Complex64) -> Complex64 {
    let y2 = y * y;
    -2.0 * y * y2 * (7.0 + y2 * (84.0 + 192.0 * y2))
}

/// `g₀,₀(z) = z²(21 − 98z + 210z² − 252z³ + 168z⁴ − 48z⁵)`; same symmetry as [`f00`].
pub fn g00(z: f64) -> f64 {
    z * z * (21.0 + z * (-98.0 + z * (210.0 + z * (-252.0 + z * (168.0 - 48.0 * z)))))
}

/// One level of the polynomial recursion on `(χ₀₀, χ₀₃)`. The twirled
/// recursion forces `χ₀₃ = 0`.
pub fn zrot_recursion_step(z00: f64, z03: Complex64, twirled: bool) -> (f64, Complex64) {
    if twirled {
        (g00(z00), Complex64::default())
    } else {
        (f00(z00), f03(z03))
    }
}

/// Deficits `1 − χ₀₀` at levels `1..=levels` from the polynomial recursion,
/// starting from the physical deficit `sin²(ω/2)`.
pub fn zrot_deficits(omega: f64, levels: u32, twirled: bool) -> Vec<f64> {
    let step = if twirled { g00 } else { f00 };
    let mut d = (omega / 2.0).sin().powi(2);
    (0..levels)
        .map(|_| {
            d = step(d);
            d
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn zero_angle() {
        let z = zrot_closed_forms(0.0);
        assert_eq!(z.r_raw, 0.0);
        assert_eq!(z.r_twirled, 0.0);
        assert_eq!(z.chi03.norm(), 0.0);
    }

    #[test]
    fn pi_over_20_goldens() {
        let z = zrot_closed_forms(std::f64::consts::PI / 20.0);
        let h = (std::f64::consts::PI / 40.0).sin();
        // leading terms dominate at this angle
        assert_relative_eq!(z.r_raw, 63.0 * h.powi(4), max_relative = 0.05);
        assert_relative_eq!(z.r_twirled, 21.0 * h.powi(4), max_relative = 0.05);
        assert_relative_eq!(z.r_raw / z.r_twirled, 2.9589, max_relative = 1e-4);
    }

    #[test]
    fn series_coefficients() {
        for w in [1e-2f64, 1e-3] {
            let z = zrot_closed_forms(w);
            let x = (w / 2.0).powi(4);
            assert_relative_eq!(z.r_raw / x, 63.0, max_relative = 1e-2);
            assert_relative_eq!(z.r_twirled / x, 21.0, max_relative = 1e-2);
        }
    }

    #[test]
    fn polynomial_symmetry_and_fixed_points() {
        for z in [0.0, 0.01, 0.2, 0.5, 0.9] {
            assert_relative_eq!(1.0 - f00(1.0 - z), f00(z), epsilon = 1e-13);
            assert_relative_eq!(1.0 - g00(1.0 - z), g00(z), epsilon = 1e-13);
        }
        assert_eq!(zrot_recursion_step(1.0, Complex64::default(), false), (1.0, Complex64::default()));
        assert_eq!(zrot_recursion_step(1.0, Complex64::default(), true), (1.0, Complex64::default()));
    }

    #[test]
    fn leading_orders() {
        let w = 1e-3f64;
        let r1 = 63.0 * (w / 2.0).powi(4);
        // in the deficit variable, avoiding 1 − (1 − r) cancellation
        let (next, _) = zrot_recursion_step(r1, Complex64::default(), false);
        assert_relative_eq!(next, 63.0 * r1 * r1, max_relative = 1e-4);
        // χ₀₃ ≈ −i·14^{(3^ℓ−1)/2}(ω/2)^{3^ℓ}
        let y1 = Complex64::new(0.0, -14.0 * (w / 2.0).powi(3));
        let y2 = f03(y1);
        assert_relative_eq!(y2.im, -(14f64.powi(4)) * (w / 2.0).powi(9), max_relative = 1e-4);
    }

    #[test]
    fn deficits_start_from_level_one() {
        let w = 0.2;
        let d = zrot_deficits(w, 2, false);
        assert_relative_eq!(d[0], zrot_closed_forms(w).r_raw, max_relative = 1e-12);
        assert_relative_eq!(d[1], f00(d[0]), max_relative = 1e-15);
        let t = zrot_deficits(w, 1, true);
        assert_relative_eq!(t[0], zrot_closed_forms(w).r_twirled, max_relative = 1e-12);
    }
}
