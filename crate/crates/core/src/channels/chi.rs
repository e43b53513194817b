use std::fmt;

use nalgebra::Matrix4;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Tolerance for Hermiticity, trace and positivity checks.
pub const CHI_TOL: f64 = 1e-10;

/// χ-matrix of a single-qubit channel, `ℰ(ρ) = Σ χ_ij P_i ρ P_j`, indexed in
/// the `(I, X, Y, Z)` basis.
///
/// Constructors validate Hermiticity, unit trace and positive
/// semidefiniteness to within a tolerance. Eigenvalues in `[-tol, 0)` are
/// accepted as zero; entries are never rewritten, because logical channels at
/// high concatenation levels carry meaningful entries far below `tol`.
#[derive(Clone, Copy, PartialEq)]
pub struct ChiMatrix {
    m: [[Complex64; 4]; 4],
}

impl ChiMatrix {
    pub fn new(m: [[Complex64; 4]; 4]) -> Result<Self> {
        Self::with_tolerance(m, CHI_TOL)
    }

    pub fn with_tolerance(m: [[Complex64; 4]; 4], tol: f64) -> Result<Self> {
        let chi = Self { m };
        chi.validate(tol)?;
        Ok(chi)
    }

    #[cfg(test)]
    pub(crate) fn from_raw(m: [[Complex64; 4]; 4]) -> Self {
        Self { m }
    }

    pub fn identity() -> Self {
        Self::diagonal_unchecked([1.0, 0.0, 0.0, 0.0])
    }

    /// Pauli channel with error probabilities `(p_I, p_X, p_Y, p_Z)`.
    pub fn pauli_channel(probs: [f64; 4]) -> Result<Self> {
        if let Some(&bad) = probs.iter().find(|p| !(**p >= 0.0 && **p <= 1.0)) {
            return Err(Error::OutOfRange { name: "Pauli probability", value: bad, expected: "[0, 1]" });
        }
        let chi = Self::diagonal_unchecked(probs);
        chi.validate(CHI_TOL)?;
        Ok(chi)
    }

    pub(crate) fn diagonal_unchecked(d: [f64; 4]) -> Self {
        let mut m = [[Complex64::default(); 4]; 4];
        for i in 0..4 {
            m[i][i] = Complex64::new(d[i], 0.0);
        }
        Self { m }
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.m[i][j]
    }

    pub fn entries(&self) -> &[[Complex64; 4]; 4] {
        &self.m
    }

    pub fn diagonal(&self) -> [f64; 4] {
        [self.m[0][0].re, self.m[1][1].re, self.m[2][2].re, self.m[3][3].re]
    }

    pub fn trace(&self) -> Complex64 {
        (0..4).map(|i| self.m[i][i]).sum()
    }

    /// True when every off-diagonal entry is exactly zero.
    pub fn is_diagonal(&self) -> bool {
        (0..4).all(|i| (0..4).all(|j| i == j || self.m[i][j] == Complex64::default()))
    }

    pub fn max_off_diagonal(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    worst = worst.max(self.m[i][j].norm());
                }
            }
        }
        worst
    }

    /// Process infidelity `1 - Re χ₀₀`, evaluated as `Re(χ₁₁ + χ₂₂ + χ₃₃)`
    /// so tiny infidelities keep full relative precision.
    pub fn process_infidelity(&self) -> f64 {
        self.m[1][1].re + self.m[2][2].re + self.m[3][3].re
    }

    pub fn max_abs_diff(&self, other: &ChiMatrix) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((self.m[i][j] - other.m[i][j]).norm());
            }
        }
        worst
    }

    pub fn to_matrix(&self) -> Matrix4<Complex64> {
        Matrix4::from_fn(|i, j| self.m[i][j])
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let h = self.to_matrix();
        let h = (h + h.adjoint()) * Complex64::new(0.5, 0.0);
        h.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        if self.m.iter().flatten().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidChi { property: "finiteness", deviation: f64::NAN, tolerance: tol });
        }
        let mut herm = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                herm = herm.max((self.m[i][j] - self.m[j][i].conj()).norm());
            }
        }
        if herm > tol {
            return Err(Error::InvalidChi { property: "Hermiticity", deviation: herm, tolerance: tol });
        }
        let trace_dev = (self.trace() - Complex64::new(1.0, 0.0)).norm();
        if trace_dev > tol {
            return Err(Error::InvalidChi { property: "unit trace", deviation: trace_dev, tolerance: tol });
        }
        let min_eig = self.min_eigenvalue();
        if min_eig < -tol {
            return Err(Error::InvalidChi { property: "positivity", deviation: -min_eig, tolerance: tol });
        }
        Ok(())
    }

    /// Row-major `[re, im]` pairs, basis order I, X, Y, Z.
    pub fn to_pairs(&self) -> [[[f64; 2]; 4]; 4] {
        let mut out = [[[0.0; 2]; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] = [self.m[i][j].re, self.m[i][j].im];
            }
        }
        out
    }

    pub fn from_pairs(pairs: [[[f64; 2]; 4]; 4]) -> Result<Self> {
        let mut m = [[Complex64::default(); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = Complex64::new(pairs[i][j][0], pairs[i][j][1]);
            }
        }
        Self::new(m)
    }
}

impl fmt::Debug for ChiMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ChiMatrix [")?;
        for row in &self.m {
            let cells: Vec<String> = row.iter().map(|c| format!("{:+.6e}{:+.6e}i", c.re, c.im)).collect();
            writeln!(f, "  {}", cells.join("  "))?;
        }
        write!(f, "]")
    }
}

impl Serialize for ChiMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_pairs().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ChiMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let pairs = <[[[f64; 2]; 4]; 4]>::deserialize(deserializer)?;
        Self::from_pairs(pairs).map_err(serde::de::Error::custom)
    }
}
