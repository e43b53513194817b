//! Independent oracles and the named consistency checks behind `verify`.
//!
//! The dense oracle simulates encode → noise → syndrome projection →
//! recovery on the full 2⁷-dimensional space and never touches coset
//! phases. The twirl oracle averages a channel over the four Pauli frames.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::channels::{self, pauli_matrices, random_cptp, twirl, z_rotation, ChiMatrix};
use crate::code::{DecoderTable, StabilizerCode, Syndrome};
use crate::error::{Error, Result};
use crate::logical::zrot::{f00, f03, g00, zrot_closed_forms};
use crate::logical::{concatenate_levels, LogicalMap, NoiseAssignment, PhysicalNoise};
use crate::par::ExecMode;
use crate::pauli::PauliOperator;
use crate::I_POW;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `P|ψ⟩` for `P = i^k X^x Z^z`.
fn apply_pauli(p: &PauliOperator, v: &[Complex64]) -> Vec<Complex64> {
    let ph = I_POW[p.phase_exp() as usize];
    let mut out = vec![ZERO; v.len()];
    for (r, amp) in v.iter().enumerate() {
        let sign = if (p.z_bits() & r as u64).count_ones() & 1 == 1 { -1.0 } else { 1.0 };
        out[r ^ p.x_bits() as usize] = ph * amp * sign;
    }
    out
}

fn project(code: &StabilizerCode, s: Syndrome, v: &[Complex64]) -> Vec<Complex64> {
    let mut v = v.to_vec();
    for (g, gen) in code.generators().iter().enumerate() {
        let sign = if (s.bits() >> g) & 1 == 1 { -1.0 } else { 1.0 };
        let gv = apply_pauli(gen, &v);
        for (a, b) in v.iter_mut().zip(gv) {
            *a = (*a + b * sign) * 0.5;
        }
    }
    v
}

/// `P[b][b ^ x]` for a single-qubit Pauli letter index.
fn letter_entry(letter: usize, row: usize) -> Complex64 {
    match (letter, row) {
        (0, _) | (1, _) => Complex64::new(1.0, 0.0),
        (2, 0) => Complex64::new(0.0, -1.0),
        (2, _) => Complex64::new(0.0, 1.0),
        (3, 0) => Complex64::new(1.0, 0.0),
        _ => Complex64::new(-1.0, 0.0),
    }
}

/// `ρ ↦ Σ χ_ij P_i ρ P_j` on qubit `q` of a dense `dim × dim` row-major matrix.
fn apply_channel(rho: &[Complex64], dim: usize, q: usize, chi: &ChiMatrix) -> Vec<Complex64> {
    let mut out = vec![ZERO; rho.len()];
    for i in 0..4 {
        let xi = (i == 1 || i == 2) as usize;
        for j in 0..4 {
            let c = chi.entry(i, j);
            if c == ZERO {
                continue;
            }
            let xj = (j == 1 || j == 2) as usize;
            for r in 0..dim {
                let rq = (r >> q) & 1;
                let left = c * letter_entry(i, rq);
                let src_r = r ^ (xi << q);
                for col in 0..dim {
                    let cq = (col >> q) & 1;
                    let src_c = col ^ (xj << q);
                    out[r * dim + col] += left * rho[src_r * dim + src_c] * letter_entry(j, cq ^ xj);
                }
            }
        }
    }
    out
}

/// Logical χ from the 2×2 images of `|a⟩⟨b|`, via the Liouville matrix.
fn chi_from_images(images: &[[Matrix2<Complex64>; 2]; 2]) -> [[Complex64; 4]; 4] {
    let mut s = Matrix4::zeros();
    for rp in 0..2 {
        for cp in 0..2 {
            let img = &images[rp][cp];
            for r in 0..2 {
                for c in 0..2 {
                    s[(2 * r + c, 2 * rp + cp)] = img[(r, c)];
                }
            }
        }
    }
    channels::chi_from_liouville(&s)
}

/// Dense-simulation logical χ of one Steane block under `noise`, decoded with `decoder`.
pub fn brute_force_logical_chi(code: &StabilizerCode, decoder: &DecoderTable, noise: &NoiseAssignment) -> Result<ChiMatrix> {
    let n = code.num_qubits();
    let dim = 1usize << n;
    let mut zero = vec![ZERO; dim];
    zero[0] = Complex64::new(1.0, 0.0);
    let mut l0 = project(code, Syndrome(0), &zero);
    let norm = l0.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    l0.iter_mut().for_each(|a| *a /= norm);
    let l1 = apply_pauli(code.logical_x(), &l0);
    let logical = [l0, l1];

    // w[s][a] = Π_s R_s |L_a⟩
    let w: Vec<[Vec<Complex64>; 2]> = (0..code.num_syndromes())
        .map(|s| {
            let s = Syndrome(s as u8);
            let r = decoder.recovery(s);
            [0, 1].map(|a| project(code, s, &apply_pauli(r, &logical[a])))
        })
        .collect();

    let mut images = [[Matrix2::zeros(); 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            let mut rho = vec![ZERO; dim * dim];
            for r in 0..dim {
                for c in 0..dim {
                    rho[r * dim + c] = logical[a][r] * logical[b][c].conj();
                }
            }
            for (q, chi) in noise.per_qubit().iter().enumerate() {
                rho = apply_channel(&rho, dim, q, chi);
            }
            let mut sigma = Matrix2::zeros();
            for ws in &w {
                for ap in 0..2 {
                    for bp in 0..2 {
                        let mut acc = ZERO;
                        for r in 0..dim {
                            let left = ws[ap][r].conj();
                            if left == ZERO {
                                continue;
                            }
                            for c in 0..dim {
                                acc += left * rho[r * dim + c] * ws[bp][c];
                            }
                        }
                        sigma[(ap, bp)] += acc;
                    }
                }
            }
            images[a][b] = sigma;
        }
    }
    ChiMatrix::with_tolerance(chi_from_images(&images), 1e-9)
}

/// `(1/4) Σ_P P ℰ(P ρ P) P`, evaluated on 2×2 matrices.
pub fn frame_average_twirl(chi: &ChiMatrix) -> Result<ChiMatrix> {
    let paulis = pauli_matrices();
    let channel = |rho: &Matrix2<Complex64>| {
        let mut out = Matrix2::zeros();
        for i in 0..4 {
            for j in 0..4 {
                out += paulis[i] * rho * paulis[j] * chi.entry(i, j);
            }
        }
        out
    };
    let mut images = [[Matrix2::zeros(); 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            let mut rho = Matrix2::zeros();
            rho[(a, b)] = Complex64::new(1.0, 0.0);
            let mut avg = Matrix2::zeros();
            for p in &paulis {
                avg += p * channel(&(p * rho * p)) * p;
            }
            images[a][b] = avg * Complex64::new(0.25, 0.0);
        }
    }
    ChiMatrix::new(chi_from_images(&images))
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn numeric(name: &'static str, residual: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        Self { name, residual, tolerance, passed: residual <= tolerance, detail: detail.into() }
    }

    fn failed(name: &'static str, err: &Error) -> Self {
        Self { name, residual: f64::INFINITY, tolerance: 0.0, passed: false, detail: err.to_string() }
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:<22} residual {:.3e} (tol {:.0e})  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.residual,
            self.tolerance,
            self.detail
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failing(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let failed = self.failing();
        if failed.is_empty() {
            write!(f, "all {} checks passed", self.checks.len())
        } else {
            write!(f, "{} of {} checks failed: {}", failed.len(), self.checks.len(), failed.join(", "))
        }
    }
}

pub fn check_decoder_counts(decoder: &DecoderTable) -> CheckResult {
    let mut counts = [0usize; 8];
    for r in decoder.recoveries() {
        counts[(r.weight() as usize).min(7)] += 1;
    }
    let le1 = counts[0] + counts[1];
    let residual = (le1 as f64 - 22.0).abs() + (counts[2] as f64 - 42.0).abs() + (decoder.correctable_set().len() as f64 - 4096.0).abs();
    CheckResult::numeric(
        "decoder-counts",
        residual,
        0.0,
        format!("weight≤1: {le1}, weight 2: {}, correctable: {}", counts[2], decoder.correctable_set().len()),
    )
}

/// Every recovery carries its syndrome and has minimum weight within it.
pub fn check_decoder_optimality(code: &StabilizerCode, decoder: &DecoderTable) -> CheckResult {
    let mut min_weight = vec![u32::MAX; code.num_syndromes()];
    for p in PauliOperator::enumerate_by_weight(code.num_qubits()) {
        let s = code.syndrome_unchecked(&p).index();
        min_weight[s] = min_weight[s].min(p.weight());
    }
    let mut bad = 0usize;
    for (s, r) in decoder.recoveries().iter().enumerate() {
        if code.syndrome_unchecked(r).index() != s || r.weight() > min_weight[s] {
            bad += 1;
        }
    }
    CheckResult::numeric("decoder-optimality", bad as f64, 0.0, format!("{bad} non-optimal or mislabelled recoveries"))
}

/// `R_{s(E)}·|E·P̄_l| = φ(E,l)·S·P̄_l` holds exactly for every correctable `E` and every `l`.
pub fn check_phi_consistency(code: &StabilizerCode, decoder: &DecoderTable) -> CheckResult {
    let mut bad = 0usize;
    let mut first = String::new();
    for e in decoder.correctable_set() {
        for l in 0..4u8 {
            let ok = (|| -> Result<bool> {
                let shifted = e.multiply(code.logical(l))?.to_bare();
                let lhs = decoder.recovery(code.syndrome(&shifted)?).multiply(&shifted)?;
                let cp = decoder.coset_phase(code, e, l)?;
                let rhs = cp.stabilizer.multiply(code.logical(l))?.times_i_pow(cp.phase);
                Ok(lhs == rhs)
            })();
            if !matches!(ok, Ok(true)) {
                if bad == 0 {
                    first = match ok {
                        Err(err) => format!("E = {}, l = {l}: {err}", e.letter_string()),
                        _ => format!("E = {}, l = {l}: reconstruction differs", e.letter_string()),
                    };
                }
                bad += 1;
            }
        }
    }
    let detail = if bad == 0 { format!("{} (E, l) pairs", 4 * decoder.correctable_set().len()) } else { first };
    CheckResult::numeric("phi-consistency", bad as f64, 0.0, detail)
}

/// Fifty angles in `(0, π/2]`.
pub fn closed_form_angles() -> Vec<f64> {
    (1..=50).map(|k| k as f64 * PI / 100.0).collect()
}

pub fn check_closed_forms(map: &LogicalMap, mode: ExecMode) -> CheckResult {
    let run = || -> Result<f64> {
        let mut worst = 0.0f64;
        for w in closed_form_angles() {
            let z = zrot_closed_forms(w);
            let noise = NoiseAssignment::uniform(z_rotation(w));
            let raw = map.logical_chi(&noise, mode)?;
            let tw = map.logical_chi(&noise.twirled(), mode)?;
            worst = worst
                .max((raw.process_infidelity() - z.r_raw).abs())
                .max((tw.process_infidelity() - z.r_twirled).abs())
                .max((raw.entry(0, 3) - z.chi03).norm());
        }
        Ok(worst)
    };
    match run() {
        Ok(r) => CheckResult::numeric("closed-form", r, 1e-12, "50 angles, raw, twirled and χ₀₃"),
        Err(e) => CheckResult::failed("closed-form", &e),
    }
}

/// Twirled Z-rotation levels 2 and 3 against `g₀,₀` applied to the engine's previous level.
pub fn check_recursion_g00(map: &LogicalMap, mode: ExecMode) -> CheckResult {
    let run = || -> Result<f64> {
        let mut worst = 0.0f64;
        for w in [PI / 20.0, 0.3, 0.5] {
            let lv = concatenate_levels(map, &PhysicalNoise::Uniform(z_rotation(w)), 3, true, mode)?;
            for k in 1..3 {
                let prev = lv[k - 1].chi.process_infidelity();
                worst = worst.max((lv[k].chi.process_infidelity() - g00(prev)).abs());
            }
        }
        Ok(worst)
    };
    match run() {
        Ok(r) => CheckResult::numeric("recursion-g00", r, 1e-12, "twirled levels 2-3"),
        Err(e) => CheckResult::failed("recursion-g00", &e),
    }
}

/// `f₀,₀` and `f₀,₃` reproduce one level of the map from a unitary (rank-one) Z-rotation input.
pub fn check_recursion_unitary_input(map: &LogicalMap, mode: ExecMode) -> CheckResult {
    let run = || -> Result<f64> {
        let mut worst = 0.0f64;
        for w in closed_form_angles() {
            let phys = z_rotation(w);
            let out = map.logical_chi(&NoiseAssignment::uniform(phys), mode)?;
            worst = worst
                .max((out.process_infidelity() - f00(phys.process_infidelity())).abs())
                .max((out.entry(0, 3) - f03(phys.entry(0, 3))).norm());
        }
        Ok(worst)
    };
    match run() {
        Ok(r) => CheckResult::numeric("recursion-f-unitary", r, 1e-12, "f₀,₀ and f₀,₃ on rank-one input"),
        Err(e) => CheckResult::failed("recursion-f-unitary", &e),
    }
}

pub fn random_heterogeneous_noise(seed: u64, t: f64) -> Result<NoiseAssignment> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    NoiseAssignment::new((0..7).map(|_| random_cptp(&mut rng, t)).collect::<Result<_>>()?)
}

pub fn check_brute_force(map: &LogicalMap, mode: ExecMode) -> CheckResult {
    let run = || -> Result<f64> {
        let mut worst = 0.0f64;
        for seed in 0..3 {
            let noise = random_heterogeneous_noise(1000 + seed, 0.4)?;
            let dense = brute_force_logical_chi(map.code(), map.decoder(), &noise)?;
            worst = worst.max(map.logical_chi(&noise, mode)?.max_abs_diff(&dense));
        }
        Ok(worst)
    };
    match run() {
        Ok(r) => CheckResult::numeric("brute-force", r, 1e-8, "3 heterogeneous random CPTP assignments"),
        Err(e) => CheckResult::failed("brute-force", &e),
    }
}

pub fn check_twirl_equivalence() -> CheckResult {
    let run = || -> Result<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let mut worst = 0.0f64;
        for _ in 0..20 {
            let chi = random_cptp(&mut rng, 0.5)?;
            worst = worst.max(frame_average_twirl(&chi)?.max_abs_diff(&twirl(&chi)));
        }
        Ok(worst)
    };
    match run() {
        Ok(r) => CheckResult::numeric("twirl-equivalence", r, 1e-14, "20 random CPTP maps"),
        Err(e) => CheckResult::failed("twirl-equivalence", &e),
    }
}

/// Runs every check against the given code and decoder.
pub fn run_checks(code: &StabilizerCode, decoder: &DecoderTable, mode: ExecMode) -> VerifyReport {
    let mut checks = vec![
        check_decoder_counts(decoder),
        check_decoder_optimality(code, decoder),
        check_phi_consistency(code, decoder),
    ];
    match LogicalMap::new(code.clone(), decoder.clone()) {
        Ok(map) => {
            checks.push(check_closed_forms(&map, mode));
            checks.push(check_recursion_g00(&map, mode));
            checks.push(check_recursion_unitary_input(&map, mode));
            checks.push(check_brute_force(&map, mode));
        }
        Err(e) => {
            for name in ["closed-form", "recursion-g00", "recursion-f-unitary", "brute-force"] {
                checks.push(CheckResult::failed(name, &e));
            }
        }
    }
    checks.push(check_twirl_equivalence());
    VerifyReport { checks }
}

pub fn run_all(mode: ExecMode) -> VerifyReport {
    let code = StabilizerCode::steane();
    let decoder = DecoderTable::build_min_weight(&code);
    run_checks(&code, &decoder, mode)
}
