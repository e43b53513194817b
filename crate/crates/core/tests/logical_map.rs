use std::f64::consts::PI;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use steane_rc::channels::{random_cptp, rotation_channel, twirl, z_rotation, Axis, RotationParams, CHI_TOL};
use steane_rc::logical::{concatenate_levels, gain_delta, PhysicalNoise};
use steane_rc::verify::brute_force_logical_chi;
use steane_rc::{ChiMatrix, ExecMode, LogicalMap, NoiseAssignment};

fn noise_from_seed(seed: u64, t: f64) -> NoiseAssignment {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    NoiseAssignment::new((0..7).map(|_| random_cptp(&mut rng, t).unwrap()).collect()).unwrap()
}

#[test]
fn x_and_z_rotations_are_equivalent() {
    // the code is symmetric under X <-> Z and Z-type errors never reach the
    // tie-broken weight-2 recoveries
    let map = LogicalMap::steane();
    for w in [0.1, 0.5, 1.2] {
        let z = gain_delta(&map, &PhysicalNoise::Uniform(z_rotation(w)), 2, ExecMode::Sequential).unwrap();
        let x = rotation_channel(&RotationParams::about(Axis::X, w));
        let x = gain_delta(&map, &PhysicalNoise::Uniform(x), 2, ExecMode::Sequential).unwrap();
        for (a, b) in z.iter().zip(&x) {
            assert!((a.r_raw - b.r_raw).abs() < 1e-14 && (a.r_twirled - b.r_twirled).abs() < 1e-14);
        }
    }
}

#[test]
fn gains_grow_with_level_at_small_angle() {
    let map = LogicalMap::steane();
    let pts = gain_delta(&map, &PhysicalNoise::Uniform(z_rotation(PI / 20.0)), 5, ExecMode::Parallel).unwrap();
    let deltas: Vec<f64> = pts.iter().map(|p| p.delta.unwrap()).collect();
    assert!(deltas.windows(2).all(|w| w[1] > w[0]), "{deltas:?}");
}

#[test]
fn rotation_sense_does_not_matter_for_z() {
    let map = LogicalMap::steane();
    let a = map.logical_infidelity(&NoiseAssignment::uniform(z_rotation(0.4)), ExecMode::Sequential).unwrap();
    let b = map.logical_infidelity(&NoiseAssignment::uniform(z_rotation(-0.4)), ExecMode::Sequential).unwrap();
    assert!((a - b).abs() < 1e-15);
}

#[test]
fn per_qubit_concatenation_matches_uniform_when_identical() {
    let map = LogicalMap::steane();
    let chi = noise_from_seed(5, 0.2).per_qubit()[0];
    let uniform = concatenate_levels(&map, &PhysicalNoise::Uniform(chi), 2, false, ExecMode::Parallel).unwrap();
    let per = concatenate_levels(&map, &PhysicalNoise::PerQubit(vec![chi; 49]), 2, false, ExecMode::Parallel).unwrap();
    for (a, b) in uniform.iter().zip(&per) {
        assert!(a.chi.max_abs_diff(&b.chi) < 1e-15);
    }
}

#[test]
fn sequential_and_parallel_agree_bitwise() {
    let map = LogicalMap::steane();
    let noise = noise_from_seed(9, 0.5);
    let a = map.logical_chi(&noise, ExecMode::Sequential).unwrap();
    let b = map.logical_chi(&noise, ExecMode::Parallel).unwrap();
    assert_eq!(a, b);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn logical_channel_is_a_valid_channel(seed in any::<u64>(), t in 0.01f64..1.0) {
        let map = LogicalMap::steane();
        let chi = map.logical_chi(&noise_from_seed(seed, t), ExecMode::Parallel).unwrap();
        prop_assert!(chi.validate(CHI_TOL).is_ok());
        prop_assert!((chi.trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn twirled_input_gives_pauli_logical_channel(seed in any::<u64>(), t in 0.01f64..1.0) {
        let map = LogicalMap::steane();
        let noise = noise_from_seed(seed, t);
        let out = map.logical_chi(&noise.twirled(), ExecMode::Parallel).unwrap();
        prop_assert!(out.max_off_diagonal() < 1e-15);
        // twirling the input never changes the diagonal of each physical channel
        for (a, b) in noise.per_qubit().iter().zip(noise.twirled().per_qubit()) {
            prop_assert_eq!(twirl(a), *b);
        }
    }

    #[test]
    fn pauli_noise_matches_brute_force(p in prop::array::uniform4(0.0f64..1.0)) {
        let total: f64 = p.iter().sum::<f64>() + 1e-9;
        let probs = [1.0 - 0.3 * (p[1] + p[2] + p[3]) / total, 0.3 * p[1] / total, 0.3 * p[2] / total, 0.3 * p[3] / total];
        let chi = ChiMatrix::pauli_channel(probs).unwrap();
        let map = LogicalMap::steane();
        let noise = NoiseAssignment::uniform(chi);
        let dense = brute_force_logical_chi(map.code(), map.decoder(), &noise).unwrap();
        prop_assert!(map.logical_chi(&noise, ExecMode::Parallel).unwrap().max_abs_diff(&dense) < 1e-10);
    }
}
