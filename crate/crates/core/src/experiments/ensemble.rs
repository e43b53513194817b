use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::channels::{log_uniform, random_axis_rotation, random_cptp, ChiMatrix, DeltaSpread};
use crate::error::{Error, Result};
use crate::logical::{gain_delta, GainRecord, LogicalMap, PhysicalNoise};
use crate::par::{self, ExecMode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnsembleModel {
    /// A different random rotation on every physical qubit.
    RandomRotations,
    /// One random CPTP map, applied identically to every physical qubit.
    RandomCptp,
}

impl EnsembleModel {
    pub fn name(self) -> &'static str {
        match self {
            EnsembleModel::RandomRotations => "random-rotations",
            EnsembleModel::RandomCptp => "random-cptp",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub model: EnsembleModel,
    pub samples: usize,
    pub levels: u32,
    pub seed: u64,
    /// Log-uniform range for `μ_δ` or `t`.
    pub strength_range: (f64, f64),
    pub spread: DeltaSpread,
}

impl EnsembleSpec {
    pub const DEFAULT_SAMPLES: usize = 2000;
    pub const PAPER_SAMPLES_ROTATIONS: usize = 16000;
    pub const PAPER_SAMPLES_CPTP: usize = 18000;

    pub fn new(model: EnsembleModel, samples: usize, levels: u32, seed: u64) -> Self {
        Self { model, samples, levels, seed, strength_range: (1e-3, 1e-1), spread: DeltaSpread::Variance }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::Spec("ensemble needs at least one sample".into()));
        }
        if self.levels == 0 {
            return Err(Error::Spec("levels must be ≥ 1".into()));
        }
        let (lo, hi) = self.strength_range;
        if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
            return Err(Error::Spec(format!("noise-strength range [{lo}, {hi}] must satisfy 0 < lo ≤ hi")));
        }
        Ok(())
    }
}

/// One record per sample and level, ordered by sample then level. Sample
/// `i` draws from its own generator seeded with `seed + i`, so the output
/// does not depend on the worker count.
///
/// Random rotations draw `7^levels` channels per sample; the level-`j`
/// record for `j < levels` describes the first level-`j` block.
pub fn ensemble_study(map: &LogicalMap, spec: &EnsembleSpec, mode: ExecMode) -> Result<Vec<GainRecord>> {
    spec.validate()?;
    let rows = par::try_map_range(mode, spec.samples, |i| -> Result<Vec<GainRecord>> {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed.wrapping_add(i as u64));
        let strength = log_uniform(&mut rng, spec.strength_range.0, spec.strength_range.1);
        let mut template = GainRecord {
            model: spec.model.name().into(),
            seed: Some(spec.seed),
            sample: Some(i as u64),
            ..Default::default()
        };
        let noise = match spec.model {
            EnsembleModel::RandomRotations => {
                template.mu_delta = Some(strength);
                let n = 7usize.pow(spec.levels);
                let chis = (0..n)
                    .map(|_| random_axis_rotation(&mut rng, strength, spec.spread).map(|r| r.chi))
                    .collect::<Result<Vec<ChiMatrix>>>()?;
                PhysicalNoise::PerQubit(chis)
            }
            EnsembleModel::RandomCptp => {
                template.t = Some(strength);
                PhysicalNoise::Uniform(random_cptp(&mut rng, strength)?)
            }
        };
        template.r_physical = noise.mean_infidelity();
        Ok(gain_delta(map, &noise, spec.levels, ExecMode::Sequential)?
            .iter()
            .map(|p| GainRecord::with_point(&template, p))
            .collect())
    })?;
    Ok(rows.into_iter().flatten().collect())
}
