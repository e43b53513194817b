use serde::Serialize;

use super::engine::{LogicalMap, NoiseAssignment};
use crate::channels::{twirl, ChiMatrix};
use crate::error::{Error, Result};
use crate::par::{self, ExecMode};

/// Physical noise for a concatenated code.
#[derive(Clone, Debug, PartialEq)]
pub enum PhysicalNoise {
    /// The same channel on every physical qubit.
    Uniform(ChiMatrix),
    /// The same seven channels in every level-1 block.
    Blocks(NoiseAssignment),
    /// One channel per physical qubit, `7^levels` of them; consecutive runs of
    /// seven form the level-1 blocks.
    PerQubit(Vec<ChiMatrix>),
}

impl PhysicalNoise {
    pub fn twirled(&self) -> Self {
        match self {
            PhysicalNoise::Uniform(c) => PhysicalNoise::Uniform(twirl(c)),
            PhysicalNoise::Blocks(a) => PhysicalNoise::Blocks(a.twirled()),
            PhysicalNoise::PerQubit(v) => PhysicalNoise::PerQubit(v.iter().map(twirl).collect()),
        }
    }

    /// Mean physical process infidelity.
    pub fn mean_infidelity(&self) -> f64 {
        match self {
            PhysicalNoise::Uniform(c) => c.process_infidelity(),
            PhysicalNoise::Blocks(a) => a.mean_infidelity(),
            PhysicalNoise::PerQubit(v) => v.iter().map(ChiMatrix::process_infidelity).sum::<f64>() / v.len() as f64,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LogicalChannel {
    pub chi: ChiMatrix,
    pub level: u32,
    pub twirled_input: bool,
}

/// Hard-decoder concatenation: each level's logical χ is the next level's
/// physical χ. Returns levels `1..=levels`. For [`PhysicalNoise::PerQubit`]
/// the entry for level `j < levels` is that of the first level-`j` block.
pub fn concatenate_levels(
    map: &LogicalMap,
    noise: &PhysicalNoise,
    levels: u32,
    twirled_input: bool,
    mode: ExecMode,
) -> Result<Vec<LogicalChannel>> {
    if levels == 0 {
        return Err(Error::OutOfRange { name: "levels", value: 0.0, expected: "≥ 1" });
    }
    let noise = if twirled_input { noise.twirled() } else { noise.clone() };
    let wrap = |chi, level| LogicalChannel { chi, level, twirled_input };
    let mut out = Vec::with_capacity(levels as usize);

    let mut current = match &noise {
        PhysicalNoise::Uniform(c) => {
            let mut chi = *c;
            for level in 1..=levels {
                chi = map.logical_chi(&NoiseAssignment::uniform(chi), mode)?;
                out.push(wrap(chi, level));
            }
            return Ok(out);
        }
        PhysicalNoise::Blocks(a) => {
            let mut chi = map.logical_chi(a, mode)?;
            out.push(wrap(chi, 1));
            for level in 2..=levels {
                chi = map.logical_chi(&NoiseAssignment::uniform(chi), mode)?;
                out.push(wrap(chi, level));
            }
            return Ok(out);
        }
        PhysicalNoise::PerQubit(v) => {
            let expected = 7usize.pow(levels);
            if v.len() != expected {
                return Err(Error::NoiseShape { expected, got: v.len() });
            }
            v.clone()
        }
    };
    for level in 1..=levels {
        let blocks: Vec<NoiseAssignment> =
            current.chunks(7).map(|c| NoiseAssignment::new(c.to_vec())).collect::<Result<_>>()?;
        current = par::try_map(mode, &blocks, |b| map.logical_chi(b, mode))?;
        out.push(wrap(current[0], level));
    }
    Ok(out)
}

pub fn concatenate(
    map: &LogicalMap,
    noise: &PhysicalNoise,
    levels: u32,
    twirled_input: bool,
    mode: ExecMode,
) -> Result<LogicalChannel> {
    Ok(*concatenate_levels(map, noise, levels, twirled_input, mode)?.last().expect("levels ≥ 1"))
}
