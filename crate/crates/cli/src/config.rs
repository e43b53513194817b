//! Flags, config file and their merge into a validated [`RunConfig`].
//! Flags override the file, the file overrides defaults.

use std::f64::consts::PI;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use steane_rc::channels::DeltaSpread;
use steane_rc::experiments::{EnsembleModel, EnsembleSpec, HaarQuadrature, ThresholdSearch};

use crate::error::{config_err, CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "steane-rc", version, about = "Exact logical channels of the concatenated Steane code, with and without Pauli twirling")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Run the oracle suite; exit 1 if any check fails.
    Verify,
    /// Gains δ_ℓ(ω) for i.i.d. rotations about one axis.
    Gain,
    /// Crossing angle of δ_lo and δ_hi for one axis or the Haar average.
    Threshold,
    /// Axis-averaged gains.
    Haar,
    /// Axis-averaged gains of depolarizing ∘ rotation at fixed total infidelity.
    Depsweep,
    /// Per-axis thresholds on a θ × φ grid.
    Sphere,
    /// Random-noise ensembles with gain/loss classification.
    Ensemble,
    /// Minimum-weight decoder table as JSON.
    DecoderDump,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Gain => "gain",
            Command::Threshold => "threshold",
            Command::Haar => "haar",
            Command::Depsweep => "depsweep",
            Command::Sphere => "sphere",
            Command::Ensemble => "ensemble",
            Command::DecoderDump => "decoder-dump",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelArg {
    #[value(alias = "random-cptp")]
    Cptp,
    #[value(alias = "random-rotations")]
    Rotations,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpreadArg {
    Variance,
    StdDev,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Opts {
    /// TOML file with any of the options below (snake_case keys).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// z | x | y | THETA,PHI (| haar for threshold).
    #[arg(long, global = true)]
    pub axis: Option<String>,
    /// Single rotation angle.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub omega: Option<f64>,
    /// START:STOP:COUNT, inclusive and evenly spaced.
    #[arg(long, global = true)]
    pub omega_range: Option<String>,
    /// N (levels 1..N) or LO..HI.
    #[arg(long, global = true)]
    pub levels: Option<String>,
    /// Comma-separated depolarizing strengths, or START:STOP:COUNT.
    #[arg(long, global = true)]
    pub p_range: Option<String>,
    /// Fixed total process infidelity for depsweep.
    #[arg(long, global = true)]
    pub r_target: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub model: Option<ModelArg>,
    /// Ensemble size.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; 1 runs sequentially.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Read input angles in degrees.
    #[arg(long, global = true)]
    pub degrees: bool,
    /// Ensemble sizes of the original study (16000 rotations, 18000 CPTP maps).
    #[arg(long, global = true)]
    pub paper_scale: bool,
    /// Gauss-Legendre nodes in cos θ for axis averages.
    #[arg(long, global = true)]
    pub n_theta: Option<usize>,
    /// Trapezoid nodes in φ for axis averages.
    #[arg(long, global = true)]
    pub n_phi: Option<usize>,
    /// θ rows of the sphere grid.
    #[arg(long, global = true)]
    pub grid_theta: Option<usize>,
    /// φ columns of the sphere grid.
    #[arg(long, global = true)]
    pub grid_phi: Option<usize>,
    /// Threshold search START:STOP:COARSE_POINTS.
    #[arg(long, global = true)]
    pub search: Option<String>,
    /// Bisection tolerance for thresholds.
    #[arg(long, global = true)]
    pub search_tol: Option<f64>,
    /// Also report crossings of consecutive levels up to this level.
    #[arg(long, global = true)]
    pub pairs_up_to: Option<u32>,
    /// Reading of the second parameter of N(μ_δ, μ_δ).
    #[arg(long, global = true, value_enum)]
    pub spread: Option<SpreadArg>,
}

/// Config-file keys; same meaning as the flags.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub axis: Option<String>,
    pub omega: Option<f64>,
    pub omega_range: Option<String>,
    pub levels: Option<String>,
    pub p_range: Option<String>,
    pub r_target: Option<f64>,
    pub model: Option<ModelArg>,
    pub n: Option<usize>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
    pub degrees: Option<bool>,
    pub paper_scale: Option<bool>,
    pub n_theta: Option<usize>,
    pub n_phi: Option<usize>,
    pub grid_theta: Option<usize>,
    pub grid_phi: Option<usize>,
    pub search: Option<String>,
    pub search_tol: Option<f64>,
    pub pairs_up_to: Option<u32>,
    pub spread: Option<SpreadArg>,
}

impl FileConfig {
    pub fn load(path: &PathBuf) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|source| CliError::ConfigFile { path: path.display().to_string(), source })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AxisSpec {
    Fixed { label: &'static str, theta: f64, phi: f64 },
    Custom { theta: f64, phi: f64 },
    Haar,
}

impl AxisSpec {
    pub fn label(&self) -> String {
        match self {
            AxisSpec::Fixed { label, .. } => label.to_string(),
            AxisSpec::Custom { theta, phi } => format!("{theta},{phi}"),
            AxisSpec::Haar => "haar".into(),
        }
    }

    pub fn angles(&self) -> Option<(f64, f64)> {
        match *self {
            AxisSpec::Fixed { theta, phi, .. } | AxisSpec::Custom { theta, phi } => Some((theta, phi)),
            AxisSpec::Haar => None,
        }
    }
}

/// Fully resolved options, recorded in the manifest.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub axis: AxisSpec,
    pub omegas: Vec<f64>,
    pub level_lo: u32,
    pub level_hi: u32,
    pub ps: Vec<f64>,
    pub r_target: f64,
    pub model: ModelArg,
    pub n: usize,
    pub seed: u64,
    pub workers: Option<usize>,
    pub out: PathBuf,
    pub quadrature: HaarQuadrature,
    pub grid_theta: usize,
    pub grid_phi: usize,
    pub search: ThresholdSearch,
    pub pairs_up_to: u32,
    pub spread: SpreadArg,
}

impl RunConfig {
    pub fn ensemble_spec(&self) -> EnsembleSpec {
        let model = match self.model {
            ModelArg::Cptp => EnsembleModel::RandomCptp,
            ModelArg::Rotations => EnsembleModel::RandomRotations,
        };
        let spread = match self.spread {
            SpreadArg::Variance => DeltaSpread::Variance,
            SpreadArg::StdDev => DeltaSpread::StdDev,
        };
        EnsembleSpec { spread, ..EnsembleSpec::new(model, self.n, self.level_hi, self.seed) }
    }
}

fn parse_f64(field: &str, s: &str) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|_| config_err(format!("{field}: `{s}` is not a number")))
}

fn parse_linspace(field: &str, s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(config_err(format!("{field}: expected START:STOP:COUNT, got `{s}`")));
    }
    let (a, b) = (parse_f64(field, parts[0])?, parse_f64(field, parts[1])?);
    let n: usize = parts[2].trim().parse().map_err(|_| config_err(format!("{field}: bad count `{}`", parts[2])))?;
    match n {
        0 => Err(config_err(format!("{field}: count must be ≥ 1"))),
        1 => Ok(vec![a]),
        _ => Ok((0..n).map(|k| if k == n - 1 { b } else { a + (b - a) * k as f64 / (n - 1) as f64 }).collect()),
    }
}

fn parse_list(field: &str, s: &str) -> Result<Vec<f64>> {
    if s.contains(':') {
        return parse_linspace(field, s);
    }
    s.split(',').map(|x| parse_f64(field, x)).collect()
}

fn parse_levels(s: &str) -> Result<(u32, u32)> {
    let bad = || config_err(format!("levels: expected N or LO..HI with 1 ≤ LO ≤ HI, got `{s}`"));
    let num = |x: &str| x.trim().parse::<u32>().map_err(|_| bad());
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
        None => (1, num(s)?),
    };
    if lo == 0 || lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn parse_axis(s: &str, scale: f64) -> Result<AxisSpec> {
    let fixed = |label, theta, phi| Ok(AxisSpec::Fixed { label, theta, phi });
    match s.trim().to_ascii_lowercase().as_str() {
        "z" => fixed("z", 0.0, 0.0),
        "x" => fixed("x", PI / 2.0, 0.0),
        "y" => fixed("y", PI / 2.0, PI / 2.0),
        "haar" => Ok(AxisSpec::Haar),
        other => {
            let (t, p) = other
                .split_once(',')
                .ok_or_else(|| config_err(format!("axis: expected z, x, y, haar or THETA,PHI, got `{s}`")))?;
            let (theta, phi) = (parse_f64("axis", t)? * scale, parse_f64("axis", p)? * scale);
            steane_rc::channels::Axis::new(theta, phi).map_err(|e| config_err(format!("axis: {e}")))?;
            Ok(AxisSpec::Custom { theta, phi })
        }
    }
}

pub fn resolve(command: Command, opts: &Opts) -> Result<RunConfig> {
    let file = match &opts.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let degrees = opts.degrees || file.degrees.unwrap_or(false);
    let paper_scale = opts.paper_scale || file.paper_scale.unwrap_or(false);
    let scale = if degrees { PI / 180.0 } else { 1.0 };

    macro_rules! pick {
        ($f:ident) => {
            opts.$f.clone().or(file.$f.clone())
        };
    }

    let axis = parse_axis(&pick!(axis).unwrap_or_else(|| "z".into()), scale)?;
    if axis == AxisSpec::Haar && command != Command::Threshold {
        return Err(config_err("axis: `haar` is only meaningful for threshold"));
    }

    let omegas = match (pick!(omega), pick!(omega_range)) {
        (Some(_), Some(_)) => return Err(config_err("omega and omega_range are mutually exclusive")),
        (Some(w), None) => vec![w * scale],
        (None, Some(r)) => parse_linspace("omega_range", &r)?.into_iter().map(|w| w * scale).collect(),
        (None, None) => vec![PI / 20.0],
    };
    if let Some(w) = omegas.iter().find(|w| !(**w > 0.0 && **w <= PI)) {
        return Err(config_err(format!("omega: {w} rad is outside (0, π]")));
    }

    let default_levels = match command {
        Command::Gain => (1, 5),
        Command::Haar | Command::Threshold | Command::Sphere | Command::Ensemble => (1, 2),
        _ => (1, 1),
    };
    let (mut level_lo, level_hi) = match pick!(levels) {
        Some(s) => parse_levels(&s)?,
        None => default_levels,
    };
    if matches!(command, Command::Threshold | Command::Sphere) {
        if level_lo == level_hi {
            level_lo = level_hi.saturating_sub(1);
        }
        if level_lo == 0 {
            return Err(config_err("levels: threshold needs two distinct levels, e.g. 1..2"));
        }
    }
    if level_hi > 12 {
        return Err(config_err(format!("levels: {level_hi} is beyond double-precision range")));
    }

    let ps = match pick!(p_range) {
        Some(s) => parse_list("p_range", &s)?,
        None => vec![1e-4, 2e-4, 5e-4, 1e-3],
    };
    if ps.is_empty() || ps.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(config_err("p_range: strengths must lie in [0, 1]"));
    }
    let r_target = pick!(r_target).unwrap_or(0.003);
    if !(r_target > 0.0 && r_target < 1.0) {
        return Err(config_err(format!("r_target: {r_target} must lie in (0, 1)")));
    }

    let model = pick!(model).unwrap_or(ModelArg::Cptp);
    let n = match pick!(n) {
        Some(n) => n,
        None if paper_scale => match model {
            ModelArg::Rotations => EnsembleSpec::PAPER_SAMPLES_ROTATIONS,
            ModelArg::Cptp => EnsembleSpec::PAPER_SAMPLES_CPTP,
        },
        None => EnsembleSpec::DEFAULT_SAMPLES,
    };
    if n == 0 {
        return Err(config_err("n: ensemble size must be ≥ 1"));
    }
    let workers = pick!(workers);
    if workers == Some(0) {
        return Err(config_err("workers: must be ≥ 1"));
    }

    let mut quadrature = HaarQuadrature::default();
    quadrature.n_theta = pick!(n_theta).unwrap_or(quadrature.n_theta);
    quadrature.n_phi = pick!(n_phi).unwrap_or(quadrature.n_phi);
    quadrature.validate().map_err(|e| config_err(format!("quadrature: {e}")))?;

    let grid_theta = pick!(grid_theta).unwrap_or(8);
    let grid_phi = pick!(grid_phi).unwrap_or(16);
    if grid_theta < 2 || grid_phi < 1 {
        return Err(config_err("grid: need grid_theta ≥ 2 and grid_phi ≥ 1"));
    }

    let mut search = ThresholdSearch::default();
    if let Some(s) = pick!(search) {
        let parts = parse_linspace("search", &s)?;
        search.lo = parts[0];
        search.hi = *parts.last().unwrap();
        search.coarse_points = parts.len();
        search.lo *= scale;
        search.hi *= scale;
    }
    if let Some(tol) = pick!(search_tol) {
        search.tol = tol * scale;
    }
    search.validate().map_err(|e| config_err(format!("search: {e}")))?;

    let pairs_up_to = pick!(pairs_up_to).unwrap_or(match axis {
        AxisSpec::Haar => level_hi,
        _ => level_hi.max(5),
    });

    Ok(RunConfig {
        command,
        axis,
        omegas,
        level_lo,
        level_hi,
        ps,
        r_target,
        model,
        n,
        seed: pick!(seed).unwrap_or(2024),
        workers,
        out: pick!(out).unwrap_or_else(|| PathBuf::from("out")),
        quadrature,
        grid_theta,
        grid_phi,
        search,
        pairs_up_to,
        spread: pick!(spread).unwrap_or(SpreadArg::Variance),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_syntax() {
        assert_eq!(parse_levels("1..5").unwrap(), (1, 5));
        assert_eq!(parse_levels("2..=3").unwrap(), (2, 3));
        assert_eq!(parse_levels("4").unwrap(), (1, 4));
        assert!(parse_levels("0..2").is_err());
        assert!(parse_levels("3..2").is_err());
        assert!(parse_levels("a").is_err());
    }

    #[test]
    fn ranges_and_axes() {
        assert_eq!(parse_linspace("x", "0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_list("p", "1e-4,2e-4").unwrap(), vec![1e-4, 2e-4]);
        assert!(parse_linspace("x", "0:1").is_err());
        assert_eq!(parse_axis("X", 1.0).unwrap(), AxisSpec::Fixed { label: "x", theta: PI / 2.0, phi: 0.0 });
        let AxisSpec::Custom { theta, phi } = parse_axis("90,45", PI / 180.0).unwrap() else { panic!() };
        assert!((theta - PI / 2.0).abs() < 1e-15 && (phi - PI / 4.0).abs() < 1e-15);
        assert!(parse_axis("4,0", 1.0).is_err());
        assert!(parse_axis("w", 1.0).is_err());
    }

    #[test]
    fn precedence_and_validation() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        fs::write(&path, "seed = 5\nn = 10\nomega = 0.2\n").unwrap();
        let opts = Opts { config: Some(path.clone()), seed: Some(9), ..Default::default() };
        let cfg = resolve(Command::Ensemble, &opts).unwrap();
        assert_eq!((cfg.seed, cfg.n), (9, 10));
        assert_eq!(cfg.omegas, vec![0.2]);

        fs::write(&path, "seed = 5\nbogus = 1\n").unwrap();
        let err = resolve(Command::Ensemble, &opts).unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");

        let opts = Opts { omega: Some(4.0), ..Default::default() };
        assert!(matches!(resolve(Command::Gain, &opts), Err(CliError::Config(_))));
        let opts = Opts { omega: Some(30.0), degrees: true, ..Default::default() };
        assert!((resolve(Command::Gain, &opts).unwrap().omegas[0] - PI / 6.0).abs() < 1e-15);
        let opts = Opts { paper_scale: true, model: Some(ModelArg::Rotations), ..Default::default() };
        assert_eq!(resolve(Command::Ensemble, &opts).unwrap().n, 16000);
        let opts = Opts { axis: Some("haar".into()), ..Default::default() };
        assert!(resolve(Command::Gain, &opts).is_err());
        assert_eq!(resolve(Command::Threshold, &Opts { levels: Some("2".into()), ..Default::default() }).unwrap().level_lo, 1);
    }
}
