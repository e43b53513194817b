use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use steane_rc::experiments::{
    dep_coherent_sweep, ensemble_study, find_threshold, gain_curve, haar_average_gains, haar_threshold, threshold_sphere,
    write_csv, write_json, Manifest, ThresholdResult,
};
use steane_rc::logical::{GainClass, GainRecord};
use steane_rc::{verify, ExecMode, LogicalMap};

use crate::config::{AxisSpec, Command, RunConfig};
use crate::error::{CliError, Result};

/// What a command produced, for the manifest.
#[derive(Default)]
struct Run {
    outputs: Vec<String>,
    notes: Vec<String>,
    failure: Option<String>,
}

impl Run {
    fn csv<T: Serialize>(&mut self, cfg: &RunConfig, name: &str, rows: &[T]) -> Result<()> {
        write_csv(&cfg.out.join(name), rows)?;
        self.outputs.push(name.to_string());
        Ok(())
    }

    fn json<T: Serialize>(&mut self, cfg: &RunConfig, name: &str, value: &T) -> Result<()> {
        write_json(&cfg.out.join(name), value)?;
        self.outputs.push(name.to_string());
        Ok(())
    }
}

#[derive(Serialize)]
struct HaarRow {
    omega: f64,
    level: u32,
    mean_r_raw: f64,
    mean_r_twirled: f64,
    mean_delta: f64,
}

pub fn execute(cfg: &RunConfig, mode: ExecMode) -> Result<()> {
    let start = Instant::now();
    let map = LogicalMap::steane();
    let mut run = Run::default();
    match cfg.command {
        Command::Verify => verify_cmd(cfg, mode, &mut run)?,
        Command::Gain => gain(cfg, &map, mode, &mut run)?,
        Command::Threshold => threshold(cfg, &map, mode, &mut run)?,
        Command::Haar => haar(cfg, &map, mode, &mut run)?,
        Command::Depsweep => depsweep(cfg, &map, mode, &mut run)?,
        Command::Sphere => sphere(cfg, &map, mode, &mut run)?,
        Command::Ensemble => ensemble(cfg, &map, mode, &mut run)?,
        Command::DecoderDump => {
            run.json(cfg, "decoder.json", &map.decoder().entries(map.code()))?;
            println!("decoder table: {} syndromes", map.decoder().recoveries().len());
        }
    }
    let manifest = Manifest {
        command: cfg.command.name().to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: matches!(cfg.command, Command::Ensemble).then_some(cfg.seed),
        workers: cfg.workers,
        config: serde_json::to_value(cfg)?,
        outputs: run.outputs,
        notes: run.notes,
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    write_json(&cfg.out.join("manifest.json"), &manifest)?;
    println!("wrote {}", Path::new(&cfg.out).join("manifest.json").display());
    match run.failure {
        Some(msg) => Err(CliError::Check(msg)),
        None => Ok(()),
    }
}

fn verify_cmd(cfg: &RunConfig, mode: ExecMode, run: &mut Run) -> Result<()> {
    let report = verify::run_all(mode);
    println!("{report}");
    run.json(cfg, "verify.json", &report)?;
    if !report.passed() {
        run.failure = Some(report.failing().join(", "));
    }
    Ok(())
}

fn gain(cfg: &RunConfig, map: &LogicalMap, mode: ExecMode, run: &mut Run) -> Result<()> {
    let (theta, phi) = cfg.axis.angles().expect("fixed axis");
    let rows: Vec<GainRecord> = gain_curve(map, theta, phi, cfg.level_hi, &cfg.omegas, mode)?
        .into_iter()
        .filter(|r| r.level >= cfg.level_lo)
        .collect();
    for r in &rows {
        println!(
            "ω = {:.6}  ℓ = {}  r_raw = {:.6e}  r_tw = {:.6e}  δ = {}",
            r.omega.unwrap_or_default(),
            r.level,
            r.r_raw,
            r.r_twirled,
            fmt_opt(r.delta)
        );
    }
    run.csv(cfg, "gain.csv", &rows)
}

fn threshold(cfg: &RunConfig, map: &LogicalMap, mode: ExecMode, run: &mut Run) -> Result<()> {
    let first = (cfg.level_lo, cfg.level_hi);
    let mut pairs = vec![first];
    pairs.extend((1..cfg.pairs_up_to).map(|l| (l, l + 1)).filter(|p| *p != first));
    let mut rows: Vec<ThresholdResult> = Vec::new();
    for (k, &pair) in pairs.iter().enumerate() {
        let r = match cfg.axis {
            AxisSpec::Haar => haar_threshold(map, &cfg.quadrature, pair, &cfg.search, mode)?,
            axis => {
                let (theta, phi) = axis.angles().expect("fixed axis");
                find_threshold(map, &axis.label(), theta, phi, pair, &cfg.search, mode)?
            }
        };
        println!(
            "{}axis {}  levels ({}, {})  ω* = {}",
            if k == 0 { "" } else { "  " },
            r.axis,
            pair.0,
            pair.1,
            fmt_opt(r.omega_star)
        );
        if r.omega_star.is_none() {
            run.notes.push(format!("no crossing for levels ({}, {}) in [{}, {}]", pair.0, pair.1, cfg.search.lo, cfg.search.hi));
        }
        rows.push(r);
    }
    run.csv(cfg, "threshold.csv", &rows)
}

fn haar(cfg: &RunConfig, map: &LogicalMap, mode: ExecMode, run: &mut Run) -> Result<()> {
    let mut rows = Vec::new();
    for &omega in &cfg.omegas {
        for p in haar_average_gains(map, cfg.level_hi, omega, &cfg.quadrature, mode)? {
            if p.level < cfg.level_lo {
                continue;
            }
            println!("ω = {omega:.6}  ℓ = {}  mean δ = {:.6}", p.level, p.mean_delta);
            rows.push(HaarRow {
                omega,
                level: p.level,
                mean_r_raw: p.mean_r_raw,
                mean_r_twirled: p.mean_r_twirled,
                mean_delta: p.mean_delta,
            });
        }
    }
    run.csv(cfg, "haar.csv", &rows)
}

fn depsweep(cfg: &RunConfig, map: &LogicalMap, mode: ExecMode, run: &mut Run) -> Result<()> {
    let (rows, skipped) = dep_coherent_sweep(map, &cfg.ps, cfg.r_target, cfg.level_hi, &cfg.quadrature, mode)?;
    let rows: Vec<GainRecord> = rows.into_iter().filter(|r| r.level >= cfg.level_lo).collect();
    for r in &rows {
        println!(
            "p = {:.3e}  ω = {:.6}  ℓ = {}  mean δ = {}",
            r.p.unwrap_or_default(),
            r.omega.unwrap_or_default(),
            r.level,
            fmt_opt(r.delta)
        );
    }
    for s in &skipped {
        eprintln!("skipped {s}");
    }
    run.notes.extend(skipped.into_iter().map(|s| format!("skipped {s}")));
    run.csv(cfg, "depsweep.csv", &rows)
}

fn sphere(cfg: &RunConfig, map: &LogicalMap, mode: ExecMode, run: &mut Run) -> Result<()> {
    let entries = threshold_sphere(map, cfg.grid_theta, cfg.grid_phi, (cfg.level_lo, cfg.level_hi), &cfg.search, mode)?;
    let found: Vec<f64> = entries.iter().filter_map(|e| e.omega_star).collect();
    let (min, max) = found.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &w| (a.min(w), b.max(w)));
    println!("{} of {} axes have a crossing; ω* in [{min:.4}, {max:.4}]", found.len(), entries.len());
    run.csv(cfg, "sphere.csv", &entries)
}

fn ensemble(cfg: &RunConfig, map: &LogicalMap, mode: ExecMode, run: &mut Run) -> Result<()> {
    let spec = cfg.ensemble_spec();
    let rows = ensemble_study(map, &spec, mode)?;
    for level in 1..=cfg.level_hi {
        let at: Vec<&GainRecord> = rows.iter().filter(|r| r.level == level).collect();
        let count = |c: GainClass| at.iter().filter(|r| r.class == Some(c)).count();
        println!(
            "{}  ℓ = {level}: gain {}  loss {}  grey {}  undefined {}",
            spec.model.name(),
            count(GainClass::Gain),
            count(GainClass::Loss),
            count(GainClass::Grey),
            count(GainClass::Undefined)
        );
    }
    run.csv(cfg, "ensemble.csv", &rows)
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "undefined".into(), |v| format!("{v:.6}"))
}
