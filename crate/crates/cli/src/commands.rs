use std::fs;
use std::path::Path;

use qhj_fields::export::table_csv;
use qhj_fields::EquationId;
use qhj_solvers::{simulate, Dynamics, EvolutionRecord, ScenarioConfig};
use qhj_traj::{integrate_trajectories, sample_density, TrajOptions, VelocityField};
use serde::Serialize;
use serde_json::Value;

use crate::artifact::{Envelope, OutDir};
use crate::evaluate::{evaluate_record, parse_equations, vanishes_on_solutions, worst_by_name, NamedReport};
use crate::{Check, CliError, CommandOutcome};

pub const NORM_DRIFT_TOL: f64 = 1e-10;
pub const ENERGY_DRIFT_TOL: f64 = 1e-6;

pub fn load_config(path: &Path) -> Result<ScenarioConfig, CliError> {
    let text = fs::read_to_string(path).map_err(CliError::io(path))?;
    ScenarioConfig::from_json(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn solver_checks(record: &EvolutionRecord) -> Vec<Check> {
    let mut checks = Vec::new();
    match record.dynamics {
        Dynamics::Schrodinger => checks.push(Check::at_most("norm-drift", record.norm_drift(), NORM_DRIFT_TOL)),
        Dynamics::KleinGordon => {
            checks.push(Check::at_most("energy-drift", record.energy_drift().unwrap_or(f64::NAN), ENERGY_DRIFT_TOL))
        }
    }
    checks
}

#[derive(Serialize)]
struct PipelineConfig<'a> {
    pipeline: &'a str,
}

pub fn derive(pipeline: &str, out: &Path) -> Result<CommandOutcome, CliError> {
    let report = qhj_derive::golden_check(pipeline)?;
    let mut checks: Vec<Check> = report
        .steps
        .iter()
        .map(|s| Check::holds(format!("{pipeline}/{}", s.name), s.matched()))
        .collect();
    checks.extend(report.checks.iter().map(|c| Check::holds(format!("{pipeline}/{}", c.name), c.passed)));
    if let Some(c) = &report.c_identification {
        checks.push(Check::holds(format!("{pipeline}/c-identification-resolved"), !c.resolution.is_empty()));
    }
    checks.push(Check::holds(format!("{pipeline}/report"), report.pass));
    let mut dir = OutDir::create(out)?;
    let cfg = PipelineConfig { pipeline };
    dir.json(format!("derive-{pipeline}.json"), &Envelope::new("derive", &cfg, &checks, Payload { report: &report }))?;
    dir.write(format!("derive-{pipeline}.txt"), &report.transcript())?;
    let mut outcome = CommandOutcome::from_checks(&checks, dir.into_paths());
    if let Some(c) = &report.c_identification {
        outcome.summary.push(format!("c identification: {}", c.resolution));
    }
    Ok(outcome)
}

#[derive(Serialize)]
struct Payload<T: Serialize> {
    report: T,
}

fn write_record(dir: &mut OutDir, record: &EvolutionRecord) -> Result<(), CliError> {
    for i in 0..record.len() {
        dir.write(format!("slices/slice-{i:05}.csv"), &record.slice_csv(i))?;
    }
    dir.write("summary.csv", &record.summary_csv())
}

pub fn simulate_cmd(config: &Path, out: &Path) -> Result<CommandOutcome, CliError> {
    let cfg = load_config(config)?;
    let record = simulate(&cfg)?;
    let checks = solver_checks(&record);
    let mut dir = OutDir::create(out)?;
    dir.json("simulate.json", &Envelope::new("simulate", &cfg, &checks, Payload { report: record.view() }))?;
    write_record(&mut dir, &record)?;
    Ok(CommandOutcome::from_checks(&checks, dir.into_paths()))
}

#[derive(Serialize)]
struct SliceOut<'a> {
    index: usize,
    time: f64,
    residuals: Vec<NamedReport<'a>>,
}

#[derive(Serialize)]
struct ResidualPayload<'a> {
    equations: Vec<&'static str>,
    tolerance: f64,
    /// Largest max-norm over slices, per residual; includes ungated ones.
    worst: Vec<(String, f64)>,
    slices: Vec<SliceOut<'a>>,
}

pub fn residuals(config: &Path, eq: &[String], tol: f64, out: &Path) -> Result<CommandOutcome, CliError> {
    let eqs = parse_equations(eq)?;
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(CliError::Usage(format!("--tol {tol} must be a non-negative number")));
    }
    let cfg = load_config(config)?;
    crate::evaluate::check_equations(cfg.dynamics, &eqs)?;
    let record = simulate(&cfg)?;
    let slices = evaluate_record(&cfg, &record, &eqs)?;
    let worst = worst_by_name(&slices);
    let mut checks: Vec<Check> = worst
        .iter()
        .filter(|(n, _)| vanishes_on_solutions(n))
        .map(|(n, v)| Check::at_most(n.clone(), *v, tol))
        .collect();
    if eqs.contains(&EquationId::GeneralHj) {
        let d = slices
            .iter()
            .flat_map(|s| &s.residuals)
            .filter_map(|r| r.report.difference.as_ref())
            .map(|d| d.max_discrepancy)
            .fold(0.0, f64::max);
        checks.push(Check::at_most("general-hj-minus-bohm-hj", d, tol));
    }
    checks.extend(solver_checks(&record));

    let mut dir = OutDir::create(out)?;
    let payload = ResidualPayload {
        equations: eqs.iter().map(|e| e.as_str()).collect(),
        tolerance: tol,
        worst,
        slices: slices
            .iter()
            .map(|s| SliceOut {
                index: s.index,
                time: s.time,
                residuals: s.residuals.iter().map(|r| NamedReport { name: &r.name, report: &r.report }).collect(),
            })
            .collect(),
    };
    dir.json("residuals.json", &Envelope::new("residuals", &cfg, &checks, payload))?;
    for s in &slices {
        let kept = |m: &qhj_fields::Mask| (0..record.grid.len()).map(|p| if m.keeps(p) { 1.0 } else { 0.0 }).collect::<Vec<f64>>();
        for r in &s.residuals {
            let k = kept(&r.field.mask);
            let csv = table_csv(&record.grid, &[("residual", r.field.field.values()), ("kept", &k)]);
            dir.write(format!("fields/{}-{:05}.csv", r.name, s.index), &csv)?;
        }
        if let (Some(qp), Some(qk)) = (&s.qp, &s.qk) {
            let k = kept(&qp.mask);
            let csv = table_csv(&record.grid, &[("qp", qp.field.values()), ("qk", qk.field.values()), ("kept", &k)]);
            dir.write(format!("fields/quantum-{:05}.csv", s.index), &csv)?;
        }
    }
    Ok(CommandOutcome::from_checks(&checks, dir.into_paths()))
}

/// `sample:N` (needs `--seed`), `linspace:N:LO:HI`, `list:X[,Y];...`, or a
/// file with one position per line (`#` starts a comment).
pub fn parse_seeds(spec: &str, rng_seed: Option<u64>, record: &EvolutionRecord) -> Result<Vec<Vec<f64>>, CliError> {
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("bad number `{s}` in --seeds")));
    let count = |s: &str| s.trim().parse::<usize>().map_err(|_| CliError::Usage(format!("bad count `{s}` in --seeds")));
    let dim = record.grid.dim();
    let point = |s: &str| -> Result<Vec<f64>, CliError> {
        let p = s.split([',', ' ', '\t']).filter(|t| !t.is_empty()).map(num).collect::<Result<Vec<f64>, _>>()?;
        if p.len() != dim {
            return Err(CliError::Usage(format!("seed `{s}` has {} coordinates, grid has {dim}", p.len())));
        }
        Ok(p)
    };
    if let Some(n) = spec.strip_prefix("sample:") {
        let seed = rng_seed.ok_or_else(|| CliError::Usage("--seeds sample:N needs --seed <u64>".into()))?;
        let xs = sample_density(&record.wave(0)?, count(n)?, seed)?;
        return Ok(xs.into_iter().map(|x| vec![x]).collect());
    }
    if let Some(rest) = spec.strip_prefix("linspace:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 3 || dim != 1 {
            return Err(CliError::Usage("linspace:N:LO:HI is for one-dimensional grids".into()));
        }
        let (n, lo, hi) = (count(parts[0])?, num(parts[1])?, num(parts[2])?);
        return Ok((0..n).map(|i| vec![if n == 1 { lo } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 }]).collect());
    }
    if let Some(rest) = spec.strip_prefix("list:") {
        return rest.split(';').filter(|s| !s.trim().is_empty()).map(point).collect();
    }
    let text = fs::read_to_string(spec).map_err(CliError::io(spec))?;
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(point)
        .collect()
}

#[derive(Serialize)]
struct TrajConfigOut<'a> {
    scenario: &'a ScenarioConfig,
    seeds: &'a str,
    seed: Option<u64>,
    dt: f64,
    output_stride: usize,
}

pub struct TrajArgs<'a> {
    pub seeds: &'a str,
    pub seed: Option<u64>,
    pub dt: Option<f64>,
    pub stride: usize,
}

pub fn trajectories(config: &Path, args: &TrajArgs, out: &Path) -> Result<CommandOutcome, CliError> {
    let cfg = load_config(config)?;
    if cfg.dynamics != Dynamics::Schrodinger {
        return Err(CliError::Usage("trajectories need dynamics = schrodinger".into()));
    }
    let record = simulate(&cfg)?;
    let seeds = parse_seeds(args.seeds, args.seed, &record)?;
    let dt = args.dt.unwrap_or(cfg.dt * cfg.output_stride as f64);
    let field = VelocityField::from_record(&record, &cfg.evaluation)?;
    let opts = TrajOptions { dt, t_end: None, output_stride: args.stride };
    let set = integrate_trajectories(&field, &seeds, &opts)?;
    let mut checks = solver_checks(&record);
    if record.grid.dim() == 1 && seeds.len() > 1 {
        let order: Vec<usize> = {
            let mut idx: Vec<usize> = (0..seeds.len()).collect();
            idx.sort_by(|&a, &b| seeds[a][0].total_cmp(&seeds[b][0]));
            idx
        };
        let crossings = (0..set.times.len())
            .filter(|&k| order.windows(2).any(|w| set.unwrapped(w[0], k)[0] > set.unwrapped(w[1], k)[0]))
            .count();
        checks.push(Check::at_most("non-crossing", crossings as f64, 0.0));
    }
    let mut dir = OutDir::create(out)?;
    let resolved = TrajConfigOut { scenario: &cfg, seeds: args.seeds, seed: args.seed, dt, output_stride: args.stride };
    dir.json("trajectories.json", &Envelope::new("trajectories", &resolved, &checks, Payload { report: &set }))?;
    dir.write("trajectories.csv", &set.to_csv())?;
    Ok(CommandOutcome::from_checks(&checks, dir.into_paths()))
}

#[derive(Serialize)]
struct ReportEntry {
    file: String,
    command: String,
    pass: bool,
    checks: Value,
}

#[derive(Serialize)]
struct ReportConfig<'a> {
    dir: &'a str,
}

pub fn report(dir: &Path) -> Result<CommandOutcome, CliError> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .map_err(CliError::io(dir))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json") && p.file_name().is_some_and(|n| n != "report.json"))
        .collect();
    files.sort();
    let mut entries = Vec::new();
    for path in &files {
        let text = fs::read_to_string(path).map_err(CliError::io(path))?;
        let Ok(v) = serde_json::from_str::<Value>(&text) else { continue };
        if v.get("tool").and_then(Value::as_str) != Some("qhj") {
            continue;
        }
        entries.push(ReportEntry {
            file: path.file_name().unwrap().to_string_lossy().into_owned(),
            command: v["command"].as_str().unwrap_or("").to_string(),
            pass: v["pass"].as_bool().unwrap_or(false),
            checks: v["checks"].clone(),
        });
    }
    if entries.is_empty() {
        return Err(CliError::Usage(format!("{} holds no qhj artifacts", dir.display())));
    }
    let checks: Vec<Check> = entries.iter().map(|e| Check::holds(format!("{} ({})", e.file, e.command), e.pass)).collect();
    let mut out = OutDir::create(dir)?;
    let cfg = ReportConfig { dir: "." };
    out.json("report.json", &Envelope::new("report", &cfg, &checks, Payload { report: &entries }))?;
    let mut outcome = CommandOutcome::from_checks(&checks, out.into_paths());
    outcome.summary.push(format!("{} artifacts, {} failing", entries.len(), entries.iter().filter(|e| !e.pass).count()));
    Ok(outcome)
}

