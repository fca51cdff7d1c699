use std::path::Path;
use std::time::Instant;

use isingnet::analysis::{
    analytic_decoherence_time, coherence_element, fit_decoherence, spin_spin_correlation, DecoherenceFit,
    FitOptions, TimeSeries,
};
use isingnet::dynamics::{propagate_master, run_trajectories, EvolutionStats, TimeGrid, TrajectoryPlan};
use isingnet::graph::GraphStats;
use isingnet::meanfield::{bin_by_up_count, local_magnetization, ReducedDistribution};
use isingnet::spin::gibbs_distribution;
use isingnet::{BathSpec, CutoffKind, DensityMatrix, LindbladModel, MeanFieldModel, SpinConfig};
use log::{info, warn};
use serde::Serialize;

use crate::config::{load_graph, InitialState, RunConfig, DEFAULT_T_END};
use crate::error::CliError;
use crate::output::{ensure_dir, read_columns, write_json, Csv};

#[derive(Serialize)]
struct FitReport {
    #[serde(flatten)]
    fit: DecoherenceFit,
    formatted: String,
}

impl From<DecoherenceFit> for FitReport {
    fn from(fit: DecoherenceFit) -> Self {
        Self { formatted: fit.parenthetical(), fit }
    }
}

#[derive(Serialize)]
struct Invariants {
    final_trace: f64,
    max_trace_error: f64,
    raw_hermiticity_defect: f64,
    min_population: f64,
    final_gibbs_distance: f64,
}

#[derive(Serialize)]
struct SimulateSummary {
    command: &'static str,
    config: RunConfig,
    graph: GraphStats,
    invariants: Invariants,
    analytic_decoherence_time: Option<f64>,
    fit: Option<FitReport>,
    fit_error: Option<String>,
    integration: EvolutionStats,
    files: Vec<String>,
    runtime_seconds: f64,
}

fn population_header(n: usize) -> Vec<String> {
    std::iter::once("time".to_string()).chain(SpinConfig::all(n).map(|s| s.to_string())).collect()
}

fn series_csv(columns: &[&TimeSeries]) -> Csv {
    let header: Vec<&str> = std::iter::once("time").chain(columns.iter().map(|c| c.label.as_str())).collect();
    let mut csv = Csv::new(&header);
    let times = columns.first().map_or(&[][..], |c| &c.times[..]);
    for (k, &t) in times.iter().enumerate() {
        csv.row(std::iter::once(t).chain(columns.iter().map(|c| c.values[k])));
    }
    csv
}

/// Explicit `t_end`, else `5 τ` for GHZ starts (when finite), else 50.
fn horizon(cfg: &RunConfig, model: &LindbladModel) -> f64 {
    if let Some(t) = cfg.t_end {
        return t;
    }
    if cfg.initial == InitialState::Ghz {
        if let Ok(tau) = analytic_decoherence_time(model) {
            if tau.is_finite() {
                return 5.0 * tau;
            }
        }
    }
    DEFAULT_T_END
}

pub fn simulate(cfg: &RunConfig) -> Result<(), CliError> {
    let start = Instant::now();
    let g = cfg.load_graph()?;
    let n = g.n_nodes();
    let params = cfg.params()?;
    let bath = cfg.bath()?;
    let model = LindbladModel::build(&g, &params, &bath)?;
    let rho0 = DensityMatrix::from_pure(&cfg.initial.state_vector(n)?)?;
    let t_end = horizon(cfg, &model);
    let grid = TimeGrid::uniform(0.0, t_end, cfg.samples)?;
    info!("simulating {} ({n} spins) to t = {t_end}", cfg.graph);
    let evo = propagate_master(&model, &rho0, &grid, cfg.tol)?;
    let pops = evo.population_series();
    let out = &cfg.output;
    ensure_dir(out)?;
    let mut files = Vec::new();

    let mut csv = Csv::new(&population_header(n));
    for (t, p) in evo.times().iter().zip(&pops) {
        csv.row(std::iter::once(*t).chain(p.iter().copied()));
    }
    csv.write(&out.join("populations.csv"))?;
    files.push("populations.csv".to_string());

    let pairs: Vec<[usize; 2]> =
        cfg.pairs.clone().unwrap_or_else(|| g.edges().iter().map(|&(i, j)| [i, j]).collect());
    let corr = pairs
        .iter()
        .map(|&[i, j]| spin_spin_correlation(evo.times(), &pops, n, i, j))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Config(format!("pairs: {e}")))?;
    series_csv(&corr.iter().collect::<Vec<_>>()).write(&out.join("correlations.csv"))?;
    files.push("correlations.csv".to_string());

    let mut analytic = None;
    let (mut fit, mut fit_error) = (None, None);
    if n >= 2 {
        let coh = coherence_element(&evo);
        let mut csv = Csv::new(&["time", "re", "im", "abs"]);
        for (t, c) in coh.times.iter().zip(&coh.values) {
            csv.row([*t, c.re, c.im, c.norm()]);
        }
        csv.write(&out.join("coherence.csv"))?;
        files.push("coherence.csv".to_string());
        analytic = Some(analytic_decoherence_time(&model)?);
        if cfg.initial == InitialState::Ghz {
            match fit_decoherence(&coh.modulus(), &cfg.fit_options()) {
                Ok(f) => fit = Some(FitReport::from(f)),
                Err(e) => {
                    warn!("decoherence fit failed: {e}");
                    fit_error = Some(e.to_string());
                }
            }
        }
    }

    if g.degrees().iter().all(|&k| k > 0) {
        let lm = local_magnetization(evo.times(), &pops, &g)?;
        let mut cols = vec![&lm.global];
        cols.extend(lm.nodes.iter());
        series_csv(&cols).write(&out.join("local_magnetization.csv"))?;
        files.push("local_magnetization.csv".to_string());
    }

    let gibbs = gibbs_distribution(&g, &params, bath.beta)?;
    let last = pops.last().expect("grid has at least two samples");
    let invariants = Invariants {
        final_trace: last.iter().sum(),
        max_trace_error: pops.iter().map(|p| (p.iter().sum::<f64>() - 1.0).abs()).fold(0.0, f64::max),
        raw_hermiticity_defect: evo.stats().raw_hermiticity_defect,
        min_population: pops.iter().flatten().copied().fold(f64::INFINITY, f64::min),
        final_gibbs_distance: last.iter().zip(&gibbs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max),
    };
    let mut config = cfg.clone();
    config.t_end = Some(t_end);
    let summary = SimulateSummary {
        command: "simulate",
        config,
        graph: g.stats(),
        invariants,
        analytic_decoherence_time: analytic,
        fit,
        fit_error,
        integration: *evo.stats(),
        files,
        runtime_seconds: start.elapsed().as_secs_f64(),
    };
    write_json(&out.join("summary.json"), &summary)
}

#[derive(Serialize)]
struct TrajectorySummary {
    command: &'static str,
    config: RunConfig,
    graph: GraphStats,
    n_traj: usize,
    total_jumps: u64,
    mean_jumps_per_trajectory: f64,
    workers: usize,
    runtime_seconds: f64,
}

pub fn trajectories(cfg: &RunConfig) -> Result<(), CliError> {
    let start = Instant::now();
    let g = cfg.load_graph()?;
    let n = g.n_nodes();
    let model = LindbladModel::build(&g, &cfg.params()?, &cfg.bath()?)?;
    let psi0 = cfg.initial.state_vector(n)?;
    let t_end = horizon(cfg, &model);
    let grid = TimeGrid::uniform(0.0, t_end, cfg.samples)?;
    let plan = TrajectoryPlan::new(cfg.n_traj, cfg.seed)?;
    info!("running {} trajectories on {} workers", cfg.n_traj, rayon::current_num_threads());
    let avg = run_trajectories(&model, &psi0, &grid, &plan)?;
    ensure_dir(&cfg.output)?;
    for (file, table) in [("populations.csv", &avg.mean), ("std_err.csv", &avg.std_err)] {
        let mut csv = Csv::new(&population_header(n));
        for (t, row) in avg.times.iter().zip(table) {
            csv.row(std::iter::once(*t).chain(row.iter().copied()));
        }
        csv.write(&cfg.output.join(file))?;
    }
    let mut config = cfg.clone();
    config.t_end = Some(t_end);
    let summary = TrajectorySummary {
        command: "trajectories",
        config,
        graph: g.stats(),
        n_traj: avg.n_traj,
        total_jumps: avg.total_jumps,
        mean_jumps_per_trajectory: avg.total_jumps as f64 / avg.n_traj as f64,
        workers: rayon::current_num_threads(),
        runtime_seconds: start.elapsed().as_secs_f64(),
    };
    write_json(&cfg.output.join("summary.json"), &summary)
}

#[derive(Serialize)]
struct MeanFieldSummary {
    command: &'static str,
    config: RunConfig,
    n: usize,
    z: f64,
    energies: Vec<f64>,
    stationary: Vec<f64>,
    stationary_up_fraction: f64,
    max_probability_drift: f64,
    runtime_seconds: f64,
}

pub fn meanfield(cfg: &RunConfig) -> Result<(), CliError> {
    let start = Instant::now();
    let (n, z) = match cfg.n_nodes {
        Some(n) => {
            let z = cfg.z.ok_or_else(|| CliError::Config("n_nodes needs an explicit z".into()))?;
            (n, z)
        }
        None => {
            let g = cfg.load_graph()?;
            (g.n_nodes(), cfg.z.unwrap_or_else(|| g.mean_degree()))
        }
    };
    let model = MeanFieldModel::new(n, z, cfg.params()?, cfg.bath()?)?;
    let p0 = match &cfg.initial {
        InitialState::AllDown => ReducedDistribution::point(n, 0)?,
        InitialState::AllUp => ReducedDistribution::point(n, n)?,
        InitialState::Ghz => {
            let mut p = vec![0.0; n + 1];
            p[0] += 0.5;
            p[n] += 0.5;
            ReducedDistribution::new(p)?
        }
        other => {
            let psi = other.state_vector(n)?;
            let pops: Vec<f64> = psi.amplitudes().iter().map(|c| c.norm_sqr()).collect();
            ReducedDistribution::new(bin_by_up_count(&pops, n)?)?
        }
    };
    let t_end = cfg.t_end.unwrap_or(DEFAULT_T_END);
    let grid = TimeGrid::uniform(0.0, t_end, cfg.samples)?;
    let evo = model.propagate(&p0, &grid, cfg.tol)?;
    let obs = model.observables(&evo)?;
    ensure_dir(&cfg.output)?;

    let header: Vec<String> = std::iter::once("time".to_string())
        .chain((0..=n).map(|k| format!("n{k}")))
        .chain(std::iter::once("total".to_string()))
        .collect();
    let mut csv = Csv::new(&header);
    for (t, p) in evo.times.iter().zip(&evo.distributions) {
        csv.row(std::iter::once(*t).chain(p.iter().copied()).chain(std::iter::once(p.iter().sum())));
    }
    csv.write(&cfg.output.join("reduced_populations.csv"))?;

    let mut csv = Csv::new(&["time", "up", "down", "up_up", "down_down", "up_down", "magnetization"]);
    for k in 0..obs.times.len() {
        csv.row([
            obs.times[k],
            obs.up_fraction[k],
            obs.down_fraction[k],
            obs.up_up_fraction[k],
            obs.down_down_fraction[k],
            obs.up_down_fraction[k],
            obs.magnetization[k],
        ]);
    }
    csv.write(&cfg.output.join("fractions.csv"))?;

    let stationary = model.stationary();
    let mut config = cfg.clone();
    config.t_end = Some(t_end);
    config.n_nodes = Some(n);
    config.z = Some(z);
    let summary = MeanFieldSummary {
        command: "meanfield",
        config,
        n,
        z,
        energies: model.energies(),
        stationary_up_fraction: stationary.mean_up() / n as f64,
        stationary: stationary.probabilities().to_vec(),
        max_probability_drift: obs.total_probability.iter().map(|s| (s - 1.0).abs()).fold(0.0, f64::max),
        runtime_seconds: start.elapsed().as_secs_f64(),
    };
    write_json(&cfg.output.join("summary.json"), &summary)
}

pub fn fit(path: &Path, opts: &FitOptions, output: Option<&Path>) -> Result<(), CliError> {
    let (times, values) = read_columns(path, "abs")?;
    let series = TimeSeries::new("abs", times, values).map_err(|e| CliError::Config(e.to_string()))?;
    let report = FitReport::from(fit_decoherence(&series, opts)?);
    emit_json(&report, output)
}

pub fn graph_stats(source: &str, output: Option<&Path>) -> Result<(), CliError> {
    emit_json(&load_graph(source)?.stats(), output)
}

pub fn spectral(
    eta: f64,
    omega_c: f64,
    beta: f64,
    omega_max: f64,
    points: usize,
    output: Option<&Path>,
) -> Result<(), CliError> {
    if points < 2 || !(omega_max > 0.0) {
        return Err(CliError::Config("need points ≥ 2 and omega_max > 0".into()));
    }
    let exp = BathSpec::new(eta, omega_c, CutoffKind::Exponential, beta)?;
    let dl = BathSpec::new(eta, omega_c, CutoffKind::DrudeLorentz, beta)?;
    let mut csv = Csv::new(&["omega", "exponential", "drude_lorentz", "rate_exponential", "rate_drude_lorentz"]);
    for k in 0..points {
        // Symmetric about 0 so the odd extension is exact in the table.
        let w = omega_max * (2.0 * k as f64 - (points - 1) as f64) / (points - 1) as f64;
        csv.row([w, exp.spectral_density(w), dl.spectral_density(w), exp.transition_rate(w), dl.transition_rate(w)]);
    }
    match output {
        Some(p) => csv.write(p),
        None => {
            print!("{}", csv.as_str());
            Ok(())
        }
    }
}

fn emit_json(value: &impl Serialize, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(p) => write_json(p, value),
        None => {
            println!("{}", serde_json::to_string_pretty(value).expect("report types serialize"));
            Ok(())
        }
    }
}
