//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each
//! (with indented detail lines) and exits non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use isingnet::analysis::{
    analytic_decoherence_time, coherence_element, fit_decoherence, oscillation_frequency, spearman, FitOptions,
};
use isingnet::dynamics::{
    basis_state, ghz_state, propagate_master, propagate_master_dense, run_trajectories, TimeGrid, TrajectoryPlan,
};
use isingnet::graph::{self, Graph};
use isingnet::meanfield::{bin_by_up_count, degree_sums, ReducedDistribution};
use isingnet::spin::{edge_counts, gibbs_distribution};
use isingnet::{reference_profile, BathSpec, CutoffKind, DensityMatrix, LindbladModel, MeanFieldModel, SpinConfig};
use isingnet_oracles::{
    apply_superoperator, binomial, dense_lindbladian, expm_apply, node_jump_operators, relaxation_gap,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    summary: String,
    details: Vec<String>,
}

impl Outcome {
    fn new(pass: bool, summary: impl Into<String>, details: Vec<String>) -> Self {
        Self { pass, summary: summary.into(), details }
    }
}

fn model(g: &Graph) -> LindbladModel {
    let (p, b) = reference_profile();
    LindbladModel::build(g, &p, &b).unwrap()
}

fn linf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn pure(psi: &isingnet::StateVector) -> DensityMatrix {
    DensityMatrix::from_pure(psi).unwrap()
}

fn gibbs_stationarity() -> Outcome {
    let (p, b) = reference_profile();
    let grid = TimeGrid::uniform(0.0, 200.0, 2).unwrap();
    let mut pass = true;
    let mut worst = 0.0f64;
    let mut details = Vec::new();
    for (name, g) in graph::library() {
        let n = g.n_nodes();
        let m = model(&g);
        let gibbs = gibbs_distribution(&g, &p, b.beta).unwrap();
        let dim = m.dim();
        let starts = [
            ("all-down", pure(&basis_state(SpinConfig::all_down(n).unwrap()))),
            ("all-up", pure(&basis_state(SpinConfig::all_up(n).unwrap()))),
            ("uniform", DensityMatrix::from_populations(n, &vec![1.0 / dim as f64; dim]).unwrap()),
            ("gibbs", DensityMatrix::from_populations(n, &gibbs).unwrap()),
        ];
        let mut graph_worst = 0.0f64;
        let mut off = 0.0f64;
        let mut from_gibbs = 0.0;
        for (label, rho0) in &starts {
            let evo = propagate_master(&m, rho0, &grid, 1e-10).unwrap();
            let d = linf(&evo.populations(1), &gibbs);
            off = off.max(evo.state(1).max_coherence());
            if *label == "gibbs" {
                from_gibbs = d;
            }
            graph_worst = graph_worst.max(d);
        }
        let gap = relaxation_gap(&m.pauli_rate_matrix(), dim, 1e-9);
        let ok = graph_worst < 1e-6 && off < 1e-8;
        pass &= ok;
        worst = worst.max(graph_worst);
        details.push(format!(
            "{} {name:<22} diag L∞ {graph_worst:.2e} (Gibbs start {from_gibbs:.1e}), off-diag {off:.1e}, slowest rate {gap:.3e} (e^(-200·rate) = {:.1e})",
            if ok { "ok  " } else { "FAIL" },
            (-200.0 * gap).exp()
        ));
    }
    Outcome::new(pass, format!("Gibbs stationarity at t = 200, worst diagonal L∞ {worst:.2e} (gate 1e-6)"), details)
}

fn detailed_balance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for kind in [CutoffKind::Exponential, CutoffKind::DrudeLorentz] {
        for _ in 0..10_000 {
            let eta = rng.random_range(0.05..2.0);
            let wc = rng.random_range(0.2..5.0);
            let beta = rng.random_range(0.1..5.0);
            let b = BathSpec::new(eta, wc, kind, beta).unwrap();
            let mag = 10f64.powf(rng.random_range(-4.0..1.0));
            let w = if rng.random::<bool>() { mag } else { -mag };
            let lhs = b.rate(w).unwrap() * (beta * w).exp();
            let rhs = b.rate(-w).unwrap();
            worst = worst.max((lhs - rhs).abs() / rhs.abs());
        }
    }
    Outcome::new(worst < 1e-12, format!("detailed balance on 2×10^4 random ω, max relative error {worst:.2e} (gate 1e-12)"), vec![])
}

fn random_hermitian(dim: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let mut m = vec![Complex64::new(0.0, 0.0); dim * dim];
    for r in 0..dim {
        m[r * dim + r] = Complex64::new(rng.random_range(-1.0..1.0), 0.0);
        for c in r + 1..dim {
            let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            m[r * dim + c] = z;
            m[c * dim + r] = z.conj();
        }
    }
    m
}

fn superoperator_oracle() -> Outcome {
    let graphs = [
        ("single node", Graph::new(1, []).unwrap()),
        ("edge", Graph::new(2, [(0, 1)]).unwrap()),
        ("path:3", Graph::new(3, [(0, 1), (1, 2)]).unwrap()),
        ("triangle", graph::complete(3).unwrap()),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    let mut count = 0;
    for (_, g) in &graphs {
        let m = model(g);
        let dim = m.dim();
        let jumps = node_jump_operators(g.n_nodes(), |a, b| {
            let node = (a ^ b).trailing_zeros() as usize;
            m.rate(a, node)
        });
        let s = dense_lindbladian(m.energies(), &jumps);
        for _ in 0..25 {
            let x = random_hermitian(dim, &mut rng);
            let want = apply_superoperator(&s, &x, dim);
            let rho = DensityMatrix::from_row_major(g.n_nodes(), x).unwrap();
            let got = m.apply_generator(&rho).unwrap();
            for (a, b) in got.as_slice().iter().zip(&want) {
                worst = worst.max((a - b).norm());
            }
            count += 1;
        }
    }
    Outcome::new(
        worst < 1e-10,
        format!("matrix-free generator vs dense superoperator on {count} Hermitian inputs (N ≤ 3), max |Δ| {worst:.2e} (gate 1e-10)"),
        vec![],
    )
}

fn classical_sector() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    let mut details = Vec::new();
    let graphs: Vec<(String, Graph)> = graph::library()
        .into_iter()
        .filter(|(_, g)| g.n_nodes() <= 4)
        .chain([("path:3".to_string(), Graph::new(3, [(0, 1), (1, 2)]).unwrap())])
        .collect();
    let grid = TimeGrid::uniform(0.0, 20.0, 41).unwrap();
    for (name, g) in graphs {
        let m = model(&g);
        let dim = m.dim();
        let w = m.pauli_rate_matrix();
        let mut graph_worst = 0.0f64;
        for _ in 0..3 {
            let mut p0: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
            let total: f64 = p0.iter().sum();
            p0.iter_mut().for_each(|x| *x /= total);
            let rho0 = DensityMatrix::from_populations(g.n_nodes(), &p0).unwrap();
            let sector = propagate_master(&m, &rho0, &grid, 1e-12).unwrap();
            let dense = propagate_master_dense(&m, &rho0, &grid, 1e-12).unwrap();
            for (k, &t) in grid.samples().iter().enumerate() {
                let want = expm_apply(&w, dim, t, &p0);
                graph_worst = graph_worst.max(linf(&sector.populations(k), &want));
                graph_worst = graph_worst.max(linf(&dense[k].populations(), &want));
            }
        }
        details.push(format!("{name:<14} L∞ {graph_worst:.2e}"));
        worst = worst.max(graph_worst);
    }
    Outcome::new(
        worst < 1e-8,
        format!("diagonal starts vs exp(W t) of the Pauli matrix (N ≤ 4), L∞ {worst:.2e} (gate 1e-8)"),
        details,
    )
}

/// GHZ run of one graph: pointwise closed-form error and fitted vs analytic τ.
struct GhzRun {
    n: usize,
    analytic: f64,
    fitted: f64,
    sigma: f64,
    closed_form_err: f64,
}

fn ghz_run(g: &Graph) -> GhzRun {
    let m = model(g);
    let n = g.n_nodes();
    let tau = analytic_decoherence_time(&m).unwrap();
    let grid = TimeGrid::uniform(0.0, 5.0 * tau, 401).unwrap();
    let evo = propagate_master(&m, &pure(&ghz_state(n).unwrap()), &grid, 1e-12).unwrap();
    let modulus = coherence_element(&evo).modulus();
    let closed_form_err = modulus
        .times
        .iter()
        .zip(&modulus.values)
        .map(|(t, v)| (v - 0.5 * (-t / tau).exp()).abs())
        .fold(0.0, f64::max);
    let fit = fit_decoherence(&modulus, &FitOptions::default()).unwrap();
    GhzRun { n, analytic: tau, fitted: fit.t_decoh, sigma: fit.sigma, closed_form_err }
}

fn ghz_closed_form(runs: &BTreeMap<String, GhzRun>) -> Outcome {
    let mut pass = true;
    let mut details = Vec::new();
    for (name, r) in runs {
        let rel = (r.fitted - r.analytic).abs() / r.analytic;
        let ok = r.closed_form_err < 1e-8 && rel < 1e-3;
        pass &= ok;
        details.push(format!(
            "{} {name:<22} pointwise {:.1e}, τ_fit {:.6} vs 2/(Γ↑+Γ↓) {:.6} (rel {rel:.1e})",
            if ok { "ok  " } else { "FAIL" },
            r.closed_form_err,
            r.fitted,
            r.analytic
        ));
    }
    Outcome::new(pass, "GHZ coherence closed form (gate 1e-8) and fitted τ within 0.1% on all built-ins", details)
}

fn table_rows(runs: &BTreeMap<String, GhzRun>) -> Outcome {
    // (name, N, k̄, Δk², reference τ)
    let rows = [
        ("dense7-low-disparity", 7, 3.71, 1.238, 2.4377),
        ("k4-minus-edge", 4, 2.50, 0.333, 1.9083),
        ("dense7-high-disparity", 7, 3.71, 2.571, 1.1433),
        ("paw", 4, 2.00, 0.667, 0.8600),
        ("sparse7", 7, 2.00, 1.333, 0.39824),
    ];
    let mut pass = true;
    let mut details = Vec::new();
    for (name, n, kbar, dk2, reference) in rows {
        let g = graph::builtin(name).unwrap();
        let structural = g.n_nodes() == n
            && (g.mean_degree() - kbar).abs() < 5e-3
            && (g.degree_disparity().unwrap() - dk2).abs() < 5e-4;
        pass &= structural;
        let r = &runs[name];
        let dev = (r.fitted - reference) / reference;
        let gated = n == 4;
        if gated {
            pass &= dev.abs() <= 0.2;
        }
        details.push(format!(
            "{name:<22} (N={n}, k̄={kbar}, Δk²={dk2}) {} τ = {:.5} ± {:.0e} vs reference {reference} ({:+.1}%{})",
            if structural { "matched" } else { "MISMATCH" },
            r.fitted,
            r.sigma,
            100.0 * dev,
            if gated { ", gate 20%" } else { ", magnitude not gated" }
        ));
    }
    let taus: Vec<f64> = rows.iter().map(|r| runs[r.0].fitted).collect();
    let ordered = taus.windows(2).all(|w| w[0] > w[1]);
    pass &= ordered && runs["k4-minus-edge"].fitted > runs["paw"].fitted;
    details.push(format!("five-row order row3 > row1 > row4 > row2 > row5: {}", if ordered { "holds" } else { "BROKEN" }));
    Outcome::new(pass, "decoherence-time table: N=4 magnitudes within 20%, full rank order", details)
}

fn oscillation() -> Outcome {
    let h = reference_profile().0.field;
    let mut pass = true;
    let mut details = Vec::new();
    for (name, g) in graph::library() {
        let n = g.n_nodes();
        let m = model(&g);
        let target = 2.0 * h * n as f64;
        let tau = analytic_decoherence_time(&m).unwrap();
        // Keep the signal well above the integrator's absolute tolerance.
        let t_end = (3.0 * 2.0 * std::f64::consts::PI / target).min(tau * (0.5f64 / 1e-7).ln());
        let grid = TimeGrid::uniform(0.0, t_end, 4001).unwrap();
        let evo = propagate_master(&m, &pure(&ghz_state(n).unwrap()), &grid, 1e-12).unwrap();
        let coh = coherence_element(&evo);
        let w = oscillation_frequency(&coh.times, &coh.re());
        let rel = w.map(|w| (w - target).abs() / target);
        let ok = rel.is_some_and(|r| r < 0.01);
        pass &= ok;
        details.push(format!(
            "{} {name:<22} ω = {} vs 2hN = {target:.1}",
            if ok { "ok  " } else { "FAIL" },
            w.map_or("n/a".to_string(), |w| format!("{w:.6}"))
        ));
    }
    Outcome::new(pass, "Re ρ_coh oscillates at 2hN within 1%", details)
}

fn trajectories() -> Outcome {
    let g = graph::builtin("k4-minus-edge").unwrap();
    let m = model(&g);
    let grid = TimeGrid::uniform(0.0, 20.0, 50).unwrap();
    let psi = basis_state(SpinConfig::all_down(4).unwrap());
    let n_traj = 10_000;
    let start = Instant::now();
    let avg = run_trajectories(&m, &psi, &grid, &TrajectoryPlan::new(n_traj, 2024).unwrap()).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let evo = propagate_master(&m, &pure(&psi), &grid, 1e-11).unwrap();
    // Configurations no trajectory has visited report a zero standard
    // error; one count in n_traj is the resolution floor there.
    let floor = 1.0 / n_traj as f64;
    let mut worst = 0.0f64;
    let mut floored = 0;
    for k in 0..grid.samples().len() {
        let exact = evo.populations(k);
        for a in 0..16 {
            let se = avg.std_err[k][a];
            if se < floor {
                floored += 1;
            }
            worst = worst.max((avg.mean[k][a] - exact[a]).abs() / se.max(floor));
        }
    }
    Outcome::new(
        worst <= 4.0 && elapsed < 60.0,
        format!("10^4 trajectories vs master equation at 50 times: worst deviation {worst:.2} SE (gate 4), {elapsed:.2} s"),
        vec![format!(
            "{} jumps in total; {floored} of 800 comparisons used the 1/n_traj floor",
            avg.total_jumps
        )],
    )
}

fn meanfield_exactness() -> Outcome {
    let (p, b) = reference_profile();
    let g = graph::complete(4).unwrap();
    let exact = model(&g);
    let grid = TimeGrid::uniform(0.0, 50.0, 201).unwrap();
    let evo = propagate_master(&exact, &pure(&basis_state(SpinConfig::all_down(4).unwrap())), &grid, 1e-12).unwrap();
    let run = |z: f64| {
        let mf = MeanFieldModel::new(4, z, p, b).unwrap();
        let red = mf.propagate(&ReducedDistribution::point(4, 0).unwrap(), &grid, 1e-12).unwrap();
        (0..grid.samples().len())
            .map(|k| linf(&bin_by_up_count(&evo.populations(k), 4).unwrap(), &red.distributions[k]))
            .fold(0.0, f64::max)
    };
    let gap = run(4.0);
    let gap_kbar = run(3.0);

    // Stationary law of the reduced chain from its closed form.
    let mut stat_err = 0.0f64;
    for (n, z) in [(4usize, 4.0), (7, 26.0 / 7.0), (20, 3.0), (60, 10.0)] {
        let mf = MeanFieldModel::new(n, z, p, b).unwrap();
        let w: Vec<f64> = (0..=n)
            .map(|k| {
                let m = 2.0 * k as f64 - n as f64;
                let e = -z * p.coupling / (2.0 * n as f64) * m * m - p.field * m;
                binomial(n, k) * (-b.beta * e).exp()
            })
            .collect();
        let total: f64 = w.iter().sum();
        let want: Vec<f64> = w.iter().map(|x| x / total).collect();
        stat_err = stat_err.max(linf(mf.stationary().probabilities(), &want));
    }
    let exact_gibbs = bin_by_up_count(&gibbs_distribution(&g, &p, b.beta).unwrap(), 4).unwrap();
    let mf4 = MeanFieldModel::new(4, 4.0, p, b).unwrap();
    let gibbs_gap = linf(&exact_gibbs, mf4.stationary().probabilities());
    Outcome::new(
        gap < 1e-6 && stat_err < 1e-10,
        format!("K4 binned exact vs mean field L∞ {gap:.2e} (gate 1e-6); stationary vs C(N,n)e^(-βE)/Z {stat_err:.1e} (gate 1e-10)"),
        vec![
            "coordination z = N = 4 (the reduction reproduces K_N exactly only at z = N)".to_string(),
            format!("informational: z = k̄ = 3 gives L∞ {gap_kbar:.2e}"),
            format!("binned exact Gibbs vs mean-field stationary at z = 4: {gibbs_gap:.1e}"),
        ],
    )
}

fn degree_sum_identities() -> Outcome {
    let mut checked = 0usize;
    let mut violations = Vec::new();
    for (name, g) in graph::library() {
        let n = g.n_nodes();
        let k: Vec<i64> = (0..n).map(|i| (0..n).map(|j| i64::from(g.adjacency(i, j))).sum()).collect();
        for s in SpinConfig::all(n) {
            let sigma: Vec<i64> = (0..n).map(|i| i64::from(s.spin(i))).collect();
            let up = |i: usize| sigma[i] == 1;
            // Neighbour sums Σ_j A_ij σ_j straight from the adjacency matrix.
            let nb: Vec<i64> = (0..n).map(|i| (0..n).map(|j| i64::from(g.adjacency(i, j)) * sigma[j]).sum()).collect();
            let (mut uu, mut dd, mut ud) = (0i64, 0i64, 0i64);
            for i in 0..n {
                for j in i + 1..n {
                    if g.adjacency(i, j) == 1 {
                        match (up(i), up(j)) {
                            (true, true) => uu += 1,
                            (false, false) => dd += 1,
                            _ => ud += 1,
                        }
                    }
                }
            }
            let k_up: i64 = (0..n).filter(|&i| up(i)).map(|i| k[i]).sum();
            let k_down: i64 = (0..n).filter(|&i| !up(i)).map(|i| k[i]).sum();
            let ks: i64 = (0..n).map(|i| k[i] * sigma[i]).sum();
            let nb_total: i64 = nb.iter().sum();
            let nb_up: i64 = (0..n).filter(|&i| up(i)).map(|i| nb[i]).sum();
            let nb_down: i64 = (0..n).filter(|&i| !up(i)).map(|i| nb[i]).sum();

            let lib = degree_sums(&g, s).unwrap();
            let ec = edge_counts(&g, s).unwrap();
            let ok = nb_total == ks
                && ks == k_up - k_down
                && 2 * uu + ud == k_up
                && 2 * dd + ud == k_down
                && nb_up == 2 * uu - ud
                && nb_down == ud - 2 * dd
                && (lib.up_degree, lib.down_degree, lib.spin_weighted) == (k_up, k_down, ks)
                && (lib.neighbour_total, lib.neighbour_up, lib.neighbour_down) == (nb_total, nb_up, nb_down)
                && (ec.up_up as i64, ec.down_down as i64, ec.up_down as i64) == (uu, dd, ud);
            if !ok {
                violations.push(format!("{name} config {s}"));
            }
            checked += 1;
        }
    }
    let mut details: Vec<String> = violations.iter().take(5).cloned().collect();
    details.push("Σ_{i↓} k_i s̄_i equals N↑↓ − 2N↓↓".into());
    Outcome::new(
        violations.is_empty(),
        format!("degree/pair identities exact on {checked} configurations of the built-in library"),
        details,
    )
}

fn topology_trend(runs: &BTreeMap<String, GhzRun>) -> Outcome {
    let graphs: BTreeMap<String, Graph> = graph::library().into_iter().collect();
    let mut by_n: BTreeMap<usize, Vec<(f64, f64)>> = BTreeMap::new();
    let mut by_nl: BTreeMap<(usize, usize), Vec<(f64, f64, &str)>> = BTreeMap::new();
    for (name, r) in runs {
        let g = &graphs[name];
        by_n.entry(r.n).or_default().push((g.mean_degree(), r.fitted));
        by_nl
            .entry((r.n, g.n_edges()))
            .or_default()
            .push((g.degree_disparity().unwrap(), r.fitted, name.as_str()));
    }
    let mut pass = true;
    let mut details = Vec::new();
    for (n, pts) in &by_n {
        let (k, t): (Vec<f64>, Vec<f64>) = pts.iter().copied().unzip();
        let rho = spearman(&k, &t).unwrap();
        pass &= rho > 0.0;
        details.push(format!("N={n}: ρ(τ, k̄) = {rho:+.3} over {} graphs", pts.len()));
    }
    for ((n, l), pts) in by_nl.iter().filter(|(_, v)| v.len() >= 2) {
        let d: Vec<f64> = pts.iter().map(|p| p.0).collect();
        let t: Vec<f64> = pts.iter().map(|p| p.1).collect();
        let names: Vec<&str> = pts.iter().map(|p| p.2).collect();
        let rho = spearman(&d, &t).unwrap();
        pass &= rho < 0.0;
        details.push(format!(
            "N={n}, k̄={:.2}: ρ(τ, Δk²) = {rho:+.3} over {}",
            2.0 * *l as f64 / *n as f64,
            names.join(", ")
        ));
    }
    Outcome::new(pass, "Spearman: τ rises with k̄ at fixed N and falls with Δk² at fixed (N, k̄)", details)
}

fn run_cli(args: &[&str], out: &Path, workers: &str) {
    let status = Command::new(env!("CARGO_BIN_EXE_isingnet"))
        .args(args)
        .arg("--output")
        .arg(out)
        .env("ISINGNET_WORKERS", workers)
        .status()
        .expect("binary runs");
    assert!(status.success(), "isingnet {args:?} failed");
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&str, &[&str], &[&str]); 3] = [
        ("simulate", &["simulate", "-s", "graph=paw", "-s", "initial=ghz"], &["populations.csv", "correlations.csv", "coherence.csv", "local_magnetization.csv"]),
        ("trajectories", &["trajectories", "-s", "graph=k4-minus-edge", "-s", "n_traj=500", "-s", "seed=7", "-s", "samples=21", "-s", "t_end=10"], &["populations.csv", "std_err.csv"]),
        ("meanfield", &["meanfield", "-s", "graph=dense7-low-disparity"], &["reduced_populations.csv", "fractions.csv"]),
    ];
    let mut pass = true;
    let mut details = Vec::new();
    for (label, args, files) in cases {
        let a = dir.path().join(format!("{label}-a"));
        let b = dir.path().join(format!("{label}-b"));
        run_cli(args, &a, "1");
        run_cli(args, &b, "4");
        for f in files {
            let same = std::fs::read(a.join(f)).unwrap() == std::fs::read(b.join(f)).unwrap();
            pass &= same;
            details.push(format!("{} {label}/{f}", if same { "identical" } else { "DIFFERS  " }));
        }
    }
    Outcome::new(pass, "repeated CLI runs (1 and 4 workers) give byte-identical CSV files", details)
}

fn main() {
    let start = Instant::now();
    let runs: BTreeMap<String, GhzRun> = graph::library().iter().map(|(name, g)| (name.clone(), ghz_run(g))).collect();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("Gibbs stationarity", Box::new(gibbs_stationarity)),
        ("detailed balance", Box::new(detailed_balance)),
        ("superoperator oracle", Box::new(superoperator_oracle)),
        ("classical-sector oracle", Box::new(classical_sector)),
        ("GHZ closed form", Box::new(|| ghz_closed_form(&runs))),
        ("decoherence table", Box::new(|| table_rows(&runs))),
        ("coherence oscillation", Box::new(oscillation)),
        ("trajectory unraveling", Box::new(trajectories)),
        ("mean-field exactness", Box::new(meanfield_exactness)),
        ("degree-sum identities", Box::new(degree_sum_identities)),
        ("topology trend", Box::new(|| topology_trend(&runs))),
        ("determinism", Box::new(determinism)),
    ];
    let mut failed = Vec::new();
    for (i, (title, check)) in criteria.iter().enumerate() {
        let o = check();
        println!("{} criterion {:>2} ({title}): {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.summary);
        for d in &o.details {
            println!("        {d}");
        }
        if !o.pass {
            failed.push(i + 1);
        }
    }
    println!(
        "acceptance: {}/{} criteria passed in {:.1} s",
        criteria.len() - failed.len(),
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
