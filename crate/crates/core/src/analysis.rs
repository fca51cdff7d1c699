//! Post-processing of runs into observable time series and decoherence
//! times.

use num_complex::Complex64;
use serde::Serialize;

use crate::dynamics::Evolution;
use crate::error::{Error, Result};
use crate::liouvillian::LindbladModel;
use crate::spin::SpinConfig;

/// Values sampled at strictly increasing times.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeSeries<T = f64> {
    pub label: String,
    pub times: Vec<f64>,
    pub values: Vec<T>,
}

impl<T> TimeSeries<T> {
    pub fn new(label: impl Into<String>, times: Vec<f64>, values: Vec<T>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::SizeMismatch { expected: times.len(), got: values.len() });
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter("series times must be strictly increasing".into()));
        }
        Ok(Self { label: label.into(), times, values })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

impl TimeSeries<Complex64> {
    pub fn re(&self) -> Vec<f64> {
        self.values.iter().map(|c| c.re).collect()
    }

    pub fn im(&self) -> Vec<f64> {
        self.values.iter().map(|c| c.im).collect()
    }

    pub fn modulus(&self) -> TimeSeries<f64> {
        TimeSeries {
            label: format!("|{}|", self.label),
            times: self.times.clone(),
            values: self.values.iter().map(|c| c.norm()).collect(),
        }
    }
}

/// `⟨O⟩(t) = Σ_σ ρ_σσ(t) O(σ)` from populations `[sample][config]`.
pub fn expectation(
    label: impl Into<String>,
    times: &[f64],
    populations: &[Vec<f64>],
    n_spins: usize,
    observable: impl Fn(SpinConfig) -> f64,
) -> Result<TimeSeries> {
    let weights: Vec<f64> = SpinConfig::all(n_spins).map(observable).collect();
    let mut values = Vec::with_capacity(populations.len());
    for p in populations {
        if p.len() != weights.len() {
            return Err(Error::SizeMismatch { expected: weights.len(), got: p.len() });
        }
        values.push(p.iter().zip(&weights).map(|(a, b)| a * b).sum());
    }
    TimeSeries::new(label, times.to_vec(), values)
}

/// `⟨σ_i σ_j⟩(t)` for distinct nodes.
pub fn spin_spin_correlation(
    times: &[f64],
    populations: &[Vec<f64>],
    n_spins: usize,
    i: usize,
    j: usize,
) -> Result<TimeSeries> {
    if i == j {
        return Err(Error::InvalidParameter("spin-spin correlation needs two distinct nodes".into()));
    }
    if i >= n_spins || j >= n_spins {
        return Err(Error::InvalidParameter(format!("node out of range for {n_spins} spins")));
    }
    expectation(format!("s{i}s{j}"), times, populations, n_spins, |s| f64::from(s.spin(i) * s.spin(j)))
}

/// `ρ_{↑…↑, ↓…↓}(t)`: the coherence between the two uniform configurations.
pub fn coherence_element(evolution: &Evolution) -> TimeSeries<Complex64> {
    let up = evolution.dim() - 1;
    let values = (0..evolution.len()).map(|k| evolution.element(k, up, 0)).collect();
    TimeSeries { label: "rho_coh".into(), times: evolution.times().to_vec(), values }
}

/// Closed-form decoherence time `2/(Γ_↑ + Γ_↓)` of the uniform-state
/// coherence, which decays without any feed-in.
pub fn analytic_decoherence_time(model: &LindbladModel) -> Result<f64> {
    if model.n_spins() < 2 {
        return Err(Error::InvalidParameter("need at least two spins".into()));
    }
    let g = model.outflow();
    let total = g[0] + g[model.dim() - 1];
    Ok(if total == 0.0 { f64::INFINITY } else { 2.0 / total })
}

/// Choices behind [`fit_decoherence`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitOptions {
    /// Fixed prefactor of the model `A e^{−t/τ}`.
    pub amplitude: f64,
    /// The window ends at the first sample whose value drops below
    /// `amplitude · window_level`.
    pub window_level: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self { amplitude: 0.5, window_level: (-3.0f64).exp() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecoherenceFit {
    pub t_decoh: f64,
    /// One-sigma uncertainty of `t_decoh`.
    pub sigma: f64,
    pub window: (f64, f64),
    /// `√(Σ residual²)` over the window.
    pub residual: f64,
    pub n_points: usize,
}

impl DecoherenceFit {
    /// `t_decoh` with its uncertainty in parenthetical notation, e.g.
    /// `1.9083(51)`.
    pub fn parenthetical(&self) -> String {
        format_with_uncertainty(self.t_decoh, self.sigma)
    }
}

/// Least-squares fit of `A e^{−t/τ}` (unweighted) to a positive decay.
pub fn fit_decoherence(series: &TimeSeries, opts: &FitOptions) -> Result<DecoherenceFit> {
    if series.len() < 10 {
        return Err(Error::Fit(format!("need at least 10 samples, got {}", series.len())));
    }
    let threshold = opts.amplitude * opts.window_level;
    let mut end = series.len();
    for (k, &v) in series.values.iter().enumerate() {
        if v <= 0.0 {
            end = k;
            break;
        }
        if v < threshold {
            end = k + 1;
            break;
        }
    }
    let t = &series.times[..end];
    let y = &series.values[..end];
    if t.len() < 3 {
        return Err(Error::Fit("fit window holds fewer than three positive samples".into()));
    }

    let a = opts.amplitude;
    // Log-linear start for the decay rate k = 1/τ, through the fixed prefactor.
    let (num, den) = t.iter().zip(y).fold((0.0, 0.0), |(n, d), (&ti, &yi)| {
        (n - ti * (yi / a).ln(), d + ti * ti)
    });
    if den == 0.0 {
        return Err(Error::Fit("fit window has no time extent".into()));
    }
    let mut k = (num / den).max(1e-300);
    let rss = |k: f64| -> f64 { t.iter().zip(y).map(|(&ti, &yi)| (yi - a * (-k * ti).exp()).powi(2)).sum() };
    let mut current = rss(k);
    for _ in 0..200 {
        let (mut jr, mut jj) = (0.0, 0.0);
        for (&ti, &yi) in t.iter().zip(y) {
            let f = a * (-k * ti).exp();
            let jac = -ti * f;
            jr += jac * (yi - f);
            jj += jac * jac;
        }
        if jj == 0.0 {
            break;
        }
        let mut step = jr / jj;
        let mut accepted = false;
        for _ in 0..60 {
            let trial = k + step;
            if trial > 0.0 {
                let r = rss(trial);
                if r <= current {
                    k = trial;
                    current = r;
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if !accepted || step.abs() <= 1e-15 * k {
            break;
        }
    }
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::Fit(format!("decay rate estimate {k} is not positive")));
    }
    let jj: f64 = t.iter().map(|&ti| (ti * a * (-k * ti).exp()).powi(2)).sum();
    let dof = (t.len() - 1) as f64;
    let sigma_k = if jj > 0.0 { (current / dof / jj).sqrt() } else { f64::INFINITY };
    Ok(DecoherenceFit {
        t_decoh: 1.0 / k,
        sigma: sigma_k / (k * k),
        window: (t[0], t[t.len() - 1]),
        residual: current.sqrt(),
        n_points: t.len(),
    })
}

/// Formats `value(σ)` with two significant digits of uncertainty.
pub fn format_with_uncertainty(value: f64, sigma: f64) -> String {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return format!("{value}");
    }
    let decimals = (1 - sigma.log10().floor() as i32).clamp(0, 15) as usize;
    let scaled = (sigma * 10f64.powi(decimals as i32)).round() as u64;
    format!("{value:.decimals$}({scaled})")
}

/// Angular frequency from the zero crossings of an oscillating signal:
/// `π (K − 1) / (t_K − t_1)` over `K ≥ 2` linearly interpolated crossings.
pub fn oscillation_frequency(times: &[f64], values: &[f64]) -> Option<f64> {
    let mut crossings = Vec::new();
    for k in 0..values.len().saturating_sub(1) {
        let (v0, v1) = (values[k], values[k + 1]);
        if v0 == 0.0 {
            crossings.push(times[k]);
        } else if v0 * v1 < 0.0 {
            crossings.push(times[k] + (times[k + 1] - times[k]) * v0 / (v0 - v1));
        }
    }
    crossings.dedup();
    if crossings.len() < 2 {
        return None;
    }
    let span = crossings[crossings.len() - 1] - crossings[0];
    Some(std::f64::consts::PI * (crossings.len() - 1) as f64 / span)
}

/// Spearman rank correlation, ties given their average rank.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::SizeMismatch { expected: x.len(), got: y.len() });
    }
    if x.len() < 2 {
        return Err(Error::InvalidParameter("rank correlation needs two points".into()));
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::InvalidParameter("rank correlation of a constant sequence".into()));
    }
    Ok(sxy / (sxx * syy).sqrt())
}

fn ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut r = vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            r[k] = avg;
        }
        i = j + 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn synthetic(tau: f64, t_max: f64, n: usize) -> TimeSeries {
        let times: Vec<f64> = (0..n).map(|k| t_max * k as f64 / (n - 1) as f64).collect();
        let values = times.iter().map(|t| 0.5 * (-t / tau).exp()).collect();
        TimeSeries::new("abs", times, values).unwrap()
    }

    #[test]
    fn recovers_exact_exponential() {
        let fit = fit_decoherence(&synthetic(2.0, 6.0, 121), &FitOptions::default()).unwrap();
        assert_relative_eq!(fit.t_decoh, 2.0, max_relative = 1e-12);
        assert!(fit.sigma < 1e-10);
        assert!(fit.residual < 1e-12);
        assert_eq!(fit.window.0, 0.0);
    }

    #[test]
    fn recovery_does_not_depend_on_density() {
        for n in [51, 80, 200, 1000] {
            let fit = fit_decoherence(&synthetic(0.86, 5.0, n), &FitOptions::default()).unwrap();
            assert_relative_eq!(fit.t_decoh, 0.86, max_relative = 1e-6);
        }
    }

    #[test]
    fn window_stops_after_level_and_before_nonpositive() {
        let s = synthetic(1.0, 10.0, 101);
        let fit = fit_decoherence(&s, &FitOptions::default()).unwrap();
        // First sample below 0.5 e^{-3} is t = 3.1.
        assert_relative_eq!(fit.window.1, 3.1, max_relative = 1e-12);

        let mut noisy = synthetic(1.0, 2.0, 21);
        noisy.values[8] = -1e-3;
        let fit = fit_decoherence(&noisy, &FitOptions::default()).unwrap();
        assert_eq!(fit.n_points, 8);

        noisy.values[1] = 0.0;
        assert!(fit_decoherence(&noisy, &FitOptions::default()).is_err());
        assert!(fit_decoherence(&synthetic(1.0, 1.0, 9), &FitOptions::default()).is_err());
    }

    #[test]
    fn noisy_fit_reports_uncertainty() {
        let mut s = synthetic(1.5, 4.0, 200);
        for (k, v) in s.values.iter_mut().enumerate() {
            *v += 1e-3 * ((k as f64 * 12.9898).sin() * 43758.5453).fract();
        }
        let fit = fit_decoherence(&s, &FitOptions::default()).unwrap();
        assert!((fit.t_decoh - 1.5).abs() < 0.02);
        assert!(fit.sigma > 0.0 && fit.sigma < 0.01);
    }

    #[test]
    fn parenthetical_format() {
        assert_eq!(format_with_uncertainty(1.90834, 0.00512), "1.9083(51)");
        assert_eq!(format_with_uncertainty(0.398_241, 0.000_88), "0.39824(88)");
        assert_eq!(format_with_uncertainty(2.0, 0.0), "2");
    }

    #[test]
    fn zero_crossing_frequency() {
        let times: Vec<f64> = (0..2000).map(|k| k as f64 * 0.01).collect();
        let values: Vec<f64> = times.iter().map(|t| (-0.3 * t).exp() * (0.8 * t).cos()).collect();
        let w = oscillation_frequency(&times, &values).unwrap();
        assert_relative_eq!(w, 0.8, max_relative = 1e-4);
        assert!(oscillation_frequency(&times[..10], &values[..10]).is_none());
    }

    #[test]
    fn spearman_basics() {
        assert_relative_eq!(spearman(&[1.0, 2.0, 3.0], &[10.0, 20.0, 30.0]).unwrap(), 1.0);
        assert_relative_eq!(spearman(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap(), -1.0);
        assert_eq!(ranks(&[2.0, 1.0, 2.0]), vec![2.5, 1.0, 2.5]);
        assert!(spearman(&[1.0, 1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn expectation_of_unit_observable_is_trace() {
        let pops = vec![vec![0.25; 4], vec![0.1, 0.2, 0.3, 0.4]];
        let s = expectation("one", &[0.0, 1.0], &pops, 2, |_| 1.0).unwrap();
        assert!(s.values.iter().all(|v| (v - 1.0).abs() < 1e-15));
        assert!(spin_spin_correlation(&[0.0, 1.0], &pops, 2, 1, 1).is_err());
        let c01 = spin_spin_correlation(&[0.0, 1.0], &pops, 2, 0, 1).unwrap();
        let c10 = spin_spin_correlation(&[0.0, 1.0], &pops, 2, 1, 0).unwrap();
        assert_eq!(c01.values, c10.values);
        assert!(TimeSeries::new("x", vec![0.0, 0.0], vec![1.0, 2.0]).is_err());
    }
}
