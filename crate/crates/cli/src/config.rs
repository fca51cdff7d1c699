//! Run configuration: a flat `key = value` file (TOML syntax) plus
//! command-line overrides, resolved against the reference profile.

use std::path::{Path, PathBuf};

use isingnet::analysis::FitOptions;
use isingnet::dynamics::{basis_state, ghz_state, StateVector};
use isingnet::graph::{self, Graph};
use isingnet::{reference_profile, BathSpec, CutoffKind, ModelParams, SpinConfig};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Keys accepted in a config file. Anything else is rejected.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub graph: Option<String>,
    #[serde(rename = "J")]
    pub coupling: Option<f64>,
    pub h: Option<f64>,
    pub beta: Option<f64>,
    pub eta: Option<f64>,
    pub omega_c: Option<f64>,
    pub cutoff: Option<String>,
    pub initial: Option<String>,
    pub amplitudes: Option<Vec<Vec<f64>>>,
    pub t_end: Option<f64>,
    pub samples: Option<usize>,
    pub tol: Option<f64>,
    pub n_traj: Option<usize>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
    pub pairs: Option<Vec<[usize; 2]>>,
    pub n_nodes: Option<usize>,
    pub z: Option<f64>,
    pub fit_window_level: Option<f64>,
}

impl RawConfig {
    /// Reads `path` (if any) and applies `key=value` overrides on top.
    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Self, CliError> {
        let mut table = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?;
                text.parse::<toml::Table>()
                    .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?
            }
            None => toml::Table::new(),
        };
        for o in overrides {
            let (key, value) = o
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("override `{o}` is not of the form key=value")))?;
            let (key, value) = (key.trim(), value.trim());
            // Bare words such as `graph=paw` are taken as strings.
            let parsed = format!("v = {value}")
                .parse::<toml::Table>()
                .ok()
                .and_then(|mut t| t.remove("v"))
                .unwrap_or_else(|| toml::Value::String(value.to_string()));
            table.insert(key.to_string(), parsed);
        }
        table.try_into().map_err(|e: toml::de::Error| CliError::Config(e.message().to_string()))
    }
}

/// Initial-state choice.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialState {
    AllUp,
    AllDown,
    Ghz,
    /// `(config index, amplitude)` pairs, normalized on use.
    Amplitudes(Vec<(usize, [f64; 2])>),
}

impl InitialState {
    fn parse(kind: &str, amplitudes: Option<&[Vec<f64>]>) -> Result<Self, CliError> {
        let state = match kind {
            "all-up" => Self::AllUp,
            "all-down" => Self::AllDown,
            "ghz" => Self::Ghz,
            "amplitudes" => {
                let list = amplitudes
                    .ok_or_else(|| CliError::Config("initial = \"amplitudes\" needs an `amplitudes` list".into()))?;
                let mut out = Vec::with_capacity(list.len());
                for entry in list {
                    let (idx, re, im) = match entry.as_slice() {
                        [i, re] => (*i, *re, 0.0),
                        [i, re, im] => (*i, *re, *im),
                        _ => {
                            return Err(CliError::Config(
                                "each amplitude is [index, re] or [index, re, im]".into(),
                            ))
                        }
                    };
                    if idx < 0.0 || idx.fract() != 0.0 {
                        return Err(CliError::Config(format!("amplitude index {idx} is not a configuration index")));
                    }
                    out.push((idx as usize, [re, im]));
                }
                Self::Amplitudes(out)
            }
            other => {
                return Err(CliError::Config(format!(
                    "unknown initial state `{other}` (all-up, all-down, ghz, amplitudes)"
                )))
            }
        };
        if amplitudes.is_some() && !matches!(state, Self::Amplitudes(_)) {
            return Err(CliError::Config("`amplitudes` given but initial is not \"amplitudes\"".into()));
        }
        Ok(state)
    }

    pub fn state_vector(&self, n_spins: usize) -> Result<StateVector, CliError> {
        Ok(match self {
            Self::AllUp => basis_state(SpinConfig::all_up(n_spins)?),
            Self::AllDown => basis_state(SpinConfig::all_down(n_spins)?),
            Self::Ghz => ghz_state(n_spins)?,
            Self::Amplitudes(list) => {
                let dim = 1usize << n_spins;
                let mut amps = vec![Complex64::new(0.0, 0.0); dim];
                for &(i, [re, im]) in list {
                    if i >= dim {
                        return Err(CliError::Config(format!("amplitude index {i} out of range for {n_spins} spins")));
                    }
                    amps[i] += Complex64::new(re, im);
                }
                let norm = amps.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                if norm == 0.0 {
                    return Err(CliError::Config("initial amplitudes are all zero".into()));
                }
                amps.iter_mut().for_each(|c| *c /= norm);
                StateVector::new(n_spins, amps)?
            }
        })
    }
}

/// Fully resolved run parameters, defaults materialized.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub graph: String,
    #[serde(rename = "J")]
    pub coupling: f64,
    pub h: f64,
    pub beta: f64,
    pub eta: f64,
    pub omega_c: f64,
    pub cutoff: CutoffKind,
    pub initial: InitialState,
    /// `None` until the horizon is chosen by the command.
    pub t_end: Option<f64>,
    pub samples: usize,
    pub tol: f64,
    pub n_traj: usize,
    pub seed: u64,
    pub output: PathBuf,
    pub pairs: Option<Vec<[usize; 2]>>,
    pub n_nodes: Option<usize>,
    pub z: Option<f64>,
    pub fit_window_level: f64,
}

pub const DEFAULT_SAMPLES: usize = 401;
pub const DEFAULT_T_END: f64 = 50.0;

impl RunConfig {
    pub fn resolve(raw: RawConfig) -> Result<Self, CliError> {
        let (p, b) = reference_profile();
        let cutoff = match raw.cutoff.as_deref() {
            Some(s) => s.parse().map_err(|e: isingnet::Error| CliError::Config(e.to_string()))?,
            None => b.cutoff,
        };
        let initial = InitialState::parse(raw.initial.as_deref().unwrap_or("all-down"), raw.amplitudes.as_deref())?;
        let cfg = Self {
            graph: raw.graph.unwrap_or_else(|| "k4-minus-edge".into()),
            coupling: raw.coupling.unwrap_or(p.coupling),
            h: raw.h.unwrap_or(p.field),
            beta: raw.beta.unwrap_or(b.beta),
            eta: raw.eta.unwrap_or(b.strength),
            omega_c: raw.omega_c.unwrap_or(b.cutoff_frequency),
            cutoff,
            initial,
            t_end: raw.t_end,
            samples: raw.samples.unwrap_or(DEFAULT_SAMPLES),
            tol: raw.tol.unwrap_or(1e-10),
            n_traj: raw.n_traj.unwrap_or(1000),
            seed: raw.seed.unwrap_or(0),
            output: raw.output.unwrap_or_else(|| PathBuf::from("out")),
            pairs: raw.pairs,
            n_nodes: raw.n_nodes,
            z: raw.z,
            fit_window_level: raw.fit_window_level.unwrap_or(FitOptions::default().window_level),
        };
        if let Some(t) = cfg.t_end {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::Config(format!("t_end must be positive, got {t}")));
            }
        }
        if cfg.samples < 2 {
            return Err(CliError::Config("samples must be at least 2".into()));
        }
        if !(cfg.tol > 0.0 && cfg.tol < 1.0) {
            return Err(CliError::Config(format!("tol must lie in (0, 1), got {}", cfg.tol)));
        }
        if !(cfg.fit_window_level > 0.0 && cfg.fit_window_level < 1.0) {
            return Err(CliError::Config("fit_window_level must lie in (0, 1)".into()));
        }
        cfg.params()?;
        cfg.bath()?;
        Ok(cfg)
    }

    pub fn params(&self) -> Result<ModelParams, CliError> {
        Ok(ModelParams::new(self.coupling, self.h)?)
    }

    pub fn bath(&self) -> Result<BathSpec, CliError> {
        Ok(BathSpec::new(self.eta, self.omega_c, self.cutoff, self.beta)?)
    }

    /// Built-in name or edge-list path.
    pub fn load_graph(&self) -> Result<Graph, CliError> {
        load_graph(&self.graph)
    }

    pub fn fit_options(&self) -> FitOptions {
        FitOptions { window_level: self.fit_window_level, ..FitOptions::default() }
    }
}

pub fn load_graph(source: &str) -> Result<Graph, CliError> {
    match graph::builtin(source) {
        Ok(g) => Ok(g),
        Err(isingnet::Error::UnknownGraph(_)) if Path::new(source).exists() => {
            let text = std::fs::read_to_string(source)
                .map_err(|e| CliError::Config(format!("cannot read {source}: {e}")))?;
            Ok(graph::load_edge_list(&text)?)
        }
        Err(e) => Err(e.into()),
    }
}
