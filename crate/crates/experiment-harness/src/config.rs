use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use dynamics_core::{AngleSpec, CatMap, DynamicsError, MorseSmaleMap, ProductSystem, TorusCoord};

/// Experiment kinds, one per CLI subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Certify,
    Weyl,
    Lyapunov,
    Basins,
    Sandwich,
    Transitivity,
    Simulate,
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ExperimentKind::Certify => "certify",
            ExperimentKind::Weyl => "weyl",
            ExperimentKind::Lyapunov => "lyapunov",
            ExperimentKind::Basins => "basins",
            ExperimentKind::Sandwich => "sandwich",
            ExperimentKind::Transitivity => "transitivity",
            ExperimentKind::Simulate => "simulate",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("failed to read config file {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("failed to parse config: {0}")]
    Parse(#[from] toml::de::Error),

    #[error("no experiment kind: pass a subcommand or set `kind` in the config")]
    MissingKind,

    #[error("cannot parse angle {0:?}: expected \"golden\", \"sqrt:<prime>\" or a number in (0,1)")]
    BadAngle(String),

    #[error("invalid system: {0}")]
    System(#[from] DynamicsError),

    #[error("{kind} requires a seed (set `seed` or pass --seed)")]
    MissingSeed { kind: ExperimentKind },

    #[error("{kind} requires `center_sinks` (the system needs a center factor)")]
    MissingCenter { kind: ExperimentKind },

    #[error("{kind} is defined for systems without a center factor; remove `center_sinks`")]
    UnwantedCenter { kind: ExperimentKind },

    #[error("{field} must be at least 1")]
    MustBePositive { field: &'static str },

    #[error("eps = {eps} out of range for {kind}")]
    BadEps { eps: f64, kind: ExperimentKind },

    #[error("cannot parse --set {0:?}: expected key=value")]
    BadOverride(String),

    #[error("cannot parse observable {0:?}: expected comma-separated integers m,n,k_1..k_r[,j]")]
    BadObservable(String),
}

/// Flat experiment configuration. The on-disk form is a flat TOML file; CLI
/// flags override file keys. Every knob any experiment needs lives here so a
/// config file is a complete, diff-able record of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Experiment to run; usually supplied by the CLI subcommand.
    pub kind: Option<ExperimentKind>,

    // System.
    /// Torus matrix entries `[a, b, c, d]`.
    #[serde(default = "default_matrix")]
    pub matrix: [i64; 4],
    /// Rotation angles: "golden", "sqrt:<prime>", or a numeric literal.
    #[serde(default = "default_rotations")]
    pub rotations: Vec<String>,
    /// Number of center sinks; omit for a system without a center factor.
    #[serde(default)]
    pub center_sinks: Option<u32>,
    #[serde(default = "default_epsilon")]
    pub center_epsilon: f64,
    #[serde(default)]
    pub center_phase: f64,

    // Run control.
    /// Orbit length for orbit-driven experiments.
    #[serde(default = "default_n")]
    pub n: u64,
    /// Sample count for surveys.
    #[serde(default = "default_samples")]
    pub samples: u64,
    /// RNG seed; mandatory for stochastic experiments.
    #[serde(default)]
    pub seed: Option<u64>,
    /// Worker threads; 0 means one per available core.
    #[serde(default)]
    pub workers: usize,
    /// Output directory; resolved against `PHLAB_OUT` when relative paths
    /// are not given explicitly.
    #[serde(default)]
    pub out: Option<PathBuf>,
    /// Sample stride for orbit dumps.
    #[serde(default = "default_stride")]
    pub stride: u64,

    // Certify.
    #[serde(default = "default_box_bound")]
    pub box_bound: i64,
    #[serde(default = "default_k_bound")]
    pub k_bound: i64,
    #[serde(default = "default_margin_floor")]
    pub margin_floor: f64,
    #[serde(default = "default_step_budget")]
    pub step_budget: u32,

    // Weyl.
    #[serde(default = "default_weyl_bound")]
    pub weyl_m: i64,
    #[serde(default = "default_weyl_bound")]
    pub weyl_n: i64,
    #[serde(default = "default_weyl_bound")]
    pub weyl_k: i64,
    #[serde(default)]
    pub weyl_j: Option<i64>,

    // Basins / sandwich.
    #[serde(default = "default_max_iter")]
    pub max_iter: u64,
    #[serde(default = "default_radius")]
    pub radius: f64,
    /// Use the deterministic center grid instead of seeded uniform samples.
    #[serde(default)]
    pub grid_sampler: bool,

    // Sandwich / transitivity.
    #[serde(default = "default_eps")]
    pub eps: f64,
    /// Sandwich observable: character frequencies "m,n,k_1..k_r[,j]".
    #[serde(default = "default_observable")]
    pub observable: String,
}

fn default_matrix() -> [i64; 4] {
    [2, 1, 1, 1]
}
fn default_rotations() -> Vec<String> {
    vec!["golden".to_string()]
}
fn default_epsilon() -> f64 {
    0.5
}
fn default_n() -> u64 {
    1_000_000
}
fn default_samples() -> u64 {
    10_000
}
fn default_stride() -> u64 {
    1
}
fn default_box_bound() -> i64 {
    50
}
fn default_k_bound() -> i64 {
    8
}
fn default_margin_floor() -> f64 {
    lattice_fourier::DEFAULT_MARGIN_FLOOR
}
fn default_step_budget() -> u32 {
    lattice_fourier::DEFAULT_STEP_BUDGET
}
fn default_weyl_bound() -> i64 {
    2
}
fn default_max_iter() -> u64 {
    100_000
}
fn default_radius() -> f64 {
    1e-9
}
fn default_eps() -> f64 {
    0.1
}
fn default_observable() -> String {
    "1,0,0,0".to_string()
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        toml::from_str("").expect("empty config populates every default")
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        Ok(toml::from_str(text)?)
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml(&text)
    }

    /// Apply a `key=value` override, reusing the TOML field grammar.
    pub fn apply_override(&mut self, kv: &str) -> Result<(), ConfigError> {
        let (key, value) = kv
            .split_once('=')
            .ok_or_else(|| ConfigError::BadOverride(kv.to_string()))?;
        let mut doc = toml::to_string(&self).expect("config serializes");
        doc.push_str(&format!("\n{} = {}\n", key.trim(), value.trim()));
        // Bare strings are a convenience: retry quoted on parse failure.
        match toml::from_str(&doc) {
            Ok(cfg) => {
                *self = cfg;
                Ok(())
            }
            Err(_) => {
                let mut doc = toml::to_string(&self).expect("config serializes");
                doc.push_str(&format!("\n{} = {:?}\n", key.trim(), value.trim()));
                *self = toml::from_str(&doc)?;
                Ok(())
            }
        }
    }

    pub fn kind(&self) -> Result<ExperimentKind, ConfigError> {
        self.kind.ok_or(ConfigError::MissingKind)
    }

    /// Validate every precondition the selected experiment relies on; no
    /// computation happens on an invalid config.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let kind = self.kind()?;
        self.build_system()?;
        use ExperimentKind::*;
        match kind {
            Certify => {
                if self.center_sinks.is_some() {
                    return Err(ConfigError::UnwantedCenter { kind });
                }
            }
            Transitivity => {
                if self.center_sinks.is_some() {
                    return Err(ConfigError::UnwantedCenter { kind });
                }
                if !(self.eps > 0.0 && self.eps <= 1.0) {
                    return Err(ConfigError::BadEps {
                        eps: self.eps,
                        kind,
                    });
                }
            }
            Basins | Sandwich => {
                if self.center_sinks.is_none() {
                    return Err(ConfigError::MissingCenter { kind });
                }
                if kind == Sandwich {
                    if !(self.eps > 0.0) {
                        return Err(ConfigError::BadEps {
                            eps: self.eps,
                            kind,
                        });
                    }
                    self.parse_observable()?;
                }
            }
            Weyl | Lyapunov | Simulate => {}
        }

        let needs_orbit = matches!(kind, Weyl | Lyapunov | Sandwich | Transitivity | Simulate);
        if needs_orbit && self.n == 0 {
            return Err(ConfigError::MustBePositive { field: "n" });
        }
        if kind == Basins && self.samples == 0 {
            return Err(ConfigError::MustBePositive { field: "samples" });
        }
        if self.stride == 0 {
            return Err(ConfigError::MustBePositive { field: "stride" });
        }

        let stochastic = match kind {
            Certify => false,
            Basins => !self.grid_sampler,
            _ => true,
        };
        if stochastic && self.seed.is_none() {
            return Err(ConfigError::MissingSeed { kind });
        }
        Ok(())
    }

    pub fn build_system(&self) -> Result<ProductSystem, ConfigError> {
        let [a, b, c, d] = self.matrix;
        let cat = CatMap::new(a, b, c, d)?;
        let rotations = self
            .rotations
            .iter()
            .map(|s| parse_angle(s))
            .collect::<Result<Vec<_>, _>>()?;
        let center = match self.center_sinks {
            None => None,
            Some(sinks) => Some(MorseSmaleMap::new(
                sinks,
                self.center_epsilon,
                TorusCoord::from_f64(self.center_phase),
            )?),
        };
        Ok(ProductSystem::new(cat, rotations, center)?)
    }

    /// Parse the sandwich observable "m,n,k_1..k_r[,j]" against the system
    /// shape: with a center factor the trailing entry is the center
    /// frequency.
    pub fn parse_observable(&self) -> Result<lattice_fourier::FrequencyIndex, ConfigError> {
        let parts: Result<Vec<i64>, _> = self
            .observable
            .split(',')
            .map(|p| p.trim().parse::<i64>())
            .collect();
        let parts = parts.map_err(|_| ConfigError::BadObservable(self.observable.clone()))?;
        let r = self.rotations.len();
        let with_center = self.center_sinks.is_some();
        let expected = 2 + r + usize::from(with_center);
        if parts.len() != expected {
            return Err(ConfigError::BadObservable(self.observable.clone()));
        }
        let (m, n) = (parts[0], parts[1]);
        let k = parts[2..2 + r].to_vec();
        let j = with_center.then(|| parts[2 + r]);
        Ok(lattice_fourier::FrequencyIndex::new(m, n, k, j))
    }
}

fn parse_angle(text: &str) -> Result<AngleSpec, ConfigError> {
    let bad = || ConfigError::BadAngle(text.to_string());
    let t = text.trim();
    if t.eq_ignore_ascii_case("golden") {
        return Ok(AngleSpec::golden());
    }
    if let Some(p) = t.strip_prefix("sqrt:") {
        let p: u64 = p.trim().parse().map_err(|_| bad())?;
        return AngleSpec::sqrt_prime(p).map_err(|_| bad());
    }
    let value: f64 = t.parse().map_err(|_| bad())?;
    AngleSpec::explicit(value).map_err(|_| bad())
}
