//! Experiment configuration: a TOML file with a fixed schema.
//!
//! Top-level keys describe the sweep; every `[[dataset]]` table adds one
//! dataset family with its own size axis. A full annotated example lives in
//! `configs/example.toml` at the repository root.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::boosters::{Algorithm, BoosterConfig};
use crate::error::{BoostError, Result};

const TOP_KEYS: &[&str] = &[
    "name",
    "output",
    "seed",
    "threads",
    "repeats",
    "max_iters",
    "algorithms",
    "etas",
    "thetas",
    "epsilons",
    "epsilon_offsets",
    "wall_time",
    "save_models",
    "booster",
    "margins",
    "potentials",
    "dataset",
];
const BOOSTER_KEYS: &[&str] =
    &["sigma_f", "eps_increment", "max_tries", "gamma", "bbm_rounds", "dt_min", "start_epsilon"];
const MARGIN_KEYS: &[&str] = &["iterations", "repeats"];
const POTENTIAL_KEYS: &[&str] = &["kinds", "epsilon", "theta", "sigma_f", "s_min", "s_max", "s_points", "t_values"];
const LS_KEYS: &[&str] = &["kind", "name", "deltas", "n_train", "n_test"];
const FILE_KEYS: &[&str] =
    &["kind", "name", "paths", "label_column", "positive", "noise", "keep_fracs", "train_frac", "test_frac"];

/// One column of the algorithm axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Variant {
    pub algorithm: Algorithm,
    pub adaptive: bool,
}

impl Variant {
    pub fn parse(label: &str) -> Result<Self> {
        let up = label.to_ascii_uppercase();
        let (algorithm, adaptive) = match up.as_str() {
            "BBA" => (Algorithm::Brown, true),
            "RBA" => (Algorithm::Robust, true),
            other => (other.parse::<Algorithm>()?, false),
        };
        Ok(Self { algorithm, adaptive })
    }

    pub fn label(&self) -> String {
        match (self.algorithm, self.adaptive) {
            (Algorithm::Brown, true) => "BBA".into(),
            (Algorithm::Robust, true) => "RBA".into(),
            (a, _) => a.code().into(),
        }
    }

    /// Fixed-goal BB or RB: swept over the epsilon axis.
    pub fn uses_fixed_epsilon(&self) -> bool {
        self.algorithm.is_time_based() && !self.adaptive
    }

    /// Only RobustBoost has a margin goal; everything else runs once at theta 0.
    pub fn uses_theta(&self) -> bool {
        self.algorithm == Algorithm::Robust
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum NoiseMode {
    /// Flip each label with probability eta.
    #[default]
    Symmetric,
    /// Flip only negatives, with probability eta.
    Negatives,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DatasetSpec {
    Ls {
        #[serde(default = "ls_name")]
        name: String,
        deltas: Vec<usize>,
        n_train: Vec<usize>,
        #[serde(default = "default_n_test")]
        n_test: usize,
    },
    File {
        name: Option<String>,
        paths: Vec<PathBuf>,
        /// 0-based; the last column when absent.
        label_column: Option<usize>,
        positive: Vec<i64>,
        #[serde(default)]
        noise: NoiseMode,
        #[serde(default = "default_keep")]
        keep_fracs: Vec<f64>,
        #[serde(default = "default_train_frac")]
        train_frac: f64,
        #[serde(default = "default_test_frac")]
        test_frac: f64,
    },
}

impl DatasetSpec {
    pub fn name(&self) -> String {
        match self {
            Self::Ls { name, .. } => name.clone(),
            Self::File { name: Some(n), .. } => n.clone(),
            Self::File { paths, .. } => paths
                .first()
                .and_then(|p| p.file_stem())
                .map_or_else(|| "file".to_string(), |s| s.to_string_lossy().into_owned()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize, Default)]
pub struct BoosterOptions {
    pub sigma_f: Option<f64>,
    pub eps_increment: Option<f64>,
    pub max_tries: Option<usize>,
    pub gamma: Option<f64>,
    /// BBM horizon; defaults to `max_iters`.
    pub bbm_rounds: Option<usize>,
    pub dt_min: Option<f64>,
    /// Where BBA/RBA start their goal.
    pub start_epsilon: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct MarginOptions {
    /// Defaults to 10, 50, 100 and 200, cut at `max_iters`. Empty disables snapshots.
    pub iterations: Option<Vec<usize>>,
    #[serde(default = "default_snapshot_repeats")]
    pub repeats: Vec<usize>,
}

impl Default for MarginOptions {
    fn default() -> Self {
        Self { iterations: None, repeats: default_snapshot_repeats() }
    }
}

impl MarginOptions {
    pub fn snapshot_iterations(&self, max_iters: usize) -> Vec<usize> {
        match &self.iterations {
            Some(list) => list.clone(),
            None => default_snapshots().into_iter().filter(|&i| i <= max_iters).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct PotentialOptions {
    #[serde(default = "default_kinds")]
    pub kinds: Vec<String>,
    #[serde(default = "default_grid_epsilon")]
    pub epsilon: f64,
    #[serde(default)]
    pub theta: f64,
    #[serde(default = "default_sigma_f")]
    pub sigma_f: f64,
    #[serde(default = "default_s_min")]
    pub s_min: f64,
    #[serde(default = "default_s_max")]
    pub s_max: f64,
    #[serde(default = "default_s_points")]
    pub s_points: usize,
    #[serde(default = "default_t_values")]
    pub t_values: Vec<f64>,
}

impl Default for PotentialOptions {
    fn default() -> Self {
        Self {
            kinds: default_kinds(),
            epsilon: default_grid_epsilon(),
            theta: 0.0,
            sigma_f: default_sigma_f(),
            s_min: default_s_min(),
            s_max: default_s_max(),
            s_points: default_s_points(),
            t_values: default_t_values(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct ExperimentConfig {
    #[serde(default = "default_name")]
    pub name: String,
    /// Output directory; `results/<name>` under the working directory when absent.
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
    pub threads: Option<usize>,
    #[serde(default = "default_repeats")]
    pub repeats: usize,
    #[serde(default = "default_iters")]
    pub max_iters: usize,
    pub algorithms: Vec<String>,
    #[serde(default = "default_zero_axis")]
    pub etas: Vec<f64>,
    #[serde(default = "default_zero_axis")]
    pub thetas: Vec<f64>,
    /// Absolute goals for fixed BB/RB.
    #[serde(default)]
    pub epsilons: Vec<f64>,
    /// Goals relative to the cell's noise rate, `eta + offset`.
    #[serde(default)]
    pub epsilon_offsets: Vec<f64>,
    /// Write elapsed milliseconds; off makes every file byte-reproducible.
    #[serde(default = "default_true")]
    pub wall_time: bool,
    #[serde(default)]
    pub save_models: bool,
    #[serde(default)]
    pub booster: BoosterOptions,
    #[serde(default)]
    pub margins: MarginOptions,
    pub potentials: Option<PotentialOptions>,
    #[serde(rename = "dataset", default)]
    pub datasets: Vec<DatasetSpec>,
}

fn ls_name() -> String {
    "ls".into()
}
fn default_n_test() -> usize {
    4000
}
fn default_keep() -> Vec<f64> {
    vec![1.0]
}
fn default_train_frac() -> f64 {
    0.7
}
fn default_test_frac() -> f64 {
    0.2
}
fn default_snapshots() -> Vec<usize> {
    vec![10, 50, 100, 200]
}
fn default_snapshot_repeats() -> Vec<usize> {
    vec![0]
}
fn default_kinds() -> Vec<String> {
    ["exp", "logit", "brown", "robust"].iter().map(|s| s.to_string()).collect()
}
fn default_grid_epsilon() -> f64 {
    0.1
}
fn default_sigma_f() -> f64 {
    0.001
}
fn default_s_min() -> f64 {
    -3.0
}
fn default_s_max() -> f64 {
    3.0
}
fn default_s_points() -> usize {
    121
}
fn default_t_values() -> Vec<f64> {
    vec![0.0, 0.25, 0.5, 0.75, 0.9]
}
fn default_name() -> String {
    "experiment".into()
}
fn default_repeats() -> usize {
    10
}
fn default_iters() -> usize {
    200
}
fn default_zero_axis() -> Vec<f64> {
    vec![0.0]
}
fn default_true() -> bool {
    true
}

fn unknown_in(table: &toml::Table, known: &[&str], prefix: &str, out: &mut Vec<String>) {
    for key in table.keys() {
        if !known.contains(&key.as_str()) {
            out.push(format!("{prefix}{key}"));
        }
    }
}

/// Every key the schema does not know, with its table path.
fn unknown_keys(root: &toml::Table) -> Vec<String> {
    let mut out = Vec::new();
    unknown_in(root, TOP_KEYS, "", &mut out);
    for (section, known) in [("booster", BOOSTER_KEYS), ("margins", MARGIN_KEYS), ("potentials", POTENTIAL_KEYS)] {
        if let Some(toml::Value::Table(t)) = root.get(section) {
            unknown_in(t, known, &format!("{section}."), &mut out);
        }
    }
    if let Some(toml::Value::Array(items)) = root.get("dataset") {
        for (k, item) in items.iter().enumerate() {
            if let toml::Value::Table(t) = item {
                let known = match t.get("kind").and_then(|v| v.as_str()) {
                    Some("file") => FILE_KEYS,
                    _ => LS_KEYS,
                };
                unknown_in(t, known, &format!("dataset[{k}]."), &mut out);
            }
        }
    }
    out
}

impl ExperimentConfig {
    /// Parses and validates a config string.
    pub fn from_toml(text: &str) -> Result<Self> {
        let root: toml::Table = text.parse().map_err(|e: toml::de::Error| BoostError::Config(e.to_string()))?;
        let unknown = unknown_keys(&root);
        if !unknown.is_empty() {
            return Err(BoostError::Config(format!("unknown keys: {}", unknown.join(", "))));
        }
        let cfg: Self = toml::from_str(text).map_err(|e| BoostError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config file. Relative dataset paths and an explicit output
    /// directory resolve against the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg = Self::from_toml(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        let resolve = |p: &Path| if p.is_absolute() { p.to_path_buf() } else { base.join(p) };
        cfg.output = cfg.output.as_deref().map(resolve);
        for ds in &mut cfg.datasets {
            if let DatasetSpec::File { paths, .. } = ds {
                for p in paths.iter_mut() {
                    *p = resolve(p);
                }
            }
        }
        Ok(cfg)
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output.clone().unwrap_or_else(|| Path::new("results").join(&self.name))
    }

    pub fn variants(&self) -> Result<Vec<Variant>> {
        self.algorithms.iter().map(|a| Variant::parse(a)).collect()
    }

    /// Fixed goals for one noise rate, absolute values first.
    pub fn fixed_epsilons(&self, eta: f64) -> Vec<f64> {
        let mut out = self.epsilons.clone();
        out.extend(self.epsilon_offsets.iter().map(|o| round_goal(eta + o)));
        out
    }

    /// Booster settings for one run. `epsilon` is ignored by the convex algorithms.
    pub fn booster_config(&self, variant: Variant, theta: f64, epsilon: f64) -> BoosterConfig {
        let mut c = BoosterConfig::new(variant.algorithm).with_max_iters(self.max_iters);
        let o = &self.booster;
        c.adaptive_epsilon = variant.adaptive;
        c.epsilon = if variant.adaptive { o.start_epsilon.unwrap_or(0.0) } else { epsilon };
        c.theta = if variant.uses_theta() { theta } else { 0.0 };
        c.sigma_f = o.sigma_f.unwrap_or(c.sigma_f);
        c.eps_increment = o.eps_increment.unwrap_or(c.eps_increment);
        c.max_tries = o.max_tries.unwrap_or(c.max_tries);
        c.gamma = o.gamma.unwrap_or(c.gamma);
        c.bbm_rounds = o.bbm_rounds.unwrap_or(self.max_iters);
        c.solver.dt_min = o.dt_min.unwrap_or(c.solver.dt_min);
        c
    }

    /// Collects every problem at once.
    pub fn validate(&self) -> Result<()> {
        let mut errs: Vec<String> = Vec::new();
        let empty = |name: &str, len: usize, errs: &mut Vec<String>| {
            if len == 0 {
                errs.push(format!("sweep axis `{name}` is empty"));
            }
        };
        empty("algorithms", self.algorithms.len(), &mut errs);
        empty("etas", self.etas.len(), &mut errs);
        empty("thetas", self.thetas.len(), &mut errs);
        empty("dataset", self.datasets.len(), &mut errs);
        if self.repeats == 0 {
            errs.push("repeats must be at least 1".into());
        }
        if self.max_iters == 0 {
            errs.push("max_iters must be at least 1".into());
        }
        if self.threads == Some(0) {
            errs.push("threads must be at least 1".into());
        }
        for &eta in &self.etas {
            if !(0.0..0.5).contains(&eta) {
                errs.push(format!("eta {eta} outside [0, 0.5)"));
            }
        }
        for &theta in &self.thetas {
            if !(theta >= 0.0) {
                errs.push(format!("theta {theta} must be >= 0"));
            }
        }
        let variants: Vec<Variant> = self
            .algorithms
            .iter()
            .filter_map(|a| match Variant::parse(a) {
                Ok(v) => Some(v),
                Err(_) => {
                    errs.push(format!("unknown algorithm {a:?} (expected ADB, LLB, BB, RB, BBA, RBA or BBM)"));
                    None
                }
            })
            .collect();
        if variants.iter().any(|v| v.uses_fixed_epsilon()) {
            if self.epsilons.is_empty() && self.epsilon_offsets.is_empty() {
                errs.push("fixed BB/RB need `epsilons` or `epsilon_offsets`".into());
            }
            for &eta in &self.etas {
                for eps in self.fixed_epsilons(eta) {
                    if !(eps > 0.0 && eps < 0.5) {
                        errs.push(format!("epsilon {eps} at eta {eta} outside (0, 0.5)"));
                    }
                }
            }
        }
        for it in self.margins.iterations.iter().flatten().copied() {
            if it == 0 || it > self.max_iters {
                errs.push(format!("margin snapshot iteration {it} outside [1, {}]", self.max_iters));
            }
        }
        for (k, ds) in self.datasets.iter().enumerate() {
            match ds {
                DatasetSpec::Ls { deltas, n_train, n_test, .. } => {
                    empty(&format!("dataset[{k}].deltas"), deltas.len(), &mut errs);
                    empty(&format!("dataset[{k}].n_train"), n_train.len(), &mut errs);
                    if n_train.contains(&0) || *n_test == 0 {
                        errs.push(format!("dataset[{k}]: sizes must be positive"));
                    }
                    if deltas.contains(&0) || deltas.iter().any(|&d| 10 + d > 21) {
                        errs.push(format!("dataset[{k}]: deltas must lie in 1..=11"));
                    }
                }
                DatasetSpec::File { paths, positive, keep_fracs, train_frac, test_frac, .. } => {
                    empty(&format!("dataset[{k}].paths"), paths.len(), &mut errs);
                    empty(&format!("dataset[{k}].positive"), positive.len(), &mut errs);
                    empty(&format!("dataset[{k}].keep_fracs"), keep_fracs.len(), &mut errs);
                    if keep_fracs.iter().any(|&f| !(f > 0.0 && f <= 1.0)) {
                        errs.push(format!("dataset[{k}]: keep_fracs must lie in (0, 1]"));
                    }
                    if !(*train_frac > 0.0 && *test_frac > 0.0 && train_frac + test_frac <= 1.0) {
                        errs.push(format!("dataset[{k}]: bad split {train_frac} / {test_frac}"));
                    }
                }
            }
        }
        let o = &self.booster;
        if o.max_tries == Some(0) {
            errs.push("booster.max_tries must be at least 1".into());
        }
        if o.start_epsilon.is_some_and(|e| !(0.0..0.5).contains(&e)) {
            errs.push("booster.start_epsilon outside [0, 0.5)".into());
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(BoostError::Config(errs.join("; ")))
        }
    }
}

/// Keeps `eta + offset` free of float dust so 0.1 + 0.02 prints as 0.12.
fn round_goal(x: f64) -> f64 {
    (x * 1e9).round() / 1e9
}
