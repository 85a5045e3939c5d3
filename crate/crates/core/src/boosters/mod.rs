//! Training loops: AdaBoost, log-loss boosting, BrownBoost, RobustBoost (each
//! optionally with the adaptive error goal) and Boost-by-Majority.

mod adaboost;
mod adaptive;
mod bbm;
mod brownrobust;
mod logloss;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{BoostError, Result};
use crate::model::{Dataset, Ensemble, MarginState, Stump};
use crate::potentials::PotentialKind;
use crate::solver::SolverConfig;

pub use adaboost::{adaboost_alpha, train_adaboost, ADABOOST_MIN_ERROR};
pub use adaptive::{AdaptiveEpsilon, EpsilonDecision};
pub use bbm::train_bbm;
pub use brownrobust::train_brownrobust;
pub use logloss::{line_search_logloss, train_logloss};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "ADB")]
    AdaBoost,
    #[serde(rename = "LLB")]
    LogLoss,
    #[serde(rename = "BB")]
    Brown,
    #[serde(rename = "RB")]
    Robust,
    #[serde(rename = "BBM")]
    Bbm,
}

impl Algorithm {
    pub fn code(&self) -> &'static str {
        match self {
            Self::AdaBoost => "ADB",
            Self::LogLoss => "LLB",
            Self::Brown => "BB",
            Self::Robust => "RB",
            Self::Bbm => "BBM",
        }
    }

    pub fn is_time_based(&self) -> bool {
        matches!(self, Self::Brown | Self::Robust)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Algorithm {
    type Err = BoostError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "ADB" | "ADABOOST" => Ok(Self::AdaBoost),
            "LLB" | "LOGLOSS" => Ok(Self::LogLoss),
            "BB" | "BROWN" | "BROWNBOOST" => Ok(Self::Brown),
            "RB" | "ROBUST" | "ROBUSTBOOST" => Ok(Self::Robust),
            "BBM" => Ok(Self::Bbm),
            _ => Err(BoostError::Parameter(format!("unknown algorithm {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoosterConfig {
    pub algorithm: Algorithm,
    pub max_iters: usize,
    /// Error goal for BrownBoost/RobustBoost; the starting value in adaptive mode.
    pub epsilon: f64,
    /// RobustBoost margin goal. BrownBoost always uses 0.
    pub theta: f64,
    /// RobustBoost final width.
    pub sigma_f: f64,
    /// BBM edge assumption.
    pub gamma: f64,
    /// BBM horizon `T`.
    pub bbm_rounds: usize,
    pub adaptive_epsilon: bool,
    pub eps_increment: f64,
    pub max_tries: usize,
    pub solver: SolverConfig,
}

impl BoosterConfig {
    pub fn new(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            max_iters: 200,
            epsilon: 0.1,
            theta: 0.0,
            sigma_f: 0.001,
            gamma: 0.1,
            bbm_rounds: 200,
            adaptive_epsilon: false,
            eps_increment: 0.01,
            max_tries: 1,
            solver: SolverConfig::default(),
        }
    }

    /// BrownBoost or RobustBoost starting from `epsilon = 0` with the adaptive goal.
    pub fn adaptive(algorithm: Algorithm) -> Self {
        Self { epsilon: 0.0, adaptive_epsilon: true, ..Self::new(algorithm) }
    }

    pub fn with_max_iters(mut self, iters: usize) -> Self {
        self.max_iters = iters;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }

    /// Short label: ADB, LLB, BB, RB, BBA, RBA or BBM.
    pub fn label(&self) -> String {
        match (self.algorithm, self.adaptive_epsilon) {
            (Algorithm::Brown, true) => "BBA".into(),
            (Algorithm::Robust, true) => "RBA".into(),
            (a, _) => a.code().into(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(BoostError::Parameter(m));
        if self.max_iters == 0 {
            return bad("max_iters must be at least 1".into());
        }
        if self.adaptive_epsilon && !self.algorithm.is_time_based() {
            return bad(format!("adaptive epsilon requires BB or RB, not {}", self.algorithm));
        }
        if self.algorithm.is_time_based() {
            if !(0.0..0.5).contains(&self.epsilon) {
                return bad(format!("epsilon must lie in [0, 1/2), got {}", self.epsilon));
            }
            if !self.adaptive_epsilon && self.epsilon == 0.0 {
                return bad("a fixed epsilon must be positive".into());
            }
            if !(self.eps_increment > 0.0) {
                return bad("eps_increment must be positive".into());
            }
            if self.max_tries == 0 {
                return bad("max_tries must be at least 1".into());
            }
        }
        if self.algorithm == Algorithm::Robust {
            if !(self.theta >= 0.0) {
                return bad(format!("theta must be >= 0, got {}", self.theta));
            }
            if !(self.sigma_f > 0.0) {
                return bad(format!("sigma_f must be > 0, got {}", self.sigma_f));
            }
        }
        if self.algorithm == Algorithm::Bbm {
            if self.bbm_rounds == 0 {
                return bad("BBM needs at least one round".into());
            }
            if !(self.gamma > 0.0 && self.gamma < 0.5) {
                return bad(format!("gamma must lie in (0, 1/2), got {}", self.gamma));
            }
        }
        Ok(())
    }

    /// Potential for the time-based algorithms at a given error goal.
    pub fn potential(&self, epsilon: f64) -> Result<PotentialKind> {
        match self.algorithm {
            Algorithm::Brown => PotentialKind::brown(epsilon),
            Algorithm::Robust => PotentialKind::robust(epsilon, self.theta, self.sigma_f),
            Algorithm::AdaBoost => Ok(PotentialKind::Exp),
            Algorithm::LogLoss => Ok(PotentialKind::Logit),
            Algorithm::Bbm => Err(BoostError::Parameter("BBM has a discrete potential table".into())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Completed,
    ReachedT1,
    StuckExhausted,
}

impl RunStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Completed => "completed",
            Self::ReachedT1 => "reached_t1",
            Self::StuckExhausted => "stuck_exhausted",
        }
    }
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// What happened in one time-based round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    /// Convex or BBM round; no solver involved.
    Direct,
    Converged,
    Stuck,
    ReachedFinalTime,
    SolverFailure,
    /// No usable potential at the current epsilon, or no stump with an edge.
    Skipped,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub iter: usize,
    /// Time after the round.
    pub t: f64,
    pub dt: f64,
    pub alpha: f64,
    pub epsilon: f64,
    pub edge: f64,
    pub stump: Option<Stump>,
    pub step: StepKind,
    /// Ensemble size after the round.
    pub members: usize,
    /// Error against the training labels after the round.
    pub train_error: f64,
    /// Total potential after the round, for the time-based algorithms.
    pub potential: Option<f64>,
    /// BBM only: the stump's edge fell below the assumed `gamma`.
    pub weak_edge: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoostRun {
    pub label: String,
    pub config: BoosterConfig,
    pub ensemble: Ensemble,
    pub trace: Vec<IterationRecord>,
    pub final_time: f64,
    /// Training error against the observed labels.
    pub train_error: f64,
    /// Training error against the true labels (`E_f`).
    pub final_train_error: f64,
    pub final_epsilon: f64,
    pub status: RunStatus,
}

impl BoostRun {
    pub fn iterations(&self) -> usize {
        self.trace.len()
    }

    /// Ensemble as it stood after `iter` rounds (1-based; clamped to the trace).
    pub fn ensemble_at(&self, iter: usize) -> Ensemble {
        match iter.min(self.trace.len()) {
            0 => Ensemble::new(),
            k => self.ensemble.prefix(self.trace[k - 1].members),
        }
    }

    /// Potential in effect after round `iter`, for describing snapshots.
    pub fn potential_at(&self, iter: usize) -> Option<(PotentialKind, f64)> {
        let k = iter.min(self.trace.len());
        if k == 0 {
            return None;
        }
        let rec = &self.trace[k - 1];
        self.config.potential(rec.epsilon).ok().map(|p| (p, rec.t))
    }
}

/// Shared bookkeeping for every training loop.
pub(crate) struct Session<'a> {
    pub data: &'a Dataset,
    pub config: BoosterConfig,
    pub ensemble: Ensemble,
    pub margins: MarginState,
    pub trace: Vec<IterationRecord>,
}

impl<'a> Session<'a> {
    pub fn new(data: &'a Dataset, config: &BoosterConfig) -> Self {
        Self {
            data,
            config: config.clone(),
            ensemble: Ensemble::new(),
            margins: MarginState::zeros(data.n()),
            trace: Vec::new(),
        }
    }

    pub fn add(&mut self, alpha: f64, stump: Stump, u: &[f64]) {
        self.ensemble.push(alpha, stump);
        self.margins.step(alpha, u);
        self.margins.maybe_resync(&self.ensemble, self.data);
    }

    pub fn train_error(&self) -> f64 {
        self.margins.training_error(self.data.labels())
    }

    pub fn finish(self, status: RunStatus, final_time: f64, final_epsilon: f64) -> BoostRun {
        let labels = self.data.labels();
        let train_error = self.margins.training_error(labels);
        let final_train_error = self.margins.error_against(labels, self.data.clean_labels());
        BoostRun {
            label: self.config.label(),
            config: self.config,
            ensemble: self.ensemble,
            trace: self.trace,
            final_time,
            train_error,
            final_train_error,
            final_epsilon,
            status,
        }
    }
}

/// Runs the configured algorithm on `data`.
pub fn train(data: &Dataset, config: &BoosterConfig) -> Result<BoostRun> {
    config.validate()?;
    match config.algorithm {
        Algorithm::AdaBoost => train_adaboost(data, config),
        Algorithm::LogLoss => train_logloss(data, config),
        Algorithm::Brown | Algorithm::Robust => train_brownrobust(data, config),
        Algorithm::Bbm => train_bbm(data, config),
    }
}
