//! Datasets, decision stumps, weighted ensembles and margin bookkeeping.

use serde::{Deserialize, Serialize};

use crate::error::{BoostError, Result};

/// A dense feature matrix with `{-1, +1}` labels.
///
/// `true_labels` holds the labels before noise was injected. When absent the
/// observed labels are taken to be the true ones.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Vec<f64>,
    n: usize,
    d: usize,
    labels: Vec<i8>,
    true_labels: Option<Vec<i8>>,
    name: String,
}

fn check_labels(labels: &[i8]) -> Result<()> {
    match labels.iter().position(|&y| y != 1 && y != -1) {
        Some(i) => Err(BoostError::Structure(format!(
            "label {} at row {i} is not -1 or +1",
            labels[i]
        ))),
        None => Ok(()),
    }
}

impl Dataset {
    /// Builds a dataset from a row-major feature buffer of `labels.len()` rows.
    pub fn from_flat(
        name: impl Into<String>,
        features: Vec<f64>,
        d: usize,
        labels: Vec<i8>,
    ) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(BoostError::EmptyInput("dataset has no rows"));
        }
        if d == 0 {
            return Err(BoostError::Structure("dataset has no features".into()));
        }
        if features.len() != n * d {
            return Err(BoostError::Structure(format!(
                "feature buffer has {} values, expected {n} x {d}",
                features.len()
            )));
        }
        check_labels(&labels)?;
        Ok(Self { features, n, d, labels, true_labels: None, name: name.into() })
    }

    pub fn from_rows(name: impl Into<String>, rows: &[Vec<f64>], labels: Vec<i8>) -> Result<Self> {
        let d = rows.first().map_or(0, Vec::len);
        if let Some(i) = rows.iter().position(|r| r.len() != d) {
            return Err(BoostError::Structure(format!(
                "row {i} has {} features, expected {d}",
                rows[i].len()
            )));
        }
        if rows.len() != labels.len() {
            return Err(BoostError::Structure(format!(
                "{} rows but {} labels",
                rows.len(),
                labels.len()
            )));
        }
        Self::from_flat(name, rows.concat(), d, labels)
    }

    /// Attaches the pre-noise label channel.
    pub fn with_true_labels(mut self, true_labels: Vec<i8>) -> Result<Self> {
        if true_labels.len() != self.n {
            return Err(BoostError::Structure(format!(
                "true_labels has length {}, expected {}",
                true_labels.len(),
                self.n
            )));
        }
        check_labels(&true_labels)?;
        self.true_labels = Some(true_labels);
        Ok(self)
    }

    pub(crate) fn with_labels(mut self, labels: Vec<i8>) -> Self {
        debug_assert_eq!(labels.len(), self.n);
        self.labels = labels;
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.d..(i + 1) * self.d]
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.features[i * self.d + j]
    }

    pub fn features(&self) -> &[f64] {
        &self.features
    }

    pub fn labels(&self) -> &[i8] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> i8 {
        self.labels[i]
    }

    /// The explicit pre-noise channel, if one was attached.
    pub fn true_labels(&self) -> Option<&[i8]> {
        self.true_labels.as_deref()
    }

    /// Pre-noise labels, falling back to the observed labels.
    pub fn clean_labels(&self) -> &[i8] {
        self.true_labels.as_deref().unwrap_or(&self.labels)
    }

    /// `true` for every example whose observed label differs from its true label.
    pub fn noise_mask(&self) -> Vec<bool> {
        self.labels.iter().zip(self.clean_labels()).map(|(a, b)| a != b).collect()
    }

    /// Copies the selected rows (in the given order) into a new dataset.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(BoostError::EmptyInput("row selection is empty"));
        }
        let mut features = Vec::with_capacity(indices.len() * self.d);
        for &i in indices {
            features.extend_from_slice(self.row(i));
        }
        let labels = indices.iter().map(|&i| self.labels[i]).collect();
        let true_labels =
            self.true_labels.as_ref().map(|t| indices.iter().map(|&i| t[i]).collect());
        Ok(Self {
            features,
            n: indices.len(),
            d: self.d,
            labels,
            true_labels,
            name: self.name.clone(),
        })
    }
}

/// Single-feature threshold rule: `polarity` when `x[feature] >= threshold`,
/// `-polarity` otherwise.
///
/// A threshold of negative infinity makes the stump constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stump {
    pub feature: usize,
    pub threshold: f64,
    pub polarity: i8,
}

impl Stump {
    pub fn new(feature: usize, threshold: f64, polarity: i8) -> Self {
        debug_assert!(polarity == 1 || polarity == -1);
        Self { feature, threshold, polarity }
    }

    #[inline]
    pub fn eval(&self, value: f64) -> i8 {
        if value >= self.threshold {
            self.polarity
        } else {
            -self.polarity
        }
    }

    pub fn predict(&self, x: &[f64]) -> Result<i8> {
        x.get(self.feature).map(|&v| self.eval(v)).ok_or_else(|| {
            BoostError::Structure(format!(
                "stump reads feature {} but example has {} features",
                self.feature,
                x.len()
            ))
        })
    }

    pub fn is_constant(&self) -> bool {
        self.threshold == f64::NEG_INFINITY
    }

    /// `u_i = y_i h(x_i)` for every example of `data`.
    pub fn agreement(&self, data: &Dataset) -> Vec<f64> {
        (0..data.n())
            .map(|i| f64::from(data.label(i) * self.eval(data.value(i, self.feature))))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Member {
    pub alpha: f64,
    pub stump: Stump,
}

/// Ordered weighted vote of stumps.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Ensemble {
    members: Vec<Member>,
}

/// Sign with the `sign(0) = +1` convention.
#[inline]
pub fn sign(v: f64) -> i8 {
    if v >= 0.0 {
        1
    } else {
        -1
    }
}

impl Ensemble {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_members(members: Vec<Member>) -> Self {
        Self { members }
    }

    pub fn push(&mut self, alpha: f64, stump: Stump) {
        self.members.push(Member { alpha, stump });
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The first `k` members.
    pub fn prefix(&self, k: usize) -> Ensemble {
        Self { members: self.members[..k.min(self.members.len())].to_vec() }
    }

    pub fn l1_norm(&self) -> f64 {
        self.members.iter().map(|m| m.alpha.abs()).sum()
    }

    /// Largest feature index any member reads, plus one.
    pub fn min_features(&self) -> usize {
        self.members.iter().map(|m| m.stump.feature + 1).max().unwrap_or(0)
    }

    pub fn raw_score(&self, x: &[f64]) -> Result<f64> {
        if x.len() < self.min_features() {
            return Err(BoostError::Structure(format!(
                "ensemble reads {} features but example has {}",
                self.min_features(),
                x.len()
            )));
        }
        Ok(self.raw_score_unchecked(x))
    }

    #[inline]
    pub(crate) fn raw_score_unchecked(&self, x: &[f64]) -> f64 {
        self.members
            .iter()
            .map(|m| m.alpha * f64::from(m.stump.eval(x[m.stump.feature])))
            .sum()
    }

    pub fn predict(&self, x: &[f64]) -> Result<i8> {
        self.raw_score(x).map(sign)
    }

    /// `y * score(x) / ||alpha||_1`, in `[-1, 1]`.
    pub fn normalized_margin(&self, x: &[f64], y: i8) -> Result<f64> {
        let norm = self.l1_norm();
        if norm == 0.0 {
            return Err(BoostError::UndefinedMargin);
        }
        Ok(f64::from(y) * self.raw_score(x)? / norm)
    }

    /// Raw scores for every row of `data`.
    pub fn scores(&self, data: &Dataset) -> Result<Vec<f64>> {
        if data.d() < self.min_features() {
            return Err(BoostError::Structure(format!(
                "ensemble reads {} features but dataset has {}",
                self.min_features(),
                data.d()
            )));
        }
        Ok((0..data.n()).map(|i| self.raw_score_unchecked(data.row(i))).collect())
    }
}

/// Unnormalized margins `s_i = y_i * score(x_i)` maintained across rounds.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginState {
    margins: Vec<f64>,
    steps_since_sync: usize,
}

impl MarginState {
    /// Full recomputation happens at least this often.
    pub const RESYNC_EVERY: usize = 50;

    pub fn zeros(n: usize) -> Self {
        Self { margins: vec![0.0; n], steps_since_sync: 0 }
    }

    pub fn from_ensemble(ensemble: &Ensemble, data: &Dataset) -> Self {
        let margins = (0..data.n())
            .map(|i| f64::from(data.label(i)) * ensemble.raw_score_unchecked(data.row(i)))
            .collect();
        Self { margins, steps_since_sync: 0 }
    }

    pub fn margins(&self) -> &[f64] {
        &self.margins
    }

    /// Adds `alpha * u_i` to each margin.
    pub fn step(&mut self, alpha: f64, u: &[f64]) {
        for (s, &ui) in self.margins.iter_mut().zip(u) {
            *s += alpha * ui;
        }
        self.steps_since_sync += 1;
    }

    /// Recomputes from scratch when the periodic resync is due.
    pub fn maybe_resync(&mut self, ensemble: &Ensemble, data: &Dataset) {
        if self.steps_since_sync >= Self::RESYNC_EVERY {
            *self = Self::from_ensemble(ensemble, data);
        }
    }

    /// Fraction of examples the ensemble misclassifies under `sign(0) = +1`,
    /// judged against the labels the margins were built from.
    pub fn training_error(&self, labels: &[i8]) -> f64 {
        let wrong = self
            .margins
            .iter()
            .zip(labels)
            .filter(|(&s, &y)| sign(f64::from(y) * s) != y)
            .count();
        wrong as f64 / self.margins.len() as f64
    }

    /// Same, against another label channel (e.g. pre-noise labels).
    pub fn error_against(&self, labels: &[i8], other: &[i8]) -> f64 {
        let wrong = self
            .margins
            .iter()
            .zip(labels.iter().zip(other))
            .filter(|(&s, (&y, &z))| sign(f64::from(y) * s) != z)
            .count();
        wrong as f64 / self.margins.len() as f64
    }
}

/// Equal-width histogram over `[lo, hi]`. Bins are left-closed and
/// right-open except the last, which is closed; out-of-range values fall
/// into the end bins.
pub fn margin_histogram(margins: &[f64], bins: usize, lo: f64, hi: f64) -> Result<Vec<usize>> {
    if margins.is_empty() {
        return Err(BoostError::EmptyInput("margin vector is empty"));
    }
    if bins == 0 || !(lo < hi) {
        return Err(BoostError::Parameter(format!(
            "histogram needs bins >= 1 and lo < hi, got {bins} bins over [{lo}, {hi}]"
        )));
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0; bins];
    for &m in margins {
        let idx = if m.is_nan() || m <= lo {
            0
        } else {
            (((m - lo) / width).floor() as usize).min(bins - 1)
        };
        counts[idx] += 1;
    }
    Ok(counts)
}
