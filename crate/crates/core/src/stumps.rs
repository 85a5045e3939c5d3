//! Weighted decision-stump training.
//!
//! The trainer presorts every feature column once; each call then sweeps the
//! sorted order with a running prefix sum, so a round costs `O(d N)` after the
//! `O(d N log N)` setup. Candidate thresholds are a below-minimum sentinel
//! (negative infinity, giving a constant rule) plus the midpoints between
//! consecutive distinct values.

use crate::error::{BoostError, Result};
use crate::model::{Dataset, Stump};

/// Presorted view of a dataset for repeated stump fitting under changing weights.
#[derive(Debug, Clone)]
pub struct StumpTrainer<'a> {
    data: &'a Dataset,
    // per feature: row indices sorted by value (ties by index)
    orders: Vec<Vec<usize>>,
}

/// Best stump for one weight vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FittedStump {
    pub stump: Stump,
    /// `sum_i w_i y_i h(x_i) / sum_i w_i`, non-negative by choice of polarity.
    pub edge: f64,
}

impl FittedStump {
    /// Weighted error `(1 - edge) / 2`.
    pub fn weighted_error(&self) -> f64 {
        (1.0 - self.edge) / 2.0
    }
}

impl<'a> StumpTrainer<'a> {
    pub fn new(data: &'a Dataset) -> Self {
        let orders = (0..data.d())
            .map(|j| {
                let mut idx: Vec<usize> = (0..data.n()).collect();
                idx.sort_by(|&a, &b| data.value(a, j).total_cmp(&data.value(b, j)).then(a.cmp(&b)));
                idx
            })
            .collect();
        Self { data, orders }
    }

    pub fn data(&self) -> &Dataset {
        self.data
    }

    /// Maximizes `|sum_i w_i y_i h(x_i)|` over feature, threshold and polarity.
    ///
    /// Ties go to the lowest feature index, then the lowest threshold, then
    /// polarity `+1`.
    pub fn fit(&self, weights: &[f64]) -> Result<FittedStump> {
        let data = self.data;
        if weights.len() != data.n() {
            return Err(BoostError::Structure(format!(
                "{} weights for {} examples",
                weights.len(),
                data.n()
            )));
        }
        if weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(BoostError::Parameter("weights must be finite and non-negative".into()));
        }
        let total_weight: f64 = weights.iter().sum();
        if !(total_weight > 0.0) {
            return Err(BoostError::DegenerateWeights);
        }
        let signed: Vec<f64> =
            weights.iter().zip(data.labels()).map(|(w, &y)| w * f64::from(y)).collect();
        let total: f64 = signed.iter().sum();

        let mut best_abs = f64::NEG_INFINITY;
        let mut best = Stump::new(0, f64::NEG_INFINITY, 1);
        for (j, order) in self.orders.iter().enumerate() {
            let mut consider = |corr: f64, threshold: f64| {
                if corr.abs() > best_abs {
                    best_abs = corr.abs();
                    best = Stump::new(j, threshold, if corr >= 0.0 { 1 } else { -1 });
                }
            };
            consider(total, f64::NEG_INFINITY);
            let mut prefix = 0.0;
            for k in 0..order.len() - 1 {
                let (a, b) = (order[k], order[k + 1]);
                prefix += signed[a];
                let (va, vb) = (data.value(a, j), data.value(b, j));
                if va < vb {
                    consider(total - 2.0 * prefix, va + (vb - va) / 2.0);
                }
            }
        }
        Ok(FittedStump { stump: best, edge: best_abs / total_weight })
    }
}

/// One-shot convenience wrapper around [`StumpTrainer`].
pub fn train_stump(data: &Dataset, weights: &[f64]) -> Result<FittedStump> {
    StumpTrainer::new(data).fit(weights)
}
