use serde::Serialize;

use crate::boosters::{BoostRun, RunStatus};
use crate::error::{BoostError, Result};
use crate::model::{Dataset, Ensemble};
use crate::special::student_t_two_sided;

/// Which label channel a score is computed against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Against {
    /// The (possibly noisy) training labels.
    Labels,
    /// The pre-noise labels.
    TrueLabels,
}

fn channel(data: &Dataset, against: Against) -> Result<&[i8]> {
    match against {
        Against::Labels => Ok(data.labels()),
        Against::TrueLabels => data
            .true_labels()
            .ok_or_else(|| BoostError::Parameter(format!("dataset {} has no true labels", data.name()))),
    }
}

/// Fraction of examples the ensemble misclassifies.
pub fn error_rate(ensemble: &Ensemble, data: &Dataset, against: Against) -> Result<f64> {
    let labels = channel(data, against)?;
    if data.n() == 0 {
        return Err(BoostError::EmptyInput("dataset"));
    }
    let scores = ensemble.scores(data)?;
    let wrong = scores.iter().zip(labels).filter(|(&s, &y)| crate::model::sign(s) != y).count();
    Ok(wrong as f64 / data.n() as f64)
}

/// Rank-based AUC of `scores`, ties counted as one half.
pub fn auc_from_scores(scores: &[f64], labels: &[i8]) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(BoostError::Structure(format!("{} scores for {} labels", scores.len(), labels.len())));
    }
    let pos = labels.iter().filter(|&&y| y > 0).count();
    let neg = labels.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(BoostError::UndefinedAuc);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut rank_sum = 0.0;
    let mut k = 0;
    while k < order.len() {
        let mut end = k + 1;
        while end < order.len() && scores[order[end]] == scores[order[k]] {
            end += 1;
        }
        // ranks k+1..=end share their mean
        let midrank = (k + 1 + end) as f64 / 2.0;
        rank_sum += midrank * order[k..end].iter().filter(|&&i| labels[i] > 0).count() as f64;
        k = end;
    }
    let (p, q) = (pos as f64, neg as f64);
    Ok((rank_sum - p * (p + 1.0) / 2.0) / (p * q))
}

/// AUC of the ensemble's raw score against the dataset's labels.
pub fn auc(ensemble: &Ensemble, data: &Dataset) -> Result<f64> {
    auc_from_scores(&ensemble.scores(data)?, data.labels())
}

/// Collapses the ensemble to one coefficient per feature (`alpha * polarity`).
/// Constant stumps have no feature and are left out.
pub fn collapse(ensemble: &Ensemble, d: usize) -> Vec<f64> {
    let mut v = vec![0.0; d];
    for m in ensemble.members() {
        if !m.stump.is_constant() && m.stump.feature < d {
            v[m.stump.feature] += m.alpha * m.stump.polarity as f64;
        }
    }
    v
}

/// Euclidean cosine between the collapsed ensemble and `truth`.
pub fn cosine_to_true(ensemble: &Ensemble, truth: &[f64]) -> Result<f64> {
    let v = collapse(ensemble, truth.len());
    let dot: f64 = v.iter().zip(truth).map(|(a, b)| a * b).sum();
    let nv = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    let nt = truth.iter().map(|a| a * a).sum::<f64>().sqrt();
    if nv == 0.0 || nt == 0.0 {
        return Err(BoostError::UndefinedCosine);
    }
    Ok((dot / (nv * nt)).clamp(-1.0, 1.0))
}

/// Angle in radians between the collapsed ensemble and `truth`.
pub fn angle_to_true(ensemble: &Ensemble, truth: &[f64]) -> Result<f64> {
    cosine_to_true(ensemble, truth).map(f64::acos)
}

/// Paired t statistic and two-sided p-value.
pub fn paired_ttest(a: &[f64], b: &[f64]) -> Result<(f64, f64)> {
    if a.len() != b.len() {
        return Err(BoostError::Structure(format!("paired samples of length {} and {}", a.len(), b.len())));
    }
    if a.len() < 2 {
        return Err(BoostError::DegenerateTest("need at least two pairs"));
    }
    let n = a.len() as f64;
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let mean = diffs.iter().sum::<f64>() / n;
    let var = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1.0);
    if !(var > 0.0) {
        return Err(BoostError::DegenerateTest("differences have zero variance"));
    }
    let t = mean / (var / n).sqrt();
    Ok((t, student_t_two_sided(t, n - 1.0)))
}

/// Final-state diagnostics of one run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub t_f: f64,
    pub e_f: f64,
    pub status: RunStatus,
    pub iterations: usize,
}

pub fn run_summary(run: &BoostRun) -> RunSummary {
    RunSummary {
        t_f: run.final_time,
        e_f: run.final_train_error,
        status: run.status,
        iterations: run.iterations(),
    }
}
