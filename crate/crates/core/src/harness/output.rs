//! Frozen CSV schemas and the per-run file artifacts.

use std::path::Path;

use crate::boosters::BoostRun;
use crate::error::{BoostError, Result};
use crate::model::{Dataset, Ensemble, Member, Stump};
use crate::potentials::{potential_grid, PotentialKind};

pub const RESULTS_HEADER: &[&str] = &[
    "algorithm",
    "dataset",
    "delta",
    "eta",
    "n_train",
    "repeat",
    "seed",
    "epsilon_final",
    "theta",
    "test_err_true",
    "test_err_noisy",
    "train_err",
    "t_f",
    "auc",
    "status",
    "wall_ms",
];

pub const DIAGNOSTICS_HEADER: &[&str] = &[
    "algorithm",
    "dataset",
    "delta",
    "eta",
    "n_train",
    "repeat",
    "epsilon",
    "epsilon_final",
    "theta",
    "t_f",
    "e_f",
    "iterations",
    "status",
    "cosine",
    "angle",
];

pub const SUMMARY_HEADER: &[&str] = &[
    "algorithm",
    "dataset",
    "delta",
    "eta",
    "n_train",
    "theta",
    "epsilon",
    "runs",
    "test_err_true_mean",
    "test_err_true_std",
    "test_err_noisy_mean",
    "test_err_noisy_std",
    "train_err_mean",
    "train_err_std",
    "auc_mean",
    "auc_std",
    "t_f_mean",
    "epsilon_final_mean",
];

pub const AUC_HEADER: &[&str] =
    &["algorithm", "dataset", "delta", "eta", "n_train", "theta", "epsilon", "runs", "auc_mean", "auc_std"];

pub const AUC_PAIRS_HEADER: &[&str] =
    &["dataset", "delta", "eta", "n_train", "first", "second", "pairs", "mean_diff", "t", "p"];

pub const MARGINS_HEADER: &[&str] = &["iteration", "example_id", "normalized_margin", "is_noisy"];

pub const SNAPSHOT_POTENTIAL_HEADER: &[&str] = &["iteration", "kind", "epsilon", "t", "s", "phi", "weight"];

pub const POTENTIALS_HEADER: &[&str] = &["kind", "s", "t", "phi", "weight"];

pub const MODEL_HEADER: &[&str] = &["alpha", "feature", "threshold", "polarity"];

/// Empty field for values that do not apply.
pub(crate) fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarginRow {
    pub iteration: usize,
    pub example_id: usize,
    pub normalized_margin: f64,
    pub is_noisy: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    pub iteration: usize,
    pub kind: &'static str,
    pub epsilon: f64,
    pub t: f64,
    pub s: f64,
    pub phi: f64,
    pub weight: f64,
}

pub fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..points).map(|k| lo + (hi - lo) * k as f64 / (points - 1) as f64).collect(),
    }
}

/// Margin distribution of `data` after each listed round, plus the
/// potential in effect at that point sampled over the raw margin range.
/// Iterations past the end of the run show the final state. An empty
/// ensemble has all margins at 0.
pub fn emit_margin_snapshots(run: &BoostRun, data: &Dataset, iterations: &[usize]) -> Result<(Vec<MarginRow>, Vec<CurveRow>)> {
    let noisy = data.noise_mask();
    let mut margins = Vec::new();
    let mut curves = Vec::new();
    for &it in iterations {
        let ens = run.ensemble_at(it);
        let l1 = ens.l1_norm();
        let scores = ens.scores(data)?;
        let raw: Vec<f64> = scores.iter().zip(data.labels()).map(|(&f, &y)| f * y as f64).collect();
        for (i, &m) in raw.iter().enumerate() {
            let normalized = if l1 > 0.0 { m / l1 } else { 0.0 };
            margins.push(MarginRow { iteration: it, example_id: i, normalized_margin: normalized, is_noisy: noisy[i] });
        }
        let Some((kind, t)) = run.potential_at(it) else { continue };
        let lo = raw.iter().copied().fold(f64::INFINITY, f64::min).min(-1.0);
        let hi = raw.iter().copied().fold(f64::NEG_INFINITY, f64::max).max(1.0);
        let epsilon = run.trace[it.min(run.trace.len()) - 1].epsilon;
        for sample in potential_grid(&kind, &linspace(lo, hi, 101), &[t]) {
            curves.push(CurveRow {
                iteration: it,
                kind: sample.kind,
                epsilon,
                t,
                s: sample.s,
                phi: sample.phi,
                weight: sample.weight,
            });
        }
    }
    Ok((margins, curves))
}

pub fn write_margin_snapshots(path: &Path, rows: &[MarginRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(MARGINS_HEADER)?;
    for r in rows {
        w.write_record([
            r.iteration.to_string(),
            r.example_id.to_string(),
            r.normalized_margin.to_string(),
            u8::from(r.is_noisy).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_curves(path: &Path, rows: &[CurveRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(SNAPSHOT_POTENTIAL_HEADER)?;
    for r in rows {
        w.write_record([
            r.iteration.to_string(),
            r.kind.to_string(),
            r.epsilon.to_string(),
            r.t.to_string(),
            r.s.to_string(),
            r.phi.to_string(),
            r.weight.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Builds a potential by name: `exp`, `logit`, `brown` or `robust`.
pub fn potential_by_name(name: &str, epsilon: f64, theta: f64, sigma_f: f64) -> Result<PotentialKind> {
    match name.to_ascii_lowercase().as_str() {
        "exp" | "adaboost" => Ok(PotentialKind::Exp),
        "logit" | "logloss" => Ok(PotentialKind::Logit),
        "brown" => PotentialKind::brown(epsilon),
        "robust" => PotentialKind::robust(epsilon, theta, sigma_f),
        other => Err(BoostError::Parameter(format!("unknown potential {other:?}"))),
    }
}

/// Writes `kind, s, t, phi, weight` rows for every kind on the grid.
pub fn write_potentials(path: &Path, kinds: &[PotentialKind], s_values: &[f64], t_values: &[f64]) -> Result<usize> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(POTENTIALS_HEADER)?;
    let mut rows = 0;
    for kind in kinds {
        for p in potential_grid(kind, s_values, t_values) {
            w.write_record([p.kind.to_string(), p.s.to_string(), p.t.to_string(), p.phi.to_string(), p.weight.to_string()])?;
            rows += 1;
        }
    }
    w.flush()?;
    Ok(rows)
}

/// Ordered `alpha, feature, threshold, polarity` dump. A constant stump has
/// threshold `-inf`.
pub fn write_model_csv(ensemble: &Ensemble, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(MODEL_HEADER)?;
    for m in ensemble.members() {
        w.write_record([
            m.alpha.to_string(),
            m.stump.feature.to_string(),
            m.stump.threshold.to_string(),
            m.stump.polarity.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_model_csv(path: &Path) -> Result<Ensemble> {
    let mut r = csv::Reader::from_path(path)?;
    if r.headers()?.iter().ne(MODEL_HEADER.iter().copied()) {
        return Err(BoostError::Ingestion {
            path: path.to_path_buf(),
            row: 1,
            msg: format!("header must be {}", MODEL_HEADER.join(",")),
        });
    }
    let mut members = Vec::new();
    for (k, rec) in r.records().enumerate() {
        let rec = rec?;
        let bad = |what: &str| BoostError::Ingestion { path: path.to_path_buf(), row: k + 2, msg: format!("bad {what}") };
        let alpha: f64 = rec[0].parse().map_err(|_| bad("alpha"))?;
        let feature: usize = rec[1].parse().map_err(|_| bad("feature"))?;
        let threshold: f64 = rec[2].parse().map_err(|_| bad("threshold"))?;
        let polarity: i8 = rec[3].parse().map_err(|_| bad("polarity"))?;
        if polarity != 1 && polarity != -1 {
            return Err(bad("polarity"));
        }
        members.push(Member { alpha, stump: Stump::new(feature, threshold, polarity) });
    }
    Ok(Ensemble::from_members(members))
}
