use super::{BoostRun, BoosterConfig, IterationRecord, RunStatus, Session, StepKind};
use crate::error::Result;
use crate::model::Dataset;
use crate::stumps::StumpTrainer;

/// Weighted errors below this are treated as a perfect stump.
pub const ADABOOST_MIN_ERROR: f64 = 1e-12;

/// `alpha = ln((1 - err) / err) / 2`, with `err` floored at [`ADABOOST_MIN_ERROR`].
pub fn adaboost_alpha(weighted_error: f64) -> f64 {
    let err = weighted_error.max(ADABOOST_MIN_ERROR);
    0.5 * ((1.0 - err) / err).ln()
}

/// AdaBoost by reweighting: `w_i = exp(-s_i)`.
pub fn train_adaboost(data: &Dataset, config: &BoosterConfig) -> Result<BoostRun> {
    let trainer = StumpTrainer::new(data);
    let mut session = Session::new(data, config);
    for iter in 1..=config.max_iters {
        let margins = session.margins.margins();
        // shift by the smallest margin so exp() stays finite
        let floor = margins.iter().copied().fold(f64::INFINITY, f64::min);
        let weights: Vec<f64> = margins.iter().map(|&s| (-(s - floor)).exp()).collect();
        let fit = trainer.fit(&weights)?;
        if fit.edge <= 1e-12 {
            break;
        }
        let err = fit.weighted_error();
        let alpha = adaboost_alpha(err);
        let u = fit.stump.agreement(data);
        session.add(alpha, fit.stump, &u);
        session.trace.push(IterationRecord {
            iter,
            t: 0.0,
            dt: 0.0,
            alpha,
            epsilon: err,
            edge: fit.edge,
            stump: Some(fit.stump),
            step: StepKind::Direct,
            members: session.ensemble.len(),
            train_error: session.train_error(),
            potential: None,
            weak_edge: false,
        });
        if err <= ADABOOST_MIN_ERROR {
            break;
        }
    }
    Ok(session.finish(RunStatus::Completed, 0.0, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boosters::Algorithm;
    use crate::data::{generate_ls, inject_noise, LsParams, NoiseSpec};
    use crate::model::Dataset;

    #[test]
    fn alpha_closed_form() {
        assert!((adaboost_alpha(0.25) - 0.5 * 3f64.ln()).abs() < 1e-15);
        assert!(adaboost_alpha(0.0).is_finite());
    }

    #[test]
    fn zero_edge_stops_without_adding() {
        let data = Dataset::from_rows("flat", &[vec![1.0], vec![1.0]], vec![-1, 1]).unwrap();
        let run = train_adaboost(&data, &BoosterConfig::new(Algorithm::AdaBoost)).unwrap();
        assert!(run.ensemble.is_empty());
        assert_eq!(run.status, RunStatus::Completed);
    }

    #[test]
    fn perfect_stump_caps_alpha_and_stops() {
        let data = Dataset::from_rows("sep", &[vec![-1.0], vec![1.0]], vec![-1, 1]).unwrap();
        let run = train_adaboost(&data, &BoosterConfig::new(Algorithm::AdaBoost)).unwrap();
        assert_eq!(run.ensemble.len(), 1);
        assert!((run.ensemble.members()[0].alpha - adaboost_alpha(ADABOOST_MIN_ERROR)).abs() < 1e-12);
        assert_eq!(run.train_error, 0.0);
    }

    #[test]
    fn training_error_respects_product_bound() {
        for &(eta, seed) in &[(0.0, 1u64), (0.2, 2), (0.3, 3)] {
            let clean = generate_ls(&LsParams { n: 400, delta: 1, seed }).unwrap();
            let data = inject_noise(&clean, &NoiseSpec::symmetric(eta, seed + 100)).unwrap();
            let cfg = BoosterConfig::new(Algorithm::AdaBoost).with_max_iters(60);
            let run = train_adaboost(&data, &cfg).unwrap();
            let mut bound = 1.0;
            for rec in &run.trace {
                bound *= 2.0 * (rec.epsilon * (1.0 - rec.epsilon)).sqrt();
                assert!(rec.train_error <= bound + 1e-12, "iter {}: {} > {}", rec.iter, rec.train_error, bound);
            }
        }
    }
}
