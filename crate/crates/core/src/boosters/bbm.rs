use super::{BoostRun, BoosterConfig, IterationRecord, RunStatus, Session, StepKind};
use crate::error::Result;
use crate::model::Dataset;
use crate::potentials::BbmTable;
use crate::stumps::StumpTrainer;

/// Boost-by-Majority over a fixed horizon of `T` rounds.
///
/// Rounds weight each example by how much one more vote moves its table
/// value, `Phi(i - 1) - Phi(i + 1)` at the next time step, where `i` is the
/// example's unnormalized margin. Every stump gets vote 1. A stump whose
/// edge falls below `gamma` is flagged in the trace and training goes on.
pub fn train_bbm(data: &Dataset, config: &BoosterConfig) -> Result<BoostRun> {
    let rounds = config.bbm_rounds.min(config.max_iters);
    let table = BbmTable::new(config.bbm_rounds, config.gamma)?;
    let trainer = StumpTrainer::new(data);
    let mut session = Session::new(data, config);
    let mut counts = vec![0i64; data.n()];

    for iter in 1..=rounds {
        let weights: Vec<f64> = counts
            .iter()
            .map(|&i| (table.get(iter + 1, i - 1) - table.get(iter + 1, i + 1)).max(0.0))
            .collect();
        if weights.iter().all(|&w| w == 0.0) {
            break;
        }
        let fit = trainer.fit(&weights)?;
        let u = fit.stump.agreement(data);
        for (c, &ui) in counts.iter_mut().zip(&u) {
            *c += ui as i64;
        }
        session.add(1.0, fit.stump, &u);
        session.trace.push(IterationRecord {
            iter,
            t: iter as f64 / config.bbm_rounds as f64,
            dt: 1.0 / config.bbm_rounds as f64,
            alpha: 1.0,
            epsilon: fit.weighted_error(),
            edge: fit.edge,
            stump: Some(fit.stump),
            step: StepKind::Direct,
            members: session.ensemble.len(),
            train_error: session.train_error(),
            potential: Some(counts.iter().map(|&i| table.get(iter + 1, i)).sum()),
            weak_edge: fit.edge < config.gamma,
        });
    }
    Ok(session.finish(RunStatus::Completed, 0.0, 0.0))
}
