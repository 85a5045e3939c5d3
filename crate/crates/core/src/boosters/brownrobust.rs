use super::{
    AdaptiveEpsilon, BoostRun, BoosterConfig, EpsilonDecision, IterationRecord, RunStatus, Session,
    StepKind,
};
use crate::error::Result;
use crate::model::Dataset;
use crate::potentials::PotentialKind;
use crate::solver::{solve_step, StepStatus};
use crate::stumps::StumpTrainer;

fn total_potential(kind: &PotentialKind, margins: &[f64], t: f64) -> Result<f64> {
    margins.iter().map(|&s| kind.potential(s, t)).sum()
}

/// BrownBoost or RobustBoost.
///
/// Each round weights examples by the current potential, fits a stump and
/// solves for `(alpha, dt)`. Only converged steps (and the final one) are
/// applied. With the adaptive goal enabled, too many failures in a row
/// raise `epsilon` and re-derive the potential while keeping margins and
/// time; without it the first failure ends the run as `stuck_exhausted`.
pub fn train_brownrobust(data: &Dataset, config: &BoosterConfig) -> Result<BoostRun> {
    let trainer = StumpTrainer::new(data);
    let mut session = Session::new(data, config);
    let mut goal = AdaptiveEpsilon::new(config.epsilon, config.eps_increment, config.max_tries);
    // epsilon = 0 has no finite potential; such rounds count as failures
    let mut kind = if goal.epsilon() > 0.0 { Some(config.potential(goal.epsilon())?) } else { None };
    let mut t = 0.0;
    let mut status = RunStatus::Completed;

    for iter in 1..=config.max_iters {
        let mut record = IterationRecord {
            iter,
            t,
            dt: 0.0,
            alpha: 0.0,
            epsilon: goal.epsilon(),
            edge: 0.0,
            stump: None,
            step: StepKind::Skipped,
            members: session.ensemble.len(),
            train_error: session.train_error(),
            potential: None,
            weak_edge: false,
        };
        let mut failed = true;
        let mut finished = false;

        if let Some(k) = kind.as_ref() {
            let margins = session.margins.margins();
            let weights: Vec<f64> = margins.iter().map(|&s| k.weight(s, t)).collect::<Result<_>>()?;
            let usable = weights.iter().any(|&w| w > 0.0) && weights.iter().all(|w| w.is_finite());
            let fit = if usable { Some(trainer.fit(&weights)?) } else { None };
            if let Some(fit) = fit.filter(|f| f.edge > 1e-12) {
                record.edge = fit.edge;
                record.stump = Some(fit.stump);
                let u = fit.stump.agreement(data);
                let sol = solve_step(k, margins, &u, t, &config.solver)?;
                let apply = match sol.status {
                    StepStatus::Converged => {
                        failed = false;
                        record.step = StepKind::Converged;
                        true
                    }
                    StepStatus::Stuck => {
                        record.step = StepKind::Stuck;
                        false
                    }
                    StepStatus::ReachedFinalTime => {
                        failed = false;
                        finished = true;
                        record.step = StepKind::ReachedFinalTime;
                        true
                    }
                    StepStatus::SolverFailure(_) => {
                        record.step = StepKind::SolverFailure;
                        false
                    }
                };
                if apply {
                    session.add(sol.alpha, fit.stump, &u);
                    t = if finished { 1.0 } else { (t + sol.dt).min(1.0) };
                    record.alpha = sol.alpha;
                    record.dt = sol.dt;
                }
            }
            record.t = t;
            record.members = session.ensemble.len();
            record.train_error = session.train_error();
            if t < 1.0 {
                record.potential = Some(total_potential(k, session.margins.margins(), t)?);
            }
        }
        session.trace.push(record);

        if finished {
            status = RunStatus::ReachedT1;
            break;
        }
        if failed {
            let decision = if config.adaptive_epsilon { goal.failure() } else { EpsilonDecision::Exhausted };
            match decision {
                EpsilonDecision::Continue => {}
                EpsilonDecision::Raised(eps) => kind = Some(config.potential(eps)?),
                EpsilonDecision::Exhausted => {
                    status = RunStatus::StuckExhausted;
                    break;
                }
            }
        } else {
            goal.success();
        }
    }
    let eps = goal.epsilon();
    Ok(session.finish(status, t, eps))
}
