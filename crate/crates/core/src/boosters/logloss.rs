use super::{BoostRun, BoosterConfig, IterationRecord, RunStatus, Session, StepKind};
use crate::error::Result;
use crate::model::Dataset;
use crate::stumps::StumpTrainer;

/// Upper end of the step-size search.
pub const LOGLOSS_ALPHA_MAX: f64 = 10.0;

fn logloss(margins: &[f64], u: &[f64], alpha: f64) -> f64 {
    margins
        .iter()
        .zip(u)
        .map(|(&s, &ui)| {
            let m = s + alpha * ui;
            (-m).max(0.0) + (-m.abs()).exp().ln_1p()
        })
        .sum()
}

/// Golden-section minimization of `sum_i ln(1 + exp(-(s_i + alpha u_i)))`
/// over `alpha` in `[0, 10]`, to a bracket width of 1e-8.
pub fn line_search_logloss(margins: &[f64], u: &[f64]) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (0.0, LOGLOSS_ALPHA_MAX);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = logloss(margins, u, c);
    let mut fd = logloss(margins, u, d);
    while b - a > 1e-8 {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = logloss(margins, u, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = logloss(margins, u, d);
        }
    }
    let mid = 0.5 * (a + b);
    // the bracket ends get a chance when the objective is monotone
    [0.0, mid, LOGLOSS_ALPHA_MAX]
        .into_iter()
        .map(|x| (logloss(margins, u, x), x))
        .min_by(|p, q| p.0.total_cmp(&q.0))
        .map(|(_, x)| x)
        .unwrap_or(mid)
}

/// Log-loss boosting: `w_i = 1 / (1 + exp(s_i))`, step by line search.
pub fn train_logloss(data: &Dataset, config: &BoosterConfig) -> Result<BoostRun> {
    let trainer = StumpTrainer::new(data);
    let mut session = Session::new(data, config);
    for iter in 1..=config.max_iters {
        let weights: Vec<f64> = session
            .margins
            .margins()
            .iter()
            .map(|&s| if s > 0.0 { (-s).exp() / (1.0 + (-s).exp()) } else { 1.0 / (1.0 + s.exp()) })
            .collect();
        let fit = trainer.fit(&weights)?;
        if fit.edge <= 1e-12 {
            break;
        }
        let u = fit.stump.agreement(data);
        let alpha = line_search_logloss(session.margins.margins(), &u);
        if alpha <= 0.0 {
            break;
        }
        session.add(alpha, fit.stump, &u);
        session.trace.push(IterationRecord {
            iter,
            t: 0.0,
            dt: 0.0,
            alpha,
            epsilon: fit.weighted_error(),
            edge: fit.edge,
            stump: Some(fit.stump),
            step: StepKind::Direct,
            members: session.ensemble.len(),
            train_error: session.train_error(),
            potential: None,
            weak_edge: false,
        });
    }
    Ok(session.finish(RunStatus::Completed, 0.0, 0.0))
}
