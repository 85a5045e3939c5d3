//! AdaBoost and log-loss boosting on clean Long-Servedio data.
//!
//! Both reach zero test error; AdaBoost's training error also stays under
//! the product bound `prod 2 sqrt(e_t (1 - e_t))` at every round.

use ncboost::boosters::{train, Algorithm, BoosterConfig};
use ncboost::data::{generate_ls, LsParams};
use ncboost::metrics::{error_rate, Against};

fn main() -> ncboost::error::Result<()> {
    let train_set = generate_ls(&LsParams { n: 1600, delta: 1, seed: 1 })?;
    let test_set = generate_ls(&LsParams { n: 4000, delta: 1, seed: 2 })?;

    for algorithm in [Algorithm::AdaBoost, Algorithm::LogLoss] {
        let run = train(&train_set, &BoosterConfig::new(algorithm).with_max_iters(200))?;
        println!(
            "{}: {} stumps, train error {:.4}, test error {:.4}",
            run.label,
            run.ensemble.len(),
            run.train_error,
            error_rate(&run.ensemble, &test_set, Against::Labels)?
        );
        if algorithm == Algorithm::AdaBoost {
            let mut bound = 1.0;
            for rec in &run.trace {
                bound *= 2.0 * (rec.epsilon * (1.0 - rec.epsilon)).sqrt();
                assert!(rec.train_error <= bound + 1e-12);
            }
            println!("  product bound after the last round: {bound:.3e}");
        }
    }
    Ok(())
}
