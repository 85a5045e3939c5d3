//! Convex losses against the adaptive non-convex boosters under 30% noise.
//!
//! Usage: cargo run --release --example noise_robustness [eta] [seed]

use ncboost::boosters::{train, Algorithm, BoosterConfig};
use ncboost::data::{generate_ls, inject_noise, LsParams, NoiseSpec};
use ncboost::metrics::{error_rate, Against};

fn main() -> ncboost::error::Result<()> {
    let mut args = std::env::args().skip(1);
    let eta: f64 = args.next().map_or(0.3, |a| a.parse().expect("eta"));
    let seed: u64 = args.next().map_or(7, |a| a.parse().expect("seed"));

    let noisy = |n, s| -> ncboost::error::Result<_> {
        let clean = generate_ls(&LsParams { n, delta: 1, seed: s })?;
        inject_noise(&clean, &NoiseSpec::symmetric(eta, s + 1))
    };
    let train_set = noisy(1600, seed)?;
    let test_set = noisy(4000, seed + 10)?;
    println!("eta = {eta}: {} of 1600 training labels flipped", train_set.noise_mask().iter().filter(|&&b| b).count());

    let configs = [
        BoosterConfig::new(Algorithm::AdaBoost),
        BoosterConfig::new(Algorithm::LogLoss),
        BoosterConfig::adaptive(Algorithm::Brown),
        BoosterConfig::adaptive(Algorithm::Robust),
    ];
    println!("{:<4} {:>10} {:>10} {:>10} {:>8}", "alg", "test/true", "test/noisy", "train", "eps");
    for cfg in configs {
        let run = train(&train_set, &cfg.with_max_iters(200))?;
        println!(
            "{:<4} {:>10.4} {:>10.4} {:>10.4} {:>8}",
            run.label,
            error_rate(&run.ensemble, &test_set, Against::TrueLabels)?,
            error_rate(&run.ensemble, &test_set, Against::Labels)?,
            run.train_error,
            if run.config.adaptive_epsilon { format!("{:.2}", run.final_epsilon) } else { "-".into() },
        );
    }
    Ok(())
}
