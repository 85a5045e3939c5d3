//! How the adaptive goal walks epsilon up from 0 until BrownBoost can make
//! progress, and where the clock ends up.

use ncboost::boosters::{train, Algorithm, BoosterConfig, StepKind};
use ncboost::data::{generate_ls, inject_noise, LsParams, NoiseSpec};

fn main() -> ncboost::error::Result<()> {
    for eta in [0.1, 0.2, 0.3] {
        let clean = generate_ls(&LsParams { n: 1600, delta: 1, seed: 3 })?;
        let data = inject_noise(&clean, &NoiseSpec::symmetric(eta, 4))?;
        let run = train(&data, &BoosterConfig::adaptive(Algorithm::Brown))?;

        let raises: Vec<String> = run
            .trace
            .windows(2)
            .filter(|w| w[1].epsilon != w[0].epsilon)
            .map(|w| format!("{}:{:.2}", w[1].iter, w[1].epsilon))
            .collect();
        let applied = run.trace.iter().filter(|r| matches!(r.step, StepKind::Converged | StepKind::ReachedFinalTime)).count();
        println!("eta {eta}: final eps {:.2}, t {:.3}, status {}, {applied} applied steps", run.final_epsilon, run.final_time, run.status);
        println!("  raises (iteration:eps) {}", raises.join(" "));
    }
    Ok(())
}
