//! One BrownBoost step by hand: weights, stump, then the (alpha, dt) solve.

use ncboost::data::{generate_ls, inject_noise, LsParams, NoiseSpec};
use ncboost::potentials::PotentialKind;
use ncboost::solver::{solve_step, SolverConfig};
use ncboost::stumps::train_stump;

fn main() -> ncboost::error::Result<()> {
    let clean = generate_ls(&LsParams { n: 800, delta: 1, seed: 8 })?;
    let data = inject_noise(&clean, &NoiseSpec::symmetric(0.1, 9))?;
    let kind = PotentialKind::brown(0.15)?;
    let cfg = SolverConfig::default();

    let mut margins = vec![0.0; data.n()];
    let mut t = 0.0;
    for round in 1..=5 {
        let weights: Vec<f64> = margins.iter().map(|&s| kind.weight(s, t)).collect::<Result<_, _>>()?;
        let fit = train_stump(&data, &weights)?;
        let u = fit.stump.agreement(&data);
        let sol = solve_step(&kind, &margins, &u, t, &cfg)?;
        println!(
            "round {round}: edge {:.3} -> alpha {:.4}, dt {:.4}, residuals ({:.1e}, {:.1e}) {:?}",
            fit.edge, sol.alpha, sol.dt, sol.residuals.0, sol.residuals.1, sol.status
        );
        if sol.status.is_failure() {
            break;
        }
        for (s, ui) in margins.iter_mut().zip(&u) {
            *s += sol.alpha * ui;
        }
        t += sol.dt;
    }
    println!("clock at t = {t:.4}");
    Ok(())
}
