//! Margin distributions of noisy and clean examples as RobustBoost runs.
//!
//! Noisy examples get pushed to negative margins and given up on, while
//! clean ones move right.

use ncboost::boosters::{train, Algorithm, BoosterConfig};
use ncboost::data::{generate_ls, inject_noise, LsParams, NoiseSpec};
use ncboost::harness::emit_margin_snapshots;
use ncboost::model::margin_histogram;

fn main() -> ncboost::error::Result<()> {
    let clean = generate_ls(&LsParams { n: 1600, delta: 1, seed: 5 })?;
    let data = inject_noise(&clean, &NoiseSpec::symmetric(0.2, 6))?;
    let run = train(&data, &BoosterConfig::adaptive(Algorithm::Robust))?;
    let iterations = [10, 50, 100, 200];
    let (rows, curves) = emit_margin_snapshots(&run, &data, &iterations)?;

    println!("bins over [-1, 1] in steps of 0.25");
    for it in iterations {
        for noisy in [false, true] {
            let m: Vec<f64> = rows
                .iter()
                .filter(|r| r.iteration == it && r.is_noisy == noisy)
                .map(|r| r.normalized_margin)
                .collect();
            let h = margin_histogram(&m, 8, -1.0, 1.0)?;
            println!("iter {it:>3} {:<5} {h:?}", if noisy { "noisy" } else { "clean" });
        }
    }
    println!("{} potential samples alongside", curves.len());
    Ok(())
}
