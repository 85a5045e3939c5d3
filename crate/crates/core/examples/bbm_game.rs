//! The Boost-by-Majority potential table and one run of the game.

use ncboost::boosters::{train, Algorithm, BoosterConfig};
use ncboost::model::Dataset;
use ncboost::potentials::BbmTable;

fn main() -> ncboost::error::Result<()> {
    let (rounds, gamma) = (4, 0.15);
    let table = BbmTable::new(rounds, gamma)?;
    println!("Phi_i^t for T = {rounds}, gamma = {gamma} (rows t, columns i = -3..=3)");
    for t in 0..=rounds + 1 {
        let row: Vec<String> = (-3..=3).map(|i| format!("{:.3}", table.get(t, i))).collect();
        println!("t={t} {}", row.join(" "));
    }

    // the label is a majority of three stumps: each alone is 75% right
    let rows: Vec<Vec<f64>> =
        (0..400).map(|k| vec![(k % 20) as f64, ((k / 20) % 20) as f64, ((k * 7 + 3) % 20) as f64]).collect();
    let labels = rows.iter().map(|r| if r.iter().filter(|&&v| v >= 10.0).count() >= 2 { 1 } else { -1 }).collect();
    let data = Dataset::from_rows("majority", &rows, labels)?;
    let mut cfg = BoosterConfig::new(Algorithm::Bbm).with_max_iters(25);
    cfg.bbm_rounds = 25;
    cfg.gamma = 0.1;
    let run = train(&data, &cfg)?;
    let weak = run.trace.iter().filter(|r| r.weak_edge).count();
    println!("BBM: {} votes, training error {:.3}, {weak} rounds below the assumed edge", run.ensemble.len(), run.train_error);
    Ok(())
}
