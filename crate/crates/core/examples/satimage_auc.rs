//! AUC of the four boosters on Satimage with 20% label noise.
//!
//! Needs the UCI files `sat.trn` and `sat.tst` in `$SATIMAGE_DIR` (default
//! `data/`). Classes 1-3 are positive.

use std::path::PathBuf;

use ncboost::boosters::{train, Algorithm, BoosterConfig};
use ncboost::data::{inject_noise, load_delimited, split, subsample, LabelMap, NoiseSpec};
use ncboost::metrics::auc_from_scores;
use ncboost::model::Dataset;

fn main() -> ncboost::error::Result<()> {
    let dir = PathBuf::from(std::env::var("SATIMAGE_DIR").unwrap_or_else(|_| "data".into()));
    let files = [dir.join("sat.trn"), dir.join("sat.tst")];
    if files.iter().any(|f| !f.exists()) {
        println!("Satimage not found in {}; set SATIMAGE_DIR to the folder holding sat.trn and sat.tst", dir.display());
        return Ok(());
    }
    let map = LabelMap::positive([1, 2, 3]);
    let parts = files.iter().map(|f| load_delimited(f, None, &map)).collect::<Result<Vec<_>, _>>()?;
    let features: Vec<f64> = parts.iter().flat_map(|p| p.features().to_vec()).collect();
    let labels: Vec<i8> = parts.iter().flat_map(|p| p.labels().to_vec()).collect();
    let all = Dataset::from_flat("satimage", features, parts[0].d(), labels)?;
    println!("{} examples, {} features", all.n(), all.d());

    let (train_set, test_set) = split(&all, 0.7, 0.2, 1)?;
    let train_set = inject_noise(&subsample(&train_set, 0.25, 2)?, &NoiseSpec::symmetric(0.2, 3))?;
    let iters: usize = std::env::var("ITERS").ok().and_then(|v| v.parse().ok()).unwrap_or(800);
    for cfg in [
        BoosterConfig::new(Algorithm::AdaBoost),
        BoosterConfig::new(Algorithm::LogLoss),
        BoosterConfig::adaptive(Algorithm::Brown),
        BoosterConfig::adaptive(Algorithm::Robust),
    ] {
        let run = train(&train_set, &cfg.with_max_iters(iters))?;
        let auc = auc_from_scores(&run.ensemble.scores(&test_set)?, test_set.labels())?;
        println!("{:<4} N={} AUC {auc:.4}", run.label, train_set.n());
    }
    Ok(())
}
