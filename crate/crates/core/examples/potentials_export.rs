//! Writes potential and weight curves for all four losses to a CSV.
//!
//! Usage: cargo run --example potentials_export [out.csv]

use std::path::PathBuf;

use ncboost::harness::{linspace, write_potentials};
use ncboost::potentials::PotentialKind;

fn main() -> ncboost::error::Result<()> {
    let out = std::env::args().nth(1).map_or_else(|| std::env::temp_dir().join("potentials.csv"), PathBuf::from);
    let kinds = [PotentialKind::Exp, PotentialKind::Logit, PotentialKind::brown(0.1)?, PotentialKind::robust(0.1, 0.0, 0.001)?];
    let ts = [0.0, 0.5, 0.9];
    let rows = write_potentials(&out, &kinds, &linspace(-3.0, 3.0, 121), &ts)?;
    println!("{rows} rows -> {}", out.display());

    // the Brown curve sharpens as the clock runs out
    let brown = &kinds[2];
    for t in ts {
        let phi: Vec<String> = [-1.0, 0.0, 1.0].iter().map(|&s| format!("{:.4}", brown.potential(s, t).unwrap())).collect();
        println!("brown t={t}: phi(-1, 0, 1) = {}", phi.join(", "));
    }
    Ok(())
}
