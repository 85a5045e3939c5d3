//! A small sweep through the harness, written to a temporary directory.

use ncboost::harness::{run_experiment, ExperimentConfig};

const CONFIG: &str = r#"
name = "demo"
seed = 42
repeats = 3
max_iters = 100
algorithms = ["ADB", "BBA", "RBA"]
etas = [0.0, 0.2]

[margins]
iterations = [10, 100]

[[dataset]]
kind = "ls"
deltas = [1]
n_train = [800]
n_test = 2000
"#;

fn main() -> ncboost::error::Result<()> {
    let dir = std::env::temp_dir().join("ncboost_demo");
    let mut cfg = ExperimentConfig::from_toml(CONFIG)?;
    cfg.output = Some(dir.clone());
    let report = run_experiment(&cfg, false)?;
    for s in &report.summary {
        let e = s.test_err_true.expect("every run scored");
        println!("{:<4} eta {:.1}: test error {:.4} (sd {:.4})", s.algorithm, s.eta, e.mean, e.std.unwrap_or(0.0));
    }
    println!("files in {}", dir.display());
    Ok(())
}
