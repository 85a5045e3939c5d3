use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ncboost::data::{
    generate_ls, inject_noise, load_delimited, read_dataset_csv, write_dataset_csv, LabelMap, LsParams, NoiseSpec,
};
use ncboost::error::Result;
use ncboost::harness::{self, linspace, potential_by_name, read_model_csv, write_potentials, ExperimentConfig};
use ncboost::metrics::{auc_from_scores, error_rate, Against};

#[derive(Parser)]
#[command(name = "boost", version, about = "Noise-tolerant boosting experiments")]
struct Cli {
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Master seed; overrides the config's seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment config and write its CSV outputs.
    Run {
        config: PathBuf,
        /// Output directory instead of the config's.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        quiet: bool,
    },
    /// Generate a Long-Servedio dataset as CSV.
    GenLs(GenLs),
    /// Dump potential and weight curves as CSV.
    Potentials(Potentials),
    /// Score a saved model on a dataset.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        /// Treat `data` as a delimited file whose label codes in this list are positive.
        #[arg(long, value_delimiter = ',')]
        positive: Option<Vec<i64>>,
    },
}

#[derive(Args)]
struct GenLs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    delta: usize,
    /// Symmetric label noise rate.
    #[arg(long, default_value_t = 0.0)]
    eta: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct Potentials {
    /// exp, logit, brown, robust or all.
    #[arg(long, default_value = "all", value_delimiter = ',')]
    kind: Vec<String>,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.0)]
    theta: f64,
    #[arg(long, default_value_t = 0.001)]
    sigma_f: f64,
    #[arg(long, default_value_t = -3.0, allow_hyphen_values = true)]
    s_min: f64,
    #[arg(long, default_value_t = 3.0)]
    s_max: f64,
    #[arg(long, default_value_t = 121)]
    points: usize,
    /// Time values.
    #[arg(long, value_delimiter = ',', default_value = "0,0.25,0.5,0.75,0.9")]
    t: Vec<f64>,
    #[arg(long)]
    out: PathBuf,
}

fn run(cli: Cli) -> Result<()> {
    let seed = cli.seed.unwrap_or(0);
    match cli.command {
        Command::Run { config, out, quiet } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Some(s) = cli.seed {
                cfg.seed = s;
            }
            if cli.threads.is_some() {
                cfg.threads = cli.threads;
            }
            if out.is_some() {
                cfg.output = out;
            }
            let report = harness::run_experiment(&cfg, !quiet)?;
            println!("{} runs written to {}", report.records.len(), report.output_dir.display());
        }
        Command::GenLs(g) => {
            let clean = generate_ls(&LsParams { n: g.n, delta: g.delta, seed })?;
            let data = inject_noise(&clean, &NoiseSpec::symmetric(g.eta, seed.wrapping_add(1)))?;
            write_dataset_csv(&data, &g.out)?;
            println!("wrote {} examples to {}", data.n(), g.out.display());
        }
        Command::Potentials(p) => {
            let names: Vec<String> = if p.kind.iter().any(|k| k == "all") {
                ["exp", "logit", "brown", "robust"].iter().map(|s| s.to_string()).collect()
            } else {
                p.kind.clone()
            };
            let kinds = names
                .iter()
                .map(|k| potential_by_name(k, p.epsilon, p.theta, p.sigma_f))
                .collect::<Result<Vec<_>>>()?;
            let rows = write_potentials(&p.out, &kinds, &linspace(p.s_min, p.s_max, p.points), &p.t)?;
            println!("wrote {rows} rows to {}", p.out.display());
        }
        Command::Eval { model, data, positive } => {
            let ensemble = read_model_csv(&model)?;
            let data = match positive {
                Some(codes) => load_delimited(&data, None, &LabelMap::positive(codes))?,
                None => read_dataset_csv(&data)?,
            };
            let scores = ensemble.scores(&data)?;
            println!("examples        {}", data.n());
            println!("members         {}", ensemble.len());
            println!("error (labels)  {:.4}", error_rate(&ensemble, &data, Against::Labels)?);
            if data.true_labels().is_some() {
                println!("error (true)    {:.4}", error_rate(&ensemble, &data, Against::TrueLabels)?);
            }
            match auc_from_scores(&scores, data.clean_labels()) {
                Ok(a) => println!("auc             {a:.4}"),
                Err(e) => println!("auc             n/a ({e})"),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        // best effort; sweeps build their own pool from the same value
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
