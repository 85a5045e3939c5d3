//! Seeded experiment sweeps.
//!
//! A config expands to data cells (dataset family x delta or keep fraction x
//! size x noise rate), each instantiated once per repeat, and to runs (cell x
//! algorithm x theta x epsilon x repeat). Every algorithm in a repeat sees the
//! same train/test draw, so results pair up for t-tests.
//!
//! Seeds: a data instance gets `derive_seed(master, [hash(name), delta, size,
//! eta bits, repeat])` and splits it into sub-streams 1 (train draw or split),
//! 2 (test draw or train noise), 3 (train noise or subsample) and 4 (test noise channel).
//!
//! Runs go to a rayon pool. One writer thread receives finished runs and
//! appends them to `results.csv` and `diagnostics.csv` in run order, flushing
//! after every row, so a crash leaves a valid prefix and reruns are
//! byte-identical (with `wall_time = false`).

pub mod config;
pub mod output;

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::mpsc;
use std::time::Instant;

use rayon::prelude::*;

pub use config::{DatasetSpec, ExperimentConfig, NoiseMode, PotentialOptions, Variant};
pub use output::{
    emit_margin_snapshots, linspace, potential_by_name, read_model_csv, write_model_csv, write_potentials,
    CurveRow, MarginRow,
};

use crate::boosters::train;
use crate::data::{
    derive_seed, generate_ls, inject_noise, load_delimited, split, subsample, LabelMap, LsParams, NoiseSpec, LS_DIM,
};
use crate::error::{BoostError, Result};
use crate::metrics::{angle_to_true, auc_from_scores, cosine_to_true, paired_ttest};
use crate::model::{sign, Dataset, Ensemble};
use output::opt;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Size {
    Train(usize),
    Keep(f64),
}

#[derive(Debug, Clone)]
struct DataCell {
    spec: usize,
    name: String,
    delta: Option<usize>,
    size: Size,
    eta: f64,
}

struct Instance {
    seed: u64,
    train: Dataset,
    test: Dataset,
    /// Direction of the true rule, when known.
    truth: Option<Vec<f64>>,
}

#[derive(Debug, Clone)]
struct RunSpec {
    cell: usize,
    group: usize,
    repeat: usize,
    variant: Variant,
    theta: f64,
    epsilon: Option<f64>,
}

/// Everything recorded about one finished run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub algorithm: String,
    pub dataset: String,
    pub delta: Option<usize>,
    pub eta: f64,
    pub n_train: usize,
    pub repeat: usize,
    pub seed: u64,
    /// Fixed goal, or the adaptive starting goal; `None` for convex losses and BBM.
    pub epsilon: Option<f64>,
    pub epsilon_final: Option<f64>,
    pub theta: f64,
    pub test_err_true: Option<f64>,
    pub test_err_noisy: Option<f64>,
    pub train_err: Option<f64>,
    pub t_f: Option<f64>,
    /// Training error against the clean labels at the end of the run.
    pub e_f: Option<f64>,
    pub auc: Option<f64>,
    pub cosine: Option<f64>,
    pub angle: Option<f64>,
    pub iterations: usize,
    pub status: String,
    pub wall_ms: u128,
    /// Summary cell shared by all repeats of the same configuration.
    pub group: usize,
    pub cell: usize,
}

impl RunRecord {
    fn results_row(&self) -> Vec<String> {
        vec![
            self.algorithm.clone(),
            self.dataset.clone(),
            opt(self.delta),
            self.eta.to_string(),
            self.n_train.to_string(),
            self.repeat.to_string(),
            self.seed.to_string(),
            opt(self.epsilon_final),
            self.theta.to_string(),
            opt(self.test_err_true),
            opt(self.test_err_noisy),
            opt(self.train_err),
            opt(self.t_f),
            opt(self.auc),
            self.status.clone(),
            self.wall_ms.to_string(),
        ]
    }

    fn diagnostics_row(&self) -> Vec<String> {
        vec![
            self.algorithm.clone(),
            self.dataset.clone(),
            opt(self.delta),
            self.eta.to_string(),
            self.n_train.to_string(),
            self.repeat.to_string(),
            opt(self.epsilon),
            opt(self.epsilon_final),
            self.theta.to_string(),
            opt(self.t_f),
            opt(self.e_f),
            self.iterations.to_string(),
            self.status.clone(),
            opt(self.cosine),
            opt(self.angle),
        ]
    }

    /// Label with the swept goal parameters spelled out.
    pub fn full_label(&self) -> String {
        let mut s = self.algorithm.clone();
        if let (Some(e), false) = (self.epsilon, self.algorithm.ends_with('A')) {
            s.push_str(&format!("[eps={e}]"));
        }
        if self.theta != 0.0 {
            s.push_str(&format!("[theta={}]", self.theta));
        }
        s
    }

    fn slug(&self) -> String {
        let mut s = format!("{}_{}", self.algorithm, self.dataset);
        if let Some(d) = self.delta {
            s.push_str(&format!("_d{d}"));
        }
        s.push_str(&format!("_eta{}_n{}", self.eta, self.n_train));
        if self.theta != 0.0 {
            s.push_str(&format!("_th{}", self.theta));
        }
        if let (Some(e), false) = (self.epsilon, self.algorithm.ends_with('A')) {
            s.push_str(&format!("_eps{e}"));
        }
        s.push_str(&format!("_r{}", self.repeat));
        s.chars().map(|c| if c.is_ascii_alphanumeric() || "._-".contains(c) { c } else { '-' }).collect()
    }
}

/// Mean and sample standard deviation of one summary cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stat {
    pub mean: f64,
    pub std: Option<f64>,
}

fn stat(values: impl IntoIterator<Item = Option<f64>>) -> Option<Stat> {
    let v: Vec<f64> = values.into_iter().flatten().collect();
    if v.is_empty() {
        return None;
    }
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let std = (v.len() > 1).then(|| (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt());
    Some(Stat { mean, std })
}

fn stat_fields(s: Option<Stat>) -> [String; 2] {
    [opt(s.map(|s| s.mean)), opt(s.and_then(|s| s.std))]
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub algorithm: String,
    pub dataset: String,
    pub delta: Option<usize>,
    pub eta: f64,
    pub n_train: usize,
    pub theta: f64,
    pub epsilon: Option<f64>,
    pub runs: usize,
    pub test_err_true: Option<Stat>,
    pub test_err_noisy: Option<Stat>,
    pub train_err: Option<Stat>,
    pub auc: Option<Stat>,
    pub t_f: Option<Stat>,
    pub epsilon_final: Option<Stat>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairRow {
    pub dataset: String,
    pub delta: Option<usize>,
    pub eta: f64,
    pub n_train: usize,
    pub first: String,
    pub second: String,
    pub pairs: usize,
    pub mean_diff: f64,
    /// `None` when the differences have no spread.
    pub t: Option<f64>,
    pub p: Option<f64>,
}

/// In-memory copy of everything written to disk.
#[derive(Debug, Clone)]
pub struct Report {
    pub output_dir: PathBuf,
    pub records: Vec<RunRecord>,
    pub summary: Vec<SummaryRow>,
    pub auc_pairs: Vec<PairRow>,
}

impl Report {
    pub fn summary_for(&self, algorithm: &str, pred: impl Fn(&SummaryRow) -> bool) -> Vec<&SummaryRow> {
        self.summary.iter().filter(|s| s.algorithm == algorithm && pred(s)).collect()
    }
}

fn name_hash(name: &str) -> u64 {
    // FNV-1a, stable across platforms and releases
    name.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3))
}

fn expand_cells(cfg: &ExperimentConfig) -> Vec<DataCell> {
    let mut cells = Vec::new();
    for (spec, ds) in cfg.datasets.iter().enumerate() {
        let name = ds.name();
        let variants: Vec<(Option<usize>, Size)> = match ds {
            DatasetSpec::Ls { deltas, n_train, .. } => deltas
                .iter()
                .flat_map(|&d| n_train.iter().map(move |&n| (Some(d), Size::Train(n))))
                .collect(),
            DatasetSpec::File { keep_fracs, .. } => keep_fracs.iter().map(|&f| (None, Size::Keep(f))).collect(),
        };
        for (delta, size) in variants {
            for &eta in &cfg.etas {
                cells.push(DataCell { spec, name: name.clone(), delta, size, eta });
            }
        }
    }
    cells
}

fn expand_runs(cfg: &ExperimentConfig, cells: &[DataCell]) -> Result<Vec<RunSpec>> {
    let variants = cfg.variants()?;
    let mut runs = Vec::new();
    let mut group = 0;
    for (ci, cell) in cells.iter().enumerate() {
        for &variant in &variants {
            let thetas: Vec<f64> = if variant.uses_theta() { cfg.thetas.clone() } else { vec![0.0] };
            let epsilons: Vec<Option<f64>> = if variant.uses_fixed_epsilon() {
                cfg.fixed_epsilons(cell.eta).into_iter().map(Some).collect()
            } else if variant.adaptive {
                vec![Some(cfg.booster.start_epsilon.unwrap_or(0.0))]
            } else {
                vec![None]
            };
            for &theta in &thetas {
                for &epsilon in &epsilons {
                    for repeat in 0..cfg.repeats {
                        runs.push(RunSpec { cell: ci, group, repeat, variant, theta, epsilon });
                    }
                    group += 1;
                }
            }
        }
    }
    Ok(runs)
}

fn load_file_spec(ds: &DatasetSpec) -> Result<Option<Dataset>> {
    let DatasetSpec::File { paths, label_column, positive, .. } = ds else { return Ok(None) };
    let map = LabelMap::positive(positive.iter().copied());
    let mut parts = Vec::with_capacity(paths.len());
    for p in paths {
        parts.push(load_delimited(p, *label_column, &map)?);
    }
    let d = parts[0].d();
    if let Some(bad) = parts.iter().find(|p| p.d() != d) {
        return Err(BoostError::Structure(format!("{} has {} features, expected {d}", bad.name(), bad.d())));
    }
    let mut features = Vec::new();
    let mut labels = Vec::new();
    for p in &parts {
        features.extend_from_slice(p.features());
        labels.extend_from_slice(p.labels());
    }
    Ok(Some(Dataset::from_flat(ds.name(), features, d, labels)?))
}

fn build_instance(cfg: &ExperimentConfig, cell: &DataCell, repeat: usize, base: Option<&Dataset>) -> Result<Instance> {
    let (delta, size) = match cell.size {
        Size::Train(n) => (cell.delta.unwrap_or(0) as u64, n as u64),
        Size::Keep(f) => (0, f.to_bits()),
    };
    let seed = derive_seed(cfg.seed, &[name_hash(&cell.name), delta, size, cell.eta.to_bits(), repeat as u64]);
    let sub = |k: u64| derive_seed(seed, &[k]);
    let spec = &cfg.datasets[cell.spec];
    match (spec, cell.size) {
        (DatasetSpec::Ls { n_test, .. }, Size::Train(n)) => {
            let delta = cell.delta.unwrap_or(1);
            let train = generate_ls(&LsParams { n, delta, seed: sub(1) })?;
            let test = generate_ls(&LsParams { n: *n_test, delta, seed: sub(2) })?;
            Ok(Instance {
                seed,
                train: inject_noise(&train, &NoiseSpec::symmetric(cell.eta, sub(3)))?.with_name(cell.name.clone()),
                test: inject_noise(&test, &NoiseSpec::symmetric(cell.eta, sub(4)))?.with_name(cell.name.clone()),
                truth: Some(vec![1.0; LS_DIM]),
            })
        }
        (DatasetSpec::File { noise, train_frac, test_frac, .. }, Size::Keep(keep)) => {
            let base = base.ok_or_else(|| BoostError::Structure("file dataset not loaded".into()))?;
            let (train, test) = split(base, *train_frac, *test_frac, sub(1))?;
            let train = subsample(&train, keep, sub(3))?;
            let noise = |seed| match noise {
                NoiseMode::Symmetric => NoiseSpec::symmetric(cell.eta, seed),
                NoiseMode::Negatives => NoiseSpec::negatives_only(cell.eta, seed),
            };
            Ok(Instance {
                seed,
                train: inject_noise(&train, &noise(sub(2)))?,
                test: inject_noise(&test, &noise(sub(4)))?,
                truth: None,
            })
        }
        _ => Err(BoostError::Structure("dataset cell does not match its spec".into())),
    }
}

fn error_against(scores: &[f64], labels: &[i8]) -> f64 {
    let wrong = scores.iter().zip(labels).filter(|(&s, &y)| sign(s) != y).count();
    wrong as f64 / labels.len() as f64
}

struct Finished {
    index: usize,
    record: RunRecord,
    snapshots: Option<(Vec<MarginRow>, Vec<CurveRow>)>,
    model: Option<Ensemble>,
}

fn execute(cfg: &ExperimentConfig, cell: &DataCell, spec: &RunSpec, inst: &Instance, snapshots: &[usize]) -> Finished {
    let booster = cfg.booster_config(spec.variant, spec.theta, spec.epsilon.unwrap_or(0.0));
    let mut record = RunRecord {
        algorithm: spec.variant.label(),
        dataset: cell.name.clone(),
        delta: cell.delta,
        eta: cell.eta,
        n_train: inst.train.n(),
        repeat: spec.repeat,
        seed: inst.seed,
        epsilon: spec.epsilon,
        epsilon_final: None,
        theta: if spec.variant.uses_theta() { spec.theta } else { 0.0 },
        test_err_true: None,
        test_err_noisy: None,
        train_err: None,
        t_f: None,
        e_f: None,
        auc: None,
        cosine: None,
        angle: None,
        iterations: 0,
        status: "error".into(),
        wall_ms: 0,
        group: spec.group,
        cell: spec.cell,
    };
    let start = Instant::now();
    let mut snaps = None;
    let mut model = None;
    match train(&inst.train, &booster) {
        Ok(run) => {
            let time_based = spec.variant.algorithm.is_time_based();
            record.status = run.status.as_str().into();
            record.iterations = run.iterations();
            record.train_err = Some(run.train_error);
            record.e_f = Some(run.final_train_error);
            if time_based {
                record.t_f = Some(run.final_time);
                record.epsilon_final = Some(run.final_epsilon);
            }
            match run.ensemble.scores(&inst.test) {
                Ok(scores) => {
                    let truth = inst.test.clean_labels();
                    record.test_err_true = Some(error_against(&scores, truth));
                    record.test_err_noisy = Some(error_against(&scores, inst.test.labels()));
                    record.auc = auc_from_scores(&scores, truth).ok();
                }
                Err(e) => eprintln!("{}: scoring failed: {e}", record.slug()),
            }
            if let Some(truth) = &inst.truth {
                record.cosine = cosine_to_true(&run.ensemble, truth).ok();
                record.angle = angle_to_true(&run.ensemble, truth).ok();
            }
            if !snapshots.is_empty() && cfg.margins.repeats.contains(&spec.repeat) {
                match emit_margin_snapshots(&run, &inst.train, snapshots) {
                    Ok(s) => snaps = Some(s),
                    Err(e) => eprintln!("{}: snapshot failed: {e}", record.slug()),
                }
            }
            if cfg.save_models {
                model = Some(run.ensemble);
            }
        }
        Err(e) => eprintln!("{}: training failed: {e}", record.slug()),
    }
    if cfg.wall_time {
        record.wall_ms = start.elapsed().as_millis();
    }
    Finished { index: 0, record, snapshots: snaps, model }
}

struct Writer {
    dir: PathBuf,
    results: csv::Writer<fs::File>,
    diagnostics: csv::Writer<fs::File>,
    pending: BTreeMap<usize, RunRecord>,
    next: usize,
    done: Vec<RunRecord>,
    total: usize,
    progress: bool,
}

impl Writer {
    fn new(dir: &Path, total: usize, progress: bool) -> Result<Self> {
        let mut results = csv::Writer::from_path(dir.join("results.csv"))?;
        results.write_record(output::RESULTS_HEADER)?;
        results.flush()?;
        let mut diagnostics = csv::Writer::from_path(dir.join("diagnostics.csv"))?;
        diagnostics.write_record(output::DIAGNOSTICS_HEADER)?;
        diagnostics.flush()?;
        Ok(Self {
            dir: dir.to_path_buf(),
            results,
            diagnostics,
            pending: BTreeMap::new(),
            next: 0,
            done: Vec::with_capacity(total),
            total,
            progress,
        })
    }

    fn accept(&mut self, f: Finished) -> Result<()> {
        let slug = f.record.slug();
        if let Some((margins, curves)) = &f.snapshots {
            output::write_margin_snapshots(&self.dir.join(format!("margins_{slug}.csv")), margins)?;
            if !curves.is_empty() {
                output::write_curves(&self.dir.join(format!("margins_{slug}_potential.csv")), curves)?;
            }
        }
        if let Some(model) = &f.model {
            let models = self.dir.join("models");
            fs::create_dir_all(&models)?;
            write_model_csv(model, &models.join(format!("{slug}.csv")))?;
        }
        self.pending.insert(f.index, f.record);
        // keep file order equal to run order regardless of completion order
        while let Some(rec) = self.pending.remove(&self.next) {
            self.results.write_record(rec.results_row())?;
            self.results.flush()?;
            self.diagnostics.write_record(rec.diagnostics_row())?;
            self.diagnostics.flush()?;
            self.next += 1;
            if self.progress {
                eprintln!(
                    "[{}/{}] {} status={} test_err={}",
                    self.next,
                    self.total,
                    rec.slug(),
                    rec.status,
                    opt(rec.test_err_true)
                );
            }
            self.done.push(rec);
        }
        Ok(())
    }
}

fn summarize(records: &[RunRecord]) -> Vec<SummaryRow> {
    let mut groups: BTreeMap<usize, Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        groups.entry(r.group).or_default().push(r);
    }
    groups
        .values()
        .map(|rs| {
            let first = rs[0];
            SummaryRow {
                algorithm: first.algorithm.clone(),
                dataset: first.dataset.clone(),
                delta: first.delta,
                eta: first.eta,
                n_train: first.n_train,
                theta: first.theta,
                epsilon: first.epsilon,
                runs: rs.len(),
                test_err_true: stat(rs.iter().map(|r| r.test_err_true)),
                test_err_noisy: stat(rs.iter().map(|r| r.test_err_noisy)),
                train_err: stat(rs.iter().map(|r| r.train_err)),
                auc: stat(rs.iter().map(|r| r.auc)),
                t_f: stat(rs.iter().map(|r| r.t_f)),
                epsilon_final: stat(rs.iter().map(|r| r.epsilon_final)),
            }
        })
        .collect()
}

/// Paired AUC comparison between every two configurations of the same data cell.
fn auc_pairs(records: &[RunRecord]) -> Vec<PairRow> {
    let mut by_cell: BTreeMap<usize, BTreeMap<usize, Vec<&RunRecord>>> = BTreeMap::new();
    for r in records {
        by_cell.entry(r.cell).or_default().entry(r.group).or_default().push(r);
    }
    let mut out = Vec::new();
    for groups in by_cell.values() {
        let groups: Vec<&Vec<&RunRecord>> = groups.values().collect();
        for (a, ga) in groups.iter().enumerate() {
            for gb in &groups[a + 1..] {
                let lookup: HashMap<usize, f64> = gb.iter().filter_map(|r| r.auc.map(|v| (r.repeat, v))).collect();
                let (xs, ys): (Vec<f64>, Vec<f64>) = ga
                    .iter()
                    .filter_map(|r| Some((r.auc?, *lookup.get(&r.repeat)?)))
                    .unzip();
                if xs.is_empty() {
                    continue;
                }
                let mean_diff = xs.iter().zip(&ys).map(|(x, y)| x - y).sum::<f64>() / xs.len() as f64;
                let test = paired_ttest(&xs, &ys).ok();
                let f = ga[0];
                out.push(PairRow {
                    dataset: f.dataset.clone(),
                    delta: f.delta,
                    eta: f.eta,
                    n_train: f.n_train,
                    first: f.full_label(),
                    second: gb[0].full_label(),
                    pairs: xs.len(),
                    mean_diff,
                    t: test.map(|t| t.0),
                    p: test.map(|t| t.1),
                });
            }
        }
    }
    out
}

fn write_tables(dir: &Path, summary: &[SummaryRow], pairs: &[PairRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(dir.join("summary.csv"))?;
    w.write_record(output::SUMMARY_HEADER)?;
    for s in summary {
        let mut row = vec![
            s.algorithm.clone(),
            s.dataset.clone(),
            opt(s.delta),
            s.eta.to_string(),
            s.n_train.to_string(),
            s.theta.to_string(),
            opt(s.epsilon),
            s.runs.to_string(),
        ];
        for st in [s.test_err_true, s.test_err_noisy, s.train_err, s.auc] {
            row.extend(stat_fields(st));
        }
        row.push(opt(s.t_f.map(|x| x.mean)));
        row.push(opt(s.epsilon_final.map(|x| x.mean)));
        w.write_record(&row)?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(dir.join("auc.csv"))?;
    w.write_record(output::AUC_HEADER)?;
    for s in summary {
        let mut row = vec![
            s.algorithm.clone(),
            s.dataset.clone(),
            opt(s.delta),
            s.eta.to_string(),
            s.n_train.to_string(),
            s.theta.to_string(),
            opt(s.epsilon),
            s.runs.to_string(),
        ];
        row.extend(stat_fields(s.auc));
        w.write_record(&row)?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(dir.join("auc_pairs.csv"))?;
    w.write_record(output::AUC_PAIRS_HEADER)?;
    for p in pairs {
        w.write_record([
            p.dataset.clone(),
            opt(p.delta),
            p.eta.to_string(),
            p.n_train.to_string(),
            p.first.clone(),
            p.second.clone(),
            p.pairs.to_string(),
            p.mean_diff.to_string(),
            opt(p.t),
            opt(p.p),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `potentials.csv` for the configured kinds and grid.
pub fn export_potentials(path: &Path, opts: &PotentialOptions) -> Result<usize> {
    let kinds = opts
        .kinds
        .iter()
        .map(|k| potential_by_name(k, opts.epsilon, opts.theta, opts.sigma_f))
        .collect::<Result<Vec<_>>>()?;
    write_potentials(path, &kinds, &linspace(opts.s_min, opts.s_max, opts.s_points), &opts.t_values)
}

/// Runs the whole sweep and writes every output file into the config's
/// output directory. With `progress` each finished run is logged to stderr.
pub fn run_experiment(cfg: &ExperimentConfig, progress: bool) -> Result<Report> {
    cfg.validate()?;
    let dir = cfg.output_dir();
    fs::create_dir_all(&dir)?;
    let cells = expand_cells(cfg);
    let runs = expand_runs(cfg, &cells)?;
    let snapshots = cfg.margins.snapshot_iterations(cfg.max_iters);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads.unwrap_or(0))
        .build()
        .map_err(|e| BoostError::Config(format!("thread pool: {e}")))?;

    let bases = cfg.datasets.iter().map(load_file_spec).collect::<Result<Vec<_>>>()?;
    let keys: Vec<(usize, usize)> =
        (0..cells.len()).flat_map(|c| (0..cfg.repeats).map(move |r| (c, r))).collect();
    let instances: Vec<Instance> = pool.install(|| {
        keys.par_iter()
            .map(|&(c, r)| build_instance(cfg, &cells[c], r, bases[cells[c].spec].as_ref()))
            .collect::<Result<Vec<_>>>()
    })?;

    let (tx, rx) = mpsc::channel::<Finished>();
    let mut writer = Writer::new(&dir, runs.len(), progress)?;
    let records = std::thread::scope(|scope| -> Result<Vec<RunRecord>> {
        let handle = scope.spawn(move || -> Result<Vec<RunRecord>> {
            for f in rx {
                writer.accept(f)?;
            }
            Ok(writer.done)
        });
        pool.install(|| {
            runs.par_iter().enumerate().for_each_with(tx, |tx, (index, spec)| {
                let inst = &instances[spec.cell * cfg.repeats + spec.repeat];
                let mut f = execute(cfg, &cells[spec.cell], spec, inst, &snapshots);
                f.index = index;
                // the writer only hangs up after an I/O error, which join reports
                let _ = tx.send(f);
            })
        });
        handle.join().map_err(|_| BoostError::Structure("writer thread panicked".into()))?
    })?;

    let summary = summarize(&records);
    let pairs = auc_pairs(&records);
    write_tables(&dir, &summary, &pairs)?;
    if let Some(p) = &cfg.potentials {
        export_potentials(&dir.join("potentials.csv"), p)?;
    }
    Ok(Report { output_dir: dir, records, summary, auc_pairs: pairs })
}

/// Loads, validates and runs a config file.
pub fn run_experiment_file(path: &Path, progress: bool) -> Result<Report> {
    run_experiment(&ExperimentConfig::load(path)?, progress)
}
