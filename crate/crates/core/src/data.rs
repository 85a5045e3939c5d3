//! Synthetic Long-Servedio data, label noise, splits and file I/O.
//!
//! All randomness comes from ChaCha8 streams seeded with
//! `ChaCha8Rng::seed_from_u64`, so every operation is reproducible from its
//! seed on any platform. Sweeps derive per-run seeds with [`derive_seed`].

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{BoostError, Result};
use crate::model::Dataset;

pub const LS_DIM: usize = 21;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Mixes a master seed with stream coordinates (SplitMix64 finalizer per
/// coordinate). Distinct coordinate lists give unrelated streams.
pub fn derive_seed(master: u64, coords: &[u64]) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    coords.iter().fold(mix(master), |acc, &c| mix(acc ^ mix(c)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LsParams {
    pub n: usize,
    pub delta: usize,
    pub seed: u64,
}

/// Mixture component an LS example was drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LsComponent {
    LargeMargin,
    Puller,
    Penalizer,
}

fn check_ls(params: &LsParams) -> Result<()> {
    if params.n == 0 {
        return Err(BoostError::Parameter("LS sample count must be positive".into()));
    }
    // Pullers need 10 + delta <= 21; Penalizers need 5 + ceil(delta/2) <= 10.
    if params.delta > 10 {
        return Err(BoostError::Parameter(format!("LS delta must lie in 0..=10, got {}", params.delta)));
    }
    Ok(())
}

/// Draws an LS sample and reports each example's mixture component.
pub fn generate_ls_tagged(params: &LsParams) -> Result<(Dataset, Vec<LsComponent>)> {
    check_ls(params)?;
    let delta = params.delta;
    let mut rng = seeded_rng(params.seed);
    let mut features = Vec::with_capacity(params.n * LS_DIM);
    let mut labels = Vec::with_capacity(params.n);
    let mut components = Vec::with_capacity(params.n);
    let head_pos = 5 + delta / 2;
    let tail_pos = 5 + delta.div_ceil(2);
    for _ in 0..params.n {
        let y: i8 = if rng.random_bool(0.5) { 1 } else { -1 };
        let yf = f64::from(y);
        let mut x = [-yf; LS_DIM];
        let r: f64 = rng.random();
        let component = if r < 0.25 {
            x = [yf; LS_DIM];
            LsComponent::LargeMargin
        } else if r < 0.5 {
            x[..10 + delta].fill(yf);
            LsComponent::Puller
        } else {
            for j in index::sample(&mut rng, 11, head_pos) {
                x[j] = yf;
            }
            for j in index::sample(&mut rng, 10, tail_pos) {
                x[11 + j] = yf;
            }
            LsComponent::Penalizer
        };
        features.extend_from_slice(&x);
        labels.push(y);
        components.push(component);
    }
    let data = Dataset::from_flat(format!("ls-d{delta}"), features, LS_DIM, labels.clone())?
        .with_true_labels(labels)?;
    Ok((data, components))
}

pub fn generate_ls(params: &LsParams) -> Result<Dataset> {
    generate_ls_tagged(params).map(|(d, _)| d)
}

/// Class-conditional label flip probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub eta_pos: f64,
    pub eta_neg: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn symmetric(eta: f64, seed: u64) -> Self {
        Self { eta_pos: eta, eta_neg: eta, seed }
    }

    /// Flips negatives only.
    pub fn negatives_only(eta: f64, seed: u64) -> Self {
        Self { eta_pos: 0.0, eta_neg: eta, seed }
    }
}

/// Flips each label independently with its class's probability. The
/// pre-noise labels are kept in `true_labels`.
pub fn inject_noise(data: &Dataset, spec: &NoiseSpec) -> Result<Dataset> {
    for eta in [spec.eta_pos, spec.eta_neg] {
        if !(0.0..=1.0).contains(&eta) {
            return Err(BoostError::Parameter(format!("flip probability {eta} outside [0, 1]")));
        }
    }
    let mut rng = seeded_rng(spec.seed);
    let truth = data.clean_labels().to_vec();
    let noisy = truth
        .iter()
        .map(|&y| {
            let p = if y > 0 { spec.eta_pos } else { spec.eta_neg };
            let draw: f64 = rng.random();
            if draw < p {
                -y
            } else {
                y
            }
        })
        .collect();
    data.clone().with_labels(noisy).with_true_labels(truth)
}

/// Seeded shuffle, then the first `train_frac` of rows for training and the
/// next `test_frac` for testing. Sizes are floored; the rest is dropped.
pub fn split(data: &Dataset, train_frac: f64, test_frac: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    if !(train_frac > 0.0 && test_frac > 0.0 && train_frac + test_frac <= 1.0 + 1e-12) {
        return Err(BoostError::Parameter(format!(
            "split fractions {train_frac} / {test_frac} must be positive and sum to at most 1"
        )));
    }
    let n = data.n();
    let n_train = (train_frac * n as f64 + 1e-9).floor() as usize;
    let n_test = (test_frac * n as f64 + 1e-9).floor() as usize;
    if n_train == 0 || n_test == 0 {
        return Err(BoostError::Parameter(format!("split of {n} rows leaves an empty partition")));
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut seeded_rng(seed));
    let train = data.select(&idx[..n_train])?;
    let test = data.select(&idx[n_train..n_train + n_test])?;
    Ok((train, test))
}

/// Uniform subsample without replacement of `ceil(keep_frac * N)` rows,
/// kept in their original order.
pub fn subsample(data: &Dataset, keep_frac: f64, seed: u64) -> Result<Dataset> {
    if !(keep_frac > 0.0 && keep_frac <= 1.0) {
        return Err(BoostError::Parameter(format!("keep fraction {keep_frac} outside (0, 1]")));
    }
    let n = data.n();
    let keep = ((keep_frac * n as f64) - 1e-9).ceil().max(1.0) as usize;
    if keep >= n {
        return Ok(data.clone());
    }
    let mut idx = index::sample(&mut seeded_rng(seed), n, keep).into_vec();
    idx.sort_unstable();
    data.select(&idx)
}

/// How the label column of a delimited file maps to `{-1, +1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelMap {
    /// Labels are already `-1` / `+1`.
    Signed,
    /// Integer class codes in the set become `+1`, all others `-1`.
    Positive(HashSet<i64>),
}

impl LabelMap {
    pub fn positive(codes: impl IntoIterator<Item = i64>) -> Self {
        Self::Positive(codes.into_iter().collect())
    }
}

/// Loads a comma- or whitespace-separated numeric table. `label_column`
/// defaults to the last column. Separator is detected from the first
/// non-empty line.
pub fn load_delimited(path: &Path, label_column: Option<usize>, labels: &LabelMap) -> Result<Dataset> {
    let reader = BufReader::new(File::open(path)?);
    let mut comma: Option<bool> = None;
    let mut width = None;
    let mut features = Vec::new();
    let mut ys = Vec::new();
    let ingest = |row: usize, msg: String| BoostError::Ingestion { path: path.to_path_buf(), row, msg };
    for (lineno, line) in reader.lines().enumerate() {
        let row = lineno + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let is_comma = *comma.get_or_insert_with(|| line.contains(','));
        let fields: Vec<&str> = if is_comma {
            line.split(',').map(str::trim).collect()
        } else {
            line.split_whitespace().collect()
        };
        match width {
            None => {
                if fields.len() < 2 {
                    return Err(ingest(row, "need at least one feature and a label".into()));
                }
                width = Some(fields.len());
            }
            Some(w) if w != fields.len() => {
                return Err(ingest(row, format!("{} fields, expected {w}", fields.len())));
            }
            _ => {}
        }
        let label_at = label_column.unwrap_or(fields.len() - 1);
        if label_at >= fields.len() {
            return Err(ingest(row, format!("label column {label_at} out of range")));
        }
        for (j, field) in fields.iter().enumerate() {
            if j == label_at {
                let code: f64 = field
                    .parse()
                    .map_err(|_| ingest(row, format!("unparseable label {field:?}")))?;
                if code.fract() != 0.0 {
                    return Err(ingest(row, format!("label {field:?} is not an integer")));
                }
                let code = code as i64;
                let y = match labels {
                    LabelMap::Signed => match code {
                        1 => 1,
                        -1 => -1,
                        _ => return Err(ingest(row, format!("label {code} is not -1 or +1"))),
                    },
                    LabelMap::Positive(set) => {
                        if set.contains(&code) {
                            1
                        } else {
                            -1
                        }
                    }
                };
                ys.push(y);
            } else {
                let v: f64 = field
                    .parse()
                    .map_err(|_| ingest(row, format!("unparseable field {field:?} in column {j}")))?;
                features.push(v);
            }
        }
    }
    let d = width.ok_or(BoostError::EmptyInput("file has no rows"))? - 1;
    let name = path.file_stem().map_or_else(|| "data".to_string(), |s| s.to_string_lossy().into_owned());
    Dataset::from_flat(name, features, d, ys)
}

/// Writes the canonical dump: header `f0..f{d-1},label,true_label`.
pub fn write_dataset_csv(data: &Dataset, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header: Vec<String> = (0..data.d()).map(|j| format!("f{j}")).collect();
    header.push("label".into());
    header.push("true_label".into());
    w.write_record(&header)?;
    let truth = data.clean_labels();
    for i in 0..data.n() {
        let mut rec: Vec<String> = data.row(i).iter().map(|v| v.to_string()).collect();
        rec.push(data.label(i).to_string());
        rec.push(truth[i].to_string());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads the canonical dump written by [`write_dataset_csv`].
pub fn read_dataset_csv(path: &Path) -> Result<Dataset> {
    let mut r = csv::Reader::from_path(path)?;
    let header = r.headers()?.clone();
    let cols = header.len();
    if cols < 3 || &header[cols - 2] != "label" || &header[cols - 1] != "true_label" {
        return Err(BoostError::Ingestion {
            path: path.to_path_buf(),
            row: 1,
            msg: "header must end with label,true_label".into(),
        });
    }
    let d = cols - 2;
    let mut features = Vec::new();
    let mut labels = Vec::new();
    let mut truth = Vec::new();
    for (k, rec) in r.records().enumerate() {
        let rec = rec?;
        let row = k + 2;
        let bad = |msg: String| BoostError::Ingestion { path: path.to_path_buf(), row, msg };
        for j in 0..d {
            features.push(rec[j].parse::<f64>().map_err(|_| bad(format!("bad value {:?}", &rec[j])))?);
        }
        labels.push(rec[d].parse::<i8>().map_err(|_| bad(format!("bad label {:?}", &rec[d])))?);
        truth.push(rec[d + 1].parse::<i8>().map_err(|_| bad(format!("bad true_label {:?}", &rec[d + 1])))?);
    }
    let name = path.file_stem().map_or_else(|| "data".to_string(), |s| s.to_string_lossy().into_owned());
    Dataset::from_flat(name, features, d, labels)?.with_true_labels(truth)
}

/// Writes raw lines, used by tests and examples to stage delimited files.
pub fn write_lines(path: &Path, lines: &[String]) -> Result<()> {
    let mut f = File::create(path)?;
    for l in lines {
        writeln!(f, "{l}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ls(n: usize, delta: usize, seed: u64) -> Dataset {
        generate_ls(&LsParams { n, delta, seed }).unwrap()
    }

    #[test]
    fn puller_layout_delta_one() {
        let (data, comps) = generate_ls_tagged(&LsParams { n: 400, delta: 1, seed: 1 }).unwrap();
        let i = comps.iter().position(|&c| c == LsComponent::Puller).unwrap();
        let y = f64::from(data.label(i));
        let row = data.row(i);
        assert!(row[..11].iter().all(|&v| v == y));
        assert!(row[11..].iter().all(|&v| v == -y));
        assert_eq!(row.iter().sum::<f64>(), y);
    }

    #[test]
    fn penalizer_counts() {
        for delta in [1usize, 3] {
            let (data, comps) = generate_ls_tagged(&LsParams { n: 500, delta, seed: 2 }).unwrap();
            for (i, _) in comps.iter().enumerate().filter(|(_, &c)| c == LsComponent::Penalizer) {
                let y = f64::from(data.label(i));
                let row = data.row(i);
                let head = row[..11].iter().filter(|&&v| v == y).count();
                let tail = row[11..].iter().filter(|&&v| v == y).count();
                assert_eq!(head, 5 + delta / 2);
                assert_eq!(tail, 5 + delta.div_ceil(2));
            }
        }
    }

    #[test]
    fn all_ones_rule_is_perfect() {
        for delta in [1usize, 3] {
            for seed in 0..5 {
                let data = ls(2000, delta, seed);
                for i in 0..data.n() {
                    let sum: f64 = data.row(i).iter().sum();
                    assert_eq!(if sum > 0.0 { 1 } else { -1 }, data.label(i));
                }
            }
        }
    }

    #[test]
    fn mixture_proportions() {
        let n = 100_000;
        let (_, comps) = generate_ls_tagged(&LsParams { n, delta: 1, seed: 3 }).unwrap();
        for (target, p) in [(LsComponent::LargeMargin, 0.25), (LsComponent::Puller, 0.25), (LsComponent::Penalizer, 0.5)] {
            let count = comps.iter().filter(|&&c| c == target).count() as f64;
            let sd = (n as f64 * p * (1.0 - p)).sqrt();
            assert!((count - n as f64 * p).abs() < 3.0 * sd, "{target:?}: {count}");
        }
    }

    #[test]
    fn invalid_delta() {
        assert!(generate_ls(&LsParams { n: 10, delta: 11, seed: 0 }).is_err());
        assert!(generate_ls(&LsParams { n: 0, delta: 1, seed: 0 }).is_err());
    }

    #[test]
    fn noise_extremes_and_rate() {
        let data = ls(10_000, 1, 4);
        let same = inject_noise(&data, &NoiseSpec::symmetric(0.0, 9)).unwrap();
        assert_eq!(same.labels(), data.labels());

        let neg = inject_noise(&data, &NoiseSpec { eta_pos: 0.0, eta_neg: 1.0, seed: 9 }).unwrap();
        assert!(neg.labels().iter().all(|&y| y == 1));
        assert_eq!(neg.true_labels().unwrap(), data.labels());

        let noisy = inject_noise(&data, &NoiseSpec::symmetric(0.3, 9)).unwrap();
        let frac = noisy.noise_mask().iter().filter(|&&b| b).count() as f64 / 1e4;
        assert!((frac - 0.3).abs() <= 0.014, "{frac}");
        assert_eq!(noisy.features(), data.features());
        // mask XOR truth reproduces the observed labels
        for ((&m, &t), &y) in noisy.noise_mask().iter().zip(noisy.true_labels().unwrap()).zip(noisy.labels()) {
            assert_eq!(if m { -t } else { t }, y);
        }
        assert!(inject_noise(&data, &NoiseSpec::symmetric(1.5, 0)).is_err());
    }

    #[test]
    fn noise_keeps_existing_truth() {
        let data = ls(500, 1, 5);
        let once = inject_noise(&data, &NoiseSpec::symmetric(0.2, 1)).unwrap();
        let twice = inject_noise(&once, &NoiseSpec::symmetric(0.2, 2)).unwrap();
        assert_eq!(twice.true_labels(), data.true_labels());
    }

    #[test]
    fn split_sizes_and_disjointness() {
        let rows: Vec<Vec<f64>> = (0..100).map(|i| vec![i as f64]).collect();
        let data = Dataset::from_rows("ids", &rows, vec![1; 100]).unwrap();
        let (train, test) = split(&data, 0.7, 0.2, 11).unwrap();
        assert_eq!((train.n(), test.n()), (70, 20));
        let a: HashSet<u64> = train.features().iter().map(|v| *v as u64).collect();
        let b: HashSet<u64> = test.features().iter().map(|v| *v as u64).collect();
        assert!(a.is_disjoint(&b));
        let (train2, _) = split(&data, 0.7, 0.2, 11).unwrap();
        assert_eq!(train, train2);
        assert!(split(&data, 0.9, 0.2, 0).is_err());
        let tiny = Dataset::from_rows("t", &[vec![0.0], vec![1.0]], vec![1, 1]).unwrap();
        assert!(split(&tiny, 0.7, 0.2, 0).is_err());
    }

    #[test]
    fn subsample_sizes() {
        let rows: Vec<Vec<f64>> = (0..21_000).map(|i| vec![i as f64]).collect();
        let big = Dataset::from_rows("big", &rows, vec![1; 21_000]).unwrap();
        assert_eq!(subsample(&big, 0.25, 1).unwrap().n(), 5250);
        let sat = big.select(&(0..4504).collect::<Vec<_>>()).unwrap();
        assert_eq!(subsample(&sat, 0.25, 1).unwrap().n(), 1126);
        assert_eq!(subsample(&sat, 1.0, 1).unwrap(), sat);
        assert!(subsample(&sat, 0.0, 1).is_err());
    }

    #[test]
    fn seeds_reproduce_and_differ() {
        assert_eq!(ls(300, 3, 7), ls(300, 3, 7));
        assert_ne!(ls(300, 3, 7), ls(300, 3, 8));
        assert_ne!(derive_seed(1, &[2, 3]), derive_seed(1, &[3, 2]));
        assert_eq!(derive_seed(1, &[2, 3]), derive_seed(1, &[2, 3]));
    }

    #[test]
    fn delimited_ingestion() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sat.trn");
        write_lines(&path, &["1 2 3".into(), "4 5 7".into(), "".into(), "0.5 1e2 1".into()]).unwrap();
        let data = load_delimited(&path, None, &LabelMap::positive([1, 2, 3])).unwrap();
        assert_eq!((data.n(), data.d()), (3, 2));
        assert_eq!(data.labels(), &[1, -1, 1]);
        assert_eq!(data.row(2), &[0.5, 100.0]);

        let csv_path = dir.path().join("x.csv");
        write_lines(&csv_path, &["-1,0.1".into(), "1,0.2".into()]).unwrap();
        let data = load_delimited(&csv_path, Some(0), &LabelMap::Signed).unwrap();
        assert_eq!(data.labels(), &[-1, 1]);

        let ragged = dir.path().join("ragged.txt");
        write_lines(&ragged, &["1 2 1".into(), "1 2".into()]).unwrap();
        match load_delimited(&ragged, None, &LabelMap::Signed) {
            Err(BoostError::Ingestion { row, .. }) => assert_eq!(row, 2),
            other => panic!("{other:?}"),
        }
        let junk = dir.path().join("junk.txt");
        write_lines(&junk, &["1 2 1".into(), "1 2 1".into(), "1 x 1".into()]).unwrap();
        match load_delimited(&junk, None, &LabelMap::Signed) {
            Err(BoostError::Ingestion { row, .. }) => assert_eq!(row, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn canonical_csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ls.csv");
        let data = inject_noise(&ls(50, 1, 1), &NoiseSpec::symmetric(0.3, 1)).unwrap();
        write_dataset_csv(&data, &path).unwrap();
        let header = std::fs::read_to_string(&path).unwrap();
        assert!(header.starts_with("f0,f1,"));
        assert!(header.lines().next().unwrap().ends_with("f20,label,true_label"));
        let back = read_dataset_csv(&path).unwrap();
        assert_eq!(back.features(), data.features());
        assert_eq!(back.labels(), data.labels());
        assert_eq!(back.true_labels(), data.true_labels());
    }
}
