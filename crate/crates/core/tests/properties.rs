use proptest::prelude::*;

use ncboost::boosters::{train, Algorithm, BoosterConfig};
use ncboost::data::{generate_ls, inject_noise, split, subsample, LsParams, NoiseSpec};
use ncboost::metrics::{error_rate, Against};
use ncboost::model::{margin_histogram, Dataset, Ensemble, MarginState, Stump};
use ncboost::potentials::{BbmTable, PotentialKind};

fn dataset(rows: Vec<(f64, f64, bool)>) -> Dataset {
    let feats: Vec<Vec<f64>> = rows.iter().map(|r| vec![r.0, r.1]).collect();
    let labels = rows.iter().map(|r| if r.2 { 1 } else { -1 }).collect();
    Dataset::from_rows("p", &feats, labels).unwrap()
}

fn rows() -> impl Strategy<Value = Vec<(f64, f64, bool)>> {
    prop::collection::vec((-5.0..5.0f64, -5.0..5.0f64, any::<bool>()), 2..60)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn incremental_margins_match_recompute(
        rows in rows(),
        stumps in prop::collection::vec((0usize..2, -5.0..5.0f64, any::<bool>(), 0.0..2.0f64), 1..40),
    ) {
        let data = dataset(rows);
        let mut ens = Ensemble::new();
        let mut state = MarginState::zeros(data.n());
        for (f, thr, pos, alpha) in stumps {
            let stump = Stump::new(f, thr, if pos { 1 } else { -1 });
            ens.push(alpha, stump);
            state.step(alpha, &stump.agreement(&data));
        }
        let fresh = MarginState::from_ensemble(&ens, &data);
        for (a, b) in state.margins().iter().zip(fresh.margins()) {
            prop_assert!((a - b).abs() <= 1e-9 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn histogram_keeps_every_margin(m in prop::collection::vec(-3.0..3.0f64, 1..200), bins in 1usize..30) {
        let h = margin_histogram(&m, bins, -1.0, 1.0).unwrap();
        prop_assert_eq!(h.len(), bins);
        prop_assert_eq!(h.iter().sum::<usize>(), m.len());
    }

    #[test]
    fn noise_keeps_features_and_records_flips(n in 10usize..300, eta in 0.0..0.49f64, seed in any::<u64>()) {
        let clean = generate_ls(&LsParams { n, delta: 1, seed }).unwrap();
        let noisy = inject_noise(&clean, &NoiseSpec::symmetric(eta, seed ^ 1)).unwrap();
        prop_assert_eq!(noisy.features(), clean.features());
        let mask = noisy.noise_mask();
        for i in 0..n {
            let back = if mask[i] { -noisy.label(i) } else { noisy.label(i) };
            prop_assert_eq!(back, clean.label(i));
        }
    }

    #[test]
    fn label_channels_differ_by_at_most_the_flip_rate(
        n in 20usize..200, eta in 0.0..0.45f64, seed in any::<u64>(), f in 0usize..21, thr in -1.0..1.0f64,
    ) {
        let clean = generate_ls(&LsParams { n, delta: 3, seed }).unwrap();
        let noisy = inject_noise(&clean, &NoiseSpec::symmetric(eta, seed ^ 9)).unwrap();
        let ens = Ensemble::from_members(vec![ncboost::model::Member { alpha: 1.0, stump: Stump::new(f, thr, 1) }]);
        let flips = noisy.noise_mask().iter().filter(|&&b| b).count() as f64 / n as f64;
        let a = error_rate(&ens, &noisy, Against::Labels).unwrap();
        let b = error_rate(&ens, &noisy, Against::TrueLabels).unwrap();
        prop_assert!((a - b).abs() <= flips + 1e-12);
    }

    #[test]
    fn split_is_a_disjoint_partition(n in 10usize..400, seed in any::<u64>()) {
        // tag each row with its index in feature 0
        let rows: Vec<Vec<f64>> = (0..n).map(|i| vec![i as f64]).collect();
        let data = Dataset::from_rows("idx", &rows, vec![1; n]).unwrap();
        let (tr, te) = split(&data, 0.7, 0.2, seed).unwrap();
        prop_assert_eq!(tr.n(), (0.7 * n as f64 + 1e-9).floor() as usize);
        prop_assert_eq!(te.n(), (0.2 * n as f64 + 1e-9).floor() as usize);
        let mut ids: Vec<f64> = tr.features().iter().chain(te.features()).copied().collect();
        ids.sort_by(f64::total_cmp);
        ids.dedup();
        prop_assert_eq!(ids.len(), tr.n() + te.n());
    }

    #[test]
    fn subsample_size_is_the_ceiling(n in 1usize..500, keep in 0.01..1.0f64, seed in any::<u64>()) {
        let rows: Vec<Vec<f64>> = (0..n).map(|i| vec![i as f64]).collect();
        let data = Dataset::from_rows("idx", &rows, vec![-1; n]).unwrap();
        let s = subsample(&data, keep, seed).unwrap();
        prop_assert_eq!(s.n(), ((keep * n as f64) - 1e-9).ceil().max(1.0) as usize);
    }

    #[test]
    fn bbm_table_is_a_probability_falling_in_margin(rounds in 1usize..40, gamma in 0.01..0.49f64) {
        let table = BbmTable::new(rounds, gamma).unwrap();
        let r = rounds as i64 + 1;
        for t in 0..=rounds + 1 {
            for i in -r..r {
                let (a, b) = (table.get(t, i), table.get(t, i + 1));
                prop_assert!((0.0..=1.0).contains(&a));
                prop_assert!(b <= a + 1e-15);
            }
        }
    }

    #[test]
    fn erf_potentials_fall_in_s(eps in 0.01..0.45f64, theta in 0.0..0.3f64, t in 0.0..0.95f64, s in -3.0..3.0f64) {
        for kind in [PotentialKind::brown(eps).unwrap(), PotentialKind::robust(eps, theta, 0.001).unwrap()] {
            let (a, b) = (kind.potential(s, t).unwrap(), kind.potential(s + 0.01, t).unwrap());
            prop_assert!((0.0..=1.0 + 1e-12).contains(&a));
            prop_assert!(b <= a + 1e-15);
            prop_assert!(kind.weight(s, t).unwrap() >= 0.0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn permuting_examples_keeps_the_ensemble(seed in any::<u64>(), shift in 1usize..100) {
        // continuous features keep tie-breaks out of play
        let mut rng_rows = Vec::new();
        let mut labels = Vec::new();
        let mut x = seed | 1;
        for _ in 0..120 {
            let mut r = Vec::new();
            for _ in 0..3 {
                x ^= x << 13; x ^= x >> 7; x ^= x << 17;
                r.push((x >> 11) as f64 / (1u64 << 53) as f64 - 0.5);
            }
            labels.push(if r[0] + 0.5 * r[1] - 0.2 * r[2] >= 0.0 { 1 } else { -1 });
            rng_rows.push(r);
        }
        let data = Dataset::from_rows("a", &rng_rows, labels.clone()).unwrap();
        let n = rng_rows.len();
        let order: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();
        let permuted = data.select(&order).unwrap();
        for alg in [Algorithm::AdaBoost, Algorithm::Robust] {
            let cfg = if alg == Algorithm::Robust { BoosterConfig::new(alg).with_epsilon(0.1) } else { BoosterConfig::new(alg) };
            let cfg = cfg.with_max_iters(15);
            let a = train(&data, &cfg).unwrap();
            let b = train(&permuted, &cfg).unwrap();
            prop_assert_eq!(a.ensemble.len(), b.ensemble.len());
            for (ma, mb) in a.ensemble.members().iter().zip(b.ensemble.members()) {
                prop_assert_eq!(ma.stump, mb.stump);
                prop_assert!((ma.alpha - mb.alpha).abs() <= 1e-9 * (1.0 + ma.alpha.abs()));
            }
        }
    }
}
