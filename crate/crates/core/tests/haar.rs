use abe_core::classify::{classify_report, ClassKind, Thresholds};
use abe_core::families::haar_random;
use abe_core::measures::{abe, marginal_det, pair_concurrence_sqr, MeasureSettings};
use abe_core::state::Qubit;
use rayon::prelude::*;

#[test]
fn first_amplitude_weight_is_beta_1_7() {
    let n = 100_000u64;
    let mut xs: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|s| haar_random(s).amplitudes()[0].norm_sqr())
        .collect();
    xs.sort_by(f64::total_cmp);
    let cdf = |x: f64| 1.0 - (1.0 - x).powi(7);
    let ks = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n as f64)
                .abs()
                .max(((i + 1) as f64 / n as f64 - f).abs())
        })
        .fold(0.0, f64::max);
    assert!(ks < 0.02, "KS statistic {ks}");

    let mean = xs.iter().sum::<f64>() / n as f64;
    assert!((mean - 0.125).abs() < 0.005, "mean {mean}");
}

#[test]
fn monogamy_holds() {
    for seed in 0..10_000 {
        let psi = haar_random(seed);
        let lhs = pair_concurrence_sqr(&psi, Qubit::B) + pair_concurrence_sqr(&psi, Qubit::A);
        assert!(
            lhs <= 4.0 * marginal_det(&psi, Qubit::C) + 1e-8,
            "seed {seed}"
        );
    }
}

#[test]
fn haar_samples_respect_bounds_and_classify_as_genuine() {
    let settings = MeasureSettings::default();
    let t = Thresholds::default();
    let failures: Vec<String> = (0..10_000u64)
        .into_par_iter()
        .filter_map(|seed| {
            let r = abe(&haar_random(seed), &settings).unwrap();
            if r.abe < -1e-9 || r.abe > r.delta_s + 1e-6 {
                return Some(format!("seed {seed}: abe {} delta_s {}", r.abe, r.delta_s));
            }
            if r.tangle <= 1e-6 && r.abe > 1e-4 && r.abe > 0.16 {
                return Some(format!("seed {seed}: W-like with abe {}", r.abe));
            }
            match classify_report(&r, &t) {
                Ok(label)
                    if matches!(
                        label.kind,
                        ClassKind::ProductABC | ClassKind::Biseparable(_)
                    ) =>
                {
                    Some(format!("seed {seed}: {}", label.kind))
                }
                _ => None,
            }
        })
        .collect();
    assert!(failures.is_empty(), "{failures:?}");
}
