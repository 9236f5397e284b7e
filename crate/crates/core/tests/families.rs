use std::f64::consts::FRAC_1_SQRT_2;

use abe_core::families::{ghz_one_param, w_two_param};
use abe_core::info::binary_entropy;
use abe_core::measures::{abe, eof_wootters, w2_analytic, w2_analytic_state, MeasureSettings};
use abe_core::state::{partial_trace, von_neumann_entropy, Qubit};
use rayon::prelude::*;

/// Largest activated entanglement in the two-parameter W family, from the
/// closed forms at `λ0 = λ3 = 0.45342416985918...` (mpmath, 30 digits).
const W2_SUPREMUM: f64 = 0.14985016661575572;

#[test]
fn ghz_saturates_upper_bound() {
    let s = MeasureSettings::default();
    for k in 0..=50 {
        let l1 = k as f64 / 50.0;
        let psi = ghz_one_param(l1).unwrap();
        let r = abe(&psi, &s).unwrap();
        let h = binary_entropy(l1 * l1);
        let s_ab = von_neumann_entropy(&partial_trace(&psi, &[Qubit::A, Qubit::B]).unwrap());
        assert!((r.abe - h).abs() < 1e-6, "l1 {l1}");
        assert!((r.e_a - h).abs() < 1e-6);
        assert!((s_ab - h).abs() < 1e-6);
    }
}

#[test]
fn w2_closed_forms_match_numerics_on_grid() {
    let s = MeasureSettings::default();
    let pts: Vec<(f64, f64)> = (0..=50)
        .flat_map(|i| (0..=50).map(move |j| (i as f64 * 0.02, j as f64 * 0.02)))
        .filter(|(a, b)| a * a + b * b <= 1.0)
        .collect();
    let bad: Vec<String> = pts
        .par_iter()
        .filter_map(|&(l0, l3)| {
            let exact = w2_analytic(l0, l3).unwrap();
            let psi = w2_analytic_state(l0, l3).unwrap();
            let r = abe(&psi, &s).unwrap();
            let rho = partial_trace(&psi, &[Qubit::A, Qubit::B]).unwrap();
            let ef = eof_wootters(&rho).unwrap();
            let ok = (r.e_a - exact.e_a).abs() < 1e-6
                && (ef - exact.e_f).abs() < 1e-6
                && (r.delta_s - exact.delta_s).abs() < 1e-6;
            (!ok).then(|| {
                format!(
                    "({l0}, {l3}): e_a {} vs {}, e_f {} vs {}",
                    r.e_a, exact.e_a, ef, exact.e_f
                )
            })
        })
        .collect();
    assert!(
        bad.is_empty(),
        "{} mismatches, first {:?}",
        bad.len(),
        bad.first()
    );
}

#[test]
fn w2_supremum() {
    let l = 0.453_424_169_859_180_6;
    let v = w2_analytic(l, l).unwrap().abe();
    assert!((v - W2_SUPREMUM).abs() < 1e-15);
    let r = abe(
        &w2_analytic_state(l, l).unwrap(),
        &MeasureSettings::default(),
    )
    .unwrap();
    assert!((r.abe - W2_SUPREMUM).abs() < 1e-9, "{}", r.abe);
}

#[test]
fn ordinary_w_values() {
    let s = 1.0 / 3f64.sqrt();
    let r = abe(&w_two_param(s, s).unwrap(), &MeasureSettings::default()).unwrap();
    assert!((r.e_a - 2.0 / 3.0).abs() < 1e-9);
    assert!((r.abe - 0.11661890708390923).abs() < 1e-9);
    assert!((r.delta_s - 0.9182958340544896).abs() < 1e-9);
    assert!(r.tangle < 1e-12);

    let g = abe(
        &ghz_one_param(FRAC_1_SQRT_2).unwrap(),
        &MeasureSettings::default(),
    )
    .unwrap();
    assert!((g.abe - 1.0).abs() < 1e-9 && (g.tangle - 1.0).abs() < 1e-9);
}
