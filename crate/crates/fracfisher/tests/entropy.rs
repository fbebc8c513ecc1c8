mod common;

use common::{reference_grid, small_grid};
use fracfisher::clt::normalized_sum_density;
use fracfisher::distributions::{gaussian_density, linnik_density, stable_density, LinnikMethod, StableOrder};
use fracfisher::entropy::{
    entropy_bound_check, entropy_check_from, evolve, relative_entropy_lambda, time_nodes, EntropyReport, DEFAULT_NODES,
    DEFAULT_T_MAX,
};
use fracfisher::spectral::{DensityProfile, GridSpec, RealProfile, SpectralModel};
use fracfisher::Error;
use proptest::prelude::*;

fn order(lambda: f64) -> StableOrder {
    StableOrder::new(lambda).unwrap()
}

fn linnik(lambda: f64, grid: &GridSpec) -> DensityProfile {
    linnik_density(order(lambda), grid, LinnikMethod::Inversion).unwrap()
}

#[test]
fn zero_time_is_identity() {
    let grid = small_grid();
    let f = linnik(1.5, &grid);
    assert_eq!(evolve(&f, 0.0, 0.75).unwrap().samples(), f.samples());
}

#[test]
fn heat_flow_adds_variance() {
    let grid = small_grid();
    let g = gaussian_density(1.0, &grid).unwrap();
    for t in [0.1, 1.0, 4.0] {
        let expected = gaussian_density(1.0 + 2.0 * t, &grid).unwrap();
        for f in [g.clone(), g.without_model()] {
            let ft = evolve(&f, t, 1.0).unwrap();
            assert!(
                ft.profile().sup_distance(expected.profile()).unwrap() < 1e-12,
                "t = {t}"
            );
        }
    }
}

#[test]
fn point_mass_evolves_into_the_stable_law() {
    let grid = reference_grid();
    let mut delta = vec![0.0; grid.n_points()];
    delta[grid.center()] = 1.0 / grid.dx();
    let delta = DensityProfile::from_samples(grid, delta).unwrap();
    for (alpha, t) in [(0.75, 1.0), (0.9, 2.5)] {
        let ft = evolve(&delta, t, alpha).unwrap();
        let stable = RealProfile::from_model(SpectralModel::stable(2.0 * alpha, t), grid).unwrap();
        // the periodic inversion folds in the far tails beyond the window
        assert!(ft.profile().sup_distance(&stable).unwrap() < 1e-6, "alpha = {alpha}");
    }
}

#[test]
fn stable_laws_move_along_their_scale() {
    let grid = small_grid();
    let z = stable_density(order(1.5), &grid).unwrap();
    let zt = evolve(&z, 2.0, 0.75).unwrap();
    let expected = RealProfile::from_model(SpectralModel::stable(1.5, 3.0), grid).unwrap();
    assert!(zt.profile().sup_distance(&expected).unwrap() < 1e-10);
}

#[test]
fn evolution_is_a_semigroup() {
    let grid = small_grid();
    let cases = [
        (linnik(1.5, &grid), 0.75),
        (gaussian_density(0.5, &grid).unwrap().without_model(), 0.9),
    ];
    for (f, alpha) in &cases {
        for (s, t) in [(0.5, 1.0), (2.0, 3.0)] {
            let two_steps = evolve(&evolve(f, s, *alpha).unwrap(), t, *alpha).unwrap();
            let one_step = evolve(f, s + t, *alpha).unwrap();
            assert!(two_steps.profile().sup_distance(one_step.profile()).unwrap() < 1e-10);
        }
    }
}

#[test]
fn evolution_conserves_mass() {
    let grid = reference_grid();
    let p = linnik(1.5, &grid);
    let g = gaussian_density(1.0, &small_grid()).unwrap().without_model();
    for t in [0.5, 2.0, 10.0] {
        let pt = evolve(&p, t, 0.75).unwrap();
        assert!((pt.profile().spectral_mass() - 1.0).abs() <= 1e-6);
        let gt = evolve(&g, t, 1.0).unwrap();
        assert!((gt.mass() - g.mass()).abs() <= 1e-6);
    }
}

#[test]
fn evolve_rejects_bad_arguments() {
    let f = linnik(1.5, &small_grid());
    assert!(matches!(
        evolve(&f, -1.0, 0.75),
        Err(Error::Parameter { name: "t", .. })
    ));
    for alpha in [0.5, 1.1] {
        assert!(matches!(
            evolve(&f, 1.0, alpha),
            Err(Error::Parameter { name: "alpha", .. })
        ));
    }
}

#[test]
fn time_nodes_are_log_spaced() {
    let ts = time_nodes(50.0, 9);
    assert_eq!(ts.len(), 9);
    assert_eq!(ts[0], 0.0);
    assert!((ts[8] - 50.0).abs() < 1e-12);
    let steps: Vec<f64> = ts.windows(2).map(|w| ((1.0 + w[1]) / (1.0 + w[0])).ln()).collect();
    assert!(steps.iter().all(|s| (s - steps[0]).abs() < 1e-12));
}

#[test]
fn stable_law_has_zero_entropy() {
    let grid = reference_grid();
    for lambda in [1.5, 1.8] {
        let z = stable_density(order(lambda), &grid).unwrap();
        let report = relative_entropy_lambda(&z, order(lambda), DEFAULT_T_MAX, 9).unwrap();
        assert!(
            report.value <= 1e-3 && report.upper() <= 1e-3,
            "lambda = {lambda}: {report:?}"
        );
    }
}

#[test]
fn linnik_entropy_bound() {
    let grid = reference_grid();
    let p = linnik(1.5, &grid);
    let report = relative_entropy_lambda(&p, order(1.5), DEFAULT_T_MAX, DEFAULT_NODES).unwrap();
    assert_eq!(report.nodes, DEFAULT_NODES);
    assert!(report.value >= 0.0 && report.trace.iter().all(|(_, h)| *h >= 0.0));
    assert!(report.tail_bound > 0.0 && report.tail_bound.is_finite());
    let check = entropy_check_from(&report);
    assert!(check.holds(), "{check:?}");
    assert_eq!(check.rhs, 3.0 * report.fisher_at_zero);
    assert!(check.lhs < check.rhs);

    // every node is dominated by the scaling-plus-contraction majorant
    let i0 = report.fisher_at_zero;
    for &(t, h) in &report.trace {
        let sharp = i0 / (1.0 + t).powi(2);
        assert!(h <= sharp * (1.0 + 1e-6) + 1e-8, "t = {t}: {h} vs {sharp}");
        assert!(h <= (1.0 + t).powf(-2.0 * (1.0 - 1.0 / 1.5)) * i0 + 1e-8);
    }

    let csv = report.trace_csv().unwrap();
    assert_eq!(csv.lines().next(), Some("t,integrand"));
    assert_eq!(csv.lines().count(), DEFAULT_NODES + 1);
}

#[test]
fn bound_factor_arithmetic() {
    let report = EntropyReport {
        lambda: 1.8,
        value: 0.5,
        t_max: 50.0,
        nodes: 3,
        tail_bound: 0.1,
        fisher_at_zero: 1.0,
        quadrature_error: 0.0,
        truncation: 0.0,
        trace: Vec::new(),
    };
    let check = entropy_check_from(&report);
    assert!((check.rhs - 9.0).abs() < 1e-12);
    assert!((check.lhs - 0.6).abs() < 1e-15);
}

#[test]
fn entropy_bound_needs_lambda_below_two() {
    let g = gaussian_density(2.0, &small_grid()).unwrap();
    let err = entropy_bound_check(&g, StableOrder::new(2.0).unwrap()).unwrap_err();
    assert!(matches!(err, Error::Parameter { name: "lambda", .. }));
    let err = relative_entropy_lambda(&g, order(1.5), 50.0, 2).unwrap_err();
    assert!(matches!(err, Error::Parameter { name: "nodes", .. }));
}

#[test]
fn entropy_decreases_along_normalized_sums() {
    let grid = GridSpec::new(1 << 15, 100.0).unwrap();
    let o = order(1.5);
    let p = linnik(1.5, &grid);
    let rate = o.rate_exponent();
    let reports: Vec<EntropyReport> = (1..=3)
        .map(|n| {
            let tn = normalized_sum_density(&p, n, o).unwrap();
            relative_entropy_lambda(&tn, o, DEFAULT_T_MAX, 17).unwrap()
        })
        .collect();
    let first = reports[0].upper();
    for (k, pair) in reports.windows(2).enumerate() {
        let n = (k + 2) as f64;
        let tol =
            10.0 * (pair[0].truncation + pair[1].truncation) + pair[0].quadrature_error + pair[1].quadrature_error;
        assert!(pair[1].value <= pair[0].value + tol, "n = {n}");
        assert!(
            pair[1].value <= ((n - 1.0) / n).powf(rate) * pair[0].value + tol,
            "n = {n}"
        );
        assert!(pair[1].value <= n.powf(-rate) * first + tol, "n = {n}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn semigroup_property(alpha in 0.55..1.0f64, s in 0.0..5.0f64, t in 0.0..5.0f64, variance in 0.3..3.0f64) {
        let grid = GridSpec::new(2048, 60.0).unwrap();
        let g = gaussian_density(variance, &grid).unwrap();
        for f in [g.clone(), g.without_model()] {
            let two_steps = evolve(&evolve(&f, s, alpha).unwrap(), t, alpha).unwrap();
            let one_step = evolve(&f, s + t, alpha).unwrap();
            prop_assert!(two_steps.profile().sup_distance(one_step.profile()).unwrap() < 1e-10);
        }
    }

    #[test]
    fn exact_mass_is_conserved(alpha in 0.55..1.0f64, t in 0.0..10.0f64, lambda in 1.2..2.0f64) {
        let grid = GridSpec::new(1024, 60.0).unwrap();
        let f = DensityProfile::unchecked(
            RealProfile::from_model(SpectralModel::linnik(lambda), grid).unwrap(),
        );
        let ft = evolve(&f, t, alpha).unwrap();
        prop_assert!((ft.profile().spectral_mass() - 1.0).abs() <= 1e-6);
    }
}
