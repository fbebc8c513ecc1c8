mod common;

use common::{index_of, linnik_contour, linnik_fisher_window, linnik_g_contour, reference_grid, small_grid};
use fracfisher::distributions::{
    gaussian_density, laplace_density, linnik_density, stable_density, LinnikMethod, StableOrder,
};
use fracfisher::information::{
    fractional_score, relative_fisher, relative_fisher_gaussian, relative_fisher_with, relative_fractional_score,
    FisherOptions, SUPPORT_FACTOR,
};
use fracfisher::spectral::{DensityProfile, GridSpec, RealProfile};
use fracfisher::Error;
use proptest::prelude::*;

const ORDERS: [f64; 3] = [1.2, 1.5, 1.8];

fn order(lambda: f64) -> StableOrder {
    StableOrder::new(lambda).unwrap()
}

fn linnik(lambda: f64, grid: &GridSpec) -> DensityProfile {
    linnik_density(order(lambda), grid, LinnikMethod::Inversion).unwrap()
}

#[test]
fn fixed_point_has_zero_information() {
    let grid = reference_grid();
    for lambda in ORDERS {
        let z = stable_density(order(lambda), &grid).unwrap();
        let report = relative_fisher(&z, order(lambda), 1.0).unwrap();
        assert!(report.value <= 1e-4, "lambda = {lambda}: {}", report.value);
        assert!(report.value >= 0.0 && report.truncation_estimate >= 0.0);
        assert_eq!(report.n_points, grid.n_points());
        assert_eq!(report.x_max, grid.x_max());
        // the threshold scales the largest quadrature-point density (midpoints for exact spectra)
        assert!((report.support_threshold / (SUPPORT_FACTOR * z.peak()) - 1.0).abs() < 1e-3);
    }
}

#[test]
fn catalog_separates_the_fixed_point() {
    let grid = reference_grid();
    let o = order(1.5);
    let others = [
        ("linnik", linnik(1.5, &grid)),
        ("laplace", laplace_density(&grid).unwrap()),
        ("gaussian", gaussian_density(1.0, &grid).unwrap()),
        (
            "gaussian-samples",
            gaussian_density(2.0, &grid).unwrap().without_model(),
        ),
    ];
    for (name, f) in &others {
        let value = relative_fisher(f, o, 1.0).unwrap().value;
        assert!(value > 0.01, "{name}: {value}");
    }
}

#[test]
fn classical_reduction_at_lambda_two() {
    let grid = small_grid();
    let two = StableOrder::new(2.0).unwrap();
    let g2 = gaussian_density(2.0, &grid).unwrap();
    assert!(relative_fisher(&g2, two, 1.0).unwrap().value <= 1e-6);
    let g1 = gaussian_density(1.0, &grid).unwrap();
    // (1/2 − 1)²·E[x²] at unit variance
    assert!((relative_fisher(&g1, two, 1.0).unwrap().value - 0.25).abs() <= 1e-3);
}

#[test]
fn gaussian_relative_information() {
    let grid = small_grid();
    for variance in [0.5, 1.0, 3.0] {
        let g = gaussian_density(variance, &grid).unwrap();
        assert!(relative_fisher_gaussian(&g, variance).unwrap() <= 1e-6);
    }
    let g1 = gaussian_density(1.0, &grid).unwrap();
    assert!((relative_fisher_gaussian(&g1, 2.0).unwrap() - 0.25).abs() <= 1e-3);
    assert!(matches!(
        relative_fisher_gaussian(&g1, 0.0),
        Err(Error::Parameter { name: "sigma", .. })
    ));
}

#[test]
fn lambda_two_matches_classical_functional() {
    let grid = small_grid();
    let two = StableOrder::new(2.0).unwrap();
    let candidates = [
        laplace_density(&grid).unwrap(),
        gaussian_density(0.7, &grid).unwrap(),
        linnik(1.5, &GridSpec::new(1 << 14, 200.0).unwrap()),
    ];
    for f in &candidates {
        let lhs = relative_fisher(f, two, 1.0).unwrap().value;
        let rhs = relative_fisher_gaussian(f, 2.0).unwrap();
        assert!((lhs - rhs).abs() <= 1e-6, "{lhs} vs {rhs}");
    }
}

#[test]
fn stable_score_is_linear() {
    let grid = reference_grid();
    for lambda in ORDERS {
        let z = stable_density(order(lambda), &grid).unwrap();
        let score = fractional_score(&z, order(lambda)).unwrap();
        assert_eq!(score.retained(), grid.n_points());
        assert!(score.sup_distance_to(|x| -x / lambda) <= 1e-3, "lambda = {lambda}");
        let relative = relative_fractional_score(&z, order(lambda), 1.0).unwrap();
        assert!(relative.sup_distance_to(|_| 0.0) <= 1e-3);
    }
}

#[test]
fn symmetric_density_has_antisymmetric_score() {
    let grid = small_grid();
    for f in [
        laplace_density(&grid).unwrap(),
        laplace_density(&grid).unwrap().without_model(),
    ] {
        let score = fractional_score(&f, order(1.5)).unwrap();
        assert!(score.profile.antisymmetry_defect() <= 1e-9 * score.profile.max_abs());
    }
}

#[test]
fn linnik_relative_score_is_g_over_p() {
    let grid = reference_grid();
    for lambda in [1.2, 1.5] {
        let p = linnik(lambda, &grid);
        let score = relative_fractional_score(&p, order(lambda), 1.0).unwrap();
        for x in [-7.0, 0.3, 1.0, 4.0, 30.0] {
            let j = index_of(&grid, x);
            let x = grid.x(j);
            let oracle = linnik_g_contour(lambda, x) / linnik_contour(lambda, x);
            let got = score.profile.samples()[j];
            assert!(
                (got - oracle).abs() <= 1e-6,
                "lambda = {lambda}, x = {x}: {got} vs {oracle}"
            );
        }
    }
}

#[test]
fn large_upsilon_recovers_the_plain_score() {
    let grid = small_grid();
    let f = laplace_density(&grid).unwrap();
    let plain = fractional_score(&f, order(1.5)).unwrap();
    for upsilon in [1e2, 1e4, 1e6] {
        let relative = relative_fractional_score(&f, order(1.5), upsilon).unwrap();
        let gap = relative.profile.sup_distance(&plain.profile).unwrap();
        // the offset x/(λυ) is largest at the window edge
        assert!(gap <= 1.0001 * grid.x_max() / (1.5 * upsilon));
    }
}

#[test]
fn linnik_information_matches_contour_quadrature() {
    let grid = reference_grid();
    for lambda in [1.2, 1.5] {
        let report = relative_fisher(&linnik(lambda, &grid), order(lambda), 1.0).unwrap();
        let oracle = linnik_fisher_window(lambda, grid.x_max());
        assert!(
            (report.value - oracle).abs() <= 1e-2 * oracle,
            "lambda = {lambda}: {} vs {oracle}",
            report.value
        );
        assert!((report.value - oracle).abs() <= 1e-4 * oracle + report.truncation_estimate);
    }
}

#[test]
fn support_threshold_is_stable() {
    let grid = reference_grid();
    let cases = [
        (linnik(1.5, &grid), order(1.5)),
        (gaussian_density(1.0, &grid).unwrap(), StableOrder::new(2.0).unwrap()),
        (stable_density(order(1.2), &grid).unwrap(), order(1.2)),
    ];
    for (f, o) in &cases {
        let full = relative_fisher(f, *o, 1.0).unwrap();
        let halved = relative_fisher_with(
            f,
            *o,
            1.0,
            FisherOptions {
                support_factor: 0.5 * SUPPORT_FACTOR,
            },
        )
        .unwrap();
        assert!((full.value - halved.value).abs() <= full.truncation_estimate);
    }
}

#[test]
fn report_serializes_with_documented_keys() {
    let grid = small_grid();
    let report = relative_fisher(&laplace_density(&grid).unwrap(), order(1.5), 1.0).unwrap();
    let json = serde_json::to_value(report).unwrap();
    let keys: Vec<&str> = json.as_object().unwrap().keys().map(String::as_str).collect();
    for key in [
        "lambda",
        "upsilon",
        "value",
        "support_threshold",
        "truncation_estimate",
        "n_points",
        "x_max",
    ] {
        assert!(keys.contains(&key), "{key}");
    }
    assert_eq!(keys.len(), 7);
}

#[test]
fn invalid_inputs_are_rejected() {
    let grid = small_grid();
    let f = laplace_density(&grid).unwrap();
    assert!(matches!(
        relative_fisher(&f, order(1.5), 0.0),
        Err(Error::Parameter { name: "upsilon", .. })
    ));
    assert!(matches!(
        relative_fractional_score(&f, order(1.5), f64::INFINITY),
        Err(Error::Parameter { name: "upsilon", .. })
    ));
    // a sampled profile that is far from normalized
    let half = RealProfile::new(grid, f.samples().iter().map(|v| 0.5 * v).collect()).unwrap();
    let half = DensityProfile::unchecked(half);
    assert!(matches!(
        relative_fisher(&half, order(1.5), 1.0),
        Err(Error::MassDeficit { .. })
    ));
}

fn gaussian_mixture(grid: &GridSpec, weight: f64, v1: f64, v2: f64) -> DensityProfile {
    let g1 = gaussian_density(v1, grid).unwrap();
    let g2 = gaussian_density(v2, grid).unwrap();
    let mix = RealProfile::linear_combination(weight, g1.profile(), 1.0 - weight, g2.profile()).unwrap();
    DensityProfile::new(mix).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn information_is_nonnegative(
        lambda in 1.1..2.0f64,
        upsilon in 0.25..4.0f64,
        weight in 0.0..1.0f64,
        v1 in 0.3..3.0f64,
        v2 in 0.3..3.0f64,
        samples_only in any::<bool>(),
    ) {
        let grid = GridSpec::new(2048, 40.0).unwrap();
        let mut f = gaussian_mixture(&grid, weight, v1, v2);
        if samples_only {
            f = f.without_model();
        }
        let report = relative_fisher(&f, order(lambda), upsilon).unwrap();
        prop_assert!(report.value >= 0.0);
        prop_assert!(report.truncation_estimate >= 0.0);
    }

    #[test]
    fn lambda_two_reduction_holds(weight in 0.0..1.0f64, v1 in 0.3..3.0f64, v2 in 0.3..3.0f64) {
        let grid = GridSpec::new(2048, 40.0).unwrap();
        let f = gaussian_mixture(&grid, weight, v1, v2);
        let two = StableOrder::new(2.0).unwrap();
        let lhs = relative_fisher(&f, two, 1.0).unwrap().value;
        let rhs = relative_fisher_gaussian(&f, 2.0).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-6);
    }
}
