mod common;

use common::{index_of, jensen_closed_form, linnik_g_contour, reference_grid, small_grid, tail_constant};
use fracfisher::attraction::{
    attraction_remainder, finiteness_certificate, fractional_moment, g_equivalence_check, h_moment_bounds,
    interpolation_constant, jensen_factor, linnik_g_physical, linnik_g_spectrum_analytic, Verdict, REMAINDER_THRESHOLD,
};
use fracfisher::distributions::{
    gaussian_density, linnik_density, linnik_spectrum, stable_spectrum, LinnikMethod, StableOrder,
};
use fracfisher::spectral::{inverse_transform, GridSpec, SpectralProfile};
use fracfisher::Error;
use proptest::prelude::*;

const ORDERS: [f64; 3] = [1.2, 1.5, 1.8];

fn order(lambda: f64) -> StableOrder {
    StableOrder::new(lambda).unwrap()
}

#[test]
fn linnik_remainder_has_closed_form() {
    let grid = reference_grid();
    for lambda in ORDERS {
        let report = attraction_remainder(&linnik_spectrum(order(lambda), &grid), order(lambda)).unwrap();
        assert_eq!(report.verdict, Verdict::Consistent);
        assert_eq!(report.remainder_trace.len(), grid.n_points() / 2 - 1);
        for &(xi, r) in &report.remainder_trace {
            let u = xi.powf(lambda);
            assert!((r - u / (1.0 + u)).abs() <= 1e-10, "xi = {xi}");
        }
        assert!((report.tail_constant_c - tail_constant(lambda)).abs() < 1e-12);
    }
}

#[test]
fn stable_spectrum_is_consistent_and_gaussian_is_not() {
    let grid = reference_grid();
    let stable = attraction_remainder(&stable_spectrum(order(1.5), 1.0, &grid).unwrap(), order(1.5)).unwrap();
    assert_eq!(stable.verdict, Verdict::Consistent);
    // R = 1 − (1 − e^{−u})/u ≈ u/2 for u = |ξ|^λ small
    assert!(stable.small_frequency_max <= 0.5 * (10.0 * grid.dxi()).powf(1.5) * 1.0001);

    let gaussian = stable_spectrum(StableOrder::new(2.0).unwrap(), 1.0, &grid).unwrap();
    let report = attraction_remainder(&gaussian, order(1.5)).unwrap();
    assert_eq!(report.verdict, Verdict::Inconsistent);
    assert!(report.small_frequency_max >= REMAINDER_THRESHOLD);
}

#[test]
fn remainder_trace_csv() {
    let grid = GridSpec::new(64, 10.0).unwrap();
    let report = attraction_remainder(&linnik_spectrum(order(1.5), &grid), order(1.5)).unwrap();
    let csv = report.trace_csv().unwrap();
    assert_eq!(csv.lines().next(), Some("xi,remainder"));
    assert_eq!(csv.lines().count(), 32);
}

#[test]
fn remainder_needs_unit_spectrum_at_origin() {
    let grid = small_grid();
    let stable = stable_spectrum(order(1.5), 1.0, &grid).unwrap();
    let halved = SpectralProfile::new(grid, stable.samples().iter().map(|v| v * 0.5).collect()).unwrap();
    assert!(matches!(
        attraction_remainder(&halved, order(1.5)),
        Err(Error::Parameter { name: "spectrum", .. })
    ));
}

#[test]
fn gaussian_second_moment() {
    let grid = small_grid();
    let g = gaussian_density(1.0, &grid).unwrap();
    let report = fractional_moment(&g, 2.0).unwrap();
    assert!((report.value - 1.0).abs() < 1e-10);
    assert!(!report.divergent);
    let first = fractional_moment(&g, 1.0).unwrap();
    // the kink of |x| at the origin costs the trapezoid sum O(dx²)
    assert!((first.value - (2.0 / std::f64::consts::PI).sqrt()).abs() < grid.dx().powi(2));
}

#[test]
fn linnik_moments_below_and_above_the_order() {
    let grid = reference_grid();
    for lambda in ORDERS {
        let p = linnik_density(order(lambda), &grid, LinnikMethod::Inversion).unwrap();
        let first = fractional_moment(&p, 1.0).unwrap();
        assert!(!first.divergent, "lambda = {lambda}: {first:?}");
        let below = fractional_moment(&p, 0.5 * lambda).unwrap();
        assert!(
            !below.divergent && below.relative_change < 0.05,
            "lambda = {lambda}: {below:?}"
        );
    }
    for lambda in [1.2, 1.5] {
        let p = linnik_density(order(lambda), &grid, LinnikMethod::Inversion).unwrap();
        let second = fractional_moment(&p, 2.0).unwrap();
        assert!(second.divergent, "lambda = {lambda}: {second:?}");
    }
}

#[test]
fn moment_rejects_bad_exponent() {
    let g = gaussian_density(1.0, &small_grid()).unwrap();
    for nu in [0.0, -1.0, f64::INFINITY] {
        assert!(matches!(
            fractional_moment(&g, nu),
            Err(Error::Parameter { name: "nu", .. })
        ));
    }
}

#[test]
fn g_spectrum_examples() {
    // dξ = 1/32, so ξ = 1 sits 32 samples above the centre
    let grid = GridSpec::new(128, std::f64::consts::PI * 32.0).unwrap();
    let s = linnik_g_spectrum_analytic(order(1.5), &grid).unwrap();
    let at_one = s.samples()[64 + 32];
    assert!(at_one.re.abs() < 1e-15 && (at_one.im - 0.25).abs() < 1e-15);
    assert_eq!(s.at_zero().norm(), 0.0);
    assert!(matches!(
        linnik_g_spectrum_analytic(StableOrder::new(2.0).unwrap(), &grid),
        Err(Error::Parameter { name: "lambda", .. })
    ));
}

#[test]
fn g_from_both_routes_agree() {
    let grid = reference_grid();
    for lambda in ORDERS {
        let gap = g_equivalence_check(order(lambda), &grid).unwrap();
        assert!(gap <= 1e-3, "lambda = {lambda}: {gap:e}");
        let g = linnik_g_physical(order(lambda), &grid).unwrap();
        assert!(g.antisymmetry_defect() <= 1e-9 * g.max_abs());
    }
}

#[test]
fn g_matches_contour_integral() {
    let grid = reference_grid();
    for lambda in [1.2, 1.5, 1.8] {
        let g = inverse_transform(&linnik_g_spectrum_analytic(order(lambda), &grid).unwrap()).unwrap();
        for x in [-3.0, 0.2, 1.0, 5.0, 40.0] {
            let j = index_of(&grid, x);
            let oracle = linnik_g_contour(lambda, grid.x(j));
            let got = g.samples()[j];
            assert!(
                (got - oracle).abs() <= 1e-8 * oracle.abs().max(1e-2),
                "lambda = {lambda}, x = {x}: {got} vs {oracle}"
            );
        }
    }
}

#[test]
fn h_moments_are_consistent() {
    let grid = reference_grid();
    for lambda in ORDERS {
        let m = h_moment_bounds(order(lambda), &grid).unwrap();
        assert!(m.l2 > 0.0 && m.x4 > 0.0 && m.direct > 0.0);
        assert!(m.plancherel_gap() < 1e-2, "lambda = {lambda}: {m:?}");
        assert!(m.direct <= m.interp, "lambda = {lambda}: {m:?}");
    }
}

/// `min_R (2R)^{1+λ} + R^{λ−3}` by scanning `ln R`.
fn brute_force_constant(lambda: f64) -> f64 {
    (0..=200_000)
        .map(|k| {
            let r = (-5.0 + 1e-4 * k as f64 * 0.5).exp();
            (2.0 * r).powf(1.0 + lambda) + r.powf(lambda - 3.0)
        })
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn interpolation_constant_is_the_split_minimum() {
    for lambda in [1.1, 1.2, 1.5, 1.8, 1.95] {
        let c = interpolation_constant(lambda);
        let brute = brute_force_constant(lambda);
        assert!(
            c <= brute * (1.0 + 1e-12) && (c - brute).abs() <= 1e-7 * c,
            "lambda = {lambda}: {c} vs {brute}"
        );
    }
}

#[test]
fn jensen_factor_matches_closed_form() {
    for lambda in [1.1, 1.2, 1.5, 1.8, 1.95] {
        let got = jensen_factor(order(lambda)).unwrap();
        let oracle = jensen_closed_form(lambda);
        assert!(
            (got - oracle).abs() <= 1e-9 * oracle,
            "lambda = {lambda}: {got} vs {oracle}"
        );
    }
    assert!(jensen_factor(StableOrder::new(2.0).unwrap()).is_err());
}

#[test]
fn finiteness_certificate_holds() {
    let grid = reference_grid();
    for lambda in ORDERS {
        let cert = finiteness_certificate(order(lambda), &grid).unwrap();
        assert!(cert.holds(), "lambda = {lambda}: {cert:?}");
        assert!(cert.fisher > 0.0 && cert.fisher < cert.envelope_bound);
        // g decays like |x|^{−2λ}
        assert!(
            (cert.g_tail_exponent + 2.0 * lambda).abs() < 0.1,
            "lambda = {lambda}: {}",
            cert.g_tail_exponent
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn interpolation_inequality_holds_for_any_split(lambda in 1.05..1.99f64, ln_r in -4.0..4.0f64) {
        let r = ln_r.exp();
        prop_assert!(interpolation_constant(lambda) <= (2.0 * r).powf(1.0 + lambda) + r.powf(lambda - 3.0) + 1e-12);
    }

    #[test]
    fn linnik_remainder_vanishes_at_the_origin(lambda in 1.2..2.0f64) {
        let grid = GridSpec::new(4096, 200.0).unwrap();
        let report = attraction_remainder(&linnik_spectrum(order(lambda), &grid), order(lambda)).unwrap();
        prop_assert_eq!(report.verdict, Verdict::Consistent);
        let (xi, r) = report.remainder_trace[0];
        prop_assert!(r <= xi.powf(lambda));
    }
}
