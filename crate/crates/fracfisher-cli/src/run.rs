//! One experiment per command: each calls the matching library operation,
//! records every inequality it is meant to confirm as a contract, and returns
//! the report together with its plot-ready CSV traces.

use std::fmt::Write as _;

use fracfisher::attraction::{
    attraction_remainder, finiteness_certificate, fractional_moment, g_equivalence_check, h_moment_bounds,
    linnik_g_physical, linnik_g_spectrum_analytic, Verdict, REMAINDER_THRESHOLD,
};
use fracfisher::clt::{
    blachman_stam_check, monotonicity_sweep, scaling_identity_check, smooth_with_stable, smoothing_contraction_check,
    variance_drop_mc,
};
use fracfisher::distributions::{
    gaussian_density, laplace_density, linnik_density, linnik_spectrum, stable_density, stable_eigen_residual,
    stable_spectrum, LinnikMethod, StableOrder,
};
use fracfisher::entropy::{entropy_check_from, evolve, relative_entropy_lambda};
use fracfisher::information::{relative_fisher, relative_fisher_gaussian, relative_fractional_score};
use fracfisher::spectral::{inverse_transform, DensityProfile, GridSpec, RealProfile, DEFAULT_MASS_TOLERANCE};
use fracfisher::Result;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Command, ExperimentConfig, Law};

/// Sup-norm gap allowed between the two Linnik constructions.
const MIXTURE_AGREEMENT: f64 = 1e-4;
/// Sup-norm gap allowed between `p_2` and the Laplace density.
const LAPLACE_AGREEMENT: f64 = 1e-8;
const FIXED_POINT_FISHER: f64 = 1e-4;
const FIXED_POINT_ENTROPY: f64 = 1e-3;
const EIGEN_RESIDUAL: f64 = 1e-4;
const CLASSICAL_AGREEMENT: f64 = 1e-6;
const STABLE_PAIR_EQUALITY: f64 = 1e-4;
const SCALING_AGREEMENT: f64 = 1e-3;
const MASS_CONSERVATION: f64 = 1e-6;
const G_EQUIVALENCE: f64 = 1e-3;
const PLANCHEREL_AGREEMENT: f64 = 1e-2;
const REMAINDER_CLOSED_FORM: f64 = 1e-10;

/// A checked inequality `lhs ≤ rhs + tolerance`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Contract {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub tolerance: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub config: ExperimentConfig,
    pub results: Value,
    pub contracts: Vec<Contract>,
    /// Names of the contracts that failed.
    pub violations: Vec<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A CSV file `trace-{name}.csv`.
#[derive(Clone, Debug, PartialEq)]
pub struct Trace {
    pub name: &'static str,
    pub csv: String,
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub report: Report,
    pub traces: Vec<Trace>,
}

#[derive(Default)]
struct Contracts(Vec<Contract>);

impl Contracts {
    fn check(&mut self, name: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) {
        // written so that NaN on either side fails
        let holds = lhs <= rhs + tolerance;
        self.0.push(Contract {
            name: name.into(),
            lhs,
            rhs,
            tolerance,
            holds,
        });
    }

    fn at_most(&mut self, name: impl Into<String>, value: f64, limit: f64) {
        self.check(name, value, limit, 0.0);
    }
}

fn law_density(law: Law, config: &ExperimentConfig, order: StableOrder, grid: &GridSpec) -> Result<DensityProfile> {
    match law {
        Law::Stable => stable_density(order, grid),
        Law::Linnik => linnik_density(order, grid, LinnikMethod::Inversion),
        Law::Gaussian => gaussian_density(config.variance, grid),
        Law::Laplace => laplace_density(grid),
    }
}

fn law_name(law: Law) -> &'static str {
    match law {
        Law::Stable => "stable",
        Law::Linnik => "linnik",
        Law::Gaussian => "gaussian",
        Law::Laplace => "laplace",
    }
}

/// Columns `x` followed by one column per profile, all on the same grid.
fn profiles_csv(header: &[&str], profiles: &[&RealProfile]) -> String {
    let grid = profiles[0].grid();
    let mut out = header.join(",");
    out.push('\n');
    for j in 0..grid.n_points() {
        write!(out, "{:e}", grid.x(j)).unwrap();
        for p in profiles {
            write!(out, ",{:e}", p.samples()[j]).unwrap();
        }
        out.push('\n');
    }
    out
}

/// Runs the configured experiment.
pub fn run(config: &ExperimentConfig) -> Result<RunOutput> {
    let config = config.clone().resolved();
    let grid = GridSpec::new(config.n_points, config.x_max)?;
    let order = StableOrder::new(config.lambda)?;
    let mut contracts = Contracts::default();
    let (results, traces) = match config.command {
        Command::Stable => stable(order, &grid, &mut contracts)?,
        Command::Linnik => linnik(order, &grid, &mut contracts)?,
        Command::Fisher => fisher(&config, order, &grid, &mut contracts)?,
        Command::CltSweep => clt_sweep(&config, order, &grid, &mut contracts)?,
        Command::BsCheck => bs_check(&config, order, &grid, &mut contracts)?,
        Command::Diffuse => diffuse(&config, order, &grid, &mut contracts)?,
        Command::Entropy => entropy(&config, order, &grid, &mut contracts)?,
        Command::VerifyAppendix => verify_appendix(order, &grid, &mut contracts)?,
        Command::Udrop => udrop(&config, &mut contracts)?,
    };
    let violations = contracts
        .0
        .iter()
        .filter(|c| !c.holds)
        .map(|c| c.name.clone())
        .collect();
    Ok(RunOutput {
        report: Report {
            command: config.command.name(),
            config,
            results,
            contracts: contracts.0,
            violations,
        },
        traces,
    })
}

type Outcome = Result<(Value, Vec<Trace>)>;

fn normalization(contracts: &mut Contracts, f: &DensityProfile) {
    contracts.at_most(
        "normalization",
        (f.mass() + f.truncation_estimate() - 1.0).abs(),
        DEFAULT_MASS_TOLERANCE,
    );
}

fn stable(order: StableOrder, grid: &GridSpec, contracts: &mut Contracts) -> Outcome {
    let z = stable_density(order, grid)?;
    let residual = stable_eigen_residual(&z, order)?;
    contracts.at_most("eigen_relation", residual, EIGEN_RESIDUAL);
    normalization(contracts, &z);
    let results = json!({
        "peak": z.peak(),
        "mass": z.mass(),
        "truncation": z.truncation_estimate(),
        "symmetry_defect": z.profile().symmetry_defect(),
        "eigen_residual": residual,
    });
    let traces = vec![Trace {
        name: "density",
        csv: profiles_csv(&["x", "density"], &[z.profile()]),
    }];
    Ok((results, traces))
}

fn linnik(order: StableOrder, grid: &GridSpec, contracts: &mut Contracts) -> Outcome {
    let p = linnik_density(order, grid, LinnikMethod::Inversion)?;
    normalization(contracts, &p);
    let (reference, name, limit) = if order.is_gaussian() {
        (laplace_density(grid)?, "laplace_base", LAPLACE_AGREEMENT)
    } else {
        (
            linnik_density(order, grid, LinnikMethod::Mixture)?,
            "mixture_agreement",
            MIXTURE_AGREEMENT,
        )
    };
    let gap = p.profile().sup_distance(reference.profile())?;
    contracts.at_most(name, gap, limit);
    let results = json!({
        "peak": p.peak(),
        "mass": p.mass(),
        "truncation": p.truncation_estimate(),
        "reference": if order.is_gaussian() { "laplace" } else { "mixture" },
        "sup_gap": gap,
    });
    let traces = vec![Trace {
        name: "density",
        csv: profiles_csv(&["x", "inversion", "reference"], &[p.profile(), reference.profile()]),
    }];
    Ok((results, traces))
}

fn fisher(config: &ExperimentConfig, order: StableOrder, grid: &GridSpec, contracts: &mut Contracts) -> Outcome {
    let law = config.law();
    let f = law_density(law, config, order, grid)?;
    let report = relative_fisher(&f, order, config.upsilon)?;
    contracts.at_most("nonnegative", -report.value, 0.0);
    if law == Law::Stable && config.upsilon == 1.0 {
        contracts.at_most("fixed_point", report.value, FIXED_POINT_FISHER);
    }
    let mut results = json!({ "law": law_name(law), "fisher": report });
    if order.is_gaussian() && config.upsilon == 1.0 {
        // at λ = 2 the functional is the classical one relative to N(0, 2)
        let classical = relative_fisher_gaussian(&f, 2.0)?;
        contracts.at_most(
            "classical_reduction",
            (report.value - classical).abs(),
            CLASSICAL_AGREEMENT,
        );
        results["classical"] = json!(classical);
    }
    let score = relative_fractional_score(&f, order, config.upsilon)?;
    let mut csv = String::from("x,relative_score,retained\n");
    for (j, (v, kept)) in score.profile.samples().iter().zip(&score.mask).enumerate() {
        writeln!(csv, "{:e},{v:e},{}", grid.x(j), u8::from(*kept)).unwrap();
    }
    Ok((results, vec![Trace { name: "score", csv }]))
}

fn clt_sweep(config: &ExperimentConfig, order: StableOrder, grid: &GridSpec, contracts: &mut Contracts) -> Outcome {
    let law = config.law();
    let f = law_density(law, config, order, grid)?;
    let sweep = monotonicity_sweep(&f, order, config.n_max)?;
    for e in &sweep.entries {
        if let Some(bound) = e.step_bound {
            contracts.check(
                format!("step_bound[n={}]", e.n),
                e.fisher.value,
                bound,
                e.step_tolerance,
            );
        }
        contracts.check(
            format!("global_bound[n={}]", e.n),
            e.fisher.value,
            e.global_bound,
            e.global_tolerance,
        );
    }
    let smoothing = smoothing_contraction_check(&f, config.epsilon, order)?;
    contracts.check(
        "smoothing_contraction",
        smoothing.lhs,
        smoothing.rhs,
        smoothing.tolerance,
    );
    let scaling = scaling_identity_check(&f, order, config.upsilon)?;
    contracts.at_most("scaling_identity", scaling.relative_gap(), SCALING_AGREEMENT);
    let results = json!({
        "law": law_name(law),
        "sweep": sweep,
        "non_increasing": sweep.non_increasing(),
        "smoothing": smoothing,
        "scaling": scaling,
    });
    Ok((
        results,
        vec![Trace {
            name: "sweep",
            csv: sweep.to_csv()?,
        }],
    ))
}

fn bs_check(config: &ExperimentConfig, order: StableOrder, grid: &GridSpec, contracts: &mut Contracts) -> Outcome {
    let base = linnik_density(order, grid, LinnikMethod::Inversion)?;
    let laws = [
        ("linnik", base.clone()),
        ("smoothed-linnik", smooth_with_stable(&base, config.epsilon, order)?),
        ("stable", stable_density(order, grid)?),
    ];
    let mut pairs = Vec::new();
    let mut csv = String::from("first,second,delta,lhs,rhs,tolerance\n");
    for (name1, f1) in &laws {
        for (name2, f2) in &laws {
            let check = blachman_stam_check(f1, f2, config.delta, order)?;
            contracts.check(
                format!("blachman_stam[{name1},{name2}]"),
                check.lhs,
                check.rhs,
                check.tolerance,
            );
            if *name1 == "stable" && *name2 == "stable" {
                contracts.at_most("stable_equality", (check.lhs - check.rhs).abs(), STABLE_PAIR_EQUALITY);
            }
            writeln!(
                csv,
                "{name1},{name2},{},{:e},{:e},{:e}",
                config.delta, check.lhs, check.rhs, check.tolerance
            )
            .unwrap();
            pairs.push(json!({ "first": name1, "second": name2, "check": check }));
        }
    }
    Ok((
        json!({ "delta": config.delta, "pairs": pairs }),
        vec![Trace { name: "bs", csv }],
    ))
}

fn diffuse(config: &ExperimentConfig, order: StableOrder, grid: &GridSpec, contracts: &mut Contracts) -> Outcome {
    let law = config.law();
    let f = law_density(law, config, order, grid)?;
    let ft = evolve(&f, config.t, config.alpha())?;
    // exact spectra carry their mass at ξ = 0; sampled ones keep their grid sum
    let mass = |p: &DensityProfile| match p.model() {
        Some(_) => p.profile().spectral_mass(),
        None => p.profile().integral(),
    };
    let (before, after) = (mass(&f), mass(&ft));
    contracts.at_most("mass_conservation", (after - before).abs(), MASS_CONSERVATION);
    let results = json!({
        "law": law_name(law),
        "t": config.t,
        "alpha": config.alpha(),
        "mass_before": before,
        "mass_after": after,
        "peak_before": f.peak(),
        "peak_after": ft.peak(),
    });
    let traces = vec![Trace {
        name: "density",
        csv: profiles_csv(&["x", "initial", "evolved"], &[f.profile(), ft.profile()]),
    }];
    Ok((results, traces))
}

fn entropy(config: &ExperimentConfig, order: StableOrder, grid: &GridSpec, contracts: &mut Contracts) -> Outcome {
    let law = config.law();
    let f = law_density(law, config, order, grid)?;
    let report = relative_entropy_lambda(&f, order, config.t_max, config.nodes)?;
    let check = entropy_check_from(&report);
    contracts.check("entropy_bound", check.lhs, check.rhs, check.tolerance);
    if law == Law::Stable {
        contracts.at_most("fixed_point", report.upper(), FIXED_POINT_ENTROPY);
    }
    let results = json!({ "law": law_name(law), "entropy": report, "upper": report.upper(), "bound": check });
    Ok((
        results,
        vec![Trace {
            name: "entropy",
            csv: report.trace_csv()?,
        }],
    ))
}

fn verify_appendix(order: StableOrder, grid: &GridSpec, contracts: &mut Contracts) -> Outcome {
    let lambda = order.lambda();
    let g_gap = g_equivalence_check(order, grid)?;
    contracts.at_most("g_equivalence", g_gap, G_EQUIVALENCE);

    let h = h_moment_bounds(order, grid)?;
    contracts.at_most("plancherel_x4", h.plancherel_gap(), PLANCHEREL_AGREEMENT);
    contracts.check("interpolation", h.direct, h.interp, 0.0);

    let cert = finiteness_certificate(order, grid)?;
    contracts.check("fisher_envelope", cert.fisher, cert.envelope_bound, cert.tolerance);
    contracts.at_most("jensen_finite", cert.jensen_factor, f64::MAX);

    let linnik = attraction_remainder(&linnik_spectrum(order, grid), order)?;
    let closed_form = linnik.remainder_trace.iter().fold(0.0f64, |m, &(xi, r)| {
        let u = xi.powf(lambda);
        m.max((r - u / (1.0 + u)).abs())
    });
    contracts.at_most("linnik_remainder", closed_form, REMAINDER_CLOSED_FORM);
    contracts.at_most(
        "linnik_consistent",
        f64::from(u8::from(linnik.verdict != Verdict::Consistent)),
        0.0,
    );
    let gaussian = attraction_remainder(&stable_spectrum(StableOrder::new(2.0)?, 1.0, grid)?, order)?;
    contracts.check(
        "gaussian_flagged",
        REMAINDER_THRESHOLD,
        gaussian.small_frequency_max,
        0.0,
    );

    let p = linnik_density(order, grid, LinnikMethod::Inversion)?;
    let first_moment = fractional_moment(&p, 1.0)?;
    let second_moment = fractional_moment(&p, 2.0)?;

    let results = json!({
        "g_equivalence": g_gap,
        "h_moments": h,
        "plancherel_gap": h.plancherel_gap(),
        "certificate": cert,
        "linnik_attraction": linnik,
        "gaussian_attraction": gaussian,
        "moments": [first_moment, second_moment],
    });
    let physical = linnik_g_physical(order, grid)?;
    let analytic = inverse_transform(&linnik_g_spectrum_analytic(order, grid)?)?;
    let traces = vec![
        Trace {
            name: "g",
            csv: profiles_csv(&["x", "physical", "analytic"], &[&physical, &analytic]),
        },
        Trace {
            name: "remainder",
            csv: linnik.trace_csv()?,
        },
    ];
    Ok((results, traces))
}

fn udrop(config: &ExperimentConfig, contracts: &mut Contracts) -> Outcome {
    let (n, m) = (config.n, config.m);
    let drop = variance_drop_mc(n, m, config.kernel, config.base_law, config.samples, config.seed)?;
    contracts.check("variance_drop", drop.var_u, drop.bound, 3.0 * drop.stderr);
    if m == 1 {
        contracts.at_most(
            "independence_equality",
            (drop.var_u - drop.bound).abs(),
            3.0 * drop.stderr,
        );
    }
    let csv = format!(
        "n,m,var_u,bound,stderr\n{n},{m},{:e},{:e},{:e}\n",
        drop.var_u, drop.bound, drop.stderr
    );
    let results = json!({ "n": n, "m": m, "variance_drop": drop });
    Ok((results, vec![Trace { name: "udrop", csv }]))
}
