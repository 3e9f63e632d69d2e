//! The validation battery: every formula against an oracle that does not
//! share its code path (series against Monte Carlo, density against
//! quadrature and closed-form masses, subball series against quadrature).

use std::f64::consts::PI;
use std::io::{self, Write};

use randflight_core::arctan::{arctan_pow, lemma_a1_check, quartic_gamma};
use randflight_core::charfun::{h1, h2_series, h3_series, h_asymptotic, conditional_mixture, FreqQuery};
use randflight_core::density::{
    ac_density, ball_prob_asymptotic, g_exact, g_tilde, radial_profile, singular_weight,
    switch_tail_error,
};
use randflight_core::montecarlo::{
    estimate_ball_prob, estimate_cf, estimate_conditional_cf, radial_histogram, sample_direction,
    substream, survey, ChunkRunner, SerialRunner,
};
use randflight_core::specfun::hyp5f4_unit;
use randflight_core::validate::{integrate_ac_components, integrate_ac_density, integrate_ac_density_ball};
use randflight_core::{FlightParams, McConfig, Result, SeriesTruncation};
use serde::{Deserialize, Serialize};

use crate::stats::{chi_square_poisson, ks_uniform};

/// Outcome of one comparison; `passed` iff `|lhs − rhs| ≤ tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
}

impl CheckReport {
    pub fn new(
        name: impl Into<String>,
        lhs: f64,
        rhs: f64,
        tolerance: f64,
        detail: impl Into<String>,
    ) -> Self {
        CheckReport {
            name: name.into(),
            lhs,
            rhs,
            tolerance,
            // NaN on either side fails
            passed: (lhs - rhs).abs() <= tolerance,
            detail: detail.into(),
        }
    }

    fn from_result(
        name: impl Into<String>,
        sides: Result<(f64, f64)>,
        tolerance: f64,
        detail: impl Into<String>,
    ) -> Self {
        match sides {
            Ok((lhs, rhs)) => CheckReport::new(name, lhs, rhs, tolerance, detail),
            Err(e) => CheckReport::new(name, f64::NAN, f64::NAN, tolerance, e.to_string()),
        }
    }

    pub fn text_line(&self) -> String {
        format!(
            "{} {}: lhs={:.12e} rhs={:.12e} tol={:.3e} ({})",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.lhs,
            self.rhs,
            self.tolerance,
            self.detail
        )
    }
}

pub fn write_text<W: Write>(reports: &[CheckReport], mut out: W) -> io::Result<()> {
    for r in reports {
        writeln!(out, "{}", r.text_line())?;
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    writeln!(out, "{} checks, {} failed", reports.len(), failed)
}

pub fn write_csv<W: Write>(reports: &[CheckReport], mut out: W) -> io::Result<()> {
    writeln!(out, "name,lhs,rhs,tolerance,passed")?;
    for r in reports {
        writeln!(
            out,
            "{},{:.16e},{:.16e},{:.16e},{}",
            r.name, r.lhs, r.rhs, r.tolerance, r.passed
        )?;
    }
    Ok(())
}

/// Knobs of the suite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteOptions {
    /// Monte Carlo samples per estimate.
    pub samples: u64,
    pub seed: u64,
    /// Skip every Monte Carlo check.
    pub quick: bool,
    pub trunc: SeriesTruncation,
    /// Absolute tolerance handed to the quadrature.
    pub quad_tol: f64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            samples: 1_000_000,
            seed: 1,
            quick: false,
            trunc: SeriesTruncation::default(),
            quad_tol: 1e-10,
        }
    }
}

/// Time points used when none are given.
pub const DEFAULT_TIMES: [f64; 3] = [0.05, 0.1, 0.2];

/// Frequencies `‖α‖` at which the asymptotic characteristic function is
/// checked.
const CF_FREQUENCIES: [f64; 4] = [0.5, 1.0, 2.0, 4.0];

/// `ct‖α‖` values for the conditional characteristic functions.
const CF_ARGUMENTS: [f64; 5] = [0.3, 0.5, 1.0, 2.0, 3.0];

const BALL_RATIOS: [f64; 4] = [0.2, 0.5, 0.8, 0.95];

/// Endpoints `(λ, t)` of the windows where `G̃` tracks `G` to 1%.
pub const GCURVE_WINDOWS: [(f64, f64); 4] = [(1.0, 0.7), (1.5, 0.5), (2.0, 0.4), (2.5, 0.3)];

/// Budget for the `o(t³)` remainder.
pub fn remainder_budget(t: f64) -> f64 {
    5.0 * t * t * t
}

/// Runs every check and returns the reports in a fixed order.
pub fn run_suite<R: ChunkRunner>(
    p: &FlightParams,
    t_list: &[f64],
    opts: &SuiteOptions,
    runner: &R,
) -> Vec<CheckReport> {
    let mut reports = analytic_checks(p, t_list, opts);
    if !opts.quick {
        reports.extend(monte_carlo_checks(p, t_list, opts, runner));
    }
    reports
}

fn analytic_checks(p: &FlightParams, t_list: &[f64], opts: &SuiteOptions) -> Vec<CheckReport> {
    let mut out = Vec::new();
    let trunc = &opts.trunc;

    let grid: Vec<f64> = (-30..=30).map(|i| f64::from(i) / 10.0).collect();
    let arctan_err = (1..=4u32)
        .flat_map(|n| grid.iter().map(move |&z| (n, z)))
        .map(|(n, z)| arctan_pow(n, z, trunc).map(|v| (v - z.atan().powi(n as i32)).abs()))
        .try_fold(0.0f64, |acc, e| e.map(|e| acc.max(e)));
    out.push(CheckReport::from_result(
        "arctan_series_grid",
        arctan_err.map(|e| (e, 0.0)),
        1e-10,
        "max |series - atan(z)^n|, n=1..4, z in [-3,3] step 0.1",
    ));

    let a1_err = [0.5, 1.0, 2.0, 3.5]
        .iter()
        .flat_map(|&a| (0..=20u32).map(move |n| (n, a)))
        .map(|(n, a)| lemma_a1_check(n, a).map(|(l, r)| ((l - r) / r).abs()))
        .try_fold(0.0f64, |acc, e| e.map(|e| acc.max(e)));
    out.push(CheckReport::from_result(
        "gamma_sum_identity",
        a1_err.map(|e| (e, 0.0)),
        1e-11,
        "max relative gap, n<=20, a in {0.5,1,2,3.5}",
    ));
    out.push(CheckReport::new("hyp5f4_unit_0", hyp5f4_unit(0), 1.0, 0.0, "exact"));
    out.push(CheckReport::new("hyp5f4_unit_1", hyp5f4_unit(1), 3.0, 0.0, "exact"));
    out.push(CheckReport::new("quartic_gamma_0", quartic_gamma(0), 2.0 / PI, 1e-14, "2/pi"));

    let lambda = p.lambda();
    for &t in t_list {
        let lt = lambda * t;
        for &alpha in &CF_FREQUENCIES {
            let sides = FreqQuery::new(alpha, t).and_then(|q| {
                conditional_mixture(&q, p, trunc).map(|mix| (h_asymptotic(&q, p), mix))
            });
            out.push(CheckReport::from_result(
                format!("cf_asymptotic_vs_conditional t={t} alpha={alpha}"),
                sides,
                remainder_budget(t),
                "tolerance 5t^3",
            ));
        }

        out.push(CheckReport::from_result(
            format!("total_ac_mass t={t}"),
            integrate_ac_density(t, p, opts.quad_tol).and_then(|v| Ok((v, g_tilde(t, p)?))),
            1e-6,
            "quadrature vs closed-form mass",
        ));
        match integrate_ac_components(t, p, opts.quad_tol) {
            Ok(parts) => {
                let targets = [
                    ("single", parts.single, lt),
                    ("double", parts.double, lt * lt / 2.0),
                    ("triple", parts.triple, lt * lt * lt / 6.0),
                ];
                for (label, got, want) in targets {
                    out.push(CheckReport::new(
                        format!("ac_mass_{label} t={t}"),
                        got,
                        want,
                        1e-8,
                        "termwise ball integral",
                    ));
                }
            }
            Err(e) => out.push(CheckReport::new(
                format!("ac_mass_terms t={t}"),
                f64::NAN,
                f64::NAN,
                1e-8,
                e.to_string(),
            )),
        }

        let ct = p.radius(t);
        for &ratio in &BALL_RATIOS {
            let r = ratio * ct;
            out.push(CheckReport::from_result(
                format!("subball_series_vs_quadrature t={t} r/ct={ratio}"),
                ball_prob_asymptotic(r, t, p, trunc)
                    .and_then(|s| Ok((s, integrate_ac_density_ball(r, t, p, opts.quad_tol)?))),
                1e-6,
                "series vs quadrature",
            ));
        }
        let just_inside = f64::from_bits(ct.to_bits() - 1);
        let long = trunc.with_max_terms(trunc.max_terms().max(10_000));
        out.push(CheckReport::from_result(
            format!("subball_limit t={t}"),
            long.and_then(|long| {
                Ok((ball_prob_asymptotic(just_inside, t, p, &long)?, g_tilde(t, p)?))
            }),
            1e-8,
            "r just below ct vs mass of the density",
        ));
        out.push(CheckReport::from_result(
            format!("mass_gap_identity t={t}"),
            switch_tail_error(t, p).and_then(|e| Ok((e, g_exact(t, p)? - g_tilde(t, p)?))),
            1e-15,
            "Poisson tail vs G - G~",
        ));
        out.push(CheckReport::from_result(
            format!("density_profile_increasing t={t}"),
            radial_profile(t, p, 500, ct * (1.0 - 1e-8)).map(|prof| {
                let drops = prof.values.windows(2).filter(|w| w[1] <= w[0]).count();
                (drops as f64, 0.0)
            }),
            0.0,
            "count of non-increasing steps on 500 points",
        ));
        out.push(CheckReport::from_result(
            format!("density_continuous_at_origin t={t}"),
            ac_density(1e-6 * ct, t, p).and_then(|near| Ok((near, ac_density(0.0, t, p)?))),
            1e-9 * ac_density(0.0, t, p).unwrap_or(1.0),
            "r = 1e-6 ct vs r = 0",
        ));
    }

    for (lambda, t) in GCURVE_WINDOWS {
        let sides = FlightParams::new(p.c(), lambda).and_then(|q| switch_tail_error(t, &q));
        out.push(CheckReport::from_result(
            format!("gcurve_window lambda={lambda} t={t}"),
            sides.map(|gap| (gap, 0.0)),
            0.01,
            "G - G~ below 0.01 at the window endpoint",
        ));
    }
    out
}

fn monte_carlo_checks<R: ChunkRunner>(
    p: &FlightParams,
    t_list: &[f64],
    opts: &SuiteOptions,
    runner: &R,
) -> Vec<CheckReport> {
    let mut out = Vec::new();
    let cfg = match McConfig::with_seed(opts.samples, opts.seed) {
        Ok(cfg) => cfg,
        Err(e) => {
            out.push(CheckReport::new("monte_carlo_config", f64::NAN, f64::NAN, 0.0, e.to_string()));
            return out;
        }
    };
    let trunc = &opts.trunc;

    if let Some(&t) = t_list.first() {
        let ct = p.radius(t);
        for n in 1..=3u32 {
            for &x in &CF_ARGUMENTS {
                let alpha = x / ct;
                let sides = FreqQuery::new(alpha, t).and_then(|q| {
                    let exact = match n {
                        1 => h1(&q, p),
                        2 => h2_series(&q, p, trunc)?,
                        _ => h3_series(&q, p, trunc)?,
                    };
                    let est = estimate_conditional_cf(n, alpha, t, p, &cfg, runner)?;
                    Ok((exact, est.real.mean, 3.0 * est.real.std_error))
                });
                out.push(three_sided(format!("conditional_cf n={n} ct|alpha|={x}"), sides, "3 std errors"));
            }
        }
    }

    for &t in t_list {
        let ct = p.radius(t);
        let budget = remainder_budget(t);
        let alpha = 2.0;
        match estimate_cf(alpha, t, p, &cfg, runner) {
            Ok(est) => {
                let q = FreqQuery::new(alpha, t).expect("valid query");
                out.push(CheckReport::new(
                    format!("cf_monte_carlo t={t} alpha={alpha}"),
                    h_asymptotic(&q, p),
                    est.real.mean,
                    3.0 * est.real.std_error + budget,
                    "3 std errors + 5t^3",
                ));
                out.push(CheckReport::new(
                    format!("cf_imaginary t={t} alpha={alpha}"),
                    est.imag.mean,
                    0.0,
                    3.0 * est.imag.std_error,
                    "3 std errors",
                ));
            }
            Err(e) => out.push(error_report(format!("cf_monte_carlo t={t}"), e)),
        }

        let r = 0.5 * ct;
        out.push(three_sided(
            format!("subball_monte_carlo t={t} r/ct=0.5"),
            ball_prob_asymptotic(r, t, p, trunc).and_then(|s| {
                let est = estimate_ball_prob(r, t, p, &cfg, runner)?;
                Ok((s, est.mean, 3.0 * est.std_error + budget))
            }),
            "3 std errors + 5t^3",
        ));

        match survey(t, p, &cfg, runner) {
            Ok(s) => {
                let n = s.samples as f64;
                let atom = singular_weight(t, p).unwrap_or(f64::NAN);
                let frac = s.switch_counts[0] as f64 / n;
                out.push(CheckReport::new(
                    format!("atom_fraction t={t}"),
                    frac,
                    atom,
                    3.0 * (atom * (1.0 - atom) / n).sqrt(),
                    "3 binomial std errors",
                ));
                let chi = chi_square_poisson(&s.switch_counts, p.lambda() * t);
                out.push(CheckReport::new(
                    format!("switch_count_chi_square t={t}"),
                    chi.statistic,
                    0.0,
                    chi.critical,
                    format!("{} dof, 1% critical value, p={:.4}", chi.dof, chi.p_value),
                ));
                out.push(CheckReport::new(
                    format!("support_bound t={t}"),
                    (s.max_radius_ratio - 1.0).max(0.0),
                    0.0,
                    1e-12,
                    "excess of max |X|/(ct) over 1",
                ));
            }
            Err(e) => out.push(error_report(format!("survey t={t}"), e)),
        }

        out.push(histogram_check(p, t, &cfg, runner));
        out.push(mixture_coherence_check(p, t, &cfg, runner));
    }

    out.extend(direction_checks(&cfg));

    let small = McConfig::new(opts.samples.min(200_000), opts.seed, 1 << 14);
    let t0 = t_list.first().copied().unwrap_or(0.1);
    let sides = small.and_then(|small| {
        let a = estimate_cf(1.0, t0, p, &small, &SerialRunner)?;
        let b = estimate_cf(1.0, t0, p, &small, runner)?;
        Ok((a.real.mean - b.real.mean, a.real.std_error - b.real.std_error))
    });
    out.push(CheckReport::from_result(
        "deterministic_across_runners",
        sides,
        0.0,
        "serial vs configured runner, bitwise",
    ));
    out
}

fn error_report(name: String, e: randflight_core::Error) -> CheckReport {
    CheckReport::new(name, f64::NAN, f64::NAN, 0.0, e.to_string())
}

/// Report for `(lhs, rhs, tolerance)` computed together.
fn three_sided(name: String, sides: Result<(f64, f64, f64)>, detail: &str) -> CheckReport {
    match sides {
        Ok((lhs, rhs, tol)) => CheckReport::new(name, lhs, rhs, tol, detail),
        Err(e) => error_report(name, e),
    }
}

const HISTOGRAM_BINS: usize = 20;

/// Interior bins of the radial histogram against the integrated density.
/// The last bin touches the sphere and is left out.
fn histogram_check<R: ChunkRunner>(
    p: &FlightParams,
    t: f64,
    cfg: &McConfig,
    runner: &R,
) -> CheckReport {
    let name = format!("radial_histogram_vs_density t={t}");
    let budget = remainder_budget(t);
    let worst = radial_histogram(t, p, cfg, HISTOGRAM_BINS, None, runner).and_then(|h| {
        let mut worst = 0.0f64;
        let mut below = 0.0;
        for i in 0..HISTOGRAM_BINS - 1 {
            let above = integrate_ac_density_ball(h.edges[i + 1], t, p, 1e-12)?;
            let excess = (h.mass[i] - (above - below)).abs() / (3.0 * h.std_error[i] + budget);
            worst = worst.max(excess);
            below = above;
        }
        Ok((worst, 0.0))
    });
    CheckReport::from_result(
        name,
        worst,
        1.0,
        "worst bin |mass - integral| / (3 std errors + 5t^3)",
    )
}

/// Poisson mixture of conditional histograms against the unconditional one.
fn mixture_coherence_check<R: ChunkRunner>(
    p: &FlightParams,
    t: f64,
    cfg: &McConfig,
    runner: &R,
) -> CheckReport {
    const MAX_SWITCHES: u32 = 10;
    let bins = HISTOGRAM_BINS;
    let lt = p.lambda() * t;
    let worst = radial_histogram(t, p, cfg, bins, None, runner).and_then(|direct| {
        let mut mixed = vec![0.0; bins];
        let mut var = direct.std_error.iter().map(|s| s * s).collect::<Vec<_>>();
        let mut weight = (-lt).exp();
        for n in 1..=MAX_SWITCHES {
            weight *= lt / f64::from(n);
            let cond = radial_histogram(t, p, cfg, bins, Some(n), runner)?;
            for i in 0..bins {
                mixed[i] += weight * cond.mass[i];
                var[i] += weight * weight * cond.std_error[i] * cond.std_error[i];
            }
        }
        let worst = (0..bins)
            .map(|i| (direct.mass[i] - mixed[i]).abs() / (3.0 * var[i].sqrt()).max(f64::MIN_POSITIVE))
            .fold(0.0f64, f64::max);
        Ok((worst, 0.0))
    });
    CheckReport::from_result(
        format!("conditional_mixture_coherence t={t}"),
        worst,
        1.0,
        "worst bin |direct - mixture| / 3 combined std errors",
    )
}

fn direction_checks(cfg: &McConfig) -> Vec<CheckReport> {
    let n = cfg.samples() as usize;
    let mut rng = substream(cfg.seed(), 0);
    let mut sums = [0.0f64; 3];
    let mut cosines = Vec::with_capacity(n);
    for _ in 0..n {
        let d = sample_direction(&mut rng);
        sums[0] += d.x1;
        sums[1] += d.x2;
        sums[2] += d.x3;
        cosines.push(d.x3);
    }
    let nf = n as f64;
    let mut out: Vec<CheckReport> = ["x1", "x2", "x3"]
        .iter()
        .zip(sums)
        .map(|(axis, s)| {
            CheckReport::new(
                format!("direction_mean_{axis}"),
                s / nf,
                0.0,
                4.0 / nf.sqrt(),
                "4/sqrt(n)",
            )
        })
        .collect();
    let ks = ks_uniform(&mut cosines, -1.0, 1.0);
    out.push(CheckReport::new(
        "direction_colatitude_ks",
        ks.statistic,
        0.0,
        ks.critical,
        "Kolmogorov-Smirnov vs uniform on [-1,1], 1% level",
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_semantics() {
        assert!(CheckReport::new("a", 1.0, 1.05, 0.1, "").passed);
        assert!(!CheckReport::new("a", 1.0, 1.2, 0.1, "").passed);
        assert!(!CheckReport::new("a", f64::NAN, 1.0, 0.1, "").passed);
        assert!(CheckReport::new("a", 0.0, 0.0, 0.0, "").passed);
    }

    #[test]
    fn csv_layout() {
        let reports = [CheckReport::new("x", 1.0, 2.0, 3.0, "d")];
        let mut buf = Vec::new();
        write_csv(&reports, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "name,lhs,rhs,tolerance,passed");
        assert!(lines[1].starts_with("x,1.0000000000000000e0,"));
        assert!(lines[1].ends_with(",true"));
    }

    #[test]
    fn quick_suite_passes_for_figure_parameters() {
        let p = FlightParams::new(5.0, 2.0).unwrap();
        let opts = SuiteOptions {
            quick: true,
            ..SuiteOptions::default()
        };
        let reports = run_suite(&p, &DEFAULT_TIMES, &opts, &SerialRunner);
        let failed: Vec<String> = reports.iter().filter(|r| !r.passed).map(|r| r.text_line()).collect();
        assert!(failed.is_empty(), "{failed:#?}");
    }
}
