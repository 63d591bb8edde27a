//! Executable checks that the `alpha`-parametrized successive-coding region
//! and the `nu`-parametrized one describe the same curve, and that the map
//! between the two parameters is monotone.

use super::GridSpec;
use crate::error::{Error, Result};
use crate::model::{nu_interval, nu_star, successive_rates, DistortionPair, SourceModel};
use crate::numeric::bisect_root;
use crate::report::CheckReport;

const ROOT_TOL: f64 = 1e-12;

/// `(1 - a)(rho - nu delta)(1 - nu rho) - a (nu - rho)(1 - nu^2 delta)`.
pub fn f_alpha(alpha: f64, rho: f64, delta: f64, nu: f64) -> f64 {
    (1.0 - alpha) * (rho - nu * delta) * (1.0 - nu * rho)
        - alpha * (nu - rho) * (1.0 - nu * nu * delta)
}

/// The root `nu0` of the cubic `f_alpha` on `[rho, min(1/rho, rho/delta)]`.
///
/// `f_alpha(rho) >= 0` and `f_alpha <= 0` at the right end, so bisection
/// applies. A right-end value within a few ulps of zero counts as a root,
/// since one of its factors vanishes there analytically.
pub fn root_f_alpha(alpha: f64, source: &SourceModel, d1: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::OutOfRange {
            what: "alpha",
            value: alpha,
        });
    }
    let rho = source.rho();
    if rho <= 0.0 {
        return Err(Error::OutOfRange {
            what: "rho",
            value: rho,
        });
    }
    if !(d1 > 0.0 && d1 < 1.0) {
        return Err(Error::OutOfRange {
            what: "d1",
            value: d1,
        });
    }
    let delta = 1.0 - d1;
    let hi = (1.0 / rho).min(rho / delta);
    let f = |nu: f64| f_alpha(alpha, rho, delta, nu);
    let f_hi = f(hi);
    if f_hi >= 0.0 && f_hi <= 16.0 * f64::EPSILON {
        return Ok(hi);
    }
    bisect_root(f, rho, hi, ROOT_TOL, 400)
}

/// Rates from the `alpha` parametrization, written out independently of
/// [`successive_rates`].
fn alpha_rates(rho: f64, d: &DistortionPair, nu: f64) -> (f64, f64) {
    let (d1, d2) = (d.d1(), d.d2());
    let delta = d.delta();
    let den = d1 * (1.0 - nu * nu * delta) - (rho - nu * delta).powi(2);
    let r1 = 0.5 * ((1.0 - rho * rho) / den).log2();
    let r2 = (0.5 * ((1.0 - nu * nu * delta) / d2).log2()).max(0.0);
    (r1, r2)
}

/// For each `alpha`, maps the cubic root to a rate pair and checks that the
/// pair lies on the `nu`-swept curve: the `nu` with the same common rate is
/// found by bisection (the common rate increases with `nu`) and the refinement
/// rates are compared.
pub fn lemma1_equivalence_suite(
    source: &SourceModel,
    d: &DistortionPair,
    alpha_grid: &GridSpec,
) -> Result<CheckReport> {
    const TOL: f64 = 1e-9;
    let interval = nu_interval(source, d)?;
    let rho = source.rho();
    let delta = d.delta();
    let ns = nu_star(d);
    let mut report = CheckReport::new("lemma1-alpha-nu-equivalence", TOL);
    let mut star_branch = 0usize;
    let (mut nu_min, mut nu_max) = (f64::INFINITY, f64::NEG_INFINITY);

    for alpha in alpha_grid.values() {
        let nu0 = match root_f_alpha(alpha, source, d.d1()) {
            Ok(v) => v,
            Err(e) => {
                report.instances += 1;
                report.fail(format!("alpha={alpha}: {e}"));
                continue;
            }
        };
        let nu = if d.d2() < 1.0 - nu0 * nu0 * delta {
            nu0
        } else {
            star_branch += 1;
            ns
        };
        nu_min = nu_min.min(nu);
        nu_max = nu_max.max(nu);
        if !interval.contains(nu) {
            report.instances += 1;
            report.fail(format!(
                "alpha={alpha}: nu={nu} outside [{}, {}]",
                interval.lo, interval.hi
            ));
            continue;
        }
        let (r1, r2) = alpha_rates(rho, d, nu);

        let common = |v: f64| successive_rates(source, d, v).map(|r| r.r1).unwrap_or(f64::NAN);
        let g = |v: f64| common(v) - r1;
        let matched = if g(interval.lo) >= 0.0 {
            interval.lo
        } else if g(interval.hi) <= 0.0 {
            interval.hi
        } else {
            match bisect_root(g, interval.lo, interval.hi, 0.0, 400) {
                Ok(v) => v,
                Err(e) => {
                    report.instances += 1;
                    report.fail(format!("alpha={alpha}: matching common rate {r1}: {e}"));
                    continue;
                }
            }
        };
        let on_curve = successive_rates(source, d, matched)?;
        let deviation = (on_curve.r2 - r2).abs().max((on_curve.r1 - r1).abs());
        report.observe(deviation, || {
            format!("alpha={alpha}: nu={nu}, rates ({r1}, {r2}) vs curve ({}, {})", on_curve.r1, on_curve.r2)
        });
    }
    report.metric("nu_min", nu_min);
    report.metric("nu_max", nu_max);
    report.metric("nu_star_branch", star_branch as f64);
    Ok(report)
}

/// `eta(nu) = (rho - nu delta)(1 - nu rho) / (nu [1 - rho^2 - delta (1 - 2 nu rho + nu^2)])`.
pub fn eta_of_nu(rho: f64, delta: f64, nu: f64) -> f64 {
    let den = 1.0 - rho * rho - delta * (1.0 - 2.0 * nu * rho + nu * nu);
    (rho - nu * delta) * (1.0 - nu * rho) / (nu * den)
}

/// Which quadratic governs the sign of `dh/dnu`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct QuadraticCase {
    right_end: f64,
    vertex: f64,
    closed_form_max: f64,
    high_delta: bool,
}

fn quadratic(rho: f64, delta: f64, high_delta: bool, nu: f64) -> f64 {
    if high_delta {
        -1.0 - rho * rho + delta + 2.0 * nu * rho - nu * nu * delta
    } else {
        -rho * (1.0 - rho * rho) - rho * delta + 2.0 * nu * delta - nu * nu * rho * delta
    }
}

fn quadratic_case(rho: f64, delta: f64) -> QuadraticCase {
    if delta >= rho * rho {
        QuadraticCase {
            right_end: rho / delta,
            vertex: rho / delta,
            closed_form_max: -(1.0 - delta) * (1.0 - rho * rho / delta),
            high_delta: true,
        }
    } else {
        QuadraticCase {
            right_end: 1.0 / rho,
            vertex: 1.0 / rho,
            closed_form_max: -(1.0 - rho * rho) * (rho - delta / rho),
            high_delta: false,
        }
    }
}

/// Checks, per `(rho, delta)` cell, that `eta(nu)` strictly decreases across
/// `nu_points` interior points of `(rho, right_end)`, that the governing
/// quadratic peaks at its vertex with the closed-form non-positive maximum,
/// and that `eta` runs from 1 at `rho` to 0 at the right end.
pub fn appendix_monotonicity_suite(
    rho_grid: &GridSpec,
    delta_grid: &GridSpec,
    nu_points: usize,
) -> Result<CheckReport> {
    const TOL: f64 = 1e-12;
    for (what, g) in [("rho", rho_grid), ("delta", delta_grid)] {
        if g.lo() <= 0.0 || g.hi() >= 1.0 {
            return Err(Error::InvalidGrid(format!(
                "{what} grid must lie within (0, 1), got {g}"
            )));
        }
    }
    let mut report = CheckReport::new("appendix-eta-monotonicity", TOL);
    let mut min_margin = f64::INFINITY;
    let mut max_quadratic = f64::NEG_INFINITY;

    for rho in rho_grid.values() {
        for delta in delta_grid.values() {
            let case = quadratic_case(rho, delta);
            let mut deviation: f64 = 0.0;
            let mut broken = None;

            let at_vertex = quadratic(rho, delta, case.high_delta, case.vertex);
            deviation = deviation.max((at_vertex - case.closed_form_max).abs());
            deviation = deviation.max(case.closed_form_max.max(0.0));
            max_quadratic = max_quadratic.max(case.closed_form_max);

            if (delta - rho * rho).abs() > 1e-9 {
                deviation = deviation.max((eta_of_nu(rho, delta, rho) - 1.0).abs());
                deviation = deviation.max(eta_of_nu(rho, delta, case.right_end).abs());
            }

            let width = case.right_end - rho;
            let mut prev: Option<f64> = None;
            for i in 1..=nu_points {
                let nu = rho + width * i as f64 / (nu_points + 1) as f64;
                let q = quadratic(rho, delta, case.high_delta, nu);
                deviation = deviation.max((q - case.closed_form_max).max(0.0));
                let eta = eta_of_nu(rho, delta, nu);
                if !eta.is_finite() {
                    broken.get_or_insert(format!("eta({nu}) = {eta} (division by zero)"));
                    continue;
                }
                if let Some(p) = prev {
                    let margin = p - eta;
                    min_margin = min_margin.min(margin);
                    if margin <= 0.0 {
                        broken.get_or_insert(format!("eta not decreasing at nu={nu}: {p} -> {eta}"));
                    }
                }
                prev = Some(eta);
            }

            if let Some(msg) = broken {
                report.fail(format!("rho={rho}, delta={delta}: {msg}"));
            }
            report.observe(deviation, || format!("rho={rho}, delta={delta}"));
        }
    }
    report.metric("min_decrease_margin", min_margin);
    report.metric("max_quadratic_peak", max_quadratic);
    Ok(report)
}
