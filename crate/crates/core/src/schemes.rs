//! Minimum transmit power of each scheme at a fixed distortion pair.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{
    classify_region, min_power_for_rates, nu_interval, power_of_nu, ChannelModel,
    DistortionPair, PowerSolution, RatePair, SourceModel,
};
use crate::numeric::{bisect_threshold, golden_section_min};

pub use crate::model::SchemeKind;

/// One `(rho, N1, N2, kappa, D1, D2)` problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProblemInstance {
    pub source: SourceModel,
    pub channel: ChannelModel,
    pub d: DistortionPair,
}

impl ProblemInstance {
    pub fn new(source: SourceModel, channel: ChannelModel, d: DistortionPair) -> Self {
        Self { source, channel, d }
    }

    /// Validates every parameter.
    pub fn from_params(rho: f64, n1: f64, n2: f64, kappa: f64, d1: f64, d2: f64) -> Result<Self> {
        Ok(Self {
            source: SourceModel::new(rho)?,
            channel: ChannelModel::new(n1, n2, kappa)?,
            d: DistortionPair::new(d1, d2)?,
        })
    }

    fn inv_kappa(&self) -> f64 {
        1.0 / self.channel.kappa()
    }
}

/// Grid sizes and tolerances for the numeric searches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverOptions {
    /// Seed grid over the `nu` interval before golden-section refinement.
    pub nu_grid: usize,
    /// Relative width in `nu` at which golden-section refinement stops.
    pub nu_rel_tol: f64,
    /// Seed grid over `eta_bar` in the Scheme B feasibility check.
    pub eta_grid: usize,
    /// Relative bracket width at which the Scheme B power bisection stops.
    pub power_rel_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            nu_grid: 1024,
            nu_rel_tol: 1e-10,
            eta_grid: 256,
            power_rel_tol: 1e-10,
        }
    }
}

const MAX_ITER: usize = 400;

/// `P_sep = min over nu of P(nu)`.
///
/// No unimodality of `P(nu)` is assumed: a uniform seed grid locates the best
/// cell and golden-section search refines within its two neighbours. The
/// interval's right end never exceeds `nu*`, so the `[.]+` kink of the
/// refinement rate can only sit at the endpoint, which the grid evaluates.
pub fn min_separate_power(inst: &ProblemInstance, opts: &SolverOptions) -> Result<PowerSolution> {
    let interval = nu_interval(&inst.source, &inst.d)?;
    let eval = |nu: f64| power_of_nu(&inst.source, &inst.channel, &inst.d, nu);

    let (nu, split) = if interval.is_point() {
        (interval.lo, eval(interval.lo)?)
    } else {
        let n = opts.nu_grid.max(2);
        let step = interval.width() / (n - 1) as f64;
        let node = |i: usize| {
            if i + 1 == n {
                interval.hi
            } else {
                interval.lo + step * i as f64
            }
        };
        let mut best = (0usize, f64::INFINITY);
        for i in 0..n {
            let p = eval(node(i))?.power;
            if p < best.1 {
                best = (i, p);
            }
        }
        let (k, p_grid) = best;
        let a = node(k.saturating_sub(1));
        let b = node((k + 1).min(n - 1));
        let refined = golden_section_min(
            |nu| eval(nu).map(|s| s.power).unwrap_or(f64::INFINITY),
            a,
            b,
            opts.nu_rel_tol,
            MAX_ITER,
        );
        let nu = if refined.fx < p_grid { refined.x } else { node(k) };
        (nu, eval(nu)?)
    };

    Ok(PowerSolution {
        scheme: SchemeKind::Separate,
        power: split.power,
        optimizer: Some(nu),
        eta_bar: split.eta_bar,
        degenerate: false,
    })
}

/// Converse power: `N2 D1^(-1/k) [(D2/(1-rho^2))^(-1/k) - 1]+ + N1 (D1^(-1/k) - 1)`.
pub fn outer_bound_power(inst: &ProblemInstance) -> PowerSolution {
    let ik = inst.inv_kappa();
    let (n1, n2) = (inst.channel.n1(), inst.channel.n2());
    let rho = inst.source.rho();
    let d1_gain = inst.d.d1().powf(-ik);
    let private = n2 * d1_gain * ((inst.d.d2() / (1.0 - rho * rho)).powf(-ik) - 1.0).max(0.0);
    let power = private + n1 * (d1_gain - 1.0);
    PowerSolution {
        scheme: SchemeKind::OuterBound,
        power,
        optimizer: None,
        eta_bar: if power > 0.0 { private / d1_gain / power } else { 0.0 },
        degenerate: false,
    }
}

/// Independent coding: rates `(1/2 log(1/D1), 1/2 log(1/D2))` through the
/// broadcast power formula.
pub fn scheme_a_power(inst: &ProblemInstance) -> PowerSolution {
    let rates = RatePair {
        r1: 0.0 - 0.5 * inst.d.d1().log2(),
        r2: 0.0 - 0.5 * inst.d.d2().log2(),
    };
    let split = min_power_for_rates(&inst.channel, &rates);
    PowerSolution {
        scheme: SchemeKind::SchemeA,
        power: split.power,
        optimizer: None,
        eta_bar: split.eta_bar,
        degenerate: false,
    }
}

/// Closed-form Scheme C power. Equals `P(rho)` in the non-trivial region.
pub fn scheme_c_power(inst: &ProblemInstance) -> Result<PowerSolution> {
    if classify_region(&inst.source, &inst.d).is_trivial() {
        return Err(Error::TrivialRegion);
    }
    let ik = inst.inv_kappa();
    let (n1, n2) = (inst.channel.n1(), inst.channel.n2());
    let rho = inst.source.rho();
    let d1_gain = inst.d.d1().powf(-ik);
    let residual = 1.0 - rho * rho * inst.d.delta();
    let private = n2 * d1_gain * ((inst.d.d2() / residual).powf(-ik) - 1.0);
    let power = private + n1 * (d1_gain - 1.0);
    Ok(PowerSolution {
        scheme: SchemeKind::SchemeC,
        power,
        optimizer: None,
        eta_bar: if power > 0.0 { private / d1_gain / power } else { 0.0 },
        degenerate: false,
    })
}

/// Trivial-region power: only the common message is sent, at distortion `D1`
/// for the first source, and `S2` is estimated from it.
///
/// In this region `D2 >= 1 - rho^2 (1 - D1)` already holds for that estimate,
/// so `P = N1 (D1^(-1/k) - 1)`. This matches the first term of the outer
/// bound, so no scheme can do better.
pub fn degenerate_power(inst: &ProblemInstance, scheme: SchemeKind) -> Result<PowerSolution> {
    if !classify_region(&inst.source, &inst.d).is_trivial() {
        return Err(Error::NonTrivialRegion);
    }
    let power = inst.channel.n1() * (inst.d.d1().powf(-inst.inv_kappa()) - 1.0);
    Ok(PowerSolution {
        scheme,
        power,
        optimizer: None,
        eta_bar: 0.0,
        degenerate: true,
    })
}

/// Scheme B feasibility at power `p`: returns an `eta_bar` meeting both
/// distortion constraints, if one is found.
///
/// With `x = eta_bar * p`, the first-source distortion is
/// `a = ((N1 + x) / (p + N1))^k`, increasing in `x`, so `a <= D1` caps
/// `eta_bar` at `eb_max`; every node lies in `[0, eb_max]`, so the cap is not
/// re-tested (rounding at `eb_max` would otherwise reject a binding corner).
/// The second constraint `(1-rho^2)(1 + x/N2)^(-k) + rho^2 a <= D2`
/// is not assumed unimodal: a uniform grid is scanned first, then golden-section
/// refinement runs around the best grid cell.
pub(crate) fn scheme_b_feasible(inst: &ProblemInstance, p: f64, eta_grid: usize) -> Option<f64> {
    let kappa = inst.channel.kappa();
    let (n1, n2) = (inst.channel.n1(), inst.channel.n2());
    let (d1, d2) = (inst.d.d1(), inst.d.d2());
    let rho2 = inst.source.rho() * inst.source.rho();

    let a = |eb: f64| ((n1 + eb * p) / (p + n1)).powf(kappa);
    let g = |eb: f64| (1.0 - rho2) * (1.0 + eb * p / n2).powf(-kappa) + rho2 * a(eb);

    if p <= 0.0 {
        return (d1 >= 1.0 && d2 >= 1.0).then_some(0.0);
    }
    let eb_max = (((p + n1) * d1.powf(1.0 / kappa) - n1) / p).min(1.0);
    if eb_max < 0.0 {
        return None;
    }

    let n = eta_grid.max(2);
    let node = |i: usize| eb_max * i as f64 / (n - 1) as f64;
    let mut best = (0usize, f64::INFINITY);
    for i in 0..n {
        let eb = node(i);
        let v = g(eb);
        if v <= d2 {
            return Some(eb);
        }
        if v < best.1 {
            best = (i, v);
        }
    }
    let k = best.0;
    let m = golden_section_min(g, node(k.saturating_sub(1)), node((k + 1).min(n - 1)), 1e-12, MAX_ITER);
    (m.fx <= d2).then_some(m.x)
}

/// Minimum power whose Scheme B region contains `(D1, D2)`.
///
/// Feasibility is monotone in power, so bisection applies. The upper bracket is
/// the broadcast power for rates `(1/2 log(1/min(D1,D2)), 1/2 log(1/D2))`: there
/// `a <= min(D1, D2)` and the private term is at most `D2`, so both constraints hold.
pub fn scheme_b_power(inst: &ProblemInstance, opts: &SolverOptions) -> Result<PowerSolution> {
    let (d1, d2) = (inst.d.d1(), inst.d.d2());
    let upper_rates = RatePair {
        r1: -0.5 * d1.min(d2).log2(),
        r2: -0.5 * d2.log2(),
    };
    let upper = min_power_for_rates(&inst.channel, &upper_rates);
    if !upper.power.is_finite() {
        return Err(Error::Infeasible(format!(
            "no finite Scheme B power bracket for d = ({d1}, {d2})"
        )));
    }

    let power = bisect_threshold(
        |p| p >= upper.power || scheme_b_feasible(inst, p, opts.eta_grid).is_some(),
        0.0,
        upper.power,
        opts.power_rel_tol,
        MAX_ITER,
    );
    let eta_bar = if power >= upper.power {
        upper.eta_bar
    } else {
        scheme_b_feasible(inst, power, opts.eta_grid).unwrap_or(upper.eta_bar)
    };
    Ok(PowerSolution {
        scheme: SchemeKind::SchemeB,
        power,
        optimizer: None,
        eta_bar,
        degenerate: false,
    })
}

/// Minimum power for `scheme`, falling back to the common-message-only
/// convention for separate coding and Scheme C in the trivial region.
pub fn min_power(inst: &ProblemInstance, scheme: SchemeKind, opts: &SolverOptions) -> Result<PowerSolution> {
    let trivial = classify_region(&inst.source, &inst.d).is_trivial();
    match scheme {
        SchemeKind::Separate | SchemeKind::SchemeC if trivial => degenerate_power(inst, scheme),
        SchemeKind::Separate => min_separate_power(inst, opts),
        SchemeKind::SchemeC => scheme_c_power(inst),
        SchemeKind::SchemeA => Ok(scheme_a_power(inst)),
        SchemeKind::SchemeB => scheme_b_power(inst, opts),
        SchemeKind::OuterBound => Ok(outer_bound_power(inst)),
    }
}

/// Universal upper bound on `P_sep / P_outer` over the low-distortion region
/// `(1 - D1)(1 - D2) >= rho^2`.
pub fn theorem2_bound(source: &SourceModel, kappa: f64) -> f64 {
    let rho = source.rho();
    if rho == 0.0 {
        return 1.0;
    }
    let ik = 1.0 / kappa;
    let up = (1.0 + rho).powf(ik);
    let down = (1.0 - rho).powf(ik);
    let first = 1.0 + up * ((1.0 + rho * rho).powf(ik) - 1.0) / (up - down);

    let q = ((1.0 + rho) * (1.0 + rho) / (1.0 + 2.0 * rho)).powf(ik);
    let second = q + (q - 1.0) / ((1.0 - rho * rho).powf(-ik) - 1.0);
    first.min(second)
}

/// Limit of `P_C / P_sep` at `D1 = 1 - rho^2`, `D2 -> 0`.
pub fn theorem3_limit(source: &SourceModel, kappa: f64) -> f64 {
    (1.0 + source.rho() * source.rho()).powf(1.0 / kappa)
}
