//! Numeric verification suites behind `bpd verify`.
//!
//! Each suite returns one or more [`CheckReport`]s. Random draws come from a
//! seeded ChaCha generator, so reports are reproducible.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::model::{
    classify_region, min_power_for_rates, power_of_nu, ChannelModel, DistortionPair, RatePair,
    SourceModel,
};
use crate::report::CheckReport;
use crate::schemes::{
    min_separate_power, outer_bound_power, scheme_a_power, scheme_b_power, scheme_c_power,
    theorem2_bound, theorem3_limit, ProblemInstance, SolverOptions,
};
use crate::sweeps::{appendix_monotonicity_suite, lemma1_equivalence_suite, parallel_map, GridSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Lemma1,
    Lemma2,
    Appendix,
    Thm1,
    Thm2,
    Thm3,
    Ordering,
    Oracle,
}

impl Suite {
    pub const NAMES: [&'static str; 9] = [
        "all", "lemma1", "lemma2", "appendix", "thm1", "thm2", "thm3", "ordering", "oracle",
    ];
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "all" => Suite::All,
            "lemma1" => Suite::Lemma1,
            "lemma2" => Suite::Lemma2,
            "appendix" => Suite::Appendix,
            "thm1" => Suite::Thm1,
            "thm2" => Suite::Thm2,
            "thm3" => Suite::Thm3,
            "ordering" => Suite::Ordering,
            "oracle" => Suite::Oracle,
            _ => {
                return Err(format!(
                    "unknown suite {s:?}; expected one of {}",
                    Suite::NAMES.join(", ")
                ))
            }
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = match self {
            Suite::All => 0,
            Suite::Lemma1 => 1,
            Suite::Lemma2 => 2,
            Suite::Appendix => 3,
            Suite::Thm1 => 4,
            Suite::Thm2 => 5,
            Suite::Thm3 => 6,
            Suite::Ordering => 7,
            Suite::Oracle => 8,
        };
        f.write_str(Suite::NAMES[i])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    pub workers: Option<usize>,
    pub solver: SolverOptions,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 0x5eed_b0d,
            workers: None,
            solver: SolverOptions::default(),
        }
    }
}

const KAPPAS: [f64; 3] = [0.3, 1.0, 2.0];

/// A random instance in the non-trivial region: `rho` in `[0.05, 0.95]`,
/// `kappa` in `{0.3, 1, 2}`, `N1 >= N2` in `[0.1, 1]`, `d1` in `[0.01, 0.99]`
/// and `d2` a fraction in `[0.01, 0.99]` of the trivial-region threshold.
pub fn random_nontrivial_instance<R: Rng>(rng: &mut R) -> ProblemInstance {
    let rho = rng.random_range(0.05..=0.95);
    let kappa = KAPPAS[rng.random_range(0..KAPPAS.len())];
    let n2 = rng.random_range(0.1..=1.0);
    let n1 = rng.random_range(n2..=1.0);
    let d1: f64 = rng.random_range(0.01..=0.99);
    let threshold = 1.0 - rho * rho * (1.0 - d1);
    let d2 = threshold * rng.random_range(0.01..=0.99);
    ProblemInstance::from_params(rho, n1, n2, kappa, d1, d2)
        .expect("sampler draws inside the parameter domain")
}

/// Runs the selected suite (every suite for [`Suite::All`]).
pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    let wants = |s: Suite| suite == Suite::All || suite == s;
    if wants(Suite::Lemma1) {
        out.push(check_lemma1()?);
    }
    if wants(Suite::Lemma2) {
        out.extend(check_lemma2(opts));
    }
    if wants(Suite::Appendix) {
        out.push(check_appendix()?);
    }
    if wants(Suite::Thm1) {
        out.push(check_theorem1(opts)?);
    }
    if wants(Suite::Thm2) {
        out.push(check_theorem2(opts)?);
    }
    if wants(Suite::Thm3) {
        out.push(check_theorem3(opts)?);
    }
    if wants(Suite::Ordering) {
        out.extend(check_ordering(opts)?);
    }
    if wants(Suite::Oracle) {
        out.extend(check_oracles(opts)?);
    }
    Ok(out)
}

pub fn check_lemma1() -> Result<CheckReport> {
    let source = SourceModel::new(0.8)?;
    let d = DistortionPair::new(0.2, 0.3)?;
    lemma1_equivalence_suite(&source, &d, &GridSpec::linear(0.01, 0.99, 99)?)
}

pub fn check_appendix() -> Result<CheckReport> {
    let g = GridSpec::linear(0.05, 0.95, 20)?;
    appendix_monotonicity_suite(&g, &g, 1000)
}

/// Broadcast capacities `(C1, C2)` at power `p` with private fraction `eta_bar`.
fn layer_capacities(ch: &ChannelModel, p: f64, eta_bar: f64) -> (f64, f64) {
    let half_k = 0.5 * ch.kappa();
    let c1 = half_k * (1.0 + (1.0 - eta_bar) * p / (eta_bar * p + ch.n1())).log2();
    let c2 = half_k * (1.0 + eta_bar * p / ch.n2()).log2();
    (c1, c2)
}

/// Broadcast power formula: tight capacities at the returned split, and no
/// split on a 10^4-point grid works with 10^-6 less power.
pub fn check_lemma2(opts: &VerifyOptions) -> Vec<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x1e22);
    let mut tight = CheckReport::new("lemma2-equality", 1e-10);
    let mut minimal = CheckReport::new("lemma2-minimality", 0.0);
    const GRID: usize = 10_000;
    for _ in 0..1000 {
        let n2 = rng.random_range(0.1..=1.0);
        let n1 = rng.random_range(n2..=1.0);
        let kappa = KAPPAS[rng.random_range(0..KAPPAS.len())];
        let ch = ChannelModel::new(n1, n2, kappa).expect("valid draw");
        let rates = RatePair {
            r1: rng.random_range(0.01..=3.0),
            r2: rng.random_range(0.01..=3.0),
        };
        let s = min_power_for_rates(&ch, &rates);
        let (c1, c2) = layer_capacities(&ch, s.power, s.eta_bar);
        let dev = (c1 - rates.r1).abs().max((c2 - rates.r2).abs());
        tight.observe(dev, || format!("{ch:?} {rates:?}"));

        let reduced = s.power * (1.0 - 1e-6);
        let feasible = (0..GRID).any(|i| {
            let (c1, c2) = layer_capacities(&ch, reduced, i as f64 / (GRID - 1) as f64);
            c1 >= rates.r1 && c2 >= rates.r2
        });
        minimal.observe(if feasible { 1.0 } else { 0.0 }, || {
            format!("{ch:?} {rates:?}: P(1-1e-6) still feasible")
        });
    }
    vec![tight, minimal]
}

/// Ratio `P_sep / P_outer` near the two high-SNR corners.
pub fn check_theorem1(opts: &VerifyOptions) -> Result<CheckReport> {
    let mut report = CheckReport::new("thm1-corner-ratio", 0.01);
    let rho: f64 = 0.8;
    let edge = 0.9 * (1.0 - rho * rho);
    for kappa in KAPPAS {
        for (d1, d2) in [(1e-8, edge), (edge, 1e-8)] {
            let inst = ProblemInstance::from_params(rho, 1.0, 0.5, kappa, d1, d2)?;
            let ratio = min_separate_power(&inst, &opts.solver)?.power / outer_bound_power(&inst).power;
            report.observe(ratio - 1.0, || format!("kappa={kappa} d=({d1}, {d2}): ratio {ratio}"));
        }
    }
    Ok(report)
}

/// `P_sep / P_outer <= theorem2_bound` on the low-distortion part of a
/// 50x50 grid over `[0.001, 1 - rho^2]^2`.
pub fn check_theorem2(opts: &VerifyOptions) -> Result<CheckReport> {
    let mut report = CheckReport::new("thm2-ratio-bound", 1e-9);
    for rho in [0.2, 0.5, 0.8] {
        let source = SourceModel::new(rho)?;
        for kappa in KAPPAS {
            let bound = theorem2_bound(&source, kappa);
            if (rho, kappa) == (0.8, 0.3) || (rho, kappa) == (0.2, 2.0) {
                report.metric(format!("bound(rho={rho},kappa={kappa})"), bound);
            }
            let channel = ChannelModel::new(1.0, 0.5, kappa)?;
            let g = GridSpec::linear(1e-3, 1.0 - rho * rho, 50)?.values();
            let pts: Vec<(f64, f64)> = g
                .iter()
                .flat_map(|&a| g.iter().map(move |&b| (a, b)))
                .filter(|&(a, b)| (1.0 - a) * (1.0 - b) >= rho * rho)
                .collect();
            let ratios = parallel_map(opts.workers, &pts, |&(d1, d2)| {
                let inst = ProblemInstance::new(source, channel, DistortionPair::new(d1, d2)?);
                Ok((min_separate_power(&inst, &opts.solver)?.power / outer_bound_power(&inst).power, d1, d2))
            });
            for r in ratios {
                let (ratio, d1, d2) = r?;
                report.observe(ratio - bound, || {
                    format!("rho={rho} kappa={kappa} d=({d1}, {d2}): ratio {ratio} > bound {bound}")
                });
            }
        }
    }
    Ok(report)
}

/// `P_C / P_sep` against its limit at `D1 = 1 - rho^2`, `D2 = 1e-10`.
pub fn check_theorem3(opts: &VerifyOptions) -> Result<CheckReport> {
    let mut report = CheckReport::new("thm3-limit", 0.01);
    let (rho, kappa) = (0.8, 0.3);
    let inst = ProblemInstance::from_params(rho, 1.0, 0.5, kappa, 1.0 - rho * rho, 1e-10)?;
    let ratio = scheme_c_power(&inst)?.power / min_separate_power(&inst, &opts.solver)?.power;
    let limit = theorem3_limit(&inst.source, kappa);
    report.metric("ratio", ratio);
    report.metric("limit", limit);
    report.observe((ratio / limit - 1.0).abs(), || format!("ratio {ratio} vs limit {limit}"));
    Ok(report)
}

/// `a <= b` up to `1e-9`, measured relative to `max(1, |b|)` because the
/// powers span many orders of magnitude.
fn excess(a: f64, b: f64) -> f64 {
    ((a - b) / b.abs().max(1.0)).max(0.0)
}

/// Scheme ordering and the `P_C = P(rho)` identity on random instances.
pub fn check_ordering(opts: &VerifyOptions) -> Result<Vec<CheckReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x0bde);
    let instances: Vec<ProblemInstance> = (0..1000).map(|_| random_nontrivial_instance(&mut rng)).collect();
    let rows = parallel_map(opts.workers, &instances, |inst| -> Result<[f64; 6]> {
        let p_rho = power_of_nu(&inst.source, &inst.channel, &inst.d, inst.source.rho())?.power;
        Ok([
            outer_bound_power(inst).power,
            min_separate_power(inst, &opts.solver)?.power,
            scheme_c_power(inst)?.power,
            scheme_a_power(inst).power,
            scheme_b_power(inst, &opts.solver)?.power,
            p_rho,
        ])
    });
    let mut order = CheckReport::new("ordering", 1e-9);
    let mut identity = CheckReport::new("identity-pc-equals-p-rho", 1e-12);
    for (inst, row) in instances.iter().zip(rows) {
        let [outer, sep, c, a, b, p_rho] = row?;
        let dev = excess(outer, sep)
            .max(excess(sep, c))
            .max(excess(c, a))
            .max(excess(sep, b));
        order.observe(dev, || {
            format!("{inst:?}: outer={outer} sep={sep} C={c} A={a} B={b}")
        });
        identity.observe(((c - p_rho) / p_rho).abs(), || format!("{inst:?}: P_C={c} P(rho)={p_rho}"));
    }
    Ok(vec![order, identity])
}

/// Minimum of `P(nu)` over a uniform grid of `n` points spanning the feasible interval.
pub fn brute_force_separate(inst: &ProblemInstance, n: usize) -> Result<f64> {
    let interval = crate::model::nu_interval(&inst.source, &inst.d)?;
    let mut best = f64::INFINITY;
    for i in 0..n {
        let nu = if i + 1 == n {
            interval.hi
        } else {
            interval.lo + interval.width() * i as f64 / (n - 1) as f64
        };
        best = best.min(power_of_nu(&inst.source, &inst.channel, &inst.d, nu)?.power);
    }
    Ok(best)
}

fn scheme_b_point_feasible(inst: &ProblemInstance, p: f64, eta_bar: f64) -> bool {
    let kappa = inst.channel.kappa();
    let eta = 1.0 - eta_bar;
    let a = (1.0 + eta * p / (eta_bar * p + inst.channel.n1())).powf(-kappa);
    let b = (1.0 + eta_bar * p / inst.channel.n2()).powf(-kappa);
    let rho2 = inst.source.rho() * inst.source.rho();
    a <= inst.d.d1() && (1.0 - rho2) * b + rho2 * a <= inst.d.d2()
}

/// Scheme B power by exhaustive search over `1000 x 1000` `(P, eta_bar)` grids.
///
/// The first pass is log-spaced in both axes (the private fraction can be
/// many decades below one); later passes are linear and zoom onto the
/// smallest feasible grid power, backing off a few cells in each direction.
pub fn brute_force_scheme_b(inst: &ProblemInstance, p_max: f64) -> f64 {
    const N: usize = 1000;
    const BACK: usize = 5;
    const DECADES_P: f64 = 12.0;
    const DECADES_E: f64 = 15.0;
    let log_node = |hi: f64, decades: f64, i: usize| hi * 10f64.powf(-decades * (1.0 - i as f64 / (N - 1) as f64));
    let mut p_nodes: Vec<f64> = (0..N).map(|i| log_node(p_max, DECADES_P, i)).collect();
    let mut e_nodes: Vec<f64> = std::iter::once(0.0).chain((1..N).map(|i| log_node(1.0, DECADES_E, i))).collect();
    let mut best = f64::INFINITY;
    for _ in 0..4 {
        let hit = p_nodes.iter().enumerate().find_map(|(k, &p)| {
            let js: Vec<usize> = (0..N).filter(|&j| scheme_b_point_feasible(inst, p, e_nodes[j])).collect();
            (!js.is_empty()).then(|| (k, js[0], js[js.len() - 1]))
        });
        let Some((k, j_first, j_last)) = hit else { break };
        best = best.min(p_nodes[k]);
        let (p_lo, p_hi) = (if k < BACK { 0.0 } else { p_nodes[k - BACK] }, p_nodes[k]);
        let (e_lo, e_hi) = (e_nodes[j_first.saturating_sub(BACK)], e_nodes[(j_last + BACK).min(N - 1)]);
        let lin = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * i as f64 / (N - 1) as f64;
        p_nodes = (0..N).map(|i| lin(p_lo, p_hi, i)).collect();
        e_nodes = (0..N).map(|i| lin(e_lo, e_hi, i)).collect();
    }
    best
}

/// Brute-force oracles for the two numeric minimizations.
pub fn check_oracles(opts: &VerifyOptions) -> Result<Vec<CheckReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x04ac);
    let instances: Vec<ProblemInstance> = (0..100).map(|_| random_nontrivial_instance(&mut rng)).collect();
    let rows = parallel_map(opts.workers, &instances, |inst| -> Result<(f64, f64)> {
        Ok((min_separate_power(inst, &opts.solver)?.power, brute_force_separate(inst, 1_000_000)?))
    });
    let mut sep = CheckReport::new("oracle-separate-grid-1e6", 1e-8);
    for (inst, row) in instances.iter().zip(rows) {
        let (fast, brute) = row?;
        sep.observe(((fast - brute) / brute).abs(), || format!("{inst:?}: {fast} vs {brute}"));
    }

    let b_instances = &instances[..10];
    let rows = parallel_map(opts.workers, b_instances, |inst| -> Result<(f64, f64)> {
        let fast = scheme_b_power(inst, &opts.solver)?.power;
        let brute = brute_force_scheme_b(inst, 2.0 * scheme_a_power(inst).power.max(fast));
        Ok((fast, brute))
    });
    let mut b = CheckReport::new("oracle-scheme-b-grid-2d", 1e-4);
    for (inst, row) in b_instances.iter().zip(rows) {
        let (fast, brute) = row?;
        b.observe(((fast - brute) / brute).abs(), || format!("{inst:?}: {fast} vs {brute}"));
    }
    Ok(vec![sep, b])
}

/// Non-trivial instance check used by callers that build instances by hand.
pub fn is_nontrivial(inst: &ProblemInstance) -> bool {
    !classify_region(&inst.source, &inst.d).is_trivial()
}
