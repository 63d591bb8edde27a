use bpd_core::sweeps::{distortion_region_at_power, RegionCurve};
use bpd_core::{
    degenerate_power, invert_d1_from_r1, min_power_for_rates, min_separate_power, nu_interval,
    power_of_nu, successive_rates, ChannelModel, DistortionPair, ProblemInstance, RatePair,
    SchemeKind, SolverOptions, SourceModel,
};
use proptest::prelude::*;

/// `(rho, d1, d2)` strictly inside the non-trivial region.
fn nontrivial() -> impl Strategy<Value = (f64, f64, f64)> {
    (0.05..0.95f64, 0.01..0.99f64, 0.01..0.99f64).prop_map(|(rho, d1, t)| {
        let d2 = (1.0 - rho * rho * (1.0 - d1)) * t;
        (rho, d1, d2)
    })
}

fn channel() -> impl Strategy<Value = ChannelModel> {
    (0.1..1.0f64, 0.0..1.0f64, prop::sample::select(vec![0.3, 1.0, 2.0]))
        .prop_map(|(n2, u, kappa)| ChannelModel::new(n2 + u * (1.0 - n2), n2, kappa).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn rate_at_rho_is_plain_rate_distortion((rho, d1, d2) in nontrivial()) {
        let s = SourceModel::new(rho).unwrap();
        let d = DistortionPair::new(d1, d2).unwrap();
        let r = successive_rates(&s, &d, rho).unwrap();
        prop_assert!((r.r1 - 0.5 * (1.0 / d1).log2()).abs() <= 1e-12);
    }

    #[test]
    fn d1_inversion_round_trips((rho, d1, d2) in nontrivial(), t in 0.0..=1.0f64) {
        let s = SourceModel::new(rho).unwrap();
        let d = DistortionPair::new(d1, d2).unwrap();
        let i = nu_interval(&s, &d).unwrap();
        let nu = i.lo + t * i.width();
        let r = successive_rates(&s, &d, nu).unwrap();
        let back = invert_d1_from_r1(&s, nu, r.r1).unwrap();
        let dd = DistortionPair::new(back, d2).unwrap();
        let again = successive_rates(&s, &dd, nu).unwrap();
        prop_assert!((again.r1 - r.r1).abs() <= 1e-12, "{} vs {}", again.r1, r.r1);
    }

    #[test]
    fn broadcast_power_meets_capacities_with_equality(ch in channel(), r1 in 0.0..4.0f64, r2 in 0.0..4.0f64) {
        let s = min_power_for_rates(&ch, &RatePair::new(r1, r2).unwrap());
        let k = ch.kappa();
        let eta = 1.0 - s.eta_bar;
        let c1 = 0.5 * k * (1.0 + eta * s.power / (s.eta_bar * s.power + ch.n1())).log2();
        let c2 = 0.5 * k * (1.0 + s.eta_bar * s.power / ch.n2()).log2();
        prop_assert!((c1 - r1).abs() <= 1e-10 && (c2 - r2).abs() <= 1e-10, "{c1} {c2}");
    }

    #[test]
    fn broadcast_power_increases_in_each_rate(ch in channel(), r1 in 0.0..3.0f64, r2 in 0.0..3.0f64, h in 1e-3..0.5f64) {
        let p = |a: f64, b: f64| min_power_for_rates(&ch, &RatePair::new(a, b).unwrap()).power;
        prop_assert!(p(r1 + h, r2) > p(r1, r2));
        prop_assert!(p(r1, r2 + h) > p(r1, r2));
    }

    #[test]
    fn separate_power_never_beats_a_feasible_nu((rho, d1, d2) in nontrivial(), ch in channel(), t in 0.0..=1.0f64) {
        let inst = ProblemInstance::new(SourceModel::new(rho).unwrap(), ch, DistortionPair::new(d1, d2).unwrap());
        let best = min_separate_power(&inst, &SolverOptions::default()).unwrap();
        let i = nu_interval(&inst.source, &inst.d).unwrap();
        let p = power_of_nu(&inst.source, &ch, &inst.d, i.lo + t * i.width()).unwrap().power;
        prop_assert!(best.power <= p * (1.0 + 1e-12));
    }
}

#[test]
fn power_is_continuous_at_nu_star() {
    // Pick d2 so the interval ends at nu*: rho/delta and 1/rho both exceed it.
    let s = SourceModel::new(0.8).unwrap();
    let ch = ChannelModel::new(1.0, 0.5, 1.0).unwrap();
    let d = DistortionPair::new(0.2, 0.3).unwrap();
    let i = nu_interval(&s, &d).unwrap();
    let nu_star = (0.7f64 / 0.8).sqrt();
    assert_eq!(i.hi, nu_star);
    let at = power_of_nu(&s, &ch, &d, nu_star).unwrap().power;
    let left = power_of_nu(&s, &ch, &d, nu_star * (1.0 - 1e-6)).unwrap().power;
    assert!(((left - at) / at).abs() < 1e-5);
}

#[test]
fn separate_power_is_continuous_into_trivial_region() {
    for (rho, d1, kappa) in [(0.8, 0.2, 1.0), (0.5, 0.6, 0.3), (0.9, 0.05, 2.0)] {
        let boundary = 1.0 - rho * rho * (1.0 - d1);
        let at = ProblemInstance::from_params(rho, 1.0, 0.5, kappa, d1, boundary).unwrap();
        let deg = degenerate_power(&at, SchemeKind::Separate).unwrap().power;
        let below = ProblemInstance::from_params(rho, 1.0, 0.5, kappa, d1, boundary * (1.0 - 1e-9)).unwrap();
        let sep = min_separate_power(&below, &SolverOptions::default()).unwrap().power;
        assert!(((sep - deg) / deg).abs() < 1e-6, "rho={rho}: {sep} vs {deg}");
    }
}

/// `d2` of the curve at `d1` by linear interpolation between neighbours.
fn interp(c: &RegionCurve, d1: f64) -> Option<f64> {
    let k = c.points.partition_point(|&(x, _)| x < d1);
    if k == 0 || k == c.points.len() {
        return None;
    }
    let ((x0, y0), (x1, y1)) = (c.points[k - 1], c.points[k]);
    Some(y0 + (y1 - y0) * (d1 - x0) / (x1 - x0))
}

#[test]
fn region_curves_are_dominance_consistent() {
    for rho in [0.2, 0.5, 0.8] {
        let s = SourceModel::new(rho).unwrap();
        let ch = ChannelModel::new(1.0, 0.3162, 2.0).unwrap();
        let curve = |k| distortion_region_at_power(&s, &ch, 1.995, k, 512, 512).unwrap();
        let order = [SchemeKind::OuterBound, SchemeKind::Separate, SchemeKind::SchemeC, SchemeKind::SchemeA];
        let curves: Vec<RegionCurve> = order.iter().map(|&k| curve(k)).collect();
        for w in curves.windows(2) {
            let (better, worse) = (&w[0], &w[1]);
            for &(d1, d2) in &worse.points {
                if let Some(b) = interp(better, d1) {
                    assert!(b <= d2 + 1e-3 * d2, "rho={rho}: {} above {} at d1={d1}: {b} > {d2}", better.scheme, worse.scheme);
                }
            }
        }
    }
}
