use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ChannelModel, SourceModel};
use crate::schemes::SchemeKind;

/// Pareto-minimal `(d1, d2)` points reachable by one scheme at a fixed power,
/// sorted by increasing `d1` (so `d2` strictly decreases).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionCurve {
    pub scheme: SchemeKind,
    pub points: Vec<(f64, f64)>,
}

impl RegionCurve {
    /// Smallest `d2` reachable with first-source distortion at most `d1`:
    /// the staircase upper bound of the traced region.
    pub fn d2_at(&self, d1: f64) -> Option<f64> {
        let idx = self.points.partition_point(|&(x, _)| x <= d1);
        idx.checked_sub(1).map(|i| self.points[i].1)
    }
}

/// Keeps the Pareto-minimal points (no other point is at least as good in
/// both coordinates) and sorts them by `d1`. Non-finite points are dropped.
pub fn lower_envelope(mut points: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    points.retain(|&(a, b)| a.is_finite() && b.is_finite());
    points.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(points.len());
    for p in points {
        if out.last().is_none_or(|&(_, best)| p.1 < best) {
            out.push(p);
        }
    }
    out
}

/// Superposition split at a given private-layer fraction, expressed as the
/// distortion scale factors `2^(-2 R1)` and `2^(-2 R2)` of the two layer capacities.
#[derive(Debug, Clone, Copy)]
struct LayerScales {
    common: f64,
    private: f64,
}

fn layer_scales(channel: &ChannelModel, power: f64, eta_bar: f64) -> LayerScales {
    let kappa = channel.kappa();
    let private_power = eta_bar * power;
    let common_gain = (power + channel.n1()) / (private_power + channel.n1());
    let private_gain = 1.0 + private_power / channel.n2();
    LayerScales {
        common: common_gain.powf(-kappa),
        private: private_gain.powf(-kappa),
    }
}

/// `nu` ranges on which the common-layer inversion respects `nu <= rho / delta`.
///
/// For a fixed common rate, `delta(nu) = K / (1 - 2 nu rho + nu^2)` with
/// `K = (1 - rho^2)(1 - 2^(-2 R1))`, so `nu delta <= rho` is the quadratic
/// `rho nu^2 - (2 rho^2 + K) nu + rho >= 0`. Its roots multiply to one, which
/// leaves `[rho, nu_minus]` and `[1/nu_minus, 1/rho]`, or the whole
/// `[rho, 1/rho]` when there are no real roots.
fn feasible_nu_ranges(rho: f64, common_scale: f64) -> Vec<(f64, f64)> {
    if rho == 0.0 {
        return vec![(0.0, 0.0)];
    }
    let k = (1.0 - rho * rho) * (1.0 - common_scale);
    let b = 2.0 * rho * rho + k;
    let disc = b * b - 4.0 * rho * rho;
    if disc <= 0.0 {
        return vec![(rho, 1.0 / rho)];
    }
    let nu_plus = (b + disc.sqrt()) / (2.0 * rho);
    let nu_minus = 1.0 / nu_plus;
    vec![(rho, nu_minus.max(rho)), (nu_plus.min(1.0 / rho), 1.0 / rho)]
}

fn separate_points(
    source: &SourceModel,
    scales: LayerScales,
    nu_points: usize,
    out: &mut Vec<(f64, f64)>,
) {
    let rho = source.rho();
    let c = (1.0 - rho * rho) * scales.common;
    for (lo, hi) in feasible_nu_ranges(rho, scales.common) {
        let n = if lo == hi { 1 } else { (nu_points / 2).max(2) };
        for i in 0..n {
            let nu = if n == 1 {
                lo
            } else if i + 1 == n {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            };
            let scale = 1.0 - 2.0 * nu * rho + nu * nu;
            if scale <= 0.0 {
                continue;
            }
            let d1 = (c + (rho - nu) * (rho - nu)) / scale;
            let delta = 1.0 - d1;
            let residual = 1.0 - nu * nu * delta;
            if !(d1 > 0.0 && d1 <= 1.0) || residual <= 0.0 {
                continue;
            }
            if nu * delta > rho * (1.0 + 1e-12) {
                continue;
            }
            out.push((d1, residual * scales.private));
        }
    }
}

/// Lower envelope of the distortion pairs `scheme` reaches at transmit power `power`.
///
/// `points` private-layer fractions `eta_bar` are spread uniformly over
/// `[0, 1]`; each fixes the two layer capacities with equality. Closed-form
/// schemes map each split to one distortion pair. Separate coding additionally
/// sweeps `nu` (`nu_points` values), inverting the common rate for `d1` and
/// then reading `d2 = (1 - nu^2 delta) 2^(-2 R2)`.
pub fn distortion_region_at_power(
    source: &SourceModel,
    channel: &ChannelModel,
    power: f64,
    scheme: SchemeKind,
    points: usize,
    nu_points: usize,
) -> Result<RegionCurve> {
    if !(power.is_finite() && power > 0.0) {
        return Err(Error::OutOfRange {
            what: "power",
            value: power,
        });
    }
    if points < 2 {
        return Err(Error::InvalidGrid(format!(
            "need at least 2 power splits, got {points}"
        )));
    }
    let rho2 = source.rho() * source.rho();
    let mut raw = Vec::with_capacity(points * if scheme == SchemeKind::Separate { nu_points } else { 1 });
    for i in 0..points {
        let eta_bar = if i + 1 == points {
            1.0
        } else {
            i as f64 / (points - 1) as f64
        };
        let s = layer_scales(channel, power, eta_bar);
        match scheme {
            SchemeKind::OuterBound => raw.push((s.common, (1.0 - rho2) * s.private)),
            SchemeKind::SchemeA => raw.push((s.common, s.private)),
            SchemeKind::SchemeB => {
                raw.push((s.common, (1.0 - rho2) * s.private + rho2 * s.common))
            }
            SchemeKind::SchemeC => {
                raw.push((s.common, (1.0 - rho2 * (1.0 - s.common)) * s.private))
            }
            SchemeKind::Separate => separate_points(source, s, nu_points.max(2), &mut raw),
        }
    }
    Ok(RegionCurve {
        scheme,
        points: lower_envelope(raw),
    })
}
