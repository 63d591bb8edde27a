//! Domain types and the closed-form rate and power formulas.
//!
//! The source pair is unit-variance bivariate Gaussian with correlation `rho`;
//! the channel is a two-receiver degraded Gaussian broadcast channel where
//! receiver 2 (noise `n2`) is the stronger one. All rates are in bits per
//! source symbol and all logarithms are base 2.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Correlation of the unit-variance Gaussian source pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SourceModel {
    rho: f64,
}

impl SourceModel {
    pub fn new(rho: f64) -> Result<Self> {
        if !(rho.is_finite() && (0.0..1.0).contains(&rho)) {
            return Err(Error::InvalidParameter {
                ty: "SourceModel",
                field: "rho",
                value: rho,
                constraint: "correlation must satisfy 0 <= rho < 1",
            });
        }
        Ok(Self { rho })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }
}

/// Noise variances of the two receivers and the bandwidth ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelModel {
    n1: f64,
    n2: f64,
    kappa: f64,
}

impl ChannelModel {
    pub fn new(n1: f64, n2: f64, kappa: f64) -> Result<Self> {
        if !(n2.is_finite() && n2 > 0.0) {
            return Err(Error::InvalidParameter {
                ty: "ChannelModel",
                field: "n2",
                value: n2,
                constraint: "noise variances must satisfy n1 >= n2 > 0",
            });
        }
        if !(n1.is_finite() && n1 >= n2) {
            return Err(Error::InvalidParameter {
                ty: "ChannelModel",
                field: "n1",
                value: n1,
                constraint: "noise variances must satisfy n1 >= n2 > 0",
            });
        }
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(Error::InvalidParameter {
                ty: "ChannelModel",
                field: "kappa",
                value: kappa,
                constraint: "bandwidth ratio must satisfy kappa > 0",
            });
        }
        Ok(Self { n1, n2, kappa })
    }

    pub fn n1(&self) -> f64 {
        self.n1
    }

    pub fn n2(&self) -> f64 {
        self.n2
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }
}

/// Target mean-squared distortions for the two sources.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistortionPair {
    d1: f64,
    d2: f64,
}

impl DistortionPair {
    pub fn new(d1: f64, d2: f64) -> Result<Self> {
        for (field, value) in [("d1", d1), ("d2", d2)] {
            if !(value.is_finite() && value > 0.0 && value <= 1.0) {
                return Err(Error::InvalidParameter {
                    ty: "DistortionPair",
                    field,
                    value,
                    constraint: "distortions must satisfy 0 < d <= 1",
                });
            }
        }
        Ok(Self { d1, d2 })
    }

    pub fn d1(&self) -> f64 {
        self.d1
    }

    pub fn d2(&self) -> f64 {
        self.d2
    }

    /// `1 - d1`.
    pub fn delta(&self) -> f64 {
        1.0 - self.d1
    }
}

/// Common-layer and refinement-layer source-coding rates, in bits per source symbol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePair {
    pub r1: f64,
    pub r2: f64,
}

impl RatePair {
    pub fn new(r1: f64, r2: f64) -> Result<Self> {
        for (field, value) in [("r1", r1), ("r2", r2)] {
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::InvalidParameter {
                    ty: "RatePair",
                    field,
                    value,
                    constraint: "rates must be finite and non-negative",
                });
            }
        }
        Ok(Self { r1, r2 })
    }
}

/// Which achievability scheme (or converse) a power figure belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeKind {
    /// Optimal separate coding: successive source coding over superposition.
    Separate,
    /// Independent encoding of the two sources.
    SchemeA,
    /// De-correlation `S2 = rho S1 + E`.
    SchemeB,
    /// Refinement coded conditionally on the quantized first source.
    SchemeC,
    /// Converse obtained by revealing `S1` to the strong receiver.
    #[serde(rename = "outer", alias = "outer-bound")]
    OuterBound,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 5] = [
        SchemeKind::OuterBound,
        SchemeKind::Separate,
        SchemeKind::SchemeC,
        SchemeKind::SchemeB,
        SchemeKind::SchemeA,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SchemeKind::Separate => "separate",
            SchemeKind::SchemeA => "scheme-a",
            SchemeKind::SchemeB => "scheme-b",
            SchemeKind::SchemeC => "scheme-c",
            SchemeKind::OuterBound => "outer",
        }
    }

    /// Accepts the canonical names plus the short aliases used on the command line.
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s.trim().to_ascii_lowercase().as_str() {
            "separate" | "sep" => SchemeKind::Separate,
            "scheme-a" | "schemea" | "a" => SchemeKind::SchemeA,
            "scheme-b" | "schemeb" | "b" => SchemeKind::SchemeB,
            "scheme-c" | "schemec" | "c" => SchemeKind::SchemeC,
            "outer" | "outer-bound" | "outerbound" => SchemeKind::OuterBound,
            _ => return None,
        })
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Transmit power and how it is split between the two superposition layers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerSplit {
    pub power: f64,
    /// Fraction of power on the private (refinement) layer.
    pub eta_bar: f64,
}

/// Minimum power of one scheme at one distortion pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerSolution {
    pub scheme: SchemeKind,
    pub power: f64,
    /// Argmin `nu` for separate coding; `None` for closed-form schemes.
    pub optimizer: Option<f64>,
    pub eta_bar: f64,
    /// Set when the figure comes from the common-message-only convention of
    /// the trivial region rather than the scheme's own formula.
    pub degenerate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Region {
    NonTrivial,
    Trivial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct RegionClass {
    pub region: Region,
    /// `(1 - d1)(1 - d2) >= rho^2`.
    pub low_distortion: bool,
}

impl RegionClass {
    pub fn is_trivial(&self) -> bool {
        self.region == Region::Trivial
    }

    pub fn label(&self) -> &'static str {
        match (self.region, self.low_distortion) {
            (Region::NonTrivial, false) => "nontrivial",
            (Region::NonTrivial, true) => "nontrivial-low",
            (Region::Trivial, false) => "trivial",
            (Region::Trivial, true) => "trivial-low",
        }
    }
}

/// Closed interval of admissible `nu` values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NuInterval {
    pub lo: f64,
    pub hi: f64,
}

impl NuInterval {
    // Accepts a few ulps of rounding around the endpoints.
    pub fn contains(&self, nu: f64) -> bool {
        let slack = 1e-12 * self.hi.abs().max(1.0);
        nu >= self.lo - slack && nu <= self.hi + slack
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Classifies a distortion pair. Both inequalities are exact comparisons, so
/// boundary cells land deterministically: equality counts as trivial and as
/// low-distortion.
pub fn classify_region(source: &SourceModel, d: &DistortionPair) -> RegionClass {
    let rho2 = source.rho * source.rho;
    let region = if d.d2 >= 1.0 - rho2 * d.delta() {
        Region::Trivial
    } else {
        Region::NonTrivial
    };
    RegionClass {
        region,
        low_distortion: d.delta() * (1.0 - d.d2) >= rho2,
    }
}

/// Admissible `nu` range `[rho, min(1/rho, rho/delta, nu*)]`, `nu* = sqrt((1-d2)/delta)`.
///
/// With `d1 = 1` the common-layer rate is zero for every `nu` and the
/// interval is collapsed to the point `{rho}`.
pub fn nu_interval(source: &SourceModel, d: &DistortionPair) -> Result<NuInterval> {
    if classify_region(source, d).is_trivial() {
        return Err(Error::TrivialRegion);
    }
    let rho = source.rho;
    let delta = d.delta();
    if delta == 0.0 {
        return Ok(NuInterval { lo: rho, hi: rho });
    }
    let nu_star = ((1.0 - d.d2) / delta).sqrt();
    let hi = (1.0 / rho).min(rho / delta).min(nu_star);
    assert!(
        rho <= hi,
        "empty nu interval in the non-trivial region: [{rho}, {hi}]"
    );
    Ok(NuInterval { lo: rho, hi })
}

/// `sqrt((1 - d2) / delta)`, where the refinement rate reaches zero.
pub fn nu_star(d: &DistortionPair) -> f64 {
    ((1.0 - d.d2) / d.delta()).sqrt()
}

/// Denominator of the common-layer rate.
///
/// `d1 (1 - nu^2 delta) - (rho - nu delta)^2` expands to
/// `d1 (1 + nu^2 - 2 nu rho) - (rho - nu)^2 = d1 (1 - rho^2) - delta (nu - rho)^2`;
/// the last form is evaluated because it is exact at `nu = rho`.
pub(crate) fn common_rate_denominator(rho: f64, d1: f64, nu: f64) -> f64 {
    let diff = nu - rho;
    d1 * (1.0 - rho * rho) - (1.0 - d1) * diff * diff
}

/// Successive-coding rate pair achieving `d` for a given `nu`.
pub fn successive_rates(source: &SourceModel, d: &DistortionPair, nu: f64) -> Result<RatePair> {
    let interval = nu_interval(source, d)?;
    if !nu.is_finite() || !interval.contains(nu) {
        return Err(Error::InfeasibleNu {
            nu,
            lo: interval.lo,
            hi: interval.hi,
        });
    }
    let rho = source.rho;
    let delta = d.delta();
    let den = common_rate_denominator(rho, d.d1, nu);
    if den <= 0.0 {
        return Err(Error::NonPositiveDenominator { nu, value: den });
    }
    let r1 = 0.5 * ((1.0 - rho * rho) / den).log2();
    let r2 = if d.d2 == 1.0 {
        0.0
    } else {
        (0.5 * ((1.0 - nu * nu * delta) / d.d2).log2()).max(0.0)
    };
    // A zero-rate layer can come out as -0.0 or a rounding-level negative.
    Ok(RatePair {
        r1: r1.max(0.0),
        r2,
    })
}

/// Distortion of the first source that makes `nu` and `r1` consistent.
///
/// The common-rate denominator is linear in `d1`, giving
/// `d1 = (c + (rho - nu)^2) / (1 - 2 nu rho + nu^2)` with `c = (1 - rho^2) 2^(-2 r1)`.
pub fn invert_d1_from_r1(source: &SourceModel, nu: f64, r1: f64) -> Result<f64> {
    if !(r1.is_finite() && r1 >= 0.0) {
        return Err(Error::OutOfRange {
            what: "r1",
            value: r1,
        });
    }
    let rho = source.rho;
    let scale = 1.0 - 2.0 * nu * rho + nu * nu;
    if !(scale > 0.0) {
        return Err(Error::OutOfRange {
            what: "1 - 2 nu rho + nu^2",
            value: scale,
        });
    }
    let c = (1.0 - rho * rho) * (-2.0 * r1).exp2();
    let d1 = (c + (rho - nu) * (rho - nu)) / scale;
    if !(d1 > 0.0 && d1 <= 1.0) {
        return Err(Error::OutOfRange {
            what: "d1",
            value: d1,
        });
    }
    Ok(d1)
}

/// `2^(2 r / kappa) - 1`, accurate for small rates.
pub(crate) fn snr_for_rate(rate: f64, kappa: f64) -> f64 {
    (2.0 * rate / kappa * std::f64::consts::LN_2).exp_m1()
}

/// Least broadcast power supporting a common rate `r1` and a private rate `r2`.
///
/// The power is `N1 (2^(2R1/k) - 1) + N2 (2^(2R2/k) - 1) 2^(2R1/k)`, attained
/// when the private layer carries exactly the power it needs,
/// `eta_bar P = N2 (2^(2R2/k) - 1)`. Zero power reports `eta_bar = 0`.
pub fn min_power_for_rates(channel: &ChannelModel, rates: &RatePair) -> PowerSplit {
    let common = snr_for_rate(rates.r1, channel.kappa);
    let private = snr_for_rate(rates.r2, channel.kappa);
    let private_power = channel.n2 * private;
    let power = channel.n1 * common + private_power * (common + 1.0);
    let eta_bar = if power > 0.0 { private_power / power } else { 0.0 };
    PowerSplit { power, eta_bar }
}

/// Separate-coding power as a function of `nu`: the successive-coding rates
/// fed through [`min_power_for_rates`].
pub fn power_of_nu(
    source: &SourceModel,
    channel: &ChannelModel,
    d: &DistortionPair,
    nu: f64,
) -> Result<PowerSplit> {
    let rates = successive_rates(source, d, nu)?;
    Ok(min_power_for_rates(channel, &rates))
}
