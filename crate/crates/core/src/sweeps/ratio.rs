use serde::{Deserialize, Serialize};

use super::{parallel_map, GridSpec};
use crate::error::{Error, Result};
use crate::model::{classify_region, ChannelModel, DistortionPair, RegionClass, SourceModel};
use crate::schemes::{
    min_power, outer_bound_power, scheme_a_power, scheme_b_power, ProblemInstance, SchemeKind,
    SolverOptions,
};

/// Which power ratio a map reports in `ratio_db`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Comparison {
    /// `P_sep / P_outer`.
    SepVsOuter,
    /// `P_C / P_sep`.
    CVsSep,
}

impl Comparison {
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "sep-vs-outer" => Some(Comparison::SepVsOuter),
            "c-vs-sep" => Some(Comparison::CVsSep),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Comparison::SepVsOuter => "sep-vs-outer",
            Comparison::CVsSep => "c-vs-sep",
        }
    }

    pub fn schemes(&self) -> (SchemeKind, SchemeKind) {
        match self {
            Comparison::SepVsOuter => (SchemeKind::Separate, SchemeKind::OuterBound),
            Comparison::CVsSep => (SchemeKind::SchemeC, SchemeKind::Separate),
        }
    }
}

/// All scheme powers at one `(d1, d2)` grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioCell {
    pub d1: f64,
    pub d2: f64,
    pub p_sep: f64,
    pub p_outer: f64,
    pub p_a: f64,
    pub p_b: f64,
    pub p_c: f64,
    /// `10 log10` of the selected power ratio; `0` when both powers vanish.
    pub ratio_db: f64,
    pub region: RegionClass,
    /// Optimal `nu` of separate coding; absent in the trivial region.
    pub nu_opt: Option<f64>,
    /// Private-layer power fraction of the separate-coding solution.
    pub eta_bar: f64,
}

/// A grid point and its outcome; a failed cell carries the error instead.
#[derive(Debug, Clone, PartialEq)]
pub struct MapEntry {
    pub d1: f64,
    pub d2: f64,
    pub cell: std::result::Result<RatioCell, Error>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioMap {
    pub comparison: Comparison,
    /// Row-major: `d1` outer, `d2` inner.
    pub entries: Vec<MapEntry>,
    /// The curve `(1 - d1)(1 - d2) = rho^2` bounding the low-distortion region.
    pub boundary: Vec<(f64, f64)>,
}

impl RatioMap {
    pub fn cells(&self) -> impl Iterator<Item = &RatioCell> {
        self.entries.iter().filter_map(|e| e.cell.as_ref().ok())
    }

    pub fn failed(&self) -> usize {
        self.entries.iter().filter(|e| e.cell.is_err()).count()
    }

    /// Cell whose grid point is closest (Euclidean) to `(d1, d2)`.
    pub fn nearest(&self, d1: f64, d2: f64) -> Option<&MapEntry> {
        self.entries.iter().min_by(|a, b| {
            let da = (a.d1 - d1).hypot(a.d2 - d2);
            let db = (b.d1 - d1).hypot(b.d2 - d2);
            da.total_cmp(&db)
        })
    }
}

/// `10 log10(num / den)`, with `0/0` read as equal powers.
pub fn power_ratio_db(num: f64, den: f64) -> f64 {
    if num == 0.0 && den == 0.0 {
        0.0
    } else {
        10.0 * (num / den).log10()
    }
}

/// Evaluates every scheme at one distortion pair.
///
/// Separate coding and Scheme C use the common-message-only power in the
/// trivial region; the cell's `region` records that.
pub fn ratio_cell(
    source: &SourceModel,
    channel: &ChannelModel,
    d1: f64,
    d2: f64,
    comparison: Comparison,
    opts: &SolverOptions,
) -> Result<RatioCell> {
    let d = DistortionPair::new(d1, d2)?;
    let inst = ProblemInstance::new(*source, *channel, d);
    let region = classify_region(source, &d);
    let sep = min_power(&inst, SchemeKind::Separate, opts)?;
    let p_outer = outer_bound_power(&inst).power;
    let p_a = scheme_a_power(&inst).power;
    let p_b = scheme_b_power(&inst, opts)?.power;
    let p_c = min_power(&inst, SchemeKind::SchemeC, opts)?.power;
    let ratio_db = match comparison {
        Comparison::SepVsOuter => power_ratio_db(sep.power, p_outer),
        Comparison::CVsSep => power_ratio_db(p_c, sep.power),
    };
    Ok(RatioCell {
        d1,
        d2,
        p_sep: sep.power,
        p_outer,
        p_a,
        p_b,
        p_c,
        ratio_db,
        region,
        nu_opt: sep.optimizer,
        eta_bar: sep.eta_bar,
    })
}

/// Points of `(1 - d1)(1 - d2) = rho^2` at the given `d1` values, where `d2` lies in `[0, 1]`.
pub fn low_distortion_boundary(source: &SourceModel, d1_values: &[f64]) -> Vec<(f64, f64)> {
    let rho2 = source.rho() * source.rho();
    d1_values
        .iter()
        .filter(|&&d1| d1 < 1.0)
        .map(|&d1| (d1, 1.0 - rho2 / (1.0 - d1)))
        .filter(|&(_, d2)| (0.0..=1.0).contains(&d2))
        .collect()
}

/// Power-ratio map over a `d1 x d2` grid.
///
/// Cells are independent; `workers` threads evaluate them and the output keeps
/// grid order, so the result does not depend on the worker count. `None` or
/// `Some(0)` uses the available parallelism.
pub fn ratio_map(
    source: &SourceModel,
    channel: &ChannelModel,
    d1_grid: &GridSpec,
    d2_grid: &GridSpec,
    comparison: Comparison,
    opts: &SolverOptions,
    workers: Option<usize>,
) -> Result<RatioMap> {
    d1_grid.check_unit_interval("d1")?;
    d2_grid.check_unit_interval("d2")?;
    let d1s = d1_grid.values();
    let d2s = d2_grid.values();
    let points: Vec<(f64, f64)> = d1s
        .iter()
        .flat_map(|&d1| d2s.iter().map(move |&d2| (d1, d2)))
        .collect();

    let entries = parallel_map(workers, &points, |&(d1, d2)| MapEntry {
        d1,
        d2,
        cell: ratio_cell(source, channel, d1, d2, comparison, opts),
    });

    Ok(RatioMap {
        comparison,
        entries,
        boundary: low_distortion_boundary(source, &d1s),
    })
}
