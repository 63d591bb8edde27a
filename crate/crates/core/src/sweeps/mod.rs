//! Grid drivers: power-ratio maps over the distortion plane, fixed-power
//! distortion regions, and the parametrization checks.

mod grid;
mod lemma;
mod ratio;
mod region;

use rayon::prelude::*;

pub use grid::{GridSpec, Spacing};
pub use lemma::{
    appendix_monotonicity_suite, eta_of_nu, f_alpha, lemma1_equivalence_suite, root_f_alpha,
};
pub use ratio::{
    low_distortion_boundary, power_ratio_db, ratio_cell, ratio_map, Comparison, MapEntry,
    RatioCell, RatioMap,
};
pub use region::{distortion_region_at_power, lower_envelope, RegionCurve};

/// Worker count for `Some(n)` with `n > 0`, else the machine's available parallelism.
pub fn resolve_workers(workers: Option<usize>) -> usize {
    match workers {
        Some(n) if n > 0 => n,
        _ => std::thread::available_parallelism().map_or(1, |n| n.get()),
    }
}

/// Order-preserving map over `items` on a dedicated pool of `workers` threads.
pub(crate) fn parallel_map<T, R, F>(workers: Option<usize>, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    let n = resolve_workers(workers);
    if n <= 1 {
        return items.iter().map(f).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
        Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
        Err(_) => items.iter().map(f).collect(),
    }
}
