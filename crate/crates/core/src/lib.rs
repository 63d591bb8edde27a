//! Minimum transmit power needed to broadcast two correlated Gaussian sources
//! over a two-receiver degraded Gaussian broadcast channel with separate
//! source and channel codes, compared against earlier separation schemes and
//! the outer bound.
//!
//! * [`model`]: domain types, successive-coding rates, broadcast power for a rate pair.
//! * [`schemes`]: per-scheme minimum power and the closed-form ratio bounds.
//! * [`sweeps`]: ratio maps, fixed-power distortion regions, parametrization checks.
//! * [`verify`]: the numeric verification suites run by `bpd verify`.
//! * [`cli`]: the `bpd` command-line front end.

pub mod cli;
pub mod error;
pub mod model;
pub mod numeric;
pub mod output;
pub mod report;
pub mod schemes;
pub mod sweeps;
pub mod verify;

pub use error::{Error, Result};
pub use model::{
    classify_region, invert_d1_from_r1, min_power_for_rates, nu_interval, power_of_nu,
    successive_rates, ChannelModel, DistortionPair, NuInterval, PowerSolution, PowerSplit,
    RatePair, Region, RegionClass, SchemeKind, SourceModel,
};
pub use report::CheckReport;
pub use schemes::{
    degenerate_power, min_power, min_separate_power, outer_bound_power, scheme_a_power,
    scheme_b_power, scheme_c_power, theorem2_bound, theorem3_limit, ProblemInstance,
    SolverOptions,
};
