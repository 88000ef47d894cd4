//! Hurst estimators and the statistics they are built on.

mod acv;
mod dfa;
mod periodogram;
mod whittle;

pub use acv::sample_acv;
pub use dfa::{
    dfa_box_sizes, dfa_curve, dfa_curve_with_sizes, dfa_estimate, dfa_estimate_with,
    dfa_fluctuation_squared, DfaCurve, DfaSelection,
};
pub use periodogram::{periodogram, Periodogram, PeriodogramPlan};
pub use whittle::{
    bandwidth, local_whittle, local_whittle_from_periodogram, whittle_objective,
    WHITTLE_GRID_POINTS, WHITTLE_TOLERANCE,
};
