//! Domain types, reference autocorrelations and special functions.

mod acf;
mod special;
mod types;

pub use acf::{
    farima_autocorrelation, farima_autocorrelations, fgn_autocorrelation, fgn_autocorrelations,
};
pub use special::{
    elliptic_theta2, erf, erfc, gamma, gaussian_error_fn, log_gamma, riemann_zeta,
    THETA_RELATIVE_TOLERANCE, ZETA_BORWEIN_TERMS,
};
pub use types::{AsymptoticAcv, HurstExponent, ProcessKind, ProcessSpec, Series, SeriesMeta};
