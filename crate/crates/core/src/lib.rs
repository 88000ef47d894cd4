//! Gaussian long-memory processes observed through a round-off grid or a
//! sign transform.
//!
//! The crate is organised bottom-up:
//!
//! * [`lmcore`]: domain types and exact autocorrelations of fractional
//!   Gaussian noise and fARIMA(0,d,0), with the special functions they need.
//! * [`synth`]: exact stationary Gaussian path generation (circulant
//!   embedding with a Durbin-Levinson fallback).
//! * [`discretize`]: the round-off and sign transforms.
//! * [`theory`]: Hermite coefficients, discretized moments, autocovariance and
//!   spectral asymptotics, the exact expected DFA fluctuation.
//! * [`estimators`]: periodogram, local Whittle, DFA, sample autocovariance.
//! * [`harness`]: Monte Carlo experiments, tables, figure data and file IO.
//!
//! Sample-path code is generic over the [`Real`] scalar (`f32` or `f64`);
//! the closed-form theory is evaluated in `f64`.

pub mod discretize;
pub mod error;
pub mod estimators;
pub mod harness;
pub mod lmcore;
pub mod scalar;
pub mod synth;
pub mod theory;

pub use discretize::DiscretizationSpec;
pub use error::{Error, Result};
pub use lmcore::{HurstExponent, ProcessKind, ProcessSpec, Series, SeriesMeta};
pub use scalar::Real;
pub use synth::SeedSpec;

/// Double-precision sample path, the default used by the harness and CLI.
pub type Series64 = Series<f64>;
/// Single-precision sample path.
pub type Series32 = Series<f32>;
/// Periodogram over `f64` ordinates.
pub type Periodogram64 = estimators::Periodogram<f64>;
