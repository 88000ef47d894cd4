//! Closed-form and semi-analytic quantities for the transformed processes.

mod acv;
mod dfa;
mod hermite;
mod moments;
mod spectral;

pub use acv::{
    acv_scaling_factor, hosking_bias, scaling_for, sign_acv, sign_acv_scaling, transformed_acv,
    AcvScaling, TransformedProcess, TruncatedSum, ACV_HERMITE_ORDER,
};
pub use dfa::{dfa_asymptote, dfa_shape, expected_dfa_exact};
pub use hermite::{
    g1, g3, hermite_coefficients, sign_coefficient, HermiteCoefficients, BIN_SUM_TOLERANCE,
};
pub use moments::{discretized_kurtosis, discretized_variance, kurtosis_minimum, MOMENT_TOLERANCE};
pub use spectral::{
    asymptotic_power_terms, c_phi, cosine_power_sum, spectral_density_numeric, spectral_expansion,
    spectral_expansion_fgn, AcvExpansion, ExpansionDiagnostics, NumericDensity, PowerTerm,
    SecondOrder, SpectralExpansion, C0_MAX_I, C0_MAX_J, C0_TOLERANCE, NUMERIC_MAX_LAGS,
};
