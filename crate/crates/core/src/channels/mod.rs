//! Channel laws: α-μ RF links and the Málaga FSO link with pointing error,
//! detection order and blockage.

mod alpha_mu;
mod malaga;

pub use alpha_mu::{alpha_mu_cdf, alpha_mu_cdf_finite, alpha_mu_pdf, RfChannelParams};
pub use malaga::{
    electrical_snr, fso_blocked_cdf, fso_blocked_cdf_with, malaga_cdf, malaga_cdf_with, malaga_pdf,
    malaga_pdf_with, Detection, FsoLinkParams, MalagaConstants,
};

use crate::scalar::{lit, Real};

/// Decibels to linear power ratio.
#[inline]
pub fn db_to_linear<T: Real>(db: T) -> T {
    lit::<T>(10.0).powf(db / lit(10.0))
}

/// Linear power ratio to decibels.
#[inline]
pub fn linear_to_db<T: Real>(x: T) -> T {
    lit::<T>(10.0) * x.log10()
}

/// A point evaluation of a density or distribution function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistEval<T = f64> {
    pub point: T,
    pub value: T,
}
