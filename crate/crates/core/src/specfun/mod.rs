//! Special functions: gamma family and Mellin–Barnes evaluated G and H functions.

mod contour;
mod foxh;
mod gamma;
mod incgamma;

pub use contour::{ContourPolicy, JointFactor, MbValue, MbValue2};
pub use foxh::{
    fox_h, fox_h_bivariate, fox_h_bivariate_eval, fox_h_eval, meijer_g, meijer_g_eval, BivariateFoxHSpec,
    FoxHKernel, FoxHSpec, MeijerGSpec,
};
pub use gamma::{binomial, factorial, gamma_fn, ln_gamma, ln_gamma_abs, ln_gamma_complex};
pub use incgamma::{gamma_p, gamma_q, lower_incomplete_gamma, regularized_gamma_pq, upper_incomplete_gamma};


