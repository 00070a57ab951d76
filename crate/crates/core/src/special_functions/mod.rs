//! Gamma, modified Bessel and Laguerre functions for real arguments.

mod bessel;
mod gamma;
mod laguerre;

pub use bessel::{bessel_i, bessel_i_scaled, bessel_i_with, edwards_gulyaev_asymptotic, ln_bessel_i};
pub use gamma::log_gamma;
pub use laguerre::{confluent_hypergeometric_polynomial, laguerre};

pub(crate) use gamma::{ln_factorial, log_gamma_unchecked};
pub(crate) use laguerre::{laguerre_sequence, laguerre_unchecked};

/// Truncation controls shared by the series evaluators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccuracyPolicy {
    pub target_rel_err: f64,
    pub max_terms: usize,
}

impl Default for AccuracyPolicy {
    fn default() -> Self {
        AccuracyPolicy {
            target_rel_err: 1e-12,
            max_terms: 500,
        }
    }
}
