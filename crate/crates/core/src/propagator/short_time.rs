use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::Medium;
use crate::defect_geometry::DefectParams;
use crate::error::{Error, Result};
use crate::spectrum::Couplings;

/// How the σ of the conical metric is split between the one-step
/// amplitude and the area element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum MeasureConvention {
    /// Amplitude Mσ/2πħε, measure r dr dθ.
    #[default]
    AmplitudeCarriesSigma,
    /// Amplitude M/2πħε, measure σ r dr dθ.
    MeasureCarriesSigma,
}

impl MeasureConvention {
    /// Weight multiplying r dr dθ in the area element.
    pub fn area_weight(self, sigma: f64) -> f64 {
        match self {
            MeasureConvention::AmplitudeCarriesSigma => 1.0,
            MeasureConvention::MeasureCarriesSigma => sigma,
        }
    }
}

/// One imaginary-time step ε of the discretized path integral with the
/// default measure convention.
pub fn short_time_kernel(
    r1: f64,
    r2: f64,
    dtheta: f64,
    epsilon_e: f64,
    defect: &DefectParams,
    couplings: &Couplings,
    k: f64,
) -> Result<Complex64> {
    short_time_kernel_with(r1, r2, dtheta, epsilon_e, defect, couplings, k, MeasureConvention::default())
}

/// A·exp(−S_ε/ħ) with the Euclidean one-step action
///
/// S_ε/ħ = M(r2−r1)²/2ħε + (Mσ²r1r2/ħε)(1 − cos(Δθ + iξħε/Mσ²r1r2))
///       + (4ξ²+κ)ħε/8Mσ²r1r2 + Mω²ε(r1²+r2²)/4ħ.
///
/// The gauge shift makes the angular factor complex whenever ξ ≠ 0.
#[allow(clippy::too_many_arguments)]
pub fn short_time_kernel_with(
    r1: f64,
    r2: f64,
    dtheta: f64,
    epsilon_e: f64,
    defect: &DefectParams,
    couplings: &Couplings,
    k: f64,
    convention: MeasureConvention,
) -> Result<Complex64> {
    for (name, v) in [("r1", r1), ("r2", r2), ("epsilon", epsilon_e)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::domain(format!("{name} must be positive, got {v}")));
        }
    }
    if !dtheta.is_finite() {
        return Err(Error::domain("angle difference must be finite"));
    }
    let m = Medium::new(defect, couplings, k)?;
    let s2 = m.sigma * m.sigma;
    let hbar_eps = m.hbar * epsilon_e;
    let amplitude = m.mass / (2.0 * PI * hbar_eps)
        * match convention {
            MeasureConvention::AmplitudeCarriesSigma => m.sigma,
            MeasureConvention::MeasureCarriesSigma => 1.0,
        };
    let stiffness = m.mass * s2 * r1 * r2 / hbar_eps;
    let dr = r2 - r1;
    let shifted = Complex64::new(dtheta, m.xi / stiffness);
    // 1 − cos z = 2 sin²(z/2) keeps the small-angle region accurate
    let half_sin = (shifted * 0.5).sin();
    let angular = 2.0 * stiffness * half_sin * half_sin;
    let real = m.mass * dr * dr / (2.0 * hbar_eps)
        + (4.0 * m.xi * m.xi + m.kappa) / (8.0 * stiffness)
        + m.mass * m.omega * m.omega * epsilon_e * (r1 * r1 + r2 * r2) / (4.0 * m.hbar);
    Ok(amplitude * (-(angular + real)).exp())
}
