use std::f64::consts::TAU;

use num_complex::Complex64;

use super::{transverse_propagator, PropagatorQuery, TruncationPolicy};
use crate::defect_geometry::DefectParams;
use crate::error::{Error, Result};
use crate::numerics::Quadrature;
use crate::spectrum::Couplings;

/// e-folds of the Gaussian k-factor covered by the automatic window.
const WINDOW_EFOLDS: f64 = 40.0;

/// Full three-dimensional kernel
/// ∫ dk/2π e^{ik(z2−z1)} e^{−τ_Eħk²/2M} e^{−τ_E(βk−α)ω̄} K⊥^{(k)},
/// where the k-dependence of K⊥ enters through ξ = α − βk. `query.k` is
/// ignored. `k_half_width = None` centres a window on the Gaussian peak
/// wide enough that its weight at the edges is e^{−40}.
pub fn z_sector_propagator(
    z1: f64,
    z2: f64,
    query: &PropagatorQuery,
    defect: &DefectParams,
    couplings: &Couplings,
    policy: &TruncationPolicy,
    k_half_width: Option<f64>,
) -> Result<Complex64> {
    policy.validate()?;
    couplings.validate()?;
    if !z1.is_finite() || !z2.is_finite() {
        return Err(Error::domain("z coordinates must be finite"));
    }
    let tau = query.tau_e();
    let (hbar, mass) = (couplings.hbar, couplings.mass);
    let omega_bar = couplings.omega_bar(defect.sigma());
    let beta = defect.beta();
    let dz = z2 - z1;
    // −τħk²/2M − τβω̄k is maximal at k0
    let k0 = -mass * beta * omega_bar / hbar;
    let natural = (2.0 * mass * WINDOW_EFOLDS / (hbar * tau)).sqrt();
    let half = match k_half_width {
        None => natural,
        Some(w) if w > 0.0 && w.is_finite() => w,
        Some(w) => return Err(Error::domain(format!("k window must be positive, got {w}"))),
    };
    let weight = |k: f64| -tau * hbar * k * k / (2.0 * mass) - tau * (beta * k - couplings.alpha) * omega_bar;
    let peak = weight(k0);
    let edge = weight(k0 - half).max(weight(k0 + half)) - peak;
    if edge > policy.quad_rel_tol.ln() {
        return Err(Error::TailTooLarge {
            what: "k window",
            estimate: edge.exp(),
            tolerance: policy.quad_rel_tol,
        });
    }

    let mut failure = None;
    let integrand = |k: f64| {
        let at_k = PropagatorQuery { k, ..*query };
        match transverse_propagator(&at_k, defect, couplings, policy) {
            Ok(kt) => Complex64::from_polar(weight(k).exp() / TAU, k * dz) * kt,
            Err(e) => {
                failure.get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        }
    };
    let breaks: Vec<f64> = (0..=16).map(|i| k0 - half + half * i as f64 / 8.0).collect();
    let value = Quadrature::new(policy.quad_rel_tol).integrate_breaks(integrand, &breaks)?;
    match failure {
        Some(e) => Err(e),
        None => Ok(value),
    }
}
