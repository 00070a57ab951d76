use serde::{Deserialize, Serialize};

use super::{Medium, PropagatorQuery, TruncationPolicy};
use crate::defect_geometry::DefectParams;
use crate::error::{Error, Result};
use crate::special_functions::{bessel_i_scaled, laguerre_sequence, log_gamma_unchecked};
use crate::spectrum::Couplings;

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::domain(format!("{name} must be positive, got {v}")));
    }
    Ok(())
}

/// υ_μ(η1, η2; φ) = csch φ · exp[−(η1+η2) coth φ] · I_μ(2√(η1η2) csch φ).
///
/// The exponent is folded into the scaled Bessel function so that neither
/// factor overflows at small φ.
pub fn upsilon(mu: f64, eta1: f64, eta2: f64, phi_e: f64) -> Result<f64> {
    check_positive("eta1", eta1)?;
    check_positive("eta2", eta2)?;
    check_positive("phi", phi_e)?;
    let sh = phi_e.sinh();
    let half = (0.5 * phi_e).sinh();
    let gap = eta1.sqrt() - eta2.sqrt();
    let exponent = -(gap * gap + 2.0 * (eta1 + eta2) * half * half) / sh;
    let z = 2.0 * (eta1 * eta2).sqrt() / sh;
    Ok(exponent.exp() / sh * bessel_i_scaled(mu, z)?)
}

/// Radial kernel for a fixed Bessel order:
/// (Mω/ħ) csch ωτ · exp[−(Mω/2ħ)(r1²+r2²) coth ωτ] · I_μ(Mω r1 r2 csch ωτ/ħ),
/// with the free-particle limit taken exactly at ω = 0.
pub fn radial_kernel(mu: f64, r1: f64, r2: f64, tau_e: f64, omega: f64, hbar: f64, mass: f64) -> Result<f64> {
    check_positive("r1", r1)?;
    check_positive("r2", r2)?;
    check_positive("tau", tau_e)?;
    if !(omega >= 0.0) || !omega.is_finite() {
        return Err(Error::domain(format!("omega must be >= 0, got {omega}")));
    }
    // ω csch ωτ and ω tanh(ωτ/2), using coth x = csch x + tanh(x/2)
    let (c, t) = if omega == 0.0 {
        (1.0 / tau_e, 0.0)
    } else {
        let x = omega * tau_e;
        (omega / x.sinh(), omega * (0.5 * x).tanh())
    };
    let a = mass / hbar;
    let dr = r1 - r2;
    let exponent = -0.5 * a * (dr * dr * c + (r1 * r1 + r2 * r2) * t);
    let z = a * r1 * r2 * c;
    Ok(a * c * exponent.exp() * bessel_i_scaled(mu, z)?)
}

/// R_m(r2, r1; τ_E) in closed form.
pub fn radial_propagator_closed(
    m: i64,
    query: &PropagatorQuery,
    defect: &DefectParams,
    couplings: &Couplings,
) -> Result<f64> {
    let medium = Medium::new(defect, couplings, query.k)?;
    let mu = medium.mu(m)?;
    radial_kernel(mu, query.r1, query.r2, query.tau_e(), medium.omega, medium.hbar, medium.mass)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: f64,
    pub tail_estimate: f64,
    pub terms: usize,
}

/// Raw Hille–Hardy expansion, without the tail test.
pub(crate) fn hille_hardy(mu: f64, x: f64, y: f64, phase: f64, n_max: usize) -> (Vec<f64>, f64) {
    // (xy)^{μ/2} e^{−(x+y)/2} e^{−ωτ(μ+1)} / Γ(μ+1)
    let log_pref = 0.5 * mu * (x * y).ln() - 0.5 * (x + y) - phase * (mu + 1.0) - log_gamma_unchecked(mu + 1.0);
    let lx = laguerre_sequence(n_max, mu, x);
    let ly = laguerre_sequence(n_max, mu, y);
    let q = (-2.0 * phase).exp();
    // c_n = n! Γ(μ+1)/Γ(n+μ+1)
    let mut c = 1.0;
    let mut qn = 1.0;
    let mut terms = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        if n > 0 {
            c *= n as f64 / (n as f64 + mu);
            qn *= q;
        }
        terms.push(c * qn * lx[n] * ly[n]);
    }
    (terms, log_pref)
}

/// R_m as the bilinear Laguerre series over n ≤ `policy.n_series_max`, with
/// the tail estimated from the geometric factor e^{−2ωτ}.
pub fn radial_propagator_series(
    m: i64,
    query: &PropagatorQuery,
    defect: &DefectParams,
    couplings: &Couplings,
    policy: &TruncationPolicy,
) -> Result<SeriesValue> {
    let medium = Medium::new(defect, couplings, query.k)?;
    let mu = medium.mu(m)?;
    if !(medium.omega > 0.0) {
        return Err(Error::domain("the Laguerre expansion needs omega > 0"));
    }
    let a = medium.mass * medium.omega / medium.hbar;
    let x = a * query.r1 * query.r1;
    let y = a * query.r2 * query.r2;
    let phase = medium.omega * query.tau_e();
    let n_max = policy.n_series_max;
    let (terms, log_pref) = hille_hardy(mu, x, y, phase, n_max);
    let scale = 2.0 * a * log_pref.exp();
    let value = scale * crate::numerics::pairwise_sum(&terms);
    let q = (-2.0 * phase).exp();
    let last = terms[n_max].abs().max(if n_max > 0 { terms[n_max - 1].abs() * q } else { 0.0 });
    let tail_estimate = scale * last * q / (1.0 - q);
    if tail_estimate > policy.quad_rel_tol * value.abs() {
        return Err(Error::TailTooLarge {
            what: "Hille-Hardy series",
            estimate: tail_estimate / value.abs(),
            tolerance: policy.quad_rel_tol,
        });
    }
    Ok(SeriesValue {
        value,
        tail_estimate,
        terms: n_max + 1,
    })
}
