use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::radial::radial_kernel;
use super::{Medium, PropagatorQuery, TruncationPolicy};
use crate::defect_geometry::DefectParams;
use crate::error::{Error, Result};
use crate::numerics::{pairwise_sum, Quadrature};
use crate::spectrum::Couplings;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartialWaveSum {
    pub value: Complex64,
    /// Estimated magnitude of the omitted channels |m| > m_max.
    pub tail_estimate: f64,
}

/// Geometric extrapolation of one side of the channel sum.
fn side_tail(last: f64, before: f64) -> f64 {
    if last == 0.0 {
        return 0.0;
    }
    let ratio = last / before;
    if !(ratio < 1.0) {
        return f64::INFINITY;
    }
    last * ratio / (1.0 - ratio)
}

pub(crate) fn channel_terms(
    medium: &Medium,
    r1: f64,
    r2: f64,
    tau_e: f64,
    m_max: usize,
) -> Result<Vec<(i64, f64)>> {
    let m_max = m_max as i64;
    (-m_max..=m_max)
        .map(|m| {
            let mu = medium.mu(m)?;
            let r = radial_kernel(mu, r1, r2, tau_e, medium.omega, medium.hbar, medium.mass)?;
            // rotating-frame factor e^{−imω̄τ} at τ = −iτ_E
            let frame = (-(m as f64) * medium.omega_bar * tau_e).exp();
            Ok((m, frame * r / TAU))
        })
        .collect()
}

fn tail_of(terms: &[(i64, f64)]) -> f64 {
    let n = terms.len();
    if n < 3 {
        return f64::INFINITY;
    }
    side_tail(terms[0].1.abs(), terms[1].1.abs()) + side_tail(terms[n - 1].1.abs(), terms[n - 2].1.abs())
}

/// (1/2π) Σ_{|m| ≤ m_max} e^{im(θ2−θ1)} e^{−mω̄τ_E} R_m, summed pairwise
/// in fixed channel order, plus a tail estimate.
pub fn partial_wave_sum(
    query: &PropagatorQuery,
    defect: &DefectParams,
    couplings: &Couplings,
    m_max: usize,
) -> Result<PartialWaveSum> {
    let medium = Medium::new(defect, couplings, query.k)?;
    let terms = channel_terms(&medium, query.r1, query.r2, query.tau_e(), m_max)?;
    let dtheta = query.dtheta();
    let values: Vec<Complex64> = terms
        .iter()
        .map(|&(m, t)| Complex64::from_polar(t, m as f64 * dtheta))
        .collect();
    Ok(PartialWaveSum {
        value: pairwise_sum(&values),
        tail_estimate: tail_of(&terms),
    })
}

/// Transverse propagator K(r2, θ2; r1, θ1; τ_E) as a partial-wave sum.
pub fn transverse_propagator(
    query: &PropagatorQuery,
    defect: &DefectParams,
    couplings: &Couplings,
    policy: &TruncationPolicy,
) -> Result<Complex64> {
    policy.validate()?;
    let sum = partial_wave_sum(query, defect, couplings, policy.m_max)?;
    // the tail is bounded by the absolute channel sum, not by |K|
    if sum.tail_estimate > policy.quad_rel_tol * sum.value.norm().max(f64::MIN_POSITIVE) {
        return Err(Error::TailTooLarge {
            what: "partial-wave sum",
            estimate: sum.tail_estimate,
            tolerance: policy.quad_rel_tol * sum.value.norm(),
        });
    }
    Ok(sum.value)
}

/// ∫ K(r, θ; r, θ; τ_E) r dr dθ by radial quadrature of the truncated
/// partial-wave sum.
pub fn transverse_trace(
    tau_e: f64,
    k: f64,
    defect: &DefectParams,
    couplings: &Couplings,
    policy: &TruncationPolicy,
) -> Result<f64> {
    policy.validate()?;
    let medium = Medium::new(defect, couplings, k)?;
    if !(medium.omega > 0.0) {
        return Err(Error::domain("the trace is finite only with omega > 0"));
    }
    super::EuclideanTime::new(tau_e)?;
    let mut failure = None;
    let integrand = |r: f64| {
        if r <= 0.0 || failure.is_some() {
            return 0.0;
        }
        match channel_terms(&medium, r, r, tau_e, policy.m_max) {
            Ok(terms) => {
                let v: Vec<f64> = terms.iter().map(|t| t.1).collect();
                TAU * pairwise_sum(&v) * r
            }
            Err(e) => {
                failure = Some(e);
                0.0
            }
        }
    };
    let quad = Quadrature::new(policy.quad_rel_tol.min(1e-10));
    let value = quad.integrate_to_infinity(integrand, 0.0, medium.length_scale())?;
    match failure {
        Some(e) => Err(e),
        None => Ok(value),
    }
}

/// Σ_{|m| ≤ m_max} Σ_n e^{−τ_E Ẽ_mn/ħ}, the n-sum taken in closed form.
pub fn spectral_trace(
    tau_e: f64,
    k: f64,
    defect: &DefectParams,
    couplings: &Couplings,
    m_max: usize,
) -> Result<f64> {
    let medium = Medium::new(defect, couplings, k)?;
    if !(medium.omega > 0.0) {
        return Err(Error::domain("the trace is finite only with omega > 0"));
    }
    super::EuclideanTime::new(tau_e)?;
    let x = medium.omega * tau_e;
    let m_max = m_max as i64;
    let terms: Vec<f64> = (-m_max..=m_max)
        .map(|m| {
            let mu = medium.mu(m)?;
            Ok((-x * (mu + 1.0) - m as f64 * medium.omega_bar * tau_e).exp() / (-(-2.0 * x).exp_m1()))
        })
        .collect::<Result<_>>()?;
    Ok(pairwise_sum(&terms))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn generic() -> (DefectParams, Couplings) {
        (
            DefectParams::from_sigma_beta(0.8, 0.0).unwrap(),
            Couplings {
                alpha: 0.3,
                kappa: 0.5,
                ..Couplings::default()
            },
        )
    }

    #[test]
    fn coincident_angles_give_positive_real_sum() {
        let d = DefectParams::from_sigma_beta(0.7, 0.0).unwrap();
        let c = Couplings {
            kappa: 1.0,
            ..Couplings::default()
        };
        let q = PropagatorQuery::new(0.9, 1.0, 1.2, 1.0, 0.6, 0.0).unwrap();
        let k = transverse_propagator(&q, &d, &c, &TruncationPolicy::default()).unwrap();
        assert!(k.re > 0.0);
        assert!(k.im.abs() <= 1e-15 * k.re);
    }

    #[test]
    fn flat_space_reproduces_gaussian_oscillator_kernel() {
        // Mehler kernel of the 2D isotropic oscillator
        let d = DefectParams::flat();
        let c = Couplings::default();
        let (r1, t1, r2, t2, tau) = (0.7_f64, 0.4_f64, 1.1_f64, 2.0_f64, 0.8_f64);
        let q = PropagatorQuery::new(r1, t1, r2, t2, tau, 0.0).unwrap();
        let k = transverse_propagator(&q, &d, &c, &TruncationPolicy { m_max: 40, ..Default::default() }).unwrap();
        let dot = r1 * r2 * (t2 - t1).cos();
        let mehler = 1.0 / (TAU * tau.sinh())
            * (-((r1 * r1 + r2 * r2) * tau.cosh() - 2.0 * dot) / (2.0 * tau.sinh())).exp();
        assert!((k.re / mehler - 1.0).abs() < 1e-12 && k.im.abs() < 1e-14);
    }

    #[test]
    fn trace_matches_spectral_sum() {
        let (d, c) = generic();
        let policy = TruncationPolicy::default();
        let numeric = transverse_trace(1.0, 0.0, &d, &c, &policy).unwrap();
        let spectral = spectral_trace(1.0, 0.0, &d, &c, policy.m_max).unwrap();
        assert!((numeric / spectral - 1.0).abs() < 1e-8, "{numeric} vs {spectral}");
        assert!(numeric > 0.0);
    }

    #[test]
    fn small_truncation_is_flagged() {
        let (d, c) = generic();
        let q = PropagatorQuery::new(1.5, 0.0, 1.6, 0.1, 0.05, 0.0).unwrap();
        let tight = TruncationPolicy { m_max: 2, ..Default::default() };
        assert!(matches!(transverse_propagator(&q, &d, &c, &tight), Err(Error::TailTooLarge { .. })));
    }
}
