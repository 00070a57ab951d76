use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::radial::radial_kernel;
use super::{Medium, PropagatorQuery, TruncationPolicy};
use crate::defect_geometry::DefectParams;
use crate::error::{Error, Result};
use crate::numerics::{pairwise_sum, Quadrature};
use crate::spectrum::{mu_index_continuous, Couplings};

/// C_n = e^{i2πnα′}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindingCoefficient {
    pub n: i64,
    pub alpha_prime: f64,
    pub value: Complex64,
}

impl WindingCoefficient {
    pub fn new(n: i64, alpha_prime: f64) -> Self {
        WindingCoefficient {
            n,
            alpha_prime,
            value: Complex64::from_polar(1.0, TAU * n as f64 * alpha_prime),
        }
    }
}

/// Below this fraction of the peak the λ-integrand is treated as zero.
const NEGLIGIBLE: f64 = 1e-17;
const PANEL: f64 = 0.5;

/// The real envelope g(λ) = e^{−(α′+λ)ω̄τ} R_{μ(α′+λ)}/2π of the λ-integral.
struct Envelope {
    medium: Medium,
    r1: f64,
    r2: f64,
    tau_e: f64,
    alpha_prime: f64,
}

impl Envelope {
    fn at(&self, lambda: f64) -> Result<f64> {
        let nu = self.alpha_prime + lambda;
        let m = &self.medium;
        let mu = mu_index_continuous(nu + m.xi, m.sigma, m.kappa)?;
        let r = radial_kernel(mu, self.r1, self.r2, self.tau_e, m.omega, m.hbar, m.mass)?;
        Ok((-nu * m.omega_bar * self.tau_e).exp() * r / TAU)
    }

    /// Half-width Λ beyond which g is negligible, the peak value, and a
    /// trapezoid estimate of ∫g used to set the absolute tolerance.
    fn window(&self) -> Result<(f64, f64, f64)> {
        // the Bessel order is smallest where α′ + λ + ξ = 0
        let start = -(self.alpha_prime + self.medium.xi);
        let centre = self.at(start)?;
        let mut peak = centre;
        let mut mass = centre;
        let mut reach = [start, start];
        for (side, dir) in [(0, -1.0), (1, 1.0)] {
            let mut lambda = start;
            loop {
                lambda += dir;
                let g = self.at(lambda)?;
                peak = peak.max(g);
                mass += g;
                if g < NEGLIGIBLE * peak {
                    break;
                }
                if lambda.abs() > 1e6 {
                    return Err(Error::NonConvergence {
                        what: "lambda window",
                        terms: 1_000_000,
                    });
                }
            }
            reach[side] = lambda;
        }
        Ok((reach[0].abs().max(reach[1].abs()), peak, mass))
    }
}

fn envelope(
    query: &PropagatorQuery,
    defect: &DefectParams,
    couplings: &Couplings,
    alpha_prime: f64,
) -> Result<Envelope> {
    if !alpha_prime.is_finite() {
        return Err(Error::domain("alpha' must be finite"));
    }
    Ok(Envelope {
        medium: Medium::new(defect, couplings, query.k)?,
        r1: query.r1,
        r2: query.r2,
        tau_e: query.tau_e(),
        alpha_prime,
    })
}

/// Chosen λ window and the tolerance it implies.
struct Window {
    half_width: f64,
    abs_tol: f64,
}

fn window(env: &Envelope, policy: &TruncationPolicy) -> Result<Window> {
    let (auto, peak, mass) = env.window()?;
    let half_width = match policy.lambda_cutoff {
        None => auto,
        Some(cut) => {
            let edge = env.at(-cut)?.max(env.at(cut)?);
            if edge > policy.quad_rel_tol * peak {
                return Err(Error::TailTooLarge {
                    what: "lambda integral",
                    estimate: edge / peak,
                    tolerance: policy.quad_rel_tol,
                });
            }
            cut
        }
    };
    Ok(Window {
        half_width,
        abs_tol: policy.quad_rel_tol * mass,
    })
}

fn transform(env: &Envelope, w: &Window, n: i64, dtheta: f64, rel_tol: f64) -> Result<Complex64> {
    let freq = dtheta + TAU * n as f64;
    let panels = (2.0 * w.half_width / PANEL).ceil().max(1.0) as usize;
    let breaks: Vec<f64> = (0..=panels)
        .map(|i| -w.half_width + 2.0 * w.half_width * i as f64 / panels as f64)
        .collect();
    let mut failure = None;
    let integrand = |lambda: f64| match env.at(lambda) {
        Ok(g) => Complex64::from_polar(g, lambda * freq),
        Err(e) => {
            failure.get_or_insert(e);
            Complex64::new(0.0, 0.0)
        }
    };
    let value = Quadrature::new(rel_tol)
        .with_abs_tol(w.abs_tol)
        .integrate_breaks(integrand, &breaks)?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(Complex64::from_polar(1.0, env.alpha_prime * dtheta) * value)
}

/// K̃_n = e^{iα′Δθ} ∫ e^{iλ(Δθ + 2πn)} e^{−(α′+λ)ω̄τ_E} R_{μ(α′+λ)} dλ/2π.
///
/// Multiplied by C_n and summed over n this reproduces the partial-wave
/// sum for any real α′.
pub fn winding_subpropagator(
    n: i64,
    query: &PropagatorQuery,
    defect: &DefectParams,
    couplings: &Couplings,
    alpha_prime: f64,
    policy: &TruncationPolicy,
) -> Result<Complex64> {
    policy.validate()?;
    let env = envelope(query, defect, couplings, alpha_prime)?;
    let w = window(&env, policy)?;
    transform(&env, &w, n, query.dtheta(), policy.quad_rel_tol)
}

/// Σ_{|n| ≤ n_wind_max} C_n K̃_n.
pub fn winding_sum(
    query: &PropagatorQuery,
    defect: &DefectParams,
    couplings: &Couplings,
    alpha_prime: f64,
    policy: &TruncationPolicy,
) -> Result<Complex64> {
    policy.validate()?;
    let env = envelope(query, defect, couplings, alpha_prime)?;
    let w = window(&env, policy)?;
    let n_max = policy.n_wind_max as i64;
    let terms = (-n_max..=n_max)
        .map(|n| {
            let c = WindingCoefficient::new(n, alpha_prime).value;
            Ok(c * transform(&env, &w, n, query.dtheta(), policy.quad_rel_tol)?)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(pairwise_sum(&terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::propagator::partial_wave_sum;

    fn setup() -> (PropagatorQuery, DefectParams, Couplings) {
        let d = DefectParams::from_sigma_beta(0.8, 0.2).unwrap();
        let c = Couplings {
            alpha: 0.3,
            kappa: 2.0,
            ..Couplings::default()
        };
        let q = PropagatorQuery::new(0.8, 0.3, 1.3, 1.3, 0.7, 0.5).unwrap();
        (q, d, c)
    }

    #[test]
    fn coefficients_are_unit_characters() {
        for &a in &[0.0, 0.3, -1.7] {
            for n in -4..=4 {
                let c = WindingCoefficient::new(n, a);
                assert!((c.value.norm() - 1.0).abs() < 1e-15);
                let prod = c.value * WindingCoefficient::new(3, a).value;
                assert!((prod - WindingCoefficient::new(n + 3, a).value).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn resummation_reproduces_partial_waves() {
        let (q, d, c) = setup();
        let policy = TruncationPolicy::default();
        let direct = partial_wave_sum(&q, &d, &c, policy.m_max).unwrap().value;
        let xi = crate::spectrum::xi(&d, &c, q.k);
        let wound = winding_sum(&q, &d, &c, -xi, &policy).unwrap();
        assert!((wound - direct).norm() < 1e-8 * direct.norm(), "{wound} vs {direct}");
    }

    #[test]
    fn gauge_choice_drops_out() {
        let (q, d, c) = setup();
        let policy = TruncationPolicy::default();
        let a = winding_sum(&q, &d, &c, -c.alpha, &policy).unwrap();
        let b = winding_sum(&q, &d, &c, d.beta() * q.k - c.alpha, &policy).unwrap();
        assert!((a - b).norm() < 1e-8 * a.norm());
    }

    #[test]
    fn higher_windings_decay() {
        let (q, d, c) = setup();
        let policy = TruncationPolicy::default();
        let mags: Vec<f64> = (0..=6)
            .map(|n| winding_subpropagator(n, &q, &d, &c, 0.0, &policy).unwrap().norm())
            .collect();
        for pair in mags[1..].windows(2) {
            assert!(pair[1] < pair[0], "{mags:?}");
        }
    }

    #[test]
    fn short_cutoff_is_rejected() {
        let (q, d, c) = setup();
        let policy = TruncationPolicy {
            lambda_cutoff: Some(0.5),
            ..TruncationPolicy::default()
        };
        assert!(matches!(
            winding_subpropagator(0, &q, &d, &c, 0.0, &policy),
            Err(Error::TailTooLarge { .. })
        ));
    }
}
