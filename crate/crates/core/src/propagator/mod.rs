//! Euclidean-time propagators. Every kernel is evaluated at imaginary time
//! τ = −iτ_E, where the oscillatory real-time formulas become positive,
//! decaying functions and their identities can be checked to tight
//! tolerances.

mod radial;
mod short_time;
mod transverse;
mod wavefunction;
mod winding;
mod z_sector;

pub use radial::{
    radial_kernel, radial_propagator_closed, radial_propagator_series, upsilon, SeriesValue,
};
pub use short_time::{short_time_kernel, short_time_kernel_with, MeasureConvention};
pub use transverse::{partial_wave_sum, spectral_trace, transverse_propagator, transverse_trace, PartialWaveSum};
pub use wavefunction::wavefunction;
pub use winding::{winding_subpropagator, winding_sum, WindingCoefficient};
pub use z_sector::z_sector_propagator;

use serde::{Deserialize, Serialize};

use crate::defect_geometry::DefectParams;
use crate::error::{Error, Result};
use crate::spectrum::{self, Couplings};

/// Imaginary-time interval τ_E > 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EuclideanTime(f64);

impl EuclideanTime {
    pub fn new(tau_e: f64) -> Result<Self> {
        if !(tau_e > 0.0) || !tau_e.is_finite() {
            return Err(Error::domain(format!("Euclidean time must be positive, got {tau_e}")));
        }
        Ok(EuclideanTime(tau_e))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// End points (r1, θ1) → (r2, θ2) of a transverse propagator at axial
/// wavenumber k.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropagatorQuery {
    pub r1: f64,
    pub r2: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub tau: EuclideanTime,
    pub k: f64,
}

impl PropagatorQuery {
    pub fn new(r1: f64, theta1: f64, r2: f64, theta2: f64, tau_e: f64, k: f64) -> Result<Self> {
        for (name, r) in [("r1", r1), ("r2", r2)] {
            if !(r > 0.0) || !r.is_finite() {
                return Err(Error::domain(format!("{name} must be positive, got {r}")));
            }
        }
        if !theta1.is_finite() || !theta2.is_finite() || !k.is_finite() {
            return Err(Error::domain("angles and wavenumber must be finite"));
        }
        Ok(PropagatorQuery {
            r1,
            r2,
            theta1,
            theta2,
            tau: EuclideanTime::new(tau_e)?,
            k,
        })
    }

    pub fn tau_e(&self) -> f64 {
        self.tau.get()
    }

    /// θ2 − θ1.
    pub fn dtheta(&self) -> f64 {
        self.theta2 - self.theta1
    }

    pub fn with_tau(&self, tau_e: f64) -> Result<Self> {
        Ok(PropagatorQuery {
            tau: EuclideanTime::new(tau_e)?,
            ..*self
        })
    }
}

/// Truncations of the partial-wave, winding and Hille–Hardy sums and the
/// quadrature tolerance. `lambda_cutoff = None` picks the λ window from the
/// decay of the integrand.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TruncationPolicy {
    pub m_max: usize,
    pub n_wind_max: usize,
    pub n_series_max: usize,
    pub quad_rel_tol: f64,
    pub lambda_cutoff: Option<f64>,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            m_max: 20,
            n_wind_max: 20,
            n_series_max: 60,
            quad_rel_tol: 1e-9,
            lambda_cutoff: None,
        }
    }
}

impl TruncationPolicy {
    pub fn validate(&self) -> Result<()> {
        if self.m_max < 1 || self.n_wind_max < 1 || self.n_series_max < 1 {
            return Err(Error::domain("truncation counts must be >= 1"));
        }
        if !(self.quad_rel_tol > 0.0) || !self.quad_rel_tol.is_finite() {
            return Err(Error::domain("quadrature tolerance must be positive"));
        }
        if let Some(c) = self.lambda_cutoff {
            if !(c > 0.0) || !c.is_finite() {
                return Err(Error::domain("lambda cutoff must be positive"));
            }
        }
        Ok(())
    }
}

/// Derived constants shared by all kernels.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Medium {
    pub sigma: f64,
    pub kappa: f64,
    pub omega: f64,
    pub omega_bar: f64,
    pub hbar: f64,
    pub mass: f64,
    pub xi: f64,
}

impl Medium {
    pub fn new(defect: &DefectParams, couplings: &Couplings, k: f64) -> Result<Self> {
        couplings.validate()?;
        let sigma = defect.sigma();
        Ok(Medium {
            sigma,
            kappa: couplings.kappa,
            omega: couplings.omega(sigma),
            omega_bar: couplings.omega_bar(sigma),
            hbar: couplings.hbar,
            mass: couplings.mass,
            xi: spectrum::xi(defect, couplings, k),
        })
    }

    pub fn mu(&self, m: i64) -> Result<f64> {
        spectrum::mu_index(m, self.xi, self.sigma, self.kappa)
    }

    /// Oscillator length √(ħ/Mω), or 1 without confinement.
    pub fn length_scale(&self) -> f64 {
        if self.omega > 0.0 {
            (self.hbar / (self.mass * self.omega)).sqrt()
        } else {
            1.0
        }
    }
}
