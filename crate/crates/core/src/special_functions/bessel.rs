use super::gamma::log_gamma_unchecked;
use super::AccuracyPolicy;
use crate::error::{Error, Result};

/// Magnitude split as `mantissa * exp(log_scale)` so large arguments never
/// overflow before the caller decides what to do with the exponent.
#[derive(Debug, Clone, Copy)]
struct Scaled {
    mantissa: f64,
    log_scale: f64,
}

impl Scaled {
    fn value(self) -> f64 {
        if self.mantissa == 0.0 {
            0.0
        } else {
            self.mantissa * self.log_scale.exp()
        }
    }

    fn ln(self) -> f64 {
        self.mantissa.ln() + self.log_scale
    }
}

const HANKEL_MIN_X: f64 = 40.0;
const RESCALE_AT: f64 = 1e250;

fn check_args(nu: f64, x: f64) -> Result<()> {
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(Error::domain(format!("Bessel order must be finite and >= 0, got {nu}")));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("Bessel argument must be finite and >= 0, got {x}")));
    }
    Ok(())
}

fn stop_ratio(policy: &AccuracyPolicy) -> f64 {
    (policy.target_rel_err * 1e-4).max(1e-17)
}

/// Ascending series I_ν(x) = (x/2)^ν / Γ(ν+1) Σ_k (x²/4)^k / (k! (ν+1)_k).
/// Every term is positive, so the only error source is rounding.
fn series(nu: f64, x: f64, policy: &AccuracyPolicy) -> Result<Scaled> {
    let prefactor = nu * (0.5 * x).ln() - log_gamma_unchecked(nu + 1.0);
    let q = 0.25 * x * x;
    // index of the largest term
    let peak = (0.5 * ((nu * nu + x * x).sqrt() - nu)).ceil() as usize;
    let budget = peak + policy.max_terms;
    let eps = stop_ratio(policy);

    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut log_acc = 0.0_f64;
    for k in 1..=budget {
        let kf = k as f64;
        let ratio = q / (kf * (nu + kf));
        term *= ratio;
        sum += term;
        if sum > RESCALE_AT {
            sum /= RESCALE_AT;
            term /= RESCALE_AT;
            log_acc += RESCALE_AT.ln();
        }
        if k >= peak && ratio < 0.5 && term * ratio / (1.0 - ratio) <= eps * sum {
            return Ok(Scaled {
                mantissa: sum,
                log_scale: prefactor + log_acc,
            });
        }
    }
    Err(Error::NonConvergence {
        what: "Bessel I ascending series",
        terms: budget,
    })
}

/// Large-argument Hankel expansion, valid here because ν² ≤ x keeps the
/// leading terms decreasing.
fn hankel(nu: f64, x: f64, policy: &AccuracyPolicy) -> Option<Scaled> {
    let four_nu2 = 4.0 * nu * nu;
    let eps = stop_ratio(policy);
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut prev = f64::INFINITY;
    for k in 1..=policy.max_terms {
        let odd = (2 * k - 1) as f64;
        term *= -(four_nu2 - odd * odd) / (8.0 * k as f64 * x);
        if term.abs() > prev {
            return None;
        }
        sum += term;
        if term.abs() <= eps * sum.abs() {
            return Some(Scaled {
                mantissa: sum / (2.0 * std::f64::consts::PI * x).sqrt(),
                log_scale: x,
            });
        }
        prev = term.abs();
    }
    None
}

fn evaluate(nu: f64, x: f64, policy: &AccuracyPolicy) -> Result<Scaled> {
    check_args(nu, x)?;
    if x == 0.0 {
        let mantissa = if nu == 0.0 { 1.0 } else { 0.0 };
        return Ok(Scaled {
            mantissa,
            log_scale: 0.0,
        });
    }
    if x >= HANKEL_MIN_X && nu * nu <= x {
        if let Some(v) = hankel(nu, x, policy) {
            return Ok(v);
        }
    }
    series(nu, x, policy)
}

/// Modified Bessel function of the first kind I_ν(x) for real ν ≥ 0, x ≥ 0.
///
/// Overflows to `+inf` beyond x ≈ 709; use [`bessel_i_scaled`] or
/// [`ln_bessel_i`] there.
pub fn bessel_i(nu: f64, x: f64) -> Result<f64> {
    bessel_i_with(nu, x, &AccuracyPolicy::default())
}

pub fn bessel_i_with(nu: f64, x: f64, policy: &AccuracyPolicy) -> Result<f64> {
    evaluate(nu, x, policy).map(Scaled::value)
}

/// Exponentially scaled e^{-x} I_ν(x).
pub fn bessel_i_scaled(nu: f64, x: f64) -> Result<f64> {
    let s = evaluate(nu, x, &AccuracyPolicy::default())?;
    if s.mantissa == 0.0 {
        return Ok(0.0);
    }
    Ok(s.mantissa * (s.log_scale - x).exp())
}

/// ln I_ν(x); `-inf` at x = 0 for ν > 0.
pub fn ln_bessel_i(nu: f64, x: f64) -> Result<f64> {
    evaluate(nu, x, &AccuracyPolicy::default()).map(Scaled::ln)
}

/// One-term asymptotic form (2πz)^{-1/2} exp[z − (ν² − ¼)/(2z)].
pub fn edwards_gulyaev_asymptotic(nu: f64, z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::domain(format!("asymptotic form requires z > 0, got {z}")));
    }
    let exponent = z - (nu * nu - 0.25) / (2.0 * z);
    Ok(exponent.exp() / (2.0 * std::f64::consts::PI * z).sqrt())
}
