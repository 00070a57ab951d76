use num_complex::Complex64;

use super::Medium;
use crate::defect_geometry::DefectParams;
use crate::error::{Error, Result};
use crate::special_functions::{laguerre_unchecked, ln_factorial, log_gamma_unchecked};
use crate::spectrum::Couplings;

/// Normalized eigenfunction
/// ψ_nm = √(Mω/πħ) √(n!/Γ(n+μ+1)) t^{μ/2} e^{−t/2} L_n^μ(t) e^{imθ}, t = Mωr²/ħ,
/// with ∫|ψ|² r dr dθ = 1.
pub fn wavefunction(
    n: usize,
    m: i64,
    r: f64,
    theta: f64,
    defect: &DefectParams,
    couplings: &Couplings,
    k: f64,
) -> Result<Complex64> {
    if !(r >= 0.0) || !r.is_finite() || !theta.is_finite() {
        return Err(Error::domain(format!("need finite r >= 0 and theta, got r={r}, theta={theta}")));
    }
    let medium = Medium::new(defect, couplings, k)?;
    if !(medium.omega > 0.0) {
        return Err(Error::domain("bound states need omega > 0 (trap or magnetic field)"));
    }
    let mu = medium.mu(m)?;
    let a = medium.mass * medium.omega / medium.hbar;
    let t = a * r * r;
    let power = if mu == 0.0 {
        0.0
    } else if t == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    } else {
        0.5 * mu * t.ln()
    };
    let log_mod = 0.5 * (a / std::f64::consts::PI).ln() + 0.5 * (ln_factorial(n) - log_gamma_unchecked(n as f64 + mu + 1.0))
        + power
        - 0.5 * t;
    let radial = log_mod.exp() * laguerre_unchecked(n, mu, t);
    Ok(Complex64::from_polar(radial, m as f64 * theta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Quadrature;

    #[test]
    fn flat_ground_state_is_gaussian() {
        let c = Couplings::default();
        for &r in &[0.0, 0.3, 1.0, 2.5] {
            let psi = wavefunction(0, 0, r, 0.7, &DefectParams::flat(), &c, 0.0).unwrap();
            let want = (1.0 / std::f64::consts::PI).sqrt() * (-0.5 * r * r).exp();
            assert!((psi.re - want).abs() < 1e-15 && psi.im == 0.0);
        }
    }

    #[test]
    fn normalized_and_orthogonal() {
        let d = DefectParams::from_sigma_beta(0.8, 0.0).unwrap();
        let c = Couplings {
            alpha: 0.3,
            kappa: 0.5,
            omega_0: 1.3,
            ..Couplings::default()
        };
        let quad = Quadrature::new(1e-12);
        for m in [-1, 2] {
            for (n1, n2) in [(0, 0), (2, 2), (0, 3), (1, 2)] {
                let overlap = quad
                    .integrate_to_infinity(
                        |r: f64| {
                            let a = wavefunction(n1, m, r, 0.0, &d, &c, 0.0).unwrap();
                            let b = wavefunction(n2, m, r, 0.0, &d, &c, 0.0).unwrap();
                            std::f64::consts::TAU * (a.conj() * b).re * r
                        },
                        0.0,
                        1.0,
                    )
                    .unwrap();
                let want = if n1 == n2 { 1.0 } else { 0.0 };
                assert!((overlap - want).abs() < 1e-9, "m={m} n=({n1},{n2}) {overlap}");
            }
        }
    }

    #[test]
    fn vanishes_on_axis_like_r_to_the_mu() {
        let d = DefectParams::from_sigma_beta(0.6, 0.0).unwrap();
        let c = Couplings {
            alpha: 0.2,
            kappa: 0.4,
            ..Couplings::default()
        };
        let mu = Medium::new(&d, &c, 0.0).unwrap().mu(1).unwrap();
        let f = |r: f64| wavefunction(1, 1, r, 0.0, &d, &c, 0.0).unwrap().norm();
        let slope = (f(1e-2).ln() - f(1e-4).ln()) / (1e-2_f64.ln() - 1e-4_f64.ln());
        assert!((slope - mu).abs() < 1e-3);
        assert_eq!(f(0.0), 0.0);
    }
}
