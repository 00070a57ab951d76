//! Brute-force computations that the closed forms are checked against:
//! a finite-difference radial eigensolver, quadrature of the υ-convolution,
//! Gauss–Laguerre Gram matrices and asymptotic residual scans.

use serde::{Deserialize, Serialize};

use crate::defect_geometry::DefectParams;
use crate::error::{Error, Result};
use crate::numerics::{pairwise_sum, GaussLaguerre, Quadrature, SymTridiagonal};
use crate::propagator::{upsilon, wavefunction};
use crate::special_functions::{bessel_i_scaled, ln_bessel_i};
use crate::spectrum::Couplings;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum GridScheme {
    #[default]
    Uniform,
}

/// Cell-centred grid r_i = (i − ½)h on [0, r_max].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    pub r_max: f64,
    pub n_points: usize,
    pub scheme: GridScheme,
}

/// Oscillator lengths kept beyond the classical turning point.
pub const FORBIDDEN_MARGIN: f64 = 8.0;

impl RadialGrid {
    pub fn new(r_max: f64, n_points: usize) -> Result<Self> {
        if !(r_max > 0.0) || !r_max.is_finite() {
            return Err(Error::domain(format!("r_max must be positive, got {r_max}")));
        }
        if n_points < 100 {
            return Err(Error::domain(format!("need at least 100 grid points, got {n_points}")));
        }
        Ok(RadialGrid {
            r_max,
            n_points,
            scheme: GridScheme::Uniform,
        })
    }

    /// Smallest r_max (in units ħ = M = 1) that leaves the margin beyond
    /// the turning point of level n_target.
    pub fn required_r_max(mu: f64, omega: f64, n_target: usize) -> f64 {
        let length = omega.recip().sqrt();
        let turning = (2.0 * (2.0 * n_target as f64 + mu + 1.0)).sqrt() * length;
        turning + FORBIDDEN_MARGIN * length
    }

    pub fn for_levels(mu: f64, omega: f64, n_eigs: usize, n_points: usize) -> Result<Self> {
        RadialGrid::new(RadialGrid::required_r_max(mu, omega, n_eigs.saturating_sub(1)), n_points)
    }
}

/// Relative Richardson error above which a grid is rejected.
pub const FD_TOLERANCE: f64 = 1e-3;

/// Flux-form discretization of −½ r^{−2μ−1}(r^{2μ+1} f′)′ + ½ω²r² f, the
/// radial operator acting on R = r^μ f, symmetrized by the cell volumes.
fn fd_matrix(mu: f64, omega: f64, r_max: f64, n: usize) -> SymTridiagonal {
    let h = r_max / n as f64;
    let p = 2.0 * mu + 1.0;
    // weights normalized by r_max^{2μ+1} so large μ does not overflow
    let flux = |i: usize| (i as f64 * h / r_max).powf(p);
    let volume: Vec<f64> = (1..=n)
        .map(|i| {
            let (lo, hi) = ((i - 1) as f64 * h / r_max, i as f64 * h / r_max);
            r_max * (hi.powf(p + 1.0) - lo.powf(p + 1.0)) / ((p + 1.0) * h)
        })
        .collect();
    let diag = (1..=n)
        .map(|i| {
            let r = (i as f64 - 0.5) * h;
            0.5 * (flux(i) + flux(i - 1)) / (h * h * volume[i - 1]) + 0.5 * omega * omega * r * r
        })
        .collect();
    let off = (1..n)
        .map(|i| -0.5 * flux(i) / (h * h * (volume[i - 1] * volume[i]).sqrt()))
        .collect();
    SymTridiagonal::new(diag, off)
}

/// Lowest `n_eigs` levels of the 2D oscillator channel with Bessel order
/// μ, in units ħ = M = 1. Converges at second order to ω(2n + μ + 1).
pub fn radial_eigensolve_fd(mu: f64, omega: f64, grid: &RadialGrid, n_eigs: usize) -> Result<Vec<f64>> {
    if !(mu >= 0.0) || !mu.is_finite() {
        return Err(Error::domain(format!("mu must be >= 0, got {mu}")));
    }
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::domain(format!("omega must be positive, got {omega}")));
    }
    if n_eigs == 0 || n_eigs > grid.n_points / 4 {
        return Err(Error::domain(format!("cannot resolve {n_eigs} levels on {} points", grid.n_points)));
    }
    let needed = RadialGrid::required_r_max(mu, omega, n_eigs - 1);
    if grid.r_max < needed {
        return Err(Error::domain(format!(
            "r_max {} leaves too little forbidden region, need >= {needed}",
            grid.r_max
        )));
    }
    let fine = fd_matrix(mu, omega, grid.r_max, grid.n_points).lowest(n_eigs);
    let coarse = fd_matrix(mu, omega, grid.r_max, grid.n_points / 2).lowest(n_eigs);
    let estimate = fine
        .iter()
        .zip(&coarse)
        .map(|(f, c)| (f - c).abs() / 3.0 / f.abs())
        .fold(0.0, f64::max);
    if estimate > FD_TOLERANCE {
        return Err(Error::GridTooCoarse {
            estimate,
            limit: FD_TOLERANCE,
        });
    }
    Ok(fine)
}

/// Channel m of the Schrödinger equation posed directly on a cone of
/// angular period 2πσ: centrifugal order |m|/σ, no extra 1/r² term.
pub fn cone_schrodinger_eigensolve(
    sigma: f64,
    m: i64,
    omega: f64,
    grid: &RadialGrid,
    n_eigs: usize,
) -> Result<Vec<f64>> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::domain(format!("sigma must be positive, got {sigma}")));
    }
    radial_eigensolve_fd(m.unsigned_abs() as f64 / sigma, omega, grid, n_eigs)
}

/// Largest |lhs/rhs − 1| of ∫υ(η″,η;φ)υ(η,η′;φ)dη = υ(η″,η′;2φ) over the
/// given (η″, η′) pairs.
pub fn convolution_quadrature(mu: f64, eta_pairs: &[(f64, f64)], phi_e: f64, tol: f64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &(e2, e1) in eta_pairs {
        let rhs = upsilon(mu, e2, e1, 2.0 * phi_e)?;
        let mut failure = None;
        let integrand = |eta: f64| {
            if eta <= 0.0 {
                return 0.0;
            }
            match upsilon(mu, e2, eta, phi_e).and_then(|a| Ok(a * upsilon(mu, eta, e1, phi_e)?)) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        };
        let lhs = Quadrature::new(tol * 1e-2).integrate_to_infinity(integrand, 0.0, e1.max(e2).max(1.0))?;
        if let Some(e) = failure {
            return Err(Error::QuadratureFailure(e.to_string()));
        }
        worst = worst.max((lhs / rhs - 1.0).abs());
    }
    Ok(worst)
}

/// G_{nn′} = ⟨ψ_mn, ψ_mn′⟩ for n, n′ ≤ n_max by Gauss–Laguerre quadrature in
/// t = Mωr²/ħ with the weight t^μ e^{−t} absorbed into the rule.
pub fn orthonormality_gram(
    m: i64,
    n_max: usize,
    defect: &DefectParams,
    couplings: &Couplings,
    k: f64,
) -> Result<Vec<Vec<f64>>> {
    let sigma = defect.sigma();
    let omega = couplings.omega(sigma);
    if !(omega > 0.0) {
        return Err(Error::domain("bound states need omega > 0 (trap or magnetic field)"));
    }
    let mu = crate::spectrum::mu_index(m, crate::spectrum::xi(defect, couplings, k), sigma, couplings.kappa)?;
    let a = couplings.mass * omega / couplings.hbar;
    let rule = GaussLaguerre::new(2 * n_max + 40, mu)?;
    // ψ at every node, stripped of the weight: r dr dθ → (π/a) dt
    let stripped: Vec<Vec<f64>> = rule
        .nodes
        .iter()
        .map(|&t| {
            let r = (t / a).sqrt();
            let unweight = 0.5 * t - 0.5 * mu * t.ln();
            (0..=n_max)
                .map(|n| Ok(wavefunction(n, m, r, 0.0, defect, couplings, k)?.re * unweight.exp()))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    let scale = std::f64::consts::PI / a;
    let mut gram = vec![vec![0.0; n_max + 1]; n_max + 1];
    for (i, row) in gram.iter_mut().enumerate() {
        for (j, g) in row.iter_mut().enumerate() {
            let terms: Vec<f64> = rule
                .weights
                .iter()
                .zip(&stripped)
                .map(|(w, psi)| w * psi[i] * psi[j])
                .collect();
            *g = scale * pairwise_sum(&terms);
        }
    }
    if gram.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::QuadratureFailure("non-finite Gram entry".into()));
    }
    Ok(gram)
}

/// Bessel order that absorbs e^{bz}e^{−c/z} into I_ν(az) at large z.
pub fn recombined_order(a: f64, b: f64, c: f64, nu: f64) -> Result<f64> {
    if !(a > 0.0) || !(a + b > 0.0) {
        return Err(Error::domain(format!("need a > 0 and a + b > 0, got a={a}, b={b}")));
    }
    let radicand = (a + b) / a * nu * nu - b / (4.0 * a) + 2.0 * (a + b) * c;
    if !(radicand >= 0.0) {
        return Err(Error::domain(format!("recombined order is imaginary (radicand {radicand})")));
    }
    Ok(radicand.sqrt())
}

/// |I_ν(az)e^{bz}e^{−c/z} / (√((a+b)/a) I_μ((a+b)z)) − 1| at each z.
pub fn recombination_residual(a: f64, b: f64, c: f64, nu: f64, z_list: &[f64]) -> Result<Vec<f64>> {
    let mu = recombined_order(a, b, c, nu)?;
    z_list
        .iter()
        .map(|&z| {
            if !(z > 0.0) {
                return Err(Error::domain(format!("z must be positive, got {z}")));
            }
            let lhs = ln_bessel_i(nu, a * z)? + b * z - c / z;
            let rhs = 0.5 * ((a + b) / a).ln() + ln_bessel_i(mu, (a + b) * z)?;
            Ok((lhs - rhs).exp_m1().abs())
        })
        .collect()
}

/// |e^{z cos θ} − Σ_{|m|≤m_max} e^{imθ} I_m(z)| measured against e^{|z|},
/// the size of the largest terms in the sum.
pub fn jacobi_anger_check(z: f64, theta: f64, m_max: usize) -> Result<f64> {
    if !z.is_finite() || !theta.is_finite() {
        return Err(Error::domain("z and theta must be finite"));
    }
    let x = z.abs();
    let parity = |m: usize| if z < 0.0 && m % 2 == 1 { -1.0 } else { 1.0 };
    let mut terms = Vec::with_capacity(m_max + 1);
    terms.push(bessel_i_scaled(0.0, x)?);
    for m in 1..=m_max {
        terms.push(2.0 * parity(m) * (m as f64 * theta).cos() * bessel_i_scaled(m as f64, x)?);
    }
    // smallest terms first
    let sum: f64 = terms.iter().rev().sum();
    Ok(((z * theta.cos() - x).exp() - sum).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close_all(got: &[f64], want: &[f64], tol: f64) {
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() < tol, "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn flat_oscillator_tower() {
        let grid = RadialGrid::new(12.0, 4000).unwrap();
        close_all(&radial_eigensolve_fd(0.0, 1.0, &grid, 4).unwrap(), &[1.0, 3.0, 5.0, 7.0], 1e-4);
        close_all(&radial_eigensolve_fd(0.3, 1.0, &grid, 3).unwrap(), &[1.3, 3.3, 5.3], 1e-4);
        let mu = 1.8027756;
        close_all(&radial_eigensolve_fd(mu, 1.0, &grid, 1).unwrap(), &[mu + 1.0], 1e-4);
    }

    #[test]
    fn second_order_under_refinement() {
        for &mu in &[0.0, 0.3, 1.8027756] {
            let e = |n: usize| fd_matrix(mu, 1.0, 12.0, n).lowest(2);
            let exact = [mu + 1.0, mu + 3.0];
            let (e1, e2) = (e(500), e(1000));
            for j in 0..2 {
                let order = ((e1[j] - exact[j]) / (e2[j] - exact[j])).abs().log2();
                assert!((1.8..=2.2).contains(&order), "mu={mu} level {j}: order {order}");
            }
        }
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let grid = RadialGrid::new(12.0, 100).unwrap();
        assert!(matches!(
            radial_eigensolve_fd(0.0, 1.0, &grid, 3),
            Err(Error::GridTooCoarse { .. })
        ));
        assert!(radial_eigensolve_fd(0.0, 1.0, &RadialGrid::new(4.0, 1000).unwrap(), 1).is_err());
        assert!(RadialGrid::new(12.0, 99).is_err());
    }

    #[test]
    fn cone_channels() {
        let grid = RadialGrid::new(14.0, 4000).unwrap();
        close_all(&cone_schrodinger_eigensolve(1.0, 1, 1.0, &grid, 3).unwrap(), &[2.0, 4.0, 6.0], 1e-4);
        close_all(&cone_schrodinger_eigensolve(0.5, 1, 1.0, &grid, 3).unwrap(), &[3.0, 5.0, 7.0], 1e-4);
        close_all(&cone_schrodinger_eigensolve(0.5, 0, 1.0, &grid, 3).unwrap(), &[1.0, 3.0, 5.0], 1e-4);
    }

    #[test]
    fn upsilon_convolution() {
        assert!(convolution_quadrature(0.5, &[(1.0, 2.0), (1.5, 1.5)], 0.5, 1e-6).unwrap() < 1e-6);
        assert!(convolution_quadrature(3.0, &[(2.0, 4.0)], 0.3, 1e-6).unwrap() < 1e-6);
    }

    #[test]
    fn gram_matrices_are_identity() {
        let cases = [
            (DefectParams::flat(), Couplings::default(), 0),
            (DefectParams::from_sigma_beta(0.5, 0.0).unwrap(), Couplings::default(), 1),
            (
                DefectParams::from_sigma_beta(0.8, 0.0).unwrap(),
                Couplings {
                    alpha: 0.3,
                    kappa: 0.5,
                    ..Couplings::default()
                },
                -2,
            ),
        ];
        for (d, c, m) in cases {
            let g = orthonormality_gram(m, 20, &d, &c, 0.0).unwrap();
            for (i, row) in g.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((v - want).abs() < 1e-8, "m={m} ({i},{j}) {v}");
                }
            }
        }
    }

    #[test]
    fn recombination() {
        assert!(recombination_residual(1.3, 0.0, 0.0, 0.7, &[1.0, 10.0]).unwrap().iter().all(|&r| r == 0.0));
        let r = recombination_residual(1.0, 3.0, 0.5, 1.0, &[10.0, 20.0, 40.0]).unwrap();
        assert!(r[0] > r[1] && r[1] > r[2], "{r:?}");
        assert!(recombination_residual(1.0, 0.0, 0.3, 0.5, &[40.0]).unwrap()[0] < 1e-2);
        assert!(recombined_order(1.0, 3.0, -1.0, 0.0).is_err());
    }

    #[test]
    fn jacobi_anger() {
        assert!(jacobi_anger_check(1.0, 0.0, 21).unwrap() < 1e-14);
        assert!(jacobi_anger_check(5.0, std::f64::consts::FRAC_PI_3, 25).unwrap() < 1e-10);
        assert!(jacobi_anger_check(20.0, 2.0, 40).unwrap() < 1e-10);
        assert!(jacobi_anger_check(-3.0, 0.4, 23).unwrap() < 1e-10);
        assert!(jacobi_anger_check(20.0, 2.0, 5).unwrap() > 1e-3);
    }
}
