//! The twelve acceptance checks. Each one compares a closed form against an
//! independent route at a pinned tolerance; `run_all` is what `defectprop
//! verify` and the `acceptance` test target execute.

use std::f64::consts::{PI, TAU};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::defect_geometry::{self, DefectParams};
use crate::error::{Error, Result};
use crate::numerics::Quadrature;
use crate::propagator::{
    partial_wave_sum, radial_kernel, radial_propagator_closed, radial_propagator_series, short_time_kernel,
    spectral_trace, transverse_trace, winding_sum, PropagatorQuery, TruncationPolicy,
};
use crate::spectrum::{self, Couplings, QuantumNumbers};
use crate::verification_oracles::{
    cone_schrodinger_eigensolve, orthonormality_gram, radial_eigensolve_fd, RadialGrid,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    /// Worst observed deviation in the units of `tolerance`.
    pub metric: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl CheckOutcome {
    fn measured(id: u8, name: &str, metric: f64, tolerance: f64, detail: String) -> Self {
        CheckOutcome {
            id,
            name: name.to_string(),
            passed: metric <= tolerance,
            metric,
            tolerance,
            detail,
        }
    }

    fn failed(id: u8, name: &str, tolerance: f64, err: &Error) -> Self {
        CheckOutcome {
            id,
            name: name.to_string(),
            passed: false,
            metric: f64::NAN,
            tolerance,
            detail: err.to_string(),
        }
    }

    /// One machine-readable status line.
    pub fn line(&self) -> String {
        format!(
            "criterion {:02} {} {} metric={:e} tol={:e} {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.metric,
            self.tolerance,
            self.detail
        )
    }
}

/// Knobs the verify command may override; the defaults are the pinned
/// acceptance settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AcceptanceSettings {
    /// Grid size for the finite-difference oracles.
    pub fd_points: usize,
    /// Fixed r_max for the finite-difference oracles instead of the
    /// turning-point rule.
    pub fd_r_max: Option<f64>,
    pub sigmas: Vec<f64>,
    pub kappas: Vec<f64>,
    pub xis: Vec<f64>,
    pub m_range: (i64, i64),
}

impl Default for AcceptanceSettings {
    fn default() -> Self {
        AcceptanceSettings {
            fd_points: 4000,
            fd_r_max: None,
            sigmas: vec![0.5, 0.8, 1.0, 1.5],
            kappas: vec![0.0, 0.5, 2.0],
            xis: vec![0.0, 0.3],
            m_range: (-2, 2),
        }
    }
}

impl AcceptanceSettings {
    fn grid(&self, mu: f64, levels: usize) -> Result<RadialGrid> {
        match self.fd_r_max {
            Some(r) => RadialGrid::new(r, self.fd_points),
            None => RadialGrid::for_levels(mu, 1.0, levels, self.fd_points),
        }
    }
}

fn defect(sigma: f64, beta: f64) -> Result<DefectParams> {
    DefectParams::from_sigma_beta(sigma, beta)
}

fn couplings(alpha: f64, kappa: f64) -> Couplings {
    Couplings {
        alpha,
        kappa,
        ..Couplings::default()
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

const LEVELS: usize = 5;
const RUNTIME_LIMIT_S: f64 = 60.0;

fn spectrum_oracle(s: &AcceptanceSettings) -> Result<(f64, String)> {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut channels = 0;
    let mut skipped = Vec::new();
    for &sigma in &s.sigmas {
        for &kappa in &s.kappas {
            for &xi in &s.xis {
                for m in s.m_range.0..=s.m_range.1 {
                    let mu = match spectrum::mu_index(m, xi, sigma, kappa) {
                        Ok(mu) => mu,
                        Err(Error::FallToCenter { .. }) => {
                            skipped.push(format!("(sigma={sigma},kappa={kappa},xi={xi},m={m})"));
                            continue;
                        }
                        Err(e) => return Err(e),
                    };
                    let fd = radial_eigensolve_fd(mu, 1.0, &s.grid(mu, LEVELS)?, LEVELS)?;
                    for (n, e) in fd.iter().enumerate() {
                        worst = worst.max(rel(*e, 2.0 * n as f64 + mu + 1.0));
                    }
                    channels += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    if elapsed > RUNTIME_LIMIT_S {
        return Err(Error::domain(format!("oracle sweep took {elapsed:.1} s")));
    }
    let skipped = if skipped.is_empty() {
        String::new()
    } else {
        format!(" skipped FallToCenter {}", skipped.join(" "))
    };
    Ok((worst, format!("channels={channels} runtime={elapsed:.2}s{skipped}")))
}

fn cone_oracle(s: &AcceptanceSettings) -> Result<(f64, String)> {
    let mut worst: f64 = 0.0;
    for &sigma in &[0.5, 0.75] {
        for m in 0..=2_i64 {
            let mu = m as f64 / sigma;
            let fd = cone_schrodinger_eigensolve(sigma, m, 1.0, &s.grid(mu, LEVELS)?, LEVELS)?;
            for (n, e) in fd.iter().enumerate() {
                worst = worst.max(rel(*e, 2.0 * n as f64 + 1.0 + mu));
            }
        }
    }
    Ok((worst, "sigma in {0.5, 0.75}, m in {0, 1, 2}".into()))
}

fn discrepancy(s: &AcceptanceSettings) -> Result<(f64, String)> {
    let report = spectrum::discrepancy_report(0.5, 0.0, 1)?;
    let mut worst = (report.mu_path_integral - 1.8027756).abs() / 1e-6 * 1e-4;
    if report.mu_schrodinger != 2.0 {
        return Err(Error::domain(format!("mu_S = {} is not exactly 2", report.mu_schrodinger)));
    }
    let mu_pi = report.mu_path_integral;
    let path_integral = radial_eigensolve_fd(mu_pi, 1.0, &s.grid(mu_pi, LEVELS)?, LEVELS)?;
    let cone = cone_schrodinger_eigensolve(0.5, 1, 1.0, &s.grid(2.0, LEVELS)?, LEVELS)?;
    for n in 0..LEVELS {
        let base = 2.0 * n as f64 + 1.0;
        worst = worst.max(rel(path_integral[n], base + mu_pi)).max(rel(cone[n], base + 2.0));
        // each tower must sit on its own formula and not on the other one
        if rel(path_integral[n], base + 2.0) < 1e-2 || rel(cone[n], base + mu_pi) < 1e-2 {
            return Err(Error::domain("oracle towers do not separate"));
        }
    }
    Ok((
        worst,
        format!("mu_PI={mu_pi:.10} mu_S=2 E0_PI={:.7} E0_S={:.7}", path_integral[0], cone[0]),
    ))
}

fn hille_hardy() -> Result<(f64, String)> {
    let policy = TruncationPolicy {
        n_series_max: 60,
        ..TruncationPolicy::default()
    };
    let mut worst: f64 = 0.0;
    for &(sigma, kappa, xi) in &[(0.5, 0.0, 0.0), (0.8, 0.5, 0.3), (1.5, 2.0, 0.3)] {
        let (d, c) = (defect(sigma, 0.0)?, couplings(xi, kappa));
        for &wt in &[0.2, 0.7, 2.0] {
            let q = PropagatorQuery::new(0.8, 0.0, 1.3, 0.0, wt, 0.0)?;
            let closed = radial_propagator_closed(1, &q, &d, &c)?;
            let series = radial_propagator_series(1, &q, &d, &c, &policy)?;
            worst = worst.max(rel(series.value, closed));
        }
    }
    Ok((worst, "m=1, r'=0.8, r''=1.3".into()))
}

fn semigroup() -> Result<(f64, String)> {
    let mu = spectrum::mu_index(1, 0.0, 0.5, 0.0)?;
    let k = |a: f64, b: f64, t: f64| radial_kernel(mu, a, b, t, 1.0, 1.0, 1.0);
    let mut failure = None;
    let lhs = Quadrature::new(1e-10).integrate_to_infinity(
        |r: f64| {
            if r <= 0.0 {
                return 0.0;
            }
            match k(1.3, r, 0.3).and_then(|a| Ok(a * k(r, 0.8, 0.5)?)) {
                Ok(v) => v * r,
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        },
        0.0,
        1.0,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok((rel(lhs, k(1.3, 0.8, 0.8)?), format!("mu={mu:.10}")))
}

fn winding() -> Result<(f64, String)> {
    let d = defect(0.8, 0.2)?;
    let c = Couplings {
        alpha: 0.3,
        kappa: 2.0,
        omega_l: 0.2,
        ..Couplings::default()
    };
    let k = 0.5;
    let omega = c.omega(d.sigma());
    let q = PropagatorQuery::new(0.8, 0.3, 1.3, 1.3, 0.7 / omega, k)?;
    let policy = TruncationPolicy::default();
    let direct = partial_wave_sum(&q, &d, &c, policy.m_max)?.value;
    let first = winding_sum(&q, &d, &c, -c.alpha, &policy)?;
    let second = winding_sum(&q, &d, &c, d.beta() * k - c.alpha, &policy)?;
    let resum = (first - direct).norm() / direct.norm();
    let gauge = (first - second).norm() / first.norm();
    // the two sub-checks have different tolerances; report on the 1e-6 scale
    let metric = resum.max(gauge * 100.0);
    Ok((metric, format!("resummation={resum:e} (tol 1e-6) gauge={gauge:e} (tol 1e-8)")))
}

fn trace() -> Result<(f64, String)> {
    let d = defect(0.8, 0.0)?;
    let c = couplings(0.3, 0.5);
    let policy = TruncationPolicy::default();
    let numeric = transverse_trace(1.0, 0.0, &d, &c, &policy)?;
    let spectral = spectral_trace(1.0, 0.0, &d, &c, policy.m_max)?;
    Ok((rel(numeric, spectral), format!("trace={numeric:.12} spectral={spectral:.12} m_max={}", policy.m_max)))
}

fn landau() -> Result<(f64, String)> {
    let c = Couplings {
        omega_0: 0.0,
        omega_l: 1.0,
        ..Couplings::default()
    };
    let table = spectrum::spectrum_table(&DefectParams::flat(), &c, 0.0, 5, (-10, 10), spectrum::DEFAULT_GROUPING_TOL)?;
    let mut worst: f64 = 0.0;
    for nbar in 0..=5_usize {
        let want = 2.0 * c.hbar * c.omega_l * (nbar as f64 + 0.5);
        let line = &table.lines[nbar];
        for member in &line.members {
            let e = spectrum::transverse_energy(member, &DefectParams::flat(), &c)?;
            worst = worst.max((e - want).abs() / want);
        }
        if line.degeneracy != nbar + 11 {
            return Err(Error::domain(format!(
                "level {nbar} has degeneracy {} instead of {}",
                line.degeneracy,
                nbar + 11
            )));
        }
    }
    if !table.unbounded_m_degeneracy {
        return Err(Error::domain("Landau configuration not flagged"));
    }
    Ok((worst, "levels 0..=5, degeneracy nbar+11".into()))
}

fn xi_sufficiency() -> Result<(f64, String)> {
    let sigma = 0.8;
    let first = (defect(sigma, 0.0)?, couplings(0.7, 0.5), 5.0);
    let second = (defect(sigma, 0.5)?, couplings(0.2, 0.5), -1.0);
    let mut mismatches = 0;
    for m in -3..=3 {
        for n in 0..4 {
            let energy = |(d, c, k): &(DefectParams, Couplings, f64)| -> Result<(u64, u64)> {
                let mu = spectrum::mu_index(m, spectrum::xi(d, c, *k), sigma, c.kappa)?;
                let e = spectrum::transverse_energy(&QuantumNumbers { n, m, k: *k }, d, c)?;
                Ok((mu.to_bits(), e.to_bits()))
            };
            if energy(&first)? != energy(&second)? {
                mismatches += 1;
            }
        }
    }
    Ok((mismatches as f64, "bitwise mu and E over m in -3..=3, n < 4".into()))
}

fn orthonormality() -> Result<(f64, String)> {
    let settings = [
        (defect(1.0, 0.0)?, couplings(0.0, 0.0), 0),
        (defect(0.5, 0.0)?, couplings(0.0, 0.0), 1),
        (defect(0.8, 0.0)?, couplings(0.3, 0.5), -2),
    ];
    let mut worst: f64 = 0.0;
    for (d, c, m) in &settings {
        let g = orthonormality_gram(*m, 20, d, c, 0.0)?;
        for (i, row) in g.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                worst = worst.max((v - if i == j { 1.0 } else { 0.0 }).abs());
            }
        }
    }
    Ok((worst, "n_max=20".into()))
}

/// Deterministic low-discrepancy points in [0, 1)^5.
fn kronecker(i: usize) -> [f64; 5] {
    const STEPS: [f64; 5] = [
        0.618_033_988_749_894_9,
        0.414_213_562_373_095_1,
        0.732_050_807_568_877_2,
        0.236_067_977_499_789_7,
        0.645_751_311_064_590_6,
    ];
    STEPS.map(|a| ((i + 1) as f64 * a).fract())
}

fn geometry() -> Result<(f64, String)> {
    let mut gauss_bonnet: f64 = 0.0;
    for &sigma in &[0.25, 0.5, 0.75, 1.0] {
        let v = defect_geometry::gauss_bonnet_check(sigma, 1.3, 64)?;
        gauss_bonnet = gauss_bonnet.max((v - TAU * sigma).abs());
    }
    let mut solder: f64 = 0.0;
    for i in 0..100 {
        let [u0, u1, u2, u3, u4] = kronecker(i);
        let d = DefectParams::new(-TAU + 2.0 * TAU * u0 * (1.0 - 1e-12), -10.0 + 20.0 * u1)?;
        let (r, theta, z) = (0.05 + 19.95 * u2, TAU * u3, -5.0 + 10.0 * u4);
        let g = defect_geometry::induced_metric(&d, &[r * theta.cos(), r * theta.sin(), z])?;
        let want = defect_geometry::metric_tensor(&d, r)?;
        let scale = want[1][1].max(1.0);
        for a in 0..3 {
            for b in 0..3 {
                solder = solder.max((g[a][b] - want[a][b]).abs() / scale);
            }
        }
    }
    let mean = defect_geometry::principal_curvatures(0.5, 1.0)?.mean;
    let mean_err = (mean - 0.75_f64.sqrt()).abs();
    // Gauss–Bonnet is pinned at 1e-10, the rest at 1e-12
    let metric = (gauss_bonnet * 1e-2).max(solder).max(mean_err);
    Ok((
        metric,
        format!("gauss_bonnet={gauss_bonnet:e} (tol 1e-10) solder={solder:e} mean_curvature={mean:.15}"),
    ))
}

fn smooth(r: f64, theta: f64) -> f64 {
    (-(r - 1.0) * (r - 1.0)).exp() * (1.0 + 0.3 * theta.cos())
}

/// ∫ K_ε(1, 0.5 → r, θ) f(r, θ) r dr dθ − f(1, 0.5).
fn delta_error(eps: f64) -> Result<f64> {
    let d = defect(0.8, 0.0)?;
    let c = couplings(0.3, 0.5);
    let (r0, theta0) = (1.0, 0.5);
    let width = eps.sqrt();
    let quad = Quadrature::new(1e-11);
    let mut failure = None;
    let mut angular = |r: f64| -> f64 {
        let span = (12.0 * width / (d.sigma() * r)).min(PI);
        let inner = quad.integrate_breaks(
            |th: f64| match short_time_kernel(r0, r, th - theta0, eps, &d, &c, 0.0) {
                Ok(k) => (k * smooth(r, th)).re,
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            },
            &[theta0 - span, theta0, theta0 + span],
        );
        match inner {
            Ok(v) => v * r,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        }
    };
    let lo = (r0 - 12.0 * width).max(1e-6);
    let total = quad.integrate_breaks(&mut angular, &[lo, r0, r0 + 12.0 * width])?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(total - smooth(r0, theta0))
}

fn delta_limit() -> Result<(f64, String)> {
    let errs = [1e-2, 5e-3, 2.5e-3].map(delta_error);
    let [a, b, c] = [errs[0].clone()?, errs[1].clone()?, errs[2].clone()?];
    let p1 = (a / b).abs().log2();
    let p2 = (b / c).abs().log2();
    // three-point Richardson: order from the ratio of successive differences
    let richardson = ((a - b) / (b - c)).abs().log2();
    let metric = (p1 - 1.0).abs().max((p2 - 1.0).abs()).max((richardson - 1.0).abs());
    Ok((metric, format!("errors={a:e},{b:e},{c:e} orders={p1:.4},{p2:.4} richardson={richardson:.4}")))
}

type Check = (u8, &'static str, f64, Box<dyn Fn(&AcceptanceSettings) -> Result<(f64, String)>>);

fn checks() -> Vec<Check> {
    vec![
        (1, "spectrum-oracle", 1e-4, Box::new(spectrum_oracle)),
        (2, "schrodinger-cone-oracle", 1e-4, Box::new(cone_oracle)),
        (3, "discrepancy", 1e-4, Box::new(discrepancy)),
        (4, "hille-hardy", 1e-8, Box::new(|_| hille_hardy())),
        (5, "semigroup", 1e-6, Box::new(|_| semigroup())),
        (6, "winding-resummation", 1e-6, Box::new(|_| winding())),
        (7, "trace-identity", 1e-6, Box::new(|_| trace())),
        (8, "landau-collapse", 1e-12, Box::new(|_| landau())),
        (9, "xi-sufficiency", 0.0, Box::new(|_| xi_sufficiency())),
        (10, "orthonormality", 1e-8, Box::new(|_| orthonormality())),
        (11, "geometry", 1e-12, Box::new(|_| geometry())),
        (12, "delta-limit-order", 0.1, Box::new(|_| delta_limit())),
    ]
}

/// Runs every check in order. A check that errors is reported as failed
/// with the error text; it never aborts the others.
pub fn run_all(settings: &AcceptanceSettings) -> Vec<CheckOutcome> {
    checks()
        .into_iter()
        .map(|(id, name, tol, run)| match run(settings) {
            Ok((metric, detail)) => CheckOutcome::measured(id, name, metric, tol, detail),
            Err(e) => CheckOutcome::failed(id, name, tol, &e),
        })
        .collect()
}

/// Runs the single check with the given id.
pub fn run_one(id: u8, settings: &AcceptanceSettings) -> Option<CheckOutcome> {
    checks().into_iter().find(|c| c.0 == id).map(|(id, name, tol, run)| match run(settings) {
        Ok((metric, detail)) => CheckOutcome::measured(id, name, metric, tol, detail),
        Err(e) => CheckOutcome::failed(id, name, tol, &e),
    })
}
