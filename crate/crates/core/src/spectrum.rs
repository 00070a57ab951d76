//! Bound-state spectrum of the confined particle: the Bessel index μ(m),
//! transverse and full energies, their special cases and the comparison
//! with the Schrödinger equation posed on a cone.

use serde::{Deserialize, Serialize};

use crate::defect_geometry::DefectParams;
use crate::error::{Error, Result};

/// Field strengths and units. `omega_l` is the Larmor frequency, `omega_0`
/// the harmonic trap, `kappa` the strength of the short-range 1/r² term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Couplings {
    pub alpha: f64,
    pub omega_l: f64,
    pub omega_0: f64,
    pub kappa: f64,
    pub hbar: f64,
    pub mass: f64,
}

impl Default for Couplings {
    fn default() -> Self {
        Couplings {
            alpha: 0.0,
            omega_l: 0.0,
            omega_0: 1.0,
            kappa: 0.0,
            hbar: 1.0,
            mass: 1.0,
        }
    }
}

impl Couplings {
    pub fn validate(&self) -> Result<()> {
        let finite = [self.alpha, self.omega_l, self.omega_0, self.kappa, self.hbar, self.mass];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("couplings must be finite"));
        }
        if !(self.hbar > 0.0) || !(self.mass > 0.0) {
            return Err(Error::domain("hbar and mass must be positive"));
        }
        if self.omega_0 < 0.0 {
            return Err(Error::domain(format!("trap frequency must be >= 0, got {}", self.omega_0)));
        }
        if self.kappa < 0.0 {
            return Err(Error::domain(format!("kappa must be >= 0, got {}", self.kappa)));
        }
        Ok(())
    }

    /// ω̄ = ω_L/σ².
    pub fn omega_bar(&self, sigma: f64) -> f64 {
        self.omega_l / (sigma * sigma)
    }

    /// ω = √(ω₀² + ω̄²).
    pub fn omega(&self, sigma: f64) -> f64 {
        self.omega_0.hypot(self.omega_bar(sigma))
    }

    /// Constant potential V₀ = −ξħω̄ dropped from the transverse problem.
    pub fn v0(&self, defect: &DefectParams, k: f64) -> f64 {
        -xi(defect, self, k) * self.hbar * self.omega_bar(defect.sigma())
    }

    fn require_bound(&self, sigma: f64) -> Result<f64> {
        self.validate()?;
        let omega = self.omega(sigma);
        if !(omega > 0.0) {
            return Err(Error::domain("bound states need omega > 0 (trap or magnetic field)"));
        }
        Ok(omega)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantumNumbers {
    pub n: usize,
    pub m: i64,
    pub k: f64,
}

/// ξ = α − βk.
pub fn xi(defect: &DefectParams, couplings: &Couplings, k: f64) -> f64 {
    couplings.alpha - defect.beta() * k
}

/// μ(m) = √(4(m+ξ)² + σ² − 1 + κ) / 2σ.
pub fn mu_index(m: i64, xi: f64, sigma: f64, kappa: f64) -> Result<f64> {
    mu_of_shift(m as f64, m as f64 + xi, sigma, kappa)
}

/// The same index with a continuous angular variable ν in place of m + ξ.
pub fn mu_index_continuous(nu: f64, sigma: f64, kappa: f64) -> Result<f64> {
    mu_of_shift(nu, nu, sigma, kappa)
}

fn mu_of_shift(channel: f64, shifted: f64, sigma: f64, kappa: f64) -> Result<f64> {
    if !(sigma > 0.0) || !sigma.is_finite() || !kappa.is_finite() || !shifted.is_finite() {
        return Err(Error::domain(format!(
            "bad index arguments: shifted m {shifted}, sigma {sigma}, kappa {kappa}"
        )));
    }
    if sigma == 1.0 && kappa == 0.0 {
        // √(4ν²)/2 may round one ulp away from |ν|
        return Ok(shifted.abs());
    }
    let radicand = 4.0 * shifted * shifted + sigma * sigma - 1.0 + kappa;
    if radicand < 0.0 {
        return Err(Error::FallToCenter { channel, radicand });
    }
    Ok(radicand.sqrt() / (2.0 * sigma))
}

/// Ẽ = ħω(2n + μ + 1) + mħω̄.
pub fn transverse_energy(qn: &QuantumNumbers, defect: &DefectParams, couplings: &Couplings) -> Result<f64> {
    let sigma = defect.sigma();
    let omega = couplings.require_bound(sigma)?;
    let mu = mu_index(qn.m, xi(defect, couplings, qn.k), sigma, couplings.kappa)?;
    let hbar = couplings.hbar;
    Ok(hbar * omega * (2.0 * qn.n as f64 + mu + 1.0) + qn.m as f64 * hbar * couplings.omega_bar(sigma))
}

/// E = Ẽ + ħ²k²/2M + (βk − α)ħω̄.
pub fn total_energy(qn: &QuantumNumbers, defect: &DefectParams, couplings: &Couplings) -> Result<f64> {
    let transverse = transverse_energy(qn, defect, couplings)?;
    Ok(transverse + axial_energy(qn.k, couplings) + couplings.v0(defect, qn.k))
}

fn axial_energy(k: f64, couplings: &Couplings) -> f64 {
    couplings.hbar * couplings.hbar * k * k / (2.0 * couplings.mass)
}

/// 2ħω_L(n̄ + ½) + ħ²k²/2M.
pub fn landau_levels(nbar: usize, k: f64, couplings: &Couplings) -> f64 {
    2.0 * couplings.hbar * couplings.omega_l * (nbar as f64 + 0.5) + axial_energy(k, couplings)
}

const SPECIAL_CASE_TOL: f64 = 1e-12;

fn require(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::domain(format!("special-case formula requires {what}")))
    }
}

/// ħω₀(2n + 1 + |m + α − βk|): flat medium, pure screw dislocation.
pub fn screw_dislocation_energy(qn: &QuantumNumbers, defect: &DefectParams, couplings: &Couplings) -> Result<f64> {
    couplings.validate()?;
    require((defect.sigma() - 1.0).abs() <= SPECIAL_CASE_TOL, "sigma = 1")?;
    require(couplings.kappa == 0.0, "kappa = 0")?;
    require(couplings.omega_l == 0.0, "omega_L = 0")?;
    let shifted = (qn.m as f64 + xi(defect, couplings, qn.k)).abs();
    Ok(couplings.hbar * couplings.omega_0 * (2.0 * qn.n as f64 + 1.0 + shifted))
}

/// ħω₀(2n + 1 + √(4m² + σ² − 1 + κ)/2σ): pure disclination.
pub fn disclination_energy(qn: &QuantumNumbers, defect: &DefectParams, couplings: &Couplings) -> Result<f64> {
    couplings.validate()?;
    require(couplings.alpha == 0.0 && defect.beta() == 0.0, "alpha = beta = 0")?;
    require(couplings.omega_l == 0.0, "omega_L = 0")?;
    let mu = mu_index(qn.m, 0.0, defect.sigma(), couplings.kappa)?;
    Ok(couplings.hbar * couplings.omega_0 * (2.0 * qn.n as f64 + 1.0 + mu))
}

/// ħω(2n_r + 1 + |m|/σ) + ħ²k²/2M from the Schrödinger equation on a cone.
pub fn schrodinger_cone_energy(n_r: usize, m: i64, k: f64, sigma: f64, couplings: &Couplings) -> Result<f64> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::domain(format!("sigma must be positive, got {sigma}")));
    }
    let omega = couplings.require_bound(sigma)?;
    let mu = (m as f64).abs() / sigma;
    Ok(couplings.hbar * omega * (2.0 * n_r as f64 + 1.0 + mu) + axial_energy(k, couplings))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub mu_path_integral: f64,
    pub mu_schrodinger: f64,
    pub delta: f64,
}

/// Index from the path integral against |m|/σ from the cone Schrödinger
/// equation; they differ by the σ² − 1 term under the square root.
pub fn discrepancy_report(sigma: f64, kappa: f64, m: i64) -> Result<Discrepancy> {
    let mu_path_integral = mu_index(m, 0.0, sigma, kappa)?;
    let mu_schrodinger = (m as f64).abs() / sigma;
    Ok(Discrepancy {
        mu_path_integral,
        mu_schrodinger,
        delta: mu_schrodinger - mu_path_integral,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralLine {
    pub energy: f64,
    pub members: Vec<QuantumNumbers>,
    pub degeneracy: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTable {
    pub lines: Vec<SpectralLine>,
    /// Set when every m ≤ 0 (or m ≥ 0) channel shares its energy, so the
    /// degeneracy counts are an artifact of the finite m window.
    pub unbounded_m_degeneracy: bool,
    /// Channels dropped because μ(m) is not real.
    pub excluded: Vec<(i64, Error)>,
}

pub const DEFAULT_GROUPING_TOL: f64 = 1e-9;

/// All levels with n ≤ n_max and m in the closed range, grouped by energy.
/// Fails on the first channel that falls to the centre.
pub fn spectrum_table(
    defect: &DefectParams,
    couplings: &Couplings,
    k: f64,
    n_max: usize,
    m_range: (i64, i64),
    grouping_tol: f64,
) -> Result<SpectrumTable> {
    let table = spectrum_table_partial(defect, couplings, k, n_max, m_range, grouping_tol)?;
    if let Some((_, err)) = table.excluded.first() {
        return Err(err.clone());
    }
    Ok(table)
}

/// As [`spectrum_table`] but records fall-to-centre channels and keeps going.
pub fn spectrum_table_partial(
    defect: &DefectParams,
    couplings: &Couplings,
    k: f64,
    n_max: usize,
    m_range: (i64, i64),
    grouping_tol: f64,
) -> Result<SpectrumTable> {
    let (m_min, m_max) = m_range;
    if m_min > m_max {
        return Err(Error::domain(format!("empty m range [{m_min}, {m_max}]")));
    }
    if !(grouping_tol > 0.0) {
        return Err(Error::domain("grouping tolerance must be positive"));
    }
    let sigma = defect.sigma();
    couplings.require_bound(sigma)?;

    let mut states = Vec::new();
    let mut excluded = Vec::new();
    for m in m_min..=m_max {
        for n in 0..=n_max {
            let qn = QuantumNumbers { n, m, k };
            match transverse_energy(&qn, defect, couplings) {
                Ok(e) => states.push((e, qn)),
                Err(err @ Error::FallToCenter { .. }) => {
                    excluded.push((m, err));
                    break;
                }
                Err(err) => return Err(err),
            }
        }
    }
    states.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.m.cmp(&b.1.m)).then(a.1.n.cmp(&b.1.n)));

    let mut lines: Vec<SpectralLine> = Vec::new();
    for (e, qn) in states {
        match lines.last_mut() {
            Some(line) if (e - line.energy).abs() <= grouping_tol * line.energy.abs().max(f64::MIN_POSITIVE) => {
                line.members.push(qn);
            }
            _ => lines.push(SpectralLine {
                energy: e,
                members: vec![qn],
                degeneracy: 0,
            }),
        }
    }
    for line in &mut lines {
        line.members.sort_by(|a, b| a.m.cmp(&b.m).then(a.n.cmp(&b.n)));
        line.degeneracy = line.members.len();
    }

    let landau_like = couplings.omega_0 == 0.0
        && couplings.omega_l != 0.0
        && (sigma - 1.0).abs() <= SPECIAL_CASE_TOL
        && xi(defect, couplings, k) == 0.0
        && couplings.kappa == 0.0;
    Ok(SpectrumTable {
        lines,
        unbounded_m_degeneracy: landau_like,
        excluded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn trap(alpha: f64, kappa: f64) -> Couplings {
        Couplings {
            alpha,
            kappa,
            ..Couplings::default()
        }
    }

    fn defect(sigma: f64, beta: f64) -> DefectParams {
        DefectParams::from_sigma_beta(sigma, beta).unwrap()
    }

    #[test]
    fn xi_examples() {
        assert_eq!(xi(&DefectParams::flat(), &trap(0.0, 0.0), 3.0), 0.0);
        assert_eq!(xi(&defect(1.0, 0.5), &trap(0.25, 0.0), 0.5), 0.0);
        assert_eq!(xi(&DefectParams::flat(), &trap(1.0, 0.0), 7.0), 1.0);
    }

    #[test]
    fn mu_examples() {
        assert_eq!(mu_index(2, 0.0, 1.0, 0.0).unwrap(), 2.0);
        assert!((mu_index(0, 0.3, 1.0, 0.0).unwrap() - 0.3).abs() < 1e-15);
        assert!((mu_index(1, 0.0, 0.5, 0.0).unwrap() - 3.25f64.sqrt()).abs() < 1e-15);
        assert!(matches!(
            mu_index(0, 0.0, 0.5, 0.0),
            Err(Error::FallToCenter { channel, radicand }) if channel == 0.0 && radicand == -0.75
        ));
    }

    #[test]
    fn transverse_and_total_examples() {
        let flat = DefectParams::flat();
        let ground = QuantumNumbers { n: 0, m: 0, k: 0.0 };
        assert_eq!(transverse_energy(&ground, &flat, &trap(0.0, 0.0)).unwrap(), 1.0);
        assert_eq!(transverse_energy(&ground, &flat, &trap(0.25, 0.0)).unwrap(), 1.25);
        let excited = QuantumNumbers { n: 1, m: 1, k: 0.0 };
        let e = transverse_energy(&excited, &defect(0.5, 0.0), &trap(0.0, 0.0)).unwrap();
        assert!((e - 4.802_775_637_731_995).abs() < 1e-12);

        let c = trap(0.3, 0.5);
        let d = defect(0.8, 0.0);
        let at_rest = QuantumNumbers { n: 2, m: -1, k: 0.0 };
        assert_eq!(total_energy(&at_rest, &d, &c).unwrap(), transverse_energy(&at_rest, &d, &c).unwrap());
        let moving = QuantumNumbers { k: 2.0, ..at_rest };
        let diff = total_energy(&moving, &d, &c).unwrap() - transverse_energy(&moving, &d, &c).unwrap();
        assert!((diff - 2.0).abs() < 1e-14);

        let field = Couplings {
            alpha: 1.0,
            omega_l: 0.5,
            ..Couplings::default()
        };
        let e_t = transverse_energy(&ground, &flat, &field).unwrap();
        assert!((total_energy(&ground, &flat, &field).unwrap() - (e_t - 0.5)).abs() < 1e-15);
    }

    #[test]
    fn landau_examples_and_collapse() {
        let c = Couplings {
            omega_l: 1.0,
            omega_0: 0.0,
            ..Couplings::default()
        };
        assert_eq!(landau_levels(0, 0.0, &c), 1.0);
        assert_eq!(landau_levels(3, 0.0, &c), 7.0);
        let flat = DefectParams::flat();
        for m in -10..=10_i64 {
            for n in 0..6_usize {
                let nbar = n + ((m.abs() + m) / 2) as usize;
                let qn = QuantumNumbers { n, m, k: 0.0 };
                assert_eq!(total_energy(&qn, &flat, &c).unwrap(), landau_levels(nbar, 0.0, &c));
            }
        }
    }

    #[test]
    fn screw_dislocation_examples() {
        let flat = DefectParams::flat();
        let ground = QuantumNumbers { n: 0, m: 0, k: 0.0 };
        assert_eq!(screw_dislocation_energy(&ground, &flat, &trap(0.0, 0.0)).unwrap(), 1.0);
        let d = defect(1.0, 0.5);
        let qn = QuantumNumbers { n: 0, m: -1, k: -0.5 };
        let c = trap(0.0, 0.0);
        assert_eq!(xi(&d, &c, qn.k), 0.25);
        assert_eq!(screw_dislocation_energy(&qn, &d, &c).unwrap(), 1.75);
        assert_eq!(screw_dislocation_energy(&qn, &d, &c).unwrap(), transverse_energy(&qn, &d, &c).unwrap());
        assert!(screw_dislocation_energy(&qn, &defect(0.5, 0.0), &c).is_err());
    }

    #[test]
    fn aharonov_bohm_periodicity() {
        let levels = |alpha: f64| {
            let mut e: Vec<f64> = (-10..=10)
                .filter_map(|m| {
                    let qn = QuantumNumbers { n: 0, m, k: 0.0 };
                    transverse_energy(&qn, &DefectParams::flat(), &trap(alpha, 0.0)).ok()
                })
                .collect();
            e.sort_by(f64::total_cmp);
            e
        };
        // shifting ξ by one relabels m; compare away from the window edges
        let a = levels(0.3);
        let b = levels(1.3);
        for e in a.iter().take(15) {
            assert!(b.iter().any(|x| (x - e).abs() < 1e-12));
        }
    }

    #[test]
    fn disclination_examples() {
        let c = trap(0.0, 0.0);
        for m in -3..=3_i64 {
            for n in 0..3 {
                let qn = QuantumNumbers { n, m, k: 0.0 };
                let want = 2.0 * n as f64 + 1.0 + m.abs() as f64;
                assert_eq!(disclination_energy(&qn, &DefectParams::flat(), &c).unwrap(), want);
            }
        }
        let qn = QuantumNumbers { n: 0, m: 1, k: 0.0 };
        let e = disclination_energy(&qn, &defect(0.5, 0.0), &c).unwrap();
        assert!((e - 2.802_775_637_731_995).abs() < 1e-12);
        let zero = QuantumNumbers { n: 0, m: 0, k: 0.0 };
        assert!(matches!(
            disclination_energy(&zero, &defect(0.5, 0.0), &c),
            Err(Error::FallToCenter { .. })
        ));
    }

    #[test]
    fn schrodinger_cone_examples() {
        let c = trap(0.0, 0.0);
        for m in -2..=2 {
            let qn = QuantumNumbers { n: 1, m, k: 0.0 };
            assert_eq!(
                schrodinger_cone_energy(1, m, 0.0, 1.0, &c).unwrap(),
                disclination_energy(&qn, &DefectParams::flat(), &c).unwrap()
            );
        }
        assert_eq!(schrodinger_cone_energy(0, 1, 0.0, 0.5, &c).unwrap(), 3.0);
        assert_eq!(schrodinger_cone_energy(2, 0, 0.0, 0.5, &c).unwrap(), 5.0);
    }

    #[test]
    fn discrepancy_examples() {
        assert_eq!(discrepancy_report(1.0, 0.0, 3).unwrap().delta, 0.0);
        let r = discrepancy_report(0.5, 0.0, 1).unwrap();
        assert!((r.mu_path_integral - 1.802_775_637_731_995).abs() < 1e-12);
        assert_eq!(r.mu_schrodinger, 2.0);
        assert!((r.delta - 0.197_224_362_268_005).abs() < 1e-12);
        let cancelled = discrepancy_report(0.5, 0.75, 1).unwrap();
        assert_eq!(cancelled.mu_path_integral, 2.0);
        assert_eq!(cancelled.delta, 0.0);
        for m in 1..5 {
            for &sigma in &[0.2, 0.5, 0.9] {
                assert!(discrepancy_report(sigma, 0.0, m).unwrap().delta > 0.0);
            }
        }
    }

    #[test]
    fn oscillator_degeneracies() {
        let t = spectrum_table(&DefectParams::flat(), &trap(0.0, 0.0), 0.0, 10, (-10, 10), 1e-9).unwrap();
        for nbar in 0..=10 {
            let line = &t.lines[nbar];
            assert_eq!(line.energy, nbar as f64 + 1.0);
            assert_eq!(line.degeneracy, nbar + 1);
        }
        assert!(!t.unbounded_m_degeneracy);
        let ms: Vec<i64> = t.lines[4].members.iter().map(|q| q.m).collect();
        assert_eq!(ms, vec![-4, -2, 0, 2, 4]);
    }

    #[test]
    fn landau_table_is_flagged() {
        let c = Couplings {
            omega_l: 1.0,
            omega_0: 0.0,
            ..Couplings::default()
        };
        let t = spectrum_table(&DefectParams::flat(), &c, 0.0, 5, (-10, 10), 1e-9).unwrap();
        assert!(t.unbounded_m_degeneracy);
        for nbar in 0..=5 {
            assert_eq!(t.lines[nbar].energy, landau_levels(nbar, 0.0, &c));
            assert_eq!(t.lines[nbar].degeneracy, nbar + 11);
        }
    }

    #[test]
    fn generic_cone_has_no_accidental_degeneracy() {
        let t = spectrum_table(&defect(0.8, 0.0), &trap(0.0, 0.5), 0.0, 6, (-5, 5), 1e-9).unwrap();
        for line in &t.lines {
            let mut abs_m: Vec<i64> = line.members.iter().map(|q| q.m.abs()).collect();
            abs_m.dedup();
            assert_eq!(abs_m.len(), 1, "mixed |m| at E = {}", line.energy);
        }
        for w in t.lines.windows(2) {
            assert!(w[1].energy - w[0].energy > 1e-9 * w[1].energy);
        }
    }

    #[test]
    fn fall_to_centre_in_tables() {
        let d = defect(0.5, 0.0);
        let c = trap(0.0, 0.0);
        assert!(matches!(
            spectrum_table(&d, &c, 0.0, 3, (-2, 2), 1e-9),
            Err(Error::FallToCenter { channel, .. }) if channel == 0.0
        ));
        let partial = spectrum_table_partial(&d, &c, 0.0, 3, (-2, 2), 1e-9).unwrap();
        assert_eq!(partial.excluded.len(), 1);
        assert_eq!(partial.excluded[0].0, 0);
        assert_eq!(partial.lines.iter().map(|l| l.degeneracy).sum::<usize>(), 16);
    }

    #[test]
    fn xi_sufficiency_is_bitwise() {
        let c1 = trap(0.7, 0.5);
        let c2 = trap(0.2, 0.5);
        let d1 = defect(0.8, 0.0);
        let d2 = defect(0.8, 0.5);
        for m in -3..=3 {
            let a = QuantumNumbers { n: 2, m, k: 5.0 };
            let b = QuantumNumbers { n: 2, m, k: -1.0 };
            let xa = xi(&d1, &c1, a.k);
            let xb = xi(&d2, &c2, b.k);
            assert_eq!(xa.to_bits(), xb.to_bits());
            assert_eq!(
                mu_index(m, xa, 0.8, 0.5).unwrap().to_bits(),
                mu_index(m, xb, 0.8, 0.5).unwrap().to_bits()
            );
            assert_eq!(
                transverse_energy(&a, &d1, &c1).unwrap().to_bits(),
                transverse_energy(&b, &d2, &c2).unwrap().to_bits()
            );
        }
    }

    proptest! {
        #[test]
        fn flat_space_index_is_shifted_m(m in -50i64..50, xi in -3.0..3.0f64) {
            let mu = mu_index(m, xi, 1.0, 0.0).unwrap();
            prop_assert_eq!(mu, (m as f64 + xi).abs());
        }

        #[test]
        fn energies_increase_with_n_and_shifted_m(
            sigma in 0.2..2.0f64,
            kappa in 1.0..3.0f64,
            alpha in -1.0..1.0f64,
            m in -6i64..6,
        ) {
            let d = defect(sigma, 0.0);
            let c = trap(alpha, kappa);
            let e = |n: usize, m: i64| transverse_energy(&QuantumNumbers { n, m, k: 0.0 }, &d, &c).unwrap();
            prop_assert!(e(1, m) > e(0, m));
            prop_assert!(e(4, m) > e(3, m));
            let (a, b) = (m, m + 1);
            let (near, far) = if (a as f64 + alpha).abs() < (b as f64 + alpha).abs() { (a, b) } else { (b, a) };
            prop_assert!(e(0, far) >= e(0, near));
        }
    }
}
