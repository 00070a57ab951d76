use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// (-1)^k zeta(k) / k for k = 2, 3, ..., 26: Taylor coefficients of ln Γ(1 + z).
const LN_GAMMA_TAYLOR: [f64; 25] = [
    0.822_467_033_424_113_2,
    -0.400_685_634_386_531_4,
    0.270_580_808_427_784_5,
    -0.207_385_551_028_673_98,
    0.169_557_176_997_408_2,
    -0.144_049_896_768_846_12,
    0.125_509_669_524_743_04,
    -0.111_334_265_869_564_69,
    0.100_099_457_512_781_81,
    -0.090_954_017_145_829_04,
    0.083_353_840_546_109,
    -0.076_932_516_411_352_19,
    0.071_432_946_295_361_34,
    -0.066_668_705_882_420_47,
    0.062_500_955_141_213_04,
    -0.058_823_978_658_684_58,
    0.055_555_767_627_403_61,
    -0.052_631_679_379_616_66,
    0.050_000_047_698_101_69,
    -0.047_619_070_330_142_23,
    0.045_454_556_293_204_67,
    -0.043_478_266_053_040_26,
    0.041_666_669_150_341_21,
    -0.040_000_001_192_140_14,
    0.038_461_539_034_675_19,
];

/// ln Γ(1 + z) for |z| ≤ 0.25 by its Taylor series.
fn ln_gamma_1p_small(z: f64) -> f64 {
    let mut acc = 0.0;
    for &c in LN_GAMMA_TAYLOR.iter().rev() {
        acc = acc * z + c;
    }
    z * (-EULER_GAMMA + z * acc)
}

/// Natural logarithm of the gamma function for real x > 0.
///
/// Lanczos approximation away from the zeros at x = 1 and x = 2, where a
/// Taylor expansion keeps the relative error small.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("log_gamma requires x > 0, got {x}")));
    }
    Ok(log_gamma_unchecked(x))
}

pub(crate) fn log_gamma_unchecked(x: f64) -> f64 {
    if x == 1.0 || x == 2.0 {
        return 0.0;
    }
    if (x - 1.0).abs() <= 0.25 {
        return ln_gamma_1p_small(x - 1.0);
    }
    if (x - 2.0).abs() <= 0.25 {
        let z = x - 2.0;
        return z.ln_1p() + ln_gamma_1p_small(z);
    }
    if x < 0.5 {
        // Γ(x) = Γ(x + 1) / x
        return log_gamma_unchecked(x + 1.0) - x.ln();
    }
    let xm1 = x - 1.0;
    let t = xm1 + LANCZOS_G + 0.5;
    let mut a = LANCZOS_COEFFS[0];
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        a += c / (xm1 + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (xm1 + 0.5) * t.ln() - t + a.ln()
}

/// ln(n!) for a count.
pub(crate) fn ln_factorial(n: usize) -> f64 {
    log_gamma_unchecked(n as f64 + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gamma_by_recurrence(x: f64) -> f64 {
        // Γ(x) from Γ(x0) with x0 ∈ {0.5, 1} using Γ(x+1) = xΓ(x).
        let (mut g, mut y) = if (x - x.floor() - 0.5).abs() < 1e-15 {
            (std::f64::consts::PI.sqrt(), 0.5)
        } else {
            (1.0, 1.0)
        };
        while y < x - 0.25 {
            g *= y;
            y += 1.0;
        }
        g
    }

    #[test]
    fn exact_zeros() {
        assert_eq!(log_gamma(1.0).unwrap(), 0.0);
        assert_eq!(log_gamma(2.0).unwrap(), 0.0);
    }

    #[test]
    fn half_integer_value() {
        let expected = gamma_by_recurrence(5.5).ln();
        assert!((expected - 3.957_813_967_618_716).abs() < 1e-12);
        let got = log_gamma(5.5).unwrap();
        assert!((got / expected - 1.0).abs() < 1e-12, "{got} vs {expected}");
    }

    #[test]
    fn integer_and_half_integer_grid() {
        for k in 0..60 {
            let x = 0.5 * k as f64 + 0.5;
            let expected = gamma_by_recurrence(x).ln();
            let got = log_gamma(x).unwrap();
            let scale = expected.abs().max(1.0);
            assert!((got - expected).abs() / scale < 1e-13, "x={x}: {got} vs {expected}");
        }
    }

    #[test]
    fn relative_accuracy_near_the_zeros() {
        // ln Γ(1 + z) ≈ -γ z, so relative accuracy must survive near z = 0.
        for &z in &[1e-10, -1e-8, 1e-4, -0.01, 0.2] {
            let near_one = log_gamma(1.0 + z).unwrap();
            let near_two = log_gamma(2.0 + z).unwrap();
            assert!(near_one * z < 0.0);
            assert!(near_two * z > 0.0);
            assert!((near_one / (-EULER_GAMMA * z) - 1.0).abs() < 0.5);
        }
        // continuity across the branch boundaries
        for &x in &[0.75, 1.25, 1.75, 2.25] {
            let lo = log_gamma(x - 1e-12).unwrap();
            let hi = log_gamma(x + 1e-12).unwrap();
            assert!((lo - hi).abs() < 1e-11);
        }
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(matches!(log_gamma(0.0), Err(Error::Domain(_))));
        assert!(matches!(log_gamma(-2.5), Err(Error::Domain(_))));
    }
}
