use crate::error::{Error, Result};

/// Generalized Laguerre polynomial L_n^{(μ)}(x) by the three-term recurrence
/// (k+1) L_{k+1} = (2k+1+μ−x) L_k − (k+μ) L_{k−1}.
pub fn laguerre(n: usize, mu: f64, x: f64) -> Result<f64> {
    if !(mu > -1.0) {
        return Err(Error::domain(format!("Laguerre parameter must exceed -1, got {mu}")));
    }
    Ok(laguerre_unchecked(n, mu, x))
}

pub(crate) fn laguerre_unchecked(n: usize, mu: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + mu - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + mu - x) * cur - (kf + mu) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// All of L_0^{(μ)}(x), ..., L_n^{(μ)}(x) in one pass.
pub(crate) fn laguerre_sequence(n: usize, mu: f64, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n == 0 {
        return out;
    }
    out.push(1.0 + mu - x);
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + mu - x) * out[k] - (kf + mu) * out[k - 1]) / (kf + 1.0);
        out.push(next);
    }
    out
}

/// Unevaluated sum hi + lo with |lo| ≤ ulp(hi)/2.
#[derive(Debug, Clone, Copy)]
struct DoubleDouble {
    hi: f64,
    lo: f64,
}

impl DoubleDouble {
    fn from(v: f64) -> Self {
        DoubleDouble { hi: v, lo: 0.0 }
    }

    fn two_sum(a: f64, b: f64) -> Self {
        let s = a + b;
        let bb = s - a;
        let err = (a - (s - bb)) + (b - bb);
        DoubleDouble { hi: s, lo: err }
    }

    fn renorm(hi: f64, lo: f64) -> Self {
        let s = hi + lo;
        DoubleDouble {
            hi: s,
            lo: lo - (s - hi),
        }
    }

    fn add(self, other: Self) -> Self {
        let s = Self::two_sum(self.hi, other.hi);
        Self::renorm(s.hi, s.lo + self.lo + other.lo)
    }

    fn mul_f64(self, b: f64) -> Self {
        let p = self.hi * b;
        let err = self.hi.mul_add(b, -p);
        Self::renorm(p, err + self.lo * b)
    }

    fn div(self, d: Self) -> Self {
        let q1 = self.hi / d.hi;
        // r = self - q1 * d
        let r = self.add(d.mul_f64(-q1));
        let q2 = r.hi / d.hi;
        Self::renorm(q1, q2)
    }
}

/// Terminating Kummer function F(−n, b; x) = Σ_{s=0}^{n} (−n)_s / (b)_s · x^s / s!.
///
/// Summed in double-double arithmetic: the alternating terms cancel by many
/// orders of magnitude once x is comparable to n.
pub fn confluent_hypergeometric_polynomial(n: usize, b: f64, x: f64) -> Result<f64> {
    if !(b > 0.0) {
        return Err(Error::domain(format!("confluent parameter b must be > 0, got {b}")));
    }
    let mut term = DoubleDouble::from(1.0);
    let mut sum = DoubleDouble::from(1.0);
    for s in 1..=n {
        let numer = DoubleDouble::from((s as f64) - 1.0 - n as f64).mul_f64(x);
        let denom = DoubleDouble::two_sum(b, s as f64 - 1.0).mul_f64(s as f64);
        term = mul_dd(term, numer.div(denom));
        sum = sum.add(term);
    }
    Ok(sum.hi + sum.lo)
}

fn mul_dd(a: DoubleDouble, b: DoubleDouble) -> DoubleDouble {
    let p = a.hi * b.hi;
    let err = a.hi.mul_add(b.hi, -p);
    DoubleDouble::renorm(p, err + a.hi * b.lo + a.lo * b.hi)
}
