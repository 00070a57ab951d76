use super::SymTridiagonal;
use crate::error::{Error, Result};
use crate::special_functions::{ln_factorial, log_gamma_unchecked};

/// Generalized Gauss–Laguerre rule for ∫_0^∞ t^μ e^{−t} f(t) dt.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLaguerre {
    pub mu: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// (L_N(x), L_{N-1}(x)) by the three-term recurrence.
fn laguerre_pair(n: usize, mu: f64, x: f64) -> (f64, f64) {
    let mut prev = 1.0;
    let mut cur = 1.0 + mu - x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + mu - x) * cur - (kf + mu) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

impl GaussLaguerre {
    /// N-point rule. Nodes come from the Jacobi matrix by bisection and are
    /// polished by Newton steps on L_N^{(μ)}; weights are formed in log space.
    pub fn new(n: usize, mu: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("Gauss-Laguerre rule needs at least one node"));
        }
        if !(mu > -1.0) {
            return Err(Error::domain(format!("Gauss-Laguerre parameter must exceed -1, got {mu}")));
        }
        let diag: Vec<f64> = (0..n).map(|i| 2.0 * i as f64 + mu + 1.0).collect();
        let off: Vec<f64> = (1..n).map(|i| (i as f64 * (i as f64 + mu)).sqrt()).collect();
        let jacobi = SymTridiagonal::new(diag, off);

        let nf = n as f64;
        let ln_norm = log_gamma_unchecked(nf + mu + 1.0) - ln_factorial(n) - 2.0 * (nf + 1.0).ln();
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for k in 0..n {
            let mut x = jacobi.eigenvalue(k);
            for _ in 0..3 {
                let (ln, lnm1) = laguerre_pair(n, mu, x);
                let deriv = (nf * ln - (nf + mu) * lnm1) / x;
                if deriv == 0.0 || !deriv.is_finite() {
                    break;
                }
                let step = ln / deriv;
                x -= step;
                if step.abs() <= 4.0 * f64::EPSILON * x.abs() {
                    break;
                }
            }
            let (lnp1, _) = laguerre_pair(n + 1, mu, x);
            let w = (ln_norm + x.ln() - 2.0 * lnp1.abs().ln()).exp();
            nodes.push(x);
            weights.push(w);
        }
        Ok(GaussLaguerre { mu, nodes, weights })
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        let terms: Vec<f64> = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .collect();
        super::pairwise_sum(&terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments_are_exact() {
        // ∫ t^μ e^{-t} t^j dt = Γ(μ+j+1)
        for &mu in &[0.0, 0.5, 1.8027756377319946, 7.3] {
            let rule = GaussLaguerre::new(30, mu).unwrap();
            for j in 0..20 {
                let got = rule.integrate(|t| t.powi(j));
                let want = log_gamma_unchecked(mu + j as f64 + 1.0).exp();
                assert!((got / want - 1.0).abs() < 1e-12, "mu={mu} j={j}");
            }
        }
    }

    #[test]
    fn small_rule_closed_form() {
        // one node at μ+1 carrying Γ(μ+1)
        let rule = GaussLaguerre::new(1, 0.5).unwrap();
        assert!((rule.nodes[0] - 1.5).abs() < 1e-14);
        assert!((rule.weights[0] - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-14);
        // two-point classical rule: nodes 2 ∓ √2
        let rule = GaussLaguerre::new(2, 0.0).unwrap();
        assert!((rule.nodes[0] - (2.0 - 2f64.sqrt())).abs() < 1e-14);
        assert!((rule.nodes[1] - (2.0 + 2f64.sqrt())).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(GaussLaguerre::new(0, 0.0).is_err());
        assert!(GaussLaguerre::new(4, -1.0).is_err());
    }
}
