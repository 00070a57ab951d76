//! Gauge-theoretic geometry of a dispiration: the rotation and translation
//! fields that create it, the resulting connections, coframe and metric,
//! and the conical surface seen at fixed z.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vector3 = [f64; 3];
pub type Matrix3 = [[f64; 3]; 3];

pub const IDENTITY: Matrix3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

/// Antisymmetric generator of rotations about the defect axis.
pub const GENERATOR: Matrix3 = [[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 0.0]];

/// Deficit angle `gamma` (positive when a wedge is removed, negative when
/// one is inserted) and Burgers magnitude `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DefectParams {
    gamma: f64,
    b: f64,
}

impl DefectParams {
    /// Accepts γ ∈ [−2π, 2π) so that σ = 1 − γ/2π covers (0, 2].
    pub fn new(gamma: f64, b: f64) -> Result<Self> {
        if !gamma.is_finite() || !(-TAU..TAU).contains(&gamma) {
            return Err(Error::domain(format!("deficit angle must lie in [-2π, 2π), got {gamma}")));
        }
        if !b.is_finite() {
            return Err(Error::domain(format!("Burgers magnitude must be finite, got {b}")));
        }
        Ok(DefectParams { gamma, b })
    }

    pub fn from_sigma_beta(sigma: f64, beta: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma <= 2.0) {
            return Err(Error::domain(format!("sigma must lie in (0, 2], got {sigma}")));
        }
        Self::new(TAU * (1.0 - sigma), TAU * beta)
    }

    pub fn flat() -> Self {
        DefectParams { gamma: 0.0, b: 0.0 }
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn sigma(&self) -> f64 {
        1.0 - self.gamma / TAU
    }

    pub fn beta(&self) -> f64 {
        self.b / TAU
    }
}

/// θ = atan2(y, x) on the branch [0, 2π).
pub fn polar_angle(x: f64, y: f64) -> f64 {
    let t = y.atan2(x);
    if t < 0.0 {
        let wrapped = t + TAU;
        // atan2 can return -0.0 or tiny negatives that wrap onto 2π itself
        if wrapped >= TAU {
            0.0
        } else {
            wrapped
        }
    } else {
        t
    }
}

pub fn mat_mul(a: &Matrix3, b: &Matrix3) -> Matrix3 {
    let mut c = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

pub fn transpose(a: &Matrix3) -> Matrix3 {
    let mut t = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = a[j][i];
        }
    }
    t
}

pub fn determinant(a: &Matrix3) -> f64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

/// ρ(θ): rotation by γθ/2π about the axis.
pub fn rotation_matrix(defect: &DefectParams, theta: f64) -> Matrix3 {
    let (s, c) = (defect.gamma * theta / TAU).sin_cos();
    [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]
}

/// τ(θ) = −(bθ/2π) e_z.
pub fn translation_vector(defect: &DefectParams, theta: f64) -> Vector3 {
    [0.0, 0.0, -defect.b * theta / TAU]
}

fn off_axis(x: &Vector3) -> Result<f64> {
    let r2 = x[0] * x[0] + x[1] * x[1];
    if r2 == 0.0 {
        return Err(Error::OnAxis);
    }
    Ok(r2)
}

/// Components of dθ in the basis (dx, dy, dz).
fn dtheta(x: &Vector3) -> Result<Vector3> {
    let r2 = off_axis(x)?;
    Ok([-x[1] / r2, x[0] / r2, 0.0])
}

/// Γ^(R) = (γ/2π) m dθ as three coefficient matrices, one per basis
/// differential dx, dy, dz.
pub fn rotational_connection(defect: &DefectParams, x: &Vector3) -> Result<[Matrix3; 3]> {
    let dt = dtheta(x)?;
    let g = defect.gamma / TAU;
    let mut out = [[[0.0; 3]; 3]; 3];
    for (basis, coeff) in dt.iter().enumerate() {
        for i in 0..3 {
            for j in 0..3 {
                out[basis][i][j] = g * coeff * GENERATOR[i][j];
            }
        }
    }
    Ok(out)
}

/// Γ^(T) = β dθ e_z; row = vector component, column = basis differential.
pub fn translational_connection(defect: &DefectParams, x: &Vector3) -> Result<Matrix3> {
    let dt = dtheta(x)?;
    let beta = defect.beta();
    Ok([[0.0; 3], [0.0; 3], [beta * dt[0], beta * dt[1], beta * dt[2]]])
}

/// Coframe ω = dx + Γ^(R)·x + Γ^(T); row α holds the (dx, dy, dz)
/// coefficients of ω^α.
pub fn solder_form(defect: &DefectParams, x: &Vector3) -> Result<Matrix3> {
    let rot = rotational_connection(defect, x)?;
    let trans = translational_connection(defect, x)?;
    let mut omega = IDENTITY;
    for alpha in 0..3 {
        for basis in 0..3 {
            let gx: f64 = (0..3).map(|j| rot[basis][alpha][j] * x[j]).sum();
            omega[alpha][basis] += gx + trans[alpha][basis];
        }
    }
    Ok(omega)
}

/// Metric ωᵀω pulled back to cylindrical coordinates (r, θ, z).
pub fn induced_metric(defect: &DefectParams, x: &Vector3) -> Result<Matrix3> {
    let omega = solder_form(defect, x)?;
    let r = off_axis(x)?.sqrt();
    let theta = polar_angle(x[0], x[1]);
    let (s, c) = theta.sin_cos();
    // columns: ∂x/∂r, ∂x/∂θ, ∂x/∂z
    let jac = [[c, -r * s, 0.0], [s, r * c, 0.0], [0.0, 0.0, 1.0]];
    let g_cart = mat_mul(&transpose(&omega), &omega);
    Ok(mat_mul(&transpose(&jac), &mat_mul(&g_cart, &jac)))
}

/// Line element dr² + σ²r²dθ² + (dz + βdθ)² in (r, θ, z).
pub fn metric_tensor(defect: &DefectParams, r: f64) -> Result<Matrix3> {
    if r == 0.0 {
        return Err(Error::OnAxis);
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::domain(format!("radius must be positive, got {r}")));
    }
    let sigma = defect.sigma();
    let beta = defect.beta();
    Ok([
        [1.0, 0.0, 0.0],
        [0.0, sigma * sigma * r * r + beta * beta, beta],
        [0.0, beta, 1.0],
    ])
}

/// Where a distributional quantity lives: only on the defect line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Support {
    Axis,
}

/// Coefficient of δ²(x, y); the quantity vanishes identically off the axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxialSource<T> {
    pub coefficient: T,
    pub support: Support,
}

impl<T: Default> AxialSource<T> {
    pub fn off_axis_value(&self) -> T {
        T::default()
    }
}

/// Coefficient 2γ/σ of δ²(x, y) in the scalar curvature.
pub fn scalar_curvature_coefficient(defect: &DefectParams) -> f64 {
    2.0 * defect.gamma / defect.sigma()
}

pub fn curvature_source(defect: &DefectParams) -> AxialSource<f64> {
    AxialSource {
        coefficient: scalar_curvature_coefficient(defect),
        support: Support::Axis,
    }
}

/// Torsion two-form b e_z δ²(ξ¹, ξ²), in the orthonormal frame.
pub fn torsion_source(defect: &DefectParams) -> AxialSource<Vector3> {
    AxialSource {
        coefficient: burgers_vector(defect),
        support: Support::Axis,
    }
}

pub fn frank_vector(defect: &DefectParams) -> Vector3 {
    [0.0, 0.0, defect.gamma]
}

pub fn burgers_vector(defect: &DefectParams) -> Vector3 {
    [0.0, 0.0, defect.b]
}

fn check_cone(sigma: f64, r: f64) -> Result<()> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::domain(format!("sigma must be positive, got {sigma}")));
    }
    if sigma > 1.0 {
        return Err(Error::domain(format!(
            "no Euclidean cone embedding for sigma = {sigma} > 1"
        )));
    }
    if r == 0.0 {
        return Err(Error::OnAxis);
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::domain(format!("radius must be positive, got {r}")));
    }
    Ok(())
}

/// X = (σr cos θ, σr sin θ, √(1−σ²) r): the cone whose slant distance is r.
pub fn cone_embedding(sigma: f64, r: f64, theta: f64) -> Result<Vector3> {
    check_cone(sigma, r)?;
    let (s, c) = theta.sin_cos();
    Ok([sigma * r * c, sigma * r * s, (1.0 - sigma * sigma).sqrt() * r])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeCurvatures {
    pub k1: f64,
    pub k2: f64,
    pub gaussian: f64,
    pub mean: f64,
}

/// Principal curvatures of the cone: zero along the generators,
/// √(1−σ²)/(σr) around them.
pub fn principal_curvatures(sigma: f64, r: f64) -> Result<ConeCurvatures> {
    check_cone(sigma, r)?;
    let k1 = 0.0;
    let k2 = (1.0 - sigma * sigma).sqrt() / (sigma * r);
    Ok(ConeCurvatures {
        k1,
        k2,
        gaussian: k1 * k2,
        mean: 0.5 * (k1 + k2),
    })
}

/// Trapezoid rule for ∮ k_g dl around the circle of slant radius r, with
/// k_g = 1/r and dl = σr dθ. The result is 2πσ; 2π minus it is the
/// curvature concentrated at the apex.
pub fn gauss_bonnet_check(sigma: f64, r: f64, quadrature_n: usize) -> Result<f64> {
    check_cone(sigma, r)?;
    if quadrature_n == 0 {
        return Err(Error::domain("Gauss-Bonnet quadrature needs at least one node"));
    }
    let h = TAU / quadrature_n as f64;
    let integrand = |_theta: f64| (1.0 / r) * sigma * r;
    Ok((0..quadrature_n).map(|j| integrand(j as f64 * h) * h).sum())
}
