//! Quadrature, summation and eigenvalue kernels shared by the physics modules.

mod gauss_laguerre;
mod quadrature;
mod summation;
mod tridiagonal;

pub use gauss_laguerre::GaussLaguerre;
pub use quadrature::{Integrand, Quadrature};
pub use summation::pairwise_sum;
pub use tridiagonal::SymTridiagonal;
