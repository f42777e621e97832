//! Meshes, Lagrange bases, quadrature, and norms of finite element and
//! analytic functions.

mod lagrange;
mod mesh;
mod quadrature;
mod space;
mod special;

pub use lagrange::eval_basis;
pub use mesh::PeriodicMesh;
pub use quadrature::{gauss_rule, QuadratureRule};
pub use space::{interpolate, l2_norm_error, FeFunction, FeSpace, RuleKind, TabulatedRule};
pub use special::{bubble_basis, psi, psi_prime, PsiPolynomial};
