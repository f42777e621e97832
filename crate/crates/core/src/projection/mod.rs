//! The L2 projection onto a Lagrange space, projections of derivatives, and
//! the node-value / bubble splitting used to check the odd-degree
//! super-approximation property.

mod split;

use std::sync::Arc;

pub use split::{gram_eigenvalues_s1, SplitBasis};

use crate::basis::{FeFunction, FeSpace, RuleKind};
use crate::error::{invalid, Result};
use crate::linalg::{Factorization, StructuredMatrix};

/// Factored mass (Gram) matrix `(phi_j, phi_i)` of a space.
#[derive(Debug, Clone)]
pub struct GramOperator {
    space: Arc<FeSpace>,
    matrix: StructuredMatrix,
    factor: Factorization,
}

impl GramOperator {
    /// Assemble and factor. Linear elements get the FFT circulant path.
    pub fn new(space: &Arc<FeSpace>) -> Result<Self> {
        let mass = space.mass_matrix();
        let matrix = match (space.degree(), mass.as_circulant(1e-14)) {
            (1, Some(row)) => StructuredMatrix::circulant(row),
            _ => mass,
        };
        let factor = matrix.factor()?;
        Ok(Self {
            space: Arc::clone(space),
            matrix,
            factor,
        })
    }

    pub fn space(&self) -> &Arc<FeSpace> {
        &self.space
    }

    pub fn matrix(&self) -> &StructuredMatrix {
        &self.matrix
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        self.factor.solve(rhs)
    }

    /// The FE function whose Gram system has right-hand side `rhs`.
    pub fn project_load(&self, rhs: &[f64]) -> Result<FeFunction> {
        if rhs.len() != self.space.n_dof() {
            return invalid("load vector length does not match the space");
        }
        FeFunction::new(Arc::clone(&self.space), self.solve(rhs))
    }

    /// `P f`: solves `A c = b` with `b_i = (f, phi_i)` by oversampled quadrature.
    pub fn l2_project(&self, f: impl Fn(f64) -> f64) -> FeFunction {
        let b = self.space.load_vector(RuleKind::Error, f);
        FeFunction::new(Arc::clone(&self.space), self.solve(&b)).expect("length matches")
    }

    /// Right-hand side `(g_x, phi_i)` for an FE function, exact cell by cell.
    pub fn derivative_load(&self, g: &[f64]) -> Vec<f64> {
        let s = &self.space;
        let k = s.degree();
        let conv = s.reference_convection();
        let mut b = vec![0.0; s.n_dof()];
        for c in 0..s.n_cells() {
            for a in 0..=k {
                let v: f64 = (0..=k).map(|j| conv[a][j] * g[s.dof(c, j)]).sum();
                b[s.dof(c, a)] += v;
            }
        }
        b
    }

    /// `P[g_x]` with `g_x` the broken derivative of `g`.
    pub fn project_fe_derivative(&self, g: &FeFunction) -> Result<FeFunction> {
        if g.coeffs().len() != self.space.n_dof() {
            return invalid("function does not belong to this space");
        }
        self.project_load(&self.derivative_load(g.coeffs()))
    }

    /// `P[(Pu - u)_x]`. The `u` part uses `(u_x, phi_i) = -(u, phi_i')`,
    /// valid for periodic `u`.
    pub fn projected_derivative_error(&self, u: impl Fn(f64) -> f64 + Copy) -> FeFunction {
        let pu = self.l2_project(u);
        let mut b = self.derivative_load(pu.coeffs());
        let ub = self.space.derivative_load_vector(RuleKind::Error, u);
        for (bi, ui) in b.iter_mut().zip(ub) {
            *bi += ui;
        }
        FeFunction::new(Arc::clone(&self.space), self.solve(&b)).expect("length matches")
    }

    /// `||P[(Pu - u)_x]||`.
    pub fn dichotomy_norm(&self, u: impl Fn(f64) -> f64 + Copy) -> f64 {
        self.projected_derivative_error(u).l2_norm()
    }
}

/// Free-function form of [`GramOperator::l2_project`].
pub fn l2_project(gram: &GramOperator, f: impl Fn(f64) -> f64) -> FeFunction {
    gram.l2_project(f)
}

/// Free-function form of [`GramOperator::project_fe_derivative`].
pub fn project_fe_derivative(gram: &GramOperator, g: &FeFunction) -> Result<FeFunction> {
    gram.project_fe_derivative(g)
}

/// Free-function form of [`GramOperator::dichotomy_norm`].
pub fn dichotomy_norm(gram: &GramOperator, u: impl Fn(f64) -> f64 + Copy) -> f64 {
    gram.dichotomy_norm(u)
}
