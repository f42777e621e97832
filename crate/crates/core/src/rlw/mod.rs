//! Mixed Galerkin semi-discretization of the regularized long wave equation
//! `u_t + u_x + u u_x - u_xxt = f`.
//!
//! Unknowns are `u~` and `w~ = P[u~_x]`; the flux `z~ = P[u~ + u~^2 / 2]` is
//! eliminated by a Gram solve. Tested against `chi = phi_i` the two equations
//! read
//!
//! ```text
//! A u' + B^T w' = B^T z + (f, phi_i)
//! B^T u' + A w' = 0
//! ```
//!
//! with `A_ij = (phi_i, phi_j)` and `B_ij = (phi_i, phi_j')`. The second row is
//! `(u~_xt - w~_t, phi_i) = 0` multiplied by `-1`, using `B^T = -B`.

mod manufactured;

use std::fmt;
use std::sync::Arc;

pub use manufactured::{manufactured_forcing, manufactured_solution, manufactured_solution_dx};

use crate::basis::{FeFunction, FeSpace, RuleKind};
use crate::error::{invalid, Result};
use crate::linalg::{BlockSystem, SolverPath, StructuredMatrix};
use crate::projection::GramOperator;

/// Space-time source term `f(x, t)`.
pub type Forcing = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Mass, impulse and energy of a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Invariants {
    pub mass: f64,
    pub impulse: f64,
    pub energy: f64,
}

#[derive(Debug, Clone)]
pub struct RlwState {
    pub u: FeFunction,
    pub w: FeFunction,
    pub t: f64,
}

impl RlwState {
    /// `u = P U0` and `w = P[(P U0)_x]`, so that `w = P[u_x]` holds exactly.
    pub fn from_initial(sys: &RlwSystem, u0: impl Fn(f64) -> f64) -> Result<Self> {
        let u = sys.gram.l2_project(u0);
        let w = sys.gram.project_fe_derivative(&u)?;
        Ok(Self { u, w, t: 0.0 })
    }

    /// `u = P U0` and `w = P[U0']` from the analytic derivative.
    pub fn from_initial_with_derivative(
        sys: &RlwSystem,
        u0: impl Fn(f64) -> f64,
        du0: impl Fn(f64) -> f64,
    ) -> Self {
        Self {
            u: sys.gram.l2_project(u0),
            w: sys.gram.l2_project(du0),
            t: 0.0,
        }
    }

    /// State with the given coefficient vectors.
    pub fn from_coeffs(sys: &RlwSystem, u: Vec<f64>, w: Vec<f64>, t: f64) -> Result<Self> {
        Ok(Self {
            u: FeFunction::new(Arc::clone(&sys.space), u)?,
            w: FeFunction::new(Arc::clone(&sys.space), w)?,
            t,
        })
    }

    pub fn zero(sys: &RlwSystem) -> Self {
        Self {
            u: FeFunction::zero(Arc::clone(&sys.space)),
            w: FeFunction::zero(Arc::clone(&sys.space)),
            t: 0.0,
        }
    }

    /// `self + alpha (du, dw)` at time `t`.
    pub fn axpy(&self, alpha: f64, du: &[f64], dw: &[f64], t: f64) -> Self {
        let mut next = self.clone();
        for (c, d) in next.u.coeffs_mut().iter_mut().zip(du) {
            *c += alpha * d;
        }
        for (c, d) in next.w.coeffs_mut().iter_mut().zip(dw) {
            *c += alpha * d;
        }
        next.t = t;
        next
    }
}

/// Assembled and factored mixed system.
#[derive(Clone)]
pub struct RlwSystem {
    space: Arc<FeSpace>,
    gram: GramOperator,
    /// `B^T`, entries `(phi_j, phi_i')`.
    conv_t: StructuredMatrix,
    block: BlockSystem,
    forcing: Option<Forcing>,
}

impl fmt::Debug for RlwSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RlwSystem")
            .field("degree", &self.space.degree())
            .field("n_dof", &self.space.n_dof())
            .field("fourier", &self.block.uses_fourier())
            .field("forced", &self.forcing.is_some())
            .finish()
    }
}

/// Assemble `A`, `B` and factor the block matrix. Linear elements use the
/// FFT path under [`SolverPath::Auto`].
pub fn assemble_rlw(
    space: &Arc<FeSpace>,
    forcing: Option<Forcing>,
    path: SolverPath,
) -> Result<RlwSystem> {
    let gram = GramOperator::new(space)?;
    let mut a = space.mass_matrix();
    let mut conv_t = space.convection_matrix().transpose();
    if space.degree() == 1 && path != SolverPath::Banded {
        if let (Some(ra), Some(rb)) = (a.as_circulant(1e-14), conv_t.as_circulant(1e-14)) {
            a = StructuredMatrix::circulant(ra);
            conv_t = StructuredMatrix::circulant(rb);
        }
    }
    let block = BlockSystem::new(a, conv_t.clone(), path)?;
    Ok(RlwSystem {
        space: Arc::clone(space),
        gram,
        conv_t,
        block,
        forcing,
    })
}

impl RlwSystem {
    pub fn space(&self) -> &Arc<FeSpace> {
        &self.space
    }

    pub fn gram(&self) -> &GramOperator {
        &self.gram
    }

    pub fn block(&self) -> &BlockSystem {
        &self.block
    }

    pub fn is_forced(&self) -> bool {
        self.forcing.is_some()
    }

    /// Coefficients of `z~ = P[u~ + u~^2 / 2]`.
    pub fn flux(&self, u: &[f64]) -> Vec<f64> {
        let b = self
            .space
            .fe_load_vector(RuleKind::Nonlinear, u, |v, _, _| v + 0.5 * v * v);
        self.gram.solve(&b)
    }

    /// Right-hand side of the first block row at time `t`.
    pub fn load(&self, u: &[f64], t: f64) -> Vec<f64> {
        let mut f = self.conv_t.matvec(&self.flux(u));
        if let Some(src) = &self.forcing {
            let fl = self.space.load_vector(RuleKind::Error, |x| src(x, t));
            for (a, b) in f.iter_mut().zip(fl) {
                *a += b;
            }
        }
        f
    }

    /// Time derivative `(du, dw)` of the coefficient vectors.
    pub fn ode_rhs(&self, y: &RlwState) -> Result<(Vec<f64>, Vec<f64>)> {
        if y.u.coeffs().len() != self.space.n_dof() || y.w.coeffs().len() != self.space.n_dof() {
            return invalid("state does not belong to the system's space");
        }
        let f = self.load(y.u.coeffs(), y.t);
        Ok(self.block.solve(&f, &vec![0.0; f.len()]))
    }

    /// `(M, I, E)` by the nonlinear quadrature rule.
    pub fn functionals(&self, y: &RlwState) -> Invariants {
        functionals(y)
    }
}

/// Mass `int u`, impulse `1/2 int (u^2 + u_x^2)` with the broken derivative,
/// and energy `1/2 int (u^2 + u^3 / 3)`.
pub fn functionals(y: &RlwState) -> Invariants {
    let s = y.u.space();
    let c = y.u.coeffs();
    Invariants {
        mass: s.integrate_fe(RuleKind::Nonlinear, c, |u, _, _| u),
        impulse: 0.5 * s.integrate_fe(RuleKind::Nonlinear, c, |u, ux, _| u * u + ux * ux),
        energy: energy(s, c),
    }
}

/// Energy of a coefficient vector.
pub fn energy(space: &FeSpace, u: &[f64]) -> f64 {
    0.5 * space.integrate_fe(RuleKind::Nonlinear, u, |u, _, _| u * u * (1.0 + u / 3.0))
}
