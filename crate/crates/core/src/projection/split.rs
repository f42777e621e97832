//! Splitting of an odd-degree Lagrange space into node-value functions
//! `l_i` (built from `psi`) and bubbles `q_{c,m}` vanishing at every node.
//!
//! Conventions (0-based): `l_i` is centred at node `x_i`; on the cell to its
//! left it equals `psi((x - x_{i-1}) / h)`, on the cell to its right
//! `psi((x_{i+1} - x) / h)`. The bubble `q_{c,m}` is supported on cell
//! `c = [x_c, x_{c+1}]` and equals `phi_m((x - x_c) / h)` there.

use std::sync::Arc;

use crate::basis::{bubble_basis, FeFunction, FeSpace, PeriodicMesh, PsiPolynomial, RuleKind};
use crate::error::{invalid, FemError, Result};
use crate::linalg::{Factorization, StructuredMatrix};

const ORTHOGONALITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct SplitBasis {
    space: Arc<FeSpace>,
    psi: PsiPolynomial,
    /// Local nodal values of `psi(t)` (rising half of `l_{c+1}` on cell `c`).
    rising: Vec<f64>,
    /// Local nodal values of `psi(1 - t)` (falling half of `l_c` on cell `c`).
    falling: Vec<f64>,
    /// Local nodal values of each bubble, `bubbles[m - 1][j]`.
    bubbles: Vec<Vec<f64>>,
    gram: StructuredMatrix,
    gram_factor: Factorization,
}

fn local_inner(space: &FeSpace, f: &[f64], g: &[f64]) -> f64 {
    let m = space.reference_mass();
    let mut s = 0.0;
    for (a, fa) in f.iter().enumerate() {
        for (b, gb) in g.iter().enumerate() {
            s += fa * m[a][b] * gb;
        }
    }
    s * space.h()
}

impl SplitBasis {
    /// Builds the splitting and checks its defining properties.
    pub fn new(space: &Arc<FeSpace>) -> Result<Self> {
        let k = space.degree();
        if k % 2 == 0 {
            return invalid(format!("split basis requires odd degree, got {k}"));
        }
        let n = space.n_cells();
        if n < 2 {
            return invalid("split basis needs at least two cells");
        }
        let psi = PsiPolynomial::new(k)?;
        let t = |j: usize| j as f64 / k as f64;
        let rising: Vec<f64> = (0..=k).map(|j| psi.value(t(j))).collect();
        let falling: Vec<f64> = (0..=k).map(|j| psi.value(1.0 - t(j))).collect();
        let bubbles: Vec<Vec<f64>> = (1..k)
            .map(|m| (0..=k).map(|j| bubble_basis(k, m, t(j))).collect())
            .collect::<Result<_>>()?;

        for (m, q) in bubbles.iter().enumerate() {
            for half in [&rising, &falling] {
                let v = local_inner(space, half, q);
                if v.abs() > ORTHOGONALITY_TOL {
                    return Err(FemError::SplitBasis(format!(
                        "(l, q_m) = {v:e} for bubble m = {}",
                        m + 1
                    )));
                }
            }
            if q[0] != 0.0 || q[k] != 0.0 {
                return Err(FemError::SplitBasis(
                    "bubble does not vanish at nodes".into(),
                ));
            }
        }

        let diag = local_inner(space, &rising, &rising) + local_inner(space, &falling, &falling);
        let off = local_inner(space, &falling, &rising);
        let mut gram = StructuredMatrix::zeros_periodic(n, 1);
        for i in 0..n {
            gram.add(i, i, diag);
            if n == 2 {
                // both neighbours coincide
                gram.add(i, (i + 1) % n, 2.0 * off);
            } else {
                gram.add(i, (i + 1) % n, off);
                gram.add(i, (i + n - 1) % n, off);
            }
        }
        let gram_factor = gram.factor()?;
        Ok(Self {
            space: Arc::clone(space),
            psi,
            rising,
            falling,
            bubbles,
            gram,
            gram_factor,
        })
    }

    pub fn space(&self) -> &Arc<FeSpace> {
        &self.space
    }

    /// `l_i` as an element of the space.
    pub fn ell(&self, i: usize) -> FeFunction {
        let s = &self.space;
        let k = s.degree();
        let n = s.n_cells();
        let mut c = vec![0.0; s.n_dof()];
        let left = (i + n - 1) % n;
        for j in 0..=k {
            c[s.dof(left, j)] += self.rising[j];
        }
        for j in 0..=k {
            c[s.dof(i % n, j)] += self.falling[j];
        }
        // node i was visited twice
        c[s.dof(i % n, 0)] = 1.0;
        FeFunction::new(Arc::clone(s), c).expect("length matches")
    }

    /// Bubble `q_{c,m}`, `m` in `1..k`.
    pub fn bubble(&self, cell: usize, m: usize) -> FeFunction {
        let s = &self.space;
        let mut c = vec![0.0; s.n_dof()];
        for (j, v) in self.bubbles[m - 1].iter().enumerate() {
            c[s.dof(cell, j)] += v;
        }
        FeFunction::new(Arc::clone(s), c).expect("length matches")
    }

    /// Gram matrix `(l_j, l_i)`.
    pub fn ell_gram(&self) -> &StructuredMatrix {
        &self.gram
    }

    /// `b_i = (u, l_i)` by oversampled quadrature.
    pub fn ell_loads(&self, u: impl Fn(f64) -> f64) -> Vec<f64> {
        let s = &self.space;
        let n = s.n_cells();
        let h = s.h();
        let rule = s.rule(RuleKind::Error).rule();
        let mut b = vec![0.0; n];
        for c in 0..n {
            let x0 = s.mesh().cell_start(c);
            let (mut fall, mut rise) = (0.0, 0.0);
            for (&t, &w) in rule.points().iter().zip(rule.weights()) {
                let uw = u(x0 + t * h) * w;
                rise += uw * self.psi.value(t);
                fall += uw * self.psi.value(1.0 - t);
            }
            b[c] += fall * h;
            b[(c + 1) % n] += rise * h;
        }
        b
    }

    /// Coefficients `d` of `pi_1 u = sum_i d_i l_i`.
    pub fn pi1_coefficients(&self, u: impl Fn(f64) -> f64) -> Vec<f64> {
        self.gram_factor.solve(&self.ell_loads(u))
    }

    /// `beta_i = (pi_1 u - u, l_i)` restricted to the cell left of node `i`.
    pub fn pi1_cell_residuals(&self, u: impl Fn(f64) -> f64) -> Vec<f64> {
        let d = self.pi1_coefficients(&u);
        let s = &self.space;
        let n = s.n_cells();
        let h = s.h();
        let rule = s.rule(RuleKind::Error).rule();
        (0..n)
            .map(|i| {
                let c = (i + n - 1) % n;
                let x0 = s.mesh().cell_start(c);
                rule.points()
                    .iter()
                    .zip(rule.weights())
                    .map(|(&t, &w)| {
                        let up = self.psi.value(t);
                        let pi1 = d[c] * self.psi.value(1.0 - t) + d[i] * up;
                        w * (pi1 - u(x0 + t * h)) * up
                    })
                    .sum::<f64>()
                    * h
            })
            .collect()
    }

    /// `(pi_1 u)(x_i) - u(x_i)` at every mesh node.
    pub fn pi1_nodal_errors(&self, u: impl Fn(f64) -> f64) -> Vec<f64> {
        let d = self.pi1_coefficients(&u);
        let mesh = self.space.mesh();
        d.iter()
            .enumerate()
            .map(|(i, di)| di - u(mesh.node(i as i64)))
            .collect()
    }
}

/// Closed-form eigenvalues of the `l`-basis Gram matrix,
/// `2h / (k(k+1)(k+2)) * (k + 1 + cos(2 pi m / N))` for `m = 1..=N`.
pub fn gram_eigenvalues_s1(k: usize, mesh: &PeriodicMesh) -> Result<Vec<f64>> {
    if k % 2 == 0 {
        return invalid(format!("eigenvalue formula holds for odd degree, got {k}"));
    }
    let kf = k as f64;
    let n = mesh.n_cells();
    let scale = 2.0 * mesh.h() / (kf * (kf + 1.0) * (kf + 2.0));
    Ok((1..=n)
        .map(|m| scale * (kf + 1.0 + (2.0 * std::f64::consts::PI * m as f64 / n as f64).cos()))
        .collect())
}
