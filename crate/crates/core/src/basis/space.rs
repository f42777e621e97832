use std::sync::Arc;

use super::lagrange::eval_basis_unchecked;
use super::mesh::PeriodicMesh;
use super::quadrature::{gauss_rule, QuadratureRule};
use crate::error::{invalid, Result};
use crate::linalg::StructuredMatrix;

/// A quadrature rule together with the reference basis tabulated at its points.
#[derive(Debug, Clone)]
pub struct TabulatedRule {
    rule: QuadratureRule,
    values: Vec<Vec<f64>>,
    derivs: Vec<Vec<f64>>,
}

impl TabulatedRule {
    fn new(degree: usize, rule: QuadratureRule) -> Self {
        let (values, derivs) = rule
            .points()
            .iter()
            .map(|&t| eval_basis_unchecked(degree, t))
            .unzip();
        Self {
            rule,
            values,
            derivs,
        }
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    /// Basis values at quadrature point `q`.
    pub fn values(&self, q: usize) -> &[f64] {
        &self.values[q]
    }

    /// Reference-coordinate basis derivatives at quadrature point `q`.
    pub fn derivs(&self, q: usize) -> &[f64] {
        &self.derivs[q]
    }
}

/// Which of the space's quadrature rules to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind {
    /// `k + 2` points: exact for every bilinear-form integrand.
    Assembly,
    /// `2k + 2` points: exact for the cubic energy and nonlinear terms.
    Nonlinear,
    /// `2k + 4` points: oversampled, for analytic integrands.
    Error,
}

/// Continuous, periodic, piecewise degree-`k` Lagrange space on a uniform mesh.
///
/// Degree of freedom `c * k + j` is the value at `x_c + j h / k`; the right
/// endpoint of cell `c` is the left endpoint of cell `c + 1`.
#[derive(Debug, Clone)]
pub struct FeSpace {
    mesh: PeriodicMesh,
    degree: usize,
    n_dof: usize,
    assembly: TabulatedRule,
    nonlinear: TabulatedRule,
    error: TabulatedRule,
    ref_mass: Vec<Vec<f64>>,
    ref_convection: Vec<Vec<f64>>,
}

impl FeSpace {
    pub fn new(mesh: PeriodicMesh, degree: usize) -> Result<Arc<Self>> {
        if degree == 0 {
            return invalid("finite element degree must be at least 1");
        }
        let k = degree;
        let assembly = TabulatedRule::new(k, gauss_rule(k + 2)?);
        let nonlinear = TabulatedRule::new(k, gauss_rule(2 * k + 2)?);
        let error = TabulatedRule::new(k, gauss_rule(2 * k + 4)?);

        let mut ref_mass = vec![vec![0.0; k + 1]; k + 1];
        let mut ref_convection = vec![vec![0.0; k + 1]; k + 1];
        for (q, &w) in assembly.rule.weights().iter().enumerate() {
            let v = assembly.values(q);
            let d = assembly.derivs(q);
            for a in 0..=k {
                for b in 0..=k {
                    ref_mass[a][b] += w * v[a] * v[b];
                    ref_convection[a][b] += w * v[a] * d[b];
                }
            }
        }

        Ok(Arc::new(Self {
            mesh,
            degree: k,
            n_dof: k * mesh.n_cells(),
            assembly,
            nonlinear,
            error,
            ref_mass,
            ref_convection,
        }))
    }

    pub fn mesh(&self) -> &PeriodicMesh {
        &self.mesh
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn n_dof(&self) -> usize {
        self.n_dof
    }

    pub fn n_cells(&self) -> usize {
        self.mesh.n_cells()
    }

    pub fn h(&self) -> f64 {
        self.mesh.h()
    }

    pub fn rule(&self, kind: RuleKind) -> &TabulatedRule {
        match kind {
            RuleKind::Assembly => &self.assembly,
            RuleKind::Nonlinear => &self.nonlinear,
            RuleKind::Error => &self.error,
        }
    }

    /// Global index of local node `j` of cell `c`.
    #[inline]
    pub fn dof(&self, c: usize, j: usize) -> usize {
        (c * self.degree + j) % self.n_dof
    }

    /// Global nodal points, in degree-of-freedom order.
    pub fn nodes(&self) -> Vec<f64> {
        let step = self.h() / self.degree as f64;
        (0..self.n_dof)
            .map(|i| self.mesh.a() + i as f64 * step)
            .collect()
    }

    /// Reference element mass matrix `int_0^1 N_a N_b`.
    pub fn reference_mass(&self) -> &[Vec<f64>] {
        &self.ref_mass
    }

    /// Reference element convection matrix `int_0^1 N_a N_b'`.
    pub fn reference_convection(&self) -> &[Vec<f64>] {
        &self.ref_convection
    }

    fn assemble(&self, local: &[Vec<f64>], scale: f64) -> StructuredMatrix {
        let k = self.degree;
        let mut m = StructuredMatrix::zeros_periodic(self.n_dof, k);
        for c in 0..self.n_cells() {
            for a in 0..=k {
                for b in 0..=k {
                    m.add(self.dof(c, a), self.dof(c, b), scale * local[a][b]);
                }
            }
        }
        m
    }

    /// Mass matrix `(phi_i, phi_j)`.
    pub fn mass_matrix(&self) -> StructuredMatrix {
        self.assemble(&self.ref_mass, self.h())
    }

    /// Convection matrix with entries `(phi_i, phi_j')`; skew-symmetric.
    pub fn convection_matrix(&self) -> StructuredMatrix {
        self.assemble(&self.ref_convection, 1.0)
    }

    /// Load vector `(f, phi_i)` by cellwise quadrature.
    pub fn load_vector(&self, kind: RuleKind, f: impl Fn(f64) -> f64) -> Vec<f64> {
        let tab = self.rule(kind);
        let h = self.h();
        let mut b = vec![0.0; self.n_dof];
        for c in 0..self.n_cells() {
            let x0 = self.mesh.cell_start(c);
            for (q, (&t, &w)) in tab.rule.points().iter().zip(tab.rule.weights()).enumerate() {
                let fw = f(x0 + t * h) * w * h;
                for (a, v) in tab.values(q).iter().enumerate() {
                    b[self.dof(c, a)] += fw * v;
                }
            }
        }
        b
    }

    /// Load vector `(f, phi_i')` by cellwise quadrature.
    pub fn derivative_load_vector(&self, kind: RuleKind, f: impl Fn(f64) -> f64) -> Vec<f64> {
        let tab = self.rule(kind);
        let h = self.h();
        let mut b = vec![0.0; self.n_dof];
        for c in 0..self.n_cells() {
            let x0 = self.mesh.cell_start(c);
            for (q, (&t, &w)) in tab.rule.points().iter().zip(tab.rule.weights()).enumerate() {
                // the 1/h of the physical derivative cancels the Jacobian h
                let fw = f(x0 + t * h) * w;
                for (a, d) in tab.derivs(q).iter().enumerate() {
                    b[self.dof(c, a)] += fw * d;
                }
            }
        }
        b
    }

    /// Load vector `(g(u, u_x, x), phi_i)` for the FE function with the given
    /// coefficients, by cellwise quadrature.
    pub fn fe_load_vector(
        &self,
        kind: RuleKind,
        coeffs: &[f64],
        g: impl Fn(f64, f64, f64) -> f64,
    ) -> Vec<f64> {
        let tab = self.rule(kind);
        let nq = tab.rule.len();
        let h = self.h();
        let mut vals = vec![0.0; nq];
        let mut ders = vec![0.0; nq];
        let mut b = vec![0.0; self.n_dof];
        for c in 0..self.n_cells() {
            self.cell_values(kind, coeffs, c, &mut vals, &mut ders);
            let x0 = self.mesh.cell_start(c);
            for q in 0..nq {
                let t = tab.rule.points()[q];
                let gw = g(vals[q], ders[q], x0 + t * h) * tab.rule.weights()[q] * h;
                for (a, v) in tab.values(q).iter().enumerate() {
                    b[self.dof(c, a)] += gw * v;
                }
            }
        }
        b
    }

    /// `sum_cells int g(u, v)` for two FE functions given by coefficients.
    pub fn integrate_fe_pair(
        &self,
        kind: RuleKind,
        u: &[f64],
        v: &[f64],
        g: impl Fn(f64, f64) -> f64,
    ) -> f64 {
        let tab = self.rule(kind);
        let nq = tab.rule.len();
        let (mut uv, mut vv, mut scratch) = (vec![0.0; nq], vec![0.0; nq], vec![0.0; nq]);
        let mut total = 0.0;
        for c in 0..self.n_cells() {
            self.cell_values(kind, u, c, &mut uv, &mut scratch);
            self.cell_values(kind, v, c, &mut vv, &mut scratch);
            total += (0..nq)
                .map(|q| tab.rule.weights()[q] * g(uv[q], vv[q]))
                .sum::<f64>();
        }
        total * self.h()
    }

    /// Nodal values and broken derivatives of a coefficient vector at the
    /// quadrature points of cell `c`, written into the two buffers.
    pub fn cell_values(
        &self,
        kind: RuleKind,
        coeffs: &[f64],
        c: usize,
        vals: &mut [f64],
        ders: &mut [f64],
    ) {
        let tab = self.rule(kind);
        let inv_h = 1.0 / self.h();
        for q in 0..tab.rule.len() {
            let mut v = 0.0;
            let mut d = 0.0;
            for (a, (bv, bd)) in tab.values(q).iter().zip(tab.derivs(q)).enumerate() {
                let u = coeffs[self.dof(c, a)];
                v += u * bv;
                d += u * bd;
            }
            vals[q] = v;
            ders[q] = d * inv_h;
        }
    }

    /// `sum_cells int g(u, u_x, x)` for the FE function with the given coefficients.
    pub fn integrate_fe(
        &self,
        kind: RuleKind,
        coeffs: &[f64],
        g: impl Fn(f64, f64, f64) -> f64,
    ) -> f64 {
        let tab = self.rule(kind);
        let nq = tab.rule.len();
        let h = self.h();
        let mut vals = vec![0.0; nq];
        let mut ders = vec![0.0; nq];
        let mut total = 0.0;
        for c in 0..self.n_cells() {
            self.cell_values(kind, coeffs, c, &mut vals, &mut ders);
            let x0 = self.mesh.cell_start(c);
            let mut cell = 0.0;
            for q in 0..nq {
                let x = x0 + tab.rule.points()[q] * h;
                cell += tab.rule.weights()[q] * g(vals[q], ders[q], x);
            }
            total += cell * h;
        }
        total
    }
}

/// Element of an [`FeSpace`], stored by its nodal coefficients.
#[derive(Debug, Clone)]
pub struct FeFunction {
    space: Arc<FeSpace>,
    coeffs: Vec<f64>,
}

impl FeFunction {
    pub fn new(space: Arc<FeSpace>, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != space.n_dof() {
            return invalid(format!(
                "coefficient vector has length {}, space has {} dofs",
                coeffs.len(),
                space.n_dof()
            ));
        }
        Ok(Self { space, coeffs })
    }

    pub fn zero(space: Arc<FeSpace>) -> Self {
        let n = space.n_dof();
        Self {
            space,
            coeffs: vec![0.0; n],
        }
    }

    pub fn space(&self) -> &Arc<FeSpace> {
        &self.space
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    fn local(&self, x: f64) -> (usize, Vec<f64>, Vec<f64>) {
        let (c, t) = self.space.mesh().locate(x);
        let (v, d) = eval_basis_unchecked(self.space.degree(), t);
        (c, v, d)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (c, v, _) = self.local(x);
        v.iter()
            .enumerate()
            .map(|(a, b)| b * self.coeffs[self.space.dof(c, a)])
            .sum()
    }

    /// Derivative inside the containing cell (right limit at mesh nodes).
    pub fn eval_derivative(&self, x: f64) -> f64 {
        let (c, _, d) = self.local(x);
        d.iter()
            .enumerate()
            .map(|(a, b)| b * self.coeffs[self.space.dof(c, a)])
            .sum::<f64>()
            / self.space.h()
    }

    pub fn l2_norm(&self) -> f64 {
        self.space
            .integrate_fe(RuleKind::Nonlinear, &self.coeffs, |u, _, _| u * u)
            .sqrt()
    }

    /// L2 norm of the broken derivative.
    pub fn h1_seminorm(&self) -> f64 {
        self.space
            .integrate_fe(RuleKind::Nonlinear, &self.coeffs, |_, ux, _| ux * ux)
            .sqrt()
    }

    /// `(self, other)` in L2.
    pub fn inner(&self, other: &FeFunction) -> f64 {
        let s = &self.space;
        let nq = s.rule(RuleKind::Nonlinear).rule().len();
        let mut a = vec![0.0; nq];
        let mut b = vec![0.0; nq];
        let mut d = vec![0.0; nq];
        let w = s.rule(RuleKind::Nonlinear).rule().weights();
        let mut total = 0.0;
        for c in 0..s.n_cells() {
            s.cell_values(RuleKind::Nonlinear, &self.coeffs, c, &mut a, &mut d);
            s.cell_values(RuleKind::Nonlinear, &other.coeffs, c, &mut b, &mut d);
            total += (0..nq).map(|q| w[q] * a[q] * b[q]).sum::<f64>();
        }
        total * s.h()
    }
}

/// Nodal interpolant of `f`: on each cell, the degree-`k` polynomial through
/// the `k + 1` uniform nodes.
pub fn interpolate(space: &Arc<FeSpace>, f: impl Fn(f64) -> f64) -> FeFunction {
    let coeffs = space.nodes().into_iter().map(f).collect();
    FeFunction {
        space: Arc::clone(space),
        coeffs,
    }
}

/// `||g - f||` and, when `f_deriv` is given, `||g' - f'||` with the broken
/// derivative of `g`. Uses the oversampled rule of the space.
pub fn l2_norm_error(
    g: &FeFunction,
    f: impl Fn(f64) -> f64,
    f_deriv: Option<&dyn Fn(f64) -> f64>,
) -> (f64, Option<f64>) {
    let s = g.space();
    let l2 = s
        .integrate_fe(RuleKind::Error, g.coeffs(), |u, _, x| (u - f(x)).powi(2))
        .sqrt();
    let h1 = f_deriv.map(|fd| {
        s.integrate_fe(RuleKind::Error, g.coeffs(), |_, ux, x| (ux - fd(x)).powi(2))
            .sqrt()
    });
    (l2, h1)
}
