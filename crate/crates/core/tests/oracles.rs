//! Independent dense oracles for the structured code paths.

mod common;

use std::f64::consts::PI;
use std::sync::Arc;

use common::*;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rlwfem::basis::{eval_basis, gauss_rule, FeSpace, PeriodicMesh, PsiPolynomial};
use rlwfem::linalg::SolverPath;
use rlwfem::projection::{gram_eigenvalues_s1, SplitBasis};
use rlwfem::rlw::{assemble_rlw, RlwState};

#[test]
fn psi_matches_orthogonality_definition() {
    for k in 1..=8 {
        let c = psi_by_orthogonality(k);
        let psi = PsiPolynomial::new(k).unwrap();
        for i in 0..=20 {
            let x = i as f64 / 20.0;
            assert!((psi.value(x) - poly(&c, x)).abs() < 1e-12, "k={k} x={x}");
            assert!(
                (psi.derivative(x) - poly_prime(&c, x)).abs() < 1e-10,
                "k={k} x={x}"
            );
        }
    }
}

#[test]
fn psi_cubic_by_symbolic_expansion() {
    // d^2/dx^2 [x^4 (1-x)^3] / (3! x (1-x)) = 7x^3 - 8x^2 + 2x, expanded symbolically
    let psi = PsiPolynomial::new(3).unwrap();
    for i in 0..=10 {
        let x = i as f64 / 10.0;
        let expect = 7.0 * x.powi(3) - 8.0 * x * x + 2.0 * x;
        assert!((psi.value(x) - expect).abs() < 1e-14);
    }
    assert!((psi.value(0.5) + 0.125).abs() < 1e-15);
}

#[test]
fn even_degree_expansion_is_minus_the_closed_form() {
    // k = 2: d/dx [x^3 (1-x)^2] / (2! x (1-x)) = -5x^2/2 + 3x/2
    let psi = PsiPolynomial::new(2).unwrap();
    for i in 0..=10 {
        let x = i as f64 / 10.0;
        assert!((psi.value(x) - (2.5 * x * x - 1.5 * x)).abs() < 1e-15);
    }
}

#[test]
fn gram_eigenvalues_match_dense_eigensolve() {
    for (k, n) in [(1, 8), (3, 8), (5, 8), (3, 5), (7, 6)] {
        let space = FeSpace::new(PeriodicMesh::unit(n).unwrap(), k).unwrap();
        let split = SplitBasis::new(&space).unwrap();
        let g = dense(split.ell_gram());
        let mut numeric: Vec<f64> = SymmetricEigen::new(g).eigenvalues.iter().copied().collect();
        let mut formula = gram_eigenvalues_s1(k, space.mesh()).unwrap();
        numeric.sort_by(f64::total_cmp);
        formula.sort_by(f64::total_cmp);
        for (a, b) in numeric.iter().zip(&formula) {
            assert!((a - b).abs() < 1e-10, "k={k} N={n}: {a} vs {b}");
        }
    }
}

#[test]
fn ell_gram_matches_quadrature_of_basis_functions() {
    let space = FeSpace::new(PeriodicMesh::unit(6).unwrap(), 3).unwrap();
    let split = SplitBasis::new(&space).unwrap();
    let ells: Vec<_> = (0..6).map(|i| split.ell(i)).collect();
    for i in 0..6 {
        for j in 0..6 {
            let q = ells[i].inner(&ells[j]);
            assert!((q - split.ell_gram().get(i, j)).abs() < 1e-14, "({i},{j})");
        }
    }
}

#[test]
fn structured_solvers_match_dense_lu() {
    assert!(structured_solver_sweep(7, 60) <= 1e-10);
}

#[test]
fn fe_blocks_match_dense_lu() {
    let mut r = rng(11);
    for k in 1..=4 {
        for n in [3, 8, 17, 64] {
            let space = FeSpace::new(PeriodicMesh::unit(n).unwrap(), k).unwrap();
            for path in [SolverPath::Auto, SolverPath::Banded] {
                let sys = assemble_rlw(&space, None, path).unwrap();
                let z1 = random_vec(&mut r, k * n);
                let z2 = random_vec(&mut r, k * n);
                // FE blocks scale like h, so compare relative to the solution size
                let d = block_vs_dense(sys.block(), &z1, &z2);
                let (x, _) = sys.block().solve(&z1, &z2);
                let scale = x.iter().fold(1.0f64, |m, v| m.max(v.abs()));
                assert!(d <= 1e-10 * scale, "k={k} N={n} {path:?}: {d}");
            }
        }
    }
}

/// Right-hand side of the mixed system rebuilt from scratch: element loops
/// with the raw Lagrange basis, dense matrices, and LU solves.
fn dense_rhs(space: &Arc<FeSpace>, u: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let k = space.degree();
    let n_dof = space.n_dof();
    let h = space.h();
    let rule = gauss_rule(3 * k + 2).unwrap();
    let mut a = DMatrix::<f64>::zeros(n_dof, n_dof);
    let mut bt = DMatrix::<f64>::zeros(n_dof, n_dof);
    let mut load = DVector::<f64>::zeros(n_dof);
    for c in 0..space.n_cells() {
        let dofs: Vec<usize> = (0..=k).map(|j| (c * k + j) % n_dof).collect();
        for (&t, &w) in rule.points().iter().zip(rule.weights()) {
            let (v, d) = eval_basis(k, t).unwrap();
            let uq: f64 = (0..=k).map(|j| u[dofs[j]] * v[j]).sum();
            for i in 0..=k {
                load[dofs[i]] += w * h * (uq + 0.5 * uq * uq) * v[i];
                for j in 0..=k {
                    a[(dofs[i], dofs[j])] += w * h * v[i] * v[j];
                    // (phi_j, phi_i') = int phi_j phi_i' dx, d/dx = d/dt / h
                    bt[(dofs[i], dofs[j])] += w * v[j] * d[i];
                }
            }
        }
    }
    let z = a.clone().lu().solve(&load).unwrap();
    let f: DVector<f64> = &bt * z;
    let mut m = DMatrix::zeros(2 * n_dof, 2 * n_dof);
    m.view_mut((0, 0), (n_dof, n_dof)).copy_from(&a);
    m.view_mut((n_dof, n_dof), (n_dof, n_dof)).copy_from(&a);
    m.view_mut((0, n_dof), (n_dof, n_dof)).copy_from(&bt);
    m.view_mut((n_dof, 0), (n_dof, n_dof)).copy_from(&bt);
    let rhs = DVector::from_iterator(
        2 * n_dof,
        f.iter().copied().chain(std::iter::repeat(0.0).take(n_dof)),
    );
    let sol = m.lu().solve(&rhs).unwrap();
    (
        sol.rows(0, n_dof).iter().copied().collect(),
        sol.rows(n_dof, n_dof).iter().copied().collect(),
    )
}

#[test]
fn ode_rhs_matches_dense_assembly() {
    let mut r = rng(3);
    for k in 1..=4 {
        for n in [4, 7] {
            let space = FeSpace::new(PeriodicMesh::unit(n).unwrap(), k).unwrap();
            let sys = assemble_rlw(&space, None, SolverPath::Auto).unwrap();
            let u = random_vec(&mut r, k * n);
            let y = RlwState::from_coeffs(&sys, u.clone(), random_vec(&mut r, k * n), 0.0).unwrap();
            let (du, dw) = sys.ode_rhs(&y).unwrap();
            let (eu, ew) = dense_rhs(&space, &u);
            let scale = eu.iter().chain(&ew).fold(1.0f64, |m, v| m.max(v.abs()));
            for (p, q) in du.iter().zip(&eu).chain(dw.iter().zip(&ew)) {
                assert!((p - q).abs() < 1e-11 * scale, "k={k} N={n}: {p} vs {q}");
            }
        }
    }
}

#[test]
fn dense_rhs_sanity_on_traveling_sine() {
    // linearized RLW: u_t = -(1 - d_xx)^{-1} u_x, so sin(2 pi x) has
    // u_t = -2 pi cos(2 pi x) / (1 + 4 pi^2) in the small-amplitude limit
    let n = 32;
    let space = FeSpace::new(PeriodicMesh::unit(n).unwrap(), 3).unwrap();
    let sys = assemble_rlw(&space, None, SolverPath::Auto).unwrap();
    let eps = 1e-6;
    let y = RlwState::from_initial(&sys, |x| eps * (2.0 * PI * x).sin()).unwrap();
    let (du, _) = sys.ode_rhs(&y).unwrap();
    for (i, x) in space.nodes().iter().enumerate() {
        let expect = -eps * 2.0 * PI * (2.0 * PI * x).cos() / (1.0 + 4.0 * PI * PI);
        assert!((du[i] - expect).abs() < 1e-5 * eps, "x={x}");
    }
}
