//! Shared helpers: seeded random structured systems and dense oracles.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_rational::Ratio;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rlwfem::linalg::{BlockSystem, SolverPath, StructuredMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn dense(m: &StructuredMatrix) -> DMatrix<f64> {
    let rows = m.to_dense();
    DMatrix::from_fn(m.n(), m.n(), |i, j| rows[i][j])
}

/// Random periodic band of half-width `p`, diagonally dominant when `dominant`.
pub fn random_banded(r: &mut ChaCha8Rng, n: usize, p: usize, dominant: bool) -> StructuredMatrix {
    let mut m = StructuredMatrix::zeros_periodic(n, p);
    for i in 0..n {
        for off in 1..=p.min(n / 2) {
            let j = (i + off) % n;
            if j != i && m.get(i, j) == 0.0 {
                m.add(i, j, r.gen_range(-1.0..1.0));
            }
            let j = (i + n - off) % n;
            if j != i && m.get(i, j) == 0.0 {
                m.add(i, j, r.gen_range(-1.0..1.0));
            }
        }
        let d = if dominant {
            4.0 * (2 * p + 1) as f64
        } else {
            0.0
        };
        m.add(i, i, d + r.gen_range(-1.0..1.0));
    }
    m
}

/// Random circulant of half-width `p`.
pub fn random_circulant(
    r: &mut ChaCha8Rng,
    n: usize,
    p: usize,
    dominant: bool,
) -> StructuredMatrix {
    let mut row = vec![0.0; n];
    for off in 1..=p.min(n / 2) {
        row[off] = r.gen_range(-1.0..1.0);
        row[n - off] = r.gen_range(-1.0..1.0);
    }
    row[0] = if dominant {
        4.0 * (2 * p + 1) as f64
    } else {
        0.0
    } + r.gen_range(-1.0..1.0);
    StructuredMatrix::circulant(row)
}

pub fn random_vec(r: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| r.gen_range(-1.0..1.0)).collect()
}

/// Max abs difference between `block.solve` and a dense LU solve of the
/// assembled `[[A, B], [B, A]]`.
pub fn block_vs_dense(block: &BlockSystem, z1: &[f64], z2: &[f64]) -> f64 {
    let n = block.n();
    let a = dense(block.a());
    let b = dense(block.b());
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(&a);
    m.view_mut((n, n), (n, n)).copy_from(&a);
    m.view_mut((0, n), (n, n)).copy_from(&b);
    m.view_mut((n, 0), (n, n)).copy_from(&b);
    let rhs = DVector::from_iterator(2 * n, z1.iter().chain(z2).copied());
    let sol = m.lu().solve(&rhs).expect("dense oracle is nonsingular");
    let (x, y) = block.solve(z1, z2);
    x.iter()
        .chain(&y)
        .zip(sol.iter())
        .fold(0.0, |acc, (p, q)| acc.max((p - q).abs()))
}

/// Random block systems on both solver paths, `k <= 4`, `N <= 64`; returns the
/// largest deviation from dense LU over all trials.
pub fn structured_solver_sweep(seed: u64, trials: usize) -> f64 {
    let mut r = rng(seed);
    let mut worst = 0.0f64;
    for t in 0..trials {
        let k = 1 + t % 4;
        let n = r.gen_range(3..=64);
        let fourier = t % 2 == 0;
        let block = if fourier {
            let a = random_circulant(&mut r, n, k, true);
            let b = random_circulant(&mut r, n, k, false);
            BlockSystem::new(a, b, SolverPath::Fourier).unwrap()
        } else {
            let a = random_banded(&mut r, k * n, k, true);
            let b = random_banded(&mut r, k * n, k, false);
            BlockSystem::new(a, b, SolverPath::Banded).unwrap()
        };
        let m = block.n();
        let z1 = random_vec(&mut r, m);
        let z2 = random_vec(&mut r, m);
        worst = worst.max(block_vs_dense(&block, &z1, &z2));
    }
    worst
}

/// Monomial coefficients of the degree-`k` polynomial `p` with `p(0) = 0`,
/// `p(1) = 1` and `int_0^1 p(x) x^(j+1) (1 - x) dx = 0` for `j = 0..k-2`, by
/// exact rational elimination of the moment conditions.
pub fn psi_by_orthogonality(k: usize) -> Vec<f64> {
    type Q = Ratio<i128>;
    let dim = k + 1;
    let mut m = vec![vec![Q::from_integer(0); dim + 1]; dim];
    m[0][0] = Q::from_integer(1);
    for c in 0..dim {
        m[1][c] = Q::from_integer(1);
    }
    m[1][dim] = Q::from_integer(1);
    for j in 0..k.saturating_sub(1) {
        for c in 0..dim {
            // int x^(c+j+1) (1-x) = 1/((c+j+2)(c+j+3))
            let s = (c + j) as i128;
            m[2 + j][c] = Q::new(1, (s + 2) * (s + 3));
        }
    }
    for col in 0..dim {
        let piv = (col..dim)
            .find(|&r| m[r][col] != Q::from_integer(0))
            .expect("nonsingular");
        m.swap(col, piv);
        let p = m[col][col];
        for v in m[col].iter_mut() {
            *v /= p;
        }
        for r in 0..dim {
            if r != col && m[r][col] != Q::from_integer(0) {
                let f = m[r][col];
                let pivot_row = m[col].clone();
                for (v, q) in m[r].iter_mut().zip(&pivot_row) {
                    *v -= f * q;
                }
            }
        }
    }
    m.iter()
        .map(|row| *row[dim].numer() as f64 / *row[dim].denom() as f64)
        .collect()
}

pub fn poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, ci| acc * x + ci)
}

pub fn poly_prime(c: &[f64], x: f64) -> f64 {
    c.iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(0.0, |acc, (i, ci)| acc * x + i as f64 * ci)
}
