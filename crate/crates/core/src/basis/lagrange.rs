use crate::error::{invalid, Result};

/// Values and reference-coordinate derivatives of the `k + 1` Lagrange
/// cardinal polynomials on the uniform nodes `j / k` of `[0, 1]`.
///
/// Physical derivatives are obtained by dividing `derivs` by the cell width.
pub fn eval_basis(k: usize, t: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if k == 0 {
        return invalid("Lagrange basis degree must be at least 1");
    }
    if !(0.0..=1.0).contains(&t) {
        return invalid(format!("reference coordinate {t} outside [0, 1]"));
    }
    Ok(eval_basis_unchecked(k, t))
}

pub(crate) fn eval_basis_unchecked(k: usize, t: f64) -> (Vec<f64>, Vec<f64>) {
    let kf = k as f64;
    let node = |j: usize| j as f64 / kf;
    let mut values = vec![0.0; k + 1];
    let mut derivs = vec![0.0; k + 1];
    for j in 0..=k {
        let sj = node(j);
        let mut denom = 1.0;
        let mut prod = 1.0;
        for m in (0..=k).filter(|&m| m != j) {
            denom *= sj - node(m);
            prod *= t - node(m);
        }
        values[j] = prod / denom;

        let mut d = 0.0;
        for l in (0..=k).filter(|&l| l != j) {
            let mut p = 1.0;
            for m in (0..=k).filter(|&m| m != j && m != l) {
                p *= t - node(m);
            }
            d += p;
        }
        derivs[j] = d / denom;
    }
    (values, derivs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_midpoint() {
        let (v, d) = eval_basis(1, 0.5).unwrap();
        assert_eq!(v, vec![0.5, 0.5]);
        assert_eq!(d, vec![-1.0, 1.0]);
    }

    #[test]
    fn cardinal_at_nodes() {
        let (v, _) = eval_basis(2, 0.0).unwrap();
        assert_eq!(v, vec![1.0, 0.0, 0.0]);
        let (v, _) = eval_basis(3, 1.0 / 3.0).unwrap();
        for (j, &x) in v.iter().enumerate() {
            let expect = if j == 1 { 1.0 } else { 0.0 };
            assert!((x - expect).abs() < 1e-15, "{v:?}");
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        for k in 1..=7 {
            let t = 0.37;
            let e = 1e-6;
            let (_, d) = eval_basis(k, t).unwrap();
            let (vp, _) = eval_basis(k, t + e).unwrap();
            let (vm, _) = eval_basis(k, t - e).unwrap();
            for j in 0..=k {
                let fd = (vp[j] - vm[j]) / (2.0 * e);
                assert!((fd - d[j]).abs() < 1e-6 * (1.0 + d[j].abs()), "k={k} j={j}");
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(eval_basis(0, 0.5).is_err());
        assert!(eval_basis(2, 1.5).is_err());
    }
}
