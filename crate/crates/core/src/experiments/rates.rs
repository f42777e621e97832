/// `log10(E_{m-1} / E_m) / log10(N_m / N_{m-1})` for each adjacent pair;
/// the first entry is `None`.
pub fn pairwise_rates(ns: &[usize], errors: &[f64]) -> Vec<Option<f64>> {
    assert_eq!(ns.len(), errors.len());
    (0..ns.len())
        .map(|m| {
            (m > 0).then(|| {
                (errors[m - 1] / errors[m]).log10() / (ns[m] as f64 / ns[m - 1] as f64).log10()
            })
        })
        .collect()
}

/// Least-squares slope of `log E` against `log N`, sign flipped so that
/// decaying errors give a positive rate.
pub fn fitted_rate(ns: &[usize], errors: &[f64]) -> f64 {
    assert_eq!(ns.len(), errors.len());
    let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    -sxy / sxx
}

/// Expected rate of `||P[(Pu - u)_x]||`: 4 for linears, `k + 1` for odd
/// `k > 1`, `k` for even `k`.
pub fn dichotomy_theory(k: usize) -> f64 {
    match k {
        1 => 4.0,
        k if k % 2 == 1 => (k + 1) as f64,
        k => k as f64,
    }
}

/// Expected rate of `||u - u~||` and `||u_x - w~||` for the RLW scheme:
/// `k + 1` for odd `k`, `k` for even `k`.
pub fn rlw_theory(k: usize) -> f64 {
    if k % 2 == 1 {
        (k + 1) as f64
    } else {
        k as f64
    }
}

/// Expected rate of the impulse error: `2k` for odd `k`, `2k - 2` for even `k`.
pub fn impulse_theory(k: usize) -> f64 {
    if k % 2 == 1 {
        (2 * k) as f64
    } else {
        (2 * k - 2) as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateRow {
    pub n: usize,
    pub h: f64,
    pub error: f64,
    pub rate: Option<f64>,
}

/// Errors over a sequence of grids, with adjacent-pair rates.
#[derive(Debug, Clone, PartialEq)]
pub struct RateTable {
    pub k: usize,
    pub label: String,
    pub theory: f64,
    pub rows: Vec<RateRow>,
}

impl RateTable {
    pub fn new(
        k: usize,
        label: &str,
        theory: f64,
        ns: &[usize],
        hs: &[f64],
        errors: &[f64],
    ) -> Self {
        let rates = pairwise_rates(ns, errors);
        let rows = (0..ns.len())
            .map(|m| RateRow {
                n: ns[m],
                h: hs[m],
                error: errors[m],
                rate: rates[m],
            })
            .collect();
        Self {
            k,
            label: label.to_string(),
            theory,
            rows,
        }
    }

    /// Rate of the last pair.
    pub fn finest_rate(&self) -> Option<f64> {
        self.rows.last().and_then(|r| r.rate)
    }

    pub fn fitted_rate(&self) -> f64 {
        let ns: Vec<usize> = self.rows.iter().map(|r| r.n).collect();
        let es: Vec<f64> = self.rows.iter().map(|r| r.error).collect();
        fitted_rate(&ns, &es)
    }

    pub fn errors(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.error).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let ns = [10, 20, 50];
        let es: Vec<f64> = ns.iter().map(|&n| 3.0 * (n as f64).powi(-4)).collect();
        let r = pairwise_rates(&ns, &es);
        assert!(r[0].is_none());
        assert!((r[1].unwrap() - 4.0).abs() < 1e-12);
        assert!((r[2].unwrap() - 4.0).abs() < 1e-12);
        assert!((fitted_rate(&ns, &es) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn theory_maps() {
        let d: Vec<f64> = (1..=6).map(dichotomy_theory).collect();
        assert_eq!(d, vec![4.0, 2.0, 4.0, 4.0, 6.0, 6.0]);
        let r: Vec<f64> = (1..=4).map(rlw_theory).collect();
        assert_eq!(r, vec![2.0, 2.0, 4.0, 4.0]);
        let i: Vec<f64> = (1..=4).map(impulse_theory).collect();
        assert_eq!(i, vec![2.0, 2.0, 6.0, 6.0]);
    }
}
