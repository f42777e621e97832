use crate::error::{invalid, Result};

/// Uniform partition of `[a, b]` into `n_cells` cells, extended periodically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicMesh {
    a: f64,
    b: f64,
    n_cells: usize,
    h: f64,
}

impl PeriodicMesh {
    pub fn new(a: f64, b: f64, n_cells: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || b <= a {
            return invalid(format!("mesh needs a < b, got [{a}, {b}]"));
        }
        if n_cells == 0 {
            return invalid("mesh needs at least one cell");
        }
        Ok(Self {
            a,
            b,
            n_cells,
            h: (b - a) / n_cells as f64,
        })
    }

    /// Mesh of the unit interval, the setting of all dichotomy experiments.
    pub fn unit(n_cells: usize) -> Result<Self> {
        Self::new(0.0, 1.0, n_cells)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn len(&self) -> f64 {
        self.b - self.a
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Mesh node `x_i`, with `i` taken modulo the number of cells.
    pub fn node(&self, i: i64) -> f64 {
        let n = self.n_cells as i64;
        self.a + i.rem_euclid(n) as f64 * self.h
    }

    /// Left endpoint of cell `c` (0-based).
    pub fn cell_start(&self, c: usize) -> f64 {
        self.a + c as f64 * self.h
    }

    /// Wrap `x` into the fundamental period `[a, b)`.
    pub fn wrap(&self, x: f64) -> f64 {
        let l = self.len();
        let mut y = (x - self.a).rem_euclid(l);
        if y >= l {
            y = 0.0;
        }
        self.a + y
    }

    /// Containing cell and reference coordinate in `[0, 1]` for a point.
    pub fn locate(&self, x: f64) -> (usize, f64) {
        let y = (self.wrap(x) - self.a) / self.h;
        let c = (y.floor() as usize).min(self.n_cells - 1);
        (c, (y - c as f64).clamp(0.0, 1.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_and_nodes() {
        let m = PeriodicMesh::new(-1.0, 3.0, 8).unwrap();
        assert_eq!(m.h(), 0.5);
        assert_eq!(m.node(0), -1.0);
        assert_eq!(m.node(8), -1.0);
        assert_eq!(m.node(-1), 2.5);
        assert_eq!(m.cell_start(3), 0.5);
    }

    #[test]
    fn locate_wraps() {
        let m = PeriodicMesh::unit(4).unwrap();
        let (c, t) = m.locate(0.375);
        assert_eq!(c, 1);
        assert!((t - 0.5).abs() < 1e-15);
        let (c, t) = m.locate(1.375);
        assert_eq!(c, 1);
        assert!((t - 0.5).abs() < 1e-12);
        let (c, _) = m.locate(1.0);
        assert_eq!(c, 0);
    }

    #[test]
    fn rejects_degenerate() {
        assert!(PeriodicMesh::new(1.0, 1.0, 4).is_err());
        assert!(PeriodicMesh::new(0.0, 1.0, 0).is_err());
    }
}
