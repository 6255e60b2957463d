use super::grid::SpaceGrid;
use crate::error::{Error, Result};

/// Tabulated scalar function on a [`SpaceGrid`] with a not-a-knot cubic
/// spline for off-grid queries.
///
/// Outside `[x_min, x_max]` the function continues linearly with the
/// spline's boundary slope.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: SpaceGrid,
    values: Vec<f64>,
    // second derivatives at the nodes
    curvature: Vec<f64>,
}

impl GridFunction {
    pub fn grid(&self) -> &SpaceGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn from_fn(grid: SpaceGrid, g: impl Fn(f64) -> f64) -> Result<Self> {
        fit_grid_function(grid, grid.nodes().map(g).collect())
    }

    pub fn eval(&self, x: f64) -> f64 {
        let g = &self.grid;
        let last = self.values.len() - 1;
        if x < g.x_min() {
            return self.values[0] + self.slope_at(0) * (x - g.x_min());
        }
        if x > g.x_max() {
            return self.values[last] + self.slope_at(last) * (x - g.x_max());
        }
        let h = g.step();
        let pos = (x - g.x_min()) / h;
        let k = (pos.floor() as usize).min(last - 1);
        let b = pos - k as f64;
        if b == 0.0 {
            return self.values[k];
        }
        let a = 1.0 - b;
        a * self.values[k]
            + b * self.values[k + 1]
            + ((a * a * a - a) * self.curvature[k] + (b * b * b - b) * self.curvature[k + 1])
                * (h * h / 6.0)
    }

    /// Spline derivative at node 0 or node `len - 1`.
    fn slope_at(&self, node: usize) -> f64 {
        let h = self.grid.step();
        let y = &self.values;
        let m = &self.curvature;
        if node == 0 {
            (y[1] - y[0]) / h - h * (2.0 * m[0] + m[1]) / 6.0
        } else {
            let n = node;
            (y[n] - y[n - 1]) / h + h * (m[n - 1] + 2.0 * m[n]) / 6.0
        }
    }
}

/// Fits the not-a-knot cubic spline through `values` on `grid`.
pub fn fit_grid_function(grid: SpaceGrid, values: Vec<f64>) -> Result<GridFunction> {
    let n = grid.len();
    if values.len() != n {
        return Err(Error::invalid(format!(
            "grid has {n} nodes but {} values were supplied",
            values.len()
        )));
    }
    if let Some(k) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::non_finite(format!(
            "grid function value at node {k}"
        )));
    }
    let curvature = not_a_knot_curvature(&values, grid.step());
    Ok(GridFunction {
        grid,
        values,
        curvature,
    })
}

/// Second derivatives of the uniform not-a-knot spline.
///
/// With equal spacing the not-a-knot conditions reduce the first and last
/// interior equations to `6·M_1 = r_1` and `6·M_{n-2} = r_{n-2}`, leaving a
/// tridiagonal system `M_{i-1} + 4·M_i + M_{i+1} = r_i` in between.
fn not_a_knot_curvature(y: &[f64], h: f64) -> Vec<f64> {
    let n = y.len();
    let rhs = |i: usize| 6.0 * (y[i - 1] - 2.0 * y[i] + y[i + 1]) / (h * h);
    let mut m = vec![0.0; n];
    let first = 1;
    let last = n - 2;
    m[first] = rhs(first) / 6.0;
    m[last] = rhs(last) / 6.0;

    // Thomas algorithm on rows first+1 ..= last-1
    if last > first + 1 {
        let inner: Vec<usize> = (first + 1..last).collect();
        let len = inner.len();
        let mut c_prime = vec![0.0; len];
        let mut d_prime = vec![0.0; len];
        for (j, &i) in inner.iter().enumerate() {
            let mut d = rhs(i);
            if j == 0 {
                d -= m[first];
            }
            if j == len - 1 {
                d -= m[last];
            }
            let (diag, sub) = (4.0, 1.0);
            let denom = if j == 0 {
                diag
            } else {
                diag - sub * c_prime[j - 1]
            };
            c_prime[j] = if j + 1 < len { 1.0 / denom } else { 0.0 };
            d_prime[j] = if j == 0 {
                d / denom
            } else {
                (d - sub * d_prime[j - 1]) / denom
            };
        }
        for j in (0..len).rev() {
            let next = if j + 1 < len { m[inner[j + 1]] } else { 0.0 };
            m[inner[j]] = d_prime[j] - c_prime[j] * next;
        }
    }

    m[0] = 2.0 * m[1] - m[2];
    m[n - 1] = 2.0 * m[n - 2] - m[n - 3];
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cubic(x: f64) -> f64 {
        x * x * x - 2.0 * x
    }

    #[test]
    fn reproduces_cubic_off_grid() {
        for nodes in [4usize, 5, 6, 7, 20] {
            let grid = SpaceGrid::with_intervals(-1.5, 2.0, nodes - 1).unwrap();
            let gf = GridFunction::from_fn(grid, cubic).unwrap();
            for j in 0..=200 {
                let x = -1.5 + 3.5 * j as f64 / 200.0;
                assert_abs_diff_eq!(gf.eval(x), cubic(x), epsilon = 1e-9);
            }
            // midpoints
            for k in 0..nodes - 1 {
                let x = grid.node(k) + 0.5 * grid.step();
                assert_abs_diff_eq!(gf.eval(x), cubic(x), epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn constant_reproduction() {
        let grid = SpaceGrid::new(0.0, 3.0, 0.5).unwrap();
        let gf = fit_grid_function(grid, vec![2.5; grid.len()]).unwrap();
        for x in [-4.0, 0.0, 0.3, 1.77, 3.0, 9.0] {
            assert_abs_diff_eq!(gf.eval(x), 2.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn node_reproduction() {
        let grid = SpaceGrid::new(-2.0, 2.0, 0.25).unwrap();
        let values: Vec<f64> = grid.nodes().map(|x| (3.0 * x).sin() + x.abs()).collect();
        let gf = fit_grid_function(grid, values.clone()).unwrap();
        for (k, v) in values.iter().enumerate() {
            assert_abs_diff_eq!(gf.eval(grid.node(k)), *v, epsilon = 1e-12);
        }
    }

    #[test]
    fn affine_extrapolation() {
        let grid = SpaceGrid::new(0.0, 2.0, 0.5).unwrap();
        let gf = GridFunction::from_fn(grid, |x| x).unwrap();
        assert_abs_diff_eq!(gf.eval(2.5), 2.5, epsilon = 1e-12);
        assert_abs_diff_eq!(gf.eval(-1.0), -1.0, epsilon = 1e-12);
    }

    #[test]
    fn extrapolation_matches_boundary_slope_of_cubic() {
        let grid = SpaceGrid::new(-1.0, 1.0, 0.25).unwrap();
        let gf = GridFunction::from_fn(grid, cubic).unwrap();
        // d/dx (x³ - 2x) at 1 is 1
        assert_abs_diff_eq!(gf.eval(1.5), cubic(1.0) + 0.5, epsilon = 1e-9);
        // at -1 it is 1 as well
        assert_abs_diff_eq!(gf.eval(-1.5), cubic(-1.0) - 0.5, epsilon = 1e-9);
    }

    #[test]
    fn second_derivative_continuous_at_knots() {
        let grid = SpaceGrid::new(0.0, 4.0, 0.2).unwrap();
        let gf = GridFunction::from_fn(grid, |x| (x * 1.3).cos() * x).unwrap();
        let d = 1e-4;
        for k in 2..grid.len() - 2 {
            let x = grid.node(k);
            let left = (gf.eval(x) - 2.0 * gf.eval(x - d) + gf.eval(x - 2.0 * d)) / (d * d);
            let right = (gf.eval(x + 2.0 * d) - 2.0 * gf.eval(x + d) + gf.eval(x)) / (d * d);
            assert!((left - right).abs() < 1e-2, "knot {k}: {left} vs {right}");
        }
    }

    #[test]
    fn fit_rejects_bad_values() {
        let grid = SpaceGrid::new(0.0, 1.0, 0.25).unwrap();
        assert!(fit_grid_function(grid, vec![0.0; 4]).is_err());
        let mut v = vec![0.0; 5];
        v[2] = f64::INFINITY;
        assert!(fit_grid_function(grid, v).is_err());
    }
}
