use crate::error::{Error, Result};
use crate::numerics::{fit_grid_function, GridFunction, SpaceGrid, TimeGrid};
use crate::problem::ControlSet;

/// Feedback controls `φ_i(x_k)` for `i = 0..N-1` on every grid node.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyTable {
    pub time_grid: TimeGrid,
    pub space_grid: SpaceGrid,
    pub control_set: ControlSet,
    /// `phi[i][k]`, `N` rows.
    pub phi: Vec<Vec<f64>>,
}

impl PolicyTable {
    pub fn new(
        time_grid: TimeGrid,
        space_grid: SpaceGrid,
        control_set: ControlSet,
        phi: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if phi.len() != time_grid.steps() || phi.iter().any(|r| r.len() != space_grid.len()) {
            return Err(Error::invalid(format!(
                "policy table must be {} x {}",
                time_grid.steps(),
                space_grid.len()
            )));
        }
        Ok(Self {
            time_grid,
            space_grid,
            control_set,
            phi,
        })
    }

    /// Table holding `u(t_i, x_k)` for a closed-form feedback law.
    pub fn from_fn(
        time_grid: TimeGrid,
        space_grid: SpaceGrid,
        control_set: ControlSet,
        law: impl Fn(f64, f64) -> f64,
    ) -> Result<Self> {
        let phi = (0..time_grid.steps())
            .map(|i| {
                let t = time_grid.t(i);
                space_grid
                    .nodes()
                    .map(|x| control_set.project(law(t, x)))
                    .collect()
            })
            .collect();
        Self::new(time_grid, space_grid, control_set, phi)
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.phi[i]
    }
}

/// Adjoint values `P_i(x_k)` (`N+1` rows) and `Q_i(x_k)` (`N` rows).
#[derive(Debug, Clone, PartialEq)]
pub struct AdjointTable {
    pub p: Vec<Vec<f64>>,
    pub q: Vec<Vec<f64>>,
}

/// Piecewise-constant-in-time feedback law backed by a [`PolicyTable`].
pub struct FeedbackController {
    rows: Vec<GridFunction>,
    control_set: ControlSet,
}

impl FeedbackController {
    /// Spline-interpolated row `i` at `x`, projected into the control set.
    pub fn control(&self, i: usize, x: f64) -> Result<f64> {
        let row = self.rows.get(i).ok_or_else(|| {
            Error::invalid(format!(
                "time index {i} out of range (policy has {} rows)",
                self.rows.len()
            ))
        })?;
        Ok(self.control_set.project(row.eval(x)))
    }

    pub fn steps(&self) -> usize {
        self.rows.len()
    }
}

pub fn policy_as_controller(tbl: &PolicyTable) -> Result<FeedbackController> {
    let rows = tbl
        .phi
        .iter()
        .map(|r| fit_grid_function(tbl.space_grid, r.clone()))
        .collect::<Result<Vec<_>>>()?;
    Ok(FeedbackController {
        rows,
        control_set: tbl.control_set,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grids() -> (TimeGrid, SpaceGrid) {
        (
            TimeGrid::new(4, 1.0).unwrap(),
            SpaceGrid::new(0.0, 2.0, 0.25).unwrap(),
        )
    }

    #[test]
    fn controller_reproduces_nodes() {
        let (tg, sg) = grids();
        let tbl = PolicyTable::from_fn(tg, sg, ControlSet::Unbounded, |t, x| t + x * x).unwrap();
        let ctl = policy_as_controller(&tbl).unwrap();
        for i in 0..4 {
            for (k, x) in sg.nodes().enumerate() {
                assert!((ctl.control(i, x).unwrap() - tbl.phi[i][k]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn controller_constant_row() {
        let (tg, sg) = grids();
        let tbl = PolicyTable::from_fn(tg, sg, ControlSet::Unbounded, |_, _| -0.3).unwrap();
        let ctl = policy_as_controller(&tbl).unwrap();
        assert!((ctl.control(2, 0.613).unwrap() + 0.3).abs() < 1e-12);
    }

    #[test]
    fn controller_index_out_of_range() {
        let (tg, sg) = grids();
        let tbl = PolicyTable::from_fn(tg, sg, ControlSet::Unbounded, |_, _| 0.0).unwrap();
        let ctl = policy_as_controller(&tbl).unwrap();
        assert!(ctl.control(4, 0.0).is_err());
    }

    #[test]
    fn table_shape_checked() {
        let (tg, sg) = grids();
        assert!(PolicyTable::new(tg, sg, ControlSet::Unbounded, vec![vec![0.0; 9]; 3]).is_err());
        assert!(PolicyTable::new(tg, sg, ControlSet::Unbounded, vec![vec![0.0; 8]; 4]).is_err());
    }
}
