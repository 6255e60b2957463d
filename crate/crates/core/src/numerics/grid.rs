use crate::error::{Error, Result};

/// Minimum node count; the not-a-knot spline needs four points.
pub const MIN_NODES: usize = 4;

/// Truncated uniform spatial mesh `x_k = x_min + k·h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceGrid {
    x_min: f64,
    x_max: f64,
    step: f64,
    intervals: usize,
}

impl SpaceGrid {
    /// `(x_max - x_min) / step` must be a whole number (to 1e-9 relative).
    pub fn new(x_min: f64, x_max: f64, step: f64) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite() && x_min < x_max) {
            return Err(Error::invalid(format!(
                "space grid needs finite x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::invalid(format!(
                "space step must be positive, got {step}"
            )));
        }
        let ratio = (x_max - x_min) / step;
        let intervals = ratio.round();
        if (ratio - intervals).abs() > 1e-9 * ratio.max(1.0) {
            return Err(Error::invalid(format!(
                "domain width {} is not a multiple of step {step}",
                x_max - x_min
            )));
        }
        Self::with_intervals(x_min, x_max, intervals as usize)
    }

    pub fn with_intervals(x_min: f64, x_max: f64, intervals: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite() && x_min < x_max) {
            return Err(Error::invalid(format!(
                "space grid needs finite x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        if intervals + 1 < MIN_NODES {
            return Err(Error::invalid(format!(
                "space grid needs at least {MIN_NODES} nodes, got {}",
                intervals + 1
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            step: (x_max - x_min) / intervals as f64,
            intervals,
        })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.intervals + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn node(&self, k: usize) -> f64 {
        if k == self.intervals {
            self.x_max
        } else {
            self.x_min + k as f64 * self.step
        }
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.len()).map(|k| self.node(k))
    }

    pub fn contains(&self, x: f64) -> bool {
        (self.x_min..=self.x_max).contains(&x)
    }
}

/// Uniform time partition `t_i = i·T/N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    steps: usize,
    horizon: f64,
}

impl TimeGrid {
    pub fn new(steps: usize, horizon: f64) -> Result<Self> {
        if steps == 0 {
            return Err(Error::invalid("time grid needs at least one step"));
        }
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::invalid(format!(
                "horizon must be positive, got {horizon}"
            )));
        }
        Ok(Self { steps, horizon })
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn dt(&self) -> f64 {
        self.horizon / self.steps as f64
    }

    pub fn t(&self, i: usize) -> f64 {
        if i >= self.steps {
            self.horizon
        } else {
            i as f64 * self.dt()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn space_grid_nodes() {
        let g = SpaceGrid::new(-1.0, 1.0, 0.25).unwrap();
        assert_eq!(g.len(), 9);
        assert_eq!(g.node(0), -1.0);
        assert_eq!(g.node(4), 0.0);
        assert_eq!(g.node(8), 1.0);
    }

    #[test]
    fn space_grid_rejects_non_multiple_step() {
        assert!(SpaceGrid::new(0.0, 1.0, 0.3).is_err());
        assert!(SpaceGrid::new(1.0, 0.0, 0.1).is_err());
        assert!(SpaceGrid::new(0.0, 1.0, 0.0).is_err());
        assert!(SpaceGrid::new(0.0, 1.0, 0.5).is_err(), "too few nodes");
    }

    #[test]
    fn space_grid_tolerates_rounding_in_step() {
        let g = SpaceGrid::new(-4.0, 4.0, 0.1).unwrap();
        assert_eq!(g.len(), 81);
        assert_eq!(g.node(80), 4.0);
    }

    #[test]
    fn time_grid_endpoints() {
        for n in [1, 3, 7, 128, 1000] {
            let g = TimeGrid::new(n, 1.3).unwrap();
            assert_eq!(g.t(0), 0.0);
            assert_eq!(g.t(n), 1.3);
            assert!((g.t(n - 1) + g.dt() - 1.3).abs() < 1e-14);
        }
        assert!(TimeGrid::new(0, 1.0).is_err());
        assert!(TimeGrid::new(4, -1.0).is_err());
    }
}
