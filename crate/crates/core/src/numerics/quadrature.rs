use std::f64::consts::PI;

use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 64;

/// Gauss–Hermite rule for the weight `e^{-s²}` on the real line.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Nodes in ascending order.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn pairs(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// `∫ g(s) e^{-s²} ds`.
    pub fn integrate(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.pairs().map(|(s, w)| w * g(s)).sum()
    }
}

/// Builds the `order`-point Gauss–Hermite rule.
///
/// Roots are found by Newton iteration on the orthonormal Hermite recurrence,
/// seeded with the usual asymptotic guesses for the largest roots and
/// extrapolation from previously found roots for the rest.
pub fn gauss_hermite(order: usize) -> Result<QuadratureRule> {
    if !(1..=MAX_ORDER).contains(&order) {
        return Err(Error::invalid(format!(
            "quadrature order must be in 1..={MAX_ORDER}, got {order}"
        )));
    }
    let n = order;
    let nf = n as f64;
    let pim4 = PI.powf(-0.25);
    let half = n.div_ceil(2);
    // roots[i] is the i-th largest root
    let mut roots = vec![0.0; half];
    let mut weights = vec![0.0; half];

    for i in 0..half {
        let mut z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => roots[0] - 1.14 * nf.powf(0.426) / roots[0],
            2 => 1.86 * roots[1] - 0.86 * roots[0],
            3 => 1.91 * roots[2] - 0.91 * roots[1],
            _ => 2.0 * roots[i - 1] - roots[i - 2],
        };
        let mut deriv = 0.0;
        for iter in 0..100 {
            let (value, d) = orthonormal_hermite(n, z, pim4);
            deriv = d;
            let dz = value / d;
            z -= dz;
            if dz.abs() <= 1e-15 * z.abs().max(1.0) || iter == 99 {
                break;
            }
        }
        // refresh the derivative at the converged root
        let (_, d) = orthonormal_hermite(n, z, pim4);
        if d.is_finite() && d != 0.0 {
            deriv = d;
        }
        if n % 2 == 1 && i == half - 1 {
            z = 0.0;
        }
        roots[i] = z;
        weights[i] = 2.0 / (deriv * deriv);
    }

    let mut nodes = Vec::with_capacity(n);
    let mut ws = Vec::with_capacity(n);
    for i in 0..half {
        nodes.push(-roots[i]);
        ws.push(weights[i]);
    }
    let mirrored = if n % 2 == 1 { half - 1 } else { half };
    for i in (0..mirrored).rev() {
        nodes.push(roots[i]);
        ws.push(weights[i]);
    }
    Ok(QuadratureRule { nodes, weights: ws })
}

/// Orthonormal Hermite polynomial of degree `n` at `z` and its derivative.
fn orthonormal_hermite(n: usize, z: f64, pim4: f64) -> (f64, f64) {
    let mut p1 = pim4;
    let mut p2 = 0.0;
    for j in 1..=n {
        let jf = j as f64;
        let p3 = p2;
        p2 = p1;
        p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
    }
    (p1, (2.0 * n as f64).sqrt() * p2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn gaussian_moment(j: u32) -> f64 {
        if j % 2 == 1 {
            return 0.0;
        }
        // √π (j-1)!! / 2^{j/2}
        let m = j / 2;
        let mut dfact = 1.0;
        let mut k = 1;
        while k < j {
            dfact *= k as f64;
            k += 2;
        }
        PI.sqrt() * dfact / 2f64.powi(m as i32)
    }

    #[test]
    fn order_one() {
        let r = gauss_hermite(1).unwrap();
        assert_eq!(r.nodes(), &[0.0]);
        assert_relative_eq!(r.weights()[0], PI.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn order_two() {
        let r = gauss_hermite(2).unwrap();
        let s = 0.5f64.sqrt();
        assert_relative_eq!(r.nodes()[0], -s, epsilon = 1e-15);
        assert_relative_eq!(r.nodes()[1], s, epsilon = 1e-15);
        for w in r.weights() {
            assert_relative_eq!(*w, PI.sqrt() / 2.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn order_eight_eighth_moment() {
        let r = gauss_hermite(8).unwrap();
        let est = r.integrate(|s| s.powi(8));
        assert_relative_eq!(est, PI.sqrt() * 105.0 / 16.0, max_relative = 1e-13);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(gauss_hermite(0).is_err());
        assert!(gauss_hermite(65).is_err());
    }

    #[test]
    fn invariants_for_every_order() {
        for k in 1..=MAX_ORDER {
            let r = gauss_hermite(k).unwrap();
            let total: f64 = r.weights().iter().sum();
            assert!((total - PI.sqrt()).abs() <= 1e-12, "order {k}: sum {total}");
            assert!(r.weights().iter().all(|w| *w > 0.0));
            for i in 0..k {
                assert!((r.nodes()[i] + r.nodes()[k - 1 - i]).abs() <= 1e-12);
            }
            assert!(
                r.nodes().windows(2).all(|w| w[0] < w[1]),
                "order {k} not sorted"
            );
            for j in 0..(2 * k as u32) {
                let est = r.integrate(|s| s.powi(j as i32));
                let exact = gaussian_moment(j);
                let scale = gaussian_moment(j + j % 2).max(1.0);
                assert!(
                    (est - exact).abs() <= 1e-10 * scale,
                    "order {k} degree {j}: {est} vs {exact}"
                );
            }
        }
    }
}
