//! Fixed-order Gauss–Legendre quadrature on mapped intervals.
//!
//! The reported error bound of a rule with `n` nodes is the difference to the
//! same rule with `n/2` nodes plus the analytic tail bound of every truncated
//! axis. Nothing here is adaptive.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest accepted node count per axis.
pub const MIN_NODES: usize = 8;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::InvalidParameters("Gauss-Legendre rule needs at least one node".into()));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi's initial guess, then Newton on the three-term recurrence.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut deriv = 0.0;
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            deriv = dp;
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        deriv = if dp.is_finite() { dp } else { deriv };
        let w = 2.0 / ((1.0 - x * x) * deriv * deriv);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok((nodes, weights))
}

/// `(P_n(x), P_n'(x))`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    (p1, n as f64 * (x * p1 - p0) / (x * x - 1.0))
}

/// One integration axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Axis {
    /// `[lo, hi]` with a linear map.
    Finite { lo: f64, hi: f64 },
    /// `[lo, hi]` with the sigmoid map `s ↦ sᵖ / (sᵖ + (1−s)ᵖ)`, which turns
    /// algebraic endpoint singularities into high-order zeros.
    Graded { lo: f64, hi: f64, power: f64 },
    /// `[lo, ∞)` truncated at `cut`; `tail` bounds the mass beyond `cut`.
    Truncated { lo: f64, cut: f64, tail: f64 },
}

impl Axis {
    fn tail(&self) -> f64 {
        match *self {
            Axis::Truncated { tail, .. } => tail,
            _ => 0.0,
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Axis::Finite { lo, hi } => lo.is_finite() && hi.is_finite() && lo < hi,
            Axis::Graded { lo, hi, power } => lo.is_finite() && hi.is_finite() && lo < hi && power >= 1.0,
            Axis::Truncated { lo, cut, tail } => lo.is_finite() && cut.is_finite() && lo < cut && tail >= 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameters(format!("invalid quadrature axis {self:?}")))
        }
    }

    /// Mapped nodes and weights (weights include the Jacobian of the map).
    fn rule(&self, n: usize) -> Result<Vec<(f64, f64)>> {
        let (xs, ws) = gauss_legendre(n)?;
        let pts = xs.iter().zip(&ws).map(|(&x, &w)| {
            let s = 0.5 * (x + 1.0);
            let w = 0.5 * w;
            match *self {
                Axis::Finite { lo, hi } | Axis::Truncated { lo, cut: hi, .. } => (lo + (hi - lo) * s, (hi - lo) * w),
                Axis::Graded { lo, hi, power } => {
                    let (u, v) = (s.powf(power), (1.0 - s).powf(power));
                    let g = u / (u + v);
                    let dg = power * (s * (1.0 - s)).powf(power - 1.0) / ((u + v) * (u + v));
                    (lo + (hi - lo) * g, (hi - lo) * dg * w)
                }
            }
        });
        Ok(pts.collect())
    }
}

/// Tensor-product rule over two axes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub nodes_per_axis: usize,
    pub axes: [Axis; 2],
}

impl QuadratureSpec {
    pub fn new(nodes_per_axis: usize, axes: [Axis; 2]) -> Result<Self> {
        if nodes_per_axis < MIN_NODES {
            return Err(Error::InvalidParameters(format!(
                "nodes_per_axis must be at least {MIN_NODES}, got {nodes_per_axis}"
            )));
        }
        for axis in &axes {
            axis.validate()?;
        }
        Ok(QuadratureSpec { nodes_per_axis, axes })
    }

    pub fn with_nodes(&self, nodes_per_axis: usize) -> Result<Self> {
        Self::new(nodes_per_axis, self.axes)
    }
}

/// A quadrature value with its error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    pub error_bound: f64,
    pub nodes_per_axis: usize,
}

fn rule_1d(f: &impl Fn(f64) -> f64, axis: &Axis, n: usize) -> Result<f64> {
    Ok(axis.rule(n)?.into_iter().map(|(x, w)| w * f(x)).sum())
}

fn rule_2d(f: &impl Fn(f64, f64) -> f64, axes: &[Axis; 2], n: usize) -> Result<f64> {
    let xs = axes[0].rule(n)?;
    let ys = axes[1].rule(n)?;
    let mut total = 0.0;
    for &(x, wx) in &xs {
        let row: f64 = ys.iter().map(|&(y, wy)| wy * f(x, y)).sum();
        total += wx * row;
    }
    Ok(total)
}

/// `∫ f` over one axis with `n` nodes.
pub fn integrate_1d(f: impl Fn(f64) -> f64, axis: Axis, n: usize) -> Result<QuadResult> {
    if n < MIN_NODES {
        return Err(Error::InvalidParameters(format!("need at least {MIN_NODES} nodes, got {n}")));
    }
    axis.validate()?;
    let value = rule_1d(&f, &axis, n)?;
    let coarse = rule_1d(&f, &axis, n / 2)?;
    Ok(QuadResult { value, error_bound: (value - coarse).abs() + axis.tail(), nodes_per_axis: n })
}

/// Tensor-product quadrature of a 2D density, with the error bound described
/// in the module docs.
pub fn quad_density_mass(density: impl Fn(f64, f64) -> f64, spec: &QuadratureSpec) -> Result<QuadResult> {
    let n = spec.nodes_per_axis;
    let value = rule_2d(&density, &spec.axes, n)?;
    let coarse = rule_2d(&density, &spec.axes, n / 2)?;
    let tail: f64 = spec.axes.iter().map(Axis::tail).sum();
    Ok(QuadResult { value, error_bound: (value - coarse).abs() + tail, nodes_per_axis: n })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_is_exact_for_polynomials() {
        for n in [1, 2, 5, 16, 64] {
            let (x, w) = gauss_legendre(n).unwrap();
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
            // Exact up to degree 2n−1.
            let deg = 2 * n - 1;
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32 - 1)).sum();
            let exact = if (deg - 1) % 2 == 0 { 2.0 / deg as f64 } else { 0.0 };
            assert!((q - exact).abs() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn known_nodes() {
        let (x, w) = gauss_legendre(2).unwrap();
        assert!((x[1] - 1.0 / 3f64.sqrt()).abs() < 1e-15 && (w[0] - 1.0).abs() < 1e-15);
        let (x, w) = gauss_legendre(3).unwrap();
        assert!((x[2] - 0.6f64.sqrt()).abs() < 1e-15 && (w[1] - 8.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn uniform_square_is_exact() {
        let unit = Axis::Finite { lo: 0.0, hi: 1.0 };
        for n in [8, 16, 33] {
            let q = quad_density_mass(|_, _| 1.0, &QuadratureSpec::new(n, [unit, unit]).unwrap()).unwrap();
            assert!((q.value - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn graded_map_handles_endpoint_singularity() {
        // ∫₀¹ √y √(1−y) dy = π/8.
        let q = integrate_1d(|y| (y * (1.0 - y)).sqrt(), Axis::Graded { lo: 0.0, hi: 1.0, power: 3.0 }, 64).unwrap();
        assert!((q.value - std::f64::consts::PI / 8.0).abs() < 1e-12);
        assert!(q.error_bound < 1e-8);
    }

    #[test]
    fn truncated_axis_reports_tail() {
        // ∫₀^∞ e^{−x} dx truncated at 40.
        let tail = (-40f64).exp();
        let q = integrate_1d(|x| (-x).exp(), Axis::Truncated { lo: 0.0, cut: 40.0, tail }, 128).unwrap();
        assert!((q.value - 1.0).abs() <= q.error_bound + 1e-13);
        assert!(q.error_bound >= tail);
    }

    #[test]
    fn rejects_bad_specs() {
        let unit = Axis::Finite { lo: 0.0, hi: 1.0 };
        assert!(QuadratureSpec::new(4, [unit, unit]).is_err());
        assert!(QuadratureSpec::new(16, [unit, Axis::Finite { lo: 1.0, hi: 0.0 }]).is_err());
    }
}
