//! Fixed-order Gauss–Legendre quadrature.

use crate::{Error, Result};

pub const DEFAULT_NODES: usize = 256;
pub const MIN_NODES: usize = 16;

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Computes an `n`-point rule; nodes are the roots of `P_n`, refined by
    /// Newton iteration from Tricomi's initial guesses.
    pub fn new(n: usize) -> Result<Self> {
        if n < MIN_NODES {
            return Err(Error::InvalidParameter {
                name: "node_count",
                value: n as f64,
            });
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let k = i as f64 + 1.0;
            let mut x = (std::f64::consts::PI * (k - 0.25) / (nf + 0.5)).cos()
                * (1.0 - (nf - 1.0) / (8.0 * nf.powi(3)));
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            weights[i] = w;
            nodes[n - 1 - i] = x;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Ok(Self { nodes, weights })
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Integrates `f` over `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }

    /// Integrates `f` over `[0, b]` on a geometrically graded mesh whose
    /// first panel is `[0, inner]` and whose panels grow by `GRADING`.
    ///
    /// Resolves integrands with a boundary layer of width `~inner` at the
    /// origin; with `inner >= b` this is a single panel.
    pub fn integrate_graded<F: FnMut(f64) -> f64>(&self, b: f64, inner: f64, mut f: F) -> f64 {
        let mut lo = 0.0;
        let mut hi = inner.min(b);
        let mut total = 0.0;
        loop {
            total += self.integrate(lo, hi, &mut f);
            if hi >= b {
                return total;
            }
            lo = hi;
            hi = if hi * GRADING * GRADING > b {
                b
            } else {
                hi * GRADING
            };
        }
    }
}

const GRADING: f64 = 4.0;

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
