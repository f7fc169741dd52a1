//! Adaptive composite Gauss–Legendre quadrature on `[0, 1]`.
//!
//! Each panel carries a fixed-order Gauss–Legendre estimate; its error is
//! taken as the difference from the sum over its two halves. The panel with
//! the largest error is bisected until the summed error meets the tolerance
//! or the panel budget runs out. Nodes are interior, so integrands are never
//! evaluated at the endpoints.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Gauss–Legendre nodes per panel.
    pub order: usize,
    pub abs_tol: f64,
    pub max_panels: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            order: 32,
            abs_tol: 1e-10,
            max_panels: 4096,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tol(abs_tol: f64) -> Self {
        QuadratureSpec {
            abs_tol,
            ..Self::default()
        }
    }

    pub fn check(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) {
            return Err(Error::invalid(format!(
                "quadrature tolerance must be positive, got {}",
                self.abs_tol
            )));
        }
        if self.order < 2 || self.order > 256 {
            return Err(Error::invalid(format!(
                "Gauss-Legendre order must be in 2..=256, got {}",
                self.order
            )));
        }
        if self.max_panels == 0 {
            return Err(Error::invalid("max_panels must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error_estimate: f64,
    pub panels: usize,
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`,
/// by Newton iteration on `P_n` from Chebyshev-like starting points.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // three-term recurrence for P_n(x) and P_{n-1}(x)
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = nf * (x * pn - pm) / (x * x - 1.0);
            let step = pn / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn rule(order: usize) -> std::borrow::Cow<'static, (Vec<f64>, Vec<f64>)> {
    static GL32: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    if order == 32 {
        std::borrow::Cow::Borrowed(GL32.get_or_init(|| gauss_legendre(32)))
    } else {
        std::borrow::Cow::Owned(gauss_legendre(order))
    }
}

struct Panel {
    a: f64,
    b: f64,
    left: f64,
    right: f64,
    err: f64,
}

impl Panel {
    fn value(&self) -> f64 {
        self.left + self.right
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// `∫₀¹ f(u) du`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, spec: &QuadratureSpec) -> Result<Integral> {
    integrate_over(f, 0.0, 1.0, spec)
}

pub fn integrate_over<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    spec.check()?;
    let gl = rule(spec.order);
    let (nodes, weights) = (&gl.0, &gl.1);
    let apply = |lo: f64, hi: f64| -> f64 {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        half * nodes
            .iter()
            .zip(weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
    };
    let make = |lo: f64, hi: f64, whole: f64| -> Panel {
        let mid = 0.5 * (lo + hi);
        let left = apply(lo, mid);
        let right = apply(mid, hi);
        Panel {
            a: lo,
            b: hi,
            left,
            right,
            err: (whole - left - right).abs(),
        }
    };

    let mut heap = BinaryHeap::new();
    let first = make(a, b, apply(a, b));
    let mut total_err = first.err;
    heap.push(first);
    loop {
        if !total_err.is_finite() {
            return Err(Error::invalid("integrand is not finite on the interval"));
        }
        if total_err <= spec.abs_tol {
            break;
        }
        if heap.len() >= spec.max_panels {
            let value: f64 = heap.iter().map(Panel::value).sum();
            return Err(Error::QuadratureBudget {
                estimate: value,
                error_estimate: total_err,
                tolerance: spec.abs_tol,
                panels: heap.len(),
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        let l = make(worst.a, mid, worst.left);
        let r = make(mid, worst.b, worst.right);
        // recompute the running total from scratch now and then to avoid drift
        total_err = total_err - worst.err + l.err + r.err;
        heap.push(l);
        heap.push(r);
        if heap.len() % 64 == 0 {
            total_err = heap.iter().map(|p| p.err).sum();
        }
    }
    let mut parts: Vec<f64> = heap.iter().map(Panel::value).collect();
    parts.sort_by(|x, y| x.abs().total_cmp(&y.abs()));
    Ok(Integral {
        value: parts.iter().sum(),
        error_estimate: heap.iter().map(|p| p.err).sum(),
        panels: heap.len(),
    })
}
