//! Gauss–Legendre quadrature helpers.
//!
//! [`CompositeGaussLegendre`] is the fixed rule used inside window
//! transforms. [`adaptive_gauss_legendre`] bisects until a panel and its two
//! halves agree, and is meant for reference values and diagnostics where
//! cost matters less than a controlled error.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;

/// Gauss–Legendre rule of fixed degree applied on equal-width panels.
#[derive(Debug, Clone)]
pub struct CompositeGaussLegendre {
    pairs: Vec<(f64, f64)>,
    panels: usize,
}

impl CompositeGaussLegendre {
    pub fn new(panels: usize, degree: usize) -> Self {
        let degree = NonZeroUsize::new(degree.max(1)).unwrap();
        let rule = GaussLegendre::new(degree);
        Self {
            pairs: rule.as_node_weight_pairs().to_vec(),
            panels: panels.max(1),
        }
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    pub fn integrate<F>(&self, a: f64, b: f64, mut f: F) -> f64
    where
        F: FnMut(f64) -> f64,
    {
        let width = (b - a) / self.panels as f64;
        let half = 0.5 * width;
        let mut total = 0.0;
        for p in 0..self.panels {
            let mid = a + (p as f64 + 0.5) * width;
            let panel: f64 = self
                .pairs
                .iter()
                .map(|&(x, w)| w * f(mid + half * x))
                .sum();
            total += half * panel;
        }
        total
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

const ADAPTIVE_DEGREE: usize = 10;
const ADAPTIVE_MAX_DEPTH: u32 = 48;

/// Recursive bisection with a 10-point Gauss–Legendre rule.
///
/// A panel is accepted when the one-panel and two-half-panel estimates
/// differ by less than `tol` scaled to the panel's share of the interval.
/// `breakpoints` are interior points where the integrand has kinks.
pub fn adaptive_gauss_legendre<F>(f: F, a: f64, b: f64, breakpoints: &[f64], tol: f64) -> AdaptiveResult
where
    F: Fn(f64) -> f64,
{
    let rule = GaussLegendre::new(NonZeroUsize::new(ADAPTIVE_DEGREE).unwrap());
    let pairs = rule.as_node_weight_pairs();
    let apply = |lo: f64, hi: f64| -> f64 {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        half * pairs.iter().map(|&(x, w)| w * f(mid + half * x)).sum::<f64>()
    };

    let mut cuts = vec![a];
    cuts.extend(breakpoints.iter().copied().filter(|&p| p > a && p < b));
    cuts.push(b);
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());

    let total_width = (b - a).abs().max(f64::MIN_POSITIVE);
    let mut value = 0.0;
    let mut error_estimate = 0.0;
    let mut evaluations = 0;
    // explicit stack of (lo, hi, whole-panel estimate, depth)
    let mut stack: Vec<(f64, f64, f64, u32)> = Vec::new();
    for w in cuts.windows(2) {
        let whole = apply(w[0], w[1]);
        evaluations += ADAPTIVE_DEGREE;
        stack.push((w[0], w[1], whole, 0));
    }
    while let Some((lo, hi, whole, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = apply(lo, mid);
        let right = apply(mid, hi);
        evaluations += 2 * ADAPTIVE_DEGREE;
        let diff = (left + right - whole).abs();
        let share = tol * (hi - lo).abs() / total_width;
        if diff <= share.max(f64::EPSILON * (left + right).abs()) || depth >= ADAPTIVE_MAX_DEPTH {
            value += left + right;
            error_estimate += diff;
        } else {
            stack.push((lo, mid, left, depth + 1));
            stack.push((mid, hi, right, depth + 1));
        }
    }
    AdaptiveResult {
        value,
        error_estimate,
        evaluations,
    }
}
