//! Reconstruction operators.
//!
//! * [`shannon_partial_sum`]: `Σ_{|k|≤T} f(k/L) sinc(Lπt − kπ)`
//! * [`freq_regularized_sum`]: `Σ_{|k|≤T} f(k/L) (1/L) ψ(t − k/L)`
//! * [`time_regularized`]: `Σ_{|k−Lt|≤m} f(k/L) sinc(Lπt − kπ) φ(t − k/L)`
//!
//! The single-point functions evaluate the defining sums directly. Grid
//! evaluation through [`Reconstructor::evaluate_on_grid`] uses restructured
//! kernels that give the same values (to rounding) at a fraction of the cost:
//! the Shannon sum factors out `sin(πLt)`, the frequency-window sum uses
//! per-index trigonometric tables and angle addition, and the time-window
//! formula precomputes its local weights once per grid.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::sampling::SampleSet;
use crate::specfun::sinc;
use crate::windows::{FrequencyWindow, FrequencyWindowKind, TimeWindow, TrigForm};

/// Tolerance in `Lt` under which a time-window evaluation point counts as a
/// sampling node.
pub const NODE_SNAP: f64 = 1e-12;

#[derive(Debug, Clone, Copy)]
pub enum Method {
    ClassicalShannon { t: i64 },
    FrequencyReg { window: FrequencyWindow, t: i64 },
    TimeReg { window: TimeWindow },
}

impl Method {
    /// Short label used in result tables.
    pub fn label(&self) -> &'static str {
        match self {
            Method::ClassicalShannon { .. } => "shannon",
            Method::FrequencyReg { window, .. } => window.kind().name(),
            Method::TimeReg { window } => window.kind().name(),
        }
    }
}

/// `(−1)^n sin(π(u − n))` and `δ = u − n` with `n` the nearest integer,
/// so that `sin(πu)` keeps full accuracy for large `u`.
#[inline]
fn reduced_sin_pi(u: f64) -> (f64, i64, f64) {
    let n = u.round();
    let delta = u - n;
    let s = (PI * delta).sin();
    let ni = n as i64;
    (s, ni, delta)
}

#[inline]
fn parity(k: i64) -> f64 {
    if k & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Compensated accumulator (Neumaier).
#[derive(Default, Clone, Copy)]
struct Compensated {
    sum: f64,
    c: f64,
}

impl Compensated {
    #[inline]
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    // branch-free Kahan step; `c` holds the running correction with the
    // same sign convention as `add`
    #[inline(always)]
    fn add_kahan(&mut self, x: f64) {
        let y = x + self.c;
        let t = self.sum + y;
        self.c = y - (t - self.sum);
        self.sum = t;
    }

    fn value(self) -> f64 {
        self.sum + self.c
    }
}

fn check_t(t: i64) -> Result<()> {
    if t < 0 {
        Err(invalid(format!("truncation T must be >= 0, got {t}")))
    } else {
        Ok(())
    }
}

/// `Σ_{k=−T}^{T} f(k/L) sinc(Lπt − kπ)` with `L` the sample rate.
///
/// Terms are accumulated in ascending `k` with compensated summation.
pub fn shannon_partial_sum(samples: &SampleSet, t_radius: i64, t: f64) -> Result<f64> {
    check_t(t_radius)?;
    let values = samples.slice(-t_radius, t_radius)?;
    Ok(shannon_kernel_sum(values, -t_radius, samples.rate() * t))
}

// Σ_j values[j] sinc(π(u − k0 − j)), factoring sin(πu) out of the sum
fn shannon_kernel_sum(values: &[f64], k0: i64, u: f64) -> f64 {
    let (s, n, delta) = reduced_sin_pi(u);
    let len = values.len() as i64;
    let node_j = n - k0;
    let (left, node, right) = if (0..len).contains(&node_j) {
        let j = node_j as usize;
        (&values[..j], values[j] * sinc(PI * delta), &values[j + 1..])
    } else if node_j < 0 {
        (&values[..0], 0.0, values)
    } else {
        (values, 0.0, &values[..0])
    };
    let right_k0 = if node_j < 0 { k0 } else { n + 1 };
    let mut acc = [Compensated::default(); 4];
    alternating_cauchy(left, k0, u, &mut acc);
    alternating_cauchy(right, right_k0, u, &mut acc);
    let mut total = Compensated::default();
    for a in acc {
        total.add(a.sum);
        total.add(a.c);
    }
    parity(n) * s / PI * total.value() + node
}

// adds Σ_j (−1)^k values[j] / (u − k), k = k0 + j, into four compensated lanes
#[inline]
fn alternating_cauchy(values: &[f64], k0: i64, u: f64, acc: &mut [Compensated; 4]) {
    let sign0 = parity(k0);
    let base = u - k0 as f64;
    let mut chunks = values.chunks_exact(4);
    let mut j = 0usize;
    for c in &mut chunks {
        for lane in 0..4 {
            let sign = if lane & 1 == 0 { sign0 } else { -sign0 };
            acc[lane].add_kahan(sign * c[lane] / (base - (j + lane) as f64));
        }
        j += 4;
    }
    for (lane, &f) in chunks.remainder().iter().enumerate() {
        let sign = if lane & 1 == 0 { sign0 } else { -sign0 };
        acc[lane].add_kahan(sign * f / (base - (j + lane) as f64));
    }
}

/// `s_T(t) = Σ_{k=−T}^{T} |sinc(Lπt − kπ)|`.
pub fn s_t_function(t_radius: i64, rate: f64, t: f64) -> f64 {
    let u = rate * t;
    let (s, n, delta) = reduced_sin_pi(u);
    let mut acc = Compensated::default();
    let mut node = 0.0;
    for k in -t_radius..=t_radius {
        if k == n {
            node = sinc(PI * delta).abs();
        } else {
            acc.add(1.0 / (u - k as f64).abs());
        }
    }
    s.abs() / PI * acc.value() + node
}

/// `Σ_{k=−T}^{T} f(k/L) (1/L) ψ(t − k/L)`.
pub fn freq_regularized_sum(samples: &SampleSet, window: &FrequencyWindow, t_radius: i64, t: f64) -> Result<f64> {
    check_t(t_radius)?;
    check_rate(samples, window.config().rate())?;
    let values = samples.slice(-t_radius, t_radius)?;
    let rate = samples.rate();
    let mut sum = 0.0;
    for (j, &f) in values.iter().enumerate() {
        let k = -t_radius + j as i64;
        sum += f * window.time(t - k as f64 / rate);
    }
    Ok(sum / rate)
}

/// Localized time-window formula `R_{φ,m} f(t)`.
pub fn time_regularized(samples: &SampleSet, window: &TimeWindow, t: f64) -> Result<f64> {
    time_regularized_counted(samples, window, t).map(|(v, _)| v)
}

/// [`time_regularized`] together with the number of samples it read.
pub fn time_regularized_counted(samples: &SampleSet, window: &TimeWindow, t: f64) -> Result<(f64, usize)> {
    check_rate(samples, window.config().rate())?;
    let u = samples.rate() * t;
    let n = u.round();
    if (u - n).abs() <= NODE_SNAP {
        let k = n as i64;
        let v = samples.get(k).ok_or(Error::Coverage {
            index: k,
            k_min: samples.k_min(),
            k_max: samples.k_max(),
        })?;
        return Ok((v, 1));
    }
    let m = window.m() as f64;
    let lo = (u - m).ceil() as i64;
    let hi = (u + m).floor() as i64;
    let values = samples.slice(lo, hi)?;
    let mut sum = 0.0;
    for (j, &f) in values.iter().enumerate() {
        let d = u - (lo + j as i64) as f64;
        sum += f * sinc(PI * d) * window.eval_scaled(d / m);
    }
    Ok((sum, values.len()))
}

fn check_rate(samples: &SampleSet, rate: f64) -> Result<()> {
    if (samples.rate() - rate).abs() > 1e-12 * rate {
        return Err(invalid(format!(
            "sample rate {} does not match window rate {rate}",
            samples.rate()
        )));
    }
    Ok(())
}

/// `S` equispaced points from `lo` to `hi` inclusive.
pub fn grid(lo: f64, hi: f64, s: usize) -> Result<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(invalid(format!("grid needs lo < hi, got [{lo}, {hi}]")));
    }
    if s < 2 {
        return Err(invalid(format!("grid needs at least 2 points, got {s}")));
    }
    // the upper half counts back from `hi`, so a grid on [−a, a] is exactly
    // symmetric
    let step = (hi - lo) / (s - 1) as f64;
    Ok((0..s)
        .map(|i| {
            if 2 * i < s {
                lo + step * i as f64
            } else {
                hi - step * (s - 1 - i) as f64
            }
        })
        .collect())
}

fn is_mirror_symmetric(points: &[f64]) -> bool {
    points.iter().zip(points.iter().rev()).all(|(a, b)| *a == -*b)
}

/// A reconstruction method bound to a sample set.
#[derive(Debug, Clone)]
pub struct Reconstructor {
    method: Method,
    samples: SampleSet,
}

impl Reconstructor {
    pub fn new(method: Method, samples: SampleSet) -> Result<Self> {
        match &method {
            Method::ClassicalShannon { t } => {
                check_t(*t)?;
                samples.require(-t, *t)?;
            }
            Method::FrequencyReg { window, t } => {
                check_t(*t)?;
                check_rate(&samples, window.config().rate())?;
                samples.require(-t, *t)?;
            }
            Method::TimeReg { window } => check_rate(&samples, window.config().rate())?,
        }
        Ok(Self { method, samples })
    }

    pub fn method(&self) -> &Method {
        &self.method
    }

    pub fn samples(&self) -> &SampleSet {
        &self.samples
    }

    /// Reconstruction at a single point.
    pub fn eval(&self, t: f64) -> Result<f64> {
        match &self.method {
            Method::ClassicalShannon { t: radius } => shannon_partial_sum(&self.samples, *radius, t),
            Method::FrequencyReg { window, t: radius } => freq_regularized_sum(&self.samples, window, *radius, t),
            Method::TimeReg { window } => time_regularized(&self.samples, window, t),
        }
    }

    /// Indices the method may read when evaluated on `[lo, hi]`.
    pub fn index_span(&self, lo: f64, hi: f64) -> (i64, i64) {
        match &self.method {
            Method::ClassicalShannon { t } | Method::FrequencyReg { t, .. } => (-t, *t),
            Method::TimeReg { window } => {
                let l = self.samples.rate();
                let m = window.m() as i64;
                ((l * lo - NODE_SNAP).ceil() as i64 - m, (l * hi + NODE_SNAP).floor() as i64 + m)
            }
        }
    }

    /// Number of samples the method may read on `[lo, hi]`.
    pub fn samples_used(&self, lo: f64, hi: f64) -> usize {
        let (a, b) = self.index_span(lo, hi);
        (b - a + 1) as usize
    }

    /// Values at `S` equispaced points spanning `[lo, hi]` inclusive.
    pub fn evaluate_on_grid(&self, lo: f64, hi: f64, s: usize) -> Result<Vec<f64>> {
        let points = grid(lo, hi, s)?;
        self.evaluate_points(&points)
    }

    /// Values at arbitrary points.
    ///
    /// For the two global sums, when the samples are even in `k` and the
    /// points are mirror-symmetric about zero, only the non-negative half is
    /// computed and the rest is filled in by symmetry.
    pub fn evaluate_points(&self, points: &[f64]) -> Result<Vec<f64>> {
        let radius = match &self.method {
            Method::ClassicalShannon { t } | Method::FrequencyReg { t, .. } => Some(*t),
            Method::TimeReg { .. } => None,
        };
        if let Some(t) = radius {
            let n = points.len();
            if n >= 2 && self.samples_even(t) && is_mirror_symmetric(points) {
                let half = n / 2;
                let upper = self.evaluate_unfolded(&points[half..])?;
                let mut out = Vec::with_capacity(n);
                out.extend(upper[n % 2..].iter().rev());
                out.extend_from_slice(&upper);
                return Ok(out);
            }
        }
        self.evaluate_unfolded(points)
    }

    fn samples_even(&self, t: i64) -> bool {
        match self.samples.slice(-t, t) {
            Ok(v) => v.iter().zip(v.iter().rev()).all(|(a, b)| a == b),
            Err(_) => false,
        }
    }

    fn evaluate_unfolded(&self, points: &[f64]) -> Result<Vec<f64>> {
        match &self.method {
            Method::ClassicalShannon { t } => {
                let values = self.samples.slice(-t, *t)?;
                let rate = self.samples.rate();
                Ok(points
                    .par_iter()
                    .map(|&x| shannon_kernel_sum(values, -t, rate * x))
                    .collect())
            }
            Method::FrequencyReg { window, t } => {
                let kernel = FreqKernel::new(window, &self.samples, *t)?;
                Ok(points.par_iter().map(|&x| kernel.eval(x)).collect())
            }
            Method::TimeReg { window } => {
                let op = LocalOperator::new(window, self.samples.rate(), points);
                op.apply(&self.samples)
            }
        }
    }
}

/// Frequency-window sum with tabulated `sin`/`cos` of `a k/L` and `b k/L`.
///
/// Only nonzero samples are kept. Terms with `|Lt − k|` inside the window's
/// guard radius use the exact closed form; all others use angle addition and
/// the single-division forms of [`TrigForm`].
struct FreqKernel<'a> {
    window: &'a FrequencyWindow,
    form: TrigForm,
    rate: f64,
    a: f64,
    b: f64,
    guard: f64,
    k: Vec<f64>,
    // k, f(k/L), sin(ak/L), cos(ak/L), sin(bk/L), cos(bk/L)
    rows: Vec<[f64; 6]>,
}

// sin and cos of π p k / q, reduced exactly when p and q are integers
fn exact_phase(p: f64, q: f64, k: i64) -> (f64, f64) {
    let integral = p.fract() == 0.0 && q.fract() == 0.0 && p.abs() < 1e9 && q > 0.0 && q < 1e9;
    if integral {
        let period = 2 * q as i64;
        let r = ((p as i64) * k).rem_euclid(period);
        (PI * r as f64 / q).sin_cos()
    } else {
        (PI * p * k as f64 / q).sin_cos()
    }
}

impl<'a> FreqKernel<'a> {
    fn new(window: &'a FrequencyWindow, samples: &'a SampleSet, t_radius: i64) -> Result<Self> {
        let values = samples.slice(-t_radius, t_radius)?;
        let c = window.config();
        let n = c.n_f64();
        let l = c.rate();
        let (a, b) = window.trig_frequencies();
        let mut kernel = Self {
            window,
            form: window.trig_form(),
            rate: l,
            a,
            b,
            guard: window.trig_guard_radius(),
            k: Vec::new(),
            rows: Vec::new(),
        };
        for (j, &f) in values.iter().enumerate() {
            if f == 0.0 {
                continue;
            }
            let k = j as i64 - t_radius;
            // a k/L = π(N+L)k/(2L),  b k/L = π(L−N)k/(2L)
            let (sa, ca) = exact_phase(n + l, 2.0 * l, k);
            let (sb, cb) = exact_phase(l - n, 2.0 * l, k);
            kernel.k.push(k as f64);
            kernel.rows.push([k as f64, f, sa, ca, sb, cb]);
        }
        Ok(kernel)
    }

    fn eval(&self, t: f64) -> f64 {
        let u = self.rate * t;
        let near_lo = self.k.partition_point(|&k| k <= u - self.guard);
        let near_hi = self.k.partition_point(|&k| k < u + self.guard);
        let trig = {
            let (sa, ca) = (self.a * t).sin_cos();
            let (sb, cb) = (self.b * t).sin_cos();
            [sa, ca, sb, cb]
        };
        let mut sum = self.far(0..near_lo, u, trig);
        for j in near_lo..near_hi {
            sum += self.rows[j][1] * self.window.time((u - self.k[j]) / self.rate);
        }
        sum += self.far(near_hi..self.k.len(), u, trig);
        sum / self.rate
    }

    fn far(&self, r: std::ops::Range<usize>, u: f64, trig: [f64; 4]) -> f64 {
        let form = self.form;
        {
            match form.kind {
                FrequencyWindowKind::Linear => self.far_sum(r, u, trig, |x, sa, sb, _| form.linear(x, sa, sb)),
                FrequencyWindowKind::Cubic => self.far_sum(r, u, trig, |x, sa, sb, cb| form.cubic(x, sa, sb, cb)),
                FrequencyWindowKind::RaisedCosine => {
                    self.far_sum(r, u, trig, |x, sa, _, cb| form.raised_cosine(x, sa, cb))
                }
                FrequencyWindowKind::ConvBSpline2 => self.far_sum(r, u, trig, |x, sa, _, cb| form.conv2(x, sa, cb)),
            }
        }
    }

    #[inline(always)]
    fn far_sum<G>(&self, r: std::ops::Range<usize>, u: f64, trig: [f64; 4], g: G) -> f64
    where
        G: Fn(f64, f64, f64, f64) -> f64,
    {
        let [sat, cat, sbt, cbt] = trig;
        let rows = &self.rows[r];
        let mut acc = [0.0f64; 4];
        let mut chunks = rows.chunks_exact(4);
        for c in &mut chunks {
            for lane in 0..4 {
                let [k, v, sa, ca, sb, cb] = c[lane];
                let sin_a = sat * ca - cat * sa;
                let sin_b = sbt * cb - cbt * sb;
                let cos_b = cbt * cb + sbt * sb;
                acc[lane] += v * g(u - k, sin_a, sin_b, cos_b);
            }
        }
        for (lane, &[k, v, sa, ca, sb, cb]) in chunks.remainder().iter().enumerate() {
            let sin_a = sat * ca - cat * sa;
            let sin_b = sbt * cb - cbt * sb;
            let cos_b = cbt * cb + sbt * sb;
            acc[lane] += v * g(u - k, sin_a, sin_b, cos_b);
        }
        (acc[0] + acc[1]) + (acc[2] + acc[3])
    }
}

/// Precomputed weights of the localized time-window formula on a fixed set
/// of points, reusable across sample sets with the same rate.
#[derive(Debug, Clone)]
pub struct LocalOperator {
    stride: usize,
    first: Vec<i64>,
    count: Vec<usize>,
    weights: Vec<f64>,
}

impl LocalOperator {
    pub fn new(window: &TimeWindow, rate: f64, points: &[f64]) -> Self {
        let m = window.m() as f64;
        let stride = 2 * window.m() as usize + 1;
        let mut first = Vec::with_capacity(points.len());
        let mut count = Vec::with_capacity(points.len());
        let mut weights = vec![0.0; stride * points.len()];
        for (i, &t) in points.iter().enumerate() {
            let u = rate * t;
            let n = u.round();
            let row = &mut weights[i * stride..(i + 1) * stride];
            if (u - n).abs() <= NODE_SNAP {
                first.push(n as i64);
                count.push(1);
                row[0] = 1.0;
                continue;
            }
            let lo = (u - m).ceil() as i64;
            let hi = (u + m).floor() as i64;
            first.push(lo);
            let len = (hi - lo + 1) as usize;
            count.push(len);
            for (j, w) in row.iter_mut().take(len).enumerate() {
                let d = u - (lo + j as i64) as f64;
                *w = sinc(PI * d) * window.eval_scaled(d / m);
            }
        }
        Self {
            stride,
            first,
            count,
            weights,
        }
    }

    pub fn len(&self) -> usize {
        self.first.len()
    }

    pub fn is_empty(&self) -> bool {
        self.first.is_empty()
    }

    /// Largest number of samples read at a single point.
    pub fn max_samples_per_point(&self) -> usize {
        self.count.iter().copied().max().unwrap_or(0)
    }

    /// Index range read over all points.
    pub fn index_span(&self) -> Option<(i64, i64)> {
        let lo = self.first.iter().copied().min()?;
        let hi = self
            .first
            .iter()
            .zip(&self.count)
            .map(|(&f, &c)| f + c as i64 - 1)
            .max()?;
        Some((lo, hi))
    }

    pub fn apply(&self, samples: &SampleSet) -> Result<Vec<f64>> {
        if let Some((lo, hi)) = self.index_span() {
            samples.require(lo, hi)?;
        }
        let values = samples.values();
        let k_min = samples.k_min();
        Ok((0..self.len())
            .into_par_iter()
            .map(|i| {
                let start = (self.first[i] - k_min) as usize;
                let c = self.count[i];
                let w = &self.weights[i * self.stride..i * self.stride + c];
                w.iter().zip(&values[start..start + c]).map(|(a, b)| a * b).sum()
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::BandlimitedTestFunction;
    use crate::windows::{SamplingConfig, TimeWindowKind};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn direct_shannon(s: &SampleSet, t_radius: i64, t: f64) -> f64 {
        let l = s.rate();
        (-t_radius..=t_radius)
            .map(|k| s.get(k).unwrap() * sinc(l * PI * t - k as f64 * PI))
            .sum()
    }

    #[test]
    fn three_term_hand_value() {
        let s = SampleSet::new(1.0, -1, vec![1.0; 3]).unwrap();
        let v = shannon_partial_sum(&s, 1, 0.5).unwrap();
        assert!((v - (4.0 / PI - 2.0 / (3.0 * PI))).abs() < 1e-15);
    }

    #[test]
    fn shannon_interpolates_and_matches_direct_sum() {
        let f = BandlimitedTestFunction::unit_sinc(32).unwrap();
        let s = f.sample(48.0, -200, 200).unwrap();
        for n in [-150, -3, 0, 7, 150] {
            let v = shannon_partial_sum(&s, 150, n as f64 / 48.0).unwrap();
            assert!((v - s.get(n).unwrap()).abs() < 1e-13);
        }
        let r = Reconstructor::new(Method::ClassicalShannon { t: 180 }, s.clone()).unwrap();
        let pts = grid(-1.0, 1.0, 301).unwrap();
        let fast = r.evaluate_points(&pts).unwrap();
        for (x, v) in pts.iter().zip(fast) {
            assert!((v - direct_shannon(&s, 180, *x)).abs() < 1e-12);
        }
        assert!(matches!(shannon_partial_sum(&s, 201, 0.0), Err(Error::Coverage { .. })));
    }

    #[test]
    fn shannon_converges_with_t() {
        let f = BandlimitedTestFunction::unit_sinc(16).unwrap();
        let s = f.sample(24.0, -4096, 4096).unwrap();
        let pts = grid(-1.0, 1.0, 101).unwrap();
        let errs: Vec<f64> = [64, 512, 4096]
            .iter()
            .map(|&r| {
                pts.iter()
                    .map(|&t| (shannon_partial_sum(&s, r, t).unwrap() - f.eval(t)).abs())
                    .fold(0.0, f64::max)
            })
            .collect();
        assert!(errs[0] > errs[1] && errs[1] > errs[2]);
    }

    #[test]
    fn s_t_values() {
        assert!((s_t_function(5, 3.0, 0.0) - 1.0).abs() < 1e-15);
        let v = s_t_function(1, 10.0, 0.05);
        assert!((v - (4.0 / PI + 2.0 / (3.0 * PI))).abs() < 1e-15);
        for t_radius in [1i64, 10, 1000, 100_000] {
            let closed: f64 = 4.0 / PI * (1..=t_radius).map(|k| 1.0 / (2 * k - 1) as f64).sum::<f64>()
                + 2.0 / (PI * (2 * t_radius + 1) as f64);
            let v = s_t_function(t_radius, 7.0, 1.0 / 14.0);
            assert!((v / closed - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn freq_kernel_matches_direct_sum() {
        for &lambda in &[0.5, 1.0, 2.0] {
            let c = SamplingConfig::new(64, lambda).unwrap();
            let f = BandlimitedTestFunction::unit_sinc(64).unwrap();
            let s = f.sample(c.rate(), -700, 700).unwrap();
            for kind in FrequencyWindowKind::ALL {
                let w = FrequencyWindow::new(kind, c).unwrap();
                let r = Reconstructor::new(Method::FrequencyReg { window: w, t: 600 }, s.clone()).unwrap();
                let pts = grid(-1.0, 1.0, 257).unwrap();
                let fast = r.evaluate_points(&pts).unwrap();
                for (x, v) in pts.iter().zip(fast) {
                    let d = freq_regularized_sum(&s, &w, 600, *x).unwrap();
                    assert!((v - d).abs() < 1e-12, "{kind:?} λ={lambda} t={x}: {v} vs {d}");
                }
            }
        }
    }

    #[test]
    fn freq_sum_is_not_interpolating() {
        let c = SamplingConfig::new(16, 1.0).unwrap();
        let f = BandlimitedTestFunction::shifted_pair(16).unwrap();
        let s = f.sample(32.0, -8, 8).unwrap();
        let w = FrequencyWindow::new(FrequencyWindowKind::Linear, c).unwrap();
        let v = freq_regularized_sum(&s, &w, 8, 1.0 / 32.0).unwrap();
        assert!((v - s.get(1).unwrap()).abs() > 1e-6);
        let zero = SampleSet::new(32.0, -8, vec![0.0; 17]).unwrap();
        assert_eq!(freq_regularized_sum(&zero, &w, 8, 0.1).unwrap(), 0.0);
    }

    fn time_windows(n: u32, lambda: f64, m: u32) -> Vec<TimeWindow> {
        let c = SamplingConfig::new(n, lambda).unwrap();
        [TimeWindowKind::SinhType, TimeWindowKind::ContinuousKaiserBessel]
            .iter()
            .map(|&k| TimeWindow::new(k, m, c).unwrap())
            .collect()
    }

    #[test]
    fn time_reg_localized_and_interpolating() {
        let f = BandlimitedTestFunction::shifted_pair(64).unwrap();
        for w in time_windows(64, 1.0, 5) {
            let l = w.config().rate();
            let s = f.sample(l, -200, 200).unwrap();
            let mut rng = ChaCha20Rng::seed_from_u64(3);
            for _ in 0..500 {
                let t = rng.random_range(-1.0..1.0);
                let (_, used) = time_regularized_counted(&s, &w, t).unwrap();
                assert!(used <= 11);
            }
            for n in -128..=128 {
                let (v, used) = time_regularized_counted(&s, &w, n as f64 / l).unwrap();
                assert_eq!(v, s.get(n).unwrap());
                assert_eq!(used, 1);
            }
            let zero = SampleSet::new(l, -200, vec![0.0; 401]).unwrap();
            assert_eq!(time_regularized(&zero, &w, 0.123).unwrap(), 0.0);
        }
    }

    #[test]
    fn local_operator_matches_pointwise() {
        let f = BandlimitedTestFunction::unit_sinc(64).unwrap();
        for w in time_windows(64, 0.5, 4) {
            let l = w.config().rate();
            let s = f.sample(l, -100, 100).unwrap();
            let r = Reconstructor::new(Method::TimeReg { window: w }, s.clone()).unwrap();
            let pts = grid(-1.0, 1.0, 1001).unwrap();
            let fast = r.evaluate_points(&pts).unwrap();
            for (x, v) in pts.iter().zip(&fast) {
                assert!((v - time_regularized(&s, &w, *x).unwrap()).abs() < 1e-14);
            }
            assert_eq!(r.samples_used(-1.0, 1.0), 2 * 4 + 2 * 96 + 1);
            let op = LocalOperator::new(&w, l, &pts);
            assert!(op.max_samples_per_point() <= 9);
            let narrow = f.sample(l, -50, 50).unwrap();
            assert!(matches!(op.apply(&narrow), Err(Error::Coverage { .. })));
        }
    }

    #[test]
    fn operators_are_linear() {
        let c = SamplingConfig::new(32, 1.0).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(17);
        let draw = |rng: &mut ChaCha20Rng| {
            SampleSet::new(64.0, -120, (0..241).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap()
        };
        let x = draw(&mut rng);
        let y = draw(&mut rng);
        let (alpha, beta) = (0.7, -1.3);
        let z = SampleSet::new(
            64.0,
            -120,
            x.values().iter().zip(y.values()).map(|(a, b)| alpha * a + beta * b).collect(),
        )
        .unwrap();
        let mut methods = vec![
            Method::ClassicalShannon { t: 100 },
            Method::FrequencyReg { window: FrequencyWindow::new(FrequencyWindowKind::Cubic, c).unwrap(), t: 100 },
        ];
        methods.extend(time_windows(32, 1.0, 6).into_iter().map(|w| Method::TimeReg { window: w }));
        let pts = grid(-1.0, 1.0, 97).unwrap();
        for m in methods {
            let ex = Reconstructor::new(m, x.clone()).unwrap().evaluate_points(&pts).unwrap();
            let ey = Reconstructor::new(m, y.clone()).unwrap().evaluate_points(&pts).unwrap();
            let ez = Reconstructor::new(m, z.clone()).unwrap().evaluate_points(&pts).unwrap();
            for i in 0..pts.len() {
                let lin = alpha * ex[i] + beta * ey[i];
                assert!((ez[i] - lin).abs() <= 1e-12 * (1.0 + lin.abs()), "{}", m.label());
            }
        }
    }

    #[test]
    fn sinc_partition_identity() {
        let l = 16.0;
        for &t in &[0.0, 0.11, -0.37, 0.5] {
            for big_k in [64i64, 256, 1024] {
                let s: f64 = (-big_k..=big_k).map(|k| sinc(PI * (l * t - k as f64)).powi(2)).sum();
                let rem = 2.0 / (PI * PI * (big_k as f64 - l * f64::abs(t)));
                assert!(1.0 - s >= -1e-14 && 1.0 - s <= rem, "t={t} K={big_k}: {}", 1.0 - s);
            }
        }
    }

    #[test]
    fn grid_endpoints() {
        assert_eq!(grid(-1.0, 1.0, 2).unwrap(), vec![-1.0, 1.0]);
        let g = grid(-1.0, 1.0, 5).unwrap();
        assert_eq!(g, vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert!(grid(1.0, 1.0, 5).is_err());
        assert!(grid(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn rate_mismatch_rejected() {
        let c = SamplingConfig::new(32, 1.0).unwrap();
        let w = FrequencyWindow::new(FrequencyWindowKind::Linear, c).unwrap();
        let s = SampleSet::new(48.0, -10, vec![0.0; 21]).unwrap();
        assert!(Reconstructor::new(Method::FrequencyReg { window: w, t: 5 }, s).is_err());
    }
}
