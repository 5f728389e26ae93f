//! Time and frequency windows, each with both of its dual representations.
//!
//! A [`FrequencyWindow`] is a band-shaping multiplier `ψ̂` that equals one on
//! `[-N/2, N/2]` and falls to zero across the guard band `[N/2, L/2]`. Its
//! inverse Fourier transform `ψ` has a closed form for every supported kind.
//!
//! A [`TimeWindow`] is a compactly supported regularizer `φ` on
//! `[-m/L, m/L]`. The continuous Kaiser–Bessel window has a closed-form
//! Fourier transform; the sinh-type transform is obtained by quadrature.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

use crate::error::{invalid, Result};
use crate::quad::CompositeGaussLegendre;
use crate::specfun::{bessel_i0_minus_one, sinc, sinhc, MAX_SERIES_ARG};

/// Bandwidth `N`, oversampling `λ` and the derived sampling rate `L = N(1+λ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingConfig {
    n: u32,
    lambda: f64,
    rate: f64,
}

impl SamplingConfig {
    pub fn new(n: u32, lambda: f64) -> Result<Self> {
        if n == 0 {
            return Err(invalid("bandwidth N must be at least 1"));
        }
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(invalid(format!("oversampling lambda must be finite and >= 0, got {lambda}")));
        }
        Ok(Self {
            n,
            lambda,
            rate: n as f64 * (1.0 + lambda),
        })
    }

    /// Builds the configuration from a sampling rate `L ≥ N`.
    pub fn from_rate(n: u32, rate: f64) -> Result<Self> {
        if n == 0 {
            return Err(invalid("bandwidth N must be at least 1"));
        }
        let nf = n as f64;
        if !rate.is_finite() || rate < nf {
            return Err(invalid(format!("sampling rate L = {rate} must be finite and >= N = {n}")));
        }
        Ok(Self {
            n,
            lambda: (rate - nf) / nf,
            rate,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn n_f64(&self) -> f64 {
        self.n as f64
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Sampling rate `L`.
    pub fn rate(&self) -> f64 {
        self.rate
    }

    /// Guard band width `L − N`.
    pub fn guard(&self) -> f64 {
        self.rate - self.n as f64
    }
}

/// Anything that can be checked for membership in the admissible window set:
/// even, supported on `[-r, r]`, `φ(0) = 1`, values in `[0, 1]` and
/// non-increasing on `[0, r]`.
pub trait CompactWindow {
    fn support_radius(&self) -> f64;
    fn value(&self, t: f64) -> f64;
}

/// Samples `w` on `grid_points` points of `[0, r]` (and their mirror images,
/// plus points beyond the support) and reports whether every admissibility
/// condition holds there.
pub fn validate_phi_membership<W: CompactWindow + ?Sized>(w: &W, grid_points: usize) -> Result<bool> {
    if grid_points < 16 {
        return Err(invalid(format!("grid_points must be >= 16, got {grid_points}")));
    }
    let r = w.support_radius();
    if !(r.is_finite() && r > 0.0) {
        return Ok(false);
    }
    const TOL: f64 = 1e-14;
    if (w.value(0.0) - 1.0).abs() > TOL {
        return Ok(false);
    }
    let step = r / (grid_points - 1) as f64;
    let mut prev = f64::INFINITY;
    for j in 0..grid_points {
        let t = step * j as f64;
        let v = w.value(t);
        if !v.is_finite() || !(-TOL..=1.0 + TOL).contains(&v) {
            return Ok(false);
        }
        if w.value(-t) != v {
            return Ok(false);
        }
        if v > prev + TOL {
            return Ok(false);
        }
        prev = v;
        // strictly outside the support
        let outside = r * (1.0 + (j + 1) as f64 / grid_points as f64);
        if w.value(outside) != 0.0 || w.value(-outside) != 0.0 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TimeWindowKind {
    SinhType,
    ContinuousKaiserBessel,
}

impl TimeWindowKind {
    pub fn name(self) -> &'static str {
        match self {
            TimeWindowKind::SinhType => "sinh",
            TimeWindowKind::ContinuousKaiserBessel => "ckb",
        }
    }
}

/// Compactly supported time window on `[-m/L, m/L]`.
#[derive(Debug, Clone, Copy)]
pub struct TimeWindow {
    kind: TimeWindowKind,
    m: u32,
    beta: f64,
    config: SamplingConfig,
    // sinh(β) or I₀(β) − 1
    denom: f64,
}

// panels and per-panel degree of the sinh-window transform rule
const SINH_FT_PANELS: usize = 64;
const SINH_FT_DEGREE: usize = 8;

fn sinh_ft_rule() -> &'static CompositeGaussLegendre {
    static RULE: OnceLock<CompositeGaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| CompositeGaussLegendre::new(SINH_FT_PANELS, SINH_FT_DEGREE))
}

impl TimeWindow {
    /// Window with the standard shape `β = πm(L−N)/L`.
    pub fn new(kind: TimeWindowKind, m: u32, config: SamplingConfig) -> Result<Self> {
        if config.lambda() <= 0.0 {
            return Err(invalid("time windows require oversampling lambda > 0"));
        }
        let beta = PI * m as f64 * config.guard() / config.rate();
        Self::with_beta(kind, m, beta, config)
    }

    /// Window with an explicit shape parameter.
    pub fn with_beta(kind: TimeWindowKind, m: u32, beta: f64, config: SamplingConfig) -> Result<Self> {
        if m < 2 {
            return Err(invalid(format!("truncation m must be >= 2, got {m}")));
        }
        if 2.0 * m as f64 > config.rate() {
            return Err(invalid(format!(
                "truncation m = {m} too large for rate L = {} (need 2m <= L)",
                config.rate()
            )));
        }
        if !beta.is_finite() || beta == 0.0 || beta.abs() > MAX_SERIES_ARG {
            return Err(invalid(format!("shape beta must be nonzero with |beta| <= {MAX_SERIES_ARG}, got {beta}")));
        }
        let denom = match kind {
            TimeWindowKind::SinhType => beta.sinh(),
            TimeWindowKind::ContinuousKaiserBessel => bessel_i0_minus_one(beta)?,
        };
        Ok(Self {
            kind,
            m,
            beta,
            config,
            denom,
        })
    }

    pub fn kind(&self) -> TimeWindowKind {
        self.kind
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn config(&self) -> SamplingConfig {
        self.config
    }

    /// Support radius `m/L`.
    pub fn support_radius(&self) -> f64 {
        self.m as f64 / self.config.rate()
    }

    /// `φ(t)`.
    pub fn eval(&self, t: f64) -> f64 {
        self.eval_scaled(self.config.rate() * t / self.m as f64)
    }

    /// `φ` as a function of the scaled time `r = Lt/m`, supported on `[-1, 1]`.
    pub(crate) fn eval_scaled(&self, r: f64) -> f64 {
        let q = 1.0 - r * r;
        if !(q > 0.0) {
            return 0.0;
        }
        let s = q.sqrt();
        match self.kind {
            TimeWindowKind::SinhType => (self.beta * s).sinh() / self.denom,
            TimeWindowKind::ContinuousKaiserBessel => {
                // |β s| ≤ |β| was range-checked at construction
                bessel_i0_minus_one(self.beta * s).unwrap_or(f64::NAN) / self.denom
            }
        }
    }

    /// Fourier transform `φ̂(v) = 2∫₀^{m/L} φ(t) cos(2πvt) dt`.
    pub fn fourier_transform(&self, v: f64) -> f64 {
        match self.kind {
            TimeWindowKind::ContinuousKaiserBessel => self.ckb_transform(v),
            TimeWindowKind::SinhType => self.sinh_transform(v),
        }
    }

    fn ckb_transform(&self, v: f64) -> f64 {
        let rate = self.config.rate();
        let m = self.m as f64;
        let beta = self.beta;
        let factor = 2.0 * m / (self.denom * rate);
        let w = 2.0 * PI * m * v / (beta * rate);
        let q = 1.0 - w * w;
        let core = if q > 0.0 {
            sinhc(beta * q.sqrt())
        } else {
            sinc(beta * (-q).sqrt())
        };
        factor * (core - sinc(beta * w))
    }

    fn sinh_transform(&self, v: f64) -> f64 {
        // t = (m/L) sin θ removes the square-root behaviour at the support edge
        let radius = self.support_radius();
        let beta = self.beta;
        let denom = self.denom;
        let omega = 2.0 * PI * v * radius;
        let integral = sinh_ft_rule().integrate(0.0, FRAC_PI_2, |theta| {
            let (s, c) = theta.sin_cos();
            (beta * c).sinh() / denom * (omega * s).cos() * c
        });
        2.0 * radius * integral
    }
}

impl CompactWindow for TimeWindow {
    fn support_radius(&self) -> f64 {
        TimeWindow::support_radius(self)
    }

    fn value(&self, t: f64) -> f64 {
        self.eval(t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FrequencyWindowKind {
    Linear,
    Cubic,
    RaisedCosine,
    ConvBSpline2,
}

impl FrequencyWindowKind {
    pub const ALL: [FrequencyWindowKind; 4] = [
        FrequencyWindowKind::Linear,
        FrequencyWindowKind::Cubic,
        FrequencyWindowKind::RaisedCosine,
        FrequencyWindowKind::ConvBSpline2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FrequencyWindowKind::Linear => "lin",
            FrequencyWindowKind::Cubic => "cub",
            FrequencyWindowKind::RaisedCosine => "cos",
            FrequencyWindowKind::ConvBSpline2 => "conv2",
        }
    }
}

/// Frequency window `ψ̂` together with its closed-form inverse transform `ψ`.
#[derive(Debug, Clone, Copy)]
pub struct FrequencyWindow {
    kind: FrequencyWindowKind,
    config: SamplingConfig,
    // π(N+L)/2 and π(L−N)/2
    a: f64,
    b: f64,
}

// below this |z| the cubic factor 3(sinc z − cos z)/z² uses its Taylor series
const CUBIC_SERIES_RADIUS: f64 = 0.5;

fn cubic_factor(z: f64) -> f64 {
    if z.abs() < CUBIC_SERIES_RADIUS {
        // 3 Σ_{k≥1} (−1)^{k+1} 2k z^{2k−2} / (2k+1)!
        let z2 = z * z;
        let mut term = 2.0 / 6.0;
        let mut sum = term;
        let mut k = 1.0_f64;
        loop {
            let next = -term * z2 * (k + 1.0) / (k * (2.0 * k + 2.0) * (2.0 * k + 3.0));
            k += 1.0;
            term = next;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
            sum += term;
        }
        3.0 * sum
    } else {
        3.0 * (z.sin() / z - z.cos()) / (z * z)
    }
}

// cos(πy/2)/(1 − y²), written around y = ±1 so the removable zero cancels
fn cos_factor(y: f64) -> f64 {
    let d = 1.0 - y.abs();
    FRAC_PI_2 * sinc(FRAC_PI_2 * d) / (2.0 - d)
}

impl FrequencyWindow {
    pub fn new(kind: FrequencyWindowKind, config: SamplingConfig) -> Result<Self> {
        if config.lambda() <= 0.0 {
            return Err(invalid("frequency windows require oversampling lambda > 0"));
        }
        let n = config.n_f64();
        let l = config.rate();
        Ok(Self {
            kind,
            config,
            a: PI * (n + l) / 2.0,
            b: PI * (l - n) / 2.0,
        })
    }

    pub fn kind(&self) -> FrequencyWindowKind {
        self.kind
    }

    pub fn config(&self) -> SamplingConfig {
        self.config
    }

    /// `ψ̂(v)`.
    pub fn hat(&self, v: f64) -> f64 {
        let n = self.config.n_f64();
        let l = self.config.rate();
        let x = v.abs();
        if x <= n / 2.0 {
            return 1.0;
        }
        if x >= l / 2.0 {
            return 0.0;
        }
        let g = l - n;
        match self.kind {
            FrequencyWindowKind::Linear => 1.0 - (2.0 * x - n) / g,
            FrequencyWindowKind::Cubic => {
                16.0 / (g * g * g) * (x - l / 2.0).powi(2) * (x - (3.0 * n - l) / 4.0)
            }
            FrequencyWindowKind::RaisedCosine => 0.5 + 0.5 * (PI * (2.0 * x - n) / g).cos(),
            FrequencyWindowKind::ConvBSpline2 => {
                let h = g / 4.0;
                let s = x - (n + l) / 4.0;
                if s <= 0.0 {
                    1.0 - (s + h).powi(2) / (2.0 * h * h)
                } else {
                    (h - s).powi(2) / (2.0 * h * h)
                }
            }
        }
    }

    /// `ψ(t) = 2∫₀^{L/2} ψ̂(v) cos(2πvt) dv` from its closed form.
    pub fn time(&self, t: f64) -> f64 {
        let amp = 0.5 * (self.config.n_f64() + self.config.rate());
        let head = amp * sinc(self.a * t);
        let bt = self.b * t;
        head * match self.kind {
            FrequencyWindowKind::Linear => sinc(bt),
            FrequencyWindowKind::Cubic => cubic_factor(bt),
            FrequencyWindowKind::RaisedCosine => cos_factor(t * self.config.guard()),
            FrequencyWindowKind::ConvBSpline2 => {
                let s = sinc(0.5 * bt);
                s * s
            }
        }
    }

    /// Radius in units of `u = Lt` within which [`TrigForm`] must not be
    /// used: it covers the removable singularity at `u = 0`, the raised-cosine
    /// singularities at `u = ±L/(L−N)` and the region where `bu/L` is small
    /// enough for the closed forms to cancel.
    pub(crate) fn trig_guard_radius(&self) -> f64 {
        4.0 + self.config.rate() / self.config.guard()
    }

    /// Frequencies `a = π(N+L)/2`, `b = π(L−N)/2` of the closed form.
    pub(crate) fn trig_frequencies(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub(crate) fn trig_form(&self) -> TrigForm {
        let l = self.config.rate();
        let amp = 0.5 * (self.config.n_f64() + l);
        let alpha = self.a / l;
        let beta = self.b / l;
        let gamma = self.config.guard() / l;
        let scale = match self.kind {
            FrequencyWindowKind::Linear => amp / (alpha * beta),
            FrequencyWindowKind::Cubic => 3.0 * amp / (alpha * beta.powi(3)),
            FrequencyWindowKind::RaisedCosine => amp / alpha,
            FrequencyWindowKind::ConvBSpline2 => 2.0 * amp / (alpha * beta * beta),
        };
        TrigForm {
            kind: self.kind,
            scale,
            beta,
            gamma_sq: gamma * gamma,
        }
    }
}

/// `ψ(u/L)` written in terms of `u = Lt`, `sin(au/L)`, `sin(bu/L)` and
/// `cos(bu/L)` with a single division, for `|u|` beyond the guard radius.
#[derive(Debug, Clone, Copy)]
pub(crate) struct TrigForm {
    pub kind: FrequencyWindowKind,
    scale: f64,
    beta: f64,
    gamma_sq: f64,
}

impl TrigForm {
    #[inline(always)]
    pub fn linear(&self, u: f64, sin_a: f64, sin_b: f64) -> f64 {
        self.scale * sin_a * sin_b / (u * u)
    }

    #[inline(always)]
    pub fn cubic(&self, u: f64, sin_a: f64, sin_b: f64, cos_b: f64) -> f64 {
        let u2 = u * u;
        self.scale * sin_a * (sin_b - self.beta * u * cos_b) / (u2 * u2)
    }

    #[inline(always)]
    pub fn raised_cosine(&self, u: f64, sin_a: f64, cos_b: f64) -> f64 {
        self.scale * sin_a * cos_b / (u * (1.0 - self.gamma_sq * u * u))
    }

    #[inline(always)]
    pub fn conv2(&self, u: f64, sin_a: f64, cos_b: f64) -> f64 {
        self.scale * sin_a * (1.0 - cos_b) / (u * u * u)
    }

    #[cfg(test)]
    pub fn eval(&self, u: f64, sin_a: f64, sin_b: f64, cos_b: f64) -> f64 {
        match self.kind {
            FrequencyWindowKind::Linear => self.linear(u, sin_a, sin_b),
            FrequencyWindowKind::Cubic => self.cubic(u, sin_a, sin_b, cos_b),
            FrequencyWindowKind::RaisedCosine => self.raised_cosine(u, sin_a, cos_b),
            FrequencyWindowKind::ConvBSpline2 => self.conv2(u, sin_a, cos_b),
        }
    }
}
