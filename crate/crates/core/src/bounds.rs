//! Closed-form norm, approximation and robustness bounds, plus the numeric
//! operator norm of the truncated Shannon sum and the `E₁`/`E₂` constants of
//! the time-window error estimate.

use std::f64::consts::{FRAC_2_PI, LN_2, PI};

use crate::error::{invalid, Error, Result};
use crate::quad::CompositeGaussLegendre;
use crate::reconstruct::s_t_function;
use crate::specfun::{sinc, EULER_GAMMA};
use crate::windows::TimeWindow;

/// Lower and upper bound on `‖S_T‖ = max_t s_T(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormBracket {
    pub lower: f64,
    pub upper: f64,
    pub t: u64,
}

impl NormBracket {
    pub fn contains(&self, x: f64) -> bool {
        self.lower < x && x < self.upper
    }
}

/// Measured maximum error of one reconstruction next to its bound.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub method: String,
    pub n: u32,
    pub lambda: f64,
    /// `m` for time windows, `T` otherwise.
    pub param: i64,
    pub measured_max_error: f64,
    pub bound: Option<f64>,
    pub grid_size: usize,
}

impl ErrorReport {
    /// `true` when no bound applies or the measurement respects it.
    pub fn within_bound(&self) -> bool {
        self.bound.is_none_or(|b| self.measured_max_error <= b)
    }
}

fn require_positive_t(t: u64) -> Result<f64> {
    if t == 0 {
        Err(invalid("T must be at least 1"))
    } else {
        Ok(t as f64)
    }
}

/// `(2/π)(ln T + 2 ln 2 + γ)` minus/plus the finite-`T` corrections.
pub fn shannon_norm_bracket(t: u64) -> Result<NormBracket> {
    let tf = require_positive_t(t)?;
    let core = FRAC_2_PI * (tf.ln() + 2.0 * LN_2 + EULER_GAMMA);
    Ok(NormBracket {
        lower: core - 1.0 / (PI * tf * (2.0 * tf + 1.0)),
        upper: core + (tf + 2.0) / (PI * tf * (tf + 1.0)),
        t,
    })
}

/// `s_T(1/(2L)) = (4/π) Σ_{k=1}^T 1/(2k−1) + 2/(π(2T+1))`.
pub fn s_t_half_node(t: u64) -> f64 {
    // smallest terms first
    let odd: f64 = (1..=t).rev().map(|k| 1.0 / (2 * k - 1) as f64).sum();
    4.0 / PI * odd + 2.0 / (PI * (2 * t + 1) as f64)
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a maximum of a unimodal `f` on `[a, b]`.
/// Returns the best point seen and its value.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut best = if fc >= fd { (c, fc) } else { (d, fd) };
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN * (b - a);
            fd = f(d);
        }
        for (x, fx) in [(c, fc), (d, fd)] {
            if fx > best.1 {
                best = (x, fx);
            }
        }
    }
    best
}

/// `max_t s_T(t)` located on `[0, 1/L]` with `coarse` grid points and a
/// golden-section refinement around the best one.
pub fn shannon_norm_numeric(t: u64, rate: f64, coarse: usize) -> Result<f64> {
    require_positive_t(t)?;
    if coarse < 3 {
        return Err(invalid(format!("coarse grid needs at least 3 points, got {coarse}")));
    }
    if !(rate.is_finite() && rate > 0.0) {
        return Err(invalid(format!("rate must be positive, got {rate}")));
    }
    let radius = t as i64;
    let s = |x: f64| s_t_function(radius, rate, x);
    let h = 1.0 / (rate * (coarse - 1) as f64);
    let (mut best_i, mut best) = (0, f64::NEG_INFINITY);
    for i in 0..coarse {
        let v = s(h * i as f64);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let lo = h * best_i.saturating_sub(1) as f64;
    let hi = h * (best_i + 1).min(coarse - 1) as f64;
    let (_, refined) = golden_section_max(s, lo, hi, 1e-12 * h);
    let mid = s(0.5 / rate);
    Ok(best.max(refined).max(mid))
}

/// Bounds on the worst-case amplification of bounded sample errors by `S_T`.
pub fn noise_error_bounds(t: u64, epsilon: f64) -> Result<(f64, f64)> {
    let tf = require_positive_t(t)?;
    check_nonneg("epsilon", epsilon)?;
    let core = FRAC_2_PI * tf.ln() + 1.25;
    Ok((epsilon * core, epsilon * (core + 0.5 / tf)))
}

fn check_nonneg(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x >= 0.0 {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be finite and >= 0, got {x}")))
    }
}

fn check_freq_preconditions(n: f64, lambda: f64, t: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::Precondition(format!("frequency bounds need lambda > 0, got {lambda}")));
    }
    let l = n * (1.0 + lambda);
    if !(t > l) {
        return Err(Error::Precondition(format!("frequency bounds need T > L = {l}, got T = {t}")));
    }
    Ok(l)
}

/// Error bound for the linear frequency window, rate `(T−L)^{−3/2}`.
pub fn freq_lin_error_bound(n: f64, lambda: f64, t: f64, f_norm: f64) -> Result<f64> {
    let l = check_freq_preconditions(n, lambda, t)?;
    Ok((2.0 * l / 3.0).sqrt() * 2.0 * (1.0 + lambda) / (PI * PI * lambda) * (t - l).powf(-1.5) * f_norm)
}

/// Error bound shared by the cubic, raised-cosine and B-spline windows,
/// rate `(T−L)^{−5/2}`.
pub fn freq_cub_error_bound(n: f64, lambda: f64, t: f64, f_norm: f64) -> Result<f64> {
    let l = check_freq_preconditions(n, lambda, t)?;
    let q = (1.0 + lambda) / lambda;
    Ok((2.0 * l / 5.0).sqrt() * 24.0 * q * q / PI.powi(3) * (t - l).powf(-2.5) * f_norm)
}

fn check_time_preconditions(lambda: f64, m: f64) -> Result<()> {
    if !(lambda > 0.0) {
        return Err(Error::Precondition(format!("time-window bounds need lambda > 0, got {lambda}")));
    }
    if !(m >= 2.0) {
        return Err(Error::Precondition(format!("time-window bounds need m >= 2, got {m}")));
    }
    Ok(())
}

fn decay(lambda: f64, m: f64) -> f64 {
    (-m * PI * lambda / (1.0 + lambda)).exp()
}

/// `√N e^{−mπλ/(1+λ)} ‖f‖`.
pub fn sinh_error_bound(n: f64, lambda: f64, m: f64, f_norm: f64) -> Result<f64> {
    check_time_preconditions(lambda, m)?;
    Ok(n.sqrt() * decay(lambda, m) * f_norm)
}

/// `λ ≥ 1/(m−1)` up to a relative rounding allowance.
pub fn ckb_bound_applies(lambda: f64, m: f64) -> bool {
    m >= 2.0 && lambda * (m - 1.0) >= 1.0 - 1e-12
}

/// Error bound for the continuous Kaiser–Bessel window; needs `λ ≥ 1/(m−1)`.
pub fn ckb_error_bound(n: f64, lambda: f64, m: f64, f_norm: f64) -> Result<f64> {
    check_time_preconditions(lambda, m)?;
    if !ckb_bound_applies(lambda, m) {
        return Err(Error::Precondition(format!(
            "continuous Kaiser-Bessel bound needs lambda >= 1/(m-1) = {}, got {lambda}",
            1.0 / (m - 1.0)
        )));
    }
    let prefactor = 7.0 * n.sqrt() * m * PI * lambda * (1.0 + lambda + 4.0 * m * lambda) / (4.0 * (1.0 + lambda).powi(2));
    Ok(prefactor * decay(lambda, m) * f_norm)
}

/// `ε(2 + L φ̂(0))` for any admissible time window.
pub fn robustness_bound_general(epsilon: f64, rate: f64, phi_hat_zero: f64) -> Result<f64> {
    check_nonneg("epsilon", epsilon)?;
    Ok(epsilon * (2.0 + rate * phi_hat_zero))
}

/// `ε(2 + √((2+2λ)/λ) √m / (1 − e^{−2β}))` with `β = πmλ/(1+λ)`.
pub fn robustness_bound_sinh(epsilon: f64, lambda: f64, m: f64) -> Result<f64> {
    check_nonneg("epsilon", epsilon)?;
    check_time_preconditions(lambda, m)?;
    let beta = PI * m * lambda / (1.0 + lambda);
    let growth = ((2.0 + 2.0 * lambda) / lambda).sqrt() * m.sqrt();
    Ok(epsilon * (2.0 + growth / (-(-2.0 * beta).exp_m1())))
}

/// `ε(2 + √((2+2λ)/λ) √m)`.
pub fn robustness_bound_ckb(epsilon: f64, lambda: f64, m: f64) -> Result<f64> {
    check_nonneg("epsilon", epsilon)?;
    check_time_preconditions(lambda, m)?;
    Ok(epsilon * (2.0 + ((2.0 + 2.0 * lambda) / lambda).sqrt() * m.sqrt()))
}

/// `η(v) = 1 − ∫_{v−L/2}^{v+L/2} φ̂(u) du = 1 − 2L ∫₀^{m/L} φ(t) cos(2πvt) sinc(πLt) dt`.
pub fn eta(window: &TimeWindow, v: f64) -> f64 {
    let rule = CompositeGaussLegendre::new(64, 10);
    eta_with(window, v, &rule)
}

fn eta_with(window: &TimeWindow, v: f64, rule: &CompositeGaussLegendre) -> f64 {
    let l = window.config().rate();
    let r = window.support_radius();
    // t = r sin θ
    let integral = rule.integrate(0.0, std::f64::consts::FRAC_PI_2, |theta| {
        let (s, c) = theta.sin_cos();
        let t = r * s;
        window.eval(t) * (2.0 * PI * v * t).cos() * sinc(PI * l * t) * r * c
    });
    1.0 - 2.0 * l * integral
}

/// `E₁ = √N max_{|v|≤N/2} |η(v)|`, with the maximum taken over `points`
/// equispaced frequencies in `[0, N/2]` (η is even).
pub fn e1_constant(window: &TimeWindow, points: usize) -> Result<f64> {
    if points < 2 {
        return Err(invalid("E1 needs at least 2 frequency points"));
    }
    let n = window.config().n_f64();
    let rule = CompositeGaussLegendre::new(64, 10);
    let step = 0.5 * n / (points - 1) as f64;
    let worst = (0..points)
        .map(|i| eta_with(window, step * i as f64, &rule).abs())
        .fold(0.0, f64::max);
    Ok(n.sqrt() * worst)
}

/// `E₂ = √(2L)/(πm) φ(m/L)`.
pub fn e2_constant(window: &TimeWindow) -> f64 {
    let l = window.config().rate();
    let m = window.m() as f64;
    (2.0 * l).sqrt() / (PI * m) * window.eval(window.support_radius())
}
