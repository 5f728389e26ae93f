//! Scalar special functions used by the window formulas and error bounds.
//!
//! Everything here is real-valued, double precision and free of global
//! state.

use std::f64::consts::{FRAC_2_PI, FRAC_PI_2};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::adaptive_gauss_legendre;

/// Euler's constant.
pub const EULER_GAMMA: f64 = 0.5772156649015329;

/// Largest argument accepted by [`bessel_i0`] and [`struve_l0`].
pub const MAX_SERIES_ARG: f64 = 700.0;

const SINC_TAYLOR_RADIUS: f64 = 1e-4;
const SI_SERIES_RADIUS: f64 = 4.0;

/// Relative cutoff for the positive power series of `I₀` and `L₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesTolerance {
    rel_cutoff: f64,
}

impl SeriesTolerance {
    pub fn new(rel_cutoff: f64) -> Result<Self> {
        if !(rel_cutoff > 0.0 && rel_cutoff < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "series cutoff must lie in (0, 1), got {rel_cutoff}"
            )));
        }
        Ok(Self { rel_cutoff })
    }

    pub fn rel_cutoff(&self) -> f64 {
        self.rel_cutoff
    }
}

impl Default for SeriesTolerance {
    fn default() -> Self {
        Self { rel_cutoff: 1e-17 }
    }
}

/// `sin(x)/x`, with `sinc(0) = 1`.
#[inline]
pub fn sinc(x: f64) -> f64 {
    if x.abs() < SINC_TAYLOR_RADIUS {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// `sinh(x)/x`, with value 1 at the origin.
#[inline]
pub fn sinhc(x: f64) -> f64 {
    if x.abs() < SINC_TAYLOR_RADIUS {
        1.0 + x * x / 6.0
    } else {
        x.sinh() / x
    }
}

fn check_range(x: f64) -> Result<()> {
    if x.is_finite() && x.abs() <= MAX_SERIES_ARG {
        Ok(())
    } else {
        Err(Error::Overflow {
            x,
            limit: MAX_SERIES_ARG,
        })
    }
}

/// Modified Bessel function of the first kind, order zero.
pub fn bessel_i0(x: f64) -> Result<f64> {
    bessel_i0_with(x, SeriesTolerance::default())
}

/// [`bessel_i0`] with an explicit series cutoff.
pub fn bessel_i0_with(x: f64, tol: SeriesTolerance) -> Result<f64> {
    check_range(x)?;
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    loop {
        // x^{2k} / ((2k)!!)^2 = (x^2/4)^k / (k!)^2
        term *= q / (k * k);
        sum += term;
        if term < tol.rel_cutoff() * sum {
            break;
        }
        k += 1.0;
    }
    Ok(sum)
}

/// `I₀(x) − 1`, summed from the first nonconstant term so that small
/// arguments keep full relative precision.
pub fn bessel_i0_minus_one(x: f64) -> Result<f64> {
    check_range(x)?;
    let q = 0.25 * x * x;
    let mut term = q;
    let mut sum = q;
    let mut k = 2.0;
    while term >= 1e-17 * sum && term > 0.0 {
        term *= q / (k * k);
        sum += term;
        k += 1.0;
    }
    Ok(sum)
}

/// Modified Struve function of order zero.
pub fn struve_l0(x: f64) -> Result<f64> {
    struve_l0_with(x, SeriesTolerance::default())
}

/// [`struve_l0`] with an explicit series cutoff.
pub fn struve_l0_with(x: f64, tol: SeriesTolerance) -> Result<f64> {
    check_range(x)?;
    let x2 = x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    loop {
        // ratio of consecutive terms x^{2k} / ((2k+1)!!)^2
        let odd = 2.0 * k + 1.0;
        term *= x2 / (odd * odd);
        sum += term;
        if term < tol.rel_cutoff() * sum {
            break;
        }
        k += 1.0;
    }
    Ok(FRAC_2_PI * x * sum)
}

/// `I₀(x) − L₀(x)`, evaluated without cancellation.
///
/// Uses `I₀(x) − L₀(x) = (2/π)∫₀^{π/2} e^{−x sin s} ds` for `x ≥ 0` and the
/// parities of `I₀` (even) and `L₀` (odd) for `x < 0`.
pub fn bessel_i0_minus_struve_l0(x: f64) -> Result<f64> {
    check_range(x)?;
    if x < 0.0 {
        return Ok(bessel_i0(x)? + struve_l0(-x)?);
    }
    // boundary layer of width 1/x at s = 0
    let layer = (8.0 / x.max(1e-300)).min(FRAC_PI_2);
    let r = adaptive_gauss_legendre(|s| (-x * s.sin()).exp(), 0.0, FRAC_PI_2, &[layer], 1e-17);
    Ok(FRAC_2_PI * r.value)
}

/// Sine integral `Si(x) = ∫₀^x sin(w)/w dw`.
pub fn sine_integral(x: f64) -> f64 {
    let ax = x.abs();
    let value = if ax <= SI_SERIES_RADIUS {
        si_series(ax)
    } else {
        si_continued_fraction(ax)
    };
    value.copysign(x)
}

fn si_series(x: f64) -> f64 {
    let x2 = x * x;
    // running term (-1)^k x^{2k+1} / (2k+1)!
    let mut power = x;
    let mut sum = x;
    let mut k = 1;
    loop {
        let n = (2 * k) as f64;
        power *= -x2 / (n * (n + 1.0));
        let contrib = power / (n + 1.0);
        sum += contrib;
        if contrib.abs() <= 1e-17 * sum.abs() {
            break;
        }
        k += 1;
    }
    sum
}

/// Continued fraction for `E₁(ix)` evaluated by the modified Lentz method;
/// converges rapidly for `x ≳ 2`.
fn si_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = Complex64::new(1.0, x);
    let mut c = Complex64::new(1.0 / TINY, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 2..10_000 {
        let a = -((i - 1) as f64).powi(2);
        b += 2.0;
        d = (d * a + b).inv();
        c = b + c.inv() * a;
        let del = c * d;
        h *= del;
        if (del - 1.0).norm_sqr() < 1e-34 {
            break;
        }
    }
    let h = Complex64::new(x.cos(), -x.sin()) * h;
    FRAC_PI_2 + h.im
}

/// Harmonic number `H_T = Σ_{k=1}^T 1/k`, with `H_0 = 0`.
pub fn harmonic(t: u64) -> f64 {
    // smallest terms first, compensated
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for k in (1..=t).rev() {
        let term = 1.0 / k as f64;
        let s = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - s) + term;
        } else {
            comp += (term - s) + sum;
        }
        sum = s;
    }
    sum + comp
}

/// `I₀(β) − L₀(β) − 1 + (2/π)·Si(β)`, the bracket that appears in the
/// continuous Kaiser–Bessel error constant.
pub fn ckb_bracket(beta: f64) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "shape parameter must be positive, got {beta}"
        )));
    }
    Ok(bessel_i0_minus_struve_l0(beta)? - 1.0 + FRAC_2_PI * sine_integral(beta))
}
