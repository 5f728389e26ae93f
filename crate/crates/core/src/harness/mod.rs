//! Experiment runner: reproduces the norm, noise, decay, comparison and
//! robustness studies as tables of [`ResultRow`]s that pair each measured
//! error with its theoretical bound.

mod experiments;
mod fit;
mod output;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};

pub use experiments::{
    run_compare_experiment, run_freq_decay_experiment, run_nonrobustness_experiment, run_norm_experiment,
    run_robustness_experiment,
};
pub use fit::{least_squares_slope, slope_fits, SlopeFit, SlopeKind};
pub use output::{format_float, write_table, OutputFormat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExperimentName {
    Norm,
    Nonrobustness,
    FreqDecay,
    Compare,
    Robustness,
}

impl ExperimentName {
    pub const ALL: [ExperimentName; 5] = [
        ExperimentName::Norm,
        ExperimentName::Nonrobustness,
        ExperimentName::FreqDecay,
        ExperimentName::Compare,
        ExperimentName::Robustness,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentName::Norm => "norm",
            ExperimentName::Nonrobustness => "nonrobustness",
            ExperimentName::FreqDecay => "freq-decay",
            ExperimentName::Compare => "compare",
            ExperimentName::Robustness => "robustness",
        }
    }
}

impl fmt::Display for ExperimentName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentName::ALL
            .into_iter()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown experiment `{s}`")))
    }
}

/// Parameters of one experiment run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub name: ExperimentName,
    pub n: u32,
    pub lambdas: Vec<f64>,
    /// `c` in `T = 2^c` (norm, nonrobustness, freq-decay).
    pub t_exponents: Vec<u32>,
    /// Truncation parameters (compare, robustness).
    pub m_values: Vec<u32>,
    pub epsilon: f64,
    pub rho: f64,
    /// Evaluation grid size on `[-1, 1]`.
    pub grid_size: usize,
    pub seed: u64,
    /// Bounded-noise draws per configuration (robustness).
    pub draws: usize,
    /// Gaussian trials per evaluation point (robustness).
    pub gaussian_trials: usize,
    /// Number of random evaluation points for the Gaussian variance check.
    pub gaussian_points: usize,
    /// Coarse grid size for the numeric operator norm (norm).
    pub norm_grid: usize,
    pub output_path: Option<PathBuf>,
}

pub const DEFAULT_GRID: usize = 100_000;

impl ExperimentSpec {
    /// The protocol's parameter ranges for `name`.
    pub fn defaults(name: ExperimentName) -> Self {
        let base = Self {
            name,
            n: 128,
            lambdas: vec![0.5, 1.0, 2.0],
            t_exponents: Vec::new(),
            m_values: Vec::new(),
            epsilon: 1e-3,
            rho: 1e-3,
            grid_size: DEFAULT_GRID,
            seed: 20_240_101,
            draws: 100,
            gaussian_trials: 10_000,
            gaussian_points: 10,
            norm_grid: 10_000,
            output_path: None,
        };
        match name {
            ExperimentName::Norm => Self {
                lambdas: vec![0.0, 0.5, 1.0],
                t_exponents: (0..=12).collect(),
                ..base
            },
            ExperimentName::Nonrobustness => Self {
                lambdas: vec![0.0, 0.5, 1.0, 2.0],
                t_exponents: (0..=12).collect(),
                ..base
            },
            ExperimentName::FreqDecay => Self {
                t_exponents: (0..=15).collect(),
                ..base
            },
            ExperimentName::Compare | ExperimentName::Robustness => Self {
                n: 256,
                m_values: (2..=10).collect(),
                ..base
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let cfg = |m: String| Err(Error::Config(m));
        if self.n == 0 {
            return cfg("N must be at least 1".into());
        }
        if self.lambdas.is_empty() {
            return cfg("lambda list is empty".into());
        }
        if let Some(l) = self.lambdas.iter().find(|l| !(l.is_finite() && **l >= 0.0)) {
            return cfg(format!("lambda must be finite and >= 0, got {l}"));
        }
        if self.grid_size < 2 {
            return cfg(format!("grid size S must be at least 2, got {}", self.grid_size));
        }
        if !(self.epsilon.is_finite() && self.epsilon >= 0.0) {
            return cfg(format!("eps must be finite and >= 0, got {}", self.epsilon));
        }
        if !(self.rho.is_finite() && self.rho >= 0.0) {
            return cfg(format!("rho must be finite and >= 0, got {}", self.rho));
        }
        match self.name {
            ExperimentName::Norm | ExperimentName::Nonrobustness | ExperimentName::FreqDecay => {
                if self.t_exponents.is_empty() {
                    return cfg("T-exp list is empty".into());
                }
                if let Some(c) = self.t_exponents.iter().find(|&&c| c > 40) {
                    return cfg(format!("T exponent {c} too large"));
                }
            }
            ExperimentName::Compare | ExperimentName::Robustness => {
                if self.m_values.is_empty() {
                    return cfg("m list is empty".into());
                }
                if let Some(m) = self.m_values.iter().find(|&&m| m < 2) {
                    return cfg(format!("m must be at least 2, got {m}"));
                }
            }
        }
        if matches!(
            self.name,
            ExperimentName::FreqDecay | ExperimentName::Compare | ExperimentName::Robustness
        ) {
            if let Some(l) = self.lambdas.iter().find(|l| **l <= 0.0) {
                return cfg(format!("{} needs lambda > 0, got {l}", self.name));
            }
        }
        if self.name == ExperimentName::Norm && self.norm_grid < 3 {
            return cfg("norm grid needs at least 3 points".into());
        }
        if self.name == ExperimentName::Robustness && (self.gaussian_trials < 2 || self.gaussian_points == 0) {
            return cfg("Gaussian check needs at least 2 trials and 1 point".into());
        }
        Ok(())
    }
}

/// Whether a row's measurement must stay below or above its bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundSide {
    Upper,
    Lower,
}

/// One line of an experiment table.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub experiment: ExperimentName,
    pub window: String,
    pub n: u32,
    pub lambda: f64,
    pub param: i64,
    pub samples_used: usize,
    pub max_error: f64,
    pub bound: Option<f64>,
    pub side: BoundSide,
    pub pass: bool,
}

impl ResultRow {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        experiment: ExperimentName,
        window: impl Into<String>,
        n: u32,
        lambda: f64,
        param: i64,
        samples_used: usize,
        max_error: f64,
        bound: Option<f64>,
        side: BoundSide,
    ) -> Self {
        let pass = match (bound, side) {
            (None, _) => true,
            (Some(b), BoundSide::Upper) => max_error <= b,
            (Some(b), BoundSide::Lower) => max_error >= b,
        };
        Self {
            experiment,
            window: window.into(),
            n,
            lambda,
            param,
            samples_used,
            max_error,
            bound,
            side,
            pass,
        }
    }
}

/// Runs the experiment named in `spec`; rows come back sorted by
/// `(window, lambda, param)`.
pub fn run(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    spec.validate()?;
    let mut rows = match spec.name {
        ExperimentName::Norm => run_norm_experiment(spec)?,
        ExperimentName::Nonrobustness => run_nonrobustness_experiment(spec)?,
        ExperimentName::FreqDecay => run_freq_decay_experiment(spec)?,
        ExperimentName::Compare => run_compare_experiment(spec)?,
        ExperimentName::Robustness => run_robustness_experiment(spec)?,
    };
    sort_rows(&mut rows);
    Ok(rows)
}

pub fn sort_rows(rows: &mut [ResultRow]) {
    rows.sort_by(|a, b| {
        a.experiment
            .cmp(&b.experiment)
            .then_with(|| a.window.cmp(&b.window))
            .then_with(|| a.lambda.total_cmp(&b.lambda))
            .then_with(|| a.param.cmp(&b.param))
    });
}

/// Number of rows whose bound check failed.
pub fn failures(rows: &[ResultRow]) -> usize {
    rows.iter().filter(|r| !r.pass).count()
}

/// Derives independent stream seeds from a base seed and a tag tuple.
pub fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    // splitmix64 finalizer applied after folding each part in
    let mut z = base;
    for &p in parts {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15).wrapping_add(p.wrapping_mul(0xD1B5_4A32_D192_ED03));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
    }
    z
}
