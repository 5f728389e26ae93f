//! Test signals, equispaced sample sets and sample perturbations.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Normal, Uniform};

use crate::error::{invalid, Error, Result};
use crate::specfun::sinc;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TestFunctionKind {
    /// `√N sinc(Nπt)`
    UnitSinc,
    /// `√(4N/5) [sinc(Nπt) + ½ sinc(Nπ(t−1))]`
    ShiftedPair,
}

/// Bandlimited test signal with unit `L²` norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandlimitedTestFunction {
    kind: TestFunctionKind,
    n: u32,
}

impl BandlimitedTestFunction {
    pub fn new(kind: TestFunctionKind, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(invalid("bandwidth N must be at least 1"));
        }
        Ok(Self { kind, n })
    }

    pub fn unit_sinc(n: u32) -> Result<Self> {
        Self::new(TestFunctionKind::UnitSinc, n)
    }

    pub fn shifted_pair(n: u32) -> Result<Self> {
        Self::new(TestFunctionKind::ShiftedPair, n)
    }

    pub fn kind(&self) -> TestFunctionKind {
        self.kind
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `‖f‖_{L²}`; both kinds are normalized.
    pub fn l2_norm(&self) -> f64 {
        1.0
    }

    pub fn eval(&self, t: f64) -> f64 {
        let n = self.n as f64;
        match self.kind {
            TestFunctionKind::UnitSinc => n.sqrt() * sinc(n * PI * t),
            TestFunctionKind::ShiftedPair => {
                (0.8 * n).sqrt() * (sinc(n * PI * t) + 0.5 * sinc(n * PI * (t - 1.0)))
            }
        }
    }

    /// Samples `f(k/L)` for `k_min ≤ k ≤ k_max`.
    pub fn sample(&self, rate: f64, k_min: i64, k_max: i64) -> Result<SampleSet> {
        if !(rate.is_finite() && rate > 0.0) {
            return Err(invalid(format!("sampling rate must be positive, got {rate}")));
        }
        if k_min > k_max {
            return Err(invalid(format!("empty index range [{k_min}, {k_max}]")));
        }
        let values = (k_min..=k_max).map(|k| self.sample_at(rate, k)).collect();
        SampleSet::new(rate, k_min, values)
    }

    /// `f(k/L)`. For integral `L` the sinc arguments `πN(k − jL)/L` are
    /// reduced exactly, so lattice zeros come out as exact zeros.
    pub fn sample_at(&self, rate: f64, k: i64) -> f64 {
        if rate.fract() != 0.0 || rate > 1e9 {
            return self.eval(k as f64 / rate);
        }
        let n = self.n as f64;
        let q = rate as i64;
        let p = self.n as i64;
        match self.kind {
            TestFunctionKind::UnitSinc => n.sqrt() * sinc_pi_ratio(p, k, q),
            TestFunctionKind::ShiftedPair => {
                (0.8 * n).sqrt() * (sinc_pi_ratio(p, k, q) + 0.5 * sinc_pi_ratio(p, k - q, q))
            }
        }
    }
}

// sinc(π p k / q) with the sine argument reduced modulo 2π in integers
fn sinc_pi_ratio(p: i64, k: i64, q: i64) -> f64 {
    let num = p as i128 * k as i128;
    if num == 0 {
        return 1.0;
    }
    let r = num.rem_euclid(2 * q as i128);
    if r % q as i128 == 0 {
        return 0.0;
    }
    let s = (PI * r as f64 / q as f64).sin();
    s / (PI * num as f64 / q as f64)
}

/// Samples `f(k/L)` for consecutive indices `k_min..=k_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    rate: f64,
    k_min: i64,
    values: Vec<f64>,
}

impl SampleSet {
    pub fn new(rate: f64, k_min: i64, values: Vec<f64>) -> Result<Self> {
        if !(rate.is_finite() && rate > 0.0) {
            return Err(invalid(format!("sampling rate must be positive, got {rate}")));
        }
        if values.is_empty() {
            return Err(invalid("a sample set needs at least one value"));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(invalid(format!("sample at index {} is not finite", k_min + i as i64)));
        }
        Ok(Self { rate, k_min, values })
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn k_min(&self) -> i64 {
        self.k_min
    }

    pub fn k_max(&self) -> i64 {
        self.k_min + self.values.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, k: i64) -> Option<f64> {
        let i = k.checked_sub(self.k_min)?;
        usize::try_from(i).ok().and_then(|i| self.values.get(i).copied())
    }

    pub fn covers(&self, lo: i64, hi: i64) -> bool {
        lo >= self.k_min && hi <= self.k_max()
    }

    /// Coverage error naming the first missing index of `[lo, hi]`.
    pub fn require(&self, lo: i64, hi: i64) -> Result<()> {
        if self.covers(lo, hi) {
            return Ok(());
        }
        let index = if lo < self.k_min { lo } else { hi };
        Err(Error::Coverage {
            index,
            k_min: self.k_min,
            k_max: self.k_max(),
        })
    }

    /// Values for indices `lo..=hi`, which must be covered.
    pub fn slice(&self, lo: i64, hi: i64) -> Result<&[f64]> {
        self.require(lo, hi)?;
        let a = (lo - self.k_min) as usize;
        let b = (hi - self.k_min) as usize;
        Ok(&self.values[a..=b])
    }

    /// Same indices and rate, each value passed through `f(k, value)`.
    pub fn map<F: FnMut(i64, f64) -> f64>(&self, mut f: F) -> Result<Self> {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| f(self.k_min + i as i64, v))
            .collect();
        Self::new(self.rate, self.k_min, values)
    }

    /// Writes the `# L=<rate>` header followed by `index value` lines.
    pub fn write_text<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# L={}", self.rate)?;
        for (i, v) in self.values.iter().enumerate() {
            writeln!(out, "{} {}", self.k_min + i as i64, v)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_text<R: BufRead>(input: R) -> Result<Self> {
        let mut rate = None;
        let mut k_min = None;
        let mut values = Vec::new();
        for (lineno, line) in input.lines().enumerate() {
            let line = line?;
            let lineno = lineno + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            if let Some(rest) = trimmed.strip_prefix('#') {
                if rate.is_none() {
                    let rest = rest.trim();
                    let value = rest.strip_prefix("L=").ok_or_else(|| Error::Parse {
                        line: lineno,
                        message: format!("expected header `# L=<rate>`, found `{trimmed}`"),
                    })?;
                    rate = Some(value.trim().parse::<f64>().map_err(|e| Error::Parse {
                        line: lineno,
                        message: format!("bad rate `{value}`: {e}"),
                    })?);
                }
                continue;
            }
            if rate.is_none() {
                return Err(Error::Parse {
                    line: lineno,
                    message: "data before `# L=<rate>` header".into(),
                });
            }
            let mut parts = trimmed.split_whitespace();
            let (Some(k), Some(v), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("expected `index value`, found `{trimmed}`"),
                });
            };
            let k: i64 = k.parse().map_err(|e| Error::Parse {
                line: lineno,
                message: format!("bad index `{k}`: {e}"),
            })?;
            let v: f64 = v.parse().map_err(|e| Error::Parse {
                line: lineno,
                message: format!("bad value `{v}`: {e}"),
            })?;
            let expected = k_min.map(|k0: i64| k0 + values.len() as i64);
            match expected {
                None => k_min = Some(k),
                Some(e) if e != k => {
                    return Err(Error::Parse {
                        line: lineno,
                        message: format!("indices must be consecutive: expected {e}, found {k}"),
                    })
                }
                _ => {}
            }
            values.push(v);
        }
        let rate = rate.ok_or_else(|| Error::Parse {
            line: 0,
            message: "missing `# L=<rate>` header".into(),
        })?;
        let k_min = k_min.ok_or_else(|| Error::Parse {
            line: 0,
            message: "no samples".into(),
        })?;
        Self::new(rate, k_min, values)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_text(BufWriter::new(File::create(path)?))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_text(BufReader::new(File::open(path)?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NoiseKind {
    /// `ε_k = ε(−1)^{k+1} sign(2k−1)` on `|k| ≤ T`.
    WorstCaseSign,
    /// i.i.d. uniform on `[−ε, ε]`.
    BoundedUniform,
    /// i.i.d. normal with mean 0 and standard deviation `ρ`.
    ZeroMeanGaussian,
}

/// Sign of the worst-case perturbation at index `k`.
pub fn worst_case_sign(k: i64) -> f64 {
    let parity = if k.rem_euclid(2) == 1 { 1.0 } else { -1.0 };
    let side = if k >= 1 { 1.0 } else { -1.0 };
    parity * side
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    kind: NoiseKind,
    epsilon: f64,
    rho: f64,
    radius: i64,
    seed: u64,
}

impl NoiseModel {
    pub fn worst_case_sign(epsilon: f64, radius: i64) -> Result<Self> {
        check_level("epsilon", epsilon)?;
        if radius < 0 {
            return Err(invalid(format!("noise radius must be >= 0, got {radius}")));
        }
        Ok(Self {
            kind: NoiseKind::WorstCaseSign,
            epsilon,
            rho: 0.0,
            radius,
            seed: 0,
        })
    }

    pub fn bounded_uniform(epsilon: f64, seed: u64) -> Result<Self> {
        check_level("epsilon", epsilon)?;
        Ok(Self {
            kind: NoiseKind::BoundedUniform,
            epsilon,
            rho: 0.0,
            radius: 0,
            seed,
        })
    }

    pub fn gaussian(rho: f64, seed: u64) -> Result<Self> {
        check_level("rho", rho)?;
        Ok(Self {
            kind: NoiseKind::ZeroMeanGaussian,
            epsilon: 0.0,
            rho,
            radius: 0,
            seed,
        })
    }

    pub fn kind(&self) -> NoiseKind {
        self.kind
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn radius(&self) -> i64 {
        self.radius
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Perturbations for indices `k_min, k_min+1, …` (`len` of them).
    ///
    /// Random kinds draw in index order from a ChaCha20 stream seeded with
    /// `seed`, so the same model and range always give the same values.
    pub fn perturbation(&self, k_min: i64, len: usize) -> Vec<f64> {
        match self.kind {
            NoiseKind::WorstCaseSign => (0..len)
                .map(|i| {
                    let k = k_min + i as i64;
                    if k.abs() <= self.radius {
                        self.epsilon * worst_case_sign(k)
                    } else {
                        0.0
                    }
                })
                .collect(),
            NoiseKind::BoundedUniform => {
                if self.epsilon == 0.0 {
                    return vec![0.0; len];
                }
                let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
                let dist = Uniform::new_inclusive(-self.epsilon, self.epsilon)
                    .expect("epsilon validated at construction");
                (0..len).map(|_| dist.sample(&mut rng)).collect()
            }
            NoiseKind::ZeroMeanGaussian => {
                if self.rho == 0.0 {
                    return vec![0.0; len];
                }
                let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
                let dist = Normal::new(0.0, self.rho).expect("rho validated at construction");
                (0..len).map(|_| dist.sample(&mut rng)).collect()
            }
        }
    }

    /// New sample set with the perturbation added.
    pub fn apply(&self, s: &SampleSet) -> Result<SampleSet> {
        if self.kind == NoiseKind::WorstCaseSign {
            s.require(-self.radius, self.radius)?;
        }
        let noise = self.perturbation(s.k_min(), s.len());
        let values = s.values().iter().zip(&noise).map(|(v, e)| v + e).collect();
        SampleSet::new(s.rate(), s.k_min(), values)
    }
}

fn check_level(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x >= 0.0 {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be finite and >= 0, got {x}")))
    }
}

/// Free-function form of [`NoiseModel::apply`].
pub fn apply_noise(s: &SampleSet, n: &NoiseModel) -> Result<SampleSet> {
    n.apply(s)
}
