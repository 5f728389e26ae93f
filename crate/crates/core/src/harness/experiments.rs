use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use super::{derive_seed, BoundSide, ExperimentName, ExperimentSpec, ResultRow};
use crate::bounds::{
    ckb_bound_applies, ckb_error_bound, freq_cub_error_bound, freq_lin_error_bound, golden_section_max,
    noise_error_bounds, robustness_bound_ckb, robustness_bound_general, robustness_bound_sinh, s_t_half_node,
    shannon_norm_bracket, shannon_norm_numeric, sinh_error_bound,
};
use crate::error::Result;
use crate::reconstruct::{grid, shannon_partial_sum, LocalOperator, Method, Reconstructor};
use crate::sampling::{BandlimitedTestFunction, NoiseModel, SampleSet};
use crate::specfun::sinc;
use crate::windows::{FrequencyWindow, FrequencyWindowKind, SamplingConfig, TimeWindow, TimeWindowKind};

const TIME_KINDS: [TimeWindowKind; 2] = [TimeWindowKind::SinhType, TimeWindowKind::ContinuousKaiserBessel];

fn max_abs(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

fn max_abs_error(exact: &[f64], approx: &[f64]) -> f64 {
    max_abs(exact.iter().zip(approx).map(|(a, b)| a - b))
}

/// `L` rounded to an integer for index arithmetic such as `T = L + m`.
fn integer_rate(cfg: &SamplingConfig) -> i64 {
    cfg.rate().round() as i64
}

/// Numeric `max s_T` against the bracket and the half-node value.
pub fn run_norm_experiment(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    let name = ExperimentName::Norm;
    let mut rows = Vec::new();
    for &lambda in &spec.lambdas {
        let cfg = SamplingConfig::new(spec.n, lambda)?;
        for &c in &spec.t_exponents {
            let t = 1u64 << c;
            let numeric = shannon_norm_numeric(t, cfg.rate(), spec.norm_grid)?;
            let bracket = shannon_norm_bracket(t)?;
            let used = 2 * t as usize + 1;
            let p = t as i64;
            // containment is strict on both sides
            let mut upper = ResultRow::new(name, "shannon", spec.n, lambda, p, used, numeric, Some(bracket.upper), BoundSide::Upper);
            upper.pass = numeric < bracket.upper;
            let mut lower = ResultRow::new(name, "shannon-lower", spec.n, lambda, p, used, numeric, Some(bracket.lower), BoundSide::Lower);
            lower.pass = numeric > bracket.lower;
            let gap = (numeric - s_t_half_node(t)).abs();
            let gap_bound = 2.0 / (std::f64::consts::PI * (2.0 * t as f64 + 1.0)) + 1e-6;
            let half = ResultRow::new(name, "shannon-half-node", spec.n, lambda, p, used, gap, Some(gap_bound), BoundSide::Upper);
            rows.extend([upper, lower, half]);
        }
    }
    Ok(rows)
}

/// Largest `|g|` over the grid, refined by golden section around the best
/// grid point.
fn grid_sup<G: Fn(f64) -> f64 + Sync>(points: &[f64], values: &[f64], g: G) -> f64 {
    let (best_i, best) = values
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v.abs() > acc.1 { (i, v.abs()) } else { acc });
    let lo = points[best_i.saturating_sub(1)];
    let hi = points[(best_i + 1).min(points.len() - 1)];
    let (_, refined) = golden_section_max(|x| g(x).abs(), lo, hi, 1e-13);
    best.max(refined)
}

/// Worst-case noise amplification `max |Σ ε_k sinc(π(Lt − k))|`.
pub fn run_nonrobustness_experiment(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    let name = ExperimentName::Nonrobustness;
    let points = grid(-1.0, 1.0, spec.grid_size)?;
    let mut rows = Vec::new();
    for &lambda in &spec.lambdas {
        let cfg = SamplingConfig::new(spec.n, lambda)?;
        for &c in &spec.t_exponents {
            let t = 1i64 << c;
            let zero = SampleSet::new(cfg.rate(), -t, vec![0.0; 2 * t as usize + 1])?;
            let noise = NoiseModel::worst_case_sign(spec.epsilon, t)?.apply(&zero)?;
            let rec = Reconstructor::new(Method::ClassicalShannon { t }, noise)?;
            let values = rec.evaluate_points(&points)?;
            let measured = grid_sup(&points, &values, |x| shannon_partial_sum(rec.samples(), t, x).unwrap_or(0.0));
            let (lower, upper) = noise_error_bounds(t as u64, spec.epsilon)?;
            let used = rec.samples_used(-1.0, 1.0);
            rows.push(ResultRow::new(name, "shannon", spec.n, lambda, t, used, measured, Some(upper), BoundSide::Upper));
            rows.push(ResultRow::new(name, "shannon-lower", spec.n, lambda, t, used, measured, Some(lower), BoundSide::Lower));
        }
    }
    Ok(rows)
}

fn freq_bound(kind: FrequencyWindowKind, cfg: &SamplingConfig, t: f64, f_norm: f64) -> Option<f64> {
    if t <= cfg.rate() {
        return None;
    }
    let (n, lambda) = (cfg.n_f64(), cfg.lambda());
    match kind {
        FrequencyWindowKind::Linear => freq_lin_error_bound(n, lambda, t, f_norm).ok(),
        _ => freq_cub_error_bound(n, lambda, t, f_norm).ok(),
    }
}

/// Error of `P_{ψ,T}` for the unit sinc as `T = 2^c` grows.
pub fn run_freq_decay_experiment(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    let name = ExperimentName::FreqDecay;
    let f = BandlimitedTestFunction::unit_sinc(spec.n)?;
    let points = grid(-1.0, 1.0, spec.grid_size)?;
    let exact: Vec<f64> = points.par_iter().map(|&x| f.eval(x)).collect();
    let mut rows = Vec::new();
    for &lambda in &spec.lambdas {
        let cfg = SamplingConfig::new(spec.n, lambda)?;
        for &c in &spec.t_exponents {
            let t = 1i64 << c;
            let samples = f.sample(cfg.rate(), -t, t)?;
            for kind in FrequencyWindowKind::ALL {
                let window = FrequencyWindow::new(kind, cfg)?;
                let rec = Reconstructor::new(Method::FrequencyReg { window, t }, samples.clone())?;
                let approx = rec.evaluate_points(&points)?;
                let err = max_abs_error(&exact, &approx);
                let bound = freq_bound(kind, &cfg, t as f64, f.l2_norm());
                let used = rec.samples_used(-1.0, 1.0);
                rows.push(ResultRow::new(name, kind.name(), spec.n, lambda, t, used, err, bound, BoundSide::Upper));
            }
        }
    }
    Ok(rows)
}

fn time_bound(kind: TimeWindowKind, cfg: &SamplingConfig, m: f64, f_norm: f64) -> Option<f64> {
    let (n, lambda) = (cfg.n_f64(), cfg.lambda());
    match kind {
        TimeWindowKind::SinhType => sinh_error_bound(n, lambda, m, f_norm).ok(),
        TimeWindowKind::ContinuousKaiserBessel if ckb_bound_applies(lambda, m) => {
            ckb_error_bound(n, lambda, m, f_norm).ok()
        }
        TimeWindowKind::ContinuousKaiserBessel => None,
    }
}

/// All seven methods on the shifted pair with `T = L + m`.
pub fn run_compare_experiment(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    let name = ExperimentName::Compare;
    let f = BandlimitedTestFunction::shifted_pair(spec.n)?;
    let points = grid(-1.0, 1.0, spec.grid_size)?;
    let exact: Vec<f64> = points.par_iter().map(|&x| f.eval(x)).collect();
    let mut rows = Vec::new();
    for &lambda in &spec.lambdas {
        let cfg = SamplingConfig::new(spec.n, lambda)?;
        for &m in &spec.m_values {
            let t = integer_rate(&cfg) + m as i64;
            let samples = f.sample(cfg.rate(), -t, t)?;
            let mut methods = vec![(Method::ClassicalShannon { t }, None)];
            for kind in FrequencyWindowKind::ALL {
                let window = FrequencyWindow::new(kind, cfg)?;
                methods.push((Method::FrequencyReg { window, t }, freq_bound(kind, &cfg, t as f64, f.l2_norm())));
            }
            for kind in TIME_KINDS {
                let window = TimeWindow::new(kind, m, cfg)?;
                methods.push((Method::TimeReg { window }, time_bound(kind, &cfg, m as f64, f.l2_norm())));
            }
            for (method, bound) in methods {
                let label = method.label();
                let rec = Reconstructor::new(method, samples.clone())?;
                let err = max_abs_error(&exact, &rec.evaluate_points(&points)?);
                let used = rec.samples_used(-1.0, 1.0);
                rows.push(ResultRow::new(name, label, spec.n, lambda, m as i64, used, err, bound, BoundSide::Upper));
            }
        }
    }
    Ok(rows)
}

/// Bounded-noise deviation of both time-window methods plus the Gaussian
/// variance of the Shannon noise term.
pub fn run_robustness_experiment(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    let name = ExperimentName::Robustness;
    let points = grid(-1.0, 1.0, spec.grid_size)?;
    let mut rows = Vec::new();
    for (li, &lambda) in spec.lambdas.iter().enumerate() {
        let cfg = SamplingConfig::new(spec.n, lambda)?;
        for &m in &spec.m_values {
            let t = integer_rate(&cfg) + m as i64;
            let len = 2 * t as usize + 1;
            for (ki, kind) in TIME_KINDS.into_iter().enumerate() {
                let window = TimeWindow::new(kind, m, cfg)?;
                let op = LocalOperator::new(&window, cfg.rate(), &points);
                let mut worst = 0.0f64;
                for draw in 0..spec.draws {
                    let seed = derive_seed(spec.seed, &[li as u64, m as u64, ki as u64, draw as u64]);
                    let noise = NoiseModel::bounded_uniform(spec.epsilon, seed)?.perturbation(-t, len);
                    let dev = max_abs(op.apply(&SampleSet::new(cfg.rate(), -t, noise)?)?);
                    worst = worst.max(dev);
                }
                let (lf, mf) = (lambda, m as f64);
                let specific = match kind {
                    TimeWindowKind::SinhType => robustness_bound_sinh(spec.epsilon, lf, mf)?,
                    TimeWindowKind::ContinuousKaiserBessel => robustness_bound_ckb(spec.epsilon, lf, mf)?,
                };
                let general = robustness_bound_general(spec.epsilon, cfg.rate(), window.fourier_transform(0.0))?;
                let used = 2 * (m as usize + integer_rate(&cfg) as usize) + 1;
                let p = m as i64;
                rows.push(ResultRow::new(name, kind.name(), spec.n, lambda, p, used, worst, Some(specific), BoundSide::Upper));
                let g = format!("{}-general", kind.name());
                rows.push(ResultRow::new(name, g, spec.n, lambda, p, used, worst, Some(general), BoundSide::Upper));
            }
        }
        rows.push(gaussian_variance_row(spec, li, &cfg)?);
    }
    Ok(rows)
}

/// Largest empirical variance of `Δ_T(t) = Σ_{|k|≤T} e_k sinc(π(Lt − k))`
/// over random points, `T = L`, `e_k ~ N(0, ρ²)`.
fn gaussian_variance_row(spec: &ExperimentSpec, lambda_index: usize, cfg: &SamplingConfig) -> Result<ResultRow> {
    let t = integer_rate(cfg);
    let len = 2 * t as usize + 1;
    let mut rng = ChaCha20Rng::seed_from_u64(derive_seed(spec.seed, &[lambda_index as u64, u64::MAX]));
    let at: Vec<f64> = (0..spec.gaussian_points).map(|_| rng.random_range(-1.0..=1.0)).collect();
    let weights: Vec<Vec<f64>> = at
        .iter()
        .map(|&x| (0..len).map(|j| sinc(std::f64::consts::PI * (cfg.rate() * x - (j as i64 - t) as f64))).collect())
        .collect();
    let mut sum = vec![0.0; at.len()];
    let mut sum_sq = vec![0.0; at.len()];
    let mut e = vec![0.0; len];
    if spec.rho > 0.0 {
        let normal = Normal::new(0.0, spec.rho).expect("rho validated");
        for _ in 0..spec.gaussian_trials {
            e.iter_mut().for_each(|x| *x = normal.sample(&mut rng));
            for (i, w) in weights.iter().enumerate() {
                let d: f64 = w.iter().zip(&e).map(|(a, b)| a * b).sum();
                sum[i] += d;
                sum_sq[i] += d * d;
            }
        }
    }
    let n = spec.gaussian_trials as f64;
    let var = sum
        .iter()
        .zip(&sum_sq)
        .map(|(s, q)| ((q - s * s / n) / (n - 1.0)).max(0.0))
        .fold(0.0, f64::max);
    let bound = 1.1 * spec.rho * spec.rho;
    Ok(ResultRow::new(
        ExperimentName::Robustness,
        "shannon-gaussian",
        spec.n,
        cfg.lambda(),
        t,
        len,
        var,
        Some(bound),
        BoundSide::Upper,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(name: ExperimentName) -> ExperimentSpec {
        let mut s = ExperimentSpec::defaults(name);
        s.grid_size = 2001;
        s
    }

    #[test]
    fn norm_rows_contained() {
        let mut s = small(ExperimentName::Norm);
        s.t_exponents = vec![0, 3, 6];
        s.norm_grid = 2000;
        let rows = run_norm_experiment(&s).unwrap();
        assert_eq!(rows.len(), 3 * 3 * 3);
        assert!(rows.iter().all(|r| r.pass), "{rows:?}");
    }

    #[test]
    fn zero_noise_gives_zero() {
        let mut s = small(ExperimentName::Nonrobustness);
        s.epsilon = 0.0;
        s.t_exponents = vec![2];
        s.lambdas = vec![1.0];
        let rows = run_nonrobustness_experiment(&s).unwrap();
        assert!(rows.iter().all(|r| r.max_error == 0.0));

        let mut s = small(ExperimentName::Robustness);
        s.epsilon = 0.0;
        s.rho = 0.0;
        s.lambdas = vec![1.0];
        s.m_values = vec![3];
        s.draws = 2;
        s.gaussian_trials = 10;
        let rows = run_robustness_experiment(&s).unwrap();
        assert!(rows.iter().all(|r| r.max_error == 0.0 && r.pass), "{rows:?}");
    }

    #[test]
    fn nonrobustness_in_bracket() {
        let mut s = small(ExperimentName::Nonrobustness);
        s.t_exponents = vec![0, 4];
        let rows = run_nonrobustness_experiment(&s).unwrap();
        assert!(rows.iter().all(|r| r.pass), "{rows:?}");
    }

    #[test]
    fn compare_uses_equal_sample_counts() {
        let mut s = small(ExperimentName::Compare);
        s.lambdas = vec![1.0];
        s.m_values = vec![4];
        let rows = run_compare_experiment(&s).unwrap();
        assert_eq!(rows.len(), 7);
        let used = rows[0].samples_used;
        assert!(rows.iter().all(|r| r.samples_used == used));
        assert_eq!(used, 2 * 4 + 2 * 512 + 1);
    }

    #[test]
    fn freq_bound_only_past_rate() {
        let mut s = small(ExperimentName::FreqDecay);
        s.lambdas = vec![1.0];
        s.t_exponents = vec![8, 9];
        let rows = run_freq_decay_experiment(&s).unwrap();
        for r in &rows {
            assert_eq!(r.bound.is_some(), r.param > 256, "{r:?}");
        }
    }

    #[test]
    fn robustness_deterministic() {
        let mut s = small(ExperimentName::Robustness);
        s.lambdas = vec![0.5];
        s.m_values = vec![2];
        s.draws = 3;
        s.gaussian_trials = 50;
        let a = run_robustness_experiment(&s).unwrap();
        let b = run_robustness_experiment(&s).unwrap();
        assert_eq!(a, b);
        s.seed += 1;
        assert_ne!(a, run_robustness_experiment(&s).unwrap());
    }
}
