use super::{ExperimentName, ResultRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlopeKind {
    /// `log(error)` against `log(T − L)`.
    LogLog,
    /// `log(error)` against `m`.
    SemiLog,
}

/// A fitted decay rate for one `(experiment, window, λ)` series.
#[derive(Debug, Clone, PartialEq)]
pub struct SlopeFit {
    pub experiment: ExperimentName,
    pub window: String,
    pub lambda: f64,
    pub kind: SlopeKind,
    pub slope: f64,
    pub points: usize,
}

/// Ordinary least-squares slope of `y` on `x`; `None` with fewer than two
/// distinct abscissae.
pub fn least_squares_slope(xy: &[(f64, f64)]) -> Option<f64> {
    if xy.len() < 2 {
        return None;
    }
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn series(rows: &[ResultRow], experiment: ExperimentName) -> Vec<(String, f64, Vec<&ResultRow>)> {
    let mut out: Vec<(String, f64, Vec<&ResultRow>)> = Vec::new();
    for r in rows.iter().filter(|r| r.experiment == experiment) {
        match out.iter_mut().find(|(w, l, _)| *w == r.window && *l == r.lambda) {
            Some(entry) => entry.2.push(r),
            None => out.push((r.window.clone(), r.lambda, vec![r])),
        }
    }
    out
}

/// Decay rates read off the freq-decay and compare tables.
///
/// freq-decay series are fitted log-log in `T − L` over rows with `T > L`
/// and `T − L` within a decade of the largest value; compare series of the
/// time windows are fitted semilog in `m` over all rows.
pub fn slope_fits(rows: &[ResultRow]) -> Vec<SlopeFit> {
    let mut fits = Vec::new();
    for (window, lambda, group) in series(rows, ExperimentName::FreqDecay) {
        let valid: Vec<(f64, f64)> = group
            .iter()
            .filter_map(|r| {
                let gap = r.param as f64 - r.n as f64 * (1.0 + r.lambda);
                (gap > 0.0 && r.max_error > 0.0).then_some((gap, r.max_error))
            })
            .collect();
        let Some(top) = valid.iter().map(|p| p.0).reduce(f64::max) else {
            continue;
        };
        let xy: Vec<(f64, f64)> = valid
            .iter()
            .filter(|p| p.0 >= top / 10.0)
            .map(|p| (p.0.ln(), p.1.ln()))
            .collect();
        if let Some(slope) = least_squares_slope(&xy) {
            fits.push(SlopeFit {
                experiment: ExperimentName::FreqDecay,
                window,
                lambda,
                kind: SlopeKind::LogLog,
                slope,
                points: xy.len(),
            });
        }
    }
    for (window, lambda, group) in series(rows, ExperimentName::Compare) {
        if window != "sinh" && window != "ckb" {
            continue;
        }
        let xy: Vec<(f64, f64)> = group
            .iter()
            .filter(|r| r.max_error > 0.0)
            .map(|r| (r.param as f64, r.max_error.ln()))
            .collect();
        if let Some(slope) = least_squares_slope(&xy) {
            fits.push(SlopeFit {
                experiment: ExperimentName::Compare,
                window,
                lambda,
                kind: SlopeKind::SemiLog,
                slope,
                points: xy.len(),
            });
        }
    }
    fits
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::BoundSide;

    #[test]
    fn exact_line() {
        let xy: Vec<_> = (0..5).map(|i| (i as f64, 3.0 - 2.5 * i as f64)).collect();
        assert!((least_squares_slope(&xy).unwrap() + 2.5).abs() < 1e-14);
        assert_eq!(least_squares_slope(&[(1.0, 1.0)]), None);
        assert_eq!(least_squares_slope(&[(1.0, 1.0), (1.0, 2.0)]), None);
    }

    #[test]
    fn power_law_recovered_over_last_decade() {
        let rows: Vec<ResultRow> = (0..=15)
            .map(|c| {
                let t = 1i64 << c;
                let gap = t as f64 - 256.0;
                let err = if gap > 0.0 { gap.powf(-1.5) } else { 1.0 };
                ResultRow::new(ExperimentName::FreqDecay, "lin", 128, 1.0, t, 0, err, None, BoundSide::Upper)
            })
            .collect();
        let fits = slope_fits(&rows);
        assert_eq!(fits.len(), 1);
        assert!((fits[0].slope + 1.5).abs() < 1e-12);
        assert_eq!(fits[0].points, 4);
    }
}
