use std::fs::File;
use std::io::{self, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;

use bandrecon::harness::{self, ExperimentName, ExperimentSpec, OutputFormat};
use clap::Parser;

/// Run a reconstruction experiment and check measured errors against their bounds.
///
/// Exits with status 0 when every bound check passes, 1 when some check
/// fails, and 2 on invalid input or I/O errors.
#[derive(Debug, Parser)]
#[command(name = "bandrecon", version)]
struct Cli {
    /// norm, nonrobustness, freq-decay, compare or robustness
    experiment: ExperimentName,
    /// Bandwidth N
    #[arg(long = "N")]
    n: Option<u32>,
    /// Oversampling parameters, comma separated
    #[arg(long, value_delimiter = ',')]
    lambda: Option<Vec<f64>>,
    /// Truncation parameters m, comma separated
    #[arg(long, value_delimiter = ',')]
    m: Option<Vec<u32>>,
    /// Exponents c with T = 2^c, comma separated
    #[arg(long = "T-exp", value_delimiter = ',')]
    t_exp: Option<Vec<u32>>,
    /// Bounded noise level
    #[arg(long)]
    eps: Option<f64>,
    /// Gaussian noise standard deviation
    #[arg(long)]
    rho: Option<f64>,
    /// Grid size on [-1, 1]
    #[arg(long = "S")]
    s: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Bounded-noise draws per configuration
    #[arg(long)]
    draws: Option<usize>,
    /// Gaussian trials per point
    #[arg(long)]
    trials: Option<usize>,
    /// Output file (stdout if absent)
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or tsv
    #[arg(long, default_value = "csv")]
    format: OutputFormat,
    /// Print fitted decay rates to stderr
    #[arg(long)]
    slopes: bool,
}

impl Cli {
    fn spec(&self) -> ExperimentSpec {
        let mut spec = ExperimentSpec::defaults(self.experiment);
        if let Some(n) = self.n {
            spec.n = n;
        }
        if let Some(l) = &self.lambda {
            spec.lambdas = l.clone();
        }
        if let Some(m) = &self.m {
            spec.m_values = m.clone();
        }
        if let Some(c) = &self.t_exp {
            spec.t_exponents = c.clone();
        }
        if let Some(e) = self.eps {
            spec.epsilon = e;
        }
        if let Some(r) = self.rho {
            spec.rho = r;
        }
        if let Some(s) = self.s {
            spec.grid_size = s;
        }
        if let Some(s) = self.seed {
            spec.seed = s;
        }
        if let Some(d) = self.draws {
            spec.draws = d;
        }
        if let Some(t) = self.trials {
            spec.gaussian_trials = t;
        }
        spec.output_path = self.out.clone();
        spec
    }
}

fn run(cli: &Cli) -> bandrecon::Result<bool> {
    let spec = cli.spec();
    let rows = harness::run(&spec)?;
    match &spec.output_path {
        Some(path) => harness::write_table(&rows, cli.format, BufWriter::new(File::create(path)?))?,
        None => harness::write_table(&rows, cli.format, io::stdout().lock())?,
    }
    if cli.slopes {
        for fit in harness::slope_fits(&rows) {
            eprintln!(
                "slope {} {} lambda={} {:?}: {:.4} ({} points)",
                fit.experiment, fit.window, fit.lambda, fit.kind, fit.slope, fit.points
            );
        }
    }
    let failed = harness::failures(&rows);
    if failed > 0 {
        eprintln!("{failed} of {} bound checks failed", rows.len());
        for r in rows.iter().filter(|r| !r.pass) {
            eprintln!(
                "  {} lambda={} param={}: {} vs {:?}",
                r.window, r.lambda, r.param, r.max_error, r.bound
            );
        }
    }
    Ok(failed == 0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
