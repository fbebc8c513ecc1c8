use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use fracfisher_cli::{read_config, run, write_outputs, Command, ConfigError, ExperimentConfig, Metadata};
use thiserror::Error;

const OUTPUTS: &str = "\
OUTPUTS (written atomically into the output directory)
  report.json     command, resolved config, results, contracts, violations;
                  byte-identical for identical config and seed
  metadata.json   timestamp_unix, elapsed_seconds, version
  trace-*.csv     plot data, one header row, numbers in Rust `{:e}` form:
    stable           trace-density.csv    x,density
    linnik           trace-density.csv    x,inversion,reference
    fisher           trace-score.csv      x,relative_score,retained
    clt-sweep        trace-sweep.csv      n,fisher_value,step_bound,global_bound,truncation
    bs-check         trace-bs.csv         first,second,delta,lhs,rhs,tolerance
    diffuse          trace-density.csv    x,initial,evolved
    entropy          trace-entropy.csv    t,integrand
    verify-appendix  trace-g.csv          x,physical,analytic
                     trace-remainder.csv  xi,remainder
    udrop            trace-udrop.csv      n,m,var_u,bound,stderr

CONFIG keys (flat TOML; all optional):
  command law lambda n_points x_max n_max epsilon delta upsilon variance
  t alpha t_max nodes m n samples kernel base_law seed output_dir

EXIT STATUS
  0  every contract holds
  1  at least one contract is violated (listed under `violations`)
  2  invalid config or numerical failure";

/// Runs one experiment and emits its report and traces.
#[derive(Debug, Parser)]
#[command(name = "fracfisher", version, after_help = OUTPUTS)]
struct Args {
    /// TOML config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    command: Option<Command>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    n_points: Option<usize>,
    #[arg(long)]
    x_max: Option<f64>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, env = "FRACFISHER_OUT")]
    out: Option<PathBuf>,
}

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Numeric(#[from] fracfisher::Error),
    #[error("cannot write outputs: {0}")]
    Io(#[from] std::io::Error),
}

fn load(args: Args) -> Result<ExperimentConfig, ConfigError> {
    let mut config = match &args.config {
        Some(path) => read_config(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(v) = args.command {
        config.command = v;
    }
    if let Some(v) = args.lambda {
        config.lambda = v;
    }
    if let Some(v) = args.n_points {
        config.n_points = v;
    }
    if let Some(v) = args.x_max {
        config.x_max = v;
    }
    if let Some(v) = args.n_max {
        config.n_max = v;
    }
    if let Some(v) = args.seed {
        config.seed = v;
    }
    if let Some(v) = args.out {
        config.output_dir = v;
    }
    config.validate()?;
    Ok(config)
}

fn execute(args: Args) -> Result<bool, CliError> {
    let config = load(args)?;
    let start = Instant::now();
    let output = run(&config)?;
    let metadata = Metadata::now(start.elapsed());
    write_outputs(&config.output_dir, &output, &metadata)?;
    let report = &output.report;
    for name in &report.violations {
        eprintln!("violated: {name}");
    }
    println!(
        "{}: {}/{} contracts hold; outputs in {}",
        report.command,
        report.contracts.len() - report.violations.len(),
        report.contracts.len(),
        config.output_dir.display()
    );
    Ok(report.passed())
}

fn main() -> ExitCode {
    match execute(Args::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
