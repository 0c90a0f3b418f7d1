use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

/// Scaling analysis of daily closing prices.
#[derive(Parser, Debug)]
#[command(name = "scaling", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Inputs {
    /// Price file with `date,close` rows (repeatable).
    #[arg(long = "input", value_name = "PATH")]
    inputs: Vec<PathBuf>,
    /// Name for the matching --input, by position (repeatable).
    #[arg(long = "label", value_name = "NAME")]
    labels: Vec<String>,
    /// Output directory; without it a single result goes to standard output.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct GridArgs {
    /// Grid points per decade of scale.
    #[arg(long = "grid-ppd", value_name = "K", default_value_t = 40)]
    grid_ppd: usize,
    /// Smallest scale of the grid.
    #[arg(long = "grid-min", value_name = "N", default_value_t = 10)]
    grid_min: usize,
    /// Largest scale of the grid [default: min(1000, N/4)].
    #[arg(long = "grid-max", value_name = "N")]
    grid_max: Option<usize>,
    /// Lower end of the fit range [default: 10].
    #[arg(long = "fit-min", value_name = "SCALE")]
    fit_min: Option<f64>,
    /// Upper end of the fit range [default: min(500, N/4) on the grid].
    #[arg(long = "fit-max", value_name = "SCALE")]
    fit_max: Option<f64>,
}

#[derive(Args, Debug, Clone)]
struct TdArgs {
    /// tdDMA window length N_s.
    #[arg(long, value_name = "N", default_value_t = 1000)]
    window: usize,
    /// tdDMA window step.
    #[arg(long, value_name = "D", default_value_t = 2)]
    step: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq)]
enum Kind {
    White,
    Fgn,
    Sine,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Logarithmic returns of each price series.
    Returns {
        #[command(flatten)]
        inputs: Inputs,
    },
    /// DFA fluctuation function F(n).
    Dfa {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        grid: GridArgs,
        /// Degree of the local polynomial trend.
        #[arg(long = "dfa-order", value_name = "M", default_value_t = 2)]
        dfa_order: usize,
    },
    /// Centered DMA fluctuation function sigma(n).
    Dma {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// DOG wavelet scalegram and its rescaled form on the period axis.
    Wavelet {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long = "dog-order", value_name = "M", default_value_t = 1)]
        dog_order: usize,
        /// Also write the full coefficient matrix (needs --out).
        #[arg(long)]
        field: bool,
    },
    /// Sliding-window local Hurst exponents.
    Tddma {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        td: TdArgs,
        /// Lower end of the per-window fit range [default: 11].
        #[arg(long = "fit-min", value_name = "N")]
        fit_min: Option<usize>,
        /// Upper end of the per-window fit range [default: 201].
        #[arg(long = "fit-max", value_name = "N")]
        fit_max: Option<usize>,
    },
    /// Scalegram protrusions (periodic-like trends) and DFA crossovers.
    Cycles {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long = "dfa-order", value_name = "M", default_value_t = 2)]
        dfa_order: usize,
        /// Order of the high-order wavelet compared against DOG1.
        #[arg(long = "dog-order", value_name = "M", default_value_t = 10)]
        dog_order: usize,
        /// Significance threshold in white-noise standard deviations.
        #[arg(long, value_name = "Z", default_value_t = scaling_core::cycles::DEFAULT_CYCLE_THRESHOLD)]
        threshold: f64,
    },
    /// Power-law fit of a `scale,value` file.
    Fit {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long = "fit-min", value_name = "SCALE", default_value_t = 10.0)]
        fit_min: f64,
        #[arg(long = "fit-max", value_name = "SCALE", default_value_t = 500.0)]
        fit_max: f64,
    },
    /// Synthetic price series in the input format.
    Synth {
        #[arg(long, value_enum, default_value_t = Kind::Fgn)]
        kind: Kind,
        #[arg(long, default_value_t = 0.5)]
        hurst: f64,
        #[arg(long, default_value_t = 90.0)]
        period: f64,
        /// Sinusoid amplitude relative to the noise standard deviation.
        #[arg(long, default_value_t = 2.0)]
        amplitude: f64,
        /// Number of returns (prices are one longer).
        #[arg(long, value_name = "N", default_value_t = 10_000)]
        length: usize,
        #[arg(long, value_name = "S", default_value_t = 0)]
        seed: u64,
        /// Standard deviation of the daily log returns.
        #[arg(long, default_value_t = 0.01)]
        volatility: f64,
        #[arg(long = "start-date", default_value = "2000-01-01")]
        start_date: chrono::NaiveDate,
        #[arg(long)]
        label: Option<String>,
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Every estimator on every input plus a consolidated report.
    Report {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        td: TdArgs,
        #[arg(long = "dfa-order", value_name = "M", default_value_t = 2)]
        dfa_order: usize,
        /// Order of the high-order wavelet used for cycle detection.
        #[arg(long = "dog-order", value_name = "M", default_value_t = 10)]
        dog_order: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(status) => status.into(),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
