use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use scaling_core::cycles::{detect_crossovers, detect_cycles, DEFAULT_CROSSOVER_WINDOW, DEFAULT_SLOPE_DELTA};
use scaling_core::detrend::dfa_fluctuation;
use scaling_core::io;
use scaling_core::pipeline::{report_table, run_report, RunConfig, SeriesInput};
use scaling_core::synth::prices_from_returns;
use scaling_core::wavelet::{on_period_axis, scales_for_periods};
use scaling_core::{
    cwt, dma_fluctuation, fit_exponent, generate, log_returns, rescale_scalegram, scalegram, td_dma, ReturnSeries,
    ScalingError, ScalingFunction, SynthSpec, TdConfig, WaveletSpec,
};

use crate::{Command, GridArgs, Inputs, Kind, TdArgs};

/// Exit status: every series succeeded, or at least one failed.
pub enum Status {
    Done,
    SeriesFailed,
}

impl From<Status> for ExitCode {
    fn from(status: Status) -> Self {
        match status {
            Status::Done => ExitCode::SUCCESS,
            Status::SeriesFailed => ExitCode::from(1),
        }
    }
}

/// A named output file.
struct Artifact {
    file: String,
    body: Vec<u8>,
}

type SeriesResult = Result<Vec<Artifact>, ScalingError>;

pub fn run(command: Command) -> anyhow::Result<Status> {
    match command {
        Command::Returns { inputs } => per_price_series(&inputs, |s| {
            let mut body = provenance(s, &[]);
            writeln!(body, "index,date,log_return")?;
            for (i, (r, d)) in s.returns.values().iter().zip(&s.dates[1..]).enumerate() {
                writeln!(body, "{i},{d},{r:.12e}")?;
            }
            Ok(vec![Artifact { file: "returns.csv".into(), body }])
        }),
        Command::Dfa { inputs, grid, dfa_order } => {
            let cfg = run_config(&grid, dfa_order)?;
            per_price_series(&inputs, |s| {
                let (scales, lo, hi) = cfg.ranges(s.returns.len())?;
                let f = dfa_fluctuation(&s.returns, dfa_order, &scales)?;
                curve_artifact(s, &format!("dfa{dfa_order}.csv"), &f, lo, hi, &[])
            })
        }
        Command::Dma { inputs, grid } => {
            let cfg = run_config(&grid, 2)?;
            per_price_series(&inputs, |s| {
                let (scales, lo, hi) = cfg.ranges(s.returns.len())?;
                let sigma = dma_fluctuation(&s.returns, &scales)?;
                curve_artifact(s, "cdma.csv", &sigma, lo, hi, &[])
            })
        }
        Command::Wavelet { inputs, grid, dog_order, field } => {
            let cfg = run_config(&grid, 2)?;
            let spec = WaveletSpec::dog(dog_order)?;
            if field && inputs.out.is_none() {
                bail!("--field needs --out");
            }
            per_price_series(&inputs, |s| {
                let (scales, lo, hi) = cfg.ranges(s.returns.len())?;
                let periods: Vec<f64> = scales.real_scales();
                let coefficients = cwt(&s.returns, &spec, &scales_for_periods(&spec, &periods))?;
                let sg = scalegram(&coefficients)?;
                let rescaled = on_period_axis(&rescale_scalegram(&sg)?)?;
                let note = ["scale column holds the period 2 pi a / sqrt(m + 1/2); value is sqrt(a E_W)".to_string()];
                let mut files = curve_artifact(s, &format!("rescaled_dog{dog_order}.csv"), &rescaled, lo, hi, &note)?;
                let mut body = provenance(s, &["scale column holds the wavelet scale a".into()]);
                io::write_scaling_function(&mut body, &sg)?;
                files.push(Artifact { file: format!("scalegram_dog{dog_order}.csv"), body });
                if field {
                    let mut body = provenance(s, &[]);
                    io::write_wavelet_field(&mut body, &coefficients)?;
                    files.push(Artifact { file: format!("field_dog{dog_order}.csv"), body });
                }
                Ok(files)
            })
        }
        Command::Tddma { inputs, td, fit_min, fit_max } => {
            let fit = match (fit_min, fit_max) {
                (None, None) => None,
                (Some(lo), Some(hi)) => Some((lo, hi)),
                _ => bail!("give both --fit-min and --fit-max, or neither"),
            };
            let cfg = td_config(&td, fit)?;
            per_price_series(&inputs, |s| {
                let track = td_dma(&s.returns, &cfg)?;
                let mut body = provenance(s, &[format!("window={} step={}", cfg.window_size, cfg.step)]);
                io::write_hurst_track(&mut body, &track)?;
                Ok(vec![Artifact { file: "tddma.csv".into(), body }])
            })
        }
        Command::Cycles { inputs, grid, dfa_order, dog_order, threshold } => {
            let cfg = run_config(&grid, dfa_order)?;
            let (high, low) = (WaveletSpec::dog(dog_order)?, WaveletSpec::dog(1)?);
            if !(threshold > 0.0) {
                bail!("threshold must be positive");
            }
            per_price_series(&inputs, |s| {
                let (scales, _, _) = cfg.ranges(s.returns.len())?;
                let periods: Vec<f64> = scales.real_scales();
                let sg_for = |spec: &WaveletSpec| -> Result<ScalingFunction, ScalingError> {
                    scalegram(&cwt(&s.returns, spec, &scales_for_periods(spec, &periods))?)
                };
                let mut report = detect_cycles(&sg_for(&high)?, &sg_for(&low)?, s.returns.len(), threshold)?;
                let f = dfa_fluctuation(&s.returns, dfa_order, &scales)?;
                report.crossover_scales = detect_crossovers(&f, DEFAULT_CROSSOVER_WINDOW, DEFAULT_SLOPE_DELTA)?;
                let mut body = provenance(s, &[format!("dog={dog_order},1 dfa_order={dfa_order}")]);
                io::write_cycle_report(&mut body, &report)?;
                Ok(vec![Artifact { file: "cycles.csv".into(), body }])
            })
        }
        Command::Fit { inputs, fit_min, fit_max } => {
            if !(fit_min > 0.0 && fit_min < fit_max) {
                bail!("fit range [{fit_min}, {fit_max}] is empty");
            }
            per_input(&inputs, |path, label| {
                let sf = io::parse_scaling_function::<f64>(label, fs::File::open(path)?)?;
                let fit = fit_exponent(&sf, fit_min, fit_max)?;
                let mut body = Vec::new();
                writeln!(body, "# input={}", path.display())?;
                writeln!(body, "series,method,order,exponent,intercept,fit_min,fit_max,stderr,r_squared,points")?;
                writeln!(
                    body,
                    "{},{},{},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{}",
                    sf.series_name(),
                    fit.method,
                    sf.order(),
                    fit.exponent,
                    fit.intercept,
                    fit.fit_min,
                    fit.fit_max,
                    fit.stderr,
                    fit.r_squared,
                    fit.points
                )?;
                Ok(vec![Artifact { file: "fit.csv".into(), body }])
            })
        }
        Command::Synth { kind, hurst, period, amplitude, length, seed, volatility, start_date, label, out } => {
            let spec = match kind {
                Kind::White => SynthSpec::white(length, seed),
                Kind::Fgn => SynthSpec::fgn(hurst, length, seed),
                Kind::Sine => SynthSpec::sinusoid_plus_noise(period, amplitude, length, seed),
            };
            let returns = generate::<f64>(&spec)?;
            let name = label.unwrap_or_else(|| spec.label());
            let returns = ReturnSeries::new(name.clone(), returns.into_values())?;
            let prices = prices_from_returns(&returns, volatility, 100.0, start_date)?;
            let mut body = Vec::new();
            writeln!(body, "# synthetic {} volatility={volatility}", spec.label())?;
            io::write_prices(&mut body, &prices)?;
            match out {
                Some(dir) => {
                    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
                    let path = dir.join(format!("{name}.csv"));
                    fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
                }
                None => std::io::stdout().write_all(&body)?,
            }
            Ok(Status::Done)
        }
        Command::Report { inputs, grid, td, dfa_order, dog_order } => {
            let mut cfg = run_config(&grid, dfa_order)?;
            cfg.inputs = series_inputs(&inputs)?;
            cfg.out_dir = inputs.out.clone().unwrap_or_else(|| PathBuf::from("report"));
            cfg.dog_high = dog_order;
            cfg.td = td_config(&td, None)?;
            let outcomes = match run_report(&cfg) {
                Ok(outcomes) => outcomes,
                Err(e @ ScalingError::Io(_)) => return Err(e).context("writing the report"),
                Err(e) => bail!(e),
            };
            print!("{}", report_table(&outcomes));
            let mut status = Status::Done;
            for (name, e) in outcomes.iter().filter_map(|o| o.as_ref().err()) {
                eprintln!("error: {name}: {e}");
                status = Status::SeriesFailed;
            }
            Ok(status)
        }
    }
}

fn run_config(grid: &GridArgs, dfa_order: usize) -> anyhow::Result<RunConfig> {
    let fit = match (grid.fit_min, grid.fit_max) {
        (None, None) => None,
        (Some(lo), Some(hi)) => Some((lo, hi)),
        (Some(lo), None) => Some((lo, scaling_core::pipeline::DEFAULT_FIT_CEILING as f64)),
        (None, Some(hi)) => Some((10.0, hi)),
    };
    let cfg = RunConfig {
        dfa_order,
        grid_min: grid.grid_min,
        grid_max: grid.grid_max,
        points_per_decade: grid.grid_ppd,
        fit,
        ..RunConfig::default()
    };
    cfg.validate()?;
    Ok(cfg)
}

fn td_config(td: &TdArgs, fit: Option<(usize, usize)>) -> anyhow::Result<TdConfig> {
    let cfg = TdConfig { window_size: td.window, step: td.step, fit, ..TdConfig::default() };
    cfg.plan()?;
    Ok(cfg)
}

fn series_inputs(inputs: &Inputs) -> anyhow::Result<Vec<SeriesInput>> {
    if inputs.labels.len() > inputs.inputs.len() {
        bail!("{} labels for {} inputs", inputs.labels.len(), inputs.inputs.len());
    }
    Ok(inputs
        .inputs
        .iter()
        .enumerate()
        .map(|(i, path)| SeriesInput { path: path.clone(), label: inputs.labels.get(i).cloned() })
        .collect())
}

/// A price file with its returns, renamed to the output label.
struct Loaded {
    path: PathBuf,
    label: String,
    dates: Vec<chrono::NaiveDate>,
    returns: ReturnSeries,
}

fn provenance(s: &Loaded, extra: &[String]) -> Vec<u8> {
    let mut lines = vec![format!("input={} label={} returns={}", s.path.display(), s.label, s.returns.len())];
    lines.extend_from_slice(extra);
    let mut body = Vec::new();
    io::write_comments(&mut body, &lines).expect("writing to memory");
    body
}

fn curve_artifact(s: &Loaded, file: &str, sf: &ScalingFunction, lo: f64, hi: f64, notes: &[String]) -> SeriesResult {
    let mut extra = notes.to_vec();
    extra.push(match fit_exponent(sf, lo, hi) {
        Ok(fit) => format!(
            "fit exponent={:.12e} stderr={:.12e} r_squared={:.6} range={},{}",
            fit.exponent, fit.stderr, fit.r_squared, fit.fit_min, fit.fit_max
        ),
        Err(e) => format!("fit unavailable over [{lo}, {hi}]: {e}"),
    });
    let mut body = provenance(s, &extra);
    io::write_scaling_function(&mut body, sf)?;
    Ok(vec![Artifact { file: file.into(), body }])
}

fn per_price_series(inputs: &Inputs, work: impl Fn(&Loaded) -> SeriesResult) -> anyhow::Result<Status> {
    per_input(inputs, |path, label| {
        let prices = io::read_prices::<f64>(path)?;
        let returns = log_returns(&prices)?;
        let loaded = Loaded {
            path: path.to_path_buf(),
            label: label.to_string(),
            dates: prices.dates().to_vec(),
            returns: ReturnSeries::new(label, returns.into_values())?,
        };
        work(&loaded)
    })
}

/// Runs `work` on every input in order. Failures are reported and counted;
/// the first artifact goes to standard output when no directory was given.
fn per_input(inputs: &Inputs, work: impl Fn(&Path, &str) -> SeriesResult) -> anyhow::Result<Status> {
    let series = series_inputs(inputs)?;
    if series.is_empty() {
        bail!("no --input given");
    }
    if inputs.out.is_none() && series.len() > 1 {
        bail!("several inputs need --out");
    }
    let labels: Vec<String> = series.iter().map(SeriesInput::output_label).collect();
    for (i, label) in labels.iter().enumerate() {
        if labels[..i].contains(label) {
            bail!("label `{label}` used twice");
        }
    }
    let mut status = Status::Done;
    for (input, label) in series.iter().zip(&labels) {
        let artifacts = match work(&input.path, label) {
            Ok(artifacts) => artifacts,
            Err(ScalingError::InvalidConfig(message)) => bail!("{label}: {message}"),
            Err(e) => {
                eprintln!("error: {label}: {e}");
                status = Status::SeriesFailed;
                continue;
            }
        };
        match &inputs.out {
            Some(dir) => {
                let dir = dir.join(label);
                fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
                for a in artifacts {
                    let path = dir.join(&a.file);
                    fs::write(&path, &a.body).with_context(|| format!("writing {}", path.display()))?;
                }
            }
            None => {
                if let Some(first) = artifacts.first() {
                    std::io::stdout().write_all(&first.body)?;
                }
            }
        }
    }
    Ok(status)
}
