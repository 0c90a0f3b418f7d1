//! Batch analysis of price files: every estimator, fits, cycles and a
//! consolidated report.

use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::cycles::{
    detect_crossovers, detect_cycles, CycleReport, DEFAULT_CROSSOVER_WINDOW, DEFAULT_CYCLE_THRESHOLD,
    DEFAULT_SLOPE_DELTA,
};
use crate::detrend::{dfa_fluctuation, dma_fluctuation, max_admissible_scale, ScaleGrid, ScalingFunction};
use crate::error::{Result, ScalingError};
use crate::fit::{alpha_to_beta, fit_exponent, ExponentFit};
use crate::io;
use crate::rolling::{td_dma, HurstTrack, TdConfig};
use crate::scalar::Scalar;
use crate::series::{log_returns, ReturnSeries};
use crate::wavelet::{cwt, on_period_axis, rescale_scalegram, scalegram, scales_for_periods, WaveletSpec};

/// Upper end of the default fit range, before the `N / 4` cap.
pub const DEFAULT_FIT_CEILING: usize = 500;
/// Default largest scale of the analysis grid, before the `N / 4` cap.
pub const DEFAULT_GRID_CEILING: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesInput {
    pub path: PathBuf,
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub inputs: Vec<SeriesInput>,
    pub out_dir: PathBuf,
    pub dfa_order: usize,
    pub grid_min: usize,
    /// `None` means `min(1000, N / 4)`.
    pub grid_max: Option<usize>,
    pub points_per_decade: usize,
    /// `None` means `[10, min(500, N / 4)]` rounded down to the grid.
    pub fit: Option<(f64, f64)>,
    pub dog_low: usize,
    pub dog_high: usize,
    pub td: TdConfig,
    pub cycle_threshold: f64,
    pub crossover_window: usize,
    pub slope_delta: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            inputs: Vec::new(),
            out_dir: PathBuf::from("out"),
            dfa_order: 2,
            grid_min: 10,
            grid_max: None,
            points_per_decade: ScaleGrid::DEFAULT_POINTS_PER_DECADE,
            fit: None,
            dog_low: 1,
            dog_high: 10,
            td: TdConfig::default(),
            cycle_threshold: DEFAULT_CYCLE_THRESHOLD,
            crossover_window: DEFAULT_CROSSOVER_WINDOW,
            slope_delta: DEFAULT_SLOPE_DELTA,
        }
    }
}

impl RunConfig {
    /// Checks everything that does not depend on the data; returns the
    /// output label of every input.
    pub fn validate(&self) -> Result<Vec<String>> {
        if self.dfa_order == 0 || self.dog_low == 0 || self.dog_high == 0 {
            return Err(ScalingError::InvalidConfig("DFA and DOG orders must be at least 1".into()));
        }
        if self.points_per_decade == 0 {
            return Err(ScalingError::InvalidConfig("grid density must be positive".into()));
        }
        if self.grid_min < self.dfa_order + 2 {
            return Err(ScalingError::InvalidConfig(format!("grid minimum {} below DFA order + 2", self.grid_min)));
        }
        if let Some((lo, hi)) = self.fit {
            if !(lo > 0.0 && lo < hi) {
                return Err(ScalingError::InvalidConfig(format!("fit range [{lo}, {hi}] is empty")));
            }
        }
        if !(self.cycle_threshold > 0.0 && self.slope_delta > 0.0) {
            return Err(ScalingError::InvalidConfig("thresholds must be positive".into()));
        }
        self.td.plan()?;
        let labels: Vec<String> = self.inputs.iter().map(SeriesInput::output_label).collect();
        for (i, label) in labels.iter().enumerate() {
            if labels[..i].contains(label) {
                return Err(ScalingError::InvalidConfig(format!("label `{label}` used twice")));
            }
        }
        Ok(labels)
    }

    /// Grid and fit range for a series of `len` returns.
    pub fn ranges(&self, len: usize) -> Result<(ScaleGrid, f64, f64)> {
        let cap = max_admissible_scale(len);
        if cap < self.grid_min {
            return Err(ScalingError::TooShort { needed: 4 * self.grid_min, got: len });
        }
        let grid_max = self.grid_max.unwrap_or(DEFAULT_GRID_CEILING).min(cap);
        let grid = ScaleGrid::new(self.grid_min, grid_max, self.points_per_decade)?;
        let (lo, hi) = match self.fit {
            Some(range) => range,
            None => {
                let ceiling = DEFAULT_FIT_CEILING.min(cap);
                let hi = grid.integer_scales().into_iter().filter(|&n| n <= ceiling).max().unwrap_or(ceiling);
                (10f64.max(self.grid_min as f64), hi as f64)
            }
        };
        if lo < grid.min_scale as f64 || hi > grid.max_scale as f64 || lo >= hi {
            return Err(ScalingError::InvalidConfig(format!(
                "fit range [{lo}, {hi}] outside the grid [{}, {}]",
                grid.min_scale, grid.max_scale
            )));
        }
        Ok((grid, lo, hi))
    }
}

impl SeriesInput {
    /// The label, or the file stem, with anything but `[A-Za-z0-9._-]` replaced.
    pub fn output_label(&self) -> String {
        let raw = match &self.label {
            Some(label) => label.clone(),
            None => self.path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
        };
        let cleaned: String =
            raw.chars().map(|c| if c.is_ascii_alphanumeric() || "._-".contains(c) { c } else { '_' }).collect();
        if cleaned.is_empty() {
            "series".into()
        } else {
            cleaned
        }
    }
}

/// Everything computed for one series.
#[derive(Debug, Clone)]
pub struct SeriesAnalysis<T> {
    pub name: String,
    pub returns: usize,
    pub dfa: ScalingFunction<T>,
    pub dma: ScalingFunction<T>,
    pub scalegram_low: ScalingFunction<T>,
    pub scalegram_high: ScalingFunction<T>,
    /// Rescaled low-order scalegram on the period axis.
    pub rescaled_low: ScalingFunction<T>,
    pub dfa_fit: ExponentFit<T>,
    pub dma_fit: ExponentFit<T>,
    pub wavelet_fit: ExponentFit<T>,
    pub track: HurstTrack<T>,
    pub cycles: CycleReport<T>,
}

/// One line of the consolidated report.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow<T> {
    pub name: String,
    pub fit_min: T,
    pub fit_max: T,
    pub alpha: ExponentFit<T>,
    pub hurst: ExponentFit<T>,
    pub mean_local_h: Option<T>,
    /// Fit of the rescaled scalegram, whose slope is `(beta + 1) / 2`.
    pub wavelet: ExponentFit<T>,
    pub beta: T,
    pub cycle_periods: Vec<T>,
}

impl<T: Scalar> SeriesAnalysis<T> {
    pub fn row(&self, fit_min: T, fit_max: T) -> ReportRow<T> {
        ReportRow {
            name: self.name.clone(),
            fit_min,
            fit_max,
            alpha: self.dfa_fit,
            hurst: self.dma_fit,
            mean_local_h: self.track.mean_h,
            wavelet: self.wavelet_fit,
            beta: alpha_to_beta(self.wavelet_fit.exponent),
            cycle_periods: self.cycles.detected_periods.iter().map(|d| d.period).collect(),
        }
    }
}

/// Runs every estimator on one return series.
pub fn analyze<T: Scalar>(returns: &ReturnSeries<T>, cfg: &RunConfig) -> Result<SeriesAnalysis<T>> {
    let (grid, lo, hi) = cfg.ranges(returns.len())?;
    let (fit_lo, fit_hi) = (T::of(lo), T::of(hi));

    let dfa = dfa_fluctuation(returns, cfg.dfa_order, &grid)?;
    let dma = dma_fluctuation(returns, &grid)?;
    let periods: Vec<T> = grid.real_scales();
    let scalegram_for = |order: usize| -> Result<ScalingFunction<T>> {
        let spec = WaveletSpec::dog(order)?;
        scalegram(&cwt(returns, &spec, &scales_for_periods(&spec, &periods))?)
    };
    let scalegram_low = scalegram_for(cfg.dog_low)?;
    let scalegram_high = scalegram_for(cfg.dog_high)?;
    let rescaled_low = on_period_axis(&rescale_scalegram(&scalegram_low)?)?;

    let dfa_fit = fit_exponent(&dfa, fit_lo, fit_hi)?;
    let dma_fit = fit_exponent(&dma, fit_lo, fit_hi)?;
    let wavelet_fit = fit_exponent(&rescaled_low, fit_lo, fit_hi)?;
    let track = td_dma(returns, &cfg.td)?;

    let mut cycles = detect_cycles(&scalegram_high, &scalegram_low, returns.len(), T::of(cfg.cycle_threshold))?;
    cycles.crossover_scales = detect_crossovers(&dfa, cfg.crossover_window, T::of(cfg.slope_delta))?;

    Ok(SeriesAnalysis {
        name: returns.source_name().to_string(),
        returns: returns.len(),
        dfa,
        dma,
        scalegram_low,
        scalegram_high,
        rescaled_low,
        dfa_fit,
        dma_fit,
        wavelet_fit,
        track,
        cycles,
    })
}

/// Result of one input: its row, or the error that stopped it.
pub type SeriesOutcome = std::result::Result<ReportRow<f64>, (String, ScalingError)>;

/// Ingests, analyzes and writes every input (concurrently), then writes
/// `report.csv`. Outcomes keep the input order.
pub fn run_report(cfg: &RunConfig) -> Result<Vec<SeriesOutcome>> {
    let labels = cfg.validate()?;
    fs::create_dir_all(&cfg.out_dir)?;
    let outcomes: Vec<SeriesOutcome> = cfg
        .inputs
        .par_iter()
        .zip(labels.par_iter())
        .map(|(input, label)| run_one(input, label, cfg).map_err(|e| (label.clone(), e)))
        .collect();
    let mut out = BufWriter::new(File::create(cfg.out_dir.join("report.csv"))?);
    out.write_all(report_csv(&outcomes).as_bytes())?;
    out.flush()?;
    Ok(outcomes)
}

fn run_one(input: &SeriesInput, label: &str, cfg: &RunConfig) -> Result<ReportRow<f64>> {
    let prices = io::read_prices::<f64>(&input.path)?;
    let returns = log_returns(&prices)?;
    let returns = ReturnSeries::new(label, returns.into_values())?;
    let analysis = analyze(&returns, cfg)?;
    let (_, lo, hi) = cfg.ranges(returns.len())?;
    let provenance = provenance(input, label, returns.len(), cfg, lo, hi);
    write_series_files(&cfg.out_dir.join(label), &analysis, &provenance)?;
    Ok(analysis.row(lo, hi))
}

fn provenance(input: &SeriesInput, label: &str, len: usize, cfg: &RunConfig, lo: f64, hi: f64) -> Vec<String> {
    let (grid, _, _) = cfg.ranges(len).expect("ranges checked by analyze");
    vec![
        format!("input={} label={label} returns={len}", input.path.display()),
        format!(
            "dfa_order={} grid={},{} ppd={} fit={lo},{hi} dog={},{}",
            cfg.dfa_order, grid.min_scale, grid.max_scale, grid.points_per_decade, cfg.dog_low, cfg.dog_high
        ),
        format!(
            "td_window={} td_step={} cycle_threshold={} crossover_window={} slope_delta={}",
            cfg.td.window_size, cfg.td.step, cfg.cycle_threshold, cfg.crossover_window, cfg.slope_delta
        ),
    ]
}

/// Per-series artifacts in `dir`.
pub fn write_series_files<T: Scalar>(dir: &Path, a: &SeriesAnalysis<T>, provenance: &[String]) -> Result<()> {
    fs::create_dir_all(dir)?;
    let write = |name: &str, body: &dyn Fn(&mut BufWriter<File>) -> Result<()>| -> Result<()> {
        let mut out = BufWriter::new(File::create(dir.join(name))?);
        io::write_comments(&mut out, provenance)?;
        body(&mut out)?;
        out.flush()?;
        Ok(())
    };
    write(&format!("dfa{}.csv", a.dfa.order()), &|o| io::write_scaling_function(o, &a.dfa))?;
    write("cdma.csv", &|o| io::write_scaling_function(o, &a.dma))?;
    for sg in [&a.scalegram_low, &a.scalegram_high] {
        write(&format!("scalegram_dog{}.csv", sg.order()), &|o| {
            io::write_comments(o, &["scale column holds the wavelet scale a".into()])?;
            io::write_scaling_function(o, sg)
        })?;
    }
    write(&format!("rescaled_dog{}.csv", a.rescaled_low.order()), &|o| {
        io::write_comments(o, &["scale column holds the period 2 pi a / sqrt(m + 1/2); value is sqrt(a E_W)".into()])?;
        io::write_scaling_function(o, &a.rescaled_low)
    })?;
    write("tddma.csv", &|o| io::write_hurst_track(o, &a.track))?;
    write("cycles.csv", &|o| io::write_cycle_report(o, &a.cycles))?;
    write("fits.csv", &|o| {
        writeln!(o, "method,order,exponent,intercept,fit_min,fit_max,stderr,r_squared,points")?;
        for f in [(&a.dfa_fit, a.dfa.order()), (&a.dma_fit, 0), (&a.wavelet_fit, a.rescaled_low.order())] {
            let (fit, order) = f;
            writeln!(
                o,
                "{},{order},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{}",
                fit.method,
                fit.exponent,
                fit.intercept,
                fit.fit_min,
                fit.fit_max,
                fit.stderr,
                fit.r_squared,
                fit.points
            )?;
        }
        Ok(())
    })
}

fn fmt2<T: Scalar>(v: T) -> String {
    // Avoid printing "-0.00".
    let s = format!("{:.2}", v.as_f64());
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

fn periods_text<T: Scalar>(periods: &[T]) -> String {
    periods.iter().map(|p| format!("{:.1}", p.as_f64())).collect::<Vec<_>>().join(";")
}

/// Comma-separated report, exponents to two decimals.
pub fn report_csv(outcomes: &[SeriesOutcome]) -> String {
    let mut s = String::from("series,fit_min,fit_max,alpha,H,mean_local_h,beta,beta_alpha,cycle_periods\n");
    for outcome in outcomes {
        match outcome {
            Ok(r) => {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{},{}",
                    r.name,
                    r.fit_min,
                    r.fit_max,
                    fmt2(r.alpha.exponent),
                    fmt2(r.hurst.exponent),
                    r.mean_local_h.map(fmt2).unwrap_or_default(),
                    fmt2(r.beta),
                    fmt2(r.wavelet.exponent),
                    periods_text(&r.cycle_periods)
                );
            }
            Err((name, e)) => {
                let _ = writeln!(s, "# failed {name}: {e}");
            }
        }
    }
    s
}

/// Aligned table for the terminal; failed series are left out.
pub fn report_table(outcomes: &[SeriesOutcome]) -> String {
    let rows: Vec<[String; 6]> = outcomes
        .iter()
        .flatten()
        .map(|r| {
            [
                r.name.clone(),
                format!("{}-{}", r.fit_min, r.fit_max),
                fmt2(r.alpha.exponent),
                fmt2(r.hurst.exponent),
                r.mean_local_h.map(fmt2).unwrap_or_else(|| "-".into()),
                format!("({}) {}", fmt2(r.beta), fmt2(r.wavelet.exponent)),
            ]
        })
        .collect();
    let header = ["series", "fit range", "alpha", "H", "<H>", "(beta) beta_a/H"];
    let mut widths = header.map(str::len);
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: &[String]| -> String {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        format!("{}\n", padded.join("  ").trim_end())
    };
    let mut s = line(&header.map(String::from));
    for (row, r) in rows.iter().zip(outcomes.iter().flatten()) {
        s.push_str(&line(row));
        if !r.cycle_periods.is_empty() {
            let _ = writeln!(s, "  cycles at T_p = {}", periods_text(&r.cycle_periods));
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_ranges_follow_series_length() {
        let cfg = RunConfig::default();
        let (grid, lo, hi) = cfg.ranges(10_000).unwrap();
        assert_eq!((grid.min_scale, grid.max_scale), (10, 1000));
        assert_eq!(lo, 10.0);
        assert!(hi <= 500.0 && hi > 470.0);
        let (grid, _, hi) = cfg.ranges(800).unwrap();
        assert_eq!(grid.max_scale, 200);
        assert!(hi <= 200.0);
        assert!(matches!(cfg.ranges(39), Err(ScalingError::TooShort { .. })));
    }

    #[test]
    fn fit_range_must_sit_inside_the_grid() {
        let cfg = RunConfig { fit: Some((5.0, 100.0)), ..RunConfig::default() };
        assert!(cfg.ranges(10_000).is_err());
        let cfg = RunConfig { fit: Some((10.0, 170.0)), ..RunConfig::default() };
        assert_eq!(cfg.ranges(10_000).unwrap().2, 170.0);
    }

    #[test]
    fn labels_are_sanitized_and_unique() {
        let input = |p: &str, l: Option<&str>| SeriesInput { path: p.into(), label: l.map(String::from) };
        assert_eq!(input("data/BELEX line.csv", None).output_label(), "BELEX_line");
        assert_eq!(input("x.csv", Some("a/b")).output_label(), "a_b");
        let cfg = RunConfig { inputs: vec![input("a/x.csv", None), input("b/x.csv", None)], ..RunConfig::default() };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn empty_report_has_only_a_header() {
        assert_eq!(report_csv(&[]).lines().count(), 1);
        assert_eq!(report_table(&[]).lines().count(), 1);
    }
}
