//! Text formats: `date,close` price files in, comma-separated results out.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use chrono::NaiveDate;

use crate::cycles::CycleReport;
use crate::detrend::{Method, ScalingFunction};
use crate::error::{Result, ScalingError};
use crate::rolling::HurstTrack;
use crate::scalar::Scalar;
use crate::series::PriceSeries;
use crate::wavelet::WaveletField;

/// Reads a `date,close` file; the series is named after the file stem.
pub fn read_prices<T: Scalar>(path: &Path) -> Result<PriceSeries<T>> {
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    parse_prices(name, File::open(path)?)
}

/// Parses `date,close` rows (ISO dates, positive closes, ascending order).
/// A leading `date,close` header and `#` comment lines are skipped. Every
/// error names the offending line.
pub fn parse_prices<T: Scalar>(name: impl Into<String>, source: impl Read) -> Result<PriceSeries<T>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(source);
    let mut dates: Vec<NaiveDate> = Vec::new();
    let mut closes: Vec<T> = Vec::new();
    for record in reader.records() {
        let record = record
            .map_err(|e| ScalingError::Parse { line: e.position().map_or(0, |p| p.line()), message: e.to_string() })?;
        let line = record.position().map_or(0, |p| p.line());
        let fail = |message: String| ScalingError::Parse { line, message };
        if record.len() != 2 {
            return Err(fail(format!("expected 2 fields `date,close`, found {}", record.len())));
        }
        if dates.is_empty() && record[0].eq_ignore_ascii_case("date") {
            continue;
        }
        let date = NaiveDate::parse_from_str(&record[0], "%Y-%m-%d")
            .map_err(|e| fail(format!("bad date `{}`: {e}", &record[0])))?;
        let close: f64 = record[1].parse().map_err(|_| fail(format!("bad close `{}`", &record[1])))?;
        if !close.is_finite() || close <= 0.0 {
            return Err(fail(format!("close must be positive and finite, got {close}")));
        }
        if let Some(&previous) = dates.last() {
            if date == previous {
                return Err(fail(format!("duplicate date {date}")));
            }
            if date < previous {
                return Err(fail(format!("date {date} precedes {previous}; rows must be in ascending order")));
            }
        }
        dates.push(date);
        closes.push(T::of(close));
    }
    if closes.is_empty() {
        return Err(ScalingError::Empty);
    }
    PriceSeries::new(name, dates, closes)
}

/// Reads back a `scale,value` file. Method and order come from a
/// `# series=... method=... order=...` comment when present, otherwise the
/// curve is tagged as DFA of order 0.
pub fn parse_scaling_function<T: Scalar>(name: impl Into<String>, mut source: impl Read) -> Result<ScalingFunction<T>> {
    let mut text = String::new();
    source.read_to_string(&mut text)?;
    let (mut method, mut order, mut series) = (Method::Dfa, 0, name.into());
    let (mut scales, mut values) = (Vec::new(), Vec::new());
    for (index, raw) in text.lines().enumerate() {
        let line_no = index as u64 + 1;
        let line = raw.trim();
        if let Some(comment) = line.strip_prefix('#') {
            for (key, value) in comment.split_whitespace().filter_map(|kv| kv.split_once('=')) {
                match key {
                    "series" => series = value.to_string(),
                    "method" => {
                        method = Method::from_tag(value).ok_or_else(|| ScalingError::Parse {
                            line: line_no,
                            message: format!("unknown method `{value}`"),
                        })?
                    }
                    "order" => order = value.parse().unwrap_or(order),
                    _ => {}
                }
            }
            continue;
        }
        if line.is_empty() || line.eq_ignore_ascii_case("scale,value") {
            continue;
        }
        let fail = |message: String| ScalingError::Parse { line: line_no, message };
        let (s, v) = line.split_once(',').ok_or_else(|| fail("expected `scale,value`".into()))?;
        let s: f64 = s.trim().parse().map_err(|_| fail(format!("bad scale `{s}`")))?;
        let v: f64 = v.trim().parse().map_err(|_| fail(format!("bad value `{v}`")))?;
        scales.push(T::of(s));
        values.push(T::of(v));
    }
    ScalingFunction::new(method, order, scales, values, series)
}

/// `#`-prefixed comment lines.
pub fn write_comments(out: &mut impl Write, lines: &[String]) -> Result<()> {
    for line in lines {
        writeln!(out, "# {line}")?;
    }
    Ok(())
}

/// `scale,value` rows in scientific notation.
pub fn write_scaling_function<T: Scalar>(out: &mut impl Write, sf: &ScalingFunction<T>) -> Result<()> {
    writeln!(out, "# series={} method={} order={}", sf.series_name(), sf.method(), sf.order())?;
    writeln!(out, "scale,value")?;
    for (s, v) in sf.points() {
        writeln!(out, "{s:.12e},{v:.12e}")?;
    }
    Ok(())
}

/// `position,local_h` rows; invalid windows leave the value empty.
pub fn write_hurst_track<T: Scalar>(out: &mut impl Write, track: &HurstTrack<T>) -> Result<()> {
    match track.mean_h {
        Some(mean) => writeln!(out, "# mean_h={mean:.12e} valid_fraction={:.6}", track.valid_fraction)?,
        None => writeln!(out, "# mean_h= valid_fraction={:.6}", track.valid_fraction)?,
    }
    writeln!(out, "# fit_range={},{}", track.fit_lo, track.fit_hi)?;
    for notice in &track.notices {
        writeln!(out, "# notice: {notice}")?;
    }
    writeln!(out, "position,local_h")?;
    for (position, h) in track.positions.iter().zip(&track.local_h) {
        match h {
            Some(h) => writeln!(out, "{position},{h:.12e}")?,
            None => writeln!(out, "{position},")?,
        }
    }
    Ok(())
}

/// Detected periods with the baseline and crossovers in the comment header.
pub fn write_cycle_report<T: Scalar>(out: &mut impl Write, report: &CycleReport<T>) -> Result<()> {
    let b = &report.baseline;
    writeln!(
        out,
        "# baseline_exponent={:.12e} stderr={:.12e} r_squared={:.6} period_range={:.6e},{:.6e}",
        b.exponent, b.stderr, b.r_squared, b.fit_min, b.fit_max
    )?;
    writeln!(out, "# threshold={:.6}", report.threshold)?;
    let crossovers: Vec<String> = report.crossover_scales.iter().map(|s| format!("{s:.6e}")).collect();
    writeln!(out, "# crossover_scales={}", crossovers.join(";"))?;
    writeln!(out, "period,prominence,window_low,window_high,scale,significance,low_order_prominence")?;
    for d in &report.detected_periods {
        writeln!(
            out,
            "{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}",
            d.period, d.prominence, d.window_low, d.window_high, d.scale, d.significance, d.low_order_prominence
        )?;
    }
    Ok(())
}

/// Coefficient matrix: header of translations, one row per scale.
pub fn write_wavelet_field<T: Scalar>(out: &mut impl Write, field: &WaveletField<T>) -> Result<()> {
    write!(out, "scale")?;
    for b in 0..field.translations() {
        write!(out, ",{b}")?;
    }
    writeln!(out)?;
    for (a, row) in field.rows() {
        write!(out, "{a:.12e}")?;
        for w in row {
            write!(out, ",{w:.12e}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

/// The ingestion format, so written prices can be read back.
pub fn write_prices<T: Scalar>(out: &mut impl Write, prices: &PriceSeries<T>) -> Result<()> {
    writeln!(out, "date,close")?;
    for (d, c) in prices.dates().iter().zip(prices.closes()) {
        writeln!(out, "{},{}", d.format("%Y-%m-%d"), c.as_f64())?;
    }
    Ok(())
}
