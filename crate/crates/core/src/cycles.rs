//! Crossovers in scaling functions and periodic-like trends in DOG scalegrams.

use crate::detrend::{Method, ScalingFunction};
use crate::error::{Result, ScalingError};
use crate::fit::{least_squares_line, ExponentFit, Line, MIN_FIT_POINTS};
use crate::scalar::Scalar;
use crate::wavelet::{white_noise_kernel, WaveletSpec};

/// Grid points per side of a local slope estimate.
pub const DEFAULT_CROSSOVER_WINDOW: usize = 5;
/// Minimum change of local log-log slope that counts as a crossover.
pub const DEFAULT_SLOPE_DELTA: f64 = 0.15;
/// Minimum significance of a scalegram protrusion, in units of the sampling
/// standard deviation of `log10 E_W` expected for white noise.
pub const DEFAULT_CYCLE_THRESHOLD: f64 = 6.0;
/// Residuals further above the median than this many MADs are left out of the
/// second baseline pass.
pub const BASELINE_EXCLUSION_MADS: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectedPeriod<T> {
    /// Equivalent period `2 pi a / sqrt(m + 1/2)` of the protrusion peak.
    pub period: T,
    /// Raw wavelet scale `a` of the peak.
    pub scale: T,
    /// `log10 E_W - baseline` at the peak.
    pub prominence: T,
    /// Prominence over its white-noise sampling standard deviation.
    pub significance: T,
    /// Period range of the contiguous region above threshold.
    pub window_low: T,
    pub window_high: T,
    /// Residual of the low-order scalegram at the same period.
    pub low_order_prominence: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CycleReport<T> {
    pub detected_periods: Vec<DetectedPeriod<T>>,
    /// Power-law background of the high-order scalegram on the period axis.
    pub baseline: ExponentFit<T>,
    pub threshold: T,
    /// Filled in by callers that also ran [`detect_crossovers`].
    pub crossover_scales: Vec<T>,
}

/// Scales where the local log-log slope changes by more than `slope_delta`.
///
/// At every grid index `i` the slope over the `window` points ending at `i` is
/// compared with the slope over the `window` points starting at `i`. Runs of
/// consecutive indices exceeding the threshold with the same sign form one
/// transition, reported at its largest change.
pub fn detect_crossovers<T: Scalar>(sf: &ScalingFunction<T>, window: usize, slope_delta: T) -> Result<Vec<T>> {
    if window < 2 {
        return Err(ScalingError::InvalidConfig("crossover window needs at least 2 points".into()));
    }
    if sf.len() < 3 * window {
        return Err(ScalingError::InsufficientPoints { needed: 3 * window, got: sf.len() });
    }
    if let Some((s, _)) = sf.points().find(|&(_, v)| v <= T::zero()) {
        return Err(ScalingError::Degenerate(format!("{} vanishes at scale {s}", sf.method())));
    }
    let xs: Vec<T> = sf.scales().iter().map(|s| s.log10()).collect();
    let ys: Vec<T> = sf.values().iter().map(|v| v.log10()).collect();
    let slope = |lo: usize, hi: usize| least_squares_line(&xs[lo..hi], &ys[lo..hi]).slope;

    let mut crossovers = Vec::new();
    let mut best: Option<(usize, T)> = None;
    for i in window - 1..=sf.len() - window {
        let delta = slope(i, i + window) - slope(i + 1 - window, i + 1);
        let flagged = delta.abs() > slope_delta;
        best = match best {
            Some((j, d)) if flagged && d.signum() == delta.signum() => {
                Some(if delta.abs() > d.abs() { (i, delta) } else { (j, d) })
            }
            Some((j, _)) => {
                crossovers.push(sf.scales()[j]);
                flagged.then_some((i, delta))
            }
            None => flagged.then_some((i, delta)),
        };
    }
    if let Some((j, _)) = best {
        crossovers.push(sf.scales()[j]);
    }
    Ok(crossovers)
}

/// Protrusions of a high-order DOG scalegram above its power-law background.
///
/// Both scalegrams must cover the same periods (their scales differ by the
/// order-dependent factor). The background is fitted twice, the second time
/// without points lying more than [`BASELINE_EXCLUSION_MADS`] above the median
/// residual. A protrusion is a run of points whose residual exceeds
/// `threshold` white-noise standard deviations `sqrt(2 a K_m / N) / ln 10`,
/// reported at its largest residual unless that sits on the grid edge.
pub fn detect_cycles<T: Scalar>(
    high: &ScalingFunction<T>,
    low: &ScalingFunction<T>,
    series_len: usize,
    threshold: T,
) -> Result<CycleReport<T>> {
    for sg in [high, low] {
        if sg.method() != Method::Scalegram {
            return Err(ScalingError::InvalidConfig(format!("expected a scalegram, got {}", sg.method())));
        }
    }
    if !(threshold > T::zero()) {
        return Err(ScalingError::InvalidConfig(format!("threshold {threshold} must be positive")));
    }
    if series_len == 0 {
        return Err(ScalingError::Empty);
    }
    let high_spec = WaveletSpec::dog(high.order())?;
    let low_spec = WaveletSpec::dog(low.order())?;
    let periods = period_axis(high, &high_spec);
    let low_periods = period_axis(low, &low_spec);
    let matching = periods.len() == low_periods.len()
        && periods.iter().zip(&low_periods).all(|(&p, &q)| (p - q).abs() <= T::of(1e-6) * p.abs());
    if !matching {
        return Err(ScalingError::InvalidGrid("high- and low-order scalegrams cover different periods".into()));
    }

    let (baseline, residuals) = robust_baseline(high, &periods)?;
    let (_, low_residuals) = robust_baseline(low, &low_periods)?;

    let kernel = white_noise_kernel(high.order());
    let spread = |a: T| (2.0 * a.as_f64() * kernel / series_len as f64).sqrt() / std::f64::consts::LN_10;
    let z: Vec<f64> = residuals.iter().zip(high.scales()).map(|(r, &a)| r.as_f64() / spread(a)).collect();

    let last = periods.len() - 1;
    let mut detected = Vec::new();
    let mut i = 0;
    while i <= last {
        if z[i] <= threshold.as_f64() {
            i += 1;
            continue;
        }
        let start = i;
        while i < last && z[i + 1] > threshold.as_f64() {
            i += 1;
        }
        let end = i;
        let peak = (start..=end)
            .max_by(|&a, &b| residuals[a].partial_cmp(&residuals[b]).expect("finite residuals"))
            .expect("non-empty run");
        if peak != 0 && peak != last {
            detected.push(DetectedPeriod {
                period: periods[peak],
                scale: high.scales()[peak],
                prominence: residuals[peak],
                significance: T::of(z[peak]),
                window_low: periods[start],
                window_high: periods[end],
                low_order_prominence: low_residuals[peak],
            });
        }
        i += 1;
    }
    Ok(CycleReport { detected_periods: detected, baseline, threshold, crossover_scales: Vec::new() })
}

fn period_axis<T: Scalar>(sg: &ScalingFunction<T>, spec: &WaveletSpec) -> Vec<T> {
    sg.scales().iter().map(|&a| T::of(spec.period_for_scale(a.as_f64()))).collect()
}

/// Two-pass log-log baseline over `axis`; returns the fit and the residual
/// `log10 value - baseline` at every point.
fn robust_baseline<T: Scalar>(sg: &ScalingFunction<T>, axis: &[T]) -> Result<(ExponentFit<T>, Vec<T>)> {
    if let Some((a, _)) = sg.points().find(|&(_, v)| v <= T::zero()) {
        return Err(ScalingError::Degenerate(format!("scalegram vanishes at scale {a}")));
    }
    if sg.len() < MIN_FIT_POINTS {
        return Err(ScalingError::InsufficientPoints { needed: MIN_FIT_POINTS, got: sg.len() });
    }
    let xs: Vec<T> = axis.iter().map(|p| p.log10()).collect();
    let ys: Vec<T> = sg.values().iter().map(|v| v.log10()).collect();
    let residuals_of = |line: &Line<T>| -> Vec<T> {
        xs.iter().zip(&ys).map(|(&x, &y)| y - (line.intercept + line.slope * x)).collect()
    };

    let first = least_squares_line(&xs, &ys);
    let r = residuals_of(&first);
    let centre = median(&r);
    let mad = median(&r.iter().map(|v| (*v - centre).abs()).collect::<Vec<_>>());
    let cut = (T::of(BASELINE_EXCLUSION_MADS) * mad).max(T::of(1e-12));
    let kept: Vec<usize> = (0..r.len()).filter(|&i| r[i] - centre <= cut).collect();
    if kept.len() < MIN_FIT_POINTS {
        return Err(ScalingError::Degenerate(format!(
            "only {} points left for the baseline after exclusion",
            kept.len()
        )));
    }
    let kx: Vec<T> = kept.iter().map(|&i| xs[i]).collect();
    let ky: Vec<T> = kept.iter().map(|&i| ys[i]).collect();
    let line = least_squares_line(&kx, &ky);
    let fit = ExponentFit {
        exponent: line.slope,
        intercept: line.intercept,
        fit_min: axis[kept[0]],
        fit_max: axis[kept[kept.len() - 1]],
        stderr: line.stderr,
        r_squared: line.r_squared,
        points: kept.len(),
        method: sg.method(),
    };
    Ok((fit, residuals_of(&line)))
}

fn median<T: Scalar>(values: &[T]) -> T {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    let mid = sorted.len() / 2;
    if sorted.len().is_multiple_of(2) {
        (sorted[mid - 1] + sorted[mid]) / T::of(2.0)
    } else {
        sorted[mid]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detrend::ScaleGrid;
    use crate::wavelet::scales_for_periods;

    fn curve(scales: &[f64], value: impl Fn(f64) -> f64) -> ScalingFunction<f64> {
        ScalingFunction::new(Method::Dfa, 2, scales.to_vec(), scales.iter().map(|&s| value(s)).collect(), "c").unwrap()
    }

    #[test]
    fn pure_power_law_has_no_crossover() {
        let scales: Vec<f64> = ScaleGrid::new(10, 1000, 40).unwrap().real_scales();
        let found = detect_crossovers(&curve(&scales, |s| s.powf(0.62)), 5, 0.15).unwrap();
        assert!(found.is_empty(), "{found:?}");
    }

    #[test]
    fn single_kink_gives_one_crossover() {
        let scales: Vec<f64> = ScaleGrid::new(10, 500, 40).unwrap().real_scales();
        let kinked = curve(&scales, |s| if s < 50.0 { s.powf(0.9) } else { 50f64.powf(0.5) * s.powf(0.4) });
        let found = detect_crossovers(&kinked, 5, 0.15).unwrap();
        assert_eq!(found.len(), 1, "{found:?}");
        let step = 10f64.powf(1.0 / 40.0);
        assert!(found[0] >= 50.0 / step / 1.0001 && found[0] <= 50.0 * step * 1.0001, "{}", found[0]);
    }

    #[test]
    fn crossover_preconditions() {
        let scales: Vec<f64> = (1..=14).map(|s| s as f64).collect();
        let short = curve(&scales, |s| s);
        assert!(matches!(
            detect_crossovers(&short, 5, 0.15),
            Err(ScalingError::InsufficientPoints { needed: 15, got: 14 })
        ));
        assert!(detect_crossovers(&short, 1, 0.15).is_err());
    }

    fn scalegram_pair(bump: impl Fn(f64) -> f64) -> (ScalingFunction<f64>, ScalingFunction<f64>) {
        let periods: Vec<f64> = ScaleGrid::new(10, 500, 40).unwrap().real_scales();
        let make = |order: usize, gain: f64| {
            let scales = scales_for_periods(&WaveletSpec::dog(order).unwrap(), &periods);
            let values = periods.iter().map(|&p| 3.0 * p.powf(0.1) * 10f64.powf(gain * bump(p))).collect();
            ScalingFunction::new(Method::Scalegram, order, scales, values, "s").unwrap()
        };
        (make(10, 1.0), make(1, 0.4))
    }

    #[test]
    fn clean_bump_is_found_at_its_period() {
        let (high, low) = scalegram_pair(|p| 2.0 * (-(p / 90.0).ln().powi(2) / 0.02).exp());
        let report = detect_cycles(&high, &low, 10_000, 6.0).unwrap();
        assert_eq!(report.detected_periods.len(), 1);
        let found = report.detected_periods[0];
        assert!((found.period / 90.0 - 1.0).abs() < 0.03, "{}", found.period);
        assert!((found.prominence - 2.0).abs() < 0.05);
        assert!(found.prominence > found.low_order_prominence);
        assert!(found.window_low < 90.0 && found.window_high > 90.0);
        assert!((report.baseline.exponent - 0.1).abs() < 0.01, "{}", report.baseline.exponent);
        assert!((WaveletSpec::dog(10).unwrap().period_for_scale(found.scale) - found.period).abs() < 1e-9);
    }

    #[test]
    fn smooth_background_reports_nothing() {
        let (high, low) = scalegram_pair(|_| 0.0);
        assert!(detect_cycles(&high, &low, 10_000, 6.0).unwrap().detected_periods.is_empty());
    }

    #[test]
    fn cycle_preconditions() {
        let (high, low) = scalegram_pair(|_| 0.0);
        let shifted = ScalingFunction::new(
            Method::Scalegram,
            1,
            low.scales().iter().map(|a| a * 1.1).collect(),
            low.values().to_vec(),
            "s",
        )
        .unwrap();
        assert!(matches!(detect_cycles(&high, &shifted, 10_000, 6.0), Err(ScalingError::InvalidGrid(_))));
        assert!(detect_cycles(&high, &low, 10_000, 0.0).is_err());
        let dfa = ScalingFunction::new(Method::Dfa, 2, high.scales().to_vec(), high.values().to_vec(), "d").unwrap();
        assert!(detect_cycles(&dfa, &low, 10_000, 6.0).is_err());
    }
}
