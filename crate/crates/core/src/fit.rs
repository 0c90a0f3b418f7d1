//! Power-law exponents from log-log least squares.

use crate::detrend::{Method, ScalingFunction};
use crate::error::{Result, ScalingError};
use crate::scalar::Scalar;

/// Minimum number of positive in-range points for a fit.
pub const MIN_FIT_POINTS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentFit<T> {
    /// Slope of `log10 value` against `log10 scale`.
    pub exponent: T,
    pub intercept: T,
    /// Smallest and largest scale that entered the fit.
    pub fit_min: T,
    pub fit_max: T,
    pub stderr: T,
    pub r_squared: T,
    pub points: usize,
    pub method: Method,
}

/// Ordinary least squares through `(log10 scale, log10 value)` for every
/// point with `fit_min <= scale <= fit_max` and a positive value.
pub fn fit_exponent<T: Scalar>(sf: &ScalingFunction<T>, fit_min: T, fit_max: T) -> Result<ExponentFit<T>> {
    if !(fit_min < fit_max) {
        return Err(ScalingError::InvalidConfig(format!("fit range [{fit_min}, {fit_max}] is empty")));
    }
    let in_range: Vec<(T, T)> = sf.points().filter(|&(s, _)| s >= fit_min && s <= fit_max).collect();
    let positive: Vec<(T, T)> = in_range.iter().copied().filter(|&(_, v)| v > T::zero()).collect();
    if !in_range.is_empty() && positive.is_empty() {
        return Err(ScalingError::Degenerate(format!(
            "{} of {} is zero over [{fit_min}, {fit_max}]",
            sf.method(),
            sf.series_name()
        )));
    }
    if positive.len() < MIN_FIT_POINTS {
        return Err(ScalingError::InsufficientPoints { needed: MIN_FIT_POINTS, got: positive.len() });
    }
    let xs: Vec<T> = positive.iter().map(|&(s, _)| s.log10()).collect();
    let ys: Vec<T> = positive.iter().map(|&(_, v)| v.log10()).collect();
    let line = least_squares_line(&xs, &ys);
    Ok(ExponentFit {
        exponent: line.slope,
        intercept: line.intercept,
        fit_min: positive[0].0,
        fit_max: positive[positive.len() - 1].0,
        stderr: line.stderr,
        r_squared: line.r_squared,
        points: positive.len(),
        method: sf.method(),
    })
}

/// `alpha = (beta + 1) / 2`.
pub fn beta_to_alpha<T: Scalar>(beta: T) -> T {
    (beta + T::one()) / T::of(2.0)
}

/// `beta = 2 alpha - 1`.
pub fn alpha_to_beta<T: Scalar>(alpha: T) -> T {
    T::of(2.0) * alpha - T::one()
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Line<T> {
    pub slope: T,
    pub intercept: T,
    pub stderr: T,
    pub r_squared: T,
}

/// Unweighted OLS line; needs at least two distinct abscissae.
pub(crate) fn least_squares_line<T: Scalar>(xs: &[T], ys: &[T]) -> Line<T> {
    let n = T::of_usize(xs.len());
    let mean_x = xs.iter().copied().sum::<T>() / n;
    let mean_y = ys.iter().copied().sum::<T>() / n;
    let (mut sxx, mut sxy, mut syy) = (T::zero(), T::zero(), T::zero());
    for (&x, &y) in xs.iter().zip(ys) {
        let dx = x - mean_x;
        let dy = y - mean_y;
        sxx = sxx + dx * dx;
        sxy = sxy + dx * dy;
        syy = syy + dy * dy;
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ssr = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum::<T>();
    let dof = xs.len().saturating_sub(2).max(1);
    let stderr = (ssr / T::of_usize(dof) / sxx).sqrt();
    let r_squared = if syy > T::zero() { (T::one() - ssr / syy).max(T::zero()).min(T::one()) } else { T::one() };
    Line { slope, intercept, stderr, r_squared }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detrend::ScaleGrid;
    use proptest::prelude::*;

    fn power_law(exponent: f64, grid: &[f64]) -> ScalingFunction<f64> {
        ScalingFunction::new(Method::Dfa, 2, grid.to_vec(), grid.iter().map(|s| s.powf(exponent)).collect(), "p")
            .unwrap()
    }

    #[test]
    fn exact_power_law() {
        let grid: Vec<f64> = ScaleGrid::new(4, 1000, 40).unwrap().real_scales();
        let fit = fit_exponent(&power_law(0.7, &grid), 10.0, 500.0).unwrap();
        assert!((fit.exponent - 0.7).abs() < 1e-12);
        assert!(fit.stderr < 1e-10);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert!(fit.fit_min >= 10.0 && fit.fit_max <= 500.0);
    }

    #[test]
    fn perturbed_power_law_stays_close() {
        // Deterministic sweep of +-1% multiplicative errors.
        let grid: Vec<f64> = ScaleGrid::new(10, 500, 40).unwrap().real_scales();
        for phase in 0..20 {
            let values: Vec<f64> = grid
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    let eps = 0.01 * (((i * 7919 + phase * 104729) % 2001) as f64 / 1000.0 - 1.0);
                    s.powf(0.6) * (1.0 + eps)
                })
                .collect();
            let sf = ScalingFunction::new(Method::Dma, 0, grid.clone(), values, "p").unwrap();
            let fit = fit_exponent(&sf, 10.0, 500.0).unwrap();
            assert!((fit.exponent - 0.6).abs() < 0.01, "{}", fit.exponent);
        }
    }

    #[test]
    fn zeros_are_dropped_and_counted() {
        let scales: Vec<f64> = (1..=8).map(|s| s as f64).collect();
        let mut values: Vec<f64> = scales.iter().map(|s| s.sqrt()).collect();
        values[0] = 0.0;
        values[1] = 0.0;
        let sf = ScalingFunction::new(Method::Dfa, 1, scales.clone(), values.clone(), "z").unwrap();
        let fit = fit_exponent(&sf, 1.0, 8.0).unwrap();
        assert_eq!(fit.points, 6);
        assert_eq!(fit.fit_min, 3.0);
        values[2] = 0.0;
        values[3] = 0.0;
        let sf = ScalingFunction::new(Method::Dfa, 1, scales.clone(), values, "z").unwrap();
        assert!(matches!(fit_exponent(&sf, 1.0, 8.0), Err(ScalingError::InsufficientPoints { needed: 5, got: 4 })));
        let zero = ScalingFunction::new(Method::Dfa, 1, scales, vec![0.0; 8], "z").unwrap();
        assert!(matches!(fit_exponent(&zero, 1.0, 8.0), Err(ScalingError::Degenerate(_))));
    }

    #[test]
    fn table_two_bridge_values() {
        assert_eq!(beta_to_alpha(0.0), 0.5);
        assert!((beta_to_alpha(0.46f64) - 0.73).abs() < 1e-12);
        assert!((beta_to_alpha(0.36f64) - 0.68).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn fit_ignores_positive_rescaling(exponent in -1.0f64..2.0, factor in 1e-6f64..1e6) {
            let grid: Vec<f64> = ScaleGrid::new(5, 300, 20).unwrap().real_scales();
            let sf = power_law(exponent, &grid);
            let a = fit_exponent(&sf, 10.0, 200.0).unwrap();
            let b = fit_exponent(&sf.scaled(factor).unwrap(), 10.0, 200.0).unwrap();
            prop_assert!((a.exponent - b.exponent).abs() < 1e-9);
        }

        #[test]
        fn bridge_round_trips(alpha in -10.0f64..10.0) {
            prop_assert!((beta_to_alpha(alpha_to_beta(alpha)) - alpha).abs() < 1e-12);
        }
    }
}
