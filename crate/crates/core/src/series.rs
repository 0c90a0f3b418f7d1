//! Price series, logarithmic returns and integrated profiles.
//!
//! Consecutive recorded rows are one lag step apart regardless of calendar
//! gaps (weekends, holidays), so a series of trading days maps directly onto
//! the integer time axis used by every estimator.

use chrono::NaiveDate;

use crate::error::{Result, ScalingError};
use crate::scalar::Scalar;

/// Dated daily closing values.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries<T> {
    name: String,
    dates: Vec<NaiveDate>,
    closes: Vec<T>,
}

impl<T: Scalar> PriceSeries<T> {
    /// Validates strictly increasing dates, positive closes and `N >= 2`.
    pub fn new(name: impl Into<String>, dates: Vec<NaiveDate>, closes: Vec<T>) -> Result<Self> {
        if dates.len() != closes.len() {
            return Err(ScalingError::LengthMismatch(format!("{} dates for {} closes", dates.len(), closes.len())));
        }
        if closes.len() < 2 {
            return Err(ScalingError::TooShort { needed: 2, got: closes.len() });
        }
        for (position, &value) in closes.iter().enumerate() {
            if !value.is_finite() {
                return Err(ScalingError::NonFinite { position });
            }
            if value <= T::zero() {
                return Err(ScalingError::NonPositivePrice { position, value: value.as_f64() });
            }
        }
        for (position, pair) in dates.windows(2).enumerate() {
            if pair[1] == pair[0] {
                return Err(ScalingError::DuplicateDate { position: position + 1, date: pair[1].to_string() });
            }
            if pair[1] < pair[0] {
                return Err(ScalingError::DatesNotIncreasing { position: position + 1 });
            }
        }
        Ok(Self { name: name.into(), dates, closes })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn closes(&self) -> &[T] {
        &self.closes
    }

    pub fn len(&self) -> usize {
        self.closes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.closes.is_empty()
    }
}

/// Logarithmic returns `R(k)`, one shorter than the price series.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnSeries<T> {
    source_name: String,
    values: Vec<T>,
}

impl<T: Scalar> ReturnSeries<T> {
    pub fn new(source_name: impl Into<String>, values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(ScalingError::Empty);
        }
        if let Some(position) = values.iter().position(|v| !v.is_finite()) {
            return Err(ScalingError::NonFinite { position });
        }
        Ok(Self { source_name: source_name.into(), values })
    }

    pub fn source_name(&self) -> &str {
        &self.source_name
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Contiguous sub-series `[start, start + len)`, keeping the source label.
    pub fn window(&self, start: usize, len: usize) -> Result<Self> {
        let end = start
            .checked_add(len)
            .filter(|&end| end <= self.values.len())
            .ok_or(ScalingError::TooShort { needed: start.saturating_add(len), got: self.values.len() })?;
        Self::new(self.source_name.clone(), self.values[start..end].to_vec())
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }
}

/// Mean-removed partial sums `y(l)` of a return series.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile<T> {
    values: Vec<T>,
    mean_removed: T,
}

impl<T: Scalar> Profile<T> {
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn mean_removed(&self) -> T {
        self.mean_removed
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `R(k) = ln(S(k+1) / S(k))` over consecutive recorded closes.
pub fn log_returns<T: Scalar>(prices: &PriceSeries<T>) -> Result<ReturnSeries<T>> {
    if prices.len() < 2 {
        return Err(ScalingError::TooShort { needed: 2, got: prices.len() });
    }
    let values = prices.closes.windows(2).map(|w| (w[1] / w[0]).ln()).collect();
    ReturnSeries::new(prices.name.clone(), values)
}

/// Integrated series `y(l) = sum_{k<=l} (R(k) - R_ave)`.
pub fn profile<T: Scalar>(returns: &ReturnSeries<T>) -> Result<Profile<T>> {
    profile_of(returns.values())
}

pub(crate) fn profile_of<T: Scalar>(values: &[T]) -> Result<Profile<T>> {
    if values.is_empty() {
        return Err(ScalingError::Empty);
    }
    let mean = values.iter().copied().sum::<T>() / T::of_usize(values.len());
    let mut acc = T::zero();
    let values = values
        .iter()
        .map(|&r| {
            acc = acc + (r - mean);
            acc
        })
        .collect();
    Ok(Profile { values, mean_removed: mean })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dates(n: usize) -> Vec<NaiveDate> {
        let start = NaiveDate::from_ymd_opt(2004, 10, 1).unwrap();
        (0..n).map(|i| start + chrono::Days::new(i as u64)).collect()
    }

    fn prices(closes: Vec<f64>) -> PriceSeries<f64> {
        PriceSeries::new("t", dates(closes.len()), closes).unwrap()
    }

    #[test]
    fn log_return_of_exponential_step() {
        let c = 123.4_f64;
        let r = log_returns(&prices(vec![c, c * 0.01_f64.exp()])).unwrap();
        assert!((r.values()[0] - 0.01).abs() < 1e-15);
    }

    #[test]
    fn constant_price_gives_zero_returns() {
        let r = log_returns(&prices(vec![5.0, 5.0, 5.0])).unwrap();
        assert_eq!(r.values(), &[0.0, 0.0]);
    }

    #[test]
    fn ten_percent_step() {
        let r = log_returns(&prices(vec![100.0, 110.0])).unwrap();
        assert!((r.values()[0] - 0.0953102).abs() < 5e-7);
    }

    #[test]
    fn rejects_bad_prices() {
        assert!(matches!(
            PriceSeries::new("t", dates(3), vec![1.0, 0.0, 2.0]),
            Err(ScalingError::NonPositivePrice { position: 1, .. })
        ));
        assert!(matches!(
            PriceSeries::new("t", dates(1), vec![1.0]),
            Err(ScalingError::TooShort { needed: 2, got: 1 })
        ));
        let mut d = dates(3);
        d[2] = d[1];
        assert!(matches!(
            PriceSeries::new("t", d, vec![1.0, 2.0, 3.0]),
            Err(ScalingError::DuplicateDate { position: 2, .. })
        ));
        let mut d = dates(3);
        d.swap(0, 1);
        assert!(matches!(
            PriceSeries::new("t", d, vec![1.0, 2.0, 3.0]),
            Err(ScalingError::DatesNotIncreasing { position: 1 })
        ));
    }

    #[test]
    fn profile_of_constant_is_zero() {
        let p = profile(&ReturnSeries::new("c", vec![0.3f64; 3]).unwrap()).unwrap();
        assert!(p.values().iter().all(|v| v.abs() < 1e-15));
        assert!((p.mean_removed() - 0.3).abs() < 1e-15);
    }

    #[test]
    fn profile_of_alternating() {
        let p = profile(&ReturnSeries::new("a", vec![1.0, -1.0, 1.0, -1.0]).unwrap()).unwrap();
        assert_eq!(p.values(), &[1.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn profile_rejects_empty() {
        assert!(matches!(ReturnSeries::<f64>::new("e", vec![]), Err(ScalingError::Empty)));
        assert!(matches!(profile_of::<f64>(&[]), Err(ScalingError::Empty)));
    }

    #[test]
    fn window_bounds() {
        let r = ReturnSeries::new("w", vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(r.window(1, 2).unwrap().values(), &[2.0, 3.0]);
        assert!(r.window(3, 2).is_err());
    }

    proptest! {
        #[test]
        fn returns_are_scale_free(
            closes in prop::collection::vec(0.1f64..1e4, 2..60),
            factor in 1e-3f64..1e3,
        ) {
            let a = log_returns(&prices(closes.clone())).unwrap();
            let b = log_returns(&prices(closes.iter().map(|c| c * factor).collect())).unwrap();
            prop_assert_eq!(a.len(), closes.len() - 1);
            for (x, y) in a.values().iter().zip(b.values()) {
                prop_assert!((x - y).abs() <= 1e-12);
            }
        }

        #[test]
        fn profile_ignores_offsets_and_closes_at_zero(
            values in prop::collection::vec(-1.0f64..1.0, 1..200),
            offset in -10.0f64..10.0,
        ) {
            let p = profile_of(&values).unwrap();
            let shifted: Vec<f64> = values.iter().map(|v| v + offset).collect();
            let q = profile_of(&shifted).unwrap();
            prop_assert_eq!(p.len(), values.len());
            let magnitude: f64 = shifted.iter().map(|v| v.abs()).sum::<f64>().max(1.0);
            prop_assert!(p.values().last().unwrap().abs() <= 1e-9 * magnitude);
            for (x, y) in p.values().iter().zip(q.values()) {
                prop_assert!((x - y).abs() <= 1e-9 * magnitude);
            }
        }
    }
}
