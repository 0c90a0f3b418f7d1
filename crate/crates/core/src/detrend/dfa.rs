use rayon::prelude::*;

use super::poly::SegmentFitter;
use super::{Method, ScaleGrid, ScalingFunction};
use crate::error::{Result, ScalingError};
use crate::scalar::Scalar;
use crate::series::{profile, ReturnSeries};

/// Largest scale allowed for a series of `len` points (`len / 4`).
pub fn max_admissible_scale(len: usize) -> usize {
    len / 4
}

/// DFA fluctuation `F(n)` over every scale of `grid`.
pub fn dfa_fluctuation<T: Scalar>(
    returns: &ReturnSeries<T>,
    order: usize,
    grid: &ScaleGrid,
) -> Result<ScalingFunction<T>> {
    dfa_fluctuation_scales(returns, order, &grid.integer_scales())
}

/// DFA fluctuation `F(n)` at explicit scales.
///
/// The profile is cut into all `N - n + 1` segments of length `n` at stride 1,
/// each segment loses its least-squares polynomial of degree `order`, and
/// `F(n)` is the root mean square of the residuals over all segment points.
pub fn dfa_fluctuation_scales<T: Scalar>(
    returns: &ReturnSeries<T>,
    order: usize,
    scales: &[usize],
) -> Result<ScalingFunction<T>> {
    if order == 0 {
        return Err(ScalingError::InvalidConfig("DFA order must be at least 1".into()));
    }
    let len = returns.len();
    check_scales(scales, order + 2, len)?;
    let y = profile(returns)?;
    let values: Vec<T> = scales.par_iter().map(|&n| dfa_at_scale(y.values(), n, order)).collect();
    ScalingFunction::new(
        Method::Dfa,
        order,
        scales.iter().map(|&n| T::of_usize(n)).collect(),
        values,
        returns.source_name(),
    )
}

/// `F(n)` of an already integrated profile; `n` must exceed `order`.
pub fn dfa_at_scale<T: Scalar>(profile: &[T], n: usize, order: usize) -> T {
    assert!(n > order && n <= profile.len(), "scale {n} invalid for order {order}");
    let segments = profile.len() - n + 1;
    let total = SegmentFitter::new(n, order).total_residual(profile);
    (total / (T::of_usize(segments) * T::of_usize(n))).sqrt()
}

pub(super) fn check_scales(scales: &[usize], lowest: usize, len: usize) -> Result<()> {
    let Some(&first) = scales.first() else {
        return Err(ScalingError::InvalidGrid("no scales".into()));
    };
    if scales.windows(2).any(|w| w[1] <= w[0]) {
        return Err(ScalingError::InvalidGrid("scales must be strictly ascending".into()));
    }
    if first < lowest {
        return Err(ScalingError::InvalidGrid(format!("scale {first} below the admissible minimum {lowest}")));
    }
    if len < 4 * first {
        return Err(ScalingError::TooShort { needed: 4 * first, got: len });
    }
    let last = *scales.last().expect("non-empty");
    if last > max_admissible_scale(len) {
        return Err(ScalingError::InvalidGrid(format!(
            "scale {last} exceeds N/4 = {} for N = {len}",
            max_admissible_scale(len)
        )));
    }
    Ok(())
}
