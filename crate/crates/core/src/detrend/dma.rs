use rayon::prelude::*;

use super::dfa::check_scales;
use super::{Method, ScaleGrid, ScalingFunction};
use crate::error::{Result, ScalingError};
use crate::scalar::Scalar;
use crate::series::{profile, ReturnSeries};

/// Centered DMA fluctuation `sigma(n)` over the odd scales of `grid`.
pub fn dma_fluctuation<T: Scalar>(returns: &ReturnSeries<T>, grid: &ScaleGrid) -> Result<ScalingFunction<T>> {
    dma_fluctuation_scales(returns, &grid.odd_scales())
}

/// Centered DMA fluctuation at explicit odd scales `n >= 3`.
pub fn dma_fluctuation_scales<T: Scalar>(returns: &ReturnSeries<T>, scales: &[usize]) -> Result<ScalingFunction<T>> {
    if let Some(&even) = scales.iter().find(|&&n| n % 2 == 0) {
        return Err(ScalingError::InvalidGrid(format!("centered DMA needs odd scales, got {even}")));
    }
    check_scales(scales, 3, returns.len())?;
    let y = profile(returns)?;
    let prefix = prefix_sums(y.values());
    let values: Vec<T> = scales.par_iter().map(|&n| rms(y.values(), &prefix, n)).collect();
    ScalingFunction::new(
        Method::Dma,
        0,
        scales.iter().map(|&n| T::of_usize(n)).collect(),
        values,
        returns.source_name(),
    )
}

/// `sigma(n)` of an already integrated profile; `n` odd and at most the length.
pub fn dma_at_scale<T: Scalar>(profile: &[T], n: usize) -> T {
    rms(profile, &prefix_sums(profile), n)
}

/// Detrended values `x(i) - mean(x[i-h..=i+h])`, `h = (n-1)/2`, at the
/// `len - n + 1` interior positions where the centered window fits.
pub fn dma_detrend<T: Scalar>(x: &[T], n: usize) -> Vec<T> {
    assert!(n % 2 == 1 && n <= x.len(), "window {n} must be odd and fit in {}", x.len());
    let prefix = prefix_sums(x);
    detrended(x, &prefix, n).collect()
}

fn prefix_sums<T: Scalar>(x: &[T]) -> Vec<T> {
    let mut prefix = Vec::with_capacity(x.len() + 1);
    prefix.push(T::zero());
    let mut acc = T::zero();
    for &v in x {
        acc = acc + v;
        prefix.push(acc);
    }
    prefix
}

fn detrended<'a, T: Scalar>(x: &'a [T], prefix: &'a [T], n: usize) -> impl Iterator<Item = T> + 'a {
    let half = (n - 1) / 2;
    let width = T::of_usize(n);
    (half..x.len() - half).map(move |i| x[i] - (prefix[i + half + 1] - prefix[i - half]) / width)
}

fn rms<T: Scalar>(x: &[T], prefix: &[T], n: usize) -> T {
    let count = x.len() - n + 1;
    let total = detrended(x, prefix, n).fold(T::zero(), |acc, d| acc + d * d);
    (total / T::of_usize(count)).sqrt()
}
