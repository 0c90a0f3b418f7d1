use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use super::dog::{dog_mother, WaveletSpec};
use crate::error::{Result, ScalingError};
use crate::scalar::Scalar;
use crate::series::ReturnSeries;

/// Coefficients `W(a, b)` for every scale `a` and every position `b` in `0..N`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletField<T> {
    spec: WaveletSpec,
    scales: Vec<T>,
    len: usize,
    coefficients: Vec<Vec<T>>,
    series_name: String,
}

impl<T: Scalar> WaveletField<T> {
    pub fn spec(&self) -> WaveletSpec {
        self.spec
    }

    pub fn scales(&self) -> &[T] {
        &self.scales
    }

    /// Number of translations (the series length).
    pub fn translations(&self) -> usize {
        self.len
    }

    /// Coefficients at the `index`-th scale, one per translation.
    pub fn row(&self, index: usize) -> &[T] {
        &self.coefficients[index]
    }

    pub fn rows(&self) -> impl Iterator<Item = (T, &[T])> + '_ {
        self.scales.iter().copied().zip(self.coefficients.iter().map(Vec::as_slice))
    }

    pub fn series_name(&self) -> &str {
        &self.series_name
    }

    pub fn is_empty(&self) -> bool {
        self.scales.is_empty() || self.len == 0
    }
}

/// Continuous wavelet transform, evaluated through the FFT.
///
/// Produces the same truncated sums as [`cwt_direct`] up to transform
/// round-off: `W(a, b) = sum_k R(k) a^{-1/2} psi_0((k - b) / a)` with
/// `|k - b| <= floor(halfwidth * a)`, zero outside the series.
pub fn cwt<T: Scalar>(returns: &ReturnSeries<T>, spec: &WaveletSpec, scales: &[T]) -> Result<WaveletField<T>> {
    check_scales(scales)?;
    let values = returns.values();
    let len = values.len();
    let max_reach = scales.iter().map(|a| spec.reach(a.as_f64())).max().unwrap_or(0);
    // Circular correlation of length >= len + reach never wraps a kept offset.
    let fft_len = (len + max_reach).next_power_of_two();

    let mut planner = FftPlanner::<T>::new();
    let forward = planner.plan_fft_forward(fft_len);
    let inverse = planner.plan_fft_inverse(fft_len);

    let mut signal: Vec<Complex<T>> = values.iter().map(|&v| Complex::new(v, T::zero())).collect();
    signal.resize(fft_len, Complex::new(T::zero(), T::zero()));
    forward.process(&mut signal);

    let norm = T::one() / T::of_usize(fft_len);
    let coefficients = scales
        .par_iter()
        .map(|&a| {
            let kernel = sampled_kernel(spec, a);
            let reach = (kernel.len() - 1) / 2;
            let mut buffer = vec![Complex::new(T::zero(), T::zero()); fft_len];
            for (i, &w) in kernel.iter().enumerate() {
                // Offset d = i - reach stored at d mod fft_len.
                let slot = (i + fft_len - reach) % fft_len;
                buffer[slot] = Complex::new(w, T::zero());
            }
            forward.process(&mut buffer);
            for (b, s) in buffer.iter_mut().zip(&signal) {
                *b = s * b.conj();
            }
            inverse.process(&mut buffer);
            buffer[..len].iter().map(|c| c.re * norm).collect()
        })
        .collect();

    Ok(WaveletField {
        spec: *spec,
        scales: scales.to_vec(),
        len,
        coefficients,
        series_name: returns.source_name().to_string(),
    })
}

/// Reference transform: explicit truncated sum for every coefficient.
pub fn cwt_direct<T: Scalar>(returns: &ReturnSeries<T>, spec: &WaveletSpec, scales: &[T]) -> Result<WaveletField<T>> {
    check_scales(scales)?;
    let values = returns.values();
    let len = values.len();
    let coefficients = scales
        .par_iter()
        .map(|&a| {
            let kernel = sampled_kernel(spec, a);
            let reach = (kernel.len() - 1) / 2;
            (0..len)
                .map(|b| {
                    let lo = b.saturating_sub(reach);
                    let hi = (b + reach).min(len - 1);
                    (lo..=hi).fold(T::zero(), |acc, k| acc + values[k] * kernel[k + reach - b])
                })
                .collect()
        })
        .collect();
    Ok(WaveletField {
        spec: *spec,
        scales: scales.to_vec(),
        len,
        coefficients,
        series_name: returns.source_name().to_string(),
    })
}

/// `a^{-1/2} psi_0(d / a)` for `d = -reach..=reach`.
fn sampled_kernel<T: Scalar>(spec: &WaveletSpec, scale: T) -> Vec<T> {
    let reach = spec.reach(scale.as_f64()) as isize;
    let norm = scale.sqrt().recip();
    (-reach..=reach).map(|d| norm * dog_mother(spec.order(), T::of(d as f64) / scale)).collect()
}

fn check_scales<T: Scalar>(scales: &[T]) -> Result<()> {
    if scales.is_empty() {
        return Err(ScalingError::InvalidGrid("empty wavelet scale list".into()));
    }
    if let Some(bad) = scales.iter().find(|a| !(a.is_finite() && **a >= T::one())) {
        return Err(ScalingError::InvalidGrid(format!("wavelet scale {bad} must be at least 1")));
    }
    Ok(())
}
