//! Derivative-of-Gaussian continuous wavelet transform and scalegrams.

mod cwt;
mod dog;

pub use cwt::{cwt, cwt_direct, WaveletField};
pub(crate) use dog::white_noise_kernel;
pub use dog::{dog_mother, WaveletSpec};

use crate::detrend::{Method, ScalingFunction};
use crate::error::{Result, ScalingError};
use crate::scalar::Scalar;

/// Mean wavelet power `E_W(a) = sum_b W(a, b)^2` (unit translation step).
pub fn scalegram<T: Scalar>(field: &WaveletField<T>) -> Result<ScalingFunction<T>> {
    if field.is_empty() {
        return Err(ScalingError::Empty);
    }
    // Fixed left-to-right accumulation per scale.
    let values = field.rows().map(|(_, row)| row.iter().fold(T::zero(), |acc, &w| acc + w * w)).collect();
    ScalingFunction::new(Method::Scalegram, field.spec().order(), field.scales().to_vec(), values, field.series_name())
}

/// `G(a) = sqrt(a E_W(a))`; a scalegram slope `beta` becomes `(beta + 1) / 2`.
pub fn rescale_scalegram<T: Scalar>(sg: &ScalingFunction<T>) -> Result<ScalingFunction<T>> {
    if sg.method() != Method::Scalegram {
        return Err(ScalingError::InvalidConfig(format!("expected a scalegram, got {}", sg.method())));
    }
    if let Some((a, _)) = sg.points().find(|&(_, e)| e <= T::zero()) {
        return Err(ScalingError::Degenerate(format!("scalegram vanishes at scale {a}")));
    }
    ScalingFunction::new(
        Method::RescaledScalegram,
        sg.order(),
        sg.scales().to_vec(),
        sg.points().map(|(a, e)| (a * e).sqrt()).collect(),
        sg.series_name(),
    )
}

/// Wavelet scales whose scalegram peaks would sit at the given periods.
pub fn scales_for_periods<T: Scalar>(spec: &WaveletSpec, periods: &[T]) -> Vec<T> {
    periods.iter().map(|&p| T::of(spec.scale_for_period(p.as_f64()))).collect()
}

/// Relabels the scale axis of a (rescaled) scalegram with equivalent periods
/// `2 pi a / sqrt(m + 1/2)`, so it can be fitted and plotted against DFA or DMA
/// curves whose axis is a window length in samples.
pub fn on_period_axis<T: Scalar>(sg: &ScalingFunction<T>) -> Result<ScalingFunction<T>> {
    if !matches!(sg.method(), Method::Scalegram | Method::RescaledScalegram) {
        return Err(ScalingError::InvalidConfig(format!("expected a scalegram, got {}", sg.method())));
    }
    let spec = WaveletSpec::dog(sg.order())?;
    ScalingFunction::new(
        sg.method(),
        sg.order(),
        sg.scales().iter().map(|&a| T::of(spec.period_for_scale(a.as_f64()))).collect(),
        sg.values().to_vec(),
        sg.series_name(),
    )
}
