use crate::error::{Result, ScalingError};
use crate::scalar::Scalar;

/// Derivative-of-Gaussian wavelet of a given order with a truncation radius
/// expressed in units of the scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveletSpec {
    order: usize,
    support_halfwidth: f64,
}

impl WaveletSpec {
    pub const MIN_HALFWIDTH: f64 = 4.0;

    pub fn new(order: usize, support_halfwidth: f64) -> Result<Self> {
        if order == 0 {
            return Err(ScalingError::InvalidConfig("DOG order must be at least 1".into()));
        }
        if !(support_halfwidth >= Self::MIN_HALFWIDTH && support_halfwidth.is_finite()) {
            return Err(ScalingError::InvalidConfig(format!(
                "support half-width {support_halfwidth} below {}",
                Self::MIN_HALFWIDTH
            )));
        }
        Ok(Self { order, support_halfwidth })
    }

    /// Half-width `5 + sqrt(2m + 1)`: the envelope `He_m(x) exp(-x^2/2)`
    /// peaks near `sqrt(2m + 1)` and is below 1e-8 of its maximum five units further out.
    pub fn dog(order: usize) -> Result<Self> {
        Self::new(order, 5.0 + ((2 * order + 1) as f64).sqrt())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn support_halfwidth(&self) -> f64 {
        self.support_halfwidth
    }

    /// Largest integer offset kept at scale `a`.
    pub fn reach(&self, scale: f64) -> usize {
        (self.support_halfwidth * scale).floor() as usize
    }

    /// Peak scale of the scalegram of a sinusoid with the given period.
    pub fn scale_for_period(&self, period: f64) -> f64 {
        period * (self.order as f64 + 0.5).sqrt() / std::f64::consts::TAU
    }

    /// Inverse of [`scale_for_period`](Self::scale_for_period).
    pub fn period_for_scale(&self, scale: f64) -> f64 {
        std::f64::consts::TAU * scale / (self.order as f64 + 0.5).sqrt()
    }
}

/// `psi_0(eta) = (-1)^(m+1) / sqrt(Gamma(m + 1/2)) * d^m/d eta^m exp(-eta^2 / 2)`,
/// which equals `-He_m(eta) exp(-eta^2/2) / sqrt(Gamma(m + 1/2))` with the
/// probabilists' Hermite polynomial `He_m`.
pub fn dog_mother<T: Scalar>(order: usize, eta: T) -> T {
    assert!(order >= 1, "DOG order must be at least 1");
    -hermite(order, eta) * (-eta * eta / T::of(2.0)).exp() / T::of(gamma_half_integer(order).sqrt())
}

/// `K_m = integral of (psi_0 * psi_0)(tau)^2 d tau`, computed in the Fourier
/// domain as `2 pi Gamma(2m + 1/2) / (Gamma(m + 1/2)^2 2^(2m + 1/2))`.
/// For white noise of length `N`, `Var E_W(a) / E_W(a)^2 ~ 2 a K_m / N`.
pub(crate) fn white_noise_kernel(order: usize) -> f64 {
    let g = gamma_half_integer(order);
    std::f64::consts::TAU * gamma_half_integer(2 * order) / (g * g * 2f64.powf(2.0 * order as f64 + 0.5))
}

/// `He_m` by the recurrence `He_{k+1} = x He_k - k He_{k-1}`.
fn hermite<T: Scalar>(order: usize, x: T) -> T {
    let mut previous = T::one();
    if order == 0 {
        return previous;
    }
    let mut current = x;
    for k in 1..order {
        let next = x * current - T::of_usize(k) * previous;
        previous = current;
        current = next;
    }
    current
}

/// `Gamma(m + 1/2) = sqrt(pi) * prod_{k=1..m} (k - 1/2)`.
fn gamma_half_integer(order: usize) -> f64 {
    (1..=order).fold(std::f64::consts::PI.sqrt(), |acc, k| acc * (k as f64 - 0.5))
}
