//! Seeded synthetic return series with known scaling: white noise,
//! fractional Gaussian noise by spectral synthesis, and white noise with an
//! embedded sinusoid.
//!
//! The generator is pinned so series are reproducible across platforms:
//! ChaCha8 seeded through `seed_from_u64`, 64-bit outputs mapped to doubles by
//! keeping the top 53 bits (`(x >> 11) * 2^-53`), and standard normals from the
//! Box-Muller transform, both members of each pair used (cosine branch first).

use chrono::{Days, NaiveDate};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Result, ScalingError};
use crate::scalar::Scalar;
use crate::series::{PriceSeries, ReturnSeries};

pub const MIN_LENGTH: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SynthKind {
    /// i.i.d. standard normal draws.
    White,
    /// Power-law spectrum `f^-(2H-1)` with random phases, unit variance.
    Fgn { hurst: f64 },
    /// White noise plus `amplitude_ratio * sin(2 pi k / period)`.
    SinusoidPlusNoise { period: f64, amplitude_ratio: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthSpec {
    pub kind: SynthKind,
    pub length: usize,
    pub seed: u64,
}

impl SynthSpec {
    pub fn white(length: usize, seed: u64) -> Self {
        Self { kind: SynthKind::White, length, seed }
    }

    pub fn fgn(hurst: f64, length: usize, seed: u64) -> Self {
        Self { kind: SynthKind::Fgn { hurst }, length, seed }
    }

    pub fn sinusoid_plus_noise(period: f64, amplitude_ratio: f64, length: usize, seed: u64) -> Self {
        Self { kind: SynthKind::SinusoidPlusNoise { period, amplitude_ratio }, length, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.length < MIN_LENGTH {
            return Err(ScalingError::InvalidConfig(format!("synthetic length {} below {MIN_LENGTH}", self.length)));
        }
        match self.kind {
            SynthKind::White => Ok(()),
            SynthKind::Fgn { hurst } if hurst > 0.0 && hurst < 1.0 => Ok(()),
            SynthKind::Fgn { hurst } => {
                Err(ScalingError::InvalidConfig(format!("Hurst target {hurst} outside (0, 1)")))
            }
            SynthKind::SinusoidPlusNoise { period, amplitude_ratio } => {
                if !(period > 0.0 && period.is_finite()) {
                    Err(ScalingError::InvalidConfig(format!("period {period} must be positive")))
                } else if !(amplitude_ratio >= 0.0 && amplitude_ratio.is_finite()) {
                    Err(ScalingError::InvalidConfig(format!("amplitude ratio {amplitude_ratio} must be non-negative")))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Short name such as `fgn-h0.7-s3`, used as the series name.
    pub fn label(&self) -> String {
        match self.kind {
            SynthKind::White => format!("white-s{}", self.seed),
            SynthKind::Fgn { hurst } => format!("fgn-h{hurst}-s{}", self.seed),
            SynthKind::SinusoidPlusNoise { period, amplitude_ratio } => {
                format!("sine-t{period}-a{amplitude_ratio}-s{}", self.seed)
            }
        }
    }
}

/// The pinned uniform/normal source.
#[derive(Debug, Clone)]
pub struct SeededNormal {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl SeededNormal {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed), spare: None }
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn standard_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        // 1 - u lies in (0, 1], keeping the logarithm finite.
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = std::f64::consts::TAU * u2;
        self.spare = Some(radius * angle.sin());
        radius * angle.cos()
    }
}

pub fn generate<T: Scalar>(spec: &SynthSpec) -> Result<ReturnSeries<T>> {
    spec.validate()?;
    let raw = match spec.kind {
        SynthKind::White => white(spec.length, spec.seed),
        SynthKind::Fgn { hurst } => spectral_fgn(hurst, spec.length, spec.seed),
        SynthKind::SinusoidPlusNoise { period, amplitude_ratio } => {
            let mut noise = white(spec.length, spec.seed);
            if amplitude_ratio > 0.0 {
                for (k, v) in noise.iter_mut().enumerate() {
                    *v += amplitude_ratio * (std::f64::consts::TAU * k as f64 / period).sin();
                }
            }
            noise
        }
    };
    ReturnSeries::new(spec.label(), raw.into_iter().map(T::of).collect())
}

fn white(length: usize, seed: u64) -> Vec<f64> {
    let mut source = SeededNormal::new(seed);
    (0..length).map(|_| source.standard_normal()).collect()
}

fn spectral_fgn(hurst: f64, length: usize, seed: u64) -> Vec<f64> {
    let beta = 2.0 * hurst - 1.0;
    let mut source = SeededNormal::new(seed);
    let mut spectrum = vec![Complex::new(0.0, 0.0); length];
    let half = length / 2;
    for k in 1..=half {
        let frequency = k as f64 / length as f64;
        let amplitude = frequency.powf(-beta / 2.0);
        let phase = std::f64::consts::TAU * source.uniform();
        if 2 * k == length {
            // Nyquist bin of an even length must be real.
            spectrum[k] = Complex::new(amplitude * phase.cos(), 0.0);
        } else {
            let c = Complex::from_polar(amplitude, phase);
            spectrum[k] = c;
            spectrum[length - k] = c.conj();
        }
    }
    FftPlanner::new().plan_fft_inverse(length).process(&mut spectrum);
    let mut series: Vec<f64> = spectrum.into_iter().map(|c| c.re).collect();
    let mean = series.iter().sum::<f64>() / length as f64;
    let std = (series.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / length as f64).sqrt();
    for v in &mut series {
        *v = (*v - mean) / std;
    }
    series
}

/// Price path `S(0) = start_price`, `S(k+1) = S(k) exp(volatility * R(k))`
/// on consecutive calendar days from `start_date`.
pub fn prices_from_returns<T: Scalar>(
    returns: &ReturnSeries<T>,
    volatility: f64,
    start_price: f64,
    start_date: NaiveDate,
) -> Result<PriceSeries<T>> {
    if !(volatility > 0.0 && start_price > 0.0) {
        return Err(ScalingError::InvalidConfig("volatility and start price must be positive".into()));
    }
    let mut log_price = start_price.ln();
    let mut closes = Vec::with_capacity(returns.len() + 1);
    closes.push(T::of(start_price));
    for &r in returns.values() {
        log_price += volatility * r.as_f64();
        closes.push(T::of(log_price.exp()));
    }
    let dates = (0..closes.len() as u64)
        .map(|d| start_date.checked_add_days(Days::new(d)))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| ScalingError::InvalidConfig("date range overflow".into()))?;
    PriceSeries::new(returns.source_name(), dates, closes)
}
