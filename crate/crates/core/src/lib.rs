//! Scaling analysis of financial time series: detrended fluctuation analysis
//! (DFA), centered detrended moving average (cDMA), derivative-of-Gaussian
//! wavelet scalegrams, exponent fits, cycle detection and sliding-window
//! Hurst exponents.
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`); the aliases below
//! fix the usual double-precision choice.
//!
//! ```
//! use scaling_core::{dfa_fluctuation, fit_exponent, generate, ScaleGrid, SynthSpec};
//!
//! let returns = generate::<f64>(&SynthSpec::white(4096, 7)).unwrap();
//! let f = dfa_fluctuation(&returns, 2, &ScaleGrid::new(10, 1024, 40).unwrap()).unwrap();
//! let alpha = fit_exponent(&f, 10.0, 100.0).unwrap().exponent;
//! assert!((alpha - 0.5).abs() < 0.1);
//! ```

pub mod cycles;
pub mod detrend;
pub mod error;
pub mod fit;
pub mod io;
pub mod pipeline;
pub mod rolling;
pub mod scalar;
pub mod series;
pub mod synth;
pub mod wavelet;

pub use cycles::{detect_crossovers, detect_cycles, DetectedPeriod};
pub use detrend::{dfa_fluctuation, dma_fluctuation, Method, ScaleGrid};
pub use error::{Result, ScalingError};
pub use fit::{alpha_to_beta, beta_to_alpha, fit_exponent};
pub use rolling::{mean_local_hurst, td_dma, TdConfig};
pub use scalar::Scalar;
pub use series::{log_returns, profile};
pub use synth::{generate, SynthKind, SynthSpec};
pub use wavelet::{cwt, rescale_scalegram, scalegram, WaveletSpec};

pub type PriceSeries = series::PriceSeries<f64>;
pub type ReturnSeries = series::ReturnSeries<f64>;
pub type Profile = series::Profile<f64>;
pub type ScalingFunction = detrend::ScalingFunction<f64>;
pub type ExponentFit = fit::ExponentFit<f64>;
pub type WaveletField = wavelet::WaveletField<f64>;
pub type CycleReport = cycles::CycleReport<f64>;
pub type HurstTrack = rolling::HurstTrack<f64>;
pub type ReportRow = pipeline::ReportRow<f64>;
