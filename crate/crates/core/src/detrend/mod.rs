//! Detrended fluctuation functions: DFA with polynomial local trends and
//! centered detrended moving average (cDMA).

mod dfa;
mod dma;
mod grid;
pub(crate) mod poly;

pub use dfa::{dfa_at_scale, dfa_fluctuation, dfa_fluctuation_scales, max_admissible_scale};
pub use dma::{dma_at_scale, dma_detrend, dma_fluctuation, dma_fluctuation_scales};
pub use grid::ScaleGrid;

use std::fmt;

use crate::error::{Result, ScalingError};
use crate::scalar::Scalar;

/// Which estimator produced a scaling function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Dfa,
    Dma,
    Scalegram,
    RescaledScalegram,
}

impl Method {
    /// Short tag used in file names and report headers.
    pub fn tag(self) -> &'static str {
        match self {
            Method::Dfa => "dfa",
            Method::Dma => "cdma",
            Method::Scalegram => "scalegram",
            Method::RescaledScalegram => "rescaled",
        }
    }

    /// Inverse of [`tag`](Self::tag).
    pub fn from_tag(tag: &str) -> Option<Self> {
        [Method::Dfa, Method::Dma, Method::Scalegram, Method::RescaledScalegram].into_iter().find(|m| m.tag() == tag)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A `(scale, value)` curve such as `F(n)`, `sigma(n)` or `E_W(a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFunction<T> {
    method: Method,
    order: usize,
    scales: Vec<T>,
    values: Vec<T>,
    series_name: String,
}

impl<T: Scalar> ScalingFunction<T> {
    /// Checks strictly ascending positive scales and finite non-negative values.
    pub fn new(
        method: Method,
        order: usize,
        scales: Vec<T>,
        values: Vec<T>,
        series_name: impl Into<String>,
    ) -> Result<Self> {
        if scales.len() != values.len() {
            return Err(ScalingError::LengthMismatch(format!("{} scales for {} values", scales.len(), values.len())));
        }
        if scales.iter().any(|s| !s.is_finite() || *s <= T::zero()) {
            return Err(ScalingError::InvalidGrid("scales must be finite and positive".into()));
        }
        if scales.windows(2).any(|w| w[1] <= w[0]) {
            return Err(ScalingError::InvalidGrid("scales must be strictly ascending".into()));
        }
        if let Some(position) = values.iter().position(|v| !v.is_finite() || *v < T::zero()) {
            return Err(ScalingError::NonFinite { position });
        }
        Ok(Self { method, order, scales, values, series_name: series_name.into() })
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn scales(&self) -> &[T] {
        &self.scales
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn series_name(&self) -> &str {
        &self.series_name
    }

    pub fn len(&self) -> usize {
        self.scales.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scales.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.scales.iter().copied().zip(self.values.iter().copied())
    }

    /// Same curve with every value multiplied by `factor`.
    pub fn scaled(&self, factor: T) -> Result<Self> {
        Self::new(
            self.method,
            self.order,
            self.scales.clone(),
            self.values.iter().map(|&v| v * factor).collect(),
            self.series_name.clone(),
        )
    }
}
