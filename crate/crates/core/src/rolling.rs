//! Time-dependent centered DMA: local Hurst exponents in a sliding window.

use rayon::prelude::*;

use crate::detrend::{dma_fluctuation_scales, max_admissible_scale, ScaleGrid};
use crate::error::{Result, ScalingError};
use crate::fit::fit_exponent;
use crate::scalar::Scalar;
use crate::series::ReturnSeries;

#[derive(Debug, Clone, PartialEq)]
pub struct TdConfig {
    pub window_size: usize,
    pub step: usize,
    pub scale_lo: usize,
    pub scale_hi: usize,
    /// Fit range; `None` means `[11, 201]` clipped to the scale range.
    pub fit: Option<(usize, usize)>,
    pub min_window: usize,
    pub r2_floor: f64,
    pub points_per_decade: usize,
}

impl Default for TdConfig {
    fn default() -> Self {
        Self {
            window_size: 1000,
            step: 2,
            scale_lo: 2,
            scale_hi: 500,
            fit: None,
            min_window: 100,
            r2_floor: 0.9,
            points_per_decade: 20,
        }
    }
}

pub const DEFAULT_TD_FIT: (usize, usize) = (11, 201);

/// Scales and fit range a [`TdConfig`] resolves to, with a note for every
/// value that had to be adjusted.
#[derive(Debug, Clone, PartialEq)]
pub struct TdPlan {
    pub scales: Vec<usize>,
    pub fit_lo: usize,
    pub fit_hi: usize,
    pub notices: Vec<String>,
}

impl TdConfig {
    pub fn plan(&self) -> Result<TdPlan> {
        if self.step == 0 {
            return Err(ScalingError::InvalidConfig("step must be at least 1".into()));
        }
        if self.window_size < self.min_window {
            return Err(ScalingError::InvalidConfig(format!(
                "window {} below the minimum {}",
                self.window_size, self.min_window
            )));
        }
        if !(0.0..=1.0).contains(&self.r2_floor) {
            return Err(ScalingError::InvalidConfig(format!("r2 floor {} outside [0, 1]", self.r2_floor)));
        }
        let mut notices = Vec::new();
        let mut lo = self.scale_lo.max(3);
        if lo.is_multiple_of(2) {
            lo += 1;
        }
        if lo != self.scale_lo {
            notices
                .push(format!("scale floor raised from {} to {lo}: centered windows need odd n >= 3", self.scale_lo));
        }
        let cap = max_admissible_scale(self.window_size);
        let mut hi = self.scale_hi;
        if hi > cap {
            hi = cap;
            notices.push(format!(
                "scale ceiling lowered from {} to {hi} = N_s/4 for N_s = {}",
                self.scale_hi, self.window_size
            ));
        }
        if hi <= lo {
            return Err(ScalingError::InvalidGrid(format!("empty scale range [{lo}, {hi}]")));
        }
        let scales = ScaleGrid::new(lo, hi, self.points_per_decade)?.odd_scales();
        let (want_lo, want_hi) = self.fit.unwrap_or(DEFAULT_TD_FIT);
        let fit_lo = want_lo.max(lo);
        let fit_hi = want_hi.min(*scales.last().expect("non-empty grid"));
        if (fit_lo, fit_hi) != (want_lo, want_hi) {
            notices.push(format!("fit range [{want_lo}, {want_hi}] clipped to [{fit_lo}, {fit_hi}]"));
        }
        if fit_lo >= fit_hi {
            return Err(ScalingError::InvalidConfig(format!("empty fit range [{fit_lo}, {fit_hi}]")));
        }
        Ok(TdPlan { scales, fit_lo, fit_hi, notices })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HurstTrack<T> {
    /// Index of the last return inside each window.
    pub positions: Vec<usize>,
    /// `None` where the window's fit failed or fell below the r2 floor.
    pub local_h: Vec<Option<T>>,
    pub mean_h: Option<T>,
    pub valid_fraction: f64,
    pub fit_lo: usize,
    pub fit_hi: usize,
    pub notices: Vec<String>,
}

/// Runs centered DMA on every window of `cfg.window_size` returns, advancing by
/// `cfg.step`. Each window builds its own profile around its own mean.
pub fn td_dma<T: Scalar>(returns: &ReturnSeries<T>, cfg: &TdConfig) -> Result<HurstTrack<T>> {
    let plan = cfg.plan()?;
    if returns.len() < cfg.window_size {
        return Err(ScalingError::TooShort { needed: cfg.window_size, got: returns.len() });
    }
    let starts: Vec<usize> = (0..=returns.len() - cfg.window_size).step_by(cfg.step).collect();
    let (fit_lo, fit_hi) = (T::of_usize(plan.fit_lo), T::of_usize(plan.fit_hi));
    let floor = T::of(cfg.r2_floor);
    let local_h: Vec<Option<T>> = starts
        .par_iter()
        .map(|&start| {
            let window = returns.window(start, cfg.window_size).ok()?;
            let sigma = dma_fluctuation_scales(&window, &plan.scales).ok()?;
            let fit = fit_exponent(&sigma, fit_lo, fit_hi).ok()?;
            (fit.r_squared >= floor).then_some(fit.exponent)
        })
        .collect();
    let valid: Vec<T> = local_h.iter().flatten().copied().collect();
    let mean_h = (!valid.is_empty()).then(|| valid.iter().copied().sum::<T>() / T::of_usize(valid.len()));
    Ok(HurstTrack {
        positions: starts.iter().map(|s| s + cfg.window_size - 1).collect(),
        valid_fraction: valid.len() as f64 / local_h.len() as f64,
        local_h,
        mean_h,
        fit_lo: plan.fit_lo,
        fit_hi: plan.fit_hi,
        notices: plan.notices,
    })
}

/// Mean of the valid local exponents.
pub fn mean_local_hurst<T: Scalar>(track: &HurstTrack<T>) -> Result<T> {
    let valid: Vec<T> = track.local_h.iter().flatten().copied().collect();
    if valid.is_empty() {
        return Err(ScalingError::Degenerate("no valid windows".into()));
    }
    Ok(valid.iter().copied().sum::<T>() / T::of_usize(valid.len()))
}
