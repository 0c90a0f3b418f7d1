use crate::error::{Result, ScalingError};
use crate::scalar::Scalar;

/// Logarithmically spaced scales between `min_scale` and `max_scale`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScaleGrid {
    pub min_scale: usize,
    pub max_scale: usize,
    pub points_per_decade: usize,
}

impl ScaleGrid {
    pub const DEFAULT_POINTS_PER_DECADE: usize = 40;

    pub fn new(min_scale: usize, max_scale: usize, points_per_decade: usize) -> Result<Self> {
        if min_scale == 0 {
            return Err(ScalingError::InvalidGrid("min_scale must be positive".into()));
        }
        if max_scale < min_scale {
            return Err(ScalingError::InvalidGrid(format!("max_scale {max_scale} below min_scale {min_scale}")));
        }
        if points_per_decade == 0 {
            return Err(ScalingError::InvalidGrid("points_per_decade must be positive".into()));
        }
        Ok(Self { min_scale, max_scale, points_per_decade })
    }

    pub fn with_default_density(min_scale: usize, max_scale: usize) -> Result<Self> {
        Self::new(min_scale, max_scale, Self::DEFAULT_POINTS_PER_DECADE)
    }

    /// Real-valued log-spaced points, both endpoints included.
    pub fn real_scales<T: Scalar>(&self) -> Vec<T> {
        let lo = self.min_scale as f64;
        let hi = self.max_scale as f64;
        if self.max_scale == self.min_scale {
            return vec![T::of(lo)];
        }
        let steps = ((hi / lo).log10() * self.points_per_decade as f64).ceil().max(1.0) as usize;
        let ratio = (hi / lo).ln();
        (0..=steps)
            .map(|i| if i == steps { T::of(hi) } else { T::of(lo * (ratio * i as f64 / steps as f64).exp()) })
            .collect()
    }

    /// Integer-rounded, deduplicated scales.
    pub fn integer_scales(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .real_scales::<f64>()
            .into_iter()
            .map(|s| (s.round() as usize).clamp(self.min_scale, self.max_scale))
            .collect();
        out.dedup();
        out
    }

    /// Scales rounded to the nearest odd integer inside the bounds, deduplicated.
    /// Even values round up unless that leaves the grid.
    pub fn odd_scales(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .integer_scales()
            .into_iter()
            .filter_map(|n| {
                if n % 2 == 1 {
                    Some(n)
                } else if n < self.max_scale {
                    Some(n + 1)
                } else if n > self.min_scale {
                    Some(n - 1)
                } else {
                    None
                }
            })
            .collect();
        out.dedup();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_are_included() {
        let g = ScaleGrid::new(10, 100, 40).unwrap();
        let s = g.integer_scales();
        assert_eq!(*s.first().unwrap(), 10);
        assert_eq!(*s.last().unwrap(), 100);
        assert!(s.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn real_scales_are_geometric() {
        let g = ScaleGrid::new(10, 1000, 10).unwrap();
        let s: Vec<f64> = g.real_scales();
        assert_eq!(s.len(), 21);
        for w in s.windows(2) {
            assert!((w[1] / w[0] - 10f64.powf(0.1)).abs() < 1e-12);
        }
    }

    #[test]
    fn odd_scales_stay_odd_and_inside() {
        let g = ScaleGrid::new(3, 250, 40).unwrap();
        let s = g.odd_scales();
        assert_eq!(s[0], 3);
        assert!(s.iter().all(|n| n % 2 == 1 && *n >= 3 && *n <= 250));
        assert!(s.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(*s.last().unwrap(), 249);
    }

    #[test]
    fn rejects_inverted_bounds() {
        assert!(ScaleGrid::new(20, 10, 40).is_err());
        assert!(ScaleGrid::new(0, 10, 40).is_err());
        assert!(ScaleGrid::new(1, 10, 0).is_err());
    }

    #[test]
    fn single_point_grid() {
        let g = ScaleGrid::new(7, 7, 40).unwrap();
        assert_eq!(g.integer_scales(), vec![7]);
        assert_eq!(g.odd_scales(), vec![7]);
    }
}
