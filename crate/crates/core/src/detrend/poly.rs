//! Least-squares polynomial detrending of every stride-1 segment of a profile.
//!
//! Each segment of length `n` is fitted on the centered abscissa
//! `t_l = (l - h) / h`, `h = (n - 1) / 2`, in an orthonormal polynomial basis
//! `q_j(t) = sum_p c_jp t^p`. The residual energy of a segment is
//! `sum y^2 - sum_j <q_j, y>^2`, and the power moments `sum_l t_l^p y` slide
//! from one segment to the next by a binomial shift. Moments are rebuilt from
//! scratch at the start of every block of `n` segments, with values taken
//! relative to the first point of the block so the subtraction stays on the
//! scale of the local fluctuations rather than the profile level.

use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub(crate) struct SegmentFitter<T> {
    len: usize,
    /// `t_l` for `l = 0..=len` (one past the segment for the incoming point).
    abscissa: Vec<T>,
    /// Row `j` holds the monomial coefficients of `q_j`.
    basis: Vec<Vec<T>>,
    /// `shift[p][q] = C(p, q) (-dt)^(p-q)`, mapping moments about `t` to `t - dt`.
    shift: Vec<Vec<T>>,
}

impl<T: Scalar> SegmentFitter<T> {
    /// Requires `len > order`.
    pub(crate) fn new(len: usize, order: usize) -> Self {
        assert!(len > order, "segment length {len} must exceed order {order}");
        let half = if len > 1 { (len as f64 - 1.0) / 2.0 } else { 1.0 };
        let t: Vec<f64> = (0..=len).map(|l| (l as f64 - half) / half).collect();
        let samples = &t[..len];

        // Gram-Schmidt (twice) on monomials, tracking monomial coefficients.
        let mut values: Vec<Vec<f64>> = Vec::with_capacity(order + 1);
        let mut coeffs: Vec<Vec<f64>> = Vec::with_capacity(order + 1);
        for degree in 0..=order {
            let mut v: Vec<f64> = samples.iter().map(|&x| x.powi(degree as i32)).collect();
            let mut c = vec![0.0; order + 1];
            c[degree] = 1.0;
            for _ in 0..2 {
                for (qv, qc) in values.iter().zip(&coeffs) {
                    let dot: f64 = qv.iter().zip(&v).map(|(a, b)| a * b).sum();
                    v.iter_mut().zip(qv).for_each(|(vi, qi)| *vi -= dot * qi);
                    c.iter_mut().zip(qc).for_each(|(ci, qi)| *ci -= dot * qi);
                }
            }
            let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            v.iter_mut().for_each(|vi| *vi /= norm);
            c.iter_mut().for_each(|ci| *ci /= norm);
            values.push(v);
            coeffs.push(c);
        }

        let dt = 1.0 / half;
        let mut shift = vec![vec![0.0; order + 1]; order + 1];
        for (p, row) in shift.iter_mut().enumerate() {
            let mut binom = 1.0;
            for q in (0..=p).rev() {
                // binom = C(p, q) while walking q downwards from p.
                row[q] = binom * (-dt).powi((p - q) as i32);
                binom = binom * q as f64 / (p - q + 1) as f64;
            }
        }

        let cast = |rows: Vec<Vec<f64>>| -> Vec<Vec<T>> {
            rows.into_iter().map(|r| r.into_iter().map(T::of).collect()).collect()
        };
        Self { len, abscissa: t.into_iter().map(T::of).collect(), basis: cast(coeffs), shift: cast(shift) }
    }

    /// Sum over all stride-1 segments of the squared residuals about each
    /// segment's least-squares polynomial.
    pub(crate) fn total_residual(&self, profile: &[T]) -> T {
        let n = self.len;
        assert!(n <= profile.len());
        let segments = profile.len() - n + 1;
        let terms = self.basis.len();
        let mut moments = vec![T::zero(); terms];
        let mut next = vec![T::zero(); terms];
        let mut total = T::zero();

        let mut start = 0;
        while start < segments {
            let block_end = (start + n).min(segments);
            let reference = profile[start];
            let mut energy = T::zero();
            moments.iter_mut().for_each(|m| *m = T::zero());
            for (l, &y) in profile[start..start + n].iter().enumerate() {
                let v = y - reference;
                energy = energy + v * v;
                let mut power = T::one();
                for m in moments.iter_mut() {
                    *m = *m + power * v;
                    power = power * self.abscissa[l];
                }
            }
            for i in start..block_end {
                total = total + self.segment_residual(energy, &moments);
                if i + 1 == block_end {
                    break;
                }
                let outgoing = profile[i] - reference;
                let incoming = profile[i + n] - reference;
                energy = energy - outgoing * outgoing + incoming * incoming;
                // Drop l = 0, add l = n, then re-centre by one step.
                let (t_out, t_in) = (self.abscissa[0], self.abscissa[n]);
                let mut p_out = T::one();
                let mut p_in = T::one();
                for m in moments.iter_mut() {
                    *m = *m - p_out * outgoing + p_in * incoming;
                    p_out = p_out * t_out;
                    p_in = p_in * t_in;
                }
                for (p, row) in self.shift.iter().enumerate() {
                    next[p] = row[..=p].iter().zip(&moments).fold(T::zero(), |acc, (&s, &m)| acc + s * m);
                }
                std::mem::swap(&mut moments, &mut next);
            }
            start = block_end;
        }
        total
    }

    fn segment_residual(&self, energy: T, moments: &[T]) -> T {
        let explained = self.basis.iter().fold(T::zero(), |acc, row| {
            let c = row.iter().zip(moments).fold(T::zero(), |s, (&a, &m)| s + a * m);
            acc + c * c
        });
        (energy - explained).max(T::zero())
    }
}
