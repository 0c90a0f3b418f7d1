//! Explicit-loop reference implementations, written without the library's
//! prefix sums, sliding moments or FFTs.

#![allow(dead_code, clippy::needless_range_loop)]

use scaling_core::synth::SeededNormal;

pub fn normals(seed: u64, len: usize) -> Vec<f64> {
    let mut source = SeededNormal::new(seed);
    (0..len).map(|_| source.standard_normal()).collect()
}

pub fn profile(returns: &[f64]) -> Vec<f64> {
    let mean = returns.iter().sum::<f64>() / returns.len() as f64;
    let mut acc = 0.0;
    returns
        .iter()
        .map(|r| {
            acc += r - mean;
            acc
        })
        .collect()
}

/// Solves `m x = rhs` by Gaussian elimination with partial pivoting.
fn solve(mut m: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Vec<f64> {
    let size = rhs.len();
    for col in 0..size {
        let pivot = (col..size).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs())).unwrap();
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in col + 1..size {
            let factor = m[row][col] / m[col][col];
            for k in col..size {
                m[row][k] -= factor * m[col][k];
            }
            rhs[row] -= factor * rhs[col];
        }
    }
    let mut x = vec![0.0; size];
    for row in (0..size).rev() {
        let tail: f64 = (row + 1..size).map(|k| m[row][k] * x[k]).sum();
        x[row] = (rhs[row] - tail) / m[row][row];
    }
    x
}

/// DFA `F(n)`: normal equations per stride-1 segment on `x = l - (n-1)/2`.
pub fn dfa(returns: &[f64], n: usize, order: usize) -> f64 {
    let y = profile(returns);
    let centre = (n as f64 - 1.0) / 2.0;
    let xs: Vec<f64> = (0..n).map(|l| l as f64 - centre).collect();
    let terms = order + 1;
    let mut total = 0.0;
    let segments = y.len() - n + 1;
    for start in 0..segments {
        let seg = &y[start..start + n];
        let mut m = vec![vec![0.0; terms]; terms];
        let mut rhs = vec![0.0; terms];
        for (x, v) in xs.iter().zip(seg) {
            for i in 0..terms {
                rhs[i] += x.powi(i as i32) * v;
                for j in 0..terms {
                    m[i][j] += x.powi((i + j) as i32);
                }
            }
        }
        let c = solve(m, rhs);
        for (x, v) in xs.iter().zip(seg) {
            let fit: f64 = c.iter().enumerate().map(|(p, cp)| cp * x.powi(p as i32)).sum();
            total += (v - fit).powi(2);
        }
    }
    (total / (segments * n) as f64).sqrt()
}

/// Centered DMA `sigma(n)` with the moving average summed afresh at each point.
pub fn dma(returns: &[f64], n: usize) -> f64 {
    let y = profile(returns);
    let half = (n - 1) / 2;
    let mut total = 0.0;
    let mut count = 0;
    for i in half..y.len() - half {
        let mean = y[i - half..=i + half].iter().sum::<f64>() / n as f64;
        total += (y[i] - mean).powi(2);
        count += 1;
    }
    (total / count as f64).sqrt()
}

fn gamma_half(order: usize) -> f64 {
    (1..=order).fold(std::f64::consts::PI.sqrt(), |acc, k| acc * (k as f64 - 0.5))
}

/// DOG mother wavelet from explicit Hermite polynomials (orders 1, 2 and 10).
pub fn dog(order: usize, x: f64) -> f64 {
    let he = match order {
        1 => x,
        2 => x * x - 1.0,
        10 => {
            let x2 = x * x;
            ((((x2 - 45.0) * x2 + 630.0) * x2 - 3150.0) * x2 + 4725.0) * x2 - 945.0
        }
        _ => panic!("no explicit Hermite polynomial for order {order}"),
    };
    -he * (-x * x / 2.0).exp() / gamma_half(order).sqrt()
}

/// `W(a, b) = sum_k R(k) a^(-1/2) psi((k - b) / a)` over `|k - b| <= floor(halfwidth a)`.
pub fn cwt_row(returns: &[f64], order: usize, scale: f64, halfwidth: f64) -> Vec<f64> {
    let reach = (halfwidth * scale).floor() as i64;
    let len = returns.len() as i64;
    (0..len)
        .map(|b| {
            let mut w = 0.0;
            for k in (b - reach).max(0)..=(b + reach).min(len - 1) {
                w += returns[k as usize] * dog(order, (k - b) as f64 / scale) / scale.sqrt();
            }
            w
        })
        .collect()
}

/// Largest `|a - b|` relative to the largest `|b|`.
pub fn relative_gap(a: &[f64], b: &[f64]) -> f64 {
    let peak = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let gap = a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    if peak == 0.0 {
        gap
    } else {
        gap / peak
    }
}

/// `(x - y) / y` with `0 / 0` read as no difference.
pub fn relative(x: f64, y: f64) -> f64 {
    if x == y {
        0.0
    } else {
        ((x - y) / y).abs()
    }
}
