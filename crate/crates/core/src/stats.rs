// SPDX-License-Identifier: Apache-2.0
//! Summary statistics used by diagnostics and checks.

/// Sample mean and standard error of the mean.
pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, f64::INFINITY);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Column-wise mean and standard error over rows of equal length.
pub fn column_mean_and_se(rows: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    let dims = rows.first().map_or(0, Vec::len);
    (0..dims)
        .map(|k| {
            let col: Vec<f64> = rows.iter().map(|r| r[k]).collect();
            mean_and_se(&col)
        })
        .unzip()
}

/// Standard error of the mean of an autocorrelated series by batch means.
pub fn batch_means_se(xs: &[f64], batches: usize) -> f64 {
    let size = xs.len() / batches.max(1);
    if size == 0 || batches < 2 {
        return f64::INFINITY;
    }
    let means: Vec<f64> = xs
        .chunks_exact(size)
        .take(batches)
        .map(|c| c.iter().sum::<f64>() / size as f64)
        .collect();
    mean_and_se(&means).1
}

/// Kolmogorov distribution survival function `P(K > x)`.
pub fn kolmogorov_sf(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x < 0.3 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let k = k as f64;
        let term = (-2.0 * k * k * x * x).exp();
        sum += if k as u64 % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// One-sample Kolmogorov–Smirnov test against Exp(rate). Returns the
/// statistic `D` and the asymptotic p-value.
pub fn ks_exponential(samples: &[f64], rate: f64) -> (f64, f64) {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (k, x) in xs.iter().enumerate() {
        let f = 1.0 - (-rate * x).exp();
        d = d.max((k as f64 + 1.0) / n - f).max(f - k as f64 / n);
    }
    let sqrt_n = n.sqrt();
    let p = kolmogorov_sf((sqrt_n + 0.12 + 0.11 / sqrt_n) * d);
    (d, p)
}
