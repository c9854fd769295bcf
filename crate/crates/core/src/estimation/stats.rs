use std::f64::consts::PI;

/// Median of a sample; averages the two middle values for even length.
pub fn sample_median(xs: &mut [f64]) -> f64 {
    assert!(!xs.is_empty(), "median of empty sample");
    let n = xs.len();
    let cmp = |a: &f64, b: &f64| a.total_cmp(b);
    let (_, &mut hi, _) = xs.select_nth_unstable_by(n / 2, cmp);
    if n % 2 == 1 {
        hi
    } else {
        let lo = xs[..n / 2].iter().copied().fold(f64::NEG_INFINITY, f64::max);
        0.5 * (lo + hi)
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance.
pub fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() as f64 - 1.0)
}

fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let i = pos.floor() as usize;
    let j = (i + 1).min(sorted.len() - 1);
    sorted[i] + (pos - i as f64) * (sorted[j] - sorted[i])
}

/// `0.9 min(s, IQR/1.34) n^{−1/5}`
pub fn silverman_bandwidth(xs: &[f64]) -> f64 {
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let iqr = quantile_sorted(&sorted, 0.75) - quantile_sorted(&sorted, 0.25);
    let s = variance(xs).sqrt();
    let spread = if iqr > 0.0 { s.min(iqr / 1.34) } else { s };
    0.9 * spread * (xs.len() as f64).powf(-0.2)
}

/// Gaussian-kernel density estimate at `x` with bandwidth `h`.
pub fn kde_at(xs: &[f64], x: f64, h: f64) -> f64 {
    let norm = 1.0 / ((2.0 * PI).sqrt() * h * xs.len() as f64);
    norm * xs.iter().map(|&v| (-0.5 * ((x - v) / h).powi(2)).exp()).sum::<f64>()
}

/// Sup distance between the empirical CDF of `xs` and `cdf`.
pub fn ks_statistic(xs: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// Asymptotic Kolmogorov tail probability with the Stephens small-sample correction.
pub fn ks_p_value(d: f64, n: usize) -> f64 {
    let sn = (n as f64).sqrt();
    let lambda = (sn + 0.12 + 0.11 / sn) * d;
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn medians() {
        assert_eq!(sample_median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(sample_median(&mut [4.0, 1.0, 3.0, 2.0]), 2.5);
        assert_eq!(sample_median(&mut [7.0]), 7.0);
    }

    #[test]
    fn kde_integrates_to_one() {
        let xs = [0.0, 0.5, 2.0, -1.0];
        let h = 0.3;
        let total: f64 = (-4000..4000).map(|i| kde_at(&xs, i as f64 * 1e-3, h) * 1e-3).sum();
        assert!((total - 1.0).abs() < 1e-6);
    }

    #[test]
    fn ks_reference_values() {
        // Q_KS(1.36) ≈ 0.0495, the classic 5% point.
        let p = ks_p_value(1.36 / 1e4f64.sqrt(), 10_000);
        assert!((p - 0.05).abs() < 0.002, "{p}");
        let xs: Vec<f64> = (0..100).map(|i| (i as f64 + 0.5) / 100.0).collect();
        assert!((ks_statistic(&xs, |x| x) - 0.005).abs() < 1e-12);
    }
}
