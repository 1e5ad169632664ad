//! Running means and covariances, and weighted log-log regression.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Running mean and co-moment matrix of a vector-valued statistic.
///
/// Updates use Welford's recurrence and partial results are combined with
/// the pairwise formula of Chan, Golub and LeVeque, so merging fixed-size
/// chunks in a fixed order gives the same bits on any thread count.
#[derive(Debug, Clone, PartialEq)]
pub struct Accumulator {
    n: u64,
    mean: Vec<f64>,
    comoment: Vec<f64>,
}

impl Accumulator {
    pub fn new(width: usize) -> Accumulator {
        Accumulator { n: 0, mean: vec![0.0; width], comoment: vec![0.0; width * width] }
    }

    pub fn width(&self) -> usize {
        self.mean.len()
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn push(&mut self, x: &[f64]) {
        let m = self.width();
        self.n += 1;
        let inv = 1.0 / self.n as f64;
        let mut delta = [0.0f64; 64];
        let delta: &mut [f64] = if m <= 64 { &mut delta[..m] } else { return self.push_wide(x) };
        for i in 0..m {
            delta[i] = x[i] - self.mean[i];
            self.mean[i] += delta[i] * inv;
        }
        for i in 0..m {
            let after = x[i] - self.mean[i];
            for j in 0..m {
                self.comoment[i * m + j] += delta[j] * after;
            }
        }
    }

    fn push_wide(&mut self, x: &[f64]) {
        let m = self.width();
        let inv = 1.0 / self.n as f64;
        let delta: Vec<f64> = x.iter().zip(&self.mean).map(|(a, b)| a - b).collect();
        for i in 0..m {
            self.mean[i] += delta[i] * inv;
        }
        for i in 0..m {
            let after = x[i] - self.mean[i];
            for j in 0..m {
                self.comoment[i * m + j] += delta[j] * after;
            }
        }
    }

    pub fn merge(&mut self, other: &Accumulator) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = other.clone();
            return;
        }
        let m = self.width();
        let (na, nb) = (self.n as f64, other.n as f64);
        let n = na + nb;
        let delta: Vec<f64> = other.mean.iter().zip(&self.mean).map(|(b, a)| b - a).collect();
        for i in 0..m {
            for j in 0..m {
                self.comoment[i * m + j] += other.comoment[i * m + j] + delta[i] * delta[j] * na * nb / n;
            }
        }
        for i in 0..m {
            self.mean[i] += delta[i] * nb / n;
        }
        self.n += other.n;
    }

    pub fn mean(&self, i: usize) -> f64 {
        self.mean[i]
    }

    /// Unbiased sample covariance of components `i` and `j`.
    pub fn cov(&self, i: usize, j: usize) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        self.comoment[i * self.width() + j] / (self.n - 1) as f64
    }

    /// Standard error of the mean of component `i`.
    pub fn stderr(&self, i: usize) -> f64 {
        self.stderr_of(&unit(self.width(), i))
    }

    /// Standard error of `Σ c_i · mean_i`.
    pub fn stderr_of(&self, coeffs: &[f64]) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let m = self.width();
        let mut var = 0.0;
        for i in 0..m {
            for j in 0..m {
                var += coeffs[i] * coeffs[j] * self.cov(i, j);
            }
        }
        (var.max(0.0) / self.n as f64).sqrt()
    }
}

fn unit(m: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; m];
    v[i] = 1.0;
    v
}

/// Result of fitting `log y = a + b log x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
    /// 95% confidence interval for the slope.
    pub ci: [f64; 2],
    pub points: usize,
}

/// Two-sided 97.5% Student-t quantiles for 1..=30 degrees of freedom.
const T975: [f64; 30] = [
    12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228, 2.201, 2.179, 2.160, 2.145,
    2.131, 2.120, 2.110, 2.101, 2.093, 2.086, 2.080, 2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048,
    2.045, 2.042,
];

fn t_quantile(df: usize) -> f64 {
    if df == 0 {
        f64::INFINITY
    } else if df <= T975.len() {
        T975[df - 1]
    } else {
        1.96
    }
}

/// Weighted least squares on `(log x, log y)`. Each `y` carries a standard
/// error `sy`, which becomes the weight `(y / sy)²` of its log (delta
/// method). Points with non-positive `x` or `y` are skipped; if every
/// error is zero the fit is unweighted. The slope error is scaled by the
/// residual variance.
pub fn weighted_loglog_fit(x: &[f64], y: &[f64], sy: &[f64]) -> Result<LogLogFit> {
    let mut pts = Vec::new();
    let unweighted = sy.iter().all(|&s| s == 0.0);
    for k in 0..x.len().min(y.len()) {
        if x[k] > 0.0 && y[k] > 0.0 && x[k].is_finite() && y[k].is_finite() {
            let w = if unweighted {
                1.0
            } else if sy[k] > 0.0 {
                (y[k] / sy[k]).powi(2)
            } else {
                continue;
            };
            pts.push((x[k].ln(), y[k].ln(), w));
        }
    }
    if pts.len() < 3 {
        return Err(Error::GridTooSparse { needed: 3, got: pts.len() });
    }
    let sw: f64 = pts.iter().map(|p| p.2).sum();
    let mx = pts.iter().map(|p| p.2 * p.0).sum::<f64>() / sw;
    let my = pts.iter().map(|p| p.2 * p.1).sum::<f64>() / sw;
    let sxx: f64 = pts.iter().map(|p| p.2 * (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| p.2 * (p.0 - mx) * (p.1 - my)).sum();
    if !(sxx > 0.0) {
        return Err(Error::GridTooSparse { needed: 2, got: 1 });
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let df = pts.len() - 2;
    let rss: f64 = pts.iter().map(|p| p.2 * (p.1 - intercept - slope * p.0).powi(2)).sum();
    let slope_stderr = (rss / df as f64 / sxx).sqrt();
    let half = t_quantile(df) * slope_stderr;
    Ok(LogLogFit { slope, intercept, slope_stderr, ci: [slope - half, slope + half], points: pts.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn mean_and_variance() {
        let mut a = Accumulator::new(2);
        for x in [1.0, 2.0, 3.0, 4.0] {
            a.push(&[x, 2.0 * x]);
        }
        assert_relative_eq!(a.mean(0), 2.5);
        assert_relative_eq!(a.cov(0, 0), 5.0 / 3.0);
        assert_relative_eq!(a.cov(0, 1), 10.0 / 3.0);
        // the difference 2·x₀ − x₁ is constant
        assert!(a.stderr_of(&[2.0, -1.0]) < 1e-12);
    }

    proptest! {
        #[test]
        fn merge_matches_sequential(xs in prop::collection::vec(-1e3f64..1e3, 2..200), cut in 0usize..200) {
            let cut = cut.min(xs.len());
            let mut whole = Accumulator::new(1);
            xs.iter().for_each(|x| whole.push(&[*x]));
            let (mut a, mut b) = (Accumulator::new(1), Accumulator::new(1));
            xs[..cut].iter().for_each(|x| a.push(&[*x]));
            xs[cut..].iter().for_each(|x| b.push(&[*x]));
            a.merge(&b);
            prop_assert!((a.mean(0) - whole.mean(0)).abs() <= 1e-9 * (1.0 + whole.mean(0).abs()));
            prop_assert!((a.cov(0, 0) - whole.cov(0, 0)).abs() <= 1e-7 * (1.0 + whole.cov(0, 0)));
        }
    }

    #[test]
    fn exact_power_law() {
        let x = [0.1, 0.2, 0.3, 0.4, 0.5];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(2.0)).collect();
        let f = weighted_loglog_fit(&x, &y, &[0.0; 5]).unwrap();
        assert_relative_eq!(f.slope, 2.0, epsilon = 1e-12);
        assert_relative_eq!(f.intercept, 3f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn noisy_fit_interval_covers() {
        let x = [0.05, 0.1, 0.2, 0.3, 0.4];
        let noise = [1.02, 0.97, 1.01, 0.99, 1.0];
        let y: Vec<f64> = x.iter().zip(noise).map(|(v, n)| v * v * n).collect();
        let sy: Vec<f64> = y.iter().map(|v| 0.02 * v).collect();
        let f = weighted_loglog_fit(&x, &y, &sy).unwrap();
        assert!(f.ci[0] < 2.0 && 2.0 < f.ci[1], "{f:?}");
    }

    #[test]
    fn sparse_grid_rejected() {
        assert!(matches!(
            weighted_loglog_fit(&[0.1, 0.2], &[1.0, 2.0], &[0.0, 0.0]),
            Err(Error::GridTooSparse { .. })
        ));
        // non-positive gaps are dropped before counting
        assert!(weighted_loglog_fit(&[0.1, 0.2, 0.3], &[1.0, -2.0, 3.0], &[0.0; 3]).is_err());
    }
}
