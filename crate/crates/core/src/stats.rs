//! Small statistics toolkit: compensated summation, moments, batch
//! jackknife and least-squares line fits.
//!
//! All reductions walk their input in index order, so results depend only
//! on the data and never on how the data was produced.

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

pub fn sum(xs: &[f64]) -> f64 {
    xs.iter().copied().collect::<CompensatedSum>().value()
}

pub fn mean(xs: &[f64]) -> f64 {
    sum(xs) / xs.len() as f64
}

/// Unbiased sample variance (divisor `n − 1`).
pub fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).collect::<CompensatedSum>().value() / (xs.len() as f64 - 1.0)
}

/// Plain moment kurtosis `m4 / m2²` (3 for a Gaussian).
pub fn kurtosis(xs: &[f64]) -> f64 {
    let m = mean(xs);
    let n = xs.len() as f64;
    let m2 = xs.iter().map(|x| (x - m).powi(2)).collect::<CompensatedSum>().value() / n;
    let m4 = xs.iter().map(|x| (x - m).powi(4)).collect::<CompensatedSum>().value() / n;
    m4 / (m2 * m2)
}

/// Delete-one-batch jackknife standard error of the mean of `values`.
///
/// The data is split into `n_batches` contiguous batches (sizes differ by at
/// most one). Returns 0 for fewer than two values.
pub fn jackknife_se_of_mean(values: &[f64], n_batches: usize) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let nb = n_batches.clamp(2, n);
    let total = sum(values);
    let mut estimates = Vec::with_capacity(nb);
    for b in 0..nb {
        let lo = b * n / nb;
        let hi = (b + 1) * n / nb;
        let batch = sum(&values[lo..hi]);
        estimates.push((total - batch) / (n - (hi - lo)) as f64);
    }
    let centre = mean(&estimates);
    let spread = estimates
        .iter()
        .map(|e| (e - centre) * (e - centre))
        .collect::<CompensatedSum>()
        .value();
    ((nb as f64 - 1.0) / nb as f64 * spread).sqrt()
}

/// Ordinary least-squares fit `y = intercept + slope · x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope from the residual scatter.
    pub slope_se: f64,
}

/// Least-squares line through `(x, y)` pairs. `None` with fewer than two
/// points or when all `x` coincide.
pub fn fit_line(points: &[(f64, f64)]) -> Option<LineFit> {
    let n = points.len();
    if n < 2 {
        return None;
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1).collect();
    let mx = mean(&xs);
    let my = mean(&ys);
    let sxx = xs
        .iter()
        .map(|x| (x - mx) * (x - mx))
        .collect::<CompensatedSum>()
        .value();
    if sxx == 0.0 {
        return None;
    }
    let sxy = points
        .iter()
        .map(|(x, y)| (x - mx) * (y - my))
        .collect::<CompensatedSum>()
        .value();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let slope_se = if n > 2 {
        let rss = points
            .iter()
            .map(|(x, y)| (y - intercept - slope * x).powi(2))
            .collect::<CompensatedSum>()
            .value();
        (rss / (n as f64 - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Some(LineFit {
        slope,
        intercept,
        slope_se,
    })
}
