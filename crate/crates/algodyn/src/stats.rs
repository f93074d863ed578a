//! Ensemble statistics and exponent fits.

use serde::{Deserialize, Serialize};

/// Quantile with linear interpolation between order statistics (`q` in [0, 1]).
/// `sorted` must be ascending and non-empty.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q.clamp(0.0, 1.0);
    let (i, f) = (h.floor() as usize, h - h.floor());
    if i + 1 < sorted.len() {
        sorted[i] + f * (sorted[i + 1] - sorted[i])
    } else {
        sorted[i]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    pub median: f64,
    pub q05: f64,
    pub q25: f64,
    pub q75: f64,
    pub q95: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Option<Summary> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        Some(Summary {
            count: v.len(),
            mean: v.iter().sum::<f64>() / v.len() as f64,
            median: quantile(&v, 0.5),
            q05: quantile(&v, 0.05),
            q25: quantile(&v, 0.25),
            q75: quantile(&v, 0.75),
            q95: quantile(&v, 0.95),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
}

impl Histogram {
    /// `bins` equal bins over `[lo, hi]`; values outside are clamped into the
    /// end bins, so the counts always sum to `values.len()`.
    pub fn with_range(values: &[f64], lo: f64, hi: f64, bins: usize) -> Histogram {
        let bins = bins.max(1);
        let mut counts = vec![0u64; bins];
        let width = (hi - lo) / bins as f64;
        for &x in values {
            let i = if width > 0.0 { ((x - lo) / width).floor() } else { 0.0 };
            counts[(i.max(0.0) as usize).min(bins - 1)] += 1;
        }
        Histogram { lo, hi, counts }
    }

    /// Bins spanning the observed range.
    pub fn of(values: &[f64], bins: usize) -> Histogram {
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !lo.is_finite() {
            return Histogram { lo: 0.0, hi: 0.0, counts: vec![0; bins.max(1)] };
        }
        Histogram::with_range(values, lo, hi, bins)
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn bin_center(&self, i: usize) -> f64 {
        let w = (self.hi - self.lo) / self.counts.len() as f64;
        self.lo + (i as f64 + 0.5) * w
    }

    /// Occupied bins as `"count;count;..."`.
    pub fn encode(&self) -> String {
        self.counts.iter().map(u64::to_string).collect::<Vec<_>>().join(";")
    }
}

/// Least-squares line `y = a + b x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub intercept: f64,
    pub slope: f64,
    /// Root mean square of the residuals.
    pub rms: f64,
}

pub fn fit_line(points: &[(f64, f64)]) -> Option<LineFit> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rms = (points.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum::<f64>() / n).sqrt();
    Some(LineFit { intercept, slope, rms })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Linear,
    Exponential,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub regime: Regime,
    /// gamma for `Q = gamma N`, omega for `Q = A 2^(omega N)`.
    pub coefficient: f64,
    /// RMS residual of log2 Q under the selected model.
    pub residual: f64,
    /// The exponential model, whichever regime was selected.
    pub exponential: LineFit,
    pub gamma: f64,
    pub linear_residual: f64,
}

/// Fits `Q = gamma N` and `log2 Q = a + omega N` to `(N, Q)` and keeps the
/// model with the smaller residual in log2 Q. Needs three sizes.
pub fn fit_exponent(points: &[(f64, f64)]) -> Option<ExponentFit> {
    let mut sizes: Vec<f64> = points.iter().map(|p| p.0).collect();
    sizes.sort_by(f64::total_cmp);
    sizes.dedup();
    if sizes.len() < 3 || points.iter().any(|&(n, q)| !(n > 0.0 && q > 0.0)) {
        return None;
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(n, q)| (n, q.log2())).collect();
    let exponential = fit_line(&logs)?;
    // least squares of log2 Q - log2 N = log2 gamma
    let lg = logs.iter().map(|&(n, l)| l - n.log2()).sum::<f64>() / logs.len() as f64;
    let linear_residual =
        (logs.iter().map(|&(n, l)| (l - n.log2() - lg).powi(2)).sum::<f64>() / logs.len() as f64).sqrt();
    let gamma = lg.exp2();
    let (regime, coefficient, residual) = if linear_residual <= exponential.rms {
        (Regime::Linear, gamma, linear_residual)
    } else {
        (Regime::Exponential, exponential.slope, exponential.rms)
    };
    Some(ExponentFit { regime, coefficient, residual, exponential, gamma, linear_residual })
}
