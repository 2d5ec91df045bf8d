//! Hölder-modulus reports shared by the selector continuity scan and the
//! spectral-abscissa continuity scan.

use serde::{Deserialize, Serialize};

/// Smallest constant `C` with `|f(x) - f(y)| <= C * |x - y|^exponent` over
/// the sampled pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HolderReport {
    pub exponent: f64,
    pub max_constant: f64,
    /// Constant fitted from a sample twice as dense (or twice as many pairs).
    pub refined_constant: Option<f64>,
    /// Pair `(x, y)` realising `max_constant`, flattened to real coordinates.
    pub argmax: Vec<f64>,
    pub samples: usize,
}

impl HolderReport {
    /// `refined_constant / max_constant`, when a refinement was run.
    pub fn refinement_ratio(&self) -> Option<f64> {
        self.refined_constant.map(|r| r / self.max_constant)
    }
}

/// Least-squares slope of `log y` against `log x`, ignoring non-positive
/// entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub radii: Vec<f64>,
    pub jumps: Vec<f64>,
    pub exponent: f64,
}

pub fn fit_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && **y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return f64::NAN;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_square_root() {
        let xs: Vec<f64> = (1..8).map(|k| 10f64.powi(-k)).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x.sqrt()).collect();
        assert!((fit_log_slope(&xs, &ys) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn slope_needs_two_points() {
        assert!(fit_log_slope(&[1.0], &[1.0]).is_nan());
        assert!(fit_log_slope(&[1.0, 2.0], &[0.0, 0.0]).is_nan());
    }
}
