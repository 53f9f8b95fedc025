//! Small numerical helpers shared by the scaling experiments.

use crate::error::{domain, Result};

/// Ordinary least-squares line through `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() || x.len() < 2 {
        return domain(format!("need at least two paired samples, got {} and {}", x.len(), y.len()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    if sxx == 0.0 {
        return domain("abscissae are all equal".to_string());
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(LinearFit { slope, intercept: my - slope * mx, r_squared })
}

/// Slope of `log y` against `log(1/δ)`.
pub fn scaling_slope(deltas: &[f64], values: &[f64]) -> Result<LinearFit> {
    if values.iter().chain(deltas).any(|v| !(*v > 0.0)) {
        return domain("scaling fits need positive data".to_string());
    }
    let x: Vec<f64> = deltas.iter().map(|d| (1.0 / d).ln()).collect();
    let y: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    linear_fit(&x, &y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let f = linear_fit(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-15 && (f.intercept - 1.0).abs() < 1e-15);
        assert!((f.r_squared - 1.0).abs() < 1e-15);
        assert!(linear_fit(&[1.0], &[1.0]).is_err());
    }

    #[test]
    fn power_law_slope() {
        let d = [0.5, 0.25, 0.125];
        let v: Vec<f64> = d.iter().map(|x: &f64| x.powf(-1.5)).collect();
        assert!((scaling_slope(&d, &v).unwrap().slope - 1.5).abs() < 1e-12);
    }
}
