use std::io::Write;

use crate::error::{domain, Result};
use crate::geometry::Point;
use crate::stats::linear_fit;

use super::generator::REFERENCE_HALF_WIDTH;

/// Grid surrogate for the covering number `N_δ`: the number of occupied
/// cells of side `δ/√n` (cells of diameter `δ`), anchored at the corner
/// of the reference cube.
///
/// Every occupied cell is a set of diameter at most `δ`, so this is an
/// upper bound for `N_δ`. Conversely a set of diameter `δ` meets at most
/// `(⌈√n⌉ + 1)^n` cells, which bounds the surrogate from below by `N_δ`
/// over that factor.
pub fn covering_number<const N: usize>(points: &[Point<N>], delta: f64) -> Result<usize> {
    if !(delta > 0.0) {
        return domain(format!("scale {delta} must be positive"));
    }
    let side = delta / (N as f64).sqrt();
    let mut keys: Vec<[i64; N]> = points
        .iter()
        .map(|p| std::array::from_fn(|i| ((p[i] + REFERENCE_HALF_WIDTH) / side).floor() as i64))
        .collect();
    keys.sort_unstable();
    keys.dedup();
    Ok(keys.len())
}

/// Factor relating the grid count to the true covering number.
pub fn covering_surrogate_factor(n: usize) -> usize {
    ((n as f64).sqrt().ceil() as usize + 1).pow(n as u32)
}

/// Least-squares fit of `log N_δ` against `log(1/δ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionFit {
    pub scales: Vec<f64>,
    pub counts: Vec<usize>,
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

impl DimensionFit {
    /// `delta,count` rows followed by a `# slope ... r2 ...` line.
    pub fn write_csv(&self, out: &mut impl Write) -> Result<()> {
        writeln!(out, "delta,count")?;
        for (d, c) in self.scales.iter().zip(&self.counts) {
            writeln!(out, "{d:.16e},{c}")?;
        }
        writeln!(out, "# slope {:.6} r2 {:.6}", self.slope, self.r2)?;
        Ok(())
    }
}

/// Box-counting slope over a geometric ladder of at least three scales.
pub fn box_dimension_fit<const N: usize>(points: &[Point<N>], scales: &[f64]) -> Result<DimensionFit> {
    if scales.len() < 3 {
        return domain(format!("box-dimension fit needs at least 3 scales, got {}", scales.len()));
    }
    let ratio = scales[1] / scales[0];
    if !(ratio > 0.0 && ratio != 1.0)
        || scales.windows(2).any(|w| ((w[1] / w[0]) / ratio - 1.0).abs() > 1e-9)
    {
        return domain("scales must form a geometric ladder".to_string());
    }
    let counts = scales
        .iter()
        .map(|&d| covering_number(points, d))
        .collect::<Result<Vec<_>>>()?;
    let x: Vec<f64> = scales.iter().map(|d| (1.0 / d).ln()).collect();
    let y: Vec<f64> = counts.iter().map(|&c| (c.max(1) as f64).ln()).collect();
    let fit = linear_fit(&x, &y)?;
    Ok(DimensionFit { scales: scales.to_vec(), counts, slope: fit.slope, intercept: fit.intercept, r2: fit.r_squared })
}

/// `δ_0, δ_0·r, …` with `len` terms.
pub fn geometric_scales(first: f64, ratio: f64, len: usize) -> Vec<f64> {
    (0..len).map(|k| first * ratio.powi(k as i32)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fractals::generator::cantor_centres;

    #[test]
    fn point_counts_once() {
        assert_eq!(covering_number(&[[0.1, 0.2]], 0.01).unwrap(), 1);
        let fit = box_dimension_fit(&[[0.1, 0.2]], &geometric_scales(0.1, 0.5, 4)).unwrap();
        assert_eq!(fit.slope, 0.0);
    }

    /// Level-j Cantor intervals are at least their own length apart, so at
    /// δ = 3^-j each one meets one or two cells.
    #[test]
    fn cantor_counts_bracket_interval_oracle() {
        let pts: Vec<[f64; 1]> = cantor_centres(1.0 / 3.0, 10).into_iter().map(|x| [x]).collect();
        for j in 2..8 {
            let c = covering_number(&pts, 3f64.powi(-j)).unwrap();
            let oracle = 2usize.pow(j as u32);
            assert!(c >= oracle && c <= 4 * oracle, "j = {j}: {c}");
        }
    }

    #[test]
    fn filled_square_counts_like_area() {
        let m = 512;
        let pts: Vec<[f64; 2]> = (0..m * m)
            .map(|k| [-0.5 + ((k / m) as f64 + 0.5) / m as f64, -0.5 + ((k % m) as f64 + 0.5) / m as f64])
            .collect();
        for k in 2..6 {
            let c = covering_number(&pts, 2f64.powi(-k)).unwrap() as f64;
            let area = 2f64.powi(2 * k);
            assert!(c >= area / 4.0 && c <= 4.0 * area, "k = {k}: {c}");
        }
    }

    #[test]
    fn fit_requires_a_ladder() {
        let p = [[0.0f64; 2]];
        assert!(box_dimension_fit(&p, &[0.1, 0.05]).is_err());
        assert!(box_dimension_fit(&p, &[0.1, 0.05, 0.01]).is_err());
    }

    #[test]
    fn csv_has_summary_line() {
        let pts: Vec<[f64; 1]> = cantor_centres(1.0 / 3.0, 8).into_iter().map(|x| [x]).collect();
        let fit = box_dimension_fit(&pts, &geometric_scales(1.0 / 27.0, 1.0 / 3.0, 4)).unwrap();
        let mut buf = Vec::new();
        fit.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("delta,count\n"));
        assert!(text.lines().last().unwrap().starts_with("# slope"));
    }
}
