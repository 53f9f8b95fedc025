use std::io::Write;

use super::estimate::{dual_exponent, w_exponent, Flavor, MaximalEstimate};
use super::rational::{format_exact, int, rat};
use crate::error::Result;

/// Named maximal-function estimates usable as the `(n-1)`-dimensional
/// input of the transfer.
#[derive(Debug, Clone)]
pub struct BaseEstimateLibrary {
    entries: Vec<MaximalEstimate>,
    /// Largest ambient dimension for which the multilinear-restriction
    /// family `p = w(m)'` is materialised in [`Self::entries`].
    hrz_max_dim: u32,
}

impl Default for BaseEstimateLibrary {
    fn default() -> Self {
        Self::standard()
    }
}

impl BaseEstimateLibrary {
    /// Córdoba in the plane, Wolff in R^3, and the Hickman–Rogers–Zhang
    /// family for `m = 2..=11`. Other dimensions are generated on demand by
    /// [`Self::best_for_dim`].
    pub fn standard() -> Self {
        let mut entries = vec![cordoba(), wolff()];
        let hrz_max_dim = 11;
        entries.extend((2..=hrz_max_dim).map(|m| hrz(m).expect("m ≥ 2")));
        Self { entries, hrz_max_dim }
    }

    pub fn empty() -> Self {
        Self { entries: Vec::new(), hrz_max_dim: 1 }
    }

    pub fn push(&mut self, est: MaximalEstimate) {
        self.entries.push(est);
    }

    pub fn entries(&self) -> &[MaximalEstimate] {
        &self.entries
    }

    /// The admissible base estimate in dimension `m` with the largest `p`.
    /// Earlier catalog entries win ties.
    pub fn best_for_dim(&self, m: u32) -> Option<MaximalEstimate> {
        let mut candidates: Vec<MaximalEstimate> = self
            .entries
            .iter()
            .filter(|e| e.ambient_dim == m)
            .cloned()
            .collect();
        if m > self.hrz_max_dim && !self.entries.is_empty() {
            candidates.extend(hrz(m).ok());
        }
        let mut best: Option<MaximalEstimate> = None;
        for c in candidates {
            if best.as_ref().is_none_or(|b| c.p > b.p) {
                best = Some(c);
            }
        }
        best
    }

    /// `name,dim,p,q,h` rows.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "name,dim,p,q,h")?;
        for e in &self.entries {
            writeln!(
                out,
                "{},{},{},{},{}",
                e.source,
                e.ambient_dim,
                format_exact(&e.p),
                format_exact(&e.q),
                format_exact(&e.h)
            )?;
        }
        Ok(())
    }
}

/// Córdoba's planar estimate: `p = q = 2`, no loss.
pub fn cordoba() -> MaximalEstimate {
    MaximalEstimate::new(2, int(2), int(2), int(0), Flavor::Strong, "Cordoba n=2")
        .expect("valid constants")
}

/// Wolff's hairbrush estimate in R^3: `p = q = 5/2`, `h = 3/p - 1 = 1/5`.
pub fn wolff() -> MaximalEstimate {
    MaximalEstimate::new(3, rat(5, 2), rat(5, 2), rat(1, 5), Flavor::Strong, "Wolff n=3")
        .expect("valid constants")
}

/// The Hickman–Rogers–Zhang estimate in R^m at its endpoint: the tube-sum
/// inequality holds in `L^{p'}` for `p' ≥ w(m)`, i.e. the maximal estimate
/// holds for `p ≤ w(m)'` with `h = m - 1 - m/p'`. Taken at `p = w(m)'`,
/// so `p' = w(m)`.
pub fn hrz(m: u32) -> Result<MaximalEstimate> {
    let w = w_exponent(m)?;
    let p = dual_exponent(&w)?;
    let p_dual = dual_exponent(&p)?;
    let h = int(m as i64 - 1) - int(m as i64) / p_dual;
    MaximalEstimate::new(m, p.clone(), p, h, Flavor::Strong, format!("HRZ n={m}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::estimate::validate_necessary_condition;

    #[test]
    fn catalog_passes_necessary_condition() {
        for e in BaseEstimateLibrary::standard().entries() {
            assert!(validate_necessary_condition(e), "{}", e.source);
            assert!(e.has_interpolation_form(), "{}", e.source);
        }
    }

    #[test]
    fn hrz_nine_dimensional_entry() {
        let e = hrz(9).unwrap();
        assert_eq!(e.p, int(6));
        assert_eq!(e.h, rat(1, 2));
    }

    #[test]
    fn best_base_prefers_wolff_in_three_dimensions() {
        let lib = BaseEstimateLibrary::standard();
        assert_eq!(lib.best_for_dim(3).unwrap().source, "Wolff n=3");
        assert_eq!(lib.best_for_dim(2).unwrap().source, "Cordoba n=2");
        assert_eq!(lib.best_for_dim(9).unwrap().p, int(6));
        assert_eq!(lib.best_for_dim(20).unwrap().p, dual_exponent(&w_exponent(20).unwrap()).unwrap());
        assert!(lib.best_for_dim(1).is_none());
        assert!(BaseEstimateLibrary::empty().best_for_dim(3).is_none());
    }

    #[test]
    fn catalog_csv_shape() {
        let mut buf = Vec::new();
        BaseEstimateLibrary::standard().write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("name,dim,p,q,h"));
        assert_eq!(lines.next(), Some("Cordoba n=2,2,2,2,0"));
        assert_eq!(lines.next(), Some("Wolff n=3,3,2.5,2.5,0.2"));
    }
}
