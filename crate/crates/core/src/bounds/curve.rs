use std::fmt;
use std::io::Write;

use num_traits::{One, Signed, Zero};

use super::estimate::{
    box_dimension_estimate, check_s, dimension_bound_from_estimate, interpolate,
    transfer_to_restricted, MaximalEstimate,
};
use super::library::BaseEstimateLibrary;
use super::rational::{format_exact, int, Rational};
use crate::error::{domain, precondition, Error, Result};

/// Number of interior exponents sampled when confirming where the maximum
/// over `p` is attained.
pub const P_SAMPLES: i64 = 64;

/// `s ↦ intercept + slope·s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Affine {
    pub intercept: Rational,
    pub slope: Rational,
}

impl Affine {
    pub fn new(intercept: Rational, slope: Rational) -> Self {
        Self { intercept, slope }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(c, Rational::zero())
    }

    pub fn eval(&self, s: &Rational) -> Rational {
        &self.intercept + &self.slope * s
    }
}

impl fmt::Display for Affine {
    /// `19/5 - 3/5 s`, `4 - s`, `2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = &self.intercept;
        let b = &self.slope;
        if b.is_zero() {
            return write!(f, "{a}");
        }
        let coef = |r: &Rational| {
            if r.is_one() {
                "s".to_string()
            } else {
                format!("{r} s")
            }
        };
        if a.is_zero() {
            if b.is_negative() {
                return write!(f, "-{}", coef(&b.abs()));
            }
            return write!(f, "{}", coef(b));
        }
        let sign = if b.is_negative() { '-' } else { '+' };
        write!(f, "{a} {sign} {}", coef(&b.abs()))
    }
}

/// One affine piece on `[lo, hi)` (closed at `hi` for the last piece).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub lo: Rational,
    pub hi: Rational,
    pub line: Affine,
}

/// An exact continuous piecewise-affine lower-bound curve on `[0, n]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseBound {
    n: u32,
    pieces: Vec<Piece>,
}

impl PiecewiseBound {
    /// Validates the partition of `[0, n]`, continuity at every breakpoint,
    /// monotonicity, `f(0) = n` and `f(s) ≥ n - s` at the breakpoints.
    pub fn new(n: u32, pieces: Vec<Piece>) -> Result<Self> {
        let n_r = int(n as i64);
        let first = pieces.first().ok_or_else(|| Error::Inconsistent("no pieces".into()))?;
        let last = pieces.last().expect("nonempty");
        if !first.lo.is_zero() || last.hi != n_r {
            return Err(Error::Inconsistent(format!("pieces do not cover [0, {n}]")));
        }
        for piece in &pieces {
            if piece.lo >= piece.hi {
                return Err(Error::Inconsistent(format!("empty piece [{}, {})", piece.lo, piece.hi)));
            }
            if piece.line.slope.is_positive() {
                return Err(Error::Inconsistent(format!("increasing piece {}", piece.line)));
            }
            for s in [&piece.lo, &piece.hi] {
                if piece.line.eval(s) < &n_r - s {
                    return Err(Error::Inconsistent(format!("piece {} below n - s at {s}", piece.line)));
                }
            }
        }
        for pair in pieces.windows(2) {
            if pair[0].hi != pair[1].lo {
                return Err(Error::Inconsistent("gap between pieces".into()));
            }
            let s = &pair[0].hi;
            if pair[0].line.eval(s) != pair[1].line.eval(s) {
                return Err(Error::Inconsistent(format!("discontinuity at s = {s}")));
            }
        }
        if first.line.eval(&Rational::zero()) != n_r {
            return Err(Error::Inconsistent("f(n, 0) != n".into()));
        }
        Ok(Self { n, pieces })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Interior breakpoints, in increasing order.
    pub fn breakpoints(&self) -> Vec<Rational> {
        self.pieces.iter().skip(1).map(|p| p.lo.clone()).collect()
    }

    pub fn piece_index(&self, s: &Rational) -> Result<usize> {
        check_s(self.n, s)?;
        let idx = self
            .pieces
            .iter()
            .position(|p| *s < p.hi)
            .unwrap_or(self.pieces.len() - 1);
        Ok(idx)
    }

    pub fn evaluate(&self, s: &Rational) -> Result<Rational> {
        let idx = self.piece_index(s)?;
        Ok(self.pieces[idx].line.eval(s))
    }

    /// Sample abscissae: multiples of `step` in `[0, n]`, every breakpoint,
    /// and `n` itself.
    pub fn sample_points(&self, step: &Rational) -> Result<Vec<Rational>> {
        if !step.is_positive() {
            return domain(format!("sampling step {step} must be positive"));
        }
        let n_r = int(self.n as i64);
        let mut points = Vec::new();
        let mut k = 0i64;
        loop {
            let s = step * int(k);
            if s > n_r {
                break;
            }
            points.push(s);
            k += 1;
        }
        points.extend(self.breakpoints());
        points.push(n_r);
        points.sort();
        points.dedup();
        Ok(points)
    }

    /// `s,bound,piece_index` rows.
    pub fn write_csv<W: Write>(&self, mut out: W, step: &Rational) -> Result<()> {
        writeln!(out, "s,bound,piece_index")?;
        for s in self.sample_points(step)? {
            let idx = self.piece_index(&s)?;
            let value = self.pieces[idx].line.eval(&s);
            writeln!(out, "{},{},{}", format_exact(&s), format_exact(&value), idx)?;
        }
        Ok(())
    }
}

/// Value of the best lower bound together with the affine piece that
/// realises it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerBound {
    pub value: Rational,
    pub piece: Affine,
}

/// `n - (n-1-s)/p - (s-1)`, the transferred bound at Lebesgue exponent `p`
/// for a base of interpolation form.
fn closed_form(n: u32, s: &Rational, p: &Rational) -> Rational {
    let n_r = int(n as i64);
    let one = Rational::one();
    &n_r - (&n_r - &one - s) / p - (s - &one)
}

/// Transferred bound at exponent `p` via interpolation, transfer and the
/// `n - βp` bookkeeping.
fn transferred_at(base: &MaximalEstimate, n: u32, s: &Rational, p: &Rational) -> Result<Rational> {
    let interpolated = interpolate(base, p)?;
    let est = transfer_to_restricted(&interpolated, n, s)?;
    Ok(dimension_bound_from_estimate(&est, n))
}

/// The affine line `s ↦ n - g_n(s)` for the base estimate at its endpoint.
pub fn transferred_line(base: &MaximalEstimate, n: u32) -> Result<Affine> {
    let at0 = transferred_at(base, n, &Rational::zero(), &base.p)?;
    let at1 = transferred_at(base, n, &Rational::one(), &base.p)?;
    Ok(Affine::new(at0.clone(), at1 - at0))
}

pub fn best_lower_bound(n: u32, s: &Rational, lib: &BaseEstimateLibrary) -> Result<Rational> {
    Ok(best_lower_bound_detail(n, s, lib)?.value)
}

/// `max(n - s, sup_{1 ≤ p ≤ p_max} n - (n-1-s)/p - (s-1))`.
///
/// The supremum is taken at `p = p_max` when `s ≤ n - 1` and in the limit
/// `p -> 1` (value 2) beyond; both claims are confirmed against
/// [`P_SAMPLES`] interior exponents and a violation is an error. Without a
/// base estimate in dimension `n - 1` only `n - s` is available.
pub fn best_lower_bound_detail(
    n: u32,
    s: &Rational,
    lib: &BaseEstimateLibrary,
) -> Result<LowerBound> {
    if n < 2 {
        return domain(format!("dimension {n} < 2"));
    }
    check_s(n, s)?;
    let n_r = int(n as i64);
    let one = Rational::one();
    let trivial_est = box_dimension_estimate(n, s)?;
    let trivial = dimension_bound_from_estimate(&trivial_est, n);
    let trivial_line = Affine::new(n_r.clone(), -one.clone());

    let Some(base) = lib.best_for_dim(n - 1) else {
        return Ok(LowerBound { value: trivial, piece: trivial_line });
    };
    let p_max = base.p.clone();
    let beyond = *s >= &n_r - &one;
    let (sup, sup_line) = if beyond {
        (int(2), Affine::constant(int(2)))
    } else {
        let value = transferred_at(&base, n, s, &p_max)?;
        if value != closed_form(n, s, &p_max) {
            return Err(Error::Inconsistent(format!(
                "transfer route {value} disagrees with closed form at n = {n}, s = {s}"
            )));
        }
        (value, transferred_line(&base, n)?)
    };
    for k in 1..=P_SAMPLES {
        let p = &one + (&p_max - &one) * int(k) / int(P_SAMPLES);
        let sample = transferred_at(&base, n, s, &p)?;
        if sample > sup {
            return Err(Error::Inconsistent(format!(
                "exponent p = {p} beats the claimed maximiser at n = {n}, s = {s}"
            )));
        }
    }
    if sup >= trivial {
        Ok(LowerBound { value: sup, piece: sup_line })
    } else {
        Ok(LowerBound { value: trivial, piece: trivial_line })
    }
}

/// Exact curve `n - s` on `[0, s₁)`, the transferred line on `[s₁, n-1)`
/// and the constant 2 on `[n-1, n]`, with `s₁ = n - 1 - p_max`. Empty
/// pieces are dropped.
pub fn piecewise_curve(n: u32, lib: &BaseEstimateLibrary) -> Result<PiecewiseBound> {
    if n < 3 {
        return domain(format!("piecewise curve needs n ≥ 3, got {n}"));
    }
    let base = lib
        .best_for_dim(n - 1)
        .ok_or_else(|| Error::Precondition(format!("no base estimate in dimension {}", n - 1)))?;
    let n_r = int(n as i64);
    let one = Rational::one();
    let top = &n_r - &one;
    let crossover = &top - &base.p;
    if crossover.is_negative() {
        return precondition(format!(
            "base exponent {} exceeds n - 1 = {}; the bound would exceed n",
            base.p, top
        ));
    }
    let mut pieces = Vec::new();
    if crossover.is_positive() {
        pieces.push(Piece {
            lo: Rational::zero(),
            hi: crossover.clone(),
            line: Affine::new(n_r.clone(), -one.clone()),
        });
    }
    pieces.push(Piece { lo: crossover, hi: top.clone(), line: transferred_line(&base, n)? });
    pieces.push(Piece { lo: top, hi: n_r, line: Affine::constant(int(2)) });
    PiecewiseBound::new(n, pieces)
}

/// `s,n_minus_s,transferred,bound` rows: both component lines and their
/// maximum, on the same abscissae as [`PiecewiseBound::write_csv`].
pub fn write_components_csv<W: Write>(
    mut out: W,
    curve: &PiecewiseBound,
    lib: &BaseEstimateLibrary,
    step: &Rational,
) -> Result<()> {
    let n = curve.n();
    let base = lib
        .best_for_dim(n - 1)
        .ok_or_else(|| Error::Precondition(format!("no base estimate in dimension {}", n - 1)))?;
    let line = transferred_line(&base, n)?;
    let n_r = int(n as i64);
    writeln!(out, "s,n_minus_s,transferred,bound")?;
    for s in curve.sample_points(step)? {
        writeln!(
            out,
            "{},{},{},{}",
            format_exact(&s),
            format_exact(&(&n_r - &s)),
            format_exact(&line.eval(&s)),
            format_exact(&curve.evaluate(&s)?)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::rational::rat;

    fn lib() -> BaseEstimateLibrary {
        BaseEstimateLibrary::standard()
    }

    #[test]
    fn four_dimensional_values() {
        let lib = lib();
        assert_eq!(best_lower_bound(4, &int(2), &lib).unwrap(), rat(13, 5));
        assert_eq!(best_lower_bound(4, &int(0), &lib).unwrap(), int(4));
        assert_eq!(best_lower_bound(4, &rat(1, 2), &lib).unwrap(), rat(7, 2));
        assert_eq!(best_lower_bound(4, &int(4), &lib).unwrap(), int(2));
        assert_eq!(best_lower_bound(3, &int(1), &lib).unwrap(), rat(5, 2));
    }

    #[test]
    fn detail_names_the_piece() {
        let d = best_lower_bound_detail(4, &int(2), &lib()).unwrap();
        assert_eq!(d.piece.to_string(), "19/5 - 3/5 s");
        let d = best_lower_bound_detail(4, &int(0), &lib()).unwrap();
        assert_eq!(d.piece.to_string(), "4 - s");
        let d = best_lower_bound_detail(10, &int(9), &lib()).unwrap();
        assert_eq!(d.piece.to_string(), "2");
    }

    #[test]
    fn out_of_range_s_is_a_domain_error() {
        assert!(matches!(best_lower_bound(4, &rat(41, 10), &lib()), Err(Error::Domain(_))));
        assert!(matches!(best_lower_bound(4, &rat(-1, 10), &lib()), Err(Error::Domain(_))));
        assert!(best_lower_bound(1, &int(0), &lib()).is_err());
    }

    #[test]
    fn planar_bound_is_trivial() {
        assert_eq!(best_lower_bound(2, &rat(1, 2), &lib()).unwrap(), rat(3, 2));
    }

    #[test]
    fn curve_pieces_match_displayed_cases() {
        let c4 = piecewise_curve(4, &lib()).unwrap();
        let lines: Vec<String> = c4.pieces().iter().map(|p| p.line.to_string()).collect();
        assert_eq!(lines, ["4 - s", "19/5 - 3/5 s", "2"]);
        assert_eq!(c4.breakpoints(), vec![rat(1, 2), int(3)]);

        let c10 = piecewise_curve(10, &lib()).unwrap();
        let lines: Vec<String> = c10.pieces().iter().map(|p| p.line.to_string()).collect();
        assert_eq!(lines, ["10 - s", "19/2 - 5/6 s", "2"]);
        assert_eq!(c10.breakpoints(), vec![int(3), int(9)]);

        let c3 = piecewise_curve(3, &lib()).unwrap();
        let lines: Vec<String> = c3.pieces().iter().map(|p| p.line.to_string()).collect();
        assert_eq!(lines, ["3 - 1/2 s", "2"]);
        assert_eq!(c3.breakpoints(), vec![int(2)]);
        assert!(piecewise_curve(2, &lib()).is_err());
    }

    #[test]
    fn rejects_discontinuous_curves() {
        let pieces = vec![
            Piece { lo: int(0), hi: int(1), line: Affine::new(int(2), int(-1)) },
            Piece { lo: int(1), hi: int(2), line: Affine::constant(int(2)) },
        ];
        assert!(PiecewiseBound::new(2, pieces).is_err());
    }

    #[test]
    fn csv_contains_breakpoints() {
        let c4 = piecewise_curve(4, &lib()).unwrap();
        let mut buf = Vec::new();
        c4.write_csv(&mut buf, &rat(1, 3)).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("s,bound,piece_index\n0,4,0\n"));
        assert!(text.contains("\n0.5,3.5,1\n"));
        assert!(text.contains("\n1/3,11/3,0\n"));
        assert!(text.contains("\n3,2,2\n"));
        assert!(text.ends_with("\n4,2,2\n"));
    }

    #[test]
    fn affine_display_forms() {
        assert_eq!(Affine::new(int(0), int(-1)).to_string(), "-s");
        assert_eq!(Affine::new(int(1), rat(1, 2)).to_string(), "1 + 1/2 s");
    }
}
