use std::fmt;

use num_traits::{One, Zero};

use super::rational::{int, Rational};
use crate::error::{domain, precondition, Result};

/// Strength of the inequality an estimate asserts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flavor {
    /// Strong type `L^p -> L^q`.
    Strong,
    /// Weak type `L^p -> L^{q,∞}`.
    Weak,
    /// Restricted weak type: tested on characteristic functions only.
    RestrictedWeak,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Strong => "strong",
            Flavor::Weak => "weak",
            Flavor::RestrictedWeak => "restricted-weak",
        })
    }
}

/// An exponent triple `(p, q, h)` asserting
/// `‖(f)*_δ‖_{L^q(S^{n-1})} ≲_ε δ^{-h-ε} ‖f‖_{L^p(R^n)}` in ambient
/// dimension `n`.
///
/// Restricted-weak estimates produced by [`transfer_to_restricted`] store
/// their δ-power loss `β` in `h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximalEstimate {
    pub ambient_dim: u32,
    pub p: Rational,
    pub q: Rational,
    pub h: Rational,
    pub flavor: Flavor,
    pub source: String,
    /// The estimate holds with an `ε` loss that the calculus drops.
    pub epsilon_loss: bool,
}

impl MaximalEstimate {
    pub fn new(
        ambient_dim: u32,
        p: Rational,
        q: Rational,
        h: Rational,
        flavor: Flavor,
        source: impl Into<String>,
    ) -> Result<Self> {
        if ambient_dim < 2 {
            return domain(format!("ambient dimension {ambient_dim} < 2"));
        }
        if h < Rational::zero() {
            return domain(format!("negative δ-power loss h = {h}"));
        }
        if p < Rational::one() {
            return domain(format!("Lebesgue exponent p = {p} < 1"));
        }
        if flavor != Flavor::RestrictedWeak && q < p {
            return domain(format!("sphere exponent q = {q} below p = {p}"));
        }
        Ok(Self {
            ambient_dim,
            p,
            q,
            h,
            flavor,
            source: source.into(),
            epsilon_loss: true,
        })
    }

    /// The restricted-weak loss `β` (alias of `h`).
    pub fn beta(&self) -> &Rational {
        &self.h
    }

    /// `h = dim/p - 1`, the form produced by interpolating against the
    /// trivial `L^1 -> L^∞` bound.
    pub fn has_interpolation_form(&self) -> bool {
        self.h == int(self.ambient_dim as i64) / &self.p - Rational::one()
    }
}

/// `w(m) = 1 + min_{2 ≤ t ≤ m} max(2m / ((m-1)m + (t-1)t), 1/(m+1-t))`.
pub fn w_exponent(m: u32) -> Result<Rational> {
    if m < 2 {
        return domain(format!("w exponent needs m ≥ 2, got {m}"));
    }
    let m_i = m as i64;
    let best = (2..=m_i)
        .map(|t| {
            let first = int(2 * m_i) / int((m_i - 1) * m_i + (t - 1) * t);
            let second = Rational::one() / int(m_i + 1 - t);
            first.max(second)
        })
        .min()
        .expect("t range is nonempty for m ≥ 2");
    Ok(Rational::one() + best)
}

/// Hölder dual `p' = p / (p - 1)`.
pub fn dual_exponent(p: &Rational) -> Result<Rational> {
    if *p <= Rational::one() {
        return domain(format!("dual exponent needs p > 1, got {p}"));
    }
    Ok(p / (p - Rational::one()))
}

/// Interpolates `base` (with `p0 = q0` and `h = dim/p0 - 1`) against the
/// trivial `L^1 -> L^∞` estimate, landing at Lebesgue exponent `target_p`.
pub fn interpolate(base: &MaximalEstimate, target_p: &Rational) -> Result<MaximalEstimate> {
    if base.p != base.q {
        return precondition(format!(
            "interpolation base needs p0 = q0, got p0 = {}, q0 = {}",
            base.p, base.q
        ));
    }
    if !base.has_interpolation_form() {
        return precondition(format!(
            "interpolation base needs h = n/p0 - 1, got h = {} for n = {}, p0 = {}",
            base.h, base.ambient_dim, base.p
        ));
    }
    if *target_p <= Rational::one() || *target_p > base.p {
        return domain(format!(
            "target exponent {target_p} outside (1, {}]",
            base.p
        ));
    }
    let one = Rational::one();
    let q = &base.q * (&one - &one / &base.p) / (&one - &one / target_p);
    let h = int(base.ambient_dim as i64) / target_p - &one;
    let source = if *target_p == base.p {
        base.source.clone()
    } else {
        format!("interpolated from {}", base.source)
    };
    let mut out = MaximalEstimate::new(base.ambient_dim, target_p.clone(), q, h, base.flavor, source)?;
    out.epsilon_loss = base.epsilon_loss;
    Ok(out)
}

/// Lifts an `(n-1)`-dimensional maximal estimate `(p₋, h₋)` to the
/// restricted weak-type estimate in `R^n` for midpoint sets of upper box
/// dimension at most `s`:
///
/// `p = (p₋ + n(p₋-1) + 1)/p₋`, `β = (h₋p₋ + s p₋ - s)/(p₋ + n(p₋-1) + 1)`.
pub fn transfer_to_restricted(
    base: &MaximalEstimate,
    n: u32,
    s: &Rational,
) -> Result<MaximalEstimate> {
    if base.p <= Rational::one() {
        return domain(format!("transfer needs base p > 1, got {}", base.p));
    }
    if base.ambient_dim + 1 != n {
        return precondition(format!(
            "base estimate lives in dimension {}, expected {}",
            base.ambient_dim,
            n - 1
        ));
    }
    check_s(n, s)?;
    let one = Rational::one();
    let pm = &base.p;
    let denom = pm + int(n as i64) * (pm - &one) + &one;
    let p = &denom / pm;
    let beta = (&base.h * pm + s * pm - s) / &denom;
    let mut out = MaximalEstimate::new(
        n,
        p.clone(),
        p,
        beta,
        Flavor::RestrictedWeak,
        format!("transferred from {}", base.source),
    )?;
    out.epsilon_loss = true;
    Ok(out)
}

/// `g_n(s) = (h₋p₋ + s p₋ - s)/p₋`; the restricted Kakeya set has
/// dimension at least `n - g_n(s)`.
pub fn g_function(base: &MaximalEstimate, s: &Rational) -> Result<Rational> {
    if base.p <= Rational::one() {
        return domain(format!("g function needs base p > 1, got {}", base.p));
    }
    let pm = &base.p;
    Ok((&base.h * pm + s * pm - s) / pm)
}

/// Dimension lower bound `n - βp` delivered by a restricted weak-type
/// estimate.
pub fn dimension_bound_from_estimate(est: &MaximalEstimate, n: u32) -> Rational {
    int(n as i64) - est.beta() * &est.p
}

/// Necessary condition `dim ≤ (1 + h)p`, in the `ε -> 0` limit.
pub fn validate_necessary_condition(est: &MaximalEstimate) -> bool {
    int(est.ambient_dim as i64) <= (Rational::one() + &est.h) * &est.p
}

/// The `L^n -> L^{n,∞}` restricted estimate with loss `s/n`, valid for
/// midpoint sets of upper box dimension at most `s`.
pub fn box_dimension_estimate(n: u32, s: &Rational) -> Result<MaximalEstimate> {
    check_s(n, s)?;
    let p = int(n as i64);
    MaximalEstimate::new(n, p.clone(), p.clone(), s / &p, Flavor::Weak, "box-dimension bush bound")
}

pub(crate) fn check_s(n: u32, s: &Rational) -> Result<()> {
    if *s < Rational::zero() || *s > int(n as i64) {
        return domain(format!("s = {s} outside [0, {n}]"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::rational::rat;

    fn wolff() -> MaximalEstimate {
        MaximalEstimate::new(3, rat(5, 2), rat(5, 2), rat(1, 5), Flavor::Strong, "Wolff").unwrap()
    }

    fn cordoba() -> MaximalEstimate {
        MaximalEstimate::new(2, int(2), int(2), int(0), Flavor::Strong, "Cordoba").unwrap()
    }

    /// Direct loop over `t`, written independently of `w_exponent`.
    fn w_oracle(m: i64) -> Rational {
        let mut best: Option<Rational> = None;
        for t in 2..=m {
            let a = rat(2 * m, (m - 1) * m + (t - 1) * t);
            let b = rat(1, m + 1 - t);
            let v = if a > b { a } else { b };
            best = match best {
                Some(cur) if cur <= v => Some(cur),
                _ => Some(v),
            };
        }
        int(1) + best.unwrap()
    }

    #[test]
    fn w_exponent_known_values() {
        assert_eq!(w_exponent(9).unwrap(), rat(6, 5));
        assert_eq!(dual_exponent(&w_exponent(9).unwrap()).unwrap(), int(6));
        assert_eq!(w_exponent(2).unwrap(), int(2));
        assert_eq!(w_exponent(3).unwrap(), rat(7, 4));
        assert!(w_exponent(1).is_err());
    }

    #[test]
    fn w_exponent_matches_oracle() {
        for m in 2..=30u32 {
            assert_eq!(w_exponent(m).unwrap(), w_oracle(m as i64), "m = {m}");
        }
    }

    #[test]
    fn dual_examples() {
        assert_eq!(dual_exponent(&int(2)).unwrap(), int(2));
        assert_eq!(dual_exponent(&rat(6, 5)).unwrap(), int(6));
        assert_eq!(dual_exponent(&rat(5, 2)).unwrap(), rat(5, 3));
        assert!(dual_exponent(&int(1)).is_err());
        assert!(dual_exponent(&rat(1, 2)).is_err());
    }

    #[test]
    fn interpolation_examples() {
        let same = interpolate(&wolff(), &rat(5, 2)).unwrap();
        assert_eq!((same.p.clone(), same.q.clone(), same.h.clone()), (rat(5, 2), rat(5, 2), rat(1, 5)));
        let two = interpolate(&wolff(), &int(2)).unwrap();
        assert_eq!(two.p, int(2));
        assert_eq!(two.q, int(3));
        assert_eq!(two.h, rat(1, 2));
        let c = interpolate(&cordoba(), &int(2)).unwrap();
        assert_eq!((c.p, c.q, c.h), (int(2), int(2), int(0)));
        assert!(interpolate(&wolff(), &int(3)).is_err());
        assert!(interpolate(&wolff(), &int(1)).is_err());
    }

    #[test]
    fn interpolation_rejects_wrong_form() {
        let odd = MaximalEstimate::new(3, int(2), int(2), int(1), Flavor::Strong, "odd").unwrap();
        assert!(matches!(interpolate(&odd, &rat(3, 2)), Err(crate::Error::Precondition(_))));
    }

    #[test]
    fn transfer_examples() {
        let s = rat(7, 3);
        let t = transfer_to_restricted(&wolff(), 4, &s).unwrap();
        assert_eq!(t.p, rat(19, 5));
        assert_eq!(*t.beta(), (int(1) + int(3) * &s) / int(19));
        assert_eq!(t.flavor, Flavor::RestrictedWeak);

        let zero = transfer_to_restricted(&wolff(), 4, &int(0)).unwrap();
        let pm = rat(5, 2);
        assert_eq!(*zero.beta(), rat(1, 5) * &pm / (&pm + int(4) * (&pm - int(1)) + int(1)));

        // Córdoba in the plane lifted to R^3 at s = 1: p = (2 + 3 + 1)/2.
        let c = transfer_to_restricted(&cordoba(), 3, &int(1)).unwrap();
        assert_eq!(c.p, int(3));
        assert_eq!(*c.beta(), rat(1, 6));
        assert_eq!(dimension_bound_from_estimate(&c, 3), rat(5, 2));
    }

    #[test]
    fn transfer_rejects_bad_inputs() {
        let flat = MaximalEstimate::new(3, int(1), int(1), int(2), Flavor::Strong, "p=1").unwrap();
        assert!(matches!(transfer_to_restricted(&flat, 4, &int(0)), Err(crate::Error::Domain(_))));
        assert!(transfer_to_restricted(&wolff(), 5, &int(0)).is_err());
        assert!(transfer_to_restricted(&wolff(), 4, &int(5)).is_err());
    }

    #[test]
    fn g_function_examples() {
        assert_eq!(g_function(&wolff(), &int(0)).unwrap(), rat(1, 5));
        let s = rat(3, 2);
        assert_eq!(g_function(&wolff(), &s).unwrap(), rat(1, 5) + rat(3, 5) * &s);
        assert_eq!(g_function(&cordoba(), &int(0)).unwrap(), int(0));
    }

    #[test]
    fn dimension_bound_examples() {
        for k in 0..=12 {
            let s = rat(k, 4);
            let t = transfer_to_restricted(&wolff(), 4, &s).unwrap();
            assert_eq!(dimension_bound_from_estimate(&t, 4), rat(19, 5) - rat(3, 5) * &s);
        }
        let lossless = MaximalEstimate::new(4, int(4), int(4), int(0), Flavor::Weak, "x").unwrap();
        assert_eq!(dimension_bound_from_estimate(&lossless, 4), int(4));
        let s = rat(5, 3);
        let est = box_dimension_estimate(5, &s).unwrap();
        assert_eq!(dimension_bound_from_estimate(&est, 5), int(5) - &s);
    }

    #[test]
    fn necessary_condition_examples() {
        assert!(validate_necessary_condition(&wolff()));
        assert_eq!((int(1) + rat(1, 5)) * rat(5, 2), int(3));
        let weak = MaximalEstimate::new(3, int(2), int(2), int(0), Flavor::Strong, "x").unwrap();
        assert!(!validate_necessary_condition(&weak));
        assert!(validate_necessary_condition(&cordoba()));
    }
}
