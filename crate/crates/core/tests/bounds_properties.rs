use kakeya_core::bounds::{
    best_lower_bound, dual_exponent, int, piecewise_curve, rat, transfer_to_restricted, w_exponent,
    BaseEstimateLibrary, Rational,
};
use kakeya_core::bounds::{dimension_bound_from_estimate, validate_necessary_condition, wolff};
use proptest::prelude::*;

fn grid(n: u32, den: i64) -> impl Iterator<Item = Rational> {
    (0..=n as i64 * den).map(move |k| rat(k, den))
}

#[test]
fn curve_agrees_with_pointwise_bound_on_sixteenths() {
    let lib = BaseEstimateLibrary::standard();
    for n in 3..=12 {
        let curve = piecewise_curve(n, &lib).unwrap();
        for s in grid(n, 16) {
            assert_eq!(curve.evaluate(&s).unwrap(), best_lower_bound(n, &s, &lib).unwrap(), "n = {n}, s = {s}");
        }
    }
}

#[test]
fn curve_is_continuous_and_dominates_the_trivial_bound() {
    let lib = BaseEstimateLibrary::standard();
    for n in 3..=12 {
        let curve = piecewise_curve(n, &lib).unwrap();
        let pieces = curve.pieces();
        for w in pieces.windows(2) {
            assert_eq!(w[0].hi, w[1].lo);
            assert_eq!(w[0].line.eval(&w[0].hi), w[1].line.eval(&w[1].lo), "jump at {} in n = {n}", w[1].lo);
        }
        assert!(pieces.iter().all(|p| p.line.slope <= int(0)));
        assert_eq!(curve.evaluate(&int(0)).unwrap(), int(n as i64));
        let mut prev: Option<Rational> = None;
        for s in grid(n, 16) {
            let f = curve.evaluate(&s).unwrap();
            assert!(f >= int(n as i64) - &s);
            if let Some(p) = &prev {
                assert!(f <= *p);
            }
            prev = Some(f);
        }
    }
}

/// `min_t max(2m/((m-1)m + (t-1)t), 1/(m+1-t))` compared as integer
/// fractions by cross-multiplication.
fn w_oracle(m: i128) -> (i128, i128) {
    let mut best: Option<(i128, i128)> = None;
    for t in 2..=m {
        let a = (2 * m, (m - 1) * m + (t - 1) * t);
        let b = (1, m + 1 - t);
        let hi = if a.0 * b.1 >= b.0 * a.1 { a } else { b };
        best = match best {
            Some(cur) if cur.0 * hi.1 <= hi.0 * cur.1 => Some(cur),
            _ => Some(hi),
        };
    }
    let (num, den) = best.unwrap();
    (num + den, den)
}

#[test]
fn w_exponent_matches_direct_minimisation() {
    for m in 2..=30u32 {
        let (num, den) = w_oracle(m as i128);
        assert_eq!(w_exponent(m).unwrap(), rat(num as i64, den as i64), "m = {m}");
    }
}

#[test]
fn wolff_transfer_identity_on_a_grid() {
    let n_minus = |s: &Rational| rat(19, 5) - rat(3, 5) * s;
    for k in 0..=32 {
        let s = rat(k, 8);
        let t = transfer_to_restricted(&wolff(), 4, &s).unwrap();
        assert_eq!(t.p, rat(19, 5));
        assert_eq!(*t.beta(), (int(1) + int(3) * &s) / int(19));
        assert_eq!(dimension_bound_from_estimate(&t, 4), n_minus(&s));
    }
}

#[test]
fn catalog_estimates_are_admissible() {
    for e in BaseEstimateLibrary::standard().entries() {
        assert!(validate_necessary_condition(e), "{}", e.source);
    }
    let w = wolff();
    assert_eq!((int(1) + &w.h) * &w.p, int(3));
}

proptest! {
    #[test]
    fn dual_exponent_is_an_involution(num in 1i64..10_000, den in 1i64..100) {
        let p = int(1) + rat(num, den);
        prop_assume!(p <= int(100));
        let q = dual_exponent(&p).unwrap();
        prop_assert!(q > int(1));
        prop_assert_eq!(dual_exponent(&q).unwrap(), p);
    }

    #[test]
    fn bound_is_non_increasing_in_s(n in 3u32..=12, a in 0i64..=1000, b in 0i64..=1000) {
        let lib = BaseEstimateLibrary::standard();
        let (lo, hi) = (a.min(b), a.max(b));
        let s0 = rat(lo * n as i64, 1000);
        let s1 = rat(hi * n as i64, 1000);
        let f0 = best_lower_bound(n, &s0, &lib).unwrap();
        let f1 = best_lower_bound(n, &s1, &lib).unwrap();
        prop_assert!(f1 <= f0);
        prop_assert!(f1 >= int(n as i64) - &s1);
        prop_assert!(f0 <= int(n as i64));
    }
}
