//! Binary recurrences `u_n = r·u_{n−1} + s·u_{n−2}` with integer parameters:
//! degeneracy classification, exact terms, dominant-root data, and growth-gap
//! reports.
//!
//! Writing α, β for the roots of x² − r·x − s and D = r² + 4s ≠ 0, the closed
//! form is u_n = a·α^n + b·β^n. The sequence is *degenerate* when a·b·α·β = 0
//! or α/β is a root of unity; every prime-divisor statement in this crate
//! assumes non-degeneracy, so the classification is computed once at
//! construction from closed integer conditions.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::ln_biguint;
use crate::error::{Error, Result};

/// Why a parameter set is degenerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegeneracyReason {
    /// s = 0: one characteristic root is zero.
    ZeroRoot,
    /// α/β is a root of unity of the given order (2, 3, 4 or 6).
    UnitRootRatio { order: u8 },
    /// A closed-form coefficient vanishes: u₁² − r·u₀·u₁ − s·u₀² = 0.
    ZeroCoefficient,
}

impl std::fmt::Display for DegeneracyReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DegeneracyReason::ZeroRoot => write!(f, "one characteristic root is zero (s = 0)"),
            DegeneracyReason::UnitRootRatio { order } => {
                write!(f, "root ratio is a root of unity of order {order}")
            }
            DegeneracyReason::ZeroCoefficient => {
                write!(f, "a closed-form coefficient vanishes (a·b = 0)")
            }
        }
    }
}

/// Degeneracy classification of a parameter set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degeneracy {
    NonDegenerate,
    Degenerate(DegeneracyReason),
}

/// Validated parameters (r, s, u₀, u₁) with D ≠ 0; classification is cached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceParams {
    r: i64,
    s: i64,
    u0: i64,
    u1: i64,
    class: Degeneracy,
}

impl RecurrenceParams {
    pub fn new(r: i64, s: i64, u0: i64, u1: i64) -> Result<RecurrenceParams> {
        if discriminant_of(r, s) == 0 {
            return Err(Error::ZeroDiscriminant { r, s });
        }
        Ok(RecurrenceParams { r, s, u0, u1, class: classify(r, s, u0, u1) })
    }

    /// The companion Lucas-type sequence (u₀, u₁) = (0, 1) for the same (r, s).
    pub fn lucas(r: i64, s: i64) -> Result<RecurrenceParams> {
        RecurrenceParams::new(r, s, 0, 1)
    }

    pub fn r(&self) -> i64 {
        self.r
    }

    pub fn s(&self) -> i64 {
        self.s
    }

    pub fn u0(&self) -> i64 {
        self.u0
    }

    pub fn u1(&self) -> i64 {
        self.u1
    }

    /// D = r² + 4s.
    pub fn discriminant(&self) -> i128 {
        discriminant_of(self.r, self.s)
    }

    pub fn classification(&self) -> Degeneracy {
        self.class
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.class == Degeneracy::NonDegenerate
    }

    pub fn require_nondegenerate(&self) -> Result<()> {
        match self.class {
            Degeneracy::NonDegenerate => Ok(()),
            Degeneracy::Degenerate(reason) => {
                Err(Error::Degenerate { reason: reason.to_string() })
            }
        }
    }
}

impl std::fmt::Display for RecurrenceParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(r={}, s={}, u0={}, u1={})", self.r, self.s, self.u0, self.u1)
    }
}

fn discriminant_of(r: i64, s: i64) -> i128 {
    (r as i128) * (r as i128) + 4 * (s as i128)
}

/// Closed integer conditions; no floating point, no root extraction.
///
/// For s ≠ 0 the ratio α/β is a root of unity exactly when r = 0 (order 2),
/// r² = −s (order 3), r² = −2s (order 4), or r² = −3s (order 6); order 1 would
/// force D = 0 which is excluded. The zero-root and unit-ratio conditions are
/// checked before the coefficient condition so seed-independent degeneracy is
/// reported as such.
fn classify(r: i64, s: i64, u0: i64, u1: i64) -> Degeneracy {
    if s == 0 {
        return Degeneracy::Degenerate(DegeneracyReason::ZeroRoot);
    }
    let r2 = (r as i128) * (r as i128);
    let s = s as i128;
    let order = if r == 0 {
        Some(2)
    } else if r2 == -s {
        Some(3)
    } else if r2 == -2 * s {
        Some(4)
    } else if r2 == -3 * s {
        Some(6)
    } else {
        None
    };
    if let Some(order) = order {
        return Degeneracy::Degenerate(DegeneracyReason::UnitRootRatio { order });
    }
    let (u0, u1, r) = (u0 as i128, u1 as i128, r as i128);
    if u1 * u1 - r * u0 * u1 - s * u0 * u0 == 0 {
        return Degeneracy::Degenerate(DegeneracyReason::ZeroCoefficient);
    }
    Degeneracy::NonDegenerate
}

// ---------------------------------------------------------------------------
// exact terms

/// (t_n, t_{n+1}) of the companion Lucas sequence (t₀ = 0, t₁ = 1), by binary
/// index doubling: t_{2k} = t_k·(2·t_{k+1} − r·t_k), t_{2k+1} = t_{k+1}² + s·t_k².
pub(crate) fn lucas_pair(r: i64, s: i64, n: u64) -> (BigInt, BigInt) {
    let mut a = BigInt::zero();
    let mut b = BigInt::one();
    if n == 0 {
        return (a, b);
    }
    let rb = BigInt::from(r);
    let sb = BigInt::from(s);
    for i in (0..u64::BITS as u64 - u64::from(n.leading_zeros())).rev() {
        let t2k = &a * (&b * 2 - &rb * &a);
        let t2k1 = &b * &b + &sb * &a * &a;
        if (n >> i) & 1 == 1 {
            let t2k2 = &rb * &t2k1 + &sb * &t2k;
            a = t2k1;
            b = t2k2;
        } else {
            a = t2k;
            b = t2k1;
        }
    }
    (a, b)
}

/// Exact u_n in O(log n) big-integer operations via the Lucas basis:
/// u_n = u₁·t_n + s·u₀·t_{n−1} for n ≥ 1.
pub fn nth_term(params: &RecurrenceParams, n: u64) -> BigInt {
    let (un, _) = term_pair(params, n);
    un
}

/// (u_n, u_{n+1}) exactly.
pub fn term_pair(params: &RecurrenceParams, n: u64) -> (BigInt, BigInt) {
    if n == 0 {
        return (BigInt::from(params.u0), BigInt::from(params.u1));
    }
    let (tnm1, tn) = lucas_pair(params.r, params.s, n - 1);
    let tn1 = BigInt::from(params.r) * &tn + BigInt::from(params.s) * &tnm1;
    let u1 = BigInt::from(params.u1);
    let su0 = BigInt::from(params.s) * BigInt::from(params.u0);
    (&u1 * &tn + &su0 * &tnm1, &u1 * &tn1 + &su0 * &tn)
}

/// All terms u_lo … u_hi (inclusive), computed incrementally.
pub fn term_range(params: &RecurrenceParams, lo: u64, hi: u64) -> Result<Vec<BigInt>> {
    if lo > hi {
        return Err(Error::InvalidArgument(format!("empty index range {lo}..={hi}")));
    }
    let (mut prev, mut curr) = term_pair(params, lo);
    let rb = BigInt::from(params.r);
    let sb = BigInt::from(params.s);
    let mut out = Vec::with_capacity((hi - lo + 1) as usize);
    for _ in lo..=hi {
        out.push(prev.clone());
        let next = &rb * &curr + &sb * &prev;
        prev = std::mem::replace(&mut curr, next);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// dominant root

/// |α| for the dominant characteristic root, carrying enough exact data to
/// compare against √2 without floating point.
#[derive(Debug, Clone, PartialEq)]
pub struct DominantRoot {
    /// f64 approximation of |α|.
    pub value: f64,
    form: RootForm,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum RootForm {
    /// D > 0: |α| = (|r| + √D)/2.
    RealHalf { abs_r: u64, disc: u128 },
    /// D < 0: both roots have modulus √(−s).
    ComplexModulus { neg_s: u64 },
}

impl DominantRoot {
    /// Exact test |α| ≥ √2, in integer arithmetic.
    pub fn at_least_sqrt2(&self) -> bool {
        match self.form {
            RootForm::RealHalf { abs_r, disc } => {
                // (|r| + √D)/2 ≥ √2  ⟺  r² + D + 2|r|√D ≥ 8
                let r2 = BigInt::from(abs_r) * BigInt::from(abs_r);
                let d = BigInt::from(disc);
                let base = &r2 + &d;
                let eight = BigInt::from(8);
                if base >= eight {
                    return true;
                }
                // need 2|r|√D ≥ 8 − (r² + D) > 0; square once more
                let rhs = &eight - &base;
                BigInt::from(4u32) * &r2 * &d >= &rhs * &rhs
            }
            RootForm::ComplexModulus { neg_s } => neg_s >= 2,
        }
    }
}

/// |α| of the dominant root. Defined for every D ≠ 0 (degenerate included).
pub fn dominant_root_abs(params: &RecurrenceParams) -> DominantRoot {
    let d = params.discriminant();
    if d > 0 {
        let abs_r = params.r.unsigned_abs();
        let value = (abs_r as f64 + (d as f64).sqrt()) / 2.0;
        DominantRoot { value, form: RootForm::RealHalf { abs_r, disc: d as u128 } }
    } else {
        // D < 0 forces s < 0 and |α| = |β| = √(−s).
        let neg_s = params.s.unsigned_abs();
        DominantRoot { value: (neg_s as f64).sqrt(), form: RootForm::ComplexModulus { neg_s } }
    }
}

// ---------------------------------------------------------------------------
// growth gaps

/// The gaps n − ln|u_n|/ln|α| over an index window, and the fitted constant
/// c₀ = max_{n ≥ 2} gap(n)/ln n (None when the window has no index ≥ 2).
///
/// For non-degenerate sequences |u_n| eventually grows like |α|^n; the gap
/// measures how far below that envelope a term sits, and c₀ calibrates a
/// bound of the shape |u_n| ≥ |α|^(n − c₀·log n).
#[derive(Debug, Clone)]
pub struct GrowthGapReport {
    pub alpha_abs: f64,
    /// (n, gap) pairs, ascending in n.
    pub gaps: Vec<(u64, f64)>,
    pub fitted_c0: Option<f64>,
}

pub fn growth_gaps(params: &RecurrenceParams, lo: u64, hi: u64) -> Result<GrowthGapReport> {
    params.require_nondegenerate()?;
    let alpha = dominant_root_abs(params);
    let ln_alpha = alpha.value.ln();
    let terms = term_range(params, lo, hi)?;
    let mut gaps = Vec::with_capacity(terms.len());
    let mut fitted: Option<f64> = None;
    for (offset, u) in terms.iter().enumerate() {
        let n = lo + offset as u64;
        if u.is_zero() {
            return Err(Error::ZeroTerm { n });
        }
        let gap = n as f64 - ln_biguint(u.magnitude()) / ln_alpha;
        if n >= 2 {
            let c = gap / (n as f64).ln();
            fitted = Some(fitted.map_or(c, |f: f64| f.max(c)));
        }
        gaps.push((n, gap));
    }
    Ok(GrowthGapReport { alpha_abs: alpha.value, gaps, fitted_c0: fitted })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use std::str::FromStr;

    fn fib() -> RecurrenceParams {
        RecurrenceParams::new(1, 1, 0, 1).unwrap()
    }

    #[test]
    fn construction_rejects_zero_discriminant() {
        assert!(matches!(
            RecurrenceParams::new(2, -1, 0, 1),
            Err(Error::ZeroDiscriminant { r: 2, s: -1 })
        ));
        assert!(matches!(RecurrenceParams::new(0, 0, 1, 1), Err(Error::ZeroDiscriminant { .. })));
    }

    #[test]
    fn classification_fixtures() {
        assert!(fib().is_nondegenerate());
        assert!(RecurrenceParams::new(1, -2, 0, 1).unwrap().is_nondegenerate());
        assert!(RecurrenceParams::new(3, -2, -2, -1).unwrap().is_nondegenerate());

        let zero_root = RecurrenceParams::new(2, 0, 1, 1).unwrap();
        assert_eq!(
            zero_root.classification(),
            Degeneracy::Degenerate(DegeneracyReason::ZeroRoot)
        );

        // r = 0 → ratio −1, even when a coefficient also vanishes
        let order2 = RecurrenceParams::new(0, 1, 1, 1).unwrap();
        assert_eq!(
            order2.classification(),
            Degeneracy::Degenerate(DegeneracyReason::UnitRootRatio { order: 2 })
        );
        let order3 = RecurrenceParams::new(1, -1, 0, 1).unwrap();
        assert_eq!(
            order3.classification(),
            Degeneracy::Degenerate(DegeneracyReason::UnitRootRatio { order: 3 })
        );
        let order4 = RecurrenceParams::new(2, -2, 0, 1).unwrap();
        assert_eq!(
            order4.classification(),
            Degeneracy::Degenerate(DegeneracyReason::UnitRootRatio { order: 4 })
        );
        let order6 = RecurrenceParams::new(3, -3, 0, 1).unwrap();
        assert_eq!(
            order6.classification(),
            Degeneracy::Degenerate(DegeneracyReason::UnitRootRatio { order: 6 })
        );

        // u_n = 3^n has b = 0
        let geo = RecurrenceParams::new(2, 3, 1, 3).unwrap();
        assert_eq!(
            geo.classification(),
            Degeneracy::Degenerate(DegeneracyReason::ZeroCoefficient)
        );
        // the all-zero sequence
        let zero = RecurrenceParams::new(1, 1, 0, 0).unwrap();
        assert_eq!(
            zero.classification(),
            Degeneracy::Degenerate(DegeneracyReason::ZeroCoefficient)
        );
    }

    #[test]
    fn fibonacci_terms() {
        let expected = [0i64, 1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144];
        for (n, want) in expected.iter().enumerate() {
            assert_eq!(nth_term(&fib(), n as u64), BigInt::from(*want));
        }
        assert_eq!(nth_term(&fib(), 50), BigInt::from(12_586_269_025u64));
        assert_eq!(
            nth_term(&fib(), 100),
            BigInt::from_str("354224848179261915075").unwrap()
        );
    }

    #[test]
    fn alternating_sign_terms() {
        // (r, s) = (1, −2) companion sequence
        let p = RecurrenceParams::lucas(1, -2).unwrap();
        let expected = [0i64, 1, 1, -1, -3, -1, 5, 7, -3, -17, -11];
        for (n, want) in expected.iter().enumerate() {
            assert_eq!(nth_term(&p, n as u64), BigInt::from(*want), "n = {n}");
        }
    }

    #[test]
    fn power_difference_sequence() {
        // (3, −2, −2, −1) encodes u_n = 2^n − 3
        let p = RecurrenceParams::new(3, -2, -2, -1).unwrap();
        for n in 0..40u64 {
            let want = (BigInt::one() << n) - 3;
            assert_eq!(nth_term(&p, n), want, "n = {n}");
        }
        assert_eq!(nth_term(&p, 4), BigInt::from(13));
    }

    #[test]
    fn doubling_matches_iteration() {
        let cases =
            [(1i64, 1i64, 0i64, 1i64), (1, -2, 0, 1), (3, -2, -2, -1), (-4, 7, 2, -3), (5, 5, 1, 0)];
        for (r, s, u0, u1) in cases {
            let p = RecurrenceParams::new(r, s, u0, u1).unwrap();
            let terms = term_range(&p, 0, 120).unwrap();
            for (n, want) in terms.iter().enumerate() {
                assert_eq!(&nth_term(&p, n as u64), want, "{p} at n = {n}");
            }
        }
    }

    #[test]
    fn term_pair_consistency() {
        let p = RecurrenceParams::new(-3, 5, 4, -1).unwrap();
        for n in 0..60u64 {
            let (un, un1) = term_pair(&p, n);
            assert_eq!(un, nth_term(&p, n));
            assert_eq!(un1, nth_term(&p, n + 1));
        }
    }

    #[test]
    fn term_range_window() {
        let w = term_range(&fib(), 10, 13).unwrap();
        assert_eq!(w, vec![BigInt::from(55), BigInt::from(89), BigInt::from(144), BigInt::from(233)]);
        assert!(term_range(&fib(), 5, 4).is_err());
    }

    #[test]
    fn dominant_root_values() {
        let phi = dominant_root_abs(&fib());
        assert!((phi.value - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-15);
        assert!(phi.at_least_sqrt2());

        let c = dominant_root_abs(&RecurrenceParams::lucas(1, -2).unwrap());
        assert!((c.value - 2f64.sqrt()).abs() < 1e-15);
        assert!(c.at_least_sqrt2()); // equality case |α| = √2 exactly

        let two = dominant_root_abs(&RecurrenceParams::lucas(3, -2).unwrap());
        assert!((two.value - 2.0).abs() < 1e-15);

        // degenerate but still well-defined: s = 0 gives |α| = |r|
        let d = dominant_root_abs(&RecurrenceParams::new(-7, 0, 1, 1).unwrap());
        assert!((d.value - 7.0).abs() < 1e-15);
    }

    #[test]
    fn root_bound_on_nondegenerate_box() {
        // every non-degenerate (r, s) in a box satisfies |α| ≥ √2 exactly
        for r in -10i64..=10 {
            for s in -10i64..=10 {
                let Ok(p) = RecurrenceParams::new(r, s, 0, 1) else { continue };
                if !p.is_nondegenerate() {
                    continue;
                }
                let root = dominant_root_abs(&p);
                assert!(root.at_least_sqrt2(), "(r, s) = ({r}, {s}), |α| = {}", root.value);
                assert!(root.value >= 2f64.sqrt() - 1e-12);
            }
        }
    }

    #[test]
    fn growth_gaps_fibonacci() {
        let rep = growth_gaps(&fib(), 1, 10).unwrap();
        assert_eq!(rep.gaps.len(), 10);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let gap10 = 10.0 - 55f64.ln() / phi.ln();
        let (n, g) = rep.gaps[9];
        assert_eq!(n, 10);
        assert!((g - gap10).abs() < 1e-9, "gap {g} vs {gap10}");
        // fitted constant reproduces the max over n ≥ 2
        let want = rep
            .gaps
            .iter()
            .filter(|(n, _)| *n >= 2)
            .map(|(n, g)| g / (*n as f64).ln())
            .fold(f64::NEG_INFINITY, f64::max);
        assert!((rep.fitted_c0.unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn growth_gaps_rejects_zero_terms_and_degenerate() {
        // Fibonacci u_0 = 0 sits in the window
        assert!(matches!(growth_gaps(&fib(), 0, 5), Err(Error::ZeroTerm { n: 0 })));
        let deg = RecurrenceParams::new(0, 1, 1, 1).unwrap();
        assert!(matches!(growth_gaps(&deg, 1, 5), Err(Error::Degenerate { .. })));
    }

    #[test]
    fn growth_gap_window_without_fit() {
        let rep = growth_gaps(&fib(), 1, 1).unwrap();
        assert!(rep.fitted_c0.is_none());
    }
}
