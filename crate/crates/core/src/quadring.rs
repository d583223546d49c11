//! Exact arithmetic in ℚ(√D), the closed form u_n = a·α^n + b·β^n, and the
//! shifted-term identity that links a recurrence to its companion Lucas
//! sequence.
//!
//! √D is kept formal: D is never reduced to a squarefree kernel and no square
//! root is extracted. When D happens to be a perfect square the structure is
//! the split ring ℚ×ℚ rather than a field; every identity checked here still
//! holds verbatim there, and division only requires a nonzero norm, which is
//! exactly the invertibility condition in the split case too.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::recurrence::{nth_term, RecurrenceParams};

/// An element x + y·√D with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadElem {
    x: BigRational,
    y: BigRational,
    d: BigInt,
}

impl QuadElem {
    pub fn new(x: BigRational, y: BigRational, d: BigInt) -> Result<QuadElem> {
        if d.is_zero() {
            return Err(Error::InvalidArgument("QuadElem discriminant must be nonzero".into()));
        }
        Ok(QuadElem { x, y, d })
    }

    pub fn from_int(v: &BigInt, d: &BigInt) -> Result<QuadElem> {
        QuadElem::new(BigRational::from(v.clone()), BigRational::zero(), d.clone())
    }

    pub fn zero(d: &BigInt) -> Result<QuadElem> {
        QuadElem::from_int(&BigInt::zero(), d)
    }

    pub fn one(d: &BigInt) -> Result<QuadElem> {
        QuadElem::from_int(&BigInt::one(), d)
    }

    /// The formal √D itself.
    pub fn sqrt_d(d: &BigInt) -> Result<QuadElem> {
        QuadElem::new(BigRational::zero(), BigRational::one(), d.clone())
    }

    pub fn x(&self) -> &BigRational {
        &self.x
    }

    pub fn y(&self) -> &BigRational {
        &self.y
    }

    pub fn disc(&self) -> &BigInt {
        &self.d
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// True when the √D-component vanishes.
    pub fn is_rational(&self) -> bool {
        self.y.is_zero()
    }

    fn same_context(&self, other: &QuadElem) -> Result<()> {
        if self.d != other.d {
            return Err(Error::InvalidArgument(format!(
                "mismatched discriminants {} and {}",
                self.d, other.d
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &QuadElem) -> Result<QuadElem> {
        self.same_context(other)?;
        Ok(QuadElem { x: &self.x + &other.x, y: &self.y + &other.y, d: self.d.clone() })
    }

    pub fn sub(&self, other: &QuadElem) -> Result<QuadElem> {
        self.same_context(other)?;
        Ok(QuadElem { x: &self.x - &other.x, y: &self.y - &other.y, d: self.d.clone() })
    }

    pub fn mul(&self, other: &QuadElem) -> Result<QuadElem> {
        self.same_context(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &QuadElem) -> QuadElem {
        let d = BigRational::from(self.d.clone());
        QuadElem {
            x: &self.x * &other.x + &self.y * &other.y * &d,
            y: &self.x * &other.y + &self.y * &other.x,
            d: self.d.clone(),
        }
    }

    pub fn neg(&self) -> QuadElem {
        QuadElem { x: -self.x.clone(), y: -self.y.clone(), d: self.d.clone() }
    }

    /// x − y·√D.
    pub fn conjugate(&self) -> QuadElem {
        QuadElem { x: self.x.clone(), y: -self.y.clone(), d: self.d.clone() }
    }

    /// N(x + y√D) = x² − D·y², the product with the conjugate.
    pub fn norm(&self) -> BigRational {
        &self.x * &self.x - BigRational::from(self.d.clone()) * &self.y * &self.y
    }

    /// Multiplicative inverse; fails exactly when the norm is zero (the zero
    /// element, or a zero divisor when D is a perfect square).
    pub fn inverse(&self) -> Result<QuadElem> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero(format!(
                "element {} + {}·√{} has zero norm",
                self.x, self.y, self.d
            )));
        }
        let conj = self.conjugate();
        Ok(QuadElem { x: conj.x / &n, y: conj.y / &n, d: self.d.clone() })
    }

    pub fn div(&self, other: &QuadElem) -> Result<QuadElem> {
        self.same_context(other)?;
        Ok(self.mul_unchecked(&other.inverse()?))
    }

    /// Scalar multiple by an exact rational.
    pub fn scale(&self, c: &BigRational) -> QuadElem {
        QuadElem { x: &self.x * c, y: &self.y * c, d: self.d.clone() }
    }

    /// Exponentiation by squaring; exact.
    pub fn pow(&self, n: u64) -> QuadElem {
        let mut acc = QuadElem {
            x: BigRational::one(),
            y: BigRational::zero(),
            d: self.d.clone(),
        };
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            e >>= 1;
        }
        acc
    }

    /// |x + y·√D| as f64: the real absolute value for D > 0, the complex
    /// modulus √(x² + |D|·y²) for D < 0.
    pub fn abs_f64(&self) -> f64 {
        let x = self.x.to_f64().unwrap_or(f64::NAN);
        let y = self.y.to_f64().unwrap_or(f64::NAN);
        let d = self.d.to_f64().unwrap_or(f64::NAN);
        if self.d.is_positive() {
            (x + y * d.sqrt()).abs()
        } else {
            (x * x + y * y * (-d)).sqrt()
        }
    }
}

impl std::fmt::Display for QuadElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} + {}·√{}", self.x, self.y, self.d)
    }
}

/// Closed-form data for a recurrence: u_n = a·α^n + b·β^n over ℚ(√D).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedForm {
    pub alpha: QuadElem,
    pub beta: QuadElem,
    pub a: QuadElem,
    pub b: QuadElem,
    pub disc: BigInt,
}

/// α = (r + √D)/2, β = (r − √D)/2, a = (u₀β − u₁)/(β − α),
/// b = (u₁ − u₀α)/(β − α). Exact; β − α = −√D is always invertible.
pub fn closed_form_constants(params: &RecurrenceParams) -> ClosedForm {
    let d = BigInt::from(params.discriminant());
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let r_half = BigRational::from(BigInt::from(params.r())) * &half;
    let alpha = QuadElem { x: r_half.clone(), y: half.clone(), d: d.clone() };
    let beta = QuadElem { x: r_half, y: -half, d: d.clone() };
    let diff = beta.sub(&alpha).expect("same context");
    let diff_inv = diff.inverse().expect("β − α = −√D is invertible when D ≠ 0");
    let u0 = BigRational::from(BigInt::from(params.u0()));
    let u1 = BigRational::from(BigInt::from(params.u1()));
    let a = beta.scale(&u0).sub(&QuadElem { x: u1.clone(), y: BigRational::zero(), d: d.clone() })
        .expect("same context")
        .mul_unchecked(&diff_inv);
    let b = QuadElem { x: u1, y: BigRational::zero(), d: d.clone() }
        .sub(&alpha.scale(&u0))
        .expect("same context")
        .mul_unchecked(&diff_inv);
    ClosedForm { alpha, beta, a, b, disc: d }
}

/// Evaluate a·α^n + b·β^n exactly and return it as an integer. A nonzero
/// √D-component or a non-integral value signals an arithmetic bug.
pub fn reconstruct_term(cf: &ClosedForm, n: u64) -> Result<BigInt> {
    let v = cf
        .a
        .mul_unchecked(&cf.alpha.pow(n))
        .add(&cf.b.mul_unchecked(&cf.beta.pow(n)))?;
    if !v.is_rational() {
        return Err(Error::Internal(format!(
            "reconstructed term at n = {n} has √D-component {}",
            v.y()
        )));
    }
    if !v.x().is_integer() {
        return Err(Error::Internal(format!(
            "reconstructed term at n = {n} is non-integral: {}",
            v.x()
        )));
    }
    Ok(v.x().to_integer())
}

/// Exact check of the shifted-term identity
///
///   u_m − β^k·u_{m−k} = a·(α−β)·α^{m−k}·t_k
///
/// where t is the companion Lucas sequence for the same (r, s) and k is the
/// index shift. The scalar is a·(α−β), i.e. the negative of the
/// conjugate-difference normalization a′ = (β−α)·a.
pub fn verify_shift_identity(params: &RecurrenceParams, m: u64, shift: u64) -> Result<bool> {
    params.require_nondegenerate()?;
    if shift > m {
        return Err(Error::InvalidArgument(format!(
            "shift {shift} exceeds the term index {m}"
        )));
    }
    let cf = closed_form_constants(params);
    let d = &cf.disc;
    let u_m = QuadElem::from_int(&nth_term(params, m), d)?;
    let u_shifted = QuadElem::from_int(&nth_term(params, m - shift), d)?;
    let lucas = RecurrenceParams::lucas(params.r(), params.s())?;
    let t_k = QuadElem::from_int(&nth_term(&lucas, shift), d)?;

    let lhs = u_m.sub(&cf.beta.pow(shift).mul_unchecked(&u_shifted))?;
    let scalar = cf.a.mul_unchecked(&cf.alpha.sub(&cf.beta)?);
    let rhs = scalar.mul_unchecked(&cf.alpha.pow(m - shift)).mul_unchecked(&t_k);
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn fib() -> RecurrenceParams {
        RecurrenceParams::new(1, 1, 0, 1).unwrap()
    }

    #[test]
    fn field_arithmetic() {
        let d = BigInt::from(5);
        let one_plus = QuadElem::new(rat(1, 1), rat(1, 1), d.clone()).unwrap();
        let one_minus = one_plus.conjugate();
        // (1+√5)(1−√5) = −4
        let prod = one_plus.mul(&one_minus).unwrap();
        assert_eq!(prod, QuadElem::from_int(&BigInt::from(-4), &d).unwrap());
        assert_eq!(one_plus.norm(), rat(-4, 1));

        // (√D)/(√D) = 1
        let root = QuadElem::sqrt_d(&d).unwrap();
        assert_eq!(root.div(&root).unwrap(), QuadElem::one(&d).unwrap());

        // inverse round-trip
        let e = QuadElem::new(rat(3, 2), rat(-7, 3), d.clone()).unwrap();
        assert_eq!(e.mul(&e.inverse().unwrap()).unwrap(), QuadElem::one(&d).unwrap());
    }

    #[test]
    fn zero_and_mismatch_errors() {
        let d = BigInt::from(5);
        let zero = QuadElem::zero(&d).unwrap();
        assert!(matches!(zero.inverse(), Err(Error::DivisionByZero(_))));
        let other = QuadElem::one(&BigInt::from(13)).unwrap();
        assert!(QuadElem::one(&d).unwrap().add(&other).is_err());
        assert!(QuadElem::new(rat(1, 1), rat(1, 1), BigInt::zero()).is_err());
        // zero divisor in the split (perfect-square D) case: norm(2 + √4·1) = 0
        let split = QuadElem::new(rat(2, 1), rat(1, 1), BigInt::from(4)).unwrap();
        assert!(split.inverse().is_err());
    }

    #[test]
    fn root_relations_hold_for_many_params() {
        for (r, s) in [(1i64, 1i64), (1, -2), (3, -2), (-4, 7), (5, 5), (2, 3), (-3, -5)] {
            let p = RecurrenceParams::new(r, s, 0, 1).unwrap();
            let cf = closed_form_constants(&p);
            let sum = cf.alpha.add(&cf.beta).unwrap();
            let prod = cf.alpha.mul(&cf.beta).unwrap();
            assert_eq!(sum, QuadElem::from_int(&BigInt::from(r), &cf.disc).unwrap());
            assert_eq!(prod, QuadElem::from_int(&BigInt::from(-s), &cf.disc).unwrap());
        }
    }

    #[test]
    fn closed_form_fixtures() {
        // Fibonacci: a = 1/√5 = (1/5)·√5, b = −a
        let cf = closed_form_constants(&fib());
        let want_a = QuadElem::new(rat(0, 1), rat(1, 5), BigInt::from(5)).unwrap();
        assert_eq!(cf.a, want_a);
        assert_eq!(cf.b, want_a.neg());

        // companion sequence with u₀ = 2, u₁ = 1 (often written L_n): a = b = 1
        let l = RecurrenceParams::new(1, 1, 2, 1).unwrap();
        let cf = closed_form_constants(&l);
        assert_eq!(cf.a, QuadElem::one(&cf.disc).unwrap());
        assert_eq!(cf.b, QuadElem::one(&cf.disc).unwrap());
    }

    #[test]
    fn reconstruction_matches_iteration() {
        let cases = [(1i64, 1, 0, 1), (1, -2, 0, 1), (3, -2, -2, -1), (-4, 7, 2, -3), (6, 6, -1, 5)];
        for (r, s, u0, u1) in cases {
            let p = RecurrenceParams::new(r, s, u0, u1).unwrap();
            let cf = closed_form_constants(&p);
            for n in 0..=50u64 {
                assert_eq!(reconstruct_term(&cf, n).unwrap(), nth_term(&p, n), "{p} n={n}");
            }
        }
    }

    #[test]
    fn reconstruction_examples() {
        let cf = closed_form_constants(&fib());
        assert_eq!(reconstruct_term(&cf, 10).unwrap(), BigInt::from(55));
        assert_eq!(reconstruct_term(&cf, 0).unwrap(), BigInt::from(0));
        let p = RecurrenceParams::new(1, -2, 0, 1).unwrap();
        let cf = closed_form_constants(&p);
        assert_eq!(reconstruct_term(&cf, 6).unwrap(), BigInt::from(5));
    }

    #[test]
    fn reconstruction_with_square_discriminant() {
        // D = 17² … not: (3, −2) has D = 1, a perfect square; the split ring
        // must still reconstruct exactly.
        let p = RecurrenceParams::new(3, -2, 0, 1).unwrap();
        let cf = closed_form_constants(&p);
        assert_eq!(cf.disc, BigInt::one());
        for n in 0..=40u64 {
            assert_eq!(reconstruct_term(&cf, n).unwrap(), nth_term(&p, n));
        }
    }

    #[test]
    fn shift_identity_fixtures() {
        // Fibonacci m=5, k=2
        assert!(verify_shift_identity(&fib(), 5, 2).unwrap());
        // k = 0: both sides vanish (t₀ = 0)
        assert!(verify_shift_identity(&fib(), 9, 0).unwrap());
        // Lucas-type seeds, m = k: a·(α−β) = 1
        let p = RecurrenceParams::lucas(1, -2).unwrap();
        for m in 0..=12u64 {
            assert!(verify_shift_identity(&p, m, m).unwrap());
        }
    }

    #[test]
    fn shift_identity_errors() {
        assert!(matches!(
            verify_shift_identity(&fib(), 3, 5),
            Err(Error::InvalidArgument(_))
        ));
        let deg = RecurrenceParams::new(0, 1, 0, 1).unwrap();
        assert!(matches!(verify_shift_identity(&deg, 5, 2), Err(Error::Degenerate { .. })));
    }

    #[test]
    fn shift_identity_randomized() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
        let mut checked = 0;
        while checked < 100 {
            let r = rng.random_range(-6i64..=6);
            let s = rng.random_range(-6i64..=6);
            let u0 = rng.random_range(-5i64..=5);
            let u1 = rng.random_range(-5i64..=5);
            let Ok(p) = RecurrenceParams::new(r, s, u0, u1) else { continue };
            if !p.is_nondegenerate() {
                continue;
            }
            let m = rng.random_range(0u64..=60);
            let shift = rng.random_range(0u64..=m);
            assert!(verify_shift_identity(&p, m, shift).unwrap(), "{p} m={m} k={shift}");
            checked += 1;
        }
    }
}
