//! Integer primitives: primality testing, budgeted factorization,
//! multiplicative orders, quadratic symbols, and prime-sum thresholds.

pub mod rho;
pub mod sieve;

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use sieve::{primes_in_range, sieve_primes, FactorTable};

/// Miller–Rabin witnesses that are deterministic for every n < 2^64.
const MR_BASES_U64: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Default Miller–Rabin rounds for inputs beyond 2^64 (error < 4^−32).
pub const DEFAULT_PRIMALITY_ROUNDS: u32 = 32;

// ---------------------------------------------------------------------------
// small modular arithmetic

#[inline]
pub(crate) fn mulmod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn powmod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod_u64(acc, base, m);
        }
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// n mod m without allocating, for arbitrary-size n.
pub(crate) fn mod_u64(n: &BigUint, m: u64) -> u64 {
    debug_assert!(m > 0);
    let mm = m as u128;
    let digits: Vec<u64> = n.iter_u64_digits().collect();
    let mut r: u64 = 0;
    for &d in digits.iter().rev() {
        r = ((((r as u128) << 64) | d as u128) % mm) as u64;
    }
    r
}

/// a mod m mapped into [0, m) for signed a.
pub(crate) fn mod_floor_u64(a: &BigInt, m: u64) -> u64 {
    let r = mod_u64(a.magnitude(), m);
    if a.sign() == Sign::Minus && r != 0 {
        m - r
    } else {
        r
    }
}

/// i64 convenience wrapper for [`mod_floor_u64`].
pub(crate) fn reduce_i64(a: i64, m: u64) -> u64 {
    let r = (a.unsigned_abs()) % m;
    if a < 0 && r != 0 {
        m - r
    } else {
        r
    }
}

/// Natural log of a nonzero big integer, exact to f64 precision.
pub fn ln_biguint(n: &BigUint) -> f64 {
    debug_assert!(!n.is_zero());
    let bits = n.bits();
    if bits <= 53 {
        return (n.to_u64().unwrap() as f64).ln();
    }
    let shift = bits - 53;
    let top = (n >> shift).to_u64().unwrap() as f64;
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub(crate) fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

// ---------------------------------------------------------------------------
// primality

fn miller_rabin_u64(n: u64, base: u64) -> bool {
    // n odd, n > base ≥ 2
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    let mut x = powmod_u64(base, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mulmod_u64(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Deterministic primality for u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in MR_BASES_U64 {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    MR_BASES_U64.iter().all(|&b| miller_rabin_u64(n, b))
}

fn miller_rabin_big(n: &BigUint, base: &BigUint) -> bool {
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap();
    let d = &nm1 >> s;
    let mut x = base.modpow(&d, n);
    if x.is_one() || x == nm1 {
        return true;
    }
    for _ in 1..s {
        x = &x * &x % n;
        if x == nm1 {
            return true;
        }
    }
    false
}

/// Primality with the default confidence (deterministic below 2^64,
/// error < 4^−32 above). Negative numbers, 0 and 1 are not prime.
pub fn is_prime(n: &BigInt) -> bool {
    is_prime_with_rounds(n, DEFAULT_PRIMALITY_ROUNDS)
}

/// Primality with an explicit round count for the probabilistic regime.
/// Below 2^64 the answer is deterministic regardless of `rounds`.
pub fn is_prime_with_rounds(n: &BigInt, rounds: u32) -> bool {
    if n.sign() != Sign::Plus {
        return false;
    }
    let m = n.magnitude();
    if m.bits() <= 64 {
        return is_prime_u64(m.to_u64().unwrap());
    }
    for p in MR_BASES_U64 {
        if mod_u64(m, p) == 0 {
            return false;
        }
    }
    // Witnesses are derived from n itself so repeated calls agree.
    let mut state = m.iter_u64_digits().fold(m.bits(), |acc, d| acc ^ d.rotate_left(17));
    let words = m.bits().div_ceil(64) as usize;
    let three = BigUint::from(3u32);
    let span = m - &three; // bases drawn from [2, n−2] as 2 + (x mod (n−3))
    for _ in 0..rounds.max(1) {
        let digits: Vec<u64> = (0..words).map(|_| splitmix64(&mut state)).collect();
        let base = BigUint::new(digits.iter().flat_map(|d| [*d as u32, (d >> 32) as u32]).collect())
            % &span
            + BigUint::from(2u32);
        if !miller_rabin_big(m, &base) {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------------
// complete u64 factorization (for p − 1 style inputs)

/// Full factorization of n ≥ 1 as sorted (prime, exponent) pairs.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out: BTreeMap<u64, u32> = BTreeMap::new();
    if n <= 1 {
        return Vec::new();
    }
    for d in [2u64, 3, 5] {
        while n % d == 0 {
            *out.entry(d).or_insert(0) += 1;
            n /= d;
        }
    }
    let mut d = 7u64;
    while d <= 4096 && d * d <= n {
        while n % d == 0 {
            *out.entry(d).or_insert(0) += 1;
            n /= d;
        }
        d += 2;
    }
    let mut stack = Vec::new();
    if n > 1 {
        stack.push(n);
    }
    while let Some(c) = stack.pop() {
        if is_prime_u64(c) {
            *out.entry(c).or_insert(0) += 1;
        } else {
            let f = rho::brent_u64(c, u64::MAX)
                .expect("rho must split a u64 composite with an unbounded budget");
            stack.push(f);
            stack.push(c / f);
        }
    }
    out.into_iter().collect()
}

/// All divisors of n ≥ 1, ascending.
pub fn divisors_u64(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, e) in factor_u64(n) {
        let prev = divs.clone();
        let mut pe = 1u64;
        for _ in 0..e {
            pe *= p;
            divs.extend(prev.iter().map(|d| d * pe));
        }
    }
    divs.sort_unstable();
    divs
}

// ---------------------------------------------------------------------------
// orders and symbols

/// Multiplicative order of g modulo the prime p; g must not be ≡ 0.
pub fn multiplicative_order(g: &BigInt, p: u64) -> Result<u64> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime { n: p });
    }
    let g_red = mod_floor_u64(g, p);
    if g_red == 0 {
        return Err(Error::DividesModulus { value: g.to_string(), p });
    }
    if p == 2 {
        return Ok(1);
    }
    let distinct: Vec<u64> = factor_u64(p - 1).into_iter().map(|(q, _)| q).collect();
    Ok(order_with_distinct_primes(g_red, p, &distinct))
}

/// Order of g mod p given the distinct prime factors of p − 1.
/// Starts from p − 1 and strips every prime that still leaves g at 1.
pub(crate) fn order_with_distinct_primes(g: u64, p: u64, distinct: &[u64]) -> u64 {
    debug_assert!(g >= 1 && g < p);
    let mut m = p - 1;
    for &q in distinct {
        while m % q == 0 && powmod_u64(g, m / q, p) == 1 {
            m /= q;
        }
    }
    m
}

/// Jacobi symbol (a/n) for odd n ≥ 1.
pub(crate) fn jacobi_u64(mut a: u64, mut n: u64) -> i32 {
    debug_assert!(n % 2 == 1 && n >= 1);
    a %= n;
    let mut t = 1i32;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Legendre symbol (a/p) ∈ {−1, 0, 1} for an odd prime p.
pub fn legendre_symbol(a: &BigInt, p: u64) -> Result<i32> {
    if p == 2 || !is_prime_u64(p) {
        return Err(Error::NotPrime { n: p });
    }
    Ok(jacobi_u64(mod_floor_u64(a, p), p))
}

// ---------------------------------------------------------------------------
// budgeted factorization

/// Resource caps for factorization. Work stops at the caps and the remainder
/// is reported as an unresolved cofactor — never silently dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorBudget {
    /// Trial-divide by every prime up to this bound (inclusive).
    pub trial_bound: u64,
    /// Iteration cap per rho seed; eight fixed seeds are tried.
    pub rho_iterations: u64,
    /// Miller–Rabin rounds used on candidates beyond 2^64.
    pub primality_rounds: u32,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget { trial_bound: 10_000, rho_iterations: 200_000, primality_rounds: 32 }
    }
}

impl FactorBudget {
    pub fn validate(&self) -> Result<()> {
        if self.trial_bound < 1 || self.rho_iterations < 1 || self.primality_rounds < 1 {
            return Err(Error::InvalidArgument(
                "factor budget fields must all be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// A factorization `sign · ∏ p^e · cofactor` where every key of `factors` is
/// certified prime and `cofactor`, when present, is a composite whose prime
/// factors all exceed the trial bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredInteger {
    sign: i8,
    factors: BTreeMap<BigUint, u32>,
    cofactor: Option<BigUint>,
}

impl FactoredInteger {
    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// Certified prime factors with exponents, ascending by prime.
    pub fn factors(&self) -> &BTreeMap<BigUint, u32> {
        &self.factors
    }

    /// The unresolved composite part, if the budget ran out.
    pub fn cofactor(&self) -> Option<&BigUint> {
        self.cofactor.as_ref()
    }

    /// True when the factorization is complete.
    pub fn is_complete(&self) -> bool {
        self.cofactor.is_none()
    }

    /// Number of distinct certified primes.
    pub fn omega_certified(&self) -> u64 {
        self.factors.len() as u64
    }

    /// Exponent of p in the certified part (0 if absent).
    pub fn exponent_of(&self, p: &BigUint) -> u32 {
        self.factors.get(p).copied().unwrap_or(0)
    }

    /// Reassemble the original integer.
    pub fn value(&self) -> BigInt {
        if self.sign == 0 {
            return BigInt::zero();
        }
        let mut acc = BigUint::one();
        for (p, e) in &self.factors {
            acc *= p.pow(*e);
        }
        if let Some(c) = &self.cofactor {
            acc *= c;
        }
        let sign = if self.sign > 0 { Sign::Plus } else { Sign::Minus };
        BigInt::from_biguint(sign, acc)
    }
}

/// Reusable factorization context: validates the budget once and caches the
/// trial-division primes.
pub struct Factorizer {
    budget: FactorBudget,
    trial_primes: Vec<u64>,
}

impl Factorizer {
    pub fn new(budget: FactorBudget) -> Result<Factorizer> {
        budget.validate()?;
        let trial_primes = sieve_primes(budget.trial_bound);
        Ok(Factorizer { budget, trial_primes })
    }

    pub fn budget(&self) -> &FactorBudget {
        &self.budget
    }

    /// Primes up to the trial bound, ascending.
    pub fn trial_primes(&self) -> &[u64] {
        &self.trial_primes
    }

    pub fn factorize(&self, n: &BigInt) -> FactoredInteger {
        let sign = match n.sign() {
            Sign::Plus => 1,
            Sign::NoSign => 0,
            Sign::Minus => -1,
        };
        if sign == 0 {
            return FactoredInteger { sign, factors: BTreeMap::new(), cofactor: None };
        }
        let mut factors = BTreeMap::new();
        let mut cofactor = None;
        let m = self.trial_divide(n.magnitude().clone(), &mut factors);
        if !m.is_one() {
            self.split_rough(m, &mut factors, &mut cofactor);
        }
        FactoredInteger { sign, factors, cofactor }
    }

    /// Factor a positive integer already known to have no prime factor below
    /// the trial bound (skips trial division entirely).
    pub fn factorize_rough(&self, n: &BigUint) -> FactoredInteger {
        let mut factors = BTreeMap::new();
        let mut cofactor = None;
        if n.is_zero() {
            return FactoredInteger { sign: 0, factors, cofactor };
        }
        if !n.is_one() {
            self.split_rough(n.clone(), &mut factors, &mut cofactor);
        }
        FactoredInteger { sign: 1, factors, cofactor }
    }

    /// Strip every trial prime from m, recording exponents.
    fn trial_divide(&self, mut m: BigUint, factors: &mut BTreeMap<BigUint, u32>) -> BigUint {
        for &p in &self.trial_primes {
            if m.is_one() {
                break;
            }
            if mod_u64(&m, p) == 0 {
                let pb = BigUint::from(p);
                let mut e = 0u32;
                loop {
                    let (q, r) = m.div_rem(&pb);
                    if r.is_zero() {
                        m = q;
                        e += 1;
                    } else {
                        break;
                    }
                }
                factors.insert(pb, e);
            }
        }
        m
    }

    /// Split a trial-stripped value into primes and (possibly) one cofactor.
    fn split_rough(
        &self,
        m: BigUint,
        factors: &mut BTreeMap<BigUint, u32>,
        cofactor: &mut Option<BigUint>,
    ) {
        // Powers of two are always peeled so rho only ever sees odd input.
        let mut m = m;
        if m.is_even() {
            let tz = m.trailing_zeros().unwrap() as u32;
            *factors.entry(BigUint::from(2u32)).or_insert(0) += tz;
            m >>= tz;
        }
        let mut stack = Vec::new();
        if !m.is_one() {
            stack.push(m);
        }
        while let Some(c) = stack.pop() {
            if let Some(c64) = c.to_u64() {
                self.split_u64(c64, factors, cofactor);
                continue;
            }
            if is_prime_with_rounds(&BigInt::from(c.clone()), self.budget.primality_rounds) {
                *factors.entry(c).or_insert(0) += 1;
            } else if let Some(f) = rho::brent_big(&c, self.budget.rho_iterations) {
                stack.push(&c / &f);
                stack.push(f);
            } else {
                merge_cofactor(cofactor, c);
            }
        }
    }

    fn split_u64(
        &self,
        n: u64,
        factors: &mut BTreeMap<BigUint, u32>,
        cofactor: &mut Option<BigUint>,
    ) {
        let mut stack = vec![n];
        while let Some(c) = stack.pop() {
            if c == 1 {
                continue;
            }
            if is_prime_u64(c) {
                *factors.entry(BigUint::from(c)).or_insert(0) += 1;
            } else if let Some(f) = rho::brent_u64(c, self.budget.rho_iterations) {
                stack.push(f);
                stack.push(c / f);
            } else {
                merge_cofactor(cofactor, BigUint::from(c));
            }
        }
    }
}

fn merge_cofactor(cofactor: &mut Option<BigUint>, c: BigUint) {
    *cofactor = Some(match cofactor.take() {
        Some(existing) => existing * c,
        None => c,
    });
}

/// One-shot convenience wrapper around [`Factorizer`].
pub fn factorize(n: &BigInt, budget: &FactorBudget) -> Result<FactoredInteger> {
    Ok(Factorizer::new(budget.clone())?.factorize(n))
}

// ---------------------------------------------------------------------------
// greatest prime factor

/// Outcome of a greatest-prime-factor query.
///
/// When `resolved` is false the true answer is `max(value, P(cofactor))`
/// where P(cofactor) is unknown but exceeds the trial bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GpfOutcome {
    /// Largest certified prime factor; the conventional 1 for n ∈ {0, ±1}.
    pub value: BigUint,
    /// n was 0 or ±1 and `value` is the convention, not a prime factor.
    pub convention: bool,
    /// The factorization completed within budget.
    pub resolved: bool,
    /// Unfactored composite part, if any.
    pub cofactor: Option<BigUint>,
}

/// Greatest prime factor of n under the factorizer's budget, with
/// P(0) = P(1) = P(−1) = 1 by convention.
pub fn greatest_prime_factor(n: &BigInt, fz: &Factorizer) -> GpfOutcome {
    if n.magnitude() <= &BigUint::one() {
        return GpfOutcome {
            value: BigUint::one(),
            convention: true,
            resolved: true,
            cofactor: None,
        };
    }
    let fac = fz.factorize(n);
    let value = fac.factors().keys().next_back().cloned().unwrap_or_else(BigUint::one);
    GpfOutcome {
        value,
        convention: false,
        resolved: fac.is_complete(),
        cofactor: fac.cofactor().cloned(),
    }
}

// ---------------------------------------------------------------------------
// prime-sum threshold

/// Smallest k with ln(p₁) + … + ln(p_k) ≥ bound, i.e. the least k whose
/// primorial reaches e^bound. Returns 0 for bound ≤ 0. A 1e−9 slack absorbs
/// float rounding at exact boundaries.
pub fn primorial_threshold(bound: f64) -> u64 {
    const TOL: f64 = 1e-9;
    if !(bound > TOL) {
        return 0;
    }
    let mut sum = 0.0;
    let mut k = 0u64;
    let mut lo = 2u64;
    loop {
        let hi = lo + sieve::SEGMENT;
        for p in primes_in_range(lo, hi) {
            sum += (p as f64).ln();
            k += 1;
            if sum >= bound - TOL {
                return k;
            }
        }
        lo = hi;
    }
}
