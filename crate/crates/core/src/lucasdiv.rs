//! Lucas sequences t_n = (α^n − β^n)/(α − β) for coprime (r, s): rank of
//! apparition, p-adic valuation laws, and primitive divisors.
//!
//! For a prime p ∤ s the *rank of apparition* ℓ(p) is the least n ≥ 1 with
//! p | t_n; it exists, divides p − (D/p) for odd p ∤ D (and equals p when
//! p | D), and p | t_n ⟺ ℓ(p) | n. The p-adic valuation of t_n is then given
//! by a closed law in terms of v_p(t_ℓ) (and v₂(t_{2ℓ}) when p = 2), so
//! valuations of astronomically large terms are computed without ever
//! materializing them.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::arith::{self, divisors_u64, is_prime_u64, Factorizer};
use crate::error::{Error, Result};
use crate::recurrence::{dominant_root_abs, nth_term, RecurrenceParams};

/// Validated Lucas parameters: gcd(r, s) = 1, D ≠ 0, non-degenerate,
/// seeds fixed at (t₀, t₁) = (0, 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LucasParams {
    params: RecurrenceParams,
}

impl LucasParams {
    pub fn new(r: i64, s: i64) -> Result<LucasParams> {
        if r.unsigned_abs().gcd(&s.unsigned_abs()) != 1 {
            return Err(Error::NotCoprime { r, s });
        }
        let params = RecurrenceParams::lucas(r, s)?;
        // Degenerate pairs have t_n = 0 infinitely often, so ranks and
        // valuations would be ill-defined.
        params.require_nondegenerate()?;
        Ok(LucasParams { params })
    }

    pub fn r(&self) -> i64 {
        self.params.r()
    }

    pub fn s(&self) -> i64 {
        self.params.s()
    }

    pub fn params(&self) -> &RecurrenceParams {
        &self.params
    }

    pub fn discriminant(&self) -> i128 {
        self.params.discriminant()
    }

    /// Exact t_n.
    pub fn term(&self, n: u64) -> BigInt {
        nth_term(&self.params, n)
    }

    /// |α| of the dominant root.
    pub fn alpha_abs(&self) -> f64 {
        dominant_root_abs(&self.params).value
    }
}

impl std::fmt::Display for LucasParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "t(r={}, s={})", self.r(), self.s())
    }
}

// ---------------------------------------------------------------------------
// modular Lucas pairs

#[inline]
fn addmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

#[inline]
fn submod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + m as u128 - b as u128) % m as u128) as u64
}

/// (t_n mod m, t_{n+1} mod m) by binary doubling:
/// t_{2k} = t_k·(2t_{k+1} − r·t_k), t_{2k+1} = t_{k+1}² + s·t_k².
pub(crate) fn lucas_pair_mod(r: i64, s: i64, n: u64, m: u64) -> (u64, u64) {
    if m == 1 {
        return (0, 0);
    }
    let rr = arith::reduce_i64(r, m);
    let ss = arith::reduce_i64(s, m);
    let mul = |a, b| arith::mulmod_u64(a, b, m);
    let (mut a, mut b) = (0u64, 1u64);
    if n == 0 {
        return (a, b);
    }
    for i in (0..u64::BITS as u64 - u64::from(n.leading_zeros())).rev() {
        let t2k = mul(a, submod(addmod(b, b, m), mul(rr, a), m));
        let t2k1 = addmod(mul(b, b), mul(ss, mul(a, a)), m);
        if (n >> i) & 1 == 1 {
            a = t2k1;
            b = addmod(mul(rr, t2k1), mul(ss, t2k), m);
        } else {
            a = t2k;
            b = t2k1;
        }
    }
    (a, b)
}

/// t_n mod m for arbitrary-precision m (used when p^k or p exceeds u64).
pub(crate) fn lucas_term_mod_big(r: i64, s: i64, n: u64, m: &BigUint) -> BigUint {
    let m_int = BigInt::from(m.clone());
    let rr = BigInt::from(r).mod_floor(&m_int);
    let ss = BigInt::from(s).mod_floor(&m_int);
    let (mut a, mut b) = (BigInt::zero(), BigInt::from(1).mod_floor(&m_int));
    if n == 0 {
        return BigUint::zero();
    }
    for i in (0..u64::BITS as u64 - u64::from(n.leading_zeros())).rev() {
        let t2k = (&a * (&b + &b - &rr * &a)).mod_floor(&m_int);
        let t2k1 = (&b * &b + &ss * &a * &a).mod_floor(&m_int);
        if (n >> i) & 1 == 1 {
            let t2k2 = (&rr * &t2k1 + &ss * &t2k).mod_floor(&m_int);
            a = t2k1;
            b = t2k2;
        } else {
            a = t2k;
            b = t2k1;
        }
    }
    a.to_biguint().expect("mod_floor result is non-negative")
}

// ---------------------------------------------------------------------------
// rank of apparition

/// The rank of apparition ℓ(p) and the valuation v_p(t_ℓ).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankRecord {
    pub p: u64,
    pub rank: u64,
    /// v_p(t_rank) ≥ 1.
    pub valuation_at_rank: u32,
}

/// Least ℓ ≥ 1 with p | t_ℓ. Requires p prime and p ∤ s.
pub fn rank_of_apparition(lp: &LucasParams, p: u64) -> Result<RankRecord> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime { n: p });
    }
    if arith::reduce_i64(lp.s(), p) == 0 {
        return Err(Error::RankUndefined { p, s: lp.s() });
    }
    let rank = find_rank(lp, p)?;
    let valuation_at_rank = valuation_at_index(lp, p, rank);
    debug_assert!(valuation_at_rank >= 1);
    Ok(RankRecord { p, rank, valuation_at_rank })
}

fn find_rank(lp: &LucasParams, p: u64) -> Result<u64> {
    if p == 2 {
        // s is odd here (2 ∤ s). t₂ = r; if r is odd, t₃ = r² + s is even.
        return Ok(if lp.r() % 2 == 0 { 2 } else { 3 });
    }
    let d_mod = {
        let d = BigInt::from(lp.discriminant());
        arith::mod_floor_u64(&d, p)
    };
    // ℓ(p) divides p − (D/p), reading the symbol as 0 when p | D (then ℓ = p).
    let e = match arith::legendre_symbol(&BigInt::from(d_mod), p)? {
        0 => p,
        1 => p - 1,
        _ => p + 1,
    };
    for div in divisors_u64(e) {
        if lucas_pair_mod(lp.r(), lp.s(), div, p).0 == 0 {
            return Ok(div);
        }
    }
    // Unreachable for prime p ∤ 2s; scan as a defensive fallback.
    for n in 1..=p + 1 {
        if lucas_pair_mod(lp.r(), lp.s(), n, p).0 == 0 {
            return Ok(n);
        }
    }
    Err(Error::Internal(format!("no rank of apparition for p = {p} in {lp}")))
}

/// v_p(t_idx) via modular doubling with increasing prime-power moduli.
fn valuation_at_index(lp: &LucasParams, p: u64, idx: u64) -> u32 {
    let mut v = 0u32;
    loop {
        let next = v + 1;
        let divisible = match p.checked_pow(next) {
            Some(m) => lucas_pair_mod(lp.r(), lp.s(), idx, m).0 == 0,
            None => {
                let m = BigUint::from(p).pow(next);
                lucas_term_mod_big(lp.r(), lp.s(), idx, &m).is_zero()
            }
        };
        if divisible {
            v = next;
        } else {
            return v;
        }
    }
}

/// Exact p-adic valuation v_p(t_n) by the closed law; n ≥ 1.
///
/// With ℓ = ℓ(p) and n = ℓ·k: zero unless ℓ | n; for odd p it is
/// v_p(t_ℓ) + v_p(k); for p = 2 it is v₂(t_ℓ) for odd k and
/// v₂(t_{2ℓ}) + v₂(k) − 1 for even k.
pub fn lucas_valuation(lp: &LucasParams, p: u64, n: u64) -> Result<u32> {
    if n == 0 {
        return Err(Error::InvalidArgument("t_0 = 0 has no finite valuation".into()));
    }
    let rec = rank_of_apparition(lp, p)?;
    if n % rec.rank != 0 {
        return Ok(0);
    }
    let k = n / rec.rank;
    if p == 2 {
        if k % 2 == 1 {
            Ok(rec.valuation_at_rank)
        } else {
            let v_2l = valuation_at_index(lp, 2, 2 * rec.rank);
            Ok(v_2l + k.trailing_zeros() - 1)
        }
    } else {
        let mut vk = 0u32;
        let mut k = k;
        while k % p == 0 {
            k /= p;
            vk += 1;
        }
        Ok(rec.valuation_at_rank + vk)
    }
}

/// Check ℓ(p) against its growth window: ℓ ≤ p + 1 always, and
/// ℓ ≥ (ln p − (ln 2)/2)/ln|α| because |t_ℓ| ≥ p forces |α|^ℓ·√2 ≥ p.
pub fn rank_within_growth_bounds(lp: &LucasParams, rec: &RankRecord) -> bool {
    if rec.rank > rec.p + 1 {
        return false;
    }
    let lower = ((rec.p as f64).ln() - std::f64::consts::LN_2 / 2.0) / lp.alpha_abs().ln();
    rec.rank as f64 >= lower - 1e-9
}

// ---------------------------------------------------------------------------
// primitive divisors

/// Primes whose rank of apparition is exactly n: p | t_n, p ∤ D, and
/// p ∤ t_{n/q} for every prime q | n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimitiveDivisors {
    pub n: u64,
    /// Exact t_n.
    pub term: BigInt,
    pub primes: BTreeSet<BigUint>,
    /// Composite part of t_n the budget could not split; its prime factors
    /// are unclassified (neither counted nor excluded).
    pub unresolved: Option<BigUint>,
}

pub fn primitive_divisors(
    lp: &LucasParams,
    n: u64,
    fz: &Factorizer,
) -> Result<PrimitiveDivisors> {
    if n == 0 {
        return Err(Error::InvalidArgument("primitive divisors start at index 1".into()));
    }
    let term = lp.term(n);
    let fac = fz.factorize(&term);
    let disc = BigInt::from(lp.discriminant());
    let proper: Vec<u64> =
        arith::factor_u64(n).iter().map(|(q, _)| n / q).collect();
    let mut primes = BTreeSet::new();
    for p in fac.factors().keys() {
        if (&disc % BigInt::from(p.clone())).is_zero() {
            continue;
        }
        let divides_proper = proper.iter().any(|&idx| match p.to_u64() {
            Some(p64) => lucas_pair_mod(lp.r(), lp.s(), idx, p64).0 == 0,
            None => lucas_term_mod_big(lp.r(), lp.s(), idx, p).is_zero(),
        });
        if !divides_proper {
            primes.insert(p.clone());
        }
    }
    Ok(PrimitiveDivisors { n, term, primes, unresolved: fac.cofactor().cloned() })
}
