//! Counting distinct prime divisors of term products ∏ u_n over an index
//! window, as a certified interval under a factoring budget, together with
//! the analytic floors and ceilings the counts are compared against.
//!
//! The count is exact when every term factors completely. When the budget
//! leaves composite cofactors, the report carries them explicitly:
//! `omega_certified` is then a true lower bound, and `omega_upper` adds, per
//! cofactor c, the most new primes it could possibly contain, namely
//! ⌊ln c / ln q⌋ with q the smallest value a hidden prime factor can take
//! (every prime below the trial bound has already been stripped).

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::arith::{self, ln_biguint, FactorBudget, Factorizer};
use crate::error::{Error, Result};
use crate::lucasdiv::{lucas_pair_mod, rank_of_apparition, LucasParams};
use crate::quadring::closed_form_constants;
use crate::recurrence::{dominant_root_abs, term_range, RecurrenceParams};

/// Factorization data for one term.
#[derive(Debug, Clone)]
pub struct TermFactors {
    pub n: u64,
    /// Distinct certified primes of |u_n|, ascending.
    pub primes: Vec<BigUint>,
    /// Composite part left unsplit by the budget.
    pub cofactor: Option<BigUint>,
    /// u_n = 0 (skipped in all counts).
    pub zero: bool,
}

/// Certified interval for ω(∏_{n=lo}^{hi} u_n), zero terms skipped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaReport {
    pub lo: u64,
    pub hi: u64,
    pub trial_bound: u64,
    /// Union of certified primes across the window.
    pub primes: BTreeSet<BigUint>,
    /// (term index, cofactor) pairs the budget left unsplit.
    pub unresolved: Vec<(u64, BigUint)>,
    /// Indices of zero terms.
    pub zero_terms: Vec<u64>,
}

impl OmegaReport {
    /// Number of distinct certified primes — a true lower bound for ω.
    pub fn omega_certified(&self) -> u64 {
        self.primes.len() as u64
    }

    pub fn omega_lower(&self) -> u64 {
        self.omega_certified()
    }

    /// Upper end of the interval: certified primes plus the maximum number of
    /// distinct primes the unresolved cofactors could hide.
    pub fn omega_upper(&self) -> u64 {
        let q = (self.trial_bound + 1).max(2) as f64;
        let hidden: u64 = self
            .unresolved
            .iter()
            .map(|(_, c)| (ln_biguint(c) / q.ln()).floor() as u64)
            .sum();
        self.omega_certified() + hidden
    }

    pub fn is_fully_resolved(&self) -> bool {
        self.unresolved.is_empty()
    }

    /// Merge reports over adjacent windows into one over the union.
    pub fn merge(a: &OmegaReport, b: &OmegaReport) -> Result<OmegaReport> {
        let (first, second) = if a.lo <= b.lo { (a, b) } else { (b, a) };
        if first.hi + 1 != second.lo {
            return Err(Error::InvalidArgument(format!(
                "windows [{},{}] and [{},{}] are not adjacent",
                first.lo, first.hi, second.lo, second.hi
            )));
        }
        if first.trial_bound != second.trial_bound {
            return Err(Error::InvalidArgument(
                "cannot merge reports built with different trial bounds".into(),
            ));
        }
        let mut primes = first.primes.clone();
        primes.extend(second.primes.iter().cloned());
        let mut unresolved = first.unresolved.clone();
        unresolved.extend(second.unresolved.iter().cloned());
        let mut zero_terms = first.zero_terms.clone();
        zero_terms.extend(second.zero_terms.iter().copied());
        Ok(OmegaReport {
            lo: first.lo,
            hi: second.hi,
            trial_bound: first.trial_bound,
            primes,
            unresolved,
            zero_terms,
        })
    }
}

// ---------------------------------------------------------------------------
// factoring engine

/// Factor every term u_lo … u_hi.
///
/// Lucas-shaped parameters (u₀ = 0, u₁ = 1, coprime, non-degenerate) take a
/// rank-sieve fast path: a prime p ≤ trial bound divides t_n exactly when its
/// rank of apparition divides n, and the exact power follows from the
/// valuation law, so the entire small-prime strip costs one rank computation
/// per prime instead of trial division per term. Remaining parts are factored
/// with primality tests and rho only.
pub fn factor_terms(
    params: &RecurrenceParams,
    lo: u64,
    hi: u64,
    fz: &Factorizer,
) -> Result<Vec<TermFactors>> {
    let terms = term_range(params, lo, hi)?;
    if params.u0() == 0 && params.u1() == 1 {
        if let Ok(lp) = LucasParams::new(params.r(), params.s()) {
            return lucas_factor_terms(&lp, lo, hi, &terms, fz);
        }
    }
    let mut out = Vec::with_capacity(terms.len());
    for (i, u) in terms.iter().enumerate() {
        let n = lo + i as u64;
        if u.is_zero() {
            out.push(TermFactors { n, primes: Vec::new(), cofactor: None, zero: true });
            continue;
        }
        let fac = fz.factorize(u);
        out.push(TermFactors {
            n,
            primes: fac.factors().keys().cloned().collect(),
            cofactor: fac.cofactor().cloned(),
            zero: false,
        });
    }
    Ok(out)
}

fn lucas_factor_terms(
    lp: &LucasParams,
    lo: u64,
    hi: u64,
    terms: &[num_bigint::BigInt],
    fz: &Factorizer,
) -> Result<Vec<TermFactors>> {
    let len = terms.len();
    let mut primes_per: Vec<Vec<BigUint>> = vec![Vec::new(); len];
    let mut rough: Vec<BigUint> = terms.iter().map(|t| t.magnitude().clone()).collect();
    let strip_from = lo.max(1);
    for &p in fz.trial_primes() {
        if arith::reduce_i64(lp.s(), p) == 0 {
            // gcd(r, s) = 1 makes t_n ≡ r^(n−1) ≢ 0 mod p for all n ≥ 1
            continue;
        }
        let rec = rank_of_apparition(lp, p)?;
        if rec.rank > hi {
            continue;
        }
        let mut v2_double: Option<u32> = None;
        let mut n = strip_from.div_ceil(rec.rank) * rec.rank;
        while n <= hi {
            let k = n / rec.rank;
            let v = if p == 2 && k % 2 == 0 {
                let base = *v2_double
                    .get_or_insert_with(|| valuation_of_term_mod(lp, 2, 2 * rec.rank));
                base + k.trailing_zeros() - 1
            } else if p == 2 {
                rec.valuation_at_rank
            } else {
                let mut vk = 0u32;
                let mut kk = k;
                while kk % p == 0 {
                    kk /= p;
                    vk += 1;
                }
                rec.valuation_at_rank + vk
            };
            let idx = (n - lo) as usize;
            let power = BigUint::from(p).pow(v);
            let (q, rem) = num_integer::Integer::div_rem(&rough[idx], &power);
            if !rem.is_zero() {
                return Err(Error::Internal(format!(
                    "valuation law predicted {p}^{v} | t_{n} for {lp}, but it does not divide"
                )));
            }
            rough[idx] = q;
            primes_per[idx].push(BigUint::from(p));
            n += rec.rank;
        }
    }
    let mut out = Vec::with_capacity(len);
    for (i, mut primes) in primes_per.into_iter().enumerate() {
        let n = lo + i as u64;
        if terms[i].is_zero() {
            out.push(TermFactors { n, primes: Vec::new(), cofactor: None, zero: true });
            continue;
        }
        let mut cofactor = None;
        if !rough[i].is_one() {
            let fac = fz.factorize_rough(&rough[i]);
            primes.extend(fac.factors().keys().cloned());
            cofactor = fac.cofactor().cloned();
        }
        primes.sort();
        out.push(TermFactors { n, primes, cofactor, zero: false });
    }
    Ok(out)
}

/// v_p(t_idx) via modular doubling (used for the p = 2, even-k law).
fn valuation_of_term_mod(lp: &LucasParams, p: u64, idx: u64) -> u32 {
    let mut v = 0u32;
    loop {
        let next = v + 1;
        let divisible = match p.checked_pow(next) {
            Some(m) => lucas_pair_mod(lp.r(), lp.s(), idx, m).0 == 0,
            None => {
                let m = BigUint::from(p).pow(next);
                crate::lucasdiv::lucas_term_mod_big(lp.r(), lp.s(), idx, &m).is_zero()
            }
        };
        if divisible {
            v = next;
        } else {
            return v;
        }
    }
}

/// Fold per-term factor data into a window report.
pub fn fold_report(lo: u64, hi: u64, trial_bound: u64, terms: &[TermFactors]) -> OmegaReport {
    let mut primes = BTreeSet::new();
    let mut unresolved = Vec::new();
    let mut zero_terms = Vec::new();
    for t in terms {
        if t.zero {
            zero_terms.push(t.n);
            continue;
        }
        primes.extend(t.primes.iter().cloned());
        if let Some(c) = &t.cofactor {
            unresolved.push((t.n, c.clone()));
        }
    }
    OmegaReport { lo, hi, trial_bound, primes, unresolved, zero_terms }
}

/// ω interval for ∏_{n=1}^{n_max} u_n of a non-degenerate sequence.
pub fn omega_product(
    params: &RecurrenceParams,
    n_max: u64,
    budget: &FactorBudget,
) -> Result<OmegaReport> {
    omega_product_range(params, 1, n_max, budget)
}

/// Window variant of [`omega_product`] (building block for sharding).
pub fn omega_product_range(
    params: &RecurrenceParams,
    lo: u64,
    hi: u64,
    budget: &FactorBudget,
) -> Result<OmegaReport> {
    params.require_nondegenerate()?;
    let fz = Factorizer::new(budget.clone())?;
    let terms = factor_terms(params, lo, hi, &fz)?;
    Ok(fold_report(lo, hi, budget.trial_bound, &terms))
}

/// Certified count and upper bound for every prefix ∏_{n=1}^{N}, N ≤ n_max,
/// from a single factoring pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixCount {
    pub n: u64,
    pub omega_certified: u64,
    pub omega_upper: u64,
    pub fully_resolved: bool,
}

pub fn prefix_counts(
    params: &RecurrenceParams,
    n_max: u64,
    budget: &FactorBudget,
) -> Result<Vec<PrefixCount>> {
    params.require_nondegenerate()?;
    let fz = Factorizer::new(budget.clone())?;
    let terms = factor_terms(params, 1, n_max, &fz)?;
    let q = (budget.trial_bound + 1).max(2) as f64;
    let mut primes: BTreeSet<BigUint> = BTreeSet::new();
    let mut hidden = 0u64;
    let mut resolved = true;
    let mut out = Vec::with_capacity(terms.len());
    for t in &terms {
        if !t.zero {
            primes.extend(t.primes.iter().cloned());
            if let Some(c) = &t.cofactor {
                hidden += (ln_biguint(c) / q.ln()).floor() as u64;
                resolved = false;
            }
        }
        out.push(PrefixCount {
            n: t.n,
            omega_certified: primes.len() as u64,
            omega_upper: primes.len() as u64 + hidden,
            fully_resolved: resolved,
        });
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// floors and ceilings

/// The linear floor (1 − 1/√2 − eps)·N.
pub fn conditional_floor(n: u64, eps: f64) -> f64 {
    (1.0 - std::f64::consts::FRAC_1_SQRT_2 - eps) * n as f64
}

/// N/ln N, a certified-count floor shape for prime divisors of Lucas
/// products; defined for N ≥ 2.
pub fn prime_count_floor_n_over_log_n(n: u64) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument("N/ln N floor needs N ≥ 2".into()));
    }
    Ok(n as f64 / (n as f64).ln())
}

/// Upper bound for ω(∏_{n≤N} u_n) from term growth: the product is at most
/// (|a|+|b|)^N · |α|^(N(N+1)/2) in absolute value, so ω cannot exceed the
/// number of initial primes whose product first reaches that size.
pub fn growth_upper_bound(params: &RecurrenceParams, n_max: u64) -> Result<u64> {
    params.require_nondegenerate()?;
    let cf = closed_form_constants(params);
    let ab = cf.a.abs_f64() + cf.b.abs_f64();
    let alpha = dominant_root_abs(params).value;
    let bound = n_max as f64 * ab.ln() + alpha.ln() * (n_max as f64) * (n_max as f64 + 1.0) / 2.0;
    Ok(arith::primorial_threshold(bound))
}

/// (c₁, c₂) with c₁ ≤ ω(∏_{n≤N})/(N·ln N) ≤ c₂ over the sampled prefixes,
/// using the certified interval ends. Samples must all be ≥ 3.
pub fn omega_normalized_window(
    params: &RecurrenceParams,
    samples: &[u64],
    budget: &FactorBudget,
) -> Result<(f64, f64)> {
    if samples.is_empty() || samples.iter().any(|&n| n < 3) {
        return Err(Error::InvalidArgument(
            "normalized window needs non-empty samples, all ≥ 3".into(),
        ));
    }
    let n_max = *samples.iter().max().unwrap();
    let prefixes = prefix_counts(params, n_max, budget)?;
    let mut c1 = f64::INFINITY;
    let mut c2 = f64::NEG_INFINITY;
    for &n in samples {
        let pc = &prefixes[(n - 1) as usize];
        debug_assert_eq!(pc.n, n);
        let scale = n as f64 * (n as f64).ln();
        c1 = c1.min(pc.omega_certified as f64 / scale);
        c2 = c2.max(pc.omega_upper as f64 / scale);
    }
    Ok((c1, c2))
}
