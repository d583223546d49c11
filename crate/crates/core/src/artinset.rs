//! Membership counting in multiplicative subgroups: for which primes p does
//! b lie in the cyclic group generated by a modulo p?  Provides the single-
//! prime predicate, segmented counts over p ≤ x (integer and rational-pair
//! forms), and greatest-prime-factor windows of aⁿ − b.

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::arith::{
    self, greatest_prime_factor, is_prime_u64, mulmod_u64, powmod_u64, primes_in_range,
    reduce_i64, FactorBudget, FactorTable, Factorizer, GpfOutcome,
};
use crate::error::{Error, Result};
use crate::recurrence::RecurrenceParams;

/// True iff b mod p lies in ⟨a mod p⟩, i.e. aⁿ ≡ b (mod p) for some n ≥ 0.
///
/// Since the multiplicative group mod p is cyclic this is equivalent to
/// ord_p(b) | ord_p(a), which needs only the factorization of p − 1.
pub fn in_subgroup(a: i64, b: i64, p: u64) -> Result<bool> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime { n: p });
    }
    let ar = reduce_i64(a, p);
    if ar == 0 {
        return Err(Error::DividesModulus { value: a.to_string(), p });
    }
    let br = reduce_i64(b, p);
    if br == 0 {
        return Err(Error::DividesModulus { value: b.to_string(), p });
    }
    let distinct: Vec<u64> = arith::factor_u64(p - 1).into_iter().map(|(q, _)| q).collect();
    Ok(member_with_distinct(ar, br, p, &distinct))
}

fn member_with_distinct(a: u64, b: u64, p: u64, distinct: &[u64]) -> bool {
    let ord_a = arith::order_with_distinct_primes(a, p, distinct);
    let ord_b = arith::order_with_distinct_primes(b, p, distinct);
    ord_a % ord_b == 0
}

/// Tally over the primes in a half-open window [lo, hi).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArtinWindow {
    pub lo: u64,
    pub hi: u64,
    /// Primes where the membership predicate holds.
    pub count: u64,
    /// Primes dividing one of the defining integers, skipped.
    pub excluded: u64,
    /// Ascending member primes when collection was requested.
    pub primes: Option<Vec<u64>>,
}

impl ArtinWindow {
    /// Combine tallies over adjacent windows.
    pub fn merge(a: &ArtinWindow, b: &ArtinWindow) -> Result<ArtinWindow> {
        let (first, second) = if a.lo <= b.lo { (a, b) } else { (b, a) };
        if first.hi != second.lo {
            return Err(Error::InvalidArgument(format!(
                "windows [{},{}) and [{},{}) are not adjacent",
                first.lo, first.hi, second.lo, second.hi
            )));
        }
        let primes = match (&first.primes, &second.primes) {
            (Some(x), Some(y)) => {
                let mut all = x.clone();
                all.extend_from_slice(y);
                Some(all)
            }
            _ => None,
        };
        Ok(ArtinWindow {
            lo: first.lo,
            hi: second.hi,
            count: first.count + second.count,
            excluded: first.excluded + second.excluded,
            primes,
        })
    }
}

/// Count report over all primes p ≤ x.
#[derive(Debug, Clone, PartialEq)]
pub struct ArtinReport {
    pub x: u64,
    pub count: u64,
    pub excluded: u64,
    pub primes: Option<Vec<u64>>,
    /// count / ln x, the natural comparison scale (None for x < 2).
    pub log_x_ratio: Option<f64>,
}

fn report_from_window(x: u64, w: ArtinWindow) -> ArtinReport {
    let log_x_ratio = (x >= 2).then(|| w.count as f64 / (x as f64).ln());
    ArtinReport { x, count: w.count, excluded: w.excluded, primes: w.primes, log_x_ratio }
}

const SEGMENT: u64 = 1 << 17;

/// Shared segmented scan: `residues(p)` yields the pair to test mod p, or
/// None when p divides a defining integer (tallied as excluded). Factoring
/// p − 1 is amortized by a per-segment factor table.
fn scan_window(
    lo: u64,
    hi: u64,
    collect: bool,
    mut residues: impl FnMut(u64) -> Option<(u64, u64)>,
) -> ArtinWindow {
    let mut count = 0u64;
    let mut excluded = 0u64;
    let mut primes = collect.then(Vec::new);
    let mut seg_lo = lo.max(2);
    while seg_lo < hi {
        let seg_hi = (seg_lo + SEGMENT).min(hi);
        let table = FactorTable::build(seg_lo - 1, seg_hi);
        for p in primes_in_range(seg_lo, seg_hi) {
            match residues(p) {
                None => excluded += 1,
                Some((a, b)) => {
                    if member_with_distinct(a, b, p, table.factors(p - 1)) {
                        count += 1;
                        if let Some(list) = &mut primes {
                            list.push(p);
                        }
                    }
                }
            }
        }
        seg_lo = seg_hi;
    }
    ArtinWindow { lo, hi, count, excluded, primes }
}

fn validate_integer_pair(a: i64, b: i64) -> Result<()> {
    if a.unsigned_abs() <= 1 {
        return Err(Error::InvalidArgument(format!(
            "base a = {a} must have |a| > 1 (powers of ±1 generate nothing)"
        )));
    }
    if b == 0 {
        return Err(Error::InvalidArgument("target b must be nonzero".into()));
    }
    Ok(())
}

/// Membership tally for integer (a, b) over primes in [lo, hi).
pub fn artin_count_window(a: i64, b: i64, lo: u64, hi: u64, collect: bool) -> Result<ArtinWindow> {
    validate_integer_pair(a, b)?;
    Ok(scan_window(lo, hi, collect, |p| {
        let ar = reduce_i64(a, p);
        let br = reduce_i64(b, p);
        (ar != 0 && br != 0).then_some((ar, br))
    }))
}

/// Number of primes p ≤ x, p ∤ ab, with b in the subgroup generated by a.
pub fn artin_count(a: i64, b: i64, x: u64, collect: bool) -> Result<ArtinReport> {
    let w = artin_count_window(a, b, 2, x.saturating_add(1), collect)?;
    Ok(report_from_window(x, w))
}

fn validate_rational_pair(a1: i64, a2: i64, b1: i64, b2: i64) -> Result<()> {
    if a2 <= 0 || b2 <= 0 {
        return Err(Error::InvalidArgument("denominators must be positive".into()));
    }
    if a1 == 0 || b1 == 0 {
        return Err(Error::InvalidArgument("numerators must be nonzero".into()));
    }
    if num_integer::gcd(a1, a2) != 1 || num_integer::gcd(b1, b2) != 1 {
        return Err(Error::InvalidArgument(
            "fractions must be in lowest terms (coprime numerator and denominator)".into(),
        ));
    }
    if a1.unsigned_abs() == a2.unsigned_abs() {
        return Err(Error::InvalidArgument("base a1/a2 must have absolute value ≠ 1".into()));
    }
    Ok(())
}

/// Rational-pair variant over [lo, hi): tests b1/b2 ∈ ⟨a1/a2⟩ mod p, with
/// inverses via Fermat; primes dividing a1·a2·b1·b2 are excluded.
pub fn artin_count_rational_window(
    a1: i64,
    a2: i64,
    b1: i64,
    b2: i64,
    lo: u64,
    hi: u64,
    collect: bool,
) -> Result<ArtinWindow> {
    validate_rational_pair(a1, a2, b1, b2)?;
    Ok(scan_window(lo, hi, collect, |p| {
        let a1r = reduce_i64(a1, p);
        let a2r = reduce_i64(a2, p);
        let b1r = reduce_i64(b1, p);
        let b2r = reduce_i64(b2, p);
        if a1r == 0 || a2r == 0 || b1r == 0 || b2r == 0 {
            return None;
        }
        let a = mulmod_u64(a1r, powmod_u64(a2r, p - 2, p), p);
        let b = mulmod_u64(b1r, powmod_u64(b2r, p - 2, p), p);
        Some((a, b))
    }))
}

/// Number of primes p ≤ x, p ∤ a1a2b1b2, with b1/b2 in ⟨a1/a2⟩ mod p.
/// With a2 = b2 = 1 this reduces exactly to [`artin_count`].
pub fn artin_count_rational(
    a1: i64,
    a2: i64,
    b1: i64,
    b2: i64,
    x: u64,
    collect: bool,
) -> Result<ArtinReport> {
    let w = artin_count_rational_window(a1, a2, b1, b2, 2, x.saturating_add(1), collect)?;
    Ok(report_from_window(x, w))
}

// ---------------------------------------------------------------------------
// greatest prime factors of aⁿ − b over an index window

#[derive(Debug, Clone)]
pub struct GpfEntry {
    pub n: u64,
    /// aⁿ − b.
    pub value: BigInt,
    pub gpf: GpfOutcome,
    /// Reference growth curve at n (None below n = 3).
    pub curve: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct GpfWindowReport {
    pub entries: Vec<GpfEntry>,
    /// Distinct certified greatest-prime-factor values among resolved entries.
    pub distinct_resolved: u64,
    /// Resolved gpf values shared by more than one index.
    pub collisions: Vec<(BigUint, Vec<u64>)>,
    /// Indices where aⁿ − b = 0, skipped.
    pub zero_indices: Vec<u64>,
    /// Entries whose factorization the budget could not complete.
    pub unresolved: u64,
}

/// Greatest prime factor of aⁿ − b for n_hi − y ≤ n ≤ n_hi.
pub fn gpf_window(a: i64, b: i64, n_hi: u64, y: u64, budget: &FactorBudget) -> Result<GpfWindowReport> {
    if a < 2 {
        return Err(Error::InvalidArgument(format!("base a = {a} must be at least 2")));
    }
    if y > n_hi {
        return Err(Error::InvalidArgument(format!(
            "window length y = {y} exceeds the top index {n_hi}"
        )));
    }
    u32::try_from(n_hi)
        .map_err(|_| Error::InvalidArgument("index window is astronomically large".into()))?;
    let fz = Factorizer::new(budget.clone())?;
    let big_a = BigInt::from(a);
    let big_b = BigInt::from(b);
    let mut entries = Vec::new();
    let mut zero_indices = Vec::new();
    let mut unresolved = 0u64;
    for n in (n_hi - y)..=n_hi {
        let value = big_a.pow(n as u32) - &big_b;
        if value.is_zero() {
            zero_indices.push(n);
            continue;
        }
        let gpf = greatest_prime_factor(&value, &fz);
        if !gpf.resolved {
            unresolved += 1;
        }
        entries.push(GpfEntry { n, value, gpf, curve: gpf_reference_curve(n) });
    }
    let mut groups: std::collections::BTreeMap<BigUint, Vec<u64>> = Default::default();
    for e in &entries {
        if e.gpf.resolved {
            groups.entry(e.gpf.value.clone()).or_default().push(e.n);
        }
    }
    let distinct_resolved = groups.len() as u64;
    let collisions = groups.into_iter().filter(|(_, v)| v.len() > 1).collect();
    Ok(GpfWindowReport { entries, distinct_resolved, collisions, zero_indices, unresolved })
}

/// The reference growth curve √n · exp(ln n / (104 · ln ln n)), defined for
/// n ≥ 3 (the iterated logarithm must be positive).
pub fn gpf_reference_curve(n: u64) -> Option<f64> {
    (n >= 3).then(|| {
        let ln = (n as f64).ln();
        (n as f64).sqrt() * (ln / (104.0 * ln.ln())).exp()
    })
}

/// The binary recurrence whose terms are aⁿ − b: characteristic roots a and
/// 1, so (r, s, u₀, u₁) = (a + 1, −a, 1 − b, a − b). Degenerate exactly when
/// b = 0 (the constant coefficient vanishes).
pub fn power_difference_params(a: i64, b: i64) -> Result<RecurrenceParams> {
    let r = a
        .checked_add(1)
        .ok_or_else(|| Error::InvalidArgument("base a too large to encode".into()))?;
    let u0 = 1i64
        .checked_sub(b)
        .ok_or_else(|| Error::InvalidArgument("offset b too large to encode".into()))?;
    let u1 = a
        .checked_sub(b)
        .ok_or_else(|| Error::InvalidArgument("inputs too large to encode".into()))?;
    RecurrenceParams::new(r, -a, u0, u1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recurrence::term_range;

    fn naive_member(a: u64, b: u64, p: u64) -> bool {
        let mut x = 1u64;
        loop {
            if x == b {
                return true;
            }
            x = x * a % p;
            if x == 1 {
                return false;
            }
        }
    }

    #[test]
    fn membership_fixtures() {
        assert!(in_subgroup(2, 3, 5).unwrap());
        assert!(!in_subgroup(2, 3, 7).unwrap());
        assert!(in_subgroup(4, 2, 7).unwrap());
        assert!(in_subgroup(2, 1, 7).unwrap()); // n = 0 is allowed
        assert!(matches!(in_subgroup(2, 3, 3), Err(Error::DividesModulus { .. })));
        assert!(matches!(in_subgroup(2, 3, 2), Err(Error::DividesModulus { .. })));
        assert!(matches!(in_subgroup(2, 3, 15), Err(Error::NotPrime { n: 15 })));
        // negative inputs reduce mod p
        assert_eq!(in_subgroup(-5, 3, 7).unwrap(), in_subgroup(2, 3, 7).unwrap());
    }

    #[test]
    fn membership_matches_enumeration() {
        for p in primes_in_range(2, 500) {
            for a in 2i64..=10 {
                let ar = reduce_i64(a, p);
                if ar == 0 {
                    continue;
                }
                let ord_a = arith::multiplicative_order(&BigInt::from(a), p).unwrap();
                for b in 2i64..=10 {
                    let br = reduce_i64(b, p);
                    if br == 0 {
                        continue;
                    }
                    let got = in_subgroup(a, b, p).unwrap();
                    assert_eq!(got, naive_member(ar, br, p), "a={a} b={b} p={p}");
                    // cross-check: membership ⟺ b^(ord_p(a)) ≡ 1
                    assert_eq!(got, powmod_u64(br, ord_a, p) == 1, "a={a} b={b} p={p}");
                }
            }
        }
    }

    #[test]
    fn membership_matches_power_hits() {
        // b ∈ ⟨a⟩ exactly when some aⁿ − b ≡ 0 with n ≤ ord_p(a)
        for p in primes_in_range(2, 500) {
            for (a, b) in [(2i64, 3i64), (2, 5), (3, 10), (10, 3)] {
                if reduce_i64(a, p) == 0 || reduce_i64(b, p) == 0 {
                    continue;
                }
                let ord = arith::multiplicative_order(&BigInt::from(a), p).unwrap();
                let br = reduce_i64(b, p);
                let hit = (0..ord).any(|n| powmod_u64(reduce_i64(a, p), n, p) == br);
                assert_eq!(in_subgroup(a, b, p).unwrap(), hit, "a={a} b={b} p={p}");
            }
        }
    }

    #[test]
    fn count_fixtures() {
        let rep = artin_count(2, 3, 20, true).unwrap();
        assert_eq!(rep.count, 4);
        assert_eq!(rep.primes.as_deref(), Some(&[5u64, 11, 13, 19][..]));
        assert_eq!(rep.excluded, 2); // p = 2 and p = 3

        let rep = artin_count(2, 3, 5, true).unwrap();
        assert_eq!(rep.count, 1);
        assert_eq!(rep.primes.as_deref(), Some(&[5u64][..]));

        let rep = artin_count(2, 3, 2, false).unwrap();
        assert_eq!(rep.count, 0);
        assert_eq!(rep.excluded, 1);
    }

    #[test]
    fn count_larger_windows() {
        let k = artin_count(2, 3, 1000, false).unwrap();
        assert_eq!(k.count, 97);
        let ratio = k.log_x_ratio.unwrap();
        assert!((ratio - 97.0 / 1000f64.ln()).abs() < 1e-12);
        assert!(ratio >= 1.0);
        assert_eq!(artin_count(2, 3, 100_000, false).unwrap().count, 5547);
    }

    #[test]
    fn count_monotone_in_x() {
        let mut prev = 0;
        for x in [50u64, 100, 200, 400, 800] {
            let c = artin_count(2, 3, x, false).unwrap().count;
            assert!(c >= prev);
            prev = c;
        }
    }

    #[test]
    fn window_merge_matches_full_scan() {
        let full = artin_count_window(2, 3, 2, 1001, true).unwrap();
        let left = artin_count_window(2, 3, 2, 500, true).unwrap();
        let right = artin_count_window(2, 3, 500, 1001, true).unwrap();
        assert_eq!(ArtinWindow::merge(&left, &right).unwrap(), full);
        assert_eq!(ArtinWindow::merge(&right, &left).unwrap(), full);
        let gap = artin_count_window(2, 3, 600, 1001, true).unwrap();
        assert!(ArtinWindow::merge(&left, &gap).is_err());
    }

    #[test]
    fn invalid_integer_pairs() {
        assert!(artin_count(1, 3, 10, false).is_err());
        assert!(artin_count(-1, 3, 10, false).is_err());
        assert!(artin_count(0, 3, 10, false).is_err());
        assert!(artin_count(2, 0, 10, false).is_err());
    }

    #[test]
    fn rational_reduces_to_integer_case() {
        let plain = artin_count(2, 3, 200, true).unwrap();
        let rational = artin_count_rational(2, 1, 3, 1, 200, true).unwrap();
        assert_eq!(plain, rational);
    }

    #[test]
    fn rational_fixture() {
        let rep = artin_count_rational(3, 2, 5, 1, 11, true).unwrap();
        assert_eq!(rep.count, 2);
        assert_eq!(rep.primes.as_deref(), Some(&[7u64, 11][..]));
    }

    #[test]
    fn rational_matches_enumeration() {
        let (a1, a2, b1, b2) = (3i64, 2i64, 5i64, 7i64);
        let rep = artin_count_rational(a1, a2, b1, b2, 100, true).unwrap();
        let mut want = Vec::new();
        for p in primes_in_range(2, 101) {
            let rs: Vec<u64> =
                [a1, a2, b1, b2].iter().map(|&v| reduce_i64(v, p)).collect();
            if rs.iter().any(|&v| v == 0) {
                continue;
            }
            let a = mulmod_u64(rs[0], powmod_u64(rs[1], p - 2, p), p);
            let b = mulmod_u64(rs[2], powmod_u64(rs[3], p - 2, p), p);
            if naive_member(a, b, p) {
                want.push(p);
            }
        }
        assert_eq!(rep.primes.as_deref(), Some(&want[..]));
    }

    #[test]
    fn invalid_rational_pairs() {
        assert!(artin_count_rational(4, 2, 3, 1, 10, false).is_err()); // gcd 2
        assert!(artin_count_rational(3, 2, 5, 10, 10, false).is_err()); // gcd 5
        assert!(artin_count_rational(2, 2, 3, 1, 10, false).is_err()); // |a| = 1
        assert!(artin_count_rational(3, -2, 5, 1, 10, false).is_err());
        assert!(artin_count_rational(3, 2, 0, 1, 10, false).is_err());
    }

    #[test]
    fn gpf_window_fixtures() {
        let rep = gpf_window(2, 3, 6, 2, &FactorBudget::default()).unwrap();
        let got: Vec<(u64, u64)> = rep
            .entries
            .iter()
            .map(|e| (e.n, u64::try_from(&e.gpf.value).unwrap()))
            .collect();
        assert_eq!(got, vec![(4, 13), (5, 29), (6, 61)]);
        assert_eq!(rep.distinct_resolved, 3);
        assert!(rep.collisions.is_empty());
        assert_eq!(rep.unresolved, 0);

        let rep = gpf_window(2, 1, 4, 2, &FactorBudget::default()).unwrap();
        let got: Vec<(u64, u64)> = rep
            .entries
            .iter()
            .map(|e| (e.n, u64::try_from(&e.gpf.value).unwrap()))
            .collect();
        assert_eq!(got, vec![(2, 3), (3, 7), (4, 5)]);
        assert_eq!(rep.distinct_resolved, 3);
    }

    #[test]
    fn gpf_window_zero_and_collisions() {
        // 2² − 4 = 0 is skipped and flagged
        let rep = gpf_window(2, 4, 3, 1, &FactorBudget::default()).unwrap();
        assert_eq!(rep.zero_indices, vec![2]);
        assert_eq!(rep.entries.len(), 1);
        assert_eq!(u64::try_from(&rep.entries[0].gpf.value).unwrap(), 2);

        // aⁿ − 0 always has greatest prime factor 2: one big collision group
        let rep = gpf_window(2, 0, 5, 2, &FactorBudget::default()).unwrap();
        assert_eq!(rep.distinct_resolved, 1);
        assert_eq!(rep.collisions.len(), 1);
        assert_eq!(rep.collisions[0].1, vec![3, 4, 5]);
    }

    #[test]
    fn gpf_reference_curve_values() {
        assert!(gpf_reference_curve(2).is_none());
        let c100 = gpf_reference_curve(100).unwrap();
        assert!((c100 - 10.294193862321722).abs() < 1e-9);
        // √n·exp(ln n/(104·ln ln n)) recomputed longhand
        let n = 1000f64;
        let want = n.sqrt() * (n.ln() / (104.0 * n.ln().ln())).exp();
        assert!((gpf_reference_curve(1000).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn power_difference_encoding() {
        let params = power_difference_params(2, 3).unwrap();
        let got = term_range(&params, 0, 20).unwrap();
        for (n, t) in got.iter().enumerate() {
            let want = BigInt::from(2).pow(n as u32) - 3;
            assert_eq!(*t, want, "n = {n}");
        }
        assert!(params.is_nondegenerate());
        // b = 0 collapses the second closed-form coefficient
        let degenerate = power_difference_params(5, 0).unwrap();
        assert!(!degenerate.is_nondegenerate());
    }
}
