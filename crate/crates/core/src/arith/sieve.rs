//! Segmented sieve of Eratosthenes and per-segment factor tables.
//!
//! Memory stays O(√limit + segment) regardless of the range sieved; only the
//! collected output grows with the range.

/// Segment width used by the streaming sieves.
pub(crate) const SEGMENT: u64 = 1 << 18;

/// All primes `p ≤ limit`, ascending.
pub fn sieve_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    primes_in_range(2, limit + 1)
}

/// Primes in the half-open interval `[lo, hi)`, ascending.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    if hi <= lo || hi < 3 {
        return Vec::new();
    }
    let root = (hi - 1).isqrt();
    let base = simple_sieve(root);
    let mut out = Vec::new();
    for &p in &base {
        if p >= lo && p < hi {
            out.push(p);
        }
    }
    let mut seg_lo = lo.max(root + 1);
    while seg_lo < hi {
        let seg_hi = (seg_lo + SEGMENT).min(hi);
        collect_segment(&base, seg_lo, seg_hi, &mut out);
        seg_lo = seg_hi;
    }
    out
}

/// Plain sieve for the base primes (≤ √hi, so always small).
fn simple_sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut p = 2usize;
    while p * p <= n {
        if !composite[p] {
            let mut m = p * p;
            while m <= n {
                composite[m] = true;
                m += p;
            }
        }
        p += 1;
    }
    (2..=n).filter(|&i| !composite[i]).map(|i| i as u64).collect()
}

/// Append the primes of `[lo, hi)` to `out`; requires lo > √(hi−1) so that
/// `base` covers every relevant prime.
fn collect_segment(base: &[u64], lo: u64, hi: u64, out: &mut Vec<u64>) {
    let len = (hi - lo) as usize;
    let mut composite = vec![false; len];
    for &p in base {
        if p.saturating_mul(p) >= hi {
            break;
        }
        let start = lo.div_ceil(p).max(p) * p;
        let mut m = start;
        while m < hi {
            composite[(m - lo) as usize] = true;
            m += p;
        }
    }
    for (i, c) in composite.iter().enumerate() {
        if !c {
            out.push(lo + i as u64);
        }
    }
}

/// Distinct prime factors of every integer in a half-open interval, built by
/// one sieve pass. Used to batch-factor `p − 1` over a segment of primes.
pub struct FactorTable {
    lo: u64,
    lists: Vec<Vec<u64>>,
}

impl FactorTable {
    /// Build the table for `[lo, hi)`; `lo ≥ 1`, `hi > lo`.
    pub fn build(lo: u64, hi: u64) -> FactorTable {
        assert!(lo >= 1 && hi > lo, "FactorTable range must satisfy 1 <= lo < hi");
        let len = (hi - lo) as usize;
        let mut rem: Vec<u64> = (lo..hi).collect();
        let mut lists: Vec<Vec<u64>> = vec![Vec::new(); len];
        for p in simple_sieve((hi - 1).isqrt()) {
            let mut m = lo.div_ceil(p) * p;
            while m < hi {
                let i = (m - lo) as usize;
                lists[i].push(p);
                while rem[i] % p == 0 {
                    rem[i] /= p;
                }
                m += p;
            }
        }
        for (i, &r) in rem.iter().enumerate() {
            if r > 1 {
                lists[i].push(r);
            }
        }
        FactorTable { lo, lists }
    }

    /// Distinct prime factors of `m`, ascending. `m` must lie in the built range.
    pub fn factors(&self, m: u64) -> &[u64] {
        &self.lists[(m - self.lo) as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes() {
        assert_eq!(sieve_primes(1), Vec::<u64>::new());
        assert_eq!(sieve_primes(2), vec![2]);
        assert_eq!(sieve_primes(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn prime_counts() {
        // π(10^k) for k = 1..6.
        assert_eq!(sieve_primes(10).len(), 4);
        assert_eq!(sieve_primes(100).len(), 25);
        assert_eq!(sieve_primes(1_000).len(), 168);
        assert_eq!(sieve_primes(10_000).len(), 1_229);
        assert_eq!(sieve_primes(100_000).len(), 9_592);
        assert_eq!(sieve_primes(1_000_000).len(), 78_498);
    }

    #[test]
    fn range_matches_full_sieve() {
        let full = sieve_primes(5_000);
        let split: Vec<u64> = primes_in_range(2, 1_234)
            .into_iter()
            .chain(primes_in_range(1_234, 5_001))
            .collect();
        assert_eq!(full, split);
        assert_eq!(primes_in_range(100, 100), Vec::<u64>::new());
        assert_eq!(primes_in_range(90, 97), Vec::<u64>::new());
        assert_eq!(primes_in_range(90, 98), vec![97]);
    }

    #[test]
    fn range_straddling_segment_boundary() {
        let lo = (1 << 18) - 50;
        let hi = (1 << 18) + 50;
        let got = primes_in_range(lo, hi);
        let want: Vec<u64> = sieve_primes(hi - 1).into_iter().filter(|&p| p >= lo).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn factor_table_exact() {
        let table = FactorTable::build(1, 200);
        assert_eq!(table.factors(1), &[] as &[u64]);
        assert_eq!(table.factors(2), &[2]);
        assert_eq!(table.factors(12), &[2, 3]);
        assert_eq!(table.factors(128), &[2]);
        assert_eq!(table.factors(97), &[97]);
        assert_eq!(table.factors(180), &[2, 3, 5]);
        assert_eq!(table.factors(199), &[199]);
    }

    #[test]
    fn factor_table_matches_trial_division() {
        let lo = 9_990;
        let hi = 10_120;
        let table = FactorTable::build(lo, hi);
        for m in lo..hi {
            let mut want = Vec::new();
            let mut n = m;
            let mut d = 2;
            while d * d <= n {
                if n % d == 0 {
                    want.push(d);
                    while n % d == 0 {
                        n /= d;
                    }
                }
                d += 1;
            }
            if n > 1 {
                want.push(n);
            }
            assert_eq!(table.factors(m), want.as_slice(), "m = {m}");
        }
    }
}
