//! Pollard's rho with Brent's cycle detection, for u64 and BigUint inputs.
//!
//! Callers must pass odd composite n (strip powers of two and test primality
//! first). The seed schedule is fixed, so results are deterministic.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;

use super::mulmod_u64;

/// Polynomial constants tried in order; each gets the full iteration budget.
const SEEDS: u64 = 8;

/// How many steps to batch between gcd evaluations.
const BATCH: u64 = 128;

/// A nontrivial factor of odd composite `n`, or None if every seed exhausts
/// `max_iter` iterations first.
pub fn brent_u64(n: u64, max_iter: u64) -> Option<u64> {
    debug_assert!(n > 1 && n % 2 == 1);
    (1..=SEEDS).find_map(|c| attempt_u64(n, c, max_iter))
}

fn attempt_u64(n: u64, c: u64, max_iter: u64) -> Option<u64> {
    let step = |x: u64| mulmod_u64(x, x, n).wrapping_add(c) % n;
    let mut y = 2u64;
    let mut r = 1u64;
    let mut q = 1u64;
    let mut g = 1u64;
    let mut x = y;
    let mut ys = y;
    let mut used = 0u64;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = step(y);
        }
        let mut k = 0u64;
        while k < r && g == 1 {
            ys = y;
            let lim = BATCH.min(r - k);
            for _ in 0..lim {
                y = step(y);
                q = mulmod_u64(q, x.abs_diff(y), n);
            }
            g = q.gcd(&n);
            k += lim;
            used += lim;
            if g == 1 && used >= max_iter {
                return None;
            }
        }
        r <<= 1;
    }
    if g == n {
        // The batch collapsed; replay single steps from the last checkpoint.
        loop {
            ys = step(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    (g > 1 && g < n).then_some(g)
}

/// BigUint variant of [`brent_u64`].
pub fn brent_big(n: &BigUint, max_iter: u64) -> Option<BigUint> {
    debug_assert!(n.is_odd() && *n > BigUint::one());
    (1..=SEEDS).find_map(|c| attempt_big(n, c, max_iter))
}

fn attempt_big(n: &BigUint, c: u64, max_iter: u64) -> Option<BigUint> {
    let c = BigUint::from(c);
    let one = BigUint::one();
    let step = |x: &BigUint| (x * x + &c) % n;
    let abs_diff = |a: &BigUint, b: &BigUint| if a >= b { a - b } else { b - a };
    let mut y = BigUint::from(2u32);
    let mut r = 1u64;
    let mut q = one.clone();
    let mut g = one.clone();
    let mut x = y.clone();
    let mut ys = y.clone();
    let mut used = 0u64;
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = step(&y);
        }
        let mut k = 0u64;
        while k < r && g.is_one() {
            ys = y.clone();
            let lim = BATCH.min(r - k);
            for _ in 0..lim {
                y = step(&y);
                q = q * abs_diff(&x, &y) % n;
            }
            g = q.gcd(n);
            k += lim;
            used += lim;
            if g.is_one() && used >= max_iter {
                return None;
            }
        }
        r <<= 1;
    }
    if g == *n {
        loop {
            ys = step(&ys);
            g = abs_diff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    (!g.is_one() && g != *n).then_some(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_semiprimes() {
        for (a, b) in [(10_007u64, 10_009u64), (65_537, 99_991), (1_000_003, 1_000_033)] {
            let n = a * b;
            let f = brent_u64(n, 1 << 24).expect("factor");
            assert!(f == a || f == b, "n = {n}, got {f}");
        }
    }

    #[test]
    fn splits_big() {
        // 2^67 − 1 = 193707721 · 761838257287
        let n = (BigUint::one() << 67u32) - BigUint::one();
        let f = brent_big(&n, 1 << 24).expect("factor");
        assert!(
            f == BigUint::from(193_707_721u64) || f == BigUint::from(761_838_257_287u64),
            "got {f}"
        );
    }

    #[test]
    fn budget_exhaustion_returns_none() {
        // Too few iterations to split a 2^64-scale semiprime.
        let n = 4_294_967_291u64 * 4_294_967_279u64;
        assert_eq!(brent_u64(n, 4), None);
    }

    #[test]
    fn deterministic() {
        let n = 10_007u64 * 30_011;
        assert_eq!(brent_u64(n, 1 << 24), brent_u64(n, 1 << 24));
    }
}
