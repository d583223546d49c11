//! Counting primes by the multiplicative order structure of a pair (a, b):
//! the restricted set T of primes whose p − 1 is twice a near-prime with both
//! inputs quadratic non-residues, the disjunction set where b is either in
//! the subgroup generated by a or a primitive root outright, and the order-
//! shape case decomposition over T.

use num_integer::Integer;

use crate::arith::{
    self, is_prime_u64, jacobi_u64, primes_in_range, reduce_i64, FactorTable,
};
use crate::artinset::ArtinWindow;
use crate::error::{Error, Result};

/// Shape of (p − 1)/2 by number of prime factors with multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum P2Shape {
    /// (p − 1)/2 = q prime.
    Case1 { q: u64 },
    /// (p − 1)/2 = q1·q2 with both prime, q1 ≤ q2 (q1 = 2 and q1 = q2 allowed).
    Case2 { q1: u64, q2: u64 },
    /// Anything else, including (p − 1)/2 = 1.
    NotP2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct P2Class {
    pub p: u64,
    pub shape: P2Shape,
}

/// Classify an odd prime by whether (p − 1)/2 has at most two prime factors
/// counted with multiplicity.
pub fn classify_2p2(p: u64) -> Result<P2Class> {
    if p == 2 {
        return Err(Error::InvalidArgument("p = 2 has no odd half of p − 1".into()));
    }
    if !is_prime_u64(p) {
        return Err(Error::NotPrime { n: p });
    }
    Ok(P2Class { p, shape: shape_of_half((p - 1) / 2) })
}

fn shape_of_half(m: u64) -> P2Shape {
    if m == 1 {
        return P2Shape::NotP2;
    }
    let fac = arith::factor_u64(m);
    let big_omega: u32 = fac.iter().map(|&(_, e)| e).sum();
    match big_omega {
        1 => P2Shape::Case1 { q: m },
        2 => {
            if fac.len() == 1 {
                P2Shape::Case2 { q1: fac[0].0, q2: fac[0].0 }
            } else {
                P2Shape::Case2 { q1: fac[0].0, q2: fac[1].0 }
            }
        }
        _ => P2Shape::NotP2,
    }
}

/// Same classification but fed with the distinct primes of p − 1 (from a
/// sieve table), avoiding per-prime factorization in sweeps.
fn shape_from_distinct(m: u64, distinct_of_p_minus_1: &[u64]) -> P2Shape {
    if m == 1 {
        return P2Shape::NotP2;
    }
    let mut qs: Vec<(u64, u32)> = Vec::new();
    let mut big_omega = 0u32;
    for &q in distinct_of_p_minus_1 {
        let mut e = 0u32;
        let mut rest = m;
        while rest % q == 0 {
            rest /= q;
            e += 1;
        }
        if e > 0 {
            qs.push((q, e));
            big_omega += e;
            if big_omega > 2 {
                return P2Shape::NotP2;
            }
        }
    }
    match (big_omega, qs.as_slice()) {
        (1, [(q, 1)]) => P2Shape::Case1 { q: *q },
        (2, [(q, 2)]) => P2Shape::Case2 { q1: *q, q2: *q },
        (2, [(q1, 1), (q2, 1)]) => P2Shape::Case2 { q1: *q1, q2: *q2 },
        _ => P2Shape::NotP2,
    }
}

fn require_coprime(a: i64, b: i64) -> Result<()> {
    if a.gcd(&b) != 1 {
        return Err(Error::InvalidArgument(format!(
            "inputs (a, b) = ({a}, {b}) must be coprime"
        )));
    }
    Ok(())
}

const SEGMENT: u64 = 1 << 17;

/// Count report with an x/(ln x)² comparison curve attached.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvedReport {
    pub x: u64,
    pub count: u64,
    pub excluded: u64,
    pub primes: Option<Vec<u64>>,
    /// x/(ln x)² (None for x < 2).
    pub reference_curve: Option<f64>,
}

pub fn reference_curve(x: u64) -> Option<f64> {
    (x >= 2).then(|| {
        let ln = (x as f64).ln();
        x as f64 / (ln * ln)
    })
}

fn curved(x: u64, w: ArtinWindow) -> CurvedReport {
    CurvedReport {
        x,
        count: w.count,
        excluded: w.excluded,
        primes: w.primes,
        reference_curve: reference_curve(x),
    }
}

/// Membership window for the restricted set T over primes in [lo, hi):
/// p ∤ 2ab, both a and b quadratic non-residues mod p, and (p − 1)/2 with at
/// most two prime factors. Excluded tallies the primes dividing 2ab.
pub fn count_t_window(a: i64, b: i64, lo: u64, hi: u64, collect: bool) -> Result<ArtinWindow> {
    require_coprime(a, b)?;
    let mut count = 0u64;
    let mut excluded = 0u64;
    let mut primes = collect.then(Vec::new);
    let mut seg_lo = lo.max(2);
    while seg_lo < hi {
        let seg_hi = (seg_lo + SEGMENT).min(hi);
        let table = FactorTable::build(seg_lo - 1, seg_hi);
        for p in primes_in_range(seg_lo, seg_hi) {
            let ar = reduce_i64(a, p);
            let br = reduce_i64(b, p);
            if p == 2 || ar == 0 || br == 0 {
                excluded += 1;
                continue;
            }
            if jacobi_u64(ar, p) != -1 || jacobi_u64(br, p) != -1 {
                continue;
            }
            let shape = shape_from_distinct((p - 1) / 2, table.factors(p - 1));
            if !matches!(shape, P2Shape::NotP2) {
                count += 1;
                if let Some(list) = &mut primes {
                    list.push(p);
                }
            }
        }
        seg_lo = seg_hi;
    }
    Ok(ArtinWindow { lo, hi, count, excluded, primes })
}

/// |T_x| for coprime (a, b).
pub fn count_t(a: i64, b: i64, x: u64, collect: bool) -> Result<CurvedReport> {
    let w = count_t_window(a, b, 2, x.saturating_add(1), collect)?;
    Ok(curved(x, w))
}

/// True iff b generates the full multiplicative group mod p.
pub fn is_primitive_root(b: i64, p: u64) -> Result<bool> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime { n: p });
    }
    let br = reduce_i64(b, p);
    if br == 0 {
        return Err(Error::DividesModulus { value: b.to_string(), p });
    }
    let distinct: Vec<u64> = arith::factor_u64(p - 1).into_iter().map(|(q, _)| q).collect();
    Ok(arith::order_with_distinct_primes(br, p, &distinct) == p - 1)
}

/// Tally over [lo, hi) for the disjunction set: p ∤ ab and (b ∈ ⟨a⟩ or b a
/// primitive root). The membership half is always contained in the union;
/// `containment_verified` records that the per-prime check never saw a
/// counterexample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisjunctionWindow {
    pub lo: u64,
    pub hi: u64,
    pub count: u64,
    pub member_only: u64,
    pub primitive_only: u64,
    pub both: u64,
    pub excluded: u64,
    pub primes: Option<Vec<u64>>,
    pub containment_verified: bool,
}

impl DisjunctionWindow {
    pub fn merge(a: &DisjunctionWindow, b: &DisjunctionWindow) -> Result<DisjunctionWindow> {
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
        Ok(DisjunctionWindow {
            lo: first.lo,
            hi: second.hi,
            count: first.count + second.count,
            member_only: first.member_only + second.member_only,
            primitive_only: first.primitive_only + second.primitive_only,
            both: first.both + second.both,
            excluded: first.excluded + second.excluded,
            primes,
            containment_verified: first.containment_verified && second.containment_verified,
        })
    }
}

pub fn disjunction_window(
    a: i64,
    b: i64,
    lo: u64,
    hi: u64,
    collect: bool,
) -> Result<DisjunctionWindow> {
    require_coprime(a, b)?;
    let mut w = DisjunctionWindow {
        lo,
        hi,
        count: 0,
        member_only: 0,
        primitive_only: 0,
        both: 0,
        excluded: 0,
        primes: collect.then(Vec::new),
        containment_verified: true,
    };
    let mut seg_lo = lo.max(2);
    while seg_lo < hi {
        let seg_hi = (seg_lo + SEGMENT).min(hi);
        let table = FactorTable::build(seg_lo - 1, seg_hi);
        for p in primes_in_range(seg_lo, seg_hi) {
            let ar = reduce_i64(a, p);
            let br = reduce_i64(b, p);
            if ar == 0 || br == 0 {
                w.excluded += 1;
                continue;
            }
            let distinct = table.factors(p - 1);
            let ord_a = arith::order_with_distinct_primes(ar, p, distinct);
            let ord_b = arith::order_with_distinct_primes(br, p, distinct);
            let member = ord_a % ord_b == 0;
            let primitive = ord_b == p - 1;
            let in_union = member || primitive;
            if member && !in_union {
                w.containment_verified = false;
            }
            match (member, primitive) {
                (true, true) => w.both += 1,
                (true, false) => w.member_only += 1,
                (false, true) => w.primitive_only += 1,
                (false, false) => continue,
            }
            w.count += 1;
            if let Some(list) = &mut w.primes {
                list.push(p);
            }
        }
        seg_lo = seg_hi;
    }
    Ok(w)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DisjunctionReport {
    pub x: u64,
    pub count: u64,
    pub member_only: u64,
    pub primitive_only: u64,
    pub both: u64,
    pub excluded: u64,
    pub primes: Option<Vec<u64>>,
    pub containment_verified: bool,
    pub reference_curve: Option<f64>,
}

/// Number of primes p ≤ x, p ∤ ab, with b in ⟨a⟩ or b a primitive root.
pub fn disjunction_count(a: i64, b: i64, x: u64, collect: bool) -> Result<DisjunctionReport> {
    let w = disjunction_window(a, b, 2, x.saturating_add(1), collect)?;
    Ok(DisjunctionReport {
        x,
        count: w.count,
        member_only: w.member_only,
        primitive_only: w.primitive_only,
        both: w.both,
        excluded: w.excluded,
        primes: w.primes,
        containment_verified: w.containment_verified,
        reference_curve: reference_curve(x),
    })
}

/// Tally of order shapes of a over the primes of T_x.
///
/// Every p ∈ T forces both orders even (the quadratic symbols are −1), so
/// the order of a lands in a short list of admissible values per shape; a
/// value outside the list is an internal error, not a report entry.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseBreakdown {
    pub x: u64,
    pub t_count: u64,
    /// (p−1)/2 = q prime and a of full order p − 1.
    pub case1: u64,
    /// Order 2q1q2 = p − 1 (full order) over Case2 primes.
    pub case21: u64,
    /// Order 2q2 (the larger prime), q1 < q2.
    pub case22: u64,
    /// Order 2q1 (the smaller prime), q1 < q2.
    pub case23: u64,
    /// Order 2q over primes with (p−1)/2 = q² (the tie q1 = q2).
    pub case2_tied: u64,
    /// Order exactly 2, i.e. a ≡ −1 mod p (possible under any shape).
    pub order_two: u64,
    /// Fraction case23 / t_count (0 when T is empty).
    pub case23_fraction: f64,
    /// Number of primes where both a and b had order 2q2 and the forced
    /// subgroup equality ⟨b⟩ = ⟨a⟩ was confirmed.
    pub equal_order_2q2_confirmed: u64,
}

pub fn case_breakdown(a: i64, b: i64, x: u64) -> Result<CaseBreakdown> {
    require_coprime(a, b)?;
    let t = count_t_window(a, b, 2, x.saturating_add(1), true)?;
    let t_primes = t.primes.expect("collection requested");
    let mut out = CaseBreakdown {
        x,
        t_count: t.count,
        case1: 0,
        case21: 0,
        case22: 0,
        case23: 0,
        case2_tied: 0,
        order_two: 0,
        case23_fraction: 0.0,
        equal_order_2q2_confirmed: 0,
    };
    for p in t_primes {
        let distinct: Vec<u64> = arith::factor_u64(p - 1).into_iter().map(|(q, _)| q).collect();
        let fa = arith::order_with_distinct_primes(reduce_i64(a, p), p, &distinct);
        let fb = arith::order_with_distinct_primes(reduce_i64(b, p), p, &distinct);
        if fa % 2 != 0 || fb % 2 != 0 {
            return Err(Error::Internal(format!(
                "orders of {a} and {b} mod {p} must be even when both symbols are -1"
            )));
        }
        let shape = shape_of_half((p - 1) / 2);
        let bucket = match (shape, fa) {
            (_, 2) => &mut out.order_two,
            (P2Shape::Case1 { q }, f) if f == 2 * q => &mut out.case1,
            (P2Shape::Case2 { q1, q2 }, f) if f == 2 * q1 * q2 => &mut out.case21,
            (P2Shape::Case2 { q1, q2 }, f) if q1 == q2 && f == 2 * q1 => &mut out.case2_tied,
            (P2Shape::Case2 { q1, q2 }, f) if q1 < q2 && f == 2 * q2 => &mut out.case22,
            (P2Shape::Case2 { q1, q2 }, f) if q1 < q2 && f == 2 * q1 => &mut out.case23,
            (shape, f) => {
                return Err(Error::Internal(format!(
                    "order {f} of {a} mod {p} fits no admissible shape {shape:?}"
                )))
            }
        };
        *bucket += 1;
        if let P2Shape::Case2 { q1, q2 } = shape {
            if q1 < q2 && fa == 2 * q2 && fb == 2 * q2 {
                // equal order in a cyclic group pins both to the same
                // subgroup; confirm b^f_a ≡ 1 numerically
                if arith::powmod_u64(reduce_i64(b, p), fa, p) != 1 {
                    return Err(Error::Internal(format!(
                        "equal orders 2*{q2} mod {p} must put b in the subgroup of a"
                    )));
                }
                out.equal_order_2q2_confirmed += 1;
            }
        }
    }
    let parts = out.case1 + out.case21 + out.case22 + out.case23 + out.case2_tied + out.order_two;
    if parts != out.t_count {
        return Err(Error::Internal(format!(
            "case tallies {parts} do not partition |T| = {}",
            out.t_count
        )));
    }
    if out.t_count > 0 {
        out.case23_fraction = out.case23 as f64 / out.t_count as f64;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::powmod_u64;

    #[test]
    fn classification_fixtures() {
        assert_eq!(classify_2p2(11).unwrap().shape, P2Shape::Case1 { q: 5 });
        assert_eq!(classify_2p2(29).unwrap().shape, P2Shape::Case2 { q1: 2, q2: 7 });
        assert_eq!(classify_2p2(17).unwrap().shape, P2Shape::NotP2);
        assert_eq!(classify_2p2(3).unwrap().shape, P2Shape::NotP2); // (p−1)/2 = 1
        assert_eq!(classify_2p2(5).unwrap().shape, P2Shape::Case1 { q: 2 });
        assert_eq!(classify_2p2(19).unwrap().shape, P2Shape::Case2 { q1: 3, q2: 3 });
        assert!(classify_2p2(2).is_err());
        assert!(classify_2p2(15).is_err());
    }

    #[test]
    fn sweep_shape_matches_direct() {
        let table = FactorTable::build(1, 10_000);
        for p in primes_in_range(3, 10_000) {
            let direct = classify_2p2(p).unwrap().shape;
            let sweep = shape_from_distinct((p - 1) / 2, table.factors(p - 1));
            assert_eq!(direct, sweep, "p = {p}");
        }
    }

    #[test]
    fn t_fixtures() {
        let rep = count_t(2, 3, 30, true).unwrap();
        assert_eq!(rep.count, 3);
        assert_eq!(rep.primes.as_deref(), Some(&[5u64, 19, 29][..]));

        let rep = count_t(2, 3, 5, true).unwrap();
        assert_eq!(rep.count, 1);
        assert_eq!(rep.primes.as_deref(), Some(&[5u64][..]));

        assert_eq!(count_t(2, 3, 2, false).unwrap().count, 0);
        assert_eq!(count_t(2, 3, 1000, false).unwrap().count, 24);
        assert!(count_t(2, 4, 10, false).is_err()); // not coprime
    }

    #[test]
    fn t_matches_naive_oracle() {
        // naive: Euler criterion by powmod, multiplicity by trial division
        let (a, b) = (2i64, 3i64);
        let got = count_t(a, b, 1000, true).unwrap().primes.unwrap();
        let mut want = Vec::new();
        for p in primes_in_range(3, 1001) {
            let ar = reduce_i64(a, p);
            let br = reduce_i64(b, p);
            if ar == 0 || br == 0 {
                continue;
            }
            let nonresidue =
                |v: u64| powmod_u64(v, (p - 1) / 2, p) == p - 1;
            if !nonresidue(ar) || !nonresidue(br) {
                continue;
            }
            let mut m = (p - 1) / 2;
            let mut big_omega = 0;
            let mut d = 2u64;
            while d * d <= m {
                while m % d == 0 {
                    m /= d;
                    big_omega += 1;
                }
                d += 1;
            }
            if m > 1 {
                big_omega += 1;
            }
            if big_omega == 1 || big_omega == 2 {
                want.push(p);
            }
        }
        assert_eq!(got, want);
    }

    #[test]
    fn primitive_root_fixtures() {
        assert!(is_primitive_root(3, 7).unwrap());
        assert!(!is_primitive_root(2, 7).unwrap());
        assert!(!is_primitive_root(1, 5).unwrap());
        assert!(is_primitive_root(1, 2).unwrap()); // the trivial group
        assert!(is_primitive_root(7, 4).is_err());
        assert!(matches!(is_primitive_root(14, 7), Err(Error::DividesModulus { .. })));
    }

    #[test]
    fn disjunction_fixtures() {
        let rep = disjunction_count(2, 3, 20, true).unwrap();
        assert_eq!(rep.count, 6);
        assert_eq!(rep.primes.as_deref(), Some(&[5u64, 7, 11, 13, 17, 19][..]));
        assert_eq!(rep.member_only, 2); // 11, 13
        assert_eq!(rep.primitive_only, 2); // 7, 17
        assert_eq!(rep.both, 2); // 5, 19
        assert!(rep.containment_verified);

        assert_eq!(disjunction_count(2, 3, 5, false).unwrap().count, 1);
        assert_eq!(disjunction_count(2, 3, 4, false).unwrap().count, 0);
    }

    #[test]
    fn disjunction_contains_membership_set() {
        let member = crate::artinset::artin_count(2, 3, 500, true).unwrap();
        let disj = disjunction_count(2, 3, 500, true).unwrap();
        let dp = disj.primes.unwrap();
        for p in member.primes.unwrap() {
            assert!(dp.contains(&p), "member prime {p} missing from disjunction set");
        }
        assert_eq!(disj.member_only + disj.both, member.count);
    }

    #[test]
    fn disjunction_window_merge() {
        let full = disjunction_window(2, 3, 2, 2001, true).unwrap();
        let left = disjunction_window(2, 3, 2, 1000, true).unwrap();
        let right = disjunction_window(2, 3, 1000, 2001, true).unwrap();
        assert_eq!(DisjunctionWindow::merge(&left, &right).unwrap(), full);
        assert!(DisjunctionWindow::merge(&left, &full).is_err());
    }

    #[test]
    fn breakdown_fixture() {
        let bd = case_breakdown(2, 3, 30).unwrap();
        assert_eq!(bd.t_count, 3);
        assert_eq!(bd.case1, 1); // p = 5: full order 4
        assert_eq!(bd.case21, 2); // p = 19 (order 18), p = 29 (order 28)
        assert_eq!(bd.case22 + bd.case23 + bd.case2_tied + bd.order_two, 0);
    }

    #[test]
    fn breakdown_partitions_t() {
        for (a, b, x) in [(2i64, 3i64, 2000u64), (3, 5, 1500), (2, 7, 1000), (5, 3, 800)] {
            let bd = case_breakdown(a, b, x).unwrap();
            let t = count_t(a, b, x, false).unwrap().count;
            assert_eq!(bd.t_count, t);
            let sum =
                bd.case1 + bd.case21 + bd.case22 + bd.case23 + bd.case2_tied + bd.order_two;
            assert_eq!(sum, t, "(a,b,x)=({a},{b},{x})");
            assert!(bd.case23_fraction <= 1.0);
        }
    }

    #[test]
    fn reference_curve_values() {
        let c = reference_curve(1000).unwrap();
        let ln = 1000f64.ln();
        assert!((c - 1000.0 / (ln * ln)).abs() < 1e-12);
        assert!(reference_curve(1).is_none());
    }
}
