//! Computational engine for the arithmetic of binary recurrence sequences
//! `u_n = r·u_{n-1} + s·u_{n-2}`.
//!
//! The library answers questions about the prime divisors of such sequences:
//!
//! - [`arith`] — primality, budgeted factorization, multiplicative orders,
//!   Legendre/Jacobi symbols, segmented sieves.
//! - [`recurrence`] — sequence parameters, degeneracy classification, exact
//!   term computation, dominant-root data.
//! - [`quadring`] — exact arithmetic in ℚ(√D) with √D kept formal, closed-form
//!   constants, and the shifted-term identity used to bound prime divisors.
//! - [`lucasdiv`] — Lucas sequences `t_n = (α^n − β^n)/(α − β)`: rank of
//!   apparition, p-adic valuation laws, primitive divisors.
//! - [`omega`] — counting distinct prime divisors of term products, with
//!   certified lower/upper intervals under a factoring budget.
//! - [`artinset`] — primes p for which b is a power of a mod p, the rational
//!   variant, and greatest-prime-factor windows for `a^n − b`.
//! - [`disjunction`] — primes p with (p−1)/2 having at most two prime factors,
//!   order case analysis, and the "power of a, or primitive root" count.
//! - [`constructions`] — explicit Thue-equation families and hyperelliptic
//!   twist points built from the factorizations of `a^n − b`, with exact
//!   re-verification and pigeonhole tallies.
//!
//! Everything is exact integer/rational arithmetic except where a result is
//! explicitly a floating-point bound. Factorizations are budgeted and never
//! guess: anything unresolved is reported as an interval, not an error.

pub mod arith;
pub mod artinset;
pub mod constructions;
pub mod disjunction;
pub mod error;
pub mod lucasdiv;
pub mod omega;
pub mod quadring;
pub mod recurrence;

pub use error::{Error, Result};
