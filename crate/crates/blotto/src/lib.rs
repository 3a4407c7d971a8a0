//! Solver suite for the Colonel Blotto game with bounded-support mixed strategies.
//!
//! Two players allocate `n` and `m` indivisible (or, in the continuous variant,
//! infinitely divisible) troops across `k` weighted battlefields. Player 1 wins a
//! battlefield only by placing strictly more troops than player 2 (ties favor
//! player 2). A *maxmin(u, p) c-strategy* is a mixed strategy with at most `c`
//! pure strategies in its support that secures a payoff of at least `u` with
//! probability at least `p` against every response.
//!
//! The crate provides, in layers that cross-validate each other:
//!
//! * [`core`] — the game model and exact payoff evaluation,
//! * [`lp`] — an exact rational simplex with an anti-cycling pivot rule,
//! * [`oracle`] — brute-force ground truth for small instances,
//! * [`bestresp`] — polynomial best-response dynamic programs,
//! * [`profiles`] — support-probability profiles and the probability LP,
//! * [`fractional`] — the fractional greedy adversary against 2-strategies,
//! * [`approx`] — rounding-based approximation algorithms (pure PTAS, u/3 and
//!   (1−ε) guarantees for 2-strategies),
//! * [`continuous`] — critical-tuple feasibility and LP solvers for the
//!   continuous variant,
//! * [`expectation`] — primitives for the expected-payoff maximin variant.
//!
//! All solver arithmetic is exact: probabilities, fractional allocations and
//! LP pivots use arbitrary-precision rationals, and no floating point is used
//! anywhere in solver logic.

pub mod core;
pub mod lp;
pub mod oracle;
pub mod bestresp;
pub mod profiles;
pub mod fractional;
pub mod approx;
pub mod continuous;
pub mod expectation;

/// Arbitrary-precision signed integer used at API boundaries.
pub type Int = num_bigint::BigInt;

/// Exact arbitrary-precision rational; carries every probability, ratio,
/// fractional allocation and LP coefficient in the crate.
pub type Rational = num_rational::BigRational;

pub use crate::core::{
    Caps, Error, GameInstance, MixedStrategy, Profile, PureStrategy, Result, StrategyMode,
};

pub(crate) fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub(crate) fn rat_u64(n: u64) -> Rational {
    Rational::from_integer(n.into())
}

/// Builds `p/q` as an exact rational. Panics if `q == 0`.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}
