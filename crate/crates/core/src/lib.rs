//! Deduction engine for multiplicative functions `f` satisfying
//! `f(a_1^2 + ... + a_k^2) = f(a_1^2) + ... + f(a_k^2)` for all positive `a_i`.
//!
//! * [`repr`] decides and enumerates sums of `k` positive squares and checks
//!   the classical exceptional sets against brute force.
//! * [`arith`] supplies factorization, exact rationals, polynomials and
//!   partial multiplicative functions.
//! * [`engine`] generates the additivity equations up to a bound and solves
//!   them by propagation and rational-root branching, with a replayable trace.
//! * [`cli`] is the command-line frontend used by the `ksquares` binary.

pub mod arith;
pub mod cli;
pub mod engine;
pub mod repr;
