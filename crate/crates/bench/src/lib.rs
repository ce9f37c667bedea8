//! Shared fixtures for the criterion benches.

use ivcalc::{Domain, IntervalFn};

/// `[-t², t²]` without analytic derivatives, so classification runs the
/// difference-quotient path.
pub fn sym_square() -> IntervalFn {
    IntervalFn::new("sym_square", Domain::real_line(), |t| -t * t, |t| t * t)
}
