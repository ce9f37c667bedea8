//! Interval-valued calculus under the Hausdorff metric.
//!
//! Intervals and interval-valued functions, numerical limits along a step
//! schedule, metric derivatives and their classification, Riemann integrals
//! and primitives, a corpus of reference functions, and randomized law
//! checks.

// `!(a <= b)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod corpus;
pub mod derivative;
pub mod error;
pub mod integral;
pub mod interval;
pub mod ivf;
pub mod limit;
pub mod verify;

pub use derivative::{
    calculus_check, classify_point, gh_derivative, Classification, DerivativeReport, DiffConfig,
};
pub use error::{Error, Result};
pub use integral::{integrate, primitive, QuadConfig};
pub use interval::{GhDifference, Interval};
pub use ivf::{Approach, Domain, IntervalFn, Side};
pub use limit::{HSchedule, LimitEstimate, Verdict};
