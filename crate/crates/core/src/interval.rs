//! Compact real intervals with Minkowski arithmetic, the generalized
//! Hukuhara difference and the Hausdorff–Pompeiu metric.
//!
//! An [`Interval`] is `[lo, hi]` with finite endpoints and `lo <= hi`.
//! Degenerate intervals are singletons; [`Interval::ZERO`] is `{0}`.
//!
//! Arithmetic is not outward-rounded. Every operation that could produce a
//! non-finite endpoint returns [`Error::RangeOverflow`] instead.

use std::fmt;

use serde::de::{self, Deserializer};
use serde::ser::{SerializeTuple, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

/// Result of a gH-difference together with the Hukuhara flag.
///
/// `hukuhara` is true when `w(A) >= w(B)`, i.e. when `A = B + value`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GhDifference {
    pub value: Interval,
    pub hukuhara: bool,
}

impl GhDifference {
    /// The difference if it is a Hukuhara difference proper.
    pub fn hukuhara_value(self) -> Option<Interval> {
        self.hukuhara.then_some(self.value)
    }
}

fn finite_pair(lo: f64, hi: f64) -> Result<Interval> {
    if lo.is_finite() && hi.is_finite() {
        Ok(Interval { lo, hi })
    } else {
        Err(Error::RangeOverflow)
    }
}

impl Interval {
    /// The singleton `{0}`.
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::NonFinite { lo, hi });
        }
        if lo > hi {
            return Err(Error::InvertedEndpoints { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    pub fn singleton(a: f64) -> Result<Self> {
        Self::new(a, a)
    }

    /// `[min(a, b), max(a, b)]`.
    pub fn hull_of(a: f64, b: f64) -> Result<Self> {
        if a <= b {
            Self::new(a, b)
        } else {
            Self::new(b, a)
        }
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn is_singleton(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// `max(|lo|, |hi|)`, which equals `H(A, {0})`.
    pub fn norm(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn width_norm(&self) -> (f64, f64) {
        (self.width(), self.norm())
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * self.lo + 0.5 * self.hi
    }

    /// Minkowski sum. Fallible, so not `std::ops::Add`.
    #[allow(clippy::should_implement_trait)]
    pub fn add(self, other: Interval) -> Result<Interval> {
        finite_pair(self.lo + other.lo, self.hi + other.hi)
    }

    /// Scalar multiple; the endpoints swap for negative `lambda` and
    /// `0 * A` is `{0}`.
    pub fn scale(self, lambda: f64) -> Result<Interval> {
        if !lambda.is_finite() {
            return Err(Error::RangeOverflow);
        }
        if lambda > 0.0 {
            finite_pair(lambda * self.lo, lambda * self.hi)
        } else if lambda < 0.0 {
            finite_pair(lambda * self.hi, lambda * self.lo)
        } else {
            Ok(Interval::ZERO)
        }
    }

    /// The opposite `-A = [-hi, -lo]`. Not an additive inverse.
    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }

    /// Minkowski difference `A + (-1)B`.
    pub fn minkowski_sub(self, other: Interval) -> Result<Interval> {
        self.add(other.neg())
    }

    /// Generalized Hukuhara difference
    /// `[min(a⁻-b⁻, a⁺-b⁺), max(a⁻-b⁻, a⁺-b⁺)]`.
    pub fn gh_sub(self, other: Interval) -> Result<GhDifference> {
        let dl = self.lo - other.lo;
        let dh = self.hi - other.hi;
        let value = finite_pair(dl.min(dh), dl.max(dh))?;
        Ok(GhDifference {
            value,
            hukuhara: self.width() >= other.width(),
        })
    }

    /// Shorthand for `gh_sub(..).value`.
    pub fn gh(self, other: Interval) -> Result<Interval> {
        self.gh_sub(other).map(|d| d.value)
    }

    /// Hausdorff–Pompeiu distance `max(|a⁻-b⁻|, |a⁺-b⁺|)`.
    pub fn hausdorff(&self, other: &Interval) -> f64 {
        (self.lo - other.lo).abs().max((self.hi - other.hi).abs())
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_singleton() {
            write!(f, "{{{}}}", self.lo)
        } else {
            write!(f, "[{}, {}]", self.lo, self.hi)
        }
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut tuple = serializer.serialize_tuple(2)?;
        tuple.serialize_element(&self.lo)?;
        tuple.serialize_element(&self.hi)?;
        tuple.end()
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let [lo, hi] = <[f64; 2]>::deserialize(deserializer)?;
        Interval::new(lo, hi).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn construction() {
        assert_eq!(iv(1.0, 2.0).lo(), 1.0);
        assert!(iv(3.0, 3.0).is_singleton());
        assert!(matches!(
            Interval::new(2.0, 1.0),
            Err(Error::InvertedEndpoints { .. })
        ));
        assert!(matches!(
            Interval::new(f64::NAN, 1.0),
            Err(Error::NonFinite { .. })
        ));
        assert!(matches!(
            Interval::new(0.0, f64::INFINITY),
            Err(Error::NonFinite { .. })
        ));
    }

    #[test]
    fn addition() {
        assert_eq!(iv(1.0, 2.0).add(iv(3.0, 5.0)).unwrap(), iv(4.0, 7.0));
        let a = iv(-0.25, 9.5);
        assert_eq!(a.add(Interval::ZERO).unwrap(), a);
        // A + (-A) is not {0}
        assert_eq!(iv(0.0, 1.0).add(iv(-1.0, 0.0)).unwrap(), iv(-1.0, 1.0));
        assert_eq!(
            iv(0.0, f64::MAX).add(iv(0.0, f64::MAX)),
            Err(Error::RangeOverflow)
        );
    }

    #[test]
    fn scaling() {
        assert_eq!(iv(1.0, 2.0).scale(-1.0).unwrap(), iv(-2.0, -1.0));
        assert_eq!(iv(-5.0, 9.0).scale(0.0).unwrap(), Interval::ZERO);
        assert_eq!(iv(-1.0, 3.0).scale(2.0).unwrap(), iv(-2.0, 6.0));
        assert_eq!(iv(1.0, 2.0).neg(), iv(-2.0, -1.0));
        assert_eq!(iv(1.0, f64::MAX).scale(4.0), Err(Error::RangeOverflow));
    }

    #[test]
    fn gh_difference_cases() {
        let d = iv(5.0, 7.0).gh_sub(iv(1.0, 2.0)).unwrap();
        assert_eq!(d.value, iv(4.0, 5.0));
        assert!(d.hukuhara);

        let d = iv(0.0, 1.0).gh_sub(iv(0.0, 3.0)).unwrap();
        assert_eq!(d.value, iv(-2.0, 0.0));
        assert!(!d.hukuhara);
        assert_eq!(d.hukuhara_value(), None);

        let a = iv(-3.5, 8.0);
        assert_eq!(a.gh(a).unwrap(), Interval::ZERO);
    }

    #[test]
    fn hausdorff_and_norm() {
        assert_eq!(iv(1.0, 3.0).hausdorff(&iv(2.0, 7.0)), 4.0);
        let a = iv(-1.0, 6.0);
        assert_eq!(a.hausdorff(&a), 0.0);
        assert_eq!(iv(0.0, 1.0).hausdorff(&Interval::ZERO), 1.0);
        assert_eq!(iv(0.0, 1.0).norm(), 1.0);

        assert_eq!(iv(1.0, 4.0).width_norm(), (3.0, 4.0));
        assert_eq!(iv(-7.0, -7.0).width_norm(), (0.0, 7.0));
        assert_eq!(iv(-3.0, 2.0).width_norm(), (5.0, 3.0));
    }

    #[test]
    fn json_is_two_element_array() {
        let s = serde_json::to_string(&iv(-1.0, 0.5)).unwrap();
        assert_eq!(s, "[-1.0,0.5]");
        let back: Interval = serde_json::from_str(&s).unwrap();
        assert_eq!(back, iv(-1.0, 0.5));
        assert!(serde_json::from_str::<Interval>("[2.0,1.0]").is_err());
    }

    fn interval() -> impl Strategy<Value = Interval> {
        (-1e3f64..1e3, 0f64..1e3).prop_map(|(lo, w)| Interval::new(lo, lo + w).unwrap())
    }

    proptest! {
        #[test]
        fn hausdorff_is_a_metric(a in interval(), b in interval(), c in interval()) {
            prop_assert_eq!(a.hausdorff(&b), b.hausdorff(&a));
            prop_assert_eq!(a.hausdorff(&b) == 0.0, a == b);
            let tol = 1e-12 * (1.0 + a.norm() + b.norm() + c.norm());
            prop_assert!(a.hausdorff(&c) <= a.hausdorff(&b) + b.hausdorff(&c) + tol);
        }

        #[test]
        fn hausdorff_is_norm_of_gh_difference(a in interval(), b in interval()) {
            prop_assert_eq!(a.hausdorff(&b), a.gh(b).unwrap().norm());
        }

        #[test]
        fn gh_width_is_width_gap(a in interval(), b in interval()) {
            let w = a.gh(b).unwrap().width();
            let tol = 1e-12 * (1.0 + a.norm() + b.norm());
            prop_assert!((w - (a.width() - b.width()).abs()).abs() <= tol);
        }

        #[test]
        fn json_roundtrip(a in interval()) {
            let back: Interval = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
