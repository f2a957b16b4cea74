//! Coefficient rings for formal linear combinations.

use std::fmt::{Debug, Display};

use num_rational::Rational64;
use num_traits::Signed;

/// Exact coefficient ring used by [`crate::JElement`], [`crate::CochainElement`]
/// and [`crate::ShElement`].
pub trait Coeff: Clone + Debug + Display + PartialEq + Signed + From<i64> + 'static {
    /// JSON rendering: integers as numbers, non-integral values as `"p/q"`.
    fn to_json(&self) -> serde_json::Value;
}

impl Coeff for i64 {
    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::from(*self)
    }
}

impl Coeff for Rational64 {
    fn to_json(&self) -> serde_json::Value {
        if self.is_integer() {
            serde_json::Value::from(*self.numer())
        } else {
            serde_json::Value::from(self.to_string())
        }
    }
}

/// Returns `true` when `c` is a unit of the integers (±1).
pub fn is_pm_one<C: Coeff>(c: &C) -> bool {
    c.is_one() || (-c.clone()).is_one()
}

/// Convenience constructor for a coefficient from a small integer.
pub fn coeff<C: Coeff>(v: i64) -> C {
    C::from(v)
}

/// Zero test usable in generic contexts.
pub fn is_zero<C: Coeff>(c: &C) -> bool {
    c.is_zero()
}
