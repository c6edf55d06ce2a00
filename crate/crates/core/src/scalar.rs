//! Scalar abstraction shared by every table-valued computation.
//!
//! The difference calculus and the clique decomposition only need a signed
//! ring with an ordering, so they run unchanged over `i64`, exact rationals
//! and floats. Probability tables additionally need [`Real`].

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Float, FromPrimitive, Num, Signed, ToPrimitive};

/// A value type a [`TabularFunction`](crate::TabularFunction) can hold.
pub trait Scalar: Clone + Debug + PartialOrd + Num + Signed + Send + Sync + 'static {
    /// `false` for NaN and infinities; exact types are always finite.
    fn is_finite_value(&self) -> bool {
        true
    }

    /// Tolerance used by predicates when the caller does not pass one:
    /// zero for exact types, `1e-9` absolute for floats.
    fn default_tolerance() -> Self {
        Self::zero()
    }

    /// Largest of two values under `PartialOrd`; `a` wins ties and NaN.
    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }
}

macro_rules! exact_int_scalar {
    ($($t:ty),*) => {
        $(impl Scalar for $t {})*
    };
}

exact_int_scalar!(i32, i64, i128, BigInt);

impl Scalar for Ratio<i64> {}
impl Scalar for Ratio<i128> {}
impl Scalar for BigRational {}

impl Scalar for f64 {
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }

    fn default_tolerance() -> Self {
        1e-9
    }
}

impl Scalar for f32 {
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }

    fn default_tolerance() -> Self {
        1e-5
    }
}

/// Floating-point scalars used for probability tables, logarithms and
/// iterative fitting.
pub trait Real: Scalar + Float + FromPrimitive + ToPrimitive {
    /// Converts a literal constant; every `Real` can represent small `f64`s.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in Real")
    }

    /// Tolerance for checking that a probability table sums to one.
    fn normalization_tolerance(cells: usize) -> Self {
        let floor = Self::lit(1e-12);
        let scaled = Self::epsilon() * Self::lit(8.0 * (cells.max(1) as f64).sqrt());
        floor.max(scaled)
    }
}

impl Real for f64 {}
impl Real for f32 {}

/// Absolute value for any [`Scalar`].
pub(crate) fn abs<T: Scalar>(x: &T) -> T {
    x.abs()
}
