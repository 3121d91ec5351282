use std::fmt::{Debug, Display};

use super::scalar::GaussianRational;

/// Exact coefficient field. Implemented by [`GaussianRational`] and by
/// rational functions in one indeterminate over it.
pub trait Field: Clone + PartialEq + Debug + Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negate(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn from_gaussian(g: &GaussianRational) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_gaussian(&GaussianRational::from_int(n))
    }

    fn over(&self, o: &Self) -> Self {
        self.times(&o.inv().expect("division by zero in exact field"))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}
