//! Exact values carrying a rigorous interval radius.
//!
//! A [`Certified`] holds an exact rational `value` and an exact rational
//! `bound` with the contract `|true - value| <= bound`. Arithmetic combines
//! the radii so the contract is preserved, which lets identity checks compose
//! truncated series and products without losing rigor.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certified {
    pub value: Scalar,
    pub bound: Scalar,
}

impl Certified {
    pub fn new(value: Scalar, bound: Scalar) -> Self {
        debug_assert!(!bound.is_negative());
        Certified { value, bound }
    }

    pub fn exact(value: Scalar) -> Self {
        Certified {
            value,
            bound: Scalar::zero(),
        }
    }

    pub fn add(&self, rhs: &Certified) -> Certified {
        Certified::new(&self.value + &rhs.value, &self.bound + &rhs.bound)
    }

    pub fn sub(&self, rhs: &Certified) -> Certified {
        Certified::new(&self.value - &rhs.value, &self.bound + &rhs.bound)
    }

    pub fn neg(&self) -> Certified {
        Certified::new(-&self.value, self.bound.clone())
    }

    /// `|t1 t2 - v1 v2| <= |v1| b2 + |v2| b1 + b1 b2`.
    pub fn mul(&self, rhs: &Certified) -> Certified {
        let bound = self.value.abs() * &rhs.bound
            + rhs.value.abs() * &self.bound
            + &self.bound * &rhs.bound;
        Certified::new(&self.value * &rhs.value, bound)
    }

    pub fn mul_scalar(&self, s: &Scalar) -> Certified {
        Certified::new(&self.value * s, s.abs() * &self.bound)
    }

    /// Division; requires the divisor interval to exclude zero
    /// (`bound < |value|`), which makes
    /// `|t1/t2 - v1/v2| <= (b1 |v2| + |v1| b2) / (|v2| (|v2| - b2))`.
    pub fn div(&self, rhs: &Certified) -> Result<Certified> {
        let av2 = rhs.value.abs();
        if rhs.value.is_zero() || rhs.bound >= av2 {
            return Err(Error::DivisionByZero(
                "certified divisor interval contains zero".into(),
            ));
        }
        let bound = (&self.bound * &av2 + self.value.abs() * &rhs.bound)
            / (&av2 * (&av2 - &rhs.bound));
        Ok(Certified::new(&self.value / &rhs.value, bound))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{s_int, s_ratio};

    #[test]
    fn radii_contain_true_products_and_quotients() {
        // true values 2/3 and 5/4, approximations off by the full radius
        let t1 = s_ratio(2, 3);
        let t2 = s_ratio(5, 4);
        let a = Certified::new(&t1 + s_ratio(1, 100), s_ratio(1, 100));
        let b = Certified::new(&t2 - s_ratio(1, 50), s_ratio(1, 50));

        let prod = a.mul(&b);
        assert!((&t1 * &t2 - &prod.value).abs() <= prod.bound);

        let quot = a.div(&b).unwrap();
        assert!((&t1 / &t2 - &quot.value).abs() <= quot.bound);
    }

    #[test]
    fn division_by_interval_containing_zero_fails() {
        let a = Certified::exact(s_int(1));
        let b = Certified::new(s_ratio(1, 10), s_ratio(1, 2));
        assert!(a.div(&b).is_err());
    }
}
