//! Reduced rational functions in `x` over exact rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::poly::PolyX;
use crate::scalar::Scalar;

/// A rational function `num/den` kept in canonical form: `gcd(num, den) = 1`
/// and `den` monic. Mathematical equality is therefore structural equality,
/// which is what every cross-route comparison in this crate relies on.
#[derive(Clone, PartialEq, Eq)]
pub struct RatX {
    num: PolyX,
    den: PolyX,
}

impl RatX {
    /// Canonicalize `num/den`; `den` must be nonzero.
    pub fn new(num: PolyX, den: PolyX) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero("rational function".into()));
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: PolyX, den: PolyX) -> Self {
        if num.is_zero() {
            return RatX {
                num: PolyX::zero(),
                den: PolyX::one(),
            };
        }
        let g = PolyX::gcd(&num, &den);
        let (num, _) = num.divrem(&g);
        let (den, _) = den.divrem(&g);
        let lc = den.leading().expect("nonzero denominator").clone();
        RatX {
            num: num.mul_scalar(&lc.recip()),
            den: den.monic(),
        }
    }

    pub fn from_poly(p: PolyX) -> Self {
        RatX {
            num: p,
            den: PolyX::one(),
        }
    }

    pub fn constant(c: Scalar) -> Self {
        RatX::from_poly(PolyX::constant(c))
    }

    pub fn zero() -> Self {
        RatX::from_poly(PolyX::zero())
    }

    pub fn one() -> Self {
        RatX::from_poly(PolyX::one())
    }

    pub fn x() -> Self {
        RatX::from_poly(PolyX::x())
    }

    /// `x^e` for any integer `e`; negative exponents go to the denominator.
    pub fn x_pow(e: i64) -> Self {
        if e >= 0 {
            RatX::from_poly(PolyX::monomial(Scalar::one(), e as usize))
        } else {
            RatX {
                num: PolyX::one(),
                den: PolyX::monomial(Scalar::one(), (-e) as usize),
            }
        }
    }

    pub fn num(&self) -> &PolyX {
        &self.num
    }

    pub fn den(&self) -> &PolyX {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// Some(numerator) if the value is a polynomial.
    pub fn as_poly(&self) -> Option<&PolyX> {
        if self.den.is_one() {
            Some(&self.num)
        } else {
            None
        }
    }

    /// Exact evaluation; reports a pole error naming `x0` when the
    /// denominator vanishes there.
    pub fn eval_at(&self, x0: &Scalar) -> Result<Scalar> {
        let d = self.den.eval(x0);
        if d.is_zero() {
            return Err(Error::PoleAt(x0.to_string()));
        }
        Ok(self.num.eval(x0) / d)
    }

    pub fn inv(&self) -> Result<RatX> {
        if self.is_zero() {
            return Err(Error::DivisionByZero("inverse of zero".into()));
        }
        RatX::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, rhs: &RatX) -> Result<RatX> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero("rational function division".into()));
        }
        RatX::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn pow_int(&self, e: i64) -> Result<RatX> {
        if e == 0 {
            return Ok(RatX::one());
        }
        if e < 0 {
            return self.inv()?.pow_int(-e);
        }
        let mut acc = RatX::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        Ok(acc)
    }

    /// Substitute `x -> c*x`.
    pub fn scale_x(&self, c: &Scalar) -> RatX {
        RatX::reduce(self.num.scale_x(c), self.den.scale_x(c))
    }

    pub fn mul_scalar(&self, s: &Scalar) -> RatX {
        RatX::reduce(self.num.mul_scalar(s), self.den.clone())
    }
}

impl Add for &RatX {
    type Output = RatX;
    fn add(self, rhs: &RatX) -> RatX {
        RatX::reduce(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &RatX {
    type Output = RatX;
    fn sub(self, rhs: &RatX) -> RatX {
        RatX::reduce(
            &(&self.num * &rhs.den) - &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Mul for &RatX {
    type Output = RatX;
    fn mul(self, rhs: &RatX) -> RatX {
        if self.is_zero() || rhs.is_zero() {
            return RatX::zero();
        }
        RatX::reduce(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &RatX {
    type Output = RatX;
    fn neg(self) -> RatX {
        RatX {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RatX {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatX {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatX({})", self)
    }
}

/// Serializes as `{"num": [...], "den": [...]}` with exact coefficient
/// strings in ascending powers.
impl Serialize for RatX {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("RatX", 2)?;
        st.serialize_field("num", &self.num)?;
        st.serialize_field("den", &self.den)?;
        st.end()
    }
}
