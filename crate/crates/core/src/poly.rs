//! Dense univariate polynomials over exact rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::scalar::{pow_int, Scalar};

/// Polynomial in the formal variable `x` with exact rational coefficients,
/// stored in ascending powers.
///
/// Canonical form: no trailing zero coefficients. The zero polynomial has an
/// empty coefficient list and `degree() == None`, so equality of canonical
/// values is coefficient-wise structural equality.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct PolyX {
    coeffs: Vec<Scalar>,
}

impl PolyX {
    /// Build from ascending coefficients, trimming trailing zeros.
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        PolyX { coeffs }
    }

    pub fn zero() -> Self {
        PolyX { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        PolyX::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        PolyX::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        PolyX::new(vec![Scalar::zero(), Scalar::one()])
    }

    /// `c * x^deg`.
    pub fn monomial(c: Scalar, deg: usize) -> Self {
        if c.is_zero() {
            return PolyX::zero();
        }
        let mut coeffs = vec![Scalar::zero(); deg + 1];
        coeffs[deg] = c;
        PolyX { coeffs }
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    /// Horner evaluation at `x0`.
    pub fn eval(&self, x0: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x0 + c;
        }
        acc
    }

    /// Substitute `x -> c*x`.
    pub fn scale_x(&self, c: &Scalar) -> PolyX {
        let mut p = Scalar::one();
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| {
                let out = a * &p;
                p *= c;
                out
            })
            .collect();
        PolyX::new(coeffs)
    }

    /// Multiply by `x^k`.
    pub fn mul_xpow(&self, k: usize) -> PolyX {
        if self.is_zero() {
            return PolyX::zero();
        }
        let mut coeffs = vec![Scalar::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        PolyX { coeffs }
    }

    pub fn mul_scalar(&self, s: &Scalar) -> PolyX {
        if s.is_zero() {
            return PolyX::zero();
        }
        PolyX::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Divide every coefficient by the leading one.
    pub fn monic(&self) -> PolyX {
        match self.leading() {
            None => PolyX::zero(),
            Some(lc) => {
                let inv = lc.recip();
                self.mul_scalar(&inv)
            }
        }
    }

    /// Euclidean division; panics if `div` is zero.
    pub fn divrem(&self, div: &PolyX) -> (PolyX, PolyX) {
        let dd = div.degree().expect("polynomial division by zero");
        let dlc = div.leading().unwrap().clone();
        let mut rem = self.clone();
        let mut quot = vec![
            Scalar::zero();
            self.degree().map_or(0, |d| d.saturating_sub(dd) + 1)
        ];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let f = rem.leading().unwrap() / &dlc;
            let pos = rd - dd;
            // rem -= f * x^pos * div
            let mut coeffs = rem.coeffs;
            for (i, dc) in div.coeffs.iter().enumerate() {
                coeffs[pos + i] -= &f * dc;
            }
            rem = PolyX::new(coeffs);
            quot[pos] = f;
        }
        (PolyX::new(quot), rem)
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(a: &PolyX, b: &PolyX) -> PolyX {
        let mut u = a.clone();
        let mut v = b.clone();
        while !v.is_zero() {
            let (_, r) = u.divrem(&v);
            u = v;
            v = r;
        }
        u.monic()
    }

    /// The q-difference `(p(x) - p(qx)) / ((1-q) x)`, again a polynomial.
    pub fn delta_q(&self, q: &Scalar) -> PolyX {
        let one_minus_q = Scalar::one() - q;
        assert!(!one_minus_q.is_zero(), "delta_q requires q != 1");
        let coeffs = (1..self.coeffs.len())
            .map(|n| {
                // x^n |-> (1 - q^n)/(1 - q) x^{n-1}
                let qn = pow_int(q, n as i64);
                &self.coeffs[n] * ((Scalar::one() - qn) / &one_minus_q)
            })
            .collect();
        PolyX::new(coeffs)
    }
}

impl Add for &PolyX {
    type Output = PolyX;
    fn add(self, rhs: &PolyX) -> PolyX {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect();
        PolyX::new(coeffs)
    }
}

impl Sub for &PolyX {
    type Output = PolyX;
    fn sub(self, rhs: &PolyX) -> PolyX {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect();
        PolyX::new(coeffs)
    }
}

impl Mul for &PolyX {
    type Output = PolyX;
    fn mul(self, rhs: &PolyX) -> PolyX {
        if self.is_zero() || rhs.is_zero() {
            return PolyX::zero();
        }
        let mut coeffs = vec![Scalar::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        PolyX::new(coeffs)
    }
}

impl Neg for &PolyX {
    type Output = PolyX;
    fn neg(self) -> PolyX {
        PolyX {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for PolyX {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let needs_parens = c.is_negative() || !c.is_integer();
            match (i, needs_parens) {
                (0, _) => write!(f, "{}", c)?,
                (_, true) => write!(f, "({})", c)?,
                (_, false) if c.is_one() => {}
                (_, false) => write!(f, "{}", c)?,
            }
            if i > 0 {
                if !c.is_one() {
                    write!(f, "*")?;
                }
                if i == 1 {
                    write!(f, "x")?;
                } else {
                    write!(f, "x^{}", i)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PolyX {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyX({})", self)
    }
}

/// Serializes as a list of exact coefficient strings, ascending powers;
/// the zero polynomial serializes as `["0"]`.
impl Serialize for PolyX {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_zero() {
            let mut seq = serializer.serialize_seq(Some(1))?;
            seq.serialize_element("0")?;
            return seq.end();
        }
        let mut seq = serializer.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&c.to_string())?;
        }
        seq.end()
    }
}
