//! q-shifted factorials with integer index, in scalars and in `x`.
//!
//! `(s; q)_n` is the product `(1-s)(1-sq)...(1-sq^{n-1})` for `n >= 0` and is
//! extended to negative index through the reciprocal product
//! `(s; q)_{-p} = 1 / [(1 - s q^{-1}) ... (1 - s q^{-p})]`, which satisfies
//! the same index-additivity law and is computable without infinite products.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::PolyX;
use crate::rat::RatX;
use crate::scalar::Scalar;

/// `(s; q)_n` for any integer `n`.
///
/// For `n < 0` the factors `1 - s q^{-j}` (`j = 1..-n`) must all be nonzero;
/// a vanishing one is reported by name.
pub fn qpoch(s: &Scalar, q: &Scalar, n: i64) -> Result<Scalar> {
    if n >= 0 {
        let mut acc = Scalar::one();
        let mut p = s.clone();
        for _ in 0..n {
            acc *= Scalar::one() - &p;
            p *= q;
        }
        Ok(acc)
    } else {
        assert!(!q.is_zero(), "negative-index q-shifted factorial needs q != 0");
        let qinv = q.recip();
        let mut acc = Scalar::one();
        let mut p = s * &qinv;
        for j in 1..=(-n) {
            let factor = Scalar::one() - &p;
            if factor.is_zero() {
                return Err(Error::VanishingFactor {
                    factor: format!("1 - ({})*({})^(-{})", s, q, j),
                    context: format!("({}; {})_{}", s, q, n),
                });
            }
            acc *= factor;
            p *= &qinv;
        }
        Ok(acc.recip())
    }
}

/// `(u*x; q)_n` as a rational function of `x`: a polynomial for `n >= 0`,
/// the reciprocal of a polynomial for `n < 0`.
pub fn qpoch_x(u: &Scalar, q: &Scalar, n: i64) -> RatX {
    if n >= 0 {
        let mut acc = PolyX::one();
        let mut p = u.clone();
        for _ in 0..n {
            let factor = PolyX::new(vec![Scalar::one(), -&p]);
            acc = &acc * &factor;
            p *= q;
        }
        RatX::from_poly(acc)
    } else {
        assert!(!q.is_zero(), "negative-index q-shifted factorial needs q != 0");
        let qinv = q.recip();
        let mut acc = PolyX::one();
        let mut p = u * &qinv;
        for _ in 1..=(-n) {
            let factor = PolyX::new(vec![Scalar::one(), -&p]);
            acc = &acc * &factor;
            p *= &qinv;
        }
        // Constant term of acc is 1, so acc is nonzero.
        RatX::new(PolyX::one(), acc).expect("nonzero denominator")
    }
}

/// Iteration cap for the lattice walk. `|q| <= 1/2` reaches ~2^4096 before
/// giving up, far past anything the sweeps produce.
const LATTICE_CAP: i64 = 4096;

/// Exact test whether `v = q^n` for some integer `n`.
///
/// Walks the powers of `q` in both directions, pruning by magnitude: the
/// positive powers shrink strictly, the negative ones grow strictly, so each
/// direction terminates as soon as it passes `|v|`. The comparison at each
/// step is exact.
pub fn in_q_power_lattice(v: &Scalar, q: &Scalar) -> Option<i64> {
    debug_assert!(!v.is_zero() && !q.is_zero() && q.abs() < Scalar::one());
    if v.is_zero() || q.is_zero() {
        return None;
    }
    let av = v.abs();
    let one = Scalar::one();
    if av <= one {
        // candidates n >= 0
        let mut w = Scalar::one();
        for n in 0..=LATTICE_CAP {
            if w == *v {
                return Some(n);
            }
            w *= q;
            if w.abs() < av {
                break;
            }
        }
    }
    if av >= one {
        // candidates n < 0
        let qinv = q.recip();
        let mut w = qinv.clone();
        for n in 1..=LATTICE_CAP {
            if w.abs() > av {
                break;
            }
            if w == *v {
                return Some(-n);
            }
            w *= &qinv;
        }
    }
    None
}
