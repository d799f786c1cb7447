//! Evaluation of basic hypergeometric sums.
//!
//! Terminating sums are evaluated exactly. Non-terminating ones are returned
//! as exact rational partial sums together with a certified tail bound, so a
//! "numeric" comparison is still a comparison of exact numbers against an
//! explicit tolerance.

pub mod certified;
pub mod identities;

pub use certified::Certified;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::qpoch::in_q_power_lattice;
use crate::scalar::Scalar;

/// A series specification: upper parameters, lower parameters, base and
/// argument of `sum_n prod(upper; q)_n / [(q; q)_n prod(lower; q)_n] z^n`.
#[derive(Clone, Debug)]
pub struct PhiSpec {
    pub upper: Vec<Scalar>,
    pub lower: Vec<Scalar>,
    pub q: Scalar,
    pub z: Scalar,
}

impl PhiSpec {
    pub fn new(upper: Vec<Scalar>, lower: Vec<Scalar>, q: Scalar, z: Scalar) -> Self {
        PhiSpec { upper, lower, q, z }
    }

    /// The two-upper, one-lower series with parameters `(a, b; c)`.
    pub fn phi21(a: &Scalar, b: &Scalar, c: &Scalar, q: &Scalar, x: &Scalar) -> Self {
        PhiSpec {
            upper: vec![a.clone(), b.clone()],
            lower: vec![c.clone()],
            q: q.clone(),
            z: x.clone(),
        }
    }
}

/// Walks the terms of a [`PhiSpec`] exactly via the term ratio
/// `t_{n+1}/t_n = prod(1 - u q^n) / [(1 - q^{n+1}) prod(1 - b q^n)] * z`.
struct TermIter<'a> {
    spec: &'a PhiSpec,
    /// q^n for the current index n.
    qn: Scalar,
    /// q^{n+1}.
    qn1: Scalar,
    term: Scalar,
    n: usize,
}

impl<'a> TermIter<'a> {
    fn new(spec: &'a PhiSpec) -> Self {
        TermIter {
            spec,
            qn: Scalar::one(),
            qn1: spec.q.clone(),
            term: Scalar::one(),
            n: 0,
        }
    }

    fn current(&self) -> &Scalar {
        &self.term
    }

    /// Advance to term `n+1`; errors if a lower-parameter factor vanishes.
    fn advance(&mut self) -> Result<()> {
        let mut num = Scalar::one();
        for u in &self.spec.upper {
            num *= Scalar::one() - u * &self.qn;
        }
        let mut den = Scalar::one() - &self.qn1;
        debug_assert!(!den.is_zero());
        for b in &self.spec.lower {
            let factor = Scalar::one() - b * &self.qn;
            if factor.is_zero() {
                return Err(Error::LowerParameterPole {
                    factor: format!("1 - ({})*q^{}", b, self.n),
                    term: self.n + 1,
                });
            }
            den *= factor;
        }
        self.term = &self.term * num / den * &self.spec.z;
        self.qn = &self.qn * &self.spec.q;
        self.qn1 = &self.qn1 * &self.spec.q;
        self.n += 1;
        Ok(())
    }
}

/// Exact partial sum of the first `n_terms + 1` terms (indices `0..=n_terms`).
pub fn phi_partial(spec: &PhiSpec, n_terms: usize) -> Result<Scalar> {
    let mut it = TermIter::new(spec);
    let mut sum = it.current().clone();
    for _ in 0..n_terms {
        it.advance()?;
        sum += it.current();
    }
    Ok(sum)
}

/// Exact partial sum of the `(a, b; c)` series through `x^n_terms`.
pub fn phi21_partial(
    a: &Scalar,
    b: &Scalar,
    c: &Scalar,
    q: &Scalar,
    x: &Scalar,
    n_terms: usize,
) -> Result<Scalar> {
    phi_partial(&PhiSpec::phi21(a, b, c, q, x), n_terms)
}

/// Locate the termination order: the smallest `N >= 0` with some upper
/// parameter exactly `q^{-N}`.
pub fn termination_order(spec: &PhiSpec) -> Option<i64> {
    spec.upper
        .iter()
        .filter_map(|u| in_q_power_lattice(u, &spec.q))
        .filter(|&n| n <= 0)
        .map(|n| -n)
        .min()
}

/// Exact value of a terminating series.
///
/// Some upper parameter must be `q^-N` with `N >= 0`, detected exactly via
/// lattice membership, never by numeric closeness.
pub fn phi_terminating(spec: &PhiSpec) -> Result<Scalar> {
    let n = termination_order(spec).ok_or(Error::NoTerminatingParameter)?;
    phi_partial(spec, n as usize)
}

/// Exact-coefficient view: the list `t_0..t_N` of series terms with the
/// argument factored out (coefficient of `x^n` when `z = 1`). Used by the
/// operator-versus-series checks.
pub fn phi_coefficients(spec: &PhiSpec, n_terms: usize) -> Result<Vec<Scalar>> {
    let unit = PhiSpec {
        z: Scalar::one(),
        ..spec.clone()
    };
    let mut it = TermIter::new(&unit);
    let mut out = vec![it.current().clone()];
    for _ in 0..n_terms {
        it.advance()?;
        out.push(it.current().clone());
    }
    Ok(out)
}

/// Rigorous decreasing bound on `|t_{n+1}/t_n|`:
/// `|z| * prod(1 + |u| Q^n) / [(1 - Q^{n+1}) prod(1 - |b| Q^n)]` with
/// `Q = |q|`, valid once every `|b| Q^n < 1`. Returns `None` while some
/// lower-parameter magnitude still reaches 1.
fn ratio_bound(spec: &PhiSpec, n: usize) -> Option<Scalar> {
    let one = Scalar::one();
    let qa = spec.q.abs();
    let qn = crate::scalar::pow_int(&qa, n as i64);
    let mut num = spec.z.abs();
    for u in &spec.upper {
        num *= &one + u.abs() * &qn;
    }
    let mut den = &one - &qa * &qn;
    for b in &spec.lower {
        let f = &one - b.abs() * &qn;
        if !f.is_positive() {
            return None;
        }
        den *= f;
    }
    debug_assert!(den.is_positive());
    Some(num / den)
}

/// Exact partial sum plus a certified bound on the discarded tail.
///
/// The tail after term `N` is dominated by the geometric series with ratio
/// `ratio_bound(N+1) < 1` starting at `|t_{N+1}|`, both computed exactly.
/// Stops at the first `N` whose bound is at most `tol`.
pub fn phi_eval_certified(
    spec: &PhiSpec,
    tol: &Scalar,
    max_n: usize,
) -> Result<(Certified, usize)> {
    let za = spec.z.abs();
    if spec.z.is_zero() {
        return Ok((Certified::exact(Scalar::one()), 0));
    }
    if za >= Scalar::one() {
        return Err(Error::NonConvergent(za.to_string()));
    }
    let mut it = TermIter::new(spec);
    let mut sum = it.current().clone();
    for n in 0..=max_n {
        it.advance()?;
        let t_next = it.current().clone();
        if let Some(rho) = ratio_bound(spec, n + 1) {
            if rho < Scalar::one() {
                let bound = t_next.abs() / (Scalar::one() - rho);
                if bound <= *tol {
                    return Ok((Certified::new(sum, bound), n));
                }
            }
        }
        sum += &t_next;
    }
    Err(Error::BoundNotAchieved {
        target: tol.to_string(),
        max_n,
    })
}

/// Certified evaluation of the `(a, b; c)` series at `x`.
pub fn phi21_eval(
    a: &Scalar,
    b: &Scalar,
    c: &Scalar,
    q: &Scalar,
    x: &Scalar,
    tol: &Scalar,
    max_n: usize,
) -> Result<(Certified, usize)> {
    phi_eval_certified(&PhiSpec::phi21(a, b, c, q, x), tol, max_n)
}

/// Certified evaluation of the infinite product `(u; base)_inf`,
/// `prod_{n>=0} (1 - u base^n)`, for `|base| < 1`.
///
/// The partial product through `N-1` factors is exact; the remaining factors
/// each lie within `[1 - x_n, 1 + x_n]` for `x_n = |u| |base|^n`, so with
/// `S = sum_{n>=N} x_n < 1` the true value differs from the partial product
/// by at most `|partial| * S / (1 - S)`.
pub fn qpoch_inf_certified(
    u: &Scalar,
    base: &Scalar,
    tol: &Scalar,
    max_n: usize,
) -> Result<Certified> {
    let one = Scalar::one();
    let ba = base.abs();
    if ba >= one {
        return Err(Error::NonConvergent(ba.to_string()));
    }
    if u.is_zero() {
        return Ok(Certified::exact(one));
    }
    let geom = &one - &ba; // 1 - |base|
    let mut partial = Scalar::one();
    let mut pw = u.clone(); // u * base^n
    for _ in 0..=max_n {
        // tail sum from the current factor on
        let s = pw.abs() / &geom;
        if s < one {
            let bound = partial.abs() * &s / (&one - &s);
            if bound <= *tol {
                return Ok(Certified::new(partial, bound));
            }
        }
        let factor = &one - &pw;
        if factor.is_zero() {
            // The product hits the zero factor exactly.
            return Ok(Certified::exact(Scalar::zero()));
        }
        partial *= factor;
        pw *= base;
    }
    Err(Error::BoundNotAchieved {
        target: tol.to_string(),
        max_n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{pow_int, s_int, s_ratio, ten_pow_neg};

    fn spec_params() -> (Scalar, Scalar, Scalar, Scalar) {
        (s_ratio(2, 3), s_ratio(3, 5), s_ratio(5, 7), s_ratio(1, 4))
    }

    /// Independent oracle: sum the series definition term by term, each term
    /// assembled from scratch as a quotient of explicit finite products.
    fn direct_sum(spec: &PhiSpec, n_terms: usize) -> Scalar {
        let mut total = Scalar::zero();
        for n in 0..=n_terms {
            let mut term = pow_int(&spec.z, n as i64);
            for u in &spec.upper {
                term *= crate::qpoch::qpoch(u, &spec.q, n as i64).unwrap();
            }
            term /= crate::qpoch::qpoch(&spec.q, &spec.q, n as i64).unwrap();
            for b in &spec.lower {
                term /= crate::qpoch::qpoch(b, &spec.q, n as i64).unwrap();
            }
            total += term;
        }
        total
    }

    #[test]
    fn single_term_when_top_parameter_is_one() {
        let (_, b, c, q) = spec_params();
        let spec = PhiSpec::new(vec![s_int(1), b], vec![c], q, s_ratio(1, 2));
        assert_eq!(phi_terminating(&spec).unwrap(), s_int(1));
    }

    #[test]
    fn terminating_matches_direct_summation() {
        let (_, b, c, q) = spec_params();
        let spec = PhiSpec::new(
            vec![pow_int(&q, -3), b],
            vec![c],
            q.clone(),
            s_ratio(5, 3),
        );
        assert_eq!(termination_order(&spec), Some(3));
        assert_eq!(phi_terminating(&spec).unwrap(), direct_sum(&spec, 3));
    }

    #[test]
    fn no_terminating_parameter_is_reported() {
        let (a, b, c, q) = spec_params();
        let spec = PhiSpec::new(vec![a, b], vec![c], q, s_ratio(1, 2));
        assert!(matches!(
            phi_terminating(&spec),
            Err(Error::NoTerminatingParameter)
        ));
    }

    #[test]
    fn partial_sums_match_definition_expansion() {
        let (a, b, c, q) = spec_params();
        let x = s_ratio(1, 8);
        // N = 1: 1 + (1-a)(1-b)/((1-q)(1-c)) x
        let expected = s_int(1)
            + (s_int(1) - &a) * (s_int(1) - &b) / ((s_int(1) - &q) * (s_int(1) - &c)) * &x;
        assert_eq!(phi21_partial(&a, &b, &c, &q, &x, 1).unwrap(), expected);
        // x = 0 collapses every partial sum to 1
        assert_eq!(
            phi21_partial(&a, &b, &c, &q, &s_int(0), 17).unwrap(),
            s_int(1)
        );
    }

    #[test]
    fn deep_partial_sums_agree_to_twenty_digits() {
        let (a, b, c, q) = spec_params();
        let x = s_ratio(1, 8);
        let s40 = phi21_partial(&a, &b, &c, &q, &x, 40).unwrap();
        let s60 = phi21_partial(&a, &b, &c, &q, &x, 60).unwrap();
        assert!((s40 - s60).abs() < ten_pow_neg(20));
    }

    #[test]
    fn certified_eval_is_honest_under_refinement() {
        let (a, b, c, q) = spec_params();
        let x = s_ratio(1, 8);
        let tol = ten_pow_neg(12);
        let (val, n) = phi21_eval(&a, &b, &c, &q, &x, &tol, 500).unwrap();
        assert!(val.bound <= tol);
        // doubling the summation depth moves the value by less than the bound
        let deeper = phi21_partial(&a, &b, &c, &q, &x, 2 * (n + 1)).unwrap();
        assert!((deeper - &val.value).abs() <= val.bound);
    }

    #[test]
    fn certified_eval_at_zero_argument_is_exact() {
        let (a, b, c, q) = spec_params();
        let (val, n) = phi21_eval(&a, &b, &c, &q, &s_int(0), &ten_pow_neg(12), 10).unwrap();
        assert_eq!(val.value, s_int(1));
        assert!(val.bound.is_zero());
        assert_eq!(n, 0);
    }

    #[test]
    fn divergent_argument_is_rejected() {
        let (a, b, c, q) = spec_params();
        assert!(matches!(
            phi21_eval(&a, &b, &c, &q, &s_int(2), &ten_pow_neg(6), 50),
            Err(Error::NonConvergent(_))
        ));
    }

    #[test]
    fn lower_parameter_pole_is_named() {
        let q = s_ratio(1, 4);
        // lower parameter q^{-2} hits (1 - b q^2) = 0 at the n = 2 -> 3 step
        let spec = PhiSpec::new(
            vec![pow_int(&q, -5), s_ratio(3, 5)],
            vec![pow_int(&q, -2)],
            q,
            s_ratio(1, 2),
        );
        let err = phi_terminating(&spec).unwrap_err();
        assert!(matches!(err, Error::LowerParameterPole { term: 3, .. }), "{err}");
    }

    #[test]
    fn infinite_product_certification() {
        let q = s_ratio(1, 4);
        let tol = ten_pow_neg(15);
        let cert = qpoch_inf_certified(&s_ratio(1, 2), &q, &tol, 400).unwrap();
        assert!(cert.bound <= tol);
        // refining the truncation stays within the reported bound
        let mut exact = Scalar::one();
        let mut pw = s_ratio(1, 2);
        for _ in 0..120 {
            exact *= s_int(1) - &pw;
            pw *= &q;
        }
        assert!((exact - &cert.value).abs() <= s_int(2) * &cert.bound);
    }
}
