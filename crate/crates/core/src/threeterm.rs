//! Assembly of the three term relation coefficients `(Q, R)` with
//!
//! `phi(a q^k, b q^l; c q^m) = Q * phi(aq, bq; cq) + R * phi(a, b; c)`
//!
//! (all series at the same base `q` and argument `x`), plus the structural
//! checks tying the routes together and the numeric residual verifier.
//!
//! The pair `(Q, R)` is unique for each shift, so the three routes — T2
//! (ascending series expansion), T3 (descending series expansion) and OP
//! (operator reduction) — must agree coefficient-for-coefficient; canonical
//! [`RatX`] form makes that an exact structural comparison.

use serde::Serialize;

use crate::coefficients::{
    lambda, lambda_prime, mu1, poly_part, poly_part_tilde, CoeffContext, ShiftTriple,
};
use crate::error::{Error, Result};
use crate::params::ParamSet;
use crate::poly::PolyX;
use crate::qpoch::{qpoch, qpoch_x};
use crate::qseries::{phi21_eval, Certified};
use crate::rat::RatX;
use crate::scalar::{pow_int, Scalar};

use num_traits::{One, Signed, Zero};

/// Which computation path produced a coefficient pair.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Route {
    T2,
    T3,
    Op,
}

impl Route {
    pub fn label(&self) -> &'static str {
        match self {
            Route::T2 => "T2",
            Route::T3 => "T3",
            Route::Op => "OP",
        }
    }

    pub const ALL: [Route; 3] = [Route::T2, Route::T3, Route::Op];
}

impl std::fmt::Display for Route {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// The coefficient pair of the relation for one shift and parameter set.
#[derive(Clone, Debug)]
pub struct ThreeTermCoeffs {
    pub q_coeff: RatX,
    pub r_coeff: RatX,
    pub shift: ShiftTriple,
    pub params: ParamSet,
    pub route: Route,
}

impl ThreeTermCoeffs {
    /// Coefficient-wise equality of the pair (ignores the route tag).
    pub fn same_pair(&self, other: &ThreeTermCoeffs) -> bool {
        self.q_coeff == other.q_coeff && self.r_coeff == other.r_coeff
    }
}

/// Route T2: `Q` from the ascending polynomial part at `(k, l, m)` and `R`
/// from the part at `(k-1, l-1, m-1)` with parameters `(aq, bq, cq)`.
pub fn qr_route_t2(ctx: &CoeffContext) -> Result<ThreeTermCoeffs> {
    let ShiftTriple { k: _, l: _, m } = ctx.shift;
    let ParamSet { a, b, c, q, .. } = &ctx.params;
    let one = Scalar::one();

    let den = (q - c) * (&one - c);
    if den.is_zero() {
        return Err(Error::VanishingFactor {
            factor: "(q-c)(1-c)".into(),
            context: "Q prefactor".into(),
        });
    }
    let pref = -((&one - a) * (&one - b) * c) / den;
    let abq_c = a * b * q / c;

    let p_main = RatX::from_poly(poly_part(ctx)?);
    let q_coeff = RatX::x_pow(1 - m.max(0))
        .mul_scalar(&pref)
        .div(&qpoch_x(&abq_c, q, ctx.big_m() - 1))?;
    let q_coeff = &q_coeff * &p_main;

    let p_shift = RatX::from_poly(poly_part(&ctx.shifted_decremented())?);
    let r_coeff = -&RatX::x_pow(-(m - 1).max(0))
        .div(&qpoch_x(&abq_c, q, ctx.big_m_prime()))?;
    let r_coeff = &r_coeff * &p_shift;

    Ok(ThreeTermCoeffs {
        q_coeff,
        r_coeff,
        shift: ctx.shift,
        params: ctx.params.clone(),
        route: Route::T2,
    })
}

/// Route T3: same prefactors as T2 scaled by `lambda` / `lambda'`, applied
/// to the descending polynomial part.
pub fn qr_route_t3(ctx: &CoeffContext) -> Result<ThreeTermCoeffs> {
    let ShiftTriple { k: _, l: _, m } = ctx.shift;
    let ParamSet { a, b, c, q, .. } = &ctx.params;
    let one = Scalar::one();

    let den = (q - c) * (&one - c);
    if den.is_zero() {
        return Err(Error::VanishingFactor {
            factor: "(q-c)(1-c)".into(),
            context: "Q prefactor".into(),
        });
    }
    let pref = -(lambda(ctx)? * (&one - a) * (&one - b) * c) / den;
    let abq_c = a * b * q / c;

    let pt_main = RatX::from_poly(poly_part_tilde(ctx)?);
    let q_coeff = RatX::x_pow(1 - m.max(0))
        .mul_scalar(&pref)
        .div(&qpoch_x(&abq_c, q, ctx.big_m() - 1))?;
    let q_coeff = &q_coeff * &pt_main;

    let pt_shift = RatX::from_poly(poly_part_tilde(&ctx.shifted_decremented())?);
    let r_coeff = RatX::x_pow(-(m - 1).max(0))
        .mul_scalar(&-lambda_prime(ctx)?)
        .div(&qpoch_x(&abq_c, q, ctx.big_m_prime()))?;
    let r_coeff = &r_coeff * &pt_shift;

    Ok(ThreeTermCoeffs {
        q_coeff,
        r_coeff,
        shift: ctx.shift,
        params: ctx.params.clone(),
        route: Route::T3,
    })
}

/// Public entry point. Shifts with `k > l` are computed through the
/// `a <-> b` symmetry of the series: the swapped computation already yields
/// the numeric coefficients of the original relation, so only the recorded
/// shift and parameters are mapped back.
pub fn qr(shift: ShiftTriple, params: &ParamSet, route: Route) -> Result<ThreeTermCoeffs> {
    let (nshift, nparams) = if shift.is_normalized() {
        (shift, params.clone())
    } else {
        (shift.swapped(), params.swapped())
    };
    nparams.genericity_check(&[nshift])?;
    let inner = match route {
        Route::T2 => qr_route_t2(&CoeffContext::new(nparams, nshift))?,
        Route::T3 => qr_route_t3(&CoeffContext::new(nparams, nshift))?,
        Route::Op => crate::operator::qr_oracle(nshift, &nparams)?,
    };
    Ok(ThreeTermCoeffs {
        q_coeff: inner.q_coeff,
        r_coeff: inner.r_coeff,
        shift,
        params: params.clone(),
        route,
    })
}

/// Coefficients of the general relation obtained by eliminating the common
/// `phi(aq, bq; cq)` term between the relations for `shift1` and `shift2`:
///
/// `phi(shift1) = Q' * phi(shift2) + R' * phi(a, b; c)` with
/// `Q' = Q1/Q2` and `R' = R1 - Q' R2`.
///
/// Degenerates when `Q2 = 0` (the `shift2` relation contains no
/// `phi(aq, bq; cq)` term to eliminate), reported as an error.
pub fn general_relation(
    shift1: ShiftTriple,
    shift2: ShiftTriple,
    params: &ParamSet,
    route: Route,
) -> Result<(RatX, RatX)> {
    let c1 = qr(shift1, params, route)?;
    let c2 = qr(shift2, params, route)?;
    if c2.q_coeff.is_zero() {
        return Err(Error::DegenerateElimination);
    }
    let q_prime = c1.q_coeff.div(&c2.q_coeff)?;
    let r_prime = &c1.r_coeff - &(&q_prime * &c2.r_coeff);
    Ok((q_prime, r_prime))
}

/// Report of the polynomial-part checks for one context: proportionality of
/// the two parts, the degree bound, and the closed form of the top
/// coefficient.
#[derive(Clone, Debug, Serialize)]
pub struct PolyPartReport {
    pub shift: String,
    pub proportional: bool,
    pub degree_within_bound: bool,
    pub leading_coeff_matches: bool,
}

impl PolyPartReport {
    pub fn pass(&self) -> bool {
        self.proportional && self.degree_within_bound && self.leading_coeff_matches
    }
}

/// Check, for a normalized context: `poly_part = lambda * poly_part_tilde`;
/// `deg poly_part_tilde <= d`; and the coefficient of `x^d` equals the
/// two-case closed form (`0 = 0` accepted when the degree drops below `d`).
pub fn check_poly_part(ctx: &CoeffContext) -> Result<PolyPartReport> {
    let ShiftTriple { k, l, m } = ctx.shift;
    let ParamSet { a, b, c, q, .. } = &ctx.params;
    let p = poly_part(ctx)?;
    let pt = poly_part_tilde(ctx)?;
    let lam = lambda(ctx)?;

    let proportional = p == pt.mul_scalar(&lam);

    let d = ctx.degree_bound();
    let degree_within_bound = match pt.degree() {
        None => true,
        Some(deg) => d >= 0 && (deg as i64) <= d,
    };

    // Closed form of the x^d coefficient.
    let head = pow_int(&(c / (a * b)), k) * pow_int(q, k * (m - k - l + 1));
    let formula = if k == l {
        let ta = pow_int(a, m - 2 * k) * qpoch(a, q, k)? * qpoch(&(a * q / c), q, k - m)?;
        let tb = pow_int(b, m - 2 * k) * qpoch(b, q, k)? * qpoch(&(b * q / c), q, k - m)?;
        head * (ta - tb)
    } else {
        // identical to mu1, written out as the displayed closed form
        head * pow_int(a, m - k - l) * qpoch(a, q, k)? * qpoch(&(a * q / c), q, k - m)?
            / qpoch(&(a * q / b), q, k - l)?
    };
    debug_assert!(k == l || formula == mu1(ctx)?);
    let actual = if d >= 0 { pt.coeff(d as usize) } else { Scalar::zero() };
    let leading_coeff_matches = actual == formula && (d >= 0 || pt.is_zero());

    Ok(PolyPartReport {
        shift: ctx.shift.to_string(),
        proportional,
        degree_within_bound,
        leading_coeff_matches,
    })
}

/// Report of the cross-shift identity tying `Q` at `(k-1, l-1, m-1)` with
/// parameters `(aq, bq, cq)` to `R` at `(k, l, m)`.
#[derive(Clone, Debug, Serialize)]
pub struct QrShiftReport {
    pub shift: String,
    pub pass: bool,
}

/// Exact check of
/// `Q(k-1, l-1, m-1)|_{(a,b,c)->(aq,bq,cq)} =
///  (1-aq)(1-bq) x (c-abqx) / [(1-c)(1-cq)] * R(k, l, m)`.
pub fn check_qr_shift(shift: ShiftTriple, params: &ParamSet, route: Route) -> Result<QrShiftReport> {
    let one = Scalar::one();
    let ParamSet { a, b, c, q, .. } = params;

    let lhs = qr(shift.decremented(), &params.shifted_up(), route)?.q_coeff;

    let den = (&one - c) * (&one - &(c * q));
    if den.is_zero() {
        return Err(Error::VanishingFactor {
            factor: "(1-c)(1-cq)".into(),
            context: "qr shift identity".into(),
        });
    }
    let scale = (&one - &(a * q)) * (&one - &(b * q)) / den;
    // x (c - abq x)
    let poly = PolyX::new(vec![Scalar::zero(), c.clone(), -(a * b * q)]);
    let factor = RatX::from_poly(poly.mul_scalar(&scale));
    let rhs = &factor * &qr(shift, params, route)?.r_coeff;

    Ok(QrShiftReport {
        shift: shift.to_string(),
        pass: lhs == rhs,
    })
}

/// Numeric residual report for one `(shift, x0)` sample.
#[derive(Clone, Debug, Serialize)]
pub struct ResidualReport {
    pub shift: String,
    pub x0: String,
    /// `|lhs - Q*phi1 - R*phi0|` on the exact partial sums.
    pub residual: String,
    /// Combined certified truncation bound.
    pub bound: String,
    pub pass: bool,
}

/// Evaluate all three series at `x0` with certified tails, evaluate `Q` and
/// `R` exactly at `x0`, and check the relation residual against the combined
/// bound plus `tol`.
pub fn verify_numeric(
    shift: ShiftTriple,
    params: &ParamSet,
    x0: &Scalar,
    route: Route,
    tol: &Scalar,
    max_n: usize,
) -> Result<ResidualReport> {
    if x0.abs() >= Scalar::one() {
        return Err(Error::NonConvergent(x0.abs().to_string()));
    }
    let coeffs = qr(shift, params, route)?;
    let qv = coeffs.q_coeff.eval_at(x0)?;
    let rv = coeffs.r_coeff.eval_at(x0)?;

    let ParamSet { a, b, c, q, .. } = params;
    let inner_tol = tol / crate::scalar::s_int(8);
    let (lhs, _) = phi21_eval(
        &(a * pow_int(q, shift.k)),
        &(b * pow_int(q, shift.l)),
        &(c * pow_int(q, shift.m)),
        q,
        x0,
        &inner_tol,
        max_n,
    )?;
    let (phi1, _) = phi21_eval(&(a * q), &(b * q), &(c * q), q, x0, &inner_tol, max_n)?;
    let (phi0, _) = phi21_eval(a, b, c, q, x0, &inner_tol, max_n)?;

    let combo = phi1.mul_scalar(&qv).add(&phi0.mul_scalar(&rv));
    let diff = lhs.sub(&combo);
    let residual = diff.value.abs();
    let bound = diff.bound;
    let pass = residual <= &bound + tol;

    Ok(ResidualReport {
        shift: shift.to_string(),
        x0: x0.to_string(),
        residual: residual.to_string(),
        bound: bound.to_string(),
        pass,
    })
}

/// The default `(shift, x0)` sample cells used by the verification command
/// and the acceptance run: twenty cells with `|x0| <= 1/4` spread over the
/// shift box, including the trivial relation.
pub fn default_verify_samples() -> Vec<(ShiftTriple, Scalar)> {
    use crate::scalar::s_ratio;
    let xs = [
        s_ratio(1, 8),
        s_ratio(-1, 10),
        s_ratio(1, 4),
        s_ratio(-1, 4),
        s_ratio(3, 16),
    ];
    let shifts = [
        (0, 0, 0),
        (1, 0, 0),
        (1, 1, 1),
        (1, 0, 1),
        (3, -2, 1),
        (-1, 2, -2),
        (2, 2, 2),
        (-3, -3, -3),
        (0, 3, -1),
        (-2, 1, 3),
        (3, 3, -3),
        (-1, -2, 2),
        (2, -1, 0),
        (0, -3, 2),
        (1, 2, 3),
        (-3, 0, 1),
        (2, 0, -2),
        (-2, -2, 1),
        (3, 1, 2),
        (0, 1, -3),
    ];
    shifts
        .iter()
        .enumerate()
        .map(|(i, &(k, l, m))| (ShiftTriple::new(k, l, m), xs[i % xs.len()].clone()))
        .collect()
}

/// `Certified` linear combination `q*phi1 + r*phi0`; exposed for reuse by
/// the general-relation residual check.
pub fn certified_combination(qv: &Scalar, phi1: &Certified, rv: &Scalar, phi0: &Certified) -> Certified {
    phi1.mul_scalar(qv).add(&phi0.mul_scalar(rv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::context;
    use crate::params::default_param_sets;
    use crate::scalar::{s_int, s_ratio, ten_pow_neg};

    fn params0() -> ParamSet {
        default_param_sets().remove(0)
    }

    #[test]
    fn unit_shift_is_q_one_r_zero() {
        let p = params0();
        for route in Route::ALL {
            let coeffs = qr(ShiftTriple::new(1, 1, 1), &p, route).unwrap();
            assert!(coeffs.q_coeff.is_one(), "{route}");
            assert!(coeffs.r_coeff.is_zero(), "{route}");
        }
    }

    #[test]
    fn zero_shift_is_q_zero_r_one() {
        let p = params0();
        for route in Route::ALL {
            let coeffs = qr(ShiftTriple::new(0, 0, 0), &p, route).unwrap();
            assert!(coeffs.q_coeff.is_zero(), "{route}");
            assert!(coeffs.r_coeff.is_one(), "{route}");
        }
    }

    #[test]
    fn contiguous_a_step_closed_form() {
        // (Q, R)(1,0,0) = (a(1-b)x/(1-c), 1): the k > l input exercises the
        // symmetry normalization on every route.
        let p = params0();
        let expected_q = RatX::from_poly(PolyX::x().mul_scalar(
            &(&p.a * (s_int(1) - &p.b) / (s_int(1) - &p.c)),
        ));
        for route in Route::ALL {
            let coeffs = qr(ShiftTriple::new(1, 0, 0), &p, route).unwrap();
            assert_eq!(coeffs.q_coeff, expected_q, "{route}");
            assert!(coeffs.r_coeff.is_one(), "{route}");
        }
    }

    #[test]
    fn symmetry_swaps_exactly() {
        let p = params0();
        let lhs = qr(ShiftTriple::new(1, 0, 0), &p, Route::T2).unwrap();
        let rhs = qr(ShiftTriple::new(0, 1, 0), &p.swapped(), Route::T2).unwrap();
        assert!(lhs.same_pair(&rhs));
    }

    #[test]
    fn r_coefficient_of_mixed_step_matches_closed_form() {
        // R(1,0,1) = -b(1-c)/(c-b)
        let p = params0();
        for route in Route::ALL {
            let coeffs = qr(ShiftTriple::new(1, 0, 1), &p, route).unwrap();
            let expected =
                RatX::constant(-(&p.b * (s_int(1) - &p.c)) / (&p.c - &p.b));
            assert_eq!(coeffs.r_coeff, expected, "{route}");
        }
    }

    #[test]
    fn routes_agree_on_spot_shifts() {
        let p = params0();
        for (k, l, m) in [(2, 2, 2), (2, -1, 3), (-2, 3, 1), (-1, -1, -1), (0, 2, -2)] {
            let shift = ShiftTriple::new(k, l, m);
            let t2 = qr(shift, &p, Route::T2).unwrap();
            let t3 = qr(shift, &p, Route::T3).unwrap();
            let op = qr(shift, &p, Route::Op).unwrap();
            assert!(t2.same_pair(&t3), "T2 vs T3 at {shift:?}");
            assert!(t2.same_pair(&op), "T2 vs OP at {shift:?}");
        }
    }

    #[test]
    fn general_relation_trivial_cases() {
        let p = params0();
        let s = ShiftTriple::new(2, 0, 1);
        let (qp, rp) = general_relation(s, s, &p, Route::T2).unwrap();
        assert!(qp.is_one());
        assert!(rp.is_zero());

        // eliminating against the unit shift reduces to the plain relation
        let unit = ShiftTriple::new(1, 1, 1);
        let (qp, rp) = general_relation(s, unit, &p, Route::T2).unwrap();
        let direct = qr(s, &p, Route::T2).unwrap();
        assert_eq!(qp, direct.q_coeff);
        assert_eq!(rp, direct.r_coeff);
    }

    #[test]
    fn general_relation_degenerates_on_zero_q() {
        let p = params0();
        let err = general_relation(
            ShiftTriple::new(1, 0, 0),
            ShiftTriple::new(0, 0, 0),
            &p,
            Route::T2,
        )
        .unwrap_err();
        assert!(matches!(err, Error::DegenerateElimination));
    }

    #[test]
    fn general_relation_composes() {
        let p = params0();
        let s1 = ShiftTriple::new(2, 0, 1);
        let s2 = ShiftTriple::new(0, 2, -1);
        let s3 = ShiftTriple::new(-1, 1, 0);
        let (q12, r12) = general_relation(s1, s2, &p, Route::T2).unwrap();
        let (q23, r23) = general_relation(s2, s3, &p, Route::T2).unwrap();
        let (q13, r13) = general_relation(s1, s3, &p, Route::T2).unwrap();
        assert_eq!(&q12 * &q23, q13);
        assert_eq!(&(&q12 * &r23) + &r12, r13);
    }

    #[test]
    fn poly_part_checks_on_spot_shifts() {
        let p = params0();
        for (k, l, m) in [(1, 1, 1), (0, 0, 0), (0, 1, 0), (-2, 1, 3), (1, 3, -1)] {
            let report = check_poly_part(&context(&p, k, l, m)).unwrap();
            assert!(report.pass(), "({k},{l},{m}): {report:?}");
        }
    }

    #[test]
    fn qr_shift_identity_on_spot_shifts() {
        let p = params0();
        for (k, l, m) in [(1, 1, 1), (0, 0, 0), (2, -1, 1), (-1, 2, -2)] {
            let report =
                check_qr_shift(ShiftTriple::new(k, l, m), &p, Route::T2).unwrap();
            assert!(report.pass, "({k},{l},{m})");
        }
    }

    #[test]
    fn numeric_residual_zero_for_identity_relation() {
        let p = params0();
        let report = verify_numeric(
            ShiftTriple::new(0, 0, 0),
            &p,
            &s_ratio(1, 8),
            Route::T2,
            &ten_pow_neg(12),
            500,
        )
        .unwrap();
        assert_eq!(report.residual, "0");
        assert!(report.pass);
    }

    #[test]
    fn numeric_residual_small_for_heine_step() {
        let p = params0();
        let report = verify_numeric(
            ShiftTriple::new(1, 0, 0),
            &p,
            &s_ratio(1, 8),
            Route::T2,
            &ten_pow_neg(12),
            500,
        )
        .unwrap();
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn numeric_residual_small_for_wide_shift() {
        let p = params0();
        let report = verify_numeric(
            ShiftTriple::new(3, -2, 1),
            &p,
            &s_ratio(1, 8),
            Route::T2,
            &ten_pow_neg(12),
            500,
        )
        .unwrap();
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn pole_sample_is_reported() {
        // At shift (2,2,2) the R coefficient carries x^{-1}, so x0 = 0 is a
        // pole and must be named.
        let p = params0();
        let err = verify_numeric(
            ShiftTriple::new(2, 2, 2),
            &p,
            &s_int(0),
            Route::T2,
            &ten_pow_neg(12),
            500,
        )
        .unwrap_err();
        assert!(matches!(err, Error::PoleAt(ref s) if s == "0"), "{err}");
    }

    #[test]
    fn genericity_failure_surfaces_from_qr() {
        let q = s_ratio(1, 4);
        let bad = ParamSet::new_unchecked(s_ratio(2, 3), s_ratio(2, 3), s_ratio(5, 7), q);
        let err = qr(ShiftTriple::new(1, 0, 0), &bad, Route::T2).unwrap_err();
        assert!(matches!(err, Error::Genericity(_)));
    }

    #[test]
    fn relation_at_zero_argument_forces_q_plus_r_equals_one() {
        // phi(.,.;.;q,0) = 1 for every parameter set, so Q(0) + R(0) = 1
        // whenever 0 is not a pole.
        let p = params0();
        for (k, l, m) in [(1, 0, 0), (0, 1, -1), (-1, -2, 0), (2, 1, 1)] {
            let coeffs = qr(ShiftTriple::new(k, l, m), &p, Route::T2).unwrap();
            let q0 = coeffs.q_coeff.eval_at(&s_int(0));
            let r0 = coeffs.r_coeff.eval_at(&s_int(0));
            if let (Ok(q0), Ok(r0)) = (q0, r0) {
                assert_eq!(q0 + r0, s_int(1), "({k},{l},{m})");
            }
        }
    }
}
