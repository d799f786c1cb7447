//! q-difference operator algebra and the independent OP route.
//!
//! An operator is a polynomial `sum_i r_i(x) D^i` in the q-difference
//! operator `D: y(x) |-> (y(x) - y(qx)) / ((1-q)x)` with rational-function
//! coefficients. Composition uses the twisted rule
//! `D r(x) = r(qx) D + (D r)(x)`, the multiplicative extension of the
//! commutation relation `D x = 1 + q x D`.
//!
//! The base series solves the second-order equation given by [`make_lq`].
//! Composing one first-order contiguity factor per unit parameter step and
//! reducing modulo that operator after every composition leaves a remainder
//! `Qt * D + Rt` of degree at most one; converting `(Qt, Rt)` by an explicit
//! scalar factor yields the three term coefficients `(Q, R)` by a route
//! completely independent of the series-expansion formulas.
//!
//! Reduction sidedness: quotients accumulate on the left (`quot . L + rem`),
//! matching how new factors are composed onto the running operator; left
//! multiples of [`make_lq`] therefore reduce to zero, which the unit tests
//! pin down.

use std::fmt;

use num_traits::{One, Zero};

use crate::coefficients::ShiftTriple;
use crate::error::{Error, Result};
use crate::params::ParamSet;
use crate::poly::PolyX;
use crate::rat::RatX;
use crate::scalar::{pow_int, Scalar};
use crate::threeterm::{Route, ThreeTermCoeffs};
use crate::qpoch::qpoch;

/// `sum_i r_i(x) D^i` with canonical degree (top coefficient nonzero).
#[derive(Clone, PartialEq, Eq)]
pub struct QDiffOp {
    coeffs: Vec<RatX>,
    q: Scalar,
}

impl QDiffOp {
    pub fn new(mut coeffs: Vec<RatX>, q: Scalar) -> Self {
        while coeffs.last().is_some_and(RatX::is_zero) {
            coeffs.pop();
        }
        QDiffOp { coeffs, q }
    }

    pub fn zero(q: &Scalar) -> Self {
        QDiffOp {
            coeffs: Vec::new(),
            q: q.clone(),
        }
    }

    /// The identity operator `1`.
    pub fn identity(q: &Scalar) -> Self {
        QDiffOp::new(vec![RatX::one()], q.clone())
    }

    /// The bare q-difference operator `D`.
    pub fn delta(q: &Scalar) -> Self {
        QDiffOp::new(vec![RatX::zero(), RatX::one()], q.clone())
    }

    /// `r(x) * D^deg`.
    pub fn monomial(r: RatX, deg: usize, q: &Scalar) -> Self {
        if r.is_zero() {
            return QDiffOp::zero(q);
        }
        let mut coeffs = vec![RatX::zero(); deg + 1];
        coeffs[deg] = r;
        QDiffOp {
            coeffs,
            q: q.clone(),
        }
    }

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

    pub fn coeff(&self, i: usize) -> RatX {
        self.coeffs.get(i).cloned().unwrap_or_else(RatX::zero)
    }

    pub fn base(&self) -> &Scalar {
        &self.q
    }

    pub fn add(&self, rhs: &QDiffOp) -> QDiffOp {
        debug_assert_eq!(self.q, rhs.q);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        QDiffOp::new(
            (0..n).map(|i| &self.coeff(i) + &rhs.coeff(i)).collect(),
            self.q.clone(),
        )
    }

    pub fn sub(&self, rhs: &QDiffOp) -> QDiffOp {
        debug_assert_eq!(self.q, rhs.q);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        QDiffOp::new(
            (0..n).map(|i| &self.coeff(i) - &rhs.coeff(i)).collect(),
            self.q.clone(),
        )
    }

    /// Multiply every coefficient by `r(x)` on the left.
    pub fn left_mul_ratx(&self, r: &RatX) -> QDiffOp {
        QDiffOp::new(
            self.coeffs.iter().map(|c| c * r).collect(),
            self.q.clone(),
        )
    }

    /// `D . self`: coefficients pick up the substitution `x -> qx` one
    /// degree up plus their own q-difference at the same degree.
    pub fn left_mul_delta(&self) -> QDiffOp {
        let q = &self.q;
        let mut coeffs = vec![RatX::zero(); self.coeffs.len() + 1];
        for (j, r) in self.coeffs.iter().enumerate() {
            coeffs[j + 1] = &coeffs[j + 1] + &r.scale_x(q);
            coeffs[j] = &coeffs[j] + &delta_q_ratx(r, q);
        }
        QDiffOp::new(coeffs, q.clone())
    }

    /// Operator composition `self . rhs` through the twisted rule.
    pub fn compose(&self, rhs: &QDiffOp) -> QDiffOp {
        debug_assert_eq!(self.q, rhs.q);
        let mut acc = QDiffOp::zero(&self.q);
        let mut cur = rhs.clone(); // D^i . rhs
        for (i, r) in self.coeffs.iter().enumerate() {
            if !r.is_zero() {
                acc = acc.add(&cur.left_mul_ratx(r));
            }
            if i + 1 < self.coeffs.len() {
                cur = cur.left_mul_delta();
            }
        }
        acc
    }

    /// Apply to a polynomial: `sum_i r_i(x) * D^i(p)`.
    pub fn apply_to_poly(&self, p: &PolyX) -> RatX {
        let mut acc = RatX::zero();
        let mut dp = p.clone();
        for r in &self.coeffs {
            acc = &acc + &(r * &RatX::from_poly(dp.clone()));
            dp = dp.delta_q(&self.q);
        }
        acc
    }
}

impl fmt::Debug for QDiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "QDiffOp(0)");
        }
        write!(f, "QDiffOp(")?;
        for (i, r) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "[{}] D^{}", r, i)?;
        }
        write!(f, ")")
    }
}

/// `(r(x) - r(qx)) / ((1-q) x)`.
pub fn delta_q_ratx(r: &RatX, q: &Scalar) -> RatX {
    let diff = r - &r.scale_x(q);
    let denom = RatX::from_poly(PolyX::monomial(Scalar::one() - q, 1));
    diff.div(&denom).expect("(1-q)x is nonzero")
}

/// The second-order operator annihilating the base series:
/// `x(c - abqx) D^2 + [(1-c)/(1-q) + ((1-a)(1-b) - (1-abq))/(1-q) x] D
///  - (1-a)(1-b)/(1-q)^2`.
pub fn make_lq(params: &ParamSet) -> QDiffOp {
    let ParamSet { a, b, c, q, .. } = params;
    let one = Scalar::one();
    let one_minus_q = &one - q;

    let r2 = PolyX::new(vec![Scalar::zero(), c.clone(), -(a * b * q)]);
    let lin = ((&one - a) * (&one - b) - (&one - &(a * b * q))) / &one_minus_q;
    let r1 = PolyX::new(vec![(&one - c) / &one_minus_q, lin]);
    let r0 = PolyX::constant(-((&one - a) * (&one - b)) / (&one_minus_q * &one_minus_q));

    QDiffOp::new(
        vec![
            RatX::from_poly(r0),
            RatX::from_poly(r1),
            RatX::from_poly(r2),
        ],
        q.clone(),
    )
}

/// The six first-order contiguity factors: `Up*` multiplies one parameter by
/// `q`, `Down*` divides it by `q`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Contiguity {
    UpA,
    UpB,
    UpC,
    DownA,
    DownB,
    DownC,
}

impl Contiguity {
    pub fn label(&self) -> &'static str {
        match self {
            Contiguity::UpA => "a -> aq",
            Contiguity::UpB => "b -> bq",
            Contiguity::UpC => "c -> cq",
            Contiguity::DownA => "a -> a/q",
            Contiguity::DownB => "b -> b/q",
            Contiguity::DownC => "c -> c/q",
        }
    }
}

/// Build a contiguity factor at explicit parameter values. Composition paths
/// must instantiate each factor at the parameters reached so far.
pub fn make_contiguity(which: Contiguity, params: &ParamSet) -> Result<QDiffOp> {
    let ParamSet { a, b, c, q, .. } = params;
    let one = Scalar::one();
    let one_minus_q = &one - q;
    let x = || PolyX::x();

    let check = |d: &Scalar, what: &str| -> Result<Scalar> {
        if d.is_zero() {
            return Err(Error::ContiguityStep {
                step: which.label().to_string(),
                reason: format!("{what} vanishes at a={a}, b={b}, c={c}"),
            });
        }
        Ok(d.clone())
    };

    let (r0, r1): (RatX, RatX) = match which {
        Contiguity::UpA => (
            RatX::constant((&one - a) / &one_minus_q),
            RatX::from_poly(x().mul_scalar(a)),
        ),
        Contiguity::UpB => (
            RatX::constant((&one - b) / &one_minus_q),
            RatX::from_poly(x().mul_scalar(b)),
        ),
        Contiguity::UpC => {
            let den = check(&((c - a) * (c - b)), "(c-a)(c-b)")?;
            let scale = &one_minus_q * c / den;
            let const_part = -a - b + a * b + a * b / c;
            let r0 = RatX::constant(&scale * const_part);
            let grad = PolyX::new(vec![c.clone(), -(a * b)]); // c - abx
            let r1 = RatX::from_poly(grad.mul_scalar(&(&scale * &one_minus_q)));
            (r0, r1)
        }
        Contiguity::DownA => {
            let den = check(&((q - a) * (c - a)), "(q-a)(c-a)")?;
            let scale = &one_minus_q * a / den;
            let poly0 = PolyX::new(vec![-q + c * q / a, a * (&one - b)]); // -q + cq/a + a(1-b)x
            let r0 = RatX::from_poly(poly0.mul_scalar(&scale));
            let xc = PolyX::new(vec![Scalar::zero(), c.clone(), -(a * b)]); // x(c - abx)
            let r1 = RatX::from_poly(xc.mul_scalar(&(-&scale * &one_minus_q)));
            (r0, r1)
        }
        Contiguity::DownB => {
            let den = check(&((q - b) * (c - b)), "(q-b)(c-b)")?;
            let scale = &one_minus_q * b / den;
            let poly0 = PolyX::new(vec![-q + c * q / b, b * (&one - a)]);
            let r0 = RatX::from_poly(poly0.mul_scalar(&scale));
            let xc = PolyX::new(vec![Scalar::zero(), c.clone(), -(a * b)]);
            let r1 = RatX::from_poly(xc.mul_scalar(&(-&scale * &one_minus_q)));
            (r0, r1)
        }
        Contiguity::DownC => (
            RatX::constant((q - c) / (q * &one_minus_q)),
            RatX::from_poly(x().mul_scalar(&(c / q))),
        ),
    };

    Ok(QDiffOp::new(vec![r0, r1], q.clone()))
}

/// Result of reducing an operator modulo [`make_lq`]: the left cofactor and
/// the degree-one remainder, with `original = quotient . L + qt * D + rt`
/// as an exact operator identity.
#[derive(Clone, Debug)]
pub struct ReducedOp {
    pub quotient: QDiffOp,
    pub qtilde: RatX,
    pub rtilde: RatX,
}

impl ReducedOp {
    /// The remainder as an operator, `qt * D + rt`.
    pub fn remainder_op(&self, q: &Scalar) -> QDiffOp {
        QDiffOp::new(vec![self.rtilde.clone(), self.qtilde.clone()], q.clone())
    }

    /// Re-expand `quotient . L + remainder`; equals the reduced operator.
    pub fn reexpand(&self, params: &ParamSet) -> QDiffOp {
        let lq = make_lq(params);
        self.quotient
            .compose(&lq)
            .add(&self.remainder_op(&params.q))
    }
}

/// Euclidean-style right reduction modulo [`make_lq`]: repeatedly cancel the
/// top term by subtracting `s(x) D^{deg-2} . L` where `s` divides by the
/// leading coefficient of `L` twisted through `x -> q^{deg-2} x`.
pub fn reduce_mod_lq(op: &QDiffOp, params: &ParamSet) -> Result<ReducedOp> {
    let q = &params.q;
    let lq = make_lq(params);
    let lead = lq.coeff(2);
    let mut rem = op.clone();
    let mut quotient = QDiffOp::zero(q);

    while let Some(d) = rem.degree() {
        if d <= 1 {
            break;
        }
        let top = rem.coeff(d);
        let twisted_lead = lead.scale_x(&pow_int(q, (d - 2) as i64));
        let s = top.div(&twisted_lead)?;
        let term = QDiffOp::monomial(s, d - 2, q);
        rem = rem.sub(&term.compose(&lq));
        debug_assert!(rem.degree().map_or(true, |nd| nd < d));
        quotient = quotient.add(&term);
    }

    Ok(ReducedOp {
        quotient,
        qtilde: rem.coeff(1),
        rtilde: rem.coeff(0),
    })
}

/// Axis of a unit contiguity step.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Axis {
    A,
    B,
    C,
}

/// Compose the contiguity factors realizing the shift `(k, l, m)` in the
/// given axis order, reducing modulo the base operator after every factor,
/// and accumulate the full left cofactor so the re-expansion identity holds
/// for the final result.
pub fn build_h_with_axis_order(
    shift: ShiftTriple,
    params: &ParamSet,
    order: [Axis; 3],
) -> Result<ReducedOp> {
    let q = &params.q;
    let mut running = params.clone();
    let mut rem_op = QDiffOp::identity(q);
    let mut quotient = QDiffOp::zero(q);

    for axis in order {
        let steps = match axis {
            Axis::A => shift.k,
            Axis::B => shift.l,
            Axis::C => shift.m,
        };
        for _ in 0..steps.abs() {
            let which = match (axis, steps > 0) {
                (Axis::A, true) => Contiguity::UpA,
                (Axis::A, false) => Contiguity::DownA,
                (Axis::B, true) => Contiguity::UpB,
                (Axis::B, false) => Contiguity::DownB,
                (Axis::C, true) => Contiguity::UpC,
                (Axis::C, false) => Contiguity::DownC,
            };
            let factor = make_contiguity(which, &running)?;
            let unreduced = factor.compose(&rem_op);
            let red = reduce_mod_lq(&unreduced, params)?;
            quotient = factor.compose(&quotient).add(&red.quotient);
            rem_op = red.remainder_op(q);

            let step = pow_int(q, if steps > 0 { 1 } else { -1 });
            running = match axis {
                Axis::A => ParamSet::new_unchecked(
                    &running.a * &step,
                    running.b.clone(),
                    running.c.clone(),
                    running.q.clone(),
                ),
                Axis::B => ParamSet::new_unchecked(
                    running.a.clone(),
                    &running.b * &step,
                    running.c.clone(),
                    running.q.clone(),
                ),
                Axis::C => ParamSet::new_unchecked(
                    running.a.clone(),
                    running.b.clone(),
                    &running.c * &step,
                    running.q.clone(),
                ),
            };
        }
    }

    Ok(ReducedOp {
        quotient,
        qtilde: rem_op.coeff(1),
        rtilde: rem_op.coeff(0),
    })
}

/// [`build_h_with_axis_order`] in the canonical order: a-steps, then
/// b-steps, then c-steps. Any order gives the same reduced pair; the path
/// independence tests check all six orders explicitly.
pub fn build_h(shift: ShiftTriple, params: &ParamSet) -> Result<ReducedOp> {
    build_h_with_axis_order(shift, params, [Axis::A, Axis::B, Axis::C])
}

/// The OP route: reduce the composed shift operator and convert the
/// normalized remainder `(Qt, Rt)` to the three term coefficients via
///
/// `Q = (1-q)^{k+l-m-1} (cq;q)_{m-1} / [(aq;q)_{k-1} (bq;q)_{l-1}] * Qt`,
/// `R = (1-q)^{k+l-m}   (c;q)_m     / [(a;q)_k (b;q)_l]           * Rt`.
pub fn qr_oracle(shift: ShiftTriple, params: &ParamSet) -> Result<ThreeTermCoeffs> {
    let ShiftTriple { k, l, m } = shift;
    let ParamSet { a, b, c, q, .. } = params;
    let red = build_h(shift, params)?;
    let one_minus_q = Scalar::one() - q;

    let conv_q = pow_int(&one_minus_q, k + l - m - 1) * qpoch(&(c * q), q, m - 1)?
        / (qpoch(&(a * q), q, k - 1)? * qpoch(&(b * q), q, l - 1)?);
    let conv_r = pow_int(&one_minus_q, k + l - m) * qpoch(c, q, m)?
        / (qpoch(a, q, k)? * qpoch(b, q, l)?);

    Ok(ThreeTermCoeffs {
        q_coeff: red.qtilde.mul_scalar(&conv_q),
        r_coeff: red.rtilde.mul_scalar(&conv_r),
        shift,
        params: params.clone(),
        route: Route::Op,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::default_param_sets;
    use crate::scalar::s_ratio;
    use proptest::prelude::*;

    fn params0() -> ParamSet {
        default_param_sets().remove(0)
    }

    #[test]
    fn lq_has_documented_edge_coefficients() {
        let p = params0();
        let lq = make_lq(&p);
        assert_eq!(lq.degree(), Some(2));
        // leading coefficient x(c - abqx)
        let expected_top = PolyX::new(vec![Scalar::zero(), p.c.clone(), -(&p.a * &p.b * &p.q)]);
        assert_eq!(lq.coeff(2).as_poly(), Some(&expected_top));
        // constant coefficient -(1-a)(1-b)/(1-q)^2
        let omq = Scalar::one() - &p.q;
        let expected_const =
            -((Scalar::one() - &p.a) * (Scalar::one() - &p.b)) / (&omq * &omq);
        assert_eq!(lq.coeff(0), RatX::constant(expected_const));
    }

    #[test]
    fn contiguity_coefficients_match_definitions() {
        let p = params0();
        let up_a = make_contiguity(Contiguity::UpA, &p).unwrap();
        assert_eq!(
            up_a.coeff(0),
            RatX::constant((Scalar::one() - &p.a) / (Scalar::one() - &p.q))
        );
        assert_eq!(up_a.coeff(1), RatX::from_poly(PolyX::x().mul_scalar(&p.a)));

        let down_c = make_contiguity(Contiguity::DownC, &p).unwrap();
        assert_eq!(
            down_c.coeff(0),
            RatX::constant((&p.q - &p.c) / (&p.q * (Scalar::one() - &p.q)))
        );
        assert_eq!(
            down_c.coeff(1),
            RatX::from_poly(PolyX::x().mul_scalar(&(&p.c / &p.q)))
        );
    }

    #[test]
    fn commutation_relation_delta_x() {
        // D . x = 1 + q x D
        let p = params0();
        let q = &p.q;
        let x_op = QDiffOp::new(vec![RatX::x()], q.clone());
        let lhs = QDiffOp::delta(q).compose(&x_op);
        let expected = QDiffOp::new(
            vec![RatX::one(), RatX::from_poly(PolyX::x().mul_scalar(q))],
            q.clone(),
        );
        assert_eq!(lhs, expected);
    }

    #[test]
    fn delta_composed_with_x_squared() {
        // D . x^2 = (1+q) x + q^2 x^2 D, cross-checked against the action on
        // monomials x^0..x^3.
        let p = params0();
        let q = &p.q;
        let x2 = QDiffOp::new(
            vec![RatX::from_poly(PolyX::monomial(Scalar::one(), 2))],
            q.clone(),
        );
        let lhs = QDiffOp::delta(q).compose(&x2);
        let expected = QDiffOp::new(
            vec![
                RatX::from_poly(PolyX::monomial(Scalar::one() + q, 1)),
                RatX::from_poly(PolyX::monomial(q * q, 2)),
            ],
            q.clone(),
        );
        assert_eq!(lhs, expected);
        for deg in 0..=3 {
            let mono = PolyX::monomial(Scalar::one(), deg);
            let via_ops = lhs.apply_to_poly(&mono);
            let direct = (&mono * &PolyX::monomial(Scalar::one(), 2)).delta_q(q);
            assert_eq!(via_ops, RatX::from_poly(direct), "degree {deg}");
        }
    }

    #[test]
    fn reduce_of_lq_is_unit_quotient() {
        let p = params0();
        let lq = make_lq(&p);
        let red = reduce_mod_lq(&lq, &p).unwrap();
        assert!(red.qtilde.is_zero());
        assert!(red.rtilde.is_zero());
        assert_eq!(red.quotient, QDiffOp::identity(&p.q));
    }

    #[test]
    fn left_multiple_of_lq_reduces_to_zero() {
        let p = params0();
        let lq = make_lq(&p);
        let op = QDiffOp::delta(&p.q).compose(&lq);
        let red = reduce_mod_lq(&op, &p).unwrap();
        assert!(red.qtilde.is_zero() && red.rtilde.is_zero());
        assert_eq!(red.quotient, QDiffOp::delta(&p.q));
        assert_eq!(red.reexpand(&p), op);
    }

    #[test]
    fn low_degree_input_is_untouched() {
        let p = params0();
        let op = QDiffOp::new(vec![RatX::one(), RatX::x()], p.q.clone());
        let red = reduce_mod_lq(&op, &p).unwrap();
        assert!(red.quotient.is_zero());
        assert_eq!(red.qtilde, RatX::x());
        assert_eq!(red.rtilde, RatX::one());
    }

    #[test]
    fn inverse_pairs_reduce_to_identity() {
        let p = params0();
        // Down at shifted parameters undoes Up for each axis.
        let pairs = [
            (Contiguity::UpA, Contiguity::DownA, Axis::A),
            (Contiguity::UpB, Contiguity::DownB, Axis::B),
            (Contiguity::UpC, Contiguity::DownC, Axis::C),
        ];
        for (up, down, axis) in pairs {
            let raised = match axis {
                Axis::A => ParamSet::new_unchecked(&p.a * &p.q, p.b.clone(), p.c.clone(), p.q.clone()),
                Axis::B => ParamSet::new_unchecked(p.a.clone(), &p.b * &p.q, p.c.clone(), p.q.clone()),
                Axis::C => ParamSet::new_unchecked(p.a.clone(), p.b.clone(), &p.c * &p.q, p.q.clone()),
            };
            let composed = make_contiguity(down, &raised)
                .unwrap()
                .compose(&make_contiguity(up, &p).unwrap());
            let red = reduce_mod_lq(&composed, &p).unwrap();
            assert!(red.qtilde.is_zero(), "{:?}", axis);
            assert!(red.rtilde.is_one(), "{:?}", axis);
            assert_eq!(red.reexpand(&p), composed);

            // ... and symmetrically Up at lowered parameters undoes Down.
            let qinv = p.q.recip();
            let lowered = match axis {
                Axis::A => ParamSet::new_unchecked(&p.a * &qinv, p.b.clone(), p.c.clone(), p.q.clone()),
                Axis::B => ParamSet::new_unchecked(p.a.clone(), &p.b * &qinv, p.c.clone(), p.q.clone()),
                Axis::C => ParamSet::new_unchecked(p.a.clone(), p.b.clone(), &p.c * &qinv, p.q.clone()),
            };
            let composed = make_contiguity(up, &lowered)
                .unwrap()
                .compose(&make_contiguity(down, &p).unwrap());
            let red = reduce_mod_lq(&composed, &p).unwrap();
            assert!(red.qtilde.is_zero() && red.rtilde.is_one(), "{:?}", axis);
        }
    }

    #[test]
    fn empty_composition_is_identity() {
        let p = params0();
        let red = build_h(ShiftTriple::new(0, 0, 0), &p).unwrap();
        assert!(red.qtilde.is_zero());
        assert!(red.rtilde.is_one());
        assert!(red.quotient.is_zero());
    }

    #[test]
    fn single_up_a_step_is_the_raw_factor() {
        let p = params0();
        let red = build_h(ShiftTriple::new(1, 0, 0), &p).unwrap();
        assert_eq!(red.qtilde, RatX::from_poly(PolyX::x().mul_scalar(&p.a)));
        assert_eq!(
            red.rtilde,
            RatX::constant((Scalar::one() - &p.a) / (Scalar::one() - &p.q))
        );
    }

    #[test]
    fn path_independence_for_mixed_shift() {
        let p = params0();
        let shift = ShiftTriple::new(1, 0, 1);
        let ac = build_h_with_axis_order(shift, &p, [Axis::A, Axis::B, Axis::C]).unwrap();
        let ca = build_h_with_axis_order(shift, &p, [Axis::C, Axis::B, Axis::A]).unwrap();
        assert_eq!(ac.qtilde, ca.qtilde);
        assert_eq!(ac.rtilde, ca.rtilde);
    }

    #[test]
    fn build_h_reexpands_to_unreduced_composition() {
        let p = params0();
        let q = &p.q;
        // unreduced H(1,1,1) = UpC(aq,bq,c) . UpB(aq,b,c) . UpA(a,b,c)
        let f1 = make_contiguity(Contiguity::UpA, &p).unwrap();
        let p2 = ParamSet::new_unchecked(&p.a * q, p.b.clone(), p.c.clone(), q.clone());
        let f2 = make_contiguity(Contiguity::UpB, &p2).unwrap();
        let p3 = ParamSet::new_unchecked(&p.a * q, &p.b * q, p.c.clone(), q.clone());
        let f3 = make_contiguity(Contiguity::UpC, &p3).unwrap();
        let unreduced = f3.compose(&f2.compose(&f1));

        let red = build_h(ShiftTriple::new(1, 1, 1), &p).unwrap();
        assert_eq!(red.reexpand(&p), unreduced);
    }

    #[test]
    fn oracle_matches_contiguous_relation_for_unit_a_step() {
        let p = params0();
        let coeffs = qr_oracle(ShiftTriple::new(1, 0, 0), &p).unwrap();
        // Q = a(1-b)x/(1-c), R = 1
        let expected_q = RatX::from_poly(
            PolyX::x().mul_scalar(&(&p.a * (Scalar::one() - &p.b) / (Scalar::one() - &p.c))),
        );
        assert_eq!(coeffs.q_coeff, expected_q);
        assert!(coeffs.r_coeff.is_one());
    }

    #[test]
    fn oracle_trivial_shifts() {
        let p = params0();
        let unit = qr_oracle(ShiftTriple::new(1, 1, 1), &p).unwrap();
        assert!(unit.q_coeff.is_one());
        assert!(unit.r_coeff.is_zero());
        let id = qr_oracle(ShiftTriple::new(0, 0, 0), &p).unwrap();
        assert!(id.q_coeff.is_zero());
        assert!(id.r_coeff.is_one());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn composition_is_associative(
            seeds in proptest::collection::vec(-4i64..=4, 9)
        ) {
            let q = s_ratio(1, 3);
            let mk = |chunk: &[i64]| {
                QDiffOp::new(
                    chunk
                        .iter()
                        .map(|&s| RatX::from_poly(PolyX::new(vec![s_ratio(s, 2), s_ratio(s.rem_euclid(3), 5)])))
                        .collect(),
                    q.clone(),
                )
            };
            let a = mk(&seeds[0..3]);
            let b = mk(&seeds[3..6]);
            let c = mk(&seeds[6..9]);
            prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        }
    }
}
