//! The coefficient families behind the two closed-form routes.
//!
//! Each family member is a prefactor of q-shifted factorials times an exactly
//! summed terminating series with four upper and three lower parameters. The
//! polynomial parts assemble finitely many family members into a polynomial
//! in `x`:
//!
//! * [`poly_part`] builds the ascending-power polynomial used by route T2
//!   (coefficients `A`, `B` and their tilde variants);
//! * [`poly_part_tilde`] builds the descending-power polynomial used by
//!   route T3 (coefficients `C`, `D` and their tilde variants, with the
//!   prefactors `mu1`, `mu2`).
//!
//! All members take the value zero at negative index. The case split on the
//! signs of `m` and `k+l-m` is followed literally, with the boundary rows
//! (`m = 0`, `k+l-m = 0`) belonging to the non-negative branch; empty
//! summation ranges produce the zero polynomial.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::ParamSet;
use crate::poly::PolyX;
use crate::qpoch::qpoch;
use crate::qseries::{phi_terminating, PhiSpec};
use crate::scalar::{pow_int, Scalar};

/// Integer shifts `(k, l, m)` applied to the parameters `(a, b, c)` as
/// multiplication by `q^k`, `q^l`, `q^m`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ShiftTriple {
    pub k: i64,
    pub l: i64,
    pub m: i64,
}

impl ShiftTriple {
    pub fn new(k: i64, l: i64, m: i64) -> Self {
        ShiftTriple { k, l, m }
    }

    /// Swap the roles of `k` and `l` (paired with swapping `a` and `b`).
    pub fn swapped(&self) -> Self {
        ShiftTriple {
            k: self.l,
            l: self.k,
            m: self.m,
        }
    }

    /// `(k-1, l-1, m-1)`.
    pub fn decremented(&self) -> Self {
        ShiftTriple {
            k: self.k - 1,
            l: self.l - 1,
            m: self.m - 1,
        }
    }

    pub fn is_normalized(&self) -> bool {
        self.k <= self.l
    }
}

impl fmt::Display for ShiftTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.k, self.l, self.m)
    }
}

impl fmt::Debug for ShiftTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.k, self.l, self.m)
    }
}

/// A parameter set together with a normalized shift; the unit every
/// coefficient formula is evaluated against.
#[derive(Clone, Debug)]
pub struct CoeffContext {
    pub params: ParamSet,
    pub shift: ShiftTriple,
}

impl CoeffContext {
    /// Requires `k <= l`; the public three-term entry point normalizes
    /// shifts with `k > l` by swapping `(a, b)` before building a context.
    pub fn new(params: ParamSet, shift: ShiftTriple) -> Self {
        assert!(
            shift.is_normalized(),
            "coefficient context requires k <= l, got {:?}",
            shift
        );
        let ctx = CoeffContext { params, shift };
        debug_assert!({
            let diff = ctx.big_m() - ctx.big_m_prime();
            diff == 0 || diff == 1
        });
        ctx
    }

    /// `M = max(k+l-m, 0)`.
    pub fn big_m(&self) -> i64 {
        (self.shift.k + self.shift.l - self.shift.m).max(0)
    }

    /// `M' = max(k+l-m-1, 0)`.
    pub fn big_m_prime(&self) -> i64 {
        (self.shift.k + self.shift.l - self.shift.m - 1).max(0)
    }

    /// `d = max(m, 0) + max(k+l-m, 0) - k - 1`, the degree bound shared by
    /// both polynomial parts. Can be negative (the zero polynomial case).
    pub fn degree_bound(&self) -> i64 {
        self.shift.m.max(0) + self.big_m() - self.shift.k - 1
    }

    /// The context `(k-1, l-1, m-1)` at parameters `(aq, bq, cq)`, which is
    /// where the R coefficient evaluates the polynomial parts.
    pub fn shifted_decremented(&self) -> CoeffContext {
        CoeffContext::new(self.params.shifted_up(), self.shift.decremented())
    }
}

/// `(s; q)_n`, wrapping the vanishing-factor error with the family name.
fn ph(ctx_name: &str, s: &Scalar, q: &Scalar, n: i64) -> Result<Scalar> {
    qpoch(s, q, n).map_err(|e| match e {
        Error::VanishingFactor { factor, .. } => Error::VanishingFactor {
            factor,
            context: ctx_name.to_string(),
        },
        other => other,
    })
}

/// Exact division that names the vanishing denominator.
fn div_nz(num: Scalar, den: Scalar, what: &str, ctx_name: &str) -> Result<Scalar> {
    if den.is_zero() {
        return Err(Error::VanishingFactor {
            factor: what.to_string(),
            context: ctx_name.to_string(),
        });
    }
    Ok(num / den)
}

/// Coefficient `A_n` of the ascending polynomial part.
pub fn coeff_a(ctx: &CoeffContext, n: i64) -> Result<Scalar> {
    if n < 0 {
        return Ok(Scalar::zero());
    }
    let ShiftTriple { k, l, m } = ctx.shift;
    let ParamSet { a, b, c, q, .. } = &ctx.params;
    let name = "A_n";

    let q2_c = &(q * q) / c;
    let head = div_nz(
        -c * ph(name, &(a * q / c), q, k - m)? * ph(name, &(b * q / c), q, l - m)?,
        ph(name, &q2_c, q, -m - 1)?,
        "(q^2/c; q)_{-m-1}",
        name,
    )?;

    // (q^{-n}; q)_n is nonzero for n >= 1 and 1 for n = 0.
    let qpow_neg_n = pow_int(q, -n);
    let poch_qnn = ph(name, &qpow_neg_n, q, n)?;
    debug_assert!(!poch_qnn.is_zero());
    let body = div_nz(
        ph(name, c, q, m - n - 1)?,
        poch_qnn * ph(name, a, q, k - n)? * ph(name, b, q, l - n)?,
        "(q^-n;q)_n (a;q)_{k-n} (b;q)_{l-n}",
        name,
    )?;

    let phi = phi_terminating(&PhiSpec::new(
        vec![
            qpow_neg_n,
            c * pow_int(q, m - n - 1),
            a.clone(),
            b.clone(),
        ],
        vec![c.clone(), a * pow_int(q, k - n), b * pow_int(q, l - n)],
        q.clone(),
        q.clone(),
    ))?;

    Ok(head * body * pow_int(q, m - n - 1) * phi)
}

/// Coefficient `B_n` of the ascending polynomial part.
pub fn coeff_b(ctx: &CoeffContext, n: i64) -> Result<Scalar> {
    if n < 0 {
        return Ok(Scalar::zero());
    }
    let ShiftTriple { k, l, m } = ctx.shift;
    let ParamSet { a, b, c, q, .. } = &ctx.params;
    let name = "B_n";

    let q2_c = &(q * q) / c;
    let pre = div_nz(
        ph(name, &(a * q / c), q, n)? * ph(name, &(b * q / c), q, n)?,
        ph(name, q, q, n)? * ph(name, &q2_c, q, n)?,
        "(q;q)_n (q^2/c;q)_n",
        name,
    )?;

    let phi = phi_terminating(&PhiSpec::new(
        vec![
            pow_int(q, -n),
            c * pow_int(q, -n - 1),
            c * pow_int(q, m - k) / a,
            c * pow_int(q, m - l) / b,
        ],
        vec![
            c * pow_int(q, m),
            c * pow_int(q, -n) / a,
            c * pow_int(q, -n) / b,
        ],
        q.clone(),
        pow_int(q, k + l - m + 1),
    ))?;

    Ok(pre * phi)
}

/// Coefficient `A~_n` (the variant used when `k+l-m < 0`).
pub fn coeff_a_tilde(ctx: &CoeffContext, n: i64) -> Result<Scalar> {
    if n < 0 {
        return Ok(Scalar::zero());
    }
    let ShiftTriple { k, l, m } = ctx.shift;
    let ParamSet { a, b, c, q, .. } = &ctx.params;
    let name = "A~_n";

    let head = div_nz(
        ph(name, c, q, m)?,
        ph(name, a, q, k)? * ph(name, b, q, l)?,
        "(a;q)_k (b;q)_l",
        name,
    )?;
    let q2_c = &(q * q) / c;
    let pre = div_nz(
        ph(name, &(a * q / c), q, n + k - m)? * ph(name, &(b * q / c), q, n + l - m)?,
        ph(name, q, q, n)? * ph(name, &q2_c, q, n - m)?,
        "(q;q)_n (q^2/c;q)_{n-m}",
        name,
    )?;

    let phi = phi_terminating(&PhiSpec::new(
        vec![
            pow_int(q, -n),
            c * pow_int(q, m - n - 1),
            c / a,
            c / b,
        ],
        vec![
            c.clone(),
            c * pow_int(q, m - k - n) / a,
            c * pow_int(q, m - l - n) / b,
        ],
        q.clone(),
        pow_int(q, m - k - l + 1),
    ))?;

    Ok(head * pre * phi)
}

/// Coefficient `B~_n` (the variant used when `k+l-m < 0`).
pub fn coeff_b_tilde(ctx: &CoeffContext, n: i64) -> Result<Scalar> {
    if n < 0 {
        return Ok(Scalar::zero());
    }
    let ShiftTriple { k, l, m } = ctx.shift;
    let ParamSet { a, b, c, q, .. } = &ctx.params;
    let name = "B~_n";

    let qnn = pow_int(q, -n);
    let poch_qnn = ph(name, &qnn, q, n)?;
    debug_assert!(!poch_qnn.is_zero());
    let pre = div_nz(
        ph(name, &(a * &qnn), q, n)? * ph(name, &(b * &qnn), q, n)?,
        poch_qnn * ph(name, &(c * pow_int(q, -n - 1)), q, n)?,
        "(q^-n;q)_n (cq^{-n-1};q)_n",
        name,
    )?;

    let phi = phi_terminating(&PhiSpec::new(
        vec![
            qnn.clone(),
            c * pow_int(q, -n - 1),
            a * pow_int(q, k),
            b * pow_int(q, l),
        ],
        vec![c * pow_int(q, m), a * &qnn, b * &qnn],
        q.clone(),
        q.clone(),
    ))?;

    Ok(pre * pow_int(q, -n) * phi)
}

/// Prefactor `mu1` of the descending polynomial part.
pub fn mu1(ctx: &CoeffContext) -> Result<Scalar> {
    let ShiftTriple { k, l, m } = ctx.shift;
    let ParamSet { a, b, c, q, .. } = &ctx.params;
    let name = "mu1";
    let head = pow_int(a, m - k - l) * pow_int(&(c / (a * b)), k) * pow_int(q, k * (m - k - l + 1));
    div_nz(
        head * ph(name, a, q, k)? * ph(name, &(a * q / c), q, k - m)?,
        ph(name, &(a * q / b), q, k - l)?,
        "(aq/b;q)_{k-l}",
        name,
    )
}

/// Prefactor `mu2` of the descending polynomial part.
pub fn mu2(ctx: &CoeffContext) -> Result<Scalar> {
    let ShiftTriple { k, l, m } = ctx.shift;
    let ParamSet { a, b, c, q, .. } = &ctx.params;
    let name = "mu2";
    let head = pow_int(b, m - k - l) * pow_int(&(c / (a * b)), l) * pow_int(q, l * (m - k - l + 1));
    div_nz(
        head * ph(name, b, q, l)? * ph(name, &(b * q / c), q, l - m)?,
        ph(name, &(b * q / a), q, l - k)?,
        "(bq/a;q)_{l-k}",
        name,
    )
}

/// Coefficient `C_n` of the descending polynomial part.
pub fn coeff_c(ctx: &CoeffContext, n: i64) -> Result<Scalar> {
    if n < 0 {
        return Ok(Scalar::zero());
    }
    let ShiftTriple { k, l, m } = ctx.shift;
    let ParamSet { a, b, c, q, .. } = &ctx.params;
    let name = "C_n";

    let pre = div_nz(
        ph(name, b, q, n)? * ph(name, &(b * q / c), q, n)?,
        ph(name, q, q, n)? * ph(name, &(b * q / a), q, n)?,
        "(q;q)_n (bq/a;q)_n",
        name,
    )?;
    let arg_pow = pow_int(&(c * q / (a * b)), n);

    let phi = phi_terminating(&PhiSpec::new(
        vec![
            pow_int(q, -n),
            a * pow_int(q, -n) / b,
            pow_int(q, 1 - l) / b,
            c * pow_int(q, m - l) / b,
        ],
        vec![
            a * pow_int(q, k - l + 1) / b,
            pow_int(q, 1 - n) / b,
            c * pow_int(q, -n) / b,
        ],
        q.clone(),
        q.clone(),
    ))?;

    Ok(mu1(ctx)? * pre * arg_pow * phi)
}

/// Coefficient `D_n` of the descending polynomial part.
pub fn coeff_d(ctx: &CoeffContext, n: i64) -> Result<Scalar> {
    if n < 0 {
        return Ok(Scalar::zero());
    }
    let ShiftTriple { k, l, m } = ctx.shift;
    let ParamSet { a, b, c, q, .. } = &ctx.params;
    let name = "D_n";

    let pre = div_nz(
        ph(name, &(pow_int(q, 1 - k) / a), q, n)? * ph(name, &(c * pow_int(q, m - k) / a), q, n)?,
        ph(name, q, q, n)? * ph(name, &(b * pow_int(q, l - k + 1) / a), q, n)?,
        "(q;q)_n (bq^{l-k+1}/a;q)_n",
        name,
    )?;

    let phi = phi_terminating(&PhiSpec::new(
        vec![
            pow_int(q, -n),
            a * pow_int(q, k - l - n) / b,
            a.clone(),
            a * q / c,
        ],
        vec![
            a * q / b,
            a * pow_int(q, k - n),
            a * pow_int(q, k - m - n + 1) / c,
        ],
        q.clone(),
        pow_int(q, k + l - m + 1),
    ))?;

    Ok(mu2(ctx)? * pre * pow_int(q, n) * phi)
}

/// Coefficient `C~_n` (the variant used when `k+l-m < 0`).
pub fn coeff_c_tilde(ctx: &CoeffContext, n: i64) -> Result<Scalar> {
    if n < 0 {
        return Ok(Scalar::zero());
    }
    let ShiftTriple { k, l, m } = ctx.shift;
    let ParamSet { a, b, c, q, .. } = &ctx.params;
    let name = "C~_n";

    let pre = div_nz(
        ph(name, &(a * pow_int(q, k)), q, n)?
            * ph(name, &(a * pow_int(q, k - m + 1) / c), q, n)?,
        ph(name, q, q, n)? * ph(name, &(a * pow_int(q, k - l + 1) / b), q, n)?,
        "(q;q)_n (aq^{k-l+1}/b;q)_n",
        name,
    )?;
    let arg_pow = pow_int(&(c * pow_int(q, m - k - l + 1) / (a * b)), n);

    let phi = phi_terminating(&PhiSpec::new(
        vec![
            pow_int(q, -n),
            b * pow_int(q, l - k - n) / a,
            q / a,
            c / a,
        ],
        vec![
            b * q / a,
            pow_int(q, 1 - k - n) / a,
            c * pow_int(q, m - k - n) / a,
        ],
        q.clone(),
        q.clone(),
    ))?;

    Ok(mu1(ctx)? * pre * arg_pow * phi)
}

/// Coefficient `D~_n` (the variant used when `k+l-m < 0`).
pub fn coeff_d_tilde(ctx: &CoeffContext, n: i64) -> Result<Scalar> {
    if n < 0 {
        return Ok(Scalar::zero());
    }
    let ShiftTriple { k, l, m } = ctx.shift;
    let ParamSet { a, b, c, q, .. } = &ctx.params;
    let name = "D~_n";

    let pre = div_nz(
        ph(name, &(q / b), q, n)? * ph(name, &(c / b), q, n)?,
        ph(name, q, q, n)? * ph(name, &(a * q / b), q, n)?,
        "(q;q)_n (aq/b;q)_n",
        name,
    )?;

    let phi = phi_terminating(&PhiSpec::new(
        vec![
            pow_int(q, -n),
            b * pow_int(q, -n) / a,
            b * pow_int(q, l),
            b * pow_int(q, l - m + 1) / c,
        ],
        vec![
            b * pow_int(q, l - k + 1) / a,
            b * pow_int(q, -n),
            b * pow_int(q, 1 - n) / c,
        ],
        q.clone(),
        pow_int(q, m - k - l + 1),
    ))?;

    Ok(mu2(ctx)? * pre * pow_int(q, n) * phi)
}

/// The four-way case split shared by both polynomial parts: which family
/// pair applies and how many terms the sum has.
fn case_upper(ctx: &CoeffContext) -> (bool, bool, i64) {
    let ShiftTriple { k, l, m } = ctx.shift;
    let m_nonneg = m >= 0;
    let s_nonneg = k + l - m >= 0;
    let upper = match (m_nonneg, s_nonneg) {
        (true, true) => l - 1,
        (true, false) => m - k - 1,
        (false, true) => l - m - 1,
        (false, false) => -k - 1,
    };
    (m_nonneg, s_nonneg, upper)
}

/// The ascending polynomial part, with the summation range extended by
/// `extra` terms. The extension must not change the value: beyond the stated
/// range every summand vanishes identically, which the truncation-stability
/// checks exercise with `extra = 3`.
pub fn poly_part_extended(ctx: &CoeffContext, extra: i64) -> Result<PolyX> {
    let m = ctx.shift.m;
    let (m_nonneg, s_nonneg, upper) = case_upper(ctx);
    let upper = upper + extra;
    let mut coeffs = Vec::new();
    for n in 0..=upper.max(-1) {
        let value = match (m_nonneg, s_nonneg) {
            (true, true) => coeff_a(ctx, n)? - coeff_b(ctx, n - m)?,
            (true, false) => coeff_a_tilde(ctx, n)? - coeff_b_tilde(ctx, n - m)?,
            (false, true) => coeff_a(ctx, n + m)? - coeff_b(ctx, n)?,
            (false, false) => coeff_a_tilde(ctx, n + m)? - coeff_b_tilde(ctx, n)?,
        };
        coeffs.push(value);
    }
    Ok(PolyX::new(coeffs))
}

/// The ascending polynomial part (route T2).
pub fn poly_part(ctx: &CoeffContext) -> Result<PolyX> {
    poly_part_extended(ctx, 0)
}

/// The descending polynomial part, with the summation range extended by
/// `extra` terms. The extension shifts every power up by `extra`, so the
/// result equals `poly_part_tilde(ctx) * x^extra` exactly when the extra
/// summands vanish.
pub fn poly_part_tilde_extended(ctx: &CoeffContext, extra: i64) -> Result<PolyX> {
    let ShiftTriple { k, l, .. } = ctx.shift;
    let (m_nonneg, s_nonneg, upper) = case_upper(ctx);
    let upper = upper + extra;
    let mut coeffs = vec![Scalar::zero(); (upper.max(-1) + 1) as usize];
    for n in 0..=upper.max(-1) {
        let value = match (m_nonneg, s_nonneg) {
            (true, true) | (false, true) => coeff_c(ctx, n)? - coeff_d(ctx, n + k - l)?,
            (true, false) | (false, false) => {
                coeff_c_tilde(ctx, n)? - coeff_d_tilde(ctx, n + k - l)?
            }
        };
        coeffs[(upper - n) as usize] = value;
    }
    Ok(PolyX::new(coeffs))
}

/// The descending polynomial part (route T3).
pub fn poly_part_tilde(ctx: &CoeffContext) -> Result<PolyX> {
    poly_part_tilde_extended(ctx, 0)
}

/// Sign `(-1)^e`.
fn neg_one_pow(e: i64) -> Scalar {
    if e.rem_euclid(2) == 0 {
        Scalar::one()
    } else {
        -Scalar::one()
    }
}

/// The half-integer exponent guard: `k(k-1) + l(l-1) - m(m-1) + t` is always
/// even for the `t` used by the scaling factors.
fn half_exponent(k: i64, l: i64, m: i64, t: i64) -> i64 {
    let num = k * (k - 1) + l * (l - 1) - m * (m - 1) + t;
    assert!(num % 2 == 0, "q-exponent {num} is not even");
    num / 2
}

/// The proportionality factor between the two polynomial parts: the exact
/// scalar with `poly_part = lambda * poly_part_tilde`, which also scales
/// route T3's Q coefficient.
pub fn lambda(ctx: &CoeffContext) -> Result<Scalar> {
    let ShiftTriple { k, l, m } = ctx.shift;
    let ParamSet { a, b, c, q, .. } = &ctx.params;
    let name = "lambda";
    let big_m = ctx.big_m();
    let e = half_exponent(k, l, m, big_m * (big_m - 1));

    let sign = neg_one_pow(k + l - m - 1 + big_m);
    let num = (q - c) * pow_int(a, k) * pow_int(b, l) * pow_int(&(a * b / c), big_m)
        * ph(name, c, q, m)?;
    let den = (b - a) * pow_int(c, m) * ph(name, a, q, k)? * ph(name, b, q, l)?;
    div_nz(sign * pow_int(q, e) * num, den, "(b-a) c^m (a;q)_k (b;q)_l", name)
}

/// The scaling factor on route T3's R coefficient.
pub fn lambda_prime(ctx: &CoeffContext) -> Result<Scalar> {
    let ShiftTriple { k, l, m } = ctx.shift;
    let ParamSet { a, b, c, q, .. } = &ctx.params;
    let name = "lambda'";
    let mp = ctx.big_m_prime();
    let e = half_exponent(k, l, m, mp * (mp + 1));

    let sign = neg_one_pow(k + l - m + mp);
    let num = pow_int(a, k) * pow_int(b, l) * pow_int(&(a * b / c), mp - 1) * ph(name, c, q, m)?;
    let den = (b - a)
        * pow_int(c, m)
        * ph(name, &(a * q), q, k - 1)?
        * ph(name, &(b * q), q, l - 1)?;
    div_nz(
        sign * pow_int(q, e) * num,
        den,
        "(b-a) c^m (aq;q)_{k-1} (bq;q)_{l-1}",
        name,
    )
}

/// Convenience constructor used throughout the tests and sweeps.
pub fn context(params: &ParamSet, k: i64, l: i64, m: i64) -> CoeffContext {
    CoeffContext::new(params.clone(), ShiftTriple::new(k, l, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::default_param_sets;
    use crate::scalar::s_int;

    fn params0() -> ParamSet {
        default_param_sets().remove(0)
    }

    #[test]
    fn all_families_vanish_at_negative_index() {
        let ctx = context(&params0(), 1, 2, -1);
        for f in [
            coeff_a, coeff_b, coeff_a_tilde, coeff_b_tilde, coeff_c, coeff_d, coeff_c_tilde,
            coeff_d_tilde,
        ] {
            assert_eq!(f(&ctx, -1).unwrap(), Scalar::zero());
            assert_eq!(f(&ctx, -4).unwrap(), Scalar::zero());
        }
    }

    #[test]
    fn b_tilde_zero_is_one() {
        // every prefactor has index 0 and the series collapses to its first term
        let ctx = context(&params0(), -2, 1, 2);
        assert_eq!(coeff_b_tilde(&ctx, 0).unwrap(), Scalar::one());
        assert_eq!(coeff_b(&ctx, 0).unwrap(), Scalar::one());
    }

    #[test]
    fn c_families_collapse_to_mu1_at_zero() {
        let ctx = context(&params0(), 1, 2, 1);
        assert_eq!(coeff_c(&ctx, 0).unwrap(), mu1(&ctx).unwrap());
        let ctx2 = context(&params0(), -2, -1, 1); // k+l-m < 0
        assert_eq!(coeff_c_tilde(&ctx2, 0).unwrap(), mu1(&ctx2).unwrap());
    }

    #[test]
    fn a0_at_unit_shift_matches_closed_form() {
        // A_0 at shift (1,1,1) must equal -(q-c)(1-c) / (c (1-a)(1-b)) so the
        // assembled Q(1,1,1) is exactly 1.
        let p = params0();
        let ctx = context(&p, 1, 1, 1);
        let expected = -(&p.q - &p.c) * (s_int(1) - &p.c)
            / (&p.c * (s_int(1) - &p.a) * (s_int(1) - &p.b));
        assert_eq!(coeff_a(&ctx, 0).unwrap(), expected);
        assert_eq!(poly_part(&ctx).unwrap(), PolyX::constant(expected));
    }

    #[test]
    fn poly_part_empty_range_is_zero() {
        let ctx = context(&params0(), 0, 0, 0);
        assert!(poly_part(&ctx).unwrap().is_zero());
        assert!(poly_part_tilde(&ctx).unwrap().is_zero());
    }

    #[test]
    fn poly_part_single_negative_case_is_minus_one() {
        // shift (-1,-1,-1) at parameters (aq, bq, cq): the single summand is
        // A~_{-1} - B~_0 = -1.
        let ctx = context(&params0().shifted_up(), -1, -1, -1);
        assert_eq!(poly_part(&ctx).unwrap(), PolyX::constant(s_int(-1)));
    }

    #[test]
    fn lambda_scales_tilde_part_to_plain_part() {
        for p in default_param_sets() {
            for (k, l, m) in [(1, 1, 1), (0, 1, 0), (-1, 2, 1), (-2, -1, -3), (1, 3, -2)] {
                let ctx = context(&p, k, l, m);
                let plain = poly_part(&ctx).unwrap();
                let tilde = poly_part_tilde(&ctx).unwrap();
                let lam = lambda(&ctx).unwrap();
                assert_eq!(plain, tilde.mul_scalar(&lam), "shift ({k},{l},{m})");
            }
        }
    }

    #[test]
    fn exponent_parity_assertion_holds_across_box() {
        for k in -4..=4i64 {
            for l in k..=4 {
                for m in -4..=4 {
                    let big_m = (k + l - m).max(0);
                    let mp = (k + l - m - 1).max(0);
                    half_exponent(k, l, m, big_m * (big_m - 1));
                    half_exponent(k, l, m, mp * (mp + 1));
                }
            }
        }
    }

    #[test]
    fn tilde_leading_coefficient_is_mu1_for_k_less_than_l() {
        let p = params0();
        let ctx = context(&p, 0, 2, 1);
        let pt = poly_part_tilde(&ctx).unwrap();
        let d = ctx.degree_bound();
        assert!(d >= 0);
        assert_eq!(pt.coeff(d as usize), mu1(&ctx).unwrap());
    }

    #[test]
    fn normalization_guard_rejects_k_greater_than_l() {
        let result = std::panic::catch_unwind(|| context(&params0(), 2, 1, 0));
        assert!(result.is_err());
    }

    #[test]
    fn spec_example_shift_0_1_0() {
        // P(0,1,0) = A_0 - B_0 = b(c-q)/(c(1-b)); route T2 then yields
        // Q(0,1,0) = b(1-a)x/(1-c).
        let p = params0();
        let ctx = context(&p, 0, 1, 0);
        let expected = &p.b * (&p.c - &p.q) / (&p.c * (s_int(1) - &p.b));
        assert_eq!(poly_part(&ctx).unwrap(), PolyX::constant(expected));
    }

    #[test]
    fn degree_bound_examples() {
        let p = params0();
        assert_eq!(context(&p, 1, 1, 1).degree_bound(), 0);
        assert_eq!(context(&p, 0, 0, 0).degree_bound(), -1);
        assert_eq!(context(&p, 0, 1, 0).degree_bound(), 0);
        assert_eq!(context(&p, -2, 3, -1).degree_bound(), 3);
    }
}
