//! The supporting identity suite.
//!
//! Terminating instances are checked exactly (a sum of rationals equal to
//! zero is zero, full stop); non-terminating ones compare certified partial
//! sums, so a pass means the exact residual is below both the tolerance and
//! the combined truncation bound. A true identity can never exceed the
//! combined bound, which makes the bound comparison a detector for a wrong
//! formula rather than a tolerance knob.
//!
//! Checks included:
//! * `bailey_daum` — the closed product form of `phi(a, b; aq/b; q, -q/b)`;
//! * `heine_transformation` — argument/parameter transformation with the
//!   `(abx/c)_inf / (x)_inf` prefactor;
//! * `gasper_summation` — the series rearrangement identity relating a
//!   non-terminating sum to a terminating one (integral parameter offsets);
//! * `vanishing_nonterminating` / `vanishing_terminating` — the two
//!   vanishing summation families with integral parameter differences;
//! * `heine_contiguous_{up,down,mixed}` — the three classical one-step
//!   contiguous relations;
//! * `three_term_a_c_up` — the `(k,l,m) = (1,0,1)` relation: the R factor is
//!   checked against its closed form and the Q factor is *determined* from
//!   the operator route and recorded, not assumed.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::Result;
use crate::params::{default_param_sets, ParamSet};
use crate::scalar::{pow_int, s_int, s_ratio, ten_pow_neg, Scalar};
use crate::threeterm::{qr, Route};
use crate::coefficients::ShiftTriple;

use super::{phi_eval_certified, phi_terminating, qpoch_inf_certified, Certified, PhiSpec};

/// Suite configuration; `tol` bounds every reported residual and `max_n`
/// caps each truncation search.
#[derive(Clone, Debug)]
pub struct IdentityConfig {
    pub tol: Scalar,
    pub max_n: usize,
    pub param_sets: Vec<ParamSet>,
    pub x_samples: Vec<Scalar>,
}

impl Default for IdentityConfig {
    fn default() -> Self {
        IdentityConfig {
            tol: ten_pow_neg(12),
            max_n: 500,
            param_sets: default_param_sets(),
            x_samples: vec![s_ratio(1, 8), s_ratio(-1, 10)],
        }
    }
}

/// Outcome of a single identity instance.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityOutcome {
    pub name: String,
    /// Exact checks assert a rational equals zero; residual checks compare
    /// certified evaluations.
    pub exact: bool,
    pub pass: bool,
    pub residual: Option<String>,
    pub bound: Option<String>,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub outcomes: Vec<IdentityOutcome>,
}

impl IdentityReport {
    pub fn all_pass(&self) -> bool {
        self.outcomes.iter().all(|o| o.pass)
    }
}

fn residual_outcome(
    name: String,
    lhs: Result<Certified>,
    rhs: Result<Certified>,
    tol: &Scalar,
) -> IdentityOutcome {
    match (lhs, rhs) {
        (Ok(lhs), Ok(rhs)) => {
            let diff = lhs.sub(&rhs);
            let residual = diff.value.abs();
            let pass = residual <= *tol && residual <= diff.bound;
            IdentityOutcome {
                name,
                exact: false,
                pass,
                residual: Some(residual.to_string()),
                bound: Some(diff.bound.to_string()),
                detail: None,
            }
        }
        (l, r) => precondition_outcome(name, l.err().or(r.err())),
    }
}

fn exact_zero_outcome(name: String, value: Result<Scalar>) -> IdentityOutcome {
    match value {
        Ok(v) => IdentityOutcome {
            name,
            exact: true,
            pass: v.is_zero(),
            residual: Some(v.to_string()),
            bound: Some("0".into()),
            detail: None,
        },
        Err(e) => precondition_outcome(name, Some(e)),
    }
}

fn precondition_outcome(name: String, err: Option<crate::error::Error>) -> IdentityOutcome {
    IdentityOutcome {
        name,
        exact: false,
        pass: false,
        residual: None,
        bound: None,
        detail: Some(format!(
            "precondition violated: {}",
            err.map_or_else(|| "unknown".into(), |e| e.to_string())
        )),
    }
}

/// Run every identity instance and collect the outcomes.
pub fn identity_suite(cfg: &IdentityConfig) -> IdentityReport {
    let mut outcomes = Vec::new();
    outcomes.extend(bailey_daum(cfg));
    outcomes.extend(heine_transformation(cfg));
    outcomes.extend(gasper_summation(cfg));
    outcomes.extend(vanishing_nonterminating(cfg));
    outcomes.extend(vanishing_terminating(cfg));
    outcomes.extend(heine_contiguous(cfg));
    outcomes.extend(three_term_a_c_up(cfg));
    IdentityReport { outcomes }
}

/// Inner evaluation budget: keeps the combined bounds well below `tol`.
fn inner_tol(cfg: &IdentityConfig) -> Scalar {
    &cfg.tol / s_int(64)
}

/// `phi(a, b; aq/b; q, -q/b)` equals a ratio of infinite products
/// (bases `q` and `q^2`); needs `|q| < min(1, |b|)`.
fn bailey_daum(cfg: &IdentityConfig) -> Vec<IdentityOutcome> {
    let samples = [
        (s_ratio(1, 5), s_int(-2), s_ratio(1, 4)),
        (s_ratio(2, 3), s_ratio(-3, 2), s_ratio(1, 5)),
    ];
    let tol = inner_tol(cfg);
    samples
        .iter()
        .map(|(a, b, q)| {
            let name = format!("bailey_daum[a={a},b={b},q={q}]");
            let c = a * q / b;
            let x = -(q / b);
            let lhs = phi_eval_certified(&PhiSpec::phi21(a, b, &c, q, &x), &tol, cfg.max_n)
                .map(|(v, _)| v);
            let rhs = (|| {
                let q2 = q * q;
                let num = qpoch_inf_certified(&-q.clone(), q, &tol, cfg.max_n)?
                    .mul(&qpoch_inf_certified(&(a * q), &q2, &tol, cfg.max_n)?)
                    .mul(&qpoch_inf_certified(&(a * &q2 / (b * b)), &q2, &tol, cfg.max_n)?);
                let den = qpoch_inf_certified(&(-(q / b)), q, &tol, cfg.max_n)?
                    .mul(&qpoch_inf_certified(&(a * q / b), q, &tol, cfg.max_n)?);
                num.div(&den)
            })();
            residual_outcome(name, lhs, rhs, &cfg.tol)
        })
        .collect()
}

/// `phi(a, b; c; q, x) = (abx/c)_inf / (x)_inf * phi(c/a, c/b; c; q, abx/c)`.
fn heine_transformation(cfg: &IdentityConfig) -> Vec<IdentityOutcome> {
    let tol = inner_tol(cfg);
    let mut out = Vec::new();
    for p in &cfg.param_sets {
        for x in &cfg.x_samples {
            let ParamSet { a, b, c, q, .. } = p;
            let name = format!("heine_transformation[{p};x={x}]");
            let lhs = phi_eval_certified(&PhiSpec::phi21(a, b, c, q, x), &tol, cfg.max_n)
                .map(|(v, _)| v);
            let rhs = (|| {
                let abx_c = a * b * x / c;
                let pref = qpoch_inf_certified(&abx_c, q, &tol, cfg.max_n)?
                    .div(&qpoch_inf_certified(x, q, &tol, cfg.max_n)?)?;
                let phi = phi_eval_certified(
                    &PhiSpec::phi21(&(c / a), &(c / b), c, q, &abx_c),
                    &tol,
                    cfg.max_n,
                )?
                .0;
                Ok(pref.mul(&phi))
            })();
            out.push(residual_outcome(name, lhs, rhs, &cfg.tol));
        }
    }
    out
}

/// The summation rearrangement with integral offsets `m_0, ..., m_p`: a
/// non-terminating sum with argument `q^{m_0+1-(m_1+..+m_p)}/a_0` equals a
/// product prefactor times a terminating sum at argument `q`. Samples stay
/// strictly inside the convergence region of the left side.
fn gasper_summation(cfg: &IdentityConfig) -> Vec<IdentityOutcome> {
    struct Instance {
        a0: Scalar,
        b: [Scalar; 3], // b_0, b_1, b_2
        m: [i64; 3],    // m_0, m_1, m_2
        q: Scalar,
    }
    let instances = [
        Instance {
            a0: s_ratio(3, 2),
            b: [s_ratio(2, 7), s_ratio(3, 11), s_ratio(5, 9)],
            m: [1, 1, 0],
            q: s_ratio(1, 4),
        },
        Instance {
            a0: s_ratio(3, 2),
            b: [s_ratio(2, 7), s_ratio(3, 11), s_ratio(5, 9)],
            m: [2, 1, 1],
            q: s_ratio(1, 4),
        },
    ];
    let tol = inner_tol(cfg);
    instances
        .iter()
        .map(|inst| {
            let Instance { a0, b, m, q } = inst;
            let [b0, b1, b2] = b;
            let [m0, m1, m2] = *m;
            let name = format!("gasper_summation[m0={m0},m1={m1},m2={m2},q={q}]");
            let arg = pow_int(q, m0 + 1 - m1 - m2) / a0;
            let lhs_spec = PhiSpec::new(
                vec![
                    a0.clone(),
                    b0.clone(),
                    b1 * pow_int(q, m1),
                    b2 * pow_int(q, m2),
                ],
                vec![b0 * pow_int(q, m0 + 1), b1.clone(), b2.clone()],
                q.clone(),
                arg,
            );
            let lhs = phi_eval_certified(&lhs_spec, &tol, cfg.max_n).map(|(v, _)| v);
            let rhs = (|| {
                let products = qpoch_inf_certified(q, q, &tol, cfg.max_n)?
                    .mul(&qpoch_inf_certified(&(b0 * q / a0), q, &tol, cfg.max_n)?)
                    .div(
                        &qpoch_inf_certified(&(b0 * q), q, &tol, cfg.max_n)?
                            .mul(&qpoch_inf_certified(&(q / a0), q, &tol, cfg.max_n)?),
                    )?;
                let finite = crate::qpoch::qpoch(&(b0 * q), q, m0)?
                    * crate::qpoch::qpoch(&(b1 / b0), q, m1)?
                    * crate::qpoch::qpoch(&(b2 / b0), q, m2)?
                    / (crate::qpoch::qpoch(q, q, m0)?
                        * crate::qpoch::qpoch(b1, q, m1)?
                        * crate::qpoch::qpoch(b2, q, m2)?);
                let scale = pow_int(b0, m1 + m2 - m0);
                let term_spec = PhiSpec::new(
                    vec![
                        pow_int(q, -m0),
                        b0.clone(),
                        b0 * q / b1,
                        b0 * q / b2,
                    ],
                    vec![
                        b0 * q / a0,
                        b0 * pow_int(q, 1 - m1) / b1,
                        b0 * pow_int(q, 1 - m2) / b2,
                    ],
                    q.clone(),
                    q.clone(),
                );
                let terminating = Certified::exact(phi_terminating(&term_spec)?);
                Ok(products.mul_scalar(&(finite * scale)).mul(&terminating))
            })();
            residual_outcome(name, lhs, rhs, &cfg.tol)
        })
        .collect()
}

/// Vanishing family, non-terminating side: the sum with uppers
/// `a_0, b_i q^{m_i}`, lowers `b_i` and argument `q^{-(m_1+..+m_p)}/a_0`
/// is zero whenever that argument lies inside the unit disk. Checked both
/// numerically (generic `a_0`) and exactly (`a_0 = q^{-n}` terminates the
/// sum).
fn vanishing_nonterminating(cfg: &IdentityConfig) -> Vec<IdentityOutcome> {
    let tol = inner_tol(cfg);
    let mut out = Vec::new();

    // numeric instances
    let numeric = [
        (s_int(5), s_ratio(2, 7), 1i64, s_ratio(1, 4)),
        (s_ratio(7, 2), s_ratio(3, 5), 1i64, s_ratio(1, 3)),
    ];
    for (a0, b1, m1, q) in &numeric {
        let name = format!("vanishing_nonterminating[a0={a0},b1={b1},m1={m1},q={q}]");
        let spec = PhiSpec::new(
            vec![a0.clone(), b1 * pow_int(q, *m1)],
            vec![b1.clone()],
            q.clone(),
            pow_int(q, -m1) / a0,
        );
        let lhs = phi_eval_certified(&spec, &tol, cfg.max_n).map(|(v, _)| v);
        out.push(residual_outcome(
            name,
            lhs,
            Ok(Certified::exact(Scalar::zero())),
            &cfg.tol,
        ));
    }

    // exact terminating instances: a_0 = q^{-n}
    let exact = [
        (3i64, vec![(s_ratio(2, 7), 1i64)], s_ratio(1, 4)),
        (5i64, vec![(s_ratio(3, 11), 2i64)], s_ratio(1, 4)),
        (4i64, vec![(s_ratio(2, 7), 1i64), (s_ratio(5, 9), 1i64)], s_ratio(1, 3)),
    ];
    for (n, bs, q) in &exact {
        let msum: i64 = bs.iter().map(|(_, m)| m).sum();
        let name = format!("vanishing_nonterminating_exact[n={n},msum={msum},q={q}]");
        let mut upper = vec![pow_int(q, -n)];
        let mut lower = Vec::new();
        for (b, m) in bs {
            upper.push(b * pow_int(q, *m));
            lower.push(b.clone());
        }
        let spec = PhiSpec::new(upper, lower, q.clone(), pow_int(q, n - msum));
        out.push(exact_zero_outcome(name, phi_terminating(&spec)));
    }
    out
}

/// Vanishing family, terminating side: uppers `q^{-n}, b_i q^{m_i}`, lowers
/// `b_i`, argument exactly `q`; zero whenever `n > m_1 + ... + m_p`.
fn vanishing_terminating(cfg: &IdentityConfig) -> Vec<IdentityOutcome> {
    let _ = cfg;
    let instances: [(i64, Vec<(Scalar, i64)>, Scalar); 3] = [
        (3, vec![(s_ratio(2, 7), 1)], s_ratio(1, 4)),
        (2, vec![(s_ratio(2, 7), 1)], s_ratio(1, 4)),
        (
            4,
            vec![
                (s_ratio(2, 7), 1),
                (s_ratio(3, 11), 1),
                (s_ratio(5, 9), 1),
            ],
            s_ratio(1, 4),
        ),
    ];
    instances
        .iter()
        .map(|(n, bs, q)| {
            let msum: i64 = bs.iter().map(|(_, m)| m).sum();
            let name = format!("vanishing_terminating[n={n},msum={msum},q={q}]");
            let mut upper = vec![pow_int(q, -n)];
            let mut lower = Vec::new();
            for (b, m) in bs {
                upper.push(b * pow_int(q, *m));
                lower.push(b.clone());
            }
            let spec = PhiSpec::new(upper, lower, q.clone(), q.clone());
            exact_zero_outcome(name, phi_terminating(&spec))
        })
        .collect()
}

/// The three classical one-step contiguous relations.
fn heine_contiguous(cfg: &IdentityConfig) -> Vec<IdentityOutcome> {
    let tol = inner_tol(cfg);
    let one = Scalar::one;
    let mut out = Vec::new();
    for p in &cfg.param_sets {
        let ParamSet { a, b, c, q, .. } = p;
        for x in &cfg.x_samples {
            let phi = |ua: &Scalar, ub: &Scalar, lc: &Scalar| -> Result<Certified> {
                Ok(phi_eval_certified(&PhiSpec::phi21(ua, ub, lc, q, x), &tol, cfg.max_n)?.0)
            };

            // up: phi(aq, b, c) - phi(a, b, c) = a(1-b)x/(1-c) phi(aq, bq, cq)
            let name = format!("heine_contiguous_up[{p};x={x}]");
            let lhs = (|| Ok(phi(&(a * q), b, c)?.sub(&phi(a, b, c)?)))();
            let rhs = (|| {
                let scale = a * (one() - b) * x / (one() - c);
                Ok(phi(&(a * q), &(b * q), &(c * q))?.mul_scalar(&scale))
            })();
            out.push(residual_outcome(name, lhs, rhs, &cfg.tol));

            // down: (1 - c/a) phi(a/q, b, c) - (1 - c/b) phi(a, b/q, c)
            //       = (c/b)(1 - b/a)(1 - abx/(cq)) phi(a, b, c)
            let name = format!("heine_contiguous_down[{p};x={x}]");
            let lhs = (|| {
                let ta = phi(&(a / q), b, c)?.mul_scalar(&(one() - c / a));
                let tb = phi(a, &(b / q), c)?.mul_scalar(&(one() - c / b));
                Ok(ta.sub(&tb))
            })();
            let rhs = (|| {
                let scale = (c / b) * (one() - b / a) * (one() - a * b * x / (c * q));
                Ok(phi(a, b, c)?.mul_scalar(&scale))
            })();
            out.push(residual_outcome(name, lhs, rhs, &cfg.tol));

            // mixed: phi(aq, b/q, c) - phi(a, b, c) = (aq - b)x/((1-c)q) phi(aq, b, cq)
            let name = format!("heine_contiguous_mixed[{p};x={x}]");
            let lhs = (|| Ok(phi(&(a * q), &(b / q), c)?.sub(&phi(a, b, c)?)))();
            let rhs = (|| {
                let scale = (a * q - b) * x / ((one() - c) * q);
                Ok(phi(&(a * q), b, &(c * q))?.mul_scalar(&scale))
            })();
            out.push(residual_outcome(name, lhs, rhs, &cfg.tol));
        }
    }
    out
}

/// The `(1,0,1)` relation `phi(aq, b; cq) = Q phi(aq, bq; cq) + R phi(a, b; c)`.
///
/// `R` must equal `-b(1-c)/(c-b)` exactly. `Q` is computed from the operator
/// route and *recorded*: when it has the shape `(1-b)(c - u x)/(c-b)` the
/// scalar `u` is extracted and compared against `a*b`.
fn three_term_a_c_up(cfg: &IdentityConfig) -> Vec<IdentityOutcome> {
    cfg.param_sets
        .iter()
        .map(|p| {
            let name = format!("three_term_a_c_up[{p}]");
            let ParamSet { a, b, c, .. } = p;
            let one = Scalar::one();
            match qr(ShiftTriple::new(1, 0, 1), p, Route::Op) {
                Ok(coeffs) => {
                    let expected_r = crate::rat::RatX::constant(
                        -(b * (&one - c)) / (c - b),
                    );
                    let r_matches = coeffs.r_coeff == expected_r;
                    // strip the (1-b)/(c-b) prefactor and read off c - u x
                    let scale = (c - b) / (&one - b);
                    let stripped = coeffs.q_coeff.mul_scalar(&scale);
                    let detail = match stripped.as_poly() {
                        Some(poly) if poly.degree() == Some(1) && poly.coeff(0) == *c => {
                            let u = -poly.coeff(1);
                            let is_ab = u == a * b;
                            format!(
                                "Q = (1-b)(c - u*x)/(c-b) with u = {}{}",
                                u,
                                if is_ab { " = a*b" } else { " (differs from a*b)" }
                            )
                        }
                        _ => format!("Q-side factor not linear: Q = {}", coeffs.q_coeff),
                    };
                    IdentityOutcome {
                        name,
                        exact: true,
                        pass: r_matches,
                        residual: None,
                        bound: None,
                        detail: Some(detail),
                    }
                }
                Err(e) => precondition_outcome(name, Some(e)),
            }
        })
        .collect()
}
