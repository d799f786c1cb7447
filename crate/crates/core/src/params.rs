//! Parameter sets `(a, b, c, q)` and their genericity certificate.
//!
//! The constructions in this crate are defined only away from the power
//! lattice of `q`:
//!
//! * E1: `c` and `a/b` are not integer powers of `q`;
//! * E2: `a`, `b`, `c/a`, `c/b` are not integer powers of `q`.
//!
//! On top of E1/E2, every scalar denominator appearing in the coefficient
//! formulas for a requested set of shifts is evaluated eagerly; any zero is
//! reported as a named violation rather than discovered mid-computation.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::coefficients::ShiftTriple;
use crate::error::{Error, Result, Violation};
use crate::qpoch::{in_q_power_lattice, qpoch};
use crate::scalar::Scalar;

/// Concrete rational parameters of the series family, with `0 < |q| < 1`.
#[derive(Clone, PartialEq, Eq)]
pub struct ParamSet {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
    pub q: Scalar,
    checked: bool,
}

impl std::fmt::Debug for ParamSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "ParamSet(a={}, b={}, c={}, q={})",
            self.a, self.b, self.c, self.q
        )
    }
}

impl std::fmt::Display for ParamSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{},{},{},{}", self.a, self.b, self.c, self.q)
    }
}

/// Certificate that a parameter set passed the full genericity check for a
/// given collection of shifts.
#[derive(Clone, Debug, Serialize)]
pub struct GenericityCertificate {
    pub params: String,
    pub shifts: Vec<String>,
}

impl ParamSet {
    /// Validate the base conditions (`0 < |q| < 1`, nonzero parameters,
    /// E1, E2) and construct a checked parameter set.
    pub fn new(a: Scalar, b: Scalar, c: Scalar, q: Scalar) -> Result<Self> {
        let p = ParamSet {
            a,
            b,
            c,
            q,
            checked: false,
        };
        let violations = p.base_violations();
        if violations.is_empty() {
            Ok(ParamSet { checked: true, ..p })
        } else {
            Err(Error::Genericity(violations))
        }
    }

    /// Construct without validation; used to probe non-generic inputs so the
    /// checker itself can be exercised and report violations.
    pub fn new_unchecked(a: Scalar, b: Scalar, c: Scalar, q: Scalar) -> Self {
        ParamSet {
            a,
            b,
            c,
            q,
            checked: false,
        }
    }

    /// Whether the base genericity conditions were verified at construction.
    pub fn is_checked(&self) -> bool {
        self.checked
    }

    /// `(aq, bq, cq, q)`. Lattice membership is invariant under the shift,
    /// so the checked flag carries over.
    pub fn shifted_up(&self) -> ParamSet {
        ParamSet {
            a: &self.a * &self.q,
            b: &self.b * &self.q,
            c: &self.c * &self.q,
            q: self.q.clone(),
            checked: self.checked,
        }
    }

    /// `(b, a, c, q)`. E1/E2 are symmetric in `a` and `b`.
    pub fn swapped(&self) -> ParamSet {
        ParamSet {
            a: self.b.clone(),
            b: self.a.clone(),
            c: self.c.clone(),
            q: self.q.clone(),
            checked: self.checked,
        }
    }

    fn base_violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let one = Scalar::one();
        if self.q.is_zero() {
            out.push(violation("q must be nonzero", &self.q));
            return out;
        }
        if self.q.abs() >= one {
            out.push(violation("|q| must be < 1", &self.q));
            return out;
        }
        for (name, v) in [("a", &self.a), ("b", &self.b), ("c", &self.c)] {
            if v.is_zero() {
                out.push(violation(&format!("{name} must be nonzero"), v));
            }
        }
        if !out.is_empty() {
            return out;
        }
        let lattice = |label: &str, v: &Scalar, out: &mut Vec<Violation>| {
            if let Some(n) = in_q_power_lattice(v, &self.q) {
                out.push(violation(&format!("{label} = q^{n}"), v));
            }
        };
        // E1
        lattice("E1: c", &self.c, &mut out);
        lattice("E1: a/b", &(&self.a / &self.b), &mut out);
        // E2
        lattice("E2: a", &self.a, &mut out);
        lattice("E2: b", &self.b, &mut out);
        lattice("E2: c/a", &(&self.c / &self.a), &mut out);
        lattice("E2: c/b", &(&self.c / &self.b), &mut out);
        out
    }

    /// Full genericity check for the given shifts: the base conditions plus
    /// every scalar denominator the coefficient formulas touch. Returns the
    /// complete violation list on failure.
    pub fn genericity_check(&self, shifts: &[ShiftTriple]) -> Result<GenericityCertificate> {
        let mut out = self.base_violations();
        if out.is_empty() {
            for shift in shifts {
                self.shift_violations(shift, &mut out);
            }
        }
        if out.is_empty() {
            Ok(GenericityCertificate {
                params: self.to_string(),
                shifts: shifts.iter().map(|s| s.to_string()).collect(),
            })
        } else {
            Err(Error::Genericity(out))
        }
    }

    fn shift_violations(&self, shift: &ShiftTriple, out: &mut Vec<Violation>) {
        // The coefficient formulas are stated for k <= l; the public entry
        // point swaps (a, b) to get there, so check the normalized form.
        let (shift, p) = if shift.k <= shift.l {
            (*shift, self.clone())
        } else {
            (shift.swapped(), self.swapped())
        };
        let ShiftTriple { k, l, m } = shift;
        let q = &p.q;
        let one = Scalar::one();
        let ctx = format!("shift ({},{},{})", shift.k, shift.l, shift.m);

        let mut nonzero_poch = |label: &str, s: &Scalar, n: i64| {
            match qpoch(s, q, n) {
                Ok(v) => {
                    if v.is_zero() {
                        out.push(violation(&format!("{ctx}: {label} vanishes"), s));
                    }
                }
                Err(_) => out.push(violation(&format!("{ctx}: {label} has a pole"), s)),
            }
        };

        nonzero_poch(&format!("(a;q)_{k}"), &p.a, k);
        nonzero_poch(&format!("(b;q)_{l}"), &p.b, l);
        nonzero_poch(&format!("(c;q)_{m}"), &p.c, m);
        nonzero_poch(&format!("(aq;q)_{}", k - 1), &(&p.a * q), k - 1);
        nonzero_poch(&format!("(bq;q)_{}", l - 1), &(&p.b * q), l - 1);
        nonzero_poch(&format!("(cq;q)_{}", m - 1), &(&p.c * q), m - 1);
        // mu1/mu2 numerator and denominator factors
        nonzero_poch(&format!("(aq/b;q)_{}", k - l), &(&p.a * q / &p.b), k - l);
        nonzero_poch(&format!("(bq/a;q)_{}", l - k), &(&p.b * q / &p.a), l - k);
        nonzero_poch(&format!("(aq/c;q)_{}", k - m), &(&p.a * q / &p.c), k - m);
        nonzero_poch(&format!("(bq/c;q)_{}", l - m), &(&p.b * q / &p.c), l - m);

        for (label, v) in [
            ("q - c", q - &p.c),
            ("1 - c", &one - &p.c),
            ("b - a", &p.b - &p.a),
        ] {
            if v.is_zero() {
                out.push(violation(&format!("{ctx}: {label} = 0"), &v));
            }
        }
    }
}

fn violation(condition: &str, value: &Scalar) -> Violation {
    Violation {
        condition: condition.to_string(),
        value: value.to_string(),
    }
}

/// The baked-in parameter sets used by the sweep and verification defaults.
/// Each passes the genericity check for the default shift box.
pub fn default_param_sets() -> Vec<ParamSet> {
    use crate::scalar::s_ratio;
    vec![
        ParamSet::new(s_ratio(2, 3), s_ratio(3, 5), s_ratio(5, 7), s_ratio(1, 4))
            .expect("default parameter set 0 is generic"),
        ParamSet::new(s_ratio(1, 2), s_ratio(2, 7), s_ratio(3, 11), s_ratio(1, 3))
            .expect("default parameter set 1 is generic"),
        ParamSet::new(s_ratio(-3, 4), s_ratio(5, 9), s_ratio(7, 13), s_ratio(2, 7))
            .expect("default parameter set 2 is generic"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{pow_int, s_ratio};

    #[test]
    fn spec_parameters_pass_for_unit_shift() {
        let p = ParamSet::new(s_ratio(2, 3), s_ratio(3, 5), s_ratio(5, 7), s_ratio(1, 4)).unwrap();
        let cert = p.genericity_check(&[ShiftTriple::new(1, 1, 1)]).unwrap();
        assert_eq!(cert.shifts, vec!["1,1,1"]);
    }

    #[test]
    fn c_equal_q_squared_fails_e1_with_witness() {
        let q = s_ratio(1, 4);
        let p = ParamSet::new_unchecked(s_ratio(2, 3), s_ratio(3, 5), pow_int(&q, 2), q);
        let err = p.genericity_check(&[]).unwrap_err();
        let Error::Genericity(vs) = err else {
            panic!("expected genericity error")
        };
        assert!(vs.iter().any(|v| v.condition == "E1: c = q^2"), "{vs:?}");
    }

    #[test]
    fn equal_a_b_fails_e1_via_ratio() {
        let p = ParamSet::new_unchecked(
            s_ratio(2, 3),
            s_ratio(2, 3),
            s_ratio(5, 7),
            s_ratio(1, 4),
        );
        let err = p.genericity_check(&[]).unwrap_err();
        let Error::Genericity(vs) = err else {
            panic!("expected genericity error")
        };
        assert!(vs.iter().any(|v| v.condition == "E1: a/b = q^0"), "{vs:?}");
    }

    #[test]
    fn bad_q_is_rejected() {
        assert!(ParamSet::new(s_ratio(2, 3), s_ratio(3, 5), s_ratio(5, 7), s_ratio(5, 4)).is_err());
        assert!(ParamSet::new(s_ratio(2, 3), s_ratio(3, 5), s_ratio(5, 7), s_ratio(0, 1)).is_err());
    }

    #[test]
    fn default_sets_are_generic_over_the_default_box() {
        let mut shifts = Vec::new();
        for k in -3..=3 {
            for l in -3..=3 {
                for m in -3..=3 {
                    shifts.push(ShiftTriple::new(k, l, m));
                }
            }
        }
        for p in default_param_sets() {
            p.genericity_check(&shifts).unwrap();
        }
    }
}
