//! Shift-box sweeps: route agreement and the structural identities over a
//! cube of shifts times a list of parameter sets.
//!
//! Cells evaluate independently (everything underneath is pure), so the
//! sweep fans out over rayon's pool; results are keyed and ordered by the
//! cell index, which keeps the report byte-identical at any parallelism.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::coefficients::{
    poly_part, poly_part_extended, poly_part_tilde, poly_part_tilde_extended, CoeffContext,
    ShiftTriple,
};
use crate::params::ParamSet;
use crate::threeterm::{check_poly_part, check_qr_shift, qr, Route};

/// Which checks a sweep runs.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum SweepCheck {
    /// All three routes produce identical coefficient pairs.
    Routes,
    /// Polynomial-part proportionality, degree bound, leading coefficient.
    PolyPart,
    /// The cross-shift identity linking Q at the decremented shift to R.
    QrShift,
    /// Extending the polynomial-part summation ranges changes nothing.
    Truncation,
}

impl SweepCheck {
    pub const ALL: [SweepCheck; 4] = [
        SweepCheck::Routes,
        SweepCheck::PolyPart,
        SweepCheck::QrShift,
        SweepCheck::Truncation,
    ];
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub lo: i64,
    pub hi: i64,
    pub param_sets: Vec<ParamSet>,
    /// `None` runs every check.
    pub only: Option<SweepCheck>,
    /// How many extra summation terms the truncation check appends.
    pub extension: i64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            lo: -3,
            hi: 3,
            param_sets: crate::params::default_param_sets(),
            only: None,
            extension: 3,
        }
    }
}

/// Result of one `(shift, parameter set)` cell. Checks that did not run are
/// `None`; a cell-level error (genericity, usually) is recorded rather than
/// aborting the sweep.
#[derive(Clone, Debug, Serialize)]
pub struct CellOutcome {
    pub params: String,
    pub routes_agree: Option<bool>,
    pub poly_part: Option<bool>,
    pub qr_shift: Option<bool>,
    pub truncation_stable: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CellOutcome {
    pub fn pass(&self) -> bool {
        self.error.is_none()
            && self.routes_agree.unwrap_or(true)
            && self.poly_part.unwrap_or(true)
            && self.qr_shift.unwrap_or(true)
            && self.truncation_stable.unwrap_or(true)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub lo: i64,
    pub hi: i64,
    /// Cells keyed `"k,l,m"`, one outcome per parameter set, in input order.
    pub cells: BTreeMap<String, Vec<CellOutcome>>,
    pub total_cells: usize,
    pub failed_cells: usize,
    pub errored_cells: usize,
}

impl SweepReport {
    pub fn all_pass(&self) -> bool {
        self.failed_cells == 0 && self.errored_cells == 0
    }

    pub fn any_error(&self) -> bool {
        self.errored_cells > 0
    }
}

fn runs(config: &SweepConfig, check: SweepCheck) -> bool {
    config.only.map_or(true, |only| only == check)
}

fn evaluate_cell(config: &SweepConfig, shift: ShiftTriple, params: &ParamSet) -> CellOutcome {
    let mut outcome = CellOutcome {
        params: params.to_string(),
        routes_agree: None,
        poly_part: None,
        qr_shift: None,
        truncation_stable: None,
        error: None,
    };

    let run = |checked: &mut Option<bool>,
               result: crate::error::Result<bool>,
               error: &mut Option<String>| {
        match result {
            Ok(pass) => *checked = Some(pass),
            Err(e) => {
                *checked = Some(false);
                if error.is_none() {
                    *error = Some(e.to_string());
                }
            }
        }
    };

    if runs(config, SweepCheck::Routes) {
        let result = (|| {
            let t2 = qr(shift, params, Route::T2)?;
            let t3 = qr(shift, params, Route::T3)?;
            let op = qr(shift, params, Route::Op)?;
            Ok(t2.same_pair(&t3) && t2.same_pair(&op))
        })();
        let mut err = outcome.error.take();
        run(&mut outcome.routes_agree, result, &mut err);
        outcome.error = err;
    }

    // The structural checks are stated for normalized shifts.
    let normalized = if shift.is_normalized() {
        (shift, params.clone())
    } else {
        (shift.swapped(), params.swapped())
    };

    if runs(config, SweepCheck::PolyPart) {
        let result = (|| {
            normalized.1.genericity_check(&[normalized.0])?;
            let ctx = CoeffContext::new(normalized.1.clone(), normalized.0);
            Ok(check_poly_part(&ctx)?.pass())
        })();
        let mut err = outcome.error.take();
        run(&mut outcome.poly_part, result, &mut err);
        outcome.error = err;
    }

    if runs(config, SweepCheck::QrShift) {
        let result = check_qr_shift(shift, params, Route::T2).map(|r| r.pass);
        let mut err = outcome.error.take();
        run(&mut outcome.qr_shift, result, &mut err);
        outcome.error = err;
    }

    if runs(config, SweepCheck::Truncation) {
        let result = (|| {
            normalized.1.genericity_check(&[normalized.0])?;
            let ctx = CoeffContext::new(normalized.1.clone(), normalized.0);
            let base = poly_part(&ctx)?;
            let extended = poly_part_extended(&ctx, config.extension)?;
            let base_t = poly_part_tilde(&ctx)?;
            let extended_t = poly_part_tilde_extended(&ctx, config.extension)?;
            let shifted_base_t = base_t.mul_xpow(config.extension as usize);
            Ok(base == extended && shifted_base_t == extended_t)
        })();
        let mut err = outcome.error.take();
        run(&mut outcome.truncation_stable, result, &mut err);
        outcome.error = err;
    }

    outcome
}

/// Run the sweep over the box `[lo, hi]^3` for every parameter set.
pub fn run_sweep(config: &SweepConfig) -> SweepReport {
    let mut cells = Vec::new();
    for k in config.lo..=config.hi {
        for l in config.lo..=config.hi {
            for m in config.lo..=config.hi {
                for pi in 0..config.param_sets.len() {
                    cells.push((ShiftTriple::new(k, l, m), pi));
                }
            }
        }
    }

    let outcomes: Vec<(ShiftTriple, CellOutcome)> = cells
        .par_iter()
        .map(|&(shift, pi)| {
            (
                shift,
                evaluate_cell(config, shift, &config.param_sets[pi]),
            )
        })
        .collect();

    let mut map: BTreeMap<String, Vec<CellOutcome>> = BTreeMap::new();
    let mut failed = 0;
    let mut errored = 0;
    let total = outcomes.len();
    for (shift, outcome) in outcomes {
        if outcome.error.is_some() {
            errored += 1;
        } else if !outcome.pass() {
            failed += 1;
        }
        map.entry(shift.to_string()).or_default().push(outcome);
    }

    SweepReport {
        lo: config.lo,
        hi: config.hi,
        cells: map,
        total_cells: total,
        failed_cells: failed,
        errored_cells: errored,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::default_param_sets;
    use crate::scalar::{pow_int, s_ratio};

    #[test]
    fn small_box_passes_all_checks() {
        let config = SweepConfig {
            lo: -1,
            hi: 1,
            param_sets: vec![default_param_sets().remove(0)],
            only: None,
            extension: 3,
        };
        let report = run_sweep(&config);
        assert!(report.all_pass(), "failed: {}", report.failed_cells);
        assert_eq!(report.total_cells, 27);
        assert_eq!(report.cells.len(), 27);
    }

    #[test]
    fn only_filter_restricts_checks() {
        let config = SweepConfig {
            lo: 0,
            hi: 1,
            param_sets: vec![default_param_sets().remove(0)],
            only: Some(SweepCheck::QrShift),
            extension: 3,
        };
        let report = run_sweep(&config);
        assert!(report.all_pass());
        for outcomes in report.cells.values() {
            for o in outcomes {
                assert!(o.qr_shift.is_some());
                assert!(o.routes_agree.is_none());
                assert!(o.poly_part.is_none());
                assert!(o.truncation_stable.is_none());
            }
        }
    }

    #[test]
    fn non_generic_cell_is_recorded_not_fatal() {
        let q = s_ratio(1, 4);
        let bad = ParamSet::new_unchecked(
            s_ratio(2, 3),
            s_ratio(3, 5),
            pow_int(&q, 2), // c = q^2 violates E1
            q,
        );
        let config = SweepConfig {
            lo: 0,
            hi: 0,
            param_sets: vec![bad],
            only: Some(SweepCheck::Routes),
            extension: 3,
        };
        let report = run_sweep(&config);
        assert!(!report.all_pass());
        assert!(report.any_error());
        let outcome = &report.cells["0,0,0"][0];
        assert!(outcome.error.as_deref().unwrap().contains("genericity"));
    }

    #[test]
    fn report_serialization_is_deterministic() {
        let config = SweepConfig {
            lo: 0,
            hi: 1,
            param_sets: vec![default_param_sets().remove(0)],
            only: Some(SweepCheck::Truncation),
            extension: 3,
        };
        let a = serde_json::to_string(&run_sweep(&config)).unwrap();
        let b = serde_json::to_string(&run_sweep(&config)).unwrap();
        assert_eq!(a, b);
    }
}
