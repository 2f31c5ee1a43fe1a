//! HiGHS backend over the raw C API.

use std::ffi::{CStr, CString};
use std::os::raw::{c_char, c_void};
use std::path::Path;

use highs_sys::*;

use crate::model::{LpModel, Sense};
use crate::solver::{audit, LpSolver, SolveStatus, Solution};

/// Owned HiGHS instance.
struct Handle(*mut c_void);

impl Handle {
    fn new() -> Self {
        let ptr = unsafe { Highs_create() };
        assert!(!ptr.is_null(), "Highs_create returned null");
        let h = Handle(ptr);
        h.set_bool("output_flag", false);
        h.set_int("threads", 1);
        h
    }

    fn set_bool(&self, option: &str, value: bool) {
        let key = CString::new(option).unwrap();
        unsafe { Highs_setBoolOptionValue(self.0, key.as_ptr(), value as HighsInt) };
    }

    fn set_int(&self, option: &str, value: HighsInt) {
        let key = CString::new(option).unwrap();
        unsafe { Highs_setIntOptionValue(self.0, key.as_ptr(), value) };
    }

    fn set_double(&self, option: &str, value: f64) {
        let key = CString::new(option).unwrap();
        unsafe { Highs_setDoubleOptionValue(self.0, key.as_ptr(), value) };
    }

    fn set_string(&self, option: &str, value: &str) {
        let key = CString::new(option).unwrap();
        let val = CString::new(value).unwrap();
        unsafe { Highs_setStringOptionValue(self.0, key.as_ptr(), val.as_ptr()) };
    }

    fn run(&self) -> HighsInt {
        unsafe { Highs_run(self.0) }
    }

    fn model_status(&self) -> HighsInt {
        unsafe { Highs_getModelStatus(self.0) }
    }

    fn num_cols(&self) -> usize {
        unsafe { Highs_getNumCol(self.0) as usize }
    }

    fn num_rows(&self) -> usize {
        unsafe { Highs_getNumRow(self.0) as usize }
    }

    fn objective(&self) -> f64 {
        unsafe { Highs_getObjectiveValue(self.0) }
    }

    fn solution(&self) -> (Vec<f64>, Vec<f64>) {
        let mut col_value = vec![0.0; self.num_cols()];
        let mut col_dual = vec![0.0; self.num_cols()];
        let mut row_value = vec![0.0; self.num_rows()];
        let mut row_dual = vec![0.0; self.num_rows()];
        unsafe {
            Highs_getSolution(
                self.0,
                col_value.as_mut_ptr(),
                col_dual.as_mut_ptr(),
                row_value.as_mut_ptr(),
                row_dual.as_mut_ptr(),
            )
        };
        (col_value, row_dual)
    }

    fn col_name(&self, col: usize) -> String {
        // HiGHS names are bounded by kHighsMaximumStringLength
        let mut buf = vec![0 as c_char; 1024];
        unsafe { Highs_getColName(self.0, col as HighsInt, buf.as_mut_ptr()) };
        unsafe { CStr::from_ptr(buf.as_ptr()) }
            .to_string_lossy()
            .into_owned()
    }

    /// Runs, re-running without presolve when HiGHS cannot tell infeasible from unbounded.
    fn run_classified(&self) -> Result<HighsInt, String> {
        if self.run() == kHighsStatusError {
            return Err("HiGHS run returned an error status".into());
        }
        let mut status = self.model_status();
        if status == kHighsModelStatusUnboundedOrInfeasible {
            self.set_string("presolve", "off");
            unsafe { Highs_clearSolver(self.0) };
            if self.run() == kHighsStatusError {
                return Err("HiGHS re-run without presolve failed".into());
            }
            status = self.model_status();
        }
        Ok(status)
    }
}

impl Drop for Handle {
    fn drop(&mut self) {
        unsafe { Highs_destroy(self.0) };
    }
}

fn classify(status: HighsInt) -> (SolveStatus, &'static str) {
    match status {
        s if s == kHighsModelStatusOptimal || s == kHighsModelStatusModelEmpty => {
            (SolveStatus::Optimal, "")
        }
        s if s == kHighsModelStatusInfeasible => (SolveStatus::Infeasible, "model is infeasible"),
        s if s == kHighsModelStatusUnbounded => (SolveStatus::Unbounded, "model is unbounded"),
        s if s == kHighsModelStatusUnboundedOrInfeasible => (
            SolveStatus::Error,
            "solver could not tell infeasible from unbounded",
        ),
        s if s == kHighsModelStatusTimeLimit || s == kHighsModelStatusIterationLimit => {
            (SolveStatus::Error, "solver stopped at a limit")
        }
        _ => (SolveStatus::Error, "solver failed"),
    }
}

/// HiGHS simplex or interior-point backend.
#[derive(Debug, Clone)]
pub struct HighsSolver {
    method: &'static str,
    label: &'static str,
}

impl HighsSolver {
    pub fn simplex() -> Self {
        Self {
            method: "simplex",
            label: "highs-simplex",
        }
    }

    pub fn ipm() -> Self {
        Self {
            method: "ipm",
            label: "highs-ipm",
        }
    }
}

impl LpSolver for HighsSolver {
    fn name(&self) -> &str {
        self.label
    }

    fn solve(&self, model: &LpModel, tolerance: f64) -> Solution {
        let n = model.num_vars();
        let m = model.num_constraints();
        if n == 0 {
            // nothing to optimize: feasible iff every row is satisfied by the empty point
            let violated = model
                .constraints
                .iter()
                .any(|c| c.violation(&[]) > tolerance * c.rhs.abs().max(1.0));
            return if violated {
                Solution::failed(SolveStatus::Infeasible, "empty model with violated rows")
            } else {
                Solution {
                    status: SolveStatus::Optimal,
                    objective: model.objective_offset,
                    primal: Vec::new(),
                    duals: Some(vec![0.0; m]),
                    message: String::new(),
                }
            };
        }

        let handle = Handle::new();
        handle.set_string("solver", self.method);
        // HiGHS tolerances are absolute on the scaled model; keep them tighter
        // than the relative audit applied afterwards.
        let inner = (tolerance * 0.1).max(1e-10);
        handle.set_double("primal_feasibility_tolerance", inner);
        handle.set_double("dual_feasibility_tolerance", inner);
        if self.method == "ipm" {
            handle.set_double("ipm_optimality_tolerance", inner.max(1e-9));
            handle.set_string("run_crossover", "on");
        }

        let inf = unsafe { Highs_getInfinity(handle.0) };
        let clamp = |x: f64| {
            if x == f64::INFINITY {
                inf
            } else if x == f64::NEG_INFINITY {
                -inf
            } else {
                x
            }
        };
        let col_lower: Vec<f64> = model.variables.iter().map(|v| clamp(v.lower)).collect();
        let col_upper: Vec<f64> = model.variables.iter().map(|v| clamp(v.upper)).collect();
        let mut row_lower = Vec::with_capacity(m);
        let mut row_upper = Vec::with_capacity(m);
        for c in &model.constraints {
            let (lo, up) = match c.sense {
                Sense::Le => (-inf, c.rhs),
                Sense::Ge => (c.rhs, inf),
                Sense::Eq => (c.rhs, c.rhs),
            };
            row_lower.push(lo);
            row_upper.push(up);
        }

        // compressed sparse column matrix
        let mut counts = vec![0usize; n];
        for c in &model.constraints {
            for &(v, _) in &c.terms {
                counts[v.index()] += 1;
            }
        }
        let mut start = Vec::with_capacity(n);
        let mut acc = 0usize;
        for &k in &counts {
            start.push(acc as HighsInt);
            acc += k;
        }
        let nnz = acc;
        let mut cursor: Vec<usize> = start.iter().map(|&s| s as usize).collect();
        let mut index = vec![0 as HighsInt; nnz];
        let mut value = vec![0.0; nnz];
        for (row, c) in model.constraints.iter().enumerate() {
            for &(v, coef) in &c.terms {
                let k = cursor[v.index()];
                index[k] = row as HighsInt;
                value[k] = coef;
                cursor[v.index()] += 1;
            }
        }

        let pass = unsafe {
            Highs_passLp(
                handle.0,
                n as HighsInt,
                m as HighsInt,
                nnz as HighsInt,
                kHighsMatrixFormatColwise,
                kHighsObjSenseMinimize,
                model.objective_offset,
                model.objective.as_ptr(),
                col_lower.as_ptr(),
                col_upper.as_ptr(),
                row_lower.as_ptr(),
                row_upper.as_ptr(),
                start.as_ptr(),
                index.as_ptr(),
                value.as_ptr(),
            )
        };
        if pass == kHighsStatusError {
            return Solution::failed(SolveStatus::Error, "HiGHS rejected the model");
        }

        let status = match handle.run_classified() {
            Ok(s) => s,
            Err(msg) => return Solution::failed(SolveStatus::Error, msg),
        };
        let (kind, msg) = classify(status);
        if kind != SolveStatus::Optimal {
            return Solution::failed(kind, msg);
        }
        let (primal, duals) = handle.solution();
        let solution = Solution {
            status: SolveStatus::Optimal,
            objective: handle.objective(),
            primal,
            duals: Some(duals),
            message: String::new(),
        };
        audit(model, solution, tolerance)
    }
}

/// Result of solving an MPS file read from disk.
#[derive(Debug, Clone, PartialEq)]
pub struct ExternalSolution {
    pub status: SolveStatus,
    pub objective: f64,
    /// Column values keyed by the column names found in the file.
    pub columns: Vec<(String, f64)>,
}

impl ExternalSolution {
    pub fn value(&self, name: &str) -> Option<f64> {
        self.columns
            .iter()
            .find(|(n, _)| n == name)
            .map(|&(_, v)| v)
    }
}

/// Reads an MPS file with HiGHS' own parser and solves it.
///
/// The parse path is independent of [`LpModel`], so this checks an export
/// end-to-end.
pub fn solve_mps_file(path: &Path) -> Result<ExternalSolution, String> {
    let handle = Handle::new();
    let cpath = CString::new(path.to_string_lossy().as_bytes()).map_err(|e| e.to_string())?;
    let read = unsafe { Highs_readModel(handle.0, cpath.as_ptr()) };
    if read == kHighsStatusError {
        return Err(format!("HiGHS could not read `{}`", path.display()));
    }
    let status = handle.run_classified()?;
    let (kind, _) = classify(status);
    if kind != SolveStatus::Optimal {
        return Ok(ExternalSolution {
            status: kind,
            objective: f64::NAN,
            columns: Vec::new(),
        });
    }
    let (values, _) = handle.solution();
    let columns = values
        .into_iter()
        .enumerate()
        .map(|(j, v)| (handle.col_name(j), v))
        .collect();
    Ok(ExternalSolution {
        status: kind,
        objective: handle.objective(),
        columns,
    })
}
