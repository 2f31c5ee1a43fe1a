use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::expr::{LinExpr, Var};
use crate::highs::HighsSolver;
use crate::model::LpModel;

/// Default relative feasibility/optimality tolerance.
pub const DEFAULT_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    Error,
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::Unbounded => "unbounded",
            SolveStatus::Error => "error",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub status: SolveStatus,
    pub objective: f64,
    pub primal: Vec<f64>,
    pub duals: Option<Vec<f64>>,
    /// Solver diagnostics; empty on a clean optimal solve.
    pub message: String,
}

impl Solution {
    pub fn failed(status: SolveStatus, message: impl Into<String>) -> Self {
        Self {
            status,
            objective: f64::NAN,
            primal: Vec::new(),
            duals: None,
            message: message.into(),
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }

    pub fn value(&self, var: Var) -> f64 {
        self.primal[var.index()]
    }

    pub fn eval(&self, expr: &LinExpr) -> f64 {
        expr.evaluate(&self.primal)
    }
}

/// Contract every LP engine behind the model satisfies.
///
/// Implementations must report `Optimal` only when each row residual is at
/// most `tolerance × max(1, |rhs|)`; anything else is `Error` with a message.
pub trait LpSolver: Send + Sync {
    fn name(&self) -> &str;
    fn solve(&self, model: &LpModel, tolerance: f64) -> Solution;
}

/// Selectable solver backends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolverKind {
    #[default]
    HighsSimplex,
    HighsIpm,
}

impl SolverKind {
    pub fn build(self) -> Box<dyn LpSolver> {
        match self {
            SolverKind::HighsSimplex => Box::new(HighsSolver::simplex()),
            SolverKind::HighsIpm => Box::new(HighsSolver::ipm()),
        }
    }
}

impl FromStr for SolverKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "highs" | "simplex" | "highs-simplex" => Ok(SolverKind::HighsSimplex),
            "ipm" | "highs-ipm" => Ok(SolverKind::HighsIpm),
            other => Err(format!(
                "unknown solver `{other}` (expected highs, highs-simplex or highs-ipm)"
            )),
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverKind::HighsSimplex => "highs-simplex",
            SolverKind::HighsIpm => "highs-ipm",
        })
    }
}

/// Solves with the default backend.
pub fn solve(model: &LpModel, tolerance: f64) -> Solution {
    HighsSolver::simplex().solve(model, tolerance)
}

/// Post-solve audit shared by backends: an "optimal" answer that violates the
/// model beyond tolerance is downgraded to an error.
pub(crate) fn audit(model: &LpModel, mut solution: Solution, tolerance: f64) -> Solution {
    if solution.status != SolveStatus::Optimal {
        return solution;
    }
    if solution.primal.len() != model.num_vars() {
        return Solution::failed(
            SolveStatus::Error,
            format!(
                "solver returned {} primal values for {} variables",
                solution.primal.len(),
                model.num_vars()
            ),
        );
    }
    let (worst, at) = model.max_scaled_violation(&solution.primal);
    if worst > tolerance {
        solution.status = SolveStatus::Error;
        solution.message = format!(
            "solution violates `{}` by {worst:.3e} (scaled), above tolerance {tolerance:e}",
            at.unwrap_or_default()
        );
        return solution;
    }
    solution.objective = model.objective_value(&solution.primal);
    solution
}
