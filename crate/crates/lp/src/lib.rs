//! Commodity-agnostic linear-program assembly.
//!
//! Model code registers variables and constraints on an [`LpBuilder`],
//! assembles it into an immutable [`LpModel`], and hands that to any
//! [`LpSolver`]. The same model can be written out as fixed-column MPS
//! with [`export_mps`] and solved by an external tool.

mod expr;
mod highs;
mod model;
mod mps;
mod solver;

pub use expr::{LinExpr, Var};
pub use highs::{solve_mps_file, ExternalSolution, HighsSolver};
pub use model::{ConstraintRecord, LpBuilder, LpError, LpModel, Sense, VariableInfo};
pub use mps::{export_mps, format_number};
pub use solver::{solve, LpSolver, SolveStatus, Solution, SolverKind, DEFAULT_TOLERANCE};
