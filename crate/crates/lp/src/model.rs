use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{LinExpr, Var};

#[derive(Debug, Error, PartialEq)]
pub enum LpError {
    #[error("duplicate variable name `{name}`")]
    DuplicateVariable { name: String },
    #[error("duplicate constraint name `{name}` (emitted by `{first}` and again by `{second}`)")]
    DuplicateConstraint {
        name: String,
        first: String,
        second: String,
    },
    #[error("constraint `{constraint}` references unknown variable handle #{index}")]
    UnknownHandle { constraint: String, index: usize },
    #[error("variable `{name}` has lower bound {lower} above upper bound {upper}")]
    InvertedBounds { name: String, lower: f64, upper: f64 },
    #[error("non-finite coefficient in `{location}`")]
    NonFinite { location: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Le => "<=",
            Sense::Eq => "=",
            Sense::Ge => ">=",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VariableInfo {
    pub name: String,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintRecord {
    pub name: String,
    /// Emitting module, used in diagnostics.
    pub origin: String,
    pub terms: Vec<(Var, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

impl ConstraintRecord {
    pub fn activity(&self, values: &[f64]) -> f64 {
        self.terms.iter().map(|&(v, c)| c * values[v.0]).sum()
    }

    /// Amount by which the row is violated at `values` (0 when satisfied).
    pub fn violation(&self, values: &[f64]) -> f64 {
        let lhs = self.activity(values);
        match self.sense {
            Sense::Le => (lhs - self.rhs).max(0.0),
            Sense::Ge => (self.rhs - lhs).max(0.0),
            Sense::Eq => (lhs - self.rhs).abs(),
        }
    }
}

/// Mutable registry that model-building code writes into.
///
/// Registration never fails; every consistency check happens in
/// [`LpBuilder::assemble`] so emission code stays infallible.
#[derive(Debug, Default)]
pub struct LpBuilder {
    name: String,
    variables: Vec<VariableInfo>,
    constraints: Vec<ConstraintRecord>,
    objective: LinExpr,
}

impl LpBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn add_var(&mut self, name: impl Into<String>, lower: f64, upper: f64) -> Var {
        let var = Var(self.variables.len());
        self.variables.push(VariableInfo {
            name: name.into(),
            lower,
            upper,
        });
        var
    }

    /// Nonnegative variable without an upper bound.
    pub fn add_nonneg(&mut self, name: impl Into<String>) -> Var {
        self.add_var(name, 0.0, f64::INFINITY)
    }

    pub fn add_free(&mut self, name: impl Into<String>) -> Var {
        self.add_var(name, f64::NEG_INFINITY, f64::INFINITY)
    }

    /// Registers `expr (sense) rhs`; the expression's constant moves to the right-hand side.
    pub fn add_constraint(
        &mut self,
        origin: &str,
        name: impl Into<String>,
        expr: LinExpr,
        sense: Sense,
        rhs: f64,
    ) {
        self.constraints.push(ConstraintRecord {
            name: name.into(),
            origin: origin.to_string(),
            rhs: rhs - expr.constant,
            terms: expr.terms,
            sense,
        });
    }

    pub fn add_objective(&mut self, expr: &LinExpr) {
        self.objective.add_expr(expr, 1.0);
    }

    pub fn add_objective_term(&mut self, var: Var, coef: f64) {
        self.objective.add_term(var, coef);
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn assemble(self) -> Result<LpModel, LpError> {
        let n = self.variables.len();
        let mut names: HashMap<&str, usize> = HashMap::with_capacity(n);
        for (i, v) in self.variables.iter().enumerate() {
            if names.insert(v.name.as_str(), i).is_some() {
                return Err(LpError::DuplicateVariable {
                    name: v.name.clone(),
                });
            }
            if v.lower > v.upper || v.lower.is_nan() || v.upper.is_nan() {
                return Err(LpError::InvertedBounds {
                    name: v.name.clone(),
                    lower: v.lower,
                    upper: v.upper,
                });
            }
        }

        let mut row_names: HashMap<String, usize> = HashMap::with_capacity(self.constraints.len());
        let mut constraints = Vec::with_capacity(self.constraints.len());
        for (i, mut c) in self.constraints.into_iter().enumerate() {
            if let Some(&prev) = row_names.get(&c.name) {
                let first: &ConstraintRecord = &constraints[prev];
                return Err(LpError::DuplicateConstraint {
                    name: c.name,
                    first: first.origin.clone(),
                    second: c.origin,
                });
            }
            if !c.rhs.is_finite() {
                return Err(LpError::NonFinite { location: c.name });
            }
            c.terms = canonicalize(&c.terms, n).map_err(|e| match e {
                CanonError::Unknown(index) => LpError::UnknownHandle {
                    constraint: c.name.clone(),
                    index,
                },
                CanonError::NonFinite => LpError::NonFinite {
                    location: c.name.clone(),
                },
            })?;
            row_names.insert(c.name.clone(), i);
            constraints.push(c);
        }

        let mut objective = vec![0.0; n];
        for &(v, c) in &self.objective.terms {
            if v.0 >= n {
                return Err(LpError::UnknownHandle {
                    constraint: "objective".into(),
                    index: v.0,
                });
            }
            objective[v.0] += c;
        }
        if objective.iter().any(|c| !c.is_finite()) || !self.objective.constant.is_finite() {
            return Err(LpError::NonFinite {
                location: "objective".into(),
            });
        }

        Ok(LpModel {
            name: self.name,
            variables: self.variables,
            constraints,
            objective,
            objective_offset: self.objective.constant,
        })
    }
}

enum CanonError {
    Unknown(usize),
    NonFinite,
}

/// Merges repeated variables (first-appearance order) and drops zero coefficients.
fn canonicalize(terms: &[(Var, f64)], n: usize) -> Result<Vec<(Var, f64)>, CanonError> {
    let mut slot: HashMap<Var, usize> = HashMap::with_capacity(terms.len());
    let mut out: Vec<(Var, f64)> = Vec::with_capacity(terms.len());
    for &(v, c) in terms {
        if v.0 >= n {
            return Err(CanonError::Unknown(v.0));
        }
        if !c.is_finite() {
            return Err(CanonError::NonFinite);
        }
        match slot.get(&v) {
            Some(&k) => out[k].1 += c,
            None => {
                slot.insert(v, out.len());
                out.push((v, c));
            }
        }
    }
    out.retain(|&(_, c)| c != 0.0);
    Ok(out)
}

/// Assembled, immutable linear program (always minimization).
#[derive(Debug, Clone, PartialEq)]
pub struct LpModel {
    pub name: String,
    pub variables: Vec<VariableInfo>,
    pub constraints: Vec<ConstraintRecord>,
    pub objective: Vec<f64>,
    pub objective_offset: f64,
}

impl LpModel {
    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn var_by_name(&self, name: &str) -> Option<Var> {
        self.variables
            .iter()
            .position(|v| v.name == name)
            .map(Var)
    }

    pub fn constraint_by_name(&self, name: &str) -> Option<&ConstraintRecord> {
        self.constraints.iter().find(|c| c.name == name)
    }

    pub fn objective_value(&self, values: &[f64]) -> f64 {
        self.objective_offset
            + self
                .objective
                .iter()
                .zip(values)
                .map(|(c, x)| c * x)
                .sum::<f64>()
    }

    /// Largest scaled violation over rows (`violation / max(1, |rhs|)`) and bounds.
    pub fn max_scaled_violation(&self, values: &[f64]) -> (f64, Option<String>) {
        let mut worst = 0.0;
        let mut at = None;
        for c in &self.constraints {
            let v = c.violation(values) / c.rhs.abs().max(1.0);
            if v > worst {
                worst = v;
                at = Some(c.name.clone());
            }
        }
        for (info, &x) in self.variables.iter().zip(values) {
            let below = (info.lower - x) / info.lower.abs().max(1.0);
            let above = (x - info.upper) / info.upper.abs().max(1.0);
            let v = below.max(above);
            if v > worst {
                worst = v;
                at = Some(info.name.clone());
            }
        }
        (worst, at)
    }
}
