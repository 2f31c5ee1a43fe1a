//! Fixed-column MPS writer.
//!
//! Field positions follow the classic layout (indicator in columns 2-3,
//! names starting at columns 5 and 15, value at column 25). Names or
//! numbers longer than their field push later fields right, always
//! followed by one blank, which keeps the output readable by free-format
//! parsers as well.

use std::fmt::Write;

use crate::model::{LpModel, Sense};

const OBJECTIVE_ROW: &str = "COST";

/// Deterministic shortest round-trip rendering of a coefficient.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let a = x.abs();
    if (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

// always leaves at least one blank after the field
fn pad(s: &str, width: usize) -> String {
    if s.len() < width {
        format!("{s:<width$}")
    } else {
        format!("{s} ")
    }
}

fn entry(out: &mut String, indicator: &str, name1: &str, name2: &str, value: f64) {
    let _ = writeln!(
        out,
        " {}{}{}{}",
        pad(indicator, 3),
        pad(name1, 10),
        pad(name2, 10),
        format_number(value)
    );
}

/// Writes the model as fixed-format MPS text. Identical models give identical bytes.
pub fn export_mps(model: &LpModel) -> String {
    let mut out = String::new();
    let name = if model.name.is_empty() { "MODEL" } else { &model.name };
    let _ = writeln!(out, "NAME          {name}");
    out.push_str("ROWS\n");
    let _ = writeln!(out, " N  {OBJECTIVE_ROW}");
    for c in &model.constraints {
        let kind = match c.sense {
            Sense::Le => "L",
            Sense::Eq => "E",
            Sense::Ge => "G",
        };
        let _ = writeln!(out, " {}{}", pad(kind, 3), c.name);
    }

    // column-major view of the matrix
    let mut by_column: Vec<Vec<(usize, f64)>> = vec![Vec::new(); model.num_vars()];
    for (row, c) in model.constraints.iter().enumerate() {
        for &(v, coef) in &c.terms {
            by_column[v.index()].push((row, coef));
        }
    }

    out.push_str("COLUMNS\n");
    for (j, info) in model.variables.iter().enumerate() {
        let cost = model.objective[j];
        // every column gets at least one entry so that BOUNDS can refer to it
        if cost != 0.0 || by_column[j].is_empty() {
            entry(&mut out, "", &info.name, OBJECTIVE_ROW, cost);
        }
        for &(row, coef) in &by_column[j] {
            entry(&mut out, "", &info.name, &model.constraints[row].name, coef);
        }
    }

    out.push_str("RHS\n");
    if model.objective_offset != 0.0 {
        // an objective-row RHS carries the negated constant
        entry(&mut out, "", "RHS", OBJECTIVE_ROW, -model.objective_offset);
    }
    for c in &model.constraints {
        if c.rhs != 0.0 {
            entry(&mut out, "", "RHS", &c.name, c.rhs);
        }
    }

    out.push_str("BOUNDS\n");
    for info in &model.variables {
        let (lo, up) = (info.lower, info.upper);
        if lo == up {
            entry(&mut out, "FX", "BND", &info.name, lo);
            continue;
        }
        match (lo.is_finite(), up.is_finite()) {
            (false, false) => {
                let _ = writeln!(out, " FR BND       {}", info.name);
            }
            (false, true) => {
                let _ = writeln!(out, " MI BND       {}", info.name);
                entry(&mut out, "UP", "BND", &info.name, up);
            }
            (true, up_finite) => {
                if lo != 0.0 || (up_finite && up < 0.0) {
                    entry(&mut out, "LO", "BND", &info.name, lo);
                }
                if up_finite {
                    entry(&mut out, "UP", "BND", &info.name, up);
                }
            }
        }
    }
    out.push_str("ENDATA\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{LinExpr, LpBuilder};

    #[test]
    fn number_formatting_is_shortest_round_trip() {
        assert_eq!(format_number(1.0), "1");
        assert_eq!(format_number(-2.5), "-2.5");
        assert_eq!(format_number(0.1), "0.1");
        assert_eq!(format_number(1e-7), "1e-7");
        assert_eq!(format_number(-0.0), "0");
        assert_eq!(format_number(1.5e20), "1.5e20");
        for x in [0.1 + 0.2, 1.0 / 3.0, 12345.678e-9, 8760.0 / 864.0] {
            assert_eq!(format_number(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn long_names_stay_separated() {
        let mut b = LpBuilder::new("LONG");
        let x = b.add_nonneg("exactly_10");
        b.add_objective(&LinExpr::term(x, 1.0));
        b.add_constraint("test", "a_row_name_longer_than_ten", LinExpr::from(x), Sense::Ge, 1.0);
        let text = export_mps(&b.assemble().unwrap());
        assert!(text.contains("    exactly_10 COST      1\n"), "{text}");
        assert!(text.contains("    exactly_10 a_row_name_longer_than_ten 1\n"), "{text}");
    }

    #[test]
    fn small_model_layout() {
        let mut b = LpBuilder::new("TINY");
        let x = b.add_var("x", 0.0, 6.0);
        let y = b.add_nonneg("y");
        b.add_objective(&(LinExpr::term(x, 2.0) + LinExpr::term(y, 3.0)));
        b.add_constraint("test", "cover", LinExpr::from(x) + y.into(), Sense::Ge, 10.0);
        let text = export_mps(&b.assemble().unwrap());
        let expected = "\
NAME          TINY
ROWS
 N  COST
 G  cover
COLUMNS
    x         COST      2
    x         cover     1
    y         COST      3
    y         cover     1
RHS
    RHS       cover     10
BOUNDS
 UP BND       x         6
ENDATA
";
        assert_eq!(text, expected);
    }

    #[test]
    fn bound_kinds() {
        let mut b = LpBuilder::new("B");
        b.add_free("f");
        b.add_var("m", f64::NEG_INFINITY, 3.0);
        b.add_var("x", 2.0, 2.0);
        b.add_var("l", -1.0, f64::INFINITY);
        let text = export_mps(&b.assemble().unwrap());
        assert!(text.contains(" FR BND       f\n"));
        assert!(text.contains(" MI BND       m\n UP BND       m         3\n"));
        assert!(text.contains(" FX BND       x         2\n"));
        assert!(text.contains(" LO BND       l         -1\n"));
    }
}
