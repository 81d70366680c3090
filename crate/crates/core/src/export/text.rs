use std::fmt::Write;

use crate::formula::Formula;
use crate::parser::Problem;

use super::{Entry, ExportError};

/// One line per quantifier block, then the matrix. Empty blocks are vacuous
/// and are left out, since the surface syntax cannot express them.
pub fn to_prenex_text(phi: &Formula) -> Result<String, ExportError> {
    if !phi.is_prenex() {
        return Err(ExportError::NotPrenex);
    }
    let mut out = String::new();
    for (q, block) in phi.prefix() {
        if block.is_empty() {
            continue;
        }
        out.push_str(q.keyword());
        for v in block {
            write!(out, " {v}").unwrap();
        }
        out.push_str(" .\n");
    }
    writeln!(out, "{}", phi.matrix()).unwrap();
    Ok(out)
}

/// [`to_prenex_text`] preceded by the problem's operator declarations.
pub fn prenex_problem_text(problem: &Problem) -> Result<String, ExportError> {
    let mut out = String::new();
    for d in &problem.declarations {
        writeln!(out, "op {}/{} : {} ;", d.name, d.def.arity, d.def.bits()).unwrap();
    }
    out.push_str(&to_prenex_text(&problem.formula)?);
    Ok(out)
}

/// Manifest entries for a text export: every variable under its own name.
pub fn text_variables(phi: &Formula) -> Vec<Entry> {
    phi.vars()
        .iter()
        .map(|v| Entry::for_var(v.name().to_string(), v))
        .collect()
}
