//! Writers for prenex formulas: `.fqbf` text, QCIR-G14 and QDIMACS, each
//! with a manifest tracing emitted variables back to their sources.

mod circuit;
mod manifest;
mod qcir;
mod qdimacs;
mod text;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::formula::{Formula, Quantifier, Var};

pub use circuit::{Circuit, Gate, Lit};
pub use manifest::{Entry, Manifest};
pub use qcir::to_qcir;
pub use qdimacs::to_qdimacs;
pub use text::{prenex_problem_text, text_variables, to_prenex_text};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExportError {
    #[error("formula is not in prenex form")]
    NotPrenex,
    #[error("operator `{0}` cannot be lowered to gates")]
    UnloweredOperator(String),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Format {
    #[default]
    Fqbf,
    Qcir,
    Qdimacs,
}

impl Format {
    pub fn as_str(self) -> &'static str {
        match self {
            Format::Fqbf => "fqbf",
            Format::Qcir => "qcir",
            Format::Qdimacs => "qdimacs",
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fqbf" => Ok(Format::Fqbf),
            "qcir" => Ok(Format::Qcir),
            "qdimacs" => Ok(Format::Qdimacs),
            _ => Err(format!(
                "unknown format `{s}` (expected fqbf, qcir or qdimacs)"
            )),
        }
    }
}

/// How free variables of the exported formula are bound.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum FreeVariables {
    /// Outermost existential block; preserves satisfiability.
    #[default]
    Exists,
    /// Outermost universal block; preserves validity.
    Forall,
    /// Left free: a `free(...)` line in QCIR, unquantified in QDIMACS.
    Free,
}

impl FreeVariables {
    pub fn as_str(self) -> &'static str {
        match self {
            FreeVariables::Exists => "exists",
            FreeVariables::Forall => "forall",
            FreeVariables::Free => "free",
        }
    }
}

/// Text of one export plus the variables it numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Export {
    pub text: String,
    pub variables: Vec<Entry>,
}

/// The prefix as the solver formats need it: blocks without repeated
/// variables (an inner binding shadows outer ones), without empty blocks,
/// and alternating.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Prefix {
    pub free: Vec<Var>,
    pub blocks: Vec<(Quantifier, Vec<Var>)>,
}

impl Prefix {
    pub fn of(phi: &Formula, policy: FreeVariables) -> Result<Prefix, ExportError> {
        if !phi.is_prenex() {
            return Err(ExportError::NotPrenex);
        }
        let raw = phi.prefix();
        let mut blocks: Vec<(Quantifier, Vec<Var>)> = Vec::new();
        for (i, (q, block)) in raw.iter().enumerate() {
            let kept = block
                .iter()
                .filter(|v| raw[i + 1..].iter().all(|(_, inner)| !inner.contains(*v)))
                .cloned();
            push_block(&mut blocks, *q, kept.collect());
        }
        let free: Vec<Var> = phi.free_vars().into_iter().collect();
        let bound_free = match policy {
            FreeVariables::Exists => Some(Quantifier::Exists),
            FreeVariables::Forall => Some(Quantifier::Forall),
            FreeVariables::Free => None,
        };
        if let Some(q) = bound_free {
            let mut outer = Vec::new();
            push_block(&mut outer, q, free.clone());
            for (q, vars) in blocks {
                push_block(&mut outer, q, vars);
            }
            blocks = outer;
        }
        Ok(Prefix { free, blocks })
    }

    /// Variables in numbering order: free ones first, then the prefix.
    pub fn numbering(&self) -> Vec<Var> {
        let mut out = self.free.clone();
        for (_, vars) in &self.blocks {
            out.extend(vars.iter().filter(|v| !self.free.contains(v)).cloned());
        }
        out
    }

    /// Whether the free variables appear in a quantifier block.
    pub fn binds_free(&self) -> bool {
        self.free
            .first()
            .is_some_and(|v| self.blocks.iter().any(|(_, vars)| vars.contains(v)))
    }
}

/// Appends a block, merging it into the last one when the quantifier
/// matches.
pub(crate) fn push_block(blocks: &mut Vec<(Quantifier, Vec<Var>)>, q: Quantifier, vars: Vec<Var>) {
    if vars.is_empty() {
        return;
    }
    match blocks.last_mut() {
        Some((last, existing)) if *last == q => existing.extend(vars),
        _ => blocks.push((q, vars)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    #[test]
    fn prefix_merges_and_drops_shadowed() {
        let phi = parse("exists x . exists y . forall x . exists z . x & y & z & w")
            .unwrap()
            .formula;
        let p = Prefix::of(&phi, FreeVariables::Exists).unwrap();
        let names = |vs: &[Var]| vs.iter().map(|v| v.name().to_string()).collect::<Vec<_>>();
        assert_eq!(p.blocks.len(), 3);
        assert_eq!(names(&p.blocks[0].1), ["w", "y"]);
        assert_eq!(names(&p.blocks[1].1), ["x"]);
        assert_eq!(names(&p.numbering()), ["w", "y", "x", "z"]);
        assert!(p.binds_free());
        let p = Prefix::of(&phi, FreeVariables::Free).unwrap();
        assert_eq!(names(&p.blocks[0].1), ["y"]);
        assert!(!p.binds_free());
    }

    #[test]
    fn non_prenex_is_rejected() {
        let phi = parse("a & (exists x . x)").unwrap().formula;
        assert_eq!(
            Prefix::of(&phi, FreeVariables::Exists),
            Err(ExportError::NotPrenex)
        );
    }
}
