//! Recursive prenexing.

use std::collections::BTreeSet;

use crate::formula::{Block, Formula, Quantifier, Var};
use crate::fresh::FreshGen;
use crate::subst::{substitute, Substitution};

use super::decompose::decompose_outermost;
use super::step::step_transform;

/// A prenex formula of the same quantifier depth as `phi`.
///
/// Binding the negative copies `N(phi)` with `q` in front of the result gives
/// a formula equivalent to `phi`, so `q = ∃` preserves satisfiability and
/// `q = ∀` preserves validity.
pub fn prenex(q: Quantifier, phi: &Formula, gen: &mut FreshGen) -> Formula {
    prenex_with_copies(q, phi, gen).0
}

/// Like [`prenex`], also returning `N(phi)`, the negative copies made by the
/// first step. They are the only free variables the result adds.
pub fn prenex_with_copies(
    q: Quantifier,
    phi: &Formula,
    gen: &mut FreshGen,
) -> (Formula, BTreeSet<Var>) {
    if phi.is_boolean() {
        return (phi.clone(), BTreeSet::new());
    }
    let step = step_transform(q, phi, gen);
    let dual = q.dual();
    let (inner, inner_neg) = prenex_with_copies(dual, &step.psi, gen);
    let block: Block = step.pos.into_iter().chain(inner_neg).collect();
    (Formula::quant(dual, block, inner), step.neg)
}

/// The outermost quantified subformulas of `phi`, each replaced by an
/// equivalent closed-under-its-block prenex formula, next to the boolean
/// skeleton that combines them.
#[derive(Clone, Debug)]
pub struct McParts {
    pub skeleton: Formula,
    /// Abbreviation variable of the skeleton and the prenex formula it
    /// stands for.
    pub parts: Vec<(Var, Formula)>,
}

impl McParts {
    pub fn assemble(&self) -> Formula {
        let sigma: Substitution = self.parts.iter().cloned().collect();
        substitute(&self.skeleton, &sigma).expect("boolean skeleton")
    }
}

pub fn prenex_mc_parts(phi: &Formula, gen: &mut FreshGen) -> McParts {
    let d = decompose_outermost(phi, gen);
    let parts = d
        .bindings
        .iter()
        .map(|b| {
            let (inner, neg) = prenex_with_copies(b.quantifier, &b.body, gen);
            let block: Block = b.block.iter().cloned().chain(neg).collect();
            (b.abbrev.clone(), Formula::quant(b.quantifier, block, inner))
        })
        .collect();
    McParts {
        skeleton: d.skeleton,
        parts,
    }
}

/// A boolean combination of prenex formulas, equivalent to
/// `phi` and with the same free variables.
pub fn prenex_mc(phi: &Formula, gen: &mut FreshGen) -> Formula {
    if phi.is_boolean() {
        return phi.clone();
    }
    prenex_mc_parts(phi, gen).assemble()
}
