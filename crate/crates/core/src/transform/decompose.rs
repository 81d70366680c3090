use crate::formula::{Block, Formula, Quantifier, Var};
use crate::fresh::FreshGen;
use crate::subst::{substitute, Substitution};

/// One outermost quantified subformula `Q X body`, abbreviated by a fresh
/// variable in the skeleton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Binding {
    pub abbrev: Var,
    pub quantifier: Quantifier,
    pub block: Block,
    pub body: Formula,
    /// Allocation index shared by the abbreviation and the block copies.
    pub index: u64,
}

impl Binding {
    pub fn quantified(&self) -> Formula {
        Formula::quant(self.quantifier, self.block.clone(), self.body.clone())
    }
}

/// A boolean skeleton over fresh abbreviation variables together with the
/// quantified subformulas they stand for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub skeleton: Formula,
    pub bindings: Vec<Binding>,
}

impl Decomposition {
    /// Substitutes every binding back into the skeleton.
    pub fn recompose(&self) -> Formula {
        let sigma: Substitution = self
            .bindings
            .iter()
            .map(|b| (b.abbrev.clone(), b.quantified()))
            .collect();
        // the skeleton is boolean, so nothing can be captured
        substitute(&self.skeleton, &sigma).expect("boolean skeleton")
    }
}

/// Splits `phi` at its outermost quantifiers, left to right. Every occurrence
/// gets its own abbreviation, even when two occurrences are identical.
pub fn decompose_outermost(phi: &Formula, gen: &mut FreshGen) -> Decomposition {
    gen.avoid(phi);
    let mut bindings = Vec::new();
    let skeleton = abbreviate(phi, gen, &mut bindings);
    Decomposition { skeleton, bindings }
}

fn abbreviate(phi: &Formula, gen: &mut FreshGen, bindings: &mut Vec<Binding>) -> Formula {
    match phi {
        Formula::Var(_) => phi.clone(),
        Formula::App(op, args) => Formula::App(
            op.clone(),
            args.iter().map(|a| abbreviate(a, gen, bindings)).collect(),
        ),
        Formula::Quant(q, block, body) => {
            let fresh = gen.binding();
            bindings.push(Binding {
                abbrev: fresh.abbrev.clone(),
                quantifier: *q,
                block: block.clone(),
                body: (**body).clone(),
                index: fresh.index,
            });
            Formula::Var(fresh.abbrev)
        }
    }
}
