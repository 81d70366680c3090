//! Prenexing of the outermost quantifiers in one step.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::formula::{Block, Formula, Quantifier, Var};
use crate::fresh::{FreshGen, Origin};
use crate::subst::rename_fresh;

use super::decompose::decompose_outermost;

/// Output of [`step_transform`].
#[derive(Clone, Debug)]
pub struct StepResult {
    /// The transformed formula, one quantifier level shallower.
    pub psi: Formula,
    /// Negative copies; bound by `Q` outside the step.
    pub neg: BTreeSet<Var>,
    /// Positive copies and abbreviation variables; bound by the dual of `Q`.
    pub pos: BTreeSet<Var>,
    pub name_map: BTreeMap<Var, Origin>,
}

/// `⋀_{x ∈ X} (x⁺ ↔ x⁻)`.
fn copies_agree(block: &Block, pos: &BTreeMap<Var, Var>, neg: &BTreeMap<Var, Var>) -> Formula {
    Formula::conj(
        block
            .iter()
            .map(|x| Formula::iff(Formula::Var(pos[x].clone()), Formula::Var(neg[x].clone()))),
    )
}

/// Guard premise: `¬p` for an existential block, `p` for a universal one.
fn guard_premise(q: Quantifier, p: &Var) -> Formula {
    match q {
        Quantifier::Exists => Formula::not(Formula::Var(p.clone())),
        Quantifier::Forall => Formula::Var(p.clone()),
    }
}

/// One-step transform of `phi` for the outer quantifier `q`.
///
/// Every outermost block `Q_i X_i φ_i` becomes `p_i ↔ φ_i[x/x⁺]` plus, when
/// `X_i` is non-empty, one guard tying the copies together; the conjunction
/// of these definitions is then conjoined with (`∀`) or made to imply (`∃`)
/// the boolean skeleton. A boolean `phi` is returned unchanged.
pub fn step_transform(q: Quantifier, phi: &Formula, gen: &mut FreshGen) -> StepResult {
    let d = decompose_outermost(phi, gen);
    if d.bindings.is_empty() {
        return StepResult {
            psi: phi.clone(),
            neg: BTreeSet::new(),
            pos: BTreeSet::new(),
            name_map: BTreeMap::new(),
        };
    }

    let mut definitions = Vec::with_capacity(d.bindings.len());
    let mut exists_guards = Vec::new();
    let mut forall_guards = Vec::new();
    let mut neg = BTreeSet::new();
    let mut pos = BTreeSet::new();
    for b in &d.bindings {
        let (pos_map, neg_map) = gen.copies(b.index, &b.block);
        let body = rename_fresh(&b.body, &pos_map);
        definitions.push(Formula::iff(Formula::Var(b.abbrev.clone()), body));
        if !b.block.is_empty() {
            let guard = Formula::implies(
                guard_premise(b.quantifier, &b.abbrev),
                copies_agree(&b.block, &pos_map, &neg_map),
            );
            match b.quantifier {
                Quantifier::Exists => exists_guards.push(guard),
                Quantifier::Forall => forall_guards.push(guard),
            }
        }
        neg.extend(neg_map.into_values());
        pos.extend(pos_map.into_values());
        pos.insert(b.abbrev.clone());
    }

    let core = Formula::conj(
        definitions
            .into_iter()
            .chain(exists_guards)
            .chain(forall_guards),
    );
    let psi = match q {
        Quantifier::Forall => Formula::and(core, d.skeleton),
        Quantifier::Exists => Formula::implies(core, d.skeleton),
    };
    let name_map = neg
        .iter()
        .chain(pos.iter())
        .filter_map(|v| gen.origin(v).map(|o| (v.clone(), o.clone())))
        .collect();
    StepResult {
        psi,
        neg,
        pos,
        name_map,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("`{0}` does not occur in the context formula")]
    AbbrevMissing(Var),
    #[error("`{0}` occurs free in the quantified body")]
    AbbrevFreeInBody(Var),
    #[error("`{0}` occurs in the scope of a quantifier of the context formula")]
    AbbrevUnderQuantifier(Var),
    #[error("block variable `{0}` is not a variable of the context or occurs in the body")]
    BadOuterBlock(Var),
}

fn occurs_under_quantifier(f: &Formula, p: &Var, under: bool) -> bool {
    match f {
        Formula::Var(v) => under && v == p,
        Formula::App(_, args) => args.iter().any(|a| occurs_under_quantifier(a, p, under)),
        Formula::Quant(_, block, body) => {
            block.contains(p) || occurs_under_quantifier(body, p, true)
        }
    }
}

/// Moves one quantifier `Q X φ`, standing at the position of `p` inside
/// `ψ`, out in front and fuses it with an existential block `Y`:
///
/// `∃Y ψ[p/QXφ]  ≡  ∀X⁻ ∃(Y ∪ X⁺ ∪ {p}) (ψ ∧ (p ↔ φ[x/x⁺]) ∧ ⋀_x guard_x)`
///
/// with `guard_x = ¬p → (x⁺ ↔ x⁻)` for `∃` and `p → (x⁺ ↔ x⁻)` for `∀`.
pub fn extract_quantifier(
    psi: &Formula,
    p: &Var,
    q: Quantifier,
    block: &Block,
    phi: &Formula,
    outer: &Block,
    gen: &mut FreshGen,
) -> Result<Formula, ExtractError> {
    let psi_vars = psi.vars();
    if !psi_vars.contains(p) {
        return Err(ExtractError::AbbrevMissing(p.clone()));
    }
    if phi.free_vars().contains(p) {
        return Err(ExtractError::AbbrevFreeInBody(p.clone()));
    }
    if occurs_under_quantifier(psi, p, false) {
        return Err(ExtractError::AbbrevUnderQuantifier(p.clone()));
    }
    let phi_vars = phi.vars();
    if let Some(y) = outer
        .iter()
        .find(|y| !psi_vars.contains(*y) || phi_vars.contains(*y))
    {
        return Err(ExtractError::BadOuterBlock(y.clone()));
    }

    gen.avoid(psi);
    gen.avoid(phi);
    let (pos_map, neg_map) = gen.fresh_copies(block);
    let p_var = Formula::Var(p.clone());
    let guards = block.iter().map(|x| {
        Formula::implies(
            guard_premise(q, p),
            Formula::iff(
                Formula::Var(pos_map[x].clone()),
                Formula::Var(neg_map[x].clone()),
            ),
        )
    });
    let matrix = Formula::conj(
        [
            psi.clone(),
            Formula::iff(p_var, rename_fresh(phi, &pos_map)),
        ]
        .into_iter()
        .chain(guards),
    );
    let inner: Block = outer
        .iter()
        .cloned()
        .chain(pos_map.into_values())
        .chain(std::iter::once(p.clone()))
        .collect();
    Ok(Formula::forall(
        neg_map.into_values(),
        Formula::quant(Quantifier::Exists, inner, matrix),
    ))
}
