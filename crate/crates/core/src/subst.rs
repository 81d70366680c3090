//! Capture-checked simultaneous substitution on free occurrences.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::formula::{Block, Formula, Quantifier, Var};

/// A finite map from variables to formulas. Keys are distinct by
/// construction.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    pairs: BTreeMap<Var, Formula>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(key: Var, value: Formula) -> Self {
        let mut s = Self::new();
        s.insert(key, value);
        s
    }

    /// Adds a pair, returning the replacement previously bound to `key`.
    pub fn insert(&mut self, key: Var, value: Formula) -> Option<Formula> {
        self.pairs.insert(key, value)
    }

    pub fn get(&self, key: &Var) -> Option<&Formula> {
        self.pairs.get(key)
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn keys(&self) -> impl Iterator<Item = &Var> {
        self.pairs.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Formula)> {
        self.pairs.iter()
    }
}

impl FromIterator<(Var, Formula)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Var, Formula)>>(iter: I) -> Self {
        Substitution {
            pairs: iter.into_iter().collect(),
        }
    }
}

/// A replacement would place one of its free variables under a quantifier
/// binding it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("substituting for `{key}` would capture `{captured}` under `{quantifier} {}`", fmt_block(.block))]
pub struct CaptureError {
    pub key: Var,
    pub captured: Var,
    pub quantifier: Quantifier,
    pub block: Block,
}

fn fmt_block(block: &Block) -> String {
    block.iter().map(Var::name).collect::<Vec<_>>().join(" ")
}

/// Replaces, simultaneously, every free occurrence of each key of `sigma` by
/// its image. Refuses with [`CaptureError`] instead of renaming when an image
/// is not free for its key.
pub fn substitute(phi: &Formula, sigma: &Substitution) -> Result<Formula, CaptureError> {
    if sigma.is_empty() {
        return Ok(phi.clone());
    }
    let images: BTreeMap<&Var, (&Formula, BTreeSet<Var>)> =
        sigma.iter().map(|(k, v)| (k, (v, v.free_vars()))).collect();
    let mut frames = Vec::new();
    subst_rec(phi, &images, &mut frames)
}

type Images<'a> = BTreeMap<&'a Var, (&'a Formula, BTreeSet<Var>)>;

fn subst_rec<'a>(
    phi: &'a Formula,
    images: &Images<'_>,
    frames: &mut Vec<(Quantifier, &'a Block)>,
) -> Result<Formula, CaptureError> {
    match phi {
        Formula::Var(v) => match images.get(v) {
            Some((image, image_free)) => {
                // innermost capturing block first
                for (q, block) in frames.iter().rev() {
                    if let Some(captured) = image_free.iter().find(|w| block.contains(*w)) {
                        return Err(CaptureError {
                            key: v.clone(),
                            captured: captured.clone(),
                            quantifier: *q,
                            block: (*block).clone(),
                        });
                    }
                }
                Ok((*image).clone())
            }
            None => Ok(phi.clone()),
        },
        Formula::App(op, args) => Ok(Formula::App(
            op.clone(),
            args.iter()
                .map(|a| subst_rec(a, images, frames))
                .collect::<Result<_, _>>()?,
        )),
        Formula::Quant(q, block, body) => {
            let shadowed = images.keys().any(|k| block.contains(*k));
            let body = if shadowed {
                let inner: Images<'_> = images
                    .iter()
                    .filter(|(k, _)| !block.contains(**k))
                    .map(|(k, (f, fv))| (*k, (*f, fv.clone())))
                    .collect();
                if inner.is_empty() {
                    (**body).clone()
                } else {
                    frames.push((*q, block));
                    let r = subst_rec(body, &inner, frames);
                    frames.pop();
                    r?
                }
            } else {
                frames.push((*q, block));
                let r = subst_rec(body, images, frames);
                frames.pop();
                r?
            };
            Ok(Formula::Quant(*q, block.clone(), Box::new(body)))
        }
    }
}

/// Renames free occurrences variable-to-variable. Panics on capture, so only
/// use it with targets that are fresh for `phi`.
pub(crate) fn rename_fresh(phi: &Formula, renaming: &BTreeMap<Var, Var>) -> Formula {
    let sigma: Substitution = renaming
        .iter()
        .map(|(k, v)| (k.clone(), Formula::Var(v.clone())))
        .collect();
    substitute(phi, &sigma).expect("renaming to fresh variables cannot capture")
}
