//! Textbook prenexing by quantifier pulling, used as a size baseline.
//!
//! Bound variables are renamed apart, prefixes are pulled across `¬`, `∧`,
//! `∨` and `→` by the usual rules and concatenated left to right. Any other
//! operator with a quantified argument is first Shannon-expanded on that
//! argument, which duplicates the remaining arguments: nested `↔` or `⊕`
//! therefore blow the output up exponentially.

use thiserror::Error;

use crate::formula::{Block, Formula, Quantifier};
use crate::fresh::FreshGen;
use crate::ops::Op;
use crate::subst::rename_fresh;

pub const DEFAULT_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("naive prenex form exceeds the size budget of {budget}")]
pub struct SizeBudgetExceeded {
    pub budget: usize,
}

#[derive(Clone, Debug)]
struct Pnf {
    prefix: Vec<(Quantifier, Block)>,
    matrix: Formula,
    prefix_len: usize,
    matrix_len: usize,
}

impl Pnf {
    fn boolean(matrix: Formula) -> Pnf {
        let matrix_len = matrix.length();
        Pnf {
            prefix: Vec::new(),
            matrix,
            prefix_len: 0,
            matrix_len,
        }
    }

    fn len(&self) -> usize {
        self.prefix_len + self.matrix_len
    }

    fn into_formula(self) -> Formula {
        self.prefix
            .into_iter()
            .rev()
            .fold(self.matrix, |body, (q, block)| {
                Formula::quant(q, block, body)
            })
    }
}

struct Naive<'g> {
    gen: &'g mut FreshGen,
    budget: usize,
}

/// Prenex form of `phi` by quantifier pulling, with the default budget.
pub fn naive_prenex(phi: &Formula, gen: &mut FreshGen) -> Result<Formula, SizeBudgetExceeded> {
    naive_prenex_with_budget(phi, gen, DEFAULT_BUDGET)
}

pub fn naive_prenex_with_budget(
    phi: &Formula,
    gen: &mut FreshGen,
    budget: usize,
) -> Result<Formula, SizeBudgetExceeded> {
    gen.avoid(phi);
    let mut naive = Naive { gen, budget };
    Ok(naive.run(phi)?.into_formula())
}

impl Naive<'_> {
    fn check(&self, p: Pnf) -> Result<Pnf, SizeBudgetExceeded> {
        if p.len() > self.budget {
            Err(SizeBudgetExceeded {
                budget: self.budget,
            })
        } else {
            Ok(p)
        }
    }

    fn run(&mut self, phi: &Formula) -> Result<Pnf, SizeBudgetExceeded> {
        if phi.is_boolean() {
            return self.check(Pnf::boolean(phi.clone()));
        }
        match phi {
            Formula::Var(_) => unreachable!("variables are boolean"),
            Formula::Quant(q, block, body) => {
                let inner = self.run(body)?;
                self.bind(*q, block, inner)
            }
            Formula::App(op, args) => match (op, args.as_slice()) {
                (Op::Not, [a]) => {
                    let inner = self.run(a)?;
                    Ok(negate(inner))
                }
                (Op::And | Op::Or, [a, b]) => {
                    let l = self.run(a)?;
                    let r = self.run(b)?;
                    self.join(op.clone(), l, r)
                }
                (Op::Implies, [a, b]) => {
                    let l = negate(self.run(a)?);
                    let r = self.run(b)?;
                    // ¬A ∨ B, with the negation folded back into the matrix
                    let Pnf {
                        prefix,
                        matrix,
                        prefix_len,
                        matrix_len,
                    } = l;
                    let l = Pnf {
                        prefix,
                        matrix: strip_not(matrix),
                        prefix_len,
                        matrix_len,
                    };
                    self.join(Op::Implies, l, r)
                }
                _ => self.expand(op, args),
            },
        }
    }

    fn bind(
        &mut self,
        q: Quantifier,
        block: &Block,
        inner: Pnf,
    ) -> Result<Pnf, SizeBudgetExceeded> {
        if block.is_empty() {
            return Ok(inner);
        }
        let renaming = block
            .iter()
            .map(|x| (x.clone(), self.gen.rename(x)))
            .collect::<std::collections::BTreeMap<_, _>>();
        let matrix = rename_fresh(&inner.matrix, &renaming);
        let mut prefix = Vec::with_capacity(inner.prefix.len() + 1);
        prefix.push((q, renaming.into_values().collect()));
        prefix.extend(inner.prefix);
        self.check(Pnf {
            prefix,
            matrix,
            prefix_len: inner.prefix_len + 1 + block.len(),
            matrix_len: inner.matrix_len,
        })
    }

    fn join(&self, op: Op, l: Pnf, r: Pnf) -> Result<Pnf, SizeBudgetExceeded> {
        let mut prefix = l.prefix;
        prefix.extend(r.prefix);
        self.check(Pnf {
            prefix,
            matrix: Formula::App(op, vec![l.matrix, r.matrix]),
            prefix_len: l.prefix_len + r.prefix_len,
            matrix_len: 1 + l.matrix_len + r.matrix_len,
        })
    }

    /// `f(.., a_j, ..)` ⇒ `(f[a_j/⊤] ∧ a_j) ∨ (f[a_j/⊥] ∧ ¬a_j)` on the first
    /// quantified argument `a_j`, with `¬a_j` prenexed under a dual, freshly
    /// renamed prefix.
    fn expand(&mut self, op: &Op, args: &[Formula]) -> Result<Pnf, SizeBudgetExceeded> {
        let j = args
            .iter()
            .position(|a| !a.is_boolean())
            .expect("a non-boolean application has a quantified argument");
        let positive = self.run(&args[j])?;
        let negative = self.dual_copy(&positive)?;
        let with = |c: bool| {
            let mut replaced = args.to_vec();
            replaced[j] = Formula::constant(c);
            fold_constants(op, replaced)
        };
        let high = self.run(&with(true))?;
        let low = self.run(&with(false))?;
        let left = self.join(Op::And, high, positive)?;
        let right = self.join(Op::And, low, negative)?;
        self.join(Op::Or, left, right)
    }

    /// `¬p` with every block renamed again, so that the copy can sit next to
    /// the original.
    fn dual_copy(&mut self, p: &Pnf) -> Result<Pnf, SizeBudgetExceeded> {
        let mut renaming = std::collections::BTreeMap::new();
        let mut prefix = Vec::with_capacity(p.prefix.len());
        for (q, block) in &p.prefix {
            let renamed: Block = block
                .iter()
                .map(|x| {
                    let source = self
                        .gen
                        .origin(x)
                        .and_then(|o| o.source.clone())
                        .unwrap_or_else(|| x.clone());
                    let fresh = self.gen.rename(&source);
                    renaming.insert(x.clone(), fresh.clone());
                    fresh
                })
                .collect();
            prefix.push((q.dual(), renamed));
        }
        self.check(Pnf {
            prefix,
            matrix: Formula::not(rename_fresh(&p.matrix, &renaming)),
            prefix_len: p.prefix_len,
            matrix_len: p.matrix_len,
        })
    }
}

fn negate(p: Pnf) -> Pnf {
    Pnf {
        prefix: p.prefix.into_iter().map(|(q, b)| (q.dual(), b)).collect(),
        matrix: Formula::not(p.matrix),
        prefix_len: p.prefix_len,
        matrix_len: p.matrix_len,
    }
}

fn strip_not(f: Formula) -> Formula {
    match f {
        Formula::App(Op::Not, mut args) if args.len() == 1 => args.pop().unwrap(),
        other => other,
    }
}

/// Simplifies `↔` and `⊕` with a constant argument.
fn fold_constants(op: &Op, args: Vec<Formula>) -> Formula {
    let constant = |f: &Formula| {
        if f.is_top() {
            Some(true)
        } else if f.is_bot() {
            Some(false)
        } else {
            None
        }
    };
    match (op, args.as_slice()) {
        (Op::Iff | Op::Xor, [a, b]) => {
            let (c, other) = match (constant(a), constant(b)) {
                (Some(c), _) => (c, b),
                (None, Some(c)) => (c, a),
                _ => return Formula::App(op.clone(), args),
            };
            // ⊤ ↔ b = b, ⊥ ↔ b = ¬b; xor the other way round
            if c == (*op == Op::Iff) {
                other.clone()
            } else {
                Formula::not(other.clone())
            }
        }
        _ => Formula::App(op.clone(), args),
    }
}
