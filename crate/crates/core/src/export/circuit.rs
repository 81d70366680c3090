//! Matrix of a prenex formula as a shared gate graph over and/or/xor.

use std::collections::HashMap;

use crate::formula::{Formula, Var};
use crate::ops::{Op, OperatorTable};

use super::ExportError;

/// A signed reference to a variable or gate; negative means negated.
pub type Lit = i64;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    And(Vec<Lit>),
    Or(Vec<Lit>),
    Xor(Lit, Lit),
}

#[derive(Clone, Debug, Default)]
pub struct Circuit {
    /// Numbered inputs, 1-based.
    inputs: Vec<Var>,
    input_ids: HashMap<Var, Lit>,
    /// Gates in definition order, each after its operands.
    gates: Vec<(Lit, Gate)>,
    shared: HashMap<Gate, Lit>,
}

impl Circuit {
    /// Numbers `inputs` 1..=n in the given order.
    pub fn with_inputs(inputs: Vec<Var>) -> Self {
        let input_ids = inputs
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i as Lit + 1))
            .collect();
        Circuit {
            inputs,
            input_ids,
            ..Circuit::default()
        }
    }

    pub fn inputs(&self) -> &[Var] {
        &self.inputs
    }

    pub fn gates(&self) -> &[(Lit, Gate)] {
        &self.gates
    }

    pub fn input_id(&self, v: &Var) -> Option<Lit> {
        self.input_ids.get(v).copied()
    }

    /// Highest index in use.
    pub fn max_index(&self) -> Lit {
        self.inputs.len() as Lit + self.gates.len() as Lit
    }

    fn gate(&mut self, gate: Gate) -> Lit {
        if let Some(&id) = self.shared.get(&gate) {
            return id;
        }
        let id = self.max_index() + 1;
        self.gates.push((id, gate.clone()));
        self.shared.insert(gate, id);
        id
    }

    fn and(&mut self, lits: Vec<Lit>) -> Lit {
        self.gate(Gate::And(lits))
    }

    fn or(&mut self, lits: Vec<Lit>) -> Lit {
        self.gate(Gate::Or(lits))
    }

    fn top(&mut self) -> Lit {
        self.and(Vec::new())
    }

    /// Adds gates for a boolean formula and returns its output literal.
    /// Every variable must already be an input.
    pub fn lower(&mut self, ops: &OperatorTable, f: &Formula) -> Result<Lit, ExportError> {
        Ok(match f {
            Formula::Var(v) => self
                .input_id(v)
                .unwrap_or_else(|| panic!("`{v}` is not a circuit input")),
            Formula::Quant(..) => return Err(ExportError::NotPrenex),
            Formula::App(op, args) => match (op, args.as_slice()) {
                (Op::True, []) => self.top(),
                (Op::False, []) => -self.top(),
                (Op::Not, [a]) => -self.lower(ops, a)?,
                (Op::And | Op::Or, [_, _]) => {
                    let mut operands = Vec::new();
                    self.flatten(ops, op, f, &mut operands)?;
                    if *op == Op::And {
                        self.and(operands)
                    } else {
                        self.or(operands)
                    }
                }
                (Op::Implies, [a, b]) => {
                    let a = self.lower(ops, a)?;
                    let b = self.lower(ops, b)?;
                    self.or(vec![-a, b])
                }
                (Op::Xor, [a, b]) => {
                    let a = self.lower(ops, a)?;
                    let b = self.lower(ops, b)?;
                    self.gate(Gate::Xor(a, b))
                }
                (Op::Iff, [a, b]) => {
                    let a = self.lower(ops, a)?;
                    let b = self.lower(ops, b)?;
                    -self.gate(Gate::Xor(a, b))
                }
                (Op::User(name), _) => {
                    let def = ops
                        .get(name)
                        .filter(|d| d.arity == args.len())
                        .ok_or_else(|| ExportError::UnloweredOperator(name.to_string()))?
                        .clone();
                    let lits = args
                        .iter()
                        .map(|a| self.lower(ops, a))
                        .collect::<Result<Vec<_>, _>>()?;
                    self.minterms(&lits, &def.table)
                }
                _ => return Err(ExportError::UnloweredOperator(op.name().to_string())),
            },
        })
    }

    // Operands of a maximal chain of the same associative operator.
    fn flatten(
        &mut self,
        ops: &OperatorTable,
        op: &Op,
        f: &Formula,
        out: &mut Vec<Lit>,
    ) -> Result<(), ExportError> {
        match f {
            Formula::App(o, args) if o == op && args.len() == 2 => {
                self.flatten(ops, op, &args[0], out)?;
                self.flatten(ops, op, &args[1], out)
            }
            _ => {
                out.push(self.lower(ops, f)?);
                Ok(())
            }
        }
    }

    /// Disjunction of one conjunction per true row of `table`.
    fn minterms(&mut self, args: &[Lit], table: &[bool]) -> Lit {
        let n = args.len();
        let rows: Vec<Lit> = table
            .iter()
            .enumerate()
            .filter(|(_, &value)| value)
            .map(|(row, _)| {
                let lits = args
                    .iter()
                    .enumerate()
                    .map(|(i, &a)| if row >> (n - 1 - i) & 1 == 1 { a } else { -a })
                    .collect();
                self.and(lits)
            })
            .collect();
        self.or(rows)
    }
}
