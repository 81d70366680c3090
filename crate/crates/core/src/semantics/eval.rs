//! Depth-first enumeration semantics.

use std::collections::{BTreeMap, HashMap};

use crate::formula::{Formula, Quantifier, Var};
use crate::ops::{Op, OperatorTable};

use super::{SemanticsError, Valuation};

/// Formula with variables resolved to slots and operators resolved to
/// evaluators, so the enumeration loop does no hashing.
enum Node {
    Slot(usize),
    Const(bool),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Implies(Box<Node>, Box<Node>),
    Iff(Box<Node>, Box<Node>),
    Xor(Box<Node>, Box<Node>),
    Table(Vec<bool>, Vec<Node>),
    Quant(Quantifier, Vec<usize>, Box<Node>),
}

pub(crate) struct Compiled {
    root: Node,
    slots: HashMap<Var, usize>,
}

impl Compiled {
    pub(crate) fn new(ops: &OperatorTable, phi: &Formula) -> Result<Self, SemanticsError> {
        let mut slots = HashMap::new();
        let root = compile(ops, phi, &mut slots)?;
        Ok(Compiled { root, slots })
    }

    pub(crate) fn slot(&self, v: &Var) -> Option<usize> {
        self.slots.get(v).copied()
    }

    pub(crate) fn slot_count(&self) -> usize {
        self.slots.len()
    }

    pub(crate) fn state_for(&self, valuation: &Valuation) -> Vec<bool> {
        let mut state = vec![false; self.slots.len()];
        for (v, &i) in &self.slots {
            state[i] = valuation.get(v);
        }
        state
    }

    pub(crate) fn eval(&self, state: &mut [bool]) -> bool {
        eval_node(&self.root, state)
    }
}

fn slot_of(slots: &mut HashMap<Var, usize>, v: &Var) -> usize {
    let next = slots.len();
    *slots.entry(v.clone()).or_insert(next)
}

fn compile(
    ops: &OperatorTable,
    phi: &Formula,
    slots: &mut HashMap<Var, usize>,
) -> Result<Node, SemanticsError> {
    Ok(match phi {
        Formula::Var(v) => Node::Slot(slot_of(slots, v)),
        Formula::Quant(q, block, body) => {
            let vars = block.iter().map(|v| slot_of(slots, v)).collect();
            Node::Quant(*q, vars, Box::new(compile(ops, body, slots)?))
        }
        Formula::App(op, args) => {
            let mut sub = args
                .iter()
                .map(|a| compile(ops, a, slots))
                .collect::<Result<Vec<_>, _>>()?;
            let bad_arity = || SemanticsError::ArityMismatch {
                op: op.name().to_string(),
                found: args.len(),
            };
            if let Some(arity) = op.builtin_arity() {
                if arity != sub.len() {
                    return Err(bad_arity());
                }
            }
            let mut bin = |f: fn(Box<Node>, Box<Node>) -> Node| {
                let b = sub.pop().unwrap();
                let a = sub.pop().unwrap();
                f(Box::new(a), Box::new(b))
            };
            match op {
                Op::True => Node::Const(true),
                Op::False => Node::Const(false),
                Op::Not => Node::Not(Box::new(sub.pop().unwrap())),
                Op::And => bin(Node::And),
                Op::Or => bin(Node::Or),
                Op::Implies => bin(Node::Implies),
                Op::Iff => bin(Node::Iff),
                Op::Xor => bin(Node::Xor),
                Op::User(name) => {
                    let def = ops
                        .get(name)
                        .ok_or_else(|| SemanticsError::UnknownOperator(name.to_string()))?;
                    if def.arity != sub.len() {
                        return Err(bad_arity());
                    }
                    Node::Table(def.table.clone(), sub)
                }
            }
        }
    })
}

fn eval_node(node: &Node, state: &mut [bool]) -> bool {
    match node {
        Node::Slot(i) => state[*i],
        Node::Const(b) => *b,
        Node::Not(a) => !eval_node(a, state),
        Node::And(a, b) => eval_node(a, state) && eval_node(b, state),
        Node::Or(a, b) => eval_node(a, state) || eval_node(b, state),
        Node::Implies(a, b) => !eval_node(a, state) || eval_node(b, state),
        Node::Iff(a, b) => eval_node(a, state) == eval_node(b, state),
        Node::Xor(a, b) => eval_node(a, state) != eval_node(b, state),
        Node::Table(table, args) => {
            let idx = args
                .iter()
                .fold(0usize, |acc, a| (acc << 1) | eval_node(a, state) as usize);
            table[idx]
        }
        Node::Quant(q, vars, body) => {
            let saved: Vec<bool> = vars.iter().map(|&i| state[i]).collect();
            let want = *q == Quantifier::Exists;
            let result = enumerate_block(vars, body, state, want);
            for (&i, b) in vars.iter().zip(saved) {
                state[i] = b;
            }
            result
        }
    }
}

// Tries every assignment of `vars`, stopping at the first body value equal to
// `want` (a witness for ∃, a counterexample for ∀).
fn enumerate_block(vars: &[usize], body: &Node, state: &mut [bool], want: bool) -> bool {
    match vars.split_first() {
        None => eval_node(body, state),
        Some((&first, rest)) => {
            for value in [false, true] {
                state[first] = value;
                if enumerate_block(rest, body, state, want) == want {
                    return want;
                }
            }
            !want
        }
    }
}

/// Truth value of `phi` under `valuation`.
pub fn evaluate(
    ops: &OperatorTable,
    valuation: &Valuation,
    phi: &Formula,
) -> Result<bool, SemanticsError> {
    let compiled = Compiled::new(ops, phi)?;
    let mut state = compiled.state_for(valuation);
    Ok(compiled.eval(&mut state))
}

/// Calls `visit` with every assignment of `vars`, in binary counting order,
/// until it returns `false`. Returns whether the walk completed.
pub(crate) fn for_each_assignment<F>(vars: &[Var], mut visit: F) -> bool
where
    F: FnMut(&BTreeMap<Var, bool>) -> bool,
{
    let mut current: BTreeMap<Var, bool> = vars.iter().map(|v| (v.clone(), false)).collect();
    let n = vars.len();
    let total: u128 = 1u128 << n;
    for bits in 0..total {
        for (i, v) in vars.iter().enumerate() {
            current.insert(v.clone(), bits >> (n - 1 - i) & 1 == 1);
        }
        if !visit(&current) {
            return false;
        }
    }
    true
}
