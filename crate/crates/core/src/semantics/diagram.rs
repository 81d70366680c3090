//! Reduced ordered binary decision diagrams.
//!
//! A second exact semantics: each subformula is compiled to the canonical
//! diagram of the boolean function it denotes over its free variables, and a
//! quantifier block is eliminated by combining cofactors. Two formulas are
//! equivalent iff they compile to the same node in one manager.

use std::collections::{BTreeMap, HashMap};

use crate::formula::{Formula, Quantifier, Var};
use crate::ops::{Op, OperatorTable};

use super::SemanticsError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(u32);

pub const FALSE: NodeId = NodeId(0);
pub const TRUE: NodeId = NodeId(1);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Node {
    level: u32,
    low: NodeId,
    high: NodeId,
}

const TERMINAL_LEVEL: u32 = u32::MAX;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum QuantOp {
    Exists,
    Forall,
}

/// Node store plus the variable order. Levels are handed out in order of
/// first appearance.
pub struct Manager {
    nodes: Vec<Node>,
    unique: HashMap<Node, NodeId>,
    ite_cache: HashMap<(NodeId, NodeId, NodeId), NodeId>,
    quant_cache: HashMap<(QuantOp, NodeId, u32), NodeId>,
    levels: HashMap<Var, u32>,
    vars: Vec<Var>,
}

impl Default for Manager {
    fn default() -> Self {
        Self::new()
    }
}

impl Manager {
    pub fn new() -> Self {
        let terminal = |id| Node {
            level: TERMINAL_LEVEL,
            low: NodeId(id),
            high: NodeId(id),
        };
        Manager {
            nodes: vec![terminal(0), terminal(1)],
            unique: HashMap::new(),
            ite_cache: HashMap::new(),
            quant_cache: HashMap::new(),
            levels: HashMap::new(),
            vars: Vec::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    fn level_of(&mut self, v: &Var) -> u32 {
        if let Some(&l) = self.levels.get(v) {
            return l;
        }
        let l = self.vars.len() as u32;
        self.levels.insert(v.clone(), l);
        self.vars.push(v.clone());
        l
    }

    fn level(&self, f: NodeId) -> u32 {
        self.nodes[f.0 as usize].level
    }

    fn make(&mut self, level: u32, low: NodeId, high: NodeId) -> NodeId {
        if low == high {
            return low;
        }
        let node = Node { level, low, high };
        if let Some(&id) = self.unique.get(&node) {
            return id;
        }
        let id = NodeId(self.nodes.len() as u32);
        self.nodes.push(node);
        self.unique.insert(node, id);
        id
    }

    pub fn var(&mut self, v: &Var) -> NodeId {
        let l = self.level_of(v);
        self.make(l, FALSE, TRUE)
    }

    pub fn constant(b: bool) -> NodeId {
        if b {
            TRUE
        } else {
            FALSE
        }
    }

    fn cofactors(&self, f: NodeId, level: u32) -> (NodeId, NodeId) {
        let n = self.nodes[f.0 as usize];
        if n.level == level {
            (n.low, n.high)
        } else {
            (f, f)
        }
    }

    pub fn ite(&mut self, f: NodeId, g: NodeId, h: NodeId) -> NodeId {
        if f == TRUE {
            return g;
        }
        if f == FALSE {
            return h;
        }
        if g == h {
            return g;
        }
        if g == TRUE && h == FALSE {
            return f;
        }
        if let Some(&r) = self.ite_cache.get(&(f, g, h)) {
            return r;
        }
        let top = self.level(f).min(self.level(g)).min(self.level(h));
        let (f0, f1) = self.cofactors(f, top);
        let (g0, g1) = self.cofactors(g, top);
        let (h0, h1) = self.cofactors(h, top);
        let low = self.ite(f0, g0, h0);
        let high = self.ite(f1, g1, h1);
        let r = self.make(top, low, high);
        self.ite_cache.insert((f, g, h), r);
        r
    }

    pub fn not(&mut self, f: NodeId) -> NodeId {
        self.ite(f, FALSE, TRUE)
    }

    pub fn and(&mut self, f: NodeId, g: NodeId) -> NodeId {
        self.ite(f, g, FALSE)
    }

    pub fn or(&mut self, f: NodeId, g: NodeId) -> NodeId {
        self.ite(f, TRUE, g)
    }

    pub fn xor(&mut self, f: NodeId, g: NodeId) -> NodeId {
        let ng = self.not(g);
        self.ite(f, ng, g)
    }

    pub fn iff(&mut self, f: NodeId, g: NodeId) -> NodeId {
        let ng = self.not(g);
        self.ite(f, g, ng)
    }

    pub fn implies(&mut self, f: NodeId, g: NodeId) -> NodeId {
        self.ite(f, g, TRUE)
    }

    /// Function given by a truth table indexed with the first argument as
    /// the most significant bit.
    pub fn table(&mut self, args: &[NodeId], table: &[bool]) -> NodeId {
        match args.split_first() {
            None => Self::constant(table[0]),
            Some((&first, rest)) => {
                let half = table.len() / 2;
                let low = self.table(rest, &table[..half]);
                let high = self.table(rest, &table[half..]);
                self.ite(first, high, low)
            }
        }
    }

    fn quantify(&mut self, op: QuantOp, f: NodeId, level: u32) -> NodeId {
        let fl = self.level(f);
        if fl > level {
            // terminal, or every variable below `level` in the order
            return f;
        }
        if let Some(&r) = self.quant_cache.get(&(op, f, level)) {
            return r;
        }
        let n = self.nodes[f.0 as usize];
        let r = if fl == level {
            match op {
                QuantOp::Exists => self.or(n.low, n.high),
                QuantOp::Forall => self.and(n.low, n.high),
            }
        } else {
            let low = self.quantify(op, n.low, level);
            let high = self.quantify(op, n.high, level);
            self.make(fl, low, high)
        };
        self.quant_cache.insert((op, f, level), r);
        r
    }

    pub fn exists(&mut self, f: NodeId, v: &Var) -> NodeId {
        let l = self.level_of(v);
        self.quantify(QuantOp::Exists, f, l)
    }

    pub fn forall(&mut self, f: NodeId, v: &Var) -> NodeId {
        let l = self.level_of(v);
        self.quantify(QuantOp::Forall, f, l)
    }

    /// Compiles a full QBF to the diagram of its function over its free
    /// variables.
    pub fn build(&mut self, ops: &OperatorTable, phi: &Formula) -> Result<NodeId, SemanticsError> {
        Ok(match phi {
            Formula::Var(v) => self.var(v),
            Formula::Quant(q, block, body) => {
                let mut f = self.build(ops, body)?;
                for v in block {
                    f = match q {
                        Quantifier::Exists => self.exists(f, v),
                        Quantifier::Forall => self.forall(f, v),
                    };
                }
                f
            }
            Formula::App(op, args) => {
                let sub = args
                    .iter()
                    .map(|a| self.build(ops, a))
                    .collect::<Result<Vec<_>, _>>()?;
                let bad_arity = || SemanticsError::ArityMismatch {
                    op: op.name().to_string(),
                    found: args.len(),
                };
                match (op, sub.as_slice()) {
                    (Op::True, []) => TRUE,
                    (Op::False, []) => FALSE,
                    (Op::Not, &[a]) => self.not(a),
                    (Op::And, &[a, b]) => self.and(a, b),
                    (Op::Or, &[a, b]) => self.or(a, b),
                    (Op::Implies, &[a, b]) => self.implies(a, b),
                    (Op::Iff, &[a, b]) => self.iff(a, b),
                    (Op::Xor, &[a, b]) => self.xor(a, b),
                    (Op::User(name), sub) => {
                        let def = ops
                            .get(name)
                            .ok_or_else(|| SemanticsError::UnknownOperator(name.to_string()))?;
                        if def.arity != sub.len() {
                            return Err(bad_arity());
                        }
                        let table = def.table.clone();
                        self.table(sub, &table)
                    }
                    _ => return Err(bad_arity()),
                }
            }
        })
    }

    /// An assignment making `f` true, or `None` when `f` is unsatisfiable.
    /// Variables not on the chosen path are left out (they may take any
    /// value).
    pub fn witness(&self, f: NodeId) -> Option<BTreeMap<Var, bool>> {
        if f == FALSE {
            return None;
        }
        let mut out = BTreeMap::new();
        let mut cur = f;
        while cur != TRUE {
            let n = self.nodes[cur.0 as usize];
            let var = self.vars[n.level as usize].clone();
            if n.high != FALSE {
                out.insert(var, true);
                cur = n.high;
            } else {
                out.insert(var, false);
                cur = n.low;
            }
        }
        Some(out)
    }

    pub fn eval(&self, f: NodeId, assignment: &dyn Fn(&Var) -> bool) -> bool {
        let mut cur = f;
        while cur != TRUE && cur != FALSE {
            let n = self.nodes[cur.0 as usize];
            cur = if assignment(&self.vars[n.level as usize]) {
                n.high
            } else {
                n.low
            };
        }
        cur == TRUE
    }
}
