//! Abstract syntax of full quantified boolean formulas and the syntactic
//! measures defined on them.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::ops::Op;

/// A propositional variable. Equal iff the names are equal.
///
/// Names produced by [`crate::fresh::FreshGen`] contain the reserved `@`
/// character, which the parser rejects in source text.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(Arc<str>);

pub const RESERVED_CHAR: char = '@';

impl Var {
    pub fn new(name: &str) -> Var {
        Var(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    /// True for names that only the fresh-name generator emits.
    pub fn is_internal(&self) -> bool {
        self.0.contains(RESERVED_CHAR)
    }
}

impl From<&str> for Var {
    fn from(name: &str) -> Var {
        Var::new(name)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub type Block = BTreeSet<Var>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantifier {
    Exists,
    Forall,
}

impl Quantifier {
    pub fn dual(self) -> Quantifier {
        match self {
            Quantifier::Exists => Quantifier::Forall,
            Quantifier::Forall => Quantifier::Exists,
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Quantifier::Exists => "exists",
            Quantifier::Forall => "forall",
        }
    }
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// A full QBF: variables, operator applications and quantifier blocks nest
/// freely. Blocks are sets, so equality compares them as sets.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Var(Var),
    App(Op, Vec<Formula>),
    Quant(Quantifier, Block, Box<Formula>),
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// Builders.
impl Formula {
    pub fn var(name: &str) -> Formula {
        Formula::Var(Var::new(name))
    }

    pub fn top() -> Formula {
        Formula::App(Op::True, Vec::new())
    }

    pub fn bot() -> Formula {
        Formula::App(Op::False, Vec::new())
    }

    pub fn constant(value: bool) -> Formula {
        if value {
            Formula::top()
        } else {
            Formula::bot()
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Formula::App(Op::Not, vec![a])
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::App(Op::And, vec![a, b])
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::App(Op::Or, vec![a, b])
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::App(Op::Implies, vec![a, b])
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::App(Op::Iff, vec![a, b])
    }

    pub fn xor(a: Formula, b: Formula) -> Formula {
        Formula::App(Op::Xor, vec![a, b])
    }

    pub fn app(op: Op, args: Vec<Formula>) -> Formula {
        Formula::App(op, args)
    }

    pub fn quant(q: Quantifier, block: Block, body: Formula) -> Formula {
        Formula::Quant(q, block, Box::new(body))
    }

    pub fn exists<I, V>(vars: I, body: Formula) -> Formula
    where
        I: IntoIterator<Item = V>,
        V: Into<Var>,
    {
        Formula::quant(
            Quantifier::Exists,
            vars.into_iter().map(Into::into).collect(),
            body,
        )
    }

    pub fn forall<I, V>(vars: I, body: Formula) -> Formula
    where
        I: IntoIterator<Item = V>,
        V: Into<Var>,
    {
        Formula::quant(
            Quantifier::Forall,
            vars.into_iter().map(Into::into).collect(),
            body,
        )
    }

    /// Left-nested conjunction; `⊤` for no conjuncts. `⊤` conjuncts are
    /// dropped.
    pub fn conj<I: IntoIterator<Item = Formula>>(conjuncts: I) -> Formula {
        conjuncts
            .into_iter()
            .filter(|c| !c.is_top())
            .reduce(Formula::and)
            .unwrap_or_else(Formula::top)
    }

    pub fn is_top(&self) -> bool {
        matches!(self, Formula::App(Op::True, args) if args.is_empty())
    }

    pub fn is_bot(&self) -> bool {
        matches!(self, Formula::App(Op::False, args) if args.is_empty())
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self {
            Formula::Var(v) => Some(v),
            _ => None,
        }
    }
}

// Variable sets.
impl Formula {
    /// Every variable occurring in the formula, block mentions included.
    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Var(v) => {
                out.insert(v.clone());
            }
            Formula::Quant(_, block, _) => out.extend(block.iter().cloned()),
            Formula::App(..) => {}
        });
        out
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a Block>, out: &mut BTreeSet<Var>) {
        match self {
            Formula::Var(v) => {
                if !bound.iter().any(|b| b.contains(v)) {
                    out.insert(v.clone());
                }
            }
            Formula::App(_, args) => args.iter().for_each(|a| a.collect_free(bound, out)),
            Formula::Quant(_, block, body) => {
                bound.push(block);
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Variables listed in some quantifier block.
    pub fn bound_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Quant(_, block, _) = f {
                out.extend(block.iter().cloned());
            }
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit<'a, F: FnMut(&'a Formula)>(&'a self, f: &mut F) {
        f(self);
        match self {
            Formula::Var(_) => {}
            Formula::App(_, args) => args.iter().for_each(|a| a.visit(f)),
            Formula::Quant(_, _, body) => body.visit(f),
        }
    }
}

// Metrics.
impl Formula {
    /// Symbol count where variables, operators and quantifiers weigh one,
    /// each block variable weighs one, and negations are free.
    pub fn length(&self) -> usize {
        self.measure_length(false)
    }

    /// The same count with each negation weighing one.
    pub fn length_counting_negations(&self) -> usize {
        self.measure_length(true)
    }

    fn measure_length(&self, count_negations: bool) -> usize {
        match self {
            Formula::Var(_) => 1,
            Formula::App(Op::Not, args) if !count_negations && args.len() == 1 => {
                args[0].measure_length(false)
            }
            Formula::App(_, args) => {
                1 + args
                    .iter()
                    .map(|a| a.measure_length(count_negations))
                    .sum::<usize>()
            }
            Formula::Quant(_, block, body) => {
                1 + block.len() + body.measure_length(count_negations)
            }
        }
    }

    /// Quantifier depth: nesting count of blocks, empty blocks included.
    pub fn qdepth(&self) -> usize {
        match self {
            Formula::Var(_) => 0,
            Formula::App(_, args) => args.iter().map(Formula::qdepth).max().unwrap_or(0),
            Formula::Quant(_, _, body) => 1 + body.qdepth(),
        }
    }

    /// Number of quantified subformula occurrences.
    pub fn nblock(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |f| {
            if matches!(f, Formula::Quant(..)) {
                n += 1
            }
        });
        n
    }

    /// Sum of block sizes over all occurrences.
    pub fn nbvar(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |f| {
            if let Formula::Quant(_, block, _) = f {
                n += block.len()
            }
        });
        n
    }

    pub fn is_boolean(&self) -> bool {
        match self {
            Formula::Var(_) => true,
            Formula::App(_, args) => args.iter().all(Formula::is_boolean),
            Formula::Quant(..) => false,
        }
    }

    pub fn is_prenex(&self) -> bool {
        self.matrix().is_boolean()
    }

    /// The chain of leading quantifier blocks.
    pub fn prefix(&self) -> Vec<(Quantifier, &Block)> {
        let mut out = Vec::new();
        let mut cur = self;
        while let Formula::Quant(q, block, body) = cur {
            out.push((*q, block));
            cur = body;
        }
        out
    }

    /// The formula below the leading quantifier blocks.
    pub fn matrix(&self) -> &Formula {
        let mut cur = self;
        while let Formula::Quant(_, _, body) = cur {
            cur = body;
        }
        cur
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(name: &str) -> Formula {
        Formula::var(name)
    }

    fn set(names: &[&str]) -> BTreeSet<Var> {
        names.iter().map(|n| Var::new(n)).collect()
    }

    // ∃x (ψ ∧ ¬∃{x,y} χ) ∧ ¬∀y ρ
    fn metrics_example(psi: Formula, chi: Formula, rho: Formula) -> Formula {
        Formula::and(
            Formula::exists(
                ["x"],
                Formula::and(psi, Formula::not(Formula::exists(["x", "y"], chi))),
            ),
            Formula::not(Formula::forall(["y"], rho)),
        )
    }

    // Independent occurrence scan: walk every path and record the variables
    // whose leaf occurrence has no enclosing block naming it.
    fn free_by_paths(f: &Formula, binders: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        match f {
            Formula::Var(x) => {
                if !binders.contains(x) {
                    out.insert(x.clone());
                }
            }
            Formula::App(_, args) => {
                for a in args {
                    free_by_paths(a, binders, out)
                }
            }
            Formula::Quant(_, block, body) => {
                let n = binders.len();
                binders.extend(block.iter().cloned());
                free_by_paths(body, binders, out);
                binders.truncate(n);
            }
        }
    }

    #[test]
    fn free_vars_examples() {
        let f = Formula::exists(["x"], Formula::and(v("x"), v("y")));
        assert_eq!(f.free_vars(), set(&["y"]));

        let closed = metrics_example(v("x"), v("y"), v("y"));
        assert_eq!(closed.free_vars(), set(&[]));
        let open = metrics_example(v("z"), v("y"), v("y"));
        assert_eq!(open.free_vars(), set(&["z"]));
        for f in [closed, open] {
            let mut oracle = BTreeSet::new();
            free_by_paths(&f, &mut Vec::new(), &mut oracle);
            assert_eq!(f.free_vars(), oracle);
        }

        assert!(Formula::and(v("p"), v("q")).bound_vars().is_empty());
    }

    #[test]
    fn block_mentions_count_as_occurrences() {
        let f = Formula::exists(["x", "unused"], v("x"));
        assert_eq!(f.vars(), set(&["unused", "x"]));
        assert_eq!(f.bound_vars(), set(&["unused", "x"]));
        assert!(f.free_vars().is_empty());
    }

    #[test]
    fn length_examples() {
        assert_eq!(Formula::iff(v("p"), v("q")).length(), 3);
        let f = Formula::exists(["x", "y"], Formula::implies(v("x"), v("p")));
        assert_eq!(f.length(), 6);
        assert_eq!(v("p").length(), 1);
        assert_eq!(Formula::not(v("p")).length(), 1);
        assert_eq!(Formula::not(v("p")).length_counting_negations(), 2);
        assert_eq!(Formula::top().length(), 1);
    }

    #[test]
    fn depth_examples() {
        assert_eq!(Formula::and(v("p"), v("q")).qdepth(), 0);
        let two = Formula::exists(["x"], Formula::exists(["y"], Formula::and(v("x"), v("y"))));
        assert_eq!(two.qdepth(), 2);
        let f = Formula::exists(["x"], Formula::iff(Formula::exists(["y"], v("y")), v("x")));
        assert_eq!(f.qdepth(), 2);
    }

    #[test]
    fn block_counts() {
        let f = metrics_example(v("a"), v("b"), v("c"));
        assert_eq!((f.nblock(), f.nbvar()), (3, 4));
        assert_eq!((v("p").nblock(), v("p").nbvar()), (0, 0));
        let empty = Formula::exists(Vec::<Var>::new(), v("p"));
        assert_eq!((empty.nblock(), empty.nbvar(), empty.qdepth()), (1, 0, 1));
    }

    #[test]
    fn prenex_shapes() {
        let f = Formula::forall(["x"], Formula::exists(["y"], Formula::and(v("p"), v("q"))));
        assert!(f.is_prenex());
        assert_eq!(f.prefix().len(), 2);
        assert!(!Formula::and(v("p"), Formula::exists(["x"], v("x"))).is_prenex());
        assert!(Formula::xor(v("p"), v("q")).is_prenex());
    }

    #[test]
    fn conj_drops_top() {
        assert!(Formula::conj([]).is_top());
        assert_eq!(Formula::conj([Formula::top(), v("a")]), v("a"));
        assert_eq!(
            Formula::conj([v("a"), v("b"), v("c")]),
            Formula::and(Formula::and(v("a"), v("b")), v("c"))
        );
    }
}
