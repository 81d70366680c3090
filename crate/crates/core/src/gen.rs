//! Seeded random formulas.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formula::{Block, Formula, Quantifier, Var};
use crate::ops::{Op, OperatorDef};
use crate::parser::{Declaration, Problem};

/// User operators the generator may declare: name, arity, truth table.
pub const USER_OPERATORS: [(&str, usize, &str); 3] = [
    ("maj", 3, "00010111"),
    ("ite", 3, "01010011"),
    ("nor", 2, "1000"),
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenConfig {
    /// Size of the variable pool.
    pub vars: usize,
    /// Upper bound on quantifier depth.
    pub max_depth: usize,
    /// Upper bound on length; the target length is drawn uniformly up to it.
    pub max_len: usize,
    /// Allow `↔`, `⊕` and `→`.
    pub non_monotone: bool,
    /// Allow the operators of [`USER_OPERATORS`].
    pub user_ops: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            vars: 8,
            max_depth: 4,
            max_len: 40,
            non_monotone: true,
            user_ops: true,
        }
    }
}

impl GenConfig {
    /// Only `∧`, `∨` and `¬`.
    pub fn monotone(self) -> Self {
        GenConfig {
            non_monotone: false,
            user_ops: false,
            ..self
        }
    }
}

/// Variable names `a`, `b`, … `z`, then `v26`, `v27`, ….
pub fn pool(n: usize) -> Vec<Var> {
    (0..n)
        .map(|i| {
            if i < 26 {
                Var::new(&((b'a' + i as u8) as char).to_string())
            } else {
                Var::new(&format!("v{i}"))
            }
        })
        .collect()
}

pub struct Generator<R> {
    rng: R,
    config: GenConfig,
    pool: Vec<Var>,
    used: [bool; USER_OPERATORS.len()],
}

impl Generator<ChaCha8Rng> {
    pub fn seeded(config: GenConfig, seed: u64) -> Self {
        Generator::new(config, ChaCha8Rng::seed_from_u64(seed))
    }
}

impl<R: Rng> Generator<R> {
    pub fn new(config: GenConfig, rng: R) -> Self {
        let pool = pool(config.vars.max(1));
        Generator {
            rng,
            config,
            pool,
            used: [false; USER_OPERATORS.len()],
        }
    }

    /// A problem declaring exactly the user operators its formula uses.
    pub fn problem(&mut self) -> Problem {
        self.used = [false; USER_OPERATORS.len()];
        let target = self.rng.gen_range(1..=self.config.max_len.max(1));
        let formula = self.formula(target, self.config.max_depth);
        let declarations = USER_OPERATORS
            .iter()
            .zip(self.used)
            .filter(|(_, used)| *used)
            .map(|((name, arity, bits), _)| Declaration {
                name: name.to_string(),
                def: OperatorDef::from_bits(*arity, bits).expect("valid table"),
            })
            .collect();
        Problem::with_declarations(declarations, formula)
    }

    fn leaf(&mut self) -> Formula {
        if self.rng.gen_bool(0.03) {
            Formula::constant(self.rng.gen())
        } else {
            Formula::Var(self.pool.choose(&mut self.rng).unwrap().clone())
        }
    }

    /// A formula of length at most `len` (exactly `len` unless `len` is 2).
    fn formula(&mut self, len: usize, depth: usize) -> Formula {
        let f = self.unnegated(len, depth);
        if !matches!(f, Formula::App(Op::Not, _)) && self.rng.gen_bool(0.12) {
            Formula::not(f)
        } else {
            f
        }
    }

    fn unnegated(&mut self, len: usize, depth: usize) -> Formula {
        if len < 3 {
            return self.leaf();
        }
        if depth > 0 && self.rng.gen_bool(0.3) {
            let k = if len >= 4 && self.pool.len() > 1 && self.rng.gen_bool(0.3) {
                2
            } else {
                1
            };
            let block: Block = self
                .pool
                .choose_multiple(&mut self.rng, k)
                .cloned()
                .collect();
            let q = if self.rng.gen() {
                Quantifier::Exists
            } else {
                Quantifier::Forall
            };
            let body = self.formula(len - 1 - k, depth - 1);
            return Formula::quant(q, block, body);
        }
        if len >= 4 && self.config.user_ops && self.rng.gen_bool(0.1) {
            let which = self.rng.gen_range(0..2);
            self.used[which] = true;
            let (name, _, _) = USER_OPERATORS[which];
            let parts = split(&mut self.rng, len - 1, 3);
            let args = parts.into_iter().map(|l| self.formula(l, depth)).collect();
            return Formula::app(Op::user(name), args);
        }
        let mut ops = vec![Op::And, Op::Or];
        if self.config.non_monotone {
            ops.extend([Op::Iff, Op::Xor, Op::Implies, Op::Iff, Op::Xor]);
        }
        if self.config.user_ops {
            ops.push(Op::user("nor"));
        }
        let op = ops.choose(&mut self.rng).unwrap().clone();
        if let Op::User(_) = op {
            self.used[2] = true;
        }
        let parts = split(&mut self.rng, len - 1, 2);
        let args = parts.into_iter().map(|l| self.formula(l, depth)).collect();
        Formula::app(op, args)
    }
}

/// `total` split into `n` positive parts, uniformly over compositions.
fn split<R: Rng>(rng: &mut R, total: usize, n: usize) -> Vec<usize> {
    let mut cuts = rand::seq::index::sample(rng, total - 1, n - 1).into_vec();
    cuts.sort_unstable();
    let mut parts = Vec::with_capacity(n);
    let mut prev = 0;
    for c in cuts {
        parts.push(c + 1 - prev);
        prev = c + 1;
    }
    parts.push(total - prev);
    parts
}

/// The nested biconditional `x1 ↔ ∃y1 (x2 ↔ ∃y2 (… ↔ ∃yk yk))`.
pub fn nested_biconditional(k: usize) -> Formula {
    let mut inner = Formula::var(&format!("y{k}"));
    for i in (1..=k).rev() {
        let quantified = Formula::exists([Var::new(&format!("y{i}"))], inner);
        inner = Formula::iff(Formula::var(&format!("x{i}")), quantified);
    }
    inner
}
