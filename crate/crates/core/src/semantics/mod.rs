//! Exact semantics by exhaustive enumeration, and by decision diagrams for
//! formulas with many bound variables.

pub mod diagram;
mod eval;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::formula::{Formula, Var};
use crate::fresh::FreshGen;
use crate::ops::OperatorTable;
use crate::subst::{substitute, Substitution};
use crate::transform::prenex_mc_parts;

pub use eval::evaluate;
use eval::Compiled;

use diagram::Manager;

pub const DEFAULT_CAP: usize = 24;

/// Enumerations with at least this many free variables are split across
/// threads.
const PARALLEL_THRESHOLD: usize = 14;
const SPLIT_BITS: usize = 6;

/// Truth values for finitely many variables; every other variable is false.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Valuation {
    assigned: BTreeMap<Var, bool>,
}

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, v: &Var) -> bool {
        self.assigned.get(v).copied().unwrap_or(false)
    }

    pub fn set(&mut self, v: Var, value: bool) {
        self.assigned.insert(v, value);
    }

    pub fn assigned(&self) -> &BTreeMap<Var, bool> {
        &self.assigned
    }

    /// The valuation restricted to `vars`, with unmapped ones made explicit.
    pub fn restrict(&self, vars: &BTreeSet<Var>) -> Valuation {
        vars.iter().map(|v| (v.clone(), self.get(v))).collect()
    }
}

impl FromIterator<(Var, bool)> for Valuation {
    fn from_iter<I: IntoIterator<Item = (Var, bool)>>(iter: I) -> Self {
        Valuation {
            assigned: iter.into_iter().collect(),
        }
    }
}

impl From<BTreeMap<Var, bool>> for Valuation {
    fn from(assigned: BTreeMap<Var, bool>) -> Self {
        Valuation { assigned }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, b) in &self.assigned {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{v}={}", *b as u8)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("unknown operator `{0}`")]
    UnknownOperator(String),
    #[error("operator `{op}` applied to {found} arguments")]
    ArityMismatch { op: String, found: usize },
    #[error("{vars} variables exceed the oracle cap of {cap}")]
    Refused { vars: usize, cap: usize },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Engine {
    /// Depth-first enumeration of every quantifier block. The cap counts all
    /// variables of the formula.
    Enumerate,
    /// Decision diagrams. The cap counts free variables only.
    #[default]
    Diagram,
}

impl Engine {
    pub fn as_str(self) -> &'static str {
        match self {
            Engine::Enumerate => "enumerate",
            Engine::Diagram => "diagram",
        }
    }
}

impl FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "enumerate" => Ok(Engine::Enumerate),
            "diagram" => Ok(Engine::Diagram),
            _ => Err(format!(
                "unknown engine `{s}` (expected enumerate or diagram)"
            )),
        }
    }
}

/// Satisfiability, validity and equivalence checks over a fixed operator
/// table.
#[derive(Clone, Debug)]
pub struct Oracle {
    ops: OperatorTable,
    cap: usize,
    engine: Engine,
}

impl Oracle {
    pub fn new(ops: OperatorTable) -> Self {
        Oracle {
            ops,
            cap: DEFAULT_CAP,
            engine: Engine::default(),
        }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn with_engine(mut self, engine: Engine) -> Self {
        self.engine = engine;
        self
    }

    pub fn operators(&self) -> &OperatorTable {
        &self.ops
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn engine(&self) -> Engine {
        self.engine
    }

    fn admit(&self, formulas: &[&Formula]) -> Result<Vec<Var>, SemanticsError> {
        let free: BTreeSet<Var> = formulas.iter().flat_map(|f| f.free_vars()).collect();
        let counted = match self.engine {
            Engine::Diagram => free.len(),
            Engine::Enumerate => formulas
                .iter()
                .flat_map(|f| f.vars())
                .collect::<BTreeSet<_>>()
                .len(),
        };
        if counted > self.cap {
            return Err(SemanticsError::Refused {
                vars: counted,
                cap: self.cap,
            });
        }
        Ok(free.into_iter().collect())
    }

    pub fn evaluate(&self, valuation: &Valuation, phi: &Formula) -> Result<bool, SemanticsError> {
        match self.engine {
            Engine::Enumerate => evaluate(&self.ops, valuation, phi),
            Engine::Diagram => {
                let mut m = Manager::new();
                let f = m.build(&self.ops, phi)?;
                Ok(m.eval(f, &|v| valuation.get(v)))
            }
        }
    }

    /// A valuation of the free variables under which `phi` takes `want`.
    fn find(&self, phi: &Formula, want: bool) -> Result<Option<Valuation>, SemanticsError> {
        let free = self.admit(&[phi])?;
        match self.engine {
            Engine::Diagram => {
                let mut m = Manager::new();
                let mut f = m.build(&self.ops, phi)?;
                if !want {
                    f = m.not(f);
                }
                Ok(m.witness(f).map(|w| {
                    let w = Valuation::from(w);
                    w.restrict(&free.iter().cloned().collect())
                }))
            }
            Engine::Enumerate => {
                let compiled = Compiled::new(&self.ops, phi)?;
                let slots: Vec<usize> = free.iter().map(|v| compiled.slot(v).unwrap()).collect();
                let hit = search(
                    free.len(),
                    |bits, state: &mut Vec<bool>| {
                        load(&slots, bits, state);
                        compiled.eval(state) == want
                    },
                    || vec![false; compiled.slot_count()],
                );
                Ok(hit.map(|bits| valuation_of(&free, bits)))
            }
        }
    }

    pub fn satisfying(&self, phi: &Formula) -> Result<Option<Valuation>, SemanticsError> {
        self.find(phi, true)
    }

    pub fn falsifying(&self, phi: &Formula) -> Result<Option<Valuation>, SemanticsError> {
        self.find(phi, false)
    }

    pub fn satisfiable(&self, phi: &Formula) -> Result<bool, SemanticsError> {
        Ok(self.satisfying(phi)?.is_some())
    }

    pub fn valid(&self, phi: &Formula) -> Result<bool, SemanticsError> {
        Ok(self.falsifying(phi)?.is_none())
    }

    /// A valuation on which `phi` and `psi` differ, if any.
    pub fn distinguishing(
        &self,
        phi: &Formula,
        psi: &Formula,
    ) -> Result<Option<Valuation>, SemanticsError> {
        let free = self.admit(&[phi, psi])?;
        match self.engine {
            Engine::Diagram => {
                let mut m = Manager::new();
                let a = m.build(&self.ops, phi)?;
                let b = m.build(&self.ops, psi)?;
                let d = m.xor(a, b);
                Ok(m.witness(d)
                    .map(|w| Valuation::from(w).restrict(&free.iter().cloned().collect())))
            }
            Engine::Enumerate => {
                let ca = Compiled::new(&self.ops, phi)?;
                let cb = Compiled::new(&self.ops, psi)?;
                let sa: Vec<Option<usize>> = free.iter().map(|v| ca.slot(v)).collect();
                let sb: Vec<Option<usize>> = free.iter().map(|v| cb.slot(v)).collect();
                let hit = search(
                    free.len(),
                    |bits, (xa, xb): &mut (Vec<bool>, Vec<bool>)| {
                        load_sparse(&sa, bits, xa);
                        load_sparse(&sb, bits, xb);
                        ca.eval(xa) != cb.eval(xb)
                    },
                    || (vec![false; ca.slot_count()], vec![false; cb.slot_count()]),
                );
                Ok(hit.map(|bits| valuation_of(&free, bits)))
            }
        }
    }

    pub fn equivalent(&self, phi: &Formula, psi: &Formula) -> Result<bool, SemanticsError> {
        Ok(self.distinguishing(phi, psi)?.is_none())
    }

    pub fn equisatisfiable(&self, phi: &Formula, psi: &Formula) -> Result<bool, SemanticsError> {
        Ok(self.satisfiable(phi)? == self.satisfiable(psi)?)
    }

    pub fn equivalid(&self, phi: &Formula, psi: &Formula) -> Result<bool, SemanticsError> {
        Ok(self.valid(phi)? == self.valid(psi)?)
    }

    /// Evaluates `phi` through its model-checking prenex form: free variables
    /// are replaced by constants, every outermost quantified subformula is
    /// prenexed and decided on its own, and the skeleton combines the
    /// verdicts.
    pub fn evaluate_via_mc(
        &self,
        valuation: &Valuation,
        phi: &Formula,
    ) -> Result<bool, SemanticsError> {
        let sigma: Substitution = phi
            .free_vars()
            .into_iter()
            .map(|v| {
                let value = valuation.get(&v);
                (v, Formula::constant(value))
            })
            .collect();
        let closed = substitute(phi, &sigma).expect("constants cannot be captured");
        let mut gen = FreshGen::for_formula(&closed);
        let parts = prenex_mc_parts(&closed, &mut gen);
        let mut verdicts = Valuation::new();
        for (abbrev, part) in &parts.parts {
            verdicts.set(abbrev.clone(), self.evaluate(&Valuation::new(), part)?);
        }
        evaluate(&self.ops, &verdicts, &parts.skeleton)
    }
}

/// [`Oracle::evaluate_via_mc`] with enumeration for every part.
pub fn evaluate_via_mc(
    ops: &OperatorTable,
    valuation: &Valuation,
    phi: &Formula,
) -> Result<bool, SemanticsError> {
    Oracle::new(ops.clone())
        .with_engine(Engine::Enumerate)
        .evaluate_via_mc(valuation, phi)
}

fn load(slots: &[usize], bits: u64, state: &mut [bool]) {
    let n = slots.len();
    for (i, &s) in slots.iter().enumerate() {
        state[s] = bits >> (n - 1 - i) & 1 == 1;
    }
}

fn load_sparse(slots: &[Option<usize>], bits: u64, state: &mut [bool]) {
    let n = slots.len();
    for (i, s) in slots.iter().enumerate() {
        if let Some(s) = s {
            state[*s] = bits >> (n - 1 - i) & 1 == 1;
        }
    }
}

fn valuation_of(vars: &[Var], bits: u64) -> Valuation {
    let n = vars.len();
    vars.iter()
        .enumerate()
        .map(|(i, v)| (v.clone(), bits >> (n - 1 - i) & 1 == 1))
        .collect()
}

/// Smallest `bits < 2^n` accepted by `test`, splitting the range across
/// threads for large `n`. Each worker gets its own scratch state.
fn search<S, T, I>(n: usize, test: T, init: I) -> Option<u64>
where
    T: Fn(u64, &mut S) -> bool + Sync,
    I: Fn() -> S + Sync,
{
    let total = 1u64 << n;
    if n < PARALLEL_THRESHOLD {
        let mut state = init();
        return (0..total).find(|&bits| test(bits, &mut state));
    }
    let chunk = total >> SPLIT_BITS;
    (0..1u64 << SPLIT_BITS)
        .into_par_iter()
        .filter_map(|c| {
            let mut state = init();
            (c * chunk..(c + 1) * chunk).find(|&bits| test(bits, &mut state))
        })
        .min()
}

/// Whether the diagram engine and enumeration agree on `phi`'s function.
/// Intended for differential tests.
pub fn engines_agree(ops: &OperatorTable, phi: &Formula) -> Result<bool, SemanticsError> {
    let free: Vec<Var> = phi.free_vars().into_iter().collect();
    let mut m = Manager::new();
    let f = m.build(ops, phi)?;
    let compiled = Compiled::new(ops, phi)?;
    let slots: Vec<usize> = free.iter().map(|v| compiled.slot(v).unwrap()).collect();
    let mut state = vec![false; compiled.slot_count()];
    let mut ok = true;
    eval::for_each_assignment(&free, |assignment| {
        for (v, &s) in free.iter().zip(&slots) {
            state[s] = assignment[v];
        }
        ok = m.eval(f, &|v| assignment.get(v).copied().unwrap_or(false))
            == compiled.eval(&mut state);
        ok
    });
    Ok(ok)
}
