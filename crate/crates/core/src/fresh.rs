//! Fresh-variable allocation with provenance.
//!
//! Every allocation takes a new index `i` from a monotone counter. Copies of a
//! source variable `x` are named `x@p<i>` (positive) and `x@n<i>` (negative),
//! the abbreviation variable of binding `i` is `@a<i>`, and renamed bound
//! variables are `x@r<i>`. The text after the last `@` therefore identifies the
//! allocation, which keeps all emitted names pairwise distinct.

use std::collections::BTreeMap;
use std::fmt;

use crate::formula::{Block, Formula, Var, RESERVED_CHAR};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Source,
    PosCopy,
    NegCopy,
    Abbrev,
    Renamed,
    Tseytin,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Source => "source",
            Role::PosCopy => "pos-copy",
            Role::NegCopy => "neg-copy",
            Role::Abbrev => "abbrev",
            Role::Renamed => "renamed",
            Role::Tseytin => "tseytin",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Where a generated variable comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Origin {
    pub role: Role,
    /// The variable this one copies; `None` for abbreviations.
    pub source: Option<Var>,
    pub index: u64,
}

/// Fresh names for one quantified block occurrence.
#[derive(Clone, Debug)]
pub struct FreshBinding {
    pub index: u64,
    pub abbrev: Var,
}

#[derive(Clone, Debug, Default)]
pub struct FreshGen {
    next: u64,
    issued: BTreeMap<Var, Origin>,
}

impl FreshGen {
    pub fn new() -> Self {
        Self::starting_at(1)
    }

    /// A generator whose first allocation index is `start`.
    pub fn starting_at(start: u64) -> Self {
        FreshGen {
            next: start,
            issued: BTreeMap::new(),
        }
    }

    /// A generator that cannot collide with any name already in `phi`.
    pub fn for_formula(phi: &Formula) -> Self {
        let mut gen = Self::new();
        gen.avoid(phi);
        gen
    }

    /// Moves the counter past every allocation index that appears in an
    /// internal name of `phi`.
    pub fn avoid(&mut self, phi: &Formula) {
        for var in phi.vars() {
            if let Some(i) = allocation_index(var.name()) {
                self.next = self.next.max(i.saturating_add(1));
            }
        }
    }

    pub fn peek_index(&self) -> u64 {
        self.next
    }

    fn allocate(&mut self) -> u64 {
        let i = self.next;
        self.next += 1;
        i
    }

    fn record(&mut self, var: Var, role: Role, source: Option<Var>, index: u64) -> Var {
        self.issued.insert(
            var.clone(),
            Origin {
                role,
                source,
                index,
            },
        );
        var
    }

    /// Allocates a binding index and its abbreviation variable `@a<i>`.
    pub fn binding(&mut self) -> FreshBinding {
        let index = self.allocate();
        let abbrev = Var::new(&format!("{RESERVED_CHAR}a{index}"));
        let abbrev = self.record(abbrev, Role::Abbrev, None, index);
        FreshBinding { index, abbrev }
    }

    /// Positive and negative copies of every variable of `block` for binding
    /// `index`.
    pub fn copies(
        &mut self,
        index: u64,
        block: &Block,
    ) -> (BTreeMap<Var, Var>, BTreeMap<Var, Var>) {
        let mut pos = BTreeMap::new();
        let mut neg = BTreeMap::new();
        for x in block {
            let p = Var::new(&format!("{x}{RESERVED_CHAR}p{index}"));
            let n = Var::new(&format!("{x}{RESERVED_CHAR}n{index}"));
            pos.insert(
                x.clone(),
                self.record(p, Role::PosCopy, Some(x.clone()), index),
            );
            neg.insert(
                x.clone(),
                self.record(n, Role::NegCopy, Some(x.clone()), index),
            );
        }
        (pos, neg)
    }

    /// Copies under a newly allocated index, for callers that bring their own
    /// abbreviation variable.
    pub fn fresh_copies(&mut self, block: &Block) -> (BTreeMap<Var, Var>, BTreeMap<Var, Var>) {
        let index = self.allocate();
        self.copies(index, block)
    }

    /// A fresh name standing for a renamed bound variable.
    pub fn rename(&mut self, x: &Var) -> Var {
        let index = self.allocate();
        let r = Var::new(&format!("{x}{RESERVED_CHAR}r{index}"));
        self.record(r, Role::Renamed, Some(x.clone()), index)
    }

    pub fn origin(&self, var: &Var) -> Option<&Origin> {
        self.issued.get(var)
    }

    /// Everything allocated so far.
    pub fn provenance(&self) -> &BTreeMap<Var, Origin> {
        &self.issued
    }
}

/// Parses the trailing `@<role><digits>` of a generated name.
fn allocation_index(name: &str) -> Option<u64> {
    let at = name.rfind(RESERVED_CHAR)?;
    let tail = &name[at + 1..];
    let mut chars = tail.chars();
    match chars.next() {
        Some('a' | 'p' | 'n' | 'r') => chars.as_str().parse().ok(),
        _ => None,
    }
}
