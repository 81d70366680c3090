//! Boolean operators and the table giving each one its arity and truth table.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// An operator name as it appears in an application node.
///
/// The built-in connectives get their own variants; anything else is looked up
/// by name in an [`OperatorTable`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    False,
    True,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Xor,
    User(Arc<str>),
}

impl Op {
    pub const BUILTINS: [Op; 8] = [
        Op::False,
        Op::True,
        Op::Not,
        Op::And,
        Op::Or,
        Op::Implies,
        Op::Iff,
        Op::Xor,
    ];

    pub fn user(name: &str) -> Op {
        Op::User(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        match self {
            Op::False => "false",
            Op::True => "true",
            Op::Not => "not",
            Op::And => "and",
            Op::Or => "or",
            Op::Implies => "implies",
            Op::Iff => "iff",
            Op::Xor => "xor",
            Op::User(name) => name,
        }
    }

    /// Arity of a built-in; `None` for user operators.
    pub fn builtin_arity(&self) -> Option<usize> {
        match self {
            Op::False | Op::True => Some(0),
            Op::Not => Some(1),
            Op::And | Op::Or | Op::Implies | Op::Iff | Op::Xor => Some(2),
            Op::User(_) => None,
        }
    }

    pub fn is_builtin(&self) -> bool {
        !matches!(self, Op::User(_))
    }

    /// Evaluates a built-in directly. Returns `None` for user operators or
    /// when the argument count is wrong.
    #[inline]
    pub fn eval_builtin(&self, args: &[bool]) -> Option<bool> {
        Some(match (self, args) {
            (Op::False, []) => false,
            (Op::True, []) => true,
            (Op::Not, [a]) => !a,
            (Op::And, [a, b]) => *a && *b,
            (Op::Or, [a, b]) => *a || *b,
            (Op::Implies, [a, b]) => !*a || *b,
            (Op::Iff, [a, b]) => a == b,
            (Op::Xor, [a, b]) => a != b,
            _ => return None,
        })
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Arity and truth table of one operator.
///
/// `table[i]` is the value on the argument tuple whose bits, read with the
/// first argument as the most significant bit, spell `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OperatorDef {
    pub arity: usize,
    pub table: Vec<bool>,
}

impl OperatorDef {
    pub fn new(arity: usize, table: Vec<bool>) -> Result<Self, DeclarationError> {
        let expected = table_len(arity)?;
        if table.len() != expected {
            return Err(DeclarationError::TableLength {
                arity,
                expected,
                found: table.len(),
            });
        }
        Ok(OperatorDef { arity, table })
    }

    /// Parses a bit string such as `"00010111"`.
    pub fn from_bits(arity: usize, bits: &str) -> Result<Self, DeclarationError> {
        let table = bits
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(DeclarationError::BadBit(other)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        OperatorDef::new(arity, table)
    }

    pub fn bits(&self) -> String {
        self.table
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }

    pub fn eval(&self, args: &[bool]) -> Option<bool> {
        if args.len() != self.arity {
            return None;
        }
        Some(self.table[table_index(args)])
    }
}

/// Index into a truth table for the given argument tuple.
#[inline]
pub fn table_index(args: &[bool]) -> usize {
    args.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize)
}

fn table_len(arity: usize) -> Result<usize, DeclarationError> {
    // 2^20 rows is already far beyond anything a text declaration can carry.
    if arity > 20 {
        return Err(DeclarationError::ArityTooLarge(arity));
    }
    Ok(1usize << arity)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeclarationError {
    #[error("operator `{0}` is already defined")]
    Duplicate(String),
    #[error("`{0}` is reserved and cannot name an operator")]
    Reserved(String),
    #[error("truth table for arity {arity} needs {expected} bits, found {found}")]
    TableLength {
        arity: usize,
        expected: usize,
        found: usize,
    },
    #[error("truth table may only contain 0 and 1, found `{0}`")]
    BadBit(char),
    #[error("arity {0} is too large")]
    ArityTooLarge(usize),
}

/// Words the concrete syntax reserves; none of them may name an operator.
pub const KEYWORDS: [&str; 6] = ["exists", "forall", "op", "true", "false", "xor"];

/// Named operators with their truth tables. Always contains the built-ins.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorTable {
    entries: BTreeMap<String, OperatorDef>,
    // user declarations in the order they were made
    declared: Vec<String>,
}

impl Default for OperatorTable {
    fn default() -> Self {
        Self::new()
    }
}

impl OperatorTable {
    pub fn new() -> Self {
        let bits = |s: &str, arity| OperatorDef::from_bits(arity, s).expect("builtin table");
        let entries = [
            ("false", bits("0", 0)),
            ("true", bits("1", 0)),
            ("not", bits("10", 1)),
            ("and", bits("0001", 2)),
            ("or", bits("0111", 2)),
            ("implies", bits("1101", 2)),
            ("iff", bits("1001", 2)),
            ("xor", bits("0110", 2)),
        ]
        .into_iter()
        .map(|(n, d)| (n.to_string(), d))
        .collect();
        OperatorTable {
            entries,
            declared: Vec::new(),
        }
    }

    pub fn declare(&mut self, name: &str, def: OperatorDef) -> Result<(), DeclarationError> {
        if KEYWORDS.contains(&name) || Op::BUILTINS.iter().any(|op| op.name() == name) {
            return Err(DeclarationError::Reserved(name.to_string()));
        }
        if self.entries.contains_key(name) {
            return Err(DeclarationError::Duplicate(name.to_string()));
        }
        self.entries.insert(name.to_string(), def);
        self.declared.push(name.to_string());
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&OperatorDef> {
        self.entries.get(name)
    }

    pub fn def_of(&self, op: &Op) -> Option<&OperatorDef> {
        self.entries.get(op.name())
    }

    pub fn arity(&self, op: &Op) -> Option<usize> {
        op.builtin_arity()
            .or_else(|| self.def_of(op).map(|d| d.arity))
    }

    #[inline]
    pub fn apply(&self, op: &Op, args: &[bool]) -> Option<bool> {
        match op {
            Op::User(name) => self.entries.get(&**name)?.eval(args),
            builtin => builtin.eval_builtin(args),
        }
    }

    /// User declarations in declaration order.
    pub fn user_operators(&self) -> impl Iterator<Item = (&str, &OperatorDef)> + '_ {
        self.declared
            .iter()
            .map(move |n| (n.as_str(), &self.entries[n]))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &OperatorDef)> + '_ {
        self.entries.iter().map(|(n, d)| (n.as_str(), d))
    }
}
