//! Prenexing for quantified boolean formulas with arbitrary boolean
//! operators.
//!
//! The main entry points are [`transform::prenex`] and
//! [`transform::prenex_mc`]: they move every quantifier to the front in
//! polynomial size without raising quantifier depth, even under `↔`, `⊕` and
//! user-declared truth-table operators. [`semantics::Oracle`] decides the
//! results exactly on small inputs, and [`export`] writes them in solver
//! formats.

pub mod cli;
pub mod export;
pub mod formula;
pub mod fresh;
pub mod gen;
pub mod ops;
pub mod parser;
pub mod printer;
pub mod semantics;
pub mod subst;
pub mod transform;

pub use formula::{Block, Formula, Quantifier, Var};
pub use fresh::FreshGen;
pub use ops::{Op, OperatorDef, OperatorTable};
pub use parser::{parse, parse_with, ParseError, ParseOptions, Problem};
pub use printer::{print, print_problem};
pub use semantics::{Engine, Oracle, SemanticsError, Valuation};
pub use subst::{substitute, CaptureError, Substitution};
pub use transform::{transform, Mode};
