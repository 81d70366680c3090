//! Quantifier-depth-preserving prenexing and the naive baseline.

mod decompose;
mod naive;
mod prenex;
mod step;

use std::fmt;
use std::str::FromStr;

use crate::formula::{Formula, Quantifier};
use crate::fresh::FreshGen;

pub use decompose::{decompose_outermost, Binding, Decomposition};
pub use naive::{naive_prenex, naive_prenex_with_budget, SizeBudgetExceeded, DEFAULT_BUDGET};
pub use prenex::{prenex, prenex_mc, prenex_mc_parts, prenex_with_copies, McParts};
pub use step::{extract_quantifier, step_transform, ExtractError, StepResult};

/// Which guarantee the output carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Prenex and equisatisfiable.
    Sat,
    /// Prenex and equivalid.
    Valid,
    /// Boolean combination of prenex formulas, equivalent.
    Mc,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Sat, Mode::Valid, Mode::Mc];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Sat => "sat",
            Mode::Valid => "valid",
            Mode::Mc => "mc",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Mode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown mode `{s}` (expected sat, valid or mc)"))
    }
}

pub fn transform(mode: Mode, phi: &Formula, gen: &mut FreshGen) -> Formula {
    match mode {
        Mode::Sat => prenex(Quantifier::Exists, phi, gen),
        Mode::Valid => prenex(Quantifier::Forall, phi, gen),
        Mode::Mc => prenex_mc(phi, gen),
    }
}
