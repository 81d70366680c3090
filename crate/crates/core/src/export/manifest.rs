use std::fmt::{self, Write};

use crate::formula::{Var, RESERVED_CHAR};
use crate::fresh::Role;

/// One emitted variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    /// Number or name as it appears in the output.
    pub emitted: String,
    pub role: Role,
    /// The variable this one stands for, if any.
    pub origin: Option<String>,
    /// Allocation index of generated variables.
    pub index: Option<u64>,
}

impl Entry {
    /// Reads role, origin and index off the naming scheme of generated
    /// variables.
    pub fn for_var(emitted: String, v: &Var) -> Entry {
        let source = || Entry {
            emitted: emitted.clone(),
            role: Role::Source,
            origin: Some(v.name().to_string()),
            index: None,
        };
        let name = v.name();
        let Some(at) = name.rfind(RESERVED_CHAR) else {
            return source();
        };
        let (base, tail) = (&name[..at], &name[at + 1..]);
        let mut chars = tail.chars();
        let (Some(tag), Ok(index)) = (chars.next(), chars.as_str().parse::<u64>()) else {
            return source();
        };
        let role = match (tag, base.is_empty()) {
            ('a', true) => Role::Abbrev,
            ('p', false) => Role::PosCopy,
            ('n', false) => Role::NegCopy,
            ('r', false) => Role::Renamed,
            _ => return source(),
        };
        Entry {
            emitted,
            role,
            origin: (!base.is_empty()).then(|| base.to_string()),
            index: Some(index),
        }
    }

    pub fn tseytin(emitted: String) -> Entry {
        Entry {
            emitted,
            role: Role::Tseytin,
            origin: None,
            index: None,
        }
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}\t{}\t{}\t",
            self.emitted,
            self.role,
            self.origin.as_deref().unwrap_or("-")
        )?;
        match self.index {
            Some(i) => write!(f, "{i}"),
            None => f.write_str("-"),
        }
    }
}

/// Sidecar written next to an export.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Manifest {
    pub mode: String,
    pub format: String,
    pub free: String,
    pub version: String,
    pub input_sha256: String,
    pub entries: Vec<Entry>,
}

impl Manifest {
    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# mode={}", self.mode).unwrap();
        writeln!(out, "# format={}", self.format).unwrap();
        writeln!(out, "# free={}", self.free).unwrap();
        writeln!(out, "# version={}", self.version).unwrap();
        writeln!(out, "# input-sha256={}", self.input_sha256).unwrap();
        for e in &self.entries {
            writeln!(out, "{e}").unwrap();
        }
        out
    }
}
