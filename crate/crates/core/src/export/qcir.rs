use std::fmt::Write;

use crate::formula::Formula;
use crate::ops::OperatorTable;

use super::{Circuit, Entry, Export, ExportError, FreeVariables, Gate, Lit, Prefix};

fn list(lits: &[Lit]) -> String {
    lits.iter()
        .map(Lit::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

/// Cleansed prenex QCIR-G14. Variables are numbered from 1 (free ones
/// first, then in prefix order) and gates follow them.
pub fn to_qcir(
    phi: &Formula,
    ops: &OperatorTable,
    free: FreeVariables,
) -> Result<Export, ExportError> {
    let prefix = Prefix::of(phi, free)?;
    let inputs = prefix.numbering();
    let mut circuit = Circuit::with_inputs(inputs.clone());
    let output = circuit.lower(ops, phi.matrix())?;
    let id = |v| circuit.input_id(v).unwrap();

    let mut out = String::new();
    writeln!(out, "#QCIR-G14 {}", circuit.max_index()).unwrap();
    if !prefix.binds_free() && !prefix.free.is_empty() {
        let lits: Vec<Lit> = prefix.free.iter().map(id).collect();
        writeln!(out, "free({})", list(&lits)).unwrap();
    }
    for (q, vars) in &prefix.blocks {
        let lits: Vec<Lit> = vars.iter().map(id).collect();
        writeln!(out, "{}({})", q.keyword(), list(&lits)).unwrap();
    }
    writeln!(out, "output({output})").unwrap();
    for (g, gate) in circuit.gates() {
        match gate {
            Gate::And(ls) => writeln!(out, "{g} = and({})", list(ls)),
            Gate::Or(ls) => writeln!(out, "{g} = or({})", list(ls)),
            Gate::Xor(a, b) => writeln!(out, "{g} = xor({a}, {b})"),
        }
        .unwrap();
    }
    let variables = inputs
        .iter()
        .enumerate()
        .map(|(i, v)| Entry::for_var((i + 1).to_string(), v))
        .collect();
    Ok(Export {
        text: out,
        variables,
    })
}
