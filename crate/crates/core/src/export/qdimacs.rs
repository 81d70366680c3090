use std::fmt::Write;

use crate::formula::{Formula, Quantifier, Var};
use crate::ops::OperatorTable;

use super::{Circuit, Entry, Export, ExportError, FreeVariables, Gate, Lit, Prefix};

/// Definitional clauses `g ↔ gate`.
fn tseytin(g: Lit, gate: &Gate, clauses: &mut Vec<Vec<Lit>>) {
    match gate {
        Gate::And(ls) => {
            for &l in ls {
                clauses.push(vec![-g, l]);
            }
            let mut long = vec![g];
            long.extend(ls.iter().map(|l| -l));
            clauses.push(long);
        }
        Gate::Or(ls) => {
            for &l in ls {
                clauses.push(vec![g, -l]);
            }
            let mut long = vec![-g];
            long.extend(ls.iter().copied());
            clauses.push(long);
        }
        Gate::Xor(a, b) => {
            clauses.push(vec![-g, *a, *b]);
            clauses.push(vec![-g, -a, -b]);
            clauses.push(vec![g, -a, *b]);
            clauses.push(vec![g, *a, -b]);
        }
    }
}

/// Prenex CNF: the matrix is Tseytin-encoded, the definition variables form
/// the innermost existential block, and a unit clause asserts the output.
pub fn to_qdimacs(
    phi: &Formula,
    ops: &OperatorTable,
    free: FreeVariables,
) -> Result<Export, ExportError> {
    let prefix = Prefix::of(phi, free)?;
    let inputs = prefix.numbering();
    let mut circuit = Circuit::with_inputs(inputs.clone());
    let output = circuit.lower(ops, phi.matrix())?;

    let mut clauses = Vec::new();
    for (g, gate) in circuit.gates() {
        tseytin(*g, gate, &mut clauses);
    }
    clauses.push(vec![output]);

    let id = |v: &Var| circuit.input_id(v).unwrap();
    let mut blocks: Vec<(Quantifier, Vec<Lit>)> = Vec::new();
    for (q, vars) in &prefix.blocks {
        let lits: Vec<Lit> = vars.iter().map(id).collect();
        match blocks.last_mut() {
            Some((last, existing)) if last == q => existing.extend(lits),
            _ => blocks.push((*q, lits)),
        }
    }
    let gate_ids: Vec<Lit> = circuit.gates().iter().map(|(g, _)| *g).collect();
    if !gate_ids.is_empty() {
        match blocks.last_mut() {
            Some((Quantifier::Exists, existing)) => existing.extend(&gate_ids),
            _ => blocks.push((Quantifier::Exists, gate_ids.clone())),
        }
    }

    let mut out = String::new();
    writeln!(out, "p cnf {} {}", circuit.max_index(), clauses.len()).unwrap();
    for (q, lits) in &blocks {
        let tag = match q {
            Quantifier::Exists => 'e',
            Quantifier::Forall => 'a',
        };
        out.push(tag);
        for l in lits {
            write!(out, " {l}").unwrap();
        }
        out.push_str(" 0\n");
    }
    for clause in &clauses {
        for l in clause {
            write!(out, "{l} ").unwrap();
        }
        out.push_str("0\n");
    }

    let mut variables: Vec<Entry> = inputs
        .iter()
        .enumerate()
        .map(|(i, v)| Entry::for_var((i + 1).to_string(), v))
        .collect();
    variables.extend(gate_ids.iter().map(|g| Entry::tseytin(g.to_string())));
    Ok(Export {
        text: out,
        variables,
    })
}
