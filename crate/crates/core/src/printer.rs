//! Canonical text form: minimal parentheses, sorted blocks, one space around
//! binary operators. The output parses back to the same formula.

use std::fmt::{self, Write};

use crate::formula::Formula;
use crate::ops::Op;
use crate::parser::Problem;

// Binding strength, loosest first.
const QUANT: u8 = 0;
const IFF: u8 = 1;
const IMP: u8 = 2;
const XOR: u8 = 3;
const OR: u8 = 4;
const AND: u8 = 5;
const NEG: u8 = 6;
const ATOM: u8 = 7;

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Var(_) => ATOM,
        Formula::Quant(..) => QUANT,
        Formula::App(op, args) => match (op, args.len()) {
            (Op::Not, 1) => NEG,
            (Op::And, 2) => AND,
            (Op::Or, 2) => OR,
            (Op::Xor, 2) => XOR,
            (Op::Implies, 2) => IMP,
            (Op::Iff, 2) => IFF,
            _ => ATOM,
        },
    }
}

fn infix(op: &Op) -> Option<(&'static str, bool)> {
    // (symbol, right associative)
    Some(match op {
        Op::And => ("&", false),
        Op::Or => ("|", false),
        Op::Xor => ("xor", false),
        Op::Implies => ("->", true),
        Op::Iff => ("<->", false),
        _ => return None,
    })
}

fn write_child<W: Write>(out: &mut W, f: &Formula, parens: bool) -> fmt::Result {
    if parens {
        out.write_char('(')?;
        write_formula(out, f)?;
        out.write_char(')')
    } else {
        write_formula(out, f)
    }
}

pub fn write_formula<W: Write>(out: &mut W, f: &Formula) -> fmt::Result {
    match f {
        Formula::Var(v) => out.write_str(v.name()),
        Formula::Quant(q, block, body) => {
            out.write_str(q.keyword())?;
            for v in block {
                out.write_char(' ')?;
                out.write_str(v.name())?;
            }
            out.write_str(" . ")?;
            write_formula(out, body)
        }
        Formula::App(op, args) => match (op, args.as_slice()) {
            (Op::True, []) => out.write_str("true"),
            (Op::False, []) => out.write_str("false"),
            (Op::Not, [a]) => {
                out.write_char('~')?;
                write_child(out, a, precedence(a) < NEG)
            }
            (op, [a, b]) if infix(op).is_some() => {
                let (sym, right_assoc) = infix(op).unwrap();
                let p = precedence(f);
                let (left_parens, right_parens) = if right_assoc {
                    (precedence(a) <= p, precedence(b) < p)
                } else {
                    (precedence(a) < p, precedence(b) <= p)
                };
                write_child(out, a, left_parens)?;
                write!(out, " {sym} ")?;
                write_child(out, b, right_parens)
            }
            (op, args) => {
                out.write_str(op.name())?;
                out.write_char('(')?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.write_str(", ")?;
                    }
                    write_formula(out, a)?;
                }
                out.write_char(')')
            }
        },
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self)
    }
}

pub fn print(f: &Formula) -> String {
    f.to_string()
}

/// Declarations, one per line, then the formula.
pub fn print_problem(p: &Problem) -> String {
    let mut out = String::new();
    for d in &p.declarations {
        writeln!(out, "op {}/{} : {} ;", d.name, d.def.arity, d.def.bits()).unwrap();
    }
    writeln!(out, "{}", p.formula).unwrap();
    out
}
