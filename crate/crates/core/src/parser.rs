//! Reader for `.fqbf` problem files.
//!
//! ```text
//! problem   := decl* formula
//! decl      := "op" NAME "/" INT ":" BITS ";"
//! formula   := quant | iff
//! quant     := ("exists" | "forall") var+ "." formula
//! iff       := imp ("<->" imp)*
//! imp       := xor ("->" imp)?
//! xor       := or ("xor" or)*
//! or        := and ("|" and)*
//! and       := neg ("&" neg)*
//! neg       := "~" neg | atom
//! atom      := "true" | "false" | var | NAME "(" formula ("," formula)* ")" | "(" formula ")"
//! ```
//!
//! `#` starts a comment that runs to the end of the line.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::formula::{Formula, Quantifier, Var, RESERVED_CHAR};
use crate::ops::{DeclarationError, Op, OperatorDef, OperatorTable, KEYWORDS};

/// A user operator declaration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Declaration {
    pub name: String,
    pub def: OperatorDef,
}

/// A parsed input file: operator declarations followed by one formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Problem {
    pub declarations: Vec<Declaration>,
    pub formula: Formula,
}

impl Problem {
    pub fn new(formula: Formula) -> Self {
        Problem {
            declarations: Vec::new(),
            formula,
        }
    }

    pub fn with_declarations(declarations: Vec<Declaration>, formula: Formula) -> Self {
        Problem {
            declarations,
            formula,
        }
    }

    /// Built-ins plus the declarations, which are assumed valid.
    pub fn operators(&self) -> OperatorTable {
        let mut table = OperatorTable::new();
        for d in &self.declarations {
            table
                .declare(&d.name, d.def.clone())
                .expect("problem declarations are validated at construction");
        }
        table
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Accept `@` inside identifiers so generated output can be read back.
    pub allow_internal_names: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("operator `{op}` takes {expected} argument(s), found {found}")]
    ArityMismatch {
        op: String,
        expected: usize,
        found: usize,
    },
    #[error("unknown operator `{0}`")]
    UnknownOperator(String),
    #[error("`{RESERVED_CHAR}` is reserved for generated names")]
    ReservedCharacter,
    #[error("variable `{0}` occurs twice in one quantifier block")]
    DuplicateBlockVariable(String),
    #[error("bad declaration: {0}")]
    Declaration(#[from] DeclarationError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{position}: {kind}")]
pub struct ParseError {
    pub position: Position,
    pub kind: ParseErrorKind,
}

pub fn parse(text: &str) -> Result<Problem, ParseError> {
    parse_with(text, ParseOptions::default())
}

pub fn parse_with(text: &str, options: ParseOptions) -> Result<Problem, ParseError> {
    let tokens = Lexer::new(text, options).tokenize()?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        ops: OperatorTable::new(),
    };
    parser.problem()
}

/// Parses a lone formula; user operators must already be in `ops`.
pub fn parse_formula(
    text: &str,
    ops: &OperatorTable,
    options: ParseOptions,
) -> Result<Formula, ParseError> {
    let tokens = Lexer::new(text, options).tokenize()?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        ops: ops.clone(),
    };
    let f = parser.formula()?;
    parser.expect(&Tok::Eof)?;
    Ok(f)
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Number(String),
    Exists,
    Forall,
    OpKw,
    True,
    False,
    XorKw,
    Iff,
    Arrow,
    Tilde,
    Amp,
    Bar,
    LParen,
    RParen,
    Comma,
    Dot,
    Semi,
    Colon,
    Slash,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "identifier `{s}`"),
            Tok::Number(s) => return write!(f, "number `{s}`"),
            Tok::Exists => "`exists`",
            Tok::Forall => "`forall`",
            Tok::OpKw => "`op`",
            Tok::True => "`true`",
            Tok::False => "`false`",
            Tok::XorKw => "`xor`",
            Tok::Iff => "`<->`",
            Tok::Arrow => "`->`",
            Tok::Tilde => "`~`",
            Tok::Amp => "`&`",
            Tok::Bar => "`|`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::Comma => "`,`",
            Tok::Dot => "`.`",
            Tok::Semi => "`;`",
            Tok::Colon => "`:`",
            Tok::Slash => "`/`",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
    options: ParseOptions,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str, options: ParseOptions) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
            options,
        }
    }

    fn position(&self) -> Position {
        Position {
            line: self.line,
            column: self.column,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn is_ident_char(&self, c: char) -> bool {
        c.is_ascii_alphanumeric()
            || c == '_'
            || (self.options.allow_internal_names && c == RESERVED_CHAR)
    }

    fn tokenize(mut self) -> Result<Vec<(Tok, Position)>, ParseError> {
        let mut out = Vec::new();
        loop {
            while let Some(&c) = self.chars.peek() {
                if c.is_whitespace() {
                    self.bump();
                } else if c == '#' {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                } else {
                    break;
                }
            }
            let at = self.position();
            let Some(c) = self.bump() else {
                out.push((Tok::Eof, at));
                return Ok(out);
            };
            let err = |kind| ParseError { position: at, kind };
            let tok = match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                '.' => Tok::Dot,
                ';' => Tok::Semi,
                ':' => Tok::Colon,
                '/' => Tok::Slash,
                '~' => Tok::Tilde,
                '&' => Tok::Amp,
                '|' => Tok::Bar,
                '-' => {
                    if self.bump() != Some('>') {
                        return Err(err(ParseErrorKind::Syntax("expected `->`".into())));
                    }
                    Tok::Arrow
                }
                '<' => {
                    if self.bump() != Some('-') || self.bump() != Some('>') {
                        return Err(err(ParseErrorKind::Syntax("expected `<->`".into())));
                    }
                    Tok::Iff
                }
                c if c.is_ascii_digit() => {
                    let mut s = String::from(c);
                    while let Some(&d) = self.chars.peek() {
                        if !d.is_ascii_digit() {
                            break;
                        }
                        s.push(d);
                        self.bump();
                    }
                    Tok::Number(s)
                }
                c if c.is_ascii_alphabetic()
                    || c == '_'
                    || (c == RESERVED_CHAR && self.options.allow_internal_names) =>
                {
                    let mut s = String::from(c);
                    while let Some(&d) = self.chars.peek() {
                        if !self.is_ident_char(d) {
                            break;
                        }
                        s.push(d);
                        self.bump();
                    }
                    if self.chars.peek() == Some(&RESERVED_CHAR) {
                        return Err(ParseError {
                            position: self.position(),
                            kind: ParseErrorKind::ReservedCharacter,
                        });
                    }
                    match s.as_str() {
                        "exists" => Tok::Exists,
                        "forall" => Tok::Forall,
                        "op" => Tok::OpKw,
                        "true" => Tok::True,
                        "false" => Tok::False,
                        "xor" => Tok::XorKw,
                        _ => Tok::Ident(s),
                    }
                }
                RESERVED_CHAR => return Err(err(ParseErrorKind::ReservedCharacter)),
                other => {
                    return Err(err(ParseErrorKind::Syntax(format!(
                        "unexpected character `{other}`"
                    ))))
                }
            };
            out.push((tok, at));
        }
    }
}

struct Parser {
    tokens: Vec<(Tok, Position)>,
    pos: usize,
    ops: OperatorTable,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].0
    }

    fn here(&self) -> Position {
        self.tokens[self.pos].1
    }

    fn advance(&mut self) -> Tok {
        let t = self.tokens[self.pos].0.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, kind: ParseErrorKind) -> Result<T, ParseError> {
        Err(ParseError {
            position: self.here(),
            kind,
        })
    }

    fn unexpected<T>(&self, wanted: &str) -> Result<T, ParseError> {
        self.error(ParseErrorKind::Syntax(format!(
            "expected {wanted}, found {}",
            self.peek()
        )))
    }

    fn expect(&mut self, tok: &Tok) -> Result<(), ParseError> {
        if self.peek() == tok {
            self.advance();
            Ok(())
        } else {
            self.unexpected(&tok.to_string())
        }
    }

    fn problem(&mut self) -> Result<Problem, ParseError> {
        let mut declarations = Vec::new();
        while self.peek() == &Tok::OpKw {
            declarations.push(self.declaration()?);
        }
        let formula = self.formula()?;
        self.expect(&Tok::Eof)?;
        Ok(Problem {
            declarations,
            formula,
        })
    }

    fn declaration(&mut self) -> Result<Declaration, ParseError> {
        self.expect(&Tok::OpKw)?;
        let start = self.here();
        let Tok::Ident(name) = self.peek().clone() else {
            return self.unexpected("operator name");
        };
        self.advance();
        self.expect(&Tok::Slash)?;
        let Tok::Number(arity) = self.peek().clone() else {
            return self.unexpected("arity");
        };
        let Ok(arity) = arity.parse::<usize>() else {
            return self.error(ParseErrorKind::Syntax(format!(
                "arity `{arity}` out of range"
            )));
        };
        self.advance();
        self.expect(&Tok::Colon)?;
        let Tok::Number(bits) = self.peek().clone() else {
            return self.unexpected("truth table bits");
        };
        let def = match OperatorDef::from_bits(arity, &bits) {
            Ok(def) => def,
            Err(e) => return self.error(e.into()),
        };
        self.advance();
        self.expect(&Tok::Semi)?;
        self.ops
            .declare(&name, def.clone())
            .map_err(|e| ParseError {
                position: start,
                kind: e.into(),
            })?;
        Ok(Declaration { name, def })
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let q = match self.peek() {
            Tok::Exists => Quantifier::Exists,
            Tok::Forall => Quantifier::Forall,
            _ => return self.iff(),
        };
        self.advance();
        let mut block = BTreeSet::new();
        loop {
            match self.peek().clone() {
                Tok::Ident(name) => {
                    if !block.insert(Var::new(&name)) {
                        return self.error(ParseErrorKind::DuplicateBlockVariable(name));
                    }
                    self.advance();
                }
                Tok::Dot if !block.is_empty() => break,
                _ => return self.unexpected("quantified variable"),
            }
        }
        self.expect(&Tok::Dot)?;
        let body = self.formula()?;
        Ok(Formula::quant(q, block, body))
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.imp()?;
        while self.peek() == &Tok::Iff {
            self.advance();
            let rhs = self.imp()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.xor()?;
        if self.peek() == &Tok::Arrow {
            self.advance();
            let rhs = self.imp()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn xor(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.or()?;
        while self.peek() == &Tok::XorKw {
            self.advance();
            lhs = Formula::xor(lhs, self.or()?);
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.peek() == &Tok::Bar {
            self.advance();
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.neg()?;
        while self.peek() == &Tok::Amp {
            self.advance();
            lhs = Formula::and(lhs, self.neg()?);
        }
        Ok(lhs)
    }

    fn neg(&mut self) -> Result<Formula, ParseError> {
        if self.peek() == &Tok::Tilde {
            self.advance();
            return Ok(Formula::not(self.neg()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let at = self.here();
        match self.advance() {
            Tok::True => Ok(Formula::top()),
            Tok::False => Ok(Formula::bot()),
            Tok::LParen => {
                let f = self.formula()?;
                self.expect(&Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(name) => {
                if self.peek() != &Tok::LParen {
                    return Ok(Formula::Var(Var::new(&name)));
                }
                self.advance();
                let mut args = Vec::new();
                if self.peek() != &Tok::RParen {
                    args.push(self.formula()?);
                    while self.peek() == &Tok::Comma {
                        self.advance();
                        args.push(self.formula()?);
                    }
                }
                self.expect(&Tok::RParen)?;
                let Some(def) = self.ops.get(&name).filter(|_| !is_builtin_name(&name)) else {
                    return Err(ParseError {
                        position: at,
                        kind: ParseErrorKind::UnknownOperator(name),
                    });
                };
                if def.arity != args.len() {
                    return Err(ParseError {
                        position: at,
                        kind: ParseErrorKind::ArityMismatch {
                            op: name,
                            expected: def.arity,
                            found: args.len(),
                        },
                    });
                }
                Ok(Formula::App(Op::user(&name), args))
            }
            other => Err(ParseError {
                position: at,
                kind: ParseErrorKind::Syntax(format!("expected formula, found {other}")),
            }),
        }
    }
}

fn is_builtin_name(name: &str) -> bool {
    Op::BUILTINS.iter().any(|op| op.name() == name) || KEYWORDS.contains(&name)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(name: &str) -> Formula {
        Formula::var(name)
    }

    fn formula(text: &str) -> Formula {
        parse(text).unwrap().formula
    }

    #[test]
    fn multi_variable_block_is_one_block() {
        let f = formula("exists x y . x -> p");
        assert_eq!(
            f,
            Formula::exists(["x", "y"], Formula::implies(v("x"), v("p")))
        );
        assert_eq!(f.length(), 6);
    }

    #[test]
    fn user_operator_declaration() {
        let p = parse("op maj/3 : 00010111 ; maj(p,q,r)").unwrap();
        assert_eq!(
            p.formula,
            Formula::App(Op::user("maj"), vec![v("p"), v("q"), v("r")])
        );
        let ops = p.operators();
        for row in 0..8usize {
            let args = [row & 4 != 0, row & 2 != 0, row & 1 != 0];
            let expected = args.iter().filter(|&&b| b).count() >= 2;
            assert_eq!(ops.apply(&Op::user("maj"), &args), Some(expected));
        }
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(
            formula("a & b | c"),
            Formula::or(Formula::and(v("a"), v("b")), v("c"))
        );
        assert_eq!(
            formula("a -> b -> c"),
            Formula::implies(v("a"), Formula::implies(v("b"), v("c")))
        );
        assert_eq!(
            formula("a <-> b <-> c"),
            Formula::iff(Formula::iff(v("a"), v("b")), v("c"))
        );
        assert_eq!(
            formula("a xor b <-> c | d"),
            Formula::iff(Formula::xor(v("a"), v("b")), Formula::or(v("c"), v("d")))
        );
        assert_eq!(formula("~~a"), Formula::not(Formula::not(v("a"))));
        // quantifier scope extends as far right as possible
        assert_eq!(
            formula("exists x . x & y"),
            Formula::exists(["x"], Formula::and(v("x"), v("y")))
        );
    }

    #[test]
    fn comments_and_constants() {
        let f = formula("# header\nexists x . x & ~x # unsat body\n");
        assert_eq!(
            f,
            Formula::exists(["x"], Formula::and(v("x"), Formula::not(v("x"))))
        );
        assert_eq!(
            formula("true | false"),
            Formula::or(Formula::top(), Formula::bot())
        );
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("a &\n  & b").unwrap_err();
        assert_eq!(e.position, Position { line: 2, column: 3 });
        assert!(matches!(e.kind, ParseErrorKind::Syntax(_)));

        let e = parse("op f/2 : 0110 ; f(a)").unwrap_err();
        assert!(matches!(
            e.kind,
            ParseErrorKind::ArityMismatch {
                expected: 2,
                found: 1,
                ..
            }
        ));

        let e = parse("g(a)").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownOperator("g".into()));

        let e = parse("x@p1 & y").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::ReservedCharacter);
        assert_eq!(e.position, Position { line: 1, column: 2 });

        let e = parse("exists x x . x").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::DuplicateBlockVariable("x".into()));

        let e = parse("op f/2 : 011 ; f(a, b)").unwrap_err();
        assert!(matches!(
            e.kind,
            ParseErrorKind::Declaration(DeclarationError::TableLength { .. })
        ));

        let e = parse("op f/1 : 01 ; op f/1 : 10 ; f(a)").unwrap_err();
        assert!(matches!(
            e.kind,
            ParseErrorKind::Declaration(DeclarationError::Duplicate(_))
        ));

        assert!(parse("and(a, b)").is_err());
        assert!(parse("exists . a").is_err());
    }

    #[test]
    fn internal_names_behind_flag() {
        let opts = ParseOptions {
            allow_internal_names: true,
        };
        let p = parse_with("forall x@n1 . exists @a1 . @a1 <-> x@n1", opts).unwrap();
        assert_eq!(
            p.formula,
            Formula::forall(
                ["x@n1"],
                Formula::exists(["@a1"], Formula::iff(v("@a1"), v("x@n1")))
            )
        );
    }
}
