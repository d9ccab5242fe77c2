//! Text syntax for formulas and terms.
//!
//! ```text
//! formula := atom | Const | "T" "[" (formula | Const) "]" | term "in" term
//!          | "~" formula | formula "&" formula | formula "|" formula
//!          | formula "->" formula | formula "<->" formula | "(" formula ")"
//! term    := var | Const | "{" var "|" formula "}" | "[" formula "]"
//! ```
//!
//! Precedence, tightest first: `in`, `~`, `&`, `|`, `->` (right
//! associative), `<->` (right associative). `&` and `|` associate to the
//! left.

use crate::error::ParseError;
use crate::formula::{is_const_name, Formula, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    In,
    LParen,
    RParen,
    LBrack,
    RBrack,
    LBrace,
    RBrace,
    Bar,
    Tilde,
    Amp,
    Arrow,
    DArrow,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::In => "`in`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::DArrow => "`<->`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

/// Words that may not be used as identifiers. `by` separates a judgment
/// from its justification in proof scripts.
const RESERVED: &[&str] = &["in", "by"];

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let start = (line, col);
        let simple = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBrack),
            ']' => Some(Tok::RBrack),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '|' => Some(Tok::Bar),
            '~' => Some(Tok::Tilde),
            '&' => Some(Tok::Amp),
            _ => None,
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if let Some(tok) = simple {
            out.push(Token { tok, line, col });
            i += 1;
            col += 1;
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push(Token { tok: Tok::Arrow, line, col });
            i += 2;
            col += 2;
            continue;
        }
        if c == '<' && chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') {
            out.push(Token { tok: Tok::DArrow, line, col });
            i += 3;
            col += 3;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let begin = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[begin..i].iter().collect();
            col += i - begin;
            let tok = match word.as_str() {
                "in" => Tok::In,
                w if RESERVED.contains(&w) => {
                    return Err(ParseError::new(start.0, start.1, format!("`{w}` is a reserved word")));
                }
                _ => Tok::Ident(word),
            };
            out.push(Token {
                tok,
                line: start.0,
                col: start.1,
            });
            continue;
        }
        return Err(ParseError::new(line, col, format!("unexpected character `{c}`")));
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.pos + n).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError::new(line, col, message)
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected {}, found {}", want.describe(), self.peek().describe())))
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Eof => Ok(()),
            t => Err(self.error(format!("unexpected {} after end of formula", t.describe()))),
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.imp()?;
        if *self.peek() == Tok::DArrow {
            self.bump();
            let rhs = self.iff()?;
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.imp()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.and()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            acc = Formula::or(acc, self.and()?);
        }
        Ok(acc)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if *self.peek() == Tok::Tilde {
            self.bump();
            return Ok(Formula::not(self.unary()?));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.iff()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(name) if name == "T" => {
                if *self.peek_at(1) != Tok::LBrack {
                    return Err(self.error("`T` is reserved for the truth predicate"));
                }
                self.bump();
                self.bump();
                let arg = match (self.peek().clone(), self.peek_at(1)) {
                    (Tok::Ident(c), Tok::RBrack) if is_const_name(&c) && c != "T" => {
                        self.bump();
                        Term::Const(c)
                    }
                    _ => self.quotation()?,
                };
                self.expect(Tok::RBrack)?;
                Ok(Formula::truth(arg))
            }
            Tok::Ident(name) => {
                if *self.peek_at(1) == Tok::In {
                    let lhs = self.term()?;
                    return self.membership(lhs);
                }
                self.bump();
                if is_const_name(&name) {
                    Ok(Formula::Const(name))
                } else {
                    Ok(Formula::Atom(name))
                }
            }
            Tok::LBrace | Tok::LBrack => {
                let lhs = self.term()?;
                self.membership(lhs)
            }
            t => Err(self.error(format!("expected a formula, found {}", t.describe()))),
        }
    }

    fn membership(&mut self, lhs: Term) -> Result<Formula, ParseError> {
        self.expect(Tok::In)?;
        let rhs = self.term()?;
        Ok(Formula::member(lhs, rhs))
    }

    /// Parses a formula that is about to be quoted and checks it is closed.
    fn quotation(&mut self) -> Result<Term, ParseError> {
        let (line, col) = self.here();
        let f = self.iff()?;
        if let Some(x) = f.free_vars().into_iter().next() {
            return Err(ParseError::new(
                line,
                col,
                format!("unbound variable `{x}` inside quotation"),
            ));
        }
        Ok(Term::Quote(Box::new(f)))
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) if name == "T" => Err(self.error("`T` is reserved for the truth predicate")),
            Tok::Ident(name) => {
                self.bump();
                if is_const_name(&name) {
                    Ok(Term::Const(name))
                } else {
                    Ok(Term::Var(name))
                }
            }
            Tok::LBrace => {
                self.bump();
                let bound = match self.bump() {
                    Tok::Ident(x) if !is_const_name(&x) => x,
                    _ => {
                        self.pos -= 1;
                        return Err(self.error("expected a lowercase variable after `{`"));
                    }
                };
                self.expect(Tok::Bar)?;
                let body = self.iff()?;
                self.expect(Tok::RBrace)?;
                Ok(Term::SetAbs(bound, Box::new(body)))
            }
            Tok::LBrack => {
                self.bump();
                let q = self.quotation()?;
                self.expect(Tok::RBrack)?;
                Ok(q)
            }
            t => Err(self.error(format!("expected a term, found {}", t.describe()))),
        }
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let f = p.iff()?;
    p.finish()?;
    Ok(f)
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

// Display levels; higher binds tighter.
const IFF: u8 = 0;
const IMP: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const NOT: u8 = 4;
const ATOM: u8 = 5;

fn level(f: &Formula) -> u8 {
    match f {
        Formula::And(..) if f.as_iff().is_some() => IFF,
        Formula::And(..) => AND,
        Formula::Imp(..) => IMP,
        Formula::Or(..) => OR,
        Formula::Not(_) => NOT,
        _ => ATOM,
    }
}

fn render_at(f: &Formula, min: u8, out: &mut String) {
    let wrap = level(f) < min;
    if wrap {
        out.push('(');
    }
    render_bare(f, out);
    if wrap {
        out.push(')');
    }
}

fn render_bare(f: &Formula, out: &mut String) {
    let binary = |l: &Formula, op: &str, r: &Formula, lmin: u8, rmin: u8, out: &mut String| {
        render_at(l, lmin, out);
        out.push_str(op);
        render_at(r, rmin, out);
    };
    match f {
        Formula::Atom(a) | Formula::Const(a) => out.push_str(a),
        Formula::Truth(t) => {
            out.push_str("T[");
            match &**t {
                Term::Const(c) => out.push_str(c),
                // a bare name here would read back as the constant term
                Term::Quote(q) if matches!(**q, Formula::Const(_)) => {
                    out.push('(');
                    render_bare(q, out);
                    out.push(')');
                }
                Term::Quote(q) => render_bare(q, out),
                other => term_into(other, out),
            }
            out.push(']');
        }
        Formula::Member(l, r) => {
            term_into(l, out);
            out.push_str(" in ");
            term_into(r, out);
        }
        Formula::Not(g) => {
            out.push('~');
            render_at(g, NOT, out);
        }
        Formula::And(..) if f.as_iff().is_some() => {
            let (a, b) = f.as_iff().unwrap();
            binary(a, " <-> ", b, IMP, IFF, out);
        }
        Formula::And(l, r) => binary(l, " & ", r, AND, NOT, out),
        Formula::Or(l, r) => binary(l, " | ", r, OR, AND, out),
        Formula::Imp(l, r) => binary(l, " -> ", r, OR, IMP, out),
    }
}

fn term_into(t: &Term, out: &mut String) {
    match t {
        Term::Var(x) | Term::Const(x) => out.push_str(x),
        Term::SetAbs(x, body) => {
            out.push('{');
            out.push_str(x);
            out.push_str(" | ");
            render_bare(body, out);
            out.push('}');
        }
        Term::Quote(f) => {
            out.push('[');
            render_bare(f, out);
            out.push(']');
        }
    }
}

/// Renders with the fewest parentheses the grammar allows. Biconditional
/// shapes are written back as `<->`.
pub fn render_formula(f: &Formula) -> String {
    let mut out = String::new();
    render_bare(f, &mut out);
    out
}

pub fn render_term(t: &Term) -> String {
    let mut out = String::new();
    term_into(t, &mut out);
    out
}
