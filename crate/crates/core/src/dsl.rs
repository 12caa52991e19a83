//! A small language for exact rational sequences.
//!
//! ```text
//! expr   := sum
//! sum    := prod (('+' | '-') prod)*
//! prod   := unary (('*' | '/') unary)*
//! unary  := '-' unary | atom
//! atom   := number | var | call | '(' expr ')'
//! call   := name '(' args ')'          pow, min, max, abs, floor, ceil, fact, ite
//! ite    := 'ite' '(' expr cmp expr ',' expr ',' expr ')'    cmp ∈ {<, <=, ≤, =}
//! var    := 'm1' | 'm2' | …
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::encodings::Rational;
use crate::error::{Error, Result};
use crate::exact_real::{factorial, EffectiveSequence, Provenance};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Lt,
    Le,
    Eq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Pow,
    Min,
    Max,
    Abs,
    Floor,
    Ceil,
    Fact,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "pow" => Func::Pow,
            "min" => Func::Min,
            "max" => Func::Max,
            "abs" => Func::Abs,
            "floor" => Func::Floor,
            "ceil" => Func::Ceil,
            "fact" => Func::Fact,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Func::Pow => "pow",
            Func::Min => "min",
            Func::Max => "max",
            Func::Abs => "abs",
            Func::Floor => "floor",
            Func::Ceil => "ceil",
            Func::Fact => "fact",
        }
    }

    fn arity(self) -> usize {
        match self {
            Func::Pow | Func::Min | Func::Max => 2,
            Func::Abs | Func::Floor | Func::Ceil | Func::Fact => 1,
        }
    }
}

/// Expression node; `column` is the 1-based position used in evaluation errors
/// and is ignored by equality.
#[derive(Clone, Debug)]
pub struct Expr {
    pub kind: ExprKind,
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Num(Rational),
    /// `m_i` with `i ≥ 1`.
    Var(usize),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
    Ite {
        cmp: Cmp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
        then: Box<Expr>,
        other: Box<Expr>,
    },
}

impl Expr {
    /// Column of the leftmost token of the expression.
    pub fn start_column(&self) -> usize {
        match &self.kind {
            ExprKind::Bin(_, a, _) => a.start_column(),
            _ => self.column,
        }
    }
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Num(q) => write_literal(f, q),
            ExprKind::Var(i) => write!(f, "m{i}"),
            ExprKind::Neg(e) => write!(f, "(-{e})"),
            ExprKind::Bin(op, a, b) => {
                let sym = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                };
                write!(f, "({a} {sym} {b})")
            }
            ExprKind::Call(func, args) => {
                let args: Vec<String> = args.iter().map(ToString::to_string).collect();
                write!(f, "{}({})", func.name(), args.join(", "))
            }
            ExprKind::Ite { cmp, lhs, rhs, then, other } => {
                let sym = match cmp {
                    Cmp::Lt => "<",
                    Cmp::Le => "<=",
                    Cmp::Eq => "=",
                };
                write!(f, "ite({lhs} {sym} {rhs}, {then}, {other})")
            }
        }
    }
}

/// Writes a literal so that it re-parses to the same node: integers as is,
/// terminating decimals in positional form, anything else as a quotient.
fn write_literal(f: &mut fmt::Formatter<'_>, q: &Rational) -> fmt::Result {
    if q.is_negative() {
        f.write_str("(-")?;
        write_literal(f, &-q)?;
        return f.write_str(")");
    }
    if q.is_integer() {
        return write!(f, "{q}");
    }
    let ten = BigInt::from(10);
    let mut scale = BigInt::one();
    for digits in 1..=64usize {
        scale *= &ten;
        if (&scale % q.denom()).is_zero() {
            let n = q.numer() * (&scale / q.denom());
            let s = format!("{:0>width$}", n, width = digits + 1);
            let (int, frac) = s.split_at(s.len() - digits);
            return write!(f, "{int}.{frac}");
        }
    }
    write!(f, "({q})")
}

/// A parsed sequence specification.
#[derive(Clone, Debug, PartialEq)]
pub struct SeqSpec {
    pub text: String,
    pub expr: Expr,
    /// Largest variable index used (0 for constants).
    pub arity: usize,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Sym(&'static str),
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(char::is_ascii_digit)) {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            let q = parse_decimal(&s).ok_or_else(|| Error::Parse {
                line: tl,
                column: tc,
                message: format!("bad number `{s}`"),
            })?;
            out.push(Token { tok: Tok::Num(q), line: tl, column: tc });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), line: tl, column: tc });
            continue;
        }
        let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        let sym: &'static str = match (c, two.as_str()) {
            (_, "<=") => "<=",
            ('≤', _) => "<=",
            ('+', _) => "+",
            ('-', _) => "-",
            ('*', _) => "*",
            ('/', _) => "/",
            ('(', _) => "(",
            (')', _) => ")",
            (',', _) => ",",
            ('<', _) => "<",
            ('=', _) => "=",
            _ => return Err(Error::Parse { line: tl, column: tc, message: format!("unexpected character `{c}`") }),
        };
        let width = if two == "<=" { 2 } else { 1 };
        i += width;
        col += width;
        out.push(Token { tok: Tok::Sym(sym), line: tl, column: tc });
    }
    out.push(Token { tok: Tok::End, line, column: col });
    Ok(out)
}

fn parse_decimal(s: &str) -> Option<Rational> {
    match s.split_once('.') {
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
        Some((int, frac)) => {
            if frac.contains('.') {
                return None;
            }
            let digits: BigInt = format!("{int}{frac}").parse().ok()?;
            Some(Rational::new(digits, BigInt::from(10u32).pow(frac.len() as u32)))
        }
    }
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    max_var: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, t: &Token, message: impl Into<String>) -> Error {
        Error::Parse { line: t.line, column: t.column, message: message.into() }
    }

    fn expect(&mut self, sym: &str) -> Result<Token> {
        let t = self.bump();
        match &t.tok {
            Tok::Sym(s) if *s == sym => Ok(t),
            Tok::End => Err(self.error(&t, format!("expected `{sym}`, found end of input"))),
            _ => Err(self.error(&t, format!("expected `{sym}`"))),
        }
    }

    fn is_sym(&self, sym: &str) -> bool {
        matches!(&self.peek().tok, Tok::Sym(s) if *s == sym)
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut lhs = self.prod()?;
        while self.is_sym("+") || self.is_sym("-") {
            let t = self.bump();
            let op = if t.tok == Tok::Sym("+") { BinOp::Add } else { BinOp::Sub };
            let rhs = self.prod()?;
            lhs = Expr { kind: ExprKind::Bin(op, Box::new(lhs), Box::new(rhs)), column: t.column };
        }
        Ok(lhs)
    }

    fn prod(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while self.is_sym("*") || self.is_sym("/") {
            let t = self.bump();
            let op = if t.tok == Tok::Sym("*") { BinOp::Mul } else { BinOp::Div };
            let rhs = self.unary()?;
            lhs = Expr { kind: ExprKind::Bin(op, Box::new(lhs), Box::new(rhs)), column: t.column };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.is_sym("-") {
            let t = self.bump();
            let e = self.unary()?;
            return Ok(Expr { kind: ExprKind::Neg(Box::new(e)), column: t.column });
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr> {
        let t = self.bump();
        match &t.tok {
            Tok::Num(q) => Ok(Expr { kind: ExprKind::Num(q.clone()), column: t.column }),
            Tok::Sym("(") => {
                let e = self.sum()?;
                self.expect(")")?;
                Ok(e)
            }
            Tok::Ident(name) => self.ident(name.clone(), &t),
            Tok::End => Err(self.error(&t, "unexpected end of input")),
            Tok::Sym(s) => Err(self.error(&t, format!("unexpected `{s}`"))),
        }
    }

    fn ident(&mut self, name: String, t: &Token) -> Result<Expr> {
        if let Some(i) = name.strip_prefix('m').and_then(|d| d.parse::<usize>().ok()).filter(|&i| i >= 1) {
            self.max_var = self.max_var.max(i);
            return Ok(Expr { kind: ExprKind::Var(i), column: t.column });
        }
        if name == "ite" {
            self.expect("(")?;
            let lhs = self.sum()?;
            let ct = self.bump();
            let cmp = match ct.tok {
                Tok::Sym("<") => Cmp::Lt,
                Tok::Sym("<=") => Cmp::Le,
                Tok::Sym("=") => Cmp::Eq,
                _ => return Err(self.error(&ct, "expected a comparison `<`, `<=` or `=`")),
            };
            let rhs = self.sum()?;
            self.expect(",")?;
            let then = self.sum()?;
            self.expect(",")?;
            let other = self.sum()?;
            self.expect(")")?;
            return Ok(Expr {
                kind: ExprKind::Ite {
                    cmp,
                    lhs: Box::new(lhs),
                    rhs: Box::new(rhs),
                    then: Box::new(then),
                    other: Box::new(other),
                },
                column: t.column,
            });
        }
        let func = Func::from_name(&name).ok_or_else(|| self.error(t, format!("unknown identifier `{name}`")))?;
        self.expect("(")?;
        let mut args = vec![self.sum()?];
        while self.is_sym(",") {
            self.bump();
            args.push(self.sum()?);
        }
        let close = self.expect(")")?;
        if args.len() != func.arity() {
            return Err(Error::Parse {
                line: close.line,
                column: close.column,
                message: format!("`{name}` takes {} argument(s), got {}", func.arity(), args.len()),
            });
        }
        Ok(Expr { kind: ExprKind::Call(func, args), column: t.column })
    }
}

/// Parses a sequence expression.
pub fn parse_seq_dsl(text: &str) -> Result<SeqSpec> {
    let mut p = Parser { toks: tokenize(text)?, pos: 0, max_var: 0 };
    let expr = p.sum()?;
    let t = p.peek().clone();
    if t.tok != Tok::End {
        return Err(p.error(&t, "unexpected trailing input"));
    }
    Ok(SeqSpec { text: text.to_string(), expr, arity: p.max_var })
}

fn natural(q: &Rational, column: usize, what: &str) -> Result<u64> {
    if !q.is_integer() || q.is_negative() {
        return Err(Error::Eval { column, message: format!("{what} must be a natural number, got {q}") });
    }
    q.to_integer()
        .to_u64()
        .filter(|&v| v <= 1 << 20)
        .ok_or_else(|| Error::Eval { column, message: format!("{what} {q} is too large") })
}

fn eval(e: &Expr, index: &[u64]) -> Result<Rational> {
    Ok(match &e.kind {
        ExprKind::Num(q) => q.clone(),
        ExprKind::Var(i) => {
            let v = index.get(i - 1).ok_or_else(|| Error::Eval {
                column: e.column,
                message: format!("variable m{i} needs an index of arity {i}, got {}", index.len()),
            })?;
            Rational::from_integer(BigInt::from(*v))
        }
        ExprKind::Neg(a) => -eval(a, index)?,
        ExprKind::Bin(op, a, b) => {
            let (x, y) = (eval(a, index)?, eval(b, index)?);
            match op {
                BinOp::Add => x + y,
                BinOp::Sub => x - y,
                BinOp::Mul => x * y,
                BinOp::Div => {
                    if y.is_zero() {
                        return Err(Error::Eval { column: e.column, message: "division by zero".into() });
                    }
                    x / y
                }
            }
        }
        ExprKind::Call(func, args) => {
            let vals = args.iter().map(|a| eval(a, index)).collect::<Result<Vec<_>>>()?;
            match func {
                Func::Pow => {
                    let k = natural(&vals[1], args[1].start_column(), "exponent")?;
                    num_traits::pow::pow(vals[0].clone(), k as usize)
                }
                Func::Min => vals[0].clone().min(vals[1].clone()),
                Func::Max => vals[0].clone().max(vals[1].clone()),
                Func::Abs => vals[0].abs(),
                Func::Floor => vals[0].floor(),
                Func::Ceil => vals[0].ceil(),
                Func::Fact => {
                    let k = natural(&vals[0], args[0].start_column(), "factorial argument")?;
                    Rational::from_integer(BigInt::from(factorial(k)))
                }
            }
        }
        ExprKind::Ite { cmp, lhs, rhs, then, other } => {
            let (x, y) = (eval(lhs, index)?, eval(rhs, index)?);
            let holds = match cmp {
                Cmp::Lt => x < y,
                Cmp::Le => x <= y,
                Cmp::Eq => x == y,
            };
            if holds {
                eval(then, index)?
            } else {
                eval(other, index)?
            }
        }
    })
}

impl SeqSpec {
    pub fn eval(&self, index: &[u64]) -> Result<Rational> {
        eval(&self.expr, index)
    }

    /// Canonical fully parenthesized form.
    pub fn pretty(&self) -> String {
        self.expr.to_string()
    }

    /// Evaluates every index in `[0, bound]^arity` to surface evaluation errors.
    pub fn check(&self, arity: usize, bound: u64) -> Result<()> {
        if self.arity > arity {
            return Err(Error::InvalidArgument(format!(
                "expression uses m{} but the sequence has arity {arity}",
                self.arity
            )));
        }
        let total = (bound + 1).checked_pow(arity as u32).unwrap_or(u64::MAX);
        let mut idx = vec![0u64; arity];
        for mut code in 0..total.min(1 << 16) {
            for slot in idx.iter_mut() {
                *slot = code % (bound + 1);
                code /= bound + 1;
            }
            self.eval(&idx)?;
        }
        Ok(())
    }

    /// The sequence of the given arity. Evaluation errors at indices not covered by
    /// [`SeqSpec::check`] panic.
    pub fn to_sequence(&self, arity: usize) -> Result<EffectiveSequence> {
        if self.arity > arity {
            return Err(Error::InvalidArgument(format!(
                "expression uses m{} but the sequence has arity {arity}",
                self.arity
            )));
        }
        let spec = self.clone();
        Ok(EffectiveSequence::new(arity, Provenance::Expression(self.text.clone()), move |i| {
            spec.eval(i).unwrap_or_else(|e| panic!("sequence `{}` failed at {i:?}: {e}", spec.text))
        }))
    }
}
