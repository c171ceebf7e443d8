//! Pratt parser for expressions over declared symbols.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::FrontendError;
use crate::symbolic::{Expr, MultiIndex, Names, Q};

/// Symbols an expression may mention.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Declarations {
    pub names: Names,
    pub constants: Vec<String>,
    /// Opaque functions with their arity.
    pub functions: Vec<(String, usize)>,
}

impl Declarations {
    pub fn new(indep: &[&str], dep: &[&str], aux: &[&str]) -> Self {
        Declarations {
            names: Names::new(indep.iter().copied(), dep.iter().copied(), aux.iter().copied()),
            ..Default::default()
        }
    }

    pub fn with_constants(mut self, c: &[&str]) -> Self {
        self.constants.extend(c.iter().map(|s| s.to_string()));
        self
    }

    pub fn with_function(mut self, name: &str, arity: usize) -> Self {
        self.functions.push((name.to_string(), arity));
        self
    }

    pub fn p(&self) -> usize {
        self.names.indep.len()
    }

    fn arity(&self, name: &str) -> Option<usize> {
        self.functions
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, a)| *a)
    }

    /// Every declared name, in declaration order.
    pub fn all_names(&self) -> impl Iterator<Item = &str> {
        self.names
            .indep
            .iter()
            .chain(&self.names.dep)
            .chain(&self.names.aux)
            .chain(&self.constants)
            .map(String::as_str)
            .chain(self.functions.iter().map(|(n, _)| n.as_str()))
    }

    pub fn is_declared(&self, name: &str) -> bool {
        self.all_names().any(|n| n == name)
    }

    /// Multi-index for a subscript such as `xxt`, matching independent names greedily.
    fn subscript(&self, sub: &str) -> Option<MultiIndex> {
        let mut counts = vec![0u32; self.p()];
        let mut rest = sub;
        while !rest.is_empty() {
            let (i, len) = self
                .names
                .indep
                .iter()
                .enumerate()
                .filter(|(_, n)| rest.starts_with(n.as_str()))
                .map(|(i, n)| (i, n.len()))
                .max_by_key(|&(_, l)| l)?;
            counts[i] += 1;
            rest = &rest[len..];
        }
        Some(MultiIndex::from_counts(counts))
    }

    pub fn print(&self, e: &Expr) -> String {
        self.names.print(e)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

fn lex(src: &str, line: usize) -> Result<Lexer, FrontendError> {
    let chars: Vec<char> = src.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            toks.push((Tok::Num(s.parse().expect("digits")), start + 1));
        } else if c.is_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            while i < chars.len() && chars[i] == '\'' {
                i += 1;
            }
            toks.push((Tok::Ident(chars[start..i].iter().collect()), start + 1));
        } else if "+-*/^(),[]".contains(c) {
            toks.push((Tok::Sym(c), i + 1));
            i += 1;
        } else {
            return Err(FrontendError::Syntax {
                line,
                col: i + 1,
                message: format!("unexpected character '{c}'"),
            });
        }
    }
    toks.push((Tok::End, chars.len() + 1));
    Ok(Lexer { toks })
}

struct Parser<'a> {
    decl: &'a Declarations,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
}

const UNARY_BP: u8 = 5;

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> FrontendError {
        FrontendError::Syntax {
            line: self.line,
            col: self.col(),
            message: message.into(),
        }
    }

    fn expect(&mut self, c: char) -> Result<(), FrontendError> {
        if *self.peek() == Tok::Sym(c) {
            self.next();
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    fn expr(&mut self, min_bp: u8) -> Result<Expr, FrontendError> {
        let mut lhs = self.prefix()?;
        loop {
            let (op, lbp, rbp) = match self.peek() {
                Tok::Sym('+') => ('+', 1, 2),
                Tok::Sym('-') => ('-', 1, 2),
                Tok::Sym('*') => ('*', 3, 4),
                Tok::Sym('/') => ('/', 3, 4),
                Tok::Sym('^') => ('^', 7, 6),
                _ => break,
            };
            if lbp < min_bp {
                break;
            }
            let col = self.col();
            self.next();
            let rhs = self.expr(rbp)?;
            lhs = match op {
                '+' => lhs.add(&rhs),
                '-' => lhs.sub(&rhs),
                '*' => lhs.mul(&rhs),
                '/' => lhs.div(&rhs).map_err(|e| self.at(col, e))?,
                _ => self.power(&lhs, &rhs).map_err(|e| self.at(col, e))?,
            };
        }
        Ok(lhs)
    }

    fn at(&self, col: usize, e: crate::Error) -> FrontendError {
        FrontendError::Math {
            line: self.line,
            col,
            source: e,
        }
    }

    fn power(&self, base: &Expr, exponent: &Expr) -> crate::Result<Expr> {
        if let Some(k) = exponent.as_integer() {
            let k = k.to_i64().ok_or_else(|| {
                crate::Error::InvalidExpression("integer exponent out of range".into())
            })?;
            return base.powi(k);
        }
        Expr::power(base, exponent)
    }

    fn prefix(&mut self) -> Result<Expr, FrontendError> {
        let col = self.col();
        match self.next() {
            Tok::Num(n) => Ok(Expr::rational(Q::from_integer(n))),
            Tok::Sym('-') => Ok(self.expr(UNARY_BP)?.neg()),
            Tok::Sym('(') => {
                let e = self.expr(0)?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => self.identifier(name, col),
            Tok::End => Err(self.error("unexpected end of expression")),
            Tok::Sym(c) => Err(FrontendError::Syntax {
                line: self.line,
                col,
                message: format!("unexpected '{c}'"),
            }),
        }
    }

    fn args(&mut self) -> Result<Vec<Expr>, FrontendError> {
        self.expect('(')?;
        let mut args = vec![self.expr(0)?];
        while *self.peek() == Tok::Sym(',') {
            self.next();
            args.push(self.expr(0)?);
        }
        self.expect(')')?;
        Ok(args)
    }

    fn identifier(&mut self, name: String, col: usize) -> Result<Expr, FrontendError> {
        let primes = name.chars().rev().take_while(|&c| c == '\'').count();
        let bare = &name[..name.len() - primes];
        if bare == "exp" && primes == 0 {
            let args = self.args()?;
            if args.len() != 1 {
                return Err(FrontendError::Arity {
                    name: "exp".into(),
                    expected: 1,
                    found: args.len(),
                });
            }
            return Ok(Expr::exp(&args[0]));
        }
        if let Some(arity) = self.decl.arity(bare) {
            let orders = if *self.peek() == Tok::Sym('[') {
                if primes > 0 {
                    return Err(self.error("primes and bracket orders cannot be combined"));
                }
                self.orders()?
            } else if primes > 0 {
                if arity != 1 {
                    return Err(self.error("primes apply to one-argument functions only"));
                }
                vec![primes as u32]
            } else {
                vec![0; arity]
            };
            if orders.len() != arity {
                return Err(FrontendError::Arity {
                    name: bare.into(),
                    expected: arity,
                    found: orders.len(),
                });
            }
            let args = self.args()?;
            if args.len() != arity {
                return Err(FrontendError::Arity {
                    name: bare.into(),
                    expected: arity,
                    found: args.len(),
                });
            }
            return Ok(Expr::func(bare, orders, args));
        }
        if primes > 0 {
            return Err(FrontendError::UnknownSymbol(name));
        }
        let (base, sub) = match bare.split_once('_') {
            Some((b, s)) => (b, Some(s)),
            None => (bare, None),
        };
        let names = &self.decl.names;
        let p = self.decl.p();
        let idx = match sub {
            None => MultiIndex::zero(p),
            Some(s) => self
                .decl
                .subscript(s)
                .filter(|_| !s.is_empty())
                .ok_or_else(|| FrontendError::UnknownSymbol(name.clone()))?,
        };
        if let Some(a) = names.dep.iter().position(|n| n == base) {
            return Ok(Expr::jet(a, idx));
        }
        if let Some(b) = names.aux.iter().position(|n| n == base) {
            return Ok(Expr::aux(b, idx));
        }
        if sub.is_none() {
            if let Some(i) = names.indep.iter().position(|n| n == base) {
                return Ok(Expr::indep(i));
            }
            if self.decl.constants.iter().any(|c| c == base) {
                return Ok(Expr::constant(base));
            }
        }
        let _ = col;
        Err(FrontendError::UnknownSymbol(name))
    }

    fn orders(&mut self) -> Result<Vec<u32>, FrontendError> {
        self.expect('[')?;
        let mut out = Vec::new();
        loop {
            match self.next() {
                Tok::Num(n) => out.push(
                    n.to_u32()
                        .ok_or_else(|| self.error("derivative order out of range"))?,
                ),
                _ => return Err(self.error("expected derivative order")),
            }
            match self.next() {
                Tok::Sym(',') => continue,
                Tok::Sym(']') => break,
                _ => return Err(self.error("expected ',' or ']'")),
            }
        }
        Ok(out)
    }
}

/// Parses `src` (reported as line `line` in errors).
pub fn parse_expression_at(
    src: &str,
    decl: &Declarations,
    line: usize,
) -> Result<Expr, FrontendError> {
    let lexer = lex(src, line)?;
    let mut p = Parser {
        decl,
        toks: lexer.toks,
        pos: 0,
        line,
    };
    let e = p.expr(0)?;
    if *p.peek() != Tok::End {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

pub fn parse_expression(src: &str, decl: &Declarations) -> Result<Expr, FrontendError> {
    parse_expression_at(src, decl, 1)
}
