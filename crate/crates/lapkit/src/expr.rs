//! Parser and printer for scalar functions of one positive variable.
//!
//! Grammar (EBNF):
//!
//! ```text
//! expr    := term { ("+" | "-") term }
//! term    := unary { ("*" | "/") unary }
//! unary   := "-" unary | power
//! power   := primary [ "^" unary ]          (exponent must be constant)
//! primary := NUMBER | "x" | "exp" "(" expr ")" | "log" "(" expr ")" | "(" expr ")"
//! NUMBER  := digits [ "." digits ] [ ("e"|"E") ["+"|"-"] digits ]
//! ```
//!
//! `log` is the natural logarithm. Exponents of `^` are restricted to
//! constant subexpressions; they are kept as expression trees so that
//! e.g. `x^(1/2)` evaluates the exponent exactly at working precision.

use crate::error::{Error, Result};
use std::fmt;

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Const(String),
    Var,
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, Box<Node>),
    Neg(Box<Node>),
    Exp(Box<Node>),
    Log(Box<Node>),
}

impl Node {
    pub fn contains_var(&self) -> bool {
        match self {
            Node::Const(_) => false,
            Node::Var => true,
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) | Node::Pow(a, b) => {
                a.contains_var() || b.contains_var()
            }
            Node::Neg(a) | Node::Exp(a) | Node::Log(a) => a.contains_var(),
        }
    }

    /// Replace the variable with `sub`, yielding the composition self ∘ sub.
    pub fn substitute(&self, sub: &Node) -> Node {
        match self {
            Node::Const(c) => Node::Const(c.clone()),
            Node::Var => sub.clone(),
            Node::Add(a, b) => Node::Add(a.substitute(sub).into(), b.substitute(sub).into()),
            Node::Sub(a, b) => Node::Sub(a.substitute(sub).into(), b.substitute(sub).into()),
            Node::Mul(a, b) => Node::Mul(a.substitute(sub).into(), b.substitute(sub).into()),
            Node::Div(a, b) => Node::Div(a.substitute(sub).into(), b.substitute(sub).into()),
            Node::Pow(a, b) => Node::Pow(a.substitute(sub).into(), b.clone()),
            Node::Neg(a) => Node::Neg(a.substitute(sub).into()),
            Node::Exp(a) => Node::Exp(a.substitute(sub).into()),
            Node::Log(a) => Node::Log(a.substitute(sub).into()),
        }
    }
}

/// A parsed scalar function of one variable.
#[derive(Clone, Debug, PartialEq)]
pub struct Expression {
    pub ast: Node,
}

impl Expression {
    pub fn parse(text: &str) -> Result<Expression> {
        let tokens = tokenize(text)?;
        let mut p = Parser { tokens, pos: 0 };
        let ast = p.expr()?;
        match p.peek() {
            (Token::Eof, _) => Ok(Expression { ast }),
            (t, off) => Err(Error::Syntax {
                offset: off,
                msg: format!("unexpected {t:?}"),
            }),
        }
    }

    pub fn var() -> Expression {
        Expression { ast: Node::Var }
    }

    pub fn constant(v: f64) -> Expression {
        Expression {
            ast: constant_node(v),
        }
    }

    pub fn print(&self) -> String {
        format!("{self}")
    }

    /// self ∘ inner.
    pub fn compose(&self, inner: &Expression) -> Expression {
        Expression {
            ast: self.ast.substitute(&inner.ast),
        }
    }
}

pub fn constant_node(v: f64) -> Node {
    if v < 0.0 {
        Node::Neg(Box::new(Node::Const(format!("{}", -v))))
    } else {
        Node::Const(format!("{v}"))
    }
}

// Convenience constructors used by the catalog and the Bernstein layer.
pub fn add(a: Expression, b: Expression) -> Expression {
    Expression { ast: Node::Add(a.ast.into(), b.ast.into()) }
}
pub fn sub(a: Expression, b: Expression) -> Expression {
    Expression { ast: Node::Sub(a.ast.into(), b.ast.into()) }
}
pub fn mul(a: Expression, b: Expression) -> Expression {
    Expression { ast: Node::Mul(a.ast.into(), b.ast.into()) }
}
pub fn div(a: Expression, b: Expression) -> Expression {
    Expression { ast: Node::Div(a.ast.into(), b.ast.into()) }
}
pub fn log(a: Expression) -> Expression {
    Expression { ast: Node::Log(a.ast.into()) }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eof,
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => { out.push((Token::Plus, i)); i += 1; }
            '-' => { out.push((Token::Minus, i)); i += 1; }
            '*' => { out.push((Token::Star, i)); i += 1; }
            '/' => { out.push((Token::Slash, i)); i += 1; }
            '^' => { out.push((Token::Caret, i)); i += 1; }
            '(' => { out.push((Token::LParen, i)); i += 1; }
            ')' => { out.push((Token::RParen, i)); i += 1; }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len() && matches!(bytes[i] as char, '0'..='9' | '.') {
                    i += 1;
                }
                // optional exponent part
                if i < bytes.len() && matches!(bytes[i] as char, 'e' | 'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && matches!(bytes[j] as char, '+' | '-') {
                        j += 1;
                    }
                    if j < bytes.len() && (bytes[j] as char).is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let lit = &text[start..i];
                if lit.matches('.').count() > 1 || lit == "." {
                    return Err(Error::Syntax {
                        offset: start,
                        msg: format!("malformed number `{lit}`"),
                    });
                }
                out.push((Token::Num(lit.to_string()), start));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len() && matches!(bytes[i] as char, 'a'..='z' | 'A'..='Z' | '0'..='9' | '_') {
                    i += 1;
                }
                out.push((Token::Ident(text[start..i].to_string()), start));
            }
            _ => {
                return Err(Error::Syntax {
                    offset: i,
                    msg: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    out.push((Token::Eof, bytes.len()));
    Ok(out)
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> (Token, usize) {
        self.tokens[self.pos].clone()
    }

    fn bump(&mut self) -> (Token, usize) {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        loop {
            match self.peek().0 {
                Token::Plus => {
                    self.bump();
                    lhs = Node::Add(lhs.into(), self.term()?.into());
                }
                Token::Minus => {
                    self.bump();
                    lhs = Node::Sub(lhs.into(), self.term()?.into());
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek().0 {
                Token::Star => {
                    self.bump();
                    lhs = Node::Mul(lhs.into(), self.unary()?.into());
                }
                Token::Slash => {
                    self.bump();
                    lhs = Node::Div(lhs.into(), self.unary()?.into());
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Node> {
        if matches!(self.peek().0, Token::Minus) {
            self.bump();
            return Ok(Node::Neg(self.unary()?.into()));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.primary()?;
        if matches!(self.peek().0, Token::Caret) {
            let (_, caret_off) = self.bump();
            let exponent = self.unary()?;
            if exponent.contains_var() {
                return Err(Error::Syntax {
                    offset: caret_off,
                    msg: "exponent of `^` must be constant".into(),
                });
            }
            return Ok(Node::Pow(base.into(), exponent.into()));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Node> {
        let (tok, off) = self.bump();
        match tok {
            Token::Num(s) => Ok(Node::Const(s)),
            Token::Ident(name) => match name.as_str() {
                "x" => Ok(Node::Var),
                "exp" | "log" => {
                    let (open, open_off) = self.bump();
                    if open != Token::LParen {
                        return Err(Error::Syntax {
                            offset: open_off,
                            msg: format!("expected `(` after `{name}`"),
                        });
                    }
                    let arg = self.expr()?;
                    let (close, close_off) = self.bump();
                    if close != Token::RParen {
                        return Err(Error::Syntax {
                            offset: close_off,
                            msg: "expected `)`".into(),
                        });
                    }
                    Ok(if name == "exp" {
                        Node::Exp(arg.into())
                    } else {
                        Node::Log(arg.into())
                    })
                }
                _ => Err(Error::UnknownIdentifier { name, offset: off }),
            },
            Token::LParen => {
                let inner = self.expr()?;
                let (close, close_off) = self.bump();
                if close != Token::RParen {
                    return Err(Error::Syntax {
                        offset: close_off,
                        msg: "expected `)`".into(),
                    });
                }
                Ok(inner)
            }
            other => Err(Error::Syntax {
                offset: off,
                msg: format!("expected value, found {other:?}"),
            }),
        }
    }
}

// Printing with minimal parentheses; `parse(print(e)) == e` structurally.
fn prec(n: &Node) -> u8 {
    match n {
        Node::Add(..) | Node::Sub(..) => 1,
        Node::Mul(..) | Node::Div(..) => 2,
        Node::Neg(..) => 3,
        Node::Pow(..) => 4,
        Node::Const(_) | Node::Var | Node::Exp(..) | Node::Log(..) => 5,
    }
}

fn fmt_node(n: &Node, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
    let p = prec(n);
    let parens = p < min_prec;
    if parens {
        write!(f, "(")?;
    }
    match n {
        Node::Const(s) => write!(f, "{s}")?,
        Node::Var => write!(f, "x")?,
        Node::Add(a, b) => {
            fmt_node(a, f, 1)?;
            write!(f, "+")?;
            fmt_node(b, f, 2)?;
        }
        Node::Sub(a, b) => {
            fmt_node(a, f, 1)?;
            write!(f, "-")?;
            fmt_node(b, f, 2)?;
        }
        Node::Mul(a, b) => {
            fmt_node(a, f, 2)?;
            write!(f, "*")?;
            fmt_node(b, f, 3)?;
        }
        Node::Div(a, b) => {
            fmt_node(a, f, 2)?;
            write!(f, "/")?;
            fmt_node(b, f, 3)?;
        }
        Node::Neg(a) => {
            write!(f, "-")?;
            fmt_node(a, f, 3)?;
        }
        Node::Pow(a, b) => {
            fmt_node(a, f, 5)?;
            write!(f, "^")?;
            fmt_node(b, f, 3)?;
        }
        Node::Exp(a) => {
            write!(f, "exp(")?;
            fmt_node(a, f, 0)?;
            write!(f, ")")?;
        }
        Node::Log(a) => {
            write!(f, "log(")?;
            fmt_node(a, f, 0)?;
            write!(f, ")")?;
        }
    }
    if parens {
        write!(f, ")")?;
    }
    Ok(())
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_node(&self.ast, f, 0)
    }
}
