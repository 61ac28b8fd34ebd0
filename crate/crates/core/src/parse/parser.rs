use num_bigint::BigInt;

use super::ast::{Expr, Exponent, Var};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Class(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax {
        pos,
        msg: msg.into(),
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let bytes: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    while i < bytes.len() {
        let (pos, c) = bytes[i];
        match c {
            c if c.is_whitespace() => {
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].1.is_ascii_digit() {
                    i += 1;
                }
                let text: String = bytes[start..i].iter().map(|b| b.1).collect();
                out.push((pos, Tok::Int(text.parse().expect("digits"))));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].1.is_ascii_alphanumeric() || bytes[i].1 == '_') {
                    i += 1;
                }
                let text: String = bytes[start..i].iter().map(|b| b.1).collect();
                out.push((pos, Tok::Ident(text)));
            }
            '[' => {
                let start = i + 1;
                let mut j = start;
                while j < bytes.len() && bytes[j].1 != ']' {
                    if bytes[j].1 == '[' {
                        return Err(syntax(bytes[j].0, "nested '[' in class name"));
                    }
                    j += 1;
                }
                if j == bytes.len() {
                    return Err(syntax(pos, "unterminated '['"));
                }
                let name: String = bytes[start..j].iter().map(|b| b.1).collect();
                let name = name.trim().to_string();
                if name.is_empty() {
                    return Err(syntax(pos, "empty class name"));
                }
                out.push((pos, Tok::Class(name)));
                i = j + 1;
            }
            '+' => {
                out.push((pos, Tok::Plus));
                i += 1;
            }
            '-' | '−' => {
                out.push((pos, Tok::Minus));
                i += 1;
            }
            '*' | '·' => {
                out.push((pos, Tok::Star));
                i += 1;
            }
            '/' => {
                out.push((pos, Tok::Slash));
                i += 1;
            }
            '^' => {
                out.push((pos, Tok::Caret));
                i += 1;
            }
            '(' => {
                out.push((pos, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((pos, Tok::RParen));
                i += 1;
            }
            other => return Err(syntax(pos, format!("unexpected character '{other}'"))),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.0)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|t| t.1.clone());
        self.at += 1;
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        let pos = self.pos();
        match self.bump() {
            Some(t) if t == tok => Ok(()),
            _ => Err(syntax(pos, format!("expected {what}"))),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Tok::Slash) => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.peek() == Some(&Tok::Plus) {
            self.bump();
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let e = self.exponent()?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn signed_int(&mut self) -> Result<i64> {
        let pos = self.pos();
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.bump();
            true
        } else {
            false
        };
        match self.bump() {
            Some(Tok::Int(n)) => {
                let n: i64 = n.try_into().map_err(|_| syntax(pos, "exponent out of range"))?;
                Ok(if neg { -n } else { n })
            }
            _ => Err(syntax(pos, "expected integer exponent")),
        }
    }

    fn exponent(&mut self) -> Result<Exponent> {
        if self.peek() == Some(&Tok::LParen) {
            self.bump();
            let num = self.signed_int()?;
            let mut den = 1;
            if self.peek() == Some(&Tok::Slash) {
                self.bump();
                let pos = self.pos();
                den = self.signed_int()?;
                if den <= 0 {
                    return Err(syntax(pos, "exponent denominator must be positive"));
                }
            }
            self.expect(Tok::RParen, "')' closing exponent")?;
            let g = num_integer::gcd(num, den);
            return Ok(Exponent {
                num: num / g,
                den: den / g,
            });
        }
        Ok(Exponent::integer(self.signed_int()?))
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Int(n)) => Ok(Expr::Int(n)),
            Some(Tok::Class(name)) => Ok(Expr::Class(name)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Some(Tok::Ident(id)) => match id.as_str() {
                "L" => Ok(Expr::Var(Var::L)),
                "u" => Ok(Expr::Var(Var::U)),
                "v" => Ok(Expr::Var(Var::V)),
                "uv" => Ok(Expr::Var(Var::Uv)),
                "inv" => {
                    self.expect(Tok::LParen, "'(' after inv")?;
                    let e = self.expr()?;
                    self.expect(Tok::RParen, "')' closing inv")?;
                    Ok(Expr::Inv(Box::new(e)))
                }
                other => Err(syntax(pos, format!("unknown identifier '{other}'"))),
            },
            Some(_) => Err(syntax(pos, "expected a term")),
            None => Err(syntax(pos, "unexpected end of input")),
        }
    }
}

/// Parses an expression of the shared grammar without kind checks.
pub fn parse_expr(src: &str) -> Result<Expr> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: src.len(),
    };
    let e = p.expr()?;
    if p.at < p.toks.len() {
        return Err(syntax(p.pos(), "unexpected trailing input"));
    }
    Ok(e)
}

/// Parses a class expression: `[name]`, `L`, integers, `+ - *`, `^`,
/// `inv(L^m - 1)`. `*` between two classes is rejected.
pub fn parse_class_expr(src: &str) -> Result<Expr> {
    let e = parse_expr(src)?;
    let mut bad = None;
    e.visit_vars(&mut |v| {
        if v != Var::L {
            bad = Some(v);
        }
    });
    if let Some(v) = bad {
        return Err(Error::Unsupported(format!(
            "variable {v:?} in a class expression (only L is allowed)"
        )));
    }
    e.kind()?;
    Ok(e)
}
