//! Parser for exact side lengths written as rational combinations of a
//! square root, e.g. "3/4", "sqrt(13)/2", "(1470+499*sqrt(5))/310".

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::quad::{NumField, QuadElem};
use crate::rational::{rat, sqf_decompose, Rat};

/// A parsed value a + b sqrt(m); m is None while no surd has appeared.
#[derive(Debug, Clone, PartialEq)]
pub struct Surd {
    pub a: Rat,
    pub b: Rat,
    pub m: Option<i64>,
}

impl Surd {
    fn rational(a: Rat) -> Self {
        Surd { a, b: Rat::zero(), m: None }
    }

    fn join(m1: Option<i64>, m2: Option<i64>) -> Result<Option<i64>> {
        match (m1, m2) {
            (None, m) | (m, None) => Ok(m),
            (Some(a), Some(b)) if a == b => Ok(Some(a)),
            (Some(a), Some(b)) => {
                Err(Error::Parse(format!("mixed radicands sqrt({a}) and sqrt({b})")))
            }
        }
    }

    fn add(&self, other: &Surd) -> Result<Surd> {
        Ok(Surd {
            a: &self.a + &other.a,
            b: &self.b + &other.b,
            m: Surd::join(self.m, other.m)?,
        })
    }

    fn neg(&self) -> Surd {
        Surd { a: -&self.a, b: -&self.b, m: self.m }
    }

    fn mul(&self, other: &Surd) -> Result<Surd> {
        let m = Surd::join(self.m, other.m)?;
        let cross = &self.b * &other.b;
        let a = match m {
            Some(m) if !cross.is_zero() => &self.a * &other.a + cross * rat(m),
            _ => &self.a * &other.a,
        };
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(Surd { a, b, m })
    }

    fn inv(&self) -> Result<Surd> {
        let norm = match self.m {
            Some(m) => &self.a * &self.a - &self.b * &self.b * rat(m),
            None => &self.a * &self.a,
        };
        if norm.is_zero() {
            return Err(Error::Parse("division by zero".to_string()));
        }
        Ok(Surd { a: &self.a / &norm, b: -(&self.b / &norm), m: self.m })
    }

    /// Lower into the given field; a purely rational value fits any field.
    pub fn into_elem(self, field: NumField) -> Result<QuadElem> {
        match (self.m, field) {
            (None, _) => Ok(QuadElem::rational(self.a).promote(field)),
            (Some(m), NumField::Quad(f)) if f.m() == m => {
                QuadElem::new(self.a, self.b, field)
            }
            (Some(m), _) => Err(Error::Parse(format!(
                "value involves sqrt({m}), which does not live in the requested field"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(i64),
    Sqrt,
    Plus,
    Minus,
    Star,
    Slash,
    Open,
    Close,
}

fn tokenize(input: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut chars = input.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' => {
                chars.next();
            }
            '0'..='9' => {
                let mut v: i64 = 0;
                while let Some(d) = chars.peek().and_then(|c| c.to_digit(10)) {
                    v = v
                        .checked_mul(10)
                        .and_then(|v| v.checked_add(d as i64))
                        .ok_or_else(|| Error::Parse("integer literal overflows".to_string()))?;
                    chars.next();
                }
                out.push(Token::Int(v));
            }
            'a'..='z' | 'A'..='Z' => {
                let mut word = String::new();
                while chars.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
                    word.push(chars.next().unwrap());
                }
                if word != "sqrt" {
                    return Err(Error::Parse(format!("unknown name {word:?}")));
                }
                out.push(Token::Sqrt);
            }
            '+' => {
                chars.next();
                out.push(Token::Plus);
            }
            '-' => {
                chars.next();
                out.push(Token::Minus);
            }
            '*' => {
                chars.next();
                out.push(Token::Star);
            }
            '/' => {
                chars.next();
                out.push(Token::Slash);
            }
            '(' => {
                chars.next();
                out.push(Token::Open);
            }
            ')' => {
                chars.next();
                out.push(Token::Close);
            }
            other => return Err(Error::Parse(format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, t: Token) -> Result<()> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Parse(format!("expected {t:?} at position {}", self.pos)))
        }
    }

    // expr := term (('+' | '-') term)*
    fn expr(&mut self) -> Result<Surd> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?)?;
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?.neg())?;
                }
                _ => return Ok(acc),
            }
        }
    }

    // term := factor (('*' | '/') factor)*
    fn term(&mut self) -> Result<Surd> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?)?;
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?.inv()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    // factor := '-'? atom
    fn factor(&mut self) -> Result<Surd> {
        if self.peek() == Some(&Token::Minus) {
            self.pos += 1;
            return Ok(self.atom()?.neg());
        }
        self.atom()
    }

    // atom := integer | 'sqrt' '(' expr ')' | '(' expr ')'
    fn atom(&mut self) -> Result<Surd> {
        match self.peek().cloned() {
            Some(Token::Int(v)) => {
                self.pos += 1;
                Ok(Surd::rational(rat(v)))
            }
            Some(Token::Sqrt) => {
                self.pos += 1;
                self.eat(Token::Open)?;
                let inner = self.expr()?;
                self.eat(Token::Close)?;
                if !inner.b.is_zero() {
                    return Err(Error::Parse("nested square roots are not supported".to_string()));
                }
                let radicand = inner.a;
                if radicand.denom() != &num_bigint::BigInt::from(1) {
                    return Err(Error::Parse(
                        "square roots of non-integers are not supported".to_string(),
                    ));
                }
                let n: i64 = radicand
                    .numer()
                    .try_into()
                    .map_err(|_| Error::Parse("radicand too large".to_string()))?;
                let d = sqf_decompose(n)?;
                if d.core == 1 {
                    Ok(Surd::rational(rat(d.root as i64)))
                } else {
                    Ok(Surd { a: Rat::zero(), b: rat(d.root as i64), m: Some(d.core as i64) })
                }
            }
            Some(Token::Open) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.eat(Token::Close)?;
                Ok(inner)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parse an expression like "24*sqrt(13)/13" into a + b sqrt(m).
pub fn parse_surd(input: &str) -> Result<Surd> {
    let tokens = tokenize(input)?;
    if tokens.is_empty() {
        return Err(Error::Parse("empty expression".to_string()));
    }
    let mut parser = Parser { tokens, pos: 0 };
    let value = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(Error::Parse(format!("trailing input at position {}", parser.pos)));
    }
    Ok(value)
}

/// Parse directly into an element of the given field.
pub fn parse_elem(input: &str, field: NumField) -> Result<QuadElem> {
    parse_surd(input)?.into_elem(field)
}
