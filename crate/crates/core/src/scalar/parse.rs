//! Expression parser for the scalar grammar.
//!
//! Grammar: coordinate names, integer literals, `+ - * / ^` (integer
//! exponents only), unary minus and parentheses. `^` binds tightest, then
//! `* /`, then `+ -`; everything is left-associative except `^`. Canonical
//! renderings produced by [`Scalar::render`] re-parse to equal scalars.

use num::rational::BigRational;

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Int(BigRational),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a str,
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
}

/// Byte offset -> (line, column), both 1-based.
fn position(src: &str, offset: usize) -> (usize, usize) {
    let mut line = 1;
    let mut col = 1;
    for (i, c) in src.char_indices() {
        if i >= offset {
            break;
        }
        if c == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    (line, col)
}

fn err_at(src: &str, offset: usize, message: impl Into<String>) -> Error {
    let (line, column) = position(src, offset);
    Error::Parse { line, column, message: message.into() }
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src, chars: src.char_indices().peekable() }
    }

    fn tokens(mut self) -> Result<Vec<(usize, Token)>> {
        let mut out = Vec::new();
        while let Some(&(i, c)) = self.chars.peek() {
            match c {
                ' ' | '\t' | '\n' | '\r' => {
                    self.chars.next();
                }
                '+' => self.push_simple(&mut out, Token::Plus),
                '-' => self.push_simple(&mut out, Token::Minus),
                '*' => self.push_simple(&mut out, Token::Star),
                '/' => self.push_simple(&mut out, Token::Slash),
                '^' => self.push_simple(&mut out, Token::Caret),
                '(' => self.push_simple(&mut out, Token::LParen),
                ')' => self.push_simple(&mut out, Token::RParen),
                '0'..='9' => {
                    let mut digits = String::new();
                    while let Some(&(_, d)) = self.chars.peek() {
                        if d.is_ascii_digit() {
                            digits.push(d);
                            self.chars.next();
                        } else {
                            break;
                        }
                    }
                    let n: num::BigInt = digits
                        .parse()
                        .map_err(|_| err_at(self.src, i, "invalid integer literal"))?;
                    out.push((i, Token::Int(BigRational::from_integer(n))));
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let mut ident = String::new();
                    while let Some(&(_, d)) = self.chars.peek() {
                        if d.is_ascii_alphanumeric() || d == '_' {
                            ident.push(d);
                            self.chars.next();
                        } else {
                            break;
                        }
                    }
                    out.push((i, Token::Ident(ident)));
                }
                other => {
                    return Err(err_at(self.src, i, format!("unexpected character `{other}`")));
                }
            }
        }
        Ok(out)
    }

    fn push_simple(&mut self, out: &mut Vec<(usize, Token)>, t: Token) {
        let (i, _) = self.chars.next().unwrap();
        out.push((i, t));
    }
}

struct Parser<'a> {
    src: &'a str,
    chart: &'a Chart,
    tokens: Vec<(usize, Token)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn next(&mut self) -> Option<(usize, Token)> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn offset(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|&(i, _)| i)
            .unwrap_or(self.src.len())
    }

    fn expr(&mut self) -> Result<Scalar> {
        let mut acc = self.term()?;
        while let Some(tok) = self.peek() {
            match tok {
                Token::Plus => {
                    self.next();
                    acc = &acc + &self.term()?;
                }
                Token::Minus => {
                    self.next();
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Scalar> {
        let mut acc = self.unary()?;
        while let Some(tok) = self.peek() {
            match tok {
                Token::Star => {
                    self.next();
                    acc = &acc * &self.unary()?;
                }
                Token::Slash => {
                    let at = self.offset();
                    self.next();
                    let rhs = self.unary()?;
                    acc = acc
                        .checked_div(&rhs)
                        .map_err(|_| err_at(self.src, at, "division by zero"))?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Scalar> {
        if matches!(self.peek(), Some(Token::Minus)) {
            self.next();
            return Ok(-self.unary()?);
        }
        if matches!(self.peek(), Some(Token::Plus)) {
            self.next();
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Scalar> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Token::Caret)) {
            let at = self.offset();
            self.next();
            let exp = self.exponent()?;
            return base.pow(exp).map_err(|_| err_at(self.src, at, "zero raised to a negative power"));
        }
        Ok(base)
    }

    /// Exponents are integer literals, optionally signed or parenthesized.
    fn exponent(&mut self) -> Result<i32> {
        let at = self.offset();
        match self.next() {
            Some((_, Token::Int(n))) => int_exponent(self.src, at, &n),
            Some((_, Token::Minus)) => {
                let at2 = self.offset();
                match self.next() {
                    Some((_, Token::Int(n))) => Ok(-int_exponent(self.src, at2, &n)?),
                    _ => Err(err_at(self.src, at2, "expected integer exponent")),
                }
            }
            Some((_, Token::LParen)) => {
                let inner = self.exponent()?;
                match self.next() {
                    Some((_, Token::RParen)) => Ok(inner),
                    _ => Err(err_at(self.src, at, "unclosed parenthesis in exponent")),
                }
            }
            _ => Err(err_at(self.src, at, "expected integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<Scalar> {
        let at = self.offset();
        match self.next() {
            Some((_, Token::Int(n))) => Ok(Scalar::from_rational(self.chart.dim(), n)),
            Some((i, Token::Ident(name))) => {
                let index = self
                    .chart
                    .index_of(&name)
                    .map_err(|_| err_at(self.src, i, format!("unknown coordinate `{name}`")))?;
                Ok(Scalar::var(self.chart.dim(), index))
            }
            Some((i, Token::LParen)) => {
                let inner = self.expr()?;
                match self.next() {
                    Some((_, Token::RParen)) => Ok(inner),
                    _ => Err(err_at(self.src, i, "unclosed parenthesis")),
                }
            }
            Some((i, other)) => Err(err_at(self.src, i, format!("unexpected token {other:?}"))),
            None => Err(err_at(self.src, at, "unexpected end of expression")),
        }
    }
}

fn int_exponent(src: &str, at: usize, n: &BigRational) -> Result<i32> {
    use num::ToPrimitive;
    n.to_integer()
        .to_i32()
        .ok_or_else(|| err_at(src, at, "exponent out of range"))
}

/// Parses an expression over the chart's coordinates.
pub fn parse_expression(chart: &Chart, input: &str) -> Result<Scalar> {
    let tokens = Lexer::new(input).tokens()?;
    if tokens.is_empty() {
        return Err(err_at(input, 0, "empty expression"));
    }
    let mut parser = Parser { src: input, chart, tokens, pos: 0 };
    let value = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        let at = parser.offset();
        return Err(err_at(input, at, "trailing input after expression"));
    }
    Ok(value)
}
