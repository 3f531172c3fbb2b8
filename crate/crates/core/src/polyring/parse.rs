//! Recursive-descent parser for the polynomial and 1-form grammars.
//!
//! ```text
//! poly     := ["-"] term (("+"|"-") term)*
//! term     := factor ("*" factor)*
//! factor   := rational | variable ("^" natural)? | "(" poly ")"
//! rational := natural ("/" natural)?
//! oneform  := fterm (("+"|"-") fterm)*
//! fterm    := (factor "*")* "d" variable
//! ```
//!
//! Whitespace is insignificant and products need an explicit `*`.

use num_bigint::BigInt;
use num_traits::{Num, Zero};
use thiserror::Error;

use super::{OneForm, Polynomial, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected {found}, expected {expected}")]
    Syntax { found: String, expected: String },
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("exponent must be a non-negative integer literal")]
    BadExponent,
    #[error("differential of unknown variable `{0}`")]
    UnknownDifferential(String),
    #[error("division by zero in rational literal")]
    ZeroDenominator,
    #[error("invalid variable list: {0}")]
    BadVariables(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at offset {position}: {kind}")]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Other(char),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(s) => format!("number `{s}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Other(c) => format!("character `{c}`"),
            Tok::End => "end of input".into(),
        }
    }
}

fn tokenize(text: &str) -> Vec<(usize, Tok)> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            out.push((pos, Tok::Num(chars[start..i].iter().map(|p| p.1).collect())));
            continue;
        }
        if c.is_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            out.push((pos, Tok::Ident(chars[start..i].iter().map(|p| p.1).collect())));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => Tok::Other(other),
        };
        out.push((pos, tok));
        i += 1;
    }
    out.push((text.len(), Tok::End));
    out
}

fn check_variables(variables: &[String]) -> Result<(), ParseError> {
    let bad = |msg: String| ParseError {
        position: 0,
        kind: ParseErrorKind::BadVariables(msg),
    };
    for (i, v) in variables.iter().enumerate() {
        let mut chars = v.chars();
        let ok_start = chars.next().is_some_and(char::is_alphabetic);
        if !ok_start || !chars.all(|c| c.is_alphanumeric() || c == '_') {
            return Err(bad(format!("`{v}` is not an identifier")));
        }
        if variables[..i].contains(v) {
            return Err(bad(format!("`{v}` declared twice")));
        }
        if let Some(rest) = v.strip_prefix('d') {
            if variables.iter().any(|w| w == rest) {
                return Err(bad(format!("`{v}` collides with the differential of `{rest}`")));
            }
        }
    }
    Ok(())
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    vars: &'a [String],
}

impl<'a> Parser<'a> {
    fn new(text: &str, vars: &'a [String]) -> Result<Self, ParseError> {
        check_variables(vars)?;
        Ok(Parser {
            toks: tokenize(text),
            at: 0,
            vars,
        })
    }

    fn n(&self) -> usize {
        self.vars.len()
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.at + k).min(self.toks.len() - 1);
        &self.toks[i].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn syntax(&self, expected: &str) -> ParseError {
        ParseError {
            position: self.pos(),
            kind: ParseErrorKind::Syntax {
                found: self.peek().describe(),
                expected: expected.to_string(),
            },
        }
    }

    fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// If the upcoming tokens spell a differential `d<var>`, returns the
    /// variable index and the number of tokens it spans.
    fn differential_ahead(&self) -> Result<Option<(usize, usize)>, ParseError> {
        let Tok::Ident(name) = self.peek() else {
            return Ok(None);
        };
        if self.var_index(name).is_some() {
            return Ok(None);
        }
        if name == "d" {
            if let Tok::Ident(next) = self.peek_at(1) {
                if let Some(i) = self.var_index(next) {
                    return Ok(Some((i, 2)));
                }
                return Err(ParseError {
                    position: self.toks[self.at + 1].0,
                    kind: ParseErrorKind::UnknownDifferential(next.clone()),
                });
            }
            return Ok(None);
        }
        if let Some(rest) = name.strip_prefix('d') {
            return match self.var_index(rest) {
                Some(i) => Ok(Some((i, 1))),
                None => Err(ParseError {
                    position: self.pos(),
                    kind: ParseErrorKind::UnknownDifferential(rest.to_string()),
                }),
            };
        }
        Ok(None)
    }

    fn natural(&mut self) -> Result<BigInt, ParseError> {
        match self.peek().clone() {
            Tok::Num(s) => {
                self.bump();
                Ok(BigInt::from_str_radix(&s, 10).expect("digits"))
            }
            _ => Err(self.syntax("a natural number")),
        }
    }

    fn poly(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = if *self.peek() == Tok::Minus {
            self.bump();
            -self.term()?
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, ParseError> {
        let start = self.pos();
        match self.peek().clone() {
            Tok::Num(_) => {
                let num = self.natural()?;
                let den = if *self.peek() == Tok::Slash {
                    self.bump();
                    let d = self.natural()?;
                    if d.is_zero() {
                        return Err(ParseError {
                            position: start,
                            kind: ParseErrorKind::ZeroDenominator,
                        });
                    }
                    d
                } else {
                    BigInt::from(1)
                };
                Ok(Polynomial::constant(self.n(), Rational::new(num, den)))
            }
            Tok::Ident(name) => {
                let Some(index) = self.var_index(&name) else {
                    return Err(ParseError {
                        position: start,
                        kind: ParseErrorKind::UnknownIdentifier(name),
                    });
                };
                self.bump();
                let base = Polynomial::variable(self.n(), index);
                if *self.peek() == Tok::Caret {
                    self.bump();
                    let epos = self.pos();
                    let Tok::Num(digits) = self.peek().clone() else {
                        return Err(ParseError {
                            position: epos,
                            kind: ParseErrorKind::BadExponent,
                        });
                    };
                    self.bump();
                    // A fractional exponent such as `x^1/2` is rejected too.
                    if matches!(self.peek(), Tok::Slash | Tok::Caret) {
                        return Err(ParseError {
                            position: epos,
                            kind: ParseErrorKind::BadExponent,
                        });
                    }
                    let e: u32 = digits.parse().map_err(|_| ParseError {
                        position: epos,
                        kind: ParseErrorKind::BadExponent,
                    })?;
                    Ok(base.pow(e))
                } else {
                    Ok(base)
                }
            }
            Tok::LParen => {
                self.bump();
                let inner = self.poly()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.syntax("`)`"));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.syntax("a number, a variable or `(`")),
        }
    }

    fn fterm(&mut self) -> Result<OneForm, ParseError> {
        let mut coeff = Polynomial::one(self.n());
        loop {
            if let Some((index, width)) = self.differential_ahead()? {
                for _ in 0..width {
                    self.bump();
                }
                let mut cs = vec![Polynomial::zero(self.n()); self.n()];
                cs[index] = coeff;
                return Ok(OneForm::new(cs));
            }
            if let Tok::Ident(name) = self.peek() {
                if self.var_index(name).is_none() {
                    return Err(ParseError {
                        position: self.pos(),
                        kind: ParseErrorKind::UnknownIdentifier(name.clone()),
                    });
                }
            }
            let f = self.factor()?;
            coeff = &coeff * &f;
            if *self.peek() != Tok::Star {
                return Err(self.syntax("`*` followed by more factors or a differential"));
            }
            self.bump();
        }
    }

    fn oneform(&mut self) -> Result<OneForm, ParseError> {
        let mut acc = if *self.peek() == Tok::Minus {
            self.bump();
            let t = self.fterm()?;
            t.times(&Polynomial::from_integer(self.n(), -1))
        } else {
            self.fterm()?
        };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(&self.fterm()?);
                }
                Tok::Minus => {
                    self.bump();
                    let t = self.fterm()?;
                    acc = acc.add(&t.times(&Polynomial::from_integer(self.n(), -1)));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            Err(self.syntax("an operator or end of input"))
        }
    }
}

/// Parses a polynomial over the ordered variable list.
pub fn parse_polynomial(text: &str, variables: &[String]) -> Result<Polynomial, ParseError> {
    let mut p = Parser::new(text, variables)?;
    let out = p.poly()?;
    p.finish()?;
    Ok(out)
}

/// Parses a 1-form written as a sum of `coefficient*d<var>` terms.
pub fn parse_one_form(text: &str, variables: &[String]) -> Result<OneForm, ParseError> {
    if variables.is_empty() {
        return Err(ParseError {
            position: 0,
            kind: ParseErrorKind::BadVariables("a 1-form needs at least one variable".into()),
        });
    }
    let mut p = Parser::new(text, variables)?;
    let out = p.oneform()?;
    p.finish()?;
    Ok(out)
}
