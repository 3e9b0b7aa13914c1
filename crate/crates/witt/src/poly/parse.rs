//! Recursive-descent parser for the polynomial expression grammar:
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := coefficient | var ('^' natural)?
//! var    := 'X' index (1-based) | 't'
//! ```
//!
//! Whitespace-insensitive; coefficients reduce into the target ring.

use num_bigint::BigUint;
use num_traits::One;

use super::{CoeffRing, Poly};
use crate::error::{Error, Result};

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Plus,
    Minus,
    Star,
    Caret,
    Nat(BigUint),
    Var(usize), // 0-based
    T,
    End,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str, line: usize) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
            line,
            col: 1,
        }
    }

    fn err_at(&self, column: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column,
            message: message.into(),
        }
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.src.get(self.pos).copied();
        if c.is_some() {
            self.pos += 1;
            self.col += 1;
        }
        c
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn next_token(&mut self) -> Result<(Token, usize)> {
        while matches!(self.peek(), Some(b' ') | Some(b'\t') | Some(b'\r')) {
            self.bump();
        }
        let start_col = self.col;
        let c = match self.bump() {
            None => return Ok((Token::End, start_col)),
            Some(c) => c,
        };
        let tok = match c {
            b'+' => Token::Plus,
            b'-' => Token::Minus,
            b'*' => Token::Star,
            b'^' => Token::Caret,
            b't' => Token::T,
            b'X' => {
                let mut digits = String::new();
                while matches!(self.peek(), Some(d) if d.is_ascii_digit()) {
                    digits.push(self.bump().unwrap() as char);
                }
                if digits.is_empty() {
                    return Err(self.err_at(start_col, "variable X must be followed by a 1-based index"));
                }
                let idx: usize = digits
                    .parse()
                    .map_err(|_| self.err_at(start_col, "variable index too large"))?;
                if idx == 0 {
                    return Err(self.err_at(start_col, "variable indices are 1-based"));
                }
                Token::Var(idx - 1)
            }
            d if d.is_ascii_digit() => {
                let mut digits = String::new();
                digits.push(d as char);
                while matches!(self.peek(), Some(d) if d.is_ascii_digit()) {
                    digits.push(self.bump().unwrap() as char);
                }
                Token::Nat(digits.parse().unwrap())
            }
            other => {
                return Err(self.err_at(
                    start_col,
                    format!("unexpected character '{}'", (other as char).escape_default()),
                ))
            }
        };
        Ok((tok, start_col))
    }
}

struct Parser<'a, R: CoeffRing> {
    lexer: Lexer<'a>,
    ring: R,
    nvars: usize,
    current: Token,
    current_col: usize,
}

impl<'a, R: CoeffRing> Parser<'a, R> {
    fn new(src: &'a str, ring: R, nvars: usize, line: usize) -> Result<Self> {
        let mut lexer = Lexer::new(src, line);
        let (current, current_col) = lexer.next_token()?;
        Ok(Parser {
            lexer,
            ring,
            nvars,
            current,
            current_col,
        })
    }

    fn err_here(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.lexer.line,
            column: self.current_col,
            message: message.into(),
        }
    }

    fn advance(&mut self) -> Result<()> {
        let (tok, col) = self.lexer.next_token()?;
        self.current = tok;
        self.current_col = col;
        Ok(())
    }

    fn parse_exponent(&mut self) -> Result<u32> {
        // Caller consumed '^'.
        match self.current.clone() {
            Token::Nat(n) => {
                let e = u32::try_from(&n)
                    .map_err(|_| self.err_here("exponent does not fit in 32 bits"))?;
                self.advance()?;
                Ok(e)
            }
            _ => Err(self.err_here("expected a natural number after '^'")),
        }
    }

    /// term := factor ('*' factor)*; accumulates a scalar, a power of t and
    /// an exponent vector.
    fn parse_term(&mut self) -> Result<Poly<R>> {
        let mut scalar = BigUint::one();
        let mut t_power: u64 = 0;
        let mut exps = vec![0u32; self.nvars];
        let mut any = false;
        loop {
            match self.current.clone() {
                Token::Nat(n) => {
                    any = true;
                    self.advance()?;
                    if self.current == Token::Caret {
                        return Err(self.err_here("'^' may only follow a variable"));
                    }
                    scalar *= n;
                }
                Token::T => {
                    any = true;
                    self.advance()?;
                    let e = if self.current == Token::Caret {
                        self.advance()?;
                        self.parse_exponent()?
                    } else {
                        1
                    };
                    t_power += e as u64;
                }
                Token::Var(idx) => {
                    any = true;
                    if idx >= self.nvars {
                        return Err(self.err_here(format!(
                            "variable X{} out of range (expected 1..={})",
                            idx + 1,
                            self.nvars
                        )));
                    }
                    self.advance()?;
                    let e = if self.current == Token::Caret {
                        self.advance()?;
                        self.parse_exponent()?
                    } else {
                        1
                    };
                    exps[idx] = exps[idx]
                        .checked_add(e)
                        .ok_or_else(|| self.err_here("exponent overflow"))?;
                }
                _ => break,
            }
            if self.current == Token::Star {
                self.advance()?;
                if matches!(self.current, Token::Plus | Token::Minus | Token::End) {
                    return Err(self.err_here("expected a factor after '*'"));
                }
                continue;
            }
            // Adjacent factors without '*' are not part of the grammar.
            if matches!(self.current, Token::Nat(_) | Token::T | Token::Var(_)) {
                return Err(self.err_here("missing '*' between factors"));
            }
            break;
        }
        if !any {
            return Err(self.err_here("expected a term"));
        }
        let t_power = u32::try_from(t_power)
            .map_err(|_| self.err_here("accumulated t exponent overflow"))?;
        let coeff = self
            .ring
            .from_text_atom(&scalar, t_power)
            .map_err(|e| match e {
                Error::Parse { .. } => e,
                other => self.err_here(other.to_string()),
            })?;
        Ok(Poly::from_terms(
            self.ring.clone(),
            self.nvars,
            [(exps, coeff)],
        ))
    }

    fn parse_expr(&mut self) -> Result<Poly<R>> {
        let mut negate_first = false;
        if self.current == Token::Minus {
            negate_first = true;
            self.advance()?;
        }
        let first = self.parse_term()?;
        let mut acc = if negate_first { first.neg() } else { first };
        loop {
            match self.current {
                Token::Plus => {
                    self.advance()?;
                    let t = self.parse_term()?;
                    acc = acc.add(&t);
                }
                Token::Minus => {
                    self.advance()?;
                    let t = self.parse_term()?;
                    acc = acc.sub(&t);
                }
                Token::End => break,
                _ => return Err(self.err_here("expected '+', '-' or end of expression")),
            }
        }
        Ok(acc)
    }
}

/// Parses one polynomial expression. `line` seeds error positions when the
/// expression sits inside a larger file.
pub fn parse_poly_at<R: CoeffRing>(
    src: &str,
    ring: R,
    nvars: usize,
    line: usize,
) -> Result<Poly<R>> {
    if src.trim() == "0" {
        return Ok(Poly::zero(ring, nvars));
    }
    if src.trim().is_empty() {
        return Err(Error::Parse {
            line,
            column: 1,
            message: "empty polynomial expression".into(),
        });
    }
    let mut parser = Parser::new(src, ring, nvars, line)?;
    parser.parse_expr()
}

pub fn parse_poly<R: CoeffRing>(src: &str, ring: R, nvars: usize) -> Result<Poly<R>> {
    parse_poly_at(src, ring, nvars, 1)
}
