//! Plain-text expression grammar for polynomials, used by the CLI
//! `--expr` flags. Whitespace-insensitive. Examples:
//! `3/2*i*hbar^2*q^2*p`, `q*p - p*q`, `(q + p)^2`.

use num_bigint::BigInt;

use super::{CPolynomial, CRat, NcPolynomial, Rat, Sym};
use crate::error::{LabError, Result};

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(BigInt),
    Imag,
    Hbar,
    Q,
    P,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(input: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = input.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        match ch {
            c if c.is_whitespace() => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1;
            }
            '-' => {
                out.push(Token::Minus);
                i += 1;
            }
            '*' => {
                out.push(Token::Star);
                i += 1;
            }
            '/' => {
                out.push(Token::Slash);
                i += 1;
            }
            '^' => {
                out.push(Token::Caret);
                i += 1;
            }
            '(' => {
                out.push(Token::LParen);
                i += 1;
            }
            ')' => {
                out.push(Token::RParen);
                i += 1;
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                out.push(Token::Num(digits.parse().map_err(|_| {
                    LabError::Parse(format!("bad integer '{digits}'"))
                })?));
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_alphabetic() {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                out.push(match word.as_str() {
                    "i" => Token::Imag,
                    "hbar" => Token::Hbar,
                    "q" => Token::Q,
                    "p" => Token::P,
                    other => return Err(LabError::Parse(format!("unknown symbol '{other}'"))),
                });
            }
            other => return Err(LabError::Parse(format!("unexpected character '{other}'"))),
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

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    // expression = ['-'] term (('+'|'-') term)*
    fn expression(&mut self) -> Result<NcPolynomial> {
        let mut negate = false;
        if self.peek() == Some(&Token::Minus) {
            self.next();
            negate = true;
        } else if self.peek() == Some(&Token::Plus) {
            self.next();
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        while let Some(tok) = self.peek() {
            match tok {
                Token::Plus => {
                    self.next();
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                Token::Minus => {
                    self.next();
                    let t = self.term()?;
                    acc = acc.sub(&t);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    // term = factor (('*'|'/') factor)*
    fn term(&mut self) -> Result<NcPolynomial> {
        let mut acc = self.factor()?;
        while let Some(tok) = self.peek() {
            match tok {
                Token::Star => {
                    self.next();
                    let f = self.factor()?;
                    acc = acc.mul(&f);
                }
                Token::Slash => {
                    self.next();
                    let f = self.factor()?;
                    let divisor = constant_of(&f).ok_or_else(|| {
                        LabError::Parse("division is only allowed by scalar constants".into())
                    })?;
                    acc = acc.scale(&CRat::one().div(&divisor)?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    // factor = atom ['^' uint]
    fn factor(&mut self) -> Result<NcPolynomial> {
        let base = self.atom()?;
        if self.peek() == Some(&Token::Caret) {
            self.next();
            match self.next() {
                Some(Token::Num(n)) => {
                    let exp: u32 = n
                        .try_into()
                        .map_err(|_| LabError::Parse("exponent out of range".into()))?;
                    let mut acc = NcPolynomial::one();
                    for _ in 0..exp {
                        acc = acc.mul(&base);
                    }
                    Ok(acc)
                }
                _ => Err(LabError::Parse("expected integer exponent after '^'".into())),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<NcPolynomial> {
        match self.next() {
            Some(Token::Num(n)) => Ok(NcPolynomial::constant(CRat {
                re: Rat::from_integer(n),
                im: Rat::from_integer(BigInt::from(0)),
            })),
            Some(Token::Imag) => Ok(NcPolynomial::constant(CRat::i())),
            Some(Token::Hbar) => Ok(NcPolynomial::one().hbar_shift(1)),
            Some(Token::Q) => Ok(NcPolynomial::symbol(Sym::Q)),
            Some(Token::P) => Ok(NcPolynomial::symbol(Sym::P)),
            Some(Token::LParen) => {
                let inner = self.expression()?;
                match self.next() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err(LabError::Parse("missing closing parenthesis".into())),
                }
            }
            other => Err(LabError::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

fn constant_of(p: &NcPolynomial) -> Option<CRat> {
    if p.num_terms() != 1 {
        return None;
    }
    let (key, coeff) = p.terms().next()?;
    if key.word.is_empty() && key.hbar == 0 {
        Some(coeff.clone())
    } else {
        None
    }
}

/// Parse a noncommutative polynomial; symbol order within each product is
/// preserved exactly as written.
pub fn parse_nc_polynomial(input: &str) -> Result<NcPolynomial> {
    let mut parser = Parser { tokens: tokenize(input)?, pos: 0 };
    let poly = parser.expression()?;
    if parser.pos != parser.tokens.len() {
        return Err(LabError::Parse("trailing input".into()));
    }
    Ok(poly)
}

/// Parse as a commutative polynomial: the expression is normal-ordered
/// and reinterpreted over commuting q, p.
pub fn parse_c_polynomial(input: &str) -> Result<CPolynomial> {
    Ok(parse_nc_polynomial(input)?.to_commutative())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_spec_examples() {
        let p = parse_nc_polynomial("3/2*i*hbar^2*q^2*p").unwrap();
        assert_eq!(p.num_terms(), 1);
        let c = p.coeff(&[Sym::Q, Sym::Q, Sym::P], 2);
        assert_eq!(c, CRat { re: Rat::from_integer(0.into()), im: Rat::new(3.into(), 2.into()) });

        let comm = parse_nc_polynomial("q*p - p*q").unwrap().normal_order();
        assert_eq!(comm, NcPolynomial::constant(CRat::i()).hbar_shift(1));
    }

    #[test]
    fn whitespace_insensitive() {
        let a = parse_nc_polynomial("q*p-p*q").unwrap();
        let b = parse_nc_polynomial("  q * p -  p * q ").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn parenthesized_powers() {
        let p = parse_nc_polynomial("(q + p)^2").unwrap();
        // q^2 + qp + pq + p^2
        assert_eq!(p.num_terms(), 4);
    }

    #[test]
    fn rejects_unknown_symbols() {
        assert!(parse_nc_polynomial("q + x").is_err());
        assert!(parse_nc_polynomial("q +").is_err());
        assert!(parse_nc_polynomial("(q").is_err());
    }

    #[test]
    fn commutative_parse() {
        let v = parse_c_polynomial("q^2/2").unwrap();
        assert_eq!(v.coeff(2, 0, 0), CRat::from_ratio(1, 2));
    }
}
