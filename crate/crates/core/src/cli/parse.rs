//! Reader for equation files and polynomial expressions.
//!
//! ```text
//! # comment
//! n=2
//! v = z1*zb1 + (1/2)*z1^2*zb2 + (1/2)*zb1^2*z2 - 3/4*z2^2*zb2^2*u
//! ```

use std::fmt;

use num_traits::Zero;

use crate::poly_core::{GaussRational, Jet, MonomialKey, Rational, RealnessViolation};
use crate::weights::parse_rational;

/// Bound used for parsed jets before the engine applies its own.
pub const PARSE_BOUND: u32 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyntaxError {
    /// 1-based.
    pub line: usize,
    /// 1-based, in characters.
    pub column: usize,
    pub message: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum InputError {
    #[error("syntax error at {0}")]
    Syntax(SyntaxError),
    #[error("realness violation: {0}")]
    Realness(RealnessViolation),
}

#[derive(Clone, Debug)]
pub struct InputDocument {
    pub n: usize,
    pub equation: Jet,
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    /// Column of `chars[0]`, 1-based.
    offset: usize,
    n: usize,
}

impl Cursor {
    fn new(src: &str, n: usize, line: usize, offset: usize) -> Self {
        Self { chars: src.chars().collect(), pos: 0, line, offset, n }
    }

    fn error(&self, message: impl Into<String>) -> SyntaxError {
        SyntaxError { line: self.line, column: self.offset + self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn integer(&mut self, what: &str) -> Result<u32, SyntaxError> {
        let at = self.pos;
        let d = self.digits();
        d.parse().map_err(|_| {
            self.pos = at;
            self.error(format!("expected {what}"))
        })
    }

    /// `a` or `a/b` with decimal `a`, `b`.
    fn rational(&mut self) -> Result<Rational, SyntaxError> {
        let start = self.pos;
        let num = self.digits();
        if num.is_empty() {
            return Err(self.error("expected a number"));
        }
        let text = if self.eat('/') {
            let den = self.digits();
            if den.is_empty() {
                return Err(self.error("expected a denominator"));
            }
            format!("{num}/{den}")
        } else {
            num
        };
        parse_rational(&text).ok_or_else(|| {
            self.pos = start;
            self.error("zero denominator")
        })
    }

    /// `Σ ±(q | q*i | i)` inside parentheses.
    fn gaussian(&mut self) -> Result<GaussRational, SyntaxError> {
        let mut acc = GaussRational::zero();
        let mut first = true;
        loop {
            let neg = match self.peek() {
                Some('+') if !first => {
                    self.pos += 1;
                    false
                }
                Some('-') => {
                    self.pos += 1;
                    true
                }
                _ if first => false,
                _ => break,
            };
            first = false;
            let part = if self.eat('i') {
                GaussRational::i()
            } else {
                let q = self.rational()?;
                if self.eat('*') {
                    if !self.eat('i') {
                        return Err(self.error("expected i"));
                    }
                    GaussRational::new(Rational::zero(), q)
                } else {
                    GaussRational::from_real(q)
                }
            };
            acc = if neg { acc - part } else { acc + part };
        }
        Ok(acc)
    }

    fn name(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_alphanumeric()) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    /// A coefficient or a variable power, multiplied into `(coeff, exps)`.
    fn factor(&mut self, coeff: &mut GaussRational, exps: &mut [u16]) -> Result<(), SyntaxError> {
        let n = self.n;
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let g = self.gaussian()?;
                if !self.eat(')') {
                    return Err(self.error("expected )"));
                }
                *coeff = &*coeff * &g;
            }
            Some(c) if c.is_ascii_digit() => {
                let q = self.rational()?;
                *coeff = coeff.scale(&q);
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let at = self.pos;
                let name = self.name();
                let slot = if name == "i" {
                    *coeff = coeff.mul_i();
                    None
                } else if name == "u" {
                    Some(2 * n)
                } else {
                    let (conj, digits) = match name.strip_prefix("zb") {
                        Some(d) => (true, d),
                        None => (false, name.strip_prefix('z').unwrap_or("")),
                    };
                    let k = digits.parse::<usize>().ok().filter(|&k| k >= 1 && !digits.starts_with('0'));
                    let Some(k) = k else {
                        self.pos = at;
                        return Err(self.error(format!("unknown variable `{name}`")));
                    };
                    if k > n {
                        self.pos = at;
                        return Err(self.error(format!("variable `{name}` exceeds dimension n={n}")));
                    }
                    Some(if conj { n + k - 1 } else { k - 1 })
                };
                let e = if self.eat('^') { self.integer("an exponent")? } else { 1 };
                if let Some(s) = slot {
                    let total = exps[s] as u32 + e;
                    exps[s] = u16::try_from(total).map_err(|_| self.error("exponent too large"))?;
                } else if e != 1 {
                    *coeff = &coeff.clone() * &GaussRational::i().pow(e - 1);
                }
            }
            Some(c) => return Err(self.error(format!("unexpected `{c}`"))),
            None => return Err(self.error("unexpected end of expression")),
        }
        Ok(())
    }

    fn expression(&mut self) -> Result<Jet, SyntaxError> {
        let n = self.n;
        let mut jet = Jet::zero(n, PARSE_BOUND);
        let mut first = true;
        loop {
            let neg = match self.peek() {
                None if !first => break,
                Some('+') => {
                    self.pos += 1;
                    false
                }
                Some('-') => {
                    self.pos += 1;
                    true
                }
                _ if first => false,
                Some(c) => return Err(self.error(format!("expected + or -, found `{c}`"))),
                None => break,
            };
            first = false;
            let mut coeff = GaussRational::from_int(if neg { -1 } else { 1 });
            let mut exps = vec![0u16; 2 * n + 1];
            self.factor(&mut coeff, &mut exps)?;
            while self.eat('*') {
                self.factor(&mut coeff, &mut exps)?;
            }
            let key = MonomialKey::new(&exps[..n], &exps[n..2 * n], exps[2 * n]);
            jet.add_term(key, coeff);
        }
        Ok(jet)
    }
}

/// Parses a polynomial in `z1..zn, zb1..zbn, u`; no realness check.
pub fn parse_expression(text: &str, n: usize) -> Result<Jet, SyntaxError> {
    parse_at(text, n, 1, 1)
}

fn parse_at(text: &str, n: usize, line: usize, offset: usize) -> Result<Jet, SyntaxError> {
    let mut c = Cursor::new(text, n, line, offset);
    if c.peek().is_none() {
        return Err(c.error("empty expression"));
    }
    c.expression()
}

/// Parses a defining function and checks Hermitian symmetry.
pub fn parse_equation(text: &str, n: usize) -> Result<Jet, InputError> {
    let jet = parse_expression(text, n).map_err(InputError::Syntax)?;
    jet.assert_real().map_err(InputError::Realness)?;
    Ok(jet)
}

/// Parses a whole input file.
pub fn parse_document(text: &str) -> Result<InputDocument, InputError> {
    let mut n: Option<usize> = None;
    let mut equation: Option<(usize, usize, String)> = None;
    let syntax = |line: usize, column: usize, message: &str| InputError::Syntax(SyntaxError { line, column, message: message.to_string() });
    let mut last = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last = line;
        let body = raw.split('#').next().unwrap_or("");
        let trimmed = body.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let indent = body.chars().count() - trimmed.chars().count();
        let Some((lhs, rhs)) = trimmed.split_once('=') else {
            return Err(syntax(line, indent + 1, "expected `n=<int>` or `v = <expr>`"));
        };
        let rhs_offset = indent + lhs.chars().count() + 2;
        match lhs.trim() {
            "n" => {
                if n.is_some() {
                    return Err(syntax(line, indent + 1, "duplicate dimension line"));
                }
                let value = rhs.trim().parse::<usize>().ok().filter(|&v| v >= 1);
                n = Some(value.ok_or_else(|| syntax(line, rhs_offset, "dimension must be a positive integer"))?);
            }
            "v" => {
                if equation.is_some() {
                    return Err(syntax(line, indent + 1, "duplicate equation line"));
                }
                equation = Some((line, rhs_offset, rhs.to_string()));
            }
            other => return Err(syntax(line, indent + 1, &format!("unknown field `{other}`"))),
        }
    }
    let n = n.ok_or_else(|| syntax(last.max(1), 1, "missing `n=` line"))?;
    let (line, offset, rhs) = equation.ok_or_else(|| syntax(last.max(1), 1, "missing `v =` line"))?;
    let jet = parse_at(&rhs, n, line, offset).map_err(InputError::Syntax)?;
    jet.assert_real().map_err(InputError::Realness)?;
    Ok(InputDocument { n, equation: jet })
}

/// Canonical file text for a defining function.
pub fn print_document(f: &Jet) -> String {
    format!("n={}\nv = {}\n", f.n(), f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly_core::rat;

    #[test]
    fn grammar() {
        let f = parse_equation("z1^2*zb1^2 + z2^3*zb2^3", 2).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f.coeff(&MonomialKey::new(&[0, 3], &[0, 3], 0)), GaussRational::from_int(1));
        let g = parse_equation("(1/2)*z1^2*zb2 + (1/2)*zb1^2*z2", 2).unwrap();
        assert_eq!(g.coeff(&MonomialKey::new(&[2, 0], &[0, 1], 0)), GaussRational::from_real(rat(1, 2)));
        let h = parse_expression("(1/2+2/3*i)*z1 - (3-i)*zb1*u^2 + 7", 1).unwrap();
        assert_eq!(h.coeff(&MonomialKey::new(&[1], &[0], 0)), GaussRational::from_parts(1, 2, 2, 3));
        assert_eq!(h.coeff(&MonomialKey::new(&[0], &[1], 2)), GaussRational::from_parts(-3, 1, 1, 1));
        assert_eq!(h.coeff(&MonomialKey::new(&[0], &[0], 0)), GaussRational::from_int(7));
    }

    #[test]
    fn rejections() {
        assert!(matches!(parse_equation("i*z1*zb1", 1), Err(InputError::Realness(_))));
        let Err(InputError::Syntax(e)) = parse_equation("z1*zb1 + z3", 2) else { panic!() };
        assert_eq!((e.line, e.column), (1, 10));
        let Err(InputError::Syntax(e)) = parse_document("n=1\n\nv = z1*zb1 + * z1\n") else { panic!() };
        assert_eq!((e.line, e.column), (3, 14));
        assert!(parse_document("v = z1*zb1").is_err());
        assert!(parse_expression("z1^", 1).is_err());
        assert!(parse_expression("(1/0)", 1).is_err());
    }

    #[test]
    fn print_parse_round_trip() {
        let text = "# model\nn=2\nv = z1*zb1 - 2*z1^2*zb2^3 - 2*z2^3*zb1^2 + (1/3-i)*z2*zb2^2*u + (1/3+i)*z2^2*zb2*u\n";
        let doc = parse_document(text).unwrap();
        let printed = print_document(&doc.equation);
        let again = parse_document(&printed).unwrap();
        assert_eq!(again.equation, doc.equation);
        assert_eq!(print_document(&again.equation), printed);
    }
}
