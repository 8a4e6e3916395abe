//! Text syntax for Weyl algebra elements.
//!
//! Variables are `x1..xn` and `d1..dn`; literals are integers or `p/q`;
//! operators are `+ - * ^` with parentheses. `*` is mandatory between
//! factors and `^` takes a nonnegative integer.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{WeylElement, WeylMonomial};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    X(usize),
    D(usize),
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

fn tokenize(text: &str, n: usize, offset: usize) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    while i < bytes.len() {
        let c = bytes[i] as char;
        let pos = offset + i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = simple {
            out.push((t, pos));
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let v: BigInt = text[start..i].parse().expect("digits");
            out.push((Tok::Int(v), pos));
            continue;
        }
        if c == 'x' || c == 'd' {
            let start = i + 1;
            let mut j = start;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            if j == start {
                return Err(syntax(pos, format!("variable '{c}' needs an index")));
            }
            let index: usize = text[start..j]
                .parse()
                .map_err(|_| syntax(pos, "variable index too large"))?;
            if index == 0 || index > n {
                return Err(Error::VariableIndex { index, n, pos });
            }
            out.push((
                if c == 'x' {
                    Tok::X(index - 1)
                } else {
                    Tok::D(index - 1)
                },
                pos,
            ));
            i = j;
            continue;
        }
        return Err(syntax(pos, format!("unexpected character '{c}'")));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
    n: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(t, _)| t.clone());
        self.at += 1;
        t
    }

    fn expr(&mut self) -> Result<WeylElement> {
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                -&self.term()?
            }
            Some(Tok::Plus) => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<WeylElement> {
        let mut acc = self.factor()?;
        while let Some(Tok::Star) = self.peek() {
            self.bump();
            acc = &acc * &self.factor()?;
        }
        match self.peek() {
            Some(Tok::Int(_)) | Some(Tok::X(_)) | Some(Tok::D(_)) | Some(Tok::LParen) => {
                Err(syntax(self.pos(), "missing '*' between factors"))
            }
            _ => Ok(acc),
        }
    }

    fn factor(&mut self) -> Result<WeylElement> {
        if let Some(Tok::Minus) = self.peek() {
            self.bump();
            return Ok(-&self.factor()?);
        }
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            let pos = self.pos();
            let e = match self.bump() {
                Some(Tok::Int(v)) => {
                    u32::try_from(v).map_err(|_| syntax(pos, "exponent too large"))?
                }
                _ => return Err(syntax(pos, "'^' takes a nonnegative integer")),
            };
            let mut acc = WeylElement::one(self.n);
            for _ in 0..e {
                acc = &acc * &base;
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<WeylElement> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Int(p)) => {
                if let Some(Tok::Slash) = self.peek() {
                    self.bump();
                    let qpos = self.pos();
                    match self.bump() {
                        Some(Tok::Int(q)) if !q.is_zero() => {
                            Ok(WeylElement::constant(self.n, BigRational::new(p, q)))
                        }
                        Some(Tok::Int(_)) => Err(syntax(qpos, "zero denominator")),
                        _ => Err(syntax(qpos, "expected an integer denominator")),
                    }
                } else {
                    Ok(WeylElement::constant(self.n, BigRational::from_integer(p)))
                }
            }
            Some(Tok::X(i)) => Ok(WeylElement::x(self.n, i)),
            Some(Tok::D(i)) => Ok(WeylElement::d(self.n, i)),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                let close = self.pos();
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(syntax(close, "expected ')'")),
                }
            }
            Some(_) => Err(syntax(pos, "expected a number, variable or '('")),
            None => Err(syntax(pos, "unexpected end of input")),
        }
    }
}

fn parse_at(text: &str, n: usize, offset: usize) -> Result<WeylElement> {
    let toks = tokenize(text, n, offset)?;
    let end = offset + text.len();
    if toks.is_empty() {
        return Err(syntax(end, "empty expression"));
    }
    let mut p = Parser {
        toks,
        at: 0,
        end,
        n,
    };
    let out = p.expr()?;
    if p.at < p.toks.len() {
        return Err(syntax(p.pos(), "unexpected trailing input"));
    }
    Ok(out)
}

/// Parses an expression in `D_n`, normal-ordering the result.
pub fn parse(text: &str, n: usize) -> Result<WeylElement> {
    parse_at(text, n, 0)
}

/// Parses a relation row: either one expression, or `[e_1, ..., e_k]` for a
/// row of a free module of rank `k`.
pub fn parse_row(text: &str, n: usize) -> Result<Vec<WeylElement>> {
    let trimmed = text.trim_start();
    let lead = text.len() - trimmed.len();
    let trimmed = trimmed.trim_end();
    if !trimmed.starts_with('[') {
        return Ok(vec![parse(text, n)?]);
    }
    if !trimmed.ends_with(']') {
        return Err(syntax(lead + trimmed.len(), "expected ']' closing the row"));
    }
    let body = &trimmed[1..trimmed.len() - 1];
    let base = lead + 1;
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in body.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(parse_at(&body[start..i], n, base + start)?);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(parse_at(&body[start..], n, base + start)?);
    Ok(out)
}

/// `x1^2*x2*d1` style rendering; empty for the unit monomial.
pub(crate) fn render_monomial(m: &WeylMonomial, xname: &str, dname: &str) -> String {
    let n = m.nvars();
    let mut parts = Vec::new();
    for (i, &e) in m.x_exps().iter().enumerate() {
        push_power(&mut parts, xname, i + 1, e);
    }
    for (i, &e) in m.d_exps().iter().enumerate() {
        push_power(&mut parts, dname, i + 1, e);
    }
    debug_assert!(parts.len() <= 2 * n);
    parts.join("*")
}

fn push_power(parts: &mut Vec<String>, name: &str, idx: usize, e: u32) {
    match e {
        0 => {}
        1 => parts.push(format!("{name}{idx}")),
        _ => parts.push(format!("{name}{idx}^{e}")),
    }
}

pub(crate) fn render(f: &WeylElement) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (k, (m, c)) in f.terms().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if k == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let body = render_monomial(m, "x", "d");
        if body.is_empty() {
            s.push_str(&abs.to_string());
        } else if abs.is_one() {
            s.push_str(&body);
        } else {
            s.push_str(&format!("{abs}*{body}"));
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::q;
    use proptest::prelude::*;

    #[test]
    fn parser_normal_orders() {
        let f = parse("d1*x1", 1).unwrap();
        assert_eq!(f.to_string(), "x1*d1 + 1");
    }

    #[test]
    fn rational_literals() {
        let f = parse("x1^2 - 3/2*d2", 2).unwrap();
        let expected = &(&WeylElement::x(2, 0) * &WeylElement::x(2, 0))
            - &WeylElement::d(2, 1).scale(&BigRational::new(3.into(), 2.into()));
        assert_eq!(f, expected);
        assert_eq!(f.to_string(), "x1^2 - 3/2*d2");
    }

    #[test]
    fn index_out_of_range() {
        assert_eq!(
            parse("x0", 2),
            Err(Error::VariableIndex {
                index: 0,
                n: 2,
                pos: 0
            })
        );
        assert_eq!(
            parse("x1 + d3", 2),
            Err(Error::VariableIndex {
                index: 3,
                n: 2,
                pos: 5
            })
        );
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse("x1 d1", 1) {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 3),
            other => panic!("unexpected {other:?}"),
        }
        match parse("(x1 + 1", 1) {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 7),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse("x1^-1", 1),
            Err(Error::Syntax { pos: 3, .. })
        ));
        assert!(matches!(parse("1/0", 1), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse("", 1), Err(Error::Syntax { .. })));
    }

    #[test]
    fn rows() {
        let r = parse_row("[d1, -1]", 1).unwrap();
        assert_eq!(
            r,
            vec![WeylElement::d(1, 0), WeylElement::constant(1, q(-1))]
        );
        let r = parse_row("x1*(d1 + 1)", 1).unwrap();
        assert_eq!(r.len(), 1);
        assert!(matches!(
            parse_row("[x1, d5]", 1),
            Err(Error::VariableIndex {
                index: 5,
                pos: 5,
                ..
            })
        ));
    }

    fn arb_element(n: usize) -> impl Strategy<Value = WeylElement> {
        let term = (prop::collection::vec(0u32..3, 2 * n), -5i64..=5, 1i64..=3);
        prop::collection::vec(term, 0..5).prop_map(move |ts| {
            WeylElement::from_terms(
                n,
                ts.into_iter().map(|(e, p, qd)| {
                    (
                        WeylMonomial::from_exponents(e),
                        BigRational::new(p.into(), qd.into()),
                    )
                }),
            )
        })
    }

    proptest! {
        #[test]
        fn render_parse_roundtrip(f in arb_element(2)) {
            let text = f.to_string();
            prop_assert_eq!(parse(&text, 2).unwrap(), f);
        }
    }
}
