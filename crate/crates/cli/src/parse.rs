//! Polynomial expressions: integers, `p/q`, `x`, `y`, the cyclotomic
//! generator `z`, `+ - * / ^` and parentheses, with an optional leading
//! `field Q` / `field Q(zeta N)` header.

use std::fmt;

use num_bigint::BigInt;
use ritt_core::algebra::{BiPoly, DEFAULT_DEGREE_CAP};
use ritt_core::{BivarCurve, Field, Poly, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    Syntax { pos: usize, msg: String },
    Field(String),
    Cap(String),
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { pos, msg } => write!(f, "syntax error at position {pos}: {msg}"),
            ParseError::Field(m) => write!(f, "{m}"),
            ParseError::Cap(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for ParseError {}

type PResult<T> = Result<T, ParseError>;

fn syntax<T>(pos: usize, msg: impl Into<String>) -> PResult<T> {
    Err(ParseError::Syntax { pos, msg: msg.into() })
}

/// `Q`, `Q(zeta N)`, with or without the leading `field` keyword.
pub fn parse_field(text: &str) -> PResult<Field> {
    let t = text.trim();
    let t = t.strip_prefix("field").map(str::trim_start).unwrap_or(t);
    let compact: String = t.chars().filter(|c| !c.is_whitespace()).collect();
    if compact == "Q" {
        return Ok(Field::rationals());
    }
    let n = compact
        .strip_prefix("Q(zeta")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| ParseError::Field(format!("unknown field `{text}`; expected Q or Q(zeta N)")))?;
    let m: u32 = n
        .parse()
        .map_err(|_| ParseError::Field(format!("bad cyclotomic order `{n}`")))?;
    Field::cyclotomic(m).map_err(|e| ParseError::Field(e.to_string()))
}

/// Splits off a `field ...` header line (ended by a newline or `;`).
pub fn split_header(text: &str) -> PResult<(Option<Field>, &str)> {
    let t = text.trim_start();
    if !t.starts_with("field") {
        return Ok((None, text));
    }
    let end = t.find(['\n', ';']).ok_or_else(|| {
        ParseError::Field("field header must be followed by a newline or `;`".into())
    })?;
    let field = parse_field(&t[..end])?;
    Ok((Some(field), &t[end + 1..]))
}

/// The field in force: a header inside the text must agree with `default`
/// when one was given explicitly.
fn resolve_field(text: &str, default: &Field, explicit: bool) -> PResult<(Field, String)> {
    let (header, body) = split_header(text)?;
    match header {
        Some(h) if explicit && h != *default => Err(ParseError::Field(format!(
            "field header {h} disagrees with --field {default}"
        ))),
        Some(h) => Ok((h, body.to_string())),
        None => Ok((default.clone(), body.to_string())),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    X,
    Y,
    Z,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(s: &str) -> PResult<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = s.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '0'..='9' => {
                let mut j = i;
                while j < chars.len() && chars[j].1.is_ascii_digit() {
                    j += 1;
                }
                let end = chars.get(j).map_or(s.len(), |c| c.0);
                let n: BigInt = s[pos..end].parse().expect("digits");
                out.push((pos, Tok::Num(n)));
                i = j;
                continue;
            }
            'x' => Tok::X,
            'y' => Tok::Y,
            'z' => Tok::Z,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => return syntax(pos, format!("unexpected character `{other}`")),
        };
        out.push((pos, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    field: &'a Field,
}

impl Parser<'_> {
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

    // expr := ['-'] term (('+' | '-') term)*
    fn expr(&mut self) -> PResult<BiPoly> {
        let mut acc = if self.peek() == Some(&Tok::Minus) {
            self.bump();
            -&self.term()?
        } else {
            self.term()?
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

    // term := factor (('*' | '/') factor)*
    fn term(&mut self) -> PResult<BiPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let rhs = self.factor()?;
                    acc = &acc * &rhs;
                    self.check_cap(&acc)?;
                }
                Some(Tok::Slash) => {
                    let pos = self.pos();
                    self.bump();
                    let rhs = self.factor()?;
                    let c = constant_of(&rhs).ok_or_else(|| ParseError::Syntax {
                        pos,
                        msg: "division is only by nonzero constants".into(),
                    })?;
                    let inv = c.inv().ok_or_else(|| ParseError::Syntax {
                        pos,
                        msg: "division by zero".into(),
                    })?;
                    acc = acc.scale(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    // factor := ['-'] atom ('^' int)?
    fn factor(&mut self) -> PResult<BiPoly> {
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            return Ok(-&self.factor()?);
        }
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        let Some(Tok::Num(e)) = self.bump() else {
            return syntax(pos, "exponent must be a nonnegative integer literal");
        };
        let e: u64 = (&e)
            .try_into()
            .map_err(|_| ParseError::Cap(format!("exponent {e} is too large")))?;
        let est = (base.degree_x() + base.degree_y()) as u64 * e;
        if est > DEFAULT_DEGREE_CAP as u64 {
            return Err(ParseError::Cap(format!(
                "resource cap exceeded: degree {est} exceeds {DEFAULT_DEGREE_CAP}"
            )));
        }
        if let Some(c) = constant_of(&base) {
            return Ok(BiPoly::from_x(&Poly::constant(self.field, c.pow(e as i64))));
        }
        let mut acc = BiPoly::one(self.field);
        for _ in 0..e {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    fn atom(&mut self) -> PResult<BiPoly> {
        let pos = self.pos();
        let field = self.field;
        match self.bump() {
            Some(Tok::Num(n)) => Ok(BiPoly::from_x(&Poly::constant(field, Scalar::from_bigint(n)))),
            Some(Tok::X) => Ok(BiPoly::from_x(&Poly::x(field))),
            Some(Tok::Y) => Ok(BiPoly::from_y(&Poly::x(field))),
            Some(Tok::Z) => {
                if field.is_rational() {
                    return Err(ParseError::Field(format!(
                        "`z` at position {pos} needs a cyclotomic field header"
                    )));
                }
                Ok(BiPoly::from_x(&Poly::constant(field, Scalar::zeta(field))))
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                let close = self.pos();
                if self.bump() != Some(Tok::RParen) {
                    return syntax(close, "expected `)`");
                }
                Ok(inner)
            }
            Some(t) => syntax(pos, format!("unexpected token {t:?}")),
            None => syntax(pos, "unexpected end of input"),
        }
    }

    fn check_cap(&self, p: &BiPoly) -> PResult<()> {
        if p.total_degree() > DEFAULT_DEGREE_CAP {
            return Err(ParseError::Cap(format!(
                "resource cap exceeded: degree {} exceeds {DEFAULT_DEGREE_CAP}",
                p.total_degree()
            )));
        }
        Ok(())
    }
}

fn constant_of(p: &BiPoly) -> Option<Scalar> {
    (p.degree_x() == 0 && p.degree_y() == 0).then(|| p.coeff(0, 0))
}

/// Parses a bivariate expression over `field`; a header in the text must
/// match when `explicit` is set, and otherwise overrides `field`.
pub fn parse_bipoly(text: &str, field: &Field, explicit: bool) -> PResult<(BiPoly, Field)> {
    let (field, body) = resolve_field(text, field, explicit)?;
    let toks = lex(&body)?;
    if toks.is_empty() {
        return syntax(0, "empty expression");
    }
    let mut p = Parser {
        toks,
        at: 0,
        end: body.len(),
        field: &field,
    };
    let out = p.expr()?;
    if p.at < p.toks.len() {
        return syntax(p.pos(), "unexpected trailing input");
    }
    Ok((out, field))
}

pub fn parse_poly_in(text: &str, field: &Field, explicit: bool) -> PResult<Poly> {
    let (b, field) = parse_bipoly(text, field, explicit)?;
    if b.degree_y() > 0 {
        return Err(ParseError::Syntax {
            pos: 0,
            msg: "`y` is only allowed in curves".into(),
        });
    }
    let coeffs = (0..=b.degree_x()).map(|i| b.coeff(i, 0)).collect();
    Ok(Poly::new(&field, coeffs))
}

pub fn parse_poly(text: &str, field: &Field) -> PResult<Poly> {
    parse_poly_in(text, field, false)
}

pub fn parse_scalar(text: &str, field: &Field, explicit: bool) -> PResult<Scalar> {
    let p = parse_poly_in(text, field, explicit)?;
    if p.degree() > 0 {
        return syntax(0, "expected a constant");
    }
    Ok(p.coeff(0))
}

pub fn parse_curve(text: &str, field: &Field, explicit: bool) -> PResult<BivarCurve> {
    let (b, _) = parse_bipoly(text, field, explicit)?;
    BivarCurve::new(b).map_err(|e| ParseError::Syntax { pos: 0, msg: e.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::rationals()
    }

    #[test]
    fn basic_expressions() {
        let f = parse_poly("x^3 + x", &q()).unwrap();
        assert_eq!(f, Poly::from_ints(&q(), &[0, 1, 0, 1]));
        let g = parse_poly("x^5 + 2*x^4 + x^3", &q()).unwrap();
        assert_eq!(g, parse_poly("x^3*(x+1)^2", &q()).unwrap());
        assert_eq!(parse_poly("-1/2*x^2 - 3", &q()).unwrap().to_string(), "-1/2*x^2 - 3");
        assert_eq!(parse_poly("(x - 1)/4", &q()).unwrap().to_string(), "1/4*x - 1/4");
        assert_eq!(parse_poly("--x", &q()).unwrap().to_string(), "x");
    }

    #[test]
    fn headers_and_generator() {
        let c = parse_curve("field Q(zeta 7); x - z*y", &q(), false).unwrap();
        assert_eq!(c.field(), &Field::cyclotomic(7).unwrap());
        let k7 = Field::cyclotomic(7).unwrap();
        let p = parse_poly("(z + 1)*x^2 - z^3", &k7).unwrap();
        assert_eq!(parse_poly(&p.to_string(), &k7).unwrap(), p);
        assert!(matches!(parse_poly("z*x", &q()), Err(ParseError::Field(_))));
        assert!(matches!(parse_curve("field Q(zeta 5); x", &k7, true), Err(ParseError::Field(_))));
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(
            parse_poly("x + * 2", &q()),
            Err(ParseError::Syntax { pos: 4, msg: "unexpected token Star".into() })
        );
        assert!(matches!(parse_poly("x^y", &q()), Err(ParseError::Syntax { pos: 2, .. })));
        assert!(matches!(parse_poly("(x + 1", &q()), Err(ParseError::Syntax { pos: 6, .. })));
        assert!(matches!(parse_poly("x / x", &q()), Err(ParseError::Syntax { pos: 2, .. })));
        assert!(matches!(parse_poly("x ? 1", &q()), Err(ParseError::Syntax { pos: 2, .. })));
        assert!(matches!(parse_poly("x^20000", &q()), Err(ParseError::Cap(_))));
        assert!(matches!(parse_poly("x*y", &q()), Err(ParseError::Syntax { .. })));
    }
}
