//! Text syntax for forms: integer/rational coefficients, variables, `+ - * ^` and parentheses.
//!
//! The ring is inferred from the variables that occur unless one is given explicitly:
//! `x0..xn` (with optional `z,w`) gives `Pⁿ` or `Pⁿ×P¹`, `a,b,c` the ternary ring, a form
//! using `w` or bihomogeneous in `x,y | z,w` gives `P¹×P¹`, otherwise `x,y` (binary) or
//! `x,y,z` (ternary).

use std::str::FromStr;
use std::sync::Arc;

use apolar_core::exactalg::parse_rational;
use apolar_core::{GradedForm, Poly, Rational, Ring};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error(transparent)]
    Form(#[from] apolar_core::Error),
}

impl ParseError {
    pub fn offset(&self) -> Option<usize> {
        match self {
            ParseError::Syntax { offset, .. } => Some(*offset),
            ParseError::Form(_) => None,
        }
    }

    fn at(offset: usize, message: impl Into<String>) -> Self {
        ParseError::Syntax { offset, message: message.into() }
    }
}

/// Explicit choice of ambient ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingSpec {
    /// `x, y`.
    Binary,
    /// `x, y, z` or `a, b, c`, whichever the text uses.
    Ternary,
    /// `x, y | z, w`.
    P1xP1,
    /// `x0..xn | z, w`.
    PnxP1(usize),
}

impl FromStr for RingSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "binary" => Ok(RingSpec::Binary),
            "ternary" => Ok(RingSpec::Ternary),
            "p1xp1" => Ok(RingSpec::P1xP1),
            _ => s
                .strip_prefix("p")
                .and_then(|r| r.strip_suffix("xp1"))
                .and_then(|n| n.parse().ok())
                .filter(|&n: &usize| n >= 1)
                .map(RingSpec::PnxP1)
                .ok_or_else(|| format!("unknown ring {s:?} (binary, ternary, p1xp1, pNxp1)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push((start, Tok::Num(parse_rational(&text[start..i]).expect("digits"))));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
        } else if b"+-*^()/".contains(&c) {
            out.push((i, Tok::Op(c as char)));
            i += 1;
        } else {
            let ch = text[i..].chars().next().expect("in bounds");
            return Err(ParseError::at(i, format!("unexpected character {ch:?}")));
        }
    }
    Ok(out)
}

/// Expression tree, kept so the same text can be evaluated over a chosen ring.
#[derive(Clone, Debug)]
enum Expr {
    Num(Rational),
    Var(usize, String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat('*') {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let at = self.offset();
        match self.toks.get(self.pos).map(|(_, t)| t.clone()) {
            Some(Tok::Num(n)) if n.is_integer() => {
                self.pos += 1;
                let k = u32::try_from(n.to_integer())
                    .map_err(|_| ParseError::at(at, "exponent too large"))?;
                Ok(Expr::Pow(Box::new(base), k))
            }
            _ => Err(ParseError::at(at, "expected a nonnegative integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let at = self.offset();
        match self.toks.get(self.pos).map(|(_, t)| t.clone()) {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                if self.eat('/') {
                    let den_at = self.offset();
                    match self.toks.get(self.pos).map(|(_, t)| t.clone()) {
                        Some(Tok::Num(d)) if !num_traits::Zero::is_zero(&d) => {
                            self.pos += 1;
                            Ok(Expr::Num(n / d))
                        }
                        Some(Tok::Num(_)) => Err(ParseError::at(den_at, "zero denominator")),
                        _ => Err(ParseError::at(den_at, "expected an integer denominator")),
                    }
                } else {
                    Ok(Expr::Num(n))
                }
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(Expr::Var(at, name))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(ParseError::at(self.offset(), "expected ')'"));
                }
                Ok(inner)
            }
            Some(Tok::Op(c)) => Err(ParseError::at(at, format!("unexpected {c:?}"))),
            None => Err(ParseError::at(at, "unexpected end of input")),
        }
    }
}

fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(ParseError::at(0, "empty expression"));
    }
    let mut p = Parser { toks, pos: 0, end: text.len() };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        let at = p.offset();
        return Err(ParseError::at(at, "unexpected trailing input"));
    }
    Ok(e)
}

fn variables(e: &Expr, out: &mut Vec<(usize, String)>) {
    match e {
        Expr::Num(_) => {}
        Expr::Var(at, n) => out.push((*at, n.clone())),
        Expr::Neg(a) | Expr::Pow(a, _) => variables(a, out),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
            variables(a, out);
            variables(b, out);
        }
    }
}

fn eval(e: &Expr, ring: &Ring) -> Result<Poly, ParseError> {
    let n = ring.nvars();
    Ok(match e {
        Expr::Num(c) => Poly::constant(n, c.clone()),
        Expr::Var(at, name) => ring
            .var(name)
            .ok_or_else(|| ParseError::at(*at, format!("variable {name:?} is not in ring {ring}")))?,
        Expr::Neg(a) => -&eval(a, ring)?,
        Expr::Add(a, b) => &eval(a, ring)? + &eval(b, ring)?,
        Expr::Sub(a, b) => &eval(a, ring)? - &eval(b, ring)?,
        Expr::Mul(a, b) => &eval(a, ring)? * &eval(b, ring)?,
        Expr::Pow(a, k) => eval(a, ring)?.pow(*k),
    })
}

fn indexed_x(name: &str) -> Option<usize> {
    name.strip_prefix('x').filter(|r| !r.is_empty()).and_then(|r| r.parse().ok())
}

fn pn_x_p1_names(n: usize, with_second: bool) -> Result<Arc<Ring>, ParseError> {
    let first: Vec<String> = (0..=n).map(|i| format!("x{i}")).collect();
    let first: Vec<&str> = first.iter().map(String::as_str).collect();
    Ok(if with_second { Ring::new(&[&first, &["z", "w"]])? } else { Ring::new(&[&first])? })
}

fn ring_for(spec: RingSpec, names: &[String]) -> Result<Arc<Ring>, ParseError> {
    let has = |v: &str| names.iter().any(|n| n == v);
    Ok(match spec {
        RingSpec::Binary => Ring::binary(),
        RingSpec::Ternary if has("a") || has("b") || has("c") => Ring::projective(&["a", "b", "c"]),
        RingSpec::Ternary => Ring::ternary(),
        RingSpec::P1xP1 => Ring::p1xp1(),
        RingSpec::PnxP1(n) => pn_x_p1_names(n, true)?,
    })
}

/// Candidate rings in order of preference for the variables that occur.
fn inferred_rings(names: &[(usize, String)]) -> Result<Vec<Arc<Ring>>, ParseError> {
    let plain: Vec<String> = names.iter().map(|(_, n)| n.clone()).collect();
    let has = |v: &str| plain.iter().any(|n| n == v);
    if let Some(max) = plain.iter().filter_map(|n| indexed_x(n)).max() {
        let n = max.max(1);
        return Ok(vec![pn_x_p1_names(n, has("z") || has("w"))?]);
    }
    if has("a") || has("b") || has("c") {
        return Ok(vec![Ring::projective(&["a", "b", "c"])]);
    }
    if has("w") {
        return Ok(vec![Ring::p1xp1()]);
    }
    if has("z") {
        return Ok(vec![Ring::p1xp1(), Ring::ternary()]);
    }
    Ok(vec![Ring::binary()])
}

/// Parses a form, inferring the ring from its variables.
pub fn parse_form(text: &str) -> Result<GradedForm, ParseError> {
    parse_form_in(text, None)
}

/// Parses a form over an explicit ring, or infers one when `spec` is `None`.
pub fn parse_form_in(text: &str, spec: Option<RingSpec>) -> Result<GradedForm, ParseError> {
    let expr = parse_expr(text)?;
    let mut names = Vec::new();
    variables(&expr, &mut names);
    let rings = match spec {
        Some(s) => {
            let plain: Vec<String> = names.iter().map(|(_, n)| n.clone()).collect();
            vec![ring_for(s, &plain)?]
        }
        None => inferred_rings(&names)?,
    };
    let mut first_err = None;
    for ring in rings {
        let poly = eval(&expr, &ring)?;
        match GradedForm::from_poly(ring, poly) {
            Ok(f) => return Ok(f),
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    Err(first_err.expect("at least one candidate ring").into())
}

/// Parses a rational written `p`, `-p` or `p/q`.
pub fn parse_number(text: &str) -> Option<Rational> {
    parse_rational(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use apolar_core::exactalg::rat;
    use apolar_core::Error;
    use proptest::prelude::*;

    const WORKED_F: &str = "4*x^2*z^2 + 6*x^2*z*w + 2*x^2*w^2 + 8*x*y*z^2 + 7*x*y*z*w \
                           + 5*x*y*w^2 + 3*y^2*z^2 + 7*y^2*z*w + 2*y^2*w^2";

    #[test]
    fn worked_example_parses() {
        let f = parse_form(WORKED_F).unwrap();
        assert_eq!(f.num_terms(), 9);
        assert_eq!(f.degree().parts(), &[2, 2]);
        assert_eq!(f.coefficient(&[1, 1, 1, 1]), rat(7));
    }

    #[test]
    fn inhomogeneous_input_names_monomials() {
        match parse_form("x^2*z + y") {
            Err(ParseError::Form(Error::Inhomogeneous { first, second })) => {
                let both = format!("{first} {second}");
                assert!(both.contains("x^2*z") && both.contains('y'), "{both}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        assert_eq!(parse_form("x^2 + * y").unwrap_err().offset(), Some(6));
        assert_eq!(parse_form("(x + y").unwrap_err().offset(), Some(6));
        assert_eq!(parse_form("x $ y").unwrap_err().offset(), Some(2));
        assert_eq!(parse_form("x^y").unwrap_err().offset(), Some(2));
        assert_eq!(parse_form("").unwrap_err().offset(), Some(0));
        assert_eq!(parse_form("x + q").unwrap_err().offset(), Some(4));
    }

    #[test]
    fn ring_inference() {
        assert_eq!(parse_form("x^3 + y^3").unwrap().ring().block_sizes(), vec![2]);
        let q = parse_form("(x+y)^4 + (x^3+y^3)*z").unwrap();
        assert_eq!(q.ring().block_sizes(), vec![3]);
        assert_eq!(q.degree().parts(), &[4]);
        assert_eq!(parse_form("x*z").unwrap().ring().block_sizes(), vec![2, 2]);
        assert_eq!(parse_form("a^2 + b*c").unwrap().ring().block_sizes(), vec![3]);
        let pn = parse_form("x0*x2*z^2 + x1^2*w^2").unwrap();
        assert_eq!(pn.ring().block_sizes(), vec![3, 2]);
        let t = parse_form_in("x*z", Some(RingSpec::Ternary)).unwrap();
        assert_eq!(t.ring().block_sizes(), vec![3]);
    }

    #[test]
    fn rationals_and_unary_minus() {
        let f = parse_form("-3/4*x^2 - -y^2").unwrap();
        assert_eq!(f.coefficient(&[2, 0]), Rational::new((-3).into(), 4.into()));
        assert_eq!(f.coefficient(&[0, 2]), rat(1));
        assert!(parse_form("x/0").is_err());
    }

    #[test]
    fn ring_spec_names() {
        assert_eq!("p3xp1".parse::<RingSpec>(), Ok(RingSpec::PnxP1(3)));
        assert!("p0xp1".parse::<RingSpec>().is_err());
        assert_eq!("p1xp1".parse::<RingSpec>(), Ok(RingSpec::P1xP1));
    }

    proptest! {
        #[test]
        fn printer_round_trip(coeffs in proptest::collection::vec(-20i64..=20, 9)) {
            let monos = ["x^2*z^2", "x^2*z*w", "x^2*w^2", "x*y*z^2", "x*y*z*w", "x*y*w^2",
                         "y^2*z^2", "y^2*z*w", "y^2*w^2"];
            prop_assume!(coeffs.iter().any(|&c| c != 0));
            let text: Vec<String> = coeffs.iter().zip(monos).map(|(c, m)| format!("({c})*{m}")).collect();
            let f = parse_form(&text.join(" + ")).unwrap();
            let g = parse_form_in(&f.to_string(), Some(RingSpec::P1xP1)).unwrap();
            prop_assert_eq!(f.canonical_terms(), g.canonical_terms());
        }
    }

    #[test]
    fn single_square_round_trip() {
        let f = parse_form("x^2").unwrap();
        let g = parse_form(&f.to_string()).unwrap();
        assert_eq!(f.canonical_terms(), g.canonical_terms());
    }
}
