//! Expression language for user-supplied curves, surfaces and functions.
//!
//! ```text
//! source := [ "vars:" ident ("," ident)* newline ] sum
//! sum    := product (("+" | "-") product)*
//! product:= unary (("*" | "/") unary)*
//! unary  := "-" unary | power
//! power  := atom ["^" exponent]          right-associative
//! atom   := number | ident | ident "(" sum ("," sum)* ")" | "(" sum ")"
//! ```
//!
//! Exponents must fold to a rational constant with denominator 1, 2 or 3.
//! There is no implicit multiplication.

use std::collections::HashMap;
use std::fmt;

use crate::error::{ExprError, JetError};
use crate::scalar::{Elementary, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
    Cbrt,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "cbrt" => Func::Cbrt,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Cbrt => "cbrt",
        }
    }

    fn elementary(self) -> Elementary {
        match self {
            Func::Sin => Elementary::Sin,
            Func::Cos => Elementary::Cos,
            Func::Exp => Elementary::Exp,
            Func::Log => Elementary::Log,
            Func::Sqrt => Elementary::SQRT,
            Func::Cbrt => Elementary::CBRT,
        }
    }
}

/// Numeric literal; `ratio` is the exact value of its shortest decimal form,
/// when that fits in `i64`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Literal {
    pub value: f64,
    pub ratio: Option<(i64, i64)>,
}

impl Literal {
    pub fn new(value: f64) -> Literal {
        Literal { value, ratio: decimal_ratio(&format!("{value}")) }
    }
}

/// Exact value of a plain decimal string (`123.45`), when it fits in `i64`.
fn decimal_ratio(text: &str) -> Option<(i64, i64)> {
    let (int, frac) = text.split_once('.').unwrap_or((text, ""));
    if int.is_empty() && frac.is_empty() || !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let num: i64 = digits.parse().ok()?;
    let den = 10i64.checked_pow(frac.len() as u32)?;
    let g = gcd(num, den);
    Some((num / g, den / g))
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs().max(1)
    } else {
        gcd(b, a % b)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Var(usize),
    Num(Literal),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// base raised to `num/den`, `den ∈ {1,2,3}`, lowest terms
    Pow(Box<Expr>, i64, i64),
    Call(Func, Box<Expr>),
}

/// Parsed expression together with its ordered free-variable list.
#[derive(Clone, Debug, PartialEq)]
pub struct ExprAst {
    pub root: Expr,
    pub vars: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64, Option<(i64, i64)>),
    Ident(String),
    Sym(char),
    End,
}

fn lex(src: &str, base: usize) -> Result<Vec<(Tok, usize)>, ExprError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == b'.' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text = &src[start..i];
            let value: f64 = text.parse().map_err(|_| ExprError::SyntaxError {
                offset: base + start,
                message: format!("malformed number `{text}`"),
            })?;
            out.push((Tok::Num(value, Literal::new(value).ratio), base + start));
        } else if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].to_string()), base + start));
        } else if b"+-*/^(),".contains(&c) {
            out.push((Tok::Sym(c as char), base + i));
            i += 1;
        } else {
            let ch = src[i..].chars().next().unwrap();
            return Err(ExprError::SyntaxError { offset: base + i, message: format!("unexpected character `{ch}`") });
        }
    }
    out.push((Tok::End, base + src.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    vars: &'a mut Vec<String>,
    declared: bool,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, c: char) -> Result<(), ExprError> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&format!("expected `{c}`")))
        }
    }

    fn unexpected(&self, what: &str) -> ExprError {
        let found = match self.peek() {
            Tok::Num(v, _) => format!("number {v}"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::End => "end of input".to_string(),
        };
        ExprError::SyntaxError { offset: self.offset(), message: format!("{what}, found {found}") }
    }

    fn sum(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.product()?;
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
                }
                Tok::Sym('-') => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn product(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Sym('*') => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Sym('/') => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if *self.peek() == Tok::Sym('-') {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Sym('^') {
            return Ok(base);
        }
        self.bump();
        let at = self.offset();
        // the exponent is itself a unary expression, so `a^b^c = a^(b^c)`
        let e = self.unary()?;
        let (p, q) = fold_exponent(&e).ok_or_else(|| ExprError::ExponentError {
            offset: at,
            message: "exponent must be a constant integer or a fraction with denominator 2 or 3".into(),
        })?;
        Ok(Expr::Pow(Box::new(base), p, q))
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let (tok, at) = self.bump();
        match tok {
            Tok::Num(value, ratio) => Ok(Expr::Num(Literal { value, ratio })),
            Tok::Sym('(') => {
                let e = self.sum()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if *self.peek() == Tok::Sym('(') {
                    let f = Func::from_name(&name).ok_or(ExprError::UnknownFunction { name: name.clone(), offset: at })?;
                    self.bump();
                    let mut args = vec![self.sum()?];
                    while *self.peek() == Tok::Sym(',') {
                        self.bump();
                        args.push(self.sum()?);
                    }
                    self.expect(')')?;
                    if args.len() != 1 {
                        return Err(ExprError::ArityError { name, got: args.len(), offset: at });
                    }
                    return Ok(Expr::Call(f, Box::new(args.pop().unwrap())));
                }
                if Func::from_name(&name).is_some() {
                    return Err(ExprError::SyntaxError { offset: at, message: format!("function `{name}` needs an argument list") });
                }
                match self.vars.iter().position(|v| *v == name) {
                    Some(i) => Ok(Expr::Var(i)),
                    None if self.declared => {
                        Err(ExprError::SyntaxError { offset: at, message: format!("variable `{name}` is not declared") })
                    }
                    None => {
                        self.vars.push(name);
                        Ok(Expr::Var(self.vars.len() - 1))
                    }
                }
            }
            _ => {
                self.pos -= 1;
                Err(self.unexpected("expected a number, variable, function call or `(`"))
            }
        }
    }
}

/// Constant-fold an exponent to `p/q` in lowest terms with `q ∈ {1,2,3}`.
fn fold_exponent(e: &Expr) -> Option<(i64, i64)> {
    use num_rational::Ratio;
    use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub};
    fn go(e: &Expr) -> Option<Ratio<i64>> {
        Some(match e {
            Expr::Num(l) => {
                let (p, q) = l.ratio?;
                Ratio::new(p, q)
            }
            Expr::Neg(a) => -go(a)?,
            Expr::Add(a, b) => go(a)?.checked_add(&go(b)?)?,
            Expr::Sub(a, b) => go(a)?.checked_sub(&go(b)?)?,
            Expr::Mul(a, b) => go(a)?.checked_mul(&go(b)?)?,
            Expr::Div(a, b) => {
                let d = go(b)?;
                if d == Ratio::from_integer(0) {
                    return None;
                }
                go(a)?.checked_div(&d)?
            }
            Expr::Pow(a, p, 1) => {
                let base = go(a)?;
                let n = i32::try_from(*p).ok()?;
                if n.unsigned_abs() > 64 || (n < 0 && base == Ratio::from_integer(0)) {
                    return None;
                }
                let mut acc = Ratio::from_integer(1);
                for _ in 0..n.unsigned_abs() {
                    acc = acc.checked_mul(&base)?;
                }
                if n < 0 {
                    acc.recip()
                } else {
                    acc
                }
            }
            _ => return None,
        })
    }
    let r = go(e)?;
    let (p, q) = (*r.numer(), *r.denom());
    (q <= 3).then_some((p, q))
}

impl ExprAst {
    /// Parse `src`, honouring an optional `vars:` header line.
    pub fn parse(src: &str) -> Result<ExprAst, ExprError> {
        let trimmed = src.trim_start();
        let lead = src.len() - trimmed.len();
        if let Some(rest) = trimmed.strip_prefix("vars:") {
            let line_end = rest.find('\n').unwrap_or(rest.len());
            let header = &rest[..line_end];
            let mut vars = Vec::new();
            let hstart = lead + "vars:".len();
            for (i, name) in header.split(',').enumerate() {
                let name = name.trim();
                let valid = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                    && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
                if !valid || vars.iter().any(|v| v == name) {
                    return Err(ExprError::SyntaxError {
                        offset: hstart,
                        message: format!("bad variable declaration #{} in header", i + 1),
                    });
                }
                vars.push(name.to_string());
            }
            let body_start = hstart + line_end;
            return Self::parse_body(&src[body_start..], body_start, vars, true);
        }
        Self::parse_body(src, 0, Vec::new(), false)
    }

    /// Parse a body against a fixed variable list.
    pub fn parse_with_vars(src: &str, vars: &[&str]) -> Result<ExprAst, ExprError> {
        Self::parse_body(src, 0, vars.iter().map(|s| s.to_string()).collect(), true)
    }

    fn parse_body(src: &str, base: usize, mut vars: Vec<String>, declared: bool) -> Result<ExprAst, ExprError> {
        let toks = lex(src, base)?;
        let mut p = Parser { toks, pos: 0, vars: &mut vars, declared };
        let root = p.sum()?;
        if *p.peek() != Tok::End {
            return Err(p.unexpected("expected an operator or end of input"));
        }
        Ok(ExprAst { root, vars })
    }

    /// Evaluate with arguments given positionally in `vars` order.
    pub fn eval<S: Scalar>(&self, args: &[S]) -> Result<S, ExprError> {
        if args.len() < self.vars.len() {
            return Err(ExprError::UnboundVariable(self.vars[args.len()].clone()));
        }
        eval(&self.root, args)
    }

    /// Evaluate with arguments looked up by name.
    pub fn eval_named<S: Scalar>(&self, args: &HashMap<String, S>) -> Result<S, ExprError> {
        let vals = self
            .vars
            .iter()
            .map(|v| args.get(v).cloned().ok_or_else(|| ExprError::UnboundVariable(v.clone())))
            .collect::<Result<Vec<S>, _>>()?;
        eval(&self.root, &vals)
    }

    /// Canonical body text, without the header.
    pub fn body(&self) -> String {
        let mut s = String::new();
        write_expr(&mut s, &self.root, &self.vars, 0);
        s
    }
}

impl fmt::Display for ExprAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.vars.is_empty() {
            writeln!(f, "vars: {}", self.vars.join(","))?;
        }
        write!(f, "{}", self.body())
    }
}

fn eval<S: Scalar>(e: &Expr, args: &[S]) -> Result<S, ExprError> {
    Ok(match e {
        Expr::Var(i) => args[*i].clone(),
        Expr::Num(l) => match l.ratio {
            Some((p, q)) => S::from_ratio(p, q),
            None => S::from_f64(l.value),
        },
        Expr::Neg(a) => -eval(a, args)?,
        Expr::Add(a, b) => eval(a, args)? + eval(b, args)?,
        Expr::Sub(a, b) => eval(a, args)? - eval(b, args)?,
        Expr::Mul(a, b) => eval(a, args)? * eval(b, args)?,
        Expr::Div(a, b) => {
            let d = eval(b, args)?;
            if d.value() == 0.0 {
                return Err(JetError::DivisionByZeroJet.into());
            }
            eval(a, args)? / d
        }
        Expr::Pow(a, p, q) => {
            let b = eval(a, args)?;
            if *q == 1 && *p >= 0 {
                b.powi(*p as i32)
            } else {
                if *q == 1 && b.value() == 0.0 {
                    return Err(JetError::DivisionByZeroJet.into());
                }
                b.elem(Elementary::Pow(*p, *q))?
            }
        }
        Expr::Call(f, a) => eval(a, args)?.elem(f.elementary())?,
    })
}

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) | Expr::Div(..) => 2,
        Expr::Neg(_) => 3,
        Expr::Pow(..) => 4,
        Expr::Var(_) | Expr::Num(_) | Expr::Call(..) => 5,
    }
}

fn write_expr(out: &mut String, e: &Expr, vars: &[String], min: u8) {
    let paren = prec(e) < min;
    if paren {
        out.push('(');
    }
    match e {
        Expr::Var(i) => out.push_str(&vars[*i]),
        Expr::Num(l) => out.push_str(&format!("{}", l.value)),
        Expr::Neg(a) => {
            out.push('-');
            write_expr(out, a, vars, 3);
        }
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
            let (op, p) = match e {
                Expr::Add(..) => (" + ", 1),
                Expr::Sub(..) => (" - ", 1),
                Expr::Mul(..) => ("*", 2),
                _ => ("/", 2),
            };
            write_expr(out, a, vars, p);
            out.push_str(op);
            // right operands of the same level keep their grouping
            write_expr(out, b, vars, p + 1);
        }
        Expr::Pow(a, p, q) => {
            write_expr(out, a, vars, 5);
            if *q == 1 && *p >= 0 {
                out.push_str(&format!("^{p}"));
            } else if *q == 1 {
                out.push_str(&format!("^({p})"));
            } else {
                out.push_str(&format!("^({p}/{q})"));
            }
        }
        Expr::Call(f, a) => {
            out.push_str(f.name());
            out.push('(');
            write_expr(out, a, vars, 0);
            out.push(')');
        }
    }
    if paren {
        out.push(')');
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::MultiJet;
    use crate::scalar::Rational;

    fn num(v: f64) -> Box<Expr> {
        Box::new(Expr::Num(Literal::new(v)))
    }

    #[test]
    fn precedence_and_structure() {
        let a = ExprAst::parse("t^2 + 3*t").unwrap();
        assert_eq!(a.vars, vec!["t"]);
        assert_eq!(a.root, Expr::Add(Box::new(Expr::Pow(Box::new(Expr::Var(0)), 2, 1)), Box::new(Expr::Mul(num(3.0), Box::new(Expr::Var(0))))));
        let b = ExprAst::parse("vars: x,y,z\nx*y - 2*z").unwrap();
        assert_eq!(b.vars, vec!["x", "y", "z"]);
        let c = ExprAst::parse("t^(1/3)").unwrap();
        assert_eq!(c.root, Expr::Pow(Box::new(Expr::Var(0)), 1, 3));
    }

    #[test]
    fn power_is_right_associative() {
        let a = ExprAst::parse("x^2^3").unwrap();
        assert_eq!(a.root, Expr::Pow(Box::new(Expr::Var(0)), 8, 1));
        let b = ExprAst::parse("-x^2").unwrap();
        assert_eq!(b.root, Expr::Neg(Box::new(Expr::Pow(Box::new(Expr::Var(0)), 2, 1))));
    }

    #[test]
    fn errors_carry_offsets() {
        assert!(matches!(ExprAst::parse("2 x"), Err(ExprError::SyntaxError { offset: 2, .. })));
        assert!(matches!(ExprAst::parse("foo(x)"), Err(ExprError::UnknownFunction { offset: 0, .. })));
        assert!(matches!(ExprAst::parse("sin(x, y)"), Err(ExprError::ArityError { got: 2, .. })));
        assert!(matches!(ExprAst::parse("x^(1/5)"), Err(ExprError::ExponentError { .. })));
        assert!(matches!(ExprAst::parse("x^y"), Err(ExprError::ExponentError { .. })));
        assert!(matches!(ExprAst::parse("(x + 1"), Err(ExprError::SyntaxError { offset: 6, .. })));
        assert!(matches!(ExprAst::parse("vars: x\nx + w"), Err(ExprError::SyntaxError { offset: 12, .. })));
    }

    #[test]
    fn evaluation_on_jets() {
        let t = MultiJet::variable(1, 2, 0, 1.0);
        let sq = ExprAst::parse("t^2").unwrap().eval(&[t]).unwrap();
        assert_eq!(sq.coeffs(), &[1.0, 2.0, 1.0]);

        let h = MultiJet::variable(1, 2, 0, 0.0);
        let x = MultiJet::constant(1.0) + h.clone();
        let y = MultiJet::constant(1.0) - h;
        let xy = ExprAst::parse("x*y").unwrap().eval(&[x, y]).unwrap();
        assert_eq!(xy.coeffs(), &[1.0, 0.0, -1.0]);

        let five: MultiJet<f64> = ExprAst::parse("5").unwrap().eval(&[]).unwrap();
        assert!(five.is_constant());
        assert_eq!(five.value(), 5.0);
    }

    #[test]
    fn exact_literals_and_unbound() {
        let a = ExprAst::parse("0.1*x + 1/3").unwrap();
        let v = a.eval(&[Rational::from_i64(10)]).unwrap();
        assert_eq!(v, Rational::new(4, 3));
        let mut m = HashMap::new();
        m.insert("y".to_string(), 1.0);
        assert_eq!(a.eval_named(&m), Err(ExprError::UnboundVariable("x".into())));
    }

    #[test]
    fn printer_round_trip() {
        for src in ["a - (b - c)", "(a + b)*c", "a/(b*c)", "(-a)^2", "-(a^(1/2))", "sqrt(a)^(-1)", "cbrt(x)*exp(-x)", "(a^(2/3))^2", "1e-7*x"] {
            let a = ExprAst::parse(src).unwrap();
            let printed = a.to_string();
            assert_eq!(ExprAst::parse(&printed).unwrap(), a, "{src} -> {printed}");
        }
    }
}
