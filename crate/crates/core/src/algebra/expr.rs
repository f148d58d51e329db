//! Rational expressions over series: a small parser and an exact evaluator.
//!
//! Leaves are numbers or names. `x`, `y`, `t` are built in unless rebound;
//! `xb`, `yb` stand for `1/x`, `1/y`. Exponents are integers or halves
//! (`a^(3/2)` is `sqrt(a)^3`).

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{AlgebraError, BiLaurent, TSeries, Q};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Q),
    Name(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    /// `a^(p/2)` with `p` odd.
    PowHalf(Box<Expr>, i64),
    Sqrt(Box<Expr>),
}

pub type Bindings = HashMap<String, TSeries>;

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(q) => write!(f, "{q}"),
            Expr::Name(n) => write!(f, "{n}"),
            Expr::Neg(a) => write!(f, "-({a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "{a}*{b}"),
            Expr::Div(a, b) => write!(f, "{a}/{b}"),
            Expr::Pow(a, n) => write!(f, "{a}^{n}"),
            Expr::PowHalf(a, p) => write!(f, "{a}^({p}/2)"),
            Expr::Sqrt(a) => write!(f, "sqrt({a})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>, AlgebraError> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let txt: String = cs[st..i].iter().collect();
            out.push(Tok::Num(txt.parse().unwrap()));
        } else if c.is_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(AlgebraError::Parse(format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, AlgebraError> {
        let mut e = self.term()?;
        loop {
            if self.eat('+') {
                e = Expr::Add(Box::new(e), Box::new(self.term()?));
            } else if self.eat('-') {
                e = Expr::Sub(Box::new(e), Box::new(self.term()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, AlgebraError> {
        let mut e = self.unary()?;
        loop {
            if self.eat('*') {
                e = Expr::Mul(Box::new(e), Box::new(self.unary()?));
            } else if self.eat('/') {
                e = Expr::Div(Box::new(e), Box::new(self.unary()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, AlgebraError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, AlgebraError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let ex = self.atom()?;
        let mut q = const_value(&ex).ok_or_else(|| AlgebraError::Parse(format!("exponent `{ex}` is not a constant")))?;
        if neg {
            q = -q;
        }
        let two = BigInt::from(2);
        if q.is_integer() {
            Ok(Expr::Pow(Box::new(base), to_i64(q.numer())?))
        } else if *q.denom() == two {
            Ok(Expr::PowHalf(Box::new(base), to_i64(q.numer())?))
        } else {
            Err(AlgebraError::Parse(format!("exponent {q} is not an integer or half-integer")))
        }
    }

    fn atom(&mut self) -> Result<Expr, AlgebraError> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Num(Q::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == "sqrt" {
                    if !self.eat('(') {
                        return Err(AlgebraError::Parse("expected `(` after sqrt".into()));
                    }
                    let e = self.expr()?;
                    if !self.eat(')') {
                        return Err(AlgebraError::Parse("expected `)`".into()));
                    }
                    return Ok(Expr::Sqrt(Box::new(e)));
                }
                Ok(Expr::Name(name))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(AlgebraError::Parse("expected `)`".into()));
                }
                Ok(e)
            }
            other => Err(AlgebraError::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

fn to_i64(n: &BigInt) -> Result<i64, AlgebraError> {
    i64::try_from(n).map_err(|_| AlgebraError::Parse("exponent too large".into()))
}

fn const_value(e: &Expr) -> Option<Q> {
    match e {
        Expr::Num(q) => Some(q.clone()),
        Expr::Neg(a) => const_value(a).map(|q| -q),
        Expr::Add(a, b) => Some(const_value(a)? + const_value(b)?),
        Expr::Sub(a, b) => Some(const_value(a)? - const_value(b)?),
        Expr::Mul(a, b) => Some(const_value(a)? * const_value(b)?),
        Expr::Div(a, b) => {
            let d = const_value(b)?;
            (!d.is_zero()).then(|| const_value(a).map(|n| n / d))?
        }
        _ => None,
    }
}

pub fn parse_expr(s: &str) -> Result<Expr, AlgebraError> {
    let mut p = Parser { toks: lex(s)?, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(AlgebraError::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(e)
}

/// Extra `t`-orders carried internally so that truncations from inverting or
/// taking roots of exact polynomials do not bite the requested order.
const SLACK: i64 = 12;

/// Evaluate `e` and truncate at `t^order`.
pub fn eval_expr(e: &Expr, b: &Bindings, order: i64) -> Result<TSeries, AlgebraError> {
    let r = eval(e, b, order + SLACK)?;
    if r.order_t() < order {
        return Err(AlgebraError::InsufficientTruncation { needed: order, have: r.order_t() });
    }
    Ok(r.truncate(order))
}

fn wrap<T>(e: &Expr, r: Result<T, AlgebraError>) -> Result<T, AlgebraError> {
    r.map_err(|err| match err {
        AlgebraError::Expr { .. } => err,
        other => AlgebraError::Expr { path: e.to_string(), source: Box::new(other) },
    })
}

fn eval(e: &Expr, b: &Bindings, cap: i64) -> Result<TSeries, AlgebraError> {
    match e {
        Expr::Num(q) => Ok(TSeries::constant(q.clone())),
        Expr::Name(n) => {
            if let Some(s) = b.get(n) {
                return Ok(s.clone());
            }
            match n.as_str() {
                "x" => Ok(TSeries::x()),
                "y" => Ok(TSeries::y()),
                "t" => Ok(TSeries::t()),
                "xb" => Ok(TSeries::from_bilaurent(BiLaurent::xy(-1, 0))),
                "yb" => Ok(TSeries::from_bilaurent(BiLaurent::xy(0, -1))),
                _ => Err(AlgebraError::Unbound(n.clone())),
            }
        }
        Expr::Neg(a) => Ok(eval(a, b, cap)?.neg()),
        Expr::Add(a, c) => Ok(eval(a, b, cap)?.add(&eval(c, b, cap)?)),
        Expr::Sub(a, c) => Ok(eval(a, b, cap)?.sub(&eval(c, b, cap)?)),
        Expr::Mul(a, c) => {
            let l = eval(a, b, cap)?;
            if l.is_zero() && l.is_exact() {
                return Ok(TSeries::zero());
            }
            Ok(l.mul(&eval(c, b, cap)?))
        }
        Expr::Div(a, c) => {
            let num = eval(a, b, cap)?;
            let den = eval(c, b, cap)?;
            let inv = wrap(c, invert_any(&den, cap))?;
            Ok(num.mul(&inv).truncate(cap))
        }
        Expr::Pow(a, n) => {
            let base = eval(a, b, cap)?;
            let base = if *n < 0 { wrap(a, invert_any(&base, cap))? } else { base };
            Ok(base.powu(n.unsigned_abs()).truncate(cap))
        }
        Expr::PowHalf(a, p) => {
            let base = eval(a, b, cap)?;
            let r = wrap(e, base.sqrt_to(cap))?;
            let r = if *p < 0 { wrap(e, invert_any(&r, cap))? } else { r };
            Ok(r.powu(p.unsigned_abs()).truncate(cap))
        }
        Expr::Sqrt(a) => {
            let base = eval(a, b, cap)?;
            wrap(e, base.sqrt_to(cap))
        }
    }
}

/// Inverse of a series, dividing by `t`-free polynomials through the denominator.
fn invert_any(s: &TSeries, cap: i64) -> Result<TSeries, AlgebraError> {
    if s.is_exact() && s.coeffs().len() == 1 && s.ram() == 1 {
        let (k, p) = s.coeffs().iter().next().unwrap();
        if !s.has_den() {
            return Ok(TSeries::one().div_bl(p)?.mul_t(-k));
        }
    }
    s.invert_to(cap)
}

/// Convenience: `1` as an expression.
pub fn one() -> Expr {
    Expr::Num(Q::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, qf};

    #[test]
    fn parses_and_evaluates_polynomials() {
        let e = parse_expr("xb^2 - xb/t - x").unwrap();
        let r = eval_expr(&e, &Bindings::new(), 4).unwrap();
        assert_eq!(r.val(), -1);
        assert_eq!(r.coeff(-1, 0, -1).unwrap(), q(-1));
        assert_eq!(r.coeff(-2, 0, 0).unwrap(), q(1));
    }

    #[test]
    fn half_powers() {
        let v = TSeries::from_t_coeffs(
            vec![BiLaurent::zero(), BiLaurent::int(2), BiLaurent::zero(), BiLaurent::zero(), BiLaurent::int(8)],
            Some(7),
        );
        let mut b = Bindings::new();
        b.insert("V".into(), v);
        let e = parse_expr("(1-V^3)^(3/2)/V^2").unwrap();
        let r = eval_expr(&e, &b, 2).unwrap();
        assert_eq!(r.coeff(0, 0, -2).unwrap(), qf(1, 4));
        assert_eq!(r.coeff(0, 0, -1).unwrap(), q(0));
        // 1/V² contributes -2t and (1-V³)^{3/2} another -3t
        assert_eq!(r.coeff(0, 0, 1).unwrap(), q(-5));
    }

    #[test]
    fn zero_times_anything() {
        let e = parse_expr("0*(1/t)").unwrap();
        assert!(eval_expr(&e, &Bindings::new(), 5).unwrap().is_zero());
    }

    #[test]
    fn rational_denominators() {
        let e = parse_expr("y*(1-t*y)/(t*(1+y))").unwrap();
        let r = eval_expr(&e, &Bindings::new(), 3).unwrap();
        assert!(r.has_den());
        assert_eq!(r.coeff(0, 3, -1).unwrap(), q(1));
    }

    #[test]
    fn unbound_names_report_path() {
        let e = parse_expr("1 + 1/W").unwrap();
        let err = eval_expr(&e, &Bindings::new(), 3).unwrap_err();
        assert!(err.to_string().contains("W"));
    }
}
