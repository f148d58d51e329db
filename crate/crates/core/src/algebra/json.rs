//! JSON form of series: `{ram, val, order, coeffs: [{n, terms: [{i, j, q}]}]}`.
//!
//! Exact series are written with `order` one past their last term and
//! `"exact": true`. A nontrivial denominator is written under `"den"`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::den::{Den, Factor, Var};
use super::{AlgebraError, BiLaurent, TSeries, Q};

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct TermJson {
    pub i: i32,
    pub j: i32,
    pub q: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct CoeffJson {
    pub n: i64,
    pub terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct FactorJson {
    pub var: String,
    pub coeffs: Vec<String>,
    pub exp: u32,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct SeriesJson {
    pub ram: u32,
    pub val: i64,
    pub order: i64,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub exact: bool,
    pub coeffs: Vec<CoeffJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub den: Vec<FactorJson>,
}

/// Always `p/q`, including integers.
pub fn q_to_string(q: &Q) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn q_from_str(s: &str) -> Result<Q, AlgebraError> {
    let bad = || AlgebraError::Parse(format!("bad rational `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = n.trim().parse().map_err(|_| bad())?;
            let d: num_bigint::BigInt = d.trim().parse().map_err(|_| bad())?;
            if d == 0.into() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

pub fn to_json(s: &TSeries) -> SeriesJson {
    let exact = s.is_exact();
    let order = if exact { s.coeffs().keys().last().map_or(0, |k| k + 1) } else { s.order() };
    let coeffs = s
        .coeffs()
        .iter()
        .map(|(n, p)| CoeffJson {
            n: *n,
            terms: p.terms().map(|(i, j, c)| TermJson { i, j, q: q_to_string(c) }).collect(),
        })
        .collect();
    let den = s
        .den()
        .factors()
        .map(|(f, e)| FactorJson {
            var: match f.var {
                Var::X => "x".into(),
                Var::Y => "y".into(),
            },
            coeffs: f.coeffs.iter().map(q_to_string).collect(),
            exp: e,
        })
        .collect();
    SeriesJson { ram: s.ram(), val: s.val().min(order), order, exact, coeffs, den }
}

pub fn from_json(j: &SeriesJson) -> Result<TSeries, AlgebraError> {
    let mut coeffs = BTreeMap::new();
    for c in &j.coeffs {
        let mut p = BiLaurent::zero();
        for t in &c.terms {
            p.add_term(t.i, t.j, q_from_str(&t.q)?);
        }
        coeffs.insert(c.n, p);
    }
    let mut den = Den::one();
    for f in &j.den {
        let var = match f.var.as_str() {
            "x" => Var::X,
            "y" => Var::Y,
            v => return Err(AlgebraError::Parse(format!("bad denominator variable `{v}`"))),
        };
        let cs = f.coeffs.iter().map(|c| q_from_str(c)).collect::<Result<Vec<_>, _>>()?;
        let (fac, _) = Factor::normalized(var, &cs).ok_or_else(|| AlgebraError::Parse("bad denominator factor".into()))?;
        den = den.mul(&Den::single(fac, f.exp));
    }
    let order = if j.exact { super::INF } else { j.order };
    Ok(TSeries::from_parts(j.ram, order, coeffs, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_expr, eval_expr, Bindings};

    #[test]
    fn round_trip() {
        let e = parse_expr("y*(1-t*y)/(t*(1+y)) + 1/(1-t*x)").unwrap();
        let s = eval_expr(&e, &Bindings::new(), 5).unwrap();
        let j = to_json(&s);
        let text = serde_json::to_string(&j).unwrap();
        let back: SeriesJson = serde_json::from_str(&text).unwrap();
        assert_eq!(from_json(&back).unwrap(), s);
        assert!(text.contains("\"q\":\"1/1\""));
    }
}
