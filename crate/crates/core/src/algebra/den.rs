//! Factored `t`-free denominators `d₁(x)^e₁ ⋯ d'₁(y)^f₁ ⋯`.
//!
//! Each factor is a univariate polynomial with constant term 1, so dividing by
//! it never changes pole orders at `x = 0` or `y = 0`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{BiLaurent, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X,
    Y,
}

/// `1 + c₁ v + c₂ v² + …` with degree ≥ 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Factor {
    pub var: Var,
    pub coeffs: Vec<Q>,
}

impl Factor {
    /// Normalize `c₀ + c₁ v + …`; returns the factor and the scalar `c₀` pulled out.
    /// `None` if the polynomial is constant or has zero constant term.
    pub fn normalized(var: Var, coeffs: &[Q]) -> Option<(Self, Q)> {
        let mut c: Vec<Q> = coeffs.to_vec();
        while c.last().is_some_and(|q| q.is_zero()) {
            c.pop();
        }
        if c.len() < 2 || c[0].is_zero() {
            return None;
        }
        let c0 = c[0].clone();
        let c = c.iter().map(|q| q / &c0).collect();
        Some((Self { var, coeffs: c }, c0))
    }

    pub fn to_bilaurent(&self) -> BiLaurent {
        match self.var {
            Var::X => BiLaurent::from_x_coeffs(&self.coeffs),
            Var::Y => BiLaurent::from_y_coeffs(&self.coeffs),
        }
    }

    pub fn eval(&self, v: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * v + c;
        }
        acc
    }

    /// Taylor coefficients of `1/factor` up to degree `n` inclusive.
    pub fn inverse_coeffs(&self, n: usize) -> Vec<Q> {
        let mut out = vec![Q::zero(); n + 1];
        out[0] = Q::one();
        for k in 1..=n {
            let mut s = Q::zero();
            for (m, c) in self.coeffs.iter().enumerate().skip(1) {
                if m > k {
                    break;
                }
                s -= c * &out[k - m];
            }
            out[k] = s;
        }
        out
    }
}

/// Product of factors with positive exponents. Empty means 1.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Den {
    factors: BTreeMap<Factor, u32>,
}

impl Den {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn single(f: Factor, e: u32) -> Self {
        let mut factors = BTreeMap::new();
        if e > 0 {
            factors.insert(f, e);
        }
        Self { factors }
    }

    pub fn factors(&self) -> impl Iterator<Item = (&Factor, u32)> {
        self.factors.iter().map(|(f, e)| (f, *e))
    }

    pub fn mul(&self, o: &Den) -> Den {
        let mut r = self.clone();
        for (f, e) in &o.factors {
            *r.factors.entry(f.clone()).or_insert(0) += e;
        }
        r
    }

    pub fn pow(&self, n: u32) -> Den {
        Den { factors: self.factors.iter().filter(|_| n > 0).map(|(f, e)| (f.clone(), e * n)).collect() }
    }

    /// Least common multiple by maximal exponent.
    pub fn lcm(&self, o: &Den) -> Den {
        let mut r = self.clone();
        for (f, e) in &o.factors {
            let slot = r.factors.entry(f.clone()).or_insert(0);
            *slot = (*slot).max(*e);
        }
        r
    }

    /// `big / self` as a polynomial, assuming `self` divides `big` factorwise.
    pub fn cofactor(&self, big: &Den) -> BiLaurent {
        let mut p = BiLaurent::one();
        for (f, e) in &big.factors {
            let have = self.factors.get(f).copied().unwrap_or(0);
            if *e > have {
                p = &p * &f.to_bilaurent().pow(e - have);
            }
        }
        p
    }

    pub fn to_bilaurent(&self) -> BiLaurent {
        Den::one().cofactor(self)
    }

    /// Split into the part in `var` and the rest.
    pub fn split(&self, var: Var) -> (Den, Den) {
        let mut a = Den::one();
        let mut b = Den::one();
        for (f, e) in &self.factors {
            if f.var == var {
                a.factors.insert(f.clone(), *e);
            } else {
                b.factors.insert(f.clone(), *e);
            }
        }
        (a, b)
    }

    /// Square root when every exponent is even.
    pub fn sqrt(&self) -> Option<Den> {
        if self.factors.values().any(|e| e % 2 == 1) {
            return None;
        }
        Some(Den { factors: self.factors.iter().map(|(f, e)| (f.clone(), e / 2)).collect() })
    }
}

/// Write a nonzero polynomial as `c · x^a y^b · d(x) · d'(y)` with `d, d'` having
/// constant term 1. Fails when the polynomial is not of that separable shape.
pub fn separate(p: &BiLaurent) -> Option<(Q, i32, i32, Option<Factor>, Option<Factor>)> {
    let a = p.min_x()?;
    let b = p.min_y()?;
    let p = p.shift(-a, -b);
    let (i0, j0, v) = {
        let (i, j, c) = p.terms().next()?;
        (i, j, c.clone())
    };
    let nx = p.max_x()? as usize;
    let ny = p.max_y()? as usize;
    let row: Vec<Q> = (0..=nx).map(|i| p.coeff(i as i32, j0)).collect();
    let col: Vec<Q> = (0..=ny).map(|j| p.coeff(i0, j as i32) / &v).collect();
    for (i, r) in row.iter().enumerate() {
        for (j, c) in col.iter().enumerate() {
            if p.coeff(i as i32, j as i32) != r * c {
                return None;
            }
        }
    }
    let mut scalar = Q::one();
    let fx = match Factor::normalized(Var::X, &row) {
        Some((f, c)) => {
            scalar *= c;
            Some(f)
        }
        None => {
            scalar *= row[0].clone();
            None
        }
    };
    let fy = match Factor::normalized(Var::Y, &col) {
        Some((f, c)) => {
            scalar *= c;
            Some(f)
        }
        None => {
            scalar *= col[0].clone();
            None
        }
    };
    Some((scalar, a, b, fx, fy))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;

    #[test]
    fn separates_product_forms() {
        let p = &(&BiLaurent::int(2) + &BiLaurent::x().scale(&q(2))) * &(&BiLaurent::int(1) - &BiLaurent::y());
        let p = p.shift(-1, 2);
        let (c, a, b, fx, fy) = separate(&p).unwrap();
        assert_eq!((c, a, b), (q(2), -1, 2));
        assert_eq!(fx.unwrap().coeffs, vec![q(1), q(1)]);
        assert_eq!(fy.unwrap().coeffs, vec![q(1), q(-1)]);
        let mixed = &BiLaurent::x() + &BiLaurent::y();
        assert!(separate(&mixed).is_none());
    }

    #[test]
    fn inverse_taylor() {
        let (f, _) = Factor::normalized(Var::X, &[q(1), q(1)]).unwrap();
        assert_eq!(f.inverse_coeffs(3), vec![q(1), q(-1), q(1), q(-1)]);
    }
}
