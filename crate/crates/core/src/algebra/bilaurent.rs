//! Sparse bivariate Laurent polynomials in `x` and `y` over the rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::Q;

/// Map `(i, j) -> coefficient of x^i y^j`. Zero coefficients are never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BiLaurent {
    terms: BTreeMap<(i32, i32), Q>,
}

impl BiLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn int(c: i64) -> Self {
        Self::constant(Q::from_integer(BigInt::from(c)))
    }

    pub fn monomial(i: i32, j: i32, c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((i, j), c);
        }
        Self { terms }
    }

    /// `x^i y^j` with coefficient 1.
    pub fn xy(i: i32, j: i32) -> Self {
        Self::monomial(i, j, Q::one())
    }

    pub fn x() -> Self {
        Self::xy(1, 0)
    }

    pub fn y() -> Self {
        Self::xy(0, 1)
    }

    /// Build from `(i, j, c)` triples, summing repeated exponents.
    pub fn from_terms<I: IntoIterator<Item = (i32, i32, Q)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (i, j, c) in it {
            p.add_term(i, j, c);
        }
        p
    }

    /// Univariate polynomial in `x` from coefficients `c[0] + c[1] x + ...`.
    pub fn from_x_coeffs(c: &[Q]) -> Self {
        Self::from_terms(c.iter().enumerate().map(|(k, q)| (k as i32, 0, q.clone())))
    }

    pub fn from_y_coeffs(c: &[Q]) -> Self {
        Self::from_terms(c.iter().enumerate().map(|(k, q)| (0, k as i32, q.clone())))
    }

    pub fn add_term(&mut self, i: i32, j: i32, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((i, j)) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&(0, 0)).is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, i32, &Q)> {
        self.terms.iter().map(|(&(i, j), c)| (i, j, c))
    }

    pub fn coeff(&self, i: i32, j: i32) -> Q {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Q::zero)
    }

    /// `Some((i, j, c))` when the polynomial is a single term.
    pub fn as_monomial(&self) -> Option<(i32, i32, &Q)> {
        if self.terms.len() == 1 {
            self.terms().next()
        } else {
            None
        }
    }

    /// `Some(c)` when the polynomial is the constant `c` (including 0).
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    pub fn min_x(&self) -> Option<i32> {
        self.terms.keys().map(|k| k.0).min()
    }

    pub fn max_x(&self) -> Option<i32> {
        self.terms.keys().map(|k| k.0).max()
    }

    pub fn min_y(&self) -> Option<i32> {
        self.terms.keys().map(|k| k.1).min()
    }

    pub fn max_y(&self) -> Option<i32> {
        self.terms.keys().map(|k| k.1).max()
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect() }
    }

    /// Multiply by `x^a y^b`.
    pub fn shift(&self, a: i32, b: i32) -> Self {
        Self { terms: self.terms.iter().map(|(&(i, j), v)| ((i + a, j + b), v.clone())).collect() }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Reindex every term through `f`, summing collisions.
    pub fn map_exponents<F: Fn(i32, i32) -> (i32, i32)>(&self, f: F) -> Self {
        Self::from_terms(self.terms().map(|(i, j, c)| {
            let (a, b) = f(i, j);
            (a, b, c.clone())
        }))
    }

    /// Keep the terms accepted by `keep`.
    pub fn filter<F: Fn(i32, i32) -> bool>(&self, keep: F) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(&(i, j), _)| keep(i, j))
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    /// Substitute `x = q` (q nonzero if negative powers occur).
    pub fn eval_x(&self, q: &Q) -> Self {
        Self::from_terms(self.terms().map(|(i, j, c)| (0, j, c * qpow(q, i))))
    }

    pub fn eval_y(&self, q: &Q) -> Self {
        Self::from_terms(self.terms().map(|(i, j, c)| (i, 0, c * qpow(q, j))))
    }

    /// Exchange the roles of `x` and `y`.
    pub fn swap_xy(&self) -> Self {
        self.map_exponents(|i, j| (j, i))
    }

    /// Coefficient of `y^j` as a polynomial in `x`.
    pub fn y_coeff(&self, j: i32) -> Self {
        self.filter(|_, b| b == j).map_exponents(|i, _| (i, 0))
    }

    /// Coefficient of `x^i` as a polynomial in `y`.
    pub fn x_coeff(&self, i: i32) -> Self {
        self.filter(|a, _| a == i).map_exponents(|_, j| (0, j))
    }

    /// Exact quotient by a polynomial in a single variable, if it divides.
    pub fn div_exact_univariate(&self, d: &BiLaurent) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if let Some((a, b, c)) = d.as_monomial() {
            return Some(self.shift(-a, -b).scale(&c.recip()));
        }
        let in_x = d.terms().all(|(_, j, _)| j == 0);
        let in_y = d.terms().all(|(i, _, _)| i == 0);
        if !in_x && !in_y {
            return None;
        }
        let d = if in_x { d.clone() } else { d.swap_xy() };
        let me = if in_x { self.clone() } else { self.swap_xy() };
        let dmax = d.max_x().unwrap();
        let lead = d.coeff(dmax, 0);
        let mut rem = me;
        let mut quo = BiLaurent::zero();
        let dmin = d.min_x().unwrap();
        while let Some(top) = rem.max_x() {
            let lo = rem.min_x().unwrap();
            if top - lo < dmax - dmin {
                return None;
            }
            let row = rem.x_coeff(top);
            for (_, j, c) in row.terms() {
                let q = c / &lead;
                let shift = top - dmax;
                quo.add_term(shift, j, q.clone());
                let sub = d.shift(shift, j).scale(&q);
                rem = &rem - &sub;
            }
        }
        Some(if in_x { quo } else { quo.swap_xy() })
    }
}

fn qpow(q: &Q, e: i32) -> Q {
    if e >= 0 {
        num_traits::pow(q.clone(), e as usize)
    } else {
        num_traits::pow(q.recip(), (-e) as usize)
    }
}

impl<'a> Add<&'a BiLaurent> for &'a BiLaurent {
    type Output = BiLaurent;
    fn add(self, o: &BiLaurent) -> BiLaurent {
        let mut r = self.clone();
        r += o;
        r
    }
}

impl AddAssign<&BiLaurent> for BiLaurent {
    fn add_assign(&mut self, o: &BiLaurent) {
        for (&(i, j), c) in &o.terms {
            self.add_term(i, j, c.clone());
        }
    }
}

impl SubAssign<&BiLaurent> for BiLaurent {
    fn sub_assign(&mut self, o: &BiLaurent) {
        for (&(i, j), c) in &o.terms {
            self.add_term(i, j, -c.clone());
        }
    }
}

impl<'a> Sub<&'a BiLaurent> for &'a BiLaurent {
    type Output = BiLaurent;
    fn sub(self, o: &BiLaurent) -> BiLaurent {
        let mut r = self.clone();
        r -= o;
        r
    }
}

impl Neg for &BiLaurent {
    type Output = BiLaurent;
    fn neg(self) -> BiLaurent {
        BiLaurent { terms: self.terms.iter().map(|(k, v)| (*k, -v.clone())).collect() }
    }
}

impl<'a> Mul<&'a BiLaurent> for &'a BiLaurent {
    type Output = BiLaurent;
    fn mul(self, o: &BiLaurent) -> BiLaurent {
        if self.is_zero() || o.is_zero() {
            return BiLaurent::zero();
        }
        if let Some(c) = o.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return o.scale(&c);
        }
        let mut r = BiLaurent::zero();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &o.terms {
                r.add_term(i + k, j + l, a * b);
            }
        }
        r
    }
}

macro_rules! owned_binop {
    ($tr:ident, $f:ident) => {
        impl $tr<BiLaurent> for BiLaurent {
            type Output = BiLaurent;
            fn $f(self, o: BiLaurent) -> BiLaurent {
                (&self).$f(&o)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for BiLaurent {
    type Output = BiLaurent;
    fn neg(self) -> BiLaurent {
        -&self
    }
}

impl fmt::Display for BiLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, j, c) in self.terms() {
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let a = c.abs();
            let mono = (i, j) != (0, 0);
            if !a.is_one() || !mono {
                write!(f, "{a}")?;
                if mono {
                    write!(f, "*")?;
                }
            }
            let mut parts = Vec::new();
            for (v, e) in [("x", i), ("y", j)] {
                match e {
                    0 => {}
                    1 => parts.push(v.to_string()),
                    _ => parts.push(format!("{v}^{e}")),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for BiLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;

    #[test]
    fn product_and_cancellation() {
        let a = &BiLaurent::x() + &BiLaurent::xy(-1, 0);
        let b = &BiLaurent::x() - &BiLaurent::xy(-1, 0);
        let p = &a * &b;
        assert_eq!(p, &BiLaurent::xy(2, 0) - &BiLaurent::xy(-2, 0));
    }

    #[test]
    fn exact_division() {
        let d = BiLaurent::from_x_coeffs(&[q(1), q(1)]);
        let n = &d * &(&BiLaurent::xy(-1, 2) + &BiLaurent::int(3));
        assert_eq!(n.div_exact_univariate(&d).unwrap(), &BiLaurent::xy(-1, 2) + &BiLaurent::int(3));
        assert!(BiLaurent::int(1).div_exact_univariate(&d).is_none());
    }

    #[test]
    fn display() {
        let p = BiLaurent::from_terms([(1, 1, q(1)), (-1, 0, q(-2))]);
        assert_eq!(p.to_string(), "-2*x^-1 + x*y");
    }
}
