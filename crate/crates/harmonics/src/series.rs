//! Truncated power series in one variable with extended-precision coefficients.

use astro_float::BigFloat;

use crate::real::{int, negligible, RM};

#[derive(Clone, Debug)]
pub struct PSeries {
    pub c: Vec<BigFloat>,
    pub p: usize,
}

impl PSeries {
    pub fn constant(a: BigFloat, n: usize, p: usize) -> Self {
        let mut c = vec![BigFloat::from_word(0, p); n];
        c[0] = a;
        PSeries { c, p }
    }

    pub fn int(a: i64, n: usize, p: usize) -> Self {
        Self::constant(int(a, p), n, p)
    }

    /// The variable itself.
    pub fn var(n: usize, p: usize) -> Self {
        let mut s = Self::int(0, n, p);
        if n > 1 {
            s.c[1] = int(1, p);
        }
        s
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    fn zip(&self, o: &Self, f: impl Fn(&BigFloat, &BigFloat) -> BigFloat) -> Self {
        PSeries { c: self.c.iter().zip(&o.c).map(|(a, b)| f(a, b)).collect(), p: self.p }
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = self.p;
        self.zip(o, |a, b| a.add(b, p, RM))
    }

    pub fn sub(&self, o: &Self) -> Self {
        let p = self.p;
        self.zip(o, |a, b| a.sub(b, p, RM))
    }

    pub fn add_const(&self, a: &BigFloat) -> Self {
        let mut s = self.clone();
        s.c[0] = s.c[0].add(a, self.p, RM);
        s
    }

    pub fn add_int(&self, a: i64) -> Self {
        self.add_const(&int(a, self.p))
    }

    pub fn scale(&self, a: &BigFloat) -> Self {
        PSeries { c: self.c.iter().map(|x| x.mul(a, self.p, RM)).collect(), p: self.p }
    }

    pub fn scale_int(&self, a: i64) -> Self {
        self.scale(&int(a, self.p))
    }

    pub fn neg(&self) -> Self {
        PSeries { c: self.c.iter().map(|x| x.neg()).collect(), p: self.p }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.len().min(o.len());
        let p = self.p;
        let c = (0..n)
            .map(|k| {
                let mut s = BigFloat::from_word(0, p);
                for i in 0..=k {
                    if !self.c[i].is_zero() && !o.c[k - i].is_zero() {
                        s = s.add(&self.c[i].mul(&o.c[k - i], p, RM), p, RM);
                    }
                }
                s
            })
            .collect();
        PSeries { c, p }
    }

    pub fn inv(&self) -> Self {
        let n = self.len();
        let p = self.p;
        let a0 = &self.c[0];
        let mut r: Vec<BigFloat> = Vec::with_capacity(n);
        r.push(int(1, p).div(a0, p, RM));
        for k in 1..n {
            let mut s = BigFloat::from_word(0, p);
            for i in 1..=k {
                s = s.add(&self.c[i].mul(&r[k - i], p, RM), p, RM);
            }
            r.push(s.neg().div(a0, p, RM));
        }
        PSeries { c: r, p }
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }

    /// Square root with positive constant term.
    pub fn sqrt(&self) -> Self {
        let n = self.len();
        let p = self.p;
        let mut r: Vec<BigFloat> = Vec::with_capacity(n);
        r.push(self.c[0].sqrt(p, RM));
        let two_r0 = r[0].mul(&int(2, p), p, RM);
        for k in 1..n {
            let mut s = self.c[k].clone();
            for i in 1..k {
                s = s.sub(&r[i].mul(&r[k - i], p, RM), p, RM);
            }
            r.push(s.div(&two_r0, p, RM));
        }
        PSeries { c: r, p }
    }

    pub fn powi(&self, k: u32) -> Self {
        let mut r = Self::int(1, self.len(), self.p);
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// Divide by the variable; `None` if the constant term is not negligible.
    pub fn shift_down(&self) -> Option<Self> {
        if !negligible(&self.c[0], self.p) {
            return None;
        }
        let mut c: Vec<BigFloat> = self.c[1..].to_vec();
        c.push(BigFloat::from_word(0, self.p));
        Some(PSeries { c, p: self.p })
    }

    /// Multiply by the variable.
    pub fn shift_up(&self) -> Self {
        let mut c = vec![BigFloat::from_word(0, self.p)];
        c.extend(self.c[..self.len() - 1].iter().cloned());
        PSeries { c, p: self.p }
    }

    /// Series root of `F(x, L) = 0` with `L(0) = seed` by Newton iteration;
    /// `f` returns `(F(L), ∂F/∂L(L))`.
    pub fn newton(seed: BigFloat, n: usize, p: usize, f: impl Fn(&PSeries) -> (PSeries, PSeries)) -> Self {
        let mut l = Self::constant(seed, n, p);
        let steps = (usize::BITS - n.leading_zeros()) as usize + 3;
        for _ in 0..steps {
            let (v, d) = f(&l);
            l = l.sub(&v.div(&d));
        }
        l
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::{bits, gap, sqrt};

    #[test]
    fn round_trips() {
        let p = bits(40);
        let n = 12;
        let x = PSeries::var(n, p);
        let a = x.scale_int(3).add_int(4).mul(&x.add_int(1));
        let b = a.sqrt().mul(&a.sqrt());
        for k in 0..n {
            assert!(gap(&a.c[k], &b.c[k], p) < 1e-35);
        }
        let one = a.mul(&a.inv());
        assert!(gap(&one.c[0], &int(1, p), p) < 1e-35);
        for k in 1..n {
            assert!(gap(&one.c[k], &int(0, p), p) < 1e-35);
        }
    }

    #[test]
    fn newton_finds_catalan() {
        // C = 1 + x C²
        let p = bits(40);
        let n = 10;
        let x = PSeries::var(n, p);
        let c = PSeries::newton(int(1, p), n, p, |c| {
            (x.mul(&c.mul(c)).sub(c).add_int(1), x.mul(c).scale_int(2).add_int(-1))
        });
        let want = [1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862];
        for k in 0..n {
            assert!(gap(&c.c[k], &int(want[k], p), p) < 1e-30);
        }
        let s = PSeries::int(2, 3, p).sqrt();
        assert!(gap(&s.c[0], &sqrt(&int(2, p), p), p) < 1e-35);
    }
}
