//! Truncated Laurent series in `t` (possibly ramified, `t = s^r`) with
//! [`BiLaurent`] coefficients and an optional factored `t`-free denominator.
//!
//! Orders are kept in `s`-exponents internally. A series is either *exact*
//! (a finite sum, order [`INF`]) or known for `s`-exponents below `order`.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::den::{separate, Den, Factor, Var};
use super::{rational_sqrt, AlgebraError, BiLaurent, Q};

/// Order of an exact series.
pub const INF: i64 = 1 << 50;

fn oadd(a: i64, b: i64) -> i64 {
    if a >= INF || b >= INF {
        INF
    } else {
        (a + b).min(INF)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct TSeries {
    ram: u32,
    order: i64,
    coeffs: BTreeMap<i64, BiLaurent>,
    den: Den,
}

impl TSeries {
    /// The exact zero series.
    pub fn zero() -> Self {
        Self { ram: 1, order: INF, coeffs: BTreeMap::new(), den: Den::one() }
    }

    /// Zero known up to `t^order` (exclusive).
    pub fn zero_to(order: i64) -> Self {
        Self { ram: 1, order, coeffs: BTreeMap::new(), den: Den::one() }
    }

    pub fn one() -> Self {
        Self::from_bilaurent(BiLaurent::one())
    }

    pub fn from_bilaurent(p: BiLaurent) -> Self {
        Self::monomial_t(0, p)
    }

    pub fn constant(c: Q) -> Self {
        Self::from_bilaurent(BiLaurent::constant(c))
    }

    pub fn int(c: i64) -> Self {
        Self::from_bilaurent(BiLaurent::int(c))
    }

    /// Exact `p · t^k`.
    pub fn monomial_t(k: i64, p: BiLaurent) -> Self {
        let mut coeffs = BTreeMap::new();
        if !p.is_zero() {
            coeffs.insert(k, p);
        }
        Self { ram: 1, order: INF, coeffs, den: Den::one() }
    }

    pub fn t() -> Self {
        Self::monomial_t(1, BiLaurent::one())
    }

    pub fn x() -> Self {
        Self::from_bilaurent(BiLaurent::x())
    }

    pub fn y() -> Self {
        Self::from_bilaurent(BiLaurent::y())
    }

    /// `Σ_{n < order} c[n] t^n`; `order = None` makes it exact.
    pub fn from_t_coeffs(c: Vec<BiLaurent>, order: Option<i64>) -> Self {
        Self::from_s_coeffs(1, 0, c, order.unwrap_or(INF))
    }

    /// `Σ_k c[k] s^{val+k}` with `t = s^ram`, known below `s^order`.
    pub fn from_s_coeffs(ram: u32, val: i64, c: Vec<BiLaurent>, order: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        for (k, p) in c.into_iter().enumerate() {
            let e = val + k as i64;
            if e < order && !p.is_zero() {
                coeffs.insert(e, p);
            }
        }
        Self { ram: ram.max(1), order, coeffs, den: Den::one() }
    }

    /// Rebuild from parts; coefficients at or beyond `order` are dropped.
    pub fn from_parts(ram: u32, order: i64, coeffs: BTreeMap<i64, BiLaurent>, den: Den) -> Self {
        let coeffs = coeffs.into_iter().filter(|(k, p)| *k < order && !p.is_zero()).collect();
        Self { ram: ram.max(1), order, coeffs, den }
    }

    pub fn ram(&self) -> u32 {
        self.ram
    }

    /// Lowest `s`-exponent with nonzero coefficient, or the order if none.
    pub fn val(&self) -> i64 {
        self.coeffs.keys().next().copied().unwrap_or(self.order)
    }

    /// Truncation order in `s`-exponents ([`INF`] when exact).
    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn is_exact(&self) -> bool {
        self.order >= INF
    }

    /// Number of leading `t`-exponents known: `t^n` is known iff `n < order_t()`.
    pub fn order_t(&self) -> i64 {
        if self.is_exact() {
            INF
        } else {
            Integer::div_ceil(&self.order, &(self.ram as i64))
        }
    }

    pub fn den(&self) -> &Den {
        &self.den
    }

    pub fn has_den(&self) -> bool {
        !self.den.is_one()
    }

    /// Numerator coefficients keyed by `s`-exponent.
    pub fn coeffs(&self) -> &BTreeMap<i64, BiLaurent> {
        &self.coeffs
    }

    /// Numerator coefficient of `s^k` (zero when absent, even beyond the order).
    pub fn coeff_s(&self, k: i64) -> BiLaurent {
        self.coeffs.get(&k).cloned().unwrap_or_default()
    }

    /// Numerator coefficient of `t^n`.
    pub fn coeff_t(&self, n: i64) -> Result<BiLaurent, AlgebraError> {
        let k = n * self.ram as i64;
        if k >= self.order {
            return Err(AlgebraError::InsufficientTruncation { needed: n, have: self.order_t() });
        }
        Ok(self.coeff_s(k))
    }

    /// Coefficient of `x^i y^j t^n`, expanding denominators as power series in `x`, `y`.
    pub fn coeff(&self, i: i32, j: i32, n: i64) -> Result<Q, AlgebraError> {
        let p = self.coeff_t(n)?;
        if self.den.is_one() {
            return Ok(p.coeff(i, j));
        }
        let (min_x, min_y) = match (p.min_x(), p.min_y()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Ok(Q::zero()),
        };
        let nx = (i - min_x).max(0) as usize;
        let ny = (j - min_y).max(0) as usize;
        let (dx, dy) = self.den.split(Var::X);
        let ix = inverse_den_coeffs(&dx, nx);
        let iy = inverse_den_coeffs(&dy, ny);
        let mut s = Q::zero();
        for (a, b, c) in p.terms() {
            let (u, v) = (i - a, j - b);
            if u < 0 || v < 0 {
                continue;
            }
            s += c * &ix[u as usize] * &iy[v as usize];
        }
        Ok(s)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// First nonzero numerator term as `(s-exponent, i, j)`.
    pub fn first_nonzero(&self) -> Option<(i64, i32, i32)> {
        let (k, p) = self.coeffs.iter().next()?;
        let (i, j, _) = p.terms().next()?;
        Some((*k, i, j))
    }

    /// Drop everything at or beyond `s^order`.
    pub fn truncate_s(&self, order: i64) -> Self {
        let order = order.min(self.order);
        Self::from_parts(self.ram, order, self.coeffs.clone(), self.den.clone())
    }

    /// Drop everything at or beyond `t^n`.
    pub fn truncate(&self, n: i64) -> Self {
        if n >= INF {
            return self.clone();
        }
        self.truncate_s(n * self.ram as i64)
    }

    /// Re-express with ramification `r` (a multiple of the current one).
    pub fn lift(&self, r: u32) -> Self {
        assert!(r % self.ram == 0, "ramification must be a multiple");
        let f = (r / self.ram) as i64;
        if f == 1 {
            return self.clone();
        }
        Self {
            ram: r,
            order: if self.is_exact() { INF } else { self.order * f },
            coeffs: self.coeffs.iter().map(|(k, p)| (k * f, p.clone())).collect(),
            den: self.den.clone(),
        }
    }

    /// Smallest ramification that still represents the series.
    pub fn restrict(&self) -> Self {
        let mut g = self.ram as i64;
        for k in self.coeffs.keys() {
            g = g.gcd(k);
        }
        if !self.is_exact() {
            g = g.gcd(&self.order);
        }
        let g = g.max(1);
        if g == 1 {
            return self.clone();
        }
        Self {
            ram: self.ram / g as u32,
            order: if self.is_exact() { INF } else { self.order / g },
            coeffs: self.coeffs.iter().map(|(k, p)| (k / g, p.clone())).collect(),
            den: self.den.clone(),
        }
    }

    fn align(a: &Self, b: &Self) -> (Self, Self) {
        if a.ram == b.ram {
            return (a.clone(), b.clone());
        }
        let r = (a.ram as u64).lcm(&(b.ram as u64)) as u32;
        (a.lift(r), b.lift(r))
    }

    fn aligned_ref<'a>(a: &'a Self, b: &'a Self) -> Option<(&'a Self, &'a Self)> {
        (a.ram == b.ram).then_some((a, b))
    }

    pub fn neg(&self) -> Self {
        Self {
            ram: self.ram,
            order: self.order,
            coeffs: self.coeffs.iter().map(|(k, p)| (*k, -p)).collect(),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.add_signed(o, false)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add_signed(o, true)
    }

    fn add_signed(&self, o: &Self, negate: bool) -> Self {
        let owned;
        let (a, b) = match Self::aligned_ref(self, o) {
            Some(p) => p,
            None => {
                owned = Self::align(self, o);
                (&owned.0, &owned.1)
            }
        };
        let order = a.order.min(b.order);
        let den = a.den.lcm(&b.den);
        let ca = a.den.cofactor(&den);
        let cb = b.den.cofactor(&den);
        let mut coeffs: BTreeMap<i64, BiLaurent> = BTreeMap::new();
        for (k, p) in a.coeffs.range(..order) {
            let v = if ca.is_one() { p.clone() } else { p * &ca };
            coeffs.insert(*k, v);
        }
        for (k, p) in b.coeffs.range(..order) {
            let mut v = if cb.is_one() { p.clone() } else { p * &cb };
            if negate {
                v = -v;
            }
            let slot = coeffs.entry(*k).or_default();
            *slot += &v;
        }
        Self::from_parts(a.ram, order, coeffs, den)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let owned;
        let (a, b) = match Self::aligned_ref(self, o) {
            Some(p) => p,
            None => {
                owned = Self::align(self, o);
                (&owned.0, &owned.1)
            }
        };
        let order = oadd(a.order, b.val()).min(oadd(b.order, a.val()));
        let mut coeffs: BTreeMap<i64, BiLaurent> = BTreeMap::new();
        for (ka, pa) in &a.coeffs {
            for (kb, pb) in &b.coeffs {
                let k = ka + kb;
                if k >= order {
                    break;
                }
                let prod = pa * pb;
                let slot = coeffs.entry(k).or_default();
                *slot += &prod;
            }
        }
        Self::from_parts(a.ram, order, coeffs, a.den.mul(&b.den))
    }

    /// Multiply by a `t`-free Laurent polynomial.
    pub fn mul_bl(&self, p: &BiLaurent) -> Self {
        Self {
            ram: self.ram,
            order: self.order,
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, c * p)).filter(|(_, c)| !c.is_zero()).collect(),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        self.mul_bl(&BiLaurent::constant(c.clone()))
    }

    /// Multiply by `t^k`.
    pub fn mul_t(&self, k: i64) -> Self {
        let sh = k * self.ram as i64;
        Self {
            ram: self.ram,
            order: oadd(self.order, sh),
            coeffs: self.coeffs.iter().map(|(e, p)| (e + sh, p.clone())).collect(),
            den: self.den.clone(),
        }
    }

    /// Multiply by `s^k` where `t = s^ram`.
    pub fn mul_s(&self, k: i64) -> Self {
        Self {
            ram: self.ram,
            order: oadd(self.order, k),
            coeffs: self.coeffs.iter().map(|(e, p)| (e + k, p.clone())).collect(),
            den: self.den.clone(),
        }
    }

    /// Divide by a `t`-free polynomial of the form `c · x^a y^b · d(x) · d'(y)`.
    pub fn div_bl(&self, p: &BiLaurent) -> Result<Self, AlgebraError> {
        let (c, a, b, fx, fy) = separate(p).ok_or(AlgebraError::NotUnit)?;
        let mut den = self.den.clone();
        for f in [fx, fy].into_iter().flatten() {
            den = den.mul(&Den::single(f, 1));
        }
        let inv = BiLaurent::monomial(-a, -b, c.recip());
        let mut r = self.mul_bl(&inv);
        r.den = den;
        Ok(r)
    }

    /// Inverse; exact inputs with more than one term need [`TSeries::invert_to`].
    pub fn invert(&self) -> Result<Self, AlgebraError> {
        if self.is_exact() && self.coeffs.len() > 1 {
            return Err(AlgebraError::ExactNeedsOrder);
        }
        self.invert_s(INF)
    }

    /// Inverse, capping exact inputs at `t^order`.
    pub fn invert_to(&self, order: i64) -> Result<Self, AlgebraError> {
        self.invert_s(order.saturating_mul(self.ram as i64).min(INF))
    }

    fn invert_s(&self, cap: i64) -> Result<Self, AlgebraError> {
        let v = match self.coeffs.keys().next() {
            Some(v) => *v,
            None => return Err(AlgebraError::NotUnit),
        };
        let lead = &self.coeffs[&v];
        let (c, a, b, fx, fy) = separate(lead).ok_or(AlgebraError::NotUnit)?;
        let m_inv = BiLaurent::monomial(-a, -b, c.recip());
        let mut pfac = BiLaurent::one();
        let mut new_den_factors = Vec::new();
        for f in [fx, fy].into_iter().flatten() {
            pfac = &pfac * &f.to_bilaurent();
            new_den_factors.push(f);
        }
        let single = self.coeffs.len() == 1;
        let order = if self.is_exact() {
            if single {
                INF
            } else {
                cap
            }
        } else {
            self.order - 2 * v
        };
        let terms = if order >= INF { 1 } else { (order + v).max(0) as usize };
        // b_k = B_k / P^{k+1},  B_k = -m⁻¹ Σ_{i=1..k} a_i B_{k-i} P^{i-1}
        let a_coef: Vec<BiLaurent> = (0..terms).map(|i| self.coeff_s(v + i as i64)).collect();
        let mut ppow = vec![BiLaurent::one()];
        let mut big: Vec<BiLaurent> = Vec::with_capacity(terms);
        for k in 0..terms {
            if k == 0 {
                big.push(m_inv.clone());
                continue;
            }
            let mut s = BiLaurent::zero();
            for i in 1..=k {
                if a_coef[i].is_zero() || big[k - i].is_zero() {
                    continue;
                }
                while ppow.len() < i {
                    let nx = ppow.last().unwrap() * &pfac;
                    ppow.push(nx);
                }
                let mut t = &a_coef[i] * &big[k - i];
                if i > 1 {
                    t = &t * &ppow[i - 1];
                }
                s += &t;
            }
            big.push(-(&m_inv * &s));
        }
        let nterms = big.len();
        let mut coeffs = BTreeMap::new();
        if pfac.is_one() {
            for (k, bk) in big.into_iter().enumerate() {
                coeffs.insert(-v + k as i64, bk);
            }
        } else {
            while ppow.len() < nterms {
                let nx = ppow.last().unwrap() * &pfac;
                ppow.push(nx);
            }
            for (k, bk) in big.into_iter().enumerate() {
                coeffs.insert(-v + k as i64, &bk * &ppow[nterms - 1 - k]);
            }
        }
        let mut den = Den::one();
        for f in new_den_factors {
            den = den.mul(&Den::single(f, nterms as u32));
        }
        let mut r = Self::from_parts(self.ram, order, coeffs, den);
        if !self.den.is_one() {
            r = r.mul_bl(&self.den.to_bilaurent());
        }
        Ok(r)
    }

    pub fn div(&self, o: &Self) -> Result<Self, AlgebraError> {
        Ok(self.mul(&o.invert()?))
    }

    pub fn div_to(&self, o: &Self, order: i64) -> Result<Self, AlgebraError> {
        Ok(self.mul(&o.invert_to(order)?))
    }

    /// Square root; exact inputs with more than one term need [`TSeries::sqrt_to`].
    pub fn sqrt(&self) -> Result<Self, AlgebraError> {
        if self.is_exact() && self.coeffs.len() > 1 {
            return Err(AlgebraError::ExactNeedsOrder);
        }
        self.sqrt_s(INF)
    }

    pub fn sqrt_to(&self, order: i64) -> Result<Self, AlgebraError> {
        self.sqrt_s(order.saturating_mul(self.ram as i64).min(INF))
    }

    fn sqrt_s(&self, cap: i64) -> Result<Self, AlgebraError> {
        let den_root = self.den.sqrt().ok_or(AlgebraError::NoSqrt)?;
        let v = match self.coeffs.keys().next() {
            Some(v) => *v,
            None => {
                if self.is_exact() {
                    return Ok(Self::zero());
                }
                return Ok(Self::zero_to(0).with_ram(self.ram, self.order / 2));
            }
        };
        if v % 2 != 0 {
            return Err(AlgebraError::NoSqrt);
        }
        let (a, b, c) = match self.coeffs[&v].as_monomial() {
            Some(m) => m,
            None => return Err(AlgebraError::NoSqrt),
        };
        if a % 2 != 0 || b % 2 != 0 || c.is_negative() {
            return Err(AlgebraError::NoSqrt);
        }
        let rc = rational_sqrt(c).ok_or(AlgebraError::NoSqrt)?;
        let lead_inv = BiLaurent::monomial(-a, -b, c.recip());
        let single = self.coeffs.len() == 1;
        let rel = if self.is_exact() {
            if single {
                1
            } else {
                (cap - v / 2).max(1)
            }
        } else {
            self.order - v
        };
        let terms = rel.max(0) as usize;
        let u: Vec<BiLaurent> = (0..terms).map(|k| &self.coeff_s(v + k as i64) * &lead_inv).collect();
        let mut g: Vec<BiLaurent> = Vec::with_capacity(terms);
        let half = Q::new(1.into(), 2.into());
        for k in 0..terms {
            if k == 0 {
                g.push(BiLaurent::one());
                continue;
            }
            let mut s = u[k].clone();
            for i in 1..k {
                if g[i].is_zero() || g[k - i].is_zero() {
                    continue;
                }
                s -= &(&g[i] * &g[k - i]);
            }
            g.push(s.scale(&half));
        }
        let lead = BiLaurent::monomial(a / 2, b / 2, rc);
        let order = if self.is_exact() && single { INF } else { v / 2 + rel };
        let mut coeffs = BTreeMap::new();
        for (k, gk) in g.into_iter().enumerate() {
            coeffs.insert(v / 2 + k as i64, &gk * &lead);
        }
        let mut r = Self::from_parts(self.ram, order, coeffs, Den::one());
        if !den_root.is_one() {
            r.den = den_root;
        }
        Ok(r)
    }

    fn with_ram(mut self, ram: u32, order: i64) -> Self {
        self.ram = ram;
        self.order = order;
        self
    }

    /// Integer power; negative exponents invert first.
    pub fn pow(&self, n: i64) -> Result<Self, AlgebraError> {
        let base = if n < 0 { self.invert()? } else { self.clone() };
        Ok(base.powu(n.unsigned_abs()))
    }

    pub fn powu(&self, n: u64) -> Self {
        let mut acc = Self::one().lift(self.ram);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Apply an exponent map to every coefficient. Requires no denominator.
    pub fn map_exponents<F: Fn(i32, i32) -> (i32, i32)>(&self, f: F) -> Result<Self, AlgebraError> {
        if !self.den.is_one() {
            return Err(AlgebraError::Substitution("exponent map on a series with denominator".into()));
        }
        let coeffs = self.coeffs.iter().map(|(k, p)| (*k, p.map_exponents(&f))).collect();
        Ok(Self::from_parts(self.ram, self.order, coeffs, Den::one()))
    }

    /// Apply `f` to every numerator coefficient. Requires no denominator.
    pub fn map_coeffs<F: Fn(&BiLaurent) -> BiLaurent>(&self, f: F) -> Result<Self, AlgebraError> {
        if !self.den.is_one() {
            return Err(AlgebraError::Substitution("coefficient map on a series with denominator".into()));
        }
        let coeffs = self.coeffs.iter().map(|(k, p)| (*k, f(p))).collect();
        Ok(Self::from_parts(self.ram, self.order, coeffs, Den::one()))
    }

    /// Substitute a rational value for `x` or `y`.
    pub fn eval_var(&self, var: Var, v: &Q) -> Result<Self, AlgebraError> {
        let (dv, rest) = self.den.split(var);
        let mut scalar = Q::one();
        for (f, e) in dv.factors() {
            let fv = f.eval(v);
            if fv.is_zero() {
                return Err(AlgebraError::Substitution("denominator vanishes".into()));
            }
            scalar *= num_traits::pow(fv, e as usize);
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|(k, p)| {
                let q = match var {
                    Var::X => p.eval_x(v),
                    Var::Y => p.eval_y(v),
                };
                (*k, q.scale(&scalar.recip()))
            })
            .collect();
        Ok(Self::from_parts(self.ram, self.order, coeffs, rest))
    }

    /// Substitute a series `z` (free of the other variable's denominator) for `x` or `y`.
    /// Coefficients of unknown orders are assumed to have pole order in `var`
    /// no worse than the known ones.
    pub fn subs(&self, var: Var, z: &Self) -> Result<Self, AlgebraError> {
        let (a, z) = Self::align(self, z);
        let vz = z.val();
        if vz < 0 {
            return Err(AlgebraError::Substitution("substituted series has negative valuation".into()));
        }
        let mut lo = 0i32;
        let mut hi = 0i32;
        for p in a.coeffs.values() {
            lo = lo.min(var_min(p, var));
            hi = hi.max(var_max(p, var));
        }
        let zinv = if lo < 0 { Some(z.invert()?) } else { None };
        let va = a.val();
        let mut order = if a.is_exact() { INF } else { oadd(a.order, vz * lo as i64) };
        if hi >= 1 {
            order = order.min(oadd(z.order, va));
        }
        if let Some(zi) = &zinv {
            order = order.min(oadd(zi.order, va - vz * (-lo as i64 - 1)));
        }
        let mut pos = vec![Self::one().lift(a.ram)];
        for _ in 1..=hi.max(0) {
            let nx = pos.last().unwrap().mul(&z).truncate_s(order);
            pos.push(nx);
        }
        let mut neg = vec![Self::one().lift(a.ram)];
        if let Some(zi) = &zinv {
            for _ in 1..=(-lo).max(0) {
                let nx = neg.last().unwrap().mul(zi).truncate_s(order);
                neg.push(nx);
            }
        }
        let mut acc = Self::zero_to(order).lift(a.ram);
        acc.order = order;
        let (dv, rest) = a.den.split(var);
        for (k, p) in a.coeffs.range(..order) {
            let mut rows: BTreeMap<i32, BiLaurent> = BTreeMap::new();
            for (i, j, c) in p.terms() {
                let (e, keep) = match var {
                    Var::X => (i, (0, j)),
                    Var::Y => (j, (i, 0)),
                };
                rows.entry(e).or_default().add_term(keep.0, keep.1, c.clone());
            }
            for (e, poly) in rows {
                let zp = if e >= 0 { &pos[e as usize] } else { &neg[(-e) as usize] };
                let term = zp.mul_bl(&poly).mul_s(*k);
                acc = acc.add(&term);
            }
        }
        acc = acc.truncate_s(order);
        acc.den = Den::one();
        if !dv.is_one() {
            let mut dz = Self::one().lift(a.ram);
            for (f, e) in dv.factors() {
                let fz = Self::from_bilaurent(f.to_bilaurent()).subs(var, &z)?;
                dz = dz.mul(&fz.powu(e as u64));
            }
            let ord = acc.order_t();
            acc = acc.mul(&dz.invert_to(ord)?);
        }
        acc.den = rest;
        Ok(acc.truncate_s(order))
    }

    /// Try to cancel denominator factors that divide every numerator coefficient.
    pub fn reduce(&self) -> Self {
        if self.den.is_one() {
            return self.clone();
        }
        let mut cur = self.clone();
        let factors: Vec<(Factor, u32)> = self.den.factors().map(|(f, e)| (f.clone(), e)).collect();
        for (f, e) in factors {
            let fp = f.to_bilaurent();
            for _ in 0..e {
                let mut next = BTreeMap::new();
                let mut ok = true;
                for (k, p) in &cur.coeffs {
                    match p.div_exact_univariate(&fp) {
                        Some(q) => {
                            next.insert(*k, q);
                        }
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if !ok {
                    break;
                }
                let mut den = Den::one();
                for (g, ge) in cur.den.factors() {
                    let ge = if *g == f { ge - 1 } else { ge };
                    den = den.mul(&Den::single(g.clone(), ge));
                }
                cur = Self::from_parts(cur.ram, cur.order, next, den);
            }
        }
        cur
    }

    /// Drop the denominator by expanding it as a power series in `x` and `y`,
    /// keeping exponents up to `max_exp` in each variable.
    pub fn expand_den(&self, max_exp: i32) -> Self {
        if self.den.is_one() {
            return self.clone();
        }
        let (dx, dy) = self.den.split(Var::X);
        let mut coeffs = BTreeMap::new();
        for (k, p) in &self.coeffs {
            let nx = (max_exp - p.min_x().unwrap_or(0)).max(0) as usize;
            let ny = (max_exp - p.min_y().unwrap_or(0)).max(0) as usize;
            let ix = inverse_den_coeffs(&dx, nx);
            let iy = inverse_den_coeffs(&dy, ny);
            let mut out = BiLaurent::zero();
            for (a, b, c) in p.terms() {
                for (u, cu) in ix.iter().enumerate() {
                    if a + u as i32 > max_exp {
                        break;
                    }
                    if cu.is_zero() {
                        continue;
                    }
                    for (v, cv) in iy.iter().enumerate() {
                        if b + v as i32 > max_exp {
                            break;
                        }
                        out.add_term(a + u as i32, b + v as i32, c * cu * cv);
                    }
                }
            }
            coeffs.insert(*k, out);
        }
        Self::from_parts(self.ram, self.order, coeffs, Den::one())
    }
}

fn var_min(p: &BiLaurent, v: Var) -> i32 {
    match v {
        Var::X => p.min_x().unwrap_or(0),
        Var::Y => p.min_y().unwrap_or(0),
    }
}

fn var_max(p: &BiLaurent, v: Var) -> i32 {
    match v {
        Var::X => p.max_x().unwrap_or(0),
        Var::Y => p.max_y().unwrap_or(0),
    }
}

fn inverse_den_coeffs(d: &Den, n: usize) -> Vec<Q> {
    let mut acc = vec![Q::zero(); n + 1];
    acc[0] = Q::one();
    for (f, e) in d.factors() {
        let inv = f.inverse_coeffs(n);
        for _ in 0..e {
            let mut next = vec![Q::zero(); n + 1];
            for (a, ca) in acc.iter().enumerate() {
                if ca.is_zero() {
                    continue;
                }
                for (b, cb) in inv.iter().enumerate().take(n + 1 - a) {
                    next[a + b] += ca * cb;
                }
            }
            acc = next;
        }
    }
    acc
}

impl fmt::Display for TSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tv = |k: i64| -> String {
            if self.ram == 1 {
                format!("t^{k}")
            } else {
                format!("s^{k}")
            }
        };
        let mut parts = Vec::new();
        for (k, p) in &self.coeffs {
            parts.push(format!("({p})*{}", tv(*k)));
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{}", parts.join(" + "))?;
        if !self.den.is_one() {
            write!(f, " / ({})", self.den.to_bilaurent())?;
        }
        if !self.is_exact() {
            write!(f, " + O({})", tv(self.order))?;
        }
        Ok(())
    }
}

impl fmt::Debug for TSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

macro_rules! series_ops {
    ($tr:ident, $f:ident, $m:ident) => {
        impl std::ops::$tr<&TSeries> for &TSeries {
            type Output = TSeries;
            fn $f(self, o: &TSeries) -> TSeries {
                TSeries::$m(self, o)
            }
        }
        impl std::ops::$tr<TSeries> for TSeries {
            type Output = TSeries;
            fn $f(self, o: TSeries) -> TSeries {
                TSeries::$m(&self, &o)
            }
        }
        impl std::ops::$tr<&TSeries> for TSeries {
            type Output = TSeries;
            fn $f(self, o: &TSeries) -> TSeries {
                TSeries::$m(&self, o)
            }
        }
        impl std::ops::$tr<TSeries> for &TSeries {
            type Output = TSeries;
            fn $f(self, o: TSeries) -> TSeries {
                TSeries::$m(self, &o)
            }
        }
    };
}
series_ops!(Add, add, add);
series_ops!(Sub, sub, sub);
series_ops!(Mul, mul, mul);

impl std::ops::Neg for &TSeries {
    type Output = TSeries;
    fn neg(self) -> TSeries {
        TSeries::neg(self)
    }
}

impl std::ops::Neg for TSeries {
    type Output = TSeries;
    fn neg(self) -> TSeries {
        TSeries::neg(&self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, qf};

    fn walk_poly() -> BiLaurent {
        BiLaurent::from_terms([(1, 0, q(1)), (-1, 0, q(1)), (0, 1, q(1)), (0, -1, q(1))])
    }

    #[test]
    fn geometric_series_telescopes() {
        let s = walk_poly();
        let k = TSeries::one() - TSeries::monomial_t(1, s.clone());
        let g = TSeries::from_t_coeffs((0..5).map(|n| s.pow(n)).collect(), Some(5));
        let p = k.mul(&g);
        assert_eq!(p.order_t(), 5);
        assert_eq!(p, TSeries::one().truncate(5));
    }

    #[test]
    fn valuation_cancellation() {
        let a = TSeries::monomial_t(-1, BiLaurent::x());
        let b = TSeries::monomial_t(1, BiLaurent::xy(-1, 0));
        assert_eq!(a.mul(&b), TSeries::one());
    }

    #[test]
    fn square_of_binomial() {
        let a = TSeries::from_t_coeffs(vec![BiLaurent::zero(), BiLaurent::int(2), BiLaurent::zero(), BiLaurent::zero(), BiLaurent::int(8)], Some(5));
        let p = a.mul(&a);
        assert_eq!(p.order_t(), 6);
        assert_eq!(p.coeff(0, 0, 2).unwrap(), q(4));
        assert_eq!(p.coeff(0, 0, 5).unwrap(), q(32));
        assert_eq!(p.coeff(0, 0, 3).unwrap(), q(0));
    }

    #[test]
    fn inverse_counts_closed_walks() {
        let k = TSeries::one() - TSeries::monomial_t(1, walk_poly());
        let g = k.invert_to(6).unwrap();
        assert_eq!(g.coeff(0, 0, 2).unwrap(), q(4));
        assert_eq!(g.coeff(0, 0, 4).unwrap(), q(36));
        let kr = BiLaurent::from_terms([(1, 1, q(1)), (-1, 0, q(1)), (0, -1, q(1))]);
        let g = (TSeries::one() - TSeries::monomial_t(1, kr)).invert_to(5).unwrap();
        assert_eq!(g.coeff(0, 0, 3).unwrap(), q(6));
        assert_eq!(g.coeff(5, 0, 1).unwrap(), q(0));
        assert_eq!(TSeries::one().invert().unwrap(), TSeries::one());
    }

    #[test]
    fn sqrt_catalan() {
        let a = TSeries::one() - TSeries::monomial_t(2, BiLaurent::int(4));
        let r = a.sqrt_to(8).unwrap();
        let want = [1, 0, -2, 0, -2, 0, -4, 0];
        for (n, w) in want.iter().enumerate() {
            assert_eq!(r.coeff(0, 0, n as i64).unwrap(), q(*w));
        }
        assert_eq!(r.order_t(), 8);
    }

    #[test]
    fn sqrt_with_negative_valuation() {
        let a = (TSeries::one() + TSeries::monomial_t(1, BiLaurent::int(4))).mul_t(-2).scale(&qf(1, 4)).truncate(4);
        let r = a.sqrt().unwrap();
        assert_eq!(r.coeff(0, 0, -1).unwrap(), qf(1, 2));
        assert_eq!(r.coeff(0, 0, 0).unwrap(), q(1));
        assert_eq!(r.coeff(0, 0, 1).unwrap(), q(-1));
        assert!(TSeries::t().sqrt().is_err());
    }

    #[test]
    fn denominators_expand() {
        // 1/(1+x) = 1 - x + x² ...
        let a = TSeries::one().div_bl(&BiLaurent::from_x_coeffs(&[q(1), q(1)])).unwrap();
        assert_eq!(a.coeff(2, 0, 0).unwrap(), q(1));
        assert_eq!(a.coeff(3, 0, 0).unwrap(), q(-1));
        let b = a.mul_bl(&BiLaurent::from_x_coeffs(&[q(1), q(1)])).reduce();
        assert!(!b.has_den());
        assert_eq!(b, TSeries::one());
        // (1+x)/(1+x) - 1 == 0 without reduction
        let c = a.mul_bl(&BiLaurent::from_x_coeffs(&[q(1), q(1)])) - TSeries::one();
        assert!(c.is_zero());
    }

    #[test]
    fn invert_separable_leading_coefficient() {
        // a = (1+x) + t·y, inverse has denominator (1+x)^k
        let a = TSeries::from_bilaurent(BiLaurent::from_x_coeffs(&[q(1), q(1)])) + TSeries::monomial_t(1, BiLaurent::y());
        let b = a.invert_to(5).unwrap();
        let p = a.mul(&b);
        assert_eq!(p.sub(&TSeries::one()).truncate(5).is_zero(), true);
    }

    #[test]
    fn substitution_into_powers() {
        // f(y) = y + y², y := t + t²
        let f = TSeries::from_bilaurent(&BiLaurent::y() + &BiLaurent::xy(0, 2));
        let z = TSeries::from_t_coeffs(vec![BiLaurent::zero(), BiLaurent::one(), BiLaurent::one()], Some(6));
        let r = f.subs(Var::Y, &z).unwrap();
        let want = z.clone() + z.mul(&z);
        assert!((r - want).truncate(6).is_zero());
    }

    #[test]
    fn ramification_round_trip() {
        let a = TSeries::from_t_coeffs(vec![BiLaurent::int(1), BiLaurent::x(), BiLaurent::y()], Some(3));
        let l = a.lift(2);
        assert_eq!(l.ram(), 2);
        assert_eq!(l.restrict(), a);
    }
}
