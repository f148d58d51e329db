//! Algebraic series: Newton iteration from a simple root, Newton–Puiseux for
//! roots that need ramification, kernel roots and a cached catalog of the
//! named series (`V`, `W`, `Z`, `M`, `N`, `P1`, `P2`, `A1`).
//!
//! Equations are dense polynomials in `Y` whose coefficients are series,
//! `P(Y) = Σ_k c_k Y^k`.

use std::collections::BTreeMap;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Deserialize;

use crate::algebra::json::q_from_str;
use crate::algebra::{q, AlgebraError, BiLaurent, TSeries, Q};
use crate::models::{hv_splits, ModelError, StepSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("ramification needed or root not simple")]
    NotSimple,
    #[error("seed is not a root of the equation at t = 0")]
    NotARoot,
    #[error("equation coefficient has negative valuation")]
    NegativeValuation,
    #[error("internal error: back-substitution residual nonzero at s^{0}")]
    Residual(i64),
    #[error("characteristic polynomial has non-rational roots")]
    Irrational,
    #[error("kernel must have x-valuation -1 and x-degree 1")]
    KernelShape,
    #[error("unknown series `{name}`; valid: {}", NAMED.join(", "), name = .0)]
    Unknown(String),
    #[error("bad equation: {0}")]
    BadEquation(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// `Σ_k c_k y^k` by Horner's rule.
pub fn eval_poly(p: &[TSeries], y: &TSeries) -> TSeries {
    let mut acc = TSeries::zero();
    for c in p.iter().rev() {
        acc = acc.mul(y).add(c);
    }
    acc
}

/// Formal derivative in `Y`.
pub fn derivative(p: &[TSeries]) -> Vec<TSeries> {
    p.iter().enumerate().skip(1).map(|(k, c)| c.scale(&q(k as i64))).collect()
}

fn common_ram(p: &[TSeries], ram: u32) -> u32 {
    p.iter().fold(ram.max(1) as u64, |r, c| r.lcm(&(c.ram() as u64))) as u32
}

/// Series root of `P` with constant term `y0`, in `s = t^{1/ram}`, known below `t^order`.
pub fn newton_series(p: &[TSeries], y0: &Q, order: i64, ram: u32) -> Result<TSeries, SolveError> {
    let r = common_ram(p, ram);
    let p: Vec<TSeries> = p.iter().map(|c| c.lift(r)).collect();
    if p.iter().any(|c| !c.is_zero() && c.val() < 0) {
        return Err(SolveError::NegativeValuation);
    }
    let dp = derivative(&p);
    let target = order * r as i64;
    let mut y = TSeries::constant(y0.clone()).lift(r).truncate_s(1);
    if !eval_poly(&p, &y).truncate_s(1).is_zero() {
        return Err(SolveError::NotARoot);
    }
    if eval_poly(&dp, &y).coeff_s(0).is_zero() {
        return Err(SolveError::NotSimple);
    }
    let mut prec = 1;
    while prec < target {
        prec = (2 * prec).min(target);
        let yt = y.truncate_s(prec);
        let yt = if yt.order() < prec { pad(&yt, prec) } else { yt };
        let f = eval_poly(&p, &yt).truncate_s(prec);
        let d = eval_poly(&dp, &yt).truncate_s(prec);
        y = yt.sub(&f.mul(&d.invert()?)).truncate_s(prec);
    }
    let y = pad(&y, target);
    let res = eval_poly(&p, &y).truncate_s(target);
    if let Some((k, _, _)) = res.first_nonzero() {
        return Err(SolveError::Residual(k));
    }
    Ok(y.restrict())
}

/// Reinterpret a series known below `s^a` (`a ≤ prec`) as known below `s^prec`:
/// used only for seeds, whose missing terms are then fixed by Newton steps.
fn pad(s: &TSeries, prec: i64) -> TSeries {
    TSeries::from_parts(s.ram(), prec, s.coeffs().clone(), s.den().clone())
}

/// Dense polynomial in the working variable `w`.
type Poly = Vec<Q>;

fn poly_val(p: &Poly) -> Option<usize> {
    p.iter().position(|c| !c.is_zero())
}

fn poly_trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}


/// Nonzero rational roots of `Σ c_k z^k` with multiplicities.
fn rational_roots(c: &[Q]) -> Vec<(Q, usize)> {
    let mut c: Vec<Q> = poly_trim(c.to_vec());
    while c.first().is_some_and(|x| x.is_zero()) {
        c.remove(0);
    }
    if c.len() < 2 {
        return Vec::new();
    }
    let l = c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = c.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect();
    let a0 = ints[0].abs();
    let an = ints.last().unwrap().abs();
    let mut out = Vec::new();
    let mut cur = c.clone();
    for p in divisors(&a0) {
        for d in divisors(&an) {
            for sign in [1i64, -1] {
                let z = Q::new(&p * BigInt::from(sign), d.clone());
                if out.iter().any(|(r, _): &(Q, usize)| *r == z) {
                    continue;
                }
                let mut mult = 0;
                while cur.len() > 1 {
                    let (quo, rem) = synthetic_div(&cur, &z);
                    if !rem.is_zero() {
                        break;
                    }
                    cur = quo;
                    mult += 1;
                }
                if mult > 0 {
                    out.push((z, mult));
                }
            }
        }
    }
    out
}

fn synthetic_div(c: &[Q], z: &Q) -> (Vec<Q>, Q) {
    let n = c.len() - 1;
    let mut quo = vec![Q::zero(); n];
    let mut acc = Q::zero();
    for k in (0..=n).rev() {
        acc = &acc * z + &c[k];
        if k > 0 {
            quo[k - 1] = acc.clone();
        }
    }
    (quo, acc)
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            out.push(d.clone());
            let e = n / &d;
            if e != d {
                out.push(e);
            }
        }
        d += 1;
    }
    out
}

/// A branch being refined: `Y = Σ prefix[e] w^e + w^shift · Y_cur`, `t = w^ram`.
#[derive(Clone)]
struct Branch {
    eq: Vec<Poly>,
    ram: u32,
    prefix: BTreeMap<i64, Q>,
    shift: i64,
}

/// All roots of `Σ_k a_k(t) Y^k` (polynomial coefficients `a_k[n]` of `t^n`)
/// that are Puiseux series with nonnegative valuation, known below `t^order`.
pub fn puiseux_roots(eq: &[Poly], order: i64) -> Result<Vec<TSeries>, SolveError> {
    let eq: Vec<Poly> = eq.iter().cloned().map(poly_trim).collect();
    let start = Branch { eq, ram: 1, prefix: BTreeMap::new(), shift: 0 };
    let mut out = Vec::new();
    refine(start, true, order, &mut out)?;
    Ok(out)
}

fn refine(b: Branch, first: bool, order: i64, out: &mut Vec<TSeries>) -> Result<(), SolveError> {
    let mut eq = b.eq.clone();
    while eq.last().is_some_and(|a| a.is_empty()) {
        eq.pop();
    }
    if eq.len() < 2 {
        return Ok(());
    }
    if eq[0].is_empty() {
        // Y_cur = 0 is an exact root.
        out.push(assemble(&b, None, order));
        eq.remove(0);
        return refine(Branch { eq, ..b }, first, order, out);
    }
    let pts: Vec<(i64, i64)> =
        eq.iter().enumerate().filter_map(|(k, a)| poly_val(a).map(|v| (k as i64, v as i64))).collect();
    for (k1, v1, k2, v2) in lower_hull(&pts) {
        // Edge slope -γ with γ = (v1 - v2) / (k2 - k1).
        let num = v1 - v2;
        let den = k2 - k1;
        if num < 0 || (num == 0 && !first) {
            continue;
        }
        let g = num.gcd(&den);
        let (p, qd) = (num / g, den / g);
        let m_q = v1 * qd + k1 * p;
        let mut phi = vec![Q::zero(); (k2 - k1 + 1) as usize];
        for &(k, v) in &pts {
            if k >= k1 && k <= k2 && v * qd + k * p == m_q {
                phi[(k - k1) as usize] = eq[k as usize][v as usize].clone();
            }
        }
        let roots = rational_roots(&phi);
        let found: usize = roots.iter().map(|(_, m)| m).sum();
        if found < (k2 - k1) as usize {
            return Err(SolveError::Irrational);
        }
        for (c, mult) in roots {
            let next = substitute(&eq, p, qd, m_q, &c);
            let mut prefix: BTreeMap<i64, Q> = b.prefix.iter().map(|(e, v)| (e * qd, v.clone())).collect();
            let shift = b.shift * qd + p;
            *prefix.entry(shift).or_insert_with(Q::zero) += &c;
            let nb = Branch { eq: next, ram: b.ram * qd as u32, prefix, shift };
            if mult == 1 {
                let coeffs: Vec<TSeries> = nb
                    .eq
                    .iter()
                    .map(|a| {
                        TSeries::from_s_coeffs(nb.ram, 0, a.iter().cloned().map(BiLaurent::constant).collect(), crate::algebra::INF)
                    })
                    .collect();
                let yn = newton_series(&coeffs, &Q::zero(), order, nb.ram)?;
                out.push(assemble(&nb, Some(yn), order));
            } else {
                refine(nb, false, order, out)?;
            }
        }
    }
    Ok(())
}

/// `P(w^q, w^p (c + Y)) / w^{m_q}` as a polynomial in `Y` over `ℚ[w]`.
fn substitute(eq: &[Poly], p: i64, qd: i64, m_q: i64, c: &Q) -> Vec<Poly> {
    let deg = eq.len() - 1;
    let mut out: Vec<Poly> = vec![Vec::new(); deg + 1];
    for (k, a) in eq.iter().enumerate() {
        if a.is_empty() {
            continue;
        }
        // a(w^q) w^{pk}
        let mut base = vec![Q::zero(); (a.len() - 1) * qd as usize + 1 + p as usize * k];
        for (n, cn) in a.iter().enumerate() {
            base[n * qd as usize + p as usize * k] = cn.clone();
        }
        // (c + Y)^k = Σ_j binom(k, j) c^{k-j} Y^j
        let mut binom = Q::one();
        for j in 0..=k {
            let coef = &binom * num_traits::pow(c.clone(), k - j);
            let term: Poly = base.iter().map(|x| x * &coef).collect();
            let slot = &mut out[j];
            if slot.len() < term.len() {
                slot.resize(term.len(), Q::zero());
            }
            for (i, x) in term.into_iter().enumerate() {
                slot[i] += x;
            }
            binom = binom * Q::from_integer(BigInt::from(k - j)) / Q::from_integer(BigInt::from(j + 1));
        }
    }
    out.into_iter()
        .map(|a| {
            let a = poly_trim(a);
            if a.is_empty() {
                return a;
            }
            debug_assert!(a[..m_q as usize].iter().all(|x| x.is_zero()));
            a[m_q as usize..].to_vec()
        })
        .collect()
}

fn assemble(b: &Branch, tail: Option<TSeries>, order: i64) -> TSeries {
    let target = order * b.ram as i64;
    let mut coeffs = BTreeMap::new();
    for (e, c) in &b.prefix {
        if !c.is_zero() {
            coeffs.insert(*e, BiLaurent::constant(c.clone()));
        }
    }
    let head = TSeries::from_parts(b.ram, target, coeffs, Default::default());
    let y = match tail {
        Some(t) => head.add(&t.lift(b.ram).mul_s(b.shift)),
        None => head,
    };
    y.truncate_s(target).restrict()
}

/// Lower convex hull edges `(k1, v1, k2, v2)` of points sorted by `k`.
fn lower_hull(pts: &[(i64, i64)]) -> Vec<(i64, i64, i64, i64)> {
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &p in pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // Remove b if it lies on or above segment a–p.
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull.windows(2).map(|w| (w[0].0, w[0].1, w[1].0, w[1].1)).collect()
}

/// Convert a `y`-Laurent polynomial with coefficients in `ℚ[t]` to a
/// polynomial in `Y` (after clearing the lowest power of `y`).
fn y_equation(s: &TSeries) -> Result<Vec<Poly>, SolveError> {
    if !s.is_exact() || s.ram() != 1 || s.has_den() {
        return Err(SolveError::BadEquation("expected an exact polynomial in t and y".into()));
    }
    let lo = s.coeffs().values().filter_map(|p| p.min_y()).min().unwrap_or(0);
    let hi = s.coeffs().values().filter_map(|p| p.max_y()).max().unwrap_or(0);
    let mut eq: Vec<Poly> = vec![Vec::new(); (hi - lo + 1) as usize];
    for (n, p) in s.coeffs() {
        if *n < 0 {
            return Err(SolveError::NegativeValuation);
        }
        for (i, j, c) in p.terms() {
            if i != 0 {
                return Err(SolveError::BadEquation("unexpected x in equation".into()));
            }
            let slot = &mut eq[(j - lo) as usize];
            if slot.len() <= *n as usize {
                slot.resize(*n as usize + 1, Q::zero());
            }
            slot[*n as usize] += c;
        }
    }
    Ok(eq)
}

/// `Δ(y) = (1 − t𝒱₀)² − 4t²𝒱₋𝒱₊` from the companion's vertical split.
pub fn companion_delta(model: &StepSet) -> TSeries {
    let [vm, v0, vp] = hv_splits(&model.companion_poly()).1;
    let a = TSeries::one() - TSeries::monomial_t(1, v0);
    a.mul(&a) - TSeries::monomial_t(2, (&vm * &vp).scale(&q(4)))
}

/// Roots of the companion `Δ(y)` that are finite at `t = 0`, sorted by their
/// expansions, each with the ramification it needs.
pub fn delta_roots(model: &StepSet, order: i64) -> Result<Vec<TSeries>, SolveError> {
    y_roots(&companion_delta(model), order)
}

/// Roots finite at `t = 0` of an exact Laurent polynomial in `y` over `ℚ[t]`,
/// sorted by their expansions.
pub fn y_roots(s: &TSeries, order: i64) -> Result<Vec<TSeries>, SolveError> {
    let eq = y_equation(s)?;
    let mut roots = puiseux_roots(&eq, order)?;
    let r = roots.iter().fold(1u64, |a, s| a.lcm(&(s.ram() as u64))) as u32;
    let key = |s: &TSeries| -> Vec<Q> {
        let l = s.lift(r);
        (0..(order * r as i64).min(8 * r as i64)).map(|k| l.coeff_s(k).coeff(0, 0)).collect()
    };
    roots.sort_by(|a, b| key(b).cmp(&key(a)));
    Ok(roots)
}

/// The root `𝒳(y)` of `x𝒦(x, y) = x − t(𝒱₋ + x𝒱₀ + x²𝒱₊)` with `𝒳 = O(t)`.
pub fn kernel_root(model: &StepSet, order: i64) -> Result<TSeries, SolveError> {
    let p = model.companion_poly();
    if p.min_x() != Some(-1) || p.max_x().unwrap_or(0) > 1 {
        return Err(SolveError::KernelShape);
    }
    let [vm, v0, vp] = hv_splits(&p).1;
    let eq = vec![
        TSeries::monomial_t(1, vm),
        TSeries::monomial_t(1, v0) - TSeries::one(),
        TSeries::monomial_t(1, vp),
    ];
    newton_series(&eq, &Q::zero(), order, 1)
}

/// A series defined by a polynomial equation and a seed, with a lazily
/// extended expansion.
pub struct AlgSeries {
    pub name: &'static str,
    pub seed: i64,
    pub ram: u32,
    equation: fn(i64) -> Result<Vec<TSeries>, SolveError>,
    cache: RwLock<Option<TSeries>>,
}

impl AlgSeries {
    const fn new(name: &'static str, seed: i64, equation: fn(i64) -> Result<Vec<TSeries>, SolveError>) -> Self {
        Self { name, seed, ram: 1, equation, cache: RwLock::new(None) }
    }

    /// Coefficients of the defining equation, known below `t^order`.
    pub fn equation(&self, order: i64) -> Result<Vec<TSeries>, SolveError> {
        (self.equation)(order)
    }

    /// Expansion known below `t^order`.
    pub fn expansion(&self, order: i64) -> Result<TSeries, SolveError> {
        if let Some(s) = self.cache.read().unwrap().as_ref() {
            if s.order_t() >= order {
                return Ok(s.truncate(order));
            }
        }
        let mut slot = self.cache.write().unwrap();
        if let Some(s) = slot.as_ref() {
            if s.order_t() >= order {
                return Ok(s.truncate(order));
            }
        }
        let s = newton_series(&self.equation(order)?, &q(self.seed), order, self.ram)?;
        *slot = Some(s.clone());
        Ok(s)
    }
}

fn c(n: i64) -> TSeries {
    TSeries::int(n)
}

fn t() -> TSeries {
    TSeries::t()
}

fn poly_in(s: &TSeries, coeffs: &[i64]) -> TSeries {
    coeffs.iter().rev().fold(TSeries::zero(), |acc, k| acc.mul(s).add(&c(*k)))
}

fn eq_v(_: i64) -> Result<Vec<TSeries>, SolveError> {
    // tY³ − Y + 2t
    Ok(vec![t().scale(&q(2)), c(-1), TSeries::zero(), t()])
}

fn eq_w(order: i64) -> Result<Vec<TSeries>, SolveError> {
    // 4W² − 4W + V³
    let v = V.expansion(order)?;
    Ok(vec![v.powu(3), c(-4), c(4)])
}

fn eq_z(order: i64) -> Result<Vec<TSeries>, SolveError> {
    // WZ² − 2Z + W
    let w = W.expansion(order)?;
    Ok(vec![w.clone(), c(-2), w])
}

fn eq_m(_: i64) -> Result<Vec<TSeries>, SolveError> {
    // 4tM² + (2t − 1)M + t
    Ok(vec![t(), t().scale(&q(2)) - c(1), t().scale(&q(4))])
}

fn eq_n(order: i64) -> Result<Vec<TSeries>, SolveError> {
    // MN² − (2M + 1)N + M
    let m = M.expansion(order)?;
    Ok(vec![m.clone(), -(m.scale(&q(2)) + c(1)), m])
}

fn eq_p1(order: i64) -> Result<Vec<TSeries>, SolveError> {
    // (1+4M)³ P(1−P)² − M(1+M)³(1+P)⁴
    let m = M.expansion(order)?;
    let a = poly_in(&m, &[1, 4]).powu(3);
    let b = m.mul(&poly_in(&m, &[1, 1]).powu(3));
    let lhs = [0, 1, -2, 1].map(|k| a.scale(&q(k)));
    let rhs = [1, 4, 6, 4, 1].map(|k| b.scale(&q(k)));
    Ok((0..5).map(|k| lhs.get(k).cloned().unwrap_or_else(TSeries::zero) - rhs[k].clone()).collect())
}

fn eq_p2(order: i64) -> Result<Vec<TSeries>, SolveError> {
    // P⁴ − (1+4M)³P² + 4M(1+M)³(1+4M)³
    let m = M.expansion(order)?;
    let a = poly_in(&m, &[1, 4]).powu(3);
    let b = m.mul(&poly_in(&m, &[1, 1]).powu(3)).mul(&a).scale(&q(4));
    Ok(vec![b, TSeries::zero(), -a, TSeries::zero(), c(1)])
}

fn eq_a1(order: i64) -> Result<Vec<TSeries>, SolveError> {
    let n = N.expansion(order)?;
    let one_m = c(1) - n.clone();
    let n1 = n.clone() + c(1);
    let r = poly_in(&n, &[1, -1, 1]);
    let r3 = r.powu(3);
    Ok(vec![
        r3.mul(&r3).scale(&q(256)),
        one_m.powu(3).mul(&n1.powu(3)).mul(&r3).scale(&q(-64)),
        n.mul(&r3).mul(&one_m.powu(4)).scale(&q(32)),
        n.mul(&n1.powu(3)).mul(&one_m.powu(7)).scale(&q(4)),
        n.mul(&n).mul(&one_m.powu(8)),
    ])
}

pub static V: AlgSeries = AlgSeries::new("V", 0, eq_v);
pub static W: AlgSeries = AlgSeries::new("W", 0, eq_w);
pub static Z: AlgSeries = AlgSeries::new("Z", 0, eq_z);
pub static M: AlgSeries = AlgSeries::new("M", 0, eq_m);
pub static N: AlgSeries = AlgSeries::new("N", 0, eq_n);
pub static P1: AlgSeries = AlgSeries::new("P1", 0, eq_p1);
pub static P2: AlgSeries = AlgSeries::new("P2", 1, eq_p2);
pub static A1: AlgSeries = AlgSeries::new("A1", 4, eq_a1);

pub const NAMED: [&str; 8] = ["V", "W", "Z", "M", "N", "P1", "P2", "A1"];

static REGISTRY: [&AlgSeries; 8] = [&V, &W, &Z, &M, &N, &P1, &P2, &A1];

/// Look up a named series.
pub fn named(name: &str) -> Result<&'static AlgSeries, SolveError> {
    REGISTRY.iter().copied().find(|s| s.name == name).ok_or_else(|| SolveError::Unknown(name.into()))
}

/// Expansion of a named series known below `t^order`.
pub fn named_series(name: &str, order: i64) -> Result<TSeries, SolveError> {
    named(name)?.expansion(order)
}

/// JSON equation input: `{"terms": [{"k": 3, "t": 1, "c": "1"}, …], "seed": "0", "ram": 1}`
/// for `Σ c t^t Y^k`.
#[derive(Debug, Clone, Deserialize)]
pub struct EquationJson {
    pub terms: Vec<EqTermJson>,
    #[serde(default)]
    pub seed: Option<String>,
    #[serde(default)]
    pub ram: Option<u32>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct EqTermJson {
    pub k: usize,
    pub t: i64,
    pub c: String,
}

impl EquationJson {
    pub fn coefficients(&self) -> Result<Vec<TSeries>, SolveError> {
        let deg = self.terms.iter().map(|e| e.k).max().unwrap_or(0);
        let mut out = vec![TSeries::zero(); deg + 1];
        for e in &self.terms {
            let cq = q_from_str(&e.c)?;
            out[e.k] = out[e.k].add(&TSeries::monomial_t(e.t, BiLaurent::constant(cq)));
        }
        Ok(out)
    }

    pub fn solve(&self, order: i64) -> Result<TSeries, SolveError> {
        let seed = match &self.seed {
            Some(s) => q_from_str(s)?,
            None => Q::zero(),
        };
        newton_series(&self.coefficients()?, &seed, order, self.ram.unwrap_or(1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::qf;

    fn coeffs_t(s: &TSeries, n: i64) -> Vec<Q> {
        (0..n).map(|k| s.coeff(0, 0, k).unwrap()).collect()
    }

    fn motzkin(n: usize) -> Vec<i64> {
        let mut m = vec![1i64; n];
        for k in 1..n {
            let mut s = m[k - 1];
            for i in 0..k.saturating_sub(1) {
                s += m[i] * m[k - 2 - i];
            }
            m[k] = s;
        }
        m
    }

    #[test]
    fn v_first_terms() {
        let v = V.expansion(8).unwrap();
        let want: Vec<Q> = [0, 2, 0, 0, 8, 0, 0, 96].iter().map(|&k| q(k)).collect();
        assert_eq!(coeffs_t(&v, 8), want);
    }

    #[test]
    fn m_is_scaled_motzkin() {
        let m = M.expansion(12).unwrap();
        let mz = motzkin(11);
        for n in 1..12 {
            assert_eq!(m.coeff(0, 0, n as i64).unwrap(), q((1i64 << (n - 1)) * mz[n - 1]));
        }
    }

    #[test]
    fn table_cross_identities() {
        let o = 20;
        let v = V.expansion(o).unwrap();
        let w = W.expansion(o).unwrap();
        let z = Z.expansion(o).unwrap();
        let one = TSeries::one();
        assert!((w.scale(&q(4)).mul(&(one.clone() - w.clone())) - v.powu(3)).truncate(o).is_zero());
        assert!((z.scale(&q(2)) - w.mul(&(one.clone() + z.mul(&z)))).truncate(o).is_zero());
        let lhs = (one.clone() - w.scale(&q(2))).powu(2);
        assert!((lhs - (one - v.powu(3))).truncate(o).is_zero());
    }

    #[test]
    fn double_kreweras_identities() {
        let o = 16;
        let m = M.expansion(o).unwrap();
        let n = N.expansion(o).unwrap();
        let one = TSeries::one();
        let r = (m.mul(&(one.clone() - n.clone()).powu(2)) - n.clone()).truncate(o);
        assert!(r.is_zero());
        let a1 = A1.expansion(o).unwrap();
        assert_eq!(coeffs_t(&a1, 3), vec![q(4), q(0), q(4)]);
        let r = eval_poly(&eq_a1(o).unwrap(), &a1).truncate(o);
        assert!(r.is_zero());
        let p1 = P1.expansion(o).unwrap();
        let p2 = P2.expansion(o).unwrap();
        // P₂²(1+P₁)² = (1+4M)³(1−P₁)²
        let lhs = p2.mul(&p2).mul(&(one.clone() + p1.clone()).powu(2));
        let rhs = (one.clone() + m.scale(&q(4))).powu(3).mul(&(one.clone() - p1.clone()).powu(2));
        assert!((lhs - rhs).truncate(o).is_zero());
        // P₂ = M A₁/4 + 4(1+M)³/A₁
        let rhs = m.mul(&a1).scale(&qf(1, 4)) + (one.clone() + m.clone()).powu(3).scale(&q(4)).div(&a1).unwrap();
        assert!((p2 - rhs).truncate(o).is_zero());
        // A₁² = 16(1+M)³ P₁ / M
        let lhs = a1.mul(&a1).mul(&m);
        let rhs = (one + m).powu(3).mul(&p1).scale(&q(16));
        assert!((lhs - rhs).truncate(o).is_zero());
    }

    #[test]
    fn not_simple_is_reported() {
        // Y² − t has a double root at 0 over ℚ[[t]].
        let eq = vec![-TSeries::t(), TSeries::zero(), TSeries::one()];
        assert_eq!(newton_series(&eq, &Q::zero(), 5, 1), Err(SolveError::NotSimple));
        assert_eq!(newton_series(&eq, &q(1), 5, 1), Err(SolveError::NotARoot));
    }

    #[test]
    fn kreweras_delta_root_is_v_squared() {
        let k = StepSet::named("kreweras").unwrap();
        let roots = delta_roots(&k, 20).unwrap();
        assert_eq!(roots.len(), 1);
        let v = V.expansion(20).unwrap();
        assert!((roots[0].clone() - v.mul(&v)).truncate(20).is_zero());
    }

    #[test]
    fn reverse_kreweras_delta_roots() {
        let rk = StepSet::named("reverse-kreweras").unwrap();
        let roots = delta_roots(&rk, 7).unwrap();
        assert_eq!(roots.len(), 2);
        for r in &roots {
            assert_eq!(r.ram(), 2);
            let sign = if r.coeff_s(5).coeff(0, 0).is_positive() { 1 } else { -1 };
            let want: BTreeMap<i64, BiLaurent> = [(2, 1), (5, 2 * sign), (8, 6), (11, 21 * sign)]
                .iter()
                .map(|&(e, c)| (e, BiLaurent::int(c)))
                .collect();
            let got: BTreeMap<i64, BiLaurent> = r.coeffs().range(..13).map(|(k, v)| (*k, v.clone())).collect();
            assert_eq!(got, want);
        }
        // Both are roots of 4Y² − V(V³+4)Y + V².
        let v = V.expansion(7).unwrap();
        for r in &roots {
            let e = r.mul(r).scale(&q(4)) - v.mul(&(v.powu(3) + TSeries::int(4))).mul(r) + v.mul(&v);
            assert!(e.truncate(7).is_zero());
        }
    }

    #[test]
    fn other_delta_roots() {
        let da = StepSet::named("m6").unwrap();
        let r = delta_roots(&da, 10).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].val(), 2);
        let simple = StepSet::named("simple").unwrap();
        let r = delta_roots(&simple, 10).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].coeff(0, 0, 2).unwrap(), q(4));
        let diag = StepSet::named("diagonal").unwrap();
        assert_eq!(delta_roots(&diag, 10).unwrap().len(), 2);
    }

    #[test]
    fn kernel_roots_back_substitute() {
        for name in ["reverse-kreweras", "kreweras", "double-kreweras", "m6", "simple"] {
            let m = StepSet::named(name).unwrap();
            let x = kernel_root(&m, 10).unwrap();
            let vm = hv_splits(&m.companion_poly()).1[0].clone();
            assert_eq!(x.coeff_t(1).unwrap(), vm, "{name}");
            let k = m.companion_kernel().mul_bl(&BiLaurent::x());
            let r = k.subs(crate::algebra::Var::X, &x).unwrap();
            assert!(r.truncate(10).is_zero(), "{name}");
        }
        assert_eq!(kernel_root(&StepSet::named("scarecrow").unwrap(), 5), Err(SolveError::KernelShape));
    }

    #[test]
    fn json_equation() {
        let j: EquationJson = serde_json::from_str(
            r#"{"terms":[{"k":0,"t":1,"c":"2"},{"k":1,"t":0,"c":"-1"},{"k":3,"t":1,"c":"1"}]}"#,
        )
        .unwrap();
        let s = j.solve(8).unwrap();
        assert!((s - V.expansion(8).unwrap()).is_zero());
    }
}
