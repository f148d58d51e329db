//! Exact walk counting by dynamic programming, assembly of generating
//! series and extraction of the diagonal split `C = x̄U(x̄,xy) + D(xy) + ȳU(ȳ,xy)`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{q, qf, BiLaurent, TSeries, Var, Q};
use crate::models::StepSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Region {
    Quadrant,
    ThreeQuadrant,
    FullPlane,
}

impl Region {
    pub fn parse(s: &str) -> Option<Region> {
        match s {
            "quadrant" => Some(Region::Quadrant),
            "three-quadrant" => Some(Region::ThreeQuadrant),
            "full-plane" => Some(Region::FullPlane),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Region::Quadrant => "quadrant",
            Region::ThreeQuadrant => "three-quadrant",
            Region::FullPlane => "full-plane",
        }
    }

    pub fn contains(&self, i: i32, j: i32) -> bool {
        match self {
            Region::Quadrant => i >= 0 && j >= 0,
            Region::ThreeQuadrant => i >= 0 || j >= 0,
            Region::FullPlane => true,
        }
    }

    /// A step is legal if both ends lie in the region and, in the three-quadrant
    /// cone, it does not jump across the corner between `(0,−1)` and `(−1,0)`.
    pub fn allows(&self, from: (i32, i32), to: (i32, i32)) -> bool {
        if !self.contains(from.0, from.1) || !self.contains(to.0, to.1) {
            return false;
        }
        !(*self == Region::ThreeQuadrant
            && ((from == (0, -1) && to == (-1, 0)) || (from == (-1, 0) && to == (0, -1))))
    }
}

/// Weighted starting points.
pub type Starts = Vec<((i32, i32), Q)>;

pub fn origin() -> Starts {
    vec![((0, 0), Q::one())]
}

/// Common denominator and integer numerators of the start weights.
fn scaled_starts(starts: &Starts) -> (BigInt, Vec<((i32, i32), BigInt)>) {
    let mut den = BigInt::one();
    for (_, w) in starts {
        den = den.lcm(w.denom());
    }
    let v = starts.iter().map(|(p, w)| (*p, (w * Q::from_integer(den.clone())).to_integer())).collect();
    (den, v)
}

/// Dense square layer `[-r, r]²`.
struct Layer {
    r: i32,
    cells: Vec<BigInt>,
}

impl Layer {
    fn new(r: i32) -> Self {
        let w = (2 * r + 1) as usize;
        Self { r, cells: vec![BigInt::zero(); w * w] }
    }

    fn idx(&self, i: i32, j: i32) -> Option<usize> {
        if i.abs() > self.r || j.abs() > self.r {
            return None;
        }
        let w = 2 * self.r + 1;
        Some(((j + self.r) * w + (i + self.r)) as usize)
    }

    fn get(&self, i: i32, j: i32) -> Option<&BigInt> {
        self.idx(i, j).map(|k| &self.cells[k])
    }

    fn nonzero(&self) -> impl Iterator<Item = ((i32, i32), &BigInt)> {
        let w = 2 * self.r + 1;
        self.cells.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(k, c)| {
            let k = k as i32;
            ((k % w - self.r, k / w - self.r), c)
        })
    }
}

fn first_layer(starts: &[((i32, i32), BigInt)], region: Region) -> Layer {
    let r0 = starts.iter().map(|((i, j), _)| i.abs().max(j.abs())).max().unwrap_or(0);
    let mut l = Layer::new(r0);
    for ((i, j), w) in starts {
        if region.contains(*i, *j) {
            let k = l.idx(*i, *j).unwrap();
            l.cells[k] += w;
        }
    }
    l
}

fn step_layer(prev: &Layer, steps: &[(i32, i32)], region: Region) -> Layer {
    let r = prev.r + 1;
    let w = (2 * r + 1) as usize;
    let mut next = Layer::new(r);
    next.cells.par_chunks_mut(w).enumerate().for_each(|(row, chunk)| {
        let j = row as i32 - r;
        for (col, cell) in chunk.iter_mut().enumerate() {
            let i = col as i32 - r;
            if !region.contains(i, j) {
                continue;
            }
            let mut acc = BigInt::zero();
            for &(dx, dy) in steps {
                let from = (i - dx, j - dy);
                if let Some(c) = prev.get(from.0, from.1) {
                    if !c.is_zero() && region.allows(from, (i, j)) {
                        acc += c;
                    }
                }
            }
            *cell = acc;
        }
    });
    next
}

/// Exact counts `c_{i,j}(n)` for `n ≤ nmax`.
#[derive(Clone, Debug)]
pub struct CountTable {
    pub model: StepSet,
    pub region: Region,
    pub starts: Starts,
    pub nmax: usize,
    scale: BigInt,
    layers: Vec<BTreeMap<(i32, i32), BigInt>>,
}

pub fn count_walks(model: &StepSet, region: Region, starts: &Starts, nmax: usize) -> CountTable {
    let (scale, ints) = scaled_starts(starts);
    let steps: Vec<(i32, i32)> = model.steps().collect();
    let mut layer = first_layer(&ints, region);
    let mut layers = Vec::with_capacity(nmax + 1);
    for n in 0..=nmax {
        if n > 0 {
            layer = step_layer(&layer, &steps, region);
        }
        layers.push(layer.nonzero().map(|(p, c)| (p, c.clone())).collect());
    }
    CountTable { model: model.clone(), region, starts: starts.clone(), nmax, scale, layers }
}

impl CountTable {
    pub fn count(&self, n: usize, i: i32, j: i32) -> Q {
        match self.layers.get(n).and_then(|l| l.get(&(i, j))) {
            Some(c) => Q::new(c.clone(), self.scale.clone()),
            None => Q::zero(),
        }
    }

    /// Entries of length `n`, in deterministic order.
    pub fn layer(&self, n: usize) -> impl Iterator<Item = ((i32, i32), Q)> + '_ {
        self.layers[n].iter().map(|(p, c)| (*p, Q::new(c.clone(), self.scale.clone())))
    }

    pub fn total(&self, n: usize) -> Q {
        let s: BigInt = self.layers[n].values().sum();
        Q::new(s, self.scale.clone())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,i,j,count\n");
        for n in 0..=self.nmax {
            for ((i, j), c) in self.layer(n) {
                writeln!(out, "{n},{i},{j},{}", fmt_count(&c)).unwrap();
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut rows = Vec::new();
        for n in 0..=self.nmax {
            for ((i, j), c) in self.layer(n) {
                rows.push(serde_json::json!({"n": n, "i": i, "j": j, "count": fmt_count(&c)}));
            }
        }
        serde_json::json!({
            "model": self.model.label(),
            "region": self.region.name(),
            "nmax": self.nmax,
            "counts": rows,
        })
    }
}

/// Integers print plainly, weighted counts as `p/q`.
pub fn fmt_count(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Counts at selected endpoints plus totals, without storing every layer.
#[derive(Clone, Debug)]
pub struct Tracked {
    pub targets: Vec<(i32, i32)>,
    /// `values[k][n]` is the count at `targets[k]` after `n` steps (scaled by `scale`).
    pub values: Vec<Vec<BigInt>>,
    pub totals: Vec<BigInt>,
    pub scale: BigInt,
}

pub fn count_tracked(
    model: &StepSet,
    region: Region,
    starts: &Starts,
    nmax: usize,
    targets: &[(i32, i32)],
) -> Tracked {
    let (scale, ints) = scaled_starts(starts);
    let steps: Vec<(i32, i32)> = model.steps().collect();
    let mut layer = first_layer(&ints, region);
    let mut values = vec![Vec::with_capacity(nmax + 1); targets.len()];
    let mut totals = Vec::with_capacity(nmax + 1);
    for n in 0..=nmax {
        if n > 0 {
            layer = step_layer(&layer, &steps, region);
        }
        for (k, (i, j)) in targets.iter().enumerate() {
            values[k].push(layer.get(*i, *j).cloned().unwrap_or_default());
        }
        totals.push(layer.cells.par_iter().sum());
    }
    Tracked { targets: targets.to_vec(), values, totals, scale }
}

/// `Σ_n t^n Σ c_{i,j}(n) x^i y^j`, known to order `nmax + 1`.
pub fn assemble_series(table: &CountTable) -> TSeries {
    let coeffs = (0..=table.nmax)
        .map(|n| BiLaurent::from_terms(table.layer(n).map(|((i, j), c)| (i, j, c))))
        .collect();
    TSeries::from_t_coeffs(coeffs, Some(table.nmax as i64 + 1))
}

/// Three-quadrant generating function from the origin.
pub fn series_c(model: &StepSet, nmax: usize) -> TSeries {
    assemble_series(&count_walks(model, Region::ThreeQuadrant, &origin(), nmax))
}

/// Quadrant generating function from the origin.
pub fn series_q(model: &StepSet, nmax: usize) -> TSeries {
    assemble_series(&count_walks(model, Region::Quadrant, &origin(), nmax))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EnumerateError {
    #[error("split failed at t^{n}, x^{i} y^{j}")]
    SplitFailed { n: i64, i: i32, j: i32 },
    #[error("unknown selector `{name}`; valid: {}", BOUNDARY_SELECTORS.join(", "), name = .0)]
    UnknownSelector(String),
    #[error("{0}")]
    Algebra(#[from] crate::algebra::AlgebraError),
}

/// Pieces of `C` above, on and below the diagonal.
#[derive(Clone, Debug)]
pub struct Split {
    pub u: TSeries,
    pub d: TSeries,
    /// Present for models that are not symmetric in `x` and `y`.
    pub l: Option<TSeries>,
}

/// Split a three-quadrant series. Symmetric models give `(U, D)`; the diagonal
/// model uses `x̄²U(x̄², xy)`; asymmetric models also give `L` with
/// `C = x̄U(x̄,xy) + D(xy) + ȳL(ȳ,xy)`.
pub fn split_ud(c: &TSeries, model: &StepSet) -> Result<Split, EnumerateError> {
    let diag = model.is_diagonal();
    let sym = model.is_symmetric();
    let order = c.order();
    let mut u = BTreeMap::new();
    let mut d = BTreeMap::new();
    let mut l = BTreeMap::new();
    for (n, p) in c.coeffs() {
        let mut pu = BiLaurent::zero();
        let mut pd = BiLaurent::zero();
        let mut pl = BiLaurent::zero();
        for (i, j, v) in p.terms() {
            if i == j {
                pd.add_term(0, j, v.clone());
            } else if j > i {
                if diag {
                    if (j - i) % 2 != 0 {
                        return Err(EnumerateError::SplitFailed { n: *n, i, j });
                    }
                    pu.add_term((j - i - 2) / 2, j, v.clone());
                } else {
                    pu.add_term(j - i - 1, j, v.clone());
                }
            } else if !sym {
                pl.add_term(i - j - 1, i, v.clone());
            }
        }
        u.insert(*n, pu);
        d.insert(*n, pd);
        l.insert(*n, pl);
    }
    let us = TSeries::from_parts(1, order, u, Default::default());
    let ds = TSeries::from_parts(1, order, d, Default::default());
    let ls = (!sym).then(|| TSeries::from_parts(1, order, l, Default::default()));
    let split = Split { u: us, d: ds, l: ls };
    let back = recompose(&split, model)?;
    let res = back.sub(c);
    if let Some((k, i, j)) = res.first_nonzero() {
        return Err(EnumerateError::SplitFailed { n: k, i, j });
    }
    Ok(split)
}

/// Rebuild `C` from its split.
pub fn recompose(s: &Split, model: &StepSet) -> Result<TSeries, EnumerateError> {
    let upper = if model.is_diagonal() {
        s.u.map_exponents(|a, b| (b - 2 * a - 2, b))?
    } else {
        s.u.map_exponents(|a, b| (b - a - 1, b))?
    };
    let diag = s.d.map_exponents(|_, b| (b, b))?;
    let lower = match &s.l {
        Some(l) => l.map_exponents(|a, b| (b, b - a - 1))?,
        None => upper.map_exponents(|i, j| (j, i))?,
    };
    Ok(upper + diag + lower)
}

/// `C₋(x) = Σ_{i>0} c_{−i,0} x^i`.
pub fn c_minus(c: &TSeries) -> TSeries {
    c.map_coeffs(|p| p.filter(|i, j| j == 0 && i < 0).map_exponents(|i, _| (-i, 0))).expect("no denominator")
}

/// Substitute `0` for a variable, i.e. keep exponent-0 terms.
pub fn at_zero(s: &TSeries, var: Var) -> TSeries {
    s.map_coeffs(|p| match var {
        Var::X => p.filter(|i, _| i == 0),
        Var::Y => p.filter(|_, j| j == 0),
    })
    .expect("no denominator")
}

/// Coefficient of `x^i y^j` as a series in `t`.
pub fn coeff_series(s: &TSeries, i: i32, j: i32) -> TSeries {
    s.map_coeffs(|p| BiLaurent::constant(p.coeff(i, j))).expect("no denominator")
}

/// `F(1, 1)`.
pub fn at_one_one(s: &TSeries) -> Result<TSeries, EnumerateError> {
    Ok(s.eval_var(Var::X, &q(1))?.eval_var(Var::Y, &q(1))?)
}

/// Named boundary extractions, as accepted by the command line.
pub fn boundary_series(s: &TSeries, which: &str) -> Result<TSeries, EnumerateError> {
    Ok(match which {
        "C-(x)" | "Cminus" => c_minus(s),
        "U(x,0)" | "Q(x,0)" => at_zero(s, Var::Y),
        "U(0,y)" | "Q(0,y)" => at_zero(s, Var::X),
        "D0" | "U00" | "Q00" => coeff_series(s, 0, 0),
        "Q01" => coeff_series(s, 0, 1),
        "C(1,1)" => at_one_one(s)?,
        "x=1" => s.eval_var(Var::X, &q(1))?,
        "y=1" => s.eval_var(Var::Y, &q(1))?,
        other => return Err(EnumerateError::UnknownSelector(other.into())),
    })
}

pub const BOUNDARY_SELECTORS: [&str; 12] =
    ["C-(x)", "U(x,0)", "U(0,y)", "D0", "U00", "Q(x,0)", "Q(0,y)", "Q00", "Q01", "C(1,1)", "x=1", "y=1"];

/// Weighted starts of the series `A`: `2/3` at the origin, `1/3` at `(−2,0)` and `(0,−2)`.
pub fn a_starts() -> Starts {
    vec![((0, 0), qf(2, 3)), ((-2, 0), qf(1, 3)), ((0, -2), qf(1, 3))]
}

/// `A(x,y)` from weighted starts in the three-quadrant cone.
pub fn series_a(model: &StepSet, nmax: usize) -> TSeries {
    assemble_series(&count_walks(model, Region::ThreeQuadrant, &a_starts(), nmax))
}

/// `A = C − (Q − x̄²Q(x̄,y) − ȳ²Q(x,ȳ))/3` from the defining combination.
pub fn series_a_combination(model: &StepSet, nmax: usize) -> TSeries {
    let c = series_c(model, nmax);
    let qs = series_q(model, nmax);
    let qx = qs.map_exponents(|i, j| (-i - 2, j)).unwrap();
    let qy = qs.map_exponents(|i, j| (i, -j - 2)).unwrap();
    c - (qs - qx - qy).scale(&qf(1, 3))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(model: &StepSet, region: Region, n: usize, end: (i32, i32)) -> u64 {
        let steps: Vec<(i32, i32)> = model.steps().collect();
        let mut count = 0;
        let total = steps.len().pow(n as u32);
        for mut code in 0..total {
            let mut p = (0, 0);
            let mut ok = true;
            for _ in 0..n {
                let s = steps[code % steps.len()];
                code /= steps.len();
                let np = (p.0 + s.0, p.1 + s.1);
                if !region.allows(p, np) {
                    ok = false;
                    break;
                }
                p = np;
            }
            if ok && p == end {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn small_counts_match_brute_force() {
        let k = StepSet::named("kreweras").unwrap();
        let t = count_walks(&k, Region::ThreeQuadrant, &origin(), 3);
        assert_eq!(t.count(3, 0, 0), q(4));
        let tq = count_walks(&k, Region::Quadrant, &origin(), 3);
        assert_eq!(tq.count(3, 0, 0), q(2));
        let s = StepSet::named("simple").unwrap();
        assert_eq!(count_walks(&s, Region::ThreeQuadrant, &origin(), 1).total(1), q(4));
        for name in ["kreweras", "double-kreweras", "m7", "scarecrow", "diagonal"] {
            let m = StepSet::named(name).unwrap();
            for region in [Region::Quadrant, Region::ThreeQuadrant] {
                let t = count_walks(&m, region, &origin(), 5);
                for (i, j) in [(0, 0), (-1, 0), (1, 1), (0, 2), (-2, 1)] {
                    assert_eq!(t.count(5, i, j), q(brute(&m, region, 5, (i, j)) as i64), "{name} {region:?} {i},{j}");
                }
            }
        }
    }

    #[test]
    fn series_examples() {
        let rk = StepSet::named("reverse-kreweras").unwrap();
        let q_ = series_q(&rk, 3);
        assert_eq!(q_.coeff_t(1).unwrap(), &BiLaurent::x() + &BiLaurent::y());
        assert_eq!(q_.coeff_t(0).unwrap(), BiLaurent::one());
        let k = StepSet::named("kreweras").unwrap();
        let c = series_c(&k, 3);
        assert_eq!(c.coeff(-1, 0, 1).unwrap(), q(1));
        assert_eq!(c_minus(&c).coeff(1, 0, 1).unwrap(), q(1));
        assert_eq!(at_one_one(&c).unwrap().coeff(0, 0, 1).unwrap(), q(3));
        let kq = series_q(&k, 4);
        let _ = kq;
        let qk = series_q(&rk.companion().unwrap(), 4);
        assert_eq!(coeff_series(&qk, 0, 0).coeff(0, 0, 3).unwrap(), q(2));
    }

    #[test]
    fn split_round_trip() {
        for name in crate::models::NINE {
            let m = StepSet::named(name).unwrap();
            let c = series_c(&m, 8);
            let s = split_ud(&c, &m).unwrap();
            assert_eq!(recompose(&s, &m).unwrap(), c);
            assert_eq!(coeff_series(&s.d, 0, 0), coeff_series(&c, 0, 0));
            if !m.is_diagonal() {
                // U(x,0) = x̄C₋(x)
                let lhs = at_zero(&s.u, Var::Y);
                let rhs = c_minus(&c).mul_bl(&BiLaurent::xy(-1, 0));
                assert_eq!(lhs, rhs, "{name}");
            }
        }
        let g = StepSet::named("gessel-asymmetric").unwrap();
        let c = series_c(&g, 8);
        let s = split_ud(&c, &g).unwrap();
        assert!(s.l.is_some());
    }

    #[test]
    fn diagonal_parity_and_a_routes() {
        let d = StepSet::named("diagonal").unwrap();
        let c = series_c(&d, 8);
        for p in c.coeffs().values() {
            assert!(p.terms().all(|(i, j, _)| (i + j) % 2 == 0));
        }
        for name in ["simple", "diagonal"] {
            let m = StepSet::named(name).unwrap();
            let a = series_a(&m, 12);
            let b = series_a_combination(&m, 12);
            assert_eq!(a, b, "{name}");
        }
        let a = series_a(&StepSet::named("simple").unwrap(), 2);
        let want = BiLaurent::from_terms([(0, 0, qf(2, 3)), (-2, 0, qf(1, 3)), (0, -2, qf(1, 3))]);
        assert_eq!(a.coeff_t(0).unwrap(), want);
    }
}
