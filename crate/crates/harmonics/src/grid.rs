//! Reconstruction of `H_{i,j}` on a box from its boundary values.
//!
//! `H` is harmonic in the backward sense, `|𝒮|·H(p) = Σ_{s∈𝒮} H(p − s)`, vanishes
//! off the cone and is symmetric in the diagonal. Row `j` of the upper half
//! `{i ≤ j}` is solved from the harmonic relation at the points of row `j − 1`,
//! right to left; `H_{j,j}` comes from `ℋ_d` and row 0 from `ℋ₋`.

use std::collections::BTreeMap;

use astro_float::BigFloat;
use conewalk::models::StepSet;
use serde::Serialize;

use crate::boundary::{harmonic_boundary, Boundary};
use crate::real::{bits, int, to_digits, to_f64, RM};
use crate::HarmonicError;

/// Extra working digits spent on the recursion.
const WORK_DIGITS: u32 = 30;

#[derive(Clone, Debug)]
pub struct HarmonicGrid {
    pub model: StepSet,
    pub imax: i32,
    pub digits: u32,
    /// `H_{i,j}` on `{|i|,|j| ≤ imax} ∩ 𝒞`.
    pub values: BTreeMap<(i32, i32), BigFloat>,
    /// Exponential growth `|𝒮|`.
    pub mu: f64,
    /// `c_{i,j}(n) ∼ −H_{i,j}/Γ(−α)·μⁿ n^{−1−α}`.
    pub alpha: f64,
    /// Largest `| |𝒮|H(p) − Σ H(p−s) |` over the box.
    pub residual: f64,
}

fn in_cone(i: i32, j: i32) -> bool {
    i >= 0 || j >= 0
}

/// Exponent of the harmonic function: `3/4` in the Kreweras family, `2/3` for
/// the simple and diagonal models.
pub fn cone_exponent(model: &str) -> f64 {
    match model {
        "simple" | "diagonal" => 2.0 / 3.0,
        _ => 0.75,
    }
}

struct Half {
    map: BTreeMap<(i32, i32), BigFloat>,
    zero: BigFloat,
}

impl Half {
    /// `H_{a,b}` through symmetry; `None` if not yet known.
    fn get(&self, a: i32, b: i32) -> Option<&BigFloat> {
        let (a, b) = if a > b { (b, a) } else { (a, b) };
        if b < 0 {
            return Some(&self.zero);
        }
        self.map.get(&(a, b))
    }
}

pub fn harmonic_grid(name: &str, imax: i32, digits: u32) -> Result<HarmonicGrid, HarmonicError> {
    let model = StepSet::named(name).map_err(|_| HarmonicError::UnknownModel(name.into(), String::new()))?;
    let wd = digits + WORK_DIGITS;
    let p = bits(wd);
    let width = 3 * imax + 4;
    let b = harmonic_boundary(name, width as usize + 1, wd)?;
    let steps: Vec<(i32, i32)> = model.steps().collect();
    let parity = steps.iter().all(|(a, b)| (a + b) % 2 == 0);
    let mu = int(steps.len() as i64, p);
    let zero = BigFloat::from_word(0, p);
    let mut h = Half { map: BTreeMap::new(), zero: zero.clone() };
    fill_row_zero(&mut h, &b, width);
    for j in 1..=imax {
        h.map.insert((j, j), b.diag.c[j as usize].clone());
        if parity {
            for i in (-width..j).filter(|i| (i + j) % 2 != 0) {
                h.map.insert((i, j), zero.clone());
            }
        }
        for k in (-width..j).rev() {
            if !solve_at(&mut h, &steps, &mu, (k, j - 1), p)? {
                break;
            }
        }
    }
    let mut values = BTreeMap::new();
    for j in -imax..=imax {
        for i in -imax..=imax {
            if in_cone(i, j) {
                let v = h.get(i, j).ok_or(HarmonicError::GridIncomplete { i, j })?;
                values.insert((i, j), v.clone());
            }
        }
    }
    let residual = max_residual(&h, &steps, &mu, imax, p);
    let tol = 10f64.powi(-(digits as i32) / 2);
    if !(residual < tol) {
        return Err(HarmonicError::GridInconsistent { residual, tol });
    }
    let round = |x: &BigFloat| {
        let mut y = x.clone();
        let _ = y.set_precision(bits(digits), RM);
        y
    };
    let values = values.iter().map(|(k, v)| (*k, round(v))).collect();
    Ok(HarmonicGrid { model, imax, digits, values, mu: steps.len() as f64, alpha: cone_exponent(name), residual })
}

fn fill_row_zero(h: &mut Half, b: &Boundary, width: i32) {
    h.map.insert((0, 0), b.diag.c[0].clone());
    for i in 1..=width {
        if let Some(v) = b.h_minus(i as usize) {
            h.map.insert((-i, 0), v);
        }
    }
}

/// Harmonic relation at `q` solved for its single unknown in row `q.1 + 1`.
/// Returns `false` once the relation needs values outside the computed range.
fn solve_at(h: &mut Half, steps: &[(i32, i32)], mu: &BigFloat, q: (i32, i32), p: usize) -> Result<bool, HarmonicError> {
    let j = q.1 + 1;
    let Some(hq) = h.get(q.0, q.1) else { return Ok(false) };
    let mut rest = mu.mul(hq, p, RM);
    let mut unknown: BTreeMap<i32, i64> = BTreeMap::new();
    for &(dx, dy) in steps {
        let (a, b) = (q.0 - dx, q.1 - dy);
        let (a, b) = if a > b { (b, a) } else { (a, b) };
        match h.get(a, b) {
            Some(v) => rest = rest.sub(v, p, RM),
            None if b == j => *unknown.entry(a).or_default() += 1,
            None => return Ok(false),
        }
    }
    match unknown.len() {
        0 => Ok(true),
        1 => {
            let (a, c) = unknown.into_iter().next().unwrap();
            h.map.insert((a, j), rest.div(&int(c, p), p, RM));
            Ok(true)
        }
        _ => Err(HarmonicError::Underdetermined { i: q.0, j: q.1 }),
    }
}

fn max_residual(h: &Half, steps: &[(i32, i32)], mu: &BigFloat, imax: i32, p: usize) -> f64 {
    let mut worst = 0f64;
    for j in -imax..=imax {
        for i in -imax..=imax {
            if !in_cone(i, j) {
                continue;
            }
            let Some(v) = h.get(i, j) else { continue };
            let mut r = mu.mul(v, p, RM);
            let mut complete = true;
            for &(dx, dy) in steps {
                match h.get(i - dx, j - dy) {
                    Some(w) => r = r.sub(w, p, RM),
                    None => complete = false,
                }
            }
            if complete {
                worst = worst.max(to_f64(&r.abs()));
            }
        }
    }
    worst
}

#[derive(Serialize)]
struct GridJson<'a> {
    model: String,
    region: &'a str,
    precision: u32,
    imax: i32,
    mu: f64,
    alpha: f64,
    residual: f64,
    values: Vec<CellJson>,
}

#[derive(Serialize)]
struct CellJson {
    i: i32,
    j: i32,
    h: String,
}

impl HarmonicGrid {
    /// `H_{i,j}`, zero off the cone; `None` outside the box.
    pub fn value(&self, i: i32, j: i32) -> Option<BigFloat> {
        if !in_cone(i, j) {
            return Some(BigFloat::from_word(0, bits(self.digits)));
        }
        self.values.get(&(i, j)).cloned()
    }

    pub fn value_f64(&self, i: i32, j: i32) -> Option<f64> {
        self.value(i, j).map(|v| to_f64(&v))
    }

    /// Every value in the cone is nonnegative, and positive where reachable.
    pub fn is_positive(&self) -> bool {
        let parity = self.model.steps().all(|(a, b)| (a + b) % 2 == 0);
        self.values.iter().all(|((i, j), v)| {
            if parity && (i + j) % 2 != 0 {
                v.is_zero()
            } else {
                v.is_positive()
            }
        })
    }

    pub fn is_symmetric(&self) -> bool {
        self.values.iter().all(|((i, j), v)| self.values.get(&(*j, *i)).map(|w| w == v).unwrap_or(false))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let g = GridJson {
            model: self.model.label(),
            region: "three-quadrant",
            precision: self.digits,
            imax: self.imax,
            mu: self.mu,
            alpha: self.alpha,
            residual: self.residual,
            values: self
                .values
                .iter()
                .map(|((i, j), v)| CellJson { i: *i, j: *j, h: to_digits(v, self.digits as usize) })
                .collect(),
        };
        serde_json::to_value(g).expect("grid serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kreweras_grid() {
        let g = harmonic_grid("kreweras", 8, 40).unwrap();
        assert!(g.residual < 1e-20);
        assert!(g.is_positive() && g.is_symmetric());
        assert!((g.value_f64(-1, 0).unwrap() - 9.0).abs() < 1e-12);
        assert!((g.value_f64(0, 0).unwrap() - 27.0 * 3f64.sqrt() / 4.0).abs() < 1e-12);
        assert_eq!(g.value_f64(-1, -1), Some(0.0));
        // 3H_{0,0} = H_{−1,−1} + H_{1,0} + H_{0,1}
        let lhs = 3.0 * g.value_f64(0, 0).unwrap();
        let rhs = 2.0 * g.value_f64(0, 1).unwrap();
        assert!((lhs - rhs).abs() < 1e-10);
    }

    #[test]
    fn diagonal_grid_vanishes_on_odd_points() {
        let g = harmonic_grid("diagonal", 6, 35).unwrap();
        assert!(g.is_positive());
        assert_eq!(g.value_f64(-1, 0), Some(0.0));
        assert_eq!(g.value_f64(2, -3), Some(0.0));
        assert!(g.value_f64(-2, 0).unwrap() > 0.0);
    }
}
