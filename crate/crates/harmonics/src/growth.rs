//! Constants of `c(n) ∼ K μⁿ n^{−e}` from exact counts, and the numeric
//! predictions for the model `{↓, ↗, ←, ↑, →}`.

use astro_float::BigFloat;
use conewalk::enumerate::{count_tracked, origin, Region};
use conewalk::models::StepSet;
use num_bigint::BigInt;
use serde::Serialize;

use crate::boundary::{harmonic_boundary, quadrant_boundary};
use crate::grid::{cone_exponent, harmonic_grid};
use crate::real::{bits, frac, gamma, int, pi, poly_root, powf, sqrt, to_f64, RM};
use crate::series::PSeries;
use crate::HarmonicError;

/// Fewest steps accepted by [`estimate_growth`].
pub const MIN_N: usize = 90;

/// Shape of the expected asymptotics: `c(n) μ^{−n} n^{e} → K` along
/// `n ≡ residue (mod period)`, with a first correction in `n^{−β}`.
#[derive(Clone, Debug, Serialize)]
pub struct GrowthModel {
    pub mu: f64,
    pub exponent: f64,
    pub period: usize,
    pub residue: usize,
    pub beta: f64,
}

/// `ln x` for a positive big integer.
fn ln_big(x: &BigInt) -> f64 {
    let b = x.bits();
    if b <= 1000 {
        let s = if b > 60 { b - 60 } else { 0 };
        let top: BigInt = x >> s;
        return top.to_string().parse::<f64>().unwrap().ln() + s as f64 * std::f64::consts::LN_2;
    }
    let s = b - 60;
    ln_big(&(x >> s)) + s as f64 * std::f64::consts::LN_2
}

/// Least-squares fit of `a + b n^{−β}` to `c(n) μ^{−n} n^{e}` over the top third
/// of the admissible `n`; returns `a`.
pub fn estimate_growth(counts: &[BigInt], m: &GrowthModel) -> Result<f64, HarmonicError> {
    let nmax = counts.len().saturating_sub(1);
    if nmax < MIN_N {
        return Err(HarmonicError::TooFewPoints { have: nmax, need: MIN_N });
    }
    let pts: Vec<(f64, f64)> = (2 * nmax / 3..=nmax)
        .filter(|n| *n > 0 && n % m.period == m.residue % m.period)
        .filter(|n| counts[*n] > BigInt::from(0))
        .map(|n| {
            let nf = n as f64;
            let v = (ln_big(&counts[n]) - nf * m.mu.ln() + m.exponent * nf.ln()).exp();
            (nf.powf(-m.beta), v)
        })
        .collect();
    if pts.len() < 3 {
        return Err(HarmonicError::TooFewPoints { have: pts.len(), need: 3 });
    }
    let k = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / k, sy / k);
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Ok(my - slope * mx)
}

/// Residue class of the lengths of walks from the origin to `(i, j)`.
pub fn periodicity(model: &StepSet, target: (i32, i32)) -> (usize, usize) {
    let forms: [fn(i32, i32) -> i32; 3] = [|a, b| a + b, |a, _| a, |_, b| b];
    for m in [3i32, 2] {
        for f in forms {
            let d: Vec<i32> = model.steps().map(|(a, b)| f(a, b).rem_euclid(m)).collect();
            if d[0] != 0 && d.iter().all(|x| *x == d[0]) {
                let r = f(target.0, target.1).rem_euclid(m);
                let n = (0..m).find(|n| (n * d[0]) % m == r).unwrap();
                return (m as usize, n as usize);
            }
        }
    }
    (1, 0)
}

/// Closed-form constant, with its exponent.
#[derive(Clone, Debug, Serialize)]
pub struct ClosedForm {
    pub value: f64,
    pub exponent: f64,
    pub formula: String,
}

/// Constant for walks ending at `target` (from the harmonic function) or for
/// all walks (`None`; Kreweras family only).
pub fn closed_form(name: &str, target: Option<(i32, i32)>, digits: u32) -> Result<ClosedForm, HarmonicError> {
    let p = bits(digits);
    let g58 = || gamma(&frac(5, 8, p), p).unwrap();
    let value = |x: BigFloat| to_f64(&x);
    match target {
        Some((i, j)) => {
            let r = i.abs().max(j.abs()).max(2);
            let grid = harmonic_grid(name, r, digits)?;
            let h = grid.value(i, j).unwrap();
            let alpha = cone_exponent(name);
            let (an, ad) = if alpha == 0.75 { (-3, 4) } else { (-2, 3) };
            let g = gamma(&frac(an, ad, p), p).unwrap();
            Ok(ClosedForm {
                value: -value(h.div(&g, p, RM)),
                exponent: 1.0 + alpha,
                formula: format!("-H[{i},{j}]/Gamma({an}/{ad})"),
            })
        }
        None => {
            let (x, formula) = match name {
                "kreweras" => {
                    let a = powf(&int(3, p), &frac(3, 4, p), p);
                    let b = sqrt(&int(2, p).sub(&sqrt(&int(2, p), p), p, RM), p);
                    (a.mul(&b, p, RM).div(&g58(), p, RM), "3^(3/4)*sqrt(2-sqrt(2))/Gamma(5/8)")
                }
                "reverse-kreweras" => {
                    let inner = frac(9, 2, p).sub(&sqrt(&int(2, p), p).mul(&int(3, p), p, RM), p, RM);
                    let q = powf(&inner, &frac(1, 4, p), p);
                    (frac(9, 4, p).mul(&q, p, RM).div(&g58(), p, RM), "9/(4*Gamma(5/8))*(9/2-3*sqrt(2))^(1/4)")
                }
                "double-kreweras" => {
                    let k = powf(&int(2, p), &frac(1, 4, p), p)
                        .mul(&powf(&int(3, p), &frac(9, 8, p), p), p, RM)
                        .mul(&sqrt(&int(2, p), p).sub(&int(1, p), p, RM), p, RM);
                    (k.div(&g58(), p, RM), "2^(1/4)*3^(9/8)*(sqrt(2)-1)/Gamma(5/8)")
                }
                _ => return Err(HarmonicError::UnknownModel(name.into(), "kreweras, reverse-kreweras, double-kreweras".into())),
            };
            Ok(ClosedForm { value: value(x), exponent: 3.0 / 8.0, formula: formula.into() })
        }
    }
}

/// An extrapolated constant against its closed form.
#[derive(Clone, Debug, Serialize)]
pub struct Asymptotic {
    pub model: String,
    pub target: Option<(i32, i32)>,
    pub n: usize,
    pub growth: GrowthModel,
    pub estimate: f64,
    pub paper_constant: f64,
    pub formula: String,
    pub rel_err: f64,
}

/// Correction exponent used by default.
pub const BETA: f64 = 0.25;

pub fn asymptotics(name: &str, target: Option<(i32, i32)>, n: usize, digits: u32) -> Result<Asymptotic, HarmonicError> {
    let model = StepSet::named(name).map_err(|_| HarmonicError::UnknownModel(name.into(), String::new()))?;
    let pc = closed_form(name, target, digits)?;
    let t = target.unwrap_or((0, 0));
    let tr = count_tracked(&model, Region::ThreeQuadrant, &origin(), n, &[t]);
    let (counts, (period, residue)) = match target {
        Some(_) => (&tr.values[0], periodicity(&model, t)),
        None => (&tr.totals, (1, 0)),
    };
    let growth = GrowthModel { mu: model.len() as f64, exponent: pc.exponent, period, residue, beta: BETA };
    let estimate = estimate_growth(counts, &growth)?;
    Ok(Asymptotic {
        model: name.into(),
        target,
        n,
        growth,
        estimate,
        paper_constant: pc.value,
        formula: pc.formula,
        rel_err: (estimate - pc.value).abs() / pc.value.abs(),
    })
}

/// `ℋ₋(x) = 3x√𝓗(x,0)` and `ℋ_d(y) = 6√(−(𝓗(0,y) − 𝓗(0,0))/δ(y))` with
/// `δ(y) = y(y−4)(y−1)²`, for Kreweras steps: largest coefficient gaps.
#[derive(Clone, Debug, Serialize)]
pub struct KappaCheck {
    pub kappa: f64,
    pub coefficients: usize,
    pub minus_gap: f64,
    pub diag_gap: f64,
}

pub fn kreweras_kappa(n: usize, digits: u32) -> Result<KappaCheck, HarmonicError> {
    let b = harmonic_boundary("kreweras", n + 1, digits)?;
    let h = quadrant_boundary("kreweras", n + 2, digits)?;
    let p = b.minus.p;
    let kappa = int(3, p);
    let x = PSeries::var(n + 2, p);
    let pred_minus = x.mul(&h.sqrt()).scale(&kappa);
    // −(𝓗(y) − 𝓗(0))/δ(y) = (𝓗(y) − 𝓗(0))/(y(4−y)(1−y)²)
    let num = h.add_const(&h.c[0].neg()).shift_down().ok_or(HarmonicError::Singular("kreweras".into()))?;
    let om = x.neg().add_int(1);
    let den = PSeries::int(4, n + 2, p).sub(&x).mul(&om.mul(&om));
    let pred_diag = num.div(&den).sqrt().scale(&kappa.mul(&int(2, p), p, RM));
    let gap = |a: &PSeries, b: &PSeries| {
        (0..n).map(|k| to_f64(&a.c[k].sub(&b.c[k], p, RM).abs())).fold(0.0, f64::max)
    };
    Ok(KappaCheck { kappa: 3.0, coefficients: n, minus_gap: gap(&b.minus, &pred_minus), diag_gap: gap(&b.diag, &pred_diag) })
}

/// Numeric predictions of the harmonic section for the model `m6`.
#[derive(Clone, Debug, Serialize)]
pub struct DaReport {
    pub nmax: usize,
    /// Positive root of `μ³ + μ² − 18μ − 43`.
    pub mu: String,
    /// `|μ³ + μ² − 18μ − 43|` at the computed root.
    pub mu_residual: f64,
    /// Root near `0.626` of `64c⁶ − 64c⁴ + 28c² − 5`.
    pub c: String,
    /// `π / arccos(−c)`.
    pub alpha: String,
    /// `c₀₀(n)/c₋₁,₀(n)` at `nmax`.
    pub cone_ratio: f64,
    /// `√(1 + q̃₀₁(n)/q̃₀₀(n))` at `nmax`.
    pub quadrant_ratio: f64,
    /// Relative gap between the two.
    pub gap: f64,
    /// `c₋₁,₀/c₋₂,₀` against `2 q̃₀₀/q̃₁₀`.
    pub axis_ratio: (f64, f64),
    /// `c₁₁/c₀₀` against `μ²/8 − 1 + (q̃₀₁ + q̃₀₂)/(2(q̃₀₀ + q̃₀₁))`.
    pub diagonal_ratio: (f64, f64),
    pub kreweras_kappa: KappaCheck,
}

pub fn da_predictions(nmax: usize, digits: u32) -> Result<DaReport, HarmonicError> {
    let p = bits(digits);
    let mu = poly_root(&[-43, -18, 1, 1], 4.729, p);
    let cube = |x: &BigFloat| {
        let x2 = x.mul(x, p, RM);
        x2.mul(x, p, RM).add(&x2, p, RM).sub(&x.mul(&int(18, p), p, RM), p, RM).sub(&int(43, p), p, RM)
    };
    let mu_residual = to_f64(&cube(&mu).abs());
    let c = poly_root(&[-5, 0, 28, 0, -64, 0, 64], 0.626, p);
    let alpha = pi(p).div(&c.neg().acos(p, RM, &mut crate::real::consts()), p, RM);
    let model = StepSet::named("m6").unwrap();
    let comp = model.companion().unwrap();
    let cone = count_tracked(&model, Region::ThreeQuadrant, &origin(), nmax, &[(0, 0), (-1, 0), (-2, 0), (1, 1)]);
    let quad = count_tracked(&comp, Region::Quadrant, &origin(), nmax, &[(0, 0), (0, 1), (1, 0), (0, 2)]);
    let r = |a: &BigInt, b: &BigInt| (ln_big(a) - ln_big(b)).exp();
    let (c00, cm1, cm2, c11) = (&cone.values[0][nmax], &cone.values[1][nmax], &cone.values[2][nmax], &cone.values[3][nmax]);
    let (q00, q01, q10, q02) = (&quad.values[0][nmax], &quad.values[1][nmax], &quad.values[2][nmax], &quad.values[3][nmax]);
    let cone_ratio = r(c00, cm1);
    let quadrant_ratio = (1.0 + r(q01, q00)).sqrt();
    let muf = to_f64(&mu);
    let diag_pred = muf * muf / 8.0 - 1.0 + 0.5 * r(&(q01 + q02), &(q00 + q01));
    Ok(DaReport {
        nmax,
        mu: crate::real::to_digits(&mu, digits as usize),
        mu_residual,
        c: crate::real::to_digits(&c, digits as usize),
        alpha: crate::real::to_digits(&alpha, digits as usize),
        cone_ratio,
        quadrant_ratio,
        gap: (cone_ratio - quadrant_ratio).abs() / quadrant_ratio,
        axis_ratio: (r(cm1, cm2), 2.0 * r(q00, q10)),
        diagonal_ratio: (r(c11, c00), diag_pred),
        kreweras_kappa: kreweras_kappa(15, digits)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn periods() {
        let k = StepSet::named("kreweras").unwrap();
        assert_eq!(periodicity(&k, (0, 0)), (3, 0));
        assert_eq!(periodicity(&k, (-1, 0)), (3, 1));
        let rk = StepSet::named("reverse-kreweras").unwrap();
        assert_eq!(periodicity(&rk, (1, 0)), (3, 1));
        let d = StepSet::named("diagonal").unwrap();
        assert_eq!(periodicity(&d, (0, 0)), (2, 0));
        assert_eq!(periodicity(&d, (-1, 1)), (2, 1));
        let s = StepSet::named("simple").unwrap();
        assert_eq!(periodicity(&s, (-1, 0)), (2, 1));
        let dk = StepSet::named("double-kreweras").unwrap();
        assert_eq!(periodicity(&dk, (3, 1)), (1, 0));
    }

    #[test]
    fn fit_recovers_a_known_constant() {
        // c(n) = ⌊2·3ⁿ n^{−1}(1 + n^{−1/4})⌋
        let counts: Vec<BigInt> = (0..=120)
            .map(|n| {
                let nf = (n.max(1)) as f64;
                let v = 2.0 * (1.0 + nf.powf(-0.25)) / nf;
                let scaled = (v * 1e12).round() as i64;
                BigInt::from(3).pow(n as u32) * BigInt::from(scaled) / BigInt::from(1_000_000_000_000i64)
            })
            .collect();
        let m = GrowthModel { mu: 3.0, exponent: 1.0, period: 1, residue: 0, beta: 0.25 };
        let a = estimate_growth(&counts, &m).unwrap();
        assert!((a - 2.0).abs() < 1e-6, "{a}");
        assert!(matches!(estimate_growth(&counts[..50], &m), Err(HarmonicError::TooFewPoints { .. })));
    }

    #[test]
    fn kappa_is_three() {
        let k = kreweras_kappa(15, 50).unwrap();
        assert!(k.minus_gap < 1e-20 && k.diag_gap < 1e-20, "{k:?}");
    }

    #[test]
    fn closed_forms() {
        let c = closed_form("kreweras", Some((0, 0)), 40).unwrap();
        assert!((c.value - 2.4184916290726215).abs() < 1e-12, "{}", c.value);
        assert!((c.exponent - 1.75).abs() < 1e-15);
        let t = closed_form("kreweras", None, 40).unwrap();
        assert!((t.value - 1.2161981500863916).abs() < 1e-12, "{}", t.value);
    }
}
