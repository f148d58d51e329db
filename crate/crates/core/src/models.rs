//! Step sets, their horizontal/vertical splits, the companion map and kernels.

use std::collections::BTreeSet;
use std::fmt;

use crate::algebra::{BiLaurent, TSeries};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("unknown model `{name}`; valid: {}", CATALOG.join(", "), name = .0)]
    Unknown(String),
    #[error("companion undefined for {0}")]
    CompanionUndefined(String),
    #[error("invalid step ({0},{1})")]
    BadStep(i32, i32),
    #[error("empty step set")]
    Empty,
}

/// Catalog names, in display order.
pub const CATALOG: [&str; 13] = [
    "kreweras",
    "reverse-kreweras",
    "double-kreweras",
    "simple",
    "diagonal",
    "m6",
    "m7",
    "m8",
    "m9",
    "gessel",
    "gessel-reflected",
    "scarecrow",
    "gessel-asymmetric",
];

/// The nine symmetric models studied in the three-quadrant cone.
pub const NINE: [&str; 9] =
    ["kreweras", "reverse-kreweras", "double-kreweras", "simple", "diagonal", "m6", "m7", "m8", "m9"];

const N: (i8, i8) = (0, 1);
const S: (i8, i8) = (0, -1);
const E: (i8, i8) = (1, 0);
const W: (i8, i8) = (-1, 0);
const NE: (i8, i8) = (1, 1);
const NW: (i8, i8) = (-1, 1);
const SE: (i8, i8) = (1, -1);
const SW: (i8, i8) = (-1, -1);

fn catalog_steps(name: &str) -> Option<Vec<(i8, i8)>> {
    Some(match name {
        "kreweras" => vec![NE, W, S],
        "reverse-kreweras" => vec![N, SW, E],
        "double-kreweras" => vec![NE, W, S, N, SW, E],
        "simple" => vec![N, S, E, W],
        "diagonal" => vec![NE, NW, SE, SW],
        "m6" => vec![S, NE, W, N, E],
        "m7" => vec![S, NE, W, SW],
        "m8" => vec![NE, N, SW, E],
        "m9" => vec![S, W, N, SW, E],
        "gessel" | "gessel-asymmetric" => vec![E, W, NE, SW],
        "gessel-reflected" => vec![NE, N, SW, S],
        "scarecrow" => vec![NE, NW, W, S, SE],
        _ => return None,
    })
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StepSet {
    steps: BTreeSet<(i8, i8)>,
    name: Option<String>,
}

impl StepSet {
    pub fn new<I: IntoIterator<Item = (i32, i32)>>(steps: I) -> Result<Self, ModelError> {
        let mut set = BTreeSet::new();
        for (a, b) in steps {
            if !(-1..=1).contains(&a) || !(-1..=1).contains(&b) || (a, b) == (0, 0) {
                return Err(ModelError::BadStep(a, b));
            }
            set.insert((a as i8, b as i8));
        }
        if set.is_empty() {
            return Err(ModelError::Empty);
        }
        Ok(Self { steps: set, name: None })
    }

    pub fn named(name: &str) -> Result<Self, ModelError> {
        let steps = catalog_steps(name).ok_or_else(|| ModelError::Unknown(name.to_string()))?;
        Ok(Self { steps: steps.into_iter().collect(), name: Some(name.to_string()) })
    }

    pub fn catalog() -> Vec<StepSet> {
        CATALOG.iter().map(|n| Self::named(n).unwrap()).collect()
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| format!("{self}"))
    }

    pub fn steps(&self) -> impl Iterator<Item = (i32, i32)> + '_ {
        self.steps.iter().map(|&(a, b)| (a as i32, b as i32))
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn contains(&self, dx: i32, dy: i32) -> bool {
        self.steps.contains(&(dx as i8, dy as i8))
    }

    /// Invariant under `(i, j) ↦ (j, i)`.
    pub fn is_symmetric(&self) -> bool {
        self.steps.iter().all(|&(a, b)| self.steps.contains(&(b, a)))
    }

    /// The four diagonal steps.
    pub fn is_diagonal(&self) -> bool {
        self.steps.len() == 4 && [NE, NW, SE, SW].iter().all(|s| self.steps.contains(s))
    }

    /// Step polynomial `S(x, y)`.
    pub fn poly(&self) -> BiLaurent {
        BiLaurent::from_terms(self.steps().map(|(a, b)| (a, b, crate::algebra::q(1))))
    }

    /// Companion step set: `(i, j) ↦ (j − i, j)`, with the half-step variant for the
    /// diagonal model.
    pub fn companion(&self) -> Result<StepSet, ModelError> {
        if self.is_diagonal() {
            let mut s = StepSet::new([(1, 1), (0, 1), (-1, -1), (0, -1)])?;
            s.name = Some("gessel-reflected".into());
            return Ok(s);
        }
        if self.contains(1, -1) || self.contains(-1, 1) {
            return Err(ModelError::CompanionUndefined(self.label()));
        }
        let mut s = StepSet::new(self.steps().map(|(i, j)| (j - i, j)))?;
        s.name = CATALOG
            .iter()
            .find(|n| catalog_steps(n).is_some_and(|c| c.into_iter().collect::<BTreeSet<_>>() == s.steps))
            .map(|n| n.to_string());
        Ok(s)
    }

    /// `S(x̄, xy)` as a Laurent polynomial, defined for every step set (the
    /// diagonal model uses `S(√x̄, √x·y)`).
    pub fn companion_poly(&self) -> BiLaurent {
        if self.is_diagonal() {
            return self.companion().unwrap().poly();
        }
        BiLaurent::from_terms(self.steps().map(|(i, j)| (j - i, j, crate::algebra::q(1))))
    }

    pub fn splits(&self) -> Splits {
        let (h, v) = hv_splits(&self.poly());
        let cal = self.companion().ok().map(|c| hv_splits(&c.poly()));
        Splits { h, v, cal }
    }

    /// `K(x, y) = 1 − t S(x, y)`.
    pub fn kernel(&self) -> TSeries {
        kernel_of(&self.poly())
    }

    /// `𝒦(x, y) = 1 − t S(x̄, xy)`.
    pub fn companion_kernel(&self) -> TSeries {
        kernel_of(&self.companion_poly())
    }

    /// `Δ(y) = (1 − t V₀(y))² − 4t² V₋(y) V₊(y)` for this step set's own vertical split.
    pub fn delta(&self) -> TSeries {
        let [vm, v0, vp] = hv_splits(&self.poly()).1;
        let a = TSeries::one() - TSeries::monomial_t(1, v0);
        a.mul(&a) - TSeries::monomial_t(2, (&vm * &vp).scale(&crate::algebra::q(4)))
    }

    /// Residual of `(tV₀ + 2txV₊ − 1)² − Δ(y) + 4txV₊·(1 − tS)` (zero for every step set).
    pub fn lemma_square_residual(&self) -> TSeries {
        let [_, v0, vp] = hv_splits(&self.poly()).1;
        let l = TSeries::monomial_t(1, &v0 + &(&BiLaurent::x() * &vp).scale(&crate::algebra::q(2))) - TSeries::one();
        let rhs = self.delta() - TSeries::monomial_t(1, (&BiLaurent::x() * &vp).scale(&crate::algebra::q(4))).mul(&self.kernel());
        l.mul(&l) - rhs
    }
}

fn kernel_of(p: &BiLaurent) -> TSeries {
    TSeries::one() - TSeries::monomial_t(1, p.clone())
}

/// `([H₋, H₀, H₊], [V₋, V₀, V₊])` with `P = ȳH₋(x) + H₀(x) + yH₊(x) = x̄V₋(y) + V₀(y) + xV₊(y)`.
pub fn hv_splits(p: &BiLaurent) -> ([BiLaurent; 3], [BiLaurent; 3]) {
    let h = [-1, 0, 1].map(|j| p.y_coeff(j));
    let v = [-1, 0, 1].map(|i| p.x_coeff(i));
    (h, v)
}

/// Horizontal and vertical splits of a model and of its companion.
#[derive(Clone, Debug)]
pub struct Splits {
    /// `[H₋(x), H₀(x), H₊(x)]`.
    pub h: [BiLaurent; 3],
    /// `[V₋(y), V₀(y), V₊(y)]`.
    pub v: [BiLaurent; 3],
    /// `([ℋ₋, ℋ₀, ℋ₊], [𝒱₋, 𝒱₀, 𝒱₊])` of the companion, when it exists.
    pub cal: Option<([BiLaurent; 3], [BiLaurent; 3])>,
}

impl Splits {
    pub fn recompose_h(h: &[BiLaurent; 3]) -> BiLaurent {
        &(&h[0].shift(0, -1) + &h[1]) + &h[2].shift(0, 1)
    }

    pub fn recompose_v(v: &[BiLaurent; 3]) -> BiLaurent {
        &(&v[0].shift(-1, 0) + &v[1]) + &v[2].shift(1, 0)
    }
}

impl fmt::Display for StepSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.steps().map(|(a, b)| format!("[{a},{b}]")).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl fmt::Debug for StepSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.name.as_deref().map(|n| format!("{n} ")).unwrap_or_default(), self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;

    fn bl(terms: &[(i32, i32, i64)]) -> BiLaurent {
        BiLaurent::from_terms(terms.iter().map(|&(i, j, c)| (i, j, q(c))))
    }

    #[test]
    fn companion_examples() {
        let k = StepSet::named("kreweras").unwrap();
        let c = k.companion().unwrap();
        assert_eq!(c.name(), Some("reverse-kreweras"));
        assert_eq!(c.companion().unwrap().name(), Some("kreweras"));
        let dk = StepSet::named("double-kreweras").unwrap();
        assert_eq!(dk.companion().unwrap().steps, dk.steps);
        let d = StepSet::named("diagonal").unwrap().companion().unwrap();
        assert_eq!(d.poly(), bl(&[(1, 1, 1), (0, 1, 1), (-1, -1, 1), (0, -1, 1)]));
        assert_eq!(StepSet::named("simple").unwrap().companion().unwrap().name(), Some("gessel"));
        assert!(StepSet::named("scarecrow").unwrap().companion().is_err());
        let m6 = StepSet::named("m6").unwrap().companion().unwrap();
        assert_eq!(m6.poly(), bl(&[(1, 0, 1), (-1, 0, 1), (1, 1, 1), (-1, -1, 1), (0, 1, 1)]));
    }

    #[test]
    fn split_examples() {
        let rk = StepSet::named("reverse-kreweras").unwrap().splits();
        assert_eq!(rk.h[0], bl(&[(-1, 0, 1)]));
        assert_eq!(rk.h[1], bl(&[(1, 0, 1)]));
        assert_eq!(rk.h[2], bl(&[(0, 0, 1)]));
        let k = StepSet::named("kreweras").unwrap().splits();
        assert_eq!(k.h, [bl(&[(0, 0, 1)]), bl(&[(-1, 0, 1)]), bl(&[(1, 0, 1)])]);
        let m6 = StepSet::named("m6").unwrap().splits();
        assert_eq!(m6.cal.unwrap().1[2], bl(&[(0, 0, 1), (0, 1, 1)]));
    }

    #[test]
    fn recomposition_and_lemma_square() {
        for m in StepSet::catalog() {
            let s = m.splits();
            assert_eq!(Splits::recompose_h(&s.h), m.poly(), "{m:?}");
            assert_eq!(Splits::recompose_v(&s.v), m.poly(), "{m:?}");
            if let Some((h, v)) = &s.cal {
                assert_eq!(Splits::recompose_h(h), m.companion_poly());
                assert_eq!(Splits::recompose_v(v), m.companion_poly());
            }
            assert!(m.lemma_square_residual().is_zero(), "{m:?}");
        }
    }

    #[test]
    fn deltas() {
        let rk = StepSet::named("reverse-kreweras").unwrap();
        let want = {
            let a = TSeries::one() - TSeries::monomial_t(1, BiLaurent::y());
            a.mul(&a) - TSeries::monomial_t(2, bl(&[(0, -1, 4)]))
        };
        assert_eq!(rk.delta(), want);
        let da = StepSet::named("m6").unwrap().companion().unwrap();
        let want = {
            let a = TSeries::one() - TSeries::monomial_t(1, BiLaurent::y());
            let p = bl(&[(0, 0, 1), (0, 1, 1)]);
            a.mul(&a) - TSeries::monomial_t(2, (&p * &p).shift(0, -1).scale(&q(4)))
        };
        assert_eq!(da.delta(), want);
    }
}
