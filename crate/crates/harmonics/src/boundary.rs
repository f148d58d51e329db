//! Closed forms of `ℋ₋(x) = Σ H_{−i,0} xⁱ` and `ℋ_d(y) = Σ H_{i,i} yⁱ` for the
//! five models whose harmonic function is explicit, and of `Σ h_{i,0} xⁱ`
//! for their quadrant companions.

use astro_float::BigFloat;

use crate::real::{bits, frac, int, powf, sqrt, RM};
use crate::series::PSeries;
use crate::HarmonicError;

pub const HARMONIC_MODELS: [&str; 5] = ["kreweras", "reverse-kreweras", "double-kreweras", "simple", "diagonal"];

pub const MIN_DIGITS: u32 = 30;

/// Boundary values of the harmonic function.
#[derive(Clone, Debug)]
pub struct Boundary {
    pub model: String,
    /// `minus.c[k]` is `H_{−k·step,0}`.
    pub minus: PSeries,
    /// `diag.c[k]` is `H_{k,k}`.
    pub diag: PSeries,
    /// 2 for the diagonal model, whose `ℋ₋` is a series in `x^{1/2}`.
    pub step: usize,
}

impl Boundary {
    /// `H_{−i,0}` for `i > 0`, when within the computed range.
    pub fn h_minus(&self, i: usize) -> Option<BigFloat> {
        if i % self.step != 0 {
            return Some(BigFloat::from_word(0, self.minus.p));
        }
        self.minus.c.get(i / self.step).cloned()
    }
}

fn check(model: &str, digits: u32) -> Result<(), HarmonicError> {
    if !HARMONIC_MODELS.contains(&model) {
        return Err(HarmonicError::UnknownModel(model.into(), HARMONIC_MODELS.join(", ")));
    }
    if digits < MIN_DIGITS {
        return Err(HarmonicError::PrecisionTooLow { digits, min: MIN_DIGITS });
    }
    Ok(())
}

/// `ℋ₋` and `ℋ_d` with `n` coefficients each, at `digits` decimal digits.
pub fn harmonic_boundary(model: &str, n: usize, digits: u32) -> Result<Boundary, HarmonicError> {
    check(model, digits)?;
    let p = bits(digits);
    let m = n + 2;
    let x = PSeries::var(m, p);
    let c = |a: i64| PSeries::int(a, m, p);
    let s2 = sqrt(&int(2, p), p);
    let s3 = sqrt(&int(3, p), p);
    let one_minus = |s: &PSeries| s.neg().add_int(1);
    let shift = |s: PSeries| s.shift_down().ok_or(HarmonicError::Singular(model.into()));
    let (minus, diag, step) = match model {
        "kreweras" => {
            // a = (1+2x)/(1−x)·√((4−x)/(1−x))
            let om = one_minus(&x);
            let a = x.scale_int(2).add_int(1).div(&om).mul(&c(4).sub(&x).div(&om).sqrt());
            let minus = x.scale(&frac(9, 2, p)).mul(&a.add_int(2).sqrt());
            let g = shift(a.add_int(-2))?;
            let diag = g.div(&c(4).sub(&x)).sqrt().div(&om).scale_int(9);
            (minus, diag, 1)
        }
        "reverse-kreweras" => {
            let om = one_minus(&x);
            let om32 = om.mul(&om.sqrt());
            let k = s3.mul(&frac(3, 2, p), p, RM);
            let r = x.scale(&k).div(&om32);
            let pre = s3.mul(&int(27, p), p, RM);
            let minus = r.add_int(1).sqrt().add_int(-1).scale(&pre.div(&int(8, p), p, RM));
            let den = om.mul(&one_minus(&x.scale_int(4)).sqrt());
            let diag = one_minus(&r).sqrt().div(&den).scale(&pre.div(&int(4, p), p, RM));
            (minus, diag, 1)
        }
        "double-kreweras" => {
            let om = one_minus(&x);
            let c2 = int(2, p).sub(&s3, p, RM);
            let c7 = int(7, p).add(&s3.mul(&int(4, p), p, RM), p, RM);
            let b = x.add_const(&c2).div(&om).mul(&x.neg().add_const(&c7).div(&om).sqrt());
            let r21 = sqrt(&s2.sub(&int(1, p), p, RM), p);
            let k = powf(&int(3, p), &frac(7, 4, p), p).mul(&r21, p, RM);
            let pre = x.scale(&k.div(&s2, p, RM)).div(&x.add_int(1));
            let minus = pre.mul(&b.add_const(&s2).sqrt().add_const(&r21.neg()));
            let quad = x.mul(&x).sub(&x.scale_int(14)).add_int(1).sqrt();
            let diag = b.neg().add_const(&s2).sqrt().div(&om.mul(&quad)).scale(&k.mul(&s2, p, RM));
            (minus, diag, 1)
        }
        "simple" => {
            let l = gessel_l(m, p);
            let pp = gessel_p(m, p);
            let l3 = l.add_int(-3);
            let minus = x.mul(&l.scale_int(2).add_int(-3)).div(&l3.mul(&l3));
            let minus = minus.scale(&s3.mul(&frac(128, 9, p), p, RM));
            let p3 = pp.add_int(-3);
            let num = pp.add_int(1).mul(&p3.mul(&p3)).mul(&pp.powi(3));
            let diag = num.div(&one_minus(&pp).powi(5)).scale(&s3.mul(&frac(64, 27, p), p, RM));
            (minus, diag, 1)
        }
        "diagonal" => {
            // The roles of x and y are exchanged with respect to the simple model.
            let l = gessel_l(m, p);
            let pp = gessel_p(m, p);
            let pm = pp.add_int(-1);
            let minus = pp.scale_int(3).add_int(-1).div(&pp.add_int(1).mul(&pm.mul(&pm)));
            let minus = minus.scale(&s3.mul(&frac(32, 9, p), p, RM));
            let g = shift(l.mul(&l).add_int(-3))?;
            let num = l.mul(&g.mul(&g)).scale(&s3.mul(&int(144, p), p, RM));
            let den = l.mul(&l).add(&l.scale_int(6)).add_int(-9).mul(&c(3).sub(&l).powi(5));
            (minus, num.div(&den), 2)
        }
        _ => unreachable!(),
    };
    let cut = |s: PSeries| PSeries { c: s.c[..n].to_vec(), p };
    Ok(Boundary { model: model.into(), minus: cut(minus), diag: cut(diag), step })
}

/// `L(x) = √3 + O(x)` with `x(2L−3)(L²−12L+9) = 9(3−L²)`.
pub fn gessel_l(n: usize, p: usize) -> PSeries {
    let x = PSeries::var(n, p);
    PSeries::newton(sqrt(&int(3, p), p), n, p, |l| {
        let a = l.scale_int(2).add_int(-3);
        let b = l.mul(l).sub(&l.scale_int(12)).add_int(9);
        let f = x.mul(&a.mul(&b)).sub(&l.mul(l).neg().add_int(3).scale_int(9));
        let d = x.mul(&b.scale_int(2).add(&a.mul(&l.scale_int(2).add_int(-12)))).add(&l.scale_int(18));
        (f, d)
    })
}

/// `P(y) = 1/3 + O(y)` with `y P²(P−3) = 1 − 3P`.
pub fn gessel_p(n: usize, p: usize) -> PSeries {
    let y = PSeries::var(n, p);
    PSeries::newton(frac(1, 3, p), n, p, |q| {
        let f = q.scale_int(-3).add_int(1).sub(&y.mul(&q.mul(q).mul(&q.add_int(-3))));
        let d = y.mul(&q.mul(q).scale_int(3).sub(&q.scale_int(6))).add_int(3).neg();
        (f, d)
    })
}

/// `Σ h_{i,0} xⁱ` for the quadrant companion, `n` coefficients.
pub fn quadrant_boundary(model: &str, n: usize, digits: u32) -> Result<PSeries, HarmonicError> {
    check(model, digits)?;
    let p = bits(digits);
    let x = PSeries::var(n, p);
    let one_minus = |s: &PSeries| s.neg().add_int(1);
    let om = one_minus(&x);
    let s3 = sqrt(&int(3, p), p);
    Ok(match model {
        "kreweras" => {
            let a = x.scale_int(2).add_int(1).div(&om).mul(&PSeries::int(4, n, p).sub(&x).div(&om).sqrt());
            a.add_int(2).scale(&frac(9, 4, p))
        }
        "reverse-kreweras" => om.mul(&om.sqrt()).inv().scale_int(9),
        "double-kreweras" => {
            let c2 = int(2, p).sub(&s3, p, RM);
            let c7 = int(7, p).add(&s3.mul(&int(4, p), p, RM), p, RM);
            let b = x.add_const(&c2).div(&om).mul(&x.neg().add_const(&c7).div(&om).sqrt());
            b.add_int(1).div(&x.add_int(1)).scale(&frac(3, 2, p))
        }
        "simple" => {
            let l = gessel_l(n, p);
            let l3 = l.add_int(-3);
            let a = l.scale_int(2).add_int(-3);
            a.mul(&a).div(&l3.mul(&l3).mul(&l3.mul(&l3))).scale(&s3.mul(&int(48, p), p, RM))
        }
        _ => return Err(HarmonicError::UnknownModel(model.into(), "kreweras, reverse-kreweras, double-kreweras, simple".into())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::{gap, to_f64};

    #[test]
    fn kreweras_boundary_values() {
        let b = harmonic_boundary("kreweras", 6, 50).unwrap();
        let p = b.minus.p;
        assert!(gap(&b.minus.c[0], &int(0, p), p) < 1e-45);
        assert!(gap(&b.minus.c[1], &int(9, p), p) < 1e-45);
        let want = sqrt(&int(3, p), p).mul(&frac(27, 4, p), p, RM);
        assert!(gap(&b.diag.c[0], &want, p) < 1e-45);
        let h = quadrant_boundary("kreweras", 4, 50).unwrap();
        assert!(gap(&h.c[0], &int(9, p), p) < 1e-45);
    }

    #[test]
    fn gessel_series_seeds() {
        let p = bits(40);
        let l = gessel_l(6, p);
        let q = gessel_p(6, p);
        assert!((to_f64(&l.c[0]) - 3f64.sqrt()).abs() < 1e-15);
        assert!((to_f64(&q.c[0]) - 1.0 / 3.0).abs() < 1e-15);
        // y·(1/9)(−8/3) = −3·[y]P
        assert!((to_f64(&q.c[1]) - 8.0 / 81.0).abs() < 1e-15, "{}", to_f64(&q.c[1]));
    }

    #[test]
    fn rejects_unknown_models_and_low_precision() {
        assert!(matches!(harmonic_boundary("m7", 5, 50), Err(HarmonicError::UnknownModel(..))));
        assert!(matches!(harmonic_boundary("kreweras", 5, 20), Err(HarmonicError::PrecisionTooLow { .. })));
    }
}
