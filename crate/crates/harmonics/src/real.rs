//! Extended-precision reals on top of `astro_float`, plus Γ.

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use conewalk::algebra::Q;
use num_bigint::BigInt;
use num_traits::One;

pub const RM: RoundingMode = RoundingMode::ToEven;

/// Guard bits on top of the requested decimal digits.
const GUARD_BITS: usize = 64;

/// Binary precision for `digits` decimal digits.
pub fn bits(digits: u32) -> usize {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + GUARD_BITS
}

pub fn consts() -> Consts {
    Consts::new().expect("constants cache")
}

pub fn int(n: i64, p: usize) -> BigFloat {
    BigFloat::from_i64(n, p)
}

pub fn frac(n: i64, d: i64, p: usize) -> BigFloat {
    int(n, p).div(&int(d, p), p, RM)
}

pub fn big(n: &BigInt, p: usize) -> BigFloat {
    let mut cc = consts();
    BigFloat::parse(&n.to_string(), Radix::Dec, p, RM, &mut cc)
}

pub fn rational(x: &Q, p: usize) -> BigFloat {
    big(x.numer(), p).div(&big(x.denom(), p), p, RM)
}

pub fn sqrt(x: &BigFloat, p: usize) -> BigFloat {
    x.sqrt(p, RM)
}

pub fn pi(p: usize) -> BigFloat {
    consts().pi(p, RM)
}

/// `x^e` for `x > 0`.
pub fn powf(x: &BigFloat, e: &BigFloat, p: usize) -> BigFloat {
    x.pow(e, p, RM, &mut consts())
}

pub fn abs(x: &BigFloat) -> BigFloat {
    x.abs()
}

pub fn lt(a: &BigFloat, b: &BigFloat) -> bool {
    a.cmp(b) == Some(-1)
}

pub fn to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    to_string(x).parse().unwrap_or(f64::NAN)
}

pub fn to_string(x: &BigFloat) -> String {
    if x.is_zero() {
        return "0".into();
    }
    x.format(Radix::Dec, RM, &mut consts()).unwrap_or_else(|_| "NaN".into())
}

/// Decimal rendering with `digits` significant digits.
pub fn to_digits(x: &BigFloat, digits: usize) -> String {
    let s = to_string(x);
    let (mant, exp) = match s.split_once('e') {
        Some((m, e)) => (m.to_string(), e.parse::<i64>().unwrap_or(0)),
        None => (s.clone(), 0),
    };
    let neg = mant.starts_with('-');
    let mant = mant.trim_start_matches('-');
    let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
    let mut fp: String = fp.chars().take(digits.saturating_sub(ip.len())).collect();
    while fp.ends_with('0') {
        fp.pop();
    }
    let body = if fp.is_empty() { ip.to_string() } else { format!("{ip}.{fp}") };
    let sign = if neg { "-" } else { "" };
    if exp == 0 {
        format!("{sign}{body}")
    } else {
        format!("{sign}{body}e{exp}")
    }
}

/// `B₀, B₂, B₄, …, B_{2k}` by the Akiyama–Tanigawa recurrence.
fn bernoulli_even(k: usize) -> Vec<Q> {
    let n = 2 * k;
    let mut a: Vec<Q> = Vec::with_capacity(n + 1);
    let mut out = Vec::with_capacity(k + 1);
    for m in 0..=n {
        a.push(Q::new(BigInt::one(), BigInt::from(m as u64 + 1)));
        for j in (1..=m).rev() {
            let d = &a[j - 1] - &a[j];
            a[j - 1] = d * Q::from_integer(BigInt::from(j as u64));
        }
        if m % 2 == 0 {
            out.push(a[0].clone());
        }
    }
    out
}

/// `ln Γ(z)` for `z ≥ shift`, by Stirling's series.
fn ln_gamma_large(z: &BigFloat, terms: usize, p: usize) -> BigFloat {
    let mut cc = consts();
    let half = frac(1, 2, p);
    let two_pi = pi(p).mul(&int(2, p), p, RM);
    let mut s = z
        .sub(&half, p, RM)
        .mul(&z.ln(p, RM, &mut cc), p, RM)
        .sub(z, p, RM)
        .add(&two_pi.ln(p, RM, &mut cc).mul(&half, p, RM), p, RM);
    let b = bernoulli_even(terms);
    let z2 = z.mul(z, p, RM);
    let mut zp = z.clone();
    for (k, bk) in b.iter().enumerate().skip(1) {
        let d = (2 * k * (2 * k - 1)) as i64;
        let term = rational(bk, p).div(&int(d, p).mul(&zp, p, RM), p, RM);
        s = s.add(&term, p, RM);
        zp = zp.mul(&z2, p, RM);
    }
    s
}

/// Γ at a real argument; `None` at the poles.
pub fn gamma(x: &BigFloat, p: usize) -> Option<BigFloat> {
    let wp = p + 64;
    if x.is_int() && !x.is_positive() {
        return None;
    }
    let half = frac(1, 2, wp);
    if lt(x, &half) {
        // Γ(x) = π / (sin(πx) Γ(1−x))
        let one = int(1, wp);
        let pix = pi(wp).mul(x, wp, RM);
        let s = pix.sin(wp, RM, &mut consts());
        let g = gamma(&one.sub(x, wp, RM), wp)?;
        let r = pi(wp).div(&s.mul(&g, wp, RM), wp, RM);
        return Some(round(&r, p));
    }
    let shift = (p / 3 + 8) as i64;
    let mut z = x.clone();
    let mut prod = int(1, wp);
    for _ in 0..shift {
        prod = prod.mul(&z, wp, RM);
        z = z.add(&int(1, wp), wp, RM);
    }
    let lg = ln_gamma_large(&z, p / 6 + 8, wp);
    let g = lg.exp(wp, RM, &mut consts()).div(&prod, wp, RM);
    Some(round(&g, p))
}

fn round(x: &BigFloat, p: usize) -> BigFloat {
    let mut y = x.clone();
    let _ = y.set_precision(p, RM);
    y
}

/// Newton's method on a polynomial with integer coefficients (lowest degree first).
pub fn poly_root(coeffs: &[i64], seed: f64, p: usize) -> BigFloat {
    let f = |x: &BigFloat| {
        let mut v = BigFloat::from_word(0, p);
        let mut d = BigFloat::from_word(0, p);
        for &c in coeffs.iter().rev() {
            d = d.mul(x, p, RM).add(&v, p, RM);
            v = v.mul(x, p, RM).add(&int(c, p), p, RM);
        }
        (v, d)
    };
    let mut x = BigFloat::from_f64(seed, p);
    for _ in 0..(p.ilog2() as usize + 12) {
        let (v, d) = f(&x);
        if v.is_zero() {
            break;
        }
        x = x.sub(&v.div(&d, p, RM), p, RM);
    }
    x
}

/// `|a − b|`, as a float.
pub fn gap(a: &BigFloat, b: &BigFloat, p: usize) -> f64 {
    to_f64(&a.sub(b, p, RM).abs())
}

/// True when `x` is exactly zero or negligible against `2^{−p/2}`.
pub fn negligible(x: &BigFloat, p: usize) -> bool {
    x.is_zero() || x.exponent().map(|e| (e as i64) < -((p / 2) as i64)).unwrap_or(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn gamma_half_is_root_pi() {
        let p = bits(50);
        let g = gamma(&frac(1, 2, p), p).unwrap();
        let want = sqrt(&pi(p), p);
        assert!(gap(&g, &want, p) < 1e-48, "{}", to_string(&g));
    }

    #[test]
    fn gamma_values() {
        let p = bits(40);
        let five = gamma(&int(5, p), p).unwrap();
        assert!(gap(&five, &int(24, p), p) < 1e-35);
        // Γ(−3/4) = −4.8341465442…
        let g = to_f64(&gamma(&frac(-3, 4, p), p).unwrap());
        assert!((g + 4.834146544295877).abs() < 1e-12, "{g}");
        // Γ(−2/3) = −4.0184078020616…
        let g = to_f64(&gamma(&frac(-2, 3, p), p).unwrap());
        assert!((g + 4.018407802061621).abs() < 1e-12, "{g}");
        assert!(gamma(&int(-2, p), p).is_none());
    }

    #[test]
    fn bernoulli() {
        let b = bernoulli_even(3);
        assert_eq!(b[1], Q::new(BigInt::from(1), BigInt::from(6)));
        assert_eq!(b[2], Q::new(BigInt::from(-1), BigInt::from(30)));
        assert_eq!(b[3], Q::new(BigInt::from(1), BigInt::from(42)));
        assert!(!b[0].is_zero());
    }

    #[test]
    fn cubic_root() {
        let p = bits(30);
        let mu = to_f64(&poly_root(&[-43, -18, 1, 1], 4.7, p));
        assert!((mu - 4.729).abs() < 1e-3);
        assert_eq!(to_digits(&int(9, p), 10), "9");
    }
}
