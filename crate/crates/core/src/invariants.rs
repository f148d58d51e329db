//! Kernel-method invariants: residuals of functional equations, divisibility
//! by a kernel, invariant pairs with their certificates, decoupling, and the
//! invariant lemma as a finite-order test.
//!
//! Every model is keyed by its own step set `S`; the kernel `𝒦` is the one of
//! the companion `S(x̄, xy)`. An order `N` means that the coefficients of
//! `t^0, …, t^N` are checked.

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{eval_expr, parse_expr, q, AlgebraError, BiLaurent, Bindings, TSeries, Var, INF};
use crate::enumerate::{
    at_one_one, at_zero, coeff_series, series_a, series_c, series_q, split_ud, EnumerateError, Split,
};
use crate::models::{hv_splits, ModelError, StepSet, NINE};
use crate::solve::companion_delta;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InvariantError {
    #[error("no decoupling known for {0}")]
    NoDecoupling(String),
    #[error("no rational invariants for {0}")]
    NoRationalPair(String),
    #[error("no invariants catalogued for {0}")]
    NotCatalogued(String),
    #[error("equation `{eq}` does not apply to {model}")]
    NotApplicable { eq: String, model: String },
    #[error("unknown equation `{name}`; valid: {}", FUNCEQS.join(", "), name = .0)]
    UnknownEquation(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Enumerate(#[from] EnumerateError),
}

type Result<T> = std::result::Result<T, InvariantError>;

/// Position of the first failing coefficient: `x^i y^j t^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Locus {
    pub n: i64,
    pub i: i32,
    pub j: i32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub check: String,
    pub model: String,
    pub order: i64,
    pub status: Status,
    pub first_failure: Option<Locus>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    fn new(check: &str, model: &str, order: i64, failure: Option<Locus>) -> Self {
        Report {
            check: check.into(),
            model: model.into(),
            order,
            status: if failure.is_none() { Status::Pass } else { Status::Fail },
            first_failure: failure,
        }
    }
}

fn tm(k: i64, p: BiLaurent) -> TSeries {
    TSeries::monomial_t(k, p)
}

fn xy(i: i32, j: i32) -> BiLaurent {
    BiLaurent::xy(i, j)
}

/// Exact rational expression in `x`, `y`, `t`.
pub fn rational(src: &str) -> Result<TSeries> {
    Ok(eval_expr(&parse_expr(src)?, &Bindings::new(), INF)?)
}

/// `Σ coeffᵢ·factorᵢ − constant`, truncated after `t^order`.
pub fn check_linear_identity(terms: &[(TSeries, TSeries)], constant: &TSeries, order: i64) -> TSeries {
    let mut acc = constant.neg();
    for (c, f) in terms {
        acc = acc.add(&c.mul(f));
    }
    acc.truncate(order + 1)
}

/// First nonzero coefficient of `r` up to `t^order`, or the first unknown one.
pub fn first_failure(r: &TSeries, order: i64) -> Option<Locus> {
    let ram = r.ram() as i64;
    for (k, p) in r.coeffs() {
        if *k > order * ram {
            break;
        }
        if let Some((i, j, _)) = p.terms().next() {
            return Some(Locus { n: k.div_euclid(ram), i, j });
        }
    }
    (r.order_t() <= order).then(|| Locus { n: r.order_t(), i: 0, j: 0 })
}

/// Report for a residual that should vanish up to `t^order`.
pub fn residual_report(check: &str, model: &str, r: &TSeries, order: i64) -> Report {
    Report::new(check, model, order, first_failure(r, order))
}

/// First coefficient up to `t^order` with a pole at `x = 0` or `y = 0` beyond
/// the bound.
pub fn pole_violation(s: &TSeries, bound: (i32, i32), order: i64) -> Option<Locus> {
    let ram = s.ram() as i64;
    for (k, p) in s.coeffs() {
        if *k > order * ram {
            break;
        }
        if let Some((i, j, _)) = p.terms().find(|(i, j, _)| *i < -bound.0 || *j < -bound.1) {
            return Some(Locus { n: k.div_euclid(ram), i, j });
        }
    }
    None
}

/// Largest pole orders `(at x = 0, at y = 0)` over the coefficients up to `t^order`.
pub fn pole_orders(s: &TSeries, order: i64) -> (i32, i32) {
    let ram = s.ram() as i64;
    let mut b = (0, 0);
    for (k, p) in s.coeffs() {
        if *k > order * ram {
            break;
        }
        b.0 = b.0.max(-p.min_x().unwrap_or(0));
        b.1 = b.1.max(-p.min_y().unwrap_or(0));
    }
    b
}

fn t_val(s: &TSeries) -> i64 {
    s.val().div_euclid(s.ram() as i64)
}

/// `F / kernel` as a series, known through `t^order`.
pub fn divide_by_kernel(f: &TSeries, kernel: &TSeries, order: i64) -> Result<TSeries> {
    let need = order + 1 - t_val(f).min(0);
    Ok(f.mul(&kernel.invert_to(need)?).truncate(order + 1))
}

/// Divisibility by `kernel`: `H = F/kernel` and whether every coefficient of
/// `H` up to `t^order` respects the pole bound.
pub fn check_divisible_by(f: &TSeries, kernel: &TSeries, bound: (i32, i32), order: i64) -> Result<(bool, TSeries)> {
    let h = divide_by_kernel(f, kernel, order)?;
    let ok = h.order_t() > order && pole_violation(&h, bound, order).is_none();
    Ok((ok, h))
}

/// Divisibility by the companion kernel `𝒦` of `model`.
pub fn check_divisible(f: &TSeries, model: &StepSet, bound: (i32, i32), order: i64) -> Result<(bool, TSeries)> {
    check_divisible_by(f, &model.companion_kernel(), bound, order)
}

// ---------------------------------------------------------------------------
// Functional equations

/// The functional equations that can be checked against enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FuncEq {
    /// `K·C = C|_{t=0} − tȳH₋(x)C₋ − tx̄V₋(y)C₋' − tx̄ȳC₀₀`.
    Kernel,
    /// Walks ending on the diagonal, in terms of `D` and `U(0,y)`.
    Diagonal,
    /// Walks ending above the diagonal, in terms of `U`, `D`, `U(x,0)`, `U(0,y)`.
    Upper,
    /// The combined three-quadrant equation for `U` and `D`.
    ThreeQuadrant,
    /// The companion's quadrant equation.
    Quadrant,
    ScarecrowDiagonal,
    ScarecrowUpper,
    Scarecrow,
    AsymUpper,
    AsymDiagonal,
    AsymLower,
}

pub const FUNCEQS: [&str; 11] = [
    "kernel",
    "diagonal",
    "upper",
    "three-quadrant",
    "quadrant",
    "scarecrow-diagonal",
    "scarecrow-upper",
    "scarecrow",
    "asym-upper",
    "asym-diagonal",
    "asym-lower",
];

const ALL_EQS: [FuncEq; 11] = [
    FuncEq::Kernel,
    FuncEq::Diagonal,
    FuncEq::Upper,
    FuncEq::ThreeQuadrant,
    FuncEq::Quadrant,
    FuncEq::ScarecrowDiagonal,
    FuncEq::ScarecrowUpper,
    FuncEq::Scarecrow,
    FuncEq::AsymUpper,
    FuncEq::AsymDiagonal,
    FuncEq::AsymLower,
];

impl FuncEq {
    pub fn parse(s: &str) -> Result<FuncEq> {
        FUNCEQS
            .iter()
            .position(|n| *n == s)
            .map(|k| ALL_EQS[k])
            .ok_or_else(|| InvariantError::UnknownEquation(s.into()))
    }

    pub fn name(&self) -> &'static str {
        FUNCEQS[ALL_EQS.iter().position(|e| e == self).unwrap()]
    }

    /// Equations that hold for `model`.
    pub fn for_model(model: &StepSet) -> Vec<FuncEq> {
        ALL_EQS.iter().copied().filter(|e| e.applies(model)).collect()
    }

    pub fn applies(&self, model: &StepSet) -> bool {
        let named = |n: &str| StepSet::named(n).is_ok_and(|m| m == *model);
        match self {
            FuncEq::Kernel => true,
            FuncEq::Diagonal | FuncEq::Upper | FuncEq::ThreeQuadrant | FuncEq::Quadrant => {
                model.is_symmetric() && model.companion().is_ok()
            }
            FuncEq::ScarecrowDiagonal | FuncEq::ScarecrowUpper | FuncEq::Scarecrow => named("scarecrow"),
            FuncEq::AsymUpper | FuncEq::AsymDiagonal | FuncEq::AsymLower => named("gessel-asymmetric"),
        }
    }
}

/// Which generating function an equation is checked on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gf {
    /// Walks from the origin.
    C,
    /// Weighted starts `2/3·(0,0) + 1/3·(−2,0) + 1/3·(0,−2)`.
    A,
}

/// Negative `x`-axis part `Σ_{i<0} c_{i,0} x^i`.
fn neg_x_axis(c: &TSeries) -> TSeries {
    c.map_coeffs(|p| p.filter(|i, j| j == 0 && i < 0)).expect("no denominator")
}

fn neg_y_axis(c: &TSeries) -> TSeries {
    c.map_coeffs(|p| p.filter(|i, j| i == 0 && j < 0)).expect("no denominator")
}

/// Coefficient of `x^i` as a series in `y`.
fn x_row(s: &TSeries, i: i32) -> TSeries {
    s.map_coeffs(|p| p.filter(|a, _| a == i).shift(-i, 0)).expect("no denominator")
}

fn at_t0(s: &TSeries) -> TSeries {
    TSeries::from_bilaurent(s.coeff_s(0))
}

fn has(p: &BiLaurent, i: i32, j: i32) -> bool {
    !p.coeff(i, j).is_zero()
}

/// `(terms, constant)` of an equation `Σ coeff·factor = constant` for `model`,
/// built from an enumerated series `gf` (`C` or `A` in the cone; the
/// companion's quadrant series for [`FuncEq::Quadrant`]).
pub fn funceq_terms(model: &StepSet, eq: FuncEq, gf: &TSeries) -> Result<(Vec<(TSeries, TSeries)>, TSeries)> {
    if !eq.applies(model) {
        return Err(InvariantError::NotApplicable { eq: eq.name().into(), model: model.label() });
    }
    let two = q(2);
    let cp = model.companion_poly();
    let ([chm, _, _], [cvm, cv0, cvp]) = hv_splits(&cp);
    let kk = model.companion_kernel();
    let x = BiLaurent::x();
    let y = BiLaurent::y();
    if eq == FuncEq::Kernel {
        let ([hm, _, _], [vm, _, _]) = hv_splits(&model.poly());
        let mut terms = vec![
            (model.kernel(), gf.clone()),
            (tm(1, &xy(0, -1) * &hm), neg_x_axis(gf)),
            (tm(1, &xy(-1, 0) * &vm), neg_y_axis(gf)),
        ];
        if model.contains(-1, -1) {
            terms.push((tm(1, xy(-1, -1)), coeff_series(gf, 0, 0)));
        }
        return Ok((terms, at_t0(gf)));
    }
    if eq == FuncEq::Quadrant {
        let mut terms = vec![
            (kk.mul_bl(&xy(1, 1)), gf.clone()),
            (tm(1, &x * &chm), at_zero(gf, Var::Y)),
            (tm(1, &y * &cvm), at_zero(gf, Var::X)),
        ];
        if has(&cp, -1, -1) {
            terms.push((tm(1, BiLaurent::int(-1)), coeff_series(gf, 0, 0)));
        }
        return Ok((terms, TSeries::from_bilaurent(xy(1, 1))));
    }
    let Split { u, d, l } = split_ud(gf, model)?;
    let ux0 = at_zero(&u, Var::Y);
    let u0y = at_zero(&u, Var::X);
    let u00 = coeff_series(&u, 0, 0);
    let d0 = coeff_series(&d, 0, 0);
    let (ui, di) = (at_t0(&u), at_t0(&d));
    let s_in = has(&cp, 0, -1);
    let sw_in = has(&cp, -1, -1);
    let yb = xy(0, -1);
    let one = TSeries::one();
    let mut terms = Vec::new();
    let constant;
    match eq {
        FuncEq::Diagonal => {
            terms.push((one.sub(&tm(1, cv0)), d.clone()));
            if s_in {
                terms.push((tm(1, yb.clone()), d0));
            }
            terms.push((tm(1, cvm.scale(&q(-2))), u0y));
            if sw_in {
                terms.push((tm(1, yb.scale(&two)), u00));
            }
            constant = di;
        }
        FuncEq::Upper => {
            terms.push((kk.mul_bl(&x), u.clone()));
            terms.push((tm(1, -(&x * &cvp)), d.clone()));
            terms.push((tm(1, &(&yb * &x) * &chm), ux0));
            terms.push((tm(1, cvm), u0y));
            if sw_in {
                terms.push((tm(1, -yb), u00));
            }
            constant = ui.mul_bl(&x);
        }
        FuncEq::ThreeQuadrant => {
            let lin = tm(1, &cv0 + &(&x * &cvp).scale(&two)).sub(&one);
            terms.push((kk.mul_bl(&xy(1, 1).scale(&two)), u.clone()));
            terms.push((lin.mul_bl(&-y.clone()), d.clone()));
            terms.push((tm(1, (&x * &chm).scale(&two)), ux0));
            if s_in {
                terms.push((TSeries::t(), d0));
            }
            constant = ui.mul_bl(&xy(1, 1).scale(&two)).add(&di.mul_bl(&y));
        }
        FuncEq::ScarecrowDiagonal | FuncEq::ScarecrowUpper | FuncEq::Scarecrow => {
            let u1 = x_row(&u, 1);
            let u10 = coeff_series(&u, 1, 0);
            let one_xb = &BiLaurent::one() + &xy(-1, 0);
            match eq {
                FuncEq::ScarecrowDiagonal => {
                    let c = yb.scale(&q(-2));
                    terms.push((one.sub(&tm(1, y.clone())), d.clone()));
                    terms.push((tm(1, c.clone()), u0y));
                    terms.push((tm(1, -c.clone()), u00));
                    terms.push((tm(1, c.clone()), u1));
                    terms.push((tm(1, -c), u10));
                    constant = di;
                }
                FuncEq::ScarecrowUpper => {
                    let c = &yb * &one_xb;
                    terms.push((kk.mul_bl(&x), u.clone()));
                    terms.push((tm(1, -(&x * &(&BiLaurent::one() + &xy(1, 1)))), d.clone()));
                    terms.push((tm(1, &c - &x), u0y));
                    terms.push((tm(1, &x - &c), u00));
                    terms.push((tm(1, c), ux0));
                    terms.push((tm(1, yb.clone()), u1));
                    terms.push((tm(1, -yb), u10));
                    constant = ui.mul_bl(&x);
                }
                _ => {
                    let lin = tm(1, &y + &(&x * &(&BiLaurent::one() + &xy(1, 1))).scale(&two)).sub(&one);
                    let m = (&xy(1, 1) - &xy(-1, 0)).scale(&q(-2));
                    terms.push((kk.mul_bl(&xy(1, 1).scale(&two)), u.clone()));
                    terms.push((lin.mul_bl(&-y.clone()), d.clone()));
                    terms.push((tm(1, one_xb.scale(&two)), ux0));
                    terms.push((tm(1, m.clone()), u0y));
                    terms.push((tm(1, -m), u00));
                    constant = ui.mul_bl(&xy(1, 1).scale(&two)).add(&di.mul_bl(&y));
                }
            }
        }
        FuncEq::AsymUpper | FuncEq::AsymDiagonal | FuncEq::AsymLower => {
            let l = l.expect("asymmetric split");
            let l0y = at_zero(&l, Var::X);
            let l00 = coeff_series(&l, 0, 0);
            match eq {
                FuncEq::AsymUpper => {
                    terms.push((kk.mul_bl(&x), u.clone()));
                    terms.push((tm(1, -x.clone()), d.clone()));
                    terms.push((tm(1, xy(1, -1)), ux0));
                    terms.push((TSeries::t(), u0y));
                    constant = ui.mul_bl(&x);
                }
                FuncEq::AsymDiagonal => {
                    terms.push((one.sub(&tm(1, &y + &yb)), d.clone()));
                    terms.push((tm(1, yb.clone()), d0));
                    terms.push((tm(1, BiLaurent::int(-1)), u0y));
                    terms.push((tm(1, -yb.clone()), l0y));
                    terms.push((tm(1, yb), l00));
                    constant = di;
                }
                _ => {
                    let lk = BiLaurent::from_terms([(0, 1, q(1)), (0, -1, q(1)), (1, 1, q(1)), (-1, -1, q(1))]);
                    let l_x0 = at_zero(&l, Var::Y);
                    terms.push((one.sub(&tm(1, lk)).mul_bl(&x), l.clone()));
                    terms.push((tm(1, xy(1, 1).scale(&q(-1))), d.clone()));
                    terms.push((tm(1, &yb + &xy(1, -1)), l_x0));
                    terms.push((tm(1, yb.clone()), l0y));
                    terms.push((tm(1, -yb), l00));
                    constant = at_t0(&l).mul_bl(&x);
                }
            }
        }
        FuncEq::Kernel | FuncEq::Quadrant => unreachable!(),
    }
    Ok((terms, constant))
}

/// Enumerate the series an equation needs and return its residual through `t^order`.
pub fn funceq_residual(model: &StepSet, eq: FuncEq, gf: Gf, order: i64) -> Result<TSeries> {
    if !eq.applies(model) {
        return Err(InvariantError::NotApplicable { eq: eq.name().into(), model: model.label() });
    }
    let n = order.max(0) as usize;
    let series = match (eq, gf) {
        (FuncEq::Quadrant, _) => series_q(&model.companion()?, n),
        (_, Gf::C) => series_c(model, n),
        (_, Gf::A) => series_a(model, n),
    };
    let (terms, constant) = funceq_terms(model, eq, &series)?;
    Ok(check_linear_identity(&terms, &constant, order))
}

pub fn check_funceq(model: &StepSet, eq: FuncEq, gf: Gf, order: i64) -> Result<Report> {
    let r = funceq_residual(model, eq, gf, order)?;
    let check = match gf {
        Gf::C => format!("funceq:{}", eq.name()),
        Gf::A => format!("funceq:{}:A", eq.name()),
    };
    Ok(residual_report(&check, &model.label(), &r, order))
}

// ---------------------------------------------------------------------------
// Invariant pairs

/// `(I(x), J(y))` with a certificate `H` such that `I − J = 𝒦·H`.
#[derive(Clone, Debug)]
pub struct InvariantPair {
    pub i: TSeries,
    pub j: TSeries,
    pub model: StepSet,
    pub cert: TSeries,
    pub pole_bound: (i32, i32),
}

impl InvariantPair {
    /// Pair whose certificate is computed as `(I − J)/𝒦` through `t^order`.
    pub fn by_division(i: TSeries, j: TSeries, model: &StepSet, pole_bound: (i32, i32), order: i64) -> Result<Self> {
        let cert = divide_by_kernel(&i.sub(&j), &model.companion_kernel(), order)?;
        Ok(InvariantPair { i, j, model: model.clone(), cert, pole_bound })
    }

    /// `I − J − 𝒦·H` through `t^order`.
    pub fn residual(&self, order: i64) -> TSeries {
        let kh = self.model.companion_kernel().mul(&self.cert);
        self.i.sub(&self.j).sub(&kh).truncate(order + 1)
    }

    /// Certificate identity and pole bounds through `t^order`.
    pub fn check(&self, name: &str, order: i64) -> Report {
        let mut failure = first_failure(&self.residual(order), order);
        if failure.is_none() {
            failure = pole_violation(&self.cert, self.pole_bound, order);
            if failure.is_none() && self.cert.order_t() <= order {
                failure = Some(Locus { n: self.cert.order_t(), i: 0, j: 0 });
            }
        }
        Report::new(name, &self.model.label(), order, failure)
    }

    /// Componentwise sum; the certificates add.
    pub fn sum(&self, o: &Self) -> Self {
        InvariantPair {
            i: self.i.add(&o.i),
            j: self.j.add(&o.j),
            model: self.model.clone(),
            cert: self.cert.add(&o.cert),
            pole_bound: (self.pole_bound.0.max(o.pole_bound.0), self.pole_bound.1.max(o.pole_bound.1)),
        }
    }

    /// Componentwise product with certificate `H₁I₂ + J₁H₂`; the pole bound
    /// grows by the poles of `I₂` and `J₁` seen through `t^order`.
    pub fn product(&self, o: &Self, order: i64) -> Self {
        let pi = pole_orders(&o.i.expand_den(0), order);
        let pj = pole_orders(&self.j.expand_den(0), order);
        InvariantPair {
            i: self.i.mul(&o.i),
            j: self.j.mul(&o.j),
            model: self.model.clone(),
            cert: self.cert.mul(&o.i).add(&self.j.mul(&o.cert)),
            pole_bound: (
                (self.pole_bound.0 + pi.0).max(o.pole_bound.0),
                self.pole_bound.1.max(o.pole_bound.1 + pj.1),
            ),
        }
    }

    /// Multiply both components by a series in `t`.
    pub fn scale(&self, a: &TSeries) -> Self {
        InvariantPair {
            i: self.i.mul(a),
            j: self.j.mul(a),
            model: self.model.clone(),
            cert: self.cert.mul(a),
            pole_bound: self.pole_bound,
        }
    }
}

/// Default pole bound.
pub const POLE_BOUND: (i32, i32) = (2, 2);

/// Rational invariants and the decoupling of `xy` for a model.
#[derive(Clone, Debug)]
pub struct Known {
    pub i0j0: Option<(TSeries, TSeries)>,
    pub f: TSeries,
    pub g: TSeries,
}

/// Catalogued invariants for the companion of one of the nine models.
pub fn known_invariants(model: &StepSet) -> Result<Known> {
    let name = nine_name(model)?;
    let (i0, j0, f, g): (Option<&str>, Option<&str>, &str, &str) = match name {
        "kreweras" => (Some("xb + x/t - x^2"), Some("yb + y/t - y^2"), "x/t - x^2", "-yb"),
        "reverse-kreweras" => (Some("xb^2 - xb/t - x"), Some("yb^2 - yb/t - y"), "1/(2*t) - xb", "1/(2*t) - yb"),
        "double-kreweras" => (
            Some("xb - x - (1+2*t)/(t*(1+x))"),
            Some("yb - y - (1+2*t)/(t*(1+y))"),
            "(x - t - t*x^2)/(t*(1+x))",
            "-yb",
        ),
        "simple" => (
            Some("x + xb - t*(xb - x)^2"),
            Some("y/(t*(1+y)^2) + t*(1+y)^2/y"),
            "-xb",
            "y/(t*(1+y))",
        ),
        "diagonal" => (
            Some("x/(t*(1+x)^2) + t*(1+x)^2/x"),
            Some("y + yb - t*(yb - y)^2"),
            "x/(t*(1+x))",
            "-yb",
        ),
        "m6" => (None, None, "-xb", "y*(1-t*y)/(t*(1+y))"),
        "m7" => (None, None, "-xb", "-1 + y/t - y^2"),
        "m8" => (None, None, "-xb + 1/t", "-yb - y"),
        "m9" => (None, None, "-xb", "(y-t)/(t*(1+y))"),
        _ => unreachable!(),
    };
    let i0j0 = match (i0, j0) {
        (Some(a), Some(b)) => Some((rational(a)?, rational(b)?)),
        _ => None,
    };
    Ok(Known { i0j0, f: rational(f)?, g: rational(g)? })
}

fn nine_name(model: &StepSet) -> Result<&'static str> {
    NINE.iter()
        .find(|n| StepSet::named(n).is_ok_and(|m| m == *model))
        .copied()
        .ok_or_else(|| InvariantError::NotCatalogued(model.label()))
}

/// The rational pair `(I₀, J₀)` with its certificate.
pub fn rational_pair(model: &StepSet, order: i64) -> Result<InvariantPair> {
    let k = known_invariants(model)?;
    let (i0, j0) = k.i0j0.ok_or_else(|| InvariantError::NoRationalPair(model.label()))?;
    InvariantPair::by_division(i0, j0, model, POLE_BOUND, order)
}

/// `xy·𝒦 − xy + f + g` divided by `𝒦`, i.e. `h` in `xy = f + g + h𝒦`.
pub fn xy_decoupling_remainder(model: &StepSet, order: i64) -> Result<(bool, TSeries)> {
    let k = known_invariants(model)?;
    let num = TSeries::from_bilaurent(xy(1, 1)).sub(&k.f).sub(&k.g);
    check_divisible(&num, model, POLE_BOUND, order)
}

/// `I₁ = txℋ₋(x)Q(x,0) − f(x)`, `J₁ = −ty𝒱₋(y)Q(0,y) + tQ₀₀𝟙 + g(y)` from the
/// companion's quadrant series.
pub fn build_i1j1(model: &StepSet, qx: &TSeries, qy: &TSeries, q00: &TSeries, order: i64) -> Result<InvariantPair> {
    let k = known_invariants(model)?;
    let cp = model.companion_poly();
    let ([chm, _, _], [cvm, _, _]) = hv_splits(&cp);
    let i1 = tm(1, &BiLaurent::x() * &chm).mul(qx).sub(&k.f);
    let mut j1 = tm(1, -(&BiLaurent::y() * &cvm)).mul(qy).add(&k.g);
    if has(&cp, -1, -1) {
        j1 = j1.add(&q00.mul_t(1));
    }
    InvariantPair::by_division(i1, j1, model, POLE_BOUND, order)
}

/// [`build_i1j1`] from an enumerated quadrant series.
pub fn i1j1_from_q(model: &StepSet, qs: &TSeries, order: i64) -> Result<InvariantPair> {
    build_i1j1(model, &at_zero(qs, Var::Y), &at_zero(qs, Var::X), &coeff_series(qs, 0, 0), order)
}

// ---------------------------------------------------------------------------
// Decoupling

/// `y = (t𝒱₀ + 2tx𝒱₊ − 1)G(y) + F(x) + 𝒦H`, and the classic `xy = 𝖿(x) + 𝖿(y) mod K`.
#[derive(Clone, Debug)]
pub struct Decoupling {
    pub f: TSeries,
    pub g: TSeries,
    pub h: TSeries,
    pub classic: TSeries,
}

/// Catalogued decoupling for kreweras, reverse-kreweras, double-kreweras and m6.
pub fn decoupling(model: &StepSet) -> Result<Decoupling> {
    let name = nine_name(model).map_err(|_| InvariantError::NoDecoupling(model.label()))?;
    let (f, g, h) = match name {
        "kreweras" => ("1/t - 2*x", "1/t", "0"),
        "reverse-kreweras" => ("-xb^2 + xb/t - x", "yb/t", "xb*yb*(x-y)/t"),
        "double-kreweras" => ("(1+2*t)/(t*(1+x)) - 1 - x - xb", "1/(t*(1+y))", "(x-y)/(t*(1+x)*(1+y))"),
        "m6" => ("1/t - 2*x - 2*xb", "(1-y)/(t*(1+y))", "-2*y/(t*(1+y))"),
        _ => return Err(InvariantError::NoDecoupling(model.label())),
    };
    Ok(Decoupling { f: rational(f)?, g: rational(g)?, h: rational(h)?, classic: classic_f(model)? })
}

/// `F(x) = x̄² + K(x̄,x̄)/(tH₋(x̄))` from the step set.
pub fn f_from_steps(model: &StepSet) -> Result<TSeries> {
    let ([hm, _, _], _) = hv_splits(&model.poly());
    let kxx = model.kernel().map_exponents(|i, j| (-i - j, 0))?;
    let hm_bar = hm.map_exponents(|i, j| (-i, j));
    Ok(TSeries::from_bilaurent(xy(-2, 0)).add(&kxx.mul_t(-1).div_bl(&hm_bar)?))
}

/// `G(y)` with `tG(y) = (1 + H₋(ȳ))/(yH₊(ȳ)) − 1`.
pub fn g_from_steps(model: &StepSet) -> Result<TSeries> {
    let ([hm, _, hp], _) = hv_splits(&model.poly());
    let num = TSeries::from_bilaurent(&BiLaurent::one() + &hm.map_exponents(|i, _| (0, -i)));
    let den = &BiLaurent::y() * &hp.map_exponents(|i, _| (0, -i));
    Ok(num.div_bl(&den)?.sub(&TSeries::one()).mul_t(-1))
}

/// `𝖿(x) = (x² + K(x,x)/(tH₋(x)))/2`.
pub fn classic_f(model: &StepSet) -> Result<TSeries> {
    classic_f_in(model, Var::X)
}

/// `𝖿` written in `x` or in `y`.
pub fn classic_f_in(model: &StepSet, var: Var) -> Result<TSeries> {
    let put = move |e: i32| if var == Var::X { (e, 0) } else { (0, e) };
    let ([hm, _, _], _) = hv_splits(&model.poly());
    let kvv = model.kernel().map_exponents(|i, j| put(i + j))?;
    let hv = hm.map_exponents(|i, _| put(i));
    let (a, b) = put(2);
    let s = TSeries::from_bilaurent(xy(a, b)).add(&kvv.mul_t(-1).div_bl(&hv)?);
    Ok(s.scale(&crate::algebra::qf(1, 2)))
}

/// `t𝒱₀(y) + 2tx𝒱₊(y) − 1` of the companion.
pub fn linear_factor(model: &StepSet) -> TSeries {
    let (_, [_, cv0, cvp]) = hv_splits(&model.companion_poly());
    tm(1, &cv0 + &(&BiLaurent::x() * &cvp).scale(&q(2))).sub(&TSeries::one())
}

/// Outcome of the decoupling checks for one model.
#[derive(Clone, Debug)]
pub struct DecouplingCheck {
    /// `y − L·G − F − 𝒦H` (exact).
    pub table_residual: TSeries,
    /// `F` from steps minus the catalogued `F`.
    pub f_residual: TSeries,
    /// `G` from steps minus the catalogued `G`.
    pub g_residual: TSeries,
    /// `y − L·G − F` divisible by `𝒦` with the default bound.
    pub divisible: bool,
    /// `xy − 𝖿(x) − 𝖿(y)` divisible by `K` with the default bound.
    pub classic_divisible: bool,
}

pub fn check_decoupling(model: &StepSet, order: i64) -> Result<DecouplingCheck> {
    let dc = decoupling(model)?;
    let kk = model.companion_kernel();
    let lg = linear_factor(model).mul(&dc.g);
    let base = TSeries::y().sub(&lg).sub(&dc.f);
    let table_residual = base.sub(&kk.mul(&dc.h)).reduce();
    let (divisible, _) = check_divisible(&base, model, POLE_BOUND, order)?;
    let classic = TSeries::from_bilaurent(xy(1, 1))
        .sub(&dc.classic)
        .sub(&classic_f_in(model, Var::Y)?);
    let (classic_divisible, _) = check_divisible_by(&classic, &model.kernel(), POLE_BOUND, order)?;
    Ok(DecouplingCheck {
        table_residual,
        f_residual: f_from_steps(model)?.sub(&dc.f).reduce(),
        g_residual: g_from_steps(model)?.sub(&dc.g).reduce(),
        divisible,
        classic_divisible,
    })
}

/// `R(x)` and `S(y)` of the three-quadrant pair.
#[derive(Clone, Debug)]
pub struct ThreeQuadrantPair {
    pub pair: InvariantPair,
    pub r: TSeries,
    pub s: TSeries,
}

/// `R = 2txℋ₋(x)U(x,0) − F(x) + tD₀𝟙`, `S = yD(y) + G(y)`, `I = R²`,
/// `J = Δ(y)S²`, with the certificate
/// `−4tx𝒱₊S² + (H − 2xyU)((t𝒱₀ + 2tx𝒱₊ − 1)S + R)`.
pub fn build_three_quadrant_pair(model: &StepSet, u: &TSeries, d: &TSeries) -> Result<ThreeQuadrantPair> {
    let dc = decoupling(model)?;
    let cp = model.companion_poly();
    let ([chm, _, _], [_, _, cvp]) = hv_splits(&cp);
    let mut r = tm(1, (&BiLaurent::x() * &chm).scale(&q(2))).mul(&at_zero(u, Var::Y)).sub(&dc.f);
    if has(&cp, 0, -1) {
        r = r.add(&coeff_series(d, 0, 0).mul_t(1));
    }
    let s = d.mul_bl(&BiLaurent::y()).add(&dc.g);
    let delta = companion_delta(model);
    let i = r.mul(&r);
    let j = delta.mul(&s).mul(&s);
    let s2 = s.mul(&s);
    let cert = tm(1, (&BiLaurent::x() * &cvp).scale(&q(-4)))
        .mul(&s2)
        .add(&dc.h.sub(&u.mul_bl(&xy(1, 1).scale(&q(2)))).mul(&linear_factor(model).mul(&s).add(&r)));
    Ok(ThreeQuadrantPair { pair: InvariantPair { i, j, model: model.clone(), cert, pole_bound: POLE_BOUND }, r, s })
}

/// `R(1) = −(1 − |S|t)(C(1,1) + 1/(tH₋(1)))`.
pub fn r_at_one_from_c(model: &StepSet, c: &TSeries) -> Result<TSeries> {
    let ([hm, _, _], _) = hv_splits(&model.poly());
    let h1 = hm.eval_x(&q(1)).coeff(0, 0);
    let c11 = at_one_one(c)?;
    let inv = tm(-1, BiLaurent::constant(h1.recip()));
    let lead = TSeries::one().sub(&tm(1, BiLaurent::int(model.len() as i64)));
    Ok(lead.mul(&c11.add(&inv)).neg())
}

/// Invariant lemma at finite order: whether every coefficient of `(I − J)/𝒦`
/// through `t^order` is a multiple of `xy`, together with `A = I(0)` (the
/// constant term in `x`) and whether `I = J = A` indeed holds.
#[derive(Clone, Debug)]
pub struct LemmaOutcome {
    pub multiple_of_xy: bool,
    pub constant: bool,
    pub a: TSeries,
}

pub fn invariant_lemma_check(i: &TSeries, j: &TSeries, model: &StepSet, order: i64) -> Result<LemmaOutcome> {
    let h = divide_by_kernel(&i.sub(j), &model.companion_kernel(), order)?;
    let ram = h.ram() as i64;
    let multiple_of_xy = h.order_t() > order
        && h.coeffs().range(..(order + 1) * ram).all(|(_, p)| p.terms().all(|(a, b, _)| a >= 1 && b >= 1));
    let ie = i.reduce();
    let a = ie.expand_den(0).map_coeffs(|p| BiLaurent::constant(p.coeff(0, 0)))?;
    let a = a.truncate(order + 1);
    let zero_through = |s: &TSeries| first_failure(&s.truncate(order + 1), order).is_none();
    let constant = zero_through(&ie.sub(&a).reduce()) && zero_through(&j.reduce().sub(&a).reduce());
    Ok(LemmaOutcome { multiple_of_xy, constant, a })
}

/// Enumerated ingredients for a model: `C`, its split and the companion's quadrant series.
#[derive(Clone, Debug)]
pub struct Walks {
    pub c: TSeries,
    pub split: Split,
    pub q: Option<TSeries>,
}

pub fn walks(model: &StepSet, order: i64) -> Result<Walks> {
    let n = order.max(0) as usize;
    let c = series_c(model, n);
    let split = split_ud(&c, model)?;
    let q = model.companion().ok().map(|m| series_q(&m, n));
    Ok(Walks { c, split, q })
}

/// `F(𝒳(y), y)` for the kernel root `𝒳`.
pub fn at_kernel_root(f: &TSeries, model: &StepSet, order: i64) -> Result<TSeries> {
    let (px, _) = pole_orders(f, INF - 1);
    let extra = 2 + px as i64 - t_val(f).min(0);
    let root = crate::solve::kernel_root(model, order + 1 + extra * 2).map_err(|e| match e {
        crate::solve::SolveError::Algebra(a) => InvariantError::Algebra(a),
        other => InvariantError::Algebra(AlgebraError::Substitution(other.to_string())),
    })?;
    Ok(f.subs(Var::X, &root)?.truncate(order + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solve::V;

    fn m(name: &str) -> StepSet {
        StepSet::named(name).unwrap()
    }

    fn zero_through(s: &TSeries, order: i64) -> bool {
        first_failure(&s.truncate(order + 1), order).is_none()
    }

    #[test]
    fn funceqs_hold_for_the_nine() {
        for name in NINE {
            let model = m(name);
            for eq in FuncEq::for_model(&model) {
                let r = check_funceq(&model, eq, Gf::C, 10).unwrap();
                assert!(r.passed(), "{name} {}: {:?}", eq.name(), r.first_failure);
            }
        }
    }

    #[test]
    fn funceqs_hold_for_a_series_and_wide_models() {
        for name in ["simple", "diagonal"] {
            for eq in [FuncEq::Kernel, FuncEq::ThreeQuadrant, FuncEq::Diagonal, FuncEq::Upper] {
                let r = check_funceq(&m(name), eq, Gf::A, 10).unwrap();
                assert!(r.passed(), "{name} {}: {:?}", eq.name(), r.first_failure);
            }
        }
        for name in ["scarecrow", "gessel-asymmetric"] {
            let model = m(name);
            let eqs = FuncEq::for_model(&model);
            assert_eq!(eqs.len(), 4);
            for eq in eqs {
                let r = check_funceq(&model, eq, Gf::C, 9).unwrap();
                assert!(r.passed(), "{name} {}: {:?}", eq.name(), r.first_failure);
            }
        }
    }

    #[test]
    fn misplaced_corner_term_is_caught() {
        let k = m("kreweras");
        let c = series_c(&k, 6);
        let (mut terms, constant) = funceq_terms(&k, FuncEq::Kernel, &c).unwrap();
        assert!(first_failure(&check_linear_identity(&terms, &constant, 6), 6).is_none());
        terms.push((tm(1, xy(-1, -1)), coeff_series(&c, 0, 0)));
        let f = first_failure(&check_linear_identity(&terms, &constant, 6), 6).unwrap();
        assert_eq!(f.n, 1);
    }

    #[test]
    fn equation_names_round_trip() {
        for n in FUNCEQS {
            assert_eq!(FuncEq::parse(n).unwrap().name(), n);
        }
        assert!(FuncEq::parse("nope").unwrap_err().to_string().contains("three-quadrant"));
        assert!(matches!(
            check_funceq(&m("scarecrow"), FuncEq::ThreeQuadrant, Gf::C, 3),
            Err(InvariantError::NotApplicable { .. })
        ));
    }

    #[test]
    fn rational_pairs() {
        for name in ["kreweras", "reverse-kreweras", "double-kreweras", "simple", "diagonal"] {
            let p = rational_pair(&m(name), 12).unwrap();
            assert!(p.check("rational", 12).passed(), "{name}");
        }
        // Kreweras steps as companion: (I₀ − J₀)/𝒦 = (x − y)/(txy)
        let p = rational_pair(&m("reverse-kreweras"), 10).unwrap();
        let want = rational("(x - y)/(t*x*y)").unwrap();
        assert!(zero_through(&p.cert.sub(&want), 10));
        let k = known_invariants(&m("reverse-kreweras")).unwrap();
        assert_eq!(k.i0j0.unwrap().0, rational("xb^2 - xb/t - x").unwrap());
        assert!(matches!(rational_pair(&m("m7"), 5), Err(InvariantError::NoRationalPair(_))));
        assert!(matches!(known_invariants(&m("gessel")), Err(InvariantError::NotCatalogued(_))));
    }

    #[test]
    fn one_is_not_divisible() {
        for name in NINE {
            let (ok, _) = check_divisible(&TSeries::one(), &m(name), POLE_BOUND, 8).unwrap();
            assert!(!ok, "{name}");
        }
    }

    #[test]
    fn divisible_functions_vanish_on_the_kernel_root() {
        for name in ["kreweras", "reverse-kreweras", "double-kreweras", "simple"] {
            let model = m(name);
            let (i0, j0) = known_invariants(&model).unwrap().i0j0.unwrap();
            let f = i0.sub(&j0);
            assert!(check_divisible(&f, &model, POLE_BOUND, 8).unwrap().0);
            let r = at_kernel_root(&f, &model, 8).unwrap();
            assert!(zero_through(&r, 8), "{name}: {r}");
        }
    }

    #[test]
    fn quadrant_pairs_and_their_certificates() {
        for name in NINE {
            let model = m(name);
            let qs = series_q(&model.companion().unwrap(), 10);
            let p = i1j1_from_q(&model, &qs, 10).unwrap();
            assert!(p.check("i1j1", 10).passed(), "{name}");
            let (ok, h) = xy_decoupling_remainder(&model, 10).unwrap();
            assert!(ok, "{name}");
            let want = h.sub(&qs.mul_bl(&xy(1, 1)));
            assert!(zero_through(&p.cert.sub(&want), 10), "{name}");
        }
        // Kreweras: I₁ − J₁ = −(x/t)𝒦(1 + tyQ)
        let k = m("kreweras");
        let qs = series_q(&k.companion().unwrap(), 12);
        let p = i1j1_from_q(&k, &qs, 12).unwrap();
        let want = TSeries::one().add(&qs.mul_bl(&BiLaurent::y()).mul_t(1)).mul_bl(&BiLaurent::x()).mul_t(-1).neg();
        assert!(zero_through(&p.cert.sub(&want), 12));
        // Gessel companion of the simple model: I₁ = tQ(x,0) + x̄
        let s = m("simple");
        let qs = series_q(&s.companion().unwrap(), 8);
        let p = i1j1_from_q(&s, &qs, 8).unwrap();
        let want = at_zero(&qs, Var::Y).mul_t(1).add(&TSeries::from_bilaurent(xy(-1, 0)));
        assert!(zero_through(&p.i.sub(&want), 8));
        // m6: J₁ = −t(1+y)Q(0,y) + tQ₀₀ + y(1−ty)/(t(1+y))
        let d = m("m6");
        let qs = series_q(&d.companion().unwrap(), 8);
        let p = i1j1_from_q(&d, &qs, 8).unwrap();
        let want = at_zero(&qs, Var::X)
            .mul_bl(&(&BiLaurent::one() + &BiLaurent::y()))
            .mul_t(1)
            .neg()
            .add(&coeff_series(&qs, 0, 0).mul_t(1))
            .add(&rational("y*(1-t*y)/(t*(1+y))").unwrap());
        assert!(zero_through(&p.j.sub(&want).reduce(), 8));
    }

    #[test]
    fn decouplings() {
        for name in ["kreweras", "reverse-kreweras", "double-kreweras", "m6"] {
            let dc = check_decoupling(&m(name), 10).unwrap();
            assert!(dc.table_residual.is_zero(), "{name}");
            assert!(dc.f_residual.is_zero(), "{name}");
            assert!(dc.g_residual.is_zero(), "{name}");
            assert!(dc.divisible && dc.classic_divisible, "{name}");
        }
        let k = decoupling(&m("kreweras")).unwrap();
        assert_eq!(k.f, rational("1/t - 2*x").unwrap());
        assert!(k.h.is_zero());
        let d = decoupling(&m("m6")).unwrap();
        assert_eq!(d.h, rational("-2*y/(t*(1+y))").unwrap());
        for name in ["simple", "diagonal", "m7", "m8", "m9", "scarecrow"] {
            assert!(matches!(decoupling(&m(name)), Err(InvariantError::NoDecoupling(_))), "{name}");
        }
    }

    #[test]
    fn three_quadrant_pairs() {
        for name in ["kreweras", "reverse-kreweras", "double-kreweras", "m6"] {
            let model = m(name);
            let w = walks(&model, 11).unwrap();
            let tq = build_three_quadrant_pair(&model, &w.split.u, &w.split.d).unwrap();
            let mut pair = tq.pair.clone();
            pair.pole_bound = (3, 3);
            assert!(pair.check("three-quadrant", 10).passed(), "{name}");
            let r1 = tq.r.eval_var(Var::X, &q(1)).unwrap();
            assert!(zero_through(&r1.sub(&r_at_one_from_c(&model, &w.c).unwrap()), 10), "{name}");
        }
        // Kreweras: I = (2tU(x,0) + 2x − 1/t)²
        let k = m("kreweras");
        let w = walks(&k, 9).unwrap();
        let tq = build_three_quadrant_pair(&k, &w.split.u, &w.split.d).unwrap();
        let r = at_zero(&w.split.u, Var::Y).mul_t(1).scale(&q(2)).add(&rational("2*x - 1/t").unwrap());
        assert!(zero_through(&tq.pair.i.sub(&r.mul(&r)), 8));
    }

    #[test]
    fn reverse_kreweras_certificate_needs_pole_order_three() {
        let model = m("reverse-kreweras");
        let w = walks(&model, 6).unwrap();
        let tq = build_three_quadrant_pair(&model, &w.split.u, &w.split.d).unwrap();
        assert_eq!(pole_orders(&tq.pair.cert, 5), (3, 3));
        assert!(!tq.pair.check("three-quadrant", 5).passed());
    }

    #[test]
    fn kreweras_lemma_constant() {
        let k = m("kreweras");
        let order = 10;
        let w = walks(&k, order + 1).unwrap();
        let tq = build_three_quadrant_pair(&k, &w.split.u, &w.split.d).unwrap();
        let p1 = i1j1_from_q(&k, w.q.as_ref().unwrap(), order).unwrap();
        let four = q(4);
        let i = tq.pair.i.sub(&p1.i.scale(&four));
        let j = tq.pair.j.sub(&p1.j.scale(&four));
        let out = invariant_lemma_check(&i, &j, &k, order).unwrap();
        assert!(out.multiple_of_xy && out.constant);
        let mut b = Bindings::new();
        b.insert("V".into(), V.expansion(order + 6).unwrap());
        let e = parse_expr("2*(1-V^3)^(3/2)/V^2 + (V^6 + 12*V^3 + 8)/(4*V^2)").unwrap();
        let want = eval_expr(&e, &b, order + 1).unwrap();
        assert!(zero_through(&out.a.sub(&want), order));
        let alone = invariant_lemma_check(&p1.i, &p1.j, &k, order).unwrap();
        assert!(!alone.multiple_of_xy && !alone.constant);
    }
}
