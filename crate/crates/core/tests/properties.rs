//! Randomised checks of the series algebra and of the invariant machinery.

use std::sync::OnceLock;

use conewalk::algebra::{q, qf, BiLaurent, Q, TSeries};
use conewalk::enumerate::{count_walks, origin, recompose, series_c, split_ud, Region};
use conewalk::invariants::{first_failure, i1j1_from_q, rational_pair, InvariantPair};
use conewalk::models::{Splits, StepSet, CATALOG, NINE};
use conewalk::solve::{eval_poly, A1, M, N, P1, P2, V, W, Z};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

const ORDER: i64 = 12;

fn zero_through(s: &TSeries, order: i64) -> bool {
    first_failure(&s.truncate(order + 1), order).is_none()
}

fn rat() -> impl Strategy<Value = Q> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| qf(n, d))
}

fn nonzero_rat() -> impl Strategy<Value = Q> {
    (1i64..=6, 1i64..=4, any::<bool>()).prop_map(|(n, d, neg)| qf(if neg { -n } else { n }, d))
}

fn laurent() -> impl Strategy<Value = BiLaurent> {
    prop::collection::vec((-2i32..=2, -2i32..=2, rat()), 0..5).prop_map(BiLaurent::from_terms)
}

/// Series in `t` with Laurent coefficients, known to `t^order`.
fn series(order: i64) -> impl Strategy<Value = TSeries> {
    prop::collection::vec(laurent(), order as usize).prop_map(move |c| TSeries::from_t_coeffs(c, Some(order)))
}

/// A series whose `t^0` coefficient is a nonzero monomial.
fn unit(order: i64, positive: bool) -> impl Strategy<Value = TSeries> {
    (-2i32..=2, -2i32..=2, nonzero_rat(), series(order)).prop_map(move |(i, j, c, s)| {
        let c = if positive { c.abs() } else { c };
        let lead = TSeries::from_bilaurent(BiLaurent::monomial(i, j, c));
        lead + s.mul_t(1).truncate(order)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in series(ORDER), b in series(ORDER), c in series(ORDER)) {
        prop_assert!(zero_through(&(&a + &b - (&b + &a)), ORDER - 1));
        prop_assert!(zero_through(&(a.mul(&b) - b.mul(&a)), ORDER - 1));
        prop_assert!(zero_through(&(a.mul(&b).mul(&c) - a.mul(&b.mul(&c))), ORDER - 1));
        prop_assert!(zero_through(&(a.mul(&(&b + &c)) - (a.mul(&b) + a.mul(&c))), ORDER - 1));
        prop_assert!(zero_through(&(a.mul(&TSeries::one()) - a.clone()), ORDER - 1));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn sqrt_round_trip(a in unit(ORDER, true)) {
        let s = a.mul(&a);
        let r = s.sqrt().unwrap();
        prop_assert!(zero_through(&(r - a), ORDER - 1));
    }

    #[test]
    fn ramification_round_trip(a in series(8), r in 1u32..=6) {
        let l = a.lift(r);
        prop_assert_eq!(l.ram(), r);
        prop_assert_eq!(l.restrict(), a.restrict());
    }

    #[test]
    fn split_recomposes_the_step_polynomial(k in 0usize..CATALOG.len()) {
        let m = StepSet::named(CATALOG[k]).unwrap();
        let s = m.splits();
        prop_assert_eq!(Splits::recompose_h(&s.h), m.poly());
        prop_assert_eq!(Splits::recompose_v(&s.v), m.poly());
        prop_assert!(m.lemma_square_residual().is_zero());
    }

    #[test]
    fn companion_is_an_involution_on_kreweras(_k in 0..1) {
        let k = StepSet::named("kreweras").unwrap();
        prop_assert_eq!(k.companion().unwrap().companion().unwrap().poly(), k.poly());
    }

    #[test]
    fn regions_are_nested(k in 0usize..CATALOG.len(), n in 0usize..9) {
        let m = StepSet::named(CATALOG[k]).unwrap();
        let qt = count_walks(&m, Region::Quadrant, &origin(), n);
        let ct = count_walks(&m, Region::ThreeQuadrant, &origin(), n);
        let pt = count_walks(&m, Region::FullPlane, &origin(), n);
        for len in 0..=n {
            for ((i, j), c) in qt.layer(len) {
                prop_assert!(c <= ct.count(len, i, j));
            }
            for ((i, j), c) in ct.layer(len) {
                prop_assert!(c <= pt.count(len, i, j));
                if m.is_symmetric() {
                    prop_assert_eq!(c.clone(), ct.count(len, j, i));
                }
            }
            prop_assert!(ct.total(len) <= q(m.len() as i64).pow(len as i32));
        }
    }

    #[test]
    fn three_quadrant_split_round_trip(k in 0usize..NINE.len(), n in 1usize..9) {
        let m = StepSet::named(NINE[k]).unwrap();
        let c = series_c(&m, n);
        let s = split_ud(&c, &m).unwrap();
        prop_assert!(zero_through(&(recompose(&s, &m).unwrap() - c), n as i64));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn invert_round_trip(a in unit(ORDER, false)) {
        let b = a.invert().unwrap();
        prop_assert!(zero_through(&(a.mul(&b) - TSeries::one()), ORDER - 1));
    }
}

const PAIR_ORDER: i64 = 10;

/// Catalogued pairs: rational ones where they exist and `(I₁, J₁)` for the nine.
fn catalog_pairs() -> &'static Vec<Vec<InvariantPair>> {
    static PAIRS: OnceLock<Vec<Vec<InvariantPair>>> = OnceLock::new();
    PAIRS.get_or_init(|| {
        NINE.iter()
            .map(|name| {
                let m = StepSet::named(name).unwrap();
                let qs = conewalk::enumerate::series_q(&m.companion().unwrap(), PAIR_ORDER as usize + 2);
                let mut v = vec![i1j1_from_q(&m, &qs, PAIR_ORDER).unwrap()];
                v.extend(rational_pair(&m, PAIR_ORDER).ok());
                v
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn invariant_pairs_close_under_sums_and_products(
        k in 0usize..NINE.len(),
        a in 0usize..2,
        b in 0usize..2,
        ca in nonzero_rat(),
        cb in nonzero_rat(),
    ) {
        let pairs = &catalog_pairs()[k];
        let p = pairs[a % pairs.len()].scale(&TSeries::constant(ca));
        let r = pairs[b % pairs.len()].scale(&TSeries::constant(cb));
        let order = PAIR_ORDER - 2;
        prop_assert!(p.sum(&r).check("sum", order).passed(), "{}", NINE[k]);
        prop_assert!(p.product(&r, order).check("product", order).passed(), "{}", NINE[k]);
    }
}

#[test]
fn kreweras_family_cross_identities() {
    let o = 24;
    let v = V.expansion(o).unwrap();
    let w = W.expansion(o).unwrap();
    let z = Z.expansion(o).unwrap();
    let one = TSeries::one();
    assert!(zero_through(&(w.scale(&q(4)).mul(&(&one - &w)) - v.powu(3)), o - 1));
    assert!(zero_through(&(z.scale(&q(2)) - w.mul(&(&one + &z.mul(&z)))), o - 1));
    assert!(zero_through(&((&one - &w.scale(&q(2))).powu(2) - (&one - &v.powu(3))), o - 1));
}

#[test]
fn double_kreweras_series_identities() {
    let o = 20;
    let m = M.expansion(o).unwrap();
    let n = N.expansion(o).unwrap();
    let one = TSeries::one();
    assert!(zero_through(&(m.mul(&(&one - &n).powu(2)) - n), o - 1));
    let a1 = A1.expansion(o).unwrap();
    assert!(zero_through(&eval_poly(&A1.equation(o).unwrap(), &a1), o - 1));
    let p1 = P1.expansion(o).unwrap();
    let p2 = P2.expansion(o).unwrap();
    let lhs = p2.mul(&p2).mul(&(&one + &p1).powu(2));
    let rhs = (&one + &m.scale(&q(4))).powu(3).mul(&(&one - &p1).powu(2));
    assert!(zero_through(&(lhs - rhs), o - 1));
    assert!(!a1.coeff(0, 0, 0).unwrap().is_zero());
}
