mod common;

use common::{linear, p, poly, rat, samples};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use ritt_core::msclass::{
    bound_c, closed_form_c2, curve_image, curve_period, ms_diagonal_curves, search_periodic_graph_curves,
};
use ritt_core::BivarCurve;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn image_contains_pushed_points(h in poly(1, 2), f in poly(2, 3), g in poly(2, 3), pts in prop::collection::vec(rat(), 20)) {
        let c = BivarCurve::graph(&h);
        let img = curve_image(&c, &f, &g).unwrap();
        for a in &pts {
            let b = h.eval(a);
            prop_assert!(c.contains(a, &b));
            prop_assert!(img.contains(&f.eval(a), &g.eval(&b)));
        }
    }

    #[test]
    fn conjugacy_graph_is_invariant(f in poly(2, 3), ell in linear()) {
        let g = ell.conjugate(&f).unwrap();
        let c = BivarCurve::graph(&ell.to_poly());
        let cert = curve_period(&c, &f, &g, 3).unwrap().expect("graph of a conjugacy is invariant");
        prop_assert_eq!(cert.period, 1);
        prop_assert!(cert.verify(&f, &g));
    }
}

#[test]
fn diagonal_curves_have_compatible_periods() {
    for f in samples() {
        let found = ms_diagonal_curves(&f, 4, 2).unwrap();
        assert!(found.iter().any(|d| d.g == p(&[0, 1])), "diagonal missing for {f}");
        for d in &found {
            assert!(d.certificate.verify(&f, &f));
            let per = d.certificate.period;
            assert!(per == 1 || d.commuting_iterate % per == 0, "{f}: period {per}, n = {}", d.commuting_iterate);
        }
    }
}

#[test]
fn c2_matches_closed_form() {
    for d in 2..=4 {
        assert_eq!(bound_c(d, 2).unwrap().exact(), Some(&closed_form_c2(d)));
    }
    assert_eq!(closed_form_c2(2), BigRational::from_integer(BigInt::from(1u64 << 31)));
}

#[test]
fn unrelated_quadratics_have_no_graph_curves() {
    let found = search_periodic_graph_curves(&p(&[1, 0, 1]), &p(&[3, 0, 1]), 2, 3).unwrap();
    assert!(found.is_empty(), "{:?}", found.iter().map(|c| c.curve.to_string()).collect::<Vec<_>>());
}
