mod common;

use common::{linear, p, poly, q};
use proptest::prelude::*;
use ritt_core::conjugacy::power_normal_form;
use ritt_core::decompose::{
    complete_decompositions, decompose_power_form, engstrom_refine, left_factor_solve, poly_nth_root,
    right_factor_solve,
};
use ritt_core::Poly;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn right_then_left_factor_roundtrip(g in poly(2, 4), h in poly(1, 2)) {
        let f = g.compose(&h).unwrap();
        let hs = right_factor_solve(&f, &g).unwrap();
        prop_assert!(hs.contains(&h));
        for h2 in &hs {
            prop_assert_eq!(&g.compose(h2).unwrap(), &f);
        }
        prop_assert_eq!(left_factor_solve(&f, &h).unwrap(), Some(g));
    }

    #[test]
    fn engstrom_on_split_chains(
        u1 in poly(1, 3), u2 in poly(1, 3), u3 in poly(1, 3), ell in linear()
    ) {
        let a = ell.compose_right(&u1.compose(&u2).unwrap());
        let b = ell.inverse().compose_left(&u3);
        let c = u1.clone();
        let d = u2.compose(&u3).unwrap();
        let cert = engstrom_refine(&a, &b, &c, &d).unwrap();
        prop_assert!(cert.verify(&a, &b, &c, &d));
    }

    #[test]
    fn decompositions_recompose(g in poly(2, 3), h in poly(2, 3)) {
        let f = g.compose(&h).unwrap();
        let chains = complete_decompositions(&f).unwrap();
        prop_assert!(!chains.is_empty());
        for ch in &chains {
            prop_assert_eq!(&ch.recompose(), &f);
            prop_assert!(ch.factors.iter().all(|x| x.degree() >= 2));
        }
        prop_assert!(chains.iter().any(|ch| ch.factors.len() >= 2));
    }

    #[test]
    fn nth_root_of_power(base in poly(1, 3), n in 2u32..=4) {
        let r = poly_nth_root(&base.pow(n), n).unwrap();
        prop_assert_eq!(r.pow(n), base.pow(n));
    }

    #[test]
    fn power_normal_form_verifies(f in poly(2, 6), l1 in linear(), l2 in linear()) {
        let g = l1.compose_left(&l2.compose_right(&f));
        if let Some(pnf) = power_normal_form(&g).unwrap() {
            prop_assert!(pnf.verify(&g));
        }
    }
}

#[test]
fn power_form_split_examples() {
    let k = q();
    // A∘B = x^s P(x)^n with A = x·(x+1)^2, B = x·(x−1)^2, n = 2
    let a = &Poly::x(&k) * &p(&[1, 1]).pow(2);
    let b = &Poly::x(&k) * &p(&[-1, 1]).pow(2);
    let split = decompose_power_form(&a, &b, 1, 2).unwrap();
    assert!(split.verify(&a, &b, 2));
}

#[test]
fn chebyshev_has_both_orderings() {
    let k = q();
    let t6 = Poly::chebyshev(&k, 6);
    let chains = complete_decompositions(&t6).unwrap();
    let degs: Vec<Vec<usize>> = chains.iter().map(|c| c.degrees()).collect();
    assert!(degs.contains(&vec![2, 3]));
    assert!(degs.contains(&vec![3, 2]));
}
