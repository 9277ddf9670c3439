mod common;

use common::{linear, nonzero_rat, poly, rat};
use proptest::prelude::*;
use ritt_core::conjugacy::{classify, power_normal_form};
use ritt_core::symmetry::{align_iterates, gamma_group_in_field, GroupKind};
use ritt_core::{Field, LinearPoly, Poly};

/// x^k Q(x^m) over Q(ζ12), moved by random linear maps on both sides.
fn structured() -> impl Strategy<Value = Poly> {
    (
        0usize..=2,
        2usize..=4,
        prop::collection::vec(-3i64..=3, 1..=2),
        prop_oneof![-2i64..=-1, 1i64..=2],
        (nonzero_rat(), rat(), nonzero_rat(), rat()),
    )
        .prop_map(|(k, m, mut qc, lc, (a1, b1, a2, b2))| {
            let f12 = Field::cyclotomic(12).unwrap();
            qc.push(lc);
            let inner = Poly::from_ints(&f12, &qc).inflate(m);
            let a = &Poly::x_pow(&f12, k) * &inner;
            let l1 = LinearPoly::new(&f12, a1, b1);
            let l2 = LinearPoly::new(&f12, a2, b2);
            l1.compose_left(&l2.compose_right(&a))
        })
        .prop_filter("degree at least 2", |a| a.degree() >= 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn gamma_elements_are_symmetries(a in structured()) {
        let (g, closure) = gamma_group_in_field(&a).unwrap();
        prop_assert!(g.check_group());
        prop_assert!(g.verify_for(&a));
        let cyclic = classify(&a).unwrap().is_cyclic;
        prop_assert_eq!(g.kind == GroupKind::Infinite, cyclic);
        prop_assert_eq!(closure.is_none(), cyclic);
        if let (Some(order), Some(pnf)) = (closure, power_normal_form(&a).unwrap()) {
            if pnf.s >= 1 {
                prop_assert!(order < a.degree());
            }
            prop_assert_eq!(order % g.order().unwrap(), 0);
        }
    }

    #[test]
    fn gamma_transports_under_equivalence(a in poly(2, 6), l1 in linear(), l2 in linear()) {
        let b = l1.compose_left(&l2.compose_right(&a));
        let (ga, ca) = gamma_group_in_field(&a).unwrap();
        let (gb, cb) = gamma_group_in_field(&b).unwrap();
        prop_assert_eq!(ca, cb);
        prop_assert_eq!(ga.order(), gb.order());
        for e in &ga.elements {
            let moved = l2.inverse().compose(&e.ell).compose(&l2);
            prop_assert!(gb.contains(&moved));
        }
    }

    #[test]
    fn odd_maps_align_with_their_negatives(
        qc in prop::collection::vec(-3i64..=3, 1..=2),
        lc in prop_oneof![-2i64..=-1, 1i64..=2],
    ) {
        let k = Field::rationals();
        let mut qc = qc;
        qc.push(lc);
        let g = &Poly::x(&k) * &Poly::from_ints(&k, &qc).inflate(2);
        prop_assume!(!classify(&g).unwrap().is_cyclic);
        let f = -&g;
        let n = (g.degree() as u32) / 2 + 1;
        let big_l = LinearPoly::scaling(&k, ritt_core::Scalar::from_int(if n.is_multiple_of(2) { 1 } else { -1 }));
        let al = align_iterates(&f, &g, &big_l, n).unwrap();
        prop_assert!(al.verify(&f, &g));
        prop_assert!(al.big_n <= n);
        prop_assert_eq!(al.chain.len(), n as usize + 1);
    }
}

#[test]
fn gamma_of_iterate_lies_in_gamma() {
    let f12 = Field::cyclotomic(12).unwrap();
    let cases = [
        vec![0, 1, 0, 1],
        vec![0, 0, 0, 1, 0, 0, 1],
        vec![0, 1, 0, 0, 0, 1],
        vec![1, 0, 0, 1],
        vec![0, 0, 1, 0, 1],
    ];
    for c in cases {
        let f = Poly::from_ints(&f12, &c);
        let (gf, _) = gamma_group_in_field(&f).unwrap();
        if gf.kind == GroupKind::Infinite {
            continue;
        }
        for n in 2..=3 {
            let fnn = f.iterate(n).unwrap();
            if fnn.degree() > 150 {
                continue;
            }
            let (gn, _) = gamma_group_in_field(&fnn).unwrap();
            for e in &gn.elements {
                assert!(gf.contains(&e.ell), "{} in Γ({f}^{n})", e.ell.to_poly());
            }
        }
    }
}
