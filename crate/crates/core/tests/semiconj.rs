mod common;

use common::{linear, p, q};
use proptest::prelude::*;
use ritt_core::conjugacy::is_disintegrated;
use ritt_core::semiconj::{
    approx_classes, common_semiconjugate, inou_normal_form, semiconj_check, solve_eta_all, solve_p, SemiconjWitness,
};
use ritt_core::{LinearPoly, Poly, Scalar};

/// (x^c P^b, x^b, x^c P(x^b)) with P(0) ≠ 0.
fn family() -> impl Strategy<Value = (Poly, Poly, Poly, usize)> {
    (
        1usize..=3,
        2usize..=3,
        prop::collection::vec(-3i64..=3, 1..=2),
        prop_oneof![-2i64..=-1, 1i64..=2],
        prop_oneof![-2i64..=-1, 1i64..=2],
    )
        .prop_filter_map("P nonconstant", |(c, b, mut mid, c0, lc)| {
            let k = q();
            let mut coeffs = vec![c0];
            coeffs.append(&mut mid);
            coeffs.push(lc);
            coeffs.truncate(3);
            let big_p = Poly::from_ints(&k, &coeffs);
            if big_p.is_constant() {
                return None;
            }
            let xc = Poly::x_pow(&k, c);
            let f = &xc * &big_p.pow(b as u32);
            let eta = &xc * &big_p.inflate(b);
            Some((f, Poly::x_pow(&k, b), eta, b))
        })
}

fn moved(f: &Poly, pp: &Poly, eta: &Poly, l1: &LinearPoly, l2: &LinearPoly) -> (Poly, Poly, Poly) {
    let f2 = l1.inverse().conjugate(f).unwrap();
    let p2 = l1.inverse().compose_left(&l2.compose_right(pp));
    let eta2 = l2.inverse().conjugate(eta).unwrap();
    (f2, p2, eta2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn family_satisfies_identity((f, pp, eta, _b) in family()) {
        prop_assert!(semiconj_check(&f, &pp, &eta));
    }

    #[test]
    fn solvers_recover_constructed_witnesses((f, pp, eta, b) in family(), l1 in linear(), l2 in linear()) {
        let (f2, p2, eta2) = moved(&f, &pp, &eta, &l1, &l2);
        prop_assert!(semiconj_check(&f2, &p2, &eta2));
        prop_assert!(solve_eta_all(&f2, &p2).unwrap().contains(&eta2));
        let sols = solve_p(&f2, &eta2, b).unwrap().solutions;
        prop_assert!(sols.contains(&p2));
        for s in &sols {
            prop_assert!(semiconj_check(&f2, s, &eta2));
        }
        prop_assert_eq!(is_disintegrated(&f2), is_disintegrated(&eta2));
        let w = SemiconjWitness::new(f2.clone(), p2, eta2);
        if f2.degree() % b != 0 && is_disintegrated(&f2) {
            let nf = inou_normal_form(&w).unwrap();
            prop_assert!(nf.verify(&w));
            prop_assert_eq!(nf.b, b);
        }
    }

    #[test]
    fn common_witness_for_conjugates(c in 1usize..=2, tail in prop::collection::vec(-2i64..=2, 1..=2), ell in linear()) {
        let k = q();
        let mut coeffs = vec![0; c];
        coeffs.push(1);
        coeffs.extend(tail);
        let f = Poly::from_ints(&k, &coeffs);
        prop_assume!(f.degree() >= 2 && is_disintegrated(&f));
        let g = ell.conjugate(&f).unwrap();
        let search = common_semiconjugate(&f, &g, 2, 4).unwrap();
        let w = search.witness.expect("conjugate maps share a semiconjugate");
        prop_assert!(w.verify(&f, &g));
    }
}

fn grid() -> Vec<Scalar> {
    vec![
        Scalar::from_int(-2),
        Scalar::from_int(-1),
        Scalar::from_ratio(-1, 2),
        Scalar::zero(),
        Scalar::from_ratio(1, 2),
        Scalar::one(),
        Scalar::from_int(2),
    ]
}

fn brute_force(f: &Poly, eta: &Poly) -> Vec<Poly> {
    let k = q();
    let g = grid();
    let mut out = Vec::new();
    for a in &g {
        for b in &g {
            for c in &g {
                let cand = Poly::new(&k, vec![a.clone(), b.clone(), c.clone()]);
                if !cand.is_constant() && semiconj_check(f, &cand, eta) {
                    out.push(cand);
                }
            }
        }
    }
    out
}

#[test]
fn solve_p_matches_brute_force_on_grid() {
    let k = q();
    let on_grid = |x: &Poly| x.coeffs().iter().all(|c| grid().contains(c));
    let t2 = Poly::chebyshev(&k, 2);
    let t3 = Poly::chebyshev(&k, 3);
    let cases = [
        (p(&[0, 0, 1]), p(&[0, 0, 1])),
        (p(&[1, 0, 1]), p(&[2, 0, 1])),
        (p(&[1, 0, 1]), p(&[1, 0, 1])),
        (t2.clone(), t2),
        (t3.clone(), t3),
        (p(&[0, 0, 0, 1]), p(&[0, 0, 0, 1])),
    ];
    for (f, eta) in cases {
        let mut expect = brute_force(&f, &eta);
        let mut got: Vec<Poly> = solve_p(&f, &eta, 2).unwrap().solutions.into_iter().filter(on_grid).collect();
        expect.sort_by(|a, b| a.canonical_cmp(b));
        got.sort_by(|a, b| a.canonical_cmp(b));
        assert_eq!(got, expect, "f = {f}, η = {eta}");
    }
}

#[test]
fn approx_classes_split_unrelated_maps() {
    let fs = vec![p(&[1, 0, 1]), LinearPoly::from_ints(&q(), 3, 1).conjugate(&p(&[1, 0, 1])).unwrap(), p(&[3, 0, 1])];
    let part = approx_classes(&fs, 2, 4).unwrap();
    for class in &part.classes {
        assert!(class.verify(&fs));
    }
    let with_zero = part.classes.iter().find(|c| c.members.contains(&0)).unwrap();
    assert!(with_zero.members.contains(&1));
    assert!(with_zero.theta.is_some());
}
