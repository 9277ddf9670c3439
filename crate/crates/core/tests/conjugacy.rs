mod common;

use common::{linear, models, poly, q, samples};
use num_integer::Integer;
use proptest::prelude::*;
use ritt_core::algebra::roots::rational_roots;
use ritt_core::algebra::{resultant_elim, BiPoly, Var};
use ritt_core::conjugacy::{classify, is_disintegrated, linear_conjugacies, normalize, power_normal_form};
use ritt_core::decompose::poly_nth_root;
use ritt_core::{Poly, Scalar};

/// x^s P(x)^n with gcd(s, n) = 1 and P(0) ≠ 0.
fn power_family() -> impl Strategy<Value = Poly> {
    (1usize..=3, 2u32..=3, poly(1, 2))
        .prop_filter("coprime, P(0) ≠ 0", |(s, n, pp)| s.gcd(&(*n as usize)) == 1 && !pp.coeff(0).is_zero())
        .prop_map(|(s, n, pp)| &Poly::x_pow(&q(), s) * &pp.pow(n))
}

/// Rational c for which f - c has a repeated root.
fn rational_critical_values(f: &Poly) -> Vec<Scalar> {
    let k = f.field();
    let fx = &BiPoly::from_x(f) - &BiPoly::from_y(&Poly::x(k));
    let df = BiPoly::from_x(&f.derivative());
    let res = resultant_elim(&fx, &df, Var::X).unwrap();
    rational_roots(&res).unwrap_or_default().into_iter().map(Scalar::from_rational).collect()
}

fn multiplicity(g: &Poly, r: &Scalar) -> (usize, Poly) {
    let lin = Poly::new(g.field(), vec![-r.clone(), Scalar::one()]);
    let (mut m, mut rest) = (0, g.clone());
    while let Some(q) = rest.exact_div(&lin) {
        if !rest.eval(r).is_zero() {
            break;
        }
        m += 1;
        rest = q;
    }
    (m, rest)
}

/// Whether g = (x - r)^s Q^n · const for a rational r, coprime s > 0, n ≥ 2.
fn has_shifted_power_form(g: &Poly) -> bool {
    let roots = rational_roots(g).unwrap_or_default();
    roots.into_iter().map(Scalar::from_rational).any(|r| {
        let (s, rest) = multiplicity(g, &r);
        let rest = rest.monic();
        (2..=g.degree() as u32).any(|n| s.gcd(&(n as usize)) == 1 && poly_nth_root(&rest, n).is_some())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn shape_is_conjugation_invariant(f in poly(2, 5), ell in linear()) {
        let g = ell.conjugate(&f).unwrap();
        let (a, b) = (classify(&f).unwrap(), classify(&g).unwrap());
        prop_assert_eq!(a.is_cyclic, b.is_cyclic);
        prop_assert_eq!(a.dihedral_over_closure, b.dihedral_over_closure);
        prop_assert_eq!(a.disintegrated, b.disintegrated);
        prop_assert_eq!(a.conj_to_power.is_some(), b.conj_to_power.is_some());
        prop_assert_eq!(a.conj_to_pm_chebyshev.is_some(), b.conj_to_pm_chebyshev.is_some());
    }

    #[test]
    fn conjugacies_are_found_and_correct(f in poly(2, 5), ell in linear()) {
        let g = ell.conjugate(&f).unwrap();
        let found = linear_conjugacies(&f, &g).unwrap();
        prop_assert!(found.contains(&ell));
        for l in &found {
            prop_assert_eq!(&l.conjugate(&f).unwrap(), &g);
        }
    }

    #[test]
    fn normal_form_is_equivalence_invariant(f in poly(2, 5), l1 in linear(), l2 in linear()) {
        let g = l1.compose_left(&l2.compose_right(&f));
        // forms agree up to x -> cx, so their supports agree
        let support = |p: &Poly| -> Vec<usize> {
            p.coeffs().iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, _)| i).collect()
        };
        prop_assert_eq!(support(&normalize(&f).form), support(&normalize(&g).form));
        let nf = normalize(&g);
        prop_assert_eq!(nf.outer.compose_left(&nf.inner.compose_right(&g)), nf.form);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn power_rewrites_fix_zero(f in power_family(), l2 in linear()) {
        let r = classify(&f).unwrap();
        prop_assume!(!r.is_cyclic && !r.dihedral_over_closure);
        let g = l2.compose_right(&f);
        // ℓ1 = x - c up to scaling; the power form needs a repeated root, so c
        // is a critical value of g, and g shares its critical values with f
        for c in rational_critical_values(&f) {
            if has_shifted_power_form(&g.add_scalar(&-c.clone())) {
                prop_assert!(c.is_zero(), "ℓ1 = x - {} also works for {}", c, g);
            }
        }
        prop_assert!(has_shifted_power_form(&g));
    }

    #[test]
    fn power_form_with_positive_s_is_not_cyclic(f in power_family(), l1 in linear(), l2 in linear()) {
        let a = l1.compose_left(&l2.compose_right(&f));
        prop_assert!(!classify(&a).unwrap().is_cyclic);
        let pnf = power_normal_form(&a).unwrap().expect("non-cyclic");
        prop_assert!(pnf.verify(&a));
    }
}

#[test]
fn models_are_not_disintegrated() {
    for d in 2..=8 {
        for m in models(d) {
            assert!(!is_disintegrated(&m), "{m}");
            for ell in [ritt_core::LinearPoly::from_ints(&q(), 2, 1), ritt_core::LinearPoly::from_ints(&q(), -3, 5)] {
                assert!(!is_disintegrated(&ell.conjugate(&m).unwrap()));
            }
        }
    }
}

#[test]
fn iterates_of_disintegrated_maps_stay_disintegrated() {
    for f in samples() {
        assert!(is_disintegrated(&f), "{f}");
        let f2 = f.iterate(2).unwrap();
        let r2 = classify(&f2).unwrap();
        assert!(r2.disintegrated && !r2.is_cyclic);
        if f.degree() >= 3 {
            assert!(!r2.dihedral_over_closure);
        }
        let f4 = f.iterate(4).unwrap();
        if f4.degree() <= 100 {
            let r4 = classify(&f4).unwrap();
            assert!(!r4.is_cyclic && !r4.dihedral_over_closure);
        }
    }
}

#[test]
fn chebyshev_iterates_remain_dihedral() {
    let t3 = Poly::chebyshev(&q(), 3);
    let r = classify(&t3.iterate(2).unwrap()).unwrap();
    assert!(r.is_dihedral && !r.disintegrated);
}
