mod common;

use common::{p, poly, q};
use proptest::prelude::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use ritt_core::algebra::roots::rational_roots;
use ritt_core::algebra::{BiPoly, Field};
use ritt_core::{Poly, Scalar};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn composition_is_associative(f in poly(1, 4), g in poly(1, 4), h in poly(1, 4)) {
        let left = f.compose(&g.compose(&h).unwrap()).unwrap();
        let right = f.compose(&g).unwrap().compose(&h).unwrap();
        prop_assert_eq!(left.degree(), f.degree() * g.degree() * h.degree());
        prop_assert_eq!(left, right);
    }

    #[test]
    fn cyclotomic_arithmetic_is_canonical(
        m in prop::sample::select(vec![3u32, 4, 5, 7, 8, 9, 12, 15]),
        a in prop::collection::vec(-5i64..=5, 1..10),
        b in prop::collection::vec(-5i64..=5, 1..10),
    ) {
        let k = Field::cyclotomic(m).unwrap();
        let z = Scalar::zeta(&k);
        prop_assert!(z.pow(m as i64).is_one());
        for j in 1..m {
            if m % j == 0 {
                prop_assert!(!z.pow(j as i64).is_one());
            }
        }
        let elem = |c: &[i64]| c.iter().rev().fold(Scalar::zero(), |acc, &x| &(&acc * &z) + &Scalar::from_int(x));
        let (x, y) = (elem(&a), elem(&b));
        for v in [&x + &y, &x * &y, &x - &y] {
            prop_assert!(v.z_coeffs().len() <= k.degree());
            prop_assert_eq!(Scalar::from_z_coeffs(&k, v.z_coeffs()), v.clone());
        }
        if let Some(inv) = x.inv() {
            prop_assert!((&x * &inv).is_one());
        }
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
    }

    #[test]
    fn rational_roots_of_known_products(
        roots in prop::collection::vec((-12i64..=12, 1i64..=6), 0..=4),
        scale in 1i64..=5,
    ) {
        let mut f = p(&[1, 0, 1]).scale(&Scalar::from_int(scale));
        let mut expect: Vec<BigRational> = Vec::new();
        for &(n, d) in &roots {
            f = &f * &p(&[-n, d]);
            expect.push(BigRational::new(BigInt::from(n), BigInt::from(d)));
        }
        expect.sort();
        expect.dedup();
        prop_assert_eq!(rational_roots(&f).unwrap(), expect);
    }
}

#[test]
fn chebyshev_composition_law() {
    let k = q();
    for m in 2..=8 {
        for n in 2..=8 {
            let lhs = Poly::chebyshev(&k, m).compose(&Poly::chebyshev(&k, n)).unwrap();
            assert_eq!(lhs, Poly::chebyshev(&k, m * n), "T_{m} o T_{n}");
        }
    }
}

#[test]
fn chebyshev_defining_identity() {
    let k = q();
    for t in [Scalar::from_int(2), Scalar::from_int(3), Scalar::from_ratio(1, 2), Scalar::from_ratio(-5, 3)] {
        let s = &t + &t.inv().unwrap();
        for d in 1..=8 {
            let lhs = Poly::chebyshev(&k, d).eval(&s);
            assert_eq!(lhs, &t.pow(d as i64) + &t.pow(-(d as i64)), "T_{d} at {t}");
        }
    }
}

#[test]
fn squarefree_part_removes_repeats() {
    let k = q();
    let line = &BiPoly::from_y(&Poly::x(&k)) - &BiPoly::from_x(&p(&[1, 1]));
    let sq = &line * &line;
    let sf = sq.squarefree_part();
    assert_eq!(sf.total_degree(), 1);
    assert!(sf.exact_div(&line).is_some());
}
