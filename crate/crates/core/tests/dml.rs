mod common;

use common::{p, poly};
use proptest::prelude::*;
use ritt_core::algebra::BiPoly;
use ritt_core::dml::{
    expand_progressions, preperiodic_check, progression_decompose, return_set_exact, return_set_modp,
    PreperiodicOutcome, Progression, DEFAULT_HEIGHT_CAP,
};
use ritt_core::msclass::curve_period;
use ritt_core::{BivarCurve, Poly, Scalar};

const PRIMES: [u64; 14] = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];

fn point() -> impl Strategy<Value = (Scalar, Scalar)> {
    (-3i64..=3, -3i64..=3).prop_map(|(a, b)| (Scalar::from_int(a), Scalar::from_int(b)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn modp_filters_contain_the_exact_set(f1 in poly(2, 2), f2 in poly(2, 2), h in poly(1, 2), alpha in point()) {
        let c = BivarCurve::graph(&h);
        let exact = return_set_exact(&f1, &f2, alpha.clone(), &c, 10, DEFAULT_HEIGHT_CAP);
        let mut running: Option<Vec<usize>> = None;
        for pr in PRIMES {
            let Ok(set) = return_set_modp(&f1, &f2, &alpha, &c, pr, 10) else { continue };
            for i in &exact.indices {
                prop_assert!(set.contains(i), "index {} missing mod {}", i, pr);
            }
            let next: Vec<usize> = match running.take() {
                None => set,
                Some(acc) => acc.into_iter().filter(|i| set.contains(i)).collect(),
            };
            running = Some(next);
        }
        if let Some(acc) = running {
            for i in &exact.indices {
                prop_assert!(acc.contains(i));
            }
        }
    }

    #[test]
    fn progressions_roundtrip(
        gens in prop::collection::vec((0usize..20, 1usize..=6), 1..=2),
        singles in prop::collection::vec(0usize..20, 0..=3),
    ) {
        let horizon = 120;
        let mut ps: Vec<Progression> = gens.iter().map(|&(a, b)| Progression { a, b }).collect();
        ps.extend(singles.iter().map(|&a| Progression { a, b: 0 }));
        let s = expand_progressions(&ps, horizon);
        let out = progression_decompose(&s, horizon).expect("eventually periodic set");
        prop_assert_eq!(expand_progressions(&out, horizon), s);
    }

    #[test]
    fn escape_certificates_verify(f in poly(2, 3), start in 10i64..=40) {
        match preperiodic_check(&f, &Scalar::from_int(start), 30, DEFAULT_HEIGHT_CAP) {
            PreperiodicOutcome::Escape(cert) => prop_assert!(cert.verify(&f)),
            PreperiodicOutcome::Preperiodic { .. } => {
                // a start this large escapes unless f has a tiny leading coefficient
                prop_assert!(false, "unexpected preperiodic orbit from {}", start);
            }
            PreperiodicOutcome::Unknown => {}
        }
    }
}

#[test]
fn vertical_line_under_period_two_map() {
    let f1 = p(&[-1, 0, 1]);
    let f2 = p(&[1, 0, 1]);
    let c = BivarCurve::new(BiPoly::from_x(&Poly::x(f1.field()))).unwrap();
    let cert = curve_period(&c, &f1, &f2, 4).unwrap().expect("x = 0 is periodic");
    assert_eq!(cert.period, 2);
    let alpha = (Scalar::zero(), Scalar::from_int(1));
    let rs = return_set_exact(&f1, &f2, alpha, &c, 12, DEFAULT_HEIGHT_CAP);
    assert_eq!(rs.indices, (0..=12).step_by(2).collect::<Vec<_>>());
    assert_eq!(progression_decompose(&rs.indices, 12), Some(vec![Progression { a: 0, b: 2 }]));
    assert_eq!(
        preperiodic_check(&f1, &Scalar::zero(), 10, DEFAULT_HEIGHT_CAP),
        PreperiodicOutcome::Preperiodic { tail: 0, period: 2 }
    );
}
