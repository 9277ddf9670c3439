#![allow(dead_code)]

use proptest::prelude::*;
use ritt_core::{Field, LinearPoly, Poly, Scalar};

pub fn q() -> Field {
    Field::rationals()
}

pub fn p(c: &[i64]) -> Poly {
    Poly::from_ints(&q(), c)
}

pub fn rat() -> impl Strategy<Value = Scalar> {
    (-6i64..=6, 1i64..=3).prop_map(|(n, d)| Scalar::from_ratio(n, d))
}

pub fn nonzero_rat() -> impl Strategy<Value = Scalar> {
    (prop_oneof![-6i64..=-1, 1i64..=6], 1i64..=3).prop_map(|(n, d)| Scalar::from_ratio(n, d))
}

/// Integer-coefficient polynomial with degree in [lo, hi].
pub fn poly(lo: usize, hi: usize) -> impl Strategy<Value = Poly> {
    (lo..=hi).prop_flat_map(|d| {
        (
            prop::collection::vec(-4i64..=4, d),
            prop_oneof![-3i64..=-1, 1i64..=3],
        )
            .prop_map(|(mut c, lc)| {
                c.push(lc);
                p(&c)
            })
    })
}

pub fn linear() -> impl Strategy<Value = LinearPoly> {
    (nonzero_rat(), rat()).prop_map(|(a, b)| LinearPoly::new(&q(), a, b))
}

/// x^δ, ±T_δ: the non-disintegrated models.
pub fn models(d: usize) -> Vec<Poly> {
    let t = Poly::chebyshev(&q(), d);
    vec![Poly::x_pow(&q(), d), t.clone(), -&t]
}

pub fn samples() -> Vec<Poly> {
    vec![p(&[1, 0, 1]), p(&[0, 1, 0, 1]), p(&[7, 0, 1, 1])]
}
