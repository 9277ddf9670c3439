//! Dense helpers over Q[z] used to realize cyclotomic fields as quotients.
//! Vectors are ascending-degree and kept trimmed (no trailing zeros).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub(crate) type QVec = Vec<BigRational>;

pub(crate) fn trim(v: &mut QVec) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

pub(crate) fn add(a: &[BigRational], b: &[BigRational]) -> QVec {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x + y,
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        };
        out.push(x);
    }
    trim(&mut out);
    out
}

pub(crate) fn neg(a: &[BigRational]) -> QVec {
    a.iter().map(|c| -c).collect()
}

pub(crate) fn sub(a: &[BigRational], b: &[BigRational]) -> QVec {
    add(a, &neg(b))
}

pub(crate) fn mul(a: &[BigRational], b: &[BigRational]) -> QVec {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

/// Remainder modulo a monic polynomial.
pub(crate) fn rem_monic(mut a: QVec, modulus: &[BigRational]) -> QVec {
    let d = modulus.len() - 1;
    debug_assert!(modulus[d].is_one());
    if a.len() <= d {
        return a;
    }
    for top in (d..a.len()).rev() {
        let c = std::mem::replace(&mut a[top], BigRational::zero());
        if c.is_zero() {
            continue;
        }
        for (j, m) in modulus.iter().take(d).enumerate() {
            if !m.is_zero() {
                a[top - d + j] -= &c * m;
            }
        }
    }
    a.truncate(d);
    trim(&mut a);
    a
}

pub(crate) fn div_rem(a: &[BigRational], b: &[BigRational]) -> (QVec, QVec) {
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut r: QVec = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead_inv = b[db].recip();
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() * &lead_inv;
        for (j, y) in b.iter().enumerate() {
            r[shift + j] -= &c * y;
        }
        q[shift] = c;
        r.pop();
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

/// Returns `s` with `a * s == gcd(a, m)` modulo `m`, together with the monic gcd.
pub(crate) fn ext_gcd(a: &[BigRational], m: &[BigRational]) -> (QVec, QVec) {
    let mut r0: QVec = m.to_vec();
    let mut r1: QVec = a.to_vec();
    trim(&mut r0);
    trim(&mut r1);
    let mut s0: QVec = Vec::new();
    let mut s1: QVec = vec![BigRational::one()];
    while !r1.is_empty() {
        let (q, r) = div_rem(&r0, &r1);
        let s = sub(&s0, &mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    let lead = r0.last().cloned().unwrap_or_else(BigRational::one);
    let inv = lead.recip();
    let g = r0.iter().map(|c| c * &inv).collect();
    let s = s0.iter().map(|c| c * &inv).collect();
    (s, g)
}

/// The m-th cyclotomic polynomial with integer coefficients, ascending.
pub(crate) fn cyclotomic_poly(m: u32) -> Vec<BigInt> {
    // x^m - 1 divided by every Phi_d with d | m, d < m.
    let mut num: Vec<BigInt> = vec![BigInt::zero(); m as usize + 1];
    num[0] = BigInt::from(-1);
    num[m as usize] = BigInt::one();
    for d in 1..m {
        if m.is_multiple_of(d) {
            let div = cyclotomic_poly(d);
            num = exact_div_monic_int(&num, &div);
        }
    }
    num
}

fn exact_div_monic_int(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![BigInt::zero(); a.len() - db];
    for shift in (0..q.len()).rev() {
        let c = r[shift + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[shift + j] -= &c * y;
        }
        q[shift] = c;
    }
    debug_assert!(r.iter().all(|c| c.is_zero()));
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_poly(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_poly(2), ints(&[1, 1]));
        assert_eq!(cyclotomic_poly(3), ints(&[1, 1, 1]));
        assert_eq!(cyclotomic_poly(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_poly(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_poly(7), ints(&[1, 1, 1, 1, 1, 1, 1]));
        assert_eq!(cyclotomic_poly(12), ints(&[1, 0, -1, 0, 1]));
        assert_eq!(cyclotomic_poly(15).len(), 9);
    }
}
