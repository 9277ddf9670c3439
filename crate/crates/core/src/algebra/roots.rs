//! In-field root extraction: n-th roots, small power systems, rational roots.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::field::Field;
use super::poly::Poly;
use super::scalar::Scalar;
use crate::error::ExtensionHint;

/// Result of solving `t^n = c` in a field.
#[derive(Debug, Clone)]
pub struct RootSearch {
    pub roots: Vec<Scalar>,
    /// Set when there are no roots in the field.
    pub hint: Option<ExtensionHint>,
}

fn exact_nth_root_int(v: &BigInt, n: u32) -> Option<BigInt> {
    if v.is_negative() {
        if n.is_multiple_of(2) {
            return None;
        }
        return exact_nth_root_int(&-v, n).map(|r| -r);
    }
    let r = v.nth_root(n);
    (num_traits::pow(r.clone(), n as usize) == *v).then_some(r)
}

/// Positive rational r with r^n = v, for v > 0.
fn exact_nth_root_rat(v: &BigRational, n: u32) -> Option<BigRational> {
    debug_assert!(v.is_positive());
    let num = exact_nth_root_int(v.numer(), n)?;
    let den = exact_nth_root_int(v.denom(), n)?;
    Some(BigRational::new(num, den))
}

fn unit_powers(field: &Field) -> Vec<Scalar> {
    let w = field.unit_order();
    let gen = Scalar::root_of_unity(field, 1);
    let mut out = Vec::with_capacity(w as usize);
    let mut cur = Scalar::one();
    for _ in 0..w {
        out.push(cur.clone());
        cur = &cur * &gen;
    }
    out
}

/// Writes c = q * w^k with q rational positive, w the field's unit generator.
fn split_rational_unit(field: &Field, c: &Scalar, powers: &[Scalar]) -> Option<(BigRational, usize)> {
    if let Some(r) = c.as_rational() {
        let k = if r.is_negative() { powers.len() / 2 } else { 0 };
        return Some((r.abs(), k));
    }
    let w = powers.len() as u32;
    let cw = c.pow(w as i64);
    let qw = cw.as_rational()?.clone();
    if !qw.is_positive() {
        return None;
    }
    let q = exact_nth_root_rat(&qw, w)?;
    let unit = c / &Scalar::from_rational(q.clone());
    let _ = field;
    powers.iter().position(|p| *p == unit).map(|k| (q, k))
}

fn sort_roots(roots: &mut [Scalar]) {
    roots.sort_by(|a, b| match (a.as_rational(), b.as_rational()) {
        (Some(x), Some(y)) => y.cmp(x),
        _ => a.canonical_cmp(b),
    });
}

/// Smallest m such that Q(zeta_m) contains an n-th root of exp(2 pi i k / w).
fn unit_root_field_order(k: usize, w: usize, n: usize) -> u32 {
    let big = w * n;
    let mut best = usize::MAX;
    for j in 0..n {
        let num = k + j * w;
        let order = big / num.gcd(&big);
        best = best.min(order);
    }
    let m = if best % 4 == 2 { best / 2 } else { best };
    m.max(1) as u32
}

/// Order of the smallest cyclotomic field containing both `field` and Q(zeta_m).
fn joint_order(field: &Field, m: u32) -> u32 {
    let l = m.lcm(&field.order());
    if l % 4 == 2 {
        l / 2
    } else {
        l
    }
}

/// Conductor of Q(sqrt(c)) for rational c, when the factorization is cheap.
fn quadratic_conductor(c: &BigRational) -> Option<u32> {
    let v = c.numer() * c.denom();
    let mut m = if v.is_negative() { -1i64 } else { 1 };
    for (p, e) in factor_small(&v)? {
        if e % 2 == 1 {
            m = m.checked_mul(i64::try_from(&p).ok()?)?;
        }
    }
    let d = if m.rem_euclid(4) == 1 { m.abs() } else { 4 * m.abs() };
    u32::try_from(d).ok().filter(|&d| d > 2)
}

fn legendre(a: u64, p: u64) -> i64 {
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}

/// A square root of the rational c inside a cyclotomic field, built from
/// quadratic Gauss sums.
fn sqrt_rational_in_field(field: &Field, c: &BigRational) -> Option<Scalar> {
    if field.is_rational() || c.is_zero() {
        return None;
    }
    let m = field.order() as u64;
    let z = Scalar::zeta(field);
    let v = c.numer() * c.denom();
    let mut rest = if v.is_negative() { -1i64 } else { 1 };
    let mut acc = Scalar::one();
    for (p, e) in factor_small(&v)? {
        if e % 2 == 0 {
            continue;
        }
        let p = u64::try_from(&p).ok()?;
        if p == 2 {
            rest *= 2;
            continue;
        }
        if !m.is_multiple_of(p) {
            return None;
        }
        let zp = z.pow((m / p) as i64);
        let mut gauss = Scalar::zero();
        for a in 1..p {
            let term = zp.pow(a as i64);
            gauss = if legendre(a, p) == 1 { &gauss + &term } else { &gauss - &term };
        }
        // gauss^2 = p* = (-1)^((p-1)/2) p
        if p % 4 == 3 {
            rest = -rest;
        }
        acc = &acc * &gauss;
    }
    let extra = match rest {
        1 => Scalar::one(),
        -1 if m.is_multiple_of(4) => z.pow((m / 4) as i64),
        2 | -2 if m.is_multiple_of(8) => {
            let z8 = z.pow((m / 8) as i64);
            if rest == 2 {
                &z8 + &z8.pow(7)
            } else {
                &z8 + &z8.pow(3)
            }
        }
        _ => return None,
    };
    let root = &acc * &extra;
    // Rescale from the squarefree kernel to c.
    let kernel_sq = root.pow(2);
    let ratio = (&Scalar::from_rational(c.clone()) / &kernel_sq).as_rational()?.clone();
    if !ratio.is_positive() {
        return None;
    }
    let scale = exact_nth_root_rat(&ratio, 2)?;
    let out = &root * &Scalar::from_rational(scale);
    (out.pow(2) == Scalar::from_rational(c.clone())).then_some(out)
}

/// All roots of `t^n = c` in `field`.
///
/// Exact for rational `c` and for `c` of the form rational times root of
/// unity; other cyclotomic values are reported as having no in-field root.
pub fn nth_roots(field: &Field, c: &Scalar, n: u32) -> RootSearch {
    assert!(n >= 1);
    if c.is_zero() {
        return RootSearch {
            roots: vec![Scalar::zero()],
            hint: None,
        };
    }
    if n == 1 {
        return RootSearch {
            roots: vec![c.clone()],
            hint: None,
        };
    }
    let equation = format!("t^{n} = {c}");
    let powers = unit_powers(field);
    let w = powers.len();
    let Some((q, k)) = split_rational_unit(field, c, &powers) else {
        return RootSearch {
            roots: Vec::new(),
            hint: Some(ExtensionHint::new(equation, None)),
        };
    };
    let nn = n as usize;
    let mut bases = Vec::new();
    if let Some(r) = exact_nth_root_rat(&q, n) {
        bases.push(Scalar::from_rational(r));
    }
    if n == 2 && bases.is_empty() {
        for sq in [q.clone(), -q.clone()] {
            bases.extend(sqrt_rational_in_field(field, &sq));
        }
    }
    let mut roots: Vec<Scalar> = Vec::new();
    for r in &bases {
        let rn = r.pow(n as i64);
        for j in 0..w {
            if &rn * &powers[(j * nn) % w] == *c {
                let t = r * &powers[j];
                if !roots.contains(&t) {
                    roots.push(t);
                }
            }
        }
    }
    sort_roots(&mut roots);
    let hint = if !roots.is_empty() {
        None
    } else if bases.is_empty() {
        let order = match c.as_rational() {
            Some(cr) if n == 2 => quadratic_conductor(cr).map(|d| joint_order(field, d)),
            _ => None,
        };
        Some(ExtensionHint::new(equation, order))
    } else {
        Some(ExtensionHint::new(
            equation,
            Some(joint_order(field, unit_root_field_order(k, w, nn))),
        ))
    };
    RootSearch { roots, hint }
}

/// Outcome of solving a^{e_i} = r_i for a nonzero a.
#[derive(Debug, Clone)]
pub enum PowerSolve {
    /// No equations: any nonzero a works.
    Unconstrained,
    /// No solution even over the algebraic closure.
    Inconsistent,
    Solutions(Vec<Scalar>),
    /// Solvable over the closure, but not in the field.
    NeedsExtension(ExtensionHint),
}

fn ext_gcd_i64(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd_i64(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

pub fn solve_power_system(field: &Field, eqs: &[(u32, Scalar)]) -> PowerSolve {
    let eqs: Vec<&(u32, Scalar)> = eqs.iter().filter(|(e, _)| *e > 0).collect();
    if eqs.is_empty() {
        return PowerSolve::Unconstrained;
    }
    if eqs.iter().any(|(_, r)| r.is_zero()) {
        return PowerSolve::Inconsistent;
    }
    // Combine into a^g = c via Bezout coefficients.
    let mut g = eqs[0].0 as i64;
    let mut c = eqs[0].1.clone();
    for (e, r) in eqs.iter().skip(1) {
        let (ng, u, v) = ext_gcd_i64(g, *e as i64);
        c = &c.pow(u) * &r.pow(v);
        g = ng;
    }
    for (e, r) in &eqs {
        if c.pow(*e as i64 / g) != *r {
            return PowerSolve::Inconsistent;
        }
    }
    let search = nth_roots(field, &c, g as u32);
    if search.roots.is_empty() {
        PowerSolve::NeedsExtension(search.hint.expect("hint accompanies empty root list"))
    } else {
        PowerSolve::Solutions(search.roots)
    }
}

const TRIAL_LIMIT: u64 = 1_000_000;
const MAX_DIVISORS: usize = 4096;

fn factor_small(n: &BigInt) -> Option<Vec<(BigInt, u32)>> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return None;
    }
    let mut p = 2u64;
    while p <= TRIAL_LIMIT {
        let bp = BigInt::from(p);
        if &bp * &bp > n {
            break;
        }
        let mut e = 0;
        while (&n % &bp).is_zero() {
            n /= &bp;
            e += 1;
        }
        if e > 0 {
            out.push((bp, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > BigInt::one() {
        let bound = BigInt::from(TRIAL_LIMIT);
        if n > &bound * &bound {
            return None;
        }
        out.push((n, 1));
    }
    Some(out)
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let fac = factor_small(n)?;
    let mut divs = vec![BigInt::one()];
    for (p, e) in fac {
        let mut next = Vec::new();
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
        if divs.len() > MAX_DIVISORS {
            return None;
        }
    }
    Some(divs)
}

/// Distinct rational roots of a polynomial with rational coefficients, sorted
/// ascending. `None` when the coefficients are not rational or the candidate
/// set is too large to enumerate.
pub fn rational_roots(f: &Poly) -> Option<Vec<BigRational>> {
    if f.is_zero() {
        return None;
    }
    let mut rats: Vec<BigRational> = Vec::new();
    for c in f.coeffs() {
        rats.push(c.as_rational()?.clone());
    }
    let mut out = Vec::new();
    let v = rats.iter().position(|c| !c.is_zero()).unwrap_or(0);
    if v > 0 {
        out.push(BigRational::zero());
    }
    let rats = &rats[v..];
    if rats.len() > 1 {
        let lcm = rats
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = rats
            .iter()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let nums = divisors(&ints[0])?;
        let dens = divisors(ints.last().unwrap())?;
        // F = (qx - p)G with G integral, so (q - p) | F(1) and (q + p) | F(-1)
        let at_one: BigInt = ints.iter().sum();
        let at_minus_one: BigInt = ints
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 0 { c.clone() } else { -c })
            .sum();
        let divides = |d: &BigInt, n: &BigInt| n.is_zero() || (!d.is_zero() && (n % d).is_zero());
        for q in &dens {
            for p in &nums {
                if !p.gcd(q).is_one() {
                    continue;
                }
                for sign in [Sign::Plus, Sign::Minus] {
                    let p = BigInt::from_biguint(sign, p.magnitude().clone());
                    if !divides(&(q - &p), &at_one) || !divides(&(q + &p), &at_minus_one) {
                        continue;
                    }
                    // q^deg F(p/q), in integers
                    let mut acc = BigInt::zero();
                    let mut qpow = BigInt::one();
                    for c in ints.iter().rev() {
                        acc = acc * &p + c * &qpow;
                        qpow *= q;
                    }
                    if acc.is_zero() {
                        out.push(BigRational::new(p, q.clone()));
                    }
                }
            }
        }
    }
    out.sort();
    out.dedup();
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_square_roots() {
        let q = Field::rationals();
        let r = nth_roots(&q, &Scalar::from_ratio(9, 4), 2);
        assert_eq!(r.roots, vec![Scalar::from_ratio(3, 2), Scalar::from_ratio(-3, 2)]);
        let r = nth_roots(&q, &Scalar::from_int(-1), 2);
        assert!(r.roots.is_empty());
        assert_eq!(r.hint.unwrap().cyclotomic_order, Some(4));
        let r = nth_roots(&q, &Scalar::from_int(2), 2);
        assert!(r.roots.is_empty());
        assert_eq!(r.hint.unwrap().cyclotomic_order, Some(8));
        let r = nth_roots(&q, &Scalar::from_ratio(-1, 3), 2);
        assert_eq!(r.hint.unwrap().cyclotomic_order, Some(3));
        let r = nth_roots(&q, &Scalar::from_int(2), 3);
        assert_eq!(r.hint.unwrap().cyclotomic_order, None);
        let r = nth_roots(&q, &Scalar::from_int(-8), 3);
        assert_eq!(r.roots, vec![Scalar::from_int(-2)]);
    }

    #[test]
    fn roots_of_unity_in_cyclotomic_field() {
        let k = Field::cyclotomic(7).unwrap();
        let r = nth_roots(&k, &Scalar::one(), 7);
        assert_eq!(r.roots.len(), 7);
        for t in &r.roots {
            assert!(t.pow(7).is_one());
        }
        let z = Scalar::zeta(&k);
        let r = nth_roots(&k, &(&z * &Scalar::from_int(4)), 2);
        assert_eq!(r.roots.len(), 2);
        for t in &r.roots {
            assert_eq!(t.pow(2), &z * &Scalar::from_int(4));
        }
    }

    #[test]
    fn square_roots_via_gauss_sums() {
        for (m, c) in [(3u32, -3i64), (5, 5), (4, -1), (8, 2), (8, -2), (12, 3), (7, -7), (3, -12)] {
            let k = Field::cyclotomic(m).unwrap();
            let r = nth_roots(&k, &Scalar::from_int(c), 2);
            assert_eq!(r.roots.len(), 2, "sqrt({c}) in Q(zeta {m})");
            for t in &r.roots {
                assert_eq!(t.pow(2), Scalar::from_int(c));
            }
        }
        let k = Field::cyclotomic(5).unwrap();
        assert!(nth_roots(&k, &Scalar::from_int(-5), 2).roots.is_empty());
        assert!(nth_roots(&k, &Scalar::from_int(3), 2).roots.is_empty());
    }

    #[test]
    fn power_systems() {
        let q = Field::rationals();
        match solve_power_system(&q, &[(2, Scalar::one()), (4, Scalar::one())]) {
            PowerSolve::Solutions(s) => assert_eq!(s, vec![Scalar::one(), Scalar::from_int(-1)]),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            solve_power_system(&q, &[(2, Scalar::one()), (3, Scalar::from_int(2))]),
            PowerSolve::Inconsistent
        ));
        assert!(matches!(
            solve_power_system(&q, &[(3, Scalar::one())]),
            PowerSolve::Solutions(ref s) if s.len() == 1
        ));
        assert!(matches!(
            solve_power_system(&q, &[(4, Scalar::one())]),
            PowerSolve::Solutions(ref s) if s.len() == 2
        ));
        assert!(matches!(solve_power_system(&q, &[]), PowerSolve::Unconstrained));
    }

    #[test]
    fn rational_root_theorem() {
        let q = Field::rationals();
        let f = Poly::from_ints(&q, &[-6, 1, 1]);
        let roots = rational_roots(&f).unwrap();
        assert_eq!(
            roots,
            vec![BigRational::from_integer((-3).into()), BigRational::from_integer(2.into())]
        );
        let g = Poly::from_ints(&q, &[0, -1, 0, 2]);
        assert_eq!(rational_roots(&g).unwrap(), vec![BigRational::zero()]);
    }
}
