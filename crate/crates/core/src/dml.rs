//! Orbit experiments for split maps Φ = (F1, F2) on the plane: exact return
//! sets, mod-p filters, progression fitting and preperiodicity checks.

use std::thread;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::algebra::{BivarCurve, Poly, Scalar};
use crate::error::{Error, Result};

pub const DEFAULT_HEIGHT_CAP: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPoint {
    pub index: usize,
    pub point: (Scalar, Scalar),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    pub points: Vec<OrbitPoint>,
    /// First index whose point exceeded the height cap (not included).
    pub truncated_at: Option<usize>,
}

fn too_tall(s: &Scalar, cap: u64) -> bool {
    s.bit_size() > cap
}

/// Φ^n(α) for n ≤ `n`, stopping before the first point taller than `height_cap` bits.
pub fn orbit(f1: &Poly, f2: &Poly, alpha: (Scalar, Scalar), n: usize, height_cap: u64) -> Orbit {
    let mut points = Vec::with_capacity(n + 1);
    let mut cur = alpha;
    for index in 0..=n {
        if too_tall(&cur.0, height_cap) || too_tall(&cur.1, height_cap) {
            return Orbit {
                points,
                truncated_at: Some(index),
            };
        }
        let next = (f1.eval(&cur.0), f2.eval(&cur.1));
        points.push(OrbitPoint { index, point: cur });
        cur = next;
    }
    Orbit {
        points,
        truncated_at: None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReturnSet {
    pub indices: Vec<usize>,
    pub truncated_at: Option<usize>,
}

/// {n ≤ N : Φ^n(α) ∈ C}, exactly.
pub fn return_set_exact(
    f1: &Poly,
    f2: &Poly,
    alpha: (Scalar, Scalar),
    c: &BivarCurve,
    n: usize,
    height_cap: u64,
) -> ReturnSet {
    let orb = orbit(f1, f2, alpha, n, height_cap);
    ReturnSet {
        indices: orb
            .points
            .iter()
            .filter(|p| c.contains(&p.point.0, &p.point.1))
            .map(|p| p.index)
            .collect(),
        truncated_at: orb.truncated_at,
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn reduce(r: &BigRational, p: u64, what: &str) -> Result<u64> {
    let pb = BigInt::from(p);
    let den = r.denom().mod_floor(&pb);
    if den.is_zero() {
        return Err(Error::BadReduction {
            p,
            reason: format!("a denominator in {what} is divisible by {p}"),
        });
    }
    let num = r.numer().mod_floor(&pb).to_u64().expect("reduced");
    let den = den.to_u64().expect("reduced");
    Ok(num * pow_mod(den, p - 2, p) % p)
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn rational(s: &Scalar, what: &str) -> Result<BigRational> {
    s.as_rational().cloned().ok_or_else(|| {
        Error::InvalidInput(format!("mod-p filters take rational inputs; {what} is not rational"))
    })
}

fn reduce_poly(f: &Poly, p: u64, what: &str) -> Result<Vec<u64>> {
    let out = f
        .coeffs()
        .iter()
        .map(|c| reduce(&rational(c, what)?, p, what))
        .collect::<Result<Vec<_>>>()?;
    if out.last().is_none_or(|&c| c == 0) {
        return Err(Error::BadReduction {
            p,
            reason: format!("leading coefficient of {what} vanishes mod {p}"),
        });
    }
    Ok(out)
}

fn eval_mod(c: &[u64], x: u64, p: u64) -> u64 {
    c.iter().rev().fold(0, |acc, &a| (acc * x + a) % p)
}

/// {n ≤ N : G(Φ^n(α)) ≡ 0 mod p}. Contains the exact return set for every
/// prime of good reduction.
pub fn return_set_modp(
    f1: &Poly,
    f2: &Poly,
    alpha: &(Scalar, Scalar),
    c: &BivarCurve,
    p: u64,
    n: usize,
) -> Result<Vec<usize>> {
    if p == 2 || !is_prime(p) || p > u32::MAX as u64 {
        return Err(Error::InvalidInput(format!("{p} is not an odd prime below 2^32")));
    }
    let a1 = reduce_poly(f1, p, "F1")?;
    let a2 = reduce_poly(f2, p, "F2")?;
    let rows = c
        .poly()
        .rows()
        .iter()
        .map(|r| {
            r.coeffs()
                .iter()
                .map(|s| reduce(&rational(s, "the curve")?, p, "the curve"))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    if rows.iter().all(|r| r.iter().all(|&v| v == 0)) {
        return Err(Error::BadReduction {
            p,
            reason: format!("the curve vanishes identically mod {p}"),
        });
    }
    let mut x = reduce(&rational(&alpha.0, "alpha")?, p, "alpha")?;
    let mut y = reduce(&rational(&alpha.1, "alpha")?, p, "alpha")?;
    let mut out = Vec::new();
    for index in 0..=n {
        let g = rows.iter().rev().fold(0, |acc, r| (acc * x + eval_mod(r, y, p)) % p);
        if g == 0 {
            out.push(index);
        }
        x = eval_mod(&a1, x, p);
        y = eval_mod(&a2, y, p);
    }
    Ok(out)
}

#[derive(Debug)]
pub struct ModpSummary {
    pub per_prime: Vec<(u64, Result<Vec<usize>>)>,
    /// Intersection over the good primes; `None` if no prime was good.
    pub intersection: Option<Vec<usize>>,
}

/// return_set_modp over several primes, one thread per prime.
pub fn return_set_modp_many(
    f1: &Poly,
    f2: &Poly,
    alpha: &(Scalar, Scalar),
    c: &BivarCurve,
    primes: &[u64],
    n: usize,
) -> ModpSummary {
    let per_prime: Vec<(u64, Result<Vec<usize>>)> = thread::scope(|s| {
        let handles: Vec<_> = primes
            .iter()
            .map(|&p| s.spawn(move || (p, return_set_modp(f1, f2, alpha, c, p, n))))
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut intersection: Option<Vec<usize>> = None;
    for (_, r) in &per_prime {
        if let Ok(set) = r {
            intersection = Some(match intersection {
                None => set.clone(),
                Some(acc) => acc.into_iter().filter(|i| set.contains(i)).collect(),
            });
        }
    }
    ModpSummary {
        per_prime,
        intersection,
    }
}

/// {a + b k : k ≥ 0}; b = 0 is the singleton {a}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Progression {
    pub a: usize,
    pub b: usize,
}

impl Progression {
    pub fn contains(&self, n: usize) -> bool {
        if self.b == 0 {
            n == self.a
        } else {
            n >= self.a && (n - self.a).is_multiple_of(self.b)
        }
    }
}

/// Elements of the union of `ps` in [0, horizon].
pub fn expand_progressions(ps: &[Progression], horizon: usize) -> Vec<usize> {
    (0..=horizon).filter(|&n| ps.iter().any(|p| p.contains(n))).collect()
}

fn cover(chi: &[bool], t: usize, q: usize) -> Vec<Progression> {
    let h = chi.len() - 1;
    let mut out = Vec::new();
    let mut covered = vec![false; chi.len()];
    for r in t..t + q {
        if !chi[r] {
            continue;
        }
        // extend the start backwards while the class stays inside S
        let mut a = r;
        while a >= q && chi[a - q] {
            a -= q;
        }
        let mut k = a;
        while k <= h {
            covered[k] = true;
            k += q;
        }
        out.push(Progression { a, b: q });
    }
    for (i, &inside) in chi.iter().enumerate() {
        if inside && !covered[i] {
            out.push(Progression { a: i, b: 0 });
        }
    }
    out.sort();
    out
}

/// Fewest progressions (then lexicographically smallest) whose union meets
/// [0, horizon] in exactly S. The characteristic sequence must be periodic
/// from some t ≤ horizon/3 with period q, where t + 3q ≤ horizon + 1.
pub fn progression_decompose(s: &[usize], horizon: usize) -> Option<Vec<Progression>> {
    if s.iter().any(|&n| n > horizon) {
        return None;
    }
    let mut chi = vec![false; horizon + 1];
    for &n in s {
        chi[n] = true;
    }
    let sorted: Vec<usize> = (0..=horizon).filter(|&n| chi[n]).collect();
    let mut best: Option<Vec<Progression>> = None;
    for q in 1..=(horizon / 3).max(1) {
        for t in 0..=horizon / 3 {
            if t + 3 * q > horizon + 1 {
                break;
            }
            if !(t..=horizon - q).all(|i| chi[i] == chi[i + q]) {
                continue;
            }
            let cand = cover(&chi, t, q);
            debug_assert_eq!(expand_progressions(&cand, horizon), sorted);
            let better = match &best {
                None => true,
                Some(b) => (cand.len(), &cand) < (b.len(), b),
            };
            if better {
                best = Some(cand);
            }
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EscapeCertificate {
    pub index: usize,
    pub value: BigRational,
    /// |x| > radius implies |f(x)| > |x|.
    pub radius: BigRational,
}

impl EscapeCertificate {
    /// |value| > radius and five more iterations grow strictly in absolute value.
    pub fn verify(&self, f: &Poly) -> bool {
        if escape_radius(f).as_ref() != Some(&self.radius) || self.value.abs() <= self.radius {
            return false;
        }
        let mut x = Scalar::from_rational(self.value.clone());
        for _ in 0..5 {
            let y = f.eval(&x);
            let (Some(xa), Some(ya)) = (x.as_rational(), y.as_rational()) else {
                return false;
            };
            if ya.abs() <= xa.abs() {
                return false;
            }
            x = y;
        }
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PreperiodicOutcome {
    Preperiodic { tail: usize, period: usize },
    Escape(EscapeCertificate),
    Unknown,
}

/// max(1, (S + 1)/|a_d|) with S the sum of the other |a_i|.
pub fn escape_radius(f: &Poly) -> Option<BigRational> {
    if f.degree() < 2 {
        return None;
    }
    let coeffs: Vec<BigRational> = f
        .coeffs()
        .iter()
        .map(|c| c.as_rational().cloned())
        .collect::<Option<_>>()?;
    let (lead, rest) = coeffs.split_last().expect("nonempty");
    let s: BigRational = rest.iter().map(|c| c.abs()).sum();
    let r = (s + BigRational::from_integer(1.into())) / lead.abs();
    Some(r.max(BigRational::from_integer(1.into())))
}

/// Repeat detection along the orbit of a, with an escape test for rational input.
pub fn preperiodic_check(f: &Poly, a: &Scalar, n: usize, height_cap: u64) -> PreperiodicOutcome {
    let radius = escape_radius(f);
    let mut seen: Vec<Scalar> = Vec::new();
    let mut x = a.clone();
    for index in 0..=n {
        if let Some(j) = seen.iter().position(|s| *s == x) {
            return PreperiodicOutcome::Preperiodic {
                tail: j,
                period: index - j,
            };
        }
        if too_tall(&x, height_cap) {
            return PreperiodicOutcome::Unknown;
        }
        if let (Some(r), Some(v)) = (&radius, x.as_rational()) {
            if v.abs() > *r {
                let cert = EscapeCertificate {
                    index,
                    value: v.clone(),
                    radius: r.clone(),
                };
                if cert.verify(f) {
                    return PreperiodicOutcome::Escape(cert);
                }
            }
        }
        let next = f.eval(&x);
        seen.push(x);
        x = next;
    }
    PreperiodicOutcome::Unknown
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;

    fn q() -> Field {
        Field::rationals()
    }

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(&q(), c)
    }

    fn pt(a: i64, b: i64) -> (Scalar, Scalar) {
        (Scalar::from_int(a), Scalar::from_int(b))
    }

    #[test]
    fn orbit_examples() {
        let sq = p(&[0, 0, 1]);
        let o = orbit(&sq, &sq, pt(2, 4), 3, DEFAULT_HEIGHT_CAP);
        let got: Vec<_> = o.points.iter().map(|p| p.point.clone()).collect();
        assert_eq!(got, vec![pt(2, 4), pt(4, 16), pt(16, 256), pt(256, 65536)]);
        assert_eq!(orbit(&sq, &sq, pt(7, 7), 0, 64).points.len(), 1);
        let o = orbit(&p(&[-1, 0, 1]), &p(&[0, 1]), pt(0, 5), 4, 64);
        let xs: Vec<_> = o.points.iter().map(|p| p.point.0.clone()).collect();
        assert_eq!(xs, [0, -1, 0, -1, 0].map(Scalar::from_int));
        let o = orbit(&sq, &sq, pt(2, 3), 20, 64);
        assert_eq!(o.truncated_at, Some(6));
    }

    #[test]
    fn return_set_examples() {
        let sq = p(&[0, 0, 1]);
        let c = BivarCurve::graph(&sq);
        let r = return_set_exact(&sq, &sq, pt(2, 4), &c, 5, DEFAULT_HEIGHT_CAP);
        assert_eq!(r.indices, vec![0, 1, 2, 3, 4, 5]);
        let diag = BivarCurve::graph(&p(&[0, 1]));
        let r = return_set_exact(&sq, &sq, pt(2, 3), &diag, 10, DEFAULT_HEIGHT_CAP);
        assert!(r.indices.is_empty());
    }

    #[test]
    fn modp_examples() {
        let sq = p(&[0, 0, 1]);
        let diag = BivarCurve::graph(&p(&[0, 1]));
        let s = return_set_modp(&sq, &sq, &pt(2, 3), &diag, 5, 3).unwrap();
        assert!(s.contains(&1));
        let half = (Scalar::from_ratio(1, 5), Scalar::from_int(1));
        assert!(matches!(
            return_set_modp(&sq, &sq, &half, &diag, 5, 3),
            Err(Error::BadReduction { p: 5, .. })
        ));
    }

    #[test]
    fn progression_examples() {
        let odds: Vec<usize> = (1..100).step_by(2).collect();
        assert_eq!(progression_decompose(&odds, 100), Some(vec![Progression { a: 1, b: 2 }]));
        assert_eq!(progression_decompose(&[2], 100), Some(vec![Progression { a: 2, b: 0 }]));
        let primes: Vec<usize> = (2..=50).filter(|&n| is_prime(n as u64)).collect();
        assert_eq!(progression_decompose(&primes, 50), None);
    }

    #[test]
    fn preperiodic_examples() {
        let z = Scalar::zero();
        assert_eq!(
            preperiodic_check(&p(&[-1, 0, 1]), &z, 10, 64),
            PreperiodicOutcome::Preperiodic { tail: 0, period: 2 }
        );
        match preperiodic_check(&p(&[1, 0, 1]), &z, 10, 4096) {
            PreperiodicOutcome::Escape(cert) => assert!(cert.verify(&p(&[1, 0, 1]))),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            preperiodic_check(&p(&[0, 0, 1]), &Scalar::one(), 10, 64),
            PreperiodicOutcome::Preperiodic { tail: 0, period: 1 }
        );
    }
}
