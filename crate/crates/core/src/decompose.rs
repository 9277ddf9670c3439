//! Functional decomposition: right/left factor solvers, complete chains,
//! Engstrom refinement and the x^s P(x)^n splitting.

use std::cmp::Ordering;

use num_integer::Integer;

use crate::algebra::roots::{nth_roots, solve_power_system, PowerSolve};
use crate::algebra::{LinearPoly, Poly, Scalar};
use crate::error::{Error, Result};

/// Default degree cap for [`complete_decompositions`].
pub const DECOMPOSITION_CAP: usize = 64;

/// Coefficients of A^(1/r) for a series with A[0] = 1, up to `terms` terms.
pub(crate) fn series_root(a: &[Scalar], r: u32, terms: usize) -> Vec<Scalar> {
    debug_assert!(a.first().is_some_and(Scalar::is_one));
    let alpha = Scalar::from_ratio(1, r as i64);
    let mut b = vec![Scalar::one()];
    for k in 1..terms {
        let mut acc = Scalar::zero();
        for j in 1..=k.min(a.len() - 1) {
            if a[j].is_zero() {
                continue;
            }
            let w = &(&alpha * &Scalar::from_int(j as i64)) - &Scalar::from_int((k - j) as i64);
            acc = &acc + &(&(&w * &a[j]) * &b[k - j]);
        }
        b.push(&acc / &Scalar::from_int(k as i64));
    }
    b
}

/// The monic degree-s polynomial H with zero constant term whose r-th power
/// agrees with `f / lc(f)` in the top s coefficients. Any right factor of f
/// of degree s is an affine image of H.
pub(crate) fn approximate_root(f: &Poly, s: usize) -> Poly {
    let n = f.degree();
    debug_assert!(s >= 1 && n.is_multiple_of(s));
    let r = (n / s) as u32;
    let field = f.field();
    if s == 1 {
        return Poly::x(field);
    }
    let inv = f.lc().inv().expect("nonzero");
    let rev: Vec<Scalar> = (0..s).map(|i| &f.coeff(n - i) * &inv).collect();
    let root = series_root(&rev, r, s);
    let mut coeffs = vec![Scalar::zero(); s + 1];
    for (i, c) in root.into_iter().enumerate() {
        coeffs[s - i] = c;
    }
    coeffs[0] = Scalar::zero();
    Poly::new(field, coeffs)
}

/// Normalized right factor: monic, zero constant term, degree s; or `None`.
pub fn normalized_right_factor(f: &Poly, s: usize) -> Option<Poly> {
    let n = f.degree();
    if s == 0 || !n.is_multiple_of(s) {
        return None;
    }
    if s == n {
        return Some(f.add_scalar(&-f.coeff(0)).monic());
    }
    let h = approximate_root(f, s);
    left_factor_solve(f, &h).ok().flatten().map(|_| h)
}

/// The unique g with F = g∘h, if any.
pub fn left_factor_solve(f: &Poly, h: &Poly) -> Result<Option<Poly>> {
    f.field().ensure_same(h.field())?;
    let s = h.degree();
    let n = f.degree();
    if s == 0 || h.is_zero() {
        return Err(Error::InvalidInput("inner polynomial must be nonconstant".into()));
    }
    if !n.is_multiple_of(s) {
        return Err(Error::DegreeNotDivisible { inner: s, target: n });
    }
    let mut rest = f.clone();
    let mut out = Vec::with_capacity(n / s + 1);
    while !rest.is_zero() {
        let (q, r) = rest.div_rem(h);
        if !r.is_constant() {
            return Ok(None);
        }
        out.push(r.coeff(0));
        rest = q;
    }
    Ok(Some(Poly::new(f.field(), out)))
}

/// p(t - p_{r-1}/(r p_r)): kills the subleading coefficient.
fn centered(p: &Poly) -> (Poly, Scalar) {
    let r = p.degree();
    let shift = &p.coeff(r - 1) / &(&p.lc() * &Scalar::from_int(r as i64));
    let t = LinearPoly::translation(p.field(), -&shift);
    (t.compose_right(p), shift)
}

/// All h in the field with F = g∘h.
pub fn right_factor_solve(f: &Poly, g: &Poly) -> Result<Vec<Poly>> {
    f.field().ensure_same(g.field())?;
    let r = g.degree();
    let n = f.degree();
    if r == 0 || g.is_zero() {
        return Err(Error::InvalidInput("outer polynomial must be nonconstant".into()));
    }
    if f.is_constant() || !n.is_multiple_of(r) {
        return Err(Error::DegreeNotDivisible { inner: r, target: n });
    }
    let field = f.field();
    if r == 1 {
        let ell = LinearPoly::from_poly(g).expect("degree one");
        return Ok(vec![ell.inverse().compose_left(f)]);
    }
    let s = n / r;
    let h_norm = approximate_root(f, s);
    let Some(big_g) = left_factor_solve(f, &h_norm)? else {
        return Ok(Vec::new());
    };
    // Need big_g(t) = g(lambda t + c); compare centered forms.
    let (gc, g_shift) = centered(g);
    let (bc, b_shift) = centered(&big_g);
    if gc.coeff(0) != bc.coeff(0) {
        return Ok(Vec::new());
    }
    let mut eqs = Vec::new();
    for i in 1..=r {
        let (gi, bi) = (gc.coeff(i), bc.coeff(i));
        match (gi.is_zero(), bi.is_zero()) {
            (true, true) => {}
            (true, false) | (false, true) => return Ok(Vec::new()),
            (false, false) => eqs.push((i as u32, &bi / &gi)),
        }
    }
    let lambdas = match solve_power_system(field, &eqs) {
        PowerSolve::Solutions(s) => s,
        PowerSolve::Inconsistent => return Ok(Vec::new()),
        PowerSolve::NeedsExtension(hint) => return Err(Error::FieldExtensionRequired(hint)),
        PowerSolve::Unconstrained => unreachable!("leading equation always present"),
    };
    let mut out = Vec::new();
    for lambda in lambdas {
        // h = lambda (H + b_shift) - g_shift
        let h = h_norm
            .add_scalar(&b_shift)
            .scale(&lambda)
            .add_scalar(&-&g_shift);
        if g.compose_unchecked(&h) == *f {
            out.push(h);
        }
    }
    Ok(out)
}

/// A maximal decomposition f = factors[0] ∘ factors[1] ∘ ... .
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionChain {
    pub factors: Vec<Poly>,
}

impl DecompositionChain {
    pub fn degrees(&self) -> Vec<usize> {
        self.factors.iter().map(Poly::degree).collect()
    }

    pub fn recompose(&self) -> Poly {
        let mut it = self.factors.iter().rev();
        let mut acc = it.next().expect("nonempty chain").clone();
        for f in it {
            acc = f.compose_unchecked(&acc);
        }
        acc
    }

    fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.degrees().cmp(&other.degrees()).then_with(|| {
            for (a, b) in self.factors.iter().zip(&other.factors) {
                match a.canonical_cmp(b) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

fn proper_divisors(n: usize) -> Vec<usize> {
    (2..n).filter(|d| n.is_multiple_of(*d)).collect()
}

fn is_indecomposable(f: &Poly) -> bool {
    proper_divisors(f.degree())
        .into_iter()
        .all(|s| normalized_right_factor(f, s).is_none())
}

fn chains_rec(f: &Poly) -> Vec<Vec<Poly>> {
    let n = f.degree();
    let mut out = Vec::new();
    for s in proper_divisors(n) {
        let Some(h) = normalized_right_factor(f, s) else {
            continue;
        };
        if !is_indecomposable(&h) {
            continue;
        }
        let g = left_factor_solve(f, &h).ok().flatten().expect("h is a right factor");
        for mut chain in chains_rec(&g) {
            chain.push(h.clone());
            out.push(chain);
        }
    }
    if out.is_empty() {
        out.push(vec![f.clone()]);
    }
    out
}

/// All maximal decomposition chains of f over its field.
///
/// Every factor after the first is monic with zero constant term, which picks
/// one representative from each class of chains related by inserting ℓ∘ℓ⁻¹
/// between adjacent factors.
pub fn complete_decompositions(f: &Poly) -> Result<Vec<DecompositionChain>> {
    complete_decompositions_capped(f, DECOMPOSITION_CAP)
}

pub fn complete_decompositions_capped(f: &Poly, cap: usize) -> Result<Vec<DecompositionChain>> {
    let n = f.degree();
    if n < 2 {
        return Err(Error::InvalidInput("decomposition needs degree at least 2".into()));
    }
    if n > cap {
        return Err(crate::error::cap_error("complete_decompositions", n, cap));
    }
    let mut chains: Vec<DecompositionChain> = chains_rec(f)
        .into_iter()
        .map(|factors| DecompositionChain { factors })
        .collect();
    chains.sort_by(|a, b| a.canonical_cmp(b));
    chains.dedup();
    Ok(chains)
}

/// Data of the Engstrom refinement of a∘b = c∘d.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngstromCertificate {
    pub g: Poly,
    pub h: Poly,
    pub a_hat: Poly,
    pub b_hat: Poly,
    pub c_hat: Poly,
    pub d_hat: Poly,
    /// When deg a = deg c: the linear ℓ with a = c∘ℓ and b = ℓ⁻¹∘d.
    pub link: Option<LinearPoly>,
}

impl EngstromCertificate {
    /// Rechecks every identity against the inputs.
    pub fn verify(&self, a: &Poly, b: &Poly, c: &Poly, d: &Poly) -> bool {
        let comp = |x: &Poly, y: &Poly| x.compose_unchecked(y);
        let mut ok = comp(&self.g, &self.a_hat) == *a
            && comp(&self.g, &self.c_hat) == *c
            && comp(&self.b_hat, &self.h) == *b
            && comp(&self.d_hat, &self.h) == *d
            && comp(&self.a_hat, &self.b_hat) == comp(&self.c_hat, &self.d_hat)
            && self.g.degree() == a.degree().gcd(&c.degree())
            && self.h.degree() == b.degree().gcd(&d.degree());
        if let Some(l) = &self.link {
            ok &= l.compose_right(c) == *a && l.inverse().compose_left(d) == *b;
        }
        ok
    }
}

pub fn engstrom_refine(a: &Poly, b: &Poly, c: &Poly, d: &Poly) -> Result<EngstromCertificate> {
    let field = a.field();
    for p in [b, c, d] {
        field.ensure_same(p.field())?;
    }
    if [a, b, c, d].iter().any(|p| p.is_constant()) {
        return Err(Error::Hypothesis("all four polynomials must be nonconstant".into()));
    }
    let f = a.compose_unchecked(b);
    if f != c.compose_unchecked(d) {
        return Err(Error::Hypothesis("a∘b differs from c∘d".into()));
    }
    let (nb, nd) = (b.degree(), d.degree());
    let big = nb.lcm(&nd);
    let small = nb.gcd(&nd);
    let r = normalized_right_factor(&f, big)
        .ok_or_else(|| Error::Hypothesis("no right factor of lcm degree".into()))?;
    let left = |x: &Poly, y: &Poly| -> Result<Poly> {
        left_factor_solve(x, y)?
            .ok_or_else(|| Error::Hypothesis(format!("{y} is not a right factor of {x}")))
    };
    let g = left(&f, &r)?;
    let a_hat = left(&r, b)?;
    let c_hat = left(&r, d)?;
    let h = normalized_right_factor(b, small)
        .ok_or_else(|| Error::Hypothesis("no right factor of gcd degree".into()))?;
    let b_hat = left(b, &h)?;
    let d_hat = left(d, &h)?;
    let link = if a.degree() == c.degree() {
        let l = left(d, b)?;
        Some(LinearPoly::from_poly(&l).ok_or_else(|| Error::Hypothesis("link is not linear".into()))?)
    } else {
        None
    };
    let cert = EngstromCertificate {
        g,
        h,
        a_hat,
        b_hat,
        c_hat,
        d_hat,
        link,
    };
    debug_assert!(cert.verify(a, b, c, d));
    Ok(cert)
}

/// Output of [`decompose_power_form`]: A = x^j P1^n ∘ ℓ and B = ℓ⁻¹ ∘ x^k P2^n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSplit {
    pub j: usize,
    pub k: usize,
    pub p1: Poly,
    pub p2: Poly,
    pub ell: LinearPoly,
}

impl PowerSplit {
    pub fn verify(&self, a: &Poly, b: &Poly, n: u32) -> bool {
        let field = a.field();
        let left = &Poly::x_pow(field, self.j) * &self.p1.pow(n);
        let right = &Poly::x_pow(field, self.k) * &self.p2.pow(n);
        self.ell.compose_right(&left) == *a && self.ell.inverse().compose_left(&right) == *b
    }
}

/// If `q = P^n` for some P in the field, returns such a P.
pub fn poly_nth_root(q: &Poly, n: u32) -> Option<Poly> {
    if q.is_zero() {
        return None;
    }
    let d = q.degree();
    if !d.is_multiple_of(n as usize) {
        return None;
    }
    let lambda = nth_roots(q.field(), &q.lc(), n).roots.into_iter().next()?;
    let s = d / n as usize;
    let field = q.field();
    let inv = q.lc().inv().expect("nonzero");
    let rev: Vec<Scalar> = (0..=d).map(|i| &q.coeff(d - i) * &inv).collect();
    let root = series_root(&rev, n, s + 1);
    let mut coeffs = vec![Scalar::zero(); s + 1];
    for (i, c) in root.into_iter().enumerate() {
        coeffs[s - i] = c;
    }
    let p = Poly::new(field, coeffs).scale(&lambda);
    (p.pow(n) == *q).then_some(p)
}

/// Splits A and B when A∘B = x^s P(x)^n with gcd(s, n) = 1.
pub fn decompose_power_form(a: &Poly, b: &Poly, s: usize, n: u32) -> Result<PowerSplit> {
    a.field().ensure_same(b.field())?;
    let field = a.field();
    if s == 0 || n == 0 || s.gcd(&(n as usize)) != 1 {
        return Err(Error::Hypothesis(format!("need coprime positive s, n; got s = {s}, n = {n}")));
    }
    if a.is_constant() || b.is_constant() {
        return Err(Error::Hypothesis("A and B must be nonconstant".into()));
    }
    let f = a.compose_unchecked(b);
    if f.valuation() != s {
        return Err(Error::Hypothesis(format!("A∘B does not have valuation {s}")));
    }
    let rest = Poly::new(field, f.coeffs()[s..].to_vec());
    if poly_nth_root(&rest, n).is_none() {
        return Err(Error::Hypothesis(format!("A∘B is not of the form x^{s} P(x)^{n}")));
    }
    let ell = LinearPoly::new(field, b.lc().inv().expect("nonzero"), -(&b.coeff(0) / &b.lc()));
    let b_norm = ell.compose_left(b);
    let a_norm = ell.inverse().compose_right(a);
    let k = b_norm.valuation();
    let j = a_norm.valuation();
    let split = |p: &Poly, v: usize| -> Result<Poly> {
        let rest = Poly::new(field, p.coeffs()[v..].to_vec());
        poly_nth_root(&rest, n).ok_or_else(|| {
            Error::Hypothesis(format!("{p} is not of the form x^{v} P(x)^{n}"))
        })
    };
    let p1 = split(&a_norm, j)?;
    let p2 = split(&b_norm, k)?;
    let out = PowerSplit { j, k, p1, p2, ell };
    debug_assert!(out.verify(a, b, n));
    Ok(out)
}
