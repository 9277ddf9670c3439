//! Semiconjugacy f∘p = p∘η: checking, solving for η or p, the Inou normal
//! form, and a bounded search for common semiconjugates.

use num_integer::Integer;

use crate::algebra::roots::{nth_roots, rational_roots};
use crate::algebra::{LinearPoly, Poly, Scalar, DEFAULT_DEGREE_CAP};
use crate::conjugacy::{is_disintegrated, linear_conjugacies};
use crate::decompose::right_factor_solve;
use crate::error::{cap_error, Error, ExtensionHint, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemiconjWitness {
    pub f: Poly,
    pub p: Poly,
    pub eta: Poly,
}

impl SemiconjWitness {
    pub fn new(f: Poly, p: Poly, eta: Poly) -> Self {
        Self { f, p, eta }
    }

    pub fn check(&self) -> bool {
        semiconj_check(&self.f, &self.p, &self.eta)
    }
}

/// f∘p = p∘η exactly, with p nonconstant.
pub fn semiconj_check(f: &Poly, p: &Poly, eta: &Poly) -> bool {
    if f.field() != p.field() || f.field() != eta.field() || p.is_constant() {
        return false;
    }
    let lhs = f.degree() * p.degree();
    if lhs != p.degree() * eta.degree() || lhs > DEFAULT_DEGREE_CAP {
        return false;
    }
    f.compose_unchecked(p) == p.compose_unchecked(eta)
}

/// Every η in the field with f∘p = p∘η, in canonical order.
pub fn solve_eta_all(f: &Poly, p: &Poly) -> Result<Vec<Poly>> {
    f.field().ensure_same(p.field())?;
    if f.degree() < 2 || p.is_constant() {
        return Err(Error::InvalidInput("solve_eta needs deg f ≥ 2 and nonconstant p".into()));
    }
    let fp = f.compose_capped(p, DEFAULT_DEGREE_CAP)?;
    let mut out = right_factor_solve(&fp, p)?;
    out.sort_by(|a, b| a.canonical_cmp(b));
    Ok(out)
}

/// The first η (canonical order) with f∘p = p∘η.
pub fn solve_eta(f: &Poly, p: &Poly) -> Result<Option<Poly>> {
    Ok(solve_eta_all(f, p)?.into_iter().next())
}

/// Result of [`solve_p`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PSolutions {
    /// Verified p, by degree then canonical order of the leading coefficient.
    pub solutions: Vec<Poly>,
    /// Degrees whose leading-coefficient equation has no root in the field.
    pub skipped: Vec<(usize, ExtensionHint)>,
}

impl PSolutions {
    /// The caller-facing error when nothing was found but some degree needed
    /// an extension.
    pub fn into_result(self) -> Result<Vec<Poly>> {
        match (self.solutions.is_empty(), self.skipped.first()) {
            (true, Some((_, hint))) => Err(Error::FieldExtensionRequired(hint.clone())),
            _ => Ok(self.solutions),
        }
    }
}

fn mul_trunc(a: &[Scalar], b: &[Scalar], n: usize) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            if !y.is_zero() {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
    }
    out
}

fn power_table(a: &[Scalar], e: usize, n: usize) -> Vec<Vec<Scalar>> {
    let mut acc = vec![Scalar::zero(); n];
    acc[0] = Scalar::one();
    let mut out = vec![acc];
    for _ in 0..e {
        let next = mul_trunc(out.last().expect("nonempty"), a, n);
        out.push(next);
    }
    out
}

/// Coefficient k of the t-expansion of x^{-δb}(f∘p − p∘η), x = 1/t, where
/// `pi` holds p_b, p_{b-1}, ... and `eta_pows[j]` is the j-th power of the
/// reversed η.
fn residual_coeff(f: &Poly, eta_pows: &[Vec<Scalar>], pi: &[Scalar], b: usize, k: usize) -> Scalar {
    let d = f.degree();
    let pi_pows = power_table(&pi[..=k], d, k + 1);
    let mut lhs = Scalar::zero();
    for i in 0..=d {
        let shift = (d - i) * b;
        if shift <= k && !f.coeff(i).is_zero() {
            lhs = &lhs + &(&f.coeff(i) * &pi_pows[i][k - shift]);
        }
    }
    let mut rhs = Scalar::zero();
    for j in 0..=b {
        let shift = d * (b - j);
        if shift <= k && !pi[b - j].is_zero() {
            rhs = &rhs + &(&pi[b - j] * &eta_pows[j][k - shift]);
        }
    }
    &lhs - &rhs
}

fn solve_p_degree(f: &Poly, eta: &Poly, b: usize, lead: Scalar) -> Option<Poly> {
    let d = f.degree();
    let eta_rev: Vec<Scalar> = (0..=d.min(b)).map(|i| eta.coeff(d - i)).collect();
    let eta_pows = power_table(&eta_rev, b, b + 1);
    let mut pi = vec![Scalar::zero(); b + 1];
    pi[0] = lead.clone();
    let pivot = &(&f.lc() * &Scalar::from_int(d as i64)) * &lead.pow(d as i64 - 1);
    for k in 1..=b {
        let r = residual_coeff(f, &eta_pows, &pi, b, k);
        pi[k] = -(&r / &pivot);
    }
    let p = Poly::new(f.field(), pi.into_iter().rev().collect());
    for t in [2i64, -3, 5] {
        let t = Scalar::from_int(t);
        if f.eval(&p.eval(&t)) != p.eval(&eta.eval(&t)) {
            return None;
        }
    }
    (f.compose_unchecked(&p) == p.compose_unchecked(eta)).then_some(p)
}

/// All p with 1 ≤ deg p ≤ `deg_bound` and f∘p = p∘η.
///
/// Once the leading coefficient is fixed the remaining coefficients are
/// determined one at a time (the pivot δ·lc(f)·p_b^{δ-1} never vanishes),
/// so each degree contributes at most δ - 1 candidates.
pub fn solve_p(f: &Poly, eta: &Poly, deg_bound: usize) -> Result<PSolutions> {
    f.field().ensure_same(eta.field())?;
    let d = f.degree();
    if d < 2 || eta.degree() != d {
        return Err(Error::InvalidInput("solve_p needs deg f = deg η ≥ 2".into()));
    }
    if d * deg_bound > DEFAULT_DEGREE_CAP {
        return Err(cap_error("solve_p", d * deg_bound, DEFAULT_DEGREE_CAP));
    }
    let field = f.field();
    let mut out = PSolutions {
        solutions: Vec::new(),
        skipped: Vec::new(),
    };
    for b in 1..=deg_bound {
        let rhs = &eta.lc().pow(b as i64) / &f.lc();
        let roots = nth_roots(field, &rhs, (d - 1) as u32);
        if roots.roots.is_empty() {
            if let Some(h) = roots.hint {
                out.skipped.push((b, h));
            }
            continue;
        }
        for lead in roots.roots {
            if let Some(p) = solve_p_degree(f, eta, b, lead) {
                out.solutions.push(p);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InouNormalForm {
    pub ell1: LinearPoly,
    pub ell2: LinearPoly,
    pub b: usize,
    pub c: usize,
    pub big_p: Poly,
    /// c ≡ b (mod δ). Fails on some valid inputs; reported only.
    pub congruence_flag: bool,
    /// c ≡ δ (mod b). Always holds for this shape.
    pub degree_congruence_flag: bool,
}

impl InouNormalForm {
    pub fn verify(&self, w: &SemiconjWitness) -> bool {
        let field = w.f.field();
        let xc = Poly::x_pow(field, self.c);
        let xb = Poly::x_pow(field, self.b);
        let f_form = &xc * &self.big_p.pow(self.b as u32);
        let eta_form = &xc * &self.big_p.inflate(self.b);
        let conj = |l: &LinearPoly, q: &Poly| l.conjugate(q).ok();
        conj(&self.ell1, &w.f) == Some(f_form)
            && self.ell1.compose_left(&self.ell2.inverse().compose_right(&w.p)) == xb
            && conj(&self.ell2, &w.eta) == Some(eta_form)
            && !self.big_p.coeff(0).is_zero()
    }
}

/// ℓ1, ℓ2, b, c, P with ℓ1∘f∘ℓ1⁻¹ = x^c P(x)^b, ℓ1∘p∘ℓ2⁻¹ = x^b and
/// ℓ2∘η∘ℓ2⁻¹ = x^c P(x^b).
pub fn inou_normal_form(w: &SemiconjWitness) -> Result<InouNormalForm> {
    let (f, p) = (&w.f, &w.p);
    let field = f.field();
    if !w.check() {
        return Err(Error::Hypothesis("witness does not satisfy f∘p = p∘η".into()));
    }
    let d = f.degree();
    let b = p.degree();
    if d.gcd(&b) != 1 {
        return Err(Error::Hypothesis(format!("gcd(deg f, deg p) = gcd({d}, {b}) ≠ 1")));
    }
    if !is_disintegrated(f) {
        return Err(Error::Hypothesis(format!("{f} is not disintegrated")));
    }
    let (ell1, ell2) = if b == 1 {
        let fixed = f - &Poly::x(field);
        let t = rational_roots(&fixed)
            .and_then(|r| r.into_iter().next())
            .ok_or_else(|| {
                Error::FieldExtensionRequired(ExtensionHint::new(
                    format!("{} = t", f.to_string_in("t")),
                    None,
                ))
            })?;
        let ell1 = LinearPoly::translation(field, -Scalar::from_rational(t));
        let ell2 = ell1.compose(&LinearPoly::from_poly(p).expect("linear"));
        (ell1, ell2)
    } else {
        let r = -(&p.coeff(b - 1) / &(&p.lc() * &Scalar::from_int(b as i64)));
        let beta = p.eval(&r);
        let model = Poly::from_ints(field, &[0, 1])
            .add_scalar(&-&r)
            .pow(b as u32)
            .scale(&p.lc())
            .add_scalar(&beta);
        if model != *p {
            return Err(Error::Hypothesis(format!("{p} is not equivalent to x^{b}")));
        }
        let ell2 = LinearPoly::translation(field, -r);
        let ell1 = LinearPoly::new(field, p.lc().inv().expect("nonzero"), -(&beta / &p.lc()));
        (ell1, ell2)
    };
    let big_f = ell1.conjugate(f)?;
    let big_h = ell2.conjugate(&w.eta)?;
    let c = big_h.valuation();
    let tail = Poly::new(field, big_h.coeffs()[c..].to_vec());
    let big_p = tail
        .deflate(b)
        .ok_or_else(|| Error::Hypothesis("η normal form is not x^c P(x^b)".into()))?;
    let out = InouNormalForm {
        congruence_flag: c % d == b % d,
        degree_congruence_flag: c % b == d % b,
        ell1,
        ell2,
        b,
        c,
        big_p,
    };
    if c == 0 || big_f != &Poly::x_pow(field, c) * &out.big_p.pow(b as u32) || !out.verify(w) {
        return Err(Error::Hypothesis("normal form identities failed".into()));
    }
    Ok(out)
}

/// f^N∘p = p∘η and g^N∘q = q∘η.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommonWitness {
    pub n: u32,
    pub eta: Poly,
    pub p: Poly,
    pub q: Poly,
}

impl CommonWitness {
    pub fn verify(&self, f: &Poly, g: &Poly) -> bool {
        let (Ok(fnn), Ok(gnn)) = (f.iterate(self.n), g.iterate(self.n)) else {
            return false;
        };
        semiconj_check(&fnn, &self.p, &self.eta) && semiconj_check(&gnn, &self.q, &self.eta)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommonSearch {
    pub witness: Option<CommonWitness>,
    /// One line per strategy attempted.
    pub transcript: Vec<String>,
    /// Whether the search stopped early at the degree cap.
    pub hit_cap: bool,
}

pub const DEFAULT_N_MAX: u32 = 4;
pub const DEFAULT_DEG_CAP: usize = 32;

fn p_candidates(big_f: &Poly, eta: &Poly, deg_cap: usize) -> Vec<Poly> {
    match solve_p(big_f, eta, deg_cap) {
        Ok(s) => s.solutions,
        Err(_) => Vec::new(),
    }
}

fn search_level(big_f: &Poly, big_g: &Poly, n: u32, deg_cap: usize, log: &mut Vec<String>) -> Option<CommonWitness> {
    let field = big_f.field();
    let x = Poly::x(field);
    if big_f == big_g {
        log.push(format!("N = {n}: iterates coincide"));
        return Some(CommonWitness {
            n,
            eta: big_f.clone(),
            p: x.clone(),
            q: x,
        });
    }
    if let Ok(ells) = linear_conjugacies(big_f, big_g) {
        if let Some(ell) = ells.into_iter().next() {
            log.push(format!("N = {n}: linear conjugacy"));
            return Some(CommonWitness {
                n,
                eta: big_g.clone(),
                p: ell.inverse().to_poly(),
                q: x,
            });
        }
    }
    log.push(format!("N = {n}: no linear conjugacy"));
    let mut best: Option<CommonWitness> = None;
    let mut consider = |w: CommonWitness| {
        let size = |c: &CommonWitness| c.p.degree() + c.q.degree();
        if best.as_ref().is_none_or(|b| size(&w) < size(b)) {
            best = Some(w);
        }
    };
    if let Some(p) = p_candidates(big_f, big_g, deg_cap).into_iter().next() {
        consider(CommonWitness {
            n,
            eta: big_g.clone(),
            p,
            q: x.clone(),
        });
    }
    if let Some(q) = p_candidates(big_g, big_f, deg_cap).into_iter().next() {
        consider(CommonWitness {
            n,
            eta: big_f.clone(),
            p: x.clone(),
            q,
        });
    }
    if let Some(w) = best {
        log.push(format!("N = {n}: one iterate is semiconjugate to the other"));
        return Some(w);
    }
    log.push(format!("N = {n}: no direct semiconjugacy up to degree {deg_cap}"));
    for k in 2..=deg_cap.min(4) {
        let xk = Poly::x_pow(field, k);
        for (a, other, swap) in [(big_f, big_g, false), (big_g, big_f, true)] {
            let Ok(etas) = solve_eta_all(a, &xk) else { continue };
            for eta in etas {
                if let Some(r) = p_candidates(other, &eta, deg_cap).into_iter().next() {
                    log.push(format!("N = {n}: common descendant through x^{k}"));
                    let (p, q) = if swap { (r, xk.clone()) } else { (xk.clone(), r) };
                    return Some(CommonWitness { n, eta, p, q });
                }
            }
        }
    }
    log.push(format!("N = {n}: no common descendant through x^k, k ≤ {}", deg_cap.min(4)));
    None
}

/// Bounded search for η semiconjugate to both f^N and g^N, N ≤ `n_max`.
/// Absence is only "not found at these caps".
pub fn common_semiconjugate(f: &Poly, g: &Poly, n_max: u32, deg_cap: usize) -> Result<CommonSearch> {
    f.field().ensure_same(g.field())?;
    if n_max == 0 || deg_cap == 0 {
        return Err(Error::InvalidInput("N_max and deg_cap must be positive".into()));
    }
    if f.degree() != g.degree() {
        return Err(Error::Hypothesis("f and g must have the same degree".into()));
    }
    for h in [f, g] {
        if f.degree() < 2 || !is_disintegrated(h) {
            return Err(Error::Hypothesis(format!("{h} is not disintegrated")));
        }
    }
    let mut log = Vec::new();
    let mut big_f = f.clone();
    let mut big_g = g.clone();
    for n in 1..=n_max {
        if n > 1 {
            let deg = big_f.degree() * f.degree();
            if deg * deg_cap > DEFAULT_DEGREE_CAP {
                log.push(format!("N = {n}: iterate degree {deg} exceeds the budget"));
                return Ok(CommonSearch {
                    witness: None,
                    transcript: log,
                    hit_cap: true,
                });
            }
            big_f = f.compose_unchecked(&big_f);
            big_g = g.compose_unchecked(&big_g);
        }
        if let Some(w) = search_level(&big_f, &big_g, n, deg_cap, &mut log) {
            debug_assert!(w.verify(f, g));
            return Ok(CommonSearch {
                witness: Some(w),
                transcript: log,
                hit_cap: false,
            });
        }
    }
    Ok(CommonSearch {
        witness: None,
        transcript: log,
        hit_cap: false,
    })
}

/// One class of the ≈ partition with a common θ: f_i^N∘maps[k] = maps[k]∘θ
/// for the k-th member i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxClass {
    pub members: Vec<usize>,
    pub theta: Option<Poly>,
    pub n: u32,
    pub maps: Vec<Poly>,
}

impl ApproxClass {
    pub fn verify(&self, fs: &[Poly]) -> bool {
        let Some(theta) = &self.theta else {
            return true;
        };
        self.members.iter().zip(&self.maps).all(|(&i, p)| {
            fs[i]
                .iterate(self.n)
                .map(|fi| semiconj_check(&fi, p, theta))
                .unwrap_or(false)
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxPartition {
    pub classes: Vec<ApproxClass>,
    /// True when some pair was left unresolved (not found at the caps).
    pub at_caps: bool,
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    parent[i] = r;
    r
}

fn chain_class(fs: &[Poly], members: &[usize], n_max: u32, deg_cap: usize) -> Result<ApproxClass> {
    let first = &fs[members[0]];
    let mut theta = first.clone();
    let mut n = 1u32;
    let mut maps = vec![Poly::x(first.field())];
    for &j in &members[1..] {
        let fj = fs[j].iterate(n)?;
        let found = common_semiconjugate(&theta, &fj, n_max, deg_cap)?.witness;
        let Some(w) = found else {
            return Ok(ApproxClass {
                members: members.to_vec(),
                theta: None,
                n,
                maps: Vec::new(),
            });
        };
        maps = maps
            .iter()
            .map(|m| m.compose_capped(&w.p, DEFAULT_DEGREE_CAP))
            .collect::<Result<_>>()?;
        maps.push(w.q);
        theta = w.eta;
        n *= w.n;
    }
    Ok(ApproxClass {
        members: members.to_vec(),
        theta: Some(theta),
        n,
        maps,
    })
}

/// Partition by pairwise common_semiconjugate success, then one θ per class
/// by chaining witnesses.
pub fn approx_classes(fs: &[Poly], n_max: u32, deg_cap: usize) -> Result<ApproxPartition> {
    let k = fs.len();
    let mut parent: Vec<usize> = (0..k).collect();
    let mut at_caps = false;
    for i in 0..k {
        for j in i + 1..k {
            if find(&mut parent, i) == find(&mut parent, j) {
                continue;
            }
            if fs[i].degree() != fs[j].degree() {
                continue;
            }
            if common_semiconjugate(&fs[i], &fs[j], n_max, deg_cap)?.witness.is_some() {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri.max(rj)] = ri.min(rj);
            } else {
                at_caps = true;
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut roots: Vec<usize> = Vec::new();
    for i in 0..k {
        let r = find(&mut parent, i);
        match roots.iter().position(|&x| x == r) {
            Some(pos) => groups[pos].push(i),
            None => {
                roots.push(r);
                groups.push(vec![i]);
            }
        }
    }
    let classes = groups
        .iter()
        .map(|m| chain_class(fs, m, n_max, deg_cap))
        .collect::<Result<_>>()?;
    Ok(ApproxPartition { classes, at_caps })
}
