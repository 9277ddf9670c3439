//! Symmetry groups Γ(A) and M(f^∞), commuting iterates, and alignment of
//! iterates that differ by a linear factor.

use num_integer::Integer;

use crate::algebra::{Field, LinearPoly, Poly, Scalar, DEFAULT_DEGREE_CAP};
use crate::conjugacy::{self, normalize};
use crate::decompose::left_factor_solve;
use crate::error::{Error, ExtensionHint, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    Infinite,
    Finite,
}

/// ℓ together with the linear L satisfying A∘ℓ = L∘A.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupElement {
    pub ell: LinearPoly,
    pub companion: LinearPoly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearGroup {
    pub kind: GroupKind,
    /// Powers of the generator, starting at the identity (finite case only).
    pub elements: Vec<GroupElement>,
    pub generator: Option<GroupElement>,
}

impl LinearGroup {
    pub fn infinite() -> Self {
        Self {
            kind: GroupKind::Infinite,
            elements: Vec::new(),
            generator: None,
        }
    }

    pub fn order(&self) -> Option<usize> {
        match self.kind {
            GroupKind::Infinite => None,
            GroupKind::Finite => Some(self.elements.len()),
        }
    }

    pub fn contains(&self, ell: &LinearPoly) -> bool {
        self.elements.iter().any(|e| e.ell == *ell)
    }

    /// Identity, closure, inverses, and generation by a single element.
    pub fn check_group(&self) -> bool {
        if self.kind == GroupKind::Infinite {
            return true;
        }
        let Some(first) = self.elements.first() else {
            return false;
        };
        if !first.ell.is_identity() {
            return false;
        }
        for a in &self.elements {
            if !self.contains(&a.ell.inverse()) {
                return false;
            }
            for b in &self.elements {
                if !self.contains(&a.ell.compose(&b.ell)) {
                    return false;
                }
            }
        }
        let Some(g) = &self.generator else {
            return self.elements.len() == 1;
        };
        let mut cur = first.ell.clone();
        for e in &self.elements {
            if e.ell != cur {
                return false;
            }
            cur = g.ell.compose(&cur);
        }
        cur.is_identity()
    }

    /// Every element satisfies A∘ℓ = L∘A.
    pub fn verify_for(&self, a: &Poly) -> bool {
        self.elements
            .iter()
            .all(|e| e.ell.compose_right(a) == e.companion.compose_left(a))
    }
}

/// gcd of d - i over the nonzero non-leading coefficients of a normalized form.
fn symmetry_order(form: &Poly) -> usize {
    let d = form.degree();
    form.coeffs()
        .iter()
        .enumerate()
        .take(d)
        .filter(|(_, c)| !c.is_zero())
        .fold(0usize, |g, (i, _)| g.gcd(&(d - i)))
}

fn primitive_root(field: &Field, g: usize) -> Option<Scalar> {
    let w = field.unit_order() as usize;
    w.is_multiple_of(g).then(|| Scalar::root_of_unity(field, (w / g) as u32))
}

fn cyclic_group<F>(field: &Field, order: usize, make: F) -> LinearGroup
where
    F: Fn(&Scalar) -> GroupElement,
{
    let omega = primitive_root(field, order).expect("order divides unit order");
    let mut elements = Vec::with_capacity(order);
    let mut a = Scalar::one();
    for _ in 0..order {
        elements.push(make(&a));
        a = &a * &omega;
    }
    let generator = (order > 1).then(|| make(&omega));
    LinearGroup {
        kind: GroupKind::Finite,
        elements,
        generator,
    }
}

fn gamma_parts(a: &Poly) -> Result<(usize, impl Fn(&Scalar) -> GroupElement)> {
    if a.degree() < 2 {
        return Err(Error::InvalidInput(format!("{a} has degree below 2")));
    }
    let nf = normalize(a);
    let g = symmetry_order(&nf.form);
    let field = a.field().clone();
    let d = a.degree() as i64;
    let make = move |s: &Scalar| {
        let sigma = LinearPoly::scaling(&field, s.clone());
        let ell = nf.inner.compose(&sigma).compose(&nf.inner.inverse());
        let big = LinearPoly::scaling(&field, s.pow(d));
        let companion = nf.outer.inverse().compose(&big).compose(&nf.outer);
        GroupElement { ell, companion }
    };
    Ok((g, make))
}

/// Γ(A). Fails with an extension hint when some element is not defined over
/// the field of A.
pub fn gamma_group(a: &Poly) -> Result<LinearGroup> {
    let (g, make) = gamma_parts(a)?;
    if g == 0 {
        return Ok(LinearGroup::infinite());
    }
    let field = a.field();
    if !(field.unit_order() as usize).is_multiple_of(g) {
        let m = if g % 4 == 2 { g / 2 } else { g };
        let order = (m as u32).lcm(&field.order());
        let order = if order % 4 == 2 { order / 2 } else { order };
        return Err(Error::FieldExtensionRequired(ExtensionHint::new(
            format!("t^{g} = 1"),
            Some(order),
        )));
    }
    Ok(cyclic_group(field, g, make))
}

/// The elements of Γ(A) defined over the field of A, with the order of the
/// full group over the closure (`None` when infinite).
pub fn gamma_group_in_field(a: &Poly) -> Result<(LinearGroup, Option<usize>)> {
    let (g, make) = gamma_parts(a)?;
    if g == 0 {
        return Ok((LinearGroup::infinite(), None));
    }
    let sub = g.gcd(&(a.field().unit_order() as usize));
    Ok((cyclic_group(a.field(), sub, make), Some(g)))
}

/// Result of [`m_infinity`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MInfinity {
    /// Elements defined over the working field.
    pub group: LinearGroup,
    /// Order of the group found over the closure.
    pub closure_order: usize,
    pub iter_bound: u32,
    /// Whether doubling the bound gives the same group; `None` when the
    /// doubled iterate exceeds the degree budget.
    pub stable: Option<bool>,
}

const STABILITY_DEGREE_BUDGET: usize = 243;

fn commuting_order(centered_iter: &Poly) -> usize {
    centered_iter
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(i, c)| !c.is_zero() && *i != 1)
        .fold(0usize, |g, (i, _)| g.gcd(&(i as isize - 1).unsigned_abs()))
}

fn closure_m_order(fc: &Poly, bound: u32) -> Result<usize> {
    let mut order = 1usize;
    let mut it = fc.clone();
    for k in 1..=bound {
        if k > 1 {
            if it.degree() * fc.degree() > DEFAULT_DEGREE_CAP {
                return Err(crate::error::cap_error("m_infinity", it.degree() * fc.degree(), DEFAULT_DEGREE_CAP));
            }
            it = fc.compose_unchecked(&it);
        }
        let h = commuting_order(&it);
        if h > 0 {
            order = order.lcm(&h);
        }
    }
    Ok(order)
}

/// Linear maps commuting with some f^k, k ≤ `iter_bound`, restricted to the
/// field of f.
pub fn m_infinity(f: &Poly, iter_bound: u32) -> Result<MInfinity> {
    m_infinity_inner(f, iter_bound, true)
}

fn m_infinity_inner(f: &Poly, iter_bound: u32, check_stable: bool) -> Result<MInfinity> {
    if f.degree() < 2 || iter_bound == 0 {
        return Err(Error::InvalidInput("m_infinity needs degree ≥ 2 and a positive bound".into()));
    }
    let field = f.field();
    let (fc, tau) = conjugacy::centered(f);
    let order = closure_m_order(&fc, iter_bound)?;
    let stable = if check_stable && f.degree().pow(2 * iter_bound) <= STABILITY_DEGREE_BUDGET {
        Some(closure_m_order(&fc, 2 * iter_bound)? == order)
    } else {
        None
    };
    let sub = order.gcd(&(field.unit_order() as usize));
    let group = cyclic_group(field, sub, |a| {
        let ell = tau
            .inverse()
            .compose(&LinearPoly::scaling(field, a.clone()))
            .compose(&tau);
        GroupElement {
            companion: ell.clone(),
            ell,
        }
    });
    Ok(MInfinity {
        group,
        closure_order: order,
        iter_bound,
        stable,
    })
}

/// Smallest n ≤ bound with g∘f^n = f^n∘g.
pub fn commutes_with_iterate(f: &Poly, g: &Poly, bound: u32) -> Result<Option<u32>> {
    f.field().ensure_same(g.field())?;
    if f.degree() < 2 || g.is_constant() {
        return Err(Error::InvalidInput("need deg f ≥ 2 and nonconstant g".into()));
    }
    let mut it = Poly::x(f.field());
    for n in 1..=bound {
        it = f.compose_capped(&it, DEFAULT_DEGREE_CAP)?;
        if g.degree() * it.degree() > DEFAULT_DEGREE_CAP {
            return Err(crate::error::cap_error("commutes_with_iterate", g.degree() * it.degree(), DEFAULT_DEGREE_CAP));
        }
        if g.compose_unchecked(&it) == it.compose_unchecked(g) {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Result of [`common_commuting_iterate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommonIterate {
    pub n: u32,
    /// Whether n ≤ deg(f)/2.
    pub within_half_degree: bool,
}

/// Smallest n ≤ bound such that f^n commutes with all of M(f^∞) (as found
/// with the same bound).
pub fn common_commuting_iterate(f: &Poly, bound: u32) -> Result<Option<CommonIterate>> {
    let m = m_infinity_inner(f, bound, false)?;
    let mut it = Poly::x(f.field());
    for n in 1..=bound {
        it = f.compose_capped(&it, DEFAULT_DEGREE_CAP)?;
        let ok = m
            .group
            .elements
            .iter()
            .all(|e| e.ell.compose_right(&it) == e.ell.compose_left(&it));
        if ok {
            return Ok(Some(CommonIterate {
                n,
                within_half_degree: 2 * n as usize <= f.degree(),
            }));
        }
    }
    Ok(None)
}

/// Output of [`align_iterates`]: f^N = (ℓ∘g∘ℓ⁻¹)^N.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alignment {
    pub ell: LinearPoly,
    pub big_n: u32,
    /// L_0 = x, ..., L_n = L with f∘L_i = L_{i+1}∘g.
    pub chain: Vec<LinearPoly>,
    /// Whether N ≤ deg/2. Reported, not enforced.
    pub within_half_degree: bool,
}

impl Alignment {
    pub fn verify(&self, f: &Poly, g: &Poly) -> bool {
        let lhs = f.iterate(self.big_n);
        let conj = self.ell.conjugate(g).and_then(|h| h.iterate(self.big_n));
        matches!((lhs, conj), (Ok(a), Ok(b)) if a == b)
    }
}

/// Given f^n = L∘g^n, peels off one g at a time and finds L_i = L_j.
pub fn align_iterates(f: &Poly, g: &Poly, big_l: &LinearPoly, n: u32) -> Result<Alignment> {
    f.field().ensure_same(g.field())?;
    let d = f.degree();
    if d < 2 || g.degree() != d {
        return Err(Error::Hypothesis("f and g must share a degree ≥ 2".into()));
    }
    if 2 * n as usize <= d {
        return Err(Error::Hypothesis(format!("need n ≥ (δ + 1)/2; got n = {n}, δ = {d}")));
    }
    for p in [f, g] {
        if conjugacy::classify(p)?.is_cyclic {
            return Err(Error::Hypothesis(format!("{p} is cyclic")));
        }
    }
    let fnn = f.iterate(n)?;
    let gnn = g.iterate(n)?;
    if fnn != big_l.compose_left(&gnn) {
        return Err(Error::Hypothesis("f^n differs from L∘g^n".into()));
    }
    let field = f.field();
    let mut chain = vec![LinearPoly::identity(field)];
    for _ in 0..n {
        let prev = chain.last().expect("nonempty");
        let lhs = prev.compose_left(&Poly::x(field));
        let lhs = f.compose_unchecked(&lhs);
        let next = left_factor_solve(&lhs, g)?
            .and_then(|p| LinearPoly::from_poly(&p))
            .ok_or_else(|| Error::Hypothesis("peeling step is not linear".into()))?;
        chain.push(next);
    }
    if chain.last() != Some(big_l) {
        return Err(Error::Hypothesis("peeling did not end at L".into()));
    }
    let mut best: Option<(usize, usize)> = None;
    for i in 0..chain.len() {
        for j in i + 1..chain.len() {
            if chain[i] == chain[j] {
                let better = match best {
                    None => true,
                    Some((bi, bj)) => j - i < bj - bi,
                };
                if better {
                    best = Some((i, j));
                }
                break;
            }
        }
    }
    let (i, j) = best.ok_or_else(|| Error::SearchExhausted("no repeated L_i in the peeling chain".into()))?;
    let big_n = (j - i) as u32;
    let out = Alignment {
        ell: chain[i].clone(),
        big_n,
        within_half_degree: 2 * (j - i) <= d,
        chain,
    };
    if !out.verify(f, g) {
        return Err(Error::Hypothesis("alignment identity failed".into()));
    }
    Ok(out)
}
