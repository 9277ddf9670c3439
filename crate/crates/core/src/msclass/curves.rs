//! Plane curves under split maps (x, y) ↦ (f(x), g(y)): images, periods,
//! and the diagonal curves y = g(x) attached to a single map.

use crate::algebra::bivar::sylvester_resultant;
use crate::algebra::{BiPoly, BivarCurve, LinearPoly, Poly, Scalar, DEFAULT_DEGREE_CAP};
use crate::error::{cap_error, Error, Result};
use crate::semiconj::solve_p;
use crate::symmetry::{commutes_with_iterate, m_infinity};

/// Closure of (f × g)(C), squarefree.
pub fn curve_image(c: &BivarCurve, f: &Poly, g: &Poly) -> Result<BivarCurve> {
    let field = c.field();
    field.ensure_same(f.field())?;
    field.ensure_same(g.field())?;
    if f.is_constant() || g.is_constant() {
        return Err(Error::InvalidInput("f and g must be nonconstant".into()));
    }
    let gp = c.poly();
    if gp.degree_x() == 0 && gp.degree_y() == 0 {
        return Err(Error::InvalidInput("constant curve polynomial".into()));
    }
    let est = (gp.degree_x() + gp.degree_y()) * f.degree() * g.degree();
    if est > DEFAULT_DEGREE_CAP {
        return Err(cap_error("curve_image", est, DEFAULT_DEGREE_CAP));
    }
    // Coefficients in K[u, y] (BiPoly with X = u, Y = y), polynomial in x.
    let g_in_x: Vec<BiPoly> = gp.rows().iter().map(BiPoly::from_y).collect();
    let mut f_minus_u: Vec<BiPoly> = f
        .coeffs()
        .iter()
        .map(|a| BiPoly::from_y(&Poly::constant(field, a.clone())))
        .collect();
    f_minus_u[0] = &f_minus_u[0] - &BiPoly::from_x(&Poly::x(field));
    let r1 = sylvester_resultant(&g_in_x, &f_minus_u, BiPoly::one(field));
    if r1.is_zero() {
        return Err(Error::Collapsed("first elimination vanished".into()));
    }
    // Now a polynomial in y with coefficients in K[u, v].
    let r1t = r1.transpose();
    let r1_in_y: Vec<BiPoly> = r1t.rows().iter().map(BiPoly::from_x).collect();
    let mut g_minus_v: Vec<BiPoly> = g
        .coeffs()
        .iter()
        .map(|a| BiPoly::from_x(&Poly::constant(field, a.clone())))
        .collect();
    g_minus_v[0] = &g_minus_v[0] - &BiPoly::from_y(&Poly::x(field));
    let r2 = if r1_in_y.len() == 1 {
        // no y left: the image is r1(u) = 0 in the plane
        r1_in_y[0].clone()
    } else {
        sylvester_resultant(&r1_in_y, &g_minus_v, BiPoly::one(field))
    };
    if r2.is_zero() || (r2.degree_x() == 0 && r2.degree_y() == 0) {
        return Err(Error::Collapsed("image elimination degenerated".into()));
    }
    BivarCurve::new(r2.squarefree_part())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodCertificate {
    pub curve: BivarCurve,
    pub period: u32,
    /// image_chain[0] = curve, image_chain[k] = image of image_chain[k-1].
    pub image_chain: Vec<BivarCurve>,
}

impl PeriodCertificate {
    /// Recomputes every link and the minimality scan.
    pub fn verify(&self, f: &Poly, g: &Poly) -> bool {
        let p = self.period as usize;
        if p == 0 || self.image_chain.len() != p + 1 || self.image_chain[0] != self.curve {
            return false;
        }
        for k in 1..=p {
            match curve_image(&self.image_chain[k - 1], f, g) {
                Ok(img) if img == self.image_chain[k] => {}
                _ => return false,
            }
        }
        self.image_chain[p] == self.curve && self.image_chain[1..p].iter().all(|c| *c != self.curve)
    }
}

/// Whether (f^P × g^P)(C) ⊆ C, tested as G | G(f^P(x), g^P(y)).
fn maps_into(c: &BivarCurve, fp: &Poly, gp: &Poly) -> bool {
    let pulled = c.poly().compose_split(fp, gp);
    pulled.exact_div(c.poly()).is_some()
}

/// Minimal period ≤ `n_max` with its image chain, or `None`.
///
/// The period is found by the divisibility test above (cheap even when the
/// chain would have large degree), then the chain is computed link by link.
pub fn curve_period(c: &BivarCurve, f: &Poly, g: &Poly, n_max: u32) -> Result<Option<PeriodCertificate>> {
    let field = c.field();
    field.ensure_same(f.field())?;
    field.ensure_same(g.field())?;
    if n_max == 0 {
        return Err(Error::InvalidInput("N_max must be positive".into()));
    }
    if f.is_constant() || g.is_constant() {
        return Err(Error::InvalidInput("f and g must be nonconstant".into()));
    }
    let mut fp = Poly::x(field);
    let mut gp = Poly::x(field);
    let mut period = None;
    for n in 1..=n_max {
        fp = f.compose_capped(&fp, DEFAULT_DEGREE_CAP)?;
        gp = g.compose_capped(&gp, DEFAULT_DEGREE_CAP)?;
        let size = c.degree_x() * fp.degree() + c.degree_y() * gp.degree();
        if size > DEFAULT_DEGREE_CAP {
            return Err(cap_error("curve_period", size, DEFAULT_DEGREE_CAP));
        }
        if maps_into(c, &fp, &gp) {
            period = Some(n);
            break;
        }
    }
    let Some(period) = period else {
        return Ok(None);
    };
    let mut chain = vec![c.clone()];
    for _ in 0..period {
        let next = curve_image(chain.last().expect("nonempty"), f, g)?;
        chain.push(next);
    }
    let cert = PeriodCertificate {
        curve: c.clone(),
        period,
        image_chain: chain,
    };
    if !cert.verify(f, g) {
        return Err(Error::Hypothesis(
            "image chain does not close up; the curve is probably reducible".into(),
        ));
    }
    Ok(Some(cert))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProjectionProfile {
    pub x_constant: bool,
    pub y_constant: bool,
}

/// Constant projections: the curve is a union of vertical (x_constant) or
/// horizontal (y_constant) lines.
pub fn projection_profile(c: &BivarCurve) -> ProjectionProfile {
    ProjectionProfile {
        x_constant: c.degree_y() == 0,
        y_constant: c.degree_x() == 0,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalCurve {
    pub g: Poly,
    /// x = g(y) rather than y = g(x).
    pub mirrored: bool,
    pub curve: BivarCurve,
    /// Smallest n with g∘f^n = f^n∘g.
    pub commuting_iterate: u32,
    pub certificate: PeriodCertificate,
}

/// Curves y = g(x) and x = g(y) with g = f^m∘L, L ∈ M(f^∞), deg g ≤ `deg_cap`,
/// and g commuting with some f^n, n ≤ `iter_bound`.
pub fn ms_diagonal_curves(f: &Poly, deg_cap: usize, iter_bound: u32) -> Result<Vec<DiagonalCurve>> {
    if !crate::conjugacy::is_disintegrated(f) {
        return Err(Error::Hypothesis(format!("{f} is not disintegrated")));
    }
    if deg_cap == 0 {
        return Err(Error::InvalidInput("deg_cap must be positive".into()));
    }
    let field = f.field();
    let m = m_infinity(f, iter_bound)?;
    let mut out: Vec<DiagonalCurve> = Vec::new();
    let mut iterate = Poly::x(field);
    while iterate.degree() <= deg_cap {
        for el in &m.group.elements {
            let g = el.ell.compose_right(&iterate);
            let Some(n) = commutes_with_iterate(f, &g, iter_bound)? else {
                continue;
            };
            for mirrored in [false, true] {
                let curve = if mirrored { BivarCurve::graph_mirror(&g) } else { BivarCurve::graph(&g) };
                if out.iter().any(|d| d.curve == curve) {
                    continue;
                }
                let certificate = curve_period(&curve, f, f, n)?
                    .ok_or_else(|| Error::Hypothesis(format!("{curve} is not periodic")))?;
                out.push(DiagonalCurve {
                    g: g.clone(),
                    mirrored,
                    curve,
                    commuting_iterate: n,
                    certificate,
                });
            }
        }
        if iterate.degree() * f.degree() > deg_cap {
            break;
        }
        iterate = f.compose_unchecked(&iterate);
    }
    Ok(out)
}

fn line_pool(field: &crate::Field, bound: i64) -> Vec<BivarCurve> {
    let mut out: Vec<BivarCurve> = Vec::new();
    for a in -bound..=bound {
        for b in -bound..=bound {
            if a == 0 || b == 0 {
                continue;
            }
            for c in -bound..=bound {
                let lx = LinearPoly::new(field, Scalar::from_int(a), Scalar::from_int(c));
                let poly = &BiPoly::from_x(&lx.to_poly()) + &BiPoly::from_y(&Poly::monomial(field, Scalar::from_int(b), 1));
                let curve = BivarCurve::new(poly).expect("nonzero");
                if !out.contains(&curve) {
                    out.push(curve);
                }
            }
        }
    }
    out
}

/// Periodic curves with both projections nonconstant among graphs y = p(x),
/// x = p(y) (deg p ≤ `deg_cap`, found exactly through solve_p) and a small
/// pool of lines, for periods up to `n_max`.
pub fn search_periodic_graph_curves(
    f: &Poly,
    g: &Poly,
    n_max: u32,
    deg_cap: usize,
) -> Result<Vec<PeriodCertificate>> {
    f.field().ensure_same(g.field())?;
    if f.degree() < 2 || f.degree() != g.degree() {
        return Err(Error::InvalidInput("need deg f = deg g ≥ 2".into()));
    }
    let mut candidates: Vec<BivarCurve> = Vec::new();
    let mut fnn = Poly::x(f.field());
    let mut gnn = Poly::x(f.field());
    for _ in 0..n_max {
        fnn = f.compose_capped(&fnn, DEFAULT_DEGREE_CAP)?;
        gnn = g.compose_capped(&gnn, DEFAULT_DEGREE_CAP)?;
        let cap = deg_cap.min(DEFAULT_DEGREE_CAP / fnn.degree());
        if cap == 0 {
            return Err(cap_error("search_periodic_graph_curves", fnn.degree() * deg_cap, DEFAULT_DEGREE_CAP));
        }
        // y = p(x) is periodic iff g^N∘p = p∘f^N
        for p in solve_p(&gnn, &fnn, cap)?.solutions {
            candidates.push(BivarCurve::graph(&p));
        }
        for p in solve_p(&fnn, &gnn, cap)?.solutions {
            candidates.push(BivarCurve::graph_mirror(&p));
        }
    }
    candidates.extend(line_pool(f.field(), 2));
    let mut out: Vec<PeriodCertificate> = Vec::new();
    for c in candidates {
        let prof = projection_profile(&c);
        if prof.x_constant || prof.y_constant || out.iter().any(|o| o.curve == c) {
            continue;
        }
        if let Some(cert) = curve_period(&c, f, g, n_max)? {
            out.push(cert);
        }
    }
    Ok(out)
}
