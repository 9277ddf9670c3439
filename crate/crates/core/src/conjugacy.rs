//! Linear conjugacy and equivalence: cyclic, dihedral and disintegrated
//! polynomials, and the x^s P(x^n) normal form.

use num_integer::Integer;

use crate::algebra::roots::{solve_power_system, PowerSolve};
use crate::algebra::{LinearPoly, Poly, Scalar};
use crate::error::{Error, ExtensionHint, Result};

/// A linear witness, or the equation that needs a larger field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    InField(LinearPoly),
    NeedsExtension(ExtensionHint),
}

impl Witness {
    pub fn in_field(&self) -> Option<&LinearPoly> {
        match self {
            Witness::InField(l) => Some(l),
            Witness::NeedsExtension(_) => None,
        }
    }
}

/// A polynomial brought to monic form with zero x^{d-1} and constant terms:
/// `form = outer ∘ f ∘ inner`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalized {
    pub form: Poly,
    pub inner: LinearPoly,
    pub outer: LinearPoly,
}

/// Translation t with f(x - t) free of x^{d-1}.
pub fn center_shift(f: &Poly) -> Scalar {
    let d = f.degree();
    &f.coeff(d - 1) / &(&f.lc() * &Scalar::from_int(d as i64))
}

/// τ∘f∘τ⁻¹ with τ = x + t, which has no x^{d-1} term; returns (centered, τ).
pub fn centered(f: &Poly) -> (Poly, LinearPoly) {
    let tau = LinearPoly::translation(f.field(), center_shift(f));
    let c = tau.conjugate(f).expect("same field");
    (c, tau)
}

pub fn normalize(f: &Poly) -> Normalized {
    assert!(f.degree() >= 2, "normalization needs degree at least 2");
    let field = f.field();
    let inner = LinearPoly::translation(field, -center_shift(f));
    let shifted = inner.compose_right(f);
    let lc_inv = shifted.lc().inv().expect("nonzero");
    let outer = LinearPoly::new(field, lc_inv.clone(), -(&shifted.coeff(0) * &lc_inv));
    let form = outer.compose_left(&shifted);
    Normalized { form, inner, outer }
}

fn check_degree(f: &Poly) -> Result<()> {
    if f.degree() < 2 {
        return Err(Error::InvalidInput(format!("{f} has degree below 2")));
    }
    Ok(())
}

/// All linear ℓ in the field with ℓ∘f∘ℓ⁻¹ = g, or the hint if ℓ exists only
/// over an extension. `Ok(vec![])` means no ℓ exists over any field.
pub fn linear_conjugacies(f: &Poly, g: &Poly) -> Result<Vec<LinearPoly>> {
    f.field().ensure_same(g.field())?;
    check_degree(f)?;
    if f.degree() != g.degree() {
        return Ok(Vec::new());
    }
    let (fc, tf) = centered(f);
    let (gc, tg) = centered(g);
    if fc.coeff(1) != gc.coeff(1) {
        return Ok(Vec::new());
    }
    // a f̂(x/a) = ĝ: ĝ_i = a^{1-i} f̂_i
    let mut eqs = Vec::new();
    for i in (0..=f.degree()).filter(|&i| i != 1) {
        let (fi, gi) = (fc.coeff(i), gc.coeff(i));
        match (fi.is_zero(), gi.is_zero()) {
            (true, true) => {}
            (true, false) | (false, true) => return Ok(Vec::new()),
            (false, false) => {
                if i == 0 {
                    eqs.push((1, &gi / &fi));
                } else {
                    eqs.push(((i - 1) as u32, &fi / &gi));
                }
            }
        }
    }
    let scalings = match solve_power_system(f.field(), &eqs) {
        PowerSolve::Solutions(s) => s,
        PowerSolve::Inconsistent => return Ok(Vec::new()),
        PowerSolve::NeedsExtension(h) => return Err(Error::FieldExtensionRequired(h)),
        PowerSolve::Unconstrained => vec![Scalar::one()],
    };
    let mut out = Vec::new();
    for a in scalings {
        let sigma = LinearPoly::scaling(f.field(), a);
        let ell = tg.inverse().compose(&sigma).compose(&tf);
        if ell.conjugate(f)? == *g {
            out.push(ell);
        }
    }
    Ok(out)
}

/// One ℓ with ℓ∘f∘ℓ⁻¹ = g, if it exists in the field.
pub fn linear_conjugacy(f: &Poly, g: &Poly) -> Result<Option<LinearPoly>> {
    Ok(linear_conjugacies(f, g)?.into_iter().next())
}

fn conj_witness(f: &Poly, g: &Poly) -> Option<Witness> {
    match linear_conjugacy(f, g) {
        Ok(Some(l)) => Some(Witness::InField(l)),
        Ok(None) => None,
        Err(Error::FieldExtensionRequired(h)) => Some(Witness::NeedsExtension(h)),
        Err(e) => panic!("unexpected error in conjugacy test: {e}"),
    }
}

/// Scalings a with N(g)(x) = a^{-d} N(f)(a x), as a power system.
fn equivalence_scalings(nf: &Poly, ng: &Poly) -> PowerSolve {
    let d = nf.degree();
    let mut eqs = Vec::new();
    for i in 1..d {
        let (fi, gi) = (nf.coeff(i), ng.coeff(i));
        match (fi.is_zero(), gi.is_zero()) {
            (true, true) => {}
            (true, false) | (false, true) => return PowerSolve::Inconsistent,
            (false, false) => eqs.push(((d - i) as u32, &fi / &gi)),
        }
    }
    solve_power_system(nf.field(), &eqs)
}

/// Linear (L1, L2) with L2∘f∘L1 = g.
///
/// `Ok(None)` means f and g are not equivalent over any field;
/// `Err(FieldExtensionRequired)` means they are, but not over this one.
pub fn equivalence_witness(f: &Poly, g: &Poly) -> Result<Option<(LinearPoly, LinearPoly)>> {
    f.field().ensure_same(g.field())?;
    if f.is_constant() || g.is_constant() {
        return Err(Error::InvalidInput("equivalence needs nonconstant inputs".into()));
    }
    if f.degree() != g.degree() {
        return Ok(None);
    }
    let field = f.field();
    if f.degree() == 1 {
        let lf = LinearPoly::from_poly(f).expect("linear");
        let lg = LinearPoly::from_poly(g).expect("linear");
        return Ok(Some((LinearPoly::identity(field), lg.compose(&lf.inverse()))));
    }
    let nf = normalize(f);
    let ng = normalize(g);
    let a = match equivalence_scalings(&nf.form, &ng.form) {
        PowerSolve::Unconstrained => Scalar::one(),
        PowerSolve::Solutions(s) => s.into_iter().next().expect("nonempty"),
        PowerSolve::Inconsistent => return Ok(None),
        PowerSolve::NeedsExtension(h) => return Err(Error::FieldExtensionRequired(h)),
    };
    let d = f.degree() as i64;
    let sigma_in = LinearPoly::scaling(field, a.clone());
    let sigma_out = LinearPoly::scaling(field, a.pow(-d));
    let l1 = nf.inner.compose(&sigma_in).compose(&ng.inner.inverse());
    let l2 = ng.outer.inverse().compose(&sigma_out).compose(&nf.outer);
    debug_assert_eq!(l2.compose_left(&l1.compose_right(f)), *g);
    Ok(Some((l1, l2)))
}

/// True when f and g are equivalent over the algebraic closure.
pub fn equivalent_over_closure(f: &Poly, g: &Poly) -> bool {
    match equivalence_witness(f, g) {
        Ok(w) => w.is_some(),
        Err(Error::FieldExtensionRequired(_)) => true,
        Err(e) => panic!("unexpected error in equivalence test: {e}"),
    }
}

/// Shape of a polynomial up to linear changes of variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapeReport {
    pub is_cyclic: bool,
    /// Equivalent to T_d by linear maps defined over the working field.
    pub is_dihedral: bool,
    /// Equivalent to T_d over the algebraic closure.
    pub dihedral_over_closure: bool,
    /// ℓ with ℓ∘f∘ℓ⁻¹ = x^d.
    pub conj_to_power: Option<Witness>,
    /// (sign, ℓ) with ℓ∘f∘ℓ⁻¹ = sign·T_d.
    pub conj_to_pm_chebyshev: Option<(i8, Witness)>,
    pub disintegrated: bool,
}

/// Classifies f over the algebraic closure; witnesses are in-field when
/// possible and otherwise carry an extension hint.
pub fn classify(f: &Poly) -> Result<ShapeReport> {
    check_degree(f)?;
    let field = f.field();
    let d = f.degree();
    let nf = normalize(f);
    let is_cyclic = nf.form == Poly::x_pow(field, d);
    let cheb = Poly::chebyshev(field, d);
    let (is_dihedral, dihedral_over_closure) = if d >= 3 {
        match equivalence_witness(f, &cheb) {
            Ok(w) => (w.is_some(), w.is_some()),
            Err(Error::FieldExtensionRequired(_)) => (false, true),
            Err(e) => return Err(e),
        }
    } else {
        (false, false)
    };
    let conj_to_power = conj_witness(f, &Poly::x_pow(field, d));
    let mut conj_to_pm_chebyshev = None;
    for sign in [1i8, -1] {
        let target = if sign == 1 { cheb.clone() } else { -&cheb };
        match conj_witness(f, &target) {
            Some(w @ Witness::InField(_)) => {
                conj_to_pm_chebyshev = Some((sign, w));
                break;
            }
            Some(w) if conj_to_pm_chebyshev.is_none() => conj_to_pm_chebyshev = Some((sign, w)),
            _ => {}
        }
    }
    let disintegrated = conj_to_power.is_none() && conj_to_pm_chebyshev.is_none();
    Ok(ShapeReport {
        is_cyclic,
        is_dihedral,
        dihedral_over_closure,
        conj_to_power,
        conj_to_pm_chebyshev,
        disintegrated,
    })
}

pub fn is_disintegrated(f: &Poly) -> bool {
    f.degree() >= 2 && classify(f).map(|r| r.disintegrated).unwrap_or(false)
}

/// ℓ1∘A∘ℓ2 = x^s P(x^n) with P not a polynomial in any x^j, j ≥ 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerNormalForm {
    pub ell1: LinearPoly,
    pub ell2: LinearPoly,
    pub s: usize,
    pub n: usize,
    pub p: Poly,
}

impl PowerNormalForm {
    pub fn verify(&self, a: &Poly) -> bool {
        let field = a.field();
        let lhs = self.ell1.compose_left(&self.ell2.compose_right(a));
        let rhs = &Poly::x_pow(field, self.s) * &self.p.inflate(self.n);
        lhs == rhs && (2..=self.p.degree()).all(|j| self.p.deflate(j).is_none())
    }
}

/// The x^s P(x^n) form of A, or `None` when A is cyclic.
pub fn power_normal_form(a: &Poly) -> Result<Option<PowerNormalForm>> {
    check_degree(a)?;
    let nf = normalize(a);
    let form = &nf.form;
    let d = a.degree();
    if *form == Poly::x_pow(a.field(), d) {
        return Ok(None);
    }
    let s = form.valuation();
    let n = form
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(i, c)| !c.is_zero() && *i > s)
        .fold(0usize, |g, (i, _)| g.gcd(&(i - s)));
    let shifted = Poly::new(a.field(), form.coeffs()[s..].to_vec());
    let p = shifted.deflate(n).expect("gcd of exponents");
    let out = PowerNormalForm {
        ell1: nf.outer,
        ell2: nf.inner,
        s,
        n,
        p,
    };
    debug_assert!(out.verify(a));
    Ok(Some(out))
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

    #[test]
    fn classify_examples() {
        let r = classify(&p(&[1, 0, 1])).unwrap();
        assert!(r.disintegrated && r.is_cyclic && !r.is_dihedral);

        let l = LinearPoly::from_ints(&q(), 1, 3);
        let f = l.conjugate(&Poly::chebyshev(&q(), 4)).unwrap();
        let r = classify(&f).unwrap();
        assert!(r.is_dihedral && !r.disintegrated);
        let (sign, w) = r.conj_to_pm_chebyshev.unwrap();
        assert_eq!(sign, 1);
        let ell = w.in_field().unwrap();
        assert_eq!(ell.conjugate(&f).unwrap(), Poly::chebyshev(&q(), 4));

        let r = classify(&p(&[0, 1, 0, 1])).unwrap();
        assert!(r.disintegrated && !r.is_cyclic && !r.is_dihedral);
        // every non-cyclic cubic is equivalent to T_3 once sqrt(-3) is available
        assert!(r.dihedral_over_closure);
    }

    #[test]
    fn equivalence_examples() {
        let (l1, l2) = equivalence_witness(&p(&[0, 0, 1]), &p(&[1, 0, 1])).unwrap().unwrap();
        assert!(l1.is_identity());
        assert_eq!(l2, LinearPoly::from_ints(&q(), 1, 1));

        let f = p(&[0, 1, 0, 1]);
        let err = equivalence_witness(&f, &p(&[0, -3, 0, 1])).unwrap_err();
        assert!(matches!(err, Error::FieldExtensionRequired(_)));

        let (l1, l2) = equivalence_witness(&f, &f).unwrap().unwrap();
        assert!(l1.is_identity() && l2.is_identity());
    }

    #[test]
    fn equivalence_needs_extension_then_found() {
        let k = Field::cyclotomic(3).unwrap();
        let f = Poly::from_ints(&k, &[0, 1, 0, 1]);
        let g = Poly::from_ints(&k, &[0, -3, 0, 1]);
        let (l1, l2) = equivalence_witness(&f, &g).unwrap().unwrap();
        assert_eq!(l2.compose_left(&l1.compose_right(&f)), g);
    }

    #[test]
    fn power_normal_form_examples() {
        let f = p(&[0, 1, 0, 1]);
        let nf = power_normal_form(&f).unwrap().unwrap();
        assert_eq!((nf.s, nf.n), (1, 2));
        assert_eq!(nf.p, p(&[1, 1]));
        assert!(nf.ell1.is_identity() && nf.ell2.is_identity());
        assert!(power_normal_form(&p(&[1, 0, 1])).unwrap().is_none());
        assert!(power_normal_form(&Poly::x_pow(&q(), 5)).unwrap().is_none());
    }

    #[test]
    fn powers_and_chebyshev_not_disintegrated() {
        for d in 2..=8 {
            assert!(!classify(&Poly::x_pow(&q(), d)).unwrap().disintegrated);
            let t = Poly::chebyshev(&q(), d);
            assert!(!classify(&t).unwrap().disintegrated);
            assert!(!classify(&-&t).unwrap().disintegrated);
        }
    }
}
