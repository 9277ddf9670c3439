//! Bivariate polynomials, Sylvester resultants and plane curves.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::Field;
use super::poly::Poly;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Polynomial in X and Y, stored as `rows[i]` = coefficient of X^i (a
/// polynomial in Y). No trailing zero rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BiPoly {
    field: Field,
    rows: Vec<Poly>,
}

impl BiPoly {
    pub fn new(field: &Field, mut rows: Vec<Poly>) -> Self {
        for r in &rows {
            assert!(r.field() == field, "row outside field");
        }
        while rows.last().is_some_and(Poly::is_zero) {
            rows.pop();
        }
        Self {
            field: field.clone(),
            rows,
        }
    }

    pub fn zero(field: &Field) -> Self {
        Self::new(field, Vec::new())
    }

    pub fn one(field: &Field) -> Self {
        Self::from_y(&Poly::one(field))
    }

    /// A polynomial in Y only.
    pub fn from_y(p: &Poly) -> Self {
        Self::new(p.field(), vec![p.clone()])
    }

    /// A polynomial in X only.
    pub fn from_x(p: &Poly) -> Self {
        let rows = p
            .coeffs()
            .iter()
            .map(|c| Poly::constant(p.field(), c.clone()))
            .collect();
        Self::new(p.field(), rows)
    }

    /// Builds from a dense grid `grid[i][j]` = coefficient of X^i Y^j.
    pub fn from_grid(field: &Field, grid: Vec<Vec<Scalar>>) -> Self {
        Self::new(field, grid.into_iter().map(|r| Poly::new(field, r)).collect())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> &[Poly] {
        &self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn degree_x(&self) -> usize {
        self.rows.len().saturating_sub(1)
    }

    pub fn degree_y(&self) -> usize {
        self.rows.iter().map(Poly::degree).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> usize {
        self.terms().map(|(i, j, _)| i + j).max().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize, j: usize) -> Scalar {
        self.rows.get(i).map(|r| r.coeff(j)).unwrap_or_else(Scalar::zero)
    }

    /// Nonzero terms as (x-degree, y-degree, coefficient).
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> + '_ {
        self.rows.iter().enumerate().flat_map(|(i, r)| {
            r.coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(move |(j, c)| (i, j, c))
        })
    }

    pub fn eval(&self, x: &Scalar, y: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for r in self.rows.iter().rev() {
            acc = &(&acc * x) + &r.eval(y);
        }
        acc
    }

    /// Swaps the roles of X and Y.
    pub fn transpose(&self) -> BiPoly {
        let dy = self.degree_y();
        let mut grid = vec![vec![Scalar::zero(); self.rows.len()]; dy + 1];
        for (i, j, c) in self.terms() {
            grid[j][i] = c.clone();
        }
        Self::from_grid(&self.field, grid)
    }

    pub fn scale(&self, c: &Scalar) -> BiPoly {
        Self::new(&self.field, self.rows.iter().map(|r| r.scale(c)).collect())
    }

    /// Multiplies every row by a polynomial in Y.
    pub fn mul_y(&self, p: &Poly) -> BiPoly {
        Self::new(&self.field, self.rows.iter().map(|r| r * p).collect())
    }

    /// Multiplies by X^s.
    pub fn shift_x(&self, s: usize) -> BiPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut rows = vec![Poly::zero(&self.field); s];
        rows.extend(self.rows.iter().cloned());
        Self::new(&self.field, rows)
    }

    pub fn d_dx(&self) -> BiPoly {
        let rows = self
            .rows
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, r)| r.scale(&Scalar::from_int(i as i64)))
            .collect();
        Self::new(&self.field, rows)
    }

    pub fn d_dy(&self) -> BiPoly {
        Self::new(&self.field, self.rows.iter().map(Poly::derivative).collect())
    }

    fn top_row(&self) -> &Poly {
        self.rows.last().expect("nonzero")
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &BiPoly) -> Option<BiPoly> {
        assert!(!d.is_zero(), "division by zero");
        let mut r = self.clone();
        let mut q = vec![Poly::zero(&self.field); self.rows.len().saturating_sub(d.degree_x()).max(1)];
        while !r.is_zero() {
            if r.degree_x() < d.degree_x() {
                return None;
            }
            let shift = r.degree_x() - d.degree_x();
            let c = r.top_row().exact_div(d.top_row())?;
            let before = r.degree_x();
            r = &r - &d.mul_y(&c).shift_x(shift);
            if !r.is_zero() && r.degree_x() >= before {
                return None;
            }
            q[shift] = c;
        }
        Some(Self::new(&self.field, q))
    }

    /// Applies (X, Y) ↦ (f(X), g(Y)).
    pub fn compose_split(&self, f: &Poly, g: &Poly) -> BiPoly {
        let fx = BiPoly::from_x(f);
        let mut acc = BiPoly::zero(&self.field);
        for r in self.rows.iter().rev() {
            acc = &(&acc * &fx) + &BiPoly::from_y(&r.compose_unchecked(g));
        }
        acc
    }

    /// Content with respect to X: monic gcd of the rows in K[Y].
    fn content_x(&self) -> Poly {
        self.rows
            .iter()
            .fold(Poly::zero(&self.field), |acc, r| acc.gcd(r))
    }

    fn primitive_x(&self) -> (Poly, BiPoly) {
        let c = self.content_x();
        let rows = self
            .rows
            .iter()
            .map(|r| r.exact_div(&c).expect("content divides rows"))
            .collect();
        (c, Self::new(&self.field, rows))
    }

    fn pseudo_rem(&self, b: &BiPoly) -> BiPoly {
        let lc = b.top_row().clone();
        let n = b.degree_x();
        let mut r = self.clone();
        let mut e = (self.degree_x() + 1).saturating_sub(n);
        while !r.is_zero() && r.degree_x() >= n {
            let t = r.top_row().clone();
            let s = r.degree_x() - n;
            r = &r.mul_y(&lc) - &b.mul_y(&t).shift_x(s);
            e = e.saturating_sub(1);
        }
        r.mul_y(&lc.pow(e as u32))
    }

    /// A gcd, up to a scalar factor.
    pub fn gcd(&self, other: &BiPoly) -> BiPoly {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (ca, pa) = self.primitive_x();
        let (cb, pb) = other.primitive_x();
        let c = ca.gcd(&cb);
        let (mut r0, mut r1) = if pa.degree_x() >= pb.degree_x() { (pa, pb) } else { (pb, pa) };
        while !r1.is_zero() {
            if r1.degree_x() == 0 {
                r0 = BiPoly::one(&self.field);
                break;
            }
            let r = r0.pseudo_rem(&r1);
            r0 = r1;
            r1 = if r.is_zero() { r } else { r.primitive_x().1 };
        }
        let pp = if r0.degree_x() == 0 { BiPoly::one(&self.field) } else { r0.primitive_x().1 };
        pp.mul_y(&c)
    }

    /// R / gcd(R, R_x, R_y).
    pub fn squarefree_part(&self) -> BiPoly {
        if self.is_zero() {
            return self.clone();
        }
        let g = self.gcd(&self.d_dx()).gcd(&self.d_dy());
        self.exact_div(&g).expect("gcd divides")
    }

    /// Lex-leading coefficient (largest x-degree, then largest y-degree).
    pub fn lex_lc(&self) -> Scalar {
        self.rows.last().map(Poly::lc).unwrap_or_else(Scalar::zero)
    }

    pub fn to_string_in(&self, xv: &str, yv: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms: Vec<(usize, usize, &Scalar)> = self.terms().collect();
        terms.sort_by(|a, b| (b.0 + b.1).cmp(&(a.0 + a.1)).then(b.0.cmp(&a.0)));
        let mut out = String::new();
        for (i, j, c) in terms {
            let (neg, mag) = if c.prints_negative() { (true, -c) } else { (false, c.clone()) };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mut mono = Vec::new();
            for (v, e) in [(xv, i), (yv, j)] {
                match e {
                    0 => {}
                    1 => mono.push(v.to_string()),
                    _ => mono.push(format!("{v}^{e}")),
                }
            }
            let coeff = if mag.is_compound() { format!("({mag})") } else { mag.to_string() };
            if mono.is_empty() {
                out.push_str(&coeff);
            } else {
                if !mag.is_one() {
                    out.push_str(&coeff);
                    out.push('*');
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("x", "y"))
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'a> Add<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &'a BiPoly) -> BiPoly {
        let n = self.rows.len().max(rhs.rows.len());
        let rows = (0..n)
            .map(|i| match (self.rows.get(i), rhs.rows.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) | (None, Some(a)) => a.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        BiPoly::new(&self.field, rows)
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly::new(&self.field, self.rows.iter().map(|r| -r).collect())
    }
}

impl<'a> Sub<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &'a BiPoly) -> BiPoly {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &'a BiPoly) -> BiPoly {
        if self.is_zero() || rhs.is_zero() {
            return BiPoly::zero(&self.field);
        }
        let mut rows = vec![Poly::zero(&self.field); self.rows.len() + rhs.rows.len() - 1];
        for (i, a) in self.rows.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.rows.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                rows[i + j] = &rows[i + j] + &(a * b);
            }
        }
        BiPoly::new(&self.field, rows)
    }
}

/// Integral domain operations needed by fraction-free elimination.
pub(crate) trait Domain: Clone {
    fn zero_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn mul(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn div_exact(&self, other: &Self) -> Self;
}

impl Domain for Poly {
    fn zero_like(&self) -> Self {
        Poly::zero(self.field())
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, other: &Self) -> Self {
        self.exact_div(other).expect("Bareiss division is exact")
    }
}

impl Domain for BiPoly {
    fn zero_like(&self) -> Self {
        BiPoly::zero(self.field())
    }
    fn is_zero(&self) -> bool {
        BiPoly::is_zero(self)
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, other: &Self) -> Self {
        self.exact_div(other).expect("Bareiss division is exact")
    }
}

/// Fraction-free (Bareiss) determinant.
pub(crate) fn bareiss_det<T: Domain>(mut m: Vec<Vec<T>>, one: T) -> T {
    let n = m.len();
    if n == 0 {
        return one;
    }
    let mut negate = false;
    let mut prev = one;
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    negate = !negate;
                }
                None => return prev.zero_like(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = t.div_exact(&prev);
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        d.neg()
    } else {
        d
    }
}

/// Res(a, b) for coefficient lists (ascending) over a domain.
pub(crate) fn sylvester_resultant<T: Domain>(a: &[T], b: &[T], one: T) -> T {
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    let zero = one.zero_like();
    let mut mat = vec![vec![zero; size]; size];
    for i in 0..n {
        for (k, c) in a.iter().rev().enumerate() {
            mat[i][i + k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in b.iter().rev().enumerate() {
            mat[n + i][i + k] = c.clone();
        }
    }
    bareiss_det(mat, one)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
}

/// A plane curve G(x, y) = 0, scaled so the lex-leading coefficient is 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BivarCurve {
    poly: BiPoly,
}

impl BivarCurve {
    pub fn new(poly: BiPoly) -> Result<Self> {
        if poly.is_zero() {
            return Err(Error::InvalidInput("zero curve polynomial".into()));
        }
        let inv = poly.lex_lc().inv().expect("nonzero");
        Ok(Self {
            poly: poly.scale(&inv),
        })
    }

    /// y - h(x).
    pub fn graph(h: &Poly) -> Self {
        let y = BiPoly::from_y(&Poly::x(h.field()));
        Self::new(&y - &BiPoly::from_x(h)).expect("nonzero")
    }

    /// x - h(y).
    pub fn graph_mirror(h: &Poly) -> Self {
        let x = BiPoly::from_x(&Poly::x(h.field()));
        Self::new(&x - &BiPoly::from_y(h)).expect("nonzero")
    }

    pub fn poly(&self) -> &BiPoly {
        &self.poly
    }

    pub fn field(&self) -> &Field {
        self.poly.field()
    }

    pub fn degree_x(&self) -> usize {
        self.poly.degree_x()
    }

    pub fn degree_y(&self) -> usize {
        self.poly.degree_y()
    }

    pub fn contains(&self, x: &Scalar, y: &Scalar) -> bool {
        self.poly.eval(x, y).is_zero()
    }
}

impl fmt::Display for BivarCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.poly, f)
    }
}

impl fmt::Debug for BivarCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.poly, f)
    }
}

/// Eliminates `var` from G = H = 0; returns Res(H, G) as a polynomial in the
/// other variable. Takes raw polynomials since curve scaling would change the
/// sign.
pub fn resultant_elim(g: &BiPoly, h: &BiPoly, var: Var) -> Result<Poly> {
    g.field().ensure_same(h.field())?;
    if g.is_zero() || h.is_zero() {
        return Err(Error::InvalidInput("zero polynomial in resultant".into()));
    }
    let (gp, hp) = match var {
        Var::X => (g.clone(), h.clone()),
        Var::Y => (g.transpose(), h.transpose()),
    };
    if gp.degree_x() == 0 && hp.degree_x() == 0 {
        return Err(Error::InvalidInput(
            "both polynomials are constant in the eliminated variable".into(),
        ));
    }
    Ok(sylvester_resultant(hp.rows(), gp.rows(), Poly::one(g.field())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::rationals()
    }

    fn bi(grid: &[&[i64]]) -> BiPoly {
        let grid = grid
            .iter()
            .map(|r| r.iter().map(|&c| Scalar::from_int(c)).collect())
            .collect();
        BiPoly::from_grid(&q(), grid)
    }

    fn curve(grid: &[&[i64]]) -> BivarCurve {
        BivarCurve::new(bi(grid)).unwrap()
    }

    #[test]
    fn resultant_examples() {
        // x - 2 and x^2 - 3
        let g = bi(&[&[-2], &[1]]);
        let h = bi(&[&[-3], &[0], &[1]]);
        assert_eq!(resultant_elim(&g, &h, Var::X).unwrap(), Poly::one(&q()));
        // x - y with itself
        let d = bi(&[&[0, -1], &[1]]);
        assert!(resultant_elim(&d, &d, Var::X).unwrap().is_zero());
        // y - x^2 and y - 4 over y
        let g = bi(&[&[0, 1], &[0], &[-1]]);
        let h = bi(&[&[-4, 1]]);
        assert_eq!(
            resultant_elim(&g, &h, Var::Y).unwrap(),
            Poly::from_ints(&q(), &[4, 0, -1])
        );
    }

    #[test]
    fn constant_inputs_rejected() {
        let g = bi(&[&[-2, 1]]);
        assert!(resultant_elim(&g, &g, Var::X).is_err());
    }

    #[test]
    fn squarefree_and_division() {
        let a = curve(&[&[0, -1], &[1]]).poly().clone();
        let b = curve(&[&[1, 1], &[0], &[1]]).poly().clone();
        let prod = &(&a * &a) * &b;
        let sf = prod.squarefree_part();
        let expect = &a * &b;
        let ratio = BivarCurve::new(sf).unwrap();
        assert_eq!(ratio, BivarCurve::new(expect).unwrap());
        assert_eq!(prod.exact_div(&a).unwrap(), &a * &b);
        assert!(b.exact_div(&a).is_none());
    }

    #[test]
    fn split_composition() {
        let c = BivarCurve::graph(&Poly::from_ints(&q(), &[1, 1]));
        let sq = Poly::x_pow(&q(), 2);
        let img = BivarCurve::new(c.poly().compose_split(&sq, &sq)).unwrap();
        let expect = curve(&[&[-1, 0, 1], &[0], &[-1]]);
        assert_eq!(img, expect);
    }

    #[test]
    fn curve_display() {
        assert_eq!(curve(&[&[0, -1], &[1]]).to_string(), "x - y");
        assert_eq!(curve(&[&[0, 1], &[0], &[-1]]).to_string(), "x^2 - y");
    }
}
