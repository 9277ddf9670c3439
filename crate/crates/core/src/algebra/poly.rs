use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::Field;
use super::scalar::Scalar;
use crate::error::{cap_error, Error, Result};

/// Default limit on the degree of composition and iterate outputs.
pub const DEFAULT_DEGREE_CAP: usize = 10_000;

/// Dense univariate polynomial over Q or Q(zeta_m), ascending coefficients.
///
/// The coefficient vector never has a trailing zero; the zero polynomial has
/// no coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Scalar>,
}

fn scalar_in_field(field: &Field, c: &Scalar) -> bool {
    match c.field_order() {
        None => true,
        Some(m) => !field.is_rational() && field.order() == m,
    }
}

impl Poly {
    /// Builds a polynomial, rejecting coefficients from another field.
    pub fn try_new(field: &Field, mut coeffs: Vec<Scalar>) -> Result<Self> {
        if let Some(bad) = coeffs.iter().find(|c| !scalar_in_field(field, c)) {
            return Err(Error::FieldMismatch(
                field.to_string(),
                format!("coefficient {bad}"),
            ));
        }
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Ok(Self {
            field: field.clone(),
            coeffs,
        })
    }

    /// Like [`Poly::try_new`] but panics on a foreign coefficient.
    pub fn new(field: &Field, coeffs: Vec<Scalar>) -> Self {
        Self::try_new(field, coeffs).expect("coefficient outside field")
    }

    pub fn from_ints(field: &Field, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| Scalar::from_int(c)).collect())
    }

    pub fn zero(field: &Field) -> Self {
        Self {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: &Field) -> Self {
        Self::constant(field, Scalar::one())
    }

    pub fn constant(field: &Field, c: Scalar) -> Self {
        Self::new(field, vec![c])
    }

    /// The identity polynomial x.
    pub fn x(field: &Field) -> Self {
        Self::monomial(field, Scalar::one(), 1)
    }

    pub fn monomial(field: &Field, c: Scalar, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero(field);
        }
        let mut coeffs = vec![Scalar::zero(); k + 1];
        coeffs[k] = c;
        Self::new(field, coeffs)
    }

    /// x^k.
    pub fn x_pow(field: &Field, k: usize) -> Self {
        Self::monomial(field, Scalar::one(), k)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Scalar> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Coefficient of x^i (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn lc(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.lc().is_one()
    }

    pub fn is_x(&self) -> bool {
        self.coeffs.len() == 2 && self.coeffs[0].is_zero() && self.coeffs[1].is_one()
    }

    /// Index of the lowest nonzero coefficient; 0 for the zero polynomial.
    pub fn valuation(&self) -> usize {
        self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0)
    }

    /// Re-tags the polynomial with another field. Fails if a coefficient does
    /// not belong to the target.
    pub fn with_field(&self, field: &Field) -> Result<Self> {
        Self::try_new(field, self.coeffs.clone())
    }

    pub fn eval(&self, t: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * t) + c;
        }
        acc
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::new(&self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Divides by the leading coefficient. Zero stays zero.
    pub fn monic(&self) -> Self {
        match self.lc().inv() {
            Some(inv) => self.scale(&inv),
            None => self.clone(),
        }
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &Scalar::from_int(i as i64))
            .collect();
        Self::new(&self.field, coeffs)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.field);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        self.check_field(d);
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut r = self.coeffs.clone();
        let dd = d.degree();
        if r.len() < d.coeffs.len() {
            return (Self::zero(&self.field), self.clone());
        }
        let lead_inv = d.lc().inv().expect("nonzero leading coefficient");
        let mut q = vec![Scalar::zero(); r.len() - dd];
        while r.len() >= d.coeffs.len() {
            let shift = r.len() - d.coeffs.len();
            let c = r.last().unwrap() * &lead_inv;
            for (j, y) in d.coeffs.iter().enumerate() {
                r[shift + j] = &r[shift + j] - &(&c * y);
            }
            q[shift] = c;
            r.pop();
            while r.last().is_some_and(Scalar::is_zero) {
                r.pop();
            }
        }
        (Self::new(&self.field, q), Self::new(&self.field, r))
    }

    /// `self / d` when the division is exact.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Poly) -> Poly {
        self.check_field(other);
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// f∘g, checking fields and the degree cap.
    pub fn compose_capped(&self, g: &Poly, cap: usize) -> Result<Poly> {
        self.field.ensure_same(&g.field)?;
        let out_deg = self.degree() * g.degree();
        if out_deg > cap {
            return Err(cap_error("compose", out_deg, cap));
        }
        let h = self.compose_unchecked(g);
        debug_assert!(
            self.is_constant() || g.is_constant() || h.degree() == self.degree() * g.degree()
        );
        Ok(h)
    }

    /// f∘g with the default cap.
    pub fn compose(&self, g: &Poly) -> Result<Poly> {
        self.compose_capped(g, DEFAULT_DEGREE_CAP)
    }

    /// Horner composition with no cap; panics on mixed fields.
    pub(crate) fn compose_unchecked(&self, g: &Poly) -> Poly {
        self.check_field(g);
        let mut acc = Self::zero(&self.field);
        for c in self.coeffs.iter().rev() {
            acc = &acc * g;
            acc = acc.add_scalar(c);
        }
        acc
    }

    /// f^{∘m}; m = 0 gives x.
    pub fn iterate_capped(&self, m: u32, cap: usize) -> Result<Poly> {
        if self.degree() >= 2 {
            let mut deg: usize = 1;
            for _ in 0..m {
                deg = deg.saturating_mul(self.degree());
                if deg > cap {
                    return Err(cap_error("iterate", deg, cap));
                }
            }
        }
        let mut acc = Self::x(&self.field);
        for _ in 0..m {
            acc = self.compose_unchecked(&acc);
        }
        Ok(acc)
    }

    pub fn iterate(&self, m: u32) -> Result<Poly> {
        self.iterate_capped(m, DEFAULT_DEGREE_CAP)
    }

    /// The normalized Chebyshev polynomial T_d with T_d(x + 1/x) = x^d + x^{-d}.
    pub fn chebyshev(field: &Field, d: usize) -> Poly {
        assert!(d >= 1, "chebyshev degree must be positive");
        let x = Self::x(field);
        let mut prev = Self::constant(field, Scalar::from_int(2));
        let mut cur = x.clone();
        for _ in 1..d {
            let next = &(&x * &cur) - &prev;
            prev = cur;
            cur = next;
        }
        cur
    }

    pub fn add_scalar(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return self.clone();
        }
        let mut coeffs = self.coeffs.clone();
        if coeffs.is_empty() {
            coeffs.push(c.clone());
        } else {
            coeffs[0] = &coeffs[0] + c;
        }
        Self::new(&self.field, coeffs)
    }

    /// Keeps coefficients of degree < n.
    pub fn truncate(&self, n: usize) -> Poly {
        Self::new(&self.field, self.coeffs.iter().take(n).cloned().collect())
    }

    /// Reverses the coefficient list of a polynomial of degree d: x^d f(1/x).
    pub fn reversed(&self) -> Poly {
        Self::new(&self.field, self.coeffs.iter().rev().cloned().collect())
    }

    /// Bit size of the largest coefficient.
    pub fn height_bits(&self) -> u64 {
        self.coeffs.iter().map(Scalar::bit_size).max().unwrap_or(0)
    }

    /// If `self = Q(x^k)`, returns Q.
    pub fn deflate(&self, k: usize) -> Option<Poly> {
        assert!(k >= 1);
        let mut out = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i % k == 0 {
                out.push(c.clone());
            } else if !c.is_zero() {
                return None;
            }
        }
        Some(Self::new(&self.field, out))
    }

    /// Q(x) ↦ Q(x^k).
    pub fn inflate(&self, k: usize) -> Poly {
        let mut out = vec![Scalar::zero(); self.degree() * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * k] = c.clone();
        }
        Self::new(&self.field, out)
    }

    /// Order by degree, then by coefficients from the top down.
    pub fn canonical_cmp(&self, other: &Poly) -> Ordering {
        self.coeffs.len().cmp(&other.coeffs.len()).then_with(|| {
            for (a, b) in self.coeffs.iter().rev().zip(other.coeffs.iter().rev()) {
                match a.canonical_cmp(b) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }

    fn check_field(&self, other: &Poly) {
        assert!(
            self.field == other.field,
            "mixed fields {} and {}",
            self.field,
            other.field
        );
    }

    /// Renders with a chosen variable name.
    pub fn to_string_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let first = out.is_empty();
            let (neg, mag) = if c.prints_negative() {
                (true, -c)
            } else {
                (false, c.clone())
            };
            if first {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let coeff = if mag.is_compound() {
                format!("({mag})")
            } else {
                mag.to_string()
            };
            if i == 0 {
                out.push_str(&coeff);
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&coeff);
                out.push('*');
                out.push_str(&mono);
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("x"))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self, self.field)
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        self.check_field(rhs);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) | (None, Some(a)) => a.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Poly::new(&self.field, coeffs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(&self.field, self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        self.check_field(rhs);
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(&self.field);
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(&self.field, out)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &'a Poly) -> Poly {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Poly> for &'a Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
