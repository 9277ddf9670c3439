use std::fmt;

use super::field::Field;
use super::poly::Poly;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// An invertible affine map `a*x + b`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinearPoly {
    field: Field,
    a: Scalar,
    b: Scalar,
}

impl LinearPoly {
    pub fn try_new(field: &Field, a: Scalar, b: Scalar) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::InvalidInput("linear polynomial with a = 0".into()));
        }
        // Validate membership through Poly.
        Poly::try_new(field, vec![b.clone(), a.clone()])?;
        Ok(Self {
            field: field.clone(),
            a,
            b,
        })
    }

    pub fn new(field: &Field, a: Scalar, b: Scalar) -> Self {
        Self::try_new(field, a, b).expect("invalid linear polynomial")
    }

    pub fn identity(field: &Field) -> Self {
        Self::new(field, Scalar::one(), Scalar::zero())
    }

    pub fn scaling(field: &Field, a: Scalar) -> Self {
        Self::new(field, a, Scalar::zero())
    }

    pub fn translation(field: &Field, b: Scalar) -> Self {
        Self::new(field, Scalar::one(), b)
    }

    pub fn from_ints(field: &Field, a: i64, b: i64) -> Self {
        Self::new(field, Scalar::from_int(a), Scalar::from_int(b))
    }

    /// Reads a degree-1 polynomial.
    pub fn from_poly(p: &Poly) -> Option<Self> {
        (p.degree() == 1).then(|| Self::new(p.field(), p.coeff(1), p.coeff(0)))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn a(&self) -> &Scalar {
        &self.a
    }

    pub fn b(&self) -> &Scalar {
        &self.b
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn apply(&self, t: &Scalar) -> Scalar {
        &(&self.a * t) + &self.b
    }

    /// self∘other.
    pub fn compose(&self, other: &LinearPoly) -> LinearPoly {
        assert!(self.field == other.field, "mixed fields");
        LinearPoly {
            field: self.field.clone(),
            a: &self.a * &other.a,
            b: &(&self.a * &other.b) + &self.b,
        }
    }

    pub fn inverse(&self) -> LinearPoly {
        let ai = self.a.inv().expect("a is nonzero");
        LinearPoly {
            field: self.field.clone(),
            b: -(&self.b * &ai),
            a: ai,
        }
    }

    pub fn pow(&self, k: u32) -> LinearPoly {
        let mut acc = Self::identity(&self.field);
        for _ in 0..k {
            acc = self.compose(&acc);
        }
        acc
    }

    pub fn to_poly(&self) -> Poly {
        Poly::new(&self.field, vec![self.b.clone(), self.a.clone()])
    }

    /// ℓ∘f.
    pub fn compose_left(&self, f: &Poly) -> Poly {
        f.scale(&self.a).add_scalar(&self.b)
    }

    /// f∘ℓ.
    pub fn compose_right(&self, f: &Poly) -> Poly {
        f.compose_unchecked(&self.to_poly())
    }

    /// ℓ∘f∘ℓ⁻¹.
    pub fn conjugate(&self, f: &Poly) -> Result<Poly> {
        self.field.ensure_same(f.field())?;
        Ok(self.compose_left(&self.inverse().compose_right(f)))
    }
}

impl fmt::Display for LinearPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

impl fmt::Debug for LinearPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// ℓ∘f∘ℓ⁻¹.
pub fn conjugate(ell: &LinearPoly, f: &Poly) -> Result<Poly> {
    ell.conjugate(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::rationals()
    }

    #[test]
    fn conjugate_examples() {
        let f = Poly::from_ints(&q(), &[0, 1, 0, 1]);
        let neg = LinearPoly::from_ints(&q(), -1, 0);
        assert_eq!(conjugate(&neg, &f).unwrap(), f);
        let shift = LinearPoly::from_ints(&q(), 1, 1);
        assert_eq!(
            conjugate(&shift, &Poly::x_pow(&q(), 2)).unwrap(),
            Poly::from_ints(&q(), &[2, -2, 1])
        );
        assert_eq!(conjugate(&LinearPoly::identity(&q()), &f).unwrap(), f);
    }

    #[test]
    fn inverse_roundtrip() {
        let l = LinearPoly::new(&q(), Scalar::from_ratio(3, 7), Scalar::from_int(-2));
        assert!(l.compose(&l.inverse()).is_identity());
        assert!(l.inverse().compose(&l).is_identity());
        let f = Poly::from_ints(&q(), &[1, 2, 3, 4]);
        let back = conjugate(&l, &conjugate(&l.inverse(), &f).unwrap()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn zero_slope_rejected() {
        assert!(LinearPoly::try_new(&q(), Scalar::zero(), Scalar::one()).is_err());
    }
}
