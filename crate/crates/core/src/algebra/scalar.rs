use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::field::Field;
use super::qpoly::{self, QVec};

/// An exact element of Q or Q(zeta_m).
///
/// Rational values are always stored as `Rational`, even when they belong to a
/// cyclotomic field, so every value has exactly one representation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Cyclotomic(CycElem),
}

/// A non-rational element of Q(zeta_m), as a reduced coefficient vector in z.
#[derive(Clone)]
pub struct CycElem {
    field: Field,
    coeffs: QVec,
}

impl CycElem {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }
}

impl PartialEq for CycElem {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coeffs == other.coeffs
    }
}

impl Eq for CycElem {}

impl Hash for CycElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.hash(state);
        self.coeffs.hash(state);
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Scalar::Rational(BigRational::from_integer(n))
    }

    /// `num / den`; panics if `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        Scalar::Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar::Rational(r)
    }

    /// Builds `sum coeffs[i] z^i` in `field`, reducing modulo the cyclotomic polynomial.
    pub fn from_z_coeffs(field: &Field, coeffs: QVec) -> Self {
        if field.is_rational() {
            let mut c = coeffs;
            qpoly::trim(&mut c);
            assert!(c.len() <= 1, "z is not available over Q");
            return Scalar::Rational(c.pop().unwrap_or_else(BigRational::zero));
        }
        let mut reduced = qpoly::rem_monic(coeffs, field.modulus());
        qpoly::trim(&mut reduced);
        Self::canonical(field, reduced)
    }

    fn canonical(field: &Field, mut coeffs: QVec) -> Self {
        qpoly::trim(&mut coeffs);
        if coeffs.len() <= 1 {
            Scalar::Rational(coeffs.pop().unwrap_or_else(BigRational::zero))
        } else {
            Scalar::Cyclotomic(CycElem {
                field: field.clone(),
                coeffs,
            })
        }
    }

    /// The generator z of Q(zeta_m).
    pub fn zeta(field: &Field) -> Self {
        assert!(!field.is_rational(), "z is not available over Q");
        Self::from_z_coeffs(field, vec![BigRational::zero(), BigRational::one()])
    }

    /// `w^k` where `w` generates the roots of unity in `field` (`-1` over Q,
    /// `z` for even m, `-z` for odd m).
    pub fn root_of_unity(field: &Field, k: u32) -> Self {
        let w = field.unit_order();
        let k = k % w;
        if field.is_rational() {
            return if k == 0 { Scalar::one() } else { Scalar::from_int(-1) };
        }
        let gen = if field.order().is_multiple_of(2) {
            Scalar::zeta(field)
        } else {
            -Scalar::zeta(field)
        };
        gen.pow(k as i64)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_one())
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Cyclotomic(_) => None,
        }
    }

    /// Order of the cyclotomic field this value needs, if it is not rational.
    pub fn field_order(&self) -> Option<u32> {
        match self {
            Scalar::Rational(_) => None,
            Scalar::Cyclotomic(c) => Some(c.field.order()),
        }
    }

    /// Coefficients in z, ascending, trimmed.
    pub fn z_coeffs(&self) -> QVec {
        match self {
            Scalar::Rational(r) if r.is_zero() => Vec::new(),
            Scalar::Rational(r) => vec![r.clone()],
            Scalar::Cyclotomic(c) => c.coeffs.clone(),
        }
    }

    /// Largest bit length among numerators and denominators.
    pub fn bit_size(&self) -> u64 {
        let rat_bits = |r: &BigRational| r.numer().bits().max(r.denom().bits());
        match self {
            Scalar::Rational(r) => rat_bits(r),
            Scalar::Cyclotomic(c) => c.coeffs.iter().map(rat_bits).max().unwrap_or(0),
        }
    }

    pub fn inv(&self) -> Option<Self> {
        match self {
            Scalar::Rational(r) => {
                if r.is_zero() {
                    None
                } else {
                    Some(Scalar::Rational(r.recip()))
                }
            }
            Scalar::Cyclotomic(c) => {
                let (s, g) = qpoly::ext_gcd(&c.coeffs, c.field.modulus());
                debug_assert!(g.len() == 1, "cyclotomic polynomial is irreducible");
                Some(Self::from_z_coeffs(&c.field, s))
            }
        }
    }

    /// Integer power; negative exponents invert. Panics on `0^k` with `k < 0`.
    pub fn pow(&self, e: i64) -> Self {
        if e < 0 {
            return self.inv().expect("negative power of zero").pow(-e);
        }
        let mut base = self.clone();
        let mut acc = Scalar::one();
        let mut e = e as u64;
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

    /// A fixed total order: rationals by value, then cyclotomic values by field
    /// order and coefficient vector.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a.cmp(b),
            (Scalar::Rational(_), Scalar::Cyclotomic(_)) => Ordering::Less,
            (Scalar::Cyclotomic(_), Scalar::Rational(_)) => Ordering::Greater,
            (Scalar::Cyclotomic(a), Scalar::Cyclotomic(b)) => a
                .field
                .order()
                .cmp(&b.field.order())
                .then_with(|| a.coeffs.len().cmp(&b.coeffs.len()))
                .then_with(|| {
                    for (x, y) in a.coeffs.iter().zip(&b.coeffs).rev() {
                        match x.cmp(y) {
                            Ordering::Equal => continue,
                            o => return o,
                        }
                    }
                    Ordering::Equal
                }),
        }
    }

    /// True when the printed form needs parentheses as a coefficient.
    pub(crate) fn is_compound(&self) -> bool {
        match self {
            Scalar::Rational(_) => false,
            Scalar::Cyclotomic(c) => c.coeffs.iter().filter(|x| !x.is_zero()).count() > 1,
        }
    }

    /// True when the printed form starts with a minus sign.
    pub(crate) fn prints_negative(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_negative(),
            Scalar::Cyclotomic(c) => {
                !self.is_compound() && c.coeffs.iter().rev().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative())
            }
        }
    }

    fn field_of(a: &CycElem, b: &CycElem) -> Field {
        assert!(
            a.field == b.field,
            "mixed cyclotomic fields {} and {}",
            a.field,
            b.field
        );
        a.field.clone()
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::Rational(r)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Rational(r), Scalar::Cyclotomic(c)) | (Scalar::Cyclotomic(c), Scalar::Rational(r)) => {
                let mut coeffs = c.coeffs.clone();
                coeffs[0] += r;
                Scalar::canonical(&c.field, coeffs)
            }
            (Scalar::Cyclotomic(a), Scalar::Cyclotomic(b)) => {
                let field = Scalar::field_of(a, b);
                Scalar::canonical(&field, qpoly::add(&a.coeffs, &b.coeffs))
            }
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Cyclotomic(c) => Scalar::Cyclotomic(CycElem {
                field: c.field.clone(),
                coeffs: qpoly::neg(&c.coeffs),
            }),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            _ => self + &(-rhs),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Rational(r), Scalar::Cyclotomic(c)) | (Scalar::Cyclotomic(c), Scalar::Rational(r)) => {
                if r.is_zero() {
                    return Scalar::zero();
                }
                Scalar::Cyclotomic(CycElem {
                    field: c.field.clone(),
                    coeffs: c.coeffs.iter().map(|x| x * r).collect(),
                })
            }
            (Scalar::Cyclotomic(a), Scalar::Cyclotomic(b)) => {
                let field = Scalar::field_of(a, b);
                let prod = qpoly::mul(&a.coeffs, &b.coeffs);
                Scalar::canonical(&field, qpoly::rem_monic(prod, field.modulus()))
            }
        }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a / b),
            _ => self * &rhs.inv().expect("division by zero"),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

fn fmt_rational(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => fmt_rational(r, f),
            Scalar::Cyclotomic(c) => {
                let mut first = true;
                for (i, a) in c.coeffs.iter().enumerate().rev() {
                    if a.is_zero() {
                        continue;
                    }
                    let mag = a.abs();
                    if first {
                        if a.is_negative() {
                            write!(f, "-")?;
                        }
                    } else if a.is_negative() {
                        write!(f, " - ")?;
                    } else {
                        write!(f, " + ")?;
                    }
                    first = false;
                    match i {
                        0 => fmt_rational(&mag, f)?,
                        _ => {
                            if !mag.is_one() {
                                fmt_rational(&mag, f)?;
                                write!(f, "*")?;
                            }
                            if i == 1 {
                                write!(f, "z")?;
                            } else {
                                write!(f, "z^{i}")?;
                            }
                        }
                    }
                }
                Ok(())
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q7() -> Field {
        Field::cyclotomic(7).unwrap()
    }

    #[test]
    fn zeta_has_order_m() {
        for m in [3u32, 4, 5, 7, 8, 12, 15] {
            let field = Field::cyclotomic(m).unwrap();
            let z = Scalar::zeta(&field);
            assert!(z.pow(m as i64).is_one(), "m = {m}");
            for k in 1..m {
                assert!(!z.pow(k as i64).is_one());
            }
        }
    }

    #[test]
    fn minimal_polynomial_relation_holds() {
        let field = q7();
        let z = Scalar::zeta(&field);
        let mut sum = Scalar::zero();
        for k in 0..7 {
            sum = sum + z.pow(k);
        }
        assert!(sum.is_zero());
    }

    #[test]
    fn inverse_roundtrip() {
        let field = q7();
        let z = Scalar::zeta(&field);
        let a = &(&z * &z) + &Scalar::from_ratio(3, 2);
        let inv = a.inv().unwrap();
        assert!((&a * &inv).is_one());
        assert_eq!(z.inv().unwrap(), z.pow(6));
    }

    #[test]
    fn root_of_unity_generator_order() {
        let field = q7();
        let w = field.unit_order();
        assert!(Scalar::root_of_unity(&field, w).is_one());
        assert!(!Scalar::root_of_unity(&field, w / 2).is_one());
        assert_eq!(Scalar::root_of_unity(&field, w / 2), Scalar::from_int(-1));
    }

    #[test]
    fn canonical_reduction_is_idempotent() {
        let field = Field::cyclotomic(5).unwrap();
        let z = Scalar::zeta(&field);
        let a = z.pow(13);
        let coeffs = a.z_coeffs();
        assert_eq!(Scalar::from_z_coeffs(&field, coeffs), a);
        assert_eq!(a, z.pow(3));
    }

    #[test]
    fn display_forms() {
        let field = q7();
        let z = Scalar::zeta(&field);
        assert_eq!(Scalar::from_ratio(-3, 6).to_string(), "-1/2");
        assert_eq!((&z * &z).to_string(), "z^2");
        assert_eq!((&z - &Scalar::one()).to_string(), "z - 1");
        assert_eq!((-&z).to_string(), "-z");
    }
}
