use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_rational::BigRational;

use super::qpoly::{self, QVec};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rationals,
    Cyclotomic,
}

/// A coefficient field: either Q or Q(zeta_m) = Q[z]/(Phi_m).
///
/// Cheap to clone. Two fields compare equal iff they have the same kind and
/// order; the modulus is derived data.
#[derive(Clone)]
pub struct Field {
    inner: Arc<FieldData>,
}

struct FieldData {
    kind: FieldKind,
    order: u32,
    /// Monic cyclotomic polynomial, ascending. `[−1, 1]` for Q.
    modulus: QVec,
    /// Order of the group of roots of unity contained in the field.
    unit_order: u32,
}

impl Field {
    pub fn rationals() -> Self {
        Self {
            inner: Arc::new(FieldData {
                kind: FieldKind::Rationals,
                order: 1,
                modulus: vec![BigRational::from_integer((-1).into()), BigRational::from_integer(1.into())],
                unit_order: 2,
            }),
        }
    }

    /// Q(zeta_m). Orders 1 and 2 are rejected since they give Q itself.
    pub fn cyclotomic(m: u32) -> Result<Self> {
        if m <= 2 {
            return Err(Error::InvalidField(format!(
                "Q(zeta {m}) is Q; use the rational field"
            )));
        }
        if m > 4096 {
            return Err(Error::InvalidField(format!("cyclotomic order {m} too large")));
        }
        let modulus = qpoly::cyclotomic_poly(m)
            .into_iter()
            .map(BigRational::from_integer)
            .collect();
        let unit_order = if m.is_multiple_of(2) { m } else { 2 * m };
        Ok(Self {
            inner: Arc::new(FieldData {
                kind: FieldKind::Cyclotomic,
                order: m,
                modulus,
                unit_order,
            }),
        })
    }

    pub fn kind(&self) -> FieldKind {
        self.inner.kind
    }

    /// m for Q(zeta_m), 1 for Q.
    pub fn order(&self) -> u32 {
        self.inner.order
    }

    pub fn is_rational(&self) -> bool {
        self.inner.kind == FieldKind::Rationals
    }

    /// Degree of the field over Q.
    pub fn degree(&self) -> usize {
        self.inner.modulus.len() - 1
    }

    /// Number of roots of unity in the field (2 for Q).
    pub fn unit_order(&self) -> u32 {
        self.inner.unit_order
    }

    pub(crate) fn modulus(&self) -> &[BigRational] {
        &self.inner.modulus
    }

    pub fn ensure_same(&self, other: &Field) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.to_string(), other.to_string()))
        }
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.inner.kind == other.inner.kind && self.inner.order == other.inner.order
    }
}

impl Eq for Field {}

impl Hash for Field {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.inner.kind.hash(state);
        self.inner.order.hash(state);
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.inner.kind {
            FieldKind::Rationals => write!(f, "Q"),
            FieldKind::Cyclotomic => write!(f, "Q(zeta {})", self.inner.order),
        }
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Default for Field {
    fn default() -> Self {
        Self::rationals()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_cyclotomic_orders() {
        assert!(Field::cyclotomic(1).is_err());
        assert!(Field::cyclotomic(2).is_err());
        assert!(Field::cyclotomic(3).is_ok());
    }

    #[test]
    fn unit_orders() {
        assert_eq!(Field::rationals().unit_order(), 2);
        assert_eq!(Field::cyclotomic(7).unwrap().unit_order(), 14);
        assert_eq!(Field::cyclotomic(8).unwrap().unit_order(), 8);
        assert_eq!(Field::cyclotomic(7).unwrap().degree(), 6);
    }

    #[test]
    fn equality_by_order() {
        assert_eq!(Field::cyclotomic(5).unwrap(), Field::cyclotomic(5).unwrap());
        assert_ne!(Field::cyclotomic(5).unwrap(), Field::cyclotomic(10).unwrap());
        assert_ne!(Field::rationals(), Field::cyclotomic(3).unwrap());
    }
}
