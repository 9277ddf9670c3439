//! The period-bound constants c₁(d, n) and c(d, n), exact while small and
//! symbolic beyond a bit threshold.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};

pub const DEFAULT_EXACT_BITS: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Max(Box<Expr>, Box<Expr>),
    Half(Box<Expr>),
}

/// A constant that is either materialized (a rational, since d^k/2 is not an
/// integer for odd d) or kept as an expression tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstantExpr {
    Exact(BigRational),
    Symbolic(Expr),
}

fn rat_log2(r: &BigRational) -> f64 {
    let bits = |n: &BigInt| -> f64 {
        let b = n.bits();
        if b <= 1000 {
            n.to_f64().map(|v| v.abs().log2()).unwrap_or(b as f64)
        } else {
            let shift = b - 64;
            let top = (n >> shift).to_f64().unwrap_or(1.0).abs();
            top.log2() + shift as f64
        }
    };
    bits(r.numer()) - bits(r.denom())
}

impl Expr {
    fn int(n: impl Into<BigInt>) -> Expr {
        Expr::Int(n.into())
    }

    /// Value as a float, or infinity when it does not fit.
    pub fn approx(&self) -> f64 {
        match self {
            Expr::Int(n) => n.to_f64().unwrap_or(f64::INFINITY),
            Expr::Add(a, b) => a.approx() + b.approx(),
            Expr::Mul(a, b) => a.approx() * b.approx(),
            Expr::Pow(a, b) => a.approx().powf(b.approx()),
            Expr::Max(a, b) => a.approx().max(b.approx()),
            Expr::Half(a) => a.approx() / 2.0,
        }
    }

    /// log₂ of the value (values here are positive).
    pub fn log2(&self) -> f64 {
        match self {
            Expr::Int(n) => rat_log2(&BigRational::from_integer(n.clone())),
            Expr::Add(a, b) => {
                let (x, y) = (a.log2(), b.log2());
                let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
                hi + (1.0 + (lo - hi).exp2()).log2()
            }
            Expr::Mul(a, b) => a.log2() + b.log2(),
            Expr::Pow(a, b) => a.log2() * b.approx(),
            Expr::Max(a, b) => a.log2().max(b.log2()),
            Expr::Half(a) => a.log2() - 1.0,
        }
    }

    /// Exact value if every intermediate stays within `max_bits`.
    pub fn eval(&self, max_bits: u64) -> Option<BigRational> {
        let fits = |r: &BigRational| r.numer().bits() + r.denom().bits() <= max_bits;
        let out = match self {
            Expr::Int(n) => BigRational::from_integer(n.clone()),
            Expr::Add(a, b) => a.eval(max_bits)? + b.eval(max_bits)?,
            Expr::Mul(a, b) => a.eval(max_bits)? * b.eval(max_bits)?,
            Expr::Pow(a, b) => {
                let base = a.eval(max_bits)?;
                let e = b.eval(max_bits)?;
                if !e.is_integer() {
                    return None;
                }
                let e = e.to_integer().to_u64()?;
                if rat_log2(&base).abs() * e as f64 > max_bits as f64 {
                    return None;
                }
                num_traits::pow::pow(base, e as usize)
            }
            Expr::Max(a, b) => {
                let (x, y) = (a.eval(max_bits)?, b.eval(max_bits)?);
                x.max(y)
            }
            Expr::Half(a) => a.eval(max_bits)? / BigInt::from(2),
        };
        fits(&out).then_some(out)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Mul(a, b) => write!(f, "{a}*{b}"),
            Expr::Pow(a, b) => match **b {
                Expr::Int(_) => write!(f, "{a}^{b}"),
                _ => write!(f, "{a}^({b})"),
            },
            Expr::Max(a, b) => write!(f, "max{{{a}, {b}}}"),
            Expr::Half(a) => write!(f, "{a}/2"),
        }
    }
}

impl ConstantExpr {
    pub fn to_expr(&self) -> Expr {
        match self {
            ConstantExpr::Exact(r) if r.is_integer() => Expr::Int(r.to_integer()),
            ConstantExpr::Exact(r) => {
                // denominators are powers of two
                let k = r.denom().trailing_zeros().unwrap_or(0);
                assert_eq!(*r.denom(), BigInt::one() << k, "denominator is a power of two");
                (0..k).fold(Expr::Int(r.numer().clone()), |e, _| Expr::Half(Box::new(e)))
            }
            ConstantExpr::Symbolic(e) => e.clone(),
        }
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            ConstantExpr::Exact(r) => Some(r),
            ConstantExpr::Symbolic(_) => None,
        }
    }

    pub fn log2_estimate(&self) -> f64 {
        match self {
            ConstantExpr::Exact(r) => rat_log2(r),
            ConstantExpr::Symbolic(e) => e.log2(),
        }
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self, ConstantExpr::Symbolic(_))
    }
}

impl fmt::Display for ConstantExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstantExpr::Exact(r) => write!(f, "{r}"),
            ConstantExpr::Symbolic(e) => write!(f, "{e}"),
        }
    }
}

fn boxed(e: Expr) -> Box<Expr> {
    Box::new(e)
}

/// Materializes `e` when its log₂ estimate is within the threshold.
fn settle(e: Expr, max_bits: u64) -> ConstantExpr {
    if e.log2() <= max_bits as f64 {
        if let Some(v) = e.eval(max_bits.saturating_mul(2).max(64)) {
            return ConstantExpr::Exact(v);
        }
    }
    ConstantExpr::Symbolic(e)
}

fn check_d(d: u64) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidInput(format!("d must be at least 2; got {d}")));
    }
    Ok(())
}

/// c₁(d, 2) = 2d⁴, c₁(d, n) = c₁(d, n−1)·2·d^{4c₁(d, n−1)}.
pub fn bound_c1_with(d: u64, n: u64, max_bits: u64) -> Result<ConstantExpr> {
    check_d(d)?;
    if n < 2 {
        return Err(Error::InvalidInput(format!("n must be at least 2; got {n}")));
    }
    let base = Expr::Mul(boxed(Expr::int(2)), boxed(Expr::Pow(boxed(Expr::int(d)), boxed(Expr::int(4)))));
    let mut cur = settle(base, max_bits);
    for _ in 3..=n {
        let prev = cur.to_expr();
        let exponent = Expr::Mul(boxed(Expr::int(4)), boxed(prev.clone()));
        let step = Expr::Mul(
            boxed(Expr::Mul(boxed(prev), boxed(Expr::int(2)))),
            boxed(Expr::Pow(boxed(Expr::int(d)), boxed(exponent))),
        );
        cur = settle(step, max_bits);
    }
    Ok(cur)
}

pub fn bound_c1(d: u64, n: u64) -> Result<ConstantExpr> {
    bound_c1_with(d, n, DEFAULT_EXACT_BITS)
}

/// c(d, 1) = 1, c(d, n) = max{c(d, n−1)^{n−1}, d^{c₁(d, n)}/2}.
pub fn bound_c_with(d: u64, n: u64, max_bits: u64) -> Result<ConstantExpr> {
    check_d(d)?;
    if n < 1 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let mut cur = ConstantExpr::Exact(BigRational::one());
    for k in 2..=n {
        let c1 = bound_c1_with(d, k, max_bits)?.to_expr();
        let left = Expr::Pow(boxed(cur.to_expr()), boxed(Expr::int(k - 1)));
        let right = Expr::Half(boxed(Expr::Pow(boxed(Expr::int(d)), boxed(c1))));
        cur = settle(Expr::Max(boxed(left), boxed(right)), max_bits);
    }
    Ok(cur)
}

pub fn bound_c(d: u64, n: u64) -> Result<ConstantExpr> {
    bound_c_with(d, n, DEFAULT_EXACT_BITS)
}

/// d^{2d⁴}/2, the closed form for c(d, 2).
pub fn closed_form_c2(d: u64) -> BigRational {
    let e = 2 * d.pow(4);
    BigRational::new(num_traits::pow::pow(BigInt::from(d), e as usize), BigInt::from(2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: u64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn pow2(k: usize) -> BigRational {
        BigRational::from_integer(num_traits::pow::pow(BigInt::from(2), k))
    }

    #[test]
    fn c1_examples() {
        assert_eq!(bound_c1(2, 2).unwrap().exact(), Some(&int(32)));
        assert_eq!(bound_c1(3, 2).unwrap().exact(), Some(&int(162)));
        assert_eq!(bound_c1(2, 3).unwrap().exact(), Some(&pow2(134)));
    }

    #[test]
    fn c_examples() {
        assert_eq!(bound_c(2, 2).unwrap().exact(), Some(&pow2(31)));
        assert_eq!(bound_c(5, 1).unwrap().exact(), Some(&int(1)));
        let c = bound_c(2, 3).unwrap();
        assert!(c.is_symbolic());
        let est = c.log2_estimate();
        let expect = 2f64.powi(134) - 1.0;
        assert!((est - expect).abs() / expect < 1e-9);
    }

    #[test]
    fn symbolic_agrees_with_exact_when_small() {
        for (d, n) in [(2, 2), (3, 2), (2, 3)] {
            let exact = bound_c1(d, n).unwrap();
            let sym = bound_c1_with(d, n, 4).unwrap();
            assert!(sym.is_symbolic());
            assert_eq!(sym.to_expr().eval(1 << 20).as_ref(), exact.exact());
        }
    }
}
