//! Field-like scalars the whole engine is generic over.
//!
//! Scalars: plain `f64`, double-double `TwoFloat`, the exact [`Rational`]
//! used as an oracle on polynomial inputs, and truncated power series
//! ([`crate::jet::MultiJet`], [`crate::jet::TaylorJet`]) whose coefficients are
//! themselves scalars. Invariant formulas are written once against this trait.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use twofloat::TwoFloat;

use crate::error::JetError;

/// Elementary functions available on scalars and jets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Elementary {
    Sin,
    Cos,
    Exp,
    Log,
    /// `x^(num/den)`, `den > 0`, fraction in lowest terms.
    Pow(i64, i64),
}

impl Elementary {
    pub const SQRT: Elementary = Elementary::Pow(1, 2);
    pub const CBRT: Elementary = Elementary::Pow(1, 3);
}

pub trait Scalar:
    Clone
    + fmt::Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(v: f64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    /// Constant part as a float (pivoting, genericity checks, reporting).
    fn value(&self) -> f64;
    /// `self += a * b`
    fn mul_acc(&mut self, a: &Self, b: &Self);
    fn elem(&self, f: Elementary) -> Result<Self, JetError>;
    /// Exactly zero (every component, for series).
    fn is_zero(&self) -> bool;

    fn from_i64(v: i64) -> Self {
        Self::from_ratio(v, 1)
    }

    fn recip(&self) -> Self {
        Self::one() / self
    }

    fn square(&self) -> Self {
        self.clone() * self
    }

    fn powi(&self, n: i32) -> Self {
        if n < 0 {
            return self.recip().powi(-n);
        }
        let mut base = self.clone();
        let mut acc = Self::one();
        let mut e = n as u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// True when arithmetic is exact (rational oracle mode).
    fn is_exact() -> bool {
        false
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn value(&self) -> f64 {
        *self
    }
    #[inline]
    fn mul_acc(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
    fn elem(&self, f: Elementary) -> Result<Self, JetError> {
        let x = *self;
        match f {
            Elementary::Sin => Ok(x.sin()),
            Elementary::Cos => Ok(x.cos()),
            Elementary::Exp => Ok(x.exp()),
            Elementary::Log => {
                if x > 0.0 {
                    Ok(x.ln())
                } else {
                    Err(JetError::DomainError(format!("log of non-positive value {x}")))
                }
            }
            Elementary::Pow(p, q) => float_pow(x, p, q),
        }
    }
    fn powi(&self, n: i32) -> Self {
        f64::powi(*self, n)
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
}

fn float_pow(x: f64, p: i64, q: i64) -> Result<f64, JetError> {
    if q == 1 {
        if x == 0.0 && p < 0 {
            return Err(JetError::DomainError("negative power of zero".into()));
        }
        return Ok(x.powi(p as i32));
    }
    if x == 0.0 {
        return if p > 0 {
            Ok(0.0)
        } else {
            Err(JetError::DomainError("non-positive power of zero".into()))
        };
    }
    let root = match q {
        2 => {
            if x < 0.0 {
                return Err(JetError::DomainError(format!("square root of negative value {x}")));
            }
            x.sqrt()
        }
        3 => x.cbrt(),
        _ => {
            if x < 0.0 && q % 2 == 0 {
                return Err(JetError::DomainError(format!("even root of negative value {x}")));
            }
            x.signum() * x.abs().powf(1.0 / q as f64)
        }
    };
    Ok(root.powi(p as i32))
}

/// Exact rational scalar backed by `num_rational::BigRational`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(pub BigRational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Exact `q`-th root when one exists in the rationals.
    fn exact_root(&self, q: u32) -> Option<Rational> {
        if q == 1 {
            return Some(self.clone());
        }
        let neg = self.0.is_negative();
        if neg && q % 2 == 0 {
            return None;
        }
        let num = self.0.numer().abs();
        let den = self.0.denom().clone();
        let rn = num.nth_root(q);
        let rd = den.nth_root(q);
        if num_traits::pow(rn.clone(), q as usize) == num && num_traits::pow(rd.clone(), q as usize) == den {
            let r = BigRational::new(rn, rd);
            Some(Rational(if neg { -r } else { r }))
        } else {
            None
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

macro_rules! rational_binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational(self.0 $op rhs.0)
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: &'a Rational) -> Rational {
                Rational(self.0 $op &rhs.0)
            }
        }
    };
}

rational_binop!(Add, add, +);
rational_binop!(Sub, sub, -);
rational_binop!(Mul, mul, *);
rational_binop!(Div, div, /);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        Rational(BigRational::zero())
    }
    fn one() -> Self {
        Rational(BigRational::one())
    }
    fn from_f64(v: f64) -> Self {
        Rational(BigRational::from_float(v).expect("finite float"))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(num, den)
    }
    fn value(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
    fn mul_acc(&mut self, a: &Self, b: &Self) {
        if a.0.is_zero() || b.0.is_zero() {
            return;
        }
        self.0 += &a.0 * &b.0;
    }
    fn elem(&self, f: Elementary) -> Result<Self, JetError> {
        match f {
            Elementary::Pow(p, q) => {
                if self.0.is_zero() {
                    return if p > 0 {
                        Ok(Self::zero())
                    } else {
                        Err(JetError::DomainError("non-positive power of zero".into()))
                    };
                }
                let root = self
                    .exact_root(q as u32)
                    .ok_or_else(|| JetError::Inexact(format!("{}^(1/{q})", self.0)))?;
                Ok(root.powi(p as i32))
            }
            Elementary::Exp if self.0.is_zero() => Ok(Self::one()),
            Elementary::Cos if self.0.is_zero() => Ok(Self::one()),
            Elementary::Sin if self.0.is_zero() => Ok(Self::zero()),
            Elementary::Log if self.0.is_one() => Ok(Self::zero()),
            Elementary::Log if !self.0.is_positive() => {
                Err(JetError::DomainError(format!("log of non-positive value {}", self.0)))
            }
            other => Err(JetError::Inexact(format!("{other:?}({})", self.0))),
        }
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn is_exact() -> bool {
        true
    }
}

/// Double-double scalar (about 32 significant digits). Used where float
/// conditioning, not the formulas, would otherwise limit a comparison.
impl Scalar for TwoFloat {
    fn zero() -> Self {
        TwoFloat::from(0.0)
    }
    fn one() -> Self {
        TwoFloat::from(1.0)
    }
    fn from_f64(v: f64) -> Self {
        TwoFloat::from(v)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        TwoFloat::from(num) / TwoFloat::from(den)
    }
    fn value(&self) -> f64 {
        f64::from(*self)
    }
    #[inline]
    fn mul_acc(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
    fn elem(&self, f: Elementary) -> Result<Self, JetError> {
        let x = *self;
        let v = x.hi();
        match f {
            Elementary::Sin => Ok(x.sin()),
            Elementary::Cos => Ok(x.cos()),
            Elementary::Exp => Ok(x.exp()),
            Elementary::Log if v > 0.0 => Ok(x.ln()),
            Elementary::Log => Err(JetError::DomainError(format!("log of non-positive value {v}"))),
            Elementary::Pow(p, 1) if v == 0.0 && p < 0 => Err(JetError::DomainError("negative power of zero".into())),
            Elementary::Pow(p, 1) => Ok(x.powi(p as i32)),
            Elementary::Pow(p, _) if v == 0.0 => {
                if p > 0 {
                    Ok(<Self as Scalar>::zero())
                } else {
                    Err(JetError::DomainError("non-positive power of zero".into()))
                }
            }
            Elementary::Pow(p, q) => {
                if v < 0.0 && q % 2 == 0 {
                    return Err(JetError::DomainError(format!("even root of negative value {v}")));
                }
                let root = match q {
                    2 => x.sqrt(),
                    3 => x.cbrt(),
                    _ => {
                        let r = x.abs().powf(TwoFloat::from(1.0) / TwoFloat::from(q));
                        if v < 0.0 {
                            -r
                        } else {
                            r
                        }
                    }
                };
                Ok(root.powi(p as i32))
            }
        }
    }
    fn is_zero(&self) -> bool {
        self.hi() == 0.0 && self.lo() == 0.0
    }
}
