use std::ops::{Add, Div, Mul, Neg, Sub};

use super::multi::{MultiJet, EXACT};
use crate::error::JetError;
use crate::scalar::{Elementary, Scalar};

/// Univariate truncated Taylor series `Σ c_j (t - t0)^j`.
///
/// Thin wrapper over a one-variable [`MultiJet`] that also remembers the
/// expansion point, which `compose` uses to check centering.
#[derive(Clone, Debug)]
pub struct TaylorJet<T> {
    jet: MultiJet<T>,
    basepoint: T,
}

impl<T: Scalar> TaylorJet<T> {
    /// The identity function `t` expanded at `t0`.
    pub fn variable(t0: T, order: usize) -> Self {
        TaylorJet { jet: MultiJet::variable(1, order, 0, t0.clone()), basepoint: t0 }
    }

    pub fn constant(c: T) -> Self {
        TaylorJet { jet: MultiJet::constant(c), basepoint: T::zero() }
    }

    pub fn from_coeffs(t0: T, coeffs: Vec<T>) -> Self {
        let k = coeffs.len() - 1;
        TaylorJet { jet: MultiJet::from_coeffs(1, k, coeffs).expect("univariate length"), basepoint: t0 }
    }

    pub fn from_multi(jet: MultiJet<T>, t0: T) -> Self {
        assert!(jet.is_constant() || jet.nvars() == 1, "TaylorJet needs a one-variable jet");
        TaylorJet { jet, basepoint: t0 }
    }

    /// Restriction of a multivariate jet to the line through its basepoint along `var`.
    pub fn restrict(jet: &MultiJet<T>, var: usize, t0: T) -> Self {
        if jet.is_constant() {
            return TaylorJet { jet: jet.clone(), basepoint: t0 };
        }
        let n = jet.nvars();
        let coeffs = (0..=jet.order())
            .map(|k| {
                let mut a = vec![0u8; n];
                a[var] = k as u8;
                jet.coeff(&a)
            })
            .collect();
        TaylorJet::from_coeffs(t0, coeffs)
    }

    pub fn order(&self) -> usize {
        self.jet.order()
    }

    pub fn basepoint(&self) -> &T {
        &self.basepoint
    }

    pub fn coeffs(&self) -> &[T] {
        self.jet.coeffs()
    }

    /// `c_j = f^(j)(t0)/j!`, zero past the stored order.
    pub fn coeff(&self, j: usize) -> T {
        self.jet.coeff(&[j as u8])
    }

    /// `f^(j)(t0)`.
    pub fn derivative_value(&self, j: usize) -> T {
        self.jet.derivative_value(&[j as u8])
    }

    pub fn as_multi(&self) -> &MultiJet<T> {
        &self.jet
    }

    pub fn into_multi(self) -> MultiJet<T> {
        self.jet
    }

    pub fn derivative(&self) -> Result<Self, JetError> {
        Ok(TaylorJet { jet: self.jet.partial(0)?, basepoint: self.basepoint.clone() })
    }

    pub fn truncate(&self, order: usize) -> Self {
        TaylorJet { jet: self.jet.truncate(order), basepoint: self.basepoint.clone() }
    }

    pub fn try_recip(&self) -> Result<Self, JetError> {
        Ok(TaylorJet { jet: self.jet.try_recip()?, basepoint: self.basepoint.clone() })
    }

    pub fn apply(&self, f: Elementary) -> Result<Self, JetError> {
        Ok(TaylorJet { jet: self.jet.apply(f)?, basepoint: self.basepoint.clone() })
    }

    /// `outer ∘ inner`; `inner(t0)` must equal the expansion point of `outer`.
    pub fn compose(outer: &Self, inner: &Self) -> Result<Self, JetError> {
        let c0 = inner.jet.constant_term().value();
        let b = outer.basepoint.value();
        if !outer.jet.is_constant() && (c0 - b).abs() > 1e-12 * (1.0 + b.abs()) {
            return Err(JetError::BasepointMismatch { inner: c0, outer: b });
        }
        if outer.jet.is_constant() {
            return Ok(TaylorJet { jet: outer.jet.clone(), basepoint: inner.basepoint.clone() });
        }
        let h = inner.jet.with_constant(T::zero());
        let k = outer.order().min(inner.order());
        let series: Vec<T> = outer.coeffs()[..=k].to_vec();
        let jet = super::multi::compose_univariate(&series, &h);
        Ok(TaylorJet { jet, basepoint: inner.basepoint.clone() })
    }

    /// Local inverse of `s`: expanded at `s(t0)`, taking the value `t0` there.
    pub fn invert(&self) -> Result<Self, JetError> {
        let inv = super::series::invert_series(std::slice::from_ref(&self.jet))?;
        let jet = inv.into_iter().next().unwrap().with_constant(self.basepoint.clone());
        Ok(TaylorJet { jet, basepoint: self.jet.constant_term().clone() })
    }

    fn wrap(&self, other: &Self, jet: MultiJet<T>) -> Self {
        let basepoint = if self.jet.is_constant() { other.basepoint.clone() } else { self.basepoint.clone() };
        TaylorJet { jet, basepoint }
    }
}

macro_rules! taylor_binop {
    ($tr:ident, $m:ident) => {
        impl<T: Scalar> $tr for TaylorJet<T> {
            type Output = Self;
            fn $m(self, rhs: Self) -> Self {
                let jet = $tr::$m(self.jet.clone(), &rhs.jet);
                self.wrap(&rhs, jet)
            }
        }
        impl<'a, T: Scalar> $tr<&'a TaylorJet<T>> for TaylorJet<T> {
            type Output = Self;
            fn $m(self, rhs: &'a Self) -> Self {
                let jet = $tr::$m(self.jet.clone(), &rhs.jet);
                self.wrap(rhs, jet)
            }
        }
    };
}

taylor_binop!(Add, add);
taylor_binop!(Sub, sub);
taylor_binop!(Mul, mul);
taylor_binop!(Div, div);

impl<T: Scalar> Neg for TaylorJet<T> {
    type Output = Self;
    fn neg(self) -> Self {
        TaylorJet { jet: -self.jet, basepoint: self.basepoint }
    }
}

impl<T: Scalar> Scalar for TaylorJet<T> {
    fn zero() -> Self {
        TaylorJet::constant(T::zero())
    }
    fn one() -> Self {
        TaylorJet::constant(T::one())
    }
    fn from_f64(v: f64) -> Self {
        TaylorJet::constant(T::from_f64(v))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        TaylorJet::constant(T::from_ratio(num, den))
    }
    fn value(&self) -> f64 {
        self.jet.value()
    }
    fn mul_acc(&mut self, a: &Self, b: &Self) {
        let prod = a.clone() * b;
        let cur = std::mem::replace(self, TaylorJet::zero());
        *self = cur + &prod;
    }
    fn elem(&self, f: Elementary) -> Result<Self, JetError> {
        self.apply(f)
    }
    fn is_zero(&self) -> bool {
        self.jet.is_zero()
    }
    fn recip(&self) -> Self {
        TaylorJet { jet: self.jet.recip(), basepoint: self.basepoint.clone() }
    }
    fn is_exact() -> bool {
        T::is_exact()
    }
}

impl<T: Scalar> TaylorJet<T> {
    /// True for exact constants, which carry no expansion point.
    pub fn is_constant(&self) -> bool {
        self.jet.order() == EXACT
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn compose_square_after_shift() {
        let s = TaylorJet::variable(1.0, 2);
        let outer = s.clone() * &s;
        let inner = TaylorJet::variable(0.0, 2) + TaylorJet::constant(1.0);
        let r = TaylorJet::compose(&outer, &inner).unwrap();
        assert_eq!(r.coeffs(), &[1.0, 2.0, 1.0]);
    }

    #[test]
    fn compose_cube_with_quadratic() {
        let s = TaylorJet::variable(Rational::from_i64(0), 3);
        let outer = s.powi(3);
        let t = TaylorJet::variable(Rational::from_i64(0), 3);
        let inner = t.clone() + t.square();
        let r = TaylorJet::compose(&outer, &inner).unwrap();
        let want: Vec<Rational> = [0, 0, 0, 1].iter().map(|&v| Rational::from_i64(v)).collect();
        assert_eq!(r.coeffs(), &want[..]);
    }

    #[test]
    fn compose_identity_outer() {
        let t = TaylorJet::variable(0.5, 3);
        let inner = t.apply(Elementary::Exp).unwrap();
        let outer = TaylorJet::variable(*inner.coeffs().first().unwrap(), 3);
        let r = TaylorJet::compose(&outer, &inner).unwrap();
        assert!(r.as_multi().max_abs_diff(inner.as_multi()) < 1e-15);
    }

    #[test]
    fn compose_rejects_off_center_inner() {
        let outer = TaylorJet::variable(0.0, 2);
        let inner = TaylorJet::variable(0.0, 2) + TaylorJet::constant(1.0);
        assert!(matches!(TaylorJet::compose(&outer, &inner), Err(JetError::BasepointMismatch { .. })));
    }

    #[test]
    fn invert_linear_and_quadratic() {
        let t = TaylorJet::variable(Rational::from_i64(0), 3);
        let inv = (t.clone() * &Rational::from_i64(2).into_taylor()).invert().unwrap();
        let want: Vec<Rational> = vec![Rational::from_i64(0), Rational::new(1, 2), Rational::from_i64(0), Rational::from_i64(0)];
        assert_eq!(inv.coeffs(), &want[..]);

        let t2 = TaylorJet::variable(Rational::from_i64(0), 2);
        let inv2 = (t2.clone() + t2.square()).invert().unwrap();
        let want2: Vec<Rational> = vec![Rational::from_i64(0), Rational::from_i64(1), Rational::from_i64(-1)];
        assert_eq!(inv2.coeffs(), &want2[..]);
    }

    trait IntoTaylor: Scalar {
        fn into_taylor(self) -> TaylorJet<Self> {
            TaylorJet::constant(self)
        }
    }
    impl IntoTaylor for Rational {}
}
