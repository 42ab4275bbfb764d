use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use super::layout::{jet_dim, layout, Layout, NONE};
use crate::error::JetError;
use crate::scalar::{Elementary, Scalar};

/// Order tag of exact constants: they combine with jets of any order.
pub const EXACT: usize = usize::MAX;

/// Truncated multivariate Taylor series.
///
/// The coefficient of the multi-index `σ` is `∂^σ f / σ!` at the (implicit)
/// basepoint. Arithmetic is exact through `order`; mixing orders truncates to
/// the smaller one. A jet without layout is an exact constant.
#[derive(Clone)]
pub struct MultiJet<T> {
    layout: Option<Arc<Layout>>,
    order: usize,
    coeffs: Vec<T>,
}

impl<T: Scalar> MultiJet<T> {
    pub fn constant(c: T) -> Self {
        MultiJet { layout: None, order: EXACT, coeffs: vec![c] }
    }

    pub fn zeros(nvars: usize, order: usize) -> Self {
        let l = layout(nvars, order);
        let d = l.dim(order);
        MultiJet { layout: Some(l), order, coeffs: vec![T::zero(); d] }
    }

    pub fn constant_in(nvars: usize, order: usize, c: T) -> Self {
        let mut z = Self::zeros(nvars, order);
        z.coeffs[0] = c;
        z
    }

    /// The coordinate function `center + t_var`.
    pub fn variable(nvars: usize, order: usize, var: usize, center: T) -> Self {
        assert!(var < nvars);
        let mut z = Self::constant_in(nvars, order, center);
        if order >= 1 {
            let mut e = vec![0u8; nvars];
            e[var] = 1;
            let idx = z.layout().index(&e).unwrap();
            z.coeffs[idx] = T::one();
        }
        z
    }

    pub fn from_coeffs(nvars: usize, order: usize, coeffs: Vec<T>) -> Result<Self, JetError> {
        if coeffs.len() != jet_dim(nvars, order) {
            return Err(JetError::ShapeMismatch(format!(
                "expected {} coefficients, got {}",
                jet_dim(nvars, order),
                coeffs.len()
            )));
        }
        Ok(MultiJet { layout: Some(layout(nvars, order)), order, coeffs })
    }

    /// Build coefficients from a function of the multi-index.
    pub fn from_fn(nvars: usize, order: usize, mut f: impl FnMut(&[u8]) -> T) -> Self {
        let l = layout(nvars, order);
        let coeffs = (0..l.dim(order)).map(|i| f(l.multi_index(i))).collect();
        MultiJet { layout: Some(l), order, coeffs }
    }

    pub fn is_constant(&self) -> bool {
        self.layout.is_none()
    }

    pub fn nvars(&self) -> usize {
        self.layout.as_ref().map_or(0, |l| l.nvars())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [T] {
        &mut self.coeffs
    }

    pub(crate) fn layout(&self) -> &Arc<Layout> {
        self.layout.as_ref().expect("constant jet has no layout")
    }

    pub fn constant_term(&self) -> &T {
        &self.coeffs[0]
    }

    /// Multi-index of the coefficient stored at `idx`.
    pub fn multi_index(&self, idx: usize) -> Vec<u8> {
        match &self.layout {
            Some(l) => l.multi_index(idx).to_vec(),
            None => vec![],
        }
    }

    /// Taylor coefficient `∂^α f / α!`; zero for indices the jet does not carry.
    pub fn coeff(&self, alpha: &[u8]) -> T {
        match &self.layout {
            None => {
                if alpha.iter().all(|&a| a == 0) {
                    self.coeffs[0].clone()
                } else {
                    T::zero()
                }
            }
            Some(l) => match l.index(alpha) {
                Some(i) if i < self.coeffs.len() => self.coeffs[i].clone(),
                _ => T::zero(),
            },
        }
    }

    /// Partial derivative value `∂^α f` at the basepoint.
    pub fn derivative_value(&self, alpha: &[u8]) -> T {
        let fact: i64 = alpha.iter().map(|&a| factorial(a as usize)).product();
        self.coeff(alpha) * &T::from_i64(fact)
    }

    pub fn truncate(&self, order: usize) -> Self {
        if order >= self.order || self.layout.is_none() {
            return self.clone();
        }
        let l = self.layout().clone();
        let d = l.dim(order);
        MultiJet { layout: Some(l), order, coeffs: self.coeffs[..d].to_vec() }
    }

    /// `∂f/∂t_var`, one order lower.
    pub fn partial(&self, var: usize) -> Result<Self, JetError> {
        let Some(l) = &self.layout else {
            return Ok(MultiJet::constant(T::zero()));
        };
        if self.order == 0 {
            return Err(JetError::OrderExhausted);
        }
        let k = self.order - 1;
        let d = l.dim(k);
        let mut out = Vec::with_capacity(d);
        for idx in 0..d {
            let j = l.up(var, idx);
            debug_assert_ne!(j, NONE);
            let a = l.multi_index(idx)[var] as i64 + 1;
            out.push(self.coeffs[j as usize].clone() * &T::from_i64(a));
        }
        Ok(MultiJet { layout: Some(l.clone()), order: k, coeffs: out })
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> MultiJet<U> {
        MultiJet { layout: self.layout.clone(), order: self.order, coeffs: self.coeffs.iter().map(f).collect() }
    }

    /// Copy with the constant term replaced.
    pub fn with_constant(&self, c: T) -> Self {
        let mut out = self.clone();
        out.coeffs[0] = c;
        out
    }

    pub fn scale(&self, c: &T) -> Self {
        MultiJet {
            layout: self.layout.clone(),
            order: self.order,
            coeffs: self.coeffs.iter().map(|x| x.clone() * c).collect(),
        }
    }

    /// Reciprocal, failing when the constant term vanishes.
    pub fn try_recip(&self) -> Result<Self, JetError> {
        let c0 = self.coeffs[0].value();
        if c0 == 0.0 || !c0.is_finite() || (T::is_exact() && c0.abs() < f64::MIN_POSITIVE) {
            return Err(JetError::DivisionByZeroJet);
        }
        Ok(self.recip_unchecked())
    }

    pub fn try_div(&self, rhs: &Self) -> Result<Self, JetError> {
        Ok(self.clone() * rhs.try_recip()?)
    }

    fn recip_unchecked(&self) -> Self {
        let inv0 = T::one() / &self.coeffs[0];
        if self.layout.is_none() {
            return MultiJet::constant(inv0);
        }
        let k = self.order;
        let mut series = Vec::with_capacity(k + 1);
        let neg = -inv0.clone();
        let mut c = inv0;
        for _ in 0..=k {
            series.push(c.clone());
            c = c * &neg;
        }
        let h = self.with_constant(T::zero());
        compose_univariate(&series, &h)
    }

    /// Elementary function applied through its Taylor expansion at the constant term.
    pub fn apply(&self, f: Elementary) -> Result<Self, JetError> {
        let a0 = self.coeffs[0].clone();
        if self.layout.is_none() {
            return Ok(MultiJet::constant(a0.elem(f)?));
        }
        if let Elementary::Pow(p, 1) = f {
            if p >= 0 {
                return Ok(self.powi(p as i32));
            }
            return Ok(self.try_recip()?.powi(-p as i32));
        }
        let k = self.order;
        let series = univariate_coefficients(f, &a0, k)?;
        let h = self.with_constant(T::zero());
        Ok(compose_univariate(&series, &h))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let n = self.coeffs.len().min(other.coeffs.len());
        (0..n).map(|i| (self.coeffs[i].value() - other.coeffs[i].value()).abs()).fold(0.0, f64::max)
    }
}

fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

/// Taylor coefficients `f^(k)(a0)/k!`, `k = 0..=order`.
pub(crate) fn univariate_coefficients<T: Scalar>(f: Elementary, a0: &T, order: usize) -> Result<Vec<T>, JetError> {
    let mut out = Vec::with_capacity(order + 1);
    match f {
        Elementary::Exp => {
            let e = a0.elem(Elementary::Exp)?;
            let mut c = e;
            for k in 0..=order {
                if k > 0 {
                    c = c / &T::from_i64(k as i64);
                }
                out.push(c.clone());
            }
        }
        Elementary::Log => {
            out.push(a0.elem(Elementary::Log)?);
            let inv = a0.recip();
            let mut p = T::one();
            for k in 1..=order {
                p = p * &inv;
                let sign = if k % 2 == 1 { 1 } else { -1 };
                out.push(p.clone() * &T::from_ratio(sign, k as i64));
            }
        }
        Elementary::Sin | Elementary::Cos => {
            let s = a0.elem(Elementary::Sin)?;
            let c = a0.elem(Elementary::Cos)?;
            // derivatives of sin cycle through sin, cos, -sin, -cos
            let cycle = [s.clone(), c.clone(), -s, -c];
            let shift = if f == Elementary::Sin { 0 } else { 1 };
            let mut fact = 1i64;
            for k in 0..=order {
                if k > 0 {
                    fact *= k as i64;
                }
                out.push(cycle[(k + shift) % 4].clone() / &T::from_i64(fact));
            }
        }
        Elementary::Pow(p, q) => {
            if a0.value() == 0.0 {
                return Err(JetError::DomainError("fractional or negative power at a zero constant term".into()));
            }
            let c0 = a0.elem(f)?;
            let inv = a0.recip();
            let mut c = c0;
            for k in 0..=order {
                if k > 0 {
                    let i = (k - 1) as i64;
                    c = c * &inv * &T::from_ratio(p - i * q, q * (i + 1));
                }
                out.push(c.clone());
            }
        }
    }
    Ok(out)
}

/// `Σ c_k h^k` by Horner's rule; `h` must have zero constant term.
pub(crate) fn compose_univariate<T: Scalar>(series: &[T], h: &MultiJet<T>) -> MultiJet<T> {
    let mut r = MultiJet::constant(series[series.len() - 1].clone());
    for c in series[..series.len() - 1].iter().rev() {
        r = h.clone() * r;
        r.coeffs[0] = r.coeffs[0].clone() + c;
    }
    r
}

impl<T: fmt::Debug> fmt::Debug for MultiJet<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(l) = &self.layout else {
            return write!(f, "Const({:?})", self.coeffs[0]);
        };
        write!(f, "MultiJet[n={}, K={}](", l.nvars(), self.order)?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:?}:{:?}", l.multi_index(i), c)?;
        }
        write!(f, ")")
    }
}

fn target_shape<T>(a: &MultiJet<T>, b: &MultiJet<T>) -> Option<(Arc<Layout>, usize)> {
    match (&a.layout, &b.layout) {
        (None, None) => None,
        (Some(l), None) => Some((l.clone(), a.order)),
        (None, Some(l)) => Some((l.clone(), b.order)),
        (Some(la), Some(lb)) => {
            assert_eq!(la.nvars(), lb.nvars(), "jets in different numbers of variables");
            let k = a.order.min(b.order);
            Some((if la.kmax() >= lb.kmax() { la.clone() } else { lb.clone() }, k))
        }
    }
}

fn add_sub<T: Scalar>(mut a: MultiJet<T>, b: &MultiJet<T>, sub: bool) -> MultiJet<T> {
    let combine = |x: T, y: &T| if sub { x - y } else { x + y };
    match target_shape(&a, b) {
        None => {
            let c = combine(a.coeffs.pop().unwrap(), &b.coeffs[0]);
            MultiJet::constant(c)
        }
        Some((l, k)) => {
            if b.layout.is_none() {
                a.coeffs[0] = combine(a.coeffs[0].clone(), &b.coeffs[0]);
                return a;
            }
            if a.layout.is_none() {
                let mut out: MultiJet<T> = if sub { -b.clone() } else { b.clone() };
                out.coeffs[0] = out.coeffs[0].clone() + &a.coeffs[0];
                return out;
            }
            let d = l.dim(k);
            a.coeffs.truncate(d);
            for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs[..d]) {
                let v = std::mem::replace(x, T::zero());
                *x = combine(v, y);
            }
            MultiJet { layout: Some(l), order: k, coeffs: a.coeffs }
        }
    }
}

fn mul_jets<T: Scalar>(a: &MultiJet<T>, b: &MultiJet<T>) -> MultiJet<T> {
    match target_shape(a, b) {
        None => MultiJet::constant(a.coeffs[0].clone() * &b.coeffs[0]),
        Some((l, k)) => {
            if b.layout.is_none() {
                return a.scale(&b.coeffs[0]);
            }
            if a.layout.is_none() {
                return b.scale(&a.coeffs[0]);
            }
            let d = l.dim(k);
            let mut out = vec![T::zero(); d];
            for &(i, j, r) in l.pairs(k) {
                out[r as usize].mul_acc(&a.coeffs[i as usize], &b.coeffs[j as usize]);
            }
            MultiJet { layout: Some(l), order: k, coeffs: out }
        }
    }
}

impl<T: Scalar> Add for MultiJet<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        add_sub(self, &rhs, false)
    }
}
impl<'a, T: Scalar> Add<&'a MultiJet<T>> for MultiJet<T> {
    type Output = Self;
    fn add(self, rhs: &'a Self) -> Self {
        add_sub(self, rhs, false)
    }
}
impl<T: Scalar> Sub for MultiJet<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        add_sub(self, &rhs, true)
    }
}
impl<'a, T: Scalar> Sub<&'a MultiJet<T>> for MultiJet<T> {
    type Output = Self;
    fn sub(self, rhs: &'a Self) -> Self {
        add_sub(self, rhs, true)
    }
}
impl<T: Scalar> Mul for MultiJet<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        mul_jets(&self, &rhs)
    }
}
impl<'a, T: Scalar> Mul<&'a MultiJet<T>> for MultiJet<T> {
    type Output = Self;
    fn mul(self, rhs: &'a Self) -> Self {
        mul_jets(&self, rhs)
    }
}
impl<T: Scalar> Div for MultiJet<T> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        mul_jets(&self, &rhs.recip_unchecked())
    }
}
impl<'a, T: Scalar> Div<&'a MultiJet<T>> for MultiJet<T> {
    type Output = Self;
    fn div(self, rhs: &'a Self) -> Self {
        mul_jets(&self, &rhs.recip_unchecked())
    }
}
impl<T: Scalar> Neg for MultiJet<T> {
    type Output = Self;
    fn neg(self) -> Self {
        MultiJet { layout: self.layout, order: self.order, coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl<T: Scalar> Scalar for MultiJet<T> {
    fn zero() -> Self {
        MultiJet::constant(T::zero())
    }
    fn one() -> Self {
        MultiJet::constant(T::one())
    }
    fn from_f64(v: f64) -> Self {
        MultiJet::constant(T::from_f64(v))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        MultiJet::constant(T::from_ratio(num, den))
    }
    fn value(&self) -> f64 {
        self.coeffs[0].value()
    }
    fn mul_acc(&mut self, a: &Self, b: &Self) {
        let cur = std::mem::replace(self, MultiJet::constant(T::zero()));
        *self = cur + mul_jets(a, b);
    }
    fn elem(&self, f: Elementary) -> Result<Self, JetError> {
        self.apply(f)
    }
    fn recip(&self) -> Self {
        self.recip_unchecked()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
    fn is_exact() -> bool {
        T::is_exact()
    }
}
