//! Differential invariants, invariant derivations and syzygies.
//!
//! Every evaluator works on series along the submanifold (see
//! [`GraphJet::along`](crate::GraphJet::along)), so an invariant derivation
//! is an ordinary derivation of series and point values are constant terms.
//! Evaluators are generic over the scalar, which gives float, exact-rational
//! and dual-number (gradient) evaluation from one code path.

pub mod contact;
pub mod curves;
pub mod extended;
pub mod functions;
mod linear;
pub mod hypersurf;
pub mod surfaces;

mod family;
pub use family::{Evaluation, Family};

use crate::error::{InvariantError, JetError};
use crate::jet::{layout, Derivation, GraphJet, MultiJet};
use crate::scalar::Scalar;

pub type Series<T> = MultiJet<T>;

/// Pivots with `|v| <= 1e-10·scale` count as zero.
pub const DEGENERACY_TOLERANCE: f64 = 1e-10;

pub(crate) fn nonzero(v: f64, scale: f64) -> bool {
    v.abs() > DEGENERACY_TOLERANCE * scale && v.is_finite()
}

/// Whether `d` vanishes at the point: exactly in exact mode, else relative to `scale`.
pub(crate) fn vanishes<T: Scalar>(d: &Series<T>, scale: f64) -> bool {
    if T::is_exact() {
        d.constant_term().is_zero()
    } else {
        !nonzero(d.constant_term().value(), scale)
    }
}

/// `1/d`, or `err` when `d` vanishes at the point relative to `scale`.
pub(crate) fn recip_or<T: Scalar, E>(d: &Series<T>, scale: f64, err: E) -> Result<Series<T>, E> {
    if vanishes(d, scale) {
        return Err(err);
    }
    d.try_recip().map_err(|_| err)
}

/// Summands `a_i D_i f` of a derivation applied to `f`.
pub(crate) fn apply_terms<T: Scalar>(der: &Derivation<T>, f: &Series<T>) -> Result<Vec<Series<T>>, JetError> {
    der.coeffs.iter().enumerate().map(|(i, a)| Ok(a.clone() * f.partial(i)?)).collect()
}

/// Sum of `terms` that should vanish, kept term by term so the residual
/// can be normalized by its largest summand.
#[derive(Clone, Debug)]
pub struct Residual<T> {
    pub name: &'static str,
    pub terms: Vec<T>,
}

impl<T: Scalar> Residual<T> {
    pub fn new(name: &'static str, terms: Vec<T>) -> Self {
        Residual { name, terms }
    }

    /// Point values of series summands.
    pub fn from_series(name: &'static str, terms: Vec<Series<T>>) -> Self {
        Residual { name, terms: terms.into_iter().map(|t| t.constant_term().clone()).collect() }
    }

    pub fn value(&self) -> T {
        self.terms.iter().fold(T::zero(), |acc, t| acc + t)
    }

    /// `|Σ t_i| / max |t_i|`, zero when every summand vanishes.
    pub fn normalized(&self) -> f64 {
        let scale = self.terms.iter().map(|t| t.value().abs()).fold(0.0, f64::max);
        if scale == 0.0 {
            0.0
        } else {
            self.value().value().abs() / scale
        }
    }
}

/// Jacobian of jet functions with respect to the fiber coordinates of exact
/// order `order` (the derivatives `∂^σ u^j`, `|σ| = order`), one row per function.
pub fn fiber_jacobian<F>(jet: &GraphJet<f64>, order: usize, f: F) -> Result<Vec<Vec<f64>>, InvariantError>
where
    F: Fn(&GraphJet<MultiJet<f64>>) -> Result<Vec<Series<MultiJet<f64>>>, InvariantError>,
{
    let (p, m) = (jet.nindep(), jet.ndeps());
    let l = layout(p, order);
    let coords = jet.jet_coordinates(order);
    let block = l.dim(order);
    let free: Vec<usize> = (0..m)
        .flat_map(|j| (0..block).filter(|&idx| l.degree(idx) == order).map(move |idx| p + j * block + idx))
        .collect();
    let nv = free.len();
    let duals: Vec<MultiJet<f64>> = coords
        .iter()
        .enumerate()
        .map(|(i, &c)| match free.iter().position(|&f| f == i) {
            Some(v) => MultiJet::variable(nv, 1, v, c),
            None => MultiJet::constant(c),
        })
        .collect();
    let g = GraphJet::from_jet_coordinates(p, m, order, &duals);
    let vals = f(&g)?;
    Ok(vals
        .iter()
        .map(|s| {
            let d = s.constant_term();
            (0..nv)
                .map(|i| {
                    if d.is_constant() {
                        return 0.0;
                    }
                    let mut e = vec![0u8; nv];
                    e[i] = 1;
                    d.derivative_value(&e)
                })
                .collect()
        })
        .collect())
}
