use rand::Rng;

use super::layout::layout;
use super::multi::MultiJet;
use super::series::{compose_many, invert_series};
use crate::error::{GroupError, JetError};
use crate::scalar::Scalar;

/// Jet of a submanifold written as a graph `u^j = u^j(x^1..x^p)`.
///
/// `base` holds the independent coordinates of the basepoint; each dependent
/// coordinate is a series in the offsets `t_i = x^i - base_i`.
#[derive(Clone, Debug)]
pub struct GraphJet<T> {
    pub base: Vec<T>,
    pub deps: Vec<MultiJet<T>>,
}

impl<T: Scalar> GraphJet<T> {
    pub fn new(base: Vec<T>, deps: Vec<MultiJet<T>>) -> Self {
        for d in &deps {
            assert!(d.is_constant() || d.nvars() == base.len(), "dependent series must live in the independent variables");
        }
        GraphJet { base, deps }
    }

    pub fn nindep(&self) -> usize {
        self.base.len()
    }

    pub fn ndeps(&self) -> usize {
        self.deps.len()
    }

    pub fn order(&self) -> usize {
        self.deps.iter().map(|d| d.order()).min().unwrap_or(0)
    }

    pub fn truncate(&self, order: usize) -> Self {
        GraphJet { base: self.base.clone(), deps: self.deps.iter().map(|d| d.truncate(order)).collect() }
    }

    /// Ambient coordinate `i` as a series: independent ones are `base_i + t_i`.
    pub fn coordinate(&self, i: usize) -> MultiJet<T> {
        let p = self.nindep();
        if i < p {
            MultiJet::variable(p, self.order(), i, self.base[i].clone())
        } else {
            self.deps[i - p].clone()
        }
    }

    pub fn point_series(&self) -> Vec<MultiJet<T>> {
        (0..self.nindep() + self.ndeps()).map(|i| self.coordinate(i)).collect()
    }

    pub fn basepoint(&self) -> Vec<T> {
        self.base.iter().cloned().chain(self.deps.iter().map(|d| d.constant_term().clone())).collect()
    }

    /// `∂^α u^j` at the basepoint.
    pub fn derivative(&self, j: usize, alpha: &[u8]) -> T {
        self.deps[j].derivative_value(alpha)
    }

    /// Re-graph a parametrized germ over its first `p` coordinates.
    ///
    /// `coords` are the ambient coordinates as series in `p` parameters.
    pub fn from_parametrization(coords: &[MultiJet<T>], p: usize) -> Result<Self, GroupError> {
        let base: Vec<T> = coords[..p].iter().map(|c| c.constant_term().clone()).collect();
        let shifted: Vec<MultiJet<T>> = coords[..p].iter().map(|c| c.with_constant(T::zero())).collect();
        let inv = match invert_series(&shifted) {
            Ok(v) => v,
            Err(JetError::SingularLinearPart { .. }) => return Err(GroupError::GraphDegeneracy),
            Err(e) => return Err(e.into()),
        };
        let deps = compose_many(&coords[p..], &inv)?;
        Ok(GraphJet { base, deps })
    }

    /// Flattened jet coordinates `(x^i, u^j_σ)` with `|σ| <= k`, dependents major.
    pub fn jet_coordinates(&self, k: usize) -> Vec<T> {
        let p = self.nindep();
        let l = layout(p, k);
        let mut out = self.base.clone();
        for d in &self.deps {
            for idx in 0..l.dim(k) {
                out.push(d.derivative_value(l.multi_index(idx)));
            }
        }
        out
    }

    /// Inverse of [`GraphJet::jet_coordinates`].
    pub fn from_jet_coordinates(p: usize, m: usize, k: usize, coords: &[T]) -> Self {
        let l = layout(p, k);
        let d = l.dim(k);
        assert_eq!(coords.len(), p + m * d, "jet coordinate count");
        let base = coords[..p].to_vec();
        let deps = (0..m)
            .map(|j| {
                MultiJet::from_fn(p, k, |alpha| {
                    let idx = l.index(alpha).unwrap();
                    let fact: i64 = alpha.iter().map(|&a| (1..=a as i64).product::<i64>()).product();
                    coords[p + j * d + idx].clone() / &T::from_i64(fact)
                })
            })
            .collect();
        GraphJet { base, deps }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> GraphJet<U> {
        GraphJet { base: self.base.iter().map(&f).collect(), deps: self.deps.iter().map(|d| d.map(&f)).collect() }
    }

    /// Jet data evaluated at the basepoint.
    pub fn values(&self) -> JetData<T> {
        let p = self.nindep();
        let k = self.order();
        let l = layout(p, k);
        let u = self
            .deps
            .iter()
            .map(|d| (0..l.dim(k)).map(|idx| d.derivative_value(l.multi_index(idx))).collect())
            .collect();
        JetData { p, order: k, x: self.base.clone(), u }
    }

    /// Jet data as series along the submanifold, so that total derivatives
    /// become partial derivatives in the offsets.
    pub fn along(&self) -> JetData<MultiJet<T>> {
        let p = self.nindep();
        let k = self.order();
        let l = layout(p, k);
        let x = (0..p).map(|i| MultiJet::variable(p, k, i, self.base[i].clone())).collect();
        let u = self
            .deps
            .iter()
            .map(|d| {
                (0..l.dim(k))
                    .map(|idx| {
                        let alpha = l.multi_index(idx);
                        let mut s = d.clone();
                        for (v, &a) in alpha.iter().enumerate() {
                            for _ in 0..a {
                                s = s.partial(v).expect("order covers alpha");
                            }
                        }
                        s
                    })
                    .collect()
            })
            .collect();
        JetData { p, order: k, x, u }
    }
}

impl GraphJet<f64> {
    /// Random jet with base coordinates and Taylor coefficients drawn from
    /// `[-2,-0.5] ∪ [0.5,2]`.
    pub fn random<R: Rng + ?Sized>(p: usize, m: usize, order: usize, rng: &mut R) -> Self {
        let base = (0..p).map(|_| generic_value(rng)).collect();
        let deps = (0..m).map(|_| MultiJet::from_fn(p, order, |_| generic_value(rng))).collect();
        GraphJet { base, deps }
    }
}

/// Uniform draw from `[-2,-0.5] ∪ [0.5,2]`.
pub fn generic_value<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let v: f64 = rng.gen_range(0.5..2.0);
    if rng.gen_bool(0.5) {
        v
    } else {
        -v
    }
}

/// Independent coordinates and all derivatives `∂^σ u^j`, `|σ| <= order`.
#[derive(Clone, Debug)]
pub struct JetData<S> {
    pub p: usize,
    pub order: usize,
    pub x: Vec<S>,
    /// `u[j][idx]` with `idx` the layout position of `σ`
    pub u: Vec<Vec<S>>,
}

impl<S: Scalar> JetData<S> {
    /// `∂^σ u^j`.
    pub fn u(&self, j: usize, alpha: &[u8]) -> &S {
        let l = layout(self.p, self.order);
        let idx = l.index(alpha).expect("multi-index in range");
        assert!(idx < self.u[j].len(), "jet order {} too low for {:?}", self.order, alpha);
        &self.u[j][idx]
    }

    /// First derivative `∂u^j/∂x^i`.
    pub fn d1(&self, j: usize, i: usize) -> &S {
        let mut a = vec![0u8; self.p];
        a[i] = 1;
        self.u(j, &a)
    }

    /// Second derivative `∂²u^j/∂x^i∂x^k`.
    pub fn d2(&self, j: usize, i: usize, k: usize) -> &S {
        let mut a = vec![0u8; self.p];
        a[i] += 1;
        a[k] += 1;
        self.u(j, &a)
    }

    /// Third derivative.
    pub fn d3(&self, j: usize, i: usize, k: usize, l: usize) -> &S {
        let mut a = vec![0u8; self.p];
        a[i] += 1;
        a[k] += 1;
        a[l] += 1;
        self.u(j, &a)
    }

    /// All ambient coordinates at the point: `x` then `u^j`.
    pub fn point(&self) -> Vec<S> {
        let zero = vec![0u8; self.p];
        self.x.iter().cloned().chain((0..self.u.len()).map(|j| self.u(j, &zero).clone())).collect()
    }
}

/// Vector field `Σ a_i D_i` on series along a submanifold.
#[derive(Clone, Debug)]
pub struct Derivation<T> {
    pub coeffs: Vec<MultiJet<T>>,
}

impl<T: Scalar> Derivation<T> {
    pub fn new(coeffs: Vec<MultiJet<T>>) -> Self {
        Derivation { coeffs }
    }

    /// `Σ a_i ∂f/∂t_i`, one order lower than `f`.
    pub fn apply(&self, f: &MultiJet<T>) -> Result<MultiJet<T>, JetError> {
        let mut acc = MultiJet::constant(T::zero());
        for (i, a) in self.coeffs.iter().enumerate() {
            acc = acc + a.clone() * f.partial(i)?;
        }
        Ok(acc)
    }

    pub fn scale(&self, c: &MultiJet<T>) -> Self {
        Derivation { coeffs: self.coeffs.iter().map(|a| a.clone() * c).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        Derivation { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() + b).collect() }
    }

    /// Commutator `[self, other]`.
    pub fn bracket(&self, other: &Self) -> Result<Self, JetError> {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| Ok(self.apply(b)? - other.apply(a)?))
            .collect::<Result<_, JetError>>()?;
        Ok(Derivation { coeffs })
    }

    /// Coefficient values at the basepoint.
    pub fn at_point(&self) -> Vec<T> {
        self.coeffs.iter().map(|a| a.constant_term().clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn jet_coordinates_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = GraphJet::random(2, 2, 3, &mut rng);
        let c = g.jet_coordinates(3);
        let h = GraphJet::from_jet_coordinates(2, 2, 3, &c);
        for (a, b) in g.deps.iter().zip(&h.deps) {
            assert!(a.max_abs_diff(b) < 1e-14);
        }
    }

    #[test]
    fn along_series_realize_total_derivatives() {
        // u = x^2 y at (1, 2)
        let x = MultiJet::variable(2, 3, 0, 1.0);
        let y = MultiJet::variable(2, 3, 1, 2.0);
        let g = GraphJet::new(vec![1.0, 2.0], vec![x.clone() * &x * &y]);
        let a = g.along();
        let ux = a.d1(0, 0).clone();
        // D_x(u_x) = u_xx = 2y = 4
        assert!((ux.partial(0).unwrap().value() - 4.0).abs() < 1e-14);
        assert!((g.values().d2(0, 0, 1) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn reparametrized_graph() {
        // the curve (s + s^2, s) regraphed over its first coordinate
        let s = MultiJet::variable(1, 3, 0, 0.0);
        let coords = vec![s.clone() + s.clone() * &s, s.clone()];
        let g = GraphJet::from_parametrization(&coords, 1).unwrap();
        // inverse of x = s + s^2 is s = x - x^2 + 2x^3
        let want = [0.0, 1.0, -1.0, 2.0];
        for (c, w) in g.deps[0].coeffs().iter().zip(want) {
            assert!((c - w).abs() < 1e-14);
        }
    }
}
