use rand::Rng;

use super::algebra::AlgebraElement;
use super::{Flavor, Geometry};
use crate::error::{GroupError, InvariantError, JetError};
use crate::jet::{layout, GraphJet, MultiJet};
use crate::linalg::numerical_rank;
use crate::scalar::Scalar;

/// Relative singular-value threshold for orbit ranks.
pub const RANK_TOLERANCE: f64 = 1e-9;
const MAX_SAMPLES: usize = 5;

/// Components of `X^{(k)}` at a jet, in the order of [`GraphJet::jet_coordinates`].
///
/// With `φ^j = b^j - Σ_i a^i u^j_i` the `∂_{u^j_σ}` component is
/// `D_σ φ^j + Σ_i a^i u^j_{σ+1_i}`; `D_σ φ^j` is read off the series of `φ^j`
/// along the submanifold, so the jet must have order at least `k+1`.
pub fn prolonged_field<T: Scalar>(
    x: &AlgebraElement,
    geometry: Geometry,
    jet: &GraphJet<T>,
    k: usize,
) -> Result<Vec<T>, GroupError> {
    if jet.order() < k + 1 {
        return Err(JetError::OrderExhausted.into());
    }
    let jet = jet.truncate(k + 1);
    let p = jet.nindep();
    let acted = geometry.acted_dim();
    let pts = jet.point_series();
    let xi: Vec<MultiJet<T>> = (0..pts.len())
        .map(|c| if c < acted { x.field[c].eval(&pts[..acted]) } else { MultiJet::constant(T::zero()) })
        .collect();
    let a: Vec<T> = xi[..p].iter().map(|s| s.constant_term().clone()).collect();
    let l = layout(p, k);
    let mut out = a.clone();
    for (j, u) in jet.deps.iter().enumerate() {
        let mut phi = xi[p + j].clone();
        for i in 0..p {
            phi = phi - xi[i].clone() * &u.partial(i)?;
        }
        for idx in 0..l.dim(k) {
            let sigma = l.multi_index(idx);
            let mut v = phi.derivative_value(sigma);
            let mut up = sigma.to_vec();
            for i in 0..p {
                up[i] += 1;
                v.mul_acc(&a[i], &u.derivative_value(&up));
                up[i] -= 1;
            }
            out.push(v);
        }
    }
    Ok(out)
}

/// Rank of the prolonged basis fields of `flavor` at one jet.
pub fn orbit_rank_at(flavor: Flavor, geometry: Geometry, jet: &GraphJet<f64>, k: usize) -> Result<usize, GroupError> {
    geometry.check_flavor(flavor)?;
    let rows = AlgebraElement::basis(flavor, geometry.n())
        .iter()
        .map(|x| prolonged_field(x, geometry, jet, k))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(numerical_rank(&rows, RANK_TOLERANCE))
}

/// Generic orbit dimension on `J^k`.
///
/// Jets are resampled until the largest rank seen has appeared twice, giving
/// up after five samples.
pub fn orbit_dimension<R: Rng + ?Sized>(
    flavor: Flavor,
    geometry: Geometry,
    k: usize,
    rng: &mut R,
) -> Result<usize, GroupError> {
    let mut ranks = Vec::new();
    for _ in 0..MAX_SAMPLES {
        let jet = GraphJet::random(geometry.nindep(), geometry.ndeps(), k + 1, rng);
        ranks.push(orbit_rank_at(flavor, geometry, &jet, k)?);
        let max = *ranks.iter().max().unwrap();
        if ranks.iter().filter(|&&r| r == max).count() >= 2 {
            return Ok(max);
        }
    }
    Err(GroupError::NonGenericSample(ranks))
}

/// `dim J^k` for the geometry.
pub fn jet_space_dim(geometry: Geometry, k: usize) -> usize {
    geometry.nindep() + geometry.ndeps() * layout(geometry.nindep(), k).dim(k)
}

/// Orbit dimension for curves in `R^{2n}`: `2(k+1)n - C(k+1, 2)` until the
/// action becomes free at `k = 2n`.
pub fn expected_curve_orbit_dimension(n: usize, k: usize) -> usize {
    let k = k.min(2 * n);
    2 * (k + 1) * n - (k + 1) * k / 2
}

/// `X^{(k)}(I)` at a jet, with `∇I` taken by first-order dual numbers.
///
/// `f` evaluates the invariant on a jet whose coordinates are dual numbers
/// over the `J^k` coordinates.
pub fn infinitesimal_invariance<T, F>(
    f: F,
    x: &AlgebraElement,
    geometry: Geometry,
    jet: &GraphJet<T>,
    k: usize,
) -> Result<T, InvariantError>
where
    T: Scalar,
    F: Fn(&GraphJet<MultiJet<T>>) -> Result<MultiJet<T>, InvariantError>,
{
    let grad = jet_gradient(f, jet, k)?;
    let field = prolonged_field(x, geometry, jet, k)?;
    let mut acc = T::zero();
    for (g, v) in grad.iter().zip(&field) {
        acc.mul_acc(g, v);
    }
    Ok(acc)
}

/// Gradient of a jet function with respect to the `J^k` coordinates.
pub fn jet_gradient<T, F>(f: F, jet: &GraphJet<T>, k: usize) -> Result<Vec<T>, InvariantError>
where
    T: Scalar,
    F: Fn(&GraphJet<MultiJet<T>>) -> Result<MultiJet<T>, InvariantError>,
{
    let coords = jet.jet_coordinates(k);
    let nv = coords.len();
    let duals: Vec<MultiJet<T>> =
        coords.into_iter().enumerate().map(|(i, c)| MultiJet::variable(nv, 1, i, c)).collect();
    let g = GraphJet::from_jet_coordinates(jet.nindep(), jet.ndeps(), k, &duals);
    let val = f(&g)?;
    let mut e = vec![0u8; nv];
    Ok((0..nv)
        .map(|i| {
            if val.is_constant() {
                return T::zero();
            }
            e[i] = 1;
            let d = val.derivative_value(&e);
            e[i] = 0;
            d
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn curve_orbits_in_r4() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let dims: Vec<usize> =
            (0..4).map(|k| orbit_dimension(Flavor::Sp, Geometry::Curve { n: 2 }, k, &mut rng).unwrap()).collect();
        assert_eq!(dims, vec![4, 7, 9, 10]);
    }

    #[test]
    fn function_and_hypersurface_orbits() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = Geometry::Function { n: 1 };
        assert_eq!(jet_space_dim(g, 1) - orbit_dimension(Flavor::Sp, g, 1, &mut rng).unwrap(), 2);
        let h = Geometry::Hypersurface { n: 2 };
        assert_eq!(orbit_dimension(Flavor::Sp, h, 1, &mut rng).unwrap(), 7);
    }

    #[test]
    fn prolonged_shear_on_parabola() {
        // x ∂_y on y = x² at x = 1: y₁ changes by 1, y₂ by 0.
        let shear = AlgebraElement::basis(Flavor::Sp, 1)[0].scale(-0.5);
        let y = MultiJet::from_coeffs(1, 3, vec![1.0, 2.0, 1.0, 0.0]).unwrap();
        let jet = GraphJet::new(vec![1.0], vec![y]);
        let v = prolonged_field(&shear, Geometry::Curve { n: 1 }, &jet, 2).unwrap();
        assert_eq!(v, vec![0.0, 1.0, 1.0, 0.0]);
    }

    #[test]
    fn gradient_of_jet_coordinate_product() {
        let y = MultiJet::from_coeffs(1, 2, vec![3.0, 2.0, 0.5]).unwrap();
        let jet = GraphJet::new(vec![1.5], vec![y]);
        // f = x · y₁ · y₂
        let f = |g: &GraphJet<MultiJet<f64>>| -> Result<MultiJet<f64>, InvariantError> {
            Ok(g.base[0].clone() * g.derivative(0, &[1]) * g.derivative(0, &[2]))
        };
        assert_eq!(jet_gradient(f, &jet, 2).unwrap(), vec![2.0, 0.0, 1.5, 3.0]);
    }
}
