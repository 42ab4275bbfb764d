use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::algebra::AlgebraElement;
use super::{omega_matrix, Flavor, Geometry};
use crate::error::GroupError;
use crate::jet::{GraphJet, MultiJet};
use crate::scalar::Scalar;

/// `v ↦ λ A v + b` on `R^{2n}` with `A` symplectic.
///
/// Contact flavors act on `(x, y, z)` by the lift
/// `z ↦ λ²(z - ½ x·y) + ½ x'·y'` with `(x', y') = λ A (x, y)` and `b = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    pub flavor: Flavor,
    pub n: usize,
    pub linear: Vec<Vec<f64>>,
    pub scale: f64,
    pub translation: Vec<f64>,
}

fn to_dmatrix(m: &[Vec<f64>]) -> DMatrix<f64> {
    DMatrix::from_fn(m.len(), m.len(), |i, j| m[i][j])
}

fn from_dmatrix(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

impl GroupElement {
    pub fn identity(flavor: Flavor, n: usize) -> Self {
        let linear = (0..2 * n).map(|i| (0..2 * n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        GroupElement { flavor, n, linear, scale: 1.0, translation: vec![0.0; 2 * n] }
    }

    /// Element with explicit parts; flavor constraints are the caller's job.
    pub fn new(flavor: Flavor, linear: Vec<Vec<f64>>, scale: f64, translation: Vec<f64>) -> Self {
        let n = linear.len() / 2;
        assert_eq!(translation.len(), 2 * n);
        GroupElement { flavor, n, linear, scale, translation }
    }

    /// `exp` of an affine field; the trace of its linear part on `(x, y)` is
    /// split off as the conformal factor.
    pub fn exp(flavor: Flavor, n: usize, x: &AlgebraElement) -> Self {
        let (m, c) = x.affine_part();
        let d = 2 * n;
        // Augmented generator [[M, c], [0, 0]] exponentiates to [[e^M, b], [0, 1]].
        let aug = DMatrix::from_fn(d + 1, d + 1, |i, j| match (i < d, j < d) {
            (true, true) => m[i][j],
            (true, false) => c[i],
            _ => 0.0,
        });
        let e = aug.exp();
        let tr: f64 = (0..d).map(|i| m[i][i]).sum();
        let scale = (tr / d as f64).exp();
        let linear = (0..d).map(|i| (0..d).map(|j| e[(i, j)] / scale).collect()).collect();
        let translation =
            if flavor.is_contact() { vec![0.0; d] } else { (0..d).map(|i| e[(i, d)]).collect() };
        GroupElement { flavor, n, linear, scale, translation }
    }

    /// `A = exp(J S)` with `S` symmetric, entries uniform in `[-1, 1]`;
    /// `λ = exp(U[-½, ½])` for conformal flavors; `b` uniform in `[-1, 1]` for affine ones.
    pub fn random<R: Rng + ?Sized>(flavor: Flavor, n: usize, rng: &mut R) -> Self {
        let d = 2 * n;
        let mut s = vec![vec![0.0; d]; d];
        for i in 0..d {
            for j in i..d {
                let v = rng.gen_range(-1.0..=1.0);
                s[i][j] = v;
                s[j][i] = v;
            }
        }
        let a = (to_dmatrix(&omega_matrix(n)) * to_dmatrix(&s)).exp();
        let scale = if flavor.has_scaling() { rng.gen_range(-0.5..=0.5f64).exp() } else { 1.0 };
        let translation =
            if flavor.has_translations() { (0..d).map(|_| rng.gen_range(-1.0..=1.0)).collect() } else { vec![0.0; d] };
        GroupElement { flavor, n, linear: from_dmatrix(&a), scale, translation }
    }

    /// Random element whose entries are dyadic rationals with few bits, so that
    /// `AᵀJA = J` holds exactly in floating point. `A = U(B₁) L(C) U(B₂)` with
    /// the shears `U(B) = [[I, B], [0, I]]`, `L(C) = [[I, 0], [C, I]]` and
    /// `B₁, C, B₂` symmetric with entries in `{-1, -7/8, .., 1}`;
    /// `λ ∈ {5/8, 11/16, .., 13/8}`, `b` entries in `{-1, -7/8, .., 1}`.
    pub fn random_dyadic<R: Rng + ?Sized>(flavor: Flavor, n: usize, rng: &mut R) -> Self {
        let d = 2 * n;
        let mut eighth = || rng.gen_range(-8i32..=8) as f64 / 8.0;
        let mut shear = |upper: bool| {
            let mut m = DMatrix::<f64>::identity(d, d);
            for i in 0..n {
                for j in i..n {
                    let v = eighth();
                    let (r, c) = if upper { (i, n + j) } else { (n + i, j) };
                    m[(r, c)] = v;
                    if upper { m[(j, n + i)] = v } else { m[(n + j, i)] = v }
                }
            }
            m
        };
        let a = shear(true) * shear(false) * shear(true);
        let scale = if flavor.has_scaling() { rng.gen_range(10i32..=26) as f64 / 16.0 } else { 1.0 };
        let translation = if flavor.has_translations() {
            (0..d).map(|_| rng.gen_range(-8i32..=8) as f64 / 8.0).collect()
        } else {
            vec![0.0; d]
        };
        GroupElement { flavor, n, linear: from_dmatrix(&a), scale, translation }
    }

    pub fn random_seeded(flavor: Flavor, n: usize, seed: u64) -> Self {
        GroupElement::random(flavor, n, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        let a = to_dmatrix(&self.linear);
        let prod = &a * to_dmatrix(&other.linear);
        let bh = nalgebra::DVector::from_vec(other.translation.clone());
        let b = (&a * bh) * self.scale + nalgebra::DVector::from_vec(self.translation.clone());
        GroupElement {
            flavor: self.flavor,
            n: self.n,
            linear: from_dmatrix(&prod),
            scale: self.scale * other.scale,
            translation: b.iter().copied().collect(),
        }
    }

    pub fn inverse(&self) -> GroupElement {
        let ainv = to_dmatrix(&self.linear).try_inverse().expect("group elements are invertible");
        let b = (&ainv * nalgebra::DVector::from_vec(self.translation.clone())) * (-1.0 / self.scale);
        GroupElement {
            flavor: self.flavor,
            n: self.n,
            linear: from_dmatrix(&ainv),
            scale: 1.0 / self.scale,
            translation: b.iter().copied().collect(),
        }
    }

    /// `max |AᵀJA - J|` (the scale is stored separately, so this is 0 for every flavor).
    pub fn symplectic_defect(&self) -> f64 {
        let a = to_dmatrix(&self.linear);
        let j = to_dmatrix(&omega_matrix(self.n));
        (a.transpose() * &j * &a - j).amax()
    }

    /// Image of a point of `R^{2n}`, or of `R^{2n+1}` for contact flavors.
    pub fn act<S: Scalar>(&self, p: &[S]) -> Vec<S> {
        let d = 2 * self.n;
        let lam = S::from_f64(self.scale);
        let mut out: Vec<S> = (0..d)
            .map(|i| {
                let mut acc = S::zero();
                for j in 0..d {
                    acc.mul_acc(&S::from_f64(self.linear[i][j]), &p[j]);
                }
                acc * &lam + S::from_f64(self.translation[i])
            })
            .collect();
        if self.flavor.is_contact() {
            let half = S::from_ratio(1, 2);
            let mut old = S::zero();
            let mut new = S::zero();
            for i in 0..self.n {
                old.mul_acc(&p[i], &p[self.n + i]);
                new.mul_acc(&out[i], &out[self.n + i]);
            }
            let z = (p[d].clone() - old * &half) * &lam.square() + new * &half;
            out.push(z);
        }
        out
    }

    /// Jet of `g·N` at the image of the basepoint, graphed over the same
    /// independent coordinates.
    pub fn pushforward<T: Scalar>(&self, jet: &GraphJet<T>, geometry: Geometry) -> Result<GraphJet<T>, GroupError> {
        let acted = geometry.acted_dim();
        if acted != 2 * self.n + usize::from(self.flavor.is_contact()) {
            return Err(GroupError::Unsupported(format!("{} element on {}", self.flavor, geometry)));
        }
        let pts: Vec<MultiJet<T>> = jet.point_series();
        let mut image = self.act(&pts[..acted]);
        image.extend_from_slice(&pts[acted..]);
        GraphJet::from_parametrization(&image, jet.nindep())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::MultiJet;

    #[test]
    fn random_elements_are_symplectic() {
        for seed in 0..20 {
            for n in 1..=3 {
                for flavor in [Flavor::Sp, Flavor::CSp, Flavor::ACSp] {
                    let g = GroupElement::random_seeded(flavor, n, seed);
                    assert!(g.symplectic_defect() <= 1e-12, "seed {seed}: {}", g.symplectic_defect());
                    assert!(g.scale > 0.0);
                }
            }
        }
    }

    #[test]
    fn dyadic_elements_are_exactly_symplectic() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=3 {
            for flavor in [Flavor::Sp, Flavor::ACSp, Flavor::ContactCSp] {
                let g = GroupElement::random_dyadic(flavor, n, &mut rng);
                assert_eq!(g.symplectic_defect(), 0.0);
                assert!(g.linear.iter().flatten().any(|&v| v != 0.0 && v != 1.0));
            }
        }
    }

    #[test]
    fn zero_field_exponentiates_to_identity() {
        let x = AlgebraElement::basis(Flavor::Sp, 2)[0].scale(0.0);
        assert_eq!(GroupElement::exp(Flavor::Sp, 2, &x), GroupElement::identity(Flavor::Sp, 2));
    }

    #[test]
    fn exp_of_shear_and_homothety() {
        // H = -x²/2 gives x ∂_y, whose flow is y ↦ y + t x.
        let b = AlgebraElement::basis(Flavor::CSp, 1);
        let shear = b[0].scale(-0.5 * 0.3);
        let g = GroupElement::exp(Flavor::Sp, 1, &shear);
        assert!((g.linear[1][0] - 0.3).abs() < 1e-15 && (g.linear[0][0] - 1.0).abs() < 1e-15);
        let g = GroupElement::exp(Flavor::CSp, 1, &b.last().unwrap().scale(0.25));
        assert!((g.scale - 0.25f64.exp()).abs() < 1e-14 && g.symplectic_defect() < 1e-14);
    }

    #[test]
    fn shear_pushes_parabola() {
        let c = 0.75;
        let g = GroupElement::new(Flavor::Sp, vec![vec![1.0, 0.0], vec![c, 1.0]], 1.0, vec![0.0, 0.0]);
        let y = MultiJet::from_coeffs(1, 2, vec![1.0, 2.0, 1.0]).unwrap();
        let jet = GraphJet::new(vec![1.0], vec![y]);
        let out = g.pushforward(&jet, Geometry::Curve { n: 1 }).unwrap();
        assert_eq!(out.base, vec![1.0]);
        let d: Vec<f64> = (0..3).map(|k| out.derivative(0, &[k])).collect();
        assert_eq!(d, vec![1.0 + c, 2.0 + c, 2.0]);
    }

    #[test]
    fn contact_lift_matches_gl2_formula() {
        let g = GroupElement::random_seeded(Flavor::ContactCSp, 1, 7);
        let m: Vec<Vec<f64>> = g.linear.iter().map(|r| r.iter().map(|v| v * g.scale).collect()).collect();
        let (a, b, c, d) = (m[0][0], m[0][1], m[1][0], m[1][1]);
        let (x, y, z) = (0.3, -1.2, 0.7);
        let want = (a * d - b * c) * (z - 0.5 * x * y) + 0.5 * (a * x + b * y) * (c * x + d * y);
        let got = g.act(&[x, y, z]);
        assert!((got[2] - want).abs() < 1e-14);
    }

    #[test]
    fn translations_keep_derivatives() {
        let g = GroupElement::new(Flavor::ASp, vec![vec![1.0, 0.0], vec![0.0, 1.0]], 1.0, vec![0.5, -2.0]);
        let y = MultiJet::from_coeffs(1, 3, vec![1.0, 2.0, 1.0, -3.0]).unwrap();
        let jet = GraphJet::new(vec![1.0], vec![y.clone()]);
        let out = g.pushforward(&jet, Geometry::Curve { n: 1 }).unwrap();
        assert_eq!(out.base, vec![1.5]);
        assert_eq!(out.deps[0].coeffs()[0], -1.0);
        assert_eq!(&out.deps[0].coeffs()[1..], &y.coeffs()[1..]);
    }
}
