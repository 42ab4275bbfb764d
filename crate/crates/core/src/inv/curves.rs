//! Unparametrized curves in `R^{2n}` under `Sp(2n)`.
//!
//! A curve is graphed over `t = x_1`; for `n = 2` the coordinates read
//! `(t, x, y, z)` with `ω = dt∧dy + dx∧dz`. Changing parameter `t ↦ τ(t)`
//! with `k_j = d^jτ/dt^j` relates `w_j = d^j c/dt^j` to `v_m = d^m c/dτ^m` by
//! `w_j = Σ_m B_{j,m}(k_1, k_2, ..) v_m` (partial Bell polynomials). The
//! frame fixes `ω(v_0, v_1) = 1` and `ω(v_0, v_j) = 0` for `j >= 2`.

use super::{recip_or, Residual, Series};
use crate::error::InvariantError;
use crate::group::omega;
use crate::jet::{Derivation, GraphJet, MultiJet};
use crate::scalar::Scalar;

/// Partial Bell polynomials `B_{j,m}(k_1, ..)` for `j, m <= top`, via
/// `B_{j,m} = Σ_i C(j-1, i-1) k_i B_{j-i, m-1}`.
pub fn bell_table<S: Scalar>(k: &[S], top: usize) -> Vec<Vec<S>> {
    let mut b = vec![vec![S::zero(); top + 1]; top + 1];
    b[0][0] = S::one();
    for j in 1..=top {
        for m in 1..=j {
            let mut acc = S::zero();
            let mut binom: i64 = 1; // C(j-1, i-1)
            for i in 1..=j - m + 1 {
                if !b[j - i][m - 1].is_zero() {
                    acc.mul_acc(&(k[i - 1].clone() * &S::from_i64(binom)), &b[j - i][m - 1]);
                }
                binom = binom * (j - i) as i64 / i as i64;
            }
            b[j][m] = acc;
        }
    }
    b
}

/// Position vector and `t`-derivatives of a curve, as series along it.
#[derive(Clone, Debug)]
pub struct CurveJet<T: Scalar> {
    pub n: usize,
    /// `w[j] = d^j c / dt^j`, `w[0] = v_0`
    w: Vec<Vec<Series<T>>>,
}

/// Normalized derivative vectors `v_0..v_m` and the scalars `k_1..k_m`.
#[derive(Clone, Debug)]
pub struct CurveFrame<T: Scalar> {
    pub v: Vec<Vec<Series<T>>>,
    pub k: Vec<Series<T>>,
}

impl<T: Scalar> CurveFrame<T> {
    /// `ω(v_i, v_j)`.
    pub fn pairing(&self, i: usize, j: usize) -> Series<T> {
        omega(&self.v[i], &self.v[j])
    }
}

impl<T: Scalar> CurveJet<T> {
    pub fn new(jet: &GraphJet<T>) -> Result<Self, InvariantError> {
        if jet.nindep() != 1 || jet.ndeps() % 2 != 1 {
            return Err(InvariantError::Unsupported("curve jets are graphs over one coordinate of R^{2n}".into()));
        }
        let n = (jet.ndeps() + 1) / 2;
        let d = jet.along();
        let w = (0..=d.order)
            .map(|j| {
                let head = match j {
                    0 => d.x[0].clone(),
                    1 => MultiJet::constant(T::one()),
                    _ => MultiJet::constant(T::zero()),
                };
                std::iter::once(head).chain((0..2 * n - 1).map(|m| d.u(m, &[j as u8]).clone())).collect()
            })
            .collect();
        Ok(CurveJet { n, w })
    }

    pub fn order(&self) -> usize {
        self.w.len() - 1
    }

    pub fn w(&self, j: usize) -> &[Series<T>] {
        &self.w[j]
    }

    /// `δ = ω(v_0, w_1)`: `x y_1 - y` for `n = 1`, `t y_1 + x z_1 - x_1 z - y` for `n = 2`.
    pub fn delta(&self) -> Series<T> {
        omega(&self.w[0], &self.w[1])
    }

    fn delta_recip(&self) -> Result<Series<T>, InvariantError> {
        let d = self.delta();
        let n = self.n;
        let scale: f64 = (0..n)
            .map(|i| {
                (self.w[0][i].value() * self.w[1][n + i].value()).abs()
                    + (self.w[0][n + i].value() * self.w[1][i].value()).abs()
            })
            .sum();
        recip_or(&d, scale, InvariantError::DegenerateJet("tangent line passes through the origin (δ = 0)"))
    }

    /// `β = 1/δ`, the factor making `v_1 = β w_1` satisfy `ω(v_0, v_1) = 1`.
    pub fn beta(&self) -> Result<Series<T>, InvariantError> {
        self.delta_recip()
    }

    /// `∇ = δ^{-1} D_t`.
    pub fn nabla(&self) -> Result<Derivation<T>, InvariantError> {
        Ok(Derivation::new(vec![self.delta_recip()?]))
    }

    /// Frame `v_0..v_m`. `k_1 = δ`; for `j >= 2` the coefficient of `k_j` in
    /// `ω(v_0, w_j)` is `ω(v_0, v_1) = 1`, so `k_j = ω(v_0, w_j)`.
    pub fn frame(&self, m: usize) -> Result<CurveFrame<T>, InvariantError> {
        if m > self.order() {
            return Err(crate::error::JetError::OrderExhausted.into());
        }
        let beta = self.delta_recip()?;
        let dim = 2 * self.n;
        let mut k = vec![self.delta()];
        let mut v = vec![self.w[0].clone(), self.w[1].iter().map(|c| c.clone() * &beta).collect::<Vec<_>>()];
        for j in 2..=m {
            k.push(omega(&self.w[0], &self.w[j]));
            let b = bell_table(&k, j);
            let mut rest: Vec<Series<T>> = self.w[j].clone();
            for (mm, vm) in v.iter().enumerate().skip(1) {
                for c in 0..dim {
                    rest[c] = rest[c].clone() - b[j][mm].clone() * &vm[c];
                }
            }
            let scale = beta.powi(j as i32);
            v.push(rest.into_iter().map(|c| c * &scale).collect());
        }
        Ok(CurveFrame { v, k })
    }

    /// `I_j = ω(v_{j-1}, v_j)` for `j = 2..2n`.
    pub fn generators(&self) -> Result<Vec<(String, Series<T>)>, InvariantError> {
        let top = 2 * self.n;
        let f = self.frame(top)?;
        Ok((2..=top).map(|j| (format!("I{j}"), f.pairing(j - 1, j))).collect())
    }

    /// `I_2 = ω(w_1, w_2)/δ^3`, the closed form of `ω(v_1, v_2)`.
    pub fn i2(&self) -> Result<Series<T>, InvariantError> {
        let b = self.delta_recip()?;
        Ok(omega(&self.w[1], &self.w[2]) * b.powi(3))
    }

    /// `n = 2`: `I_2, I_3a, I_3b, I_4a, I_4b, I_4c`.
    pub fn n2_invariants(&self) -> Result<Vec<(&'static str, Series<T>)>, InvariantError> {
        let f = self.frame(4)?;
        Ok(vec![
            ("I2", f.pairing(1, 2)),
            ("I3a", f.pairing(1, 3)),
            ("I3b", f.pairing(2, 3)),
            ("I4a", f.pairing(1, 4)),
            ("I4b", f.pairing(2, 4)),
            ("I4c", f.pairing(3, 4)),
        ])
    }

    /// `n = 2`: `I_3a = ∇(I_2)`, which is why `I_3a` is left out of the generators.
    pub fn n2_reductions(&self) -> Result<Vec<Residual<T>>, InvariantError> {
        let inv = self.n2_invariants()?;
        let d = self.nabla()?.apply(&self.i2()?)?;
        Ok(vec![Residual::from_series("I3a=N(I2)", vec![inv[1].1.clone(), -d])])
    }

    /// `∇^j I_2` for `j = 0..=depth`.
    pub fn derived_i2(&self, depth: usize) -> Result<Vec<Series<T>>, InvariantError> {
        let nabla = self.nabla()?;
        let mut out = vec![self.i2()?];
        for _ in 0..depth {
            let next = nabla.apply(out.last().unwrap())?;
            out.push(next);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn poly_curve<T: Scalar>(t0: T, coeffs: &[&[i64]], order: usize) -> GraphJet<T> {
        // dependent coordinates as polynomials in t
        let t = MultiJet::variable(1, order, 0, t0.clone());
        let deps = coeffs
            .iter()
            .map(|cs| cs.iter().rev().fold(MultiJet::constant(T::zero()), |acc, &c| acc * &t + MultiJet::constant(T::from_i64(c))))
            .collect();
        GraphJet::new(vec![t0], deps)
    }

    #[test]
    fn i3a_is_derived() {
        let j = CurveJet::new(&poly_curve(Rational::new(2, 3), &[&[0, 1, 3], &[1, 0, 2, -1], &[0, 2, 0, 1, 1]], 4)).unwrap();
        assert!(j.n2_reductions().unwrap()[0].value().is_zero());
        // and as a rank statement: {I2, ∇I2, I3a} has rank 2 on the 3-jet fiber
        let mut rng = rand::SeedableRng::seed_from_u64(8);
        let jet = GraphJet::random(1, 3, 3, &mut rng as &mut rand_chacha::ChaCha8Rng);
        let rows = crate::inv::fiber_jacobian(&jet, 3, |g| {
            let c = CurveJet::new(g)?;
            let d = c.derived_i2(1)?;
            let f = c.frame(3)?;
            Ok(vec![d[0].clone(), d[1].clone(), f.pairing(1, 3), f.pairing(2, 3)])
        })
        .unwrap();
        assert_eq!(crate::linalg::numerical_rank(&rows[..3], 1e-9), 1);
        assert_eq!(crate::linalg::numerical_rank(&rows, 1e-9), 2);
    }

    #[test]
    fn bell_numbers_of_the_fourth_derivative() {
        let k: Vec<f64> = vec![2.0, 3.0, 5.0, 7.0];
        let b = bell_table(&k, 4);
        // w_4 = v_4 k1^4 + 6 v_3 k1^2 k2 + v_2 (4 k1 k3 + 3 k2^2) + v_1 k4
        assert_eq!(b[4][4], 16.0);
        assert_eq!(b[4][3], 6.0 * 4.0 * 3.0);
        assert_eq!(b[4][2], 4.0 * 2.0 * 5.0 + 3.0 * 9.0);
        assert_eq!(b[4][1], 7.0);
        assert_eq!(b[3][2], 3.0 * 2.0 * 3.0);
    }

    #[test]
    fn moment_curve_in_r4() {
        // (t, t², t³, t⁴) at t = 1
        let jet = poly_curve(Rational::from_i64(1), &[&[0, 0, 1], &[0, 0, 0, 1], &[0, 0, 0, 0, 1]], 5);
        let c = CurveJet::new(&jet).unwrap();
        assert_eq!(*c.delta().constant_term(), Rational::from_i64(4));
        assert_eq!(*c.beta().unwrap().constant_term(), Rational::new(1, 4));
        let f = c.frame(4).unwrap();
        assert_eq!(*f.pairing(0, 1).constant_term(), Rational::one());
        for j in 2..=4 {
            assert!(f.pairing(0, j).constant_term().is_zero());
        }
        assert_eq!(*f.pairing(1, 2).constant_term(), Rational::new(11, 32));
        assert_eq!(*c.i2().unwrap().constant_term(), Rational::new(11, 32));
    }

    #[test]
    fn parabola_derived_invariants() {
        for x0 in [0.5, 1.0, 1.7] {
            let jet = poly_curve(x0, &[&[0, 0, 1]], 5);
            let c = CurveJet::new(&jet).unwrap();
            let d = c.derived_i2(1).unwrap();
            let (i2, i3) = (d[0].value(), d[1].value());
            assert!((i2 - 2.0 * x0.powi(-6)).abs() < 1e-12 * i2.abs());
            assert!((i3 + 12.0 * x0.powi(-9)).abs() < 1e-12 * i3.abs());
            assert!((i3 * i3 - 18.0 * i2.powi(3)).abs() < 1e-10 * i3 * i3);
        }
    }

    #[test]
    fn frame_reduces_to_n1_formula() {
        let jet = poly_curve(Rational::new(3, 2), &[&[1, -2, 0, 3]], 3);
        let c = CurveJet::new(&jet).unwrap();
        let g = c.generators().unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].1.constant_term(), c.i2().unwrap().constant_term());
    }

    #[test]
    fn origin_tangent_is_degenerate() {
        let jet = poly_curve(1.0, &[&[0, 1, 1]], 3); // y = x + x² has xy' - y = x² ≠ 0 ...
        assert!(CurveJet::new(&jet).unwrap().nabla().is_ok());
        let jet = poly_curve(1.0, &[&[0, 2]], 3); // ... but the line y = 2x passes through 0
        assert!(matches!(CurveJet::new(&jet).unwrap().nabla(), Err(InvariantError::DegenerateJet(_))));
    }
}
