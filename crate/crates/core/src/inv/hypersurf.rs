//! Hypersurfaces in `R^{2n}` under `Sp(2n)`, graphed as `y_n = u(x_1..x_n, y_1..y_{n-1})`.
//!
//! For `n = 2` the coordinates are `(x, y, z, u)` with `ω = dx∧dz + dy∧du`.
//! Tangent vectors are stored by their `D`-coefficients, so a frame vector
//! is also the invariant derivation it induces.

use super::linear::{cofactor_kernel, constrain, dot, norm, scale, skew_kernel, zero, Vector};
use super::{recip_or, Residual, Series};
use crate::error::InvariantError;
use crate::group::omega;
use crate::jet::{Derivation, GraphJet, JetData, MultiJet};
use crate::linalg::solve;
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct HypersurfaceJet<T: Scalar> {
    pub n: usize,
    d: JetData<Series<T>>,
}

/// Canonical tangent frame `v_1..v_{2n-1}` and the normalized second
/// differential `Q = d²q|_{TΣ} / dq(v_0)` for `q = u(x) - y_n`.
#[derive(Clone, Debug)]
pub struct HyperFrame<T: Scalar> {
    pub v: Vec<Vector<T>>,
}

impl<T: Scalar> HypersurfaceJet<T> {
    pub fn new(jet: &GraphJet<T>) -> Result<Self, InvariantError> {
        if jet.ndeps() != 1 || jet.nindep() % 2 != 1 {
            return Err(InvariantError::Unsupported("hypersurface jets are graphs over 2n-1 coordinates".into()));
        }
        Ok(HypersurfaceJet { n: (jet.nindep() + 1) / 2, d: jet.along() })
    }

    fn p(&self) -> usize {
        2 * self.n - 1
    }

    fn du(&self, i: usize) -> &Series<T> {
        self.d.d1(0, i)
    }

    /// Position vector `v_0`.
    pub fn v0(&self) -> Vector<T> {
        self.d.point()
    }

    /// Ambient vector of a tangent vector `Σ a_i D_i`.
    pub fn ambient(&self, a: &[Series<T>]) -> Vector<T> {
        let last = (0..self.p()).fold(zero(), |acc, i| acc + self.du(i).clone() * &a[i]);
        a.iter().cloned().chain(std::iter::once(last)).collect()
    }

    /// `dq` as a covector, `q = u(x) - y_n`.
    pub fn dq(&self) -> Vector<T> {
        (0..self.p()).map(|i| self.du(i).clone()).chain(std::iter::once(Series::constant(-T::one()))).collect()
    }

    /// `dq(v_0) = Σ x_i u_i - u`.
    pub fn delta(&self) -> Series<T> {
        dot(&self.dq(), &self.v0())
    }

    pub fn omega_t(&self, a: &[Series<T>], b: &[Series<T>]) -> Series<T> {
        omega(&self.ambient(a), &self.ambient(b))
    }

    /// `d²q(a, b) = Σ u_ij a_i b_j` on tangent vectors (before normalization).
    fn hess(&self, a: &[Series<T>], b: &[Series<T>]) -> Series<T> {
        let mut acc = zero();
        for i in 0..self.p() {
            for j in 0..self.p() {
                acc = acc + self.d.d2(0, i, j).clone() * &a[i] * &b[j];
            }
        }
        acc
    }

    fn delta_recip(&self) -> Result<Series<T>, InvariantError> {
        let v0 = self.v0();
        let scale: f64 = self.dq().iter().zip(&v0).map(|(a, b)| (a.value() * b.value()).abs()).sum();
        recip_or(&self.delta(), scale, InvariantError::DegenerateJet("dq(v0) = 0"))
    }

    /// `Q(a, b)`.
    pub fn q(&self, a: &[Series<T>], b: &[Series<T>]) -> Result<Series<T>, InvariantError> {
        Ok(self.hess(a, b) * self.delta_recip()?)
    }

    /// `w_1 = -J dq`, spanning `TΣ^{⊥ω}`, as `D`-coefficients.
    fn w1(&self) -> Vector<T> {
        let (n, dq) = (self.n, self.dq());
        let mut full = vec![zero(); 2 * n];
        for i in 0..n {
            full[i] = -dq[n + i].clone();
            full[n + i] = dq[i].clone();
        }
        full.truncate(self.p());
        full
    }

    /// Steps `1..2n-1` of the canonical frame.
    pub fn frame(&self) -> Result<HyperFrame<T>, InvariantError> {
        let p = self.p();
        let k = self.delta_recip()?;
        let v1 = scale(&k, &self.w1());
        let v0 = self.v0();
        let mut v = vec![v1];
        let basis: Vec<Vector<T>> =
            (0..p).map(|i| (0..p).map(|j| Series::constant(if i == j { T::one() } else { T::zero() })).collect()).collect();
        // W_1 = Ker α ∩ TΣ
        let c: Vec<Series<T>> = basis.iter().map(|b| omega(&v0, &self.ambient(b))).collect();
        let mut w = constrain(&basis, &c, norm(&v0)).ok_or(InvariantError::StepDegenerate(1))?;
        let mut prev: Vector<T> = v[0].clone();
        for step in 2..=p {
            let vj = if step % 2 == 0 {
                // W_{step} = {w ∈ W : Q(prev, w) = 0}; v ⊥_Q W_{step} inside W
                let c: Vec<Series<T>> = w.iter().map(|b| self.hess(&prev, b)).collect();
                let next = constrain(&w, &c, norm(&prev) * self.hess_scale()).ok_or(InvariantError::StepDegenerate(step))?;
                let m: Vec<Vec<Series<T>>> =
                    next.iter().map(|c| w.iter().map(|b| self.hess(b, c)).collect()).collect();
                let coeffs = cofactor_kernel(&m, w.len());
                let raw = combine(&coeffs, &w);
                let nrm = self.q(&prev, &raw)?;
                let vj = normalize(raw, &nrm, norm(&prev) * self.hess_scale(), step, |r| self.q(&prev, r))?;
                w = next;
                vj
            } else {
                // v spans the ω-kernel of W; then W_{step} = {w ∈ W : ω(prev, w) = 0}
                let m: Vec<Vec<Series<T>>> =
                    w.iter().map(|a| w.iter().map(|b| self.omega_t(a, b)).collect()).collect();
                let raw = combine(&skew_kernel(&m), &w);
                let nrm = self.omega_t(&prev, &raw);
                let vj = normalize(raw, &nrm, norm(&prev), step, |r| Ok(self.omega_t(&prev, r)))?;
                if w.len() > 1 {
                    let c: Vec<Series<T>> = w.iter().map(|b| self.omega_t(&prev, b)).collect();
                    w = constrain(&w, &c, norm(&prev)).ok_or(InvariantError::StepDegenerate(step))?;
                }
                vj
            };
            prev = vj.clone();
            v.push(vj);
        }
        Ok(HyperFrame { v })
    }

    fn hess_scale(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.p() {
            for j in 0..self.p() {
                m = m.max(self.d.d2(0, i, j).value().abs());
            }
        }
        m.max(1e-300)
    }

    /// `I_{2,i} = Q(v_i, v_i)`.
    pub fn invariants(&self) -> Result<Vec<(String, Series<T>)>, InvariantError> {
        let f = self.frame()?;
        f.v.iter().enumerate().map(|(i, v)| Ok((format!("I2_{}", i + 1), self.q(v, v)?))).collect()
    }

    /// `n = 2`: `I2a, I2b, I2c = Q(v_1, v_1), Q(v_2, v_2), Q(v_3, v_3)`.
    pub fn r4_invariants(&self) -> Result<Vec<(&'static str, Series<T>)>, InvariantError> {
        if self.n != 2 {
            return Err(InvariantError::Unsupported("named second-order invariants exist for R^4 only".into()));
        }
        let inv = self.invariants()?;
        Ok(["I2a", "I2b", "I2c"].into_iter().zip(inv.into_iter().map(|(_, s)| s)).collect())
    }

    /// `∇_j`, the frame vectors as derivations.
    pub fn derivations(&self) -> Result<Vec<Derivation<T>>, InvariantError> {
        Ok(self.frame()?.v.into_iter().map(Derivation::new).collect())
    }

    /// Gram matrix of `Q` in the frame.
    pub fn gram(&self, f: &HyperFrame<T>) -> Result<Vec<Vec<Series<T>>>, InvariantError> {
        f.v.iter().map(|a| f.v.iter().map(|b| self.q(a, b)).collect()).collect()
    }

    /// `ω^{-1} - (v_0∧v_1 + v_2∧v_3 + ..)` as a `2n × 2n` matrix; zero for a canonical frame.
    pub fn omega_defect(&self, f: &HyperFrame<T>) -> Vec<Vec<Series<T>>> {
        let d = 2 * self.n;
        let mut vs = vec![self.v0()];
        vs.extend(f.v.iter().map(|a| self.ambient(a)));
        // ω(a, b) = aᵀ J b with J = [[0, I], [-I, 0]]; the bivector of ω^{-1} is (J^{-1})ᵀ = J.
        let mut m: Vec<Vec<Series<T>>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let n = self.n;
                        let e = if j == i + n && i < n {
                            1
                        } else if i == j + n && j < n {
                            -1
                        } else {
                            0
                        };
                        Series::constant(T::from_i64(e))
                    })
                    .collect()
            })
            .collect();
        for r in 0..self.n {
            let (a, b) = (&vs[2 * r], &vs[2 * r + 1]);
            for i in 0..d {
                for j in 0..d {
                    m[i][j] = m[i][j].clone() - (a[i].clone() * &b[j] - b[i].clone() * &a[j]);
                }
            }
        }
        m
    }

    /// `[∇_i, ∇_j] = Σ_k c^k_{ij} ∇_k`: the structure coefficients for `i < j`.
    pub fn structure_coefficients(&self) -> Result<Vec<((usize, usize), Vec<Series<T>>)>, InvariantError> {
        let ders = self.derivations()?;
        let p = ders.len();
        let a: Vec<Vec<Series<T>>> = (0..p).map(|r| (0..p).map(|c| ders[c].coeffs[r].clone()).collect()).collect();
        let mut out = Vec::new();
        for i in 0..p {
            for j in i + 1..p {
                let br = ders[i].bracket(&ders[j])?;
                let c = solve(&a, &br.coeffs).ok_or(InvariantError::FrameDegeneracy)?;
                out.push(((i, j), c));
            }
        }
        Ok(out)
    }

    /// Third-order candidates: `∇_j I_{2,s}` and the structure coefficients.
    pub fn third_order_candidates(&self) -> Result<Vec<(String, Series<T>)>, InvariantError> {
        let inv = self.invariants()?;
        let ders = self.derivations()?;
        let mut out = Vec::new();
        for (j, d) in ders.iter().enumerate() {
            for (name, i) in &inv {
                out.push((format!("N{}({name})", j + 1), d.apply(i)?));
            }
        }
        for ((i, j), c) in self.structure_coefficients()? {
            for (k, ck) in c.into_iter().enumerate() {
                out.push((format!("c{}_{}{}", k + 1, i + 1, j + 1), ck));
            }
        }
        Ok(out)
    }
}

/// Greedy pivoting over the third-order candidates at a float jet: names of
/// a maximal independent subset (in candidate order) with respect to the
/// third-order fiber.
pub fn third_order_basis(jet: &GraphJet<f64>) -> Result<Vec<String>, InvariantError> {
    let names: Vec<String> = HypersurfaceJet::new(jet)?.third_order_candidates()?.into_iter().map(|(n, _)| n).collect();
    let rows = super::fiber_jacobian(jet, 3, |g| {
        Ok(HypersurfaceJet::new(g)?.third_order_candidates()?.into_iter().map(|(_, s)| s).collect())
    })?;
    let mut chosen: Vec<Vec<f64>> = Vec::new();
    let mut out = Vec::new();
    for (name, row) in names.into_iter().zip(rows) {
        chosen.push(row);
        if crate::linalg::numerical_rank(&chosen, crate::group::RANK_TOLERANCE) == chosen.len() {
            out.push(name);
        } else {
            chosen.pop();
        }
    }
    Ok(out)
}

fn combine<T: Scalar>(coeffs: &[Series<T>], basis: &[Vector<T>]) -> Vector<T> {
    let d = basis[0].len();
    (0..d).map(|r| coeffs.iter().zip(basis).fold(zero(), |acc, (c, b)| acc + c.clone() * &b[r])).collect()
}

fn normalize<T: Scalar>(
    raw: Vector<T>,
    nrm: &Series<T>,
    scale_ref: f64,
    step: usize,
    check: impl Fn(&Vector<T>) -> Result<Series<T>, InvariantError>,
) -> Result<Vector<T>, InvariantError> {
    let r = recip_or(nrm, scale_ref * norm(&raw), InvariantError::StepDegenerate(step))?;
    let out = scale(&r, &raw);
    debug_assert!(T::is_exact() || (check(&out)?.value() - 1.0).abs() < 1e-6);
    Ok(out)
}

/// Residual of `d²q'|_{TΣ} / dq'(v_0) = d²q|_{TΣ} / dq(v_0)` for `q' = f q`,
/// with `f` a series in the ambient coordinates centered at the basepoint.
pub fn rescale_residual(jet: &GraphJet<f64>, f: &MultiJet<f64>) -> Result<f64, InvariantError> {
    let h = HypersurfaceJet::new(jet)?;
    let dim = 2 * h.n;
    let base = jet.basepoint();
    let amb: Vec<MultiJet<f64>> = (0..dim).map(|i| MultiJet::variable(dim, 2, i, base[i])).collect();
    let offs: Vec<MultiJet<f64>> = (0..dim - 1).map(|i| amb[i].with_constant(0.0)).collect();
    let u = crate::jet::compose_many(&jet.deps[..1].iter().map(|d| d.truncate(2)).collect::<Vec<_>>(), &offs)?;
    let q = u[0].clone() - &amb[dim - 1];
    let qp = f.truncate(2) * &q;
    let v0 = base.clone();
    let grad = |s: &MultiJet<f64>| -> Vec<f64> {
        (0..dim).map(|i| {
            let mut e = vec![0u8; dim];
            e[i] = 1;
            s.derivative_value(&e)
        })
        .collect()
    };
    let dqp_v0: f64 = grad(&qp).iter().zip(&v0).map(|(a, b)| a * b).sum();
    let frame = h.frame()?;
    let mut worst: f64 = 0.0;
    for a in &frame.v {
        for b in &frame.v {
            let (aa, bb) = (h.ambient(a), h.ambient(b));
            let mut hq = 0.0;
            for i in 0..dim {
                for j in 0..dim {
                    let mut e = vec![0u8; dim];
                    e[i] += 1;
                    e[j] += 1;
                    hq += qp.derivative_value(&e) * aa[i].value() * bb[j].value();
                }
            }
            let want = h.q(a, b)?.value();
            worst = worst.max((hq / dqp_v0 - want).abs() / want.abs().max(1.0));
        }
    }
    Ok(worst)
}

/// Residuals of the frame normalizations `ω(v_0, v_1) = 1`, `Q(v_{2r-1}, v_{2r}) = 1`,
/// `ω(v_{2r}, v_{2r+1}) = 1`, and of the off-diagonal Gram pattern. Each
/// pairing is split into its coordinate summands.
pub fn frame_residuals<T: Scalar>(h: &HypersurfaceJet<T>) -> Result<Vec<Residual<T>>, InvariantError> {
    let f = h.frame()?;
    let p = f.v.len();
    let k = h.delta_recip()?;
    let omega_terms = |a: &Vector<T>, b: &Vector<T>, want: T| -> Residual<T> {
        let n = a.len() / 2;
        let mut t: Vec<T> = (0..n)
            .flat_map(|i| [(a[i].clone() * &b[n + i]).constant_term().clone(), -(a[n + i].clone() * &b[i]).constant_term().clone()])
            .collect();
        t.push(-want);
        Residual::new("omega", t)
    };
    let mut out = vec![omega_terms(&h.v0(), &h.ambient(&f.v[0]), T::one())];
    for i in 0..p {
        for j in i + 1..p {
            let want = if j == i + 1 && i % 2 == 0 { T::one() } else { T::zero() };
            let mut t = Vec::new();
            for a in 0..p {
                for b in 0..p {
                    t.push((h.d.d2(0, a, b).clone() * &f.v[i][a] * &f.v[j][b] * &k).constant_term().clone());
                }
            }
            t.push(-want);
            out.push(Residual::new("gram", t));
        }
    }
    for r in (1..p).step_by(2) {
        out.push(omega_terms(&h.ambient(&f.v[r]), &h.ambient(&f.v[r + 1]), T::one()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::ExprAst;
    use crate::group::{Flavor, Geometry, GroupElement};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn jet_of(src: &str, vars: &[&str], at: &[f64], order: usize) -> GraphJet<f64> {
        let ast = ExprAst::parse_with_vars(src, vars).unwrap();
        let xs: Vec<MultiJet<f64>> = (0..at.len()).map(|i| MultiJet::variable(at.len(), order, i, at[i])).collect();
        GraphJet::new(at.to_vec(), vec![ast.eval(&xs).unwrap()])
    }

    #[test]
    fn sphere_values() {
        let h = HypersurfaceJet::new(&jet_of("x^2+y^2+z^2", &["x", "y", "z"], &[1.0, 0.0, 0.0], 3)).unwrap();
        let inv = h.invariants().unwrap();
        assert!((inv[0].1.value() - 10.0).abs() < 1e-12);
        let n1 = h.derivations().unwrap()[0].at_point();
        // ∇_1 = D_y + 2 D_z
        assert!(n1[0].abs() < 1e-15 && (n1[1] - 1.0).abs() < 1e-15 && (n1[2] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn i2a_closed_form() {
        let at = [0.4, -0.7, 1.1];
        let h = HypersurfaceJet::new(&jet_of("x*y - z^3 + y^2*x + exp(z)", &["x", "y", "z"], &at, 2)).unwrap();
        let g = h.d.clone();
        let u = |a: [u8; 3]| g.u(0, &a).value();
        let (ux, uy, uz) = (u([1, 0, 0]), u([0, 1, 0]), u([0, 0, 1]));
        let (uxx, uyy, uzz, uxy, uxz, uyz) = (u([2, 0, 0]), u([0, 2, 0]), u([0, 0, 2]), u([1, 1, 0]), u([1, 0, 1]), u([0, 1, 1]));
        let d = at[0] * ux + at[1] * uy + at[2] * uz - u([0, 0, 0]);
        let want = (ux * ux * uzz - 2.0 * ux * uz * uxz + uz * uz * uxx + 2.0 * ux * uyz - 2.0 * uz * uxy + uyy) / d.powi(3);
        let got = h.invariants().unwrap()[0].1.value();
        assert!((got - want).abs() < 1e-12 * want.abs().max(1.0));
    }

    #[test]
    fn canonical_frame_patterns() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 2..=3 {
            let jet = GraphJet::random(2 * n - 1, 1, 2, &mut rng);
            let h = HypersurfaceJet::new(&jet).unwrap();
            for r in frame_residuals(&h).unwrap() {
                assert!(r.normalized() < 1e-9, "n={n} {}: {:?}", r.name, r.terms);
            }
            let f = h.frame().unwrap();
            for row in h.omega_defect(&f) {
                for e in row {
                    assert!(e.value().abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn frame_is_equivariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let jet = GraphJet::random(3, 1, 3, &mut rng);
        let g = GroupElement::random(Flavor::Sp, 2, &mut rng);
        let moved = g.pushforward(&jet, Geometry::Hypersurface { n: 2 }).unwrap();
        let (h, hm) = (HypersurfaceJet::new(&jet).unwrap(), HypersurfaceJet::new(&moved).unwrap());
        let (f, fm) = (h.frame().unwrap(), hm.frame().unwrap());
        for (a, b) in f.v.iter().zip(&fm.v) {
            let img = g.act(&h.ambient(a).iter().map(|s| s.value()).collect::<Vec<_>>());
            let got = hm.ambient(b);
            for (x, y) in img.iter().zip(&got) {
                assert!((x - y.value()).abs() < 1e-9 * (1.0 + x.abs()), "{x} vs {}", y.value());
            }
        }
    }

    #[test]
    fn defining_function_rescaling() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let jet = GraphJet::random(3, 1, 2, &mut rng);
        let one = MultiJet::constant_in(4, 2, 1.0);
        assert!(rescale_residual(&jet, &one).unwrap() < 1e-12);
        assert!(rescale_residual(&jet, &MultiJet::constant_in(4, 2, 3.5)).unwrap() < 1e-12);
        let f = MultiJet::from_fn(4, 2, |a| if a.iter().all(|&e| e == 0) { 1.7 } else { crate::jet::generic_value(&mut rng) });
        assert!(rescale_residual(&jet, &f).unwrap() < 1e-10);
    }

    #[test]
    fn third_order_candidates_have_rank_ten() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let jet = GraphJet::random(3, 1, 3, &mut rng);
        let h = HypersurfaceJet::new(&jet).unwrap();
        assert_eq!(h.third_order_candidates().unwrap().len(), 18);
        let rows = crate::inv::fiber_jacobian(&jet, 3, |g| {
            Ok(HypersurfaceJet::new(g)?.third_order_candidates()?.into_iter().map(|(_, s)| s).collect())
        })
        .unwrap();
        assert_eq!(crate::linalg::numerical_rank(&rows, 1e-9), 10);
        // second-order invariants do not see the third-order fiber
        let rows2 = crate::inv::fiber_jacobian(&jet, 2, |g| {
            Ok(HypersurfaceJet::new(g)?.invariants()?.into_iter().map(|(_, s)| s).collect())
        })
        .unwrap();
        assert_eq!(crate::linalg::numerical_rank(&rows2, 1e-9), 3);
    }

    #[test]
    fn pivoted_third_order_basis() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let b = third_order_basis(&GraphJet::random(3, 1, 3, &mut rng)).unwrap();
        assert_eq!(b.len(), 10);
        assert!(b[0].starts_with("N1("));
    }

    #[test]
    fn second_order_count_is_2n_minus_1() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for n in 2..=3 {
            let jet = GraphJet::random(2 * n - 1, 1, 2, &mut rng);
            let rows = crate::inv::fiber_jacobian(&jet, 2, |g| {
                Ok(HypersurfaceJet::new(g)?.invariants()?.into_iter().map(|(_, s)| s).collect())
            })
            .unwrap();
            assert_eq!(crate::linalg::numerical_rank(&rows, 1e-9), 2 * n - 1);
        }
    }

    #[test]
    fn r4_names_follow_frame_order() {
        let h = HypersurfaceJet::new(&jet_of("x^2+y^2+z^2", &["x", "y", "z"], &[1.0, 0.0, 0.0], 2)).unwrap();
        let named = h.r4_invariants().unwrap();
        assert_eq!(named[0].0, "I2a");
        assert_eq!(named[0].1.value(), 10.0);
    }
}
