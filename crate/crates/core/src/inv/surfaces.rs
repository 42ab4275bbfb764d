//! Surfaces `x = x(t,s), y = y(t,s)` in `R^4(t,s,x,y)` under `Sp(4)`,
//! with `ω = dt∧dx + ds∧dy`.
//!
//! Tangent vectors are pairs `(a_t, a_s)` of `D`-coefficients. Quadratic
//! forms on `TΣ` are `2×2` matrices; `F = d²f|_{TΣ} = -x_ij` and
//! `G = d²g|_{TΣ} = -y_ij` for `f = x - x(t,s)`, `g = y - y(t,s)`, and
//! `aF + bG` corresponds to the annihilating form `a df + b dg`.

use super::linear::{dot, norm, zero, Vector};
use super::{recip_or, vanishes, Residual, Series};
use crate::error::InvariantError;
use crate::group::omega;
use crate::jet::{Derivation, GraphJet, JetData};
use crate::scalar::Scalar;

pub type Form<T> = [[Series<T>; 2]; 2];

#[derive(Clone, Debug)]
pub struct SurfaceJet<T: Scalar> {
    d: JetData<Series<T>>,
}

#[derive(Clone, Debug)]
pub struct SurfaceFrame<T: Scalar> {
    /// tangential part of `v_0`, as `D`-coefficients
    pub v0par: Vector<T>,
    /// ω-normal part of `v_0`, ambient
    pub v0perp: Vector<T>,
    pub wpar: Vector<T>,
    pub wperp: Vector<T>,
    pub q1: Form<T>,
    pub q2: Form<T>,
    pub sigma1: Vector<T>,
    pub sigma2: Vector<T>,
}

fn form_eval<T: Scalar>(q: &Form<T>, a: &[Series<T>], b: &[Series<T>]) -> Series<T> {
    form_terms(q, a, b).into_iter().fold(zero(), |acc, t| acc + t)
}

fn form_terms<T: Scalar>(q: &Form<T>, a: &[Series<T>], b: &[Series<T>]) -> Vec<Series<T>> {
    let mut out = Vec::with_capacity(4);
    for i in 0..2 {
        for j in 0..2 {
            out.push(q[i][j].clone() * &a[i] * &b[j]);
        }
    }
    out
}

fn form_combo<T: Scalar>(a: &Series<T>, f: &Form<T>, b: &Series<T>, g: &Form<T>) -> Form<T> {
    let e = |i: usize, j: usize| a.clone() * &f[i][j] + b.clone() * &g[i][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn covector_combo<T: Scalar>(a: &Series<T>, f: &[Series<T>], b: &Series<T>, g: &[Series<T>]) -> Vector<T> {
    f.iter().zip(g).map(|(x, y)| a.clone() * x + b.clone() * y).collect()
}

fn omega_terms<T: Scalar>(a: &[Series<T>], b: &[Series<T>]) -> Vec<Series<T>> {
    let n = a.len() / 2;
    (0..n).flat_map(|i| [a[i].clone() * &b[n + i], -(a[n + i].clone() * &b[i])]).collect()
}

fn pairing_terms<T: Scalar>(s: &[Series<T>], v: &[Series<T>]) -> Vec<Series<T>> {
    s.iter().zip(v).map(|(a, b)| a.clone() * b).collect()
}

/// Solve `[[a, b], [c, d]] (p, q)ᵀ = (0, 1)ᵀ`: `(p, q) = (-b, a)/(ad - bc)`.
fn solve_01<T: Scalar>(a: &Series<T>, b: &Series<T>, c: &Series<T>, d: &Series<T>, err: InvariantError) -> Result<(Series<T>, Series<T>), InvariantError> {
    let det = a.clone() * d - b.clone() * c;
    let scale = (a.value().abs() + b.value().abs()) * (c.value().abs() + d.value().abs());
    let r = recip_or(&det, scale, err)?;
    Ok((-(b.clone() * &r), a.clone() * &r))
}

impl<T: Scalar> SurfaceJet<T> {
    pub fn new(jet: &GraphJet<T>) -> Result<Self, InvariantError> {
        if jet.nindep() != 2 || jet.ndeps() != 2 {
            return Err(InvariantError::Unsupported("surface jets are graphs x(t,s), y(t,s)".into()));
        }
        Ok(SurfaceJet { d: jet.along() })
    }

    pub fn v0(&self) -> Vector<T> {
        self.d.point()
    }

    /// `D_t`, `D_s` as ambient vectors.
    pub fn tangent_basis(&self) -> [Vector<T>; 2] {
        let one = Series::constant(T::one());
        let z = zero::<T>();
        [
            vec![one.clone(), z.clone(), self.d.d1(0, 0).clone(), self.d.d1(1, 0).clone()],
            vec![z, one, self.d.d1(0, 1).clone(), self.d.d1(1, 1).clone()],
        ]
    }

    pub fn ambient(&self, a: &[Series<T>]) -> Vector<T> {
        let [dt, ds] = self.tangent_basis();
        dt.iter().zip(&ds).map(|(p, q)| a[0].clone() * p + a[1].clone() * q).collect()
    }

    /// `df = dx - x_t dt - x_s ds` and `dg = dy - y_t dt - y_s ds`.
    pub fn annihilator(&self) -> [Vector<T>; 2] {
        let (one, z) = (Series::constant(T::one()), zero::<T>());
        let d = &self.d;
        [
            vec![-d.d1(0, 0).clone(), -d.d1(0, 1).clone(), one.clone(), z.clone()],
            vec![-d.d1(1, 0).clone(), -d.d1(1, 1).clone(), z, one],
        ]
    }

    /// `F = d²f|_{TΣ}`, `G = d²g|_{TΣ}`.
    pub fn second_differentials(&self) -> [Form<T>; 2] {
        let h = |j: usize| -> Form<T> {
            let e = |a: usize, b: usize| -self.d.d2(j, a, b).clone();
            [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
        };
        [h(0), h(1)]
    }

    /// `ω(D_t, D_s) = x_s - y_t`.
    pub fn omega_tangent(&self) -> Series<T> {
        let [dt, ds] = self.tangent_basis();
        omega(&dt, &ds)
    }

    /// `v_0 = ι(v_0∥) + v_0⊥` with `v_0⊥ ∈ TΣ^{⊥ω}`.
    pub fn split(&self) -> Result<(Vector<T>, Vector<T>), InvariantError> {
        let [dt, ds] = self.tangent_basis();
        let m = self.omega_tangent();
        let r = recip_or(&m, norm(&dt) * norm(&ds), InvariantError::LagrangianTangent)?;
        let v0 = self.v0();
        let par = vec![omega(&v0, &ds) * &r, -(omega(&v0, &dt) * &r)];
        let amb = self.ambient(&par);
        let perp = v0.iter().zip(&amb).map(|(a, b)| a.clone() - b).collect();
        Ok((par, perp))
    }

    pub fn frame(&self) -> Result<SurfaceFrame<T>, InvariantError> {
        let (v, v0perp) = self.split()?;
        let m = self.omega_tangent();
        let [f, g] = self.second_differentials();
        let [df, dg] = self.annihilator();
        let (fv, gv) = (form_eval(&f, &v, &v), form_eval(&g, &v, &v));
        let fg_scale = f.iter().chain(&g).flatten().map(|e| e.value().abs()).fold(0.0, f64::max);
        // Q1 ∝ G(v,v) F - F(v,v) G: the solution line of Q(v,v) = 0 is unique iff (F(v,v), G(v,v)) ≠ 0
        let vv = norm(&v).powi(2);
        if vanishes(&fv, fg_scale * vv) && vanishes(&gv, fg_scale * vv) {
            return Err(InvariantError::DegenerateQ1);
        }
        let q1_raw = form_combo(&gv, &f, &(-fv.clone()), &g);
        // ω(v, w̃) = 1 for w̃ = (-v_s, v_t)/(m |v|²)
        let len2 = v[0].clone() * &v[0] + v[1].clone() * &v[1];
        let r = recip_or(&(len2 * &m), vv * m.value().abs(), InvariantError::DegenerateJet("tangential part of the position vector vanishes"))?;
        let wt = vec![-(v[1].clone() * &r), v[0].clone() * &r];
        let qvw = form_eval(&q1_raw, &v, &wt);
        let q_scale = (fv.value().abs() + gv.value().abs()) * fg_scale * norm(&v) * norm(&wt);
        let c = recip_or(&qvw, q_scale, InvariantError::DegenerateQ1)?;
        // Q1(w̃ + k v, w̃ + k v) = Q1(w̃, w̃) + 2k Q1(v, w̃)
        let k = -(form_eval(&q1_raw, &wt, &wt) * &c) * &Series::constant(T::from_ratio(1, 2));
        let wpar: Vector<T> = wt.iter().zip(&v).map(|(a, b)| a.clone() + k.clone() * b).collect();
        let q1 = form_combo(&(gv.clone() * &c), &f, &(-(fv.clone() * &c)), &g);
        let sigma1 = covector_combo(&(gv * &c), &df, &(-(fv * &c)), &dg);
        // w⊥ = p N_f + q N_g, N = -J d(·) spans TΣ^{⊥ω}
        let nf = normal_of(&df);
        let ng = normal_of(&dg);
        let (p, q) = solve_01(
            &dot(&sigma1, &nf),
            &dot(&sigma1, &ng),
            &omega(&v0perp, &nf),
            &omega(&v0perp, &ng),
            InvariantError::SigmaDegenerate,
        )?;
        let wperp: Vector<T> = nf.iter().zip(&ng).map(|(a, b)| p.clone() * a + q.clone() * b).collect();
        // σ2 = γ df + ε dg with σ2(v0⊥) = 0, σ2(w⊥) = 1
        let (gamma, eps) = solve_01(
            &dot(&df, &v0perp),
            &dot(&dg, &v0perp),
            &dot(&df, &wperp),
            &dot(&dg, &wperp),
            InvariantError::SigmaDegenerate,
        )?;
        let sigma2 = covector_combo(&gamma, &df, &eps, &dg);
        let q2 = form_combo(&gamma, &f, &eps, &g);
        Ok(SurfaceFrame { v0par: v, v0perp, wpar, wperp, q1, q2, sigma1, sigma2 })
    }

    /// `I2a = σ1(v0⊥)`, `I2b = Q2(v0∥, v0∥)`, `I2c = Q2(v0∥, w∥)`, `I2d = Q2(w∥, w∥)`.
    pub fn invariants(&self) -> Result<Vec<(&'static str, Series<T>)>, InvariantError> {
        let fr = self.frame()?;
        Ok(vec![
            ("I2a", dot(&fr.sigma1, &fr.v0perp)),
            ("I2b", form_eval(&fr.q2, &fr.v0par, &fr.v0par)),
            ("I2c", form_eval(&fr.q2, &fr.v0par, &fr.wpar)),
            ("I2d", form_eval(&fr.q2, &fr.wpar, &fr.wpar)),
        ])
    }

    /// `∇1 = v0∥`, `∇2 = w∥`.
    pub fn derivations(&self) -> Result<[Derivation<T>; 2], InvariantError> {
        let fr = self.frame()?;
        Ok([Derivation::new(fr.v0par), Derivation::new(fr.wpar)])
    }

    /// `∇_i I2β`, the eight third-order invariants.
    pub fn third_order(&self) -> Result<Vec<(String, Series<T>)>, InvariantError> {
        let inv = self.invariants()?;
        let ders = self.derivations()?;
        let mut out = Vec::with_capacity(8);
        for (i, d) in ders.iter().enumerate() {
            for (name, s) in &inv {
                out.push((format!("N{}({name})", i + 1), d.apply(s)?));
            }
        }
        Ok(out)
    }

    /// The eight frame normalizations, split into summands.
    pub fn frame_residuals(&self) -> Result<Vec<Residual<T>>, InvariantError> {
        let fr = self.frame()?;
        let one = Series::constant(T::one());
        let with = |mut t: Vec<Series<T>>, want: &Series<T>| {
            t.push(-want.clone());
            t
        };
        let (z, amb_w) = (zero::<T>(), self.ambient(&fr.wpar));
        let amb_v = self.ambient(&fr.v0par);
        Ok(vec![
            Residual::from_series("Q1(v0|,v0|)=0", with(form_terms(&fr.q1, &fr.v0par, &fr.v0par), &z)),
            Residual::from_series("w(v0|,w|)=1", with(omega_terms(&amb_v, &amb_w), &one)),
            Residual::from_series("Q1(w|,w|)=0", with(form_terms(&fr.q1, &fr.wpar, &fr.wpar), &z)),
            Residual::from_series("Q1(v0|,w|)=1", with(form_terms(&fr.q1, &fr.v0par, &fr.wpar), &one)),
            Residual::from_series("s1(w-)=0", with(pairing_terms(&fr.sigma1, &fr.wperp), &z)),
            Residual::from_series("w(v0-,w-)=1", with(omega_terms(&fr.v0perp, &fr.wperp), &one)),
            Residual::from_series("s2(v0-)=0", with(pairing_terms(&fr.sigma2, &fr.v0perp), &z)),
            Residual::from_series("s2(w-)=1", with(pairing_terms(&fr.sigma2, &fr.wperp), &one)),
        ])
    }
}

/// `-J σ`: the vector with `ω(-Jσ, u) = -σ(u)`, so it is ω-orthogonal to `Ker σ`.
fn normal_of<T: Scalar>(s: &[Series<T>]) -> Vector<T> {
    let n = s.len() / 2;
    let mut out = vec![zero(); 2 * n];
    for i in 0..n {
        out[i] = -s[n + i].clone();
        out[n + i] = s[i].clone();
    }
    out
}
