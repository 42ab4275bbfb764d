//! Functions `u = u(x, y)` on `R^{2n}` under `Sp(2n)`.

use super::{apply_terms, nonzero, Residual, Series};
use crate::error::InvariantError;
use crate::jet::{Derivation, GraphJet, JetData, MultiJet};
use crate::linalg::determinant;
use crate::scalar::Scalar;

/// Series of the jet of `u` along its graph; independent variables are
/// `(x_1..x_n, y_1..y_n)`.
#[derive(Clone, Debug)]
pub struct FunctionJet<T: Scalar> {
    pub n: usize,
    d: JetData<Series<T>>,
}

impl<T: Scalar> FunctionJet<T> {
    pub fn new(jet: &GraphJet<T>) -> Result<Self, InvariantError> {
        if jet.ndeps() != 1 || jet.nindep() % 2 != 0 || jet.nindep() == 0 {
            return Err(InvariantError::Unsupported("function jets need 2n independent variables and one value".into()));
        }
        Ok(FunctionJet { n: jet.nindep() / 2, d: jet.along() })
    }

    pub fn order(&self) -> usize {
        self.d.order
    }

    pub fn coord(&self, i: usize) -> &Series<T> {
        &self.d.x[i]
    }

    /// `∂^α u` along the graph.
    pub fn u(&self, alpha: &[u8]) -> &Series<T> {
        self.d.u(0, alpha)
    }

    fn du(&self, i: usize) -> &Series<T> {
        self.d.d1(0, i)
    }

    fn hess(&self, i: usize, j: usize) -> &Series<T> {
        self.d.d2(0, i, j)
    }

    pub fn i0(&self) -> Series<T> {
        self.d.u(0, &vec![0; 2 * self.n]).clone()
    }

    /// `I_1 = du(ζ) = Σ x_i u_{x_i} + y_i u_{y_i}`.
    pub fn i1(&self) -> Series<T> {
        let mut acc = MultiJet::constant(T::zero());
        for i in 0..2 * self.n {
            acc = acc + self.coord(i).clone() * self.du(i);
        }
        acc
    }

    /// `∇_1 = Σ x_i D_{x_i} + y_i D_{y_i}`.
    pub fn nabla1(&self) -> Derivation<T> {
        Derivation::new(self.d.x.clone())
    }

    /// `∇_2 = Σ u_{x_i} D_{y_i} - u_{y_i} D_{x_i}`.
    pub fn nabla2(&self) -> Derivation<T> {
        let n = self.n;
        let mut c = vec![MultiJet::constant(T::zero()); 2 * n];
        for i in 0..n {
            c[i] = -self.du(n + i).clone();
            c[n + i] = self.du(i).clone();
        }
        Derivation::new(c)
    }

    /// `A v` for `A = ω^{-1} Q_2`: with `α = Q_2 v`, `A v = Σ α_{y_i} D_{x_i} - α_{x_i} D_{y_i}`.
    pub fn endomorphism(&self, v: &Derivation<T>) -> Derivation<T> {
        let n = self.n;
        let alpha: Vec<Series<T>> = (0..2 * n)
            .map(|r| {
                let mut acc = MultiJet::constant(T::zero());
                for c in 0..2 * n {
                    acc = acc + self.hess(r, c).clone() * &v.coeffs[c];
                }
                acc
            })
            .collect();
        let mut out = vec![MultiJet::constant(T::zero()); 2 * n];
        for i in 0..n {
            out[i] = alpha[n + i].clone();
            out[n + i] = -alpha[i].clone();
        }
        Derivation::new(out)
    }

    /// `A^i v`.
    pub fn endomorphism_power(&self, v: &Derivation<T>, i: usize) -> Derivation<T> {
        (0..i).fold(v.clone(), |w, _| self.endomorphism(&w))
    }

    /// `Q_k(v_1, ..., v_k) = Σ ∂^k u / ∂x_{i_1}..∂x_{i_k} · v_1^{i_1} .. v_k^{i_k}`.
    pub fn q(&self, dirs: &[&Derivation<T>]) -> Series<T> {
        let nv = 2 * self.n;
        let k = dirs.len();
        let mut acc = MultiJet::constant(T::zero());
        let mut idx = vec![0usize; k];
        loop {
            let mut alpha = vec![0u8; nv];
            let mut term = MultiJet::constant(T::one());
            for (slot, &i) in idx.iter().enumerate() {
                alpha[i] += 1;
                term = term * &dirs[slot].coeffs[i];
            }
            acc = acc + term * self.u(&alpha);
            // odometer over (i_1..i_k)
            let mut s = 0;
            while s < k {
                idx[s] += 1;
                if idx[s] < nv {
                    break;
                }
                idx[s] = 0;
                s += 1;
            }
            if s == k {
                return acc;
            }
        }
    }

    /// `∇_1, ∇_2, A∇_2, .., A^{2n-2}∇_2`, checked for independence at the point.
    pub fn frame(&self) -> Result<Vec<Derivation<T>>, InvariantError> {
        let n2 = self.nabla2();
        let mut frame = vec![self.nabla1(), n2.clone()];
        let mut w = n2;
        for _ in 1..=2 * self.n - 2 {
            w = self.endomorphism(&w);
            frame.push(w.clone());
        }
        let m: Vec<Vec<T>> = frame.iter().map(|v| v.at_point()).collect();
        let scale: f64 = m.iter().map(|r| r.iter().map(|a| a.value().powi(2)).sum::<f64>().sqrt()).product();
        if !nonzero(determinant(&m).value(), scale) {
            return Err(InvariantError::FrameDegeneracy);
        }
        Ok(frame)
    }

    /// `I_0`, `I_1`, and `I_{ij} = Q_2(∇_i, ∇_j)` for `i ∈ {1, 2}`, `i <= j <= 2n`,
    /// minus `I_{2j}` with `j >= 3` odd: `H Ω⁻¹ H` is antisymmetric, so
    /// `Q_2(∇_2, A^m ∇_2) = 0` for odd `m`.
    pub fn generators(&self) -> Result<Vec<(String, Series<T>)>, InvariantError> {
        let frame = self.frame()?;
        let mut out = vec![("I0".to_string(), self.i0()), ("I1".to_string(), self.i1())];
        for i in 0..2 {
            for j in i..frame.len() {
                if i == 1 && j >= 2 && j % 2 == 0 {
                    continue;
                }
                out.push((format!("I{}{}", i + 1, j + 1), self.q(&[&frame[i], &frame[j]])));
            }
        }
        Ok(out)
    }
}

/// The `n = 1` invariants.
impl<T: Scalar> FunctionJet<T> {
    fn xy(&self) -> (&Series<T>, &Series<T>) {
        (self.coord(0), self.coord(1))
    }

    /// `I_2a = x² u_xx + 2xy u_xy + y² u_yy`.
    pub fn i2a(&self) -> Series<T> {
        let (x, y) = self.xy();
        let two = T::from_i64(2);
        x.square() * self.hess(0, 0) + (x.clone() * y).scale(&two) * self.hess(0, 1) + y.square() * self.hess(1, 1)
    }

    /// `I_2b = x u_y u_xx - y u_x u_yy + (y u_y - x u_x) u_xy`.
    pub fn i2b(&self) -> Series<T> {
        let (x, y) = self.xy();
        let (ux, uy) = (self.du(0), self.du(1));
        x.clone() * uy * self.hess(0, 0) - y.clone() * ux * self.hess(1, 1)
            + (y.clone() * uy - x.clone() * ux) * self.hess(0, 1)
    }

    /// `I_2c = u_x² u_yy - 2 u_x u_y u_xy + u_y² u_xx`.
    pub fn i2c(&self) -> Series<T> {
        let (ux, uy) = (self.du(0), self.du(1));
        let two = T::from_i64(2);
        ux.square() * self.hess(1, 1) - (ux.clone() * uy).scale(&two) * self.hess(0, 1) + uy.square() * self.hess(0, 0)
    }

    pub fn n1_invariants(&self) -> Vec<(&'static str, Series<T>)> {
        vec![("I0", self.i0()), ("I1", self.i1()), ("I2a", self.i2a()), ("I2b", self.i2b()), ("I2c", self.i2c())]
    }

    /// `R_1 = ∇_2(I_0)`, `R_2` (commutator, one residual per component, scaled by `I_1`) and `R_3`.
    pub fn n1_syzygies(&self) -> Result<Vec<Residual<T>>, InvariantError> {
        let (n1, n2) = (self.nabla1(), self.nabla2());
        let (i0, i1, i2a, i2b, i2c) = (self.i0(), self.i1(), self.i2a(), self.i2b(), self.i2c());
        let mut out = vec![Residual::from_series("R1", apply_terms(&n2, &i0)?)];
        let br = n1.bracket(&n2)?;
        for (c, name) in ["R2x", "R2y"].into_iter().enumerate() {
            let terms = vec![
                i1.clone() * &br.coeffs[c],
                -(i2b.clone() * &n1.coeffs[c]),
                -((i2a.clone() - &i1) * &n2.coeffs[c]),
            ];
            out.push(Residual::from_series(name, terms));
        }
        let three = T::from_i64(3);
        let r3 = vec![
            i1.clone() * n2.apply(&i2b)?,
            i1.clone() * n1.apply(&i2c)?,
            -((i2a.scale(&three) - &i1) * &i2c),
            i2b.square().scale(&three),
        ];
        out.push(Residual::from_series("R3", r3));
        Ok(out)
    }

    /// `I_1 = ∇_1 I_0`, `I_2a = ∇_1² I_0 - ∇_1 I_0`, `I_2b = -∇_2 ∇_1 I_0`.
    pub fn n1_reductions(&self) -> Result<Vec<Residual<T>>, InvariantError> {
        let (n1, n2) = (self.nabla1(), self.nabla2());
        let i0 = self.i0();
        let d1 = n1.apply(&i0)?;
        let d11 = n1.apply(&d1)?;
        let d21 = n2.apply(&d1)?;
        Ok(vec![
            Residual::from_series("I1=N1(I0)", vec![self.i1(), -d1.clone()]),
            Residual::from_series("I2a=N1^2(I0)-N1(I0)", vec![self.i2a(), -d11, d1]),
            Residual::from_series("I2b=-N2N1(I0)", vec![self.i2b(), d21]),
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::ExprAst;
    use crate::Rational;

    fn jet_of(src: &str, at: [f64; 2], order: usize) -> GraphJet<f64> {
        let ast = ExprAst::parse_with_vars(src, &["x", "y"]).unwrap();
        let vars: Vec<MultiJet<f64>> = (0..2).map(|i| MultiJet::variable(2, order, i, at[i])).collect();
        GraphJet::new(at.to_vec(), vec![ast.eval(&vars).unwrap()])
    }

    #[test]
    fn paraboloid_values() {
        let f = FunctionJet::new(&jet_of("x^2 + y^2", [1.0, 0.0], 3)).unwrap();
        assert_eq!(*f.i1().constant_term(), 2.0);
        assert_eq!(*f.i2a().constant_term(), 2.0);
        let n1 = f.nabla1();
        assert_eq!(*n1.apply(&f.i1()).unwrap().constant_term(), 4.0);
    }

    #[test]
    fn saddle_i2c() {
        let f = FunctionJet::new(&jet_of("x*y", [1.0, 1.0], 2)).unwrap();
        assert_eq!(*f.i2c().constant_term(), -2.0);
    }

    #[test]
    fn n1_generators_are_q2_contractions() {
        let f = FunctionJet::new(&jet_of("x^3 - 2*x*y + y^4/3 + exp(x)", [0.7, -1.3], 3)).unwrap();
        let g = f.generators().unwrap();
        let val = |k: usize| g[k].1.constant_term().value();
        assert_eq!(g[2].0, "I11");
        assert!((val(2) - f.i2a().value()).abs() < 1e-12);
        assert!((val(3) + f.i2b().value()).abs() < 1e-12);
        assert!((val(4) - f.i2c().value()).abs() < 1e-12);
    }

    #[test]
    fn endomorphism_expansion() {
        let f = FunctionJet::new(&jet_of("sin(x) + x*y^2 - y^3", [0.4, 1.1], 3)).unwrap();
        let (n1, n2) = (f.nabla1(), f.nabla2());
        let (i1, i2a, i2b, i2c) = (f.i1(), f.i2a(), f.i2b(), f.i2c());
        let an2 = f.endomorphism(&n2);
        let an1 = f.endomorphism(&n1);
        for c in 0..2 {
            let want2 = (i2c.clone() * &n1.coeffs[c] + i2b.clone() * &n2.coeffs[c]).value() / i1.value();
            assert!((an2.coeffs[c].value() - want2).abs() < 1e-12);
            let want1 = -(i2b.clone() * &n1.coeffs[c] + i2a.clone() * &n2.coeffs[c]).value() / i1.value();
            assert!((an1.coeffs[c].value() - want1).abs() < 1e-12);
        }
    }

    #[test]
    fn syzygies_vanish_exactly_on_polynomials() {
        let ast = ExprAst::parse_with_vars("x^3*y - 2*x*y^2 + 3*y^4 + x - 5", &["x", "y"]).unwrap();
        let at = [Rational::new(2, 3), Rational::new(-5, 7)];
        let vars: Vec<MultiJet<Rational>> = (0..2).map(|i| MultiJet::variable(2, 4, i, at[i].clone())).collect();
        let f = FunctionJet::new(&GraphJet::new(at.to_vec(), vec![ast.eval(&vars).unwrap()])).unwrap();
        for r in f.n1_syzygies().unwrap().into_iter().chain(f.n1_reductions().unwrap()) {
            assert!(r.value().is_zero(), "{} = {}", r.name, r.value());
        }
    }

    #[test]
    fn round_paraboloid_frame_is_degenerate() {
        // Q_2 = 2·Id makes A a multiple of a complex structure, so A∇_2 ∥ ∇_1.
        let x = |i| MultiJet::variable(4, 3, i, [0.9, -0.4, 1.3, 0.6][i]);
        let u = (0..4).fold(MultiJet::constant(0.0), |acc, i| acc + x(i).square());
        let f = FunctionJet::new(&GraphJet::new(vec![0.9, -0.4, 1.3, 0.6], vec![u])).unwrap();
        assert!(matches!(f.frame(), Err(InvariantError::FrameDegeneracy)));
    }

    #[test]
    fn general_frame_n2_is_independent() {
        let x = |i| MultiJet::variable(4, 4, i, [0.9, -0.4, 1.3, 0.6][i]);
        let mut u = MultiJet::constant(0.0);
        for i in 0..4 {
            u = u + x(i).square();
        }
        // break the U(2)-symmetry so that A has distinct eigen-directions
        u = u + x(0) * x(1) * x(2) + x(3).powi(3);
        let f = FunctionJet::new(&GraphJet::new(vec![0.9, -0.4, 1.3, 0.6], vec![u])).unwrap();
        let frame = f.frame().unwrap();
        let m: Vec<Vec<f64>> = frame.iter().map(|v| v.at_point()).collect();
        assert_eq!(crate::linalg::numerical_rank(&m, 1e-9), 4);
        assert_eq!(f.generators().unwrap().len(), 2 + 4 + 2);
    }

    #[test]
    fn odd_powers_of_a_pair_to_zero() {
        let ast = ExprAst::parse_with_vars("x1^3*y2 - 2*x2*y1^2 + y1^4/3 + x1*x2*y2 + y2^2", &["x1", "x2", "y1", "y2"]).unwrap();
        let at = [Rational::new(2, 3), Rational::new(-1, 2), Rational::new(5, 4), Rational::new(1, 3)];
        let vars: Vec<MultiJet<Rational>> = (0..4).map(|i| MultiJet::variable(4, 3, i, at[i].clone())).collect();
        let f = FunctionJet::new(&GraphJet::new(at.to_vec(), vec![ast.eval(&vars).unwrap()])).unwrap();
        let frame = f.frame().unwrap();
        let q = |a: usize, b: usize| f.q(&[&frame[a], &frame[b]]).constant_term().clone();
        assert!(q(1, 2).is_zero());
        assert!(!q(1, 3).is_zero() && !q(1, 1).is_zero());
        assert!(!f.generators().unwrap().iter().any(|(name, _)| name == "I23"));
    }
}
