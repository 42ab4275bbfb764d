//! Extensions of the plane (`n = 1`) function and curve invariants to
//! `CSp(2)`, `ASp(2)` and `ACSp(2)`: weight-0 combinations under
//! `ξ = x∂_x + y∂_y` and translation-invariant replacements.
//!
//! Weight `w` means `I(g·jet) = λ^w I(jet)` for the homothety `g = λ·Id`.

use super::curves::CurveJet;
use super::functions::FunctionJet;
use super::{apply_terms, recip_or, Residual, Series};
use crate::error::InvariantError;
use crate::jet::{Derivation, GraphJet};
use crate::scalar::{Elementary, Scalar};

fn inv_or<T: Scalar>(d: &Series<T>, name: &'static str) -> Result<Series<T>, InvariantError> {
    recip_or(d, 1.0, InvariantError::WeightNormalizationSingular(name))
}

fn plane_function<T: Scalar>(jet: &GraphJet<T>) -> Result<FunctionJet<T>, InvariantError> {
    let f = FunctionJet::new(jet)?;
    if f.n != 1 {
        return Err(InvariantError::Unsupported("extended-group function invariants are implemented for n = 1".into()));
    }
    Ok(f)
}

fn plane_curve<T: Scalar>(jet: &GraphJet<T>) -> Result<CurveJet<T>, InvariantError> {
    let c = CurveJet::new(jet)?;
    if c.n != 1 {
        return Err(InvariantError::Unsupported("extended-group curve invariants are implemented for n = 1".into()));
    }
    Ok(c)
}

/// One residual per component of `Σ_k c_k X_k = 0`, with `c_k X_k` given as
/// coefficient series and derivations.
fn derivation_identity<T: Scalar>(name: &'static str, parts: &[(Series<T>, &Derivation<T>)]) -> Vec<Residual<T>> {
    let dim = parts[0].1.coeffs.len();
    (0..dim).map(|c| Residual::from_series(name, parts.iter().map(|(k, d)| k.clone() * &d.coeffs[c]).collect())).collect()
}

/// `CSp` functions: `I0, I1, I2a, I2b' = I2b^{-2} I2c`; `∇1, ∇2' = I2b^{-1} ∇2`.
#[derive(Clone, Debug)]
pub struct CspFunctions<T: Scalar> {
    pub i0: Series<T>,
    pub i1: Series<T>,
    pub i2a: Series<T>,
    pub i2b_p: Series<T>,
    pub nabla1: Derivation<T>,
    pub nabla2_p: Derivation<T>,
}

impl<T: Scalar> CspFunctions<T> {
    pub fn new(jet: &GraphJet<T>) -> Result<Self, InvariantError> {
        let f = plane_function(jet)?;
        let r = inv_or(&f.i2b(), "I2b")?;
        Ok(CspFunctions {
            i0: f.i0(),
            i1: f.i1(),
            i2a: f.i2a(),
            i2b_p: r.square() * &f.i2c(),
            nabla1: f.nabla1(),
            nabla2_p: f.nabla2().scale(&r),
        })
    }

    pub fn invariants(&self) -> Vec<(&'static str, Series<T>)> {
        vec![("I0", self.i0.clone()), ("I1", self.i1.clone()), ("I2a", self.i2a.clone()), ("I2b'", self.i2b_p.clone())]
    }

    /// `R1 = ∇2'(I0)`, `R2 = ∇2'(I1) + 1`, `R3` (commutator, per component), `R4`.
    pub fn syzygies(&self) -> Result<Vec<Residual<T>>, InvariantError> {
        let (n1, n2) = (&self.nabla1, &self.nabla2_p);
        let one = Series::constant(T::one());
        let mut out = vec![Residual::from_series("R1", apply_terms(n2, &self.i0)?)];
        let mut r2 = apply_terms(n2, &self.i1)?;
        r2.push(one.clone());
        out.push(Residual::from_series("R2", r2));
        let ri1 = inv_or(&self.i1, "I1")?;
        let br = n1.bracket(n2)?;
        let minus = Series::constant(-T::one());
        out.extend(derivation_identity(
            "R3",
            &[
                (one.clone(), &br),
                (-ri1.clone(), n1),
                (-(self.i2a.clone() * &ri1), n2),
                (minus * n2.apply(&self.i2a)?, n2),
            ],
        ));
        out.push(self.r4()?);
        Ok(out)
    }

    fn r4(&self) -> Result<Residual<T>, InvariantError> {
        let (n1, n2) = (&self.nabla1, &self.nabla2_p);
        let (i1, i2a, b) = (&self.i1, &self.i2a, &self.i2b_p);
        let i3a = n1.apply(i2a)?;
        let i3b = n2.apply(i2a)?;
        let i3c = n1.apply(b)?;
        let rb = inv_or(b, "I2b'")?;
        let ri1 = inv_or(i1, "I1")?;
        let half = Series::constant(T::from_ratio(1, 2));
        let c = |k: i64| Series::constant(T::from_i64(k));
        // -1/(2 I1² I2b') times the bracketed polynomial, monomial by monomial
        let k = -(half.clone() * &ri1.square() * &rb);
        let i1s = i1.square();
        let bracket = [
            b.clone() * &i3b * &i1s,
            -(c(3) * &i3b * &i3c * &i1s),
            -(i3c.clone() * &i1s),
            c(3) * &i3b * i2a * b * i1,
            c(4) * i2a * b * i1,
            -(c(5) * &i3a * b * i1),
            -(c(4) * i2a * &i3c * i1),
            -(c(4) * &i3b * i1),
            -(c(4) * i1),
            c(6) * &i2a.square() * b,
            -(c(6) * i2a),
        ];
        let mut terms = vec![
            n2.apply(&i3a)?,
            half.clone() * &rb * &n2.apply(&i3b)?,
            -(half * &rb * &n1.apply(&i3c)?),
        ];
        terms.extend(bracket.into_iter().map(|t| k.clone() * &t));
        Ok(Residual::from_series("R4", terms))
    }

    /// `I1 = ∇1(I0)`, `I2a = ∇1(I1) - I1`.
    pub fn reductions(&self) -> Result<Vec<Residual<T>>, InvariantError> {
        let d1 = self.nabla1.apply(&self.i0)?;
        Ok(vec![
            Residual::from_series("I1=N1(I0)", vec![self.i1.clone(), -d1]),
            Residual::from_series("I2a=N1(I1)-I1", vec![self.i2a.clone(), -self.nabla1.apply(&self.i1)?, self.i1.clone()]),
        ])
    }
}

/// `ASp` functions: `I0, I2' = Hess(u), I2c`; `∇1' = (u_x u_yy - u_y u_xy) D_x - (u_x u_xy - u_y u_xx) D_y`, `∇2`.
#[derive(Clone, Debug)]
pub struct AspFunctions<T: Scalar> {
    pub i0: Series<T>,
    pub i2_p: Series<T>,
    pub i2c: Series<T>,
    pub nabla1_p: Derivation<T>,
    pub nabla2: Derivation<T>,
}

impl<T: Scalar> AspFunctions<T> {
    pub fn new(jet: &GraphJet<T>) -> Result<Self, InvariantError> {
        let f = plane_function(jet)?;
        let u = |a: [u8; 2]| f.u(&a).clone();
        let (ux, uy, uxx, uxy, uyy) = (u([1, 0]), u([0, 1]), u([2, 0]), u([1, 1]), u([0, 2]));
        let hess = uxx.clone() * &uyy - uxy.square();
        let nabla1_p = Derivation::new(vec![
            ux.clone() * &uyy - uy.clone() * &uxy,
            -(ux * &uxy - uy * &uxx),
        ]);
        Ok(AspFunctions { i0: f.i0(), i2_p: hess, i2c: f.i2c(), nabla1_p, nabla2: f.nabla2() })
    }

    pub fn invariants(&self) -> Vec<(&'static str, Series<T>)> {
        vec![("I0", self.i0.clone()), ("I2'", self.i2_p.clone()), ("I2c", self.i2c.clone())]
    }

    /// `R1` (commutator, per component), `R2 = ∇2(I0)`, `R3`.
    pub fn syzygies(&self) -> Result<Vec<Residual<T>>, InvariantError> {
        let (n1, n2) = (&self.nabla1_p, &self.nabla2);
        let one = Series::constant(T::one());
        let rc = inv_or(&self.i2c, "I2c")?;
        let br = n1.bracket(n2)?;
        let i3c = n1.apply(&self.i2c)?;
        let i3d = n2.apply(&self.i2c)?;
        let two = Series::constant(T::from_i64(2));
        let mut out = derivation_identity(
            "R1",
            &[(one, &br), (i3d.clone() * &rc, n1), (-(i3c.clone() * &rc), n2), (two * &self.i2_p, n2)],
        );
        out.push(Residual::from_series("R2", apply_terms(n2, &self.i0)?));
        let (p, c) = (&self.i2_p, &self.i2c);
        let i3a = n1.apply(p)?;
        let i3b = n2.apply(p)?;
        let k = |m: i64| Series::constant(T::from_i64(m));
        let neg_rc = -rc;
        let bracket = [
            k(12) * &p.square() * &c.square(),
            -(k(10) * p * c * &i3c),
            k(3) * p * &i3d.square(),
            k(3) * &c.square() * &i3a,
            -(k(3) * c * &i3b * &i3d),
            k(3) * &i3c.square(),
        ];
        let mut terms = vec![-(c.clone() * &n2.apply(&i3b)?), n1.apply(&i3c)?, p.clone() * &n2.apply(&i3d)?];
        terms.extend(bracket.into_iter().map(|t| neg_rc.clone() * &t));
        out.push(Residual::from_series("R3", terms));
        Ok(out)
    }

    /// `∇1'(I0) = I2c`.
    pub fn reductions(&self) -> Result<Vec<Residual<T>>, InvariantError> {
        let mut t = apply_terms(&self.nabla1_p, &self.i0)?;
        t.push(-self.i2c.clone());
        Ok(vec![Residual::from_series("N1'(I0)=I2c", t)])
    }
}

/// `ACSp` functions: `I0, I3a'' = ∇1'(I2')/I2'², I3b'' = (∇2 I2')²/I2'³`;
/// `∇1'' = ∇1'/I2'`, `∇2'' = (I2'/∇2(I2')) ∇2`.
#[derive(Clone, Debug)]
pub struct AcspFunctions<T: Scalar> {
    pub i0: Series<T>,
    pub i3a_pp: Series<T>,
    pub i3b_pp: Series<T>,
    pub nabla1_pp: Derivation<T>,
    pub nabla2_pp: Derivation<T>,
}

impl<T: Scalar> AcspFunctions<T> {
    pub fn new(jet: &GraphJet<T>) -> Result<Self, InvariantError> {
        let a = AspFunctions::new(jet)?;
        let r = inv_or(&a.i2_p, "I2'")?;
        let d1 = a.nabla1_p.apply(&a.i2_p)?;
        let d2 = a.nabla2.apply(&a.i2_p)?;
        let rd2 = inv_or(&d2, "N2(I2')")?;
        Ok(AcspFunctions {
            i0: a.i0,
            i3a_pp: d1 * &r.square(),
            i3b_pp: d2.square() * &r.powi(3),
            nabla1_pp: a.nabla1_p.scale(&r),
            nabla2_pp: a.nabla2.scale(&(a.i2_p.clone() * &rd2)),
        })
    }

    pub fn invariants(&self) -> Vec<(&'static str, Series<T>)> {
        vec![("I0", self.i0.clone()), ("I3a''", self.i3a_pp.clone()), ("I3b''", self.i3b_pp.clone())]
    }
}

/// `CSp` curves: `I3' = I3²/I2³` with `I3 = ∇I2`; `∇' = I2 I3^{-1} ∇`.
#[derive(Clone, Debug)]
pub struct CspCurve<T: Scalar> {
    pub i3_p: Series<T>,
    pub nabla_p: Derivation<T>,
}

impl<T: Scalar> CspCurve<T> {
    pub fn new(jet: &GraphJet<T>) -> Result<Self, InvariantError> {
        let c = plane_curve(jet)?;
        let i2 = c.i2()?;
        let nabla = c.nabla()?;
        let i3 = nabla.apply(&i2)?;
        let r2 = inv_or(&i2, "I2")?;
        let r3 = inv_or(&i3, "I3")?;
        Ok(CspCurve { i3_p: i3.square() * &r2.powi(3), nabla_p: nabla.scale(&(i2 * &r3)) })
    }

    pub fn invariants(&self) -> Vec<(&'static str, Series<T>)> {
        vec![("I3'", self.i3_p.clone())]
    }
}

/// `ASp` curves: `I4'' = y2 (3 y2^{-2} y4 - 5 y2^{-3} y3²)³`, `∇'' = (3 y2^{-2} y4 - 5 y2^{-3} y3²) D_x`.
#[derive(Clone, Debug)]
pub struct AspCurve<T: Scalar> {
    pub i4_pp: Series<T>,
    pub nabla_pp: Derivation<T>,
    y2: Series<T>,
    bracket: Series<T>,
}

impl<T: Scalar> AspCurve<T> {
    pub fn new(jet: &GraphJet<T>) -> Result<Self, InvariantError> {
        let c = plane_curve(jet)?;
        if c.order() < 4 {
            return Err(crate::error::JetError::OrderExhausted.into());
        }
        let y = |j: usize| c.w(j)[1].clone();
        let (y2, y3, y4) = (y(2), y(3), y(4));
        let r = inv_or(&y2, "y2")?;
        let bracket = Series::constant(T::from_i64(3)) * &r.square() * &y4
            - Series::constant(T::from_i64(5)) * &r.powi(3) * &y3.square();
        Ok(AspCurve { i4_pp: y2.clone() * &bracket.powi(3), nabla_pp: Derivation::new(vec![bracket.clone()]), y2, bracket })
    }

    pub fn invariants(&self) -> Vec<(&'static str, Series<T>)> {
        vec![("I4''", self.i4_pp.clone())]
    }

    /// The micro-local `I4' = ∛y2 (3 y2^{-2} y4 - 5 y2^{-3} y3²)`, whose cube is `I4''`.
    pub fn i4_prime(&self) -> Result<Series<T>, InvariantError> {
        Ok(self.y2.elem(Elementary::CBRT)? * &self.bracket)
    }
}

/// `ACSp` curves: `I5 = (∇''I4'')²/I4''³`, `∇''' = (I4''/∇''I4'') ∇''`.
#[derive(Clone, Debug)]
pub struct AcspCurve<T: Scalar> {
    pub i5: Series<T>,
    pub nabla_ppp: Derivation<T>,
}

impl<T: Scalar> AcspCurve<T> {
    pub fn new(jet: &GraphJet<T>) -> Result<Self, InvariantError> {
        let a = AspCurve::new(jet)?;
        let d = a.nabla_pp.apply(&a.i4_pp)?;
        let r = inv_or(&a.i4_pp, "I4''")?;
        let rd = inv_or(&d, "N''(I4'')")?;
        Ok(AcspCurve { i5: d.square() * &r.powi(3), nabla_ppp: a.nabla_pp.scale(&(a.i4_pp.clone() * &rd)) })
    }

    pub fn invariants(&self) -> Vec<(&'static str, Series<T>)> {
        vec![("I5", self.i5.clone())]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::ExprAst;
    use crate::group::{Flavor, Geometry, GroupElement};
    use crate::jet::MultiJet;
    use crate::Rational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn function_jet(src: &str, at: [f64; 2], order: usize) -> GraphJet<f64> {
        let ast = ExprAst::parse_with_vars(src, &["x", "y"]).unwrap();
        let v: Vec<MultiJet<f64>> = (0..2).map(|i| MultiJet::variable(2, order, i, at[i])).collect();
        GraphJet::new(at.to_vec(), vec![ast.eval(&v).unwrap()])
    }

    fn curve_jet<T: Scalar>(src: &str, x0: T, order: usize) -> GraphJet<T> {
        let ast = ExprAst::parse_with_vars(src, &["x"]).unwrap();
        let x = MultiJet::variable(1, order, 0, x0.clone());
        GraphJet::new(vec![x0], vec![ast.eval(&[x]).unwrap()])
    }

    fn homothety(lam: f64) -> GroupElement {
        let mut g = GroupElement::identity(Flavor::CSp, 1);
        g.scale = lam;
        g
    }

    const GENERIC: &str = "x^3*y - 2*x*y^2 + y^3/3 + exp(x/2) + x^2 - y + 0.4*x^4";

    #[test]
    fn csp_function_syzygies_and_reductions() {
        for at in [[0.7, -0.4], [1.3, 0.5], [-0.6, 1.1]] {
            let c = CspFunctions::new(&function_jet(GENERIC, at, 5)).unwrap();
            for r in c.syzygies().unwrap().iter().chain(&c.reductions().unwrap()) {
                assert!(r.normalized() < 1e-9, "{} at {at:?}: {}", r.name, r.normalized());
            }
        }
    }

    #[test]
    fn csp_functions_have_weight_zero() {
        let jet = function_jet(GENERIC, [0.7, -0.4], 3);
        let base = CspFunctions::new(&jet).unwrap().invariants();
        for lam in [2.0, 0.5, 3.0] {
            let moved = homothety(lam).pushforward(&jet, Geometry::Function { n: 1 }).unwrap();
            let got = CspFunctions::new(&moved).unwrap().invariants();
            for ((name, a), (_, b)) in base.iter().zip(&got) {
                assert!((a.value() - b.value()).abs() <= 1e-10 * a.value().abs().max(1.0), "{name}");
            }
        }
        // the underlying Sp invariants carry weights 0, -2, -4
        let f = FunctionJet::new(&jet).unwrap();
        let g = FunctionJet::new(&homothety(2.0).pushforward(&jet, Geometry::Function { n: 1 }).unwrap()).unwrap();
        for (w, a, b) in [(0, f.i2a(), g.i2a()), (-2, f.i2b(), g.i2b()), (-4, f.i2c(), g.i2c())] {
            assert!((b.value() - 2f64.powi(w) * a.value()).abs() < 1e-10 * a.value().abs().max(1.0));
        }
    }

    #[test]
    fn asp_function_identities() {
        for at in [[0.7, -0.4], [1.3, 0.5]] {
            let a = AspFunctions::new(&function_jet(GENERIC, at, 5)).unwrap();
            for r in a.syzygies().unwrap().iter().chain(&a.reductions().unwrap()) {
                assert!(r.normalized() < 1e-9, "{} at {at:?}: {}", r.name, r.normalized());
            }
        }
        let p = AspFunctions::new(&function_jet("x^2+y^2", [0.3, -1.2], 2)).unwrap();
        assert_eq!(p.i2_p.value(), 4.0);
    }

    #[test]
    fn exact_syzygies_on_polynomials() {
        let ast = ExprAst::parse_with_vars("x^3*y - 2*x*y^2 + y^3 + x^2 - y + x^4 + 3*x", &["x", "y"]).unwrap();
        let at = [Rational::new(2, 3), Rational::new(-1, 2)];
        let v: Vec<MultiJet<Rational>> = (0..2).map(|i| MultiJet::variable(2, 5, i, at[i].clone())).collect();
        let jet = GraphJet::new(at.to_vec(), vec![ast.eval(&v).unwrap()]);
        let c = CspFunctions::new(&jet).unwrap();
        let a = AspFunctions::new(&jet).unwrap();
        for r in c.syzygies().unwrap().iter().chain(&c.reductions().unwrap()).chain(&a.syzygies().unwrap()).chain(&a.reductions().unwrap()) {
            assert!(r.value().is_zero(), "{}", r.name);
        }
    }

    #[test]
    fn parabola_conformal_invariant() {
        for x0 in [Rational::one(), Rational::new(3, 2), Rational::new(-2, 5)] {
            let c = CspCurve::new(&curve_jet("x^2", x0, 4)).unwrap();
            assert_eq!(*c.i3_p.constant_term(), Rational::from_i64(18));
        }
    }

    #[test]
    fn affine_curve_values() {
        let p = AspCurve::new(&curve_jet("x^2", 0.8, 5)).unwrap();
        assert_eq!(p.i4_pp.value(), 0.0);
        for x0 in [0.0, 0.5, -1.0] {
            let e = AspCurve::new(&curve_jet("exp(x)", x0, 5)).unwrap();
            assert!((e.i4_pp.value() + 8.0 * (-2.0 * x0).exp()).abs() < 1e-10);
            assert!((e.i4_prime().unwrap().value() + 2.0 * (-2.0 * x0 / 3.0).exp()).abs() < 1e-10);
            assert!((e.i4_prime().unwrap().value().powi(3) - e.i4_pp.value()).abs() < 1e-10);
        }
    }

    #[test]
    fn extended_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let fjet = function_jet(GENERIC, [0.7, -0.4], 4);
        let cjet = curve_jet("exp(x) + x^3/5 + sin(x)", 0.3, 6);
        let fvals = |j: &GraphJet<f64>| -> Vec<f64> {
            let mut v: Vec<f64> = CspFunctions::new(j).unwrap().invariants().iter().map(|(_, s)| s.value()).collect();
            v.extend(AcspFunctions::new(j).unwrap().invariants().iter().map(|(_, s)| s.value()));
            v
        };
        let cvals = |j: &GraphJet<f64>| -> Vec<f64> {
            [CspCurve::new(j).unwrap().i3_p.value(), AcspCurve::new(j).unwrap().i5.value()].to_vec()
        };
        let (f0, c0) = (fvals(&fjet), cvals(&cjet));
        let asp_f: Vec<f64> = AspFunctions::new(&fjet).unwrap().invariants().iter().map(|(_, s)| s.value()).collect();
        let asp_c = AspCurve::new(&cjet).unwrap().i4_pp.value();
        for _ in 0..10 {
            // CSp and ACSp share these generators
            let g = GroupElement::random(Flavor::ACSp, 1, &mut rng);
            let gc = GroupElement::random(Flavor::CSp, 1, &mut rng);
            let mf = g.pushforward(&fjet, Geometry::Function { n: 1 }).unwrap();
            let mc = gc.pushforward(&cjet, Geometry::Curve { n: 1 }).unwrap();
            let (f1, c1) = (fvals(&gc.pushforward(&fjet, Geometry::Function { n: 1 }).unwrap()), cvals(&mc));
            for (a, b) in f0.iter().zip(&f1).take(4).chain(c0.iter().zip(&c1)) {
                assert!((a - b).abs() <= 1e-8 * a.abs().max(1.0), "{a} vs {b}");
            }
            let f2 = fvals(&mf);
            for (a, b) in f0.iter().zip(&f2).skip(4) {
                assert!((a - b).abs() <= 1e-8 * a.abs().max(1.0), "{a} vs {b}");
            }
            let ga = GroupElement::random(Flavor::ASp, 1, &mut rng);
            let af: Vec<f64> = AspFunctions::new(&ga.pushforward(&fjet, Geometry::Function { n: 1 }).unwrap())
                .unwrap()
                .invariants()
                .iter()
                .map(|(_, s)| s.value())
                .collect();
            for (a, b) in asp_f.iter().zip(&af) {
                assert!((a - b).abs() <= 1e-8 * a.abs().max(1.0));
            }
            let ac = AspCurve::new(&ga.pushforward(&cjet, Geometry::Curve { n: 1 }).unwrap()).unwrap().i4_pp.value();
            assert!((asp_c - ac).abs() <= 1e-8 * asp_c.abs().max(1.0));
            let i5 = AcspCurve::new(&g.pushforward(&cjet, Geometry::Curve { n: 1 }).unwrap()).unwrap().i5.value();
            assert!((c0[1] - i5).abs() <= 1e-8 * c0[1].abs().max(1.0));
        }
    }

    #[test]
    fn degenerate_inputs() {
        assert!(matches!(
            AcspFunctions::new(&function_jet("x", [0.5, 0.5], 3)),
            Err(InvariantError::WeightNormalizationSingular(_))
        ));
        assert!(matches!(AspCurve::new(&curve_jet("2*x + 1", 0.5, 4)), Err(InvariantError::WeightNormalizationSingular("y2"))));
    }
}
