//! Invariants on the contact space `R^3(x,y,z)`, `α = dz - y dx`, under the
//! lifted `Sp(2)` (`G`) and its conformal extension (`Ĝ`, scaling
//! `(x,y,z) ↦ (λx, λy, λ²z)`). The base invariant of `G` is `I0 = 2z - xy`.

use std::sync::OnceLock;

use super::{apply_terms, recip_or, Residual, Series};
use crate::error::InvariantError;
use crate::expr::ExprAst;
use crate::jet::{Derivation, GraphJet, JetData};
use crate::scalar::Scalar;

fn c<T: Scalar>(k: i64) -> Series<T> {
    Series::constant(T::from_i64(k))
}

fn derivation_identity<T: Scalar>(name: &'static str, parts: &[(Series<T>, &Derivation<T>)]) -> Vec<Residual<T>> {
    let dim = parts[0].1.coeffs.len();
    (0..dim).map(|i| Residual::from_series(name, parts.iter().map(|(k, d)| k.clone() * &d.coeffs[i]).collect())).collect()
}

/// Curves `y = y(x), z = z(x)`.
#[derive(Clone, Debug)]
pub struct ContactCurve<T: Scalar> {
    d: JetData<Series<T>>,
}

impl<T: Scalar> ContactCurve<T> {
    pub fn new(jet: &GraphJet<T>) -> Result<Self, InvariantError> {
        if jet.nindep() != 1 || jet.ndeps() != 2 {
            return Err(InvariantError::Unsupported("contact curves are graphs y(x), z(x)".into()));
        }
        Ok(ContactCurve { d: jet.along() })
    }

    fn y(&self, k: u8) -> &Series<T> {
        self.d.u(0, &[k])
    }

    fn z(&self, k: u8) -> &Series<T> {
        self.d.u(1, &[k])
    }

    fn x(&self) -> &Series<T> {
        &self.d.x[0]
    }

    /// `x y_1 - y`.
    pub fn delta(&self) -> Series<T> {
        self.x().clone() * self.y(1) - self.y(0)
    }

    fn delta_recip(&self) -> Result<Series<T>, InvariantError> {
        let scale = (self.x().value() * self.y(1).value()).abs() + self.y(0).value().abs();
        recip_or(&self.delta(), scale, InvariantError::DegenerateJet("x y_1 - y = 0"))
    }

    pub fn i0(&self) -> Series<T> {
        c::<T>(2) * self.z(0) - self.x().clone() * self.y(0)
    }

    /// `∇ = (x y_1 - y)^{-1} D_x`.
    pub fn nabla(&self) -> Result<Derivation<T>, InvariantError> {
        Ok(Derivation::new(vec![self.delta_recip()?]))
    }

    /// `G`-generators `I0, I2a = y_2/(x y_1 - y)³` and the derived `I1 = ∇I0`, `I2b = ∇I1`.
    pub fn g_invariants(&self) -> Result<Vec<(&'static str, Series<T>)>, InvariantError> {
        let nabla = self.nabla()?;
        let i0 = self.i0();
        let i1 = nabla.apply(&i0)?;
        let i2b = nabla.apply(&i1)?;
        let i2a = self.y(2).clone() * &self.delta_recip()?.powi(3);
        Ok(vec![("I0", i0), ("I1", i1), ("I2a", i2a), ("I2b", i2b)])
    }

    fn i0_recip(&self) -> Result<Series<T>, InvariantError> {
        let scale = 2.0 * self.z(0).value().abs() + (self.x().value() * self.y(0).value()).abs();
        recip_or(&self.i0(), scale, InvariantError::OnZeroLevelSet)
    }

    /// `Ĝ`-invariants in their simplified form:
    /// `I1 = (z_1 - y)/(x y_1 - y)`, `I2a' = (2z - xy)² y_2/(x y_1 - y)³`,
    /// `I2b' = (2z - xy)(x(y - z_1) y_2 - (x y_1 - y)(y_1 - z_2))/(x y_1 - y)³`.
    pub fn ghat_invariants(&self) -> Result<Vec<(&'static str, Series<T>)>, InvariantError> {
        self.i0_recip()?;
        let r = self.delta_recip()?;
        let (i0, d) = (self.i0(), self.delta());
        let i1 = (self.z(1).clone() - self.y(0)) * &r;
        let r3 = r.powi(3);
        let i2a = i0.square() * self.y(2) * &r3;
        let inner = self.x().clone() * &(self.y(0).clone() - self.z(1)) * self.y(2) - d * &(self.y(1).clone() - self.z(2));
        let i2b = i0 * &inner * &r3;
        Ok(vec![("I1", i1), ("I2a'", i2a), ("I2b'", i2b)])
    }

    /// `∇' = (2z - xy)/(x y_1 - y) D_x`.
    pub fn nabla_prime(&self) -> Result<Derivation<T>, InvariantError> {
        self.i0_recip()?;
        Ok(Derivation::new(vec![self.i0() * &self.delta_recip()?]))
    }

    /// The simplified `Ĝ` formulas against the raw weight-0 combinations:
    /// `I1 = (∇I0 + 1)/2`, `I2a' = I0² I2a`, `I2b' = ½ I0 ∇(∇I0)`.
    pub fn simplification_residuals(&self) -> Result<Vec<Residual<T>>, InvariantError> {
        let g = self.g_invariants()?;
        let h = self.ghat_invariants()?;
        let half = Series::constant(T::from_ratio(1, 2));
        let i0 = &g[0].1;
        Ok(vec![
            Residual::from_series("I1", vec![h[0].1.clone(), -(half.clone() * &g[1].1), -half.clone()]),
            Residual::from_series("I2a'", vec![h[1].1.clone(), -(i0.square() * &g[2].1)]),
            Residual::from_series("I2b'", vec![h[2].1.clone(), -(half * i0 * &g[3].1)]),
        ])
    }
}

/// Surfaces `z = z(x, y)`.
#[derive(Clone, Debug)]
pub struct ContactSurface<T: Scalar> {
    d: JetData<Series<T>>,
}

impl<T: Scalar> ContactSurface<T> {
    pub fn new(jet: &GraphJet<T>) -> Result<Self, InvariantError> {
        if jet.nindep() != 2 || jet.ndeps() != 1 {
            return Err(InvariantError::Unsupported("contact surfaces are graphs z(x, y)".into()));
        }
        Ok(ContactSurface { d: jet.along() })
    }

    fn z(&self, a: [u8; 2]) -> &Series<T> {
        self.d.u(0, &a)
    }

    fn xy(&self) -> (&Series<T>, &Series<T>) {
        (&self.d.x[0], &self.d.x[1])
    }

    pub fn i0(&self) -> Series<T> {
        let (x, y) = self.xy();
        c::<T>(2) * self.z([0, 0]) - x.clone() * y
    }

    /// `∇1 = x D_x + y D_y`.
    pub fn nabla1(&self) -> Derivation<T> {
        Derivation::new(self.d.x.clone())
    }

    /// `∇2 = (x - 2 z_y) D_x + (2 z_x - y) D_y`.
    pub fn nabla2(&self) -> Derivation<T> {
        let (x, y) = self.xy();
        Derivation::new(vec![x.clone() - &(c::<T>(2) * self.z([0, 1])), c::<T>(2) * self.z([1, 0]) - y])
    }

    /// `I1 = x z_x + y z_y - xy`.
    pub fn i1(&self) -> Series<T> {
        let (x, y) = self.xy();
        x.clone() * self.z([1, 0]) + y.clone() * self.z([0, 1]) - x.clone() * y
    }

    /// `I2a = x² z_xx + 2xy z_xy + y² z_yy - xy`.
    pub fn i2a(&self) -> Series<T> {
        let (x, y) = self.xy();
        x.square() * self.z([2, 0]) + c::<T>(2) * x * y * self.z([1, 1]) + y.square() * self.z([0, 2]) - x.clone() * y
    }

    /// `I2b = x(z_y - x) z_xx - y z_x z_yy + (y(z_y - x) - x z_x) z_xy + x z_x`.
    pub fn i2b(&self) -> Series<T> {
        let (x, y) = self.xy();
        let (zx, zy) = (self.z([1, 0]), self.z([0, 1]));
        let zyx = zy.clone() - x;
        x.clone() * &zyx * self.z([2, 0]) - y.clone() * zx * self.z([0, 2])
            + (y.clone() * &zyx - x.clone() * zx) * self.z([1, 1])
            + x.clone() * zx
    }

    /// `I2c = z_x² z_yy - 2 z_x (z_y - x) z_xy + (z_y - x)² z_xx + z_x (z_y - x)`.
    pub fn i2c(&self) -> Series<T> {
        let (x, _) = self.xy();
        let (zx, zy) = (self.z([1, 0]), self.z([0, 1]));
        let zyx = zy.clone() - x;
        zx.square() * self.z([0, 2]) - c::<T>(2) * zx * &zyx * self.z([1, 1]) + zyx.square() * self.z([2, 0]) + zx.clone() * &zyx
    }

    fn i0_recip(&self) -> Result<Series<T>, InvariantError> {
        let (x, y) = self.xy();
        let scale = 2.0 * self.z([0, 0]).value().abs() + (x.value() * y.value()).abs();
        recip_or(&self.i0(), scale, InvariantError::OnZeroLevelSet)
    }

    /// `I1', I2a', I2b', I2c' = I0^{-1} (I1, I2a, I2b, I2c)`.
    pub fn ghat_invariants(&self) -> Result<Vec<(&'static str, Series<T>)>, InvariantError> {
        let r = self.i0_recip()?;
        Ok(vec![
            ("I1'", self.i1() * &r),
            ("I2a'", self.i2a() * &r),
            ("I2b'", self.i2b() * &r),
            ("I2c'", self.i2c() * &r),
        ])
    }

    /// `I2a' = ∇1(I1') + 2 I1'² - I1'` and `I2b' = -½∇1(I1') - ½∇2(I1') - I1'² + I1'`.
    pub fn reductions(&self) -> Result<Vec<Residual<T>>, InvariantError> {
        let inv = self.ghat_invariants()?;
        let p = &inv[0].1;
        let a = self.nabla1().apply(p)?;
        let b = self.nabla2().apply(p)?;
        let half = Series::constant(T::from_ratio(1, 2));
        Ok(vec![
            Residual::from_series("I2a'", vec![inv[1].1.clone(), -a.clone(), -(c::<T>(2) * &p.square()), p.clone()]),
            Residual::from_series(
                "I2b'",
                vec![inv[2].1.clone(), half.clone() * &a, half * &b, p.square(), -p.clone()],
            ),
        ])
    }

    /// `R1` (commutator, per component) and `R2`.
    pub fn syzygies(&self) -> Result<Vec<Residual<T>>, InvariantError> {
        let inv = self.ghat_invariants()?;
        let (p, q) = (&inv[0].1, &inv[3].1);
        let (n1, n2) = (self.nabla1(), self.nabla2());
        let rp = recip_or(p, 1.0, InvariantError::DegenerateJet("I1' = 0"))?;
        let a = n1.apply(p)?;
        let b = n2.apply(p)?;
        let br = n1.bracket(&n2)?;
        let one = Series::constant(T::one());
        let pm1 = p.clone() - &one;
        let mut out = derivation_identity(
            "R1",
            &[
                (one.clone(), &br),
                (b.clone() * &rp, &n1),
                (-(a.clone() * &rp + c::<T>(2) * &pm1), &n2),
            ],
        );
        let terms = vec![
            n1.apply(&a)?,
            c::<T>(2) * &n1.apply(&b)?,
            n2.apply(&b)?,
            -(c::<T>(4) * &n1.apply(q)?),
            -(c::<T>(3) * &rp * &a.square()),
            -(c::<T>(6) * &rp * &a * &b),
            c::<T>(12) * &rp * &a * q,
            -(c::<T>(3) * &rp * &b.square()),
            -(c::<T>(6) * &pm1 * &a),
            -(c::<T>(8) * &pm1 * &b),
            c::<T>(16) * &pm1 * q,
            -(c::<T>(4) * p * &pm1 * &(c::<T>(2) * p - &one)),
        ];
        out.push(Residual::from_series("R2", terms));
        Ok(out)
    }

    /// Values of the plane-function invariants of `u = 2z - xy` against the
    /// contact ones: `I0`, `½ I1_u = I1`, and `∇2_u = ∇2`.
    pub fn plane_substitution_residuals(&self) -> Result<Vec<Residual<T>>, InvariantError> {
        let (x, y) = self.xy();
        let u_series = c::<T>(2) * self.z([0, 0]) - x.clone() * y;
        // u as a graph over (x, y), re-expanded in the offsets
        let f = super::functions::FunctionJet::new(&plane_graph(&self.d, u_series))?;
        let half = Series::constant(T::from_ratio(1, 2));
        let mut out = vec![
            Residual::from_series("I0", vec![f.i0(), -self.i0()]),
            Residual::from_series("I1", vec![half * &f.i1(), -self.i1()]),
        ];
        let (a, b) = (f.nabla2(), self.nabla2());
        for i in 0..2 {
            out.push(Residual::from_series("N2", vec![a.coeffs[i].clone(), -b.coeffs[i].clone()]));
        }
        Ok(out)
    }
}

/// A graph over the same base whose dependent series is `u`.
fn plane_graph<T: Scalar>(d: &JetData<Series<T>>, u: Series<T>) -> GraphJet<T> {
    let base = d.x.iter().map(|s| s.constant_term().clone()).collect();
    GraphJet::new(base, vec![u])
}

const VARS: [&str; 12] = ["x", "y", "z", "u1", "u2", "u3", "u11", "u12", "u13", "u22", "u23", "u33"];

const TABLE: [&str; 6] = [
    // I2a
    "y^2*u22 + y*(4*z*u23 + 2*x*u12 + u2) + 4*z^2*u33 + z*(4*x*u13 + 4*u3) + x*(x*u11 + u1)",
    // I2b
    "(x*y - 2*z)*(y*u23 + 2*z*u33 + x*u13 + 2*u3)",
    // I2c
    "-(x*y - 2*z)*(x^2*(u1*u13 - u3*u11) + x*(u1*(y*u23 + 2*z*u33 + u3 + u12) - y*u3*u12 - 2*z*u3*u13 - u2*u11) \
     + u1*(y*u22 + 2*z*u23) - u2*(y*u12 + 2*z*u13))",
    // I2d
    "(x*y - 2*z)*(-2*u3 + (x*y - 2*z)*u33)",
    // I2e
    "-(x*y - 2*z)*(x^2*y*(u1*u33 - u3*u13) + x*(y*(u1*u23 - u3^2 - u2*u13) + u1*(-2*z*u33 - u3) + 2*z*u3*u13) \
     - y*u2*u3 - 2*z*(u1*u23 - u2*u13))",
    // I2f
    "x^4*y^2*u1^2*u33 - 2*x^4*y^2*u1*u3*u13 + x^4*y^2*u3^2*u11 + 2*x^3*y^2*u1^2*u23 \
     - x^3*y^2*u1*u3^2 - 2*x^3*y^2*u1*u3*u12 - 2*x^3*y^2*u1*u2*u13 + 2*x^3*y^2*u2*u3*u11 \
     - 4*x^3*y*z*u1^2*u33 + 8*x^3*y*z*u1*u3*u13 - 4*x^3*y*z*u3^2*u11 + x^2*y^2*u1^2*u22 \
     - x^2*y^2*u1*u2*u3 - 2*x^2*y^2*u1*u2*u12 + x^2*y^2*u2^2*u11 - 8*x^2*y*z*u1^2*u23 \
     + 4*x^2*y*z*u1*u3^2 + 8*x^2*y*z*u1*u3*u12 + 8*x^2*y*z*u1*u2*u13 - 8*x^2*y*z*u2*u3*u11 \
     + 4*x^2*z^2*u1^2*u33 - 8*x^2*z^2*u1*u3*u13 + 4*x^2*z^2*u3^2*u11 - 4*x*y*z*u1^2*u22 \
     + 4*x*y*z*u1*u2*u3 + 8*x*y*z*u1*u2*u12 - 4*x*y*z*u2^2*u11 + 8*x*z^2*u1^2*u23 \
     - 4*x*z^2*u1*u3^2 - 8*x*z^2*u1*u3*u12 - 8*x*z^2*u1*u2*u13 + 8*x*z^2*u2*u3*u11 \
     + 4*z^2*u1^2*u22 - 4*z^2*u1*u2*u3 - 8*z^2*u1*u2*u12 + 4*z^2*u2^2*u11",
];

fn table() -> &'static [ExprAst] {
    static CELL: OnceLock<Vec<ExprAst>> = OnceLock::new();
    CELL.get_or_init(|| TABLE.iter().map(|s| ExprAst::parse_with_vars(s, &VARS).expect("second-order table parses")).collect())
}

/// Functions `u = u(x, y, z)` under `Ĝ`.
#[derive(Clone, Debug)]
pub struct ContactFunction<T: Scalar> {
    d: JetData<Series<T>>,
}

impl<T: Scalar> ContactFunction<T> {
    pub fn new(jet: &GraphJet<T>) -> Result<Self, InvariantError> {
        if jet.nindep() != 3 || jet.ndeps() != 1 {
            return Err(InvariantError::Unsupported("contact functions are u(x, y, z)".into()));
        }
        Ok(ContactFunction { d: jet.along() })
    }

    fn u1(&self, i: usize) -> &Series<T> {
        self.d.d1(0, i)
    }

    /// `xy - 2z = -I0` of the underlying contact space.
    fn m(&self) -> Series<T> {
        let x = &self.d.x;
        x[0].clone() * &x[1] - &(c::<T>(2) * &x[2])
    }

    fn check_m(&self) -> Result<(), InvariantError> {
        let x = &self.d.x;
        let scale = (x[0].value() * x[1].value()).abs() + 2.0 * x[2].value().abs();
        recip_or(&self.m(), scale, InvariantError::DegenerateJet("xy - 2z = 0")).map(|_| ())
    }

    pub fn i0(&self) -> Series<T> {
        self.d.u(0, &[0, 0, 0]).clone()
    }

    /// `I1a = (xy - 2z) u_3`.
    pub fn i1a(&self) -> Series<T> {
        self.m() * self.u1(2)
    }

    /// `I1b = x u_1 + y (u_2 + x u_3)`.
    pub fn i1b(&self) -> Series<T> {
        let x = &self.d.x;
        x[0].clone() * self.u1(0) + x[1].clone() * &(self.u1(1).clone() + x[0].clone() * self.u1(2))
    }

    /// `∇1 = x D_x + y D_y + 2z D_z`, `∇2 = (xy - 2z) D_z`,
    /// `∇3 = (xy - 2z)((x u_3 + u_2) D_x - u_1 D_y - x u_1 D_z)`.
    pub fn derivations(&self) -> Result<[Derivation<T>; 3], InvariantError> {
        self.check_m()?;
        let x = &self.d.x;
        let m = self.m();
        let zero = Series::constant(T::zero());
        let (u1, u2, u3) = (self.u1(0), self.u1(1), self.u1(2));
        Ok([
            Derivation::new(vec![x[0].clone(), x[1].clone(), c::<T>(2) * &x[2]]),
            Derivation::new(vec![zero.clone(), zero, m.clone()]),
            Derivation::new(vec![
                m.clone() * &(x[0].clone() * u3 + u2),
                -(m.clone() * u1),
                -(m * &x[0] * u1),
            ]),
        ])
    }

    /// `I2a..I2f` from the second-order table.
    pub fn second_order(&self) -> Result<Vec<(&'static str, Series<T>)>, InvariantError> {
        self.check_m()?;
        let x = &self.d.x;
        let h = |i: usize, j: usize| self.d.d2(0, i, j).clone();
        let args = vec![
            x[0].clone(),
            x[1].clone(),
            x[2].clone(),
            self.u1(0).clone(),
            self.u1(1).clone(),
            self.u1(2).clone(),
            h(0, 0),
            h(0, 1),
            h(0, 2),
            h(1, 1),
            h(1, 2),
            h(2, 2),
        ];
        let names = ["I2a", "I2b", "I2c", "I2d", "I2e", "I2f"];
        names
            .iter()
            .zip(table())
            .map(|(n, e)| Ok((*n, e.eval(&args).map_err(|e| InvariantError::Unsupported(e.to_string()))?)))
            .collect()
    }

    pub fn invariants(&self) -> Result<Vec<(&'static str, Series<T>)>, InvariantError> {
        let mut out = vec![("I0", self.i0()), ("I1a", self.i1a()), ("I1b", self.i1b())];
        out.extend(self.second_order()?);
        Ok(out)
    }

    /// `I1a = ∇2(I0)`, `I1b = (∇1 + ∇2)(I0)`.
    pub fn reductions(&self) -> Result<Vec<Residual<T>>, InvariantError> {
        let [n1, n2, _] = self.derivations()?;
        let i0 = self.i0();
        let mut a = apply_terms(&n2, &i0)?;
        a.push(-self.i1a());
        let mut b = apply_terms(&n1.add(&n2), &i0)?;
        b.push(-self.i1b());
        Ok(vec![Residual::from_series("I1a=N2(I0)", a), Residual::from_series("I1b=(N1+N2)(I0)", b)])
    }

    /// `R1..R7`; the commutator identities `R2..R4` give one residual per component.
    pub fn syzygies(&self) -> Result<Vec<Residual<T>>, InvariantError> {
        let [n1, n2, n3] = self.derivations()?;
        // The relations close on ∇1(I0) and ∇2(I0), which play the parts of
        // I1a, I1b below; their sum is I1b. The I2f·I1b term of R7 enters with +4.
        let (i1a, i1b) = (self.i1b() - &self.i1a(), self.i1a());
        let s = i1a.clone() + &i1b;
        let scale = i1a.value().abs() + i1b.value().abs();
        recip_or(&s, scale, InvariantError::DegenerateJet("I1b = 0"))?;
        let so = self.second_order()?;
        let [a, b, cc, d, e, f] = [0, 1, 2, 3, 4, 5].map(|i| so[i].1.clone());
        let one = Series::constant(T::one());
        let mut out = vec![Residual::from_series("R1", apply_terms(&n3, &self.i0())?)];
        out.extend(derivation_identity("R2", &[(one.clone(), &n1.bracket(&n2)?)]));
        out.extend(derivation_identity(
            "R3",
            &[(s.clone(), &n1.bracket(&n3)?), (cc.clone(), &n1), (cc.clone(), &n2), (-(a.clone() + &b), &n3)],
        ));
        out.extend(derivation_identity(
            "R4",
            &[
                (s.clone(), &n2.bracket(&n3)?),
                (-(i1b.clone() * &s - &e), &n1),
                (i1a.clone() * &s + &e, &n2),
                (-(b.clone() + &d - &(c::<T>(2) * &s)), &n3),
            ],
        ));
        out.push(Residual::from_series(
            "R5",
            vec![
                s.clone() * &n3.apply(&b)?,
                -(s.clone() * &n1.apply(&e)?),
                -(cc.clone() * &b),
                e.clone() * &b,
                a.clone() * &e,
                -(cc.clone() * &d),
            ],
        ));
        out.push(Residual::from_series(
            "R6",
            vec![
                s.clone() * &n3.apply(&cc)?,
                -(s.clone() * &n1.apply(&f)?),
                -(c::<T>(3) * &cc.square()),
                -(i1a.square() * &cc),
                -(i1a.clone() * &i1b * &cc),
                -(c::<T>(3) * &e * &cc),
                c::<T>(3) * &f * &a,
                c::<T>(3) * &f * &b,
            ],
        ));
        out.push(Residual::from_series(
            "R7",
            vec![
                -(s.clone() * &n3.apply(&e)?),
                s.clone() * &n2.apply(&f)?,
                -i1b.powi(4),
                -(c::<T>(4) * &i1a * &i1b.powi(3)),
                -(c::<T>(5) * &i1a.square() * &i1b.square()),
                -(c::<T>(2) * &cc * &i1b.square()),
                -(c::<T>(2) * &i1a.powi(3) * &i1b),
                -(c::<T>(2) * &cc * &i1a * &i1b),
                c::<T>(3) * &e * &i1a * &i1b,
                c::<T>(4) * &f * &i1b,
                c::<T>(3) * &e * &i1a.square(),
                c::<T>(4) * &f * &i1a,
                c::<T>(3) * &e.square(),
                c::<T>(3) * &cc * &e,
                -(c::<T>(3) * &f * &b),
                -(c::<T>(3) * &f * &d),
            ],
        ));
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{Flavor, Geometry, GroupElement};
    use crate::jet::MultiJet;
    use crate::Rational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn graph<T: Scalar>(srcs: &[&str], vars: &[&str], at: &[T], order: usize) -> GraphJet<T> {
        let v: Vec<MultiJet<T>> = (0..at.len()).map(|i| MultiJet::variable(at.len(), order, i, at[i].clone())).collect();
        let deps = srcs.iter().map(|s| ExprAst::parse_with_vars(s, vars).unwrap().eval(&v).unwrap()).collect();
        GraphJet::new(at.to_vec(), deps)
    }

    fn vals(v: &[(&'static str, Series<f64>)]) -> Vec<f64> {
        v.iter().map(|(_, s)| s.value()).collect()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) {
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol * x.abs().max(1.0), "{x} vs {y}");
        }
    }

    #[test]
    fn curve_values() {
        let j = ContactCurve::new(&graph(&["x^2", "x^3"], &["x"], &[Rational::one()], 3)).unwrap();
        let h = j.ghat_invariants().unwrap();
        assert_eq!(*h[0].1.constant_term(), Rational::from_i64(2));
        assert_eq!(*h[1].1.constant_term(), Rational::from_i64(2));
        for r in j.simplification_residuals().unwrap() {
            assert!(r.value().is_zero(), "{}", r.name);
        }
    }

    #[test]
    fn curve_invariance_and_weights() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let jet = graph(&["sin(x) + x^2", "exp(x/3) - x"], &["x"], &[0.7], 4);
        let j = ContactCurve::new(&jet).unwrap();
        let (g0, h0) = (vals(&j.g_invariants().unwrap()), vals(&j.ghat_invariants().unwrap()));
        for _ in 0..10 {
            let g = GroupElement::random(Flavor::Contact, 1, &mut rng);
            close(&g0, &vals(&ContactCurve::new(&g.pushforward(&jet, Geometry::ContactCurve).unwrap()).unwrap().g_invariants().unwrap()), 1e-8);
            let g = GroupElement::random(Flavor::ContactCSp, 1, &mut rng);
            close(&h0, &vals(&ContactCurve::new(&g.pushforward(&jet, Geometry::ContactCurve).unwrap()).unwrap().ghat_invariants().unwrap()), 1e-8);
        }
        let mut g = GroupElement::identity(Flavor::ContactCSp, 1);
        g.scale = 2.0;
        let moved = ContactCurve::new(&g.pushforward(&jet, Geometry::ContactCurve).unwrap()).unwrap().g_invariants().unwrap();
        for ((_, a), ((_, b), w)) in j.g_invariants().unwrap().iter().zip(moved.iter().zip([2, 0, -4, -2])) {
            assert!((b.value() - 2f64.powi(w) * a.value()).abs() < 1e-10 * a.value().abs().max(1.0));
        }
    }

    #[test]
    fn surface_values_and_identities() {
        let j = ContactSurface::new(&graph(&["x*y"], &["x", "y"], &[Rational::new(3, 2), Rational::new(-1, 3)], 2)).unwrap();
        assert_eq!(*j.ghat_invariants().unwrap()[0].1.constant_term(), Rational::one());
        let jet = graph(&["x^2*y/3 + y^3 - x + 0.5*x*y + 2 + x^3*y/7"], &["x", "y"], &[Rational::new(1, 2), Rational::new(2, 3)], 4);
        let j = ContactSurface::new(&jet).unwrap();
        for r in j.reductions().unwrap().iter().chain(&j.syzygies().unwrap()).chain(&j.plane_substitution_residuals().unwrap()) {
            assert!(r.value().is_zero(), "{}: {:?}", r.name, r.terms);
        }
    }

    #[test]
    fn surface_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let jet = graph(&["exp(x/2)*y + x^2 - y^2/3 + 1.5"], &["x", "y"], &[0.4, -0.8], 3);
        let h0 = vals(&ContactSurface::new(&jet).unwrap().ghat_invariants().unwrap());
        for _ in 0..10 {
            let g = GroupElement::random(Flavor::ContactCSp, 1, &mut rng);
            let h = ContactSurface::new(&g.pushforward(&jet, Geometry::ContactSurface).unwrap()).unwrap().ghat_invariants().unwrap();
            close(&h0, &vals(&h), 1e-8);
        }
    }

    #[test]
    fn function_values() {
        let j = ContactFunction::new(&graph(&["z"], &["x", "y", "z"], &[1.0; 3], 2)).unwrap();
        assert_eq!(j.i1a().value(), -1.0);
        assert_eq!(j.i1b().value(), 1.0);
    }

    #[test]
    fn function_syzygies_exact() {
        let at = [Rational::new(1, 2), Rational::new(-2, 3), Rational::new(3, 4)];
        let jet = graph(&["x^2*z + y^3 - x*y*z + z^2/2 + x + 2*y^2*x + z^4"], &["x", "y", "z"], &at, 4);
        let j = ContactFunction::new(&jet).unwrap();
        for r in j.syzygies().unwrap().iter().chain(&j.reductions().unwrap()) {
            assert!(r.value().is_zero(), "{}: {}", r.name, r.value());
        }
    }

    #[test]
    fn function_table_is_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let jet = graph(&["sin(x) + y*z + exp(z/2)*y^2 - x*z^2"], &["x", "y", "z"], &[0.3, 0.9, -0.6], 3);
        let j = ContactFunction::new(&jet).unwrap();
        let v0 = vals(&j.invariants().unwrap());
        for r in j.syzygies().unwrap() {
            assert!(r.normalized() < 1e-9, "{}: {}", r.name, r.normalized());
        }
        for _ in 0..10 {
            let g = GroupElement::random(Flavor::ContactCSp, 1, &mut rng);
            let v = vals(&ContactFunction::new(&g.pushforward(&jet, Geometry::ContactFunction).unwrap()).unwrap().invariants().unwrap());
            close(&v0, &v, 1e-8);
        }
    }

    #[test]
    fn second_order_table_counts() {
        // ∇_i(I1a), ∇_i(I1b) span 5 directions of the second-order fiber; I2a..I2e stay inside, I2f is new
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        let jet = GraphJet::random(3, 1, 2, &mut rng);
        let derived = |g: &GraphJet<MultiJet<f64>>| -> Result<Vec<Series<MultiJet<f64>>>, InvariantError> {
            let j = ContactFunction::new(g)?;
            let ds = j.derivations()?;
            let mut out = Vec::new();
            for d in &ds {
                out.push(d.apply(&j.i1a())?);
                out.push(d.apply(&j.i1b())?);
            }
            Ok(out)
        };
        let rank = |extra: usize| {
            let rows = crate::inv::fiber_jacobian(&jet, 2, |g| {
                let mut v = derived(g)?;
                let so = ContactFunction::new(g)?.second_order()?;
                v.extend(so.into_iter().take(extra).map(|(_, s)| s));
                Ok(v)
            })
            .unwrap();
            crate::linalg::numerical_rank(&rows, 1e-9)
        };
        assert_eq!(rank(0), 5);
        assert_eq!(rank(5), 5);
        assert_eq!(rank(6), 6);
    }
}
