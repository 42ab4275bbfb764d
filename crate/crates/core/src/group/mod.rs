//! Linear symplectic groups, their Lie algebras, and their action on jets.
//!
//! Coordinates on `V = R^{2n}` are ordered `(x_1..x_n, y_1..y_n)` with
//! `ω = Σ dx_i ∧ dy_i`; the contact space `W = R^{2n+1}` appends `z` and
//! carries `α = dz - Σ y_i dx_i`.

mod algebra;
mod element;
mod prolong;

use std::fmt;
use std::str::FromStr;

pub use algebra::{hamiltonian_field, lagrange_bracket, poisson_bracket, AlgebraElement};
pub use element::GroupElement;
pub use prolong::{
    expected_curve_orbit_dimension, infinitesimal_invariance, jet_gradient, jet_space_dim, orbit_dimension,
    orbit_rank_at, prolonged_field, RANK_TOLERANCE,
};

use crate::error::GroupError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    Sp,
    CSp,
    ASp,
    ACSp,
    /// `Sp(2n)` lifted to the contact space
    Contact,
    /// `CSp(2n)` lifted to the contact space
    ContactCSp,
}

impl Flavor {
    pub fn name(self) -> &'static str {
        match self {
            Flavor::Sp => "sp",
            Flavor::CSp => "csp",
            Flavor::ASp => "asp",
            Flavor::ACSp => "acsp",
            Flavor::Contact => "contact",
            Flavor::ContactCSp => "contact-csp",
        }
    }

    pub fn is_contact(self) -> bool {
        matches!(self, Flavor::Contact | Flavor::ContactCSp)
    }

    pub fn has_scaling(self) -> bool {
        matches!(self, Flavor::CSp | Flavor::ACSp | Flavor::ContactCSp)
    }

    pub fn has_translations(self) -> bool {
        matches!(self, Flavor::ASp | Flavor::ACSp)
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Flavor {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "sp" => Flavor::Sp,
            "csp" => Flavor::CSp,
            "asp" => Flavor::ASp,
            "acsp" => Flavor::ACSp,
            "contact" => Flavor::Contact,
            "contact-csp" => Flavor::ContactCSp,
            other => return Err(format!("unknown flavor `{other}` (expected sp, csp, asp, acsp, contact, contact-csp)")),
        })
    }
}

/// Kind of object whose jets are acted on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Geometry {
    /// `u = u(x, y)` on `R^{2n}`
    Function { n: usize },
    /// curve in `R^{2n}`, graphed over `x_1`
    Curve { n: usize },
    /// hypersurface in `R^{2n}`, graphed over the first `2n-1` coordinates
    Hypersurface { n: usize },
    /// surface `x = x(t,s), y = y(t,s)` in `R^4(t,s,x,y)`
    Surface,
    /// curve `y = y(x), z = z(x)` in the contact space `R^3`
    ContactCurve,
    /// surface `z = z(x,y)` in the contact space `R^3`
    ContactSurface,
    /// `u = u(x,y,z)` on the contact space `R^3`
    ContactFunction,
}

impl Geometry {
    /// Half-dimension of the underlying symplectic space.
    pub fn n(self) -> usize {
        match self {
            Geometry::Function { n } | Geometry::Curve { n } | Geometry::Hypersurface { n } => n,
            Geometry::Surface => 2,
            _ => 1,
        }
    }

    pub fn is_contact(self) -> bool {
        matches!(self, Geometry::ContactCurve | Geometry::ContactSurface | Geometry::ContactFunction)
    }

    /// Coordinates moved by the group: `2n`, or `2n+1` on the contact space.
    pub fn acted_dim(self) -> usize {
        2 * self.n() + usize::from(self.is_contact())
    }

    /// True when the last coordinate is a function value the group leaves alone.
    pub fn is_function(self) -> bool {
        matches!(self, Geometry::Function { .. } | Geometry::ContactFunction)
    }

    pub fn ambient_dim(self) -> usize {
        self.acted_dim() + usize::from(self.is_function())
    }

    pub fn nindep(self) -> usize {
        match self {
            Geometry::Function { n } => 2 * n,
            Geometry::Curve { .. } | Geometry::ContactCurve => 1,
            Geometry::Hypersurface { n } => 2 * n - 1,
            Geometry::Surface | Geometry::ContactSurface => 2,
            Geometry::ContactFunction => 3,
        }
    }

    pub fn ndeps(self) -> usize {
        self.ambient_dim() - self.nindep()
    }

    /// Ambient coordinate names in canonical order.
    pub fn coordinate_names(self) -> Vec<String> {
        match self {
            Geometry::Curve { n: 2 } => ["t", "x", "y", "z"].map(String::from).to_vec(),
            Geometry::Hypersurface { n: 2 } => ["x", "y", "z", "u"].map(String::from).to_vec(),
            Geometry::Surface => ["t", "s", "x", "y"].map(String::from).to_vec(),
            Geometry::ContactCurve | Geometry::ContactSurface => ["x", "y", "z"].map(String::from).to_vec(),
            Geometry::ContactFunction => ["x", "y", "z", "u"].map(String::from).to_vec(),
            Geometry::Function { n: 1 } => ["x", "y", "u"].map(String::from).to_vec(),
            Geometry::Curve { n: 1 } => ["x", "y"].map(String::from).to_vec(),
            Geometry::Hypersurface { n: 1 } => ["x", "y"].map(String::from).to_vec(),
            g => {
                let n = g.n();
                let mut v: Vec<String> = (1..=n).map(|i| format!("x{i}")).chain((1..=n).map(|i| format!("y{i}"))).collect();
                if g.is_function() {
                    v.push("u".into());
                }
                v
            }
        }
    }

    pub fn name(self) -> String {
        match self {
            Geometry::Function { n } => format!("function n={n}"),
            Geometry::Curve { n } => format!("curve n={n}"),
            Geometry::Hypersurface { n } => format!("hypersurface n={n}"),
            Geometry::Surface => "surface".into(),
            Geometry::ContactCurve => "contact-curve".into(),
            Geometry::ContactSurface => "contact-surface".into(),
            Geometry::ContactFunction => "contact-function".into(),
        }
    }

    /// `kind` is `curve`, `function`, `hypersurface`, `surface`,
    /// `contact-curve`, `contact-surface` or `contact-function`; a trailing
    /// `s` is accepted. `n` defaults to 1 (2 for hypersurfaces) and is
    /// rejected where the geometry fixes it.
    pub fn parse(kind: &str, n: Option<usize>) -> Result<Geometry, String> {
        let k = kind.trim().to_ascii_lowercase();
        let k = k.strip_suffix('s').unwrap_or(&k);
        let fixed = |g: Geometry| match n {
            Some(m) if m != g.n() => Err(format!("{} has n = {}, got n = {m}", g.name(), g.n())),
            _ => Ok(g),
        };
        let g = match k {
            "curve" => Geometry::Curve { n: n.unwrap_or(1) },
            "function" => Geometry::Function { n: n.unwrap_or(1) },
            "hypersurface" => Geometry::Hypersurface { n: n.unwrap_or(2) },
            "surface" => return fixed(Geometry::Surface),
            "contact-curve" => return fixed(Geometry::ContactCurve),
            "contact-surface" => return fixed(Geometry::ContactSurface),
            "contact-function" => return fixed(Geometry::ContactFunction),
            _ => {
                return Err(format!(
                    "unknown geometry `{kind}` (expected curve, function, hypersurface, surface, contact-curve, contact-surface, contact-function)"
                ))
            }
        };
        if g.n() == 0 {
            return Err("n must be at least 1".into());
        }
        Ok(g)
    }

    /// Reject flavors that do not act on this geometry.
    pub fn check_flavor(self, flavor: Flavor) -> Result<(), GroupError> {
        if self.is_contact() != flavor.is_contact() {
            return Err(GroupError::Unsupported(format!("flavor {flavor} does not act on {}", self.name())));
        }
        Ok(())
    }
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// `R^{2n}` with its canonical symplectic form.
#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticSpace {
    pub n: usize,
    pub names: Vec<String>,
}

impl SymplecticSpace {
    pub fn new(n: usize) -> Self {
        assert!(n > 0);
        let names = (1..=n).map(|i| format!("x{i}")).chain((1..=n).map(|i| format!("y{i}"))).collect();
        SymplecticSpace { n, names }
    }

    pub fn with_names(n: usize, names: &[&str]) -> Self {
        assert_eq!(names.len(), 2 * n);
        SymplecticSpace { n, names: names.iter().map(|s| s.to_string()).collect() }
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    /// Matrix `J` with `ω(a, b) = aᵀ J b`.
    pub fn omega(&self) -> Vec<Vec<f64>> {
        omega_matrix(self.n)
    }
}

pub fn omega_matrix(n: usize) -> Vec<Vec<f64>> {
    let mut j = vec![vec![0.0; 2 * n]; 2 * n];
    for i in 0..n {
        j[i][n + i] = 1.0;
        j[n + i][i] = -1.0;
    }
    j
}

/// `ω(a, b) = Σ a_{x_i} b_{y_i} - a_{y_i} b_{x_i}` on vectors of length `2n`.
pub fn omega<S: crate::scalar::Scalar>(a: &[S], b: &[S]) -> S {
    let n = a.len() / 2;
    let mut acc = S::zero();
    for i in 0..n {
        acc.mul_acc(&a[i], &b[n + i]);
        acc = acc - a[n + i].clone() * &b[i];
    }
    acc
}

/// Contact space `R^{2n+1}` with `α = dz - Σ y_i dx_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct ContactSpace {
    pub n: usize,
}

impl ContactSpace {
    /// `I_0 = 2z - Σ x_i y_i`, invariant under the lifted linear action.
    pub fn base_invariant<S: crate::scalar::Scalar>(&self, p: &[S]) -> S {
        let n = self.n;
        let mut acc = p[2 * n].clone() * &S::from_i64(2);
        for i in 0..n {
            acc = acc - p[i].clone() * &p[n + i];
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometry_names_parse() {
        assert_eq!(Geometry::parse("curves", Some(2)), Ok(Geometry::Curve { n: 2 }));
        assert_eq!(Geometry::parse("contact-functions", None), Ok(Geometry::ContactFunction));
        assert_eq!(Geometry::parse("hypersurface", None), Ok(Geometry::Hypersurface { n: 2 }));
        assert!(Geometry::parse("surface", Some(3)).is_err());
        assert!(Geometry::parse("curve", Some(0)).is_err());
        assert!(Geometry::parse("blob", None).unwrap_err().contains("blob"));
    }

    #[test]
    fn omega_is_canonical() {
        let s = SymplecticSpace::new(2);
        let j = s.omega();
        for i in 0..4 {
            for k in 0..4 {
                assert_eq!(j[i][k], -j[k][i]);
            }
        }
        let e = |i: usize| (0..4).map(|k| if k == i { 1.0 } else { 0.0 }).collect::<Vec<f64>>();
        assert_eq!(omega(&e(0), &e(2)), 1.0);
        assert_eq!(omega(&e(1), &e(3)), 1.0);
        assert_eq!(omega(&e(0), &e(1)), 0.0);
    }

    #[test]
    fn geometry_shapes() {
        assert_eq!(Geometry::Curve { n: 2 }.ndeps(), 3);
        assert_eq!(Geometry::Hypersurface { n: 2 }.nindep(), 3);
        assert_eq!(Geometry::ContactFunction.ambient_dim(), 4);
        assert_eq!(Geometry::Function { n: 1 }.coordinate_names(), vec!["x", "y", "u"]);
        assert!(Geometry::Surface.check_flavor(Flavor::Contact).is_err());
        assert_eq!("contact-csp".parse::<Flavor>().unwrap(), Flavor::ContactCSp);
    }
}
