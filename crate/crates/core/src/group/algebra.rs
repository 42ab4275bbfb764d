use super::Flavor;
use crate::error::GroupError;
use crate::poly::Poly;
use crate::scalar::Scalar;

/// Affine vector field on `V` or `W`, optionally with its generating Hamiltonian.
///
/// `field[c]` is the coefficient of `∂_c`; coordinates as in [`super`].
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement {
    pub hamiltonian: Option<Poly>,
    pub field: Vec<Poly>,
}

/// `X_H` for a Hamiltonian of (weighted) degree at most 2.
///
/// Symplectic: `X_H = Σ H_{y_i} ∂_{x_i} - H_{x_i} ∂_{y_i}` on `2n` variables.
/// Contact: `X_H = (H - Σ y_i H_{y_i}) ∂_z + Σ (H_{x_i} + y_i H_z) ∂_{y_i} - H_{y_i} ∂_{x_i}`
/// on `2n+1` variables, with weights `w(x)=w(y)=1`, `w(z)=2`.
pub fn hamiltonian_field(h: &Poly, n: usize, contact: bool) -> Result<AlgebraElement, GroupError> {
    let nv = 2 * n + usize::from(contact);
    assert_eq!(h.nvars(), nv, "hamiltonian lives on {nv} variables");
    let mut weights = vec![1; nv];
    if contact {
        weights[2 * n] = 2;
    }
    let deg = h.weighted_degree(&weights);
    if deg > 2 {
        return Err(GroupError::DegreeError(deg));
    }
    let mut field = vec![Poly::zero(nv); nv];
    if !contact {
        for i in 0..n {
            field[i] = h.deriv(n + i);
            field[n + i] = -&h.deriv(i);
        }
    } else {
        let hz = h.deriv(2 * n);
        let mut fz = h.clone();
        for i in 0..n {
            let y = Poly::var(nv, n + i);
            let hy = h.deriv(n + i);
            field[i] = -&hy;
            field[n + i] = &h.deriv(i) + &(&y * &hz);
            fz = &fz - &(&y * &hy);
        }
        field[2 * n] = fz;
    }
    Ok(AlgebraElement { hamiltonian: Some(h.clone()), field })
}

/// `{f, g} = Σ f_{x_i} g_{y_i} - f_{y_i} g_{x_i}`.
pub fn poisson_bracket(f: &Poly, g: &Poly, n: usize) -> Poly {
    let mut acc = Poly::zero(f.nvars());
    for i in 0..n {
        acc = &acc + &(&f.deriv(i) * &g.deriv(n + i));
        acc = &acc - &(&f.deriv(n + i) * &g.deriv(i));
    }
    acc
}

/// Lagrange bracket of contact Hamiltonians on `2n+1` variables.
pub fn lagrange_bracket(f: &Poly, g: &Poly, n: usize) -> Poly {
    let z = 2 * n;
    let (fz, gz) = (f.deriv(z), g.deriv(z));
    let mut acc = &(f * &gz) - &(g * &fz);
    for i in 0..n {
        let y = Poly::var(f.nvars(), n + i);
        acc = &acc + &(&f.deriv(i) * &g.deriv(n + i));
        acc = &acc - &(&g.deriv(i) * &f.deriv(n + i));
        let t = &(&fz * &g.deriv(n + i)) - &(&gz * &f.deriv(n + i));
        acc = &acc + &(&y * &t);
    }
    acc
}

impl AlgebraElement {
    pub fn from_field(field: Vec<Poly>) -> Self {
        AlgebraElement { hamiltonian: None, field }
    }

    pub fn nvars(&self) -> usize {
        self.field.len()
    }

    /// Homothety: `ζ = Σ x_i ∂_{x_i} + y_i ∂_{y_i}` on `V`, or `X_{2z - Σ x_i y_i}` on `W`.
    pub fn homothety(n: usize, contact: bool) -> Self {
        if contact {
            let nv = 2 * n + 1;
            let mut h = Poly::var(nv, 2 * n).scale(2.0);
            for i in 0..n {
                h = &h - &(&Poly::var(nv, i) * &Poly::var(nv, n + i));
            }
            hamiltonian_field(&h, n, true).expect("weighted degree 2")
        } else {
            AlgebraElement::from_field((0..2 * n).map(|i| Poly::var(2 * n, i)).collect())
        }
    }

    /// Basis of the Lie algebra of `flavor` acting on `R^{2n}` (or `R^{2n+1}`).
    ///
    /// Quadratic Hamiltonians `x_i x_j, x_i y_j, y_i y_j` span the symplectic
    /// part; linear ones span translations.
    pub fn basis(flavor: Flavor, n: usize) -> Vec<AlgebraElement> {
        let contact = flavor.is_contact();
        let nv = 2 * n + usize::from(contact);
        let v = |i| Poly::var(nv, i);
        let mut hs = Vec::new();
        for i in 0..n {
            for j in i..n {
                hs.push(&v(i) * &v(j));
                hs.push(&v(n + i) * &v(n + j));
            }
            for j in 0..n {
                hs.push(&v(i) * &v(n + j));
            }
        }
        if flavor.has_translations() {
            for i in 0..2 * n {
                hs.push(v(i));
            }
        }
        let mut out: Vec<AlgebraElement> =
            hs.iter().map(|h| hamiltonian_field(h, n, contact).expect("degree <= 2")).collect();
        if flavor.has_scaling() {
            out.push(AlgebraElement::homothety(n, contact));
        }
        out
    }

    pub fn eval<S: Scalar>(&self, p: &[S]) -> Vec<S> {
        self.field.iter().map(|c| c.eval(p)).collect()
    }

    /// Commutator `[X, Y] = X(Y) - Y(X)` of vector fields.
    pub fn commutator(&self, other: &AlgebraElement) -> AlgebraElement {
        let nv = self.nvars();
        let field = (0..nv)
            .map(|k| {
                let mut acc = Poly::zero(nv);
                for c in 0..nv {
                    acc = &acc + &(&self.field[c] * &other.field[k].deriv(c));
                    acc = &acc - &(&other.field[c] * &self.field[k].deriv(c));
                }
                acc
            })
            .collect();
        AlgebraElement::from_field(field)
    }

    pub fn scale(&self, c: f64) -> AlgebraElement {
        AlgebraElement {
            hamiltonian: self.hamiltonian.as_ref().map(|h| h.scale(c)),
            field: self.field.iter().map(|f| f.scale(c)).collect(),
        }
    }

    /// Largest coefficient difference between the two fields.
    pub fn max_abs_diff(&self, other: &AlgebraElement) -> f64 {
        self.field.iter().zip(&other.field).map(|(a, b)| (a - b).max_abs_coeff()).fold(0.0, f64::max)
    }

    /// `(M, c)` with `X(v) = M v + c`; the field must be affine.
    pub fn affine_part(&self) -> (Vec<Vec<f64>>, Vec<f64>) {
        let nv = self.nvars();
        let mut m = vec![vec![0.0; nv]; nv];
        let mut c = vec![0.0; nv];
        for (r, f) in self.field.iter().enumerate() {
            for (e, v) in f.terms() {
                match e.iter().map(|&a| a as u32).sum::<u32>() {
                    0 => c[r] = *v,
                    1 => m[r][e.iter().position(|&a| a == 1).unwrap()] = *v,
                    _ => panic!("field is not affine"),
                }
            }
        }
        (m, c)
    }
}
