//! Division-light linear algebra on vectors of series, used by the frame
//! constructions. Pivots are chosen by the value at the basepoint.

use super::Series;
use crate::linalg::determinant;
use crate::scalar::Scalar;

pub(crate) type Vector<T> = Vec<Series<T>>;

pub(crate) fn zero<T: Scalar>() -> Series<T> {
    Series::constant(T::zero())
}

pub(crate) fn dot<T: Scalar>(a: &[Series<T>], b: &[Series<T>]) -> Series<T> {
    a.iter().zip(b).fold(zero(), |acc, (x, y)| acc + x.clone() * y)
}

pub(crate) fn combo<T: Scalar>(ca: &Series<T>, a: &[Series<T>], cb: &Series<T>, b: &[Series<T>]) -> Vector<T> {
    a.iter().zip(b).map(|(x, y)| ca.clone() * x + cb.clone() * y).collect()
}

pub(crate) fn scale<T: Scalar>(c: &Series<T>, a: &[Series<T>]) -> Vector<T> {
    a.iter().map(|x| c.clone() * x).collect()
}

pub(crate) fn norm<T: Scalar>(a: &[Series<T>]) -> f64 {
    a.iter().map(|x| x.value().powi(2)).sum::<f64>().sqrt()
}

/// Basis of `{w ∈ span(basis) : ℓ(w) = 0}` from the values `c_i = ℓ(b_i)`,
/// as `c_p b_i - c_i b_p` with pivot `p` of largest `|c_p|`. `None` when
/// every `c_i` vanishes relative to `scale`.
pub(crate) fn constrain<T: Scalar>(basis: &[Vector<T>], c: &[Series<T>], scale: f64) -> Option<Vec<Vector<T>>> {
    let (p, cp) = c.iter().enumerate().max_by(|a, b| a.1.value().abs().total_cmp(&b.1.value().abs()))?;
    if !super::nonzero(cp.value(), scale) {
        return None;
    }
    Some(
        (0..basis.len())
            .filter(|&i| i != p)
            .map(|i| combo(cp, &basis[i], &(-c[i].clone()), &basis[p]))
            .collect(),
    )
}

/// Kernel of a `(d-1) × d` matrix by signed maximal minors.
pub(crate) fn cofactor_kernel<T: Scalar>(m: &[Vec<Series<T>>], d: usize) -> Vector<T> {
    (0..d)
        .map(|i| {
            let minor: Vec<Vec<Series<T>>> =
                m.iter().map(|row| row.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| v.clone()).collect()).collect();
            let det = if minor.is_empty() { Series::constant(T::one()) } else { determinant(&minor) };
            if i % 2 == 0 {
                det
            } else {
                -det
            }
        })
        .collect()
}

/// Pfaffian of an antisymmetric matrix of even size.
pub(crate) fn pfaffian<T: Scalar>(m: &[Vec<Series<T>>]) -> Series<T> {
    let d = m.len();
    if d == 0 {
        return Series::constant(T::one());
    }
    let mut acc = zero();
    for j in 1..d {
        let rest: Vec<usize> = (1..d).filter(|&k| k != j).collect();
        let sub: Vec<Vec<Series<T>>> = rest.iter().map(|&r| rest.iter().map(|&c| m[r][c].clone()).collect()).collect();
        let term = m[0][j].clone() * pfaffian(&sub);
        acc = if j % 2 == 1 { acc + term } else { acc - term };
    }
    acc
}

/// Kernel of an antisymmetric matrix of odd size and full rank `d-1`:
/// `k_i = (-1)^i Pf(M without row and column i)`.
pub(crate) fn skew_kernel<T: Scalar>(m: &[Vec<Series<T>>]) -> Vector<T> {
    let d = m.len();
    (0..d)
        .map(|i| {
            let rest: Vec<usize> = (0..d).filter(|&k| k != i).collect();
            let sub: Vec<Vec<Series<T>>> = rest.iter().map(|&r| rest.iter().map(|&c| m[r][c].clone()).collect()).collect();
            let pf = pfaffian(&sub);
            if i % 2 == 0 {
                pf
            } else {
                -pf
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: f64) -> Series<f64> {
        Series::constant(v)
    }

    #[test]
    fn skew_kernel_of_three_by_three() {
        let (a, b, cc) = (2.0, -1.0, 3.0);
        let m = vec![vec![c(0.0), c(a), c(b)], vec![c(-a), c(0.0), c(cc)], vec![c(-b), c(-cc), c(0.0)]];
        let k = skew_kernel(&m);
        for row in &m {
            assert_eq!(dot(row, &k).value(), 0.0);
        }
        assert_eq!(k.iter().map(|x| x.value()).collect::<Vec<_>>(), vec![3.0, 1.0, 2.0]);
    }

    #[test]
    fn pfaffian_squares_to_determinant() {
        let vals = [[0.0, 1.5, -2.0, 0.5], [0.0, 0.0, 3.0, 1.0], [0.0, 0.0, 0.0, -4.0], [0.0; 4]];
        let m: Vec<Vec<Series<f64>>> = (0..4)
            .map(|i| (0..4).map(|j| c(if i < j { vals[i][j] } else { -vals[j][i] })).collect())
            .collect();
        let pf = pfaffian(&m).value();
        let det = determinant(&m).value();
        assert!((pf * pf - det).abs() < 1e-12);
    }

    #[test]
    fn cofactor_kernel_annihilates_rows() {
        let m = vec![vec![c(1.0), c(2.0), c(-1.0)], vec![c(0.5), c(-3.0), c(4.0)]];
        let k = cofactor_kernel(&m, 3);
        for row in &m {
            assert!(dot(row, &k).value().abs() < 1e-12);
        }
    }
}
