//! Small dense linear algebra over any [`Scalar`].
//!
//! Gaussian elimination pivots on `|value()|`, so the same routines work on
//! floats, exact rationals, and jets (where the pivot is chosen by the
//! constant term and every other coefficient rides along).

use nalgebra::DMatrix;

use crate::scalar::Scalar;

pub type Mat<T> = Vec<Vec<T>>;

pub fn determinant<T: Scalar>(a: &Mat<T>) -> T {
    let n = a.len();
    let mut m = a.clone();
    let mut det = T::one();
    for col in 0..n {
        let Some(piv) = pivot_row(&m, col, col) else {
            return T::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det = det * &p;
        let inv = p.recip();
        for r in col + 1..n {
            let f = m[r][col].clone() * &inv;
            if f.is_zero() {
                continue;
            }
            for c in col..n {
                let v = m[col][c].clone() * &f;
                m[r][c] = m[r][c].clone() - v;
            }
        }
    }
    det
}

fn pivot_row<T: Scalar>(m: &Mat<T>, col: usize, from: usize) -> Option<usize> {
    let mut best = None;
    let mut bv = 0.0;
    for (r, row) in m.iter().enumerate().skip(from) {
        let v = row[col].value().abs();
        if v > bv {
            bv = v;
            best = Some(r);
        }
    }
    best
}

/// Solve `A X = B` for square `A`; `None` when a pivot vanishes.
pub fn solve_many<T: Scalar>(a: &Mat<T>, b: &Mat<T>) -> Option<Mat<T>> {
    let n = a.len();
    let k = b.first().map_or(0, |r| r.len());
    let mut m: Mat<T> = a.iter().zip(b).map(|(ra, rb)| ra.iter().chain(rb).cloned().collect()).collect();
    for col in 0..n {
        let piv = pivot_row(&m, col, col)?;
        m.swap(piv, col);
        let inv = m[col][col].recip();
        for c in col..n + k {
            m[col][c] = m[col][c].clone() * &inv;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = m[r][col].clone();
            if f.is_zero() {
                continue;
            }
            for c in col..n + k {
                let v = m[col][c].clone() * &f;
                m[r][c] = m[r][c].clone() - v;
            }
        }
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn solve<T: Scalar>(a: &Mat<T>, b: &[T]) -> Option<Vec<T>> {
    let bm: Mat<T> = b.iter().map(|v| vec![v.clone()]).collect();
    solve_many(a, &bm).map(|x| x.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

pub fn inverse<T: Scalar>(a: &Mat<T>) -> Option<Mat<T>> {
    let n = a.len();
    let id: Mat<T> = (0..n).map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect()).collect();
    solve_many(a, &id)
}

/// Basis of `{x : A x = 0}` by reduced row echelon form.
///
/// Pivots with `|value| <= tol · max|A|` count as zero. For exact scalars pass
/// `tol = 0`.
pub fn nullspace<T: Scalar>(a: &Mat<T>, ncols: usize, tol: f64) -> Vec<Vec<T>> {
    let mut m = a.clone();
    let scale = m.iter().flatten().map(|v| v.value().abs()).fold(0.0, f64::max);
    let thresh = tol * scale;
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row >= m.len() {
            break;
        }
        let Some(piv) = pivot_row(&m, col, row) else { continue };
        if m[piv][col].value().abs() <= thresh {
            continue;
        }
        m.swap(piv, row);
        let inv = m[row][col].recip();
        for c in 0..ncols {
            m[row][c] = m[row][c].clone() * &inv;
        }
        for r in 0..m.len() {
            if r == row {
                continue;
            }
            let f = m[r][col].clone();
            if f.is_zero() {
                continue;
            }
            for c in 0..ncols {
                let v = m[row][c].clone() * &f;
                m[r][c] = m[r][c].clone() - v;
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![T::zero(); ncols];
            v[fc] = T::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][fc].clone();
            }
            v
        })
        .collect()
}

pub fn mat_vec<T: Scalar>(a: &Mat<T>, v: &[T]) -> Vec<T> {
    a.iter()
        .map(|row| {
            let mut acc = T::zero();
            for (x, y) in row.iter().zip(v) {
                acc.mul_acc(x, y);
            }
            acc
        })
        .collect()
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    let mut acc = T::zero();
    for (x, y) in a.iter().zip(b) {
        acc.mul_acc(x, y);
    }
    acc
}

/// Singular values of a float matrix given by rows.
pub fn singular_values(rows: &[Vec<f64>]) -> Vec<f64> {
    if rows.is_empty() || rows[0].is_empty() {
        return vec![];
    }
    let m = DMatrix::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j]);
    let mut s: Vec<f64> = m.svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

/// Numerical rank: singular values above `rel · σ_max`.
pub fn numerical_rank(rows: &[Vec<f64>], rel: f64) -> usize {
    let s = singular_values(rows);
    let Some(&smax) = s.first() else { return 0 };
    if smax == 0.0 {
        return 0;
    }
    s.iter().filter(|&&v| v > rel * smax).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn r(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    #[test]
    fn exact_determinant_and_inverse() {
        let a = vec![vec![r(2), r(1)], vec![r(1), r(1)]];
        assert_eq!(determinant(&a), r(1));
        let inv = inverse(&a).unwrap();
        assert_eq!(inv, vec![vec![r(1), r(-1)], vec![r(-1), r(2)]]);
    }

    #[test]
    fn nullspace_of_rank_one() {
        let a = vec![vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0]];
        let ns = nullspace(&a, 3, 1e-12);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(mat_vec(&a, &v).iter().all(|x| x.abs() < 1e-12));
        }
    }

    #[test]
    fn svd_rank() {
        let rows = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![1.0, 1.0, 0.0]];
        assert_eq!(numerical_rank(&rows, 1e-9), 2);
    }
}
