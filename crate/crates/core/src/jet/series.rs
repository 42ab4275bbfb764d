//! Composition and inversion of vector-valued multivariate series.

use super::layout::layout;
use super::multi::MultiJet;
use crate::error::JetError;
use crate::linalg;
use crate::scalar::Scalar;

/// Evaluate each of `outer` (series in `q` variables) at `inner` (`q` series in
/// `p` variables with vanishing constant terms).
///
/// Monomials `inner^α` are shared across all outer series.
pub fn compose_many<T: Scalar>(outer: &[MultiJet<T>], inner: &[MultiJet<T>]) -> Result<Vec<MultiJet<T>>, JetError> {
    let q = inner.len();
    for (i, o) in outer.iter().enumerate() {
        if !o.is_constant() && o.nvars() != q {
            return Err(JetError::ShapeMismatch(format!("outer series {i} has {} variables, inner has {q} series", o.nvars())));
        }
    }
    for h in inner {
        let c = h.constant_term().value();
        if c.abs() > 1e-12 {
            return Err(JetError::BasepointMismatch { inner: c, outer: 0.0 });
        }
    }
    let hs: Vec<MultiJet<T>> = inner.iter().map(|h| h.with_constant(T::zero())).collect();
    let korder = outer
        .iter()
        .filter(|o| !o.is_constant())
        .map(|o| o.order())
        .chain(hs.iter().filter(|h| !h.is_constant()).map(|h| h.order()))
        .min();
    let Some(k) = korder else {
        return Ok(outer.to_vec());
    };
    let l = layout(q, k);
    let d = l.dim(k);
    let mut monos: Vec<MultiJet<T>> = Vec::with_capacity(d);
    monos.push(MultiJet::constant(T::one()));
    for idx in 1..d {
        let alpha = l.multi_index(idx);
        let v = alpha.iter().position(|&a| a > 0).unwrap();
        let mut parent = alpha.to_vec();
        parent[v] -= 1;
        let pi = l.index(&parent).unwrap();
        let m = monos[pi].clone() * &hs[v];
        monos.push(m.truncate(k));
    }
    let out = outer
        .iter()
        .map(|o| {
            if o.is_constant() {
                return o.clone();
            }
            let mut acc = MultiJet::constant(T::zero());
            for (idx, c) in o.coeffs().iter().enumerate().take(d) {
                if c.is_zero() {
                    continue;
                }
                acc = acc + monos[idx].scale(c);
            }
            acc.truncate(k)
        })
        .collect();
    Ok(out)
}

/// Local inverse of the map `t ↦ s(t) - s(0)` as series with zero constant terms.
pub fn invert_series<T: Scalar>(s: &[MultiJet<T>]) -> Result<Vec<MultiJet<T>>, JetError> {
    let p = s.len();
    if p == 0 {
        return Ok(vec![]);
    }
    let k = s.iter().map(|x| x.order()).min().unwrap();
    for x in s {
        if x.is_constant() || x.nvars() != p {
            return Err(JetError::ShapeMismatch(format!("expected {p} series in {p} variables")));
        }
    }
    let mut lin = vec![vec![T::zero(); p]; p];
    for (i, row) in lin.iter_mut().enumerate() {
        for (j, e) in row.iter_mut().enumerate() {
            let mut a = vec![0u8; p];
            a[j] = 1;
            *e = s[i].coeff(&a);
        }
    }
    let det = linalg::determinant(&lin);
    let scale: f64 = lin
        .iter()
        .map(|r| r.iter().map(|v| v.value() * v.value()).sum::<f64>().sqrt())
        .product();
    if !(det.value().abs() > 1e-12 * scale) {
        return Err(JetError::SingularLinearPart { det: det.value() });
    }
    let linv = linalg::inverse(&lin).ok_or(JetError::SingularLinearPart { det: det.value() })?;

    // nonlinear remainder N(t) = s(t) - s(0) - L t
    let nonlin: Vec<MultiJet<T>> = s
        .iter()
        .map(|x| {
            let mut r = x.with_constant(T::zero());
            for j in 0..p {
                let mut a = vec![0u8; p];
                a[j] = 1;
                let idx = r.layout().index(&a).unwrap();
                r.coeffs_mut()[idx] = T::zero();
            }
            r
        })
        .collect();
    let xs: Vec<MultiJet<T>> = (0..p).map(|j| MultiJet::variable(p, k, j, T::zero())).collect();
    let apply_linv = |v: &[MultiJet<T>]| -> Vec<MultiJet<T>> {
        (0..p)
            .map(|i| {
                let mut acc = MultiJet::zeros(p, k);
                for j in 0..p {
                    acc = acc + v[j].scale(&linv[i][j]);
                }
                acc
            })
            .collect()
    };
    // fixed point t = L^{-1}(x - N(t)); each pass fixes one more order
    let mut t = apply_linv(&xs);
    for _ in 1..k {
        let n = compose_many(&nonlin, &t)?;
        let rhs: Vec<MultiJet<T>> = xs.iter().zip(&n).map(|(x, ni)| x.clone() - ni).collect();
        t = apply_linv(&rhs);
    }
    Ok(t)
}
