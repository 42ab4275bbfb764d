//! Sparse multivariate polynomials with float coefficients.
//!
//! Only used for Hamiltonians and vector-field coefficients, which have
//! degree at most 2 and small dyadic coefficients, so float storage is exact.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u8>, f64>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Poly {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: f64) -> Poly {
        Poly::monomial(nvars, &vec![0; nvars], c)
    }

    pub fn var(nvars: usize, i: usize) -> Poly {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Poly::monomial(nvars, &e, 1.0)
    }

    pub fn monomial(nvars: usize, exps: &[u8], c: f64) -> Poly {
        let mut p = Poly::zero(nvars);
        if c != 0.0 {
            p.terms.insert(exps.to_vec(), c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u8>, &f64)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: f64) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for (e, v) in &self.terms {
            p.push(e, v * c);
        }
        p
    }

    fn push(&mut self, e: &[u8], c: f64) {
        let slot = self.terms.entry(e.to_vec()).or_insert(0.0);
        *slot += c;
        if *slot == 0.0 {
            self.terms.remove(e);
        }
    }

    pub fn deriv(&self, i: usize) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for (e, v) in &self.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                p.push(&f, v * e[i] as f64);
            }
        }
        p
    }

    /// Total degree with per-variable weights.
    pub fn weighted_degree(&self, weights: &[u32]) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().zip(weights).map(|(&a, &w)| a as u32 * w).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.weighted_degree(&vec![1; self.nvars])
    }

    pub fn eval<S: Scalar>(&self, x: &[S]) -> S {
        let mut acc = S::zero();
        for (e, c) in &self.terms {
            let mut m = S::from_f64(*c);
            for (i, &a) in e.iter().enumerate() {
                if a > 0 {
                    m = m * x[i].powi(a as i32);
                }
            }
            acc = acc + m;
        }
        acc
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut p = self.clone();
        for (e, v) in &rhs.terms {
            p.push(e, *v);
        }
        p
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &rhs.scale(-1.0)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(-1.0)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for (a, u) in &self.terms {
            for (b, v) in &rhs.terms {
                let e: Vec<u8> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                p.push(&e, u * v);
            }
        }
        p
    }
}
