//! Dense graded storage of multi-indices.
//!
//! Multi-indices with `|α| ≤ kmax` are enumerated degree by degree, so the
//! coefficients of a jet of order `k` are always a prefix of those of any
//! higher-order jet in the same number of variables.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

pub(crate) const NONE: u32 = u32::MAX;

#[derive(Debug)]
pub struct Layout {
    nvars: usize,
    kmax: usize,
    indices: Vec<Vec<u8>>,
    degree: Vec<u8>,
    /// number of multi-indices with `|α| <= k`
    dim_upto: Vec<usize>,
    /// `(i, j, k)` with `α_i + α_j = α_k`, sorted by `|α_k|`
    pairs: Vec<(u32, u32, u32)>,
    pairs_upto: Vec<usize>,
    /// `up[v][idx]` is the index of `α + e_v`, or NONE past `kmax`
    up: Vec<Vec<u32>>,
    lookup: HashMap<Vec<u8>, u32>,
}

fn indices_of_degree(nvars: usize, d: usize, out: &mut Vec<Vec<u8>>) {
    fn rec(pos: usize, left: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        let n = cur.len();
        if pos == n - 1 {
            cur[pos] = left as u8;
            out.push(cur.clone());
            return;
        }
        for a in (0..=left).rev() {
            cur[pos] = a as u8;
            rec(pos + 1, left - a, cur, out);
        }
        cur[pos] = 0;
    }
    let mut cur = vec![0u8; nvars];
    rec(0, d, &mut cur, out);
}

impl Layout {
    fn build(nvars: usize, kmax: usize) -> Layout {
        assert!(nvars > 0, "a jet needs at least one variable");
        let mut indices = Vec::new();
        let mut dim_upto = Vec::with_capacity(kmax + 1);
        for d in 0..=kmax {
            indices_of_degree(nvars, d, &mut indices);
            dim_upto.push(indices.len());
        }
        let degree: Vec<u8> = indices
            .iter()
            .map(|a| a.iter().map(|&x| x as usize).sum::<usize>() as u8)
            .collect();
        let lookup: HashMap<Vec<u8>, u32> =
            indices.iter().enumerate().map(|(i, a)| (a.clone(), i as u32)).collect();

        let mut pairs = Vec::new();
        let mut sum = vec![0u8; nvars];
        for (i, a) in indices.iter().enumerate() {
            for (j, b) in indices.iter().enumerate() {
                if degree[i] as usize + degree[j] as usize > kmax {
                    continue;
                }
                for v in 0..nvars {
                    sum[v] = a[v] + b[v];
                }
                pairs.push((i as u32, j as u32, lookup[&sum]));
            }
        }
        pairs.sort_by_key(|&(_, _, k)| degree[k as usize]);
        let mut pairs_upto = vec![0usize; kmax + 1];
        for &(_, _, k) in &pairs {
            pairs_upto[degree[k as usize] as usize] += 1;
        }
        for d in 1..=kmax {
            pairs_upto[d] += pairs_upto[d - 1];
        }

        let mut up = vec![vec![NONE; indices.len()]; nvars];
        for (idx, a) in indices.iter().enumerate() {
            for (v, row) in up.iter_mut().enumerate() {
                let mut b = a.clone();
                b[v] += 1;
                if let Some(&j) = lookup.get(&b) {
                    row[idx] = j;
                }
            }
        }

        Layout { nvars, kmax, indices, degree, dim_upto, pairs, pairs_upto, up, lookup }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn kmax(&self) -> usize {
        self.kmax
    }

    pub fn dim(&self, order: usize) -> usize {
        self.dim_upto[order]
    }

    pub fn index(&self, alpha: &[u8]) -> Option<usize> {
        self.lookup.get(alpha).map(|&i| i as usize)
    }

    pub fn multi_index(&self, idx: usize) -> &[u8] {
        &self.indices[idx]
    }

    pub fn degree(&self, idx: usize) -> usize {
        self.degree[idx] as usize
    }

    pub(crate) fn pairs(&self, order: usize) -> &[(u32, u32, u32)] {
        &self.pairs[..self.pairs_upto[order]]
    }

    pub(crate) fn up(&self, var: usize, idx: usize) -> u32 {
        self.up[var][idx]
    }
}

/// Shared layout for `nvars` variables covering at least `order`.
pub fn layout(nvars: usize, order: usize) -> Arc<Layout> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Layout>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("layout cache poisoned");
    if let Some(l) = guard.get(&nvars) {
        if l.kmax >= order {
            return l.clone();
        }
    }
    let built = Arc::new(Layout::build(nvars, order));
    guard.insert(nvars, built.clone());
    built
}

/// `C(n + k, k)`: number of multi-indices in `n` variables of degree `<= k`.
pub fn jet_dim(nvars: usize, order: usize) -> usize {
    let mut r: u128 = 1;
    for i in 1..=order as u128 {
        r = r * (nvars as u128 + i) / i;
    }
    r as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_prefix_and_counts() {
        let l = layout(3, 4);
        for k in 0..=4 {
            assert_eq!(l.dim(k), jet_dim(3, k));
        }
        assert_eq!(l.multi_index(0), &[0, 0, 0]);
        for idx in 1..l.dim(4) {
            assert!(l.degree(idx) >= l.degree(idx - 1));
        }
    }

    #[test]
    fn up_links_are_consistent() {
        let l = layout(2, 3);
        let i = l.index(&[1, 1]).unwrap();
        assert_eq!(l.multi_index(l.up(0, i) as usize), &[2, 1]);
        // the cache may hand out a deeper layout; links stop at its own kmax
        let top = l.index(&[0, l.kmax() as u8]).unwrap();
        assert_eq!(l.up(1, top), NONE);
    }
}
