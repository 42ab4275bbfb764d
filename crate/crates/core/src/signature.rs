//! Signature clouds: a submanifold mapped through its generating invariants
//! and their derivatives, and the comparison of two such clouds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{ExprError, GroupError, SignatureError};
use crate::expr::ExprAst;
use crate::group::{Flavor, Geometry};
use crate::inv::Family;
use crate::jet::{GraphJet, MultiJet};
use crate::scalar::Scalar;

/// A submanifold given by expressions, either as a graph over the
/// independent coordinates or by a parametrization of all ambient coordinates.
#[derive(Clone, Debug)]
pub struct Submanifold {
    pub geometry: Geometry,
    /// names of the independent variables (graph) or parameters (parametric)
    pub params: Vec<String>,
    pub exprs: Vec<ExprAst>,
    pub parametric: bool,
}

impl Submanifold {
    /// Dependent coordinates as functions of the independent ones, in canonical order.
    pub fn graph(geometry: Geometry, params: &[&str], exprs: &[&str]) -> Result<Self, SignatureError> {
        Self::build(geometry, params, exprs, false, geometry.ndeps())
    }

    /// All ambient coordinates, in canonical order, as functions of `nindep` parameters.
    pub fn parametric(geometry: Geometry, params: &[&str], exprs: &[&str]) -> Result<Self, SignatureError> {
        Self::build(geometry, params, exprs, true, geometry.ambient_dim())
    }

    fn build(geometry: Geometry, params: &[&str], exprs: &[&str], parametric: bool, want: usize) -> Result<Self, SignatureError> {
        if params.len() != geometry.nindep() {
            return Err(SignatureError::Invalid(format!(
                "{geometry} needs {} independent variables, got {}",
                geometry.nindep(),
                params.len()
            )));
        }
        if exprs.len() != want {
            return Err(SignatureError::Invalid(format!("{geometry} needs {want} expressions, got {}", exprs.len())));
        }
        let exprs = exprs.iter().map(|e| ExprAst::parse_with_vars(e, params)).collect::<Result<Vec<_>, ExprError>>()?;
        Ok(Submanifold { geometry, params: params.iter().map(|s| s.to_string()).collect(), exprs, parametric })
    }

    /// Jet of order `order` at parameter value `at`.
    pub fn jet_at<T: Scalar>(&self, at: &[T], order: usize) -> Result<GraphJet<T>, SignatureError> {
        let p = at.len();
        let vars: Vec<MultiJet<T>> = (0..p).map(|i| MultiJet::variable(p, order, i, at[i].clone())).collect();
        let vals = self.exprs.iter().map(|e| e.eval(&vars)).collect::<Result<Vec<_>, _>>()?;
        if self.parametric {
            Ok(GraphJet::from_parametrization(&vals, p)?)
        } else {
            Ok(GraphJet::new(at.to_vec(), vals))
        }
    }
}

/// Where and how densely to sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplePlan {
    pub window: (f64, f64),
    pub samples: usize,
    pub seed: u64,
}

impl Default for SamplePlan {
    fn default() -> Self {
        SamplePlan { window: (0.5, 1.5), samples: 64, seed: 0 }
    }
}

impl SamplePlan {
    /// One parameter: the uniform grid with both endpoints. Several: seeded
    /// uniform points in the cube `window^p`.
    pub fn points(&self, p: usize) -> Vec<Vec<f64>> {
        let (a, b) = self.window;
        if p == 1 {
            if self.samples == 1 {
                return vec![vec![0.5 * (a + b)]];
            }
            let h = (b - a) / (self.samples - 1) as f64;
            return (0..self.samples).map(|i| vec![a + h * i as f64]).collect();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        (0..self.samples).map(|_| (0..p).map(|_| rng.gen_range(a..=b)).collect()).collect()
    }
}

/// Values at one sample, or why the sample was skipped.
#[derive(Clone, Debug)]
pub struct SampleRow {
    pub index: usize,
    pub params: Vec<f64>,
    pub basepoint: Vec<f64>,
    pub values: Result<Vec<f64>, String>,
}

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool")
}

fn finite(v: Vec<f64>) -> Result<Vec<f64>, String> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(v)
    } else {
        Err("non-finite value".into())
    }
}

/// Evaluate `f` at every sample in parallel; rows come back in sample order.
fn sample_rows<F>(sub: &Submanifold, plan: &SamplePlan, order: usize, threads: usize, f: F) -> Vec<SampleRow>
where
    F: Fn(&GraphJet<f64>) -> Result<Vec<f64>, String> + Sync,
{
    let pts = plan.points(sub.geometry.nindep());
    pool(threads.max(1)).install(|| {
        pts.into_par_iter()
            .enumerate()
            .map(|(index, params)| match sub.jet_at(&params, order) {
                Ok(jet) => SampleRow { index, params, basepoint: jet.basepoint(), values: f(&jet).and_then(finite) },
                Err(e) => SampleRow { index, params, basepoint: Vec::new(), values: Err(e.to_string()) },
            })
            .collect()
    })
}

/// Exported invariants of `family` at each sample.
pub fn tabulate(sub: &Submanifold, family: Family, plan: &SamplePlan, threads: usize) -> (Vec<String>, Vec<SampleRow>) {
    let names = invariant_names(family);
    let rows = sample_rows(sub, plan, family.order(), threads, |jet| {
        let ev = family.evaluate(jet).map_err(|e| e.to_string())?;
        Ok(ev.invariants.iter().map(|(_, s)| s.value()).collect())
    });
    (names, rows)
}

/// Names of the exported invariants, read off a generic jet.
pub fn invariant_names(family: Family) -> Vec<String> {
    let g = family.geometry;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..8 {
        let jet = GraphJet::random(g.nindep(), g.ndeps(), family.order(), &mut rng);
        if let Ok(ev) = family.evaluate(&jet) {
            return ev.invariants.into_iter().map(|(n, _)| n).collect();
        }
    }
    family.generators()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SignatureCloud {
    pub geometry: Geometry,
    pub flavor: Flavor,
    pub generators: Vec<String>,
    pub depth: usize,
    pub window: (f64, f64),
    pub samples: usize,
    pub degenerate: usize,
    /// `(sample index, Ψ)`, sorted by index; degenerate samples are absent
    pub points: Vec<(usize, Vec<f64>)>,
}

pub fn signature_of(
    sub: &Submanifold,
    family: Family,
    plan: &SamplePlan,
    depth: usize,
    threads: usize,
) -> Result<SignatureCloud, SignatureError> {
    if sub.geometry != family.geometry {
        return Err(SignatureError::Invalid(format!("submanifold is a {}, family acts on {}", sub.geometry, family.geometry)));
    }
    let rows = sample_rows(sub, plan, family.order() + depth, threads, |jet| {
        family.signature_point(jet, depth).map_err(|e| e.to_string())
    });
    let points: Vec<(usize, Vec<f64>)> = rows.into_iter().filter_map(|r| r.values.ok().map(|v| (r.index, v))).collect();
    if points.is_empty() {
        return Err(SignatureError::AllSamplesDegenerate(plan.samples));
    }
    Ok(SignatureCloud {
        geometry: family.geometry,
        flavor: family.flavor,
        generators: family.signature_names(depth),
        depth,
        window: plan.window,
        samples: plan.samples,
        degenerate: plan.samples - points.len(),
        points,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equivalent,
    Distinct,
    Inconclusive,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Equivalent => "equivalent",
            Verdict::Distinct => "distinct",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub verdict: Verdict,
    pub distance: f64,
    pub generators: Vec<String>,
}

/// Symmetric Hausdorff distance after scaling every coordinate by the joint
/// extent of both clouds (coordinates with zero extent are left unscaled).
pub fn hausdorff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let r = a.first().or(b.first()).map_or(0, |p| p.len());
    let scale: Vec<f64> = (0..r)
        .map(|k| {
            let (lo, hi) = a.iter().chain(b).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p[k]), hi.max(p[k])));
            if hi > lo {
                1.0 / (hi - lo)
            } else {
                1.0
            }
        })
        .collect();
    let dist = |p: &[f64], q: &[f64]| p.iter().zip(q).zip(&scale).map(|((x, y), s)| ((x - y) * s).powi(2)).sum::<f64>().sqrt();
    let directed = |from: &[Vec<f64>], to: &[Vec<f64>]| {
        from.iter().map(|p| to.iter().map(|q| dist(p, q)).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
    };
    directed(a, b).max(directed(b, a))
}

/// Equivalent when the distance is at most `tol`, distinct from `10·tol` on.
pub fn compare(c1: &SignatureCloud, c2: &SignatureCloud, tol: f64) -> Result<Comparison, SignatureError> {
    if c1.geometry != c2.geometry || c1.flavor != c2.flavor || c1.depth != c2.depth || c1.generators != c2.generators {
        return Err(SignatureError::IncomparableClouds(format!(
            "{} {} depth {} vs {} {} depth {}",
            c1.flavor, c1.geometry, c1.depth, c2.flavor, c2.geometry, c2.depth
        )));
    }
    let pa: Vec<Vec<f64>> = c1.points.iter().map(|(_, p)| p.clone()).collect();
    let pb: Vec<Vec<f64>> = c2.points.iter().map(|(_, p)| p.clone()).collect();
    let distance = hausdorff(&pa, &pb);
    let verdict = if distance <= tol {
        Verdict::Equivalent
    } else if distance >= 10.0 * tol {
        Verdict::Distinct
    } else {
        Verdict::Inconclusive
    };
    Ok(Comparison { verdict, distance, generators: c1.generators.clone() })
}

/// `v` with 17 significant digits; `null` in JSON and `nan` in CSV for non-finite values.
pub fn fmt_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "nan".into()
    }
}

/// Like [`fmt_float`], with `null` for non-finite values.
pub fn json_float(v: f64) -> String {
    if v.is_finite() {
        fmt_float(v)
    } else {
        "null".into()
    }
}

pub fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

impl SignatureCloud {
    /// `{geometry, flavor, generators, depth, window, samples, degenerate, points}` in that order.
    pub fn to_json(&self) -> String {
        let gens: Vec<String> = self.generators.iter().map(|g| json_string(g)).collect();
        let pts: Vec<String> = self
            .points
            .iter()
            .map(|(_, p)| format!("[{}]", p.iter().map(|v| json_float(*v)).collect::<Vec<_>>().join(",")))
            .collect();
        format!(
            "{{\"geometry\":{},\"flavor\":{},\"generators\":[{}],\"depth\":{},\"window\":[{},{}],\"samples\":{},\"degenerate\":{},\"points\":[{}]}}",
            json_string(&self.geometry.name()),
            json_string(self.flavor.name()),
            gens.join(","),
            self.depth,
            json_float(self.window.0),
            json_float(self.window.1),
            self.samples,
            self.degenerate,
            pts.join(",")
        )
    }
}

impl From<GroupError> for SignatureError {
    fn from(e: GroupError) -> Self {
        SignatureError::Invariant(e.into())
    }
}
