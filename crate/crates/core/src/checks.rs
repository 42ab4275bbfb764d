//! Test batteries over a family: invariance under random group elements,
//! syzygy and reduction residuals, and orbit-dimension counts.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::group::{expected_curve_orbit_dimension, jet_space_dim, orbit_dimension, Flavor, Geometry, GroupElement};
use crate::inv::{Family, Residual};
use crate::jet::GraphJet;
use crate::scalar::{Rational, Scalar};
use twofloat::TwoFloat;

#[derive(Clone, Debug, PartialEq)]
pub struct CheckLine {
    pub name: String,
    pub observed: String,
    pub expected: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub suite: &'static str,
    pub family: String,
    pub lines: Vec<CheckLine>,
}

impl Report {
    pub fn passed(&self) -> bool {
        !self.lines.is_empty() && self.lines.iter().all(|l| l.pass)
    }
}

/// A generic jet on which `family` evaluates, or `None` after 50 draws.
pub fn generic_jet(family: Family, order: usize, rng: &mut ChaCha8Rng) -> Option<GraphJet<f64>> {
    let g = family.geometry;
    (0..50).map(|_| GraphJet::random(g.nindep(), g.ndeps(), order, rng)).find(|j| family.evaluate(j).is_ok())
}

/// `|a - b| / max(|a|, |b|)`, zero when both vanish.
pub fn relative_error(a: f64, b: f64) -> f64 {
    let m = a.abs().max(b.abs());
    if m == 0.0 {
        0.0
    } else {
        (a - b).abs() / m
    }
}

/// First derivatives of a moved jet may reach this size; steeper images are
/// nearly vertical over the independent coordinates and are redrawn.
pub const MAX_SLOPE: f64 = 16.0;

fn steepest<T: Scalar>(jet: &GraphJet<T>) -> f64 {
    let p = jet.nindep();
    let mut worst = 0.0f64;
    for j in 0..jet.deps.len() {
        for i in 0..p {
            let mut a = vec![0u8; p];
            a[i] = 1;
            worst = worst.max(jet.derivative(j, &a).value().abs());
        }
    }
    worst
}

/// Worst relative change of every exported invariant over `elements` random
/// group elements at each of `jets` generic jets.
///
/// Elements come from [`GroupElement::random_dyadic`], so they are exactly
/// symplectic, and everything is evaluated in double-double. An element is
/// redrawn (up to ten times as many draws) when the image stops being a
/// graph, lands on a degenerate jet, or has a first derivative above
/// [`MAX_SLOPE`]: near-vertical images amplify rounding in the re-graphing by
/// the sixth power of the slope and above, which tests conditioning rather
/// than invariance.
pub fn invariance(family: Family, jets: usize, elements: usize, seed: u64, tol: f64) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = family.geometry.n();
    let mut worst: Vec<(String, f64)> = Vec::new();
    let (mut drawn, mut used, mut used_jets) = (0usize, 0usize, 0usize);
    for _ in 0..jets {
        let Some(jet) = generic_jet(family, family.order(), &mut rng) else { continue };
        let jet = jet.map(|&v| TwoFloat::from(v));
        let Ok(base) = family.evaluate(&jet) else { continue };
        used_jets += 1;
        if worst.is_empty() {
            worst = base.invariants.iter().map(|(name, _)| (name.clone(), 0.0)).collect();
        }
        let mut here = 0;
        for _ in 0..10 * elements {
            if here == elements {
                break;
            }
            drawn += 1;
            let g = GroupElement::random_dyadic(family.flavor, n, &mut rng);
            let Ok(moved) = g.pushforward(&jet, family.geometry) else { continue };
            if steepest(&moved) > MAX_SLOPE {
                continue;
            }
            let Ok(ev) = family.evaluate(&moved) else { continue };
            here += 1;
            for ((_, a), ((_, w), (_, b))) in base.invariants.iter().zip(worst.iter_mut().zip(&ev.invariants)) {
                *w = w.max(relative_error(a.value(), b.value()));
            }
        }
        used += here;
    }
    let mut lines: Vec<CheckLine> = worst
        .into_iter()
        .map(|(name, e)| CheckLine { name, observed: format!("{e:.3e}"), expected: format!("<= {tol:.0e}"), pass: e <= tol })
        .collect();
    lines.push(CheckLine {
        name: "samples".into(),
        observed: format!("{used_jets} jets, {used} elements of {drawn} drawn"),
        expected: format!("{jets} jets, {} elements", jets * elements),
        pass: used_jets == jets && used == jets * elements,
    });
    Report { suite: "invariance", family: family.name(), lines }
}

/// Jet with small-denominator rational values, so that exact arithmetic stays cheap.
fn rational_jet(jet: &GraphJet<f64>) -> GraphJet<Rational> {
    jet.map(|v| Rational::new((v * 8.0).round() as i64, 8))
}

/// Max normalized residual of every syzygy and reduction over `trials`
/// float jets, plus an exact-rational pass that must give exactly zero.
pub fn syzygy(family: Family, trials: usize, seed: u64, syz_tol: f64, red_tol: f64) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let order = family.identity_order();
    let mut worst: Vec<(String, f64, f64, bool)> = Vec::new();
    let record = |rs: Vec<Residual<f64>>, tol: f64, worst: &mut Vec<(String, f64, f64, bool)>| {
        for r in rs {
            let e = r.normalized();
            match worst.iter_mut().find(|w| w.0 == r.name) {
                Some(w) => w.1 = w.1.max(e),
                None => worst.push((r.name.to_string(), e, tol, true)),
            }
        }
    };
    let mut exact_jets = Vec::new();
    let mut used = 0;
    for _ in 0..trials {
        let Some(jet) = generic_jet(family, order, &mut rng) else { continue };
        let (Ok(s), Ok(r)) = (family.syzygies(&jet), family.reductions(&jet)) else { continue };
        used += 1;
        record(s, syz_tol, &mut worst);
        record(r, red_tol, &mut worst);
        if exact_jets.len() < 3 {
            exact_jets.push(rational_jet(&jet));
        }
    }
    let mut exact_used = 0;
    for jet in &exact_jets {
        let (Ok(s), Ok(r)) = (family.syzygies(jet), family.reductions(jet)) else { continue };
        exact_used += 1;
        for res in s.iter().chain(&r) {
            if let Some(w) = worst.iter_mut().find(|w| w.0 == res.name) {
                w.3 &= res.value().is_zero();
            }
        }
    }
    let mut lines: Vec<CheckLine> = worst
        .into_iter()
        .map(|(name, e, tol, exact)| CheckLine {
            name,
            observed: format!("{e:.3e}{}", if exact { ", exact 0" } else { ", exact != 0" }),
            expected: format!("<= {tol:.0e}, exact 0"),
            pass: e <= tol && exact,
        })
        .collect();
    lines.push(CheckLine {
        name: "samples".into(),
        observed: format!("{used} float, {exact_used} exact"),
        expected: format!("{trials} float, >= 1 exact"),
        pass: used == trials && exact_used >= 1,
    });
    Report { suite: "syzygy", family: family.name(), lines }
}

/// What the orbit-dimension tables predict for a family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expectation {
    /// orbit dimension on `J^k`
    Orbit { k: usize, dim: usize },
    /// number of new invariants of order exactly `k`
    New { k: usize, count: usize },
}

pub fn expectations(family: Family) -> Vec<Expectation> {
    use Expectation::*;
    use Flavor::*;
    use Geometry::*;
    match (family.flavor, family.geometry) {
        (Sp, Curve { n }) => (0..=2 * n + 1).map(|k| Orbit { k, dim: expected_curve_orbit_dimension(n, k) }).collect(),
        (Sp, Function { n: 1 }) => vec![New { k: 0, count: 1 }, New { k: 1, count: 1 }, New { k: 2, count: 3 }],
        (Sp, Hypersurface { n }) => {
            let g = Hypersurface { n };
            let mut v = vec![Orbit { k: 1, dim: jet_space_dim(g, 1) }, New { k: 2, count: 2 * n - 1 }];
            if n == 2 {
                v.push(New { k: 3, count: 10 });
            }
            v
        }
        (Sp, Surface) => vec![New { k: 2, count: 4 }, New { k: 3, count: 8 }],
        (ContactCSp, ContactCurve) => (0..=3).map(|k| New { k, count: [0, 1, 2, 2][k] }).collect(),
        (ContactCSp, ContactFunction) => (0..=2).map(|k| New { k, count: if k == 1 { 2 } else { (k + 1) * (k + 2) / 2 } }).collect(),
        _ => Vec::new(),
    }
}

/// Observed orbit dimensions and invariant counts against [`expectations`].
pub fn counting(family: Family, seed: u64) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = family.geometry;
    let mut orbit = |k: usize| orbit_dimension(family.flavor, g, k, &mut rng).map_err(|e| e.to_string());
    let mut lines = Vec::new();
    for e in expectations(family) {
        let line = match e {
            Expectation::Orbit { k, dim } => {
                let got = orbit(k);
                CheckLine {
                    name: format!("orbit dim J^{k}"),
                    observed: got.as_ref().map_or_else(|e| e.clone(), |d| d.to_string()),
                    expected: dim.to_string(),
                    pass: got == Ok(dim),
                }
            }
            Expectation::New { k, count } => {
                let codim = |k: usize, o: usize| jet_space_dim(g, k) - o;
                let got = orbit(k).and_then(|o| {
                    let here = codim(k, o);
                    if k == 0 {
                        Ok(here)
                    } else {
                        orbit(k - 1).map(|p| here - codim(k - 1, p))
                    }
                });
                CheckLine {
                    name: format!("h_{k}"),
                    observed: got.as_ref().map_or_else(|e| e.clone(), |d| d.to_string()),
                    expected: count.to_string(),
                    pass: got == Ok(count),
                }
            }
        };
        lines.push(line);
    }
    Report { suite: "counting", family: family.name(), lines }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counting_tables_hold() {
        for fam in Family::all() {
            if expectations(fam).is_empty() {
                continue;
            }
            let r = counting(fam, 3);
            assert!(r.passed(), "{r:#?}");
        }
    }

    #[test]
    fn invariance_suite_passes_for_a_curve_family() {
        let fam = Family::new(Flavor::Sp, Geometry::Curve { n: 2 }).unwrap();
        let r = invariance(fam, 4, 10, 1, 1e-8);
        assert!(r.passed(), "{r:#?}");
    }

    #[test]
    fn syzygy_suite_flags_broken_relations() {
        let fam = Family::new(Flavor::Sp, Geometry::Function { n: 1 }).unwrap();
        let r = syzygy(fam, 5, 2, 1e-7, 1e-9);
        assert!(r.passed(), "{r:#?}");
        assert!(r.lines.iter().any(|l| l.name == "R3"));
    }

    #[test]
    fn relative_error_is_symmetric() {
        assert_eq!(relative_error(0.0, 0.0), 0.0);
        assert_eq!(relative_error(1.0, 2.0), relative_error(2.0, 1.0));
    }
}
