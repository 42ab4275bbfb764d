//! One entry point per (flavor, geometry) pair: exported invariants,
//! invariant derivations, generators, syzygies and reduction identities.

use super::contact as ct;
use super::curves::CurveJet;
use super::extended::{AcspCurve, AcspFunctions, AspCurve, AspFunctions, CspCurve, CspFunctions};
use super::functions::FunctionJet;
use super::hypersurf::HypersurfaceJet;
use super::surfaces::SurfaceJet;
use super::{Residual, Series};
use crate::error::InvariantError;
use crate::group::{Flavor, Geometry};
use crate::jet::{Derivation, GraphJet};
use crate::scalar::Scalar;

/// Invariants and derivations at one jet.
#[derive(Clone, Debug)]
pub struct Evaluation<T: Scalar> {
    pub invariants: Vec<(String, Series<T>)>,
    pub derivations: Vec<Derivation<T>>,
}

impl<T: Scalar> Evaluation<T> {
    fn new<S: Into<String>>(invariants: Vec<(S, Series<T>)>, derivations: Vec<Derivation<T>>) -> Self {
        Evaluation { invariants: invariants.into_iter().map(|(n, s)| (n.into(), s)).collect(), derivations }
    }

    pub fn get(&self, name: &str) -> Option<&Series<T>> {
        self.invariants.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Family {
    pub flavor: Flavor,
    pub geometry: Geometry,
}

fn unsupported(flavor: Flavor, geometry: Geometry) -> InvariantError {
    InvariantError::Unsupported(format!("no invariants implemented for {flavor} acting on {geometry}"))
}

impl Family {
    pub fn new(flavor: Flavor, geometry: Geometry) -> Result<Self, InvariantError> {
        use Flavor::*;
        use Geometry::*;
        let ok = match (flavor, geometry) {
            (Sp, Curve { n }) | (Sp, Function { n }) => n >= 1,
            (Sp, Hypersurface { n }) => n >= 2,
            (Sp, Surface) => true,
            (CSp | ASp | ACSp, Curve { n: 1 } | Function { n: 1 }) => true,
            (Contact | ContactCSp, ContactCurve) => true,
            (ContactCSp, ContactSurface | ContactFunction) => true,
            _ => false,
        };
        if ok {
            Ok(Family { flavor, geometry })
        } else {
            Err(unsupported(flavor, geometry))
        }
    }

    /// Every implemented pair, with the dimensions exercised by the check suites.
    pub fn all() -> Vec<Family> {
        use Flavor::*;
        use Geometry::*;
        let mut out = Vec::new();
        for n in 1..=3 {
            out.push((Sp, Curve { n }));
        }
        for n in 1..=2 {
            out.push((Sp, Function { n }));
        }
        for n in 2..=3 {
            out.push((Sp, Hypersurface { n }));
        }
        out.push((Sp, Surface));
        for f in [CSp, ASp, ACSp] {
            out.push((f, Function { n: 1 }));
            out.push((f, Curve { n: 1 }));
        }
        out.push((Contact, ContactCurve));
        out.push((ContactCSp, ContactCurve));
        out.push((ContactCSp, ContactSurface));
        out.push((ContactCSp, ContactFunction));
        out.into_iter().map(|(f, g)| Family { flavor: f, geometry: g }).collect()
    }

    pub fn name(&self) -> String {
        format!("{} {}", self.flavor, self.geometry)
    }

    /// Jet order needed for the exported invariants.
    pub fn order(&self) -> usize {
        use Flavor::*;
        match (self.flavor, self.geometry) {
            (Sp, Geometry::Curve { n }) => 2 * n,
            (CSp, Geometry::Curve { .. }) | (ACSp, Geometry::Function { .. }) => 3,
            (ASp, Geometry::Curve { .. }) => 4,
            (ACSp, Geometry::Curve { .. }) => 5,
            _ => 2,
        }
    }

    /// Jet order needed for [`syzygies`](Self::syzygies) and [`reductions`](Self::reductions).
    pub fn identity_order(&self) -> usize {
        match (self.flavor, self.geometry) {
            // the last relation differentiates a third-order invariant once more
            (Flavor::CSp | Flavor::ASp, Geometry::Function { .. }) => 4,
            _ => self.order() + 1,
        }
    }

    /// Generators of the invariant algebra, used as signature coordinates.
    pub fn generators(&self) -> Vec<String> {
        use Flavor::*;
        use Geometry::*;
        let v: Vec<String> = match (self.flavor, self.geometry) {
            (Sp, Curve { n }) => return (2..=2 * n).map(|j| format!("I{j}")).collect(),
            (Sp, Function { n: 1 }) => vec!["I0", "I2c"].into_iter().map(String::from).collect(),
            (Sp, Function { n }) => {
                let mut v = vec!["I0".to_string(), "I1".to_string()];
                for i in 1..=2 {
                    for j in i..=2 * n {
                        if i == 2 && j >= 3 && j % 2 == 1 {
                            continue;
                        }
                        v.push(format!("I{i}{j}"));
                    }
                }
                return v;
            }
            (Sp, Hypersurface { n: 2 }) => vec!["I2a".into(), "I2b".into(), "I2c".into()],
            (Sp, Hypersurface { n }) => return (1..2 * n).map(|i| format!("I2_{i}")).collect(),
            (Sp, Surface) => ["I2a", "I2b", "I2c", "I2d"].map(String::from).to_vec(),
            (CSp, Function { .. }) => vec!["I0".into(), "I2b'".into()],
            (CSp, Curve { .. }) => vec!["I3'".into()],
            (ASp, Function { .. }) => vec!["I0".into(), "I2'".into()],
            (ASp, Curve { .. }) => vec!["I4''".into()],
            (ACSp, Function { .. }) => ["I0", "I3a''", "I3b''"].map(String::from).to_vec(),
            (ACSp, Curve { .. }) => vec!["I5".into()],
            (Contact, ContactCurve) => vec!["I0".into(), "I2a".into()],
            (ContactCSp, ContactCurve) => vec!["I1".into(), "I2a'".into()],
            (ContactCSp, ContactSurface) => vec!["I1'".into(), "I2c'".into()],
            (ContactCSp, ContactFunction) => vec!["I0".into(), "I2f".into()],
            _ => Vec::new(),
        };
        v
    }

    pub fn evaluate<T: Scalar>(&self, jet: &GraphJet<T>) -> Result<Evaluation<T>, InvariantError> {
        use Flavor::*;
        use Geometry::*;
        if jet.nindep() != self.geometry.nindep() || jet.ndeps() != self.geometry.ndeps() {
            return Err(InvariantError::Unsupported(format!(
                "{} needs {} independent and {} dependent coordinates",
                self.geometry,
                self.geometry.nindep(),
                self.geometry.ndeps()
            )));
        }
        Ok(match (self.flavor, self.geometry) {
            (Sp, Curve { n }) => {
                let c = CurveJet::new(jet)?;
                let mut inv = c.generators()?;
                if n == 2 {
                    for (name, s) in c.n2_invariants()? {
                        if matches!(name, "I3a" | "I4a" | "I4b") {
                            inv.push((name.into(), s));
                        }
                    }
                }
                Evaluation::new(inv, vec![c.nabla()?])
            }
            (Sp, Function { n: 1 }) => {
                let f = FunctionJet::new(jet)?;
                Evaluation::new(f.n1_invariants(), vec![f.nabla1(), f.nabla2()])
            }
            (Sp, Function { .. }) => {
                let f = FunctionJet::new(jet)?;
                Evaluation::new(f.generators()?, f.frame()?)
            }
            (Sp, Hypersurface { n }) => {
                let h = HypersurfaceJet::new(jet)?;
                let inv = if n == 2 {
                    h.r4_invariants()?.into_iter().map(|(a, s)| (a.to_string(), s)).collect()
                } else {
                    h.invariants()?
                };
                Evaluation::new(inv, h.derivations()?)
            }
            (Sp, Surface) => {
                let s = SurfaceJet::new(jet)?;
                Evaluation::new(s.invariants()?, s.derivations()?.to_vec())
            }
            (CSp, Function { .. }) => {
                let f = CspFunctions::new(jet)?;
                Evaluation::new(f.invariants(), vec![f.nabla1.clone(), f.nabla2_p.clone()])
            }
            (ASp, Function { .. }) => {
                let f = AspFunctions::new(jet)?;
                Evaluation::new(f.invariants(), vec![f.nabla1_p.clone(), f.nabla2.clone()])
            }
            (ACSp, Function { .. }) => {
                let f = AcspFunctions::new(jet)?;
                Evaluation::new(f.invariants(), vec![f.nabla1_pp.clone(), f.nabla2_pp.clone()])
            }
            (CSp, Curve { .. }) => {
                let c = CspCurve::new(jet)?;
                Evaluation::new(c.invariants(), vec![c.nabla_p.clone()])
            }
            (ASp, Curve { .. }) => {
                let c = AspCurve::new(jet)?;
                Evaluation::new(c.invariants(), vec![c.nabla_pp.clone()])
            }
            (ACSp, Curve { .. }) => {
                let c = AcspCurve::new(jet)?;
                Evaluation::new(c.invariants(), vec![c.nabla_ppp.clone()])
            }
            (Contact, ContactCurve) => {
                let c = ct::ContactCurve::new(jet)?;
                Evaluation::new(c.g_invariants()?, vec![c.nabla()?])
            }
            (ContactCSp, ContactCurve) => {
                let c = ct::ContactCurve::new(jet)?;
                Evaluation::new(c.ghat_invariants()?, vec![c.nabla_prime()?])
            }
            (ContactCSp, ContactSurface) => {
                let s = ct::ContactSurface::new(jet)?;
                Evaluation::new(s.ghat_invariants()?, vec![s.nabla1(), s.nabla2()])
            }
            (ContactCSp, ContactFunction) => {
                let f = ct::ContactFunction::new(jet)?;
                Evaluation::new(f.invariants()?, f.derivations()?.to_vec())
            }
            (f, g) => return Err(unsupported(f, g)),
        })
    }

    /// The defining relations of the invariant algebra; empty for the free algebras.
    pub fn syzygies<T: Scalar>(&self, jet: &GraphJet<T>) -> Result<Vec<Residual<T>>, InvariantError> {
        use Flavor::*;
        use Geometry::*;
        match (self.flavor, self.geometry) {
            (Sp, Function { n: 1 }) => FunctionJet::new(jet)?.n1_syzygies(),
            (CSp, Function { .. }) => CspFunctions::new(jet)?.syzygies(),
            (ASp, Function { .. }) => AspFunctions::new(jet)?.syzygies(),
            (ContactCSp, ContactSurface) => ct::ContactSurface::new(jet)?.syzygies(),
            (ContactCSp, ContactFunction) => ct::ContactFunction::new(jet)?.syzygies(),
            _ => Ok(Vec::new()),
        }
    }

    /// Identities expressing omitted invariants through generators and derivations.
    pub fn reductions<T: Scalar>(&self, jet: &GraphJet<T>) -> Result<Vec<Residual<T>>, InvariantError> {
        use Flavor::*;
        use Geometry::*;
        match (self.flavor, self.geometry) {
            (Sp, Function { n: 1 }) => FunctionJet::new(jet)?.n1_reductions(),
            (Sp, Curve { n: 2 }) => CurveJet::new(jet)?.n2_reductions(),
            (CSp, Function { .. }) => CspFunctions::new(jet)?.reductions(),
            (ASp, Function { .. }) => AspFunctions::new(jet)?.reductions(),
            (Contact | ContactCSp, ContactCurve) => ct::ContactCurve::new(jet)?.simplification_residuals(),
            (ContactCSp, ContactSurface) => {
                let s = ct::ContactSurface::new(jet)?;
                let mut out = s.reductions()?;
                out.extend(s.plane_substitution_residuals()?);
                Ok(out)
            }
            (ContactCSp, ContactFunction) => ct::ContactFunction::new(jet)?.reductions(),
            _ => Ok(Vec::new()),
        }
    }

    /// Names of the signature coordinates: each generator under every word of
    /// at most `depth` derivations, in the order of [`signature_point`](Self::signature_point).
    pub fn signature_names(&self, depth: usize) -> Vec<String> {
        let m = self.derivation_count();
        let mut out = Vec::new();
        for g in self.generators() {
            for w in words(m, depth) {
                let prefix: String = w.iter().rev().map(|i| if m == 1 { "N".to_string() } else { format!("N{}", i + 1) }).collect();
                out.push(if prefix.is_empty() { g.clone() } else { format!("{prefix}({g})") });
            }
        }
        out
    }

    pub fn derivation_count(&self) -> usize {
        use Geometry::*;
        match self.geometry {
            Curve { .. } | ContactCurve => 1,
            Function { n } => 2 * n,
            Hypersurface { n } => 2 * n - 1,
            Surface | ContactSurface => 2,
            ContactFunction => 3,
        }
    }

    /// Signature coordinates at a jet of order at least `order() + depth`.
    pub fn signature_point<T: Scalar>(&self, jet: &GraphJet<T>, depth: usize) -> Result<Vec<T>, InvariantError> {
        let ev = self.evaluate(jet)?;
        let mut out = Vec::new();
        for g in self.generators() {
            let base = ev.get(&g).ok_or_else(|| InvariantError::Unsupported(format!("generator {g} not evaluated")))?;
            // derived[w] for words in the order of `words`, built by prefixing one derivation
            let ws = words(ev.derivations.len(), depth);
            let mut vals: Vec<Series<T>> = Vec::with_capacity(ws.len());
            for w in &ws {
                let s = match w.split_last() {
                    None => base.clone(),
                    Some((&last, rest)) => {
                        let parent = ws.iter().position(|v| v.as_slice() == rest).expect("words are prefix closed");
                        ev.derivations[last].apply(&vals[parent])?
                    }
                };
                vals.push(s);
            }
            out.extend(vals.into_iter().map(|s| s.constant_term().clone()));
        }
        Ok(out)
    }
}

/// Words over `m` letters of length `0..=depth`, shortest first; the last
/// letter is the outermost derivation.
fn words(m: usize, depth: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for w in &layer {
            for i in 0..m {
                let mut v: Vec<usize> = w.clone();
                v.push(i);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}
