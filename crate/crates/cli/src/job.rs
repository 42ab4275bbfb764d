//! Job files: `key = value` lines, then an `[expressions]` block with one
//! `coordinate = expression` line per defined coordinate. `#` starts a comment.
//!
//! ```text
//! geometry = curve
//! n = 1
//! flavor = sp
//! window = 1:2
//! samples = 4
//!
//! [expressions]
//! y = x^2
//! ```

use std::fmt;
use std::str::FromStr;

use sympinv::{ExprAst, Family, Flavor, Geometry, SamplePlan, Submanifold};

/// A job that failed to parse or validate, with the offending field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobError {
    pub field: String,
    pub message: String,
}

impl JobError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        JobError { field: field.into(), message: message.into() }
    }
}

impl fmt::Display for JobError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "job field `{}`: {}", self.field, self.message)
    }
}

impl std::error::Error for JobError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct JobSpec {
    pub geometry: Geometry,
    pub flavor: Flavor,
    /// all ambient coordinates given as functions of the parameters, rather
    /// than the dependent ones as functions of the independent ones
    pub parametric: bool,
    pub params: Vec<String>,
    /// `(coordinate, source)` in canonical coordinate order
    pub exprs: Vec<(String, String)>,
    pub window: (f64, f64),
    pub samples: usize,
    pub depth: usize,
    pub seed: u64,
    /// `None`: the command's own default
    pub format: Option<Format>,
}

const KEYS: [&str; 10] = ["geometry", "n", "flavor", "mode", "params", "window", "samples", "depth", "seed", "format"];

/// Key/value pairs and expression lines as written, before validation.
#[derive(Clone, Debug, Default)]
pub struct RawJob {
    pub fields: Vec<(String, String)>,
    pub exprs: Vec<(String, String)>,
}

impl RawJob {
    pub fn parse(text: &str) -> Result<RawJob, JobError> {
        let mut raw = RawJob::default();
        let mut in_exprs = false;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if line.starts_with('[') {
                if line != "[expressions]" {
                    return Err(JobError::new(line, format!("line {}: unknown section", lineno + 1)));
                }
                if in_exprs {
                    return Err(JobError::new("expressions", "section given twice"));
                }
                in_exprs = true;
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(JobError::new(line, format!("line {}: expected `key = value`", lineno + 1)));
            };
            let (k, v) = (k.trim().to_string(), v.trim().to_string());
            if in_exprs {
                if raw.exprs.iter().any(|(c, _)| *c == k) {
                    return Err(JobError::new(format!("expressions.{k}"), "defined twice"));
                }
                raw.exprs.push((k, v));
            } else {
                if !KEYS.contains(&k.as_str()) {
                    return Err(JobError::new(k, format!("unknown key (expected one of {})", KEYS.join(", "))));
                }
                if raw.get(&k).is_some() {
                    return Err(JobError::new(k, "given twice"));
                }
                raw.fields.push((k, v));
            }
        }
        Ok(raw)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// Replace or add a field; used for command-line overrides.
    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        let value = value.into();
        match self.fields.iter_mut().find(|(k, _)| k == key) {
            Some(f) => f.1 = value,
            None => self.fields.push((key.to_string(), value)),
        }
    }

    pub fn validate(&self) -> Result<JobSpec, JobError> {
        fn parsed<T: FromStr>(raw: &RawJob, key: &str, default: T) -> Result<T, JobError>
        where
            T::Err: fmt::Display,
        {
            match raw.get(key) {
                None => Ok(default),
                Some(v) => v.parse().map_err(|e: T::Err| JobError::new(key, format!("`{v}`: {e}"))),
            }
        }
        let kind = self.get("geometry").ok_or_else(|| JobError::new("geometry", "missing"))?;
        let n: Option<usize> = match self.get("n") {
            None => None,
            Some(v) => Some(v.parse().map_err(|e| JobError::new("n", format!("`{v}`: {e}")))?),
        };
        let geometry = Geometry::parse(kind, n).map_err(|e| JobError::new(if n.is_some() { "n" } else { "geometry" }, e))?;
        let default_flavor = if geometry.is_contact() { Flavor::ContactCSp } else { Flavor::Sp };
        let flavor: Flavor = parsed(self, "flavor", default_flavor)?;
        Family::new(flavor, geometry).map_err(|e| JobError::new("flavor", e.to_string()))?;
        let parametric = match self.get("mode").unwrap_or("graph") {
            "graph" => false,
            "parametric" => true,
            other => return Err(JobError::new("mode", format!("`{other}` (expected graph or parametric)"))),
        };
        let coords = geometry.coordinate_names();
        let params: Vec<String> = match self.get("params") {
            Some(v) => v.split(',').map(|s| s.trim().to_string()).collect(),
            None if parametric => (1..=geometry.nindep()).map(|i| if geometry.nindep() == 1 { "t".into() } else { format!("t{i}") }).collect(),
            None => coords[..geometry.nindep()].to_vec(),
        };
        if params.len() != geometry.nindep() || params.iter().any(|p| !is_identifier(p)) {
            return Err(JobError::new(
                "params",
                format!("{geometry} needs {} comma-separated variable names, got `{}`", geometry.nindep(), params.join(",")),
            ));
        }
        let wanted: Vec<String> = if parametric { coords.clone() } else { coords[geometry.nindep()..].to_vec() };
        for (c, _) in &self.exprs {
            if !wanted.contains(c) {
                let what = if parametric { "coordinate" } else { "dependent coordinate" };
                return Err(JobError::new(
                    format!("expressions.{c}"),
                    format!("not a {what} of a {geometry} (expected {})", wanted.join(", ")),
                ));
            }
        }
        let mut exprs = Vec::with_capacity(wanted.len());
        for c in &wanted {
            let Some((_, src)) = self.exprs.iter().find(|(k, _)| k == c) else {
                return Err(JobError::new(format!("expressions.{c}"), "missing"));
            };
            let names: Vec<&str> = params.iter().map(String::as_str).collect();
            ExprAst::parse_with_vars(src, &names).map_err(|e| JobError::new(format!("expressions.{c}"), e.to_string()))?;
            exprs.push((c.clone(), src.clone()));
        }
        let default_plan = SamplePlan::default();
        let window = match self.get("window") {
            None => default_plan.window,
            Some(v) => parse_window(v).map_err(|e| JobError::new("window", e))?,
        };
        let samples: usize = parsed(self, "samples", default_plan.samples)?;
        if samples == 0 {
            return Err(JobError::new("samples", "must be positive"));
        }
        let depth: usize = parsed(self, "depth", 1)?;
        let seed: u64 = parsed(self, "seed", default_plan.seed)?;
        let format = match self.get("format") {
            None => None,
            Some(v) => Some(v.parse().map_err(|e| JobError::new("format", e))?),
        };
        Ok(JobSpec { geometry, flavor, parametric, params, exprs, window, samples, depth, seed, format })
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_') && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// `A:B` with finite `A < B`.
pub fn parse_window(v: &str) -> Result<(f64, f64), String> {
    let (a, b) = v.split_once(':').ok_or_else(|| format!("`{v}`: expected A:B"))?;
    let a: f64 = a.trim().parse().map_err(|e| format!("`{v}`: {e}"))?;
    let b: f64 = b.trim().parse().map_err(|e| format!("`{v}`: {e}"))?;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(format!("`{v}`: need finite A < B"));
    }
    Ok((a, b))
}

impl JobSpec {
    pub fn parse(text: &str) -> Result<JobSpec, JobError> {
        RawJob::parse(text)?.validate()
    }

    pub fn family(&self) -> Family {
        Family::new(self.flavor, self.geometry).expect("validated")
    }

    pub fn plan(&self) -> SamplePlan {
        SamplePlan { window: self.window, samples: self.samples, seed: self.seed }
    }

    pub fn submanifold(&self) -> Submanifold {
        let params: Vec<&str> = self.params.iter().map(String::as_str).collect();
        let exprs: Vec<&str> = self.exprs.iter().map(|(_, s)| s.as_str()).collect();
        let sub = if self.parametric {
            Submanifold::parametric(self.geometry, &params, &exprs)
        } else {
            Submanifold::graph(self.geometry, &params, &exprs)
        };
        sub.expect("validated")
    }

    /// Canonical job-file text; parses back to `self`.
    pub fn to_job_string(&self) -> String {
        let kind = match self.geometry {
            Geometry::Curve { .. } => "curve",
            Geometry::Function { .. } => "function",
            Geometry::Hypersurface { .. } => "hypersurface",
            Geometry::Surface => "surface",
            Geometry::ContactCurve => "contact-curve",
            Geometry::ContactSurface => "contact-surface",
            Geometry::ContactFunction => "contact-function",
        };
        let mut out = format!("geometry = {kind}\n");
        if matches!(self.geometry, Geometry::Curve { .. } | Geometry::Function { .. } | Geometry::Hypersurface { .. }) {
            out += &format!("n = {}\n", self.geometry.n());
        }
        out += &format!("flavor = {}\n", self.flavor);
        out += &format!("mode = {}\n", if self.parametric { "parametric" } else { "graph" });
        out += &format!("params = {}\n", self.params.join(", "));
        out += &format!("window = {}:{}\n", self.window.0, self.window.1);
        out += &format!("samples = {}\ndepth = {}\nseed = {}\n", self.samples, self.depth, self.seed);
        if let Some(f) = self.format {
            out += &format!("format = {f}\n");
        }
        out += "\n[expressions]\n";
        for (c, src) in &self.exprs {
            out += &format!("{c} = {src}\n");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PARABOLA: &str = "# y = x^2\ngeometry = curve\nwindow = 1:2\nsamples = 4\n\n[expressions]\ny = x^2  # graph\n";

    #[test]
    fn defaults_and_round_trip() {
        let job = JobSpec::parse(PARABOLA).unwrap();
        assert_eq!(job.geometry, Geometry::Curve { n: 1 });
        assert_eq!((job.flavor, job.depth, job.seed, job.format), (Flavor::Sp, 1, 0, None));
        assert_eq!(job.params, vec!["x"]);
        assert_eq!(JobSpec::parse(&job.to_job_string()).unwrap(), job);
        let mut other = job.clone();
        other.parametric = true;
        other.params = vec!["s".into()];
        other.exprs = vec![("x".into(), "s".into()), ("y".into(), "s^2".into())];
        other.window = (-0.1, 1.0 / 3.0);
        other.format = Some(Format::Json);
        assert_eq!(JobSpec::parse(&other.to_job_string()).unwrap(), other);
    }

    #[test]
    fn errors_name_the_field() {
        let field = |text: &str| JobSpec::parse(text).unwrap_err().field;
        assert_eq!(field("geometry = curve\nwindow = 2:1\n[expressions]\ny = x\n"), "window");
        assert_eq!(field("geometry = curve\nsamples = many\n[expressions]\ny = x\n"), "samples");
        assert_eq!(field("geometry = curve\ncolour = red\n"), "colour");
        assert_eq!(field("geometry = curve\n[expressions]\ny = x +\n"), "expressions.y");
        assert_eq!(field("geometry = curve\n[expressions]\n"), "expressions.y");
        // curve definitions under a surface: x(t, s) is missing
        assert_eq!(field("geometry = surface\n[expressions]\ny = x^2\n"), "expressions.x");
        assert_eq!(field("geometry = surface\nflavor = csp\n[expressions]\nx = t\ny = s\n"), "flavor");
        assert_eq!(field("geometry = curve\nflavor = contact\n[expressions]\ny = x\n"), "flavor");
        assert_eq!(field("window = 0:1\n"), "geometry");
        assert_eq!(field("geometry = curve\nn = 0\n"), "n");
    }

    #[test]
    fn overrides_replace_fields() {
        let mut raw = RawJob::parse(PARABOLA).unwrap();
        raw.set("samples", "7");
        raw.set("depth", "2");
        let job = raw.validate().unwrap();
        assert_eq!((job.samples, job.depth), (7, 2));
    }
}
