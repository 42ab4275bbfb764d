//! The four subcommands as functions from parsed input to printed output and
//! an exit code, so that tests can call them without a process.

use std::fmt;

use sympinv::checks::{self, Report};
use sympinv::signature::{self, fmt_float, json_float, json_string, SampleRow};
use sympinv::{Family, Flavor, Geometry, SignatureError, Verdict};

use crate::job::{Format, JobError, JobSpec};

pub mod exit {
    pub const OK: i32 = 0;
    pub const CHECK_FAILED: i32 = 1;
    pub const INVALID: i32 = 2;
    pub const DEGENERATE: i32 = 3;
    pub const DISTINCT: i32 = 4;
    pub const INCONCLUSIVE: i32 = 5;
}

#[derive(Clone, Debug, PartialEq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output { stdout, stderr: String::new(), code: exit::OK }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CliError {
    Job(JobError),
    /// invalid command-line input or incompatible jobs
    Invalid(String),
    AllSamplesDegenerate(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Job(_) | CliError::Invalid(_) => exit::INVALID,
            CliError::AllSamplesDegenerate(_) => exit::DEGENERATE,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Job(e) => e.fmt(f),
            CliError::Invalid(m) => f.write_str(m),
            CliError::AllSamplesDegenerate(m) => f.write_str(m),
        }
    }
}

impl From<JobError> for CliError {
    fn from(e: JobError) -> Self {
        CliError::Job(e)
    }
}

impl From<SignatureError> for CliError {
    fn from(e: SignatureError) -> Self {
        match e {
            SignatureError::AllSamplesDegenerate(_) => CliError::AllSamplesDegenerate(e.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new())
}

fn csv_finish(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv output is utf-8")
}

fn json_floats(v: &[f64]) -> String {
    format!("[{}]", v.iter().map(|x| json_float(*x)).collect::<Vec<_>>().join(","))
}

fn json_strings(v: &[String]) -> String {
    format!("[{}]", v.iter().map(|s| json_string(s)).collect::<Vec<_>>().join(","))
}

/// One row per sample: parameters, basepoint, every exported invariant, and
/// `ok` or the reason the sample is degenerate.
pub fn invariants(job: &JobSpec, threads: usize) -> Result<Output, CliError> {
    let family = job.family();
    let (names, rows) = signature::tabulate(&job.submanifold(), family, &job.plan(), threads);
    let coords = job.geometry.coordinate_names();
    let stdout = match job.format.unwrap_or(Format::Csv) {
        Format::Csv => invariants_csv(job, &coords, &names, &rows),
        Format::Json => invariants_json(job, &coords, &names, &rows),
    };
    if rows.iter().all(|r| r.values.is_err()) {
        return Ok(Output {
            stdout,
            stderr: format!("error: all {} samples were degenerate\n", rows.len()),
            code: exit::DEGENERATE,
        });
    }
    Ok(Output::ok(stdout))
}

fn invariants_csv(job: &JobSpec, coords: &[String], names: &[String], rows: &[SampleRow]) -> String {
    let mut w = csv_writer();
    let header: Vec<&str> = std::iter::once("index")
        .chain(job.params.iter().map(String::as_str))
        .chain(coords.iter().map(String::as_str))
        .chain(names.iter().map(String::as_str))
        .chain(std::iter::once("status"))
        .collect();
    w.write_record(&header).expect("in-memory writer");
    for r in rows {
        let mut rec = vec![r.index.to_string()];
        rec.extend(r.params.iter().map(|v| fmt_float(*v)));
        let base = if r.basepoint.len() == coords.len() { r.basepoint.clone() } else { vec![f64::NAN; coords.len()] };
        rec.extend(base.iter().map(|v| fmt_float(*v)));
        match &r.values {
            Ok(v) => {
                rec.extend(v.iter().map(|x| fmt_float(*x)));
                rec.push("ok".into());
            }
            Err(e) => {
                rec.extend(names.iter().map(|_| "nan".to_string()));
                rec.push(format!("degenerate: {e}"));
            }
        }
        w.write_record(&rec).expect("in-memory writer");
    }
    csv_finish(w)
}

fn invariants_json(job: &JobSpec, coords: &[String], names: &[String], rows: &[SampleRow]) -> String {
    let rows: Vec<String> = rows
        .iter()
        .map(|r| {
            let (values, degenerate) = match &r.values {
                Ok(v) => (json_floats(v), "null".to_string()),
                Err(e) => ("null".to_string(), json_string(e)),
            };
            format!(
                "{{\"index\":{},\"params\":{},\"basepoint\":{},\"values\":{values},\"degenerate\":{degenerate}}}",
                r.index,
                json_floats(&r.params),
                json_floats(&r.basepoint)
            )
        })
        .collect();
    format!(
        "{{\"geometry\":{},\"flavor\":{},\"params\":{},\"coordinates\":{},\"invariants\":{},\"rows\":[{}]}}\n",
        json_string(&job.geometry.name()),
        json_string(job.flavor.name()),
        json_strings(&job.params),
        json_strings(coords),
        json_strings(names),
        rows.join(",")
    )
}

/// The signature cloud, JSON unless the job asks for CSV.
pub fn signature(job: &JobSpec, threads: usize) -> Result<Output, CliError> {
    let cloud = signature::signature_of(&job.submanifold(), job.family(), &job.plan(), job.depth, threads)?;
    let stdout = match job.format.unwrap_or(Format::Json) {
        Format::Json => cloud.to_json() + "\n",
        Format::Csv => {
            let mut w = csv_writer();
            let header: Vec<&str> = std::iter::once("index").chain(cloud.generators.iter().map(String::as_str)).collect();
            w.write_record(&header).expect("in-memory writer");
            for (i, p) in &cloud.points {
                let rec: Vec<String> = std::iter::once(i.to_string()).chain(p.iter().map(|v| fmt_float(*v))).collect();
                w.write_record(&rec).expect("in-memory writer");
            }
            csv_finish(w)
        }
    };
    Ok(Output::ok(stdout))
}

/// Compare the signature clouds of two jobs: exit 0 equivalent, 4 distinct,
/// 5 inconclusive, 2 when the jobs cannot be compared.
pub fn equivalence(a: &JobSpec, b: &JobSpec, tol: f64, threads: usize) -> Result<Output, CliError> {
    if (a.geometry, a.flavor, a.depth) != (b.geometry, b.flavor, b.depth) {
        return Err(CliError::Invalid(format!(
            "incompatible jobs: {} {} depth {} vs {} {} depth {}",
            a.flavor, a.geometry, a.depth, b.flavor, b.geometry, b.depth
        )));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(CliError::Invalid(format!("--tol must be positive, got {tol}")));
    }
    let ca = signature::signature_of(&a.submanifold(), a.family(), &a.plan(), a.depth, threads)?;
    let cb = signature::signature_of(&b.submanifold(), b.family(), &b.plan(), b.depth, threads)?;
    let cmp = signature::compare(&ca, &cb, tol)?;
    let stdout = format!(
        "verdict: {}\ndistance: {}\ntolerance: {:e}\ngenerators: {}\nsamples: {} and {} ({} and {} degenerate)\n",
        cmp.verdict.name(),
        fmt_float(cmp.distance),
        tol,
        cmp.generators.join(", "),
        ca.samples,
        cb.samples,
        ca.degenerate,
        cb.degenerate
    );
    let code = match cmp.verdict {
        Verdict::Equivalent => exit::OK,
        Verdict::Distinct => exit::DISTINCT,
        Verdict::Inconclusive => exit::INCONCLUSIVE,
    };
    Ok(Output { stdout, stderr: String::new(), code })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Invariance,
    Syzygy,
    Counting,
}

impl std::str::FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "invariance" => Ok(Suite::Invariance),
            "syzygy" | "syzygies" => Ok(Suite::Syzygy),
            "counting" => Ok(Suite::Counting),
            other => Err(format!("unknown suite `{other}` (expected invariance, syzygy, counting)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CheckOptions {
    /// group elements per jet (invariance) or jets (syzygy)
    pub trials: Option<usize>,
    /// generic jets for the invariance suite
    pub jets: usize,
    pub seed: u64,
    /// invariance or syzygy tolerance; reductions keep their own
    pub tol: Option<f64>,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { trials: None, jets: 20, seed: 0, tol: None }
    }
}

pub const INVARIANCE_TOL: f64 = 1e-8;
pub const SYZYGY_TOL: f64 = 1e-7;
pub const REDUCTION_TOL: f64 = 1e-9;

/// Families named by `geometry [n=K]` (or `all`), restricted to `flavor`.
pub fn check_targets(target: &[String], flavor: Option<Flavor>) -> Result<Vec<Family>, CliError> {
    let all = Family::all();
    let picked: Vec<Family> = match target {
        [t] if t == "all" => all,
        [] => return Err(CliError::Invalid("check needs a geometry, e.g. `curves n=2`, or `all`".into())),
        [kind, rest @ ..] => {
            let n = match rest {
                [] => None,
                [nk] => {
                    let v = nk.strip_prefix("n=").ok_or_else(|| CliError::Invalid(format!("expected n=K after the geometry, got `{nk}`")))?;
                    Some(v.parse::<usize>().map_err(|e| CliError::Invalid(format!("n: `{v}`: {e}")))?)
                }
                _ => return Err(CliError::Invalid(format!("unexpected arguments `{}`", rest.join(" ")))),
            };
            let g = Geometry::parse(kind, n).map_err(CliError::Invalid)?;
            all.into_iter().filter(|f| f.geometry == g).collect()
        }
    };
    let picked: Vec<Family> = picked.into_iter().filter(|f| flavor.map_or(true, |fl| f.flavor == fl)).collect();
    if picked.is_empty() {
        return Err(CliError::Invalid(format!(
            "no invariant family for `{}`{}",
            target.join(" "),
            flavor.map_or(String::new(), |f| format!(" with flavor {f}"))
        )));
    }
    Ok(picked)
}

pub fn run_suite(suite: Suite, family: Family, opts: &CheckOptions) -> Option<Report> {
    match suite {
        Suite::Invariance => Some(checks::invariance(family, opts.jets, opts.trials.unwrap_or(50), opts.seed, opts.tol.unwrap_or(INVARIANCE_TOL))),
        Suite::Syzygy => {
            Some(checks::syzygy(family, opts.trials.unwrap_or(20), opts.seed, opts.tol.unwrap_or(SYZYGY_TOL), REDUCTION_TOL))
        }
        Suite::Counting if checks::expectations(family).is_empty() => None,
        Suite::Counting => Some(checks::counting(family, opts.seed)),
    }
}

/// One line per identity or count, then a summary; exit 1 on any failure.
pub fn check(suite: Suite, families: &[Family], opts: &CheckOptions) -> Result<Output, CliError> {
    let mut out = String::new();
    let (mut total, mut failed, mut ran) = (0, 0, 0);
    for &family in families {
        let Some(report) = run_suite(suite, family, opts) else {
            out += &format!("{:<10} {:<28} no table\n", format!("{suite:?}").to_lowercase(), family.name());
            continue;
        };
        ran += 1;
        for l in &report.lines {
            total += 1;
            failed += usize::from(!l.pass);
            out += &format!(
                "{:<10} {:<28} {:<16} observed {:<28} expected {:<24} {}\n",
                report.suite,
                report.family,
                l.name,
                l.observed,
                l.expected,
                if l.pass { "PASS" } else { "FAIL" }
            );
        }
    }
    if ran == 0 {
        return Err(CliError::Invalid(format!("no {} table for the selected families", format!("{suite:?}").to_lowercase())));
    }
    out += &format!("{total} checks, {failed} failed\n");
    Ok(Output { stdout: out, stderr: String::new(), code: if failed == 0 { exit::OK } else { exit::CHECK_FAILED } })
}
