use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sympinv::Flavor;
use sympinv_cli::commands::{self, CheckOptions, Suite};
use sympinv_cli::{CliError, JobError, JobSpec, Output, RawJob};

#[derive(Parser)]
#[command(name = "sympinv", version, about = "Differential invariants and signatures under symplectic group actions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the exported invariants along a submanifold.
    Invariants {
        #[command(flatten)]
        job: JobArgs,
    },
    /// Run a test battery: invariance, syzygy or counting.
    Check {
        suite: Suite,
        /// geometry and optional `n=K`, e.g. `curves n=2`, or `all`
        #[arg(required = true)]
        target: Vec<String>,
        #[arg(long)]
        flavor: Option<Flavor>,
        /// group elements per jet (invariance) or jets (syzygy)
        #[arg(long)]
        trials: Option<usize>,
        /// generic jets (invariance)
        #[arg(long, default_value_t = 20)]
        jets: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Compare the signatures of two jobs.
    Equivalence {
        #[command(flatten)]
        job: JobArgs,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Print the signature cloud of a job.
    Signature {
        #[command(flatten)]
        job: JobArgs,
    },
}

/// Job file(s) plus overrides of their fields.
#[derive(Args)]
struct JobArgs {
    #[arg(long = "job", value_name = "FILE", required = true)]
    jobs: Vec<PathBuf>,
    #[arg(long)]
    flavor: Option<String>,
    #[arg(long)]
    geometry: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    samples: Option<String>,
    /// `A:B`
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    #[arg(long)]
    depth: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    format: Option<String>,
    #[arg(long, default_value_t = default_threads())]
    threads: usize,
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

impl JobArgs {
    fn load(&self) -> Result<Vec<JobSpec>, CliError> {
        self.jobs
            .iter()
            .map(|path| {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| JobError::new("job", format!("{}: {e}", path.display())))?;
                let mut raw = RawJob::parse(&text)?;
                let overrides = [
                    ("flavor", &self.flavor),
                    ("geometry", &self.geometry),
                    ("n", &self.n),
                    ("samples", &self.samples),
                    ("window", &self.window),
                    ("depth", &self.depth),
                    ("seed", &self.seed),
                    ("format", &self.format),
                ];
                for (key, v) in overrides {
                    if let Some(v) = v {
                        raw.set(key, v.as_str());
                    }
                }
                Ok(raw.validate()?)
            })
            .collect()
    }

    fn single(&self) -> Result<JobSpec, CliError> {
        let mut jobs = self.load()?;
        if jobs.len() != 1 {
            return Err(CliError::Invalid(format!("expected one --job, got {}", jobs.len())));
        }
        Ok(jobs.remove(0))
    }
}

fn run(cli: Cli) -> Result<Output, CliError> {
    match cli.command {
        Command::Invariants { job } => commands::invariants(&job.single()?, job.threads),
        Command::Signature { job } => commands::signature(&job.single()?, job.threads),
        Command::Equivalence { job, tol } => {
            let jobs = job.load()?;
            let [a, b] = jobs.as_slice() else {
                return Err(CliError::Invalid(format!("equivalence needs two --job files, got {}", jobs.len())));
            };
            commands::equivalence(a, b, tol, job.threads)
        }
        Command::Check { suite, target, flavor, trials, jets, seed, tol } => {
            let families = commands::check_targets(&target, flavor)?;
            commands::check(suite, &families, &CheckOptions { trials, jets, seed, tol })
        }
    }
}

fn main() -> ExitCode {
    let out = match run(Cli::parse()) {
        Ok(out) => out,
        Err(e) => Output { stdout: String::new(), stderr: format!("error: {e}\n"), code: e.code() },
    };
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code as u8)
}
