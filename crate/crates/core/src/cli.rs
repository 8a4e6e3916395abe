//! Command-line front end. Flags override the values of a `--job` file.

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::{Parser, ValueEnum};

use crate::cases::{builtin_cases, render_suite, run_all};
use crate::charvariety::{characteristic_data, dimension};
use crate::error::{Error, Result};
use crate::job::{Command, Format, JobSpec};
use crate::pipeline::{
    analyze, check_completion, oracle, render_completion_check, render_derham, render_dimension,
    render_resolution, resolve,
};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CommandArg {
    Resolve,
    Derham,
    Dimension,
    CompletionCheck,
    RunExamples,
}

impl From<CommandArg> for Command {
    fn from(c: CommandArg) -> Self {
        match c {
            CommandArg::Resolve => Command::Resolve,
            CommandArg::Derham => Command::Derham,
            CommandArg::Dimension => Command::Dimension,
            CommandArg::CompletionCheck => Command::CompletionCheck,
            CommandArg::RunExamples => Command::RunExamples,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Text,
    Tabular,
}

/// de Rham cohomology of graded modules over the Weyl algebra, and of their
/// completions.
#[derive(Debug, Parser)]
#[command(name = "weyl-derham", version)]
struct Cli {
    /// resolve, derham, dimension, completion-check or run-examples. May
    /// instead come from the job file.
    #[arg(value_enum)]
    command: Option<CommandArg>,
    /// Job file of `key = value` lines.
    #[arg(long, value_name = "FILE")]
    job: Option<String>,
    /// Number of variables.
    #[arg(long)]
    n: Option<usize>,
    /// Relation: an expression, or a row `[f1, f2, ...]` for several
    /// generators. Repeatable.
    #[arg(long, allow_hyphen_values = true)]
    rel: Vec<String>,
    /// Shift of the next generator. Repeatable.
    #[arg(long, allow_negative_numbers = true)]
    shift0: Vec<i64>,
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    window: Option<Vec<i64>>,
    /// Stability margin in degrees.
    #[arg(long, value_name = "W")]
    margin: Option<usize>,
    /// Resolution length, default n + 1.
    #[arg(long, value_name = "L")]
    length: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Degrees outside which the cohomology is known to vanish.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    bound: Option<Vec<i64>>,
    /// Source of the --bound claim.
    #[arg(long)]
    provenance: Option<String>,
    /// Last filtration level sampled by `dimension`.
    #[arg(long, value_name = "P")]
    p_max: Option<usize>,
    /// Print stage timings.
    #[arg(long)]
    timings: bool,
    /// Worker threads, default all cores.
    #[arg(long)]
    threads: Option<usize>,
}

fn pair(v: Vec<i64>) -> (i64, i64) {
    (v[0], v[1])
}

impl Cli {
    fn job_spec(self) -> Result<JobSpec> {
        let mut job = match &self.job {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
                    path: path.clone(),
                    msg: e.to_string(),
                })?;
                JobSpec::parse(&text).map_err(|e| match e {
                    Error::Job(m) => Error::Job(format!("{path}: {m}")),
                    e => e,
                })?
            }
            None => JobSpec::default(),
        };
        if let Some(c) = self.command {
            job.command = Some(c.into());
        }
        if self.n.is_some() {
            job.n = self.n;
        }
        if !self.rel.is_empty() {
            job.relations = self.rel;
        }
        if !self.shift0.is_empty() {
            job.shifts = self.shift0;
        }
        if let Some(w) = self.window {
            job.window = Some(pair(w));
        }
        if let Some(b) = self.bound {
            job.bound = Some(pair(b));
        }
        if self.provenance.is_some() {
            job.provenance = self.provenance;
        }
        if self.margin.is_some() {
            job.margin = self.margin;
        }
        if self.length.is_some() {
            job.length = self.length;
        }
        if let Some(f) = self.format {
            job.format = Some(match f {
                FormatArg::Text => Format::Text,
                FormatArg::Tabular => Format::Tabular,
            });
        }
        if self.p_max.is_some() {
            job.p_max = self.p_max;
        }
        job.timings |= self.timings;
        job.validate()?;
        Ok(job)
    }
}

/// Output of a command, and whether every check in it passed.
fn execute(job: &JobSpec) -> Result<(String, bool)> {
    let command = job.command.ok_or_else(|| {
        Error::Job("no command given; pass one or set `command` in the job file".into())
    })?;
    if command == Command::RunExamples {
        let reports = run_all(&builtin_cases());
        let ok = reports.iter().all(|r| r.passed());
        return Ok((render_suite(&reports), ok));
    }
    let m = job.module()?;
    let format = job.format();
    let out = match command {
        Command::Resolve => {
            let res = resolve(&m, job)?;
            res.verify_homogeneity()?;
            res.verify_composition()?;
            render_resolution(&m, &res, format)
        }
        Command::Derham => render_derham(&analyze(&m, job)?, format, job.timings),
        Command::Dimension => {
            let c = characteristic_data(&m);
            let v = dimension(&c)?;
            render_dimension(&m, &c, &v, &oracle(&m, job), format)
        }
        Command::CompletionCheck => {
            let a = analyze(&m, job)?;
            let (lo, hi) = a.report.window();
            let checked = check_completion(&a.tor, (lo - m.nvars() as i64, hi))?;
            render_completion_check(&a, checked, format, job.timings)
        }
        Command::RunExamples => unreachable!(),
    };
    Ok((out, true))
}

/// Runs the tool on `args` (program name first) and returns the exit code:
/// 0 on success, 1 for input errors, 2 for internal errors and failing cases.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    1
                }
            };
        }
    };
    let threads = cli.threads.unwrap_or(0);
    let result = cli.job_spec().and_then(|job| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Invariant(format!("cannot start worker pool: {e}")))?;
        pool.install(|| execute(&job))
    });
    match result {
        Ok((text, ok)) => {
            let _ = write!(out, "{text}");
            if ok {
                0
            } else {
                let _ = writeln!(err, "error: some cases failed");
                2
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_internal() {
                2
            } else {
                1
            }
        }
    }
}
