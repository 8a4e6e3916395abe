//! Flat `key = value` job descriptions, shared by job files and case files.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::groebner::PresentedModule;

/// One `key = value` line with its 1-based line number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub line: usize,
    pub key: String,
    pub value: String,
}

/// Splits a job or case file into entries. Blank lines and lines starting
/// with `#` are skipped.
pub fn parse_entries(text: &str) -> Result<Vec<Entry>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Job(format!(
                "line {}: expected `key = value`, got `{line}`",
                i + 1
            )));
        };
        out.push(Entry {
            line: i + 1,
            key: key.trim().to_string(),
            value: value.trim().to_string(),
        });
    }
    Ok(out)
}

/// Removes one pair of surrounding double quotes, if present.
pub fn unquote(value: &str) -> &str {
    value
        .strip_prefix('"')
        .and_then(|v| v.strip_suffix('"'))
        .unwrap_or(value)
}

pub fn parse_value<T: FromStr>(e: &Entry) -> Result<T> {
    e.value.parse().map_err(|_| {
        Error::Job(format!(
            "line {}: cannot read `{}` as {}",
            e.line, e.value, e.key
        ))
    })
}

pub fn parse_pair(e: &Entry) -> Result<(i64, i64)> {
    let parts: Vec<&str> = e.value.split_whitespace().collect();
    match parts.as_slice() {
        [a, b] => match (a.parse(), b.parse()) {
            (Ok(a), Ok(b)) => Ok((a, b)),
            _ => Err(Error::Job(format!(
                "line {}: `{}` is not two integers",
                e.line, e.value
            ))),
        },
        _ => Err(Error::Job(format!(
            "line {}: {} needs two integers LO HI",
            e.line, e.key
        ))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Resolve,
    Derham,
    Dimension,
    CompletionCheck,
    RunExamples,
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "resolve" => Command::Resolve,
            "derham" => Command::Derham,
            "dimension" => Command::Dimension,
            "completion-check" => Command::CompletionCheck,
            "run-examples" => Command::RunExamples,
            _ => return Err(Error::Job(format!("unknown command `{s}`"))),
        })
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Command::Resolve => "resolve",
            Command::Derham => "derham",
            Command::Dimension => "dimension",
            Command::CompletionCheck => "completion-check",
            Command::RunExamples => "run-examples",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Text,
    Tabular,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "tabular" => Ok(Format::Tabular),
            _ => Err(Error::Job(format!(
                "unknown format `{s}`, expected text or tabular"
            ))),
        }
    }
}

pub const DEFAULT_WINDOW: (i64, i64) = (-10, 10);
pub const DEFAULT_MARGIN: usize = 3;
pub const DEFAULT_P_MAX: usize = 12;

/// Everything one invocation needs. Unset fields take the defaults.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct JobSpec {
    pub command: Option<Command>,
    pub n: Option<usize>,
    pub shifts: Vec<i64>,
    pub relations: Vec<String>,
    pub window: Option<(i64, i64)>,
    pub margin: Option<usize>,
    pub length: Option<usize>,
    pub format: Option<Format>,
    pub bound: Option<(i64, i64)>,
    pub provenance: Option<String>,
    pub p_max: Option<usize>,
    pub timings: bool,
}

impl JobSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let mut job = JobSpec::default();
        for e in parse_entries(text)? {
            job.apply(&e)?;
        }
        Ok(job)
    }

    /// Applies one entry; unknown keys are an error.
    pub fn apply(&mut self, e: &Entry) -> Result<()> {
        let job = self;
        match e.key.as_str() {
            "command" => job.command = Some(e.value.parse()?),
            "n" => job.n = Some(parse_value(e)?),
            "shift0" => {
                for tok in e.value.split_whitespace() {
                    job.shifts.push(tok.parse().map_err(|_| {
                        Error::Job(format!("line {}: shift `{tok}` is not an integer", e.line))
                    })?);
                }
            }
            "rel" => job.relations.push(unquote(&e.value).to_string()),
            "window" => job.window = Some(parse_pair(e)?),
            "margin" => job.margin = Some(parse_value(e)?),
            "length" => job.length = Some(parse_value(e)?),
            "format" => job.format = Some(e.value.parse()?),
            "bound" => job.bound = Some(parse_pair(e)?),
            "provenance" => job.provenance = Some(unquote(&e.value).to_string()),
            "p_max" => job.p_max = Some(parse_value(e)?),
            "timings" => job.timings = parse_value(e)?,
            other => {
                return Err(Error::Job(format!(
                    "line {}: unknown key `{other}`",
                    e.line
                )))
            }
        }
        Ok(())
    }

    pub fn window(&self) -> (i64, i64) {
        self.window.unwrap_or(DEFAULT_WINDOW)
    }

    pub fn margin(&self) -> usize {
        self.margin.unwrap_or(DEFAULT_MARGIN)
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }

    /// The presented module. Without `shift0` a single generator of shift 0
    /// is assumed.
    pub fn module(&self) -> Result<PresentedModule> {
        let n = self
            .n
            .ok_or_else(|| Error::Job("the number of variables --n is required".into()))?;
        let shifts = if self.shifts.is_empty() {
            vec![0]
        } else {
            self.shifts.clone()
        };
        PresentedModule::parse(n, shifts, &self.relations)
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.window();
        if lo > hi {
            return Err(Error::InvalidWindow { lo, hi });
        }
        if self.length == Some(0) {
            return Err(Error::Job("resolution length must be at least 1".into()));
        }
        if self.bound.is_some() != self.provenance.is_some() {
            return Err(Error::Job(
                "a vanishing bound needs a provenance, and vice versa".into(),
            ));
        }
        Ok(())
    }
}
