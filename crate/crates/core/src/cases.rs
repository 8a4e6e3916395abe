//! The bundled regression suite: case files, their expectations, and the
//! runner that checks every stage of the pipeline against them.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;

use crate::derham::{explicit_strand_oracle, ExplicitGradedModule, VerdictKind};
use crate::error::{Error, Result};
use crate::groebner::{GradedResolution, PresentedModule};
use crate::job::{parse_entries, Entry, JobSpec};
use crate::pipeline::{analyze_with, check_completion, oracle, resolve, verdict_line, Analysis};

/// Maximum distance between the growth slope and the dimension.
pub const SLOPE_TOLERANCE: f64 = 0.5;
/// Filtration level at which the growth slope is read.
pub const SLOPE_P_MAX: usize = 12;

const BUILTIN: &[&str] = &[
    include_str!("../cases/d1.case"),
    include_str!("../cases/d2.case"),
    include_str!("../cases/r1.case"),
    include_str!("../cases/r2.case"),
    include_str!("../cases/r3.case"),
    include_str!("../cases/delta.case"),
    include_str!("../cases/euler0.case"),
    include_str!("../cases/euler1.case"),
    include_str!("../cases/euler_minus1.case"),
    include_str!("../cases/rank2.case"),
    include_str!("../cases/unit.case"),
];

/// Where an expected value comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Literature(String),
    /// The note may be empty.
    Trivial(String),
    Derived(String),
}

impl FromStr for Provenance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, note) = match s.split_once(':') {
            Some((k, n)) => (k.trim(), n.trim().to_string()),
            None => (s.trim(), String::new()),
        };
        match (kind, note.is_empty()) {
            ("trivial", _) => Ok(Provenance::Trivial(note)),
            ("literature", false) => Ok(Provenance::Literature(note)),
            ("derived", false) => Ok(Provenance::Derived(note)),
            ("literature" | "derived", true) => Err(Error::Job(format!(
                "provenance `{kind}` needs a note after `:`"
            ))),
            _ => Err(Error::Job(format!(
                "unknown provenance `{kind}`, expected literature, trivial or derived"
            ))),
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Literature(n) => write!(f, "[literature: {n}]"),
            Provenance::Trivial(n) if n.is_empty() => write!(f, "[trivial]"),
            Provenance::Trivial(n) => write!(f, "[trivial: {n}]"),
            Provenance::Derived(n) => write!(f, "[derived: {n}]"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expect {
    /// `H^i` in every degree of the window.
    Row {
        i: usize,
        values: Vec<usize>,
    },
    Total {
        i: usize,
        value: usize,
    },
    /// `None` for the zero module.
    Dimension(Option<usize>),
    Holonomic(bool),
    Verdict {
        i: usize,
        kind: VerdictKind,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expectation {
    pub line: usize,
    pub expect: Expect,
    pub provenance: Provenance,
}

/// An explicit model to compare the pipeline against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelSpec {
    Polynomial,
    Laurent { top: i64 },
    Euler { lambda: i64 },
}

impl FromStr for ModelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split_whitespace().collect();
        let int = |v: &str| {
            v.parse::<i64>()
                .map_err(|_| Error::Job(format!("model parameter `{v}` is not an integer")))
        };
        match parts.as_slice() {
            ["polynomial"] => Ok(ModelSpec::Polynomial),
            ["laurent", top] => Ok(ModelSpec::Laurent { top: int(top)? }),
            ["euler", lambda] => Ok(ModelSpec::Euler {
                lambda: int(lambda)?,
            }),
            _ => Err(Error::Job(format!(
                "unknown model `{s}`, expected `polynomial`, `laurent TOP` or `euler LAMBDA`"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExampleCase {
    pub name: String,
    pub job: JobSpec,
    pub module: PresentedModule,
    pub model: Option<ModelSpec>,
    pub expectations: Vec<Expectation>,
}

fn split_tag(e: &Entry) -> Result<(&str, Provenance)> {
    let v = e.value.trim_end();
    let open = match (v.ends_with(']'), v.find('[')) {
        (true, Some(open)) => open,
        _ => {
            return Err(Error::Job(format!(
                "line {}: expectation `{}` has no provenance tag",
                e.line, e.key
            )))
        }
    };
    let prov = v[open + 1..v.len() - 1]
        .parse()
        .map_err(|err| Error::Job(format!("line {}: {err}", e.line)))?;
    Ok((v[..open].trim(), prov))
}

fn cohomology_index(e: &Entry, word: &str) -> Result<usize> {
    word.strip_prefix('H')
        .and_then(|i| i.parse().ok())
        .ok_or_else(|| Error::Job(format!("line {}: expected H<i>, got `{word}`", e.line)))
}

fn parse_expectation(e: &Entry) -> Result<Expectation> {
    let (data, provenance) = split_tag(e)?;
    let what: Vec<&str> = e.key.split_whitespace().skip(1).collect();
    let bad = |msg: &str| Error::Job(format!("line {}: {msg}", e.line));
    let ints = |s: &str| -> Result<Vec<usize>> {
        s.split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| bad(&format!("`{t}` is not a dimension")))
            })
            .collect()
    };
    let one = |s: &str| -> Result<usize> {
        match ints(s)?.as_slice() {
            [v] => Ok(*v),
            _ => Err(bad("expected a single value")),
        }
    };
    let expect = match what.as_slice() {
        [h, "row"] => Expect::Row {
            i: cohomology_index(e, h)?,
            values: ints(data)?,
        },
        [h, "total"] => Expect::Total {
            i: cohomology_index(e, h)?,
            value: one(data)?,
        },
        ["dimension"] => Expect::Dimension(match data {
            "-1" => None,
            d => Some(one(d)?),
        }),
        ["holonomic"] => Expect::Holonomic(match data {
            "yes" => true,
            "no" => false,
            _ => return Err(bad("holonomic must be yes or no")),
        }),
        ["verdict", h] => Expect::Verdict {
            i: cohomology_index(e, h)?,
            kind: match data {
                "isomorphism-certified" => VerdictKind::IsomorphismCertified,
                "undetermined-window" => VerdictKind::UndeterminedWindow,
                _ => {
                    return Err(bad(
                        "verdict must be isomorphism-certified or undetermined-window",
                    ))
                }
            },
        },
        _ => return Err(bad(&format!("unknown expectation `{}`", e.key))),
    };
    Ok(Expectation {
        line: e.line,
        expect,
        provenance,
    })
}

impl ExampleCase {
    pub fn parse(text: &str) -> Result<Self> {
        let mut name = None;
        let mut model = None;
        let mut job = JobSpec::default();
        let mut expectations = Vec::new();
        for e in parse_entries(text)? {
            match e.key.as_str() {
                "name" => name = Some(crate::job::unquote(&e.value).to_string()),
                "model" => model = Some(e.value.parse::<ModelSpec>()?),
                k if k.starts_with("expect ") => expectations.push(parse_expectation(&e)?),
                "command" | "format" | "timings" => {
                    return Err(Error::Job(format!(
                        "line {}: `{}` has no meaning in a case file",
                        e.line, e.key
                    )))
                }
                _ => job.apply(&e)?,
            }
        }
        let name = name.ok_or_else(|| Error::Job("case file without `name`".into()))?;
        job.validate()?;
        let module = job.module()?;
        let (lo, hi) = job.window();
        for x in &expectations {
            match &x.expect {
                Expect::Row { i, values } if values.len() as i64 != hi - lo + 1 => {
                    return Err(Error::Job(format!(
                        "line {}: H{i} row has {} values for a window of {}",
                        x.line,
                        values.len(),
                        hi - lo + 1
                    )))
                }
                Expect::Row { i, .. } | Expect::Total { i, .. } | Expect::Verdict { i, .. }
                    if *i > module.nvars() =>
                {
                    return Err(Error::Job(format!("line {}: H{i} is out of range", x.line)))
                }
                _ => {}
            }
        }
        Ok(ExampleCase {
            name,
            job,
            module,
            model,
            expectations,
        })
    }

    /// The explicit model, covering one degree beyond each end of the window.
    pub fn explicit_model(&self) -> Option<Result<ExplicitGradedModule>> {
        let (lo, hi) = self.job.window();
        let (lo, hi) = (lo - 1, hi + 1);
        self.model.map(|m| match m {
            ModelSpec::Polynomial => {
                ExplicitGradedModule::polynomial_ring(self.module.nvars(), lo, hi)
            }
            ModelSpec::Laurent { top } => ExplicitGradedModule::laurent_quotient(top, lo, hi),
            ModelSpec::Euler { lambda } => ExplicitGradedModule::euler_quotient(lambda, lo, hi),
        })
    }
}

/// Parses the bundled case files.
pub fn builtin_cases() -> Vec<ExampleCase> {
    BUILTIN
        .iter()
        .map(|text| ExampleCase::parse(text).expect("bundled case files parse"))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseReport {
    pub name: String,
    /// One line per failed check, naming the `(i, d)` cell where relevant.
    pub failures: Vec<String>,
    pub text: String,
}

impl CaseReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn run_case(c: &ExampleCase) -> CaseReport {
    run_case_with(c, |_| {})
}

/// Runs a case after `mutate` has been applied to the computed resolution.
pub fn run_case_with(c: &ExampleCase, mutate: impl FnOnce(&mut GradedResolution)) -> CaseReport {
    let mut text = String::new();
    let mut failures = Vec::new();
    let _ = writeln!(text, "case {}", c.name);
    let result = resolve(&c.module, &c.job).and_then(|mut res| {
        mutate(&mut res);
        analyze_with(&c.module, &c.job, res)
    });
    match result {
        Ok(a) => check_analysis(c, &a, &mut text, &mut failures),
        Err(e) => failures.push(format!("pipeline error: {e}")),
    }
    for f in &failures {
        let _ = writeln!(text, "  FAIL {f}");
    }
    let _ = writeln!(
        text,
        "  result: {}",
        if failures.is_empty() { "PASS" } else { "FAIL" }
    );
    CaseReport {
        name: c.name.clone(),
        failures,
        text,
    }
}

fn join(v: &[usize]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn check_analysis(c: &ExampleCase, a: &Analysis, text: &mut String, failures: &mut Vec<String>) {
    let r = &a.report;
    let n = r.nvars();
    let (lo, hi) = r.window();
    let ranks: Vec<usize> = (0..=a.resolution.len())
        .map(|j| a.resolution.rank(j))
        .collect();
    let _ = writeln!(text, "  resolution ranks: {}", join(&ranks));
    match a
        .resolution
        .verify_composition()
        .and(a.resolution.verify_homogeneity())
    {
        Ok(()) => {
            let _ = writeln!(text, "  B_j B_(j+1) = 0 and homogeneity: ok");
        }
        Err(e) => failures.push(format!("resolution: {e}")),
    }
    let _ = writeln!(
        text,
        "  Euler identity and T_j T_(j+1) = 0: ok on {} strands",
        r.strands().len()
    );
    match check_completion(&a.tor, (lo - n as i64, hi)) {
        Ok(k) => {
            let _ = writeln!(
                text,
                "  completion map: identity on {k} strand positions, matrices shared"
            );
        }
        Err(e) => failures.push(format!("completion: {e}")),
    }
    let _ = writeln!(text, "  window [{lo}, {hi}]");
    for i in 0..=n {
        let _ = writeln!(text, "  H^{i}: {}", join(r.row(i)));
    }

    match c.explicit_model() {
        None => {}
        Some(Err(e)) => failures.push(format!("model: {e}")),
        Some(Ok(model)) => {
            let mut cells = 0;
            for i in 0..=n {
                for d in lo..=hi {
                    match explicit_strand_oracle(&model, i, d) {
                        Ok(v) if v == r.dim(i, d) => cells += 1,
                        Ok(v) => failures.push(format!(
                            "oracle (i, d) = ({i}, {d}): model gives {v}, pipeline gives {}",
                            r.dim(i, d)
                        )),
                        Err(e) => failures.push(format!("oracle (i, d) = ({i}, {d}): {e}")),
                    }
                }
            }
            let _ = writeln!(text, "  explicit model: {cells} cells agree");
        }
    }

    let dim = &a.dimension;
    let _ = writeln!(text, "  dimension: {}", dim.to_string().replace('\n', "; "));
    match dim.dimension {
        None => {
            let _ = writeln!(text, "  growth slope: skipped for the zero module");
        }
        Some(d) => {
            if d < n {
                failures.push(format!("Bernstein inequality: d = {d} < n = {n}"));
            }
            let mut job = c.job.clone();
            job.p_max = Some(SLOPE_P_MAX);
            let samples = oracle(&c.module, &job);
            match samples.extrapolated_slope() {
                Some(s) if (s - d as f64).abs() <= SLOPE_TOLERANCE && !samples.partial => {
                    let _ = writeln!(
                        text,
                        "  growth slope at p = {SLOPE_P_MAX}: extrapolated {s:.3} (local {}), within {SLOPE_TOLERANCE} of d",
                        samples.slope().map_or("n/a".into(), |v| format!("{v:.3}"))
                    );
                }
                s => failures.push(format!(
                    "growth slope at p = {SLOPE_P_MAX}: {}{} against d = {d}",
                    s.map_or("n/a".into(), |s| format!("{s:.3}")),
                    if samples.partial { " (partial)" } else { "" }
                )),
            }
        }
    }
    for v in r.verdicts() {
        let _ = writeln!(text, "  {}", verdict_line(v));
    }

    for x in &c.expectations {
        let before = failures.len();
        match &x.expect {
            Expect::Row { i, values } => {
                for (k, &want) in values.iter().enumerate() {
                    let d = lo + k as i64;
                    let got = r.dim(*i, d);
                    if got != want {
                        failures.push(format!("(i, d) = ({i}, {d}): expected {want}, got {got}"));
                    }
                }
            }
            Expect::Total { i, value } => {
                if r.total(*i) != *value {
                    failures.push(format!(
                        "H^{i} total: expected {value}, got {}",
                        r.total(*i)
                    ));
                }
            }
            Expect::Dimension(want) => {
                if dim.dimension != *want {
                    failures.push(format!(
                        "dimension: expected {want:?}, got {:?}",
                        dim.dimension
                    ));
                }
            }
            Expect::Holonomic(want) => {
                if dim.holonomic != *want {
                    failures.push(format!("holonomic: expected {want}, got {}", dim.holonomic));
                }
            }
            Expect::Verdict { i, kind } => match r.verdicts().iter().find(|v| v.i == *i) {
                Some(v) if v.kind == *kind => {}
                Some(v) => failures.push(format!("verdict H^{i}: expected {kind}, got {}", v.kind)),
                None => failures.push(format!("verdict H^{i}: missing")),
            },
        }
        let _ = writeln!(
            text,
            "  expect line {}: {} {}",
            x.line,
            if failures.len() == before {
                "ok"
            } else {
                "FAILED"
            },
            x.provenance
        );
    }
}

/// Runs the cases concurrently; reports come back ordered by name.
pub fn run_all(cases: &[ExampleCase]) -> Vec<CaseReport> {
    let mut reports: Vec<CaseReport> = cases.par_iter().map(run_case).collect();
    reports.sort_by(|a, b| a.name.cmp(&b.name));
    reports
}

pub fn render_suite(reports: &[CaseReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&r.text);
    }
    let passed = reports.iter().filter(|r| r.passed()).count();
    let _ = writeln!(
        out,
        "{} cases: {passed} passed, {} failed",
        reports.len(),
        reports.len() - passed
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::WeylElement;

    fn case(name: &str) -> ExampleCase {
        builtin_cases()
            .into_iter()
            .find(|c| c.name == name)
            .unwrap()
    }

    #[test]
    fn builtin_cases_parse() {
        let cases = builtin_cases();
        assert_eq!(cases.len(), BUILTIN.len());
        assert!(cases.iter().all(|c| !c.expectations.is_empty()));
        let mut names: Vec<&str> = cases.iter().map(|c| c.name.as_str()).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), cases.len());
    }

    #[test]
    fn untagged_expectations_are_refused() {
        let base = "name = t\nn = 1\nrel = \"x1\"\nwindow = -1 1\nmargin = 1\n";
        assert!(ExampleCase::parse(&format!("{base}expect H0 total = 0 [trivial]\n")).is_ok());
        let err = ExampleCase::parse(&format!("{base}expect H0 total = 0\n")).unwrap_err();
        assert!(err.to_string().contains("provenance"), "{err}");
        assert!(ExampleCase::parse(&format!("{base}expect H0 total = 0 [derived]\n")).is_err());
        assert!(ExampleCase::parse(&format!("{base}expect H0 total = 0 [hearsay: x]\n")).is_err());
        assert!(ExampleCase::parse(&format!("{base}expect H0 row = 0 0 [trivial]\n")).is_err());
        assert!(ExampleCase::parse(&format!("{base}expect H2 total = 0 [trivial]\n")).is_err());
    }

    #[test]
    fn delta_case_passes() {
        let r = run_case(&case("D/Dx n=1"));
        assert!(r.passed(), "{}", r.text);
        assert!(
            r.text.contains("explicit model: 22 cells agree"),
            "{}",
            r.text
        );
    }

    #[test]
    fn corrupted_entry_fails_with_cells() {
        let c = case("D/Dx n=1");
        let r = run_case_with(&c, |res| {
            res.set_entry_unchecked(1, 0, 0, WeylElement::zero(1))
        });
        assert!(!r.passed());
        assert!(
            r.failures.iter().any(|f| f.starts_with("(i, d) = (1, ")),
            "{:?}",
            r.failures
        );
        let c = case("R n=2");
        let r = run_case_with(&c, |res| {
            res.set_entry_unchecked(1, 0, 0, WeylElement::x(2, 0))
        });
        assert!(!r.passed());
    }

    #[test]
    fn all_builtin_cases_pass() {
        let reports = run_all(&builtin_cases());
        let suite = render_suite(&reports);
        assert!(reports.iter().all(CaseReport::passed), "{suite}");
        assert!(
            suite.ends_with("11 cases: 11 passed, 0 failed\n"),
            "{suite}"
        );
    }

    #[test]
    fn reports_are_deterministic() {
        let c = case("rank 2, D/D d^2");
        assert_eq!(run_case(&c), run_case(&c));
    }
}
