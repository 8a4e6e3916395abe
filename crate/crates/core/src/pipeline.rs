//! The end-to-end computation behind every command, and its reports.

use std::fmt::Write as _;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::charvariety::{
    characteristic_data, dimension, dimension_oracle, CharIdeal, DimensionVerdict, HilbertSamples,
    DEFAULT_ORACLE_CAP,
};
use crate::derham::{
    build_tor_complex, completion_map_on_strand, completion_verdict, derham_dims_from_tor, strand,
    CompletedTorComplex, CompletionVerdict, DeRhamReport, TorComplex, VanishingCertificate,
};
use crate::error::{Error, Result};
use crate::groebner::{graded_free_resolution, GradedResolution, PresentedModule};
use crate::job::{Format, JobSpec, DEFAULT_P_MAX};
use crate::linalg::QMatrix;

#[derive(Default)]
struct Clock(Vec<(&'static str, Duration)>);

impl Clock {
    fn time<T>(&mut self, stage: &'static str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.0.push((stage, start.elapsed()));
        out
    }
}

pub struct Analysis {
    pub module: PresentedModule,
    pub resolution: GradedResolution,
    pub tor: Arc<TorComplex>,
    pub report: DeRhamReport,
    pub characteristic: CharIdeal,
    pub dimension: DimensionVerdict,
    timings: Vec<(&'static str, Duration)>,
}

pub fn resolve(m: &PresentedModule, job: &JobSpec) -> Result<GradedResolution> {
    graded_free_resolution(m, job.length.unwrap_or(m.nvars() + 1))
}

/// Resolution, de Rham table, dimension and completion verdicts.
pub fn analyze(m: &PresentedModule, job: &JobSpec) -> Result<Analysis> {
    job.validate()?;
    let mut clock = Clock::default();
    let resolution = clock.time("resolution", || resolve(m, job))?;
    analyze_resolution(m, job, resolution, clock)
}

/// Like [`analyze`], but starting from a given resolution of `m`.
pub fn analyze_with(
    m: &PresentedModule,
    job: &JobSpec,
    resolution: GradedResolution,
) -> Result<Analysis> {
    job.validate()?;
    analyze_resolution(m, job, resolution, Clock::default())
}

fn analyze_resolution(
    m: &PresentedModule,
    job: &JobSpec,
    resolution: GradedResolution,
    mut clock: Clock,
) -> Result<Analysis> {
    let tor = Arc::new(clock.time("tor complex", || build_tor_complex(&resolution))?);
    let mut report = clock.time("strands", || derham_dims_from_tor(&tor, job.window()))?;
    let characteristic = clock.time("characteristic data", || characteristic_data(m));
    let dim = dimension(&characteristic)?;
    let mut certs = Vec::new();
    if let (Some((lo, hi)), Some(p)) = (job.bound, &job.provenance) {
        certs.push(VanishingCertificate::DeclaredBound {
            lo,
            hi,
            provenance: p.clone(),
        });
    }
    if dim.holonomic {
        certs.push(VanishingCertificate::Holonomic);
    }
    let verdicts = completion_verdict(&report, job.margin(), &certs)?;
    report.set_verdicts(verdicts, job.margin());
    Ok(Analysis {
        module: m.clone(),
        resolution,
        tor,
        report,
        characteristic,
        dimension: dim,
        timings: clock.0,
    })
}

/// Number of `(strand, position)` pairs on which the completion map was
/// realized and found to be the identity.
pub fn check_completion(tor: &Arc<TorComplex>, strands: (i64, i64)) -> Result<usize> {
    let completed = CompletedTorComplex::new(Arc::clone(tor));
    if !completed.shares_matrices_with(tor) {
        return Err(Error::Invariant(
            "completed complex has its own matrices".into(),
        ));
    }
    let counts: Vec<usize> = (strands.0..=strands.1)
        .into_par_iter()
        .map(|s| -> Result<usize> {
            let p = strand(tor, s);
            let c = completed.factor(s);
            for j in 0..p.positions() {
                let m = completion_map_on_strand(&p, &c, j)?;
                if m != QMatrix::identity(m.cols()) || m.rows() != m.cols() {
                    return Err(Error::Invariant(format!(
                        "completion map on strand {s}, position {j} is not the identity"
                    )));
                }
            }
            Ok(p.positions())
        })
        .collect::<Result<_>>()?;
    Ok(counts.iter().sum())
}

pub fn oracle(m: &PresentedModule, job: &JobSpec) -> HilbertSamples {
    dimension_oracle(m, job.p_max.unwrap_or(DEFAULT_P_MAX), DEFAULT_ORACLE_CAP)
}

fn join<T: ToString>(v: &[T], sep: &str) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(sep)
}

fn ranks(res: &GradedResolution) -> String {
    let r: Vec<usize> = (0..=res.len()).map(|j| res.rank(j)).collect();
    format!(
        "{}{}",
        join(&r, " "),
        if res.is_complete() {
            ", complete"
        } else {
            ", truncated"
        }
    )
}

fn module_header(m: &PresentedModule, out: &mut String, prefix: &str) {
    let _ = writeln!(out, "{prefix}n = {}", m.nvars());
    let _ = writeln!(out, "{prefix}shifts = {}", join(m.shifts(), " "));
    for r in m.relations() {
        let _ = writeln!(out, "{prefix}rel = {r}");
    }
}

pub fn verdict_line(v: &CompletionVerdict) -> String {
    let head = format!("H^{}: injective, {}", v.i, v.kind);
    match &v.certificate {
        Some(c) => format!("{head}; certificate: {c}; {}", v.reason),
        None => format!("{head}; {}", v.reason),
    }
}

fn timings(out: &mut String, t: &[(&'static str, Duration)], prefix: &str) {
    for (stage, d) in t {
        let _ = writeln!(
            out,
            "{prefix}timing {stage} = {:.3} ms",
            d.as_secs_f64() * 1e3
        );
    }
}

pub fn render_resolution(m: &PresentedModule, res: &GradedResolution, format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Text => {
            module_header(m, &mut out, "");
            let _ = write!(out, "{res}");
            let _ = writeln!(out, "checks: B_j B_(j+1) = 0 and homogeneity verified");
        }
        Format::Tabular => {
            module_header(m, &mut out, "# ");
            let _ = writeln!(out, "# complete = {}", res.is_complete());
            let _ = writeln!(out, "j\trank\tshifts");
            for j in 0..=res.len() {
                let _ = writeln!(out, "{j}\t{}\t{}", res.rank(j), join(res.shifts(j), " "));
            }
        }
    }
    out
}

pub fn render_derham(a: &Analysis, format: Format, with_timings: bool) -> String {
    let mut out = String::new();
    let r = &a.report;
    let (lo, hi) = r.window();
    match format {
        Format::Text => {
            module_header(&a.module, &mut out, "");
            let _ = writeln!(out, "resolution ranks: {}", ranks(&a.resolution));
            let _ = writeln!(
                out,
                "window [{lo}, {hi}], margin {}; d is the degree of the coefficient of dx_J",
                r.margin().unwrap_or(0)
            );
            let _ = write!(out, "{r}");
            let _ = writeln!(
                out,
                "dimension: {}",
                a.dimension.to_string().replace('\n', "; ")
            );
            let _ = writeln!(out, "completion maps:");
            for v in r.verdicts() {
                let _ = writeln!(out, "  {}", verdict_line(v));
            }
            if with_timings {
                timings(&mut out, &a.timings, "");
            }
        }
        Format::Tabular => {
            module_header(&a.module, &mut out, "# ");
            let _ = writeln!(out, "# resolution ranks = {}", ranks(&a.resolution));
            let _ = writeln!(out, "# window = {lo} {hi}");
            let _ = writeln!(out, "# margin = {}", r.margin().unwrap_or(0));
            let degrees: Vec<i64> = r.degrees().collect();
            let _ = writeln!(out, "i \\ d\t{}", join(&degrees, "\t"));
            for i in 0..=r.nvars() {
                let _ = writeln!(out, "{i}\t{}", join(r.row(i), "\t"));
            }
            let _ = writeln!(
                out,
                "# dimension = {}",
                a.dimension.to_string().replace('\n', "; ")
            );
            for v in r.verdicts() {
                let _ = writeln!(out, "# verdict {}", verdict_line(v));
            }
            if with_timings {
                timings(&mut out, &a.timings, "# ");
            }
        }
    }
    out
}

fn slope_text(s: Option<f64>) -> String {
    s.map_or("n/a".into(), |v| format!("{v:.3}"))
}

pub fn render_dimension(
    m: &PresentedModule,
    c: &CharIdeal,
    v: &DimensionVerdict,
    samples: &HilbertSamples,
    format: Format,
) -> String {
    let mut out = String::new();
    let prefix = if format == Format::Tabular { "# " } else { "" };
    module_header(m, &mut out, prefix);
    for l in 0..c.rank() {
        let gens: Vec<String> = c
            .leading_ideal(l)
            .iter()
            .map(|e| monomial_name(c.nvars(), e))
            .collect();
        let _ = writeln!(
            out,
            "{prefix}leading ideal {}: ({})",
            l + 1,
            gens.join(", ")
        );
    }
    match format {
        Format::Text => {
            let _ = writeln!(out, "{v}");
            let _ = writeln!(out, "filtration slices: {}", join(&samples.dims, " "));
        }
        Format::Tabular => {
            for line in v.to_string().lines() {
                let _ = writeln!(out, "# {line}");
            }
            let _ = writeln!(out, "p\tdim");
            for (p, d) in samples.dims.iter().enumerate() {
                let _ = writeln!(out, "{p}\t{d}");
            }
        }
    }
    let _ = writeln!(
        out,
        "{prefix}growth slope: local {}, extrapolated {}{}",
        slope_text(samples.slope()),
        slope_text(samples.extrapolated_slope()),
        if samples.partial {
            " (partial: resource cap reached)"
        } else {
            ""
        }
    );
    out
}

fn monomial_name(n: usize, e: &[u32]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| {
            let v = if i < n {
                format!("x{}", i + 1)
            } else {
                format!("xi{}", i - n + 1)
            };
            if k == 1 {
                v
            } else {
                format!("{v}^{k}")
            }
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

pub fn render_completion_check(
    a: &Analysis,
    checked: usize,
    format: Format,
    with_timings: bool,
) -> String {
    let mut out = render_derham(a, format, with_timings);
    let prefix = if format == Format::Tabular { "# " } else { "" };
    let (lo, hi) = a.report.window();
    let _ = writeln!(
        out,
        "{prefix}completed complex shares the matrices tau(B_j); induced map is the identity on {checked} strand positions (strands {} to {hi})",
        lo - a.report.nvars() as i64
    );
    out
}
