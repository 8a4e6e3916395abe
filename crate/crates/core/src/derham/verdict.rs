use std::fmt;

use super::DeRhamReport;
use crate::error::{Error, Result};

/// A global fact the caller vouches for, needed before a finite window can
/// certify that the completion map is onto.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VanishingCertificate {
    /// Every `H^i_dR(M)_d` vanishes for `d` outside `[lo, hi]`.
    DeclaredBound {
        lo: i64,
        hi: i64,
        provenance: String,
    },
    /// `M` is holonomic, so every `H^i_dR(M)` is finite-dimensional.
    Holonomic,
}

/// The certificate that settled an isomorphism verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// The presentation defines the zero module.
    ZeroModule,
    /// `β_{n-i} = 0`, so `H^i` vanishes in every degree.
    ZeroBetti { position: usize },
    DeclaredBound {
        lo: i64,
        hi: i64,
        provenance: String,
    },
    /// Holonomic, with the support assumed to sit inside the window. The
    /// placement of the window is a heuristic.
    HolonomicWindow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerdictKind {
    IsomorphismCertified,
    UndeterminedWindow,
}

/// The verdict for `κ^i: H^i_dR(M) -> H^i_dR(M̂)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompletionVerdict {
    pub i: usize,
    /// Always true: on each strand the map is the identity of that strand's
    /// homology, and a direct sum injects into the product.
    pub injective: bool,
    pub kind: VerdictKind,
    pub support: Vec<i64>,
    pub certificate: Option<Certificate>,
    pub reason: String,
}

impl CompletionVerdict {
    pub fn is_certified(&self) -> bool {
        self.kind == VerdictKind::IsomorphismCertified
    }
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictKind::IsomorphismCertified => "isomorphism-certified",
            VerdictKind::UndeterminedWindow => "undetermined-window",
        })
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::ZeroModule => f.write_str("structural: the module is zero"),
            Certificate::ZeroBetti { position } => {
                write!(f, "structural: F_{position} = 0 in the resolution")
            }
            Certificate::DeclaredBound { lo, hi, provenance } => {
                write!(f, "declared vanishing outside [{lo}, {hi}] ({provenance})")
            }
            Certificate::HolonomicWindow => f.write_str(
                "holonomic, finite-dimensional cohomology; window placement is heuristic",
            ),
        }
    }
}

fn format_support(s: &[i64]) -> String {
    if s.is_empty() {
        return "none".into();
    }
    let v: Vec<String> = s.iter().map(i64::to_string).collect();
    format!("{{{}}}", v.join(", "))
}

/// Verdicts for every `i`, given a stability margin `w` and whatever
/// certificates the caller holds.
pub fn completion_verdict(
    report: &DeRhamReport,
    margin: usize,
    certificates: &[VanishingCertificate],
) -> Result<Vec<CompletionVerdict>> {
    let (lo, hi) = report.window();
    let width = (hi - lo + 1) as usize;
    if margin == 0 || 2 * margin > width {
        return Err(Error::MarginTooLarge { margin, width });
    }
    let w = margin as i64;
    let (inner_lo, inner_hi) = (lo + w, hi - w);
    let mut out = Vec::with_capacity(report.nvars() + 1);
    for i in 0..=report.nvars() {
        let support = report.support(i);
        let inside = support.iter().all(|&d| inner_lo <= d && d <= inner_hi);
        let position = report.nvars() - i;
        let (kind, certificate, reason) = if report.presents_zero_module() {
            (
                VerdictKind::IsomorphismCertified,
                Some(Certificate::ZeroModule),
                "H^i vanishes identically".to_string(),
            )
        } else if report.betti_for(i) == Some(0) {
            (
                VerdictKind::IsomorphismCertified,
                Some(Certificate::ZeroBetti { position }),
                "H^i vanishes identically".to_string(),
            )
        } else if !inside {
            (
                VerdictKind::UndeterminedWindow,
                None,
                format!(
                    "support {} comes within the margin {margin} of the window [{lo}, {hi}]",
                    format_support(&support)
                ),
            )
        } else {
            decide_with(certificates, &support, (lo, hi))
        };
        out.push(CompletionVerdict {
            i,
            injective: true,
            kind,
            support,
            certificate,
            reason,
        });
    }
    Ok(out)
}

fn decide_with(
    certificates: &[VanishingCertificate],
    support: &[i64],
    (lo, hi): (i64, i64),
) -> (VerdictKind, Option<Certificate>, String) {
    let mut notes = Vec::new();
    for c in certificates {
        match c {
            VanishingCertificate::DeclaredBound {
                lo: blo,
                hi: bhi,
                provenance,
            } => {
                if *blo < lo || *bhi > hi {
                    notes.push(format!(
                        "declared bound [{blo}, {bhi}] is not inside the window"
                    ));
                } else if support.iter().any(|d| d < blo || d > bhi) {
                    notes.push(format!(
                        "declared bound [{blo}, {bhi}] contradicts the observed support {}",
                        format_support(support)
                    ));
                } else {
                    return (
                        VerdictKind::IsomorphismCertified,
                        Some(Certificate::DeclaredBound {
                            lo: *blo,
                            hi: *bhi,
                            provenance: provenance.clone(),
                        }),
                        format!("support {} inside the window", format_support(support)),
                    );
                }
            }
            VanishingCertificate::Holonomic => {
                return (
                    VerdictKind::IsomorphismCertified,
                    Some(Certificate::HolonomicWindow),
                    format!("support {} inside the window", format_support(support)),
                );
            }
        }
    }
    if notes.is_empty() {
        notes.push("no vanishing certificate outside the window".into());
    }
    (
        VerdictKind::UndeterminedWindow,
        None,
        format!(
            "observed support {}; {}",
            format_support(support),
            notes.join("; ")
        ),
    )
}
