//! De Rham cohomology of graded `D_n`-modules through the Tor complex
//! `R^τ ⊗_D F_•`, strand by strand, plus the completion verdicts.
//!
//! Degrees in a [`DeRhamReport`] are coefficient degrees: a class `m dx_J`
//! with `m` homogeneous is filed under `deg m`. Under the identification
//! `Ω^i(M) ≅ ⊕ M(|J|)` this means `H^i_dR(M)_d = h_{n-i}(strand d - (n-i))`.

mod completed;
mod explicit;
mod verdict;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::groebner::GradedResolution;
use crate::linalg::QMatrix;
use crate::weyl::{monomials_of_degree, Homogeneity, WeylElement};

pub use completed::{completion_map_on_strand, CompletedTorComplex};
pub use explicit::{explicit_strand_oracle, ExplicitGradedModule};
pub use verdict::{
    completion_verdict, Certificate, CompletionVerdict, VanishingCertificate, VerdictKind,
};

/// `R^{β_•}` with differentials `T_j = τ(B_j)`. Position `j` is
/// `⊕_l R(γ_{l,j})`, `R(γ)_s = R_{γ+s}`, and `T_j` sends `(p_r)` to
/// `q_l = Σ_r T_j[r][l](p_r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorComplex {
    n: usize,
    shifts: Vec<Vec<i64>>,
    maps: Vec<Vec<Vec<WeylElement>>>,
    complete: bool,
    zero_module: bool,
}

/// Transposes every matrix of `res` and checks `T_j T_{j+1} = 0` as
/// operator matrices.
pub fn build_tor_complex(res: &GradedResolution) -> Result<TorComplex> {
    let maps: Vec<Vec<Vec<WeylElement>>> = res
        .maps()
        .iter()
        .map(|rows| {
            rows.iter()
                .map(|r| r.components().iter().map(WeylElement::transpose).collect())
                .collect()
        })
        .collect();
    let tor = TorComplex {
        n: res.nvars(),
        shifts: (0..=res.len()).map(|j| res.shifts(j).to_vec()).collect(),
        maps,
        complete: res.is_complete(),
        zero_module: presents_zero(res),
    };
    tor.verify_square_zero()?;
    Ok(tor)
}

/// A reduced Gröbner basis of the whole of `F_0` is its standard basis.
fn presents_zero(res: &GradedResolution) -> bool {
    let rank = res.rank(0);
    if res.is_empty() || res.rank(1) != rank {
        return false;
    }
    res.map(1)
        .iter()
        .enumerate()
        .all(|(r, row)| *row == crate::groebner::FreeElement::unit(res.nvars(), rank, r))
}

impl TorComplex {
    /// True when the resolved module is zero.
    pub fn presents_zero_module(&self) -> bool {
        self.zero_module
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    /// Number of differentials `L`.
    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// `β_j`, zero past the end of a complete complex.
    pub fn rank(&self, j: usize) -> usize {
        self.shifts.get(j).map_or(0, Vec::len)
    }

    /// Whether `β_j` is known: inside the computed range, or anywhere for a
    /// complete complex.
    pub fn rank_known(&self, j: usize) -> bool {
        self.complete || j <= self.len()
    }

    pub fn shifts(&self, j: usize) -> &[i64] {
        self.shifts.get(j).map_or(&[], Vec::as_slice)
    }

    /// Entry `(r, l)` of `T_j`.
    pub fn entry(&self, j: usize, r: usize, l: usize) -> &WeylElement {
        &self.maps[j - 1][r][l]
    }

    #[allow(clippy::needless_range_loop)]
    fn verify_square_zero(&self) -> Result<()> {
        for j in 1..self.len() {
            let (next, cur) = (&self.maps[j], &self.maps[j - 1]);
            for (k, next_row) in next.iter().enumerate() {
                for l in 0..self.rank(j - 1) {
                    let mut acc = WeylElement::zero(self.n);
                    for (r, c) in next_row.iter().enumerate() {
                        if !c.is_zero() {
                            acc = &acc + &(&cur[r][l] * c);
                        }
                    }
                    if !acc.is_zero() {
                        return Err(Error::Invariant(format!(
                            "T_{j} T_{} is nonzero at ({}, {}): {acc}",
                            j + 1,
                            k + 1,
                            l + 1
                        )));
                    }
                }
            }
        }
        for j in 1..=self.len() {
            for (r, row) in self.maps[j - 1].iter().enumerate() {
                for (l, e) in row.iter().enumerate() {
                    let want = self.shifts[j - 1][l] - self.shifts[j][r];
                    match e.homogeneous_degree() {
                        Homogeneity::Zero => {}
                        Homogeneity::Degree(d) if d == want => {}
                        _ => {
                            return Err(Error::Invariant(format!(
                                "entry ({}, {}) of T_{j} is not of degree {want}",
                                r + 1,
                                l + 1
                            )))
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// One graded piece of the Tor complex: finite-dimensional in every
/// position. `matrices[j-1]` is `T_j` as a column-vector matrix from
/// position `j` to position `j - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrandComplex {
    degree: i64,
    bases: Vec<Vec<(usize, Vec<u32>)>>,
    matrices: Vec<QMatrix>,
}

impl StrandComplex {
    pub fn degree(&self) -> i64 {
        self.degree
    }

    /// Positions `0..=L`.
    pub fn positions(&self) -> usize {
        self.bases.len()
    }

    pub fn dim(&self, j: usize) -> usize {
        self.bases.get(j).map_or(0, Vec::len)
    }

    /// Basis at position `j`: component index and exponent vector.
    pub fn basis(&self, j: usize) -> &[(usize, Vec<u32>)] {
        &self.bases[j]
    }

    /// `T_j` restricted to the strand, `1 <= j < positions()`.
    pub fn matrix(&self, j: usize) -> &QMatrix {
        &self.matrices[j - 1]
    }

    pub fn matrices(&self) -> &[QMatrix] {
        &self.matrices
    }
}

fn strand_basis(n: usize, shifts: &[i64], s: i64) -> Vec<(usize, Vec<u32>)> {
    shifts
        .iter()
        .enumerate()
        .flat_map(|(l, g)| {
            monomials_of_degree(n, g + s)
                .into_iter()
                .map(move |e| (l, e))
        })
        .collect()
}

/// The degree-`s` strand of `tor`.
pub fn strand(tor: &TorComplex, s: i64) -> StrandComplex {
    let bases: Vec<Vec<(usize, Vec<u32>)>> = (0..=tor.len())
        .map(|j| strand_basis(tor.n, tor.shifts(j), s))
        .collect();
    let mut matrices = Vec::with_capacity(tor.len());
    for j in 1..=tor.len() {
        let (src, dst) = (&bases[j], &bases[j - 1]);
        let index: HashMap<(usize, &[u32]), usize> = dst
            .iter()
            .enumerate()
            .map(|(k, (l, e))| ((*l, e.as_slice()), k))
            .collect();
        let mut m = QMatrix::zeros(dst.len(), src.len());
        for (col, (r, e)) in src.iter().enumerate() {
            for (l, op) in tor.maps[j - 1][*r].iter().enumerate() {
                if op.is_zero() {
                    continue;
                }
                for (img, c) in op.apply_to_monomial(e) {
                    let row = index[&(l, img.as_slice())];
                    m.add_at(row, col, &c);
                }
            }
        }
        matrices.push(m);
    }
    StrandComplex {
        degree: s,
        bases,
        matrices,
    }
}

/// `h_j = dim P_j - rank T_j - rank T_{j+1}` for every position of the
/// strand, treated as a finite complex.
pub fn strand_homology(s: &StrandComplex) -> Result<Vec<usize>> {
    let ranks: Vec<usize> = s.matrices.iter().map(QMatrix::rank).collect();
    let mut out = Vec::with_capacity(s.positions());
    for j in 0..s.positions() {
        let out_rank = if j == 0 { 0 } else { ranks[j - 1] };
        let in_rank = ranks.get(j).copied().unwrap_or(0);
        let h = s.dim(j) as i64 - out_rank as i64 - in_rank as i64;
        if h < 0 {
            return Err(Error::Invariant(format!(
                "negative homology h_{j} = {h} in strand {}: dim {}, ranks {out_rank} and {in_rank}",
                s.degree,
                s.dim(j)
            )));
        }
        out.push(h as usize);
    }
    Ok(out)
}

/// Checks `T_j T_{j+1} = 0` on the strand matrices and the Euler identity
/// `Σ (-1)^j dim P_j = Σ (-1)^j h_j`.
pub fn verify_strand(s: &StrandComplex, h: &[usize]) -> Result<()> {
    for j in 1..s.matrices.len() {
        if !s.matrices[j - 1].mul(&s.matrices[j]).is_zero() {
            return Err(Error::Invariant(format!(
                "strand {}: T_{j} T_{} is not zero",
                s.degree,
                j + 1
            )));
        }
    }
    let alt = |v: &mut dyn Iterator<Item = usize>| -> i64 {
        v.enumerate()
            .map(|(j, d)| if j % 2 == 0 { d as i64 } else { -(d as i64) })
            .sum()
    };
    let chi_p = alt(&mut (0..s.positions()).map(|j| s.dim(j)));
    let chi_h = alt(&mut h.iter().copied());
    if chi_p != chi_h {
        return Err(Error::Invariant(format!(
            "strand {}: Euler characteristic {chi_p} of the chains differs from {chi_h} of the homology",
            s.degree
        )));
    }
    Ok(())
}

/// Homology of one strand, verified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrandData {
    pub degree: i64,
    pub dims: Vec<usize>,
    pub homology: Vec<usize>,
}

/// Computes and verifies the strands `lo..=hi` in parallel, ordered by degree.
pub fn strand_table(tor: &TorComplex, lo: i64, hi: i64) -> Result<Vec<StrandData>> {
    (lo..=hi)
        .into_par_iter()
        .map(|s| {
            let st = strand(tor, s);
            let h = strand_homology(&st)?;
            verify_strand(&st, &h)?;
            Ok(StrandData {
                degree: s,
                dims: (0..st.positions()).map(|j| st.dim(j)).collect(),
                homology: h,
            })
        })
        .collect()
}

/// Dimensions of `H^i_dR(M)_d` over a window, with the Betti data needed by
/// the verdicts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeRhamReport {
    n: usize,
    window: (i64, i64),
    dims: Vec<Vec<usize>>,
    betti: Vec<Option<usize>>,
    zero_module: bool,
    strands: Vec<StrandData>,
    verdicts: Vec<CompletionVerdict>,
    margin: Option<usize>,
}

impl DeRhamReport {
    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn window(&self) -> (i64, i64) {
        self.window
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> {
        self.window.0..=self.window.1
    }

    /// `dim H^i_dR(M)_d`; zero outside the window.
    pub fn dim(&self, i: usize, d: i64) -> usize {
        if d < self.window.0 || d > self.window.1 || i > self.n {
            return 0;
        }
        self.dims[i][(d - self.window.0) as usize]
    }

    /// Row `i` of the table over the window.
    pub fn row(&self, i: usize) -> &[usize] {
        &self.dims[i]
    }

    pub fn total(&self, i: usize) -> usize {
        self.dims[i].iter().sum()
    }

    /// Degrees with nonzero `H^i` inside the window.
    pub fn support(&self, i: usize) -> Vec<i64> {
        self.degrees().filter(|&d| self.dim(i, d) > 0).collect()
    }

    /// `β_{n-i}` when it is known.
    pub fn betti_for(&self, i: usize) -> Option<usize> {
        self.betti[self.n - i]
    }

    pub fn presents_zero_module(&self) -> bool {
        self.zero_module
    }

    pub fn strands(&self) -> &[StrandData] {
        &self.strands
    }

    pub fn verdicts(&self) -> &[CompletionVerdict] {
        &self.verdicts
    }

    pub fn margin(&self) -> Option<usize> {
        self.margin
    }

    pub fn set_verdicts(&mut self, verdicts: Vec<CompletionVerdict>, margin: usize) {
        self.verdicts = verdicts;
        self.margin = Some(margin);
    }
}

/// `H^i_dR(M)_d = h_{n-i}(strand d - (n-i))` for `d` in the window.
pub fn derham_dims(res: &GradedResolution, window: (i64, i64)) -> Result<DeRhamReport> {
    let tor = build_tor_complex(res)?;
    derham_dims_from_tor(&tor, window)
}

pub fn derham_dims_from_tor(tor: &TorComplex, window: (i64, i64)) -> Result<DeRhamReport> {
    let (lo, hi) = window;
    if lo > hi {
        return Err(Error::InvalidWindow { lo, hi });
    }
    let n = tor.nvars();
    if !tor.is_complete() && tor.len() < n + 1 {
        return Err(Error::ResolutionTooShort {
            have: tor.len(),
            need: n + 1,
        });
    }
    let strands = strand_table(tor, lo - n as i64, hi)?;
    let by_degree: BTreeMap<i64, &StrandData> = strands.iter().map(|s| (s.degree, s)).collect();
    let dims = (0..=n)
        .map(|i| {
            let j = n - i;
            (lo..=hi)
                .map(|d| {
                    let s = by_degree[&(d - j as i64)];
                    s.homology.get(j).copied().unwrap_or(0)
                })
                .collect()
        })
        .collect();
    let betti = (0..=n)
        .map(|j| tor.rank_known(j).then(|| tor.rank(j)))
        .collect();
    Ok(DeRhamReport {
        n,
        window,
        dims,
        betti,
        zero_module: tor.presents_zero_module(),
        strands,
        verdicts: Vec::new(),
        margin: None,
    })
}

impl fmt::Display for DeRhamReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self
            .dims
            .iter()
            .flatten()
            .map(|v| v.to_string().len())
            .chain(self.degrees().map(|d| d.to_string().len()))
            .max()
            .unwrap_or(1);
        write!(f, "{:>6} ", "d")?;
        for d in self.degrees() {
            write!(f, " {d:>w$}")?;
        }
        writeln!(f, "   total")?;
        for i in 0..=self.n {
            write!(f, "{:>6} ", format!("H^{i}"))?;
            for v in &self.dims[i] {
                write!(f, " {v:>w$}")?;
            }
            writeln!(f, "   {}", self.total(i))?;
        }
        Ok(())
    }
}
