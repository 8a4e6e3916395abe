//! Presented graded modules and their graded free resolutions.
//!
//! Shift convention: `D(γ)_d = D_{γ+d}`, so the basis vector of `D(γ)` sits
//! in degree `-γ`. Matrices act on row vectors: row `r` of `B_j` is the image
//! of the `r`-th basis vector of `F_j` in `F_{j-1}`, and entry `(r, l)` is
//! homogeneous of degree `γ_{l,j-1} - γ_{r,j}`.

use std::fmt;

use super::{left_groebner, syzygies, FreeElement, MonomialOrder};
use crate::error::{Error, Result};
use crate::weyl::{parse_row, Homogeneity};

/// A graded left `D_n`-module `coker(F_1 -> F_0)` given by generator shifts
/// and homogeneous relation rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentedModule {
    n: usize,
    shifts: Vec<i64>,
    relations: Vec<FreeElement>,
}

impl PresentedModule {
    /// Validates row lengths and homogeneity. Zero rows are dropped.
    pub fn new(n: usize, shifts: Vec<i64>, relations: Vec<FreeElement>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Job(
                "the number of variables must be at least 1".into(),
            ));
        }
        let mut kept = Vec::with_capacity(relations.len());
        for (row, r) in relations.into_iter().enumerate() {
            if r.rank() != shifts.len() {
                return Err(Error::RowLength {
                    row: row + 1,
                    got: r.rank(),
                    expected: shifts.len(),
                });
            }
            if r.nvars() != n {
                return Err(Error::VariableCount(n, r.nvars()));
            }
            match r.homogeneous_degree(&shifts) {
                Homogeneity::Zero => continue,
                Homogeneity::Degree(_) => kept.push(r),
                Homogeneity::Mixed => {
                    return Err(Error::NotHomogeneous {
                        row: row + 1,
                        detail: describe_inhomogeneity(&r, &shifts),
                    })
                }
            }
        }
        Ok(PresentedModule {
            n,
            shifts,
            relations: kept,
        })
    }

    /// Parses relation rows written in the expression syntax.
    pub fn parse<S: AsRef<str>>(n: usize, shifts: Vec<i64>, rows: &[S]) -> Result<Self> {
        let rank = shifts.len();
        let mut rels = Vec::with_capacity(rows.len());
        for (i, text) in rows.iter().enumerate() {
            let comps = parse_row(text.as_ref(), n)?;
            if comps.len() != rank {
                return Err(Error::RowLength {
                    row: i + 1,
                    got: comps.len(),
                    expected: rank,
                });
            }
            rels.push(FreeElement::new(n, comps));
        }
        Self::new(n, shifts, rels)
    }

    /// The free module `⊕ D(γ_l)` itself.
    pub fn free(n: usize, shifts: Vec<i64>) -> Result<Self> {
        Self::new(n, shifts, Vec::new())
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn shifts(&self) -> &[i64] {
        &self.shifts
    }

    pub fn relations(&self) -> &[FreeElement] {
        &self.relations
    }
}

fn describe_inhomogeneity(r: &FreeElement, shifts: &[i64]) -> String {
    let mut parts = Vec::new();
    for (l, (c, g)) in r.components().iter().zip(shifts).enumerate() {
        match c.homogeneous_degree() {
            Homogeneity::Zero => {}
            Homogeneity::Degree(d) => {
                parts.push(format!("component {} has degree {}", l + 1, d - g))
            }
            Homogeneity::Mixed => parts.push(format!("component {} ({c}) mixes degrees", l + 1)),
        }
    }
    parts.join(", ")
}

/// `0 <- F_0 <- F_1 <- ... <- F_L` with `F_j = ⊕_l D(γ_{l,j})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedResolution {
    n: usize,
    shifts: Vec<Vec<i64>>,
    maps: Vec<Vec<FreeElement>>,
    complete: bool,
}

impl GradedResolution {
    /// Assembles a resolution from explicit matrices, checking shapes,
    /// homogeneity and `B_{j+1} B_j = 0`. Exactness is the caller's claim.
    pub fn from_parts(
        n: usize,
        shifts: Vec<Vec<i64>>,
        maps: Vec<Vec<FreeElement>>,
        complete: bool,
    ) -> Result<Self> {
        if shifts.len() != maps.len() + 1 {
            return Err(Error::Invariant(format!(
                "{} shift vectors for {} maps",
                shifts.len(),
                maps.len()
            )));
        }
        let res = GradedResolution {
            n,
            shifts,
            maps,
            complete,
        };
        for j in 1..=res.len() {
            if res.maps[j - 1].len() != res.shifts[j].len() {
                return Err(Error::Invariant(format!(
                    "B_{j} has the wrong number of rows"
                )));
            }
            if res.maps[j - 1]
                .iter()
                .any(|r| r.rank() != res.shifts[j - 1].len())
            {
                return Err(Error::Invariant(format!(
                    "B_{j} has the wrong number of columns"
                )));
            }
        }
        res.verify_homogeneity()?;
        res.verify_composition()?;
        Ok(res)
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    /// Number of maps `L`.
    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// True when `F_{L+1} = 0`, i.e. the resolution is finite and fully known.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// `β_j`; zero beyond a complete resolution.
    pub fn rank(&self, j: usize) -> usize {
        self.shifts.get(j).map_or(0, Vec::len)
    }

    pub fn shifts(&self, j: usize) -> &[i64] {
        self.shifts.get(j).map_or(&[], Vec::as_slice)
    }

    /// Rows of `B_j`, `1 <= j <= L`.
    pub fn map(&self, j: usize) -> &[FreeElement] {
        &self.maps[j - 1]
    }

    pub fn maps(&self) -> &[Vec<FreeElement>] {
        &self.maps
    }

    /// Replaces one entry; only meant for fault-injection tests.
    #[doc(hidden)]
    pub fn set_entry_unchecked(
        &mut self,
        j: usize,
        row: usize,
        col: usize,
        v: crate::weyl::WeylElement,
    ) {
        let mut comps = self.maps[j - 1][row].components().to_vec();
        comps[col] = v;
        self.maps[j - 1][row] = FreeElement::new(self.n, comps);
    }

    /// Every entry of `B_j` homogeneous of degree `γ_{l,j-1} - γ_{r,j}`.
    pub fn verify_homogeneity(&self) -> Result<()> {
        for j in 1..=self.len() {
            for (r, row) in self.maps[j - 1].iter().enumerate() {
                for (l, entry) in row.components().iter().enumerate() {
                    let want = self.shifts[j - 1][l] - self.shifts[j][r];
                    match entry.homogeneous_degree() {
                        Homogeneity::Zero => {}
                        Homogeneity::Degree(d) if d == want => {}
                        other => {
                            return Err(Error::Invariant(format!(
                                "entry ({}, {}) of B_{j} is {entry}: expected degree {want}, found {other:?}",
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

    /// `B_{j+1} B_j = 0` for every consecutive pair, exactly.
    pub fn verify_composition(&self) -> Result<()> {
        for j in 1..self.len() {
            let target = self.rank(j - 1);
            for (k, s) in self.maps[j].iter().enumerate() {
                if !s.combine(&self.maps[j - 1], target).is_zero() {
                    return Err(Error::Invariant(format!(
                        "row {} of B_{} does not compose to zero with B_{j}",
                        k + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for GradedResolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ranks: Vec<String> = (0..self.shifts.len())
            .map(|j| self.rank(j).to_string())
            .collect();
        writeln!(
            f,
            "ranks: {}{}",
            ranks.join(" "),
            if self.complete { "" } else { " ..." }
        )?;
        for (j, s) in self.shifts.iter().enumerate() {
            let s: Vec<String> = s.iter().map(i64::to_string).collect();
            writeln!(f, "shifts F_{j}: [{}]", s.join(", "))?;
        }
        for (j, rows) in self.maps.iter().enumerate() {
            writeln!(f, "B_{}:", j + 1)?;
            for r in rows {
                writeln!(f, "  {r}")?;
            }
        }
        Ok(())
    }
}

fn row_shifts(rows: &[FreeElement], shifts: &[i64]) -> Result<Vec<i64>> {
    rows.iter()
        .map(|r| match r.homogeneous_degree(shifts) {
            Homogeneity::Degree(e) => Ok(-e),
            other => Err(Error::Invariant(format!(
                "computed row {r} is not homogeneous ({other:?})"
            ))),
        })
        .collect()
}

/// Resolves `m` up to homological degree `length`.
///
/// `B_1` is the reduced Gröbner basis of the relations and each `B_{j+1}` is
/// the reduced Gröbner basis of the Schreyer syzygies of `B_j`, so every
/// matrix is a Gröbner basis of the module its rows generate. Stops early,
/// marked complete, once a syzygy module vanishes.
pub fn graded_free_resolution(m: &PresentedModule, length: usize) -> Result<GradedResolution> {
    if length == 0 {
        return Err(Error::Job("resolution length must be at least 1".into()));
    }
    let order = MonomialOrder::DegRevLex;
    let n = m.nvars();
    let mut shifts = vec![m.shifts().to_vec()];
    let mut maps: Vec<Vec<FreeElement>> = Vec::new();
    let mut current = left_groebner(m.relations(), order);
    let mut complete = false;
    loop {
        if current.is_empty() {
            complete = true;
            break;
        }
        let next_shifts = row_shifts(&current, shifts.last().expect("F_0"))?;
        shifts.push(next_shifts);
        maps.push(current);
        if maps.len() == length {
            break;
        }
        let syz = syzygies(maps.last().expect("nonempty"), order)?;
        current = left_groebner(&syz, order);
    }
    GradedResolution::from_parts(n, shifts, maps, complete)
}
