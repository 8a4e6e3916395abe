//! Left Gröbner bases in free `D_n`-modules, Schreyer syzygies and graded
//! free resolutions.

mod buchberger;
mod modpoly;
mod resolution;

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;

use crate::error::Result;
use crate::weyl::{Homogeneity, WeylElement, WeylMonomial};

pub use resolution::{graded_free_resolution, GradedResolution, PresentedModule};

use modpoly::{Key, ModPoly};

/// Monomial orders on `D_n`, extended term-over-position to free modules
/// (ties between equal monomials go to the smaller component index).
///
/// Both orders refine total degree or operator order, so commutator terms
/// are always smaller than the product of leading monomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    /// Degree reverse lexicographic on `(x_1..x_n, d_1..d_n)`.
    DegRevLex,
    /// Operator order `|b|` first, then degrevlex.
    OrderFiltration,
}

impl MonomialOrder {
    pub(crate) fn key(&self, comp: usize, m: &WeylMonomial) -> Key {
        let exps = m.exponents();
        let mut k = Vec::with_capacity(exps.len() + 3);
        if *self == MonomialOrder::OrderFiltration {
            k.push(m.order() as i64);
        }
        k.push(m.total_degree() as i64);
        k.extend(exps.iter().rev().map(|&e| -(e as i64)));
        k.push(-(comp as i64));
        k.into()
    }

    pub fn cmp_monomials(&self, a: &WeylMonomial, b: &WeylMonomial) -> Ordering {
        self.key(0, a).cmp(&self.key(0, b))
    }

    pub fn cmp_terms(&self, a: (usize, &WeylMonomial), b: (usize, &WeylMonomial)) -> Ordering {
        self.key(a.0, a.1).cmp(&self.key(b.0, b.1))
    }
}

/// An element of the free module `D^rank`, one Weyl element per basis vector.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FreeElement {
    n: usize,
    comps: Vec<WeylElement>,
}

impl FreeElement {
    pub fn new(n: usize, comps: Vec<WeylElement>) -> Self {
        assert!(
            comps.iter().all(|c| c.nvars() == n),
            "component over the wrong algebra"
        );
        FreeElement { n, comps }
    }

    pub fn zero(n: usize, rank: usize) -> Self {
        FreeElement::new(n, vec![WeylElement::zero(n); rank])
    }

    /// Basis vector `e_l`.
    pub fn unit(n: usize, rank: usize, l: usize) -> Self {
        let mut f = FreeElement::zero(n, rank);
        f.comps[l] = WeylElement::one(n);
        f
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.comps.len()
    }

    pub fn components(&self) -> &[WeylElement] {
        &self.comps
    }

    pub fn component(&self, l: usize) -> &WeylElement {
        &self.comps[l]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(WeylElement::is_zero)
    }

    pub fn add(&self, other: &FreeElement) -> FreeElement {
        assert_eq!(self.rank(), other.rank());
        FreeElement::new(
            self.n,
            self.comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn scale(&self, c: &BigRational) -> FreeElement {
        FreeElement::new(self.n, self.comps.iter().map(|a| a.scale(c)).collect())
    }

    /// `f * self`, the left module action.
    pub fn left_mul(&self, f: &WeylElement) -> FreeElement {
        FreeElement::new(self.n, self.comps.iter().map(|a| f * a).collect())
    }

    /// Degree of a homogeneous element of `⊕ D(γ_l)`: a component `f_l e_l`
    /// has degree `deg f_l - γ_l`.
    pub fn homogeneous_degree(&self, shifts: &[i64]) -> Homogeneity {
        assert_eq!(shifts.len(), self.rank());
        let mut found = None;
        for (c, &g) in self.comps.iter().zip(shifts) {
            match c.homogeneous_degree() {
                Homogeneity::Zero => {}
                Homogeneity::Mixed => return Homogeneity::Mixed,
                Homogeneity::Degree(d) => {
                    let e = d - g;
                    match found {
                        None => found = Some(e),
                        Some(prev) if prev != e => return Homogeneity::Mixed,
                        _ => {}
                    }
                }
            }
        }
        found.map_or(Homogeneity::Zero, Homogeneity::Degree)
    }

    /// `sum_l self_l * rows[l]`: the image of `self` under the map whose
    /// matrix has the given rows.
    pub fn combine(&self, rows: &[FreeElement], target_rank: usize) -> FreeElement {
        assert_eq!(self.rank(), rows.len());
        let mut acc = FreeElement::zero(self.n, target_rank);
        for (c, row) in self.comps.iter().zip(rows) {
            if !c.is_zero() {
                acc = acc.add(&row.left_mul(c));
            }
        }
        acc
    }
}

impl fmt::Display for FreeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.len() == 1 {
            return write!(f, "{}", self.comps[0]);
        }
        f.write_str("[")?;
        for (i, c) in self.comps.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

fn module_shape(gens: &[FreeElement]) -> Option<(usize, usize)> {
    let first = gens.first()?;
    let (n, rank) = (first.nvars(), first.rank());
    assert!(
        gens.iter().all(|g| g.nvars() == n && g.rank() == rank),
        "generators live in different free modules"
    );
    Some((n, rank))
}

/// Reduced left Gröbner basis of the submodule generated by `gens`.
///
/// The output is sorted by increasing leading term and every element has
/// leading coefficient one.
pub fn left_groebner(gens: &[FreeElement], order: MonomialOrder) -> Vec<FreeElement> {
    let Some((n, rank)) = module_shape(gens) else {
        return Vec::new();
    };
    let polys = gens.iter().map(|g| ModPoly::from_free(g, order)).collect();
    buchberger::groebner(polys)
        .iter()
        .map(|p| p.to_free(n, rank))
        .collect()
}

/// Fully reduced remainder of `f` modulo a Gröbner basis.
pub fn normal_form(f: &FreeElement, gb: &[FreeElement], order: MonomialOrder) -> FreeElement {
    let basis: Vec<ModPoly> = gb.iter().map(|g| ModPoly::from_free(g, order)).collect();
    let r = buchberger::reduce(ModPoly::from_free(f, order), &basis, None);
    r.to_free(f.nvars(), f.rank())
}

/// Normal forms of many elements against one basis.
pub fn normal_forms(
    fs: &[FreeElement],
    gb: &[FreeElement],
    order: MonomialOrder,
) -> Vec<FreeElement> {
    let basis: Vec<ModPoly> = gb.iter().map(|g| ModPoly::from_free(g, order)).collect();
    fs.iter()
        .map(|f| {
            buchberger::reduce(ModPoly::from_free(f, order), &basis, None)
                .to_free(f.nvars(), f.rank())
        })
        .collect()
}

/// Leading term `(component, monomial)` under `order`.
pub fn leading_term(f: &FreeElement, order: MonomialOrder) -> Option<(usize, WeylMonomial)> {
    ModPoly::from_free(f, order)
        .lead()
        .map(|t| (t.comp, t.mono.clone()))
}

/// Generators of the left syzygy module of a Gröbner basis, from the
/// standard representations of its S-polynomials.
///
/// Each output `s` satisfies `sum_l s_l * gb_l = 0`; this is checked by
/// direct multiplication.
pub fn syzygies(gb: &[FreeElement], order: MonomialOrder) -> Result<Vec<FreeElement>> {
    let Some((n, rank)) = module_shape(gb) else {
        return Ok(Vec::new());
    };
    let basis: Vec<ModPoly> = gb.iter().map(|g| ModPoly::from_free(g, order)).collect();
    let syz = buchberger::schreyer_syzygies(&basis, n)?;
    for s in &syz {
        if !s.combine(gb, rank).is_zero() {
            return Err(crate::Error::Invariant(format!(
                "syzygy {s} does not annihilate the basis"
            )));
        }
    }
    Ok(syz)
}
