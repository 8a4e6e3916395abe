//! Characteristic data of a presented module: symbols of an order-filtration
//! Gröbner basis, the Krull dimension of the associated graded module and
//! the holonomicity verdict.
//!
//! The dimension of `M` equals the dimension of its completion, so the
//! verdict computed here is reported for both.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::groebner::{
    leading_term, left_groebner, normal_forms, FreeElement, MonomialOrder, PresentedModule,
};
use crate::linalg::SparseEchelon;
use crate::weyl::{monomials_of_degree, q, SymbolPolynomial, WeylElement, WeylMonomial};

/// Symbols of an order-filtration Gröbner basis and the leading monomials
/// per component of `F_0`, read in `Q[x, ξ]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharIdeal {
    n: usize,
    rank: usize,
    groebner: Vec<FreeElement>,
    symbols: Vec<Vec<SymbolPolynomial>>,
    leading: Vec<Vec<Vec<u32>>>,
}

impl CharIdeal {
    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn groebner_basis(&self) -> &[FreeElement] {
        &self.groebner
    }

    /// For each basis row, the top-order part of every component.
    pub fn symbols(&self) -> &[Vec<SymbolPolynomial>] {
        &self.symbols
    }

    /// Minimal generators of the leading monomial ideal of component `l`,
    /// as exponent vectors `(x_1..x_n, ξ_1..ξ_n)`.
    pub fn leading_ideal(&self, l: usize) -> &[Vec<u32>] {
        &self.leading[l]
    }
}

fn row_symbol(row: &FreeElement) -> Vec<SymbolPolynomial> {
    let n = row.nvars();
    let top = row.components().iter().filter_map(WeylElement::order).max();
    row.components()
        .iter()
        .map(|c| match (c.order(), top) {
            (Some(o), Some(t)) if o == t => c.order_symbol().expect("nonzero component"),
            _ => SymbolPolynomial::zero(n),
        })
        .collect()
}

fn minimalize(mut gens: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
    gens.sort_by_key(|e| (e.iter().sum::<u32>(), e.clone()));
    gens.dedup();
    let mut out: Vec<Vec<u32>> = Vec::new();
    for g in gens {
        if !out.iter().any(|h| h.iter().zip(&g).all(|(a, b)| a <= b)) {
            out.push(g);
        }
    }
    out
}

/// Order-filtration Gröbner basis of the relations and its symbol data.
pub fn characteristic_data(m: &PresentedModule) -> CharIdeal {
    let n = m.nvars();
    let rank = m.shifts().len();
    let gb = left_groebner(m.relations(), MonomialOrder::OrderFiltration);
    let mut leading = vec![Vec::new(); rank];
    for g in &gb {
        let (l, mono) =
            leading_term(g, MonomialOrder::OrderFiltration).expect("nonzero basis element");
        leading[l].push(mono.exponents().to_vec());
    }
    CharIdeal {
        n,
        rank,
        symbols: gb.iter().map(row_symbol).collect(),
        groebner: gb,
        leading: leading.into_iter().map(minimalize).collect(),
    }
}

/// Dimension of `gr M` with the witness that realizes it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionVerdict {
    pub n: usize,
    /// Krull dimension; `None` for the zero module.
    pub dimension: Option<usize>,
    pub holonomic: bool,
    /// Component and a maximal set of variables independent modulo its
    /// leading ideal, as indices into `(x_1..x_n, ξ_1..ξ_n)`.
    pub certificate: Option<(usize, Vec<usize>)>,
    /// Per-component dimensions, `None` where the component vanishes.
    pub components: Vec<Option<usize>>,
}

impl DimensionVerdict {
    pub fn variable_name(&self, k: usize) -> String {
        if k < self.n {
            format!("x{}", k + 1)
        } else {
            format!("xi{}", k - self.n + 1)
        }
    }
}

impl fmt::Display for DimensionVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.dimension {
            None => writeln!(f, "d = -1 (zero module), holonomic")?,
            Some(d) => writeln!(
                f,
                "d = {d}, {}",
                if self.holonomic {
                    "holonomic"
                } else {
                    "not holonomic"
                }
            )?,
        }
        if let Some((l, vars)) = &self.certificate {
            let names: Vec<String> = vars.iter().map(|&k| self.variable_name(k)).collect();
            writeln!(
                f,
                "certificate: component {} is free on {{{}}} modulo its leading ideal",
                l + 1,
                names.join(", ")
            )?;
        }
        write!(f, "valid for the completion by dimension equality")
    }
}

/// Largest variable subset containing the support of no generator.
fn independent_set(nvars: usize, gens: &[Vec<u32>]) -> Option<Vec<usize>> {
    if gens.iter().any(|g| g.iter().all(|&e| e == 0)) {
        return None;
    }
    let supports: Vec<u64> = gens
        .iter()
        .map(|g| {
            g.iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .fold(0u64, |acc, (k, _)| acc | (1 << k))
        })
        .collect();
    let mut best: Option<u64> = None;
    for mask in 0u64..(1 << nvars) {
        if supports.iter().any(|s| s & !mask == 0) {
            continue;
        }
        let better = match best {
            None => true,
            Some(b) => mask.count_ones() > b.count_ones(),
        };
        if better {
            best = Some(mask);
        }
    }
    best.map(|m| (0..nvars).filter(|k| m & (1 << k) != 0).collect())
}

/// Krull dimension of `gr M`, the maximum over components of
/// `dim Q[x, ξ] / in(component)`, and the holonomicity verdict.
pub fn dimension(c: &CharIdeal) -> Result<DimensionVerdict> {
    let nv = 2 * c.n;
    if nv > 24 {
        return Err(Error::Job(format!(
            "{} variables is too many for the dimension search",
            c.n
        )));
    }
    let sets: Vec<Option<Vec<usize>>> = c
        .leading
        .par_iter()
        .map(|gens| independent_set(nv, gens))
        .collect();
    let components: Vec<Option<usize>> = sets.iter().map(|s| s.as_ref().map(Vec::len)).collect();
    let mut best: Option<(usize, Vec<usize>)> = None;
    for (l, s) in sets.into_iter().enumerate() {
        if let Some(s) = s {
            if best.as_ref().is_none_or(|(_, b)| s.len() > b.len()) {
                best = Some((l, s));
            }
        }
    }
    let dimension = best.as_ref().map(|(_, s)| s.len());
    if let Some(d) = dimension {
        if d < c.n {
            return Err(Error::Invariant(format!(
                "dimension {d} of a nonzero module over D_{} violates the Bernstein inequality",
                c.n
            )));
        }
    }
    Ok(DimensionVerdict {
        n: c.n,
        dimension,
        holonomic: dimension.is_none_or(|d| d == c.n),
        certificate: best,
        components,
    })
}

/// `dim G_p M` for the Bernstein filtration `G_p M = B_p · (generators)`,
/// `B_p` spanned by `x^a ∂^b` with `|a| + |b| <= p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertSamples {
    /// `dims[p]` for every completed `p`.
    pub dims: Vec<usize>,
    pub requested: usize,
    /// True when the resource cap stopped the computation early.
    pub partial: bool,
}

impl HilbertSamples {
    fn local_slope(&self, p: usize) -> Option<f64> {
        if p < 2 || p >= self.dims.len() {
            return None;
        }
        let (a, b) = (self.dims[p] as f64, self.dims[p - 1] as f64);
        if a <= 0.0 || b <= 0.0 {
            return None;
        }
        Some((a / b).ln() / (p as f64 / (p as f64 - 1.0)).ln())
    }

    /// Local log-log slope `ln(h(p)/h(p-1)) / ln(p/(p-1))` at the last sample.
    pub fn slope(&self) -> Option<f64> {
        self.local_slope(self.dims.len().checked_sub(1)?)
    }

    /// Richardson-extrapolated slope `2 s(p) - s(p/2)` at the last sample.
    /// The local slope of a degree-`d` polynomial is `d - c/p + O(1/p^2)`,
    /// and the combination removes the `1/p` term.
    pub fn extrapolated_slope(&self) -> Option<f64> {
        let p = self.dims.len().checked_sub(1)?;
        Some(2.0 * self.local_slope(p)? - self.local_slope(p / 2)?)
    }
}

/// Default bound on the number of normal forms computed by the oracle.
pub const DEFAULT_ORACLE_CAP: usize = 50_000;

/// Filtration dimensions by linear algebra on normal forms of all monomials
/// `x^a ∂^b e_l` of total degree at most `p`, for `p = 0..=p_max`.
pub fn dimension_oracle(m: &PresentedModule, p_max: usize, cap: usize) -> HilbertSamples {
    let n = m.nvars();
    let rank = m.shifts().len();
    let gb = left_groebner(m.relations(), MonomialOrder::DegRevLex);
    let mut ech: SparseEchelon<(usize, Vec<u32>)> = SparseEchelon::new();
    let mut dims = Vec::new();
    let mut used = 0usize;
    let mut partial = false;
    for p in 0..=p_max {
        let monos = monomials_of_degree(2 * n, p as i64);
        if used + monos.len() * rank > cap {
            partial = true;
            break;
        }
        used += monos.len() * rank;
        let batch: Vec<FreeElement> = (0..rank)
            .flat_map(|l| {
                monos.iter().map(move |e| {
                    let mut comps = vec![WeylElement::zero(n); rank];
                    comps[l] =
                        WeylElement::from_monomial(WeylMonomial::from_exponents(e.clone()), q(1));
                    FreeElement::new(n, comps)
                })
            })
            .collect();
        for r in normal_forms(&batch, &gb, MonomialOrder::DegRevLex) {
            let mut v = BTreeMap::new();
            for (l, c) in r.components().iter().enumerate() {
                for (mono, k) in c.terms() {
                    v.insert((l, mono.exponents().to_vec()), k.clone());
                }
            }
            ech.insert(v);
        }
        dims.push(ech.rank());
    }
    HilbertSamples {
        dims,
        requested: p_max,
        partial,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn module(n: usize, rels: &[&str]) -> PresentedModule {
        PresentedModule::parse(n, vec![0], rels).unwrap()
    }

    fn binomial(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn symbol_ideals() {
        let c = characteristic_data(&module(2, &["d1", "d2"]));
        assert_eq!(c.leading_ideal(0), &[vec![0, 0, 0, 1], vec![0, 0, 1, 0]]);
        let shown: Vec<String> = c.symbols().iter().map(|r| r[0].to_string()).collect();
        assert_eq!(shown.len(), 2);
        assert!(shown.contains(&"xi1".to_string()) && shown.contains(&"xi2".to_string()));

        let c = characteristic_data(&module(1, &[]));
        assert!(c.leading_ideal(0).is_empty());

        let c = characteristic_data(&module(1, &["x1"]));
        assert_eq!(c.symbols()[0][0].to_string(), "x1");
    }

    #[test]
    fn dimensions() {
        for n in 1..=3 {
            let rels: Vec<String> = (1..=n).map(|i| format!("d{i}")).collect();
            let m = PresentedModule::parse(n, vec![0], &rels).unwrap();
            let v = dimension(&characteristic_data(&m)).unwrap();
            assert_eq!(v.dimension, Some(n));
            assert!(v.holonomic);
            let (_, set) = v.certificate.unwrap();
            assert!(
                set.iter().all(|&k| k < n),
                "independent set is the x variables"
            );

            let v = dimension(&characteristic_data(&module(n, &[]))).unwrap();
            assert_eq!(v.dimension, Some(2 * n));
            assert!(!v.holonomic);
        }
        let v = dimension(&characteristic_data(&module(1, &["x1"]))).unwrap();
        assert_eq!((v.dimension, v.holonomic), (Some(1), true));
        let v = dimension(&characteristic_data(&module(1, &["d1", "x1*d1 + 1"]))).unwrap();
        assert_eq!((v.dimension, v.holonomic), (None, true));
    }

    #[test]
    fn redundant_generators_do_not_change_dimension() {
        let a = dimension(&characteristic_data(&module(2, &["d1", "x2"]))).unwrap();
        let b = dimension(&characteristic_data(&module(
            2,
            &["d1", "x2", "x2*d1", "d1*x1*d1"],
        )))
        .unwrap();
        assert_eq!(a.dimension, b.dimension);
    }

    #[test]
    fn rank_two_takes_the_maximum() {
        let m = PresentedModule::parse(1, vec![0, 1], &["[d1, -1]", "[0, d1]"]).unwrap();
        let v = dimension(&characteristic_data(&m)).unwrap();
        assert_eq!((v.dimension, v.holonomic), (Some(1), true));
    }

    #[test]
    fn oracle_slices() {
        let s = dimension_oracle(&module(2, &["d1", "d2"]), 6, DEFAULT_ORACLE_CAP);
        assert_eq!(
            s.dims,
            (0..=6).map(|p| binomial(p + 2, 2)).collect::<Vec<_>>()
        );
        let s = dimension_oracle(&module(1, &[]), 6, DEFAULT_ORACLE_CAP);
        assert_eq!(
            s.dims,
            (0..=6).map(|p| binomial(p + 2, 2)).collect::<Vec<_>>()
        );
        let s = dimension_oracle(&module(1, &["x1"]), 6, DEFAULT_ORACLE_CAP);
        assert_eq!(s.dims, (0..=6).map(|p| p + 1).collect::<Vec<_>>());
        assert!(!s.partial);
    }

    #[test]
    fn oracle_cap_flags_partial() {
        let s = dimension_oracle(&module(2, &[]), 10, 100);
        assert!(s.partial);
        assert!(s.dims.len() < 11);
        assert_eq!(s.dims[..3], [1, 5, 15]);
    }

    #[test]
    fn slopes_track_dimension() {
        let s = dimension_oracle(&module(2, &[]), 12, DEFAULT_ORACLE_CAP);
        assert!((s.extrapolated_slope().unwrap() - 4.0).abs() < 0.5);
        let s = dimension_oracle(&module(1, &["x1"]), 12, DEFAULT_ORACLE_CAP);
        assert!((s.extrapolated_slope().unwrap() - 1.0).abs() < 0.5);
    }
}
