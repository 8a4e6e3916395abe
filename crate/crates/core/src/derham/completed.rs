//! The completed Tor complex `R̂^{β_•}`.
//!
//! The completion of a graded free module is the product of its graded
//! pieces and the differentials are the same matrices `τ(B_j)`, so each
//! degree-`s` factor of the completed complex is built from the shared
//! matrices and never materialized as power series.

use std::collections::HashMap;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{strand, StrandComplex, TorComplex};
use crate::error::{Error, Result};
use crate::linalg::{QMatrix, SparseEchelon};

#[derive(Clone, Debug)]
pub struct CompletedTorComplex {
    tor: Arc<TorComplex>,
}

impl CompletedTorComplex {
    pub fn new(tor: Arc<TorComplex>) -> Self {
        CompletedTorComplex { tor }
    }

    /// True when both complexes use one and the same set of matrices.
    pub fn shares_matrices_with(&self, tor: &Arc<TorComplex>) -> bool {
        Arc::ptr_eq(&self.tor, tor)
    }

    /// The degree-`s` factor of the product.
    pub fn factor(&self, s: i64) -> StrandComplex {
        strand(&self.tor, s)
    }
}

fn to_map(v: &[BigRational]) -> std::collections::BTreeMap<usize, BigRational> {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k, c.clone()))
        .collect()
}

/// Image columns of `T_{j+1}` and kernel vectors of `T_j` completing them to
/// a basis of the cycles.
fn homology_basis(s: &StrandComplex, j: usize) -> (Vec<Vec<BigRational>>, Vec<Vec<BigRational>>) {
    let dim = s.dim(j);
    let image: Vec<Vec<BigRational>> = if j + 1 < s.positions() {
        let m = s.matrix(j + 1);
        (0..m.cols()).map(|c| m.column(c)).collect()
    } else {
        Vec::new()
    };
    let cycles: Vec<Vec<BigRational>> = if j == 0 {
        (0..dim)
            .map(|k| {
                let mut v = vec![BigRational::zero(); dim];
                v[k] = BigRational::one();
                v
            })
            .collect()
    } else {
        s.matrix(j).kernel_basis()
    };
    let mut ech = SparseEchelon::new();
    for v in &image {
        ech.insert(to_map(v));
    }
    let reps = cycles
        .into_iter()
        .filter(|v| ech.insert(to_map(v)))
        .collect();
    (image, reps)
}

/// Matrix of the map induced on `h_j` by the inclusion of the degree-`s`
/// piece of the polynomial complex into the completed complex, in bases of
/// representatives chosen independently on both sides. Returns an error if
/// the inclusion is not a chain map or a cycle fails to map to a cycle.
pub fn completion_map_on_strand(
    poly: &StrandComplex,
    completed: &StrandComplex,
    j: usize,
) -> Result<QMatrix> {
    if poly.degree() != completed.degree() || poly.positions() != completed.positions() {
        return Err(Error::Invariant("strands of different shape".into()));
    }
    let inclusion = |k: usize| -> Result<QMatrix> {
        let index: HashMap<&(usize, Vec<u32>), usize> = completed
            .basis(k)
            .iter()
            .enumerate()
            .map(|(i, b)| (b, i))
            .collect();
        let mut m = QMatrix::zeros(completed.dim(k), poly.dim(k));
        for (c, b) in poly.basis(k).iter().enumerate() {
            let r = *index
                .get(b)
                .ok_or_else(|| Error::Invariant(format!("basis element {b:?} has no image")))?;
            m.set(r, c, BigRational::one());
        }
        Ok(m)
    };
    for k in 1..poly.positions() {
        let lhs = completed.matrix(k).mul(&inclusion(k)?);
        let rhs = inclusion(k - 1)?.mul(poly.matrix(k));
        if lhs != rhs {
            return Err(Error::Invariant(format!(
                "inclusion does not commute with T_{k} in strand {}",
                poly.degree()
            )));
        }
    }
    let incl = inclusion(j)?;
    let (_, src_reps) = homology_basis(poly, j);
    let (tgt_image, tgt_reps) = homology_basis(completed, j);
    let h = tgt_reps.len();
    let mut cols = tgt_image.clone();
    cols.extend(tgt_reps.iter().cloned());
    let system = QMatrix::from_columns(&cols, completed.dim(j));
    let mut out = QMatrix::zeros(h, src_reps.len());
    for (c, z) in src_reps.iter().enumerate() {
        let image = incl.mul_vec(z);
        let coeffs = system
            .solve(&image)
            .ok_or_else(|| Error::Invariant("a cycle maps outside the cycles".into()))?;
        for r in 0..h {
            out.set(r, c, coeffs[tgt_image.len() + r].clone());
        }
    }
    Ok(out)
}
