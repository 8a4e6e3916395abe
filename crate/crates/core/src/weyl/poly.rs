use num_rational::BigRational;
use num_traits::Zero;

use super::{WeylElement, WeylMonomial};
use crate::error::{Error, Result};

/// An element of `R = Q[x_1..x_n]`, stored as a Weyl element free of `d`'s.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Polynomial(WeylElement);

impl Polynomial {
    pub fn zero(n: usize) -> Self {
        Polynomial(WeylElement::zero(n))
    }

    pub fn from_element(f: WeylElement) -> Result<Self> {
        if !f.is_polynomial() {
            return Err(Error::Job(format!("{f} is not a polynomial")));
        }
        Ok(Polynomial(f))
    }

    pub fn monomial(exps: &[u32], c: BigRational) -> Self {
        let zeros = vec![0; exps.len()];
        Polynomial(WeylElement::from_monomial(
            WeylMonomial::new(exps, &zeros),
            c,
        ))
    }

    pub fn nvars(&self) -> usize {
        self.0.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn as_element(&self) -> &WeylElement {
        &self.0
    }

    pub(crate) fn add_term(&mut self, exps: Vec<u32>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let zeros = vec![0; exps.len()];
        self.0.add_term(WeylMonomial::new(&exps, &zeros), c);
    }

    /// `(exponent vector, coefficient)` pairs in descending canonical order.
    pub fn monomials(&self) -> Vec<(Vec<u32>, BigRational)> {
        self.0
            .terms()
            .map(|(m, c)| (m.x_exps().to_vec(), c.clone()))
            .collect()
    }

    /// Homogeneous component of degree `d`.
    pub fn component(&self, d: i64) -> Polynomial {
        let n = self.nvars();
        Polynomial(WeylElement::from_terms(
            n,
            self.0
                .terms()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone())),
        ))
    }
}

impl std::fmt::Display for Polynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// Exponent vectors of all monomials of degree `d` in `n` variables, in
/// lexicographically descending order. Empty for `d < 0`.
pub fn monomials_of_degree(n: usize, d: i64) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    if d < 0 {
        return out;
    }
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    let mut cur = vec![0u32; n];
    fill(&mut cur, 0, d as u32, &mut out);
    out
}

fn fill(cur: &mut [u32], i: usize, left: u32, out: &mut Vec<Vec<u32>>) {
    if i + 1 == cur.len() {
        cur[i] = left;
        out.push(cur.to_vec());
        return;
    }
    for e in (0..=left).rev() {
        cur[i] = e;
        fill(cur, i + 1, left - e, out);
    }
}
