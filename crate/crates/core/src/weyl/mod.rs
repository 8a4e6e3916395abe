//! Exact arithmetic in the Weyl algebra `D_n = Q<x_1..x_n, d_1..d_n>` with
//! `[d_i, x_j] = delta_ij`.
//!
//! Elements are kept in normal order: every word is rewritten as `x^a d^b`
//! with all `x`'s to the left of all `d`'s. The grading is `deg x_i = 1`,
//! `deg d_i = -1`, so `x^a d^b` has degree `|a| - |b|`.

mod parse;
mod poly;
mod symbol;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use parse::{parse, parse_row};
pub use poly::{monomials_of_degree, Polynomial};
pub use symbol::SymbolPolynomial;

/// The normally ordered word `x^a d^b`.
///
/// Exponents are stored as one slice of length `2n`: the `x`-exponents
/// followed by the `d`-exponents.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct WeylMonomial {
    exps: Box<[u32]>,
}

impl WeylMonomial {
    pub fn new(x: &[u32], d: &[u32]) -> Self {
        assert_eq!(
            x.len(),
            d.len(),
            "x and d exponent vectors differ in length"
        );
        let exps: Vec<u32> = x.iter().chain(d.iter()).copied().collect();
        WeylMonomial { exps: exps.into() }
    }

    /// Builds a monomial from the concatenated `(a, b)` exponent vector.
    pub fn from_exponents(exps: Vec<u32>) -> Self {
        assert!(exps.len().is_multiple_of(2), "exponent vector must have even length");
        WeylMonomial { exps: exps.into() }
    }

    pub fn one(n: usize) -> Self {
        WeylMonomial {
            exps: vec![0; 2 * n].into(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.exps.len() / 2
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn x_exps(&self) -> &[u32] {
        &self.exps[..self.nvars()]
    }

    pub fn d_exps(&self) -> &[u32] {
        &self.exps[self.nvars()..]
    }

    /// Grading degree `|a| - |b|`.
    pub fn degree(&self) -> i64 {
        let a: i64 = self.x_exps().iter().map(|&e| e as i64).sum();
        let b: i64 = self.d_exps().iter().map(|&e| e as i64).sum();
        a - b
    }

    /// Operator order `|b|`.
    pub fn order(&self) -> u32 {
        self.d_exps().iter().sum()
    }

    /// Total degree `|a| + |b|` (the Bernstein weight).
    pub fn total_degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Componentwise divisibility of exponent vectors.
    pub fn divides(&self, other: &WeylMonomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// Exponentwise difference `other - self`; caller guarantees divisibility.
    pub fn quotient_into(&self, other: &WeylMonomial) -> WeylMonomial {
        let exps: Vec<u32> = self
            .exps
            .iter()
            .zip(other.exps.iter())
            .map(|(a, b)| b - a)
            .collect();
        WeylMonomial { exps: exps.into() }
    }

    pub fn lcm(&self, other: &WeylMonomial) -> WeylMonomial {
        let exps: Vec<u32> = self
            .exps
            .iter()
            .zip(other.exps.iter())
            .map(|(a, b)| *a.max(b))
            .collect();
        WeylMonomial { exps: exps.into() }
    }
}

/// Degree-lexicographic on `(a, b)`. Only used for storage and display.
impl Ord for WeylMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for WeylMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn falling_factorial(c: u32, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for t in 0..k {
        acc *= BigInt::from(c - t);
    }
    acc
}

fn binomial(b: u32, k: u32) -> BigInt {
    falling_factorial(b, k) / falling_factorial(k, k)
}

/// Normal-ordered expansion of `(x^a d^b) (x^c d^e)`.
///
/// Uses `d^b x^c = sum_k C(b,k) c!/(c-k)! x^(c-k) d^(b-k)` in every variable.
pub fn mul_monomials(lhs: &WeylMonomial, rhs: &WeylMonomial) -> Vec<(WeylMonomial, BigInt)> {
    let n = lhs.nvars();
    debug_assert_eq!(n, rhs.nvars());
    let b = lhs.d_exps();
    let c = rhs.x_exps();
    let sum: Vec<u32> = lhs
        .exps
        .iter()
        .zip(rhs.exps.iter())
        .map(|(p, q)| p + q)
        .collect();
    let mut out: Vec<(Vec<u32>, BigInt)> = vec![(sum, BigInt::one())];
    for i in 0..n {
        let kmax = b[i].min(c[i]);
        if kmax == 0 {
            continue;
        }
        let mut next = Vec::with_capacity(out.len() * (kmax as usize + 1));
        for (exps, coeff) in &out {
            for k in 0..=kmax {
                let factor = binomial(b[i], k) * falling_factorial(c[i], k);
                let mut ex = exps.clone();
                ex[i] -= k;
                ex[n + i] -= k;
                next.push((ex, coeff * factor));
            }
        }
        out = next;
    }
    out.into_iter()
        .map(|(exps, c)| (WeylMonomial { exps: exps.into() }, c))
        .collect()
}

/// Whether an element is homogeneous for the grading `deg x = 1, deg d = -1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Homogeneity {
    /// The zero element, homogeneous of every degree.
    Zero,
    Degree(i64),
    Mixed,
}

impl Homogeneity {
    pub fn degree(self) -> Option<i64> {
        match self {
            Homogeneity::Degree(d) => Some(d),
            _ => None,
        }
    }
}

/// An element of `D_n` in canonical normally ordered form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct WeylElement {
    n: usize,
    terms: BTreeMap<WeylMonomial, BigRational>,
}

impl WeylElement {
    pub fn zero(n: usize) -> Self {
        WeylElement {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, BigRational::one())
    }

    pub fn constant(n: usize, c: BigRational) -> Self {
        Self::from_monomial(WeylMonomial::one(n), c)
    }

    pub fn from_monomial(m: WeylMonomial, c: BigRational) -> Self {
        let n = m.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        WeylElement { n, terms }
    }

    /// `x_i` with a zero-based index.
    pub fn x(n: usize, i: usize) -> Self {
        let mut exps = vec![0; 2 * n];
        exps[i] = 1;
        Self::from_monomial(WeylMonomial::from_exponents(exps), BigRational::one())
    }

    /// `d_i` with a zero-based index.
    pub fn d(n: usize, i: usize) -> Self {
        let mut exps = vec![0; 2 * n];
        exps[n + i] = 1;
        Self::from_monomial(WeylMonomial::from_exponents(exps), BigRational::one())
    }

    /// Collects `(monomial, coefficient)` pairs, merging duplicates and
    /// dropping zeros.
    pub fn from_terms<I>(n: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (WeylMonomial, BigRational)>,
    {
        let mut out = WeylElement::zero(n);
        for (m, c) in terms {
            assert_eq!(m.nvars(), n, "monomial has the wrong number of variables");
            out.add_term(m, c);
        }
        out
    }

    pub(crate) fn add_term(&mut self, m: WeylMonomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&WeylMonomial, &BigRational)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, m: &WeylMonomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return WeylElement::zero(self.n);
        }
        WeylElement {
            n: self.n,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::VariableCount(self.n, other.n));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    /// Product in `D_n`, rewritten to normal order.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = WeylElement::zero(self.n);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let c = c1 * c2;
                for (m, k) in mul_monomials(m1, m2) {
                    out.add_term(m, &c * BigRational::from_integer(k));
                }
            }
        }
        Ok(out)
    }

    /// Left multiplication by a single monomial with coefficient.
    pub fn left_mul_monomial(&self, c: &BigRational, t: &WeylMonomial) -> Self {
        let mut out = WeylElement::zero(self.n);
        for (m, v) in &self.terms {
            let cv = c * v;
            for (p, k) in mul_monomials(t, m) {
                out.add_term(p, &cv * BigRational::from_integer(k));
            }
        }
        out
    }

    /// The standard transposition `f d^b -> (-1)^|b| d^b f`, renormalized.
    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut out = WeylElement::zero(n);
        for (m, c) in &self.terms {
            let zeros = vec![0; n];
            let dpart = WeylMonomial::new(&zeros, m.d_exps());
            let xpart = WeylMonomial::new(m.x_exps(), &zeros);
            let c = if m.order() % 2 == 1 { -c } else { c.clone() };
            for (p, k) in mul_monomials(&dpart, &xpart) {
                out.add_term(p, &c * BigRational::from_integer(k));
            }
        }
        out
    }

    pub fn homogeneous_degree(&self) -> Homogeneity {
        let mut degs = self.terms.keys().map(WeylMonomial::degree);
        match degs.next() {
            None => Homogeneity::Zero,
            Some(d) => {
                if degs.all(|e| e == d) {
                    Homogeneity::Degree(d)
                } else {
                    Homogeneity::Mixed
                }
            }
        }
    }

    /// Maximal operator order `|b|` over all terms; `None` for zero.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(WeylMonomial::order).max()
    }

    /// The principal symbol: terms of maximal order with `d_i` read as `xi_i`.
    pub fn order_symbol(&self) -> Result<SymbolPolynomial> {
        let top = self.order().ok_or(Error::ZeroSymbol)?;
        Ok(SymbolPolynomial::from_terms(
            self.n,
            self.terms
                .iter()
                .filter(|(m, _)| m.order() == top)
                .map(|(m, c)| (m.clone(), c.clone())),
        ))
    }

    /// Action on a monomial `x^e` of `R`: `x_i` multiplies, `d_i` differentiates.
    pub fn apply_to_monomial(&self, e: &[u32]) -> Vec<(Vec<u32>, BigRational)> {
        let n = self.n;
        let mut out = Vec::new();
        'terms: for (m, c) in &self.terms {
            let (a, b) = (m.x_exps(), m.d_exps());
            let mut coeff = BigInt::one();
            let mut exps = Vec::with_capacity(n);
            for i in 0..n {
                if b[i] > e[i] {
                    continue 'terms;
                }
                coeff *= falling_factorial(e[i], b[i]);
                exps.push(e[i] - b[i] + a[i]);
            }
            out.push((exps, c * BigRational::from_integer(coeff)));
        }
        out
    }

    /// The differential-operator action on `R`.
    pub fn apply(&self, p: &Polynomial) -> Result<Polynomial> {
        if p.nvars() != self.n {
            return Err(Error::VariableCount(self.n, p.nvars()));
        }
        let mut out = Polynomial::zero(self.n);
        for (e, c) in p.monomials() {
            for (exps, v) in self.apply_to_monomial(&e) {
                out.add_term(exps, v * &c);
            }
        }
        Ok(out)
    }

    /// True when no term carries a `d`.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|m| m.order() == 0)
    }

    /// Largest absolute numerator or denominator, a rough size measure.
    pub fn height(&self) -> BigInt {
        self.terms
            .values()
            .map(|c| c.numer().abs().max(c.denom().abs()))
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&parse::render(self))
    }
}

// Operator impls panic when the two operands have different `n`; the
// `try_*` methods report that as an error instead.

impl Add for &WeylElement {
    type Output = WeylElement;
    fn add(self, rhs: &WeylElement) -> WeylElement {
        self.try_add(rhs).expect("Weyl algebra mismatch")
    }
}

impl Sub for &WeylElement {
    type Output = WeylElement;
    fn sub(self, rhs: &WeylElement) -> WeylElement {
        self.try_sub(rhs).expect("Weyl algebra mismatch")
    }
}

impl Mul for &WeylElement {
    type Output = WeylElement;
    fn mul(self, rhs: &WeylElement) -> WeylElement {
        self.try_mul(rhs).expect("Weyl algebra mismatch")
    }
}

impl Neg for &WeylElement {
    type Output = WeylElement;
    fn neg(self) -> WeylElement {
        self.scale(&-BigRational::one())
    }
}

/// Convenience for tests and examples: an integer as a rational.
pub fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> WeylElement {
        parse(s, n).unwrap()
    }

    #[test]
    fn commutation_relation() {
        let d = WeylElement::d(1, 0);
        let x = WeylElement::x(1, 0);
        assert_eq!(&d * &x, p("x1*d1 + 1", 1));
        assert_eq!(&x * &d, p("x1*d1", 1));
    }

    /// Moves one `d` past one `x` at a time, independent of the Leibniz
    /// expansion used by `mul_monomials`.
    fn d_times_x_pow_by_steps(k: u32) -> WeylElement {
        // d^k x = x d^k + k d^(k-1)
        let mut acc = WeylElement::x(1, 0);
        for _ in 0..k {
            // left-multiply by d: d (x^a d^b) = x^a d^(b+1) + a x^(a-1) d^b
            let mut next = WeylElement::zero(1);
            for (m, c) in acc.terms() {
                let (a, b) = (m.x_exps()[0], m.d_exps()[0]);
                next.add_term(WeylMonomial::new(&[a], &[b + 1]), c.clone());
                if a > 0 {
                    next.add_term(WeylMonomial::new(&[a - 1], &[b]), c * q(a as i64));
                }
            }
            acc = next;
        }
        acc
    }

    #[test]
    fn repeated_commutation_matches_leibniz() {
        let d2 = p("d1^2", 1);
        let x = WeylElement::x(1, 0);
        assert_eq!(&d2 * &x, d_times_x_pow_by_steps(2));
        assert_eq!(&d2 * &x, p("x1*d1^2 + 2*d1", 1));
        let d5 = p("d1^5", 1);
        assert_eq!(&d5 * &x, d_times_x_pow_by_steps(5));
    }

    #[test]
    fn mismatched_algebras_are_an_error() {
        let a = WeylElement::x(1, 0);
        let b = WeylElement::x(2, 0);
        assert_eq!(a.try_mul(&b), Err(Error::VariableCount(1, 2)));
    }

    #[test]
    fn transpose_examples() {
        assert_eq!(p("x1", 1).transpose(), p("x1", 1));
        assert_eq!(p("d1", 1).transpose(), p("-d1", 1));
        assert_eq!(p("x1*d1", 1).transpose(), p("-x1*d1 - 1", 1));
        let f = p("x1^2*d1*d2 - 3*x2*d1^2 + 5", 2);
        assert_eq!(f.transpose().transpose(), f);
    }

    #[test]
    fn apply_examples() {
        let euler = p("x1*d1", 1);
        let x3 = Polynomial::from_element(p("x1^3", 1)).unwrap();
        assert_eq!(
            euler.apply(&x3).unwrap(),
            Polynomial::from_element(p("3*x1^3", 1)).unwrap()
        );
        let f = Polynomial::from_element(p("x1^2*x2", 2)).unwrap();
        let d1 = WeylElement::d(2, 0);
        assert_eq!(
            d1.apply(&f).unwrap(),
            Polynomial::from_element(p("2*x1*x2", 2)).unwrap()
        );
        let comm = p("d1*x1 - x1*d1", 2);
        assert_eq!(comm.apply(&f).unwrap(), f);
    }

    #[test]
    fn degree_examples() {
        assert_eq!(p("x1^2*d2", 2).homogeneous_degree(), Homogeneity::Degree(1));
        assert_eq!(
            p("x1*d1 + 1", 1).homogeneous_degree(),
            Homogeneity::Degree(0)
        );
        assert_eq!(p("x1 + d1", 1).homogeneous_degree(), Homogeneity::Mixed);
        assert_eq!(WeylElement::zero(3).homogeneous_degree(), Homogeneity::Zero);
    }

    #[test]
    fn symbol_examples() {
        let s = p("x1*d1 + 1", 1).order_symbol().unwrap();
        assert_eq!(s.to_string(), "x1*xi1");
        let s = p("d1^2 + x1*d2", 2).order_symbol().unwrap();
        assert_eq!(s.to_string(), "xi1^2");
        assert_eq!(WeylElement::zero(1).order_symbol(), Err(Error::ZeroSymbol));
        // transposition flips the symbol by (-1)^order
        let f = p("x1^2*d1^3", 1);
        let st = f.transpose().order_symbol().unwrap();
        assert_eq!(st, f.order_symbol().unwrap().scale(&q(-1)));
    }
}
