use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::WeylMonomial;

/// A commutative polynomial in `x_1..x_n, xi_1..xi_n`, i.e. an element of
/// the associated graded ring of the order filtration.
///
/// Exponents reuse [`WeylMonomial`], read as `x^a xi^b`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SymbolPolynomial {
    n: usize,
    terms: BTreeMap<WeylMonomial, BigRational>,
}

impl SymbolPolynomial {
    pub fn zero(n: usize) -> Self {
        SymbolPolynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I>(n: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (WeylMonomial, BigRational)>,
    {
        let mut out = SymbolPolynomial::zero(n);
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    fn add_term(&mut self, m: WeylMonomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WeylMonomial, &BigRational)> {
        self.terms.iter().rev()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        SymbolPolynomial::from_terms(self.n, self.terms.iter().map(|(m, v)| (m.clone(), v * c)))
    }

    /// Commutative product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = SymbolPolynomial::zero(self.n);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let exps = m1
                    .exponents()
                    .iter()
                    .zip(m2.exponents())
                    .map(|(a, b)| a + b)
                    .collect();
                out.add_term(WeylMonomial::from_exponents(exps), c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for SymbolPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.terms() {
            let neg = c < &BigRational::zero();
            let abs = if neg { -c } else { c.clone() };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let body = super::parse::render_monomial(m, "x", "xi");
            match (abs.is_one(), body.is_empty()) {
                (_, true) => write!(f, "{abs}")?,
                (true, false) => f.write_str(&body)?,
                (false, false) => write!(f, "{abs}*{body}")?,
            }
        }
        Ok(())
    }
}
