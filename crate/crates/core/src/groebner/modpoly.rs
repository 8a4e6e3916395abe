//! Sorted sparse vectors in a free `D_n`-module, keyed by a module order.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use super::{FreeElement, MonomialOrder};
use crate::weyl::{mul_monomials, WeylElement, WeylMonomial};

/// Sort key whose lexicographic order is the module order.
pub(crate) type Key = Box<[i64]>;

#[derive(Clone, Debug)]
pub(crate) struct Term {
    pub comp: usize,
    pub mono: WeylMonomial,
    pub coeff: BigRational,
}

#[derive(Clone, Debug)]
pub(crate) struct ModPoly {
    pub order: MonomialOrder,
    terms: BTreeMap<Key, Term>,
}

impl ModPoly {
    pub fn zero(order: MonomialOrder) -> Self {
        ModPoly {
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_free(f: &FreeElement, order: MonomialOrder) -> Self {
        let mut out = ModPoly::zero(order);
        for (l, comp) in f.components().iter().enumerate() {
            for (m, c) in comp.terms() {
                out.add_term(l, m.clone(), c.clone());
            }
        }
        out
    }

    pub fn to_free(&self, n: usize, rank: usize) -> FreeElement {
        let mut comps = vec![WeylElement::zero(n); rank];
        for t in self.terms.values() {
            comps[t.comp].add_term(t.mono.clone(), t.coeff.clone());
        }
        FreeElement::new(n, comps)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&Term> {
        self.terms.values().next_back()
    }

    pub fn lead_key(&self) -> Option<&Key> {
        self.terms.keys().next_back()
    }

    pub fn pop_lead(&mut self) -> Option<Term> {
        self.terms.pop_last().map(|(_, t)| t)
    }

    pub fn add_term(&mut self, comp: usize, mono: WeylMonomial, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let key = self.order.key(comp, &mono);
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                v.insert(Term { comp, mono, coeff });
            }
            Entry::Occupied(mut o) => {
                o.get_mut().coeff += coeff;
                if o.get().coeff.is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&mut self, c: &BigRational) {
        for t in self.terms.values_mut() {
            t.coeff *= c;
        }
    }

    /// `self -= c * t * g`, with `t` a monomial multiplied on the left.
    pub fn sub_mul(&mut self, c: &BigRational, t: &WeylMonomial, g: &ModPoly) {
        for term in g.terms.values() {
            let cg = c * &term.coeff;
            for (m, k) in mul_monomials(t, &term.mono) {
                self.add_term(term.comp, m, -(&cg * BigRational::from_integer(k)));
            }
        }
    }

    /// `c * t * g`.
    pub fn left_mul(c: &BigRational, t: &WeylMonomial, g: &ModPoly) -> ModPoly {
        let mut out = ModPoly::zero(g.order);
        out.sub_mul(&-c.clone(), t, g);
        out
    }

    pub fn normalize(&mut self) {
        if let Some(lc) = self.lead().map(|t| t.coeff.clone()) {
            let inv = lc.recip();
            self.scale(&inv);
        }
    }
}
