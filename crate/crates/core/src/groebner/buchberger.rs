use std::collections::BTreeSet;

use super::modpoly::{Key, ModPoly};
use super::FreeElement;
use crate::error::{Error, Result};
use crate::weyl::{WeylElement, WeylMonomial};

fn find_divisor(basis: &[ModPoly], comp: usize, mono: &WeylMonomial) -> Option<usize> {
    basis.iter().position(|g| {
        let lt = g.lead().expect("basis elements are nonzero");
        lt.comp == comp && lt.mono.divides(mono)
    })
}

/// Full reduction of `f` by `basis`. When `cofactors` is given, records the
/// quotient `q_k` with `f = sum_k q_k g_k + remainder`.
pub(crate) fn reduce(
    mut f: ModPoly,
    basis: &[ModPoly],
    mut cofactors: Option<&mut Vec<WeylElement>>,
) -> ModPoly {
    let mut rem = ModPoly::zero(f.order);
    while let Some(lead) = f.lead() {
        match find_divisor(basis, lead.comp, &lead.mono) {
            Some(k) => {
                let g = &basis[k];
                let glead = g.lead().expect("nonzero");
                let t = glead.mono.quotient_into(&lead.mono);
                let c = &lead.coeff / &glead.coeff;
                if let Some(q) = cofactors.as_deref_mut() {
                    q[k].add_term(t.clone(), c.clone());
                }
                f.sub_mul(&c, &t, g);
            }
            None => {
                let t = f.pop_lead().expect("nonempty");
                rem.add_term(t.comp, t.mono, t.coeff);
            }
        }
    }
    rem
}

/// Multipliers `(t_i, t_j)` with `t_i lm(g_i) = t_j lm(g_j) = lcm`.
fn pair_multipliers(gi: &ModPoly, gj: &ModPoly) -> (WeylMonomial, WeylMonomial, WeylMonomial) {
    let (li, lj) = (gi.lead().expect("nonzero"), gj.lead().expect("nonzero"));
    let l = li.mono.lcm(&lj.mono);
    (li.mono.quotient_into(&l), lj.mono.quotient_into(&l), l)
}

fn spoly(gi: &ModPoly, gj: &ModPoly) -> ModPoly {
    let (ti, tj, _) = pair_multipliers(gi, gj);
    let ci = gi.lead().expect("nonzero").coeff.recip();
    let cj = gj.lead().expect("nonzero").coeff.recip();
    let mut s = ModPoly::left_mul(&ci, &ti, gi);
    s.sub_mul(&cj, &tj, gj);
    s
}

struct PairQueue {
    pending: BTreeSet<(Key, usize, usize)>,
}

impl PairQueue {
    fn push(&mut self, basis: &[ModPoly], i: usize, j: usize) {
        let (li, lj) = (basis[i].lead().unwrap(), basis[j].lead().unwrap());
        if li.comp != lj.comp {
            return;
        }
        let l = li.mono.lcm(&lj.mono);
        // normal strategy: smallest lcm first
        let key = basis[i].order.key(li.comp, &l);
        self.pending.insert((key, i, j));
    }
}

/// Buchberger's algorithm followed by interreduction.
pub(crate) fn groebner(gens: Vec<ModPoly>) -> Vec<ModPoly> {
    let mut basis: Vec<ModPoly> = Vec::new();
    let mut queue = PairQueue {
        pending: BTreeSet::new(),
    };
    let add = |basis: &mut Vec<ModPoly>, queue: &mut PairQueue, mut g: ModPoly| {
        g.normalize();
        let k = basis.len();
        basis.push(g);
        for i in 0..k {
            queue.push(basis, i, k);
        }
    };
    for g in gens {
        let r = reduce(g, &basis, None);
        if !r.is_zero() {
            add(&mut basis, &mut queue, r);
        }
    }
    while let Some((_, i, j)) = queue.pending.pop_first() {
        let r = reduce(spoly(&basis[i], &basis[j]), &basis, None);
        if !r.is_zero() {
            add(&mut basis, &mut queue, r);
        }
    }
    interreduce(basis)
}

/// Minimal, tail-reduced, monic and sorted by leading term.
fn interreduce(mut basis: Vec<ModPoly>) -> Vec<ModPoly> {
    basis.sort_by(|a, b| a.lead_key().cmp(&b.lead_key()));
    let mut kept: Vec<ModPoly> = Vec::new();
    for g in basis {
        let lt = g.lead().expect("nonzero");
        if find_divisor(&kept, lt.comp, &lt.mono).is_none() {
            kept.push(g);
        }
    }
    let mut out = Vec::with_capacity(kept.len());
    for i in 0..kept.len() {
        let others: Vec<ModPoly> = kept
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i)
            .map(|(_, g)| g.clone())
            .collect();
        let mut g = kept[i].clone();
        let lead = g.pop_lead().expect("nonzero");
        let mut r = reduce(g, &others, None);
        r.add_term(lead.comp, lead.mono, lead.coeff);
        r.normalize();
        out.push(r);
    }
    out
}

/// Schreyer's generators of the syzygy module of a Gröbner basis.
pub(crate) fn schreyer_syzygies(basis: &[ModPoly], n: usize) -> Result<Vec<FreeElement>> {
    let m = basis.len();
    let mut out = Vec::new();
    for j in 0..m {
        for i in 0..j {
            let (li, lj) = (basis[i].lead().unwrap(), basis[j].lead().unwrap());
            if li.comp != lj.comp {
                continue;
            }
            let (ti, tj, _) = pair_multipliers(&basis[i], &basis[j]);
            let ci = li.coeff.recip();
            let cj = lj.coeff.recip();
            let mut q = vec![WeylElement::zero(n); m];
            let rem = reduce(spoly(&basis[i], &basis[j]), basis, Some(&mut q));
            if !rem.is_zero() {
                return Err(Error::Invariant(
                    "S-polynomial does not reduce to zero: input is not a Gröbner basis".into(),
                ));
            }
            let mut comps: Vec<WeylElement> = q.into_iter().map(|c| -&c).collect();
            comps[i].add_term(ti, ci);
            comps[j].add_term(tj, -cj);
            let s = FreeElement::new(n, comps);
            if !s.is_zero() {
                out.push(s);
            }
        }
    }
    Ok(out)
}
