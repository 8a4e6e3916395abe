//! Graded `D_n`-modules given by explicit finite-dimensional pieces, and the
//! de Rham complex computed on them directly.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::weyl::{monomials_of_degree, q};

/// Pieces `M_l` for `lo <= l <= hi` with matrices `x_i: M_l -> M_{l+1}` and
/// `∂_i: M_l -> M_{l-1}`. Maps leaving the range are absent.
#[derive(Clone, Debug)]
pub struct ExplicitGradedModule {
    n: usize,
    lo: i64,
    hi: i64,
    labels: Vec<Vec<String>>,
    x: Vec<Vec<Option<QMatrix>>>,
    d: Vec<Vec<Option<QMatrix>>>,
}

type Action<'a> = &'a dyn Fn(usize, i64, usize) -> Vec<(usize, BigRational)>;

impl ExplicitGradedModule {
    /// Builds the matrices from the action on basis vectors: `x(i, l, k)`
    /// is `x_i` applied to basis vector `k` of `M_l`, as a sparse vector in
    /// `M_{l+1}`, and likewise `d(i, l, k)` in `M_{l-1}`. The commutation
    /// relations are validated on the interior of the range.
    pub fn from_action(
        n: usize,
        (lo, hi): (i64, i64),
        labels: Vec<Vec<String>>,
        x: Action<'_>,
        d: Action<'_>,
    ) -> Result<Self> {
        if lo > hi || labels.len() as i64 != hi - lo + 1 {
            return Err(Error::ModelInvalid(format!(
                "{} pieces for the degree range [{lo}, {hi}]",
                labels.len()
            )));
        }
        let dim = |l: i64| labels[(l - lo) as usize].len();
        let build = |f: Action<'_>, step: i64| -> Result<Vec<Vec<Option<QMatrix>>>> {
            (0..n)
                .map(|i| {
                    (lo..=hi)
                        .map(|l| {
                            let t = l + step;
                            if t < lo || t > hi {
                                return Ok(None);
                            }
                            let mut m = QMatrix::zeros(dim(t), dim(l));
                            for k in 0..dim(l) {
                                for (r, c) in f(i, l, k) {
                                    if r >= dim(t) {
                                        return Err(Error::ModelInvalid(format!(
                                            "image index {r} outside M_{t}"
                                        )));
                                    }
                                    m.add_at(r, k, &c);
                                }
                            }
                            Ok(Some(m))
                        })
                        .collect()
                })
                .collect()
        };
        let model = ExplicitGradedModule {
            n,
            lo,
            hi,
            x: build(x, 1)?,
            d: build(d, -1)?,
            labels,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn range(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn dim(&self, l: i64) -> usize {
        if l < self.lo || l > self.hi {
            return 0;
        }
        self.labels[(l - self.lo) as usize].len()
    }

    pub fn labels(&self, l: i64) -> &[String] {
        &self.labels[(l - self.lo) as usize]
    }

    fn xm(&self, i: usize, l: i64) -> &QMatrix {
        self.x[i][(l - self.lo) as usize]
            .as_ref()
            .expect("inside the range")
    }

    fn dm(&self, i: usize, l: i64) -> &QMatrix {
        self.d[i][(l - self.lo) as usize]
            .as_ref()
            .expect("inside the range")
    }

    /// `∂_i` on `M_l`, if `l - 1` is in range.
    pub fn partial(&self, i: usize, l: i64) -> Option<&QMatrix> {
        self.d[i][(l - self.lo) as usize].as_ref()
    }

    /// `[∂_i, x_j] = δ_ij`, `[x_i, x_j] = 0`, `[∂_i, ∂_j] = 0` wherever both
    /// sides stay inside the range.
    pub fn validate(&self) -> Result<()> {
        for l in self.lo..=self.hi {
            let id = QMatrix::identity(self.dim(l));
            for i in 0..self.n {
                for j in 0..self.n {
                    if l > self.lo && l < self.hi {
                        let a = self.dm(i, l + 1).mul(self.xm(j, l));
                        let b = self.xm(j, l - 1).mul(self.dm(i, l));
                        let want = if i == j {
                            id.clone()
                        } else {
                            QMatrix::zeros(id.rows(), id.cols())
                        };
                        if sub(&a, &b) != want {
                            return Err(Error::ModelInvalid(format!(
                                "[d{}, x{}] is not {} on degree {l}",
                                i + 1,
                                j + 1,
                                u8::from(i == j)
                            )));
                        }
                    }
                    if l + 2 <= self.hi
                        && self.xm(i, l + 1).mul(self.xm(j, l))
                            != self.xm(j, l + 1).mul(self.xm(i, l))
                    {
                        return Err(Error::ModelInvalid(format!(
                            "x{} and x{} do not commute on degree {l}",
                            i + 1,
                            j + 1
                        )));
                    }
                    if l - 2 >= self.lo
                        && self.dm(i, l - 1).mul(self.dm(j, l))
                            != self.dm(j, l - 1).mul(self.dm(i, l))
                    {
                        return Err(Error::ModelInvalid(format!(
                            "d{} and d{} do not commute on degree {l}",
                            i + 1,
                            j + 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `R = Q[x_1..x_n]` on degrees `lo..=hi`.
    pub fn polynomial_ring(n: usize, lo: i64, hi: i64) -> Result<Self> {
        let bases: Vec<Vec<Vec<u32>>> = (lo..=hi).map(|l| monomials_of_degree(n, l)).collect();
        let labels = bases
            .iter()
            .map(|b| b.iter().map(|e| monomial_label(e)).collect())
            .collect();
        let find = |l: i64, e: &[u32]| -> usize {
            bases[(l - lo) as usize]
                .iter()
                .position(|m| m.as_slice() == e)
                .expect("monomial of the right degree")
        };
        let x = |i: usize, l: i64, k: usize| {
            let mut e = bases[(l - lo) as usize][k].clone();
            e[i] += 1;
            vec![(find(l + 1, &e), BigRational::one())]
        };
        let d = |i: usize, l: i64, k: usize| {
            let mut e = bases[(l - lo) as usize][k].clone();
            if e[i] == 0 {
                return Vec::new();
            }
            let c = q(e[i] as i64);
            e[i] -= 1;
            vec![(find(l - 1, &e), c)]
        };
        Self::from_action(n, (lo, hi), labels, &x, &d)
    }

    /// `Q[x, x^-1] / Q[x]` in one variable, with the class of `x^-1` placed
    /// in degree `top`, so `x^-k` sits in degree `top - k + 1`.
    pub fn laurent_quotient(top: i64, lo: i64, hi: i64) -> Result<Self> {
        let k_of = |l: i64| top - l + 1;
        let labels = (lo..=hi)
            .map(|l| {
                if k_of(l) >= 1 {
                    vec![format!("x^-{}", k_of(l))]
                } else {
                    Vec::new()
                }
            })
            .collect();
        let x = |_: usize, l: i64, _: usize| {
            if k_of(l) >= 2 {
                vec![(0, BigRational::one())]
            } else {
                Vec::new()
            }
        };
        let d = |_: usize, l: i64, _: usize| vec![(0, q(-k_of(l)))];
        Self::from_action(1, (lo, hi), labels, &x, &d)
    }

    /// `D_1 / D_1 (x∂ - λ)` with basis `x^a` (degree `a`) and `∂^b` (degree
    /// `-b`) applied to the generator.
    pub fn euler_quotient(lambda: i64, lo: i64, hi: i64) -> Result<Self> {
        let labels = (lo..=hi)
            .map(|l| {
                vec![match l {
                    0 => "1".to_string(),
                    l if l > 0 => format!("x^{l}"),
                    l => format!("d^{}", -l),
                }]
            })
            .collect();
        let x = |_: usize, l: i64, _: usize| {
            if l >= 0 {
                vec![(0, BigRational::one())]
            } else {
                vec![(0, q(lambda + l + 1))]
            }
        };
        let d = |_: usize, l: i64, _: usize| {
            if l >= 1 {
                vec![(0, q(lambda + l))]
            } else {
                vec![(0, BigRational::one())]
            }
        };
        Self::from_action(1, (lo, hi), labels, &x, &d)
    }
}

fn sub(a: &QMatrix, b: &QMatrix) -> QMatrix {
    let mut out = a.clone();
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            if !b.get(r, c).is_zero() {
                out.add_at(r, c, &-b.get(r, c).clone());
            }
        }
    }
    out
}

fn monomial_label(e: &[u32]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| {
            if k == 1 {
                format!("x{}", i + 1)
            } else {
                format!("x{}^{k}", i + 1)
            }
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for s in start..n {
            cur.push(s);
            rec(s + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// `d: Ω^i -> Ω^{i+1}` from coefficient degree `e` to `e - 1`, with
/// `d(m dx_J) = Σ_s ∂_s(m) dx_s ∧ dx_J`.
fn differential(model: &ExplicitGradedModule, i: usize, e: i64) -> QMatrix {
    let n = model.n;
    let (src_sets, dst_sets) = (subsets(n, i), subsets(n, i + 1));
    let (ds, dt) = (model.dim(e), model.dim(e - 1));
    let mut m = QMatrix::zeros(dst_sets.len() * dt, src_sets.len() * ds);
    for (a, set) in src_sets.iter().enumerate() {
        for s in (0..n).filter(|s| !set.contains(s)) {
            let before = set.iter().filter(|&&j| j < s).count();
            let sign = if before % 2 == 0 { q(1) } else { q(-1) };
            let mut target = set.clone();
            target.push(s);
            target.sort_unstable();
            let b = dst_sets.iter().position(|t| *t == target).expect("subset");
            let block = model.dm(s, e);
            for r in 0..dt {
                for c in 0..ds {
                    let v = block.get(r, c);
                    if !v.is_zero() {
                        m.add_at(b * dt + r, a * ds + c, &(&sign * v));
                    }
                }
            }
        }
    }
    m
}

/// `dim H^i(Ω^•(model))` at coefficient degree `d`.
pub fn explicit_strand_oracle(model: &ExplicitGradedModule, i: usize, d: i64) -> Result<usize> {
    let n = model.n;
    if i > n {
        return Ok(0);
    }
    let (lo, hi) = model.range();
    let needs_below = i < n;
    let needs_above = i > 0;
    if d < lo || d > hi || (needs_below && d - 1 < lo) || (needs_above && d + 1 > hi) {
        return Err(Error::ModelInvalid(format!(
            "degree {d} of H^{i} needs pieces outside the model range [{lo}, {hi}]"
        )));
    }
    let dim = subsets(n, i).len() * model.dim(d);
    let out_rank = if needs_below {
        differential(model, i, d).rank()
    } else {
        0
    };
    let in_rank = if needs_above {
        differential(model, i - 1, d + 1).rank()
    } else {
        0
    };
    let h = dim as i64 - out_rank as i64 - in_rank as i64;
    if h < 0 {
        return Err(Error::ModelInvalid(format!(
            "d∘d is not zero at H^{i}, degree {d}"
        )));
    }
    Ok(h as usize)
}
