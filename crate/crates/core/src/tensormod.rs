//! Tensor-field modules `T^r_{λ,μ} = ⊗ k[z_i] z_i^{μ_i} ∂_i^{-λ_i}` with the
//! action of `e_k = z^{k+1}∂`, and weight data of `gl_n` irreducibles.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::rat::serde_rat;
use crate::exact::{binomial, Coeff, Exponent, Rat};
use crate::liealg::{bracket, LieElement};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModuleDescriptor {
    #[serde(with = "serde_rat::vec")]
    pub lambda: Vec<Rat>,
    #[serde(with = "serde_rat::vec")]
    pub mu: Vec<Rat>,
}

impl ModuleDescriptor {
    pub fn new(lambda: Vec<Rat>, mu: Vec<Rat>) -> Result<Self> {
        if lambda.len() != mu.len() {
            return Err(Error::DimensionMismatch(format!(
                "lambda has {} entries, mu has {}",
                lambda.len(),
                mu.len()
            )));
        }
        Ok(ModuleDescriptor { lambda, mu })
    }

    pub fn trivial() -> Self {
        ModuleDescriptor {
            lambda: Vec::new(),
            mu: Vec::new(),
        }
    }

    pub fn zero(r: usize) -> Self {
        ModuleDescriptor {
            lambda: vec![Rat::zero(); r],
            mu: vec![Rat::zero(); r],
        }
    }

    pub fn r(&self) -> usize {
        self.lambda.len()
    }

    /// Submodule spanned by `z^{a+N}`, as a module in its own right.
    pub fn shift_submodule(&self, shift: &[u32]) -> ModuleDescriptor {
        assert_eq!(shift.len(), self.r());
        ModuleDescriptor {
            lambda: self.lambda.clone(),
            mu: self
                .mu
                .iter()
                .zip(shift)
                .map(|(m, &n)| m + Rat::from_integer(n.into()))
                .collect(),
        }
    }

    /// Drops coordinate `i`.
    pub fn delete(&self, i: usize) -> ModuleDescriptor {
        let mut d = self.clone();
        d.lambda.remove(i);
        d.mu.remove(i);
        d
    }
}

/// Dimension of the weight `w` component of `T^r`: `binom(w+r-1, r-1)`.
pub fn graded_dim(r: usize, w: u32) -> u64 {
    if r == 0 {
        return u64::from(w == 0);
    }
    binomial(w as u64 + r as u64 - 1, r as u64 - 1)
}

pub type Terms<C> = BTreeMap<Exponent, C>;

fn add_into<C: Coeff>(t: &mut Terms<C>, e: Exponent, c: C) {
    if c.is_zero() {
        return;
    }
    match t.get_mut(&e) {
        Some(x) => {
            let s = x.clone() + c;
            if s.is_zero() {
                t.remove(&e);
            } else {
                *x = s;
            }
        }
        None => {
            t.insert(e, c);
        }
    }
}

/// `e_k · z^a = Σ_i (a_i + μ_i + (k+1)λ_i) z_i^k z^a` over any coefficient ring.
pub fn act_e_terms<C: Coeff>(k: u32, lambda: &[C], mu: &[C], m: &Terms<C>) -> Terms<C> {
    let kk = C::from_int(k as i64 + 1);
    let mut out = Terms::new();
    for (a, c) in m {
        for i in 0..a.len() {
            let f = C::from_int(a[i] as i64) + mu[i].clone() + kk.clone() * lambda[i].clone();
            if f.is_zero() {
                continue;
            }
            let mut b = a.clone();
            b[i] += k;
            add_into(&mut out, b, f * c.clone());
        }
    }
    out
}

/// Action of `x_i^{k+1} ∂_i` through coordinate `i` alone.
pub fn act_coord_terms<C: Coeff>(
    k: u32,
    i: usize,
    lambda: &[C],
    mu: &[C],
    m: &Terms<C>,
) -> Terms<C> {
    let kk = C::from_int(k as i64 + 1);
    let mut out = Terms::new();
    for (a, c) in m {
        let f = C::from_int(a[i] as i64) + mu[i].clone() + kk.clone() * lambda[i].clone();
        if !f.is_zero() {
            let mut b = a.clone();
            b[i] += k;
            add_into(&mut out, b, f * c.clone());
        }
    }
    out
}

/// Applies `e_r^{ρ_r}` first and `e_1^{ρ_1}` last.
pub fn act_word_terms<C: Coeff>(rho: &[u32], lambda: &[C], mu: &[C], m: &Terms<C>) -> Terms<C> {
    let mut cur = m.clone();
    for (idx, &p) in rho.iter().enumerate().rev() {
        for _ in 0..p {
            cur = act_e_terms(idx as u32 + 1, lambda, mu, &cur);
            if cur.is_empty() {
                return cur;
            }
        }
    }
    cur
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleElement {
    pub desc: ModuleDescriptor,
    terms: Terms<Rat>,
}

impl ModuleElement {
    pub fn zero(desc: &ModuleDescriptor) -> Self {
        ModuleElement {
            desc: desc.clone(),
            terms: Terms::new(),
        }
    }

    pub fn monomial(desc: &ModuleDescriptor, a: Exponent) -> Self {
        assert_eq!(a.len(), desc.r());
        let mut terms = Terms::new();
        terms.insert(a, Rat::from_integer(1.into()));
        ModuleElement {
            desc: desc.clone(),
            terms,
        }
    }

    pub fn from_terms(
        desc: &ModuleDescriptor,
        terms: impl IntoIterator<Item = (Exponent, Rat)>,
    ) -> Result<Self> {
        let mut t = Terms::new();
        for (a, c) in terms {
            if a.len() != desc.r() {
                return Err(Error::DimensionMismatch(format!(
                    "exponent {a:?} for r={}",
                    desc.r()
                )));
            }
            add_into(&mut t, a, c);
        }
        Ok(ModuleElement {
            desc: desc.clone(),
            terms: t,
        })
    }

    pub fn terms(&self) -> &Terms<Rat> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, a: &[u32]) -> Rat {
        self.terms.get(a).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn weight(&self) -> Option<u32> {
        let mut ws = self.terms.keys().map(|a| a.iter().sum::<u32>());
        let w = ws.next()?;
        ws.all(|x| x == w).then_some(w)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut t = self.terms.clone();
        for (a, c) in &o.terms {
            add_into(&mut t, a.clone(), c.clone());
        }
        ModuleElement {
            desc: self.desc.clone(),
            terms: t,
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut t = Terms::new();
        for (a, x) in &self.terms {
            add_into(&mut t, a.clone(), x * c);
        }
        ModuleElement {
            desc: self.desc.clone(),
            terms: t,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&Rat::from_integer((-1).into())))
    }

    /// Image under the inclusion `z^a ↦ z^{a+N}` into the unshifted module.
    pub fn include_shifted(&self, shift: &[u32], target: &ModuleDescriptor) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(a, c)| (a.iter().zip(shift).map(|(x, n)| x + n).collect(), c.clone()))
            .collect();
        ModuleElement {
            desc: target.clone(),
            terms,
        }
    }
}

pub fn act_e(k: u32, m: &ModuleElement) -> Result<ModuleElement> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "only e_k with k >= 1 act on deformed modules".into(),
        ));
    }
    Ok(ModuleElement {
        desc: m.desc.clone(),
        terms: act_e_terms(k, &m.desc.lambda, &m.desc.mu, &m.terms),
    })
}

pub fn act_word(rho: &[u32], m: &ModuleElement) -> ModuleElement {
    ModuleElement {
        desc: m.desc.clone(),
        terms: act_word_terms(rho, &m.desc.lambda, &m.desc.mu, &m.terms),
    }
}

/// Action of a combination of `e_k`, `k >= 1`.
pub fn act(u: &LieElement, m: &ModuleElement) -> Result<ModuleElement> {
    if u.n() != 1 {
        return Err(Error::InvalidArgument(
            "tensor modules carry the action of one-variable fields".into(),
        ));
    }
    let mut out = ModuleElement::zero(&m.desc);
    for (b, c) in u.terms() {
        let k = b.weight();
        if k < 1 {
            return Err(Error::InvalidArgument(format!(
                "e_{k} does not act on deformed modules"
            )));
        }
        out = out.add(&act_e(k as u32, m)?.scale(c));
    }
    Ok(out)
}

/// `u(v m) - v(u m) == [u,v] m`.
pub fn module_axiom_check(u: &LieElement, v: &LieElement, m: &ModuleElement) -> Result<bool> {
    let lhs = act(u, &act(v, m)?)?.sub(&act(v, &act(u, m)?)?);
    let rhs = act(&bracket(u, v)?, m)?;
    Ok(lhs == rhs)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightVector {
    pub alpha: Vec<i64>,
    pub multiplicity: usize,
}

pub fn check_dominant(lambda: &[i64]) -> Result<()> {
    if lambda.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::NonDominant(lambda.to_vec()));
    }
    Ok(())
}

/// Weights of the `gl_n` irreducible `V_λ` with multiplicities, by
/// Gelfand–Tsetlin patterns. Sorted by decreasing `α` in lex order.
pub fn weight_support(lambda: &[i64], n: usize) -> Result<Vec<WeightVector>> {
    if lambda.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "weight {lambda:?} for gl_{n}"
        )));
    }
    check_dominant(lambda)?;
    let mut counts: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
    // row sums from the top row down; alpha_k = |row_k| - |row_{k-1}|
    let mut sums = vec![0i64; n + 1];
    sums[n] = lambda.iter().sum();
    gt_rows(lambda, &mut sums, &mut counts);
    Ok(counts
        .into_iter()
        .rev()
        .map(|(alpha, multiplicity)| WeightVector {
            alpha,
            multiplicity,
        })
        .collect())
}

fn gt_rows(row: &[i64], sums: &mut Vec<i64>, counts: &mut BTreeMap<Vec<i64>, usize>) {
    let len = row.len();
    if len <= 1 {
        sums[0] = 0;
        let alpha: Vec<i64> = (1..sums.len()).map(|k| sums[k] - sums[k - 1]).collect();
        *counts.entry(alpha).or_insert(0) += 1;
        return;
    }
    let mut next = vec![0i64; len - 1];
    fill(row, 0, &mut next, sums, counts);
}

fn fill(
    row: &[i64],
    j: usize,
    next: &mut Vec<i64>,
    sums: &mut Vec<i64>,
    counts: &mut BTreeMap<Vec<i64>, usize>,
) {
    if j == next.len() {
        sums[next.len()] = next.iter().sum();
        let snapshot = next.clone();
        gt_rows(&snapshot, sums, counts);
        return;
    }
    for v in row[j + 1]..=row[j] {
        next[j] = v;
        fill(row, j + 1, next, sums, counts);
    }
}

/// Restriction of `T_λ` to `L_1^{(x_1)} ⊕ … ⊕ L_1^{(x_n)}`: one summand
/// `⊗ T_{α_i,0}` per weight `α`, with its multiplicity.
pub fn decompose_coinduced(lambda: &[i64], n: usize) -> Result<Vec<(ModuleDescriptor, usize)>> {
    Ok(weight_support(lambda, n)?
        .into_iter()
        .map(|wv| {
            let l = wv
                .alpha
                .iter()
                .map(|&a| Rat::from_integer(a.into()))
                .collect();
            (
                ModuleDescriptor {
                    lambda: l,
                    mu: vec![Rat::zero(); n],
                },
                wv.multiplicity,
            )
        })
        .collect())
}

/// Graded dimension at weight `w` of a direct sum of `T^r` summands.
pub fn decomposition_graded_dim(parts: &[(ModuleDescriptor, usize)], w: u32) -> u64 {
    parts
        .iter()
        .map(|(d, m)| *m as u64 * graded_dim(d.r(), w))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};

    fn desc(l: &[i64], m: &[i64]) -> ModuleDescriptor {
        ModuleDescriptor::new(
            l.iter().map(|&x| rat(x)).collect(),
            m.iter().map(|&x| rat(x)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn single_action() {
        let d = desc(&[1], &[0]);
        let v = act_e(1, &ModuleElement::monomial(&d, vec![0])).unwrap();
        assert_eq!(v.terms().len(), 1);
        assert_eq!(v.coeff(&[1]), rat(2));
        let t = desc(&[0], &[0]);
        for k in 1..5 {
            assert!(act_e(k, &ModuleElement::monomial(&t, vec![0]))
                .unwrap()
                .is_zero());
        }
        assert!(act_e(0, &ModuleElement::monomial(&t, vec![0])).is_err());
    }

    #[test]
    fn word_order() {
        // e_1 e_1 on z^0 with mu = 5: 5 * 6 z^2
        let d = desc(&[0], &[5]);
        let v = act_word(&[2], &ModuleElement::monomial(&d, vec![0]));
        assert_eq!(v.coeff(&[2]), rat(30));
        // e_1 after e_2: (mu)(mu+2) z^3
        let v = act_word(&[1, 1], &ModuleElement::monomial(&d, vec![0]));
        assert_eq!(v.coeff(&[3]), rat(35));
    }

    #[test]
    fn axiom_on_random_like_inputs() {
        let d = ModuleDescriptor::new(vec![ratio(1, 3), ratio(-2, 5)], vec![ratio(7, 2), rat(-1)])
            .unwrap();
        let m = ModuleElement::from_terms(&d, [(vec![1, 2], rat(3)), (vec![0, 0], ratio(1, 7))])
            .unwrap();
        for k in 1..4 {
            for j in 1..4 {
                assert!(module_axiom_check(&LieElement::e(k), &LieElement::e(j), &m).unwrap());
            }
        }
    }

    #[test]
    fn gt_weights() {
        let w = weight_support(&[2, 0], 2).unwrap();
        let alphas: Vec<Vec<i64>> = w.iter().map(|x| x.alpha.clone()).collect();
        assert_eq!(alphas, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        let w = weight_support(&[1, 1, 0], 3).unwrap();
        assert_eq!(w.iter().map(|x| x.multiplicity).sum::<usize>(), 3);
        let w = weight_support(&[2, 1, 0], 3).unwrap();
        assert_eq!(w.iter().map(|x| x.multiplicity).sum::<usize>(), 8);
        assert_eq!(
            w.iter()
                .find(|x| x.alpha == vec![1, 1, 1])
                .unwrap()
                .multiplicity,
            2
        );
        assert!(weight_support(&[0, 1], 2).is_err());
    }

    #[test]
    fn coinduced() {
        let parts = decompose_coinduced(&[1, 0], 2).unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].0, desc(&[1, 0], &[0, 0]));
        assert_eq!(parts[1].0, desc(&[0, 1], &[0, 0]));
        assert_eq!(decomposition_graded_dim(&parts, 3), 2 * 4);
    }

    #[test]
    fn graded_dims() {
        assert_eq!(graded_dim(0, 0), 1);
        assert_eq!(graded_dim(0, 2), 0);
        assert_eq!(graded_dim(3, 2), 6);
    }
}
