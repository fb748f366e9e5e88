//! Buchberger's algorithm for submodules of free modules over `k[g_1..g_r]`.
//!
//! Order: position over term, then weighted degree, then lex.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::exact::Rat;

pub type Mono = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermOrder {
    pub weights: Vec<u32>,
}

impl TermOrder {
    pub fn new(weights: Vec<u32>) -> Self {
        TermOrder { weights }
    }

    /// `deg(g_i) = i`.
    pub fn standard(r: usize) -> Self {
        TermOrder {
            weights: (1..=r as u32).collect(),
        }
    }

    pub fn wdeg(&self, m: &[u32]) -> u32 {
        m.iter().zip(&self.weights).map(|(a, w)| a * w).sum()
    }

    pub fn cmp_mono(&self, a: &[u32], b: &[u32]) -> Ordering {
        self.wdeg(a).cmp(&self.wdeg(b)).then_with(|| a.cmp(b))
    }

    pub fn cmp_key(&self, a: &(usize, Mono), b: &(usize, Mono)) -> Ordering {
        a.0.cmp(&b.0).then_with(|| self.cmp_mono(&a.1, &b.1))
    }
}

/// Element of a free module: terms sorted by decreasing key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModVec {
    terms: Vec<((usize, Mono), Rat)>,
}

impl ModVec {
    pub fn new(order: &TermOrder, terms: impl IntoIterator<Item = ((usize, Mono), Rat)>) -> Self {
        let mut map: BTreeMap<(usize, Mono), Rat> = BTreeMap::new();
        for (k, c) in terms {
            *map.entry(k).or_insert_with(Rat::zero) += c;
        }
        let mut terms: Vec<_> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| order.cmp_key(&b.0, &a.0));
        ModVec { terms }
    }

    pub fn terms(&self) -> &[((usize, Mono), Rat)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&((usize, Mono), Rat)> {
        self.terms.first()
    }

    fn monic(mut self) -> Self {
        if let Some((_, c)) = self.terms.first() {
            let inv = Rat::one() / c;
            for t in self.terms.iter_mut() {
                t.1 = &t.1 * &inv;
            }
        }
        self
    }

    /// `self - c · x^shift · o`
    fn sub_shifted(&self, order: &TermOrder, c: &Rat, shift: &[u32], o: &ModVec) -> ModVec {
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let shifted: Vec<((usize, Mono), Rat)> = o
            .terms
            .iter()
            .map(|((p, m), x)| {
                (
                    (*p, m.iter().zip(shift).map(|(a, b)| a + b).collect()),
                    -(c * x),
                )
            })
            .collect();
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < shifted.len() {
            let ord = match (self.terms.get(i), shifted.get(j)) {
                (Some(a), Some(b)) => order.cmp_key(&a.0, &b.0),
                (Some(_), None) => Ordering::Greater,
                _ => Ordering::Less,
            };
            match ord {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(shifted[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let s = &self.terms[i].1 + &shifted[j].1;
                    if !s.is_zero() {
                        out.push((self.terms[i].0.clone(), s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        ModVec { terms: out }
    }
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn quotient(b: &[u32], a: &[u32]) -> Mono {
    b.iter().zip(a).map(|(y, x)| y - x).collect()
}

fn lcm(a: &[u32], b: &[u32]) -> Mono {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

/// Full reduction of `v` modulo `basis`.
pub fn normal_form(order: &TermOrder, v: &ModVec, basis: &[ModVec]) -> ModVec {
    let mut rem: Vec<((usize, Mono), Rat)> = Vec::new();
    let mut cur = v.clone();
    while let Some(((p, m), c)) = cur.lead().cloned() {
        let red = basis.iter().find(|g| {
            let ((q, lm), _) = g.lead().unwrap();
            *q == p && divides(lm, &m)
        });
        match red {
            Some(g) => {
                let ((_, lm), lc) = g.lead().unwrap();
                let coef = &c / lc;
                cur = cur.sub_shifted(order, &coef, &quotient(&m, lm), g);
            }
            None => {
                rem.push(((p, m), c));
                cur.terms.remove(0);
            }
        }
    }
    ModVec { terms: rem }
}

fn s_vector(order: &TermOrder, f: &ModVec, g: &ModVec) -> Option<ModVec> {
    let ((p, a), ca) = f.lead()?;
    let ((q, b), cb) = g.lead()?;
    if p != q {
        return None;
    }
    let l = lcm(a, b);
    let left = ModVec::new(order, std::iter::empty()).sub_shifted(
        order,
        &(-Rat::one() / ca),
        &quotient(&l, a),
        f,
    );
    Some(left.sub_shifted(order, &(Rat::one() / cb), &quotient(&l, b), g))
}

/// Reduced Gröbner basis of the submodule generated by `gens`.
pub fn groebner_basis(order: &TermOrder, gens: &[ModVec]) -> Vec<ModVec> {
    let mut basis: Vec<ModVec> = Vec::new();
    for g in gens {
        let r = normal_form(order, g, &basis);
        if !r.is_zero() {
            basis.push(r.monic());
        }
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    while let Some((i, j)) = pairs.pop() {
        if let Some(s) = s_vector(order, &basis[i], &basis[j]) {
            let r = normal_form(order, &s, &basis);
            if !r.is_zero() {
                basis.push(r.monic());
                let k = basis.len() - 1;
                for i in 0..k {
                    pairs.push((i, k));
                }
            }
        }
    }
    reduce_basis(order, basis)
}

fn reduce_basis(order: &TermOrder, basis: Vec<ModVec>) -> Vec<ModVec> {
    // drop elements whose leading term is divisible by another's
    let mut keep: Vec<ModVec> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let ((p, m), _) = g.lead().unwrap();
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            let ((q, lm), _) = h.lead().unwrap();
            j != i && q == p && divides(lm, m) && (lm != m || j < i)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    let mut out = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let others: Vec<ModVec> = keep
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let lead = keep[i].terms[0].clone();
        let tail = ModVec {
            terms: keep[i].terms[1..].to_vec(),
        };
        let mut nf = normal_form(order, &tail, &others);
        nf.terms.insert(0, lead);
        out.push(nf.monic());
    }
    out.sort_by(|a, b| order.cmp_key(&a.lead().unwrap().0, &b.lead().unwrap().0));
    out
}

/// Whether every S-vector of `basis` reduces to zero.
pub fn is_groebner(order: &TermOrder, basis: &[ModVec]) -> bool {
    for j in 0..basis.len() {
        for i in 0..j {
            if let Some(s) = s_vector(order, &basis[i], &basis[j]) {
                if !normal_form(order, &s, basis).is_zero() {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn mv(o: &TermOrder, t: &[(usize, &[u32], i64)]) -> ModVec {
        ModVec::new(o, t.iter().map(|(p, m, c)| ((*p, m.to_vec()), rat(*c))))
    }

    #[test]
    fn monomial_generators_are_stable() {
        let o = TermOrder::standard(2);
        let g = vec![mv(&o, &[(0, &[2, 0], 1)]), mv(&o, &[(0, &[1, 1], 1)])];
        let gb = groebner_basis(&o, &g);
        assert_eq!(gb.len(), 2);
        assert!(is_groebner(&o, &gb));
    }

    #[test]
    fn binomial_ideal() {
        // <g1^2 - g2, g1 g2 - 1> in k[g1,g2]; deg g1 = 1, deg g2 = 2
        let o = TermOrder::standard(2);
        let g = vec![
            mv(&o, &[(0, &[2, 0], 1), (0, &[0, 1], -1)]),
            mv(&o, &[(0, &[1, 1], 1), (0, &[0, 0], -1)]),
        ];
        let gb = groebner_basis(&o, &g);
        assert!(is_groebner(&o, &gb));
        // g1^3 - 1 lies in the ideal
        let f = mv(&o, &[(0, &[3, 0], 1), (0, &[0, 0], -1)]);
        assert!(normal_form(&o, &f, &gb).is_zero());
        let h = mv(&o, &[(0, &[1, 0], 1)]);
        assert!(!normal_form(&o, &h, &gb).is_zero());
    }

    #[test]
    fn positions_do_not_mix() {
        let o = TermOrder::standard(1);
        let g = vec![
            mv(&o, &[(0, &[1], 1), (1, &[0], 1)]),
            mv(&o, &[(1, &[2], 1)]),
        ];
        let gb = groebner_basis(&o, &g);
        assert!(is_groebner(&o, &gb));
        assert_eq!(gb.len(), 2);
    }
}
