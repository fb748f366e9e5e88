//! PBW words, presentations of associated graded modules over
//! `k[g_1..g_r]` (`g_i` the symbol of `e_i`, weight `i`) and their Hilbert series.

pub mod groebner;
pub mod series;

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::echelon::{rank_of_rows, RatRow};
use crate::exact::{kernel_basis, monomials, MPoly, Rat, SparseMat};
use crate::spanning::{spanning_ranks, word_images, GeneratorSet, WeightRank};
use crate::tensormod::{act_e, graded_dim, ModuleDescriptor, ModuleElement};

use groebner::{groebner_basis, ModVec, Mono, TermOrder};
pub use series::{
    hilbert_numerator, partial_sum_polynomial, product_one_minus, PartialSumFit, RationalSeries,
};

/// `g_1^{a_1}⋯g_r^{a_r} ↦ (1,…,1, 2,…,2, …)`, letters numbered from 1.
pub fn psi_lift(p: &[u32]) -> Vec<usize> {
    p.iter()
        .enumerate()
        .flat_map(|(i, &a)| std::iter::repeat_n(i + 1, a as usize))
        .collect()
}

/// Applies a word of letters `e_k`, rightmost letter first.
pub fn apply_word(word: &[usize], m: &ModuleElement) -> Result<ModuleElement> {
    let mut cur = m.clone();
    for &k in word.iter().rev() {
        cur = act_e(k as u32, &cur)?;
    }
    Ok(cur)
}

fn serialize_relations<S: Serializer>(
    rels: &[Vec<MPoly>],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let strs: Vec<Vec<String>> = rels
        .iter()
        .map(|v| v.iter().map(|p| p.to_string()).collect())
        .collect();
    strs.serialize(s)
}

/// Quotient of the free module `⊕ k[g] m_s` by the given relation vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolyModulePresentation {
    pub ring_vars: Vec<String>,
    pub var_weights: Vec<u32>,
    pub generator_weights: Vec<u32>,
    #[serde(serialize_with = "serialize_relations")]
    pub relations: Vec<Vec<MPoly>>,
}

impl PolyModulePresentation {
    /// Free module on generators of the given weights.
    pub fn free(var_weights: Vec<u32>, generator_weights: Vec<u32>) -> Self {
        let ring_vars = (1..=var_weights.len()).map(|i| format!("g{i}")).collect();
        PolyModulePresentation {
            ring_vars,
            var_weights,
            generator_weights,
            relations: Vec::new(),
        }
    }

    pub fn num_generators(&self) -> usize {
        self.generator_weights.len()
    }

    pub fn nvars(&self) -> usize {
        self.ring_vars.len()
    }

    pub fn order(&self) -> TermOrder {
        TermOrder::new(self.var_weights.clone())
    }

    fn var_refs(&self) -> Vec<&str> {
        self.ring_vars.iter().map(|s| s.as_str()).collect()
    }

    /// Relation with a single monomial entry `c · g^mono` at position `pos`.
    pub fn monomial_relation(&self, pos: usize, mono: Mono, c: Rat) -> Vec<MPoly> {
        let vars = self.var_refs();
        let mut v = vec![MPoly::zero_in(&vars); self.num_generators()];
        v[pos] = MPoly::from_terms(self.ring_vars.clone(), [(mono, c)]);
        v
    }

    pub fn add_relation(&mut self, rel: Vec<MPoly>) -> Result<()> {
        if rel.len() != self.num_generators() {
            return Err(Error::DimensionMismatch(format!(
                "relation of length {} for {} generators",
                rel.len(),
                self.num_generators()
            )));
        }
        self.relations.push(rel);
        Ok(())
    }

    fn to_modvec(&self, order: &TermOrder, rel: &[MPoly]) -> ModVec {
        let n = self.nvars();
        ModVec::new(
            order,
            rel.iter().enumerate().flat_map(|(pos, p)| {
                p.terms().iter().map(move |(e, c)| {
                    let mut m = e.clone();
                    m.resize(n, 0);
                    ((pos, m), c.clone())
                })
            }),
        )
    }

    fn from_modvec(&self, v: &ModVec) -> Vec<MPoly> {
        let vars = self.var_refs();
        let mut out = vec![MPoly::zero_in(&vars); self.num_generators()];
        for ((pos, m), c) in v.terms() {
            out[*pos].add_term(m.clone(), c.clone());
        }
        out
    }

    fn basis(&self) -> Vec<ModVec> {
        let order = self.order();
        let gens: Vec<ModVec> = self
            .relations
            .iter()
            .map(|r| self.to_modvec(&order, r))
            .collect();
        groebner_basis(&order, &gens)
    }

    /// Leading `(position, monomial)` pairs of the reduced Gröbner basis.
    pub fn leading_terms(&self) -> BTreeSet<(usize, Mono)> {
        self.basis()
            .iter()
            .map(|g| g.lead().unwrap().0.clone())
            .collect()
    }
}

/// Same module, with the relations replaced by their reduced Gröbner basis.
pub fn module_groebner(p: &PolyModulePresentation) -> PolyModulePresentation {
    let gb = p.basis();
    let mut out = p.clone();
    out.relations = gb.iter().map(|g| p.from_modvec(g)).collect();
    out
}

/// Whether all S-vectors of the presentation's relations reduce to zero.
pub fn relations_are_groebner(p: &PolyModulePresentation) -> bool {
    let order = p.order();
    let v: Vec<ModVec> = p.relations.iter().map(|r| p.to_modvec(&order, r)).collect();
    groebner::is_groebner(&order, &v)
}

/// Series of standard monomials: `Σ_s t^{w_s} N(I_s) / Π (1 - t^{deg g_i})`.
pub fn hilbert_series(p: &PolyModulePresentation) -> RationalSeries {
    let lead = p.leading_terms();
    let mut num = crate::exact::UPoly::zero();
    for (s, &w) in p.generator_weights.iter().enumerate() {
        let ideal: Vec<Mono> = lead
            .iter()
            .filter(|(q, _)| *q == s)
            .map(|(_, m)| m.clone())
            .collect();
        num = num.add(
            &crate::exact::UPoly::monomial(w as usize)
                .mul(&hilbert_numerator(&ideal, &p.var_weights)),
        );
    }
    RationalSeries::new(num, product_one_minus(&p.var_weights)).unwrap()
}

/// Presentation of `gr M` for `M = T^r_{λ,μ}` generated by `S`.
///
/// Generator `s` with `k` free letters contributes the relations
/// `g_i m_s` for `i > k`; kernel vectors of the remaining word maps, weight by
/// weight up to `cutoff`, are added as polynomial relations.
pub fn associated_graded_presentation(
    desc: &ModuleDescriptor,
    s: &GeneratorSet,
    cutoff: u32,
) -> Result<PolyModulePresentation> {
    Ok(build_presentation(desc, s, cutoff)?.0)
}

fn build_presentation(
    desc: &ModuleDescriptor,
    s: &GeneratorSet,
    cutoff: u32,
) -> Result<(
    PolyModulePresentation,
    Vec<(u32, Vec<MPoly>)>,
    Vec<WeightRank>,
)> {
    let r = desc.r();
    if s.r != r {
        return Err(Error::DimensionMismatch(format!(
            "generators for r={} but module has r={r}",
            s.r
        )));
    }
    let span = spanning_ranks(s, &desc.lambda, &desc.mu, cutoff)?;
    if let Some(w) = span.first_failure {
        return Err(Error::NotSpanning { weight: w });
    }
    let weights: Vec<u32> = s
        .generators
        .iter()
        .map(|g| g.exponent.iter().sum())
        .collect();
    let mut p = PolyModulePresentation::free((1..=r as u32).collect(), weights);
    for (pos, g) in s.generators.iter().enumerate() {
        for i in g.free_letters..r {
            let mut m = vec![0; r];
            m[i] = 1;
            let rel = p.monomial_relation(pos, m, Rat::from_integer(1.into()));
            p.add_relation(rel)?;
        }
    }
    // images of the allowed words, grouped by weight
    let mut cols: Vec<Vec<(usize, Vec<u32>, crate::tensormod::Terms<Rat>)>> =
        vec![Vec::new(); cutoff as usize + 1];
    for (pos, g) in s.generators.iter().enumerate() {
        for (rho, w, img) in word_images(
            &desc.lambda,
            &desc.mu,
            &g.exponent,
            g.free_letters,
            1,
            cutoff,
        ) {
            let mut full = rho;
            full.resize(r, 0);
            cols[w as usize].push((pos, full, img));
        }
    }
    let mut kernel = Vec::new();
    let mut ranks = Vec::new();
    for (w, vs) in cols.iter().enumerate() {
        let idx: std::collections::HashMap<Vec<u32>, usize> = monomials(r, w as u32)
            .into_iter()
            .enumerate()
            .map(|(i, a)| (a, i))
            .collect();
        let rows: Vec<RatRow> = vs
            .iter()
            .map(|(_, _, t)| t.iter().map(|(e, c)| (idx[e], c.clone())).collect())
            .collect();
        let rank = rank_of_rows(&rows, idx.len());
        ranks.push(WeightRank {
            w: w as u32,
            vectors: vs.len(),
            rank,
            expected: graded_dim(r, w as u32),
        });
        if rank == vs.len() {
            continue;
        }
        let mut m = SparseMat::new(idx.len(), vs.len());
        for (j, row) in rows.iter().enumerate() {
            for (i, c) in row {
                m.set(*i, j, c.clone());
            }
        }
        for kv in kernel_basis(&m) {
            let vars = p.var_refs();
            let mut rel = vec![MPoly::zero_in(&vars); p.num_generators()];
            for (j, c) in kv.iter().enumerate() {
                if !c.is_zero() {
                    rel[vs[j].0].add_term(vs[j].1.clone(), c.clone());
                }
            }
            kernel.push((w as u32, rel.clone()));
            p.add_relation(rel)?;
        }
    }
    Ok((p, kernel, ranks))
}

/// Everything the `hilbert` pipeline reports.
#[derive(Clone, Debug, Serialize)]
pub struct HilbertReport {
    pub presentation: PolyModulePresentation,
    pub kernel_relations: usize,
    pub series: RationalSeries,
    pub series_text: String,
    pub predicted: Vec<String>,
    pub brute_force: Vec<u64>,
    pub word_ranks: Vec<WeightRank>,
    pub matches: bool,
    /// Gröbner basis unchanged when the relations of the top weight are dropped.
    pub stable: bool,
}

pub fn hilbert_report(
    desc: &ModuleDescriptor,
    s: &GeneratorSet,
    cutoff: u32,
) -> Result<HilbertReport> {
    let (p, kernel, word_ranks) = build_presentation(desc, s, cutoff)?;
    let gb = module_groebner(&p);
    let series = hilbert_series(&gb);
    let coeffs = series.coefficients(cutoff as usize + 1);
    let brute: Vec<u64> = (0..=cutoff).map(|w| graded_dim(desc.r(), w)).collect();
    let matches = coeffs
        .iter()
        .zip(&brute)
        .all(|(a, b)| *a == Rat::from_integer((*b).into()));
    let stable = if kernel.iter().any(|(w, _)| *w == cutoff) {
        let mut lower = p.clone();
        let top: BTreeSet<usize> = kernel
            .iter()
            .enumerate()
            .filter(|(_, (w, _))| *w == cutoff)
            .map(|(i, _)| i)
            .collect();
        let structural = p.relations.len() - kernel.len();
        lower.relations = p
            .relations
            .iter()
            .enumerate()
            .filter(|(i, _)| *i < structural || !top.contains(&(i - structural)))
            .map(|(_, r)| r.clone())
            .collect();
        lower.leading_terms() == gb.leading_terms()
    } else {
        true
    };
    Ok(HilbertReport {
        series_text: series.to_string(),
        predicted: coeffs.iter().map(crate::exact::fmt_rat).collect(),
        presentation: gb,
        kernel_relations: kernel.len(),
        series,
        brute_force: brute,
        word_ranks,
        matches,
        stable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::spanning::{spanning_generators, SearchConfig};

    #[test]
    fn psi() {
        assert_eq!(psi_lift(&[1]), vec![1]);
        assert_eq!(psi_lift(&[1, 2]), vec![1, 2, 2]);
        let d = ModuleDescriptor::new(vec![rat(1)], vec![rat(3)]).unwrap();
        let m = ModuleElement::monomial(&d, vec![1]);
        let a = apply_word(&psi_lift(&[2, 1]), &m).unwrap();
        assert_eq!(a, crate::tensormod::act_word(&[2, 1], &m));
    }

    #[test]
    fn free_presentations() {
        let p = PolyModulePresentation::free(vec![1, 2, 3], vec![0]);
        assert_eq!(hilbert_series(&p), RationalSeries::free(&[1, 2, 3]));
        let mut z = PolyModulePresentation::free(vec![1], vec![0]);
        let rel = z.monomial_relation(0, vec![0], rat(1));
        z.add_relation(rel).unwrap();
        assert_eq!(hilbert_series(&z), RationalSeries::zero());
        let trivial = PolyModulePresentation::free(vec![], vec![0]);
        assert_eq!(
            hilbert_series(&trivial).coefficients(3),
            vec![rat(1), rat(0), rat(0)]
        );
    }

    #[test]
    fn free_rank_one_tensor_module() {
        let d = ModuleDescriptor::new(vec![rat(0)], vec![rat(1)]).unwrap();
        let s = GeneratorSet::from_exponents(1, [vec![0]]);
        let p = associated_graded_presentation(&d, &s, 8).unwrap();
        assert!(p.relations.is_empty());
        let r0 = associated_graded_presentation(
            &ModuleDescriptor::trivial(),
            &GeneratorSet::from_exponents(0, [vec![]]),
            4,
        )
        .unwrap();
        assert_eq!(r0.num_generators(), 1);
        assert_eq!(r0.nvars(), 0);
    }

    #[test]
    fn full_module_series() {
        let d = ModuleDescriptor::zero(2);
        let s = spanning_generators(
            2,
            &d.lambda,
            &d.mu,
            &SearchConfig {
                bound: 6,
                cutoff: 8,
            },
        )
        .unwrap();
        let rep = hilbert_report(&d, &s, 8).unwrap();
        assert!(rep.matches && rep.stable);
        assert_eq!(rep.series, RationalSeries::free(&[1, 1]));
        let bad = GeneratorSet::from_exponents(2, [vec![0, 0]]);
        assert!(matches!(
            associated_graded_presentation(&d, &bad, 4),
            Err(Error::NotSpanning { .. })
        ));
    }
}
