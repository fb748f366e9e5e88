//! Newton-operator matrices, the determinant Φ_r, good shifts and finite
//! spanning sets of `T^r_{λ,μ}` under the words `e_1^{b_1}⋯e_r^{b_r}`.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::echelon::{rank_of_rows, RatRow};
use crate::exact::rat::serde_rat;
use crate::exact::{det, det_symbolic, monomials, Coeff, Exponent, MPoly, Rat, SparseMat, UPoly};
use crate::tensormod::{act_e_terms, act_word_terms, graded_dim, ModuleDescriptor, Terms};

/// `ρ = (ρ_1,…,ρ_r)`, standing for the word `e_1^{ρ_1}⋯e_r^{ρ_r}` and the partition `1^{ρ_1}⋯r^{ρ_r}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PartitionVector {
    pub rho: Vec<u32>,
}

impl PartitionVector {
    pub fn new(rho: Vec<u32>) -> Self {
        PartitionVector { rho }
    }

    pub fn weight(&self) -> u32 {
        rho_weight(&self.rho)
    }

    pub fn length(&self) -> u32 {
        self.rho.iter().sum()
    }

    /// All `ρ ∈ N^r` of the given weight, in lex order.
    pub fn of_weight(r: usize, w: u32) -> Vec<PartitionVector> {
        rho_of_weight(r, w)
            .into_iter()
            .map(PartitionVector::new)
            .collect()
    }
}

fn rho_weight(rho: &[u32]) -> u32 {
    rho.iter()
        .enumerate()
        .map(|(i, &x)| (i as u32 + 1) * x)
        .sum()
}

fn rho_of_weight(r: usize, w: u32) -> Vec<Vec<u32>> {
    fn go(i: usize, r: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == r {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let part = i as u32 + 1;
        for k in 0..=left / part {
            cur.push(k);
            go(i + 1, r, left - k * part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if r == 0 {
        if w == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(0, r, w, &mut Vec::with_capacity(r), &mut out);
    out.sort();
    out
}

/// Exponents with `a_i < i` (1-based) and total degree `w`.
pub fn artin_exponents(r: usize, w: u32) -> Vec<Exponent> {
    monomials(r, w)
        .into_iter()
        .filter(|a| a.iter().enumerate().all(|(i, &x)| x as usize <= i))
        .collect()
}

/// Column labels `(ρ, a)` of the degree-`r` Newton matrix.
pub fn newton_columns(r: usize) -> Vec<(Vec<u32>, Exponent)> {
    let mut cols = Vec::new();
    for wa in 0..=r as u32 {
        for a in artin_exponents(r, wa) {
            for rho in rho_of_weight(r, r as u32 - wa) {
                cols.push((rho, a.clone()));
            }
        }
    }
    cols.sort_by(|x, y| {
        rho_weight(&x.0)
            .cmp(&rho_weight(&y.0))
            .then_with(|| x.cmp(y))
    });
    let rows = monomials(r, r as u32).len();
    assert_eq!(
        cols.len(),
        rows,
        "Newton index set does not match the monomial count"
    );
    cols
}

fn row_index(r: usize, w: u32) -> HashMap<Exponent, usize> {
    monomials(r, w)
        .into_iter()
        .enumerate()
        .map(|(i, a)| (a, i))
        .collect()
}

pub fn newton_matrix_generic<C: Coeff>(r: usize, lambda: &[C], mu: &[C]) -> SparseMat<C> {
    let rows = row_index(r, r as u32);
    let cols = newton_columns(r);
    let mut m = SparseMat::new(rows.len(), cols.len());
    for (j, (rho, a)) in cols.iter().enumerate() {
        let mut seed = Terms::new();
        seed.insert(a.clone(), C::one());
        for (e, c) in act_word_terms(rho, lambda, mu, &seed) {
            m.set(rows[&e], j, c);
        }
    }
    m
}

/// Matrix of the degree-`r` component of `A_r`: monomial rows, `(ρ, a)` columns.
pub fn newton_matrix(r: usize, lambda: &[Rat], mu: &[Rat]) -> Result<SparseMat<Rat>> {
    check_params(r, lambda, mu)?;
    if r == 0 {
        return Err(Error::InvalidArgument("newton_matrix needs r >= 1".into()));
    }
    Ok(newton_matrix_generic(r, lambda, mu))
}

/// Monomial expansions of `p_ρ z^a` in the same layout as [`newton_matrix`].
pub fn newton_basis_matrix(r: usize) -> SparseMat<Rat> {
    let rows = row_index(r, r as u32);
    let cols = newton_columns(r);
    let mut m = SparseMat::new(rows.len(), cols.len());
    for (j, (rho, a)) in cols.iter().enumerate() {
        let mut t: Terms<Rat> = Terms::new();
        t.insert(a.clone(), Rat::one());
        for (i, &k) in rho.iter().enumerate() {
            for _ in 0..k {
                t = mul_power_sum(i as u32 + 1, &t);
            }
        }
        for (e, c) in t {
            m.set(rows[&e], j, c);
        }
    }
    m
}

fn mul_power_sum(k: u32, t: &Terms<Rat>) -> Terms<Rat> {
    let mut out: Terms<Rat> = Terms::new();
    for (a, c) in t {
        for i in 0..a.len() {
            let mut b = a.clone();
            b[i] += k;
            *out.entry(b).or_insert_with(Rat::zero) += c;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn check_params(r: usize, lambda: &[Rat], mu: &[Rat]) -> Result<()> {
    if lambda.len() != r || mu.len() != r {
        return Err(Error::DimensionMismatch(format!(
            "r={r} but lambda has {} entries and mu has {}",
            lambda.len(),
            mu.len()
        )));
    }
    Ok(())
}

pub const DEFAULT_PHI_BOUND: usize = 5;

/// `N ↦ Φ_r(λ, μ + (N,…,N))`, normalized by the Newton change of basis so
/// that the leading coefficient is 1.
pub fn phi(r: usize, lambda: &[Rat], mu_base: &[Rat], bound: usize) -> Result<MPoly> {
    check_params(r, lambda, mu_base)?;
    if r == 0 {
        return Err(Error::InvalidArgument("phi needs r >= 1".into()));
    }
    if r > bound {
        return Err(Error::Bound(format!(
            "phi with r={r} exceeds the configured bound {bound}"
        )));
    }
    let base = det(&newton_basis_matrix(r))?;
    let top = if r <= SYMBOLIC_PHI_MAX {
        let vars = ["N"];
        let n = MPoly::var(&vars, 0);
        let l: Vec<MPoly> = lambda.iter().map(|x| MPoly::constant(x.clone())).collect();
        let m: Vec<MPoly> = mu_base
            .iter()
            .map(|x| &MPoly::constant(x.clone()) + &n)
            .collect();
        det_symbolic(&newton_matrix_generic(r, &l, &m))?
    } else {
        // the degree is known, so deg+1 exact evaluations determine the polynomial
        let deg = phi_degree(r) as i64;
        let xs: Vec<Rat> = (0..=deg).map(|t| Rat::from_integer(t.into())).collect();
        let ys = xs
            .par_iter()
            .map(|t| {
                let m: Vec<Rat> = mu_base.iter().map(|x| x + t).collect();
                det(&newton_matrix_generic(r, lambda, &m))
            })
            .collect::<Result<Vec<Rat>>>()?;
        UPoly::interpolate(&xs, &ys).to_mpoly("N")
    };
    Ok(top.scale(&(Rat::one() / base)))
}

/// Largest `r` for which Φ_r is expanded symbolically; above it Φ_r is interpolated.
pub const SYMBOLIC_PHI_MAX: usize = 3;

/// `Φ_r(λ, μ)` at a given parameter point.
pub fn phi_at(r: usize, lambda: &[Rat], mu: &[Rat]) -> Result<Rat> {
    let top = det(&newton_matrix(r, lambda, mu)?)?;
    Ok(top / det(&newton_basis_matrix(r))?)
}

/// Whether `Φ_r(λ, μ) != 0`, decided by a rank computation.
pub fn phi_nonzero(r: usize, lambda: &[Rat], mu: &[Rat]) -> Result<bool> {
    let m = newton_matrix(r, lambda, mu)?;
    Ok(crate::exact::rank(&m) == m.ncols())
}

/// `Σ l(ρ)` over the Newton columns: the degree of Φ_r in `N`.
pub fn phi_degree(r: usize) -> u32 {
    newton_columns(r)
        .iter()
        .map(|(rho, _)| rho.iter().sum::<u32>())
        .sum()
}

/// Images of one seed under all words of weight at most `max_w`.
/// Letter `i` (0-based) acts as `e_{(i+1)·step}`.
pub(crate) fn word_images(
    lambda: &[Rat],
    mu: &[Rat],
    seed: &Exponent,
    letters: usize,
    step: u32,
    max_w: u32,
) -> Vec<(Vec<u32>, u32, Terms<Rat>)> {
    let base_w: u32 = seed.iter().sum();
    let mut memo: HashMap<Vec<u32>, Terms<Rat>> = HashMap::new();
    let mut out = Vec::new();
    let mut t = Terms::new();
    t.insert(seed.clone(), Rat::one());
    memo.insert(vec![0; letters], t.clone());
    out.push((vec![0; letters], base_w, t));
    if letters == 0 || base_w > max_w {
        return if base_w <= max_w { out } else { Vec::new() };
    }
    let budget = (max_w - base_w) / step;
    for w in 1..=budget {
        for rho in rho_of_weight(letters, w) {
            let j = rho.iter().position(|&x| x > 0).unwrap();
            let mut parent = rho.clone();
            parent[j] -= 1;
            let img = match memo.get(&parent) {
                Some(p) if !p.is_empty() => act_e_terms((j as u32 + 1) * step, lambda, mu, p),
                _ => Terms::new(),
            };
            memo.insert(rho.clone(), img.clone());
            out.push((rho, base_w + step * w, img));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightRank {
    pub w: u32,
    pub vectors: usize,
    pub rank: usize,
    pub expected: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub ranks: Vec<WeightRank>,
    pub verified: bool,
    pub first_failure: Option<u32>,
}

/// Rank of the vectors at each weight against the dimension of `T^r`.
/// With `exact_count`, the number of vectors must also equal the dimension.
fn rank_table(
    r: usize,
    vectors: &[(u32, Terms<Rat>)],
    cutoff: u32,
    exact_count: bool,
) -> Verification {
    let mut by_w: BTreeMap<u32, Vec<&Terms<Rat>>> = BTreeMap::new();
    for (w, t) in vectors {
        if *w <= cutoff {
            by_w.entry(*w).or_default().push(t);
        }
    }
    let ranks: Vec<WeightRank> = (0..=cutoff)
        .into_par_iter()
        .map(|w| {
            let idx = row_index(r, w);
            let vs = by_w.get(&w).map(|v| v.as_slice()).unwrap_or(&[]);
            let rows: Vec<RatRow> = vs
                .iter()
                .map(|t| t.iter().map(|(e, c)| (idx[e], c.clone())).collect())
                .collect();
            WeightRank {
                w,
                vectors: rows.len(),
                rank: rank_of_rows(&rows, idx.len()),
                expected: graded_dim(r, w),
            }
        })
        .collect();
    let first_failure = ranks
        .iter()
        .find(|x| x.rank as u64 != x.expected || (exact_count && x.vectors as u64 != x.expected))
        .map(|x| x.w);
    Verification {
        ranks,
        verified: first_failure.is_none(),
        first_failure,
    }
}

/// Per-weight ranks of `e^b z^a z^{N+μ} ∂^{-λ}`, `a_i < i`, in the module shifted by `N`.
pub fn graded_basis_ranks(
    r: usize,
    lambda: &[Rat],
    mu: &[Rat],
    shift: &[u32],
    cutoff: u32,
) -> Result<Verification> {
    check_params(r, lambda, mu)?;
    if shift.len() != r {
        return Err(Error::DimensionMismatch(format!(
            "shift of length {} for r={r}",
            shift.len()
        )));
    }
    let shifted = ModuleDescriptor::new(lambda.to_vec(), mu.to_vec())?.shift_submodule(shift);
    let mut vectors = Vec::new();
    for wa in 0..=cutoff.min((r * r.saturating_sub(1) / 2) as u32) {
        for a in artin_exponents(r, wa) {
            for (_, w, img) in word_images(&shifted.lambda, &shifted.mu, &a, r, 1, cutoff) {
                vectors.push((w, img));
            }
        }
    }
    Ok(rank_table(r, &vectors, cutoff, true))
}

pub fn verify_graded_basis(
    r: usize,
    lambda: &[Rat],
    mu: &[Rat],
    shift: &[u32],
    cutoff: u32,
) -> bool {
    graded_basis_ranks(r, lambda, mu, shift, cutoff)
        .map(|v| v.verified)
        .unwrap_or(false)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub exponent: Exponent,
    /// Number of leading letters `e_1..e_k` acting freely on this generator.
    pub free_letters: usize,
}

/// Finite set of exponents `s` of claimed generators `z^s z^μ ∂^{-λ}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSet {
    pub r: usize,
    pub generators: Vec<Generator>,
}

impl GeneratorSet {
    /// Generators with no structural information: every letter counts as free.
    pub fn from_exponents(r: usize, exps: impl IntoIterator<Item = Exponent>) -> Self {
        let map: BTreeMap<(u32, Exponent), usize> =
            exps.into_iter().map(|e| ((e.iter().sum(), e), r)).collect();
        Self::from_map(r, map)
    }

    fn from_map(r: usize, map: BTreeMap<(u32, Exponent), usize>) -> Self {
        GeneratorSet {
            r,
            generators: map
                .into_iter()
                .map(|((_, exponent), free_letters)| Generator {
                    exponent,
                    free_letters,
                })
                .collect(),
        }
    }

    pub fn exponents(&self) -> Vec<Exponent> {
        self.generators.iter().map(|g| g.exponent.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub bound: u32,
    pub cutoff: u32,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            bound: 6,
            cutoff: 8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftCertificate {
    pub r: usize,
    #[serde(with = "serde_rat::vec")]
    pub lambda: Vec<Rat>,
    #[serde(with = "serde_rat::vec")]
    pub mu: Vec<Rat>,
    #[serde(rename = "N")]
    pub shift: Vec<u32>,
    pub cutoff: u32,
    pub phi_checks: usize,
    pub ranks: Vec<WeightRank>,
    pub verified: bool,
}

fn shift_candidates(r: usize, bound: u32) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = (0..=bound).map(|t| vec![t; r]).collect();
    let mut rest = Vec::new();
    let mut cur = vec![0u32; r];
    loop {
        if cur.windows(2).any(|w| w[0] != w[1]) {
            rest.push(cur.clone());
        }
        let mut i = 0;
        while i < r && cur[i] == bound {
            cur[i] = 0;
            i += 1;
        }
        if i == r {
            break;
        }
        cur[i] += 1;
    }
    rest.sort_by_key(|v| (v.iter().sum::<u32>(), v.clone()));
    out.extend(rest);
    out
}

/// The first `Φ_s(λ_{≤s}, μ_{≤s} + N_{≤s} + kε_s)` that vanishes, if any.
fn failing_phi(
    lambda: &[Rat],
    mu: &[Rat],
    shift: &[u32],
    cutoff: u32,
    checks: &mut usize,
) -> Result<Option<String>> {
    let r = lambda.len();
    for s in 1..=r {
        let base: Vec<Rat> = (0..s)
            .map(|i| &mu[i] + Rat::from_integer(shift[i].into()))
            .collect();
        for k in 0..=cutoff {
            let mut m = base.clone();
            m[s - 1] += Rat::from_integer(k.into());
            *checks += 1;
            if !phi_nonzero(s, &lambda[..s], &m)? {
                return Ok(Some(format!(
                    "Phi_{s} vanishes at mu = ({})",
                    m.iter()
                        .map(crate::exact::fmt_rat)
                        .collect::<Vec<_>>()
                        .join(",")
                )));
            }
        }
    }
    Ok(None)
}

/// Bounded search for a shift `N` whose block is a certified graded basis.
pub fn find_good_shift(
    r: usize,
    lambda: &[Rat],
    mu: &[Rat],
    config: &SearchConfig,
) -> Result<ShiftCertificate> {
    check_params(r, lambda, mu)?;
    if config.bound < 1 {
        return Err(Error::InvalidArgument(
            "search bound must be at least 1".into(),
        ));
    }
    if (config.cutoff as usize) < r {
        return Err(Error::InvalidArgument(format!(
            "cutoff {} is below r={r}",
            config.cutoff
        )));
    }
    let mut last = String::from("no candidate tried");
    let mut checks = 0;
    for cand in shift_candidates(r, config.bound) {
        if let Some(why) = failing_phi(lambda, mu, &cand, config.cutoff, &mut checks)? {
            last = format!("N={cand:?}: {why}");
            continue;
        }
        let v = graded_basis_ranks(r, lambda, mu, &cand, config.cutoff)?;
        if v.verified {
            return Ok(ShiftCertificate {
                r,
                lambda: lambda.to_vec(),
                mu: mu.to_vec(),
                shift: cand,
                cutoff: config.cutoff,
                phi_checks: checks,
                ranks: v.ranks,
                verified: true,
            });
        }
        last = format!(
            "N={cand:?}: graded basis fails at weight {}",
            v.first_failure.unwrap()
        );
    }
    Err(Error::SearchFailure(format!(
        "no good shift with entries <= {} (last: {last})",
        config.bound
    )))
}

/// Finite generating set of `T^r_{λ,μ}` from the layered induction: the
/// block `{N + a : a_i < i}` plus lifted generators of every layer
/// `{a : a_m >= N_m (m < i), a_i = j}`, `j < N_i`, each a copy of `T^{r-1}`.
pub fn spanning_generators(
    r: usize,
    lambda: &[Rat],
    mu: &[Rat],
    config: &SearchConfig,
) -> Result<GeneratorSet> {
    check_params(r, lambda, mu)?;
    let mut memo = HashMap::new();
    let map = generators_rec(lambda, mu, config, &mut memo)?;
    Ok(GeneratorSet::from_map(
        r,
        map.into_iter()
            .map(|(e, k)| ((e.iter().sum(), e), k))
            .collect(),
    ))
}

type GenMap = BTreeMap<Exponent, usize>;

fn generators_rec(
    lambda: &[Rat],
    mu: &[Rat],
    config: &SearchConfig,
    memo: &mut HashMap<(Vec<Rat>, Vec<Rat>), GenMap>,
) -> Result<GenMap> {
    let r = lambda.len();
    let key = (lambda.to_vec(), mu.to_vec());
    if let Some(g) = memo.get(&key) {
        return Ok(g.clone());
    }
    let mut out = GenMap::new();
    if r == 0 {
        out.insert(Vec::new(), 0);
        memo.insert(key, out.clone());
        return Ok(out);
    }
    let cfg = SearchConfig {
        bound: config.bound,
        cutoff: config.cutoff.max(r as u32),
    };
    let shift = find_good_shift(r, lambda, mu, &cfg)?.shift;
    for i in 0..r {
        for j in 0..shift[i] {
            let mut sub_l = lambda.to_vec();
            let mut sub_m: Vec<Rat> = mu
                .iter()
                .enumerate()
                .map(|(m, x)| {
                    if m < i {
                        x + Rat::from_integer(shift[m].into())
                    } else {
                        x.clone()
                    }
                })
                .collect();
            sub_l.remove(i);
            sub_m.remove(i);
            for (e, k) in generators_rec(&sub_l, &sub_m, config, memo)? {
                let mut lifted = e.clone();
                lifted.insert(i, j);
                for m in 0..i {
                    lifted[m] += shift[m];
                }
                out.insert(lifted, k);
            }
        }
    }
    let top = (r * (r - 1) / 2) as u32;
    for wa in 0..=top {
        for a in artin_exponents(r, wa) {
            out.insert(a.iter().zip(&shift).map(|(x, n)| x + n).collect(), r);
        }
    }
    memo.insert(key, out.clone());
    Ok(out)
}

/// Rank of all words `e_1^{b_1}⋯e_r^{b_r} z^s`, `s ∈ S`, at each weight.
pub fn spanning_ranks(
    s: &GeneratorSet,
    lambda: &[Rat],
    mu: &[Rat],
    cutoff: u32,
) -> Result<Verification> {
    words_ranks(s, lambda, mu, 1, cutoff)
}

pub fn verify_spanning(s: &GeneratorSet, lambda: &[Rat], mu: &[Rat], cutoff: u32) -> bool {
    spanning_ranks(s, lambda, mu, cutoff)
        .map(|v| v.verified)
        .unwrap_or(false)
}

fn words_ranks(
    s: &GeneratorSet,
    lambda: &[Rat],
    mu: &[Rat],
    d: u32,
    cutoff: u32,
) -> Result<Verification> {
    let r = s.r;
    check_params(r, lambda, mu)?;
    if d == 0 {
        return Err(Error::InvalidArgument("d must be at least 1".into()));
    }
    let vectors: Vec<(u32, Terms<Rat>)> = s
        .generators
        .par_iter()
        .flat_map_iter(|g| {
            word_images(lambda, mu, &g.exponent, r, d, cutoff)
                .into_iter()
                .map(|(_, w, t)| (w, t))
        })
        .collect();
    Ok(rank_table(r, &vectors, cutoff, false))
}

/// Spanning test with words in `e_d, e_{2d}, …, e_{rd}` only.
pub fn span_under_l_d_ranks(
    s: &GeneratorSet,
    lambda: &[Rat],
    mu: &[Rat],
    d: u32,
    cutoff: u32,
) -> Result<Verification> {
    words_ranks(s, lambda, mu, d, cutoff)
}

pub fn span_under_l_d(s: &GeneratorSet, lambda: &[Rat], mu: &[Rat], d: u32, cutoff: u32) -> bool {
    span_under_l_d_ranks(s, lambda, mu, d, cutoff)
        .map(|v| v.verified)
        .unwrap_or(false)
}

/// Parameter of the residue-`s` summand `k[z^d] z^s` under `e_k ↦ e_{dk}/d`:
/// `μ' = (s + μ + λ - dλ)/d`, with `λ` unchanged.
pub fn residue_mu(lambda: &[Rat], mu: &[Rat], residue: &[u32], d: u32) -> Vec<Rat> {
    let dd = Rat::from_integer(d.into());
    (0..lambda.len())
        .map(|i| {
            (Rat::from_integer(residue[i].into()) + &mu[i] + &lambda[i] - &dd * &lambda[i]) / &dd
        })
        .collect()
}

/// Generators for the `e_{kd}` words: spanning sets of every residue summand,
/// mapped back by `m ↦ d·m + s`.
pub fn generators_under_l_d(
    r: usize,
    lambda: &[Rat],
    mu: &[Rat],
    d: u32,
    config: &SearchConfig,
) -> Result<GeneratorSet> {
    check_params(r, lambda, mu)?;
    if d == 0 {
        return Err(Error::InvalidArgument("d must be at least 1".into()));
    }
    let mut map = BTreeMap::new();
    let sub_cfg = SearchConfig {
        bound: config.bound,
        cutoff: (config.cutoff / d).max(r as u32),
    };
    for residue in residues(r, d) {
        let m = residue_mu(lambda, mu, &residue, d);
        for g in spanning_generators(r, lambda, &m, &sub_cfg)?.generators {
            let e: Exponent = g
                .exponent
                .iter()
                .zip(&residue)
                .map(|(x, s)| d * x + s)
                .collect();
            map.insert((e.iter().sum(), e), g.free_letters);
        }
    }
    Ok(GeneratorSet::from_map(r, map))
}

fn residues(r: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..r {
        out = out
            .into_iter()
            .flat_map(|v: Vec<u32>| {
                (0..d).map(move |s| {
                    let mut x = v.clone();
                    x.push(s);
                    x
                })
            })
            .collect();
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanCertificate {
    pub r: usize,
    #[serde(with = "serde_rat::vec")]
    pub lambda: Vec<Rat>,
    #[serde(with = "serde_rat::vec")]
    pub mu: Vec<Rat>,
    pub d: u32,
    pub cutoff: u32,
    pub generators: Vec<Generator>,
    pub ranks: Vec<WeightRank>,
    pub verified: bool,
    pub first_failure: Option<u32>,
}

/// Generators for `e_{kd}` words (ordinary spanning when `d = 1`) together
/// with their rank certificate.
pub fn span_certificate(
    r: usize,
    lambda: &[Rat],
    mu: &[Rat],
    d: u32,
    config: &SearchConfig,
) -> Result<SpanCertificate> {
    let gens = if d == 1 {
        spanning_generators(r, lambda, mu, config)?
    } else {
        generators_under_l_d(r, lambda, mu, d, config)?
    };
    let v = words_ranks(&gens, lambda, mu, d, config.cutoff)?;
    Ok(SpanCertificate {
        r,
        lambda: lambda.to_vec(),
        mu: mu.to_vec(),
        d,
        cutoff: config.cutoff,
        generators: gens.generators,
        ranks: v.ranks,
        verified: v.verified,
        first_failure: v.first_failure,
    })
}
