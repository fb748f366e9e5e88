//! Weight-sliced Chevalley–Eilenberg homology `H_p(g; M)` for graded
//! subalgebras of polynomial vector fields.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{monomials, parse_rat_list, rank, Exponent, Rat, SparseMat};
use crate::liealg::{basis_of_weight, AlgebraDescriptor, BracketCache, Flavor, VFBasis};
use crate::tensormod::{act_coord_terms, act_e_terms, ModuleDescriptor, Terms};

pub const DEFAULT_SLICE_CAP: usize = 20000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coefficients {
    Trivial,
    Tensor(ModuleDescriptor),
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficients::Trivial => write!(f, "trivial"),
            Coefficients::Tensor(d) => {
                let j = |v: &[Rat]| {
                    v.iter()
                        .map(crate::exact::fmt_rat)
                        .collect::<Vec<_>>()
                        .join(",")
                };
                write!(f, "T:{}:{}", j(&d.lambda), j(&d.mu))
            }
        }
    }
}

impl FromStr for Coefficients {
    type Err = Error;

    /// `trivial` or `T:<λ list>:<μ list>`, e.g. `T:1:0` or `T:1,0:0,1/2`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "trivial" || s == "k" {
            return Ok(Coefficients::Trivial);
        }
        let rest = s.strip_prefix("T:").ok_or_else(|| {
            Error::Parse(format!(
                "coefficients must be `trivial` or `T:<lambda>:<mu>`, got {s:?}"
            ))
        })?;
        let (l, m) = rest
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("missing `:` between lambda and mu in {s:?}")))?;
        Ok(Coefficients::Tensor(ModuleDescriptor::new(
            parse_rat_list(l)?,
            parse_rat_list(m)?,
        )?))
    }
}

/// Checks that the coefficient module carries an action of the algebra.
pub fn check_supported(alg: &AlgebraDescriptor, coeffs: &Coefficients) -> Result<()> {
    let Coefficients::Tensor(d) = coeffs else {
        return Ok(());
    };
    match alg.flavor {
        Flavor::Truncated(k) if k >= 1 && alg.n == 1 => Ok(()),
        Flavor::DirectSum if d.r() == alg.n => Ok(()),
        Flavor::DirectSum => Err(Error::DimensionMismatch(format!(
            "the direct sum of {} copies acts on T^{} only when r = n",
            alg.n,
            d.r()
        ))),
        _ => Err(Error::Unsupported(format!(
            "tensor coefficients are implemented for L_d(1), d >= 1, and the direct sum flavour, not {alg}"
        ))),
    }
}

fn module_weight_range(coeffs: &Coefficients, max: i64) -> Vec<(i64, Vec<Exponent>)> {
    match coeffs {
        Coefficients::Trivial => {
            if max >= 0 {
                vec![(0, vec![Vec::new()])]
            } else {
                Vec::new()
            }
        }
        Coefficients::Tensor(d) => (0..=max).map(|m| (m, monomials(d.r(), m as u32))).collect(),
    }
}

/// Basis of `Λ^p g ⊗ M` at total weight `w`: strictly increasing wedges and module monomials.
#[derive(Clone, Debug)]
pub struct ChainBasis {
    pub elements: Vec<(Vec<VFBasis>, Exponent)>,
    index: HashMap<(Vec<VFBasis>, Exponent), usize>,
}

impl ChainBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, wedge: &[VFBasis], m: &[u32]) -> Option<usize> {
        self.index.get(&(wedge.to_vec(), m.to_vec())).copied()
    }
}

/// Chain basis, failing once it would exceed `cap` elements.
pub fn chain_basis(
    alg: &AlgebraDescriptor,
    coeffs: &Coefficients,
    p: usize,
    w: i64,
    cap: usize,
) -> Result<ChainBasis> {
    chain_basis_padded(alg, coeffs, p, w, cap, 0)
}

/// As [`chain_basis`], but enumerating candidate factors `pad` weights past
/// the necessary range before filtering by total weight.
pub fn chain_basis_padded(
    alg: &AlgebraDescriptor,
    coeffs: &Coefficients,
    p: usize,
    w: i64,
    cap: usize,
    pad: i64,
) -> Result<ChainBasis> {
    let wmin = alg.min_weight();
    let mut elements = Vec::new();
    // every wedge factor has weight <= w - (p-1) wmin - (module weight >= 0)
    let top_field = w - (p as i64 - 1).max(0) * wmin + pad;
    let fields: Vec<VFBasis> = (wmin..=top_field)
        .flat_map(|k| basis_of_weight(alg, k))
        .collect();
    let module_top = w - p as i64 * wmin + pad;
    for (mw, monos) in module_weight_range(coeffs, module_top) {
        let target = w - mw;
        let mut wedges = Vec::new();
        wedges_of_weight(
            &fields,
            p,
            target,
            wmin,
            0,
            &mut Vec::new(),
            &mut wedges,
            cap,
        )?;
        for wedge in wedges {
            for m in &monos {
                elements.push((wedge.clone(), m.clone()));
                if elements.len() > cap {
                    return Err(Error::Resource {
                        p,
                        w,
                        detail: format!("chain space exceeds the cap of {cap} basis elements"),
                    });
                }
            }
        }
    }
    let index = elements
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, e)| (e, i))
        .collect();
    Ok(ChainBasis { elements, index })
}

#[allow(clippy::too_many_arguments)]
fn wedges_of_weight(
    fields: &[VFBasis],
    p: usize,
    target: i64,
    wmin: i64,
    start: usize,
    cur: &mut Vec<VFBasis>,
    out: &mut Vec<Vec<VFBasis>>,
    cap: usize,
) -> Result<()> {
    if p == 0 {
        if target == 0 {
            out.push(cur.clone());
        }
        return Ok(());
    }
    for i in start..fields.len() {
        let wt = fields[i].weight();
        // fields are sorted by weight; the remaining p-1 factors weigh at least wmin each
        if wt + (p as i64 - 1) * wmin > target {
            break;
        }
        if p == 1 && wt != target {
            continue;
        }
        cur.push(fields[i].clone());
        wedges_of_weight(fields, p - 1, target - wt, wmin, i + 1, cur, out, cap)?;
        cur.pop();
        if out.len() > cap {
            return Ok(());
        }
    }
    Ok(())
}

fn act_field(
    alg: &AlgebraDescriptor,
    coeffs: &Coefficients,
    x: &VFBasis,
    m: &Exponent,
) -> Terms<Rat> {
    match coeffs {
        Coefficients::Trivial => Terms::new(),
        Coefficients::Tensor(d) => {
            let mut seed = Terms::new();
            seed.insert(m.clone(), Rat::from_integer(1.into()));
            let k = x.weight() as u32;
            match alg.flavor {
                Flavor::DirectSum => act_coord_terms(k, x.direction, &d.lambda, &d.mu, &seed),
                _ => act_e_terms(k, &d.lambda, &d.mu, &seed),
            }
        }
    }
}

/// Sorts `b ∧ rest` into increasing order; `None` if `b` already occurs.
fn insert_sorted(b: &VFBasis, rest: &[VFBasis]) -> Option<(Vec<VFBasis>, bool)> {
    match rest.binary_search(b) {
        Ok(_) => None,
        Err(pos) => {
            let mut v = rest.to_vec();
            v.insert(pos, b.clone());
            Some((v, pos % 2 == 1))
        }
    }
}

fn sign(odd: bool) -> Rat {
    Rat::from_integer(if odd { -1 } else { 1 }.into())
}

/// Matrix of `d_p : C_p(w) → C_{p-1}(w)` in the given bases.
fn boundary_matrix(
    alg: &AlgebraDescriptor,
    coeffs: &Coefficients,
    src: &ChainBasis,
    dst: &ChainBasis,
    cache: &BracketCache,
) -> SparseMat<Rat> {
    let mut m = SparseMat::new(dst.len(), src.len());
    for (col, (wedge, mono)) in src.elements.iter().enumerate() {
        let p = wedge.len();
        // Σ_{i<j} (-1)^{i+j} [x_i,x_j] ∧ … ⊗ m   (1-based i, j)
        for i in 0..p {
            for j in i + 1..p {
                let rest: Vec<VFBasis> = wedge
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != i && *k != j)
                    .map(|(_, x)| x.clone())
                    .collect();
                let base = (i + j) % 2 == 1;
                for (b, c) in cache.get(&wedge[i], &wedge[j]) {
                    if !alg.contains(&b) {
                        continue;
                    }
                    if let Some((w2, odd)) = insert_sorted(&b, &rest) {
                        let row = dst.index_of(&w2, mono).expect("boundary leaves the slice");
                        m.add_to(row, col, c * sign(base ^ odd));
                    }
                }
            }
        }
        // Σ_i (-1)^i x_1 ∧ … x̂_i … ⊗ x_i·m
        for i in 0..p {
            let img = act_field(alg, coeffs, &wedge[i], mono);
            if img.is_empty() {
                continue;
            }
            let rest: Vec<VFBasis> = wedge
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != i)
                .map(|(_, x)| x.clone())
                .collect();
            let s = sign((i + 1) % 2 == 1);
            for (e, c) in img {
                let row = dst.index_of(&rest, &e).expect("boundary leaves the slice");
                m.add_to(row, col, c * &s);
            }
        }
    }
    m
}

/// The matrix of `d_p` restricted to weight `w`.
pub fn ce_boundary(
    alg: &AlgebraDescriptor,
    coeffs: &Coefficients,
    p: usize,
    w: i64,
) -> Result<SparseMat<Rat>> {
    ce_boundary_capped(alg, coeffs, p, w, DEFAULT_SLICE_CAP)
}

pub fn ce_boundary_capped(
    alg: &AlgebraDescriptor,
    coeffs: &Coefficients,
    p: usize,
    w: i64,
    cap: usize,
) -> Result<SparseMat<Rat>> {
    check_supported(alg, coeffs)?;
    let src = chain_basis(alg, coeffs, p, w, cap)?;
    if p == 0 {
        return Ok(SparseMat::new(0, src.len()));
    }
    let dst = chain_basis(alg, coeffs, p - 1, w, cap)?;
    Ok(boundary_matrix(
        alg,
        coeffs,
        &src,
        &dst,
        &BracketCache::new(),
    ))
}

/// `dim ker d_p - rank d_{p+1}` at weight `w`.
pub fn homology_dim(
    alg: &AlgebraDescriptor,
    coeffs: &Coefficients,
    p: usize,
    w: i64,
) -> Result<usize> {
    let dp = ce_boundary(alg, coeffs, p, w)?;
    let dq = ce_boundary(alg, coeffs, p + 1, w)?;
    Ok(dp.ncols() - rank(&dp) - rank(&dq))
}

/// `homology_dim` recomputed from bases enumerated `pad` weights past the slice.
pub fn homology_dim_padded(
    alg: &AlgebraDescriptor,
    coeffs: &Coefficients,
    p: usize,
    w: i64,
    pad: i64,
) -> Result<usize> {
    check_supported(alg, coeffs)?;
    let cache = BracketCache::new();
    let basis = |q: usize| chain_basis_padded(alg, coeffs, q, w, DEFAULT_SLICE_CAP, pad);
    let cp = basis(p)?;
    let rank_out = if p == 0 {
        0
    } else {
        rank(&boundary_matrix(alg, coeffs, &cp, &basis(p - 1)?, &cache))
    };
    let rank_in = rank(&boundary_matrix(alg, coeffs, &basis(p + 1)?, &cp, &cache));
    Ok(cp.len() - rank_out - rank_in)
}

#[derive(Clone, Debug)]
pub struct TableOptions {
    pub cap: usize,
    /// Worker threads for the slice pool; `None` runs on the calling thread.
    pub jobs: Option<usize>,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions {
            cap: DEFAULT_SLICE_CAP,
            jobs: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SliceRecord {
    pub p: usize,
    pub w: i64,
    pub chain_dim: usize,
    pub rank_out: usize,
    pub rank_in: usize,
    pub homology: usize,
    pub d_squared_zero: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EulerCheck {
    pub w: i64,
    pub chain_sum: i64,
    pub homology_sum: i64,
    pub max_p: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct HomologyTable {
    pub algebra: String,
    pub coefficients: String,
    pub p_max: usize,
    pub w_min: i64,
    pub w_max: i64,
    pub slices: Vec<SliceRecord>,
    pub euler: Vec<EulerCheck>,
}

impl HomologyTable {
    pub fn dim(&self, p: usize, w: i64) -> Option<usize> {
        self.slices
            .iter()
            .find(|s| s.p == p && s.w == w)
            .map(|s| s.homology)
    }

    /// Nonzero `(p, w) → dim` entries.
    pub fn nonzero(&self) -> BTreeMap<(usize, i64), usize> {
        self.slices
            .iter()
            .filter(|s| s.homology > 0)
            .map(|s| ((s.p, s.w), s.homology))
            .collect()
    }

    pub fn d_squared_zero(&self) -> bool {
        self.slices.iter().all(|s| s.d_squared_zero)
    }

    pub fn euler_ok(&self) -> bool {
        self.euler.iter().all(|e| e.chain_sum == e.homology_sum)
    }

    /// Rows `p`, columns `w`, with a header row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("p");
        for w in self.w_min..=self.w_max {
            out.push_str(&format!(",w{w}"));
        }
        out.push('\n');
        for p in 0..=self.p_max {
            out.push_str(&p.to_string());
            for w in self.w_min..=self.w_max {
                out.push_str(&format!(",{}", self.dim(p, w).unwrap_or(0)));
            }
            out.push('\n');
        }
        out
    }
}

struct SliceData {
    dim: usize,
    rank: usize,
    d2: bool,
}

/// Dimension of `C_p(w)` and rank of `d_p` there, plus whether `d_{p-1} d_p = 0`.
fn slice(
    alg: &AlgebraDescriptor,
    coeffs: &Coefficients,
    p: usize,
    w: i64,
    cap: usize,
    cache: &BracketCache,
) -> Result<SliceData> {
    let src = chain_basis(alg, coeffs, p, w, cap)?;
    if p == 0 {
        return Ok(SliceData {
            dim: src.len(),
            rank: 0,
            d2: true,
        });
    }
    let dst = chain_basis(alg, coeffs, p - 1, w, cap)?;
    let dp = boundary_matrix(alg, coeffs, &src, &dst, cache);
    let d2 = if p >= 2 && !dp.is_zero() {
        let lower = chain_basis(alg, coeffs, p - 2, w, cap)?;
        let dq = boundary_matrix(alg, coeffs, &dst, &lower, cache);
        dq.mul(&dp)?.is_zero()
    } else {
        true
    };
    Ok(SliceData {
        dim: src.len(),
        rank: rank(&dp),
        d2,
    })
}

/// Exact `H_p` at every `p <= p_max`, `w_min <= w <= w_max`, plus per-weight
/// Euler characteristics over all `p` when the algebra is positively graded.
pub fn homology_table(
    alg: &AlgebraDescriptor,
    coeffs: &Coefficients,
    p_max: usize,
    w_max: i64,
    opts: &TableOptions,
) -> Result<HomologyTable> {
    check_supported(alg, coeffs)?;
    let wmin_alg = alg.min_weight();
    let w_min = (p_max as i64 * wmin_alg).min(0);
    let positive = wmin_alg >= 1;
    // slices needed: p <= p_max + 1, or every nonempty p when checking Euler characteristics
    let mut jobs: Vec<(usize, i64)> = Vec::new();
    for w in w_min..=w_max {
        let top = if positive {
            (w.max(0) / wmin_alg) as usize + 1
        } else {
            p_max + 1
        };
        for p in 0..=top.max(p_max + 1) {
            jobs.push((p, w));
        }
    }
    let cache = BracketCache::new();
    let run = || -> Result<Vec<((usize, i64), SliceData)>> {
        jobs.par_iter()
            .map(|&(p, w)| Ok(((p, w), slice(alg, coeffs, p, w, opts.cap, &cache)?)))
            .collect()
    };
    let results = match opts.jobs {
        Some(n) if n > 1 => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?
            .install(run)?,
        _ => jobs
            .iter()
            .map(|&(p, w)| Ok(((p, w), slice(alg, coeffs, p, w, opts.cap, &cache)?)))
            .collect::<Result<Vec<_>>>()?,
    };
    let data: HashMap<(usize, i64), SliceData> = results.into_iter().collect();
    let h = |p: usize, w: i64| {
        let s = &data[&(p, w)];
        s.dim - s.rank - data.get(&(p + 1, w)).map_or(0, |x| x.rank)
    };
    let mut slices = Vec::new();
    for p in 0..=p_max {
        for w in w_min..=w_max {
            let s = &data[&(p, w)];
            slices.push(SliceRecord {
                p,
                w,
                chain_dim: s.dim,
                rank_out: s.rank,
                rank_in: data[&(p + 1, w)].rank,
                homology: h(p, w),
                d_squared_zero: s.d2 && data[&(p + 1, w)].d2,
            });
        }
    }
    let mut euler = Vec::new();
    if positive {
        for w in w_min..=w_max {
            let max_p = data.keys().filter(|k| k.1 == w).map(|k| k.0).max().unwrap();
            // the last p is empty by construction, so every nonzero chain group is counted
            debug_assert_eq!(data[&(max_p, w)].dim, 0);
            let mut chain_sum = 0i64;
            let mut homology_sum = 0i64;
            for p in 0..max_p {
                let sg = if p % 2 == 0 { 1 } else { -1 };
                chain_sum += sg * data[&(p, w)].dim as i64;
                homology_sum += sg * h(p, w) as i64;
            }
            euler.push(EulerCheck {
                w,
                chain_sum,
                homology_sum,
                max_p: max_p - 1,
            });
        }
    }
    Ok(HomologyTable {
        algebra: alg.to_string(),
        coefficients: coeffs.to_string(),
        p_max,
        w_min,
        w_max,
        slices,
        euler,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn l(d: u32) -> AlgebraDescriptor {
        AlgebraDescriptor::truncated(d, 1)
    }

    #[test]
    fn small_boundaries() {
        let d1 = ce_boundary(&l(1), &Coefficients::Trivial, 1, 3).unwrap();
        assert!(d1.is_zero());
        let d2 = ce_boundary(&l(1), &Coefficients::Trivial, 2, 3).unwrap();
        assert_eq!((d2.nrows(), d2.ncols()), (1, 1));
        assert_eq!(d2.get(0, 0), rat(-1));
    }

    #[test]
    fn l1_low_window() {
        let t = homology_table(
            &l(1),
            &Coefficients::Trivial,
            2,
            10,
            &TableOptions::default(),
        )
        .unwrap();
        let nz: Vec<((usize, i64), usize)> = t.nonzero().into_iter().collect();
        assert_eq!(
            nz,
            vec![
                ((0, 0), 1),
                ((1, 1), 1),
                ((1, 2), 1),
                ((2, 5), 1),
                ((2, 7), 1)
            ]
        );
        assert!(t.d_squared_zero() && t.euler_ok());
    }

    #[test]
    fn l2_abelianization() {
        for w in 0..=6 {
            let h = homology_dim(&l(2), &Coefficients::Trivial, 1, w).unwrap();
            assert_eq!(h, usize::from((2..=4).contains(&w)), "w={w}");
        }
    }

    #[test]
    fn coefficients_parse_and_support() {
        let c: Coefficients = "T:1:0".parse().unwrap();
        assert_eq!(c.to_string(), "T:1:0");
        assert!(check_supported(&AlgebraDescriptor::full(1), &c).is_err());
        assert!(check_supported(&AlgebraDescriptor::direct_sum(2), &c).is_err());
        assert!(ce_boundary(&AlgebraDescriptor::full(2), &Coefficients::Trivial, 2, 0).is_ok());
    }

    #[test]
    fn resource_cap_names_slice() {
        let e = ce_boundary_capped(&AlgebraDescriptor::full(2), &Coefficients::Trivial, 3, 2, 5)
            .unwrap_err();
        assert!(matches!(e, Error::Resource { p: 3, w: 2, .. }));
    }

    #[test]
    fn full_w1_homology_squares_to_zero() {
        let a = AlgebraDescriptor::full(1);
        for w in -2..=3 {
            for p in 1..=3 {
                let dp = ce_boundary(&a, &Coefficients::Trivial, p, w).unwrap();
                let dq = ce_boundary(&a, &Coefficients::Trivial, p + 1, w).unwrap();
                assert!(dp.mul(&dq).unwrap().is_zero());
            }
        }
    }
}
