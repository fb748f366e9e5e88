//! T-spaces: subspaces of `k[x_1..x_n]` closed under the substitutions
//! `f ↦ f(p(x_1), …, p(x_n))` with `p(0) = 0`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{monomials, Exponent, IntEchelon, MPoly, Rat, UPoly};
use crate::pbw::series::{product_one_minus, RationalSeries};
use crate::tensormod::{act_e_terms, Terms};

/// Variable names `x1, …, xn`.
pub fn variables(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

fn substitution_coeffs(p: &MPoly) -> Result<Vec<Rat>> {
    let c = p.univariate_coeffs()?;
    if c.first().is_some_and(|c0| !c0.is_zero()) {
        return Err(Error::InvalidArgument(format!(
            "substituted polynomial {p} has a nonzero constant term"
        )));
    }
    Ok(c)
}

/// `f(p(x_1), …, p(x_n))` for a univariate `p` with `p(0) = 0`.
pub fn substitute(f: &MPoly, p: &MPoly) -> Result<MPoly> {
    let c = substitution_coeffs(p)?;
    substitute_coeffs(f, &c)
}

fn substitute_coeffs(f: &MPoly, c: &[Rat]) -> Result<MPoly> {
    let vars = f.vars().to_vec();
    let n = vars.len();
    // powers[i][k] = p(x_i)^k
    let mut powers: Vec<Vec<MPoly>> = Vec::with_capacity(n);
    for i in 0..n {
        let top = f.degree_in(i).unwrap_or(0);
        let pi = MPoly::from_terms(
            vars.clone(),
            c.iter()
                .enumerate()
                .filter(|(_, a)| !a.is_zero())
                .map(|(k, a)| {
                    let mut e = vec![0; n];
                    e[i] = k as u32;
                    (e, a.clone())
                }),
        );
        let mut pw = vec![MPoly::from_terms(vars.clone(), [(vec![0; n], Rat::one())])];
        for k in 1..=top as usize {
            let next = &pw[k - 1] * &pi;
            pw.push(next);
        }
        powers.push(pw);
    }
    let mut out = MPoly::with_vars(vars.clone());
    for (e, a) in f.terms() {
        let mut t = MPoly::from_terms(vars.clone(), [(vec![0; n], a.clone())]);
        for (i, &k) in e.iter().enumerate() {
            if k > 0 {
                t = &t * &powers[i][k as usize];
            }
        }
        out = &out + &t;
    }
    Ok(out)
}

/// Homogeneous components recovered from the scalings `f(λ_i x)`.
#[derive(Clone, Debug, Serialize)]
pub struct HomogeneousSplit {
    pub degrees: Vec<u32>,
    #[serde(serialize_with = "ser_rats")]
    pub lambdas: Vec<Rat>,
    /// `components[j] = Σ_i weights[j][i] · f(λ_i x)`.
    #[serde(serialize_with = "ser_rat_rows")]
    pub weights: Vec<Vec<Rat>>,
    #[serde(serialize_with = "ser_polys")]
    pub components: Vec<MPoly>,
}

fn ser_rats<S: serde::Serializer>(v: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(crate::exact::fmt_rat))
}

fn ser_rat_rows<S: serde::Serializer>(
    v: &[Vec<Rat>],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(
        v.iter()
            .map(|r| r.iter().map(crate::exact::fmt_rat).collect::<Vec<_>>()),
    )
}

fn ser_polys<S: serde::Serializer>(v: &[MPoly], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|p| p.to_string()))
}

/// Splits `f` using `λ = 1, 2, …, k`.
pub fn homogeneous_split(f: &MPoly, degrees: &[u32]) -> Result<HomogeneousSplit> {
    let lambdas: Vec<Rat> = (1..=degrees.len() as i64)
        .map(|i| Rat::from_integer(i.into()))
        .collect();
    homogeneous_split_with(f, degrees, &lambdas)
}

pub fn homogeneous_split_with(
    f: &MPoly,
    degrees: &[u32],
    lambdas: &[Rat],
) -> Result<HomogeneousSplit> {
    let k = degrees.len();
    if lambdas.len() != k {
        return Err(Error::DimensionMismatch(format!(
            "{k} degrees but {} scalars",
            lambdas.len()
        )));
    }
    let present = f.homogeneous_components();
    if let Some(d) = present.keys().find(|d| !degrees.contains(d)) {
        return Err(Error::InvalidArgument(format!(
            "f has a component of degree {d} not in {degrees:?}"
        )));
    }
    for i in 0..k {
        for j in 0..i {
            if lambdas[i] == lambdas[j] {
                return Err(Error::SingularVandermonde(format!(
                    "scalar {} repeated",
                    crate::exact::fmt_rat(&lambdas[i])
                )));
            }
            if degrees[i] == degrees[j] {
                return Err(Error::SingularVandermonde(format!(
                    "degree {} repeated",
                    degrees[i]
                )));
            }
        }
    }
    // V[i][j] = λ_i^{n_j}; f(λ_i x) = Σ_j V[i][j] f_j
    let v: Vec<Vec<Rat>> = lambdas
        .iter()
        .map(|l| {
            degrees
                .iter()
                .map(|&d| num_traits::pow(l.clone(), d as usize))
                .collect()
        })
        .collect();
    let weights = invert(&v)
        .ok_or_else(|| Error::SingularVandermonde("scalars give a singular system".into()))?;
    let scaled: Vec<MPoly> = lambdas
        .iter()
        .map(|l| substitute_coeffs(f, &[Rat::zero(), l.clone()]))
        .collect::<Result<_>>()?;
    let vars = f.vars().to_vec();
    let components: Vec<MPoly> = weights
        .iter()
        .map(|row| {
            row.iter()
                .zip(&scaled)
                .fold(MPoly::with_vars(vars.clone()), |acc, (w, g)| {
                    &acc + &g.scale(w)
                })
        })
        .collect();
    for (d, c) in degrees.iter().zip(&components) {
        let expect = present
            .get(d)
            .cloned()
            .unwrap_or_else(|| MPoly::with_vars(vars.clone()));
        debug_assert!(c == &expect || (c.is_zero() && expect.is_zero()));
    }
    Ok(HomogeneousSplit {
        degrees: degrees.to_vec(),
        lambdas: lambdas.to_vec(),
        weights,
        components,
    })
}

/// Gauss–Jordan inverse; `None` when singular.
fn invert(m: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        let inv = Rat::one() / &a[c][c];
        for x in a[c].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let pivot = a[c].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// `Σ_i p(x_i) ∂f/∂x_i`.
pub fn infinitesimal_act(p: &MPoly, f: &MPoly) -> Result<MPoly> {
    let c = substitution_coeffs(p)?;
    Ok(infinitesimal_coeffs(&c, f))
}

fn infinitesimal_coeffs(c: &[Rat], f: &MPoly) -> MPoly {
    let vars = f.vars().to_vec();
    let n = vars.len();
    let mut out = MPoly::with_vars(vars);
    for (e, a) in f.terms() {
        for i in 0..n {
            if e[i] == 0 {
                continue;
            }
            let base = a * Rat::from_integer(e[i].into());
            for (k, ck) in c.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                let mut g = e.clone();
                g[i] = g[i] - 1 + k as u32;
                out.add_term(g, &base * ck);
            }
        }
    }
    out
}

/// `t^{k+1}` as a substitution polynomial.
pub fn power_field(k: u32) -> MPoly {
    let mut c = vec![Rat::zero(); k as usize + 2];
    c[k as usize + 1] = Rat::one();
    MPoly::univariate("t", &c)
}

/// Positionally re-embeds `f` into `x1..xn`.
pub fn embed(f: &MPoly, n: usize) -> Result<MPoly> {
    if f.nvars() > n {
        return Err(Error::DimensionMismatch(format!(
            "{} variables in a ring with {n}",
            f.nvars()
        )));
    }
    Ok(MPoly::from_terms(
        variables(n),
        f.terms().iter().map(|(e, c)| {
            let mut e = e.clone();
            e.resize(n, 0);
            (e, c.clone())
        }),
    ))
}

/// Homogeneous polynomials of one weight, kept in echelon form over the monomial basis.
#[derive(Clone, Debug)]
struct WeightSpace {
    n: usize,
    monos: Vec<Exponent>,
    index: BTreeMap<Exponent, usize>,
    ech: IntEchelon,
}

impl WeightSpace {
    fn new(n: usize, w: u32) -> Self {
        let monos = monomials(n, w);
        let index = monos
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, e)| (e, i))
            .collect();
        WeightSpace {
            n,
            monos,
            index,
            ech: IntEchelon::new(),
        }
    }

    fn row(&self, f: &MPoly) -> Vec<(usize, Rat)> {
        f.terms()
            .iter()
            .map(|(e, c)| (self.index[e], c.clone()))
            .collect()
    }

    fn insert(&mut self, f: &MPoly) -> bool {
        let r = self.row(f);
        self.ech.insert_rat(&r)
    }

    fn contains(&self, f: &MPoly) -> bool {
        self.ech.contains_rat(&self.row(f))
    }

    fn rank(&self) -> usize {
        self.ech.rank()
    }

    fn basis(&self) -> Vec<MPoly> {
        self.ech
            .reduced_rows()
            .into_iter()
            .map(|r| {
                MPoly::from_terms(
                    variables(self.n),
                    r.into_iter()
                        .map(|(c, v)| (self.monos[c].clone(), Rat::from_integer(v))),
                )
            })
            .collect()
    }
}

/// Graded subspace with exact per-weight bases in reduced echelon form.
#[derive(Clone, Debug)]
pub struct TSpace {
    pub n: usize,
    pub cutoff: u32,
    pub graded_basis: BTreeMap<u32, Vec<MPoly>>,
    /// Certificates for the homogeneous splitting of each generator.
    pub splits: Vec<HomogeneousSplit>,
    echelons: Vec<WeightSpace>,
}

impl TSpace {
    pub fn dims(&self) -> Vec<usize> {
        self.echelons.iter().map(|e| e.rank()).collect()
    }

    pub fn dim(&self, w: u32) -> usize {
        self.echelons.get(w as usize).map_or(0, |e| e.rank())
    }

    /// Whether every component of `f` up to the cutoff lies in the space; `f` is
    /// read positionally in `x1..xn`.
    pub fn contains_truncated(&self, f: &MPoly) -> Result<bool> {
        let f = embed(f, self.n)?;
        for (d, c) in f.homogeneous_components() {
            if d > self.cutoff {
                continue;
            }
            if !self.echelons[d as usize].contains(&c) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Closure of `generators` under linear spans, homogeneous splitting and the
/// fields `Σ x_i^{k+1} ∂_i`, saturated weight by weight up to `cutoff`.
pub fn closure_basis(n: usize, generators: &[MPoly], cutoff: u32) -> Result<TSpace> {
    let mut seeds: Vec<Vec<MPoly>> = vec![Vec::new(); cutoff as usize + 1];
    let mut splits = Vec::new();
    for g in generators {
        if g.is_zero() {
            return Err(Error::InvalidArgument("zero generator".into()));
        }
        let g = embed(g, n)?;
        let degrees: Vec<u32> = g.homogeneous_components().keys().copied().collect();
        let split = homogeneous_split(&g, &degrees)?;
        for (d, c) in split.degrees.iter().zip(&split.components) {
            if *d <= cutoff {
                seeds[*d as usize].push(c.clone());
            }
        }
        splits.push(split);
    }
    let fields: Vec<Vec<Rat>> = (1..=cutoff)
        .map(|k| substitution_coeffs(&power_field(k)).unwrap())
        .collect();
    let mut echelons: Vec<WeightSpace> = Vec::with_capacity(cutoff as usize + 1);
    let mut graded_basis = BTreeMap::new();
    for w in 0..=cutoff {
        let mut ech = WeightSpace::new(n, w);
        for s in &seeds[w as usize] {
            ech.insert(s);
        }
        for k in 1..=w {
            for b in echelons[(w - k) as usize].basis() {
                ech.insert(&infinitesimal_coeffs(&fields[k as usize - 1], &b));
            }
        }
        let basis = ech.basis();
        if !basis.is_empty() {
            graded_basis.insert(w, basis);
        }
        echelons.push(ech);
    }
    Ok(TSpace {
        n,
        cutoff,
        graded_basis,
        splits,
        echelons,
    })
}

/// The same submodule built through the diagonal `e_k` action on
/// `T_0^{⊗n}`; returns graded dimensions up to `cutoff`.
pub fn module_route_dims(n: usize, generators: &[MPoly], cutoff: u32) -> Result<Vec<usize>> {
    let zeros = vec![Rat::zero(); n];
    let mut layers: Vec<Vec<Terms<Rat>>> = Vec::with_capacity(cutoff as usize + 1);
    let mut seeds: Vec<Vec<Terms<Rat>>> = vec![Vec::new(); cutoff as usize + 1];
    for g in generators {
        let g = embed(g, n)?;
        for (d, c) in g.homogeneous_components() {
            if d <= cutoff {
                seeds[d as usize].push(c.terms().clone());
            }
        }
    }
    let mut dims = Vec::new();
    for w in 0..=cutoff {
        let index: BTreeMap<Exponent, usize> = monomials(n, w)
            .into_iter()
            .enumerate()
            .map(|(i, e)| (e, i))
            .collect();
        let mut ech = IntEchelon::new();
        let mut kept: Vec<Terms<Rat>> = Vec::new();
        let mut push = |t: Terms<Rat>, ech: &mut IntEchelon| {
            let row: Vec<(usize, Rat)> = t.iter().map(|(e, c)| (index[e], c.clone())).collect();
            if ech.insert_rat(&row) {
                kept.push(t);
            }
        };
        for s in &seeds[w as usize] {
            push(s.clone(), &mut ech);
        }
        for k in 1..=w {
            for v in &layers[(w - k) as usize] {
                push(act_e_terms(k, &zeros, &zeros, v), &mut ech);
            }
        }
        dims.push(ech.rank());
        layers.push(kept);
    }
    Ok(dims)
}

/// Whether `f(p(x))` truncated at the cutoff stays in the space for every basis element.
pub fn substitution_closed(ts: &TSpace, p: &MPoly) -> Result<bool> {
    for basis in ts.graded_basis.values() {
        for f in basis {
            if !ts.contains_truncated(&substitute(f, p)?)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, Serialize)]
pub struct TSpaceSeries {
    /// `dim S_d` for `d = 0..=cutoff`.
    pub dims: Vec<usize>,
    pub fit: Option<RationalSeries>,
    pub fit_text: Option<String>,
    /// Coefficients from this index through the cutoff are checks, not inputs, of the fit.
    pub verified_from: Option<usize>,
    pub cutoff: u32,
    pub note: Option<String>,
}

/// Truncated dimension series and a rational fit over `Π_{i<=m} (1 - t^i)`, `m <= n`.
pub fn tspace_series(ts: &TSpace) -> TSpaceSeries {
    let dims = ts.dims();
    let len = dims.len();
    let f = UPoly::new(
        dims.iter()
            .map(|&d| Rat::from_integer((d as i64).into()))
            .collect(),
    );
    for m in 1..=ts.n.max(1) as u32 {
        let den = product_one_minus(&(1..=m).collect::<Vec<_>>());
        let num = UPoly::new(f.mul(&den).truncated(len));
        let deg = num.degree().map_or(0, |d| d + 1);
        // at least two coefficients past the numerator must be confirmed
        if deg + 2 <= len {
            let s = RationalSeries::new(num, den).expect("denominator is 1 at t = 0");
            debug_assert_eq!(s.coefficients(len), f.truncated(len));
            return TSpaceSeries {
                dims,
                fit_text: Some(s.to_string()),
                fit: Some(s),
                verified_from: Some(deg),
                cutoff: ts.cutoff,
                note: None,
            };
        }
    }
    TSpaceSeries {
        dims,
        fit: None,
        fit_text: None,
        verified_from: None,
        cutoff: ts.cutoff,
        note: Some(format!(
            "no rational fit with denominator Π(1 - t^i), i <= {}, confirmed by cutoff {}",
            ts.n, ts.cutoff
        )),
    }
}
