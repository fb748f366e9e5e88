//! Polynomial vector fields `x^a ∂_i`, their brackets and the graded
//! subalgebras used throughout.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::RwLock;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{fmt_rat, monomials, rat, Exponent, Rat};

/// `x^exponent ∂_direction`, directions counted from 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VFBasis {
    pub exponent: Exponent,
    pub direction: usize,
}

impl VFBasis {
    pub fn new(exponent: Exponent, direction: usize) -> Self {
        assert!(direction < exponent.len(), "direction out of range");
        VFBasis {
            exponent,
            direction,
        }
    }

    /// `e_k = z^{k+1} ∂` in one variable.
    pub fn e(k: i64) -> Self {
        assert!(k >= -1);
        VFBasis {
            exponent: vec![(k + 1) as u32],
            direction: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.exponent.len()
    }

    pub fn degree(&self) -> u32 {
        self.exponent.iter().sum()
    }

    pub fn weight(&self) -> i64 {
        self.degree() as i64 - 1
    }
}

impl Ord for VFBasis {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree()
            .cmp(&o.degree())
            .then_with(|| self.exponent.cmp(&o.exponent))
            .then_with(|| self.direction.cmp(&o.direction))
    }
}

impl PartialOrd for VFBasis {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for VFBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n() == 1 {
            return write!(f, "e{}", self.weight());
        }
        let mut mono = Vec::new();
        for (i, &a) in self.exponent.iter().enumerate() {
            match a {
                0 => {}
                1 => mono.push(format!("x{}", i + 1)),
                _ => mono.push(format!("x{}^{a}", i + 1)),
            }
        }
        if mono.is_empty() {
            write!(f, "d{}", self.direction + 1)
        } else {
            write!(f, "{}*d{}", mono.join("*"), self.direction + 1)
        }
    }
}

/// `[x^a ∂_i, x^b ∂_j] = b_i x^{a+b-ε_i} ∂_j - a_j x^{a+b-ε_j} ∂_i`.
pub fn bracket_basis(u: &VFBasis, v: &VFBasis) -> Vec<(VFBasis, Rat)> {
    let (i, j) = (u.direction, v.direction);
    let sum: Exponent = u
        .exponent
        .iter()
        .zip(&v.exponent)
        .map(|(x, y)| x + y)
        .collect();
    let mut out: Vec<(VFBasis, Rat)> = Vec::with_capacity(2);
    let bi = v.exponent[i];
    if bi > 0 {
        let mut e = sum.clone();
        e[i] -= 1;
        out.push((
            VFBasis {
                exponent: e,
                direction: j,
            },
            rat(bi as i64),
        ));
    }
    let aj = u.exponent[j];
    if aj > 0 {
        let mut e = sum;
        e[j] -= 1;
        let b = VFBasis {
            exponent: e,
            direction: i,
        };
        match out.iter_mut().find(|(x, _)| *x == b) {
            Some((_, c)) => *c -= rat(aj as i64),
            None => out.push((b, rat(-(aj as i64)))),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

/// Sparse rational combination of basis fields in `n` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieElement {
    n: usize,
    terms: BTreeMap<VFBasis, Rat>,
}

impl LieElement {
    pub fn zero(n: usize) -> Self {
        LieElement {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(b: VFBasis) -> Self {
        let n = b.n();
        let mut terms = BTreeMap::new();
        terms.insert(b, Rat::one());
        LieElement { n, terms }
    }

    /// `e_k` in `W_1`.
    pub fn e(k: i64) -> Self {
        Self::basis(VFBasis::e(k))
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (VFBasis, Rat)>) -> Result<Self> {
        let mut x = Self::zero(n);
        for (b, c) in terms {
            if b.n() != n {
                return Err(Error::DimensionMismatch(format!(
                    "field {b} is not in {n} variables"
                )));
            }
            x.add_term(b, c);
        }
        Ok(x)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<VFBasis, Rat> {
        &self.terms
    }

    pub fn coeff(&self, b: &VFBasis) -> Rat {
        self.terms.get(b).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, b: VFBasis, c: Rat) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(b.clone()).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&b);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut x = self.clone();
        for (b, c) in &o.terms {
            x.add_term(b.clone(), c.clone());
        }
        x
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&rat(-1)))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        LieElement {
            n: self.n,
            terms: self.terms.iter().map(|(b, x)| (b.clone(), x * c)).collect(),
        }
    }

    /// Common weight of all terms, `None` for zero or mixed elements.
    pub fn weight(&self) -> Option<i64> {
        let mut ws = self.terms.keys().map(|b| b.weight());
        let w = ws.next()?;
        ws.all(|x| x == w).then_some(w)
    }
}

impl fmt::Display for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(b, c)| {
                if c.is_one() {
                    b.to_string()
                } else {
                    format!("({})*{b}", fmt_rat(c))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub fn bracket(u: &LieElement, v: &LieElement) -> Result<LieElement> {
    if u.n != v.n {
        return Err(Error::DimensionMismatch(format!(
            "bracket of fields in {} and {} variables",
            u.n, v.n
        )));
    }
    let mut out = LieElement::zero(u.n);
    for (a, x) in &u.terms {
        for (b, y) in &v.terms {
            let xy = x * y;
            for (c, z) in bracket_basis(a, b) {
                out.add_term(c, z * &xy);
            }
        }
    }
    Ok(out)
}

/// Memoized basis brackets, shareable across threads.
#[derive(Default)]
pub struct BracketCache {
    table: RwLock<HashMap<(VFBasis, VFBasis), Vec<(VFBasis, Rat)>>>,
}

impl BracketCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, u: &VFBasis, v: &VFBasis) -> Vec<(VFBasis, Rat)> {
        let key = (u.clone(), v.clone());
        if let Some(x) = self.table.read().unwrap().get(&key) {
            return x.clone();
        }
        let x = bracket_basis(u, v);
        self.table.write().unwrap().insert(key, x.clone());
        x
    }

    pub fn len(&self) -> usize {
        self.table.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    /// All of `W_n`, weights from -1.
    Full,
    /// `L_d(n)`: fields of weight at least `d`.
    Truncated(u32),
    /// `L_1` acting on each coordinate separately: `x_m^{k+1} ∂_m`, `k >= 1`.
    DirectSum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraDescriptor {
    pub n: usize,
    pub flavor: Flavor,
}

impl AlgebraDescriptor {
    pub fn full(n: usize) -> Self {
        AlgebraDescriptor {
            n,
            flavor: Flavor::Full,
        }
    }

    pub fn truncated(d: u32, n: usize) -> Self {
        AlgebraDescriptor {
            n,
            flavor: Flavor::Truncated(d),
        }
    }

    pub fn direct_sum(n: usize) -> Self {
        AlgebraDescriptor {
            n,
            flavor: Flavor::DirectSum,
        }
    }

    pub fn min_weight(&self) -> i64 {
        match self.flavor {
            Flavor::Full => -1,
            Flavor::Truncated(d) => d as i64,
            Flavor::DirectSum => 1,
        }
    }

    pub fn contains(&self, b: &VFBasis) -> bool {
        if b.n() != self.n {
            return false;
        }
        match self.flavor {
            Flavor::Full => true,
            Flavor::Truncated(d) => b.weight() >= d as i64,
            Flavor::DirectSum => {
                let m = b.direction;
                b.exponent[m] >= 2
                    && b.exponent
                        .iter()
                        .enumerate()
                        .all(|(i, &a)| i == m || a == 0)
            }
        }
    }
}

impl fmt::Display for AlgebraDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.flavor {
            Flavor::Full => write!(f, "W:{}", self.n),
            Flavor::Truncated(d) => write!(f, "L{d}:{}", self.n),
            Flavor::DirectSum => write!(f, "D:{}", self.n),
        }
    }
}

impl FromStr for AlgebraDescriptor {
    type Err = Error;

    /// `W:<n>`, `L<d>:<n>` or `D:<n>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::Parse(format!(
                "algebra must look like W:2, L1:1 or D:2, got {s:?}"
            ))
        };
        let (head, n) = s.trim().split_once(':').ok_or_else(bad)?;
        let n: usize = n.parse().map_err(|_| bad())?;
        if n == 0 {
            return Err(bad());
        }
        match head {
            "W" => Ok(Self::full(n)),
            "D" => Ok(Self::direct_sum(n)),
            _ => {
                let d = head.strip_prefix('L').ok_or_else(bad)?;
                Ok(Self::truncated(d.parse().map_err(|_| bad())?, n))
            }
        }
    }
}

/// Basis of the weight `w` component, in the fixed order.
pub fn basis_of_weight(alg: &AlgebraDescriptor, w: i64) -> Vec<VFBasis> {
    if w < alg.min_weight() {
        return Vec::new();
    }
    let n = alg.n;
    if alg.flavor == Flavor::DirectSum {
        let mut out: Vec<VFBasis> = (0..n)
            .map(|m| {
                let mut e = vec![0; n];
                e[m] = (w + 1) as u32;
                VFBasis {
                    exponent: e,
                    direction: m,
                }
            })
            .collect();
        out.sort();
        return out;
    }
    let mut out = Vec::new();
    for a in monomials(n, (w + 1) as u32) {
        for i in 0..n {
            out.push(VFBasis {
                exponent: a.clone(),
                direction: i,
            });
        }
    }
    out.sort();
    out
}

/// `ι_d(e_k) = e_{dk} / d`.
pub fn iota_d(k: i64, d: i64) -> Result<LieElement> {
    if k < 1 {
        return Err(Error::InvalidArgument(format!(
            "iota_d is defined on e_k with k >= 1, got k={k}"
        )));
    }
    if d < 1 {
        return Err(Error::InvalidArgument(format!(
            "iota_d needs d >= 1, got d={d}"
        )));
    }
    Ok(LieElement::e(d * k).scale(&Rat::new(1.into(), d.into())))
}

/// Linear extension of `ι_d` to combinations of `e_k`, `k >= 1`.
pub fn iota_d_element(x: &LieElement, d: i64) -> Result<LieElement> {
    if x.n() != 1 {
        return Err(Error::InvalidArgument(
            "iota_d acts on one-variable fields".into(),
        ));
    }
    let mut out = LieElement::zero(1);
    for (b, c) in x.terms() {
        out = out.add(&iota_d(b.weight(), d)?.scale(c));
    }
    Ok(out)
}
