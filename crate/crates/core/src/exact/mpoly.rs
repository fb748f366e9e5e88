//! Sparse multivariate polynomials over the rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::rat::{fmt_rat, Coeff, Rat};
use crate::error::{Error, Result};

/// Exponent vector of a monomial.
pub type Exponent = Vec<u32>;

/// A polynomial `sum c_a x^a` with named variables.
///
/// Zero coefficients are never stored. A polynomial with an empty variable
/// list is a constant and combines with polynomials in any variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly {
    vars: Vec<String>,
    terms: BTreeMap<Exponent, Rat>,
}

impl MPoly {
    pub fn zero_in(vars: &[&str]) -> Self {
        MPoly {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    pub fn with_vars(vars: Vec<String>) -> Self {
        MPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = MPoly::with_vars(Vec::new());
        if !c.is_zero() {
            p.terms.insert(Vec::new(), c);
        }
        p
    }

    /// The variable `vars[i]`.
    pub fn var(vars: &[&str], i: usize) -> Self {
        let mut p = MPoly::zero_in(vars);
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        p.terms.insert(e, Rat::one());
        p
    }

    /// Single-variable polynomial from ascending coefficients.
    pub fn univariate(var: &str, coeffs: &[Rat]) -> Self {
        let mut p = MPoly::zero_in(&[var]);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                p.terms.insert(vec![i as u32], c.clone());
            }
        }
        p
    }

    pub fn from_terms(vars: Vec<String>, terms: impl IntoIterator<Item = (Exponent, Rat)>) -> Self {
        let mut p = MPoly::with_vars(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), p.vars.len(), "exponent length mismatch");
            p.add_term(e, c);
        }
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Rat> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Exponent, Rat> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u32]) -> Rat {
        self.terms.get(e).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add_term(&mut self, e: Exponent, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    /// Homogeneous components keyed by total degree.
    pub fn homogeneous_components(&self) -> BTreeMap<u32, MPoly> {
        let mut out: BTreeMap<u32, MPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let d = e.iter().sum();
            out.entry(d)
                .or_insert_with(|| MPoly::with_vars(self.vars.clone()))
                .terms
                .insert(e.clone(), c.clone());
        }
        out
    }

    /// Lexicographically largest term.
    pub fn leading_term(&self) -> Option<(&Exponent, &Rat)> {
        self.terms.iter().next_back()
    }

    /// Value of a constant polynomial; `None` if it has a non-constant term.
    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn scale(&self, c: &Rat) -> MPoly {
        if c.is_zero() {
            return MPoly::with_vars(self.vars.clone());
        }
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut acc = MPoly::one_like(self);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    fn one_like(p: &MPoly) -> MPoly {
        let mut q = MPoly::with_vars(p.vars.clone());
        q.terms.insert(vec![0; p.vars.len()], Rat::one());
        q
    }

    /// Evaluates at a full assignment of the variables.
    pub fn eval(&self, values: &[Rat]) -> Rat {
        assert_eq!(values.len(), self.vars.len());
        let mut total = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, &k) in values.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(v.clone(), k as usize);
                }
            }
            total += t;
        }
        total
    }

    pub fn partial_derivative(&self, i: usize) -> MPoly {
        let mut out = MPoly::with_vars(self.vars.clone());
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut f = e.clone();
            f[i] -= 1;
            out.add_term(f, c * Rat::from_integer(e[i].into()));
        }
        out
    }

    /// Dense ascending coefficients of a polynomial in at most one variable.
    pub fn univariate_coeffs(&self) -> Result<Vec<Rat>> {
        if self.vars.len() > 1 {
            return Err(Error::InvalidArgument(format!(
                "expected a univariate polynomial, got variables {:?}",
                self.vars
            )));
        }
        let deg = self.total_degree().unwrap_or(0) as usize;
        let mut out = vec![Rat::zero(); if self.terms.is_empty() { 0 } else { deg + 1 }];
        for (e, c) in &self.terms {
            let k = e.first().copied().unwrap_or(0) as usize;
            out[k] = c.clone();
        }
        Ok(out)
    }

    fn unify(a: &MPoly, b: &MPoly) -> Vec<String> {
        if a.vars == b.vars || b.vars.is_empty() {
            a.vars.clone()
        } else if a.vars.is_empty() {
            b.vars.clone()
        } else {
            panic!(
                "polynomials in different variables: {:?} vs {:?}",
                a.vars, b.vars
            )
        }
    }

    fn padded(e: &Exponent, n: usize) -> Exponent {
        if e.len() == n {
            e.clone()
        } else {
            let mut f = e.clone();
            f.resize(n, 0);
            f
        }
    }

    /// Exact division, driven by lexicographic leading terms.
    pub fn div_exact(&self, d: &MPoly) -> Result<MPoly> {
        if d.is_zero() {
            return Err(Error::InvalidArgument(
                "division by the zero polynomial".into(),
            ));
        }
        let vars = MPoly::unify(self, d);
        let n = vars.len();
        let d = MPoly {
            vars: vars.clone(),
            terms: d
                .terms
                .iter()
                .map(|(e, c)| (MPoly::padded(e, n), c.clone()))
                .collect(),
        };
        let mut rem = MPoly {
            vars: vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (MPoly::padded(e, n), c.clone()))
                .collect(),
        };
        let mut quot = MPoly::with_vars(vars);
        let (de, dc) = d
            .leading_term()
            .map(|(e, c)| (e.clone(), c.clone()))
            .unwrap();
        while let Some((re, rc)) = rem.leading_term().map(|(e, c)| (e.clone(), c.clone())) {
            if re.iter().zip(&de).any(|(a, b)| a < b) {
                return Err(Error::InvalidArgument(
                    "polynomial division is not exact".into(),
                ));
            }
            let qe: Exponent = re.iter().zip(&de).map(|(a, b)| a - b).collect();
            let qc = rc / &dc;
            for (e, c) in &d.terms {
                let m: Exponent = e.iter().zip(&qe).map(|(a, b)| a + b).collect();
                rem.add_term(m, -(c * &qc));
            }
            quot.add_term(qe, qc);
        }
        Ok(quot)
    }
}

impl Zero for MPoly {
    fn zero() -> Self {
        MPoly::with_vars(Vec::new())
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for MPoly {
    fn one() -> Self {
        MPoly::constant(Rat::one())
    }
}

impl<'a> Add<&'a MPoly> for &'a MPoly {
    type Output = MPoly;

    fn add(self, rhs: &MPoly) -> MPoly {
        let vars = MPoly::unify(self, rhs);
        let n = vars.len();
        let mut out = MPoly::with_vars(vars);
        for (e, c) in self.terms.iter().chain(rhs.terms.iter()) {
            out.add_term(MPoly::padded(e, n), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a MPoly> for &'a MPoly {
    type Output = MPoly;

    fn sub(self, rhs: &MPoly) -> MPoly {
        let vars = MPoly::unify(self, rhs);
        let n = vars.len();
        let mut out = MPoly::with_vars(vars);
        for (e, c) in &self.terms {
            out.add_term(MPoly::padded(e, n), c.clone());
        }
        for (e, c) in &rhs.terms {
            out.add_term(MPoly::padded(e, n), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a MPoly> for &'a MPoly {
    type Output = MPoly;

    fn mul(self, rhs: &MPoly) -> MPoly {
        let vars = MPoly::unify(self, rhs);
        let n = vars.len();
        let mut out = MPoly::with_vars(vars);
        for (ea, ca) in &self.terms {
            let ea = MPoly::padded(ea, n);
            for (eb, cb) in &rhs.terms {
                let eb = MPoly::padded(eb, n);
                let e: Exponent = ea.iter().zip(&eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;

    fn neg(self) -> MPoly {
        MPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Add for MPoly {
    type Output = MPoly;
    fn add(self, rhs: MPoly) -> MPoly {
        &self + &rhs
    }
}

impl Sub for MPoly {
    type Output = MPoly;
    fn sub(self, rhs: MPoly) -> MPoly {
        &self - &rhs
    }
}

impl Mul for MPoly {
    type Output = MPoly;
    fn mul(self, rhs: MPoly) -> MPoly {
        &self * &rhs
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

impl Coeff for MPoly {
    fn from_rat(r: &Rat) -> Self {
        MPoly::constant(r.clone())
    }

    fn div_exact(&self, d: &Self) -> Result<Self> {
        MPoly::div_exact(self, d)
    }
}

fn fmt_monomial(vars: &[String], e: &[u32]) -> String {
    let parts: Vec<String> = vars
        .iter()
        .zip(e)
        .filter(|(_, &k)| k > 0)
        .map(|(v, &k)| {
            if k == 1 {
                v.clone()
            } else {
                format!("{v}^{k}")
            }
        })
        .collect();
    parts.join("*")
}

impl fmt::Display for MPoly {
    /// Terms by descending total degree, then descending lex: `N^2 - 3*N + 1/2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&Exponent, &Rat)> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        for (i, (e, c)) in terms.into_iter().enumerate() {
            let mono = fmt_monomial(&self.vars, e);
            let neg = c.is_negative();
            let mag = c.abs();
            let body = if mono.is_empty() {
                fmt_rat(&mag)
            } else if mag.is_one() {
                mono
            } else {
                format!("{}*{}", fmt_rat(&mag), mono)
            };
            match (i, neg) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly[{}]({})", self.vars.join(","), self)
    }
}

/// All exponent vectors of total degree `deg` in `n` variables, ascending lex.
pub fn monomials(n: usize, deg: u32) -> Vec<Exponent> {
    fn rec(n: usize, deg: u32, prefix: &mut Exponent, out: &mut Vec<Exponent>) {
        if n == 1 {
            prefix.push(deg);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in 0..=deg {
            prefix.push(k);
            rec(n - 1, deg - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if deg == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(n, deg, &mut Vec::with_capacity(n), &mut out);
    out
}

/// `binom(n, k)` as u64.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Number of monomials of degree `w` in `r` variables.
pub fn monomial_count(r: usize, w: u32) -> u64 {
    if r == 0 {
        return u64::from(w == 0);
    }
    binomial(w as u64 + r as u64 - 1, r as u64 - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::{rat, ratio};

    fn xy() -> (MPoly, MPoly) {
        (MPoly::var(&["x", "y"], 0), MPoly::var(&["x", "y"], 1))
    }

    #[test]
    fn arithmetic_and_display() {
        let (x, y) = xy();
        let p = &(&x + &y) * &(&x - &y);
        assert_eq!(p.to_string(), "x^2 - y^2");
        let n = MPoly::var(&["N"], 0);
        let q = &(&n * &n) - &(&n.scale(&rat(3)) - &MPoly::constant(ratio(1, 2)));
        assert_eq!(q.to_string(), "N^2 - 3*N + 1/2");
        assert_eq!(MPoly::zero().to_string(), "0");
        assert_eq!((-&n).to_string(), "-N");
    }

    #[test]
    fn exact_division() {
        let (x, y) = xy();
        let a = &(&x + &y).pow(3) * &(&x - &MPoly::constant(rat(2)));
        let q = a.div_exact(&(&x + &y)).unwrap();
        assert_eq!(q, &(&x + &y).pow(2) * &(&x - &MPoly::constant(rat(2))));
        assert!(x.div_exact(&y).is_err());
        assert!(x.div_exact(&MPoly::zero()).is_err());
    }

    #[test]
    fn constants_promote() {
        let (x, _) = xy();
        let s = &x + &MPoly::constant(rat(1));
        assert_eq!(s.nvars(), 2);
        assert_eq!(s.eval(&[rat(2), rat(5)]), rat(3));
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials(2, 2), vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        for r in 1..5 {
            for w in 0..6 {
                assert_eq!(monomials(r, w).len() as u64, monomial_count(r, w));
            }
        }
        assert_eq!(monomials(0, 0), vec![Vec::<u32>::new()]);
        assert!(monomials(0, 1).is_empty());
    }

    #[test]
    fn derivative_and_components() {
        let (x, y) = xy();
        let f = &(&(&x * &x) * &y) + &x;
        assert_eq!(
            f.partial_derivative(0),
            &(&x * &y).scale(&rat(2)) + &MPoly::constant(rat(1))
        );
        let comps = f.homogeneous_components();
        assert_eq!(comps.len(), 2);
        assert!(comps[&3].is_homogeneous());
    }
}
