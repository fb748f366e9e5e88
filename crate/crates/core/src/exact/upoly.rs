//! Dense univariate polynomials over the rationals (series numerators, fits).

use num_traits::{One, Zero};

use super::mpoly::MPoly;
use super::rat::Rat;

/// Coefficients in ascending degree; empty for zero, last entry nonzero otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UPoly(Vec<Rat>);

impl UPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly(coeffs)
    }

    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    pub fn one() -> Self {
        UPoly(vec![Rat::one()])
    }

    pub fn from_ints(c: &[i64]) -> Self {
        UPoly::new(c.iter().map(|&x| Rat::from_integer(x.into())).collect())
    }

    /// `t^k`
    pub fn monomial(k: usize) -> Self {
        let mut v = vec![Rat::zero(); k + 1];
        v[k] = Rat::one();
        UPoly(v)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.0
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.0.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rat {
        self.0.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.0.len().max(o.0.len());
        UPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        let n = self.0.len().max(o.0.len());
        UPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut v = vec![Rat::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        UPoly::new(v)
    }

    pub fn scale(&self, c: &Rat) -> UPoly {
        UPoly::new(self.0.iter().map(|x| x * c).collect())
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.degree().unwrap();
        let lc = d.leading();
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            return (UPoly::zero(), self.clone());
        }
        let mut q = vec![Rat::zero(); rem.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &rem[k + dd] / &lc;
            if !c.is_zero() {
                for (j, b) in d.0.iter().enumerate() {
                    rem[k + j] -= &c * b;
                }
            }
            q[k] = c;
        }
        rem.truncate(dd);
        (UPoly::new(q), UPoly::new(rem))
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, o: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            let lc = a.leading();
            a.scale(&(Rat::one() / lc))
        }
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Power series coefficients of `self` truncated to `len` terms.
    pub fn truncated(&self, len: usize) -> Vec<Rat> {
        (0..len).map(|i| self.coeff(i)).collect()
    }

    /// Power series `self / d` to `len` terms; requires `d(0) != 0`.
    pub fn series_div(&self, d: &UPoly, len: usize) -> Vec<Rat> {
        let d0 = d.coeff(0);
        assert!(!d0.is_zero(), "series denominator vanishes at 0");
        let mut out: Vec<Rat> = Vec::with_capacity(len);
        for k in 0..len {
            let mut acc = self.coeff(k);
            for j in 1..=k.min(d.0.len().saturating_sub(1)) {
                acc -= &d.0[j] * &out[k - j];
            }
            out.push(acc / &d0);
        }
        out
    }

    /// Multiplicity of `x` as a root.
    pub fn root_multiplicity(&self, x: &Rat) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let lin = UPoly::new(vec![-x.clone(), Rat::one()]);
        let mut p = self.clone();
        let mut m = 0;
        loop {
            let (q, r) = p.divrem(&lin);
            if !r.is_zero() {
                return m;
            }
            p = q;
            m += 1;
        }
    }

    /// Interpolation through `(xs[i], ys[i])` by divided differences.
    pub fn interpolate(xs: &[Rat], ys: &[Rat]) -> UPoly {
        assert_eq!(xs.len(), ys.len());
        let n = xs.len();
        let mut dd: Vec<Rat> = ys.to_vec();
        for j in 1..n {
            for i in (j..n).rev() {
                dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
            }
        }
        // Horner on the Newton form
        let mut acc = UPoly::zero();
        for i in (0..n).rev() {
            acc = acc
                .mul(&UPoly::new(vec![-xs[i].clone(), Rat::one()]))
                .add(&UPoly::new(vec![dd[i].clone()]));
        }
        acc
    }

    pub fn to_mpoly(&self, var: &str) -> MPoly {
        MPoly::univariate(var, &self.0)
    }
}
