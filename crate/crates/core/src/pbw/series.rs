//! Rational generating functions and the Hilbert numerator of monomial ideals.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{fmt_rat, MPoly, Rat, UPoly};

/// `num(t) / den(t)` in lowest terms with `den(0) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSeries {
    num: UPoly,
    den: UPoly,
}

impl RationalSeries {
    pub fn new(num: UPoly, den: UPoly) -> Result<Self> {
        if den.coeff(0).is_zero() {
            return Err(Error::InvalidArgument(
                "series denominator vanishes at t = 0".into(),
            ));
        }
        if num.is_zero() {
            return Ok(RationalSeries {
                num,
                den: UPoly::one(),
            });
        }
        let g = num.gcd(&den);
        let (num, _) = num.divrem(&g);
        let (den, _) = den.divrem(&g);
        let c = Rat::one() / den.coeff(0);
        Ok(RationalSeries {
            num: num.scale(&c),
            den: den.scale(&c),
        })
    }

    pub fn zero() -> Self {
        RationalSeries {
            num: UPoly::zero(),
            den: UPoly::one(),
        }
    }

    /// `1 / Π (1 - t^{w_i})`
    pub fn free(weights: &[u32]) -> Self {
        RationalSeries::new(UPoly::one(), product_one_minus(weights)).unwrap()
    }

    pub fn num(&self) -> &UPoly {
        &self.num
    }

    pub fn den(&self) -> &UPoly {
        &self.den
    }

    pub fn add(&self, o: &Self) -> Self {
        RationalSeries::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
        .unwrap()
    }

    /// First `len` Taylor coefficients at `t = 0`.
    pub fn coefficients(&self, len: usize) -> Vec<Rat> {
        self.num.series_div(&self.den, len)
    }

    /// Order of the pole at `t = 1`.
    pub fn pole_order_at_one(&self) -> usize {
        if self.num.is_zero() {
            return 0;
        }
        self.den.root_multiplicity(&Rat::one())
    }
}

pub fn product_one_minus(weights: &[u32]) -> UPoly {
    weights.iter().fold(UPoly::one(), |acc, &w| {
        let mut c = vec![Rat::zero(); w as usize + 1];
        c[0] = Rat::one();
        c[w as usize] -= Rat::one();
        acc.mul(&UPoly::new(c))
    })
}

fn poly_string(p: &UPoly) -> String {
    let s = p.to_mpoly("t").to_string();
    if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
        format!("({s})")
    } else {
        s
    }
}

impl fmt::Display for RationalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == UPoly::one() {
            write!(f, "{}", self.num.to_mpoly("t"))
        } else {
            write!(f, "{}/{}", poly_string(&self.num), poly_string(&self.den))
        }
    }
}

fn coeff_json(c: &Rat) -> serde_json::Value {
    if c.is_integer() {
        serde_json::Value::Number(
            c.numer()
                .to_string()
                .parse::<serde_json::Number>()
                .unwrap_or_else(|_| 0.into()),
        )
    } else {
        serde_json::Value::String(fmt_rat(c))
    }
}

impl Serialize for RationalSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry(
            "num",
            &self.num.coeffs().iter().map(coeff_json).collect::<Vec<_>>(),
        )?;
        m.serialize_entry(
            "den",
            &self.den.coeffs().iter().map(coeff_json).collect::<Vec<_>>(),
        )?;
        m.end()
    }
}

/// Numerator `N(I)` with `k[g]/I` having series `N(I) / Π (1 - t^{w_i})`,
/// via `N(I + m) = N(I) - t^{deg m} N(I : m)`.
pub fn hilbert_numerator(gens: &[Vec<u32>], weights: &[u32]) -> UPoly {
    let gens = minimize(gens);
    match gens.split_last() {
        None => UPoly::one(),
        Some((m, rest)) => {
            let colon: Vec<Vec<u32>> = rest
                .iter()
                .map(|g| g.iter().zip(m).map(|(a, b)| a.saturating_sub(*b)).collect())
                .collect();
            let deg: u32 = m.iter().zip(weights).map(|(a, w)| a * w).sum();
            hilbert_numerator(rest, weights)
                .sub(&UPoly::monomial(deg as usize).mul(&hilbert_numerator(&colon, weights)))
        }
    }
}

fn minimize(gens: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut g: Vec<Vec<u32>> = gens.to_vec();
    g.sort_by_key(|m| (m.iter().sum::<u32>(), m.clone()));
    g.dedup();
    let mut out: Vec<Vec<u32>> = Vec::new();
    for m in g {
        if !out.iter().any(|d| d.iter().zip(&m).all(|(a, b)| a <= b)) {
            out.push(m);
        }
    }
    out
}

/// Eventual polynomial `f(n) = Σ_{k<=n} a_k` with `f(n) ~ c n^d / d!`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialSumFit {
    pub poly: UPoly,
    pub degree: usize,
    pub c: BigInt,
    /// First `n` from which `f` agrees with `poly` on the window.
    pub from: usize,
}

impl PartialSumFit {
    pub fn to_mpoly(&self) -> MPoly {
        self.poly.to_mpoly("n")
    }
}

/// Fits the partial sums of the first `window` coefficients by finite differences.
pub fn partial_sum_polynomial(s: &RationalSeries, window: usize) -> Result<PartialSumFit> {
    let coeffs = s.coefficients(window);
    let mut f: Vec<Rat> = Vec::with_capacity(window);
    let mut acc = Rat::zero();
    for c in &coeffs {
        acc += c;
        f.push(acc.clone());
    }
    let inconclusive =
        || Error::Inconclusive(format!("partial sums do not settle within {window} terms"));
    let mut diff = f.clone();
    for d in 0..window {
        // diff holds the d-th differences; look at the (d+1)-th
        let next: Vec<Rat> = diff.windows(2).map(|w| &w[1] - &w[0]).collect();
        let tail = next.iter().rev().take_while(|x| x.is_zero()).count();
        if tail >= 2 {
            // f agrees with a degree-d polynomial on indices from `start`
            let start = f.len() - (tail + d + 1);
            let xs: Vec<Rat> = (start..start + d + 1)
                .map(|n| Rat::from_integer(n.into()))
                .collect();
            let ys: Vec<Rat> = f[start..start + d + 1].to_vec();
            let poly = UPoly::interpolate(&xs, &ys);
            for (n, v) in f.iter().enumerate().skip(start) {
                if poly.eval(&Rat::from_integer(n.into())) != *v {
                    return Err(inconclusive());
                }
            }
            let degree = poly.degree().unwrap_or(0);
            let fact: BigInt = (1..=degree).map(BigInt::from).product();
            let c = poly.leading() * Rat::from_integer(fact);
            if !c.is_integer() {
                return Err(Error::Inconclusive(format!(
                    "leading constant {} is not an integer",
                    fmt_rat(&c)
                )));
            }
            return Ok(PartialSumFit {
                poly,
                degree,
                c: c.to_integer(),
                from: start,
            });
        }
        if next.len() < 3 {
            break;
        }
        diff = next;
    }
    Err(inconclusive())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn reduction_and_coefficients() {
        let s =
            RationalSeries::new(UPoly::from_ints(&[1, -1]), UPoly::from_ints(&[1, -2, 1])).unwrap();
        assert_eq!(s, RationalSeries::free(&[1]));
        assert_eq!(s.coefficients(3), vec![rat(1); 3]);
        assert_eq!(
            serde_json::to_string(&s).unwrap(),
            r#"{"num":[1],"den":[1,-1]}"#
        );
        assert_eq!(s.to_string(), "1/(-t + 1)");
        assert!(RationalSeries::new(UPoly::one(), UPoly::from_ints(&[0, 1])).is_err());
    }

    #[test]
    fn numerators() {
        let w = [1, 2];
        assert_eq!(hilbert_numerator(&[], &w), UPoly::one());
        assert!(hilbert_numerator(&[vec![0, 0]], &w).is_zero());
        // k[g1,g2]/(g1^2, g1 g2): 1 + t + t^2/(1-t^2) ... numerator 1 - t^2 - t^3 + t^4
        let n = hilbert_numerator(&[vec![2, 0], vec![1, 1]], &w);
        assert_eq!(n, UPoly::from_ints(&[1, 0, -1, -1, 1]));
    }

    #[test]
    fn partial_sums() {
        let fit = partial_sum_polynomial(&RationalSeries::free(&[1]), 12).unwrap();
        assert_eq!((fit.degree, fit.c.clone()), (1, BigInt::from(1)));
        assert_eq!(fit.poly, UPoly::from_ints(&[1, 1]));
        let fit = partial_sum_polynomial(&RationalSeries::free(&[1, 1]), 12).unwrap();
        assert_eq!((fit.degree, fit.c.clone()), (2, BigInt::from(1)));
        let s = RationalSeries::new(UPoly::from_ints(&[1, 1]), UPoly::from_ints(&[1, -1])).unwrap();
        let fit = partial_sum_polynomial(&s, 12).unwrap();
        assert_eq!(fit.poly, UPoly::from_ints(&[1, 2]));
        assert_eq!((fit.degree, fit.c), (1, BigInt::from(2)));
        assert!(partial_sum_polynomial(&RationalSeries::free(&[1, 1, 1, 1]), 4).is_err());
    }
}
