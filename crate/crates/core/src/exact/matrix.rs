//! Sparse matrices with exact entries; rank, kernel and determinants.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::echelon::{rank_of_rows, IntEchelon, RatRow};
use super::mpoly::MPoly;
use super::rat::{Coeff, Rat};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct SparseMat<T = Rat> {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), T>,
}

impl<T: Coeff> SparseMat<T> {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMat {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::new(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn from_dense(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::new(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged dense matrix");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Sets an entry; zero removes it. Panics when out of range.
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of range"
        );
        if v.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: T) {
        let cur = self.entries.remove(&(i, j)).unwrap_or_else(T::zero);
        self.set(i, j, cur + v);
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(T::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &T)> {
        self.entries.iter()
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::new(self.cols, self.rows);
        for (&(i, j), v) in &self.entries {
            m.entries.insert((j, i), v.clone());
        }
        m
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut d = vec![vec![T::zero(); self.cols]; self.rows];
        for (&(i, j), v) in &self.entries {
            d[i][j] = v.clone();
        }
        d
    }

    pub fn row_vectors(&self) -> Vec<Vec<(usize, T)>> {
        let mut out = vec![Vec::new(); self.rows];
        for (&(i, j), v) in &self.entries {
            out[i].push((j, v.clone()));
        }
        out
    }

    pub fn col_vectors(&self) -> Vec<Vec<(usize, T)>> {
        let mut out = vec![Vec::new(); self.cols];
        for (&(i, j), v) in &self.entries {
            out[j].push((i, v.clone()));
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let orows = o.row_vectors();
        let mut m = Self::new(self.rows, o.cols);
        for (&(i, k), a) in &self.entries {
            for (j, b) in &orows[k] {
                m.add_to(i, *j, a.clone() * b.clone());
            }
        }
        Ok(m)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> SparseMat<U> {
        let mut m = SparseMat::new(self.rows, self.cols);
        for (&(i, j), v) in &self.entries {
            m.set(i, j, f(v));
        }
        m
    }
}

/// Exact rank over Q.
pub fn rank(m: &SparseMat<Rat>) -> usize {
    // eliminate along the shorter side
    if m.nrows() <= m.ncols() {
        rank_of_rows(&m.row_vectors(), m.ncols())
    } else {
        rank_of_rows(&m.col_vectors(), m.nrows())
    }
}

/// Basis of the right null space, one vector per free column.
pub fn kernel_basis(m: &SparseMat<Rat>) -> Vec<Vec<Rat>> {
    let mut ech = IntEchelon::new();
    for row in m.row_vectors() {
        ech.insert_rat(&row);
    }
    let reduced = ech.reduced_rows();
    let pivots: Vec<usize> = reduced.iter().map(|r| r[0].0).collect();
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; m.ncols()];
        for &p in &pivots {
            v[p] = true;
        }
        v
    };
    let mut out = Vec::new();
    for free in (0..m.ncols()).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Rat::zero(); m.ncols()];
        v[free] = Rat::one();
        for row in &reduced {
            if let Some((_, a)) = row.iter().find(|(c, _)| *c == free) {
                let (p, lead) = (&row[0].0, &row[0].1);
                v[*p] = -Rat::new(a.clone(), lead.clone());
            }
        }
        out.push(v);
    }
    out
}

/// Multiplies a sparse matrix by a dense vector.
pub fn apply(m: &SparseMat<Rat>, v: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); m.nrows()];
    for (&(i, j), a) in m.entries() {
        if !v[j].is_zero() {
            out[i] += a * &v[j];
        }
    }
    out
}

/// Fraction-free (Bareiss) determinant over an integral domain with exact division.
pub fn det_bareiss<T: Coeff>(m: &SparseMat<T>) -> Result<T> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "determinant of non-square {}x{} matrix",
            m.nrows(),
            m.ncols()
        )));
    }
    if n == 0 {
        return Ok(T::one());
    }
    let mut a = m.to_dense();
    let mut sign_flip = false;
    let mut prev = T::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            // sparsity heuristic: swap in the pivot row with the fewest nonzeros
            let pick = (k + 1..n)
                .filter(|&i| !a[i][k].is_zero())
                .min_by_key(|&i| a[i][k..].iter().filter(|x| !x.is_zero()).count());
            match pick {
                Some(i) => {
                    a.swap(i, k);
                    sign_flip = !sign_flip;
                }
                None => return Ok(T::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j].clone() * a[k][k].clone() - a[i][k].clone() * a[k][j].clone();
                a[i][j] = num.div_exact(&prev)?;
            }
            a[i][k] = T::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if sign_flip { -d } else { d })
}

/// Rational determinant: columns are cleared of denominators and the
/// resulting integer matrix goes through Bareiss elimination.
pub fn det(m: &SparseMat<Rat>) -> Result<Rat> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "determinant of non-square {}x{} matrix",
            n,
            m.ncols()
        )));
    }
    let mut scale = BigInt::one();
    let mut a = vec![vec![BigInt::zero(); n]; n];
    for (j, col) in m.col_vectors().into_iter().enumerate() {
        let l = col
            .iter()
            .fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
        for (i, v) in col {
            a[i][j] = v.numer() * (&l / v.denom());
        }
        scale *= l;
    }
    Ok(Rat::new(det_integer(a), scale))
}

/// Bareiss elimination on an integer matrix.
pub fn det_integer(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in rest.iter_mut() {
            let f = row[k].clone();
            for j in k + 1..n {
                let mut x = &row[j] * &pivot_row[k];
                if !f.is_zero() && !pivot_row[j].is_zero() {
                    x -= &f * &pivot_row[j];
                }
                row[j] = x / &prev;
            }
            row[k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

pub fn det_symbolic(m: &SparseMat<MPoly>) -> Result<MPoly> {
    det_bareiss(m)
}

/// Integer vector proportional to `v`, with coprime entries.
pub fn primitive_integer(v: &[Rat]) -> Vec<BigInt> {
    let row: RatRow = v.iter().cloned().enumerate().collect();
    let prim = super::echelon::primitive_row(&row);
    let mut out = vec![BigInt::zero(); v.len()];
    for (c, x) in prim {
        out[c] = x;
    }
    out
}
