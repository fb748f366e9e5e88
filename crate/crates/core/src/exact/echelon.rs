//! Incremental row echelon forms: fraction-free over the integers, and a
//! word-sized prime field used only as a one-sided full-rank certificate.
//!
//! Rank over Q is never smaller than rank modulo a prime, so a full-rank
//! reduction modulo `P` proves full rank over Q. Anything short of full rank
//! is recomputed exactly.

use std::collections::BTreeMap;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rat::Rat;

/// Sparse row with strictly increasing column indices and nonzero entries.
pub type IntRow = Vec<(usize, BigInt)>;
pub type RatRow = Vec<(usize, Rat)>;

/// Clears denominators and content; leading entry positive. Zero rows map to `[]`.
pub fn primitive_row(row: &[(usize, Rat)]) -> IntRow {
    let mut sorted: Vec<&(usize, Rat)> = row.iter().filter(|(_, v)| !v.is_zero()).collect();
    sorted.sort_by_key(|(c, _)| *c);
    if sorted.is_empty() {
        return Vec::new();
    }
    let mut l = BigInt::one();
    for (_, v) in &sorted {
        l = l.lcm(v.denom());
    }
    let mut out: IntRow = Vec::with_capacity(sorted.len());
    for (c, v) in sorted {
        let x = v.numer() * (&l / v.denom());
        match out.last_mut() {
            Some((lc, lv)) if *lc == *c => *lv += x,
            _ => out.push((*c, x)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    normalize(&mut out);
    out
}

fn normalize(row: &mut IntRow) {
    if row.is_empty() {
        return;
    }
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    let flip = row[0].1.is_negative();
    if !g.is_one() || flip {
        let g = if flip { -g } else { g };
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
}

/// `a * x - b * y`, dropping zeros.
fn combine(a: &BigInt, x: &IntRow, b: &BigInt, y: &IntRow) -> IntRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let ci = x.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let cj = y.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        if ci < cj {
            out.push((ci, a * &x[i].1));
            i += 1;
        } else if cj < ci {
            out.push((cj, -(b * &y[j].1)));
            j += 1;
        } else {
            let v = a * &x[i].1 - b * &y[j].1;
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Fraction-free echelon basis keyed by leading column.
#[derive(Clone, Debug, Default)]
pub struct IntEchelon {
    rows: BTreeMap<usize, IntRow>,
}

impl IntEchelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces the leading entries of `row` against the basis.
    pub fn reduce(&self, mut row: IntRow) -> IntRow {
        while let Some((c, _)) = row.first() {
            match self.rows.get(c) {
                Some(p) => {
                    let a = p[0].1.clone();
                    let b = row[0].1.clone();
                    row = combine(&a, &row, &b, p);
                    normalize(&mut row);
                }
                None => break,
            }
        }
        row
    }

    /// Adds a row; returns whether the rank grew.
    pub fn insert(&mut self, row: IntRow) -> bool {
        let row = self.reduce(row);
        match row.first() {
            None => false,
            Some(&(c, _)) => {
                self.rows.insert(c, row);
                true
            }
        }
    }

    pub fn insert_rat(&mut self, row: &[(usize, Rat)]) -> bool {
        self.insert(primitive_row(row))
    }

    pub fn contains_rat(&self, row: &[(usize, Rat)]) -> bool {
        self.reduce(primitive_row(row)).is_empty()
    }

    /// Fully reduced rows: each pivot column is zero in every other row.
    pub fn reduced_rows(&self) -> Vec<IntRow> {
        let mut rows: BTreeMap<usize, IntRow> = self.rows.clone();
        let pivots: Vec<usize> = rows.keys().rev().copied().collect();
        for &pc in &pivots {
            let prow = rows[&pc].clone();
            let pval = prow[0].1.clone();
            for (_, other) in rows.range_mut(..pc) {
                if let Some(pos) = other.iter().position(|(c, _)| *c == pc) {
                    let b = other[pos].1.clone();
                    let mut r = combine(&pval, other, &b, &prow);
                    normalize(&mut r);
                    *other = r;
                }
            }
        }
        rows.into_values().collect()
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.rows.keys().copied().collect()
    }
}

/// The Mersenne prime 2^61 - 1.
pub const P: u64 = (1u64 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    acc
}

fn invmod(a: u64) -> u64 {
    powmod(a, P - 2)
}

fn bigint_mod(x: &BigInt) -> u64 {
    let p = BigInt::from(P);
    let r = x.mod_floor(&p);
    r.to_u64().unwrap()
}

/// Image of a rational in F_P, or `None` if the denominator vanishes there.
pub fn rat_mod(r: &Rat) -> Option<u64> {
    let d = bigint_mod(r.denom());
    if d == 0 {
        return None;
    }
    let n = if r.numer().sign() == Sign::NoSign {
        0
    } else {
        bigint_mod(r.numer())
    };
    Some(mulmod(n, invmod(d)))
}

type ModRow = Vec<(usize, u64)>;

fn mod_row(row: &[(usize, Rat)]) -> Option<ModRow> {
    let mut out: ModRow = Vec::with_capacity(row.len());
    for (c, v) in row {
        let x = rat_mod(v)?;
        if x != 0 {
            out.push((*c, x));
        }
    }
    out.sort_by_key(|e| e.0);
    let mut merged: ModRow = Vec::with_capacity(out.len());
    for (c, v) in out {
        match merged.last_mut() {
            Some((lc, lv)) if *lc == c => *lv = (*lv + v) % P,
            _ => merged.push((c, v)),
        }
    }
    merged.retain(|e| e.1 != 0);
    Some(merged)
}

#[derive(Default)]
struct ModEchelon {
    rows: BTreeMap<usize, ModRow>,
}

impl ModEchelon {
    fn insert(&mut self, mut row: ModRow) -> bool {
        while let Some(&(c, lead)) = row.first() {
            match self.rows.get(&c) {
                Some(p) => {
                    // p is monic; row -= lead * p
                    let mut out = Vec::with_capacity(row.len() + p.len());
                    let (mut i, mut j) = (0, 0);
                    while i < row.len() || j < p.len() {
                        let ci = row.get(i).map(|e| e.0).unwrap_or(usize::MAX);
                        let cj = p.get(j).map(|e| e.0).unwrap_or(usize::MAX);
                        if ci < cj {
                            out.push(row[i]);
                            i += 1;
                        } else if cj < ci {
                            out.push((cj, (P - mulmod(lead, p[j].1)) % P));
                            j += 1;
                        } else {
                            let v = (row[i].1 + P - mulmod(lead, p[j].1)) % P;
                            if v != 0 {
                                out.push((ci, v));
                            }
                            i += 1;
                            j += 1;
                        }
                    }
                    row = out;
                }
                None => {
                    let inv = invmod(lead);
                    for e in row.iter_mut() {
                        e.1 = mulmod(e.1, inv);
                    }
                    self.rows.insert(c, row);
                    return true;
                }
            }
        }
        false
    }
}

/// Exact rank of a family of sparse rational vectors in a space of dimension `ncols`.
pub fn rank_of_rows(rows: &[RatRow], ncols: usize) -> usize {
    let target = rows.len().min(ncols);
    if target == 0 {
        return 0;
    }
    if let Some(r) = modular_rank(rows, target) {
        if r == target {
            return r;
        }
    }
    let mut ech = IntEchelon::new();
    for row in rows {
        ech.insert_rat(row);
        if ech.rank() == target {
            break;
        }
    }
    ech.rank()
}

/// Rank modulo `P`, stopping once `target` is reached; `None` if a
/// denominator vanishes modulo `P`.
fn modular_rank(rows: &[RatRow], target: usize) -> Option<usize> {
    let mut ech = ModEchelon::default();
    let mut rank = 0;
    for row in rows {
        if ech.insert(mod_row(row)?) {
            rank += 1;
            if rank == target {
                break;
            }
        }
    }
    Some(rank)
}
