//! Smith normal form over the integers.
//!
//! Unit pivots are eliminated first on the sparse representation, choosing
//! the pivot with the smallest fill-in bound. Whatever survives is reduced
//! densely with smallest-entry pivoting. All arithmetic is arbitrary precision.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::matrix::SparseMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    /// Invariant factors `d_1 | d_2 | ... | d_r`, all positive.
    pub factors: Vec<BigInt>,
    pub rank: usize,
}

impl SmithForm {
    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.factors.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

pub fn smith_normal_form(m: &SparseMatrix) -> SmithForm {
    let rows = (0..m.rows).map(|_| Vec::new()).collect();
    let mut e = Eliminator::new(rows, m.cols);
    for &(r, c, v) in &m.entries {
        e.rows[r].push((c, BigInt::from(v)));
    }
    e.index_columns();
    e.run()
}

pub fn smith_normal_form_dense(m: &[Vec<BigInt>]) -> SmithForm {
    let cols = m.first().map_or(0, Vec::len);
    let rows = m
        .iter()
        .map(|row| {
            assert_eq!(row.len(), cols, "ragged matrix");
            row.iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(c, v)| (c, v.clone()))
                .collect()
        })
        .collect();
    let mut e = Eliminator::new(rows, cols);
    e.index_columns();
    e.run()
}

type Row = Vec<(usize, BigInt)>;

struct Eliminator {
    rows: Vec<Row>,
    col_rows: Vec<BTreeSet<usize>>,
    row_alive: Vec<bool>,
    col_alive: Vec<bool>,
}

impl Eliminator {
    fn new(rows: Vec<Row>, cols: usize) -> Self {
        let n = rows.len();
        Eliminator {
            rows,
            col_rows: vec![BTreeSet::new(); cols],
            row_alive: vec![true; n],
            col_alive: vec![true; cols],
        }
    }

    fn index_columns(&mut self) {
        for (r, row) in self.rows.iter_mut().enumerate() {
            row.sort_by_key(|e| e.0);
            for (c, _) in row.iter() {
                self.col_rows[*c].insert(r);
            }
        }
    }

    fn entry(&self, r: usize, c: usize) -> &BigInt {
        let row = &self.rows[r];
        let k = row.binary_search_by_key(&c, |e| e.0).expect("indexed entry");
        &row[k].1
    }

    fn unit_pivot(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, usize)> = None;
        for (c, rows) in self.col_rows.iter().enumerate() {
            if !self.col_alive[c] || rows.is_empty() {
                continue;
            }
            for &r in rows {
                if !self.entry(r, c).abs().is_one() {
                    continue;
                }
                let cost = (self.rows[r].len() - 1) * (rows.len() - 1);
                if best.is_none_or(|b| cost < b.0) {
                    best = Some((cost, r, c));
                    if cost == 0 {
                        return Some((r, c));
                    }
                }
            }
        }
        best.map(|(_, r, c)| (r, c))
    }

    /// `rows[target] -= factor * rows[pivot]`, keeping the column index current.
    fn subtract(&mut self, target: usize, pivot: usize, factor: &BigInt) {
        let old = std::mem::take(&mut self.rows[target]);
        let p = &self.rows[pivot];
        let mut out: Row = Vec::with_capacity(old.len() + p.len());
        let (mut i, mut j) = (0, 0);
        while i < old.len() || j < p.len() {
            let take_old = j == p.len() || (i < old.len() && old[i].0 < p[j].0);
            let take_new = i == old.len() || (j < p.len() && p[j].0 < old[i].0);
            if take_old {
                out.push(old[i].clone());
                i += 1;
            } else if take_new {
                let c = p[j].0;
                out.push((c, -(factor * &p[j].1)));
                self.col_rows[c].insert(target);
                j += 1;
            } else {
                let c = old[i].0;
                let v = &old[i].1 - factor * &p[j].1;
                if v.is_zero() {
                    self.col_rows[c].remove(&target);
                } else {
                    out.push((c, v));
                }
                i += 1;
                j += 1;
            }
        }
        self.rows[target] = out;
    }

    fn run(mut self) -> SmithForm {
        let mut units = 0;
        while let Some((r, c)) = self.unit_pivot() {
            let pivot = self.entry(r, c).clone();
            let others: Vec<usize> = self.col_rows[c].iter().copied().filter(|&x| x != r).collect();
            for t in others {
                // pivot is ±1, so it is its own inverse
                let factor = self.entry(t, c) * &pivot;
                self.subtract(t, r, &factor);
            }
            for (cc, _) in std::mem::take(&mut self.rows[r]) {
                self.col_rows[cc].remove(&r);
            }
            self.row_alive[r] = false;
            self.col_alive[c] = false;
            units += 1;
        }

        let live_rows: Vec<usize> = (0..self.rows.len())
            .filter(|&r| self.row_alive[r] && !self.rows[r].is_empty())
            .collect();
        let live_cols: Vec<usize> = (0..self.col_rows.len())
            .filter(|&c| self.col_alive[c] && !self.col_rows[c].is_empty())
            .collect();
        let position: std::collections::BTreeMap<usize, usize> =
            live_cols.iter().enumerate().map(|(k, &c)| (c, k)).collect();
        let dense: Vec<Vec<BigInt>> = live_rows
            .iter()
            .map(|&r| {
                let mut row = vec![BigInt::zero(); live_cols.len()];
                for (c, v) in &self.rows[r] {
                    row[position[c]] = v.clone();
                }
                row
            })
            .collect();

        let mut factors = vec![BigInt::one(); units];
        factors.extend(divisibility_chain(diagonalize(dense)));
        SmithForm {
            rank: factors.len(),
            factors,
        }
    }
}

fn smallest(a: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, v) in row.iter().enumerate().skip(t) {
            if !v.is_zero() && best.is_none_or(|(bi, bj)| v.abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn swap_cols(a: &mut [Vec<BigInt>], x: usize, y: usize) {
    for row in a.iter_mut() {
        row.swap(x, y);
    }
}

/// Diagonal entries (absolute values) of a diagonal form of `a`.
fn diagonalize(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut t = 0;
    while t < m.min(n) {
        let Some((i, j)) = smallest(&a, t) else { break };
        a.swap(t, i);
        swap_cols(&mut a, t, j);
        loop {
            let mut clean = true;
            for i in t + 1..m {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..n {
                    let d = &q * &a[t][j];
                    a[i][j] -= d;
                }
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut().skip(t) {
                    let d = &q * &row[t];
                    row[j] -= d;
                }
                clean &= a[t][j].is_zero();
            }
            if clean {
                break;
            }
            // a remainder smaller than the pivot survived in row or column t
            let mut best = (t, t);
            for i in t + 1..m {
                if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t + 1..n {
                if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            a.swap(t, best.0);
            swap_cols(&mut a, t, best.1);
        }
        out.push(a[t][t].abs());
        t += 1;
    }
    out
}

/// Turns any positive diagonal into invariant factors via gcd/lcm exchange.
fn divisibility_chain(mut d: Vec<BigInt>) -> Vec<BigInt> {
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            if g != d[i] {
                let l = &d[i] / &g * &d[j];
                d[i] = g;
                d[j] = l;
            }
        }
    }
    d
}
