//! Independent oracles shared by the integration tests. None of these reuse
//! the library's algorithms: circles are traced slot by slot, ranks come from
//! fraction-free elimination, and invariant factors from gcds of minors.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use khovanov::{parse_pd, LinkDiagram};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

/// `(name, diagram)` for every `.pd` file in the corpus, sorted by name.
pub fn corpus() -> Vec<(String, LinkDiagram)> {
    let mut out: Vec<(String, LinkDiagram)> = std::fs::read_dir(corpus_dir())
        .expect("corpus directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "pd"))
        .map(|p| {
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            let text = std::fs::read_to_string(&p).unwrap();
            let d = parse_pd(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
            (name, d)
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

pub fn corpus_diagram(name: &str) -> LinkDiagram {
    corpus().into_iter().find(|(n, _)| n == name).expect("corpus entry").1
}

/// Circles of the resolution `bits` as sorted strand sets, found by walking
/// strand ends through the smoothing at each crossing. Crossingless
/// components are not included.
pub fn trace_circles(d: &LinkDiagram, bits: &[bool]) -> BTreeSet<Vec<u32>> {
    let crossings: Vec<[u32; 4]> = d.crossings().iter().map(|c| c.incident).collect();
    // each slot (crossing, position) is a strand end
    let mut ends: BTreeMap<u32, Vec<(usize, usize)>> = BTreeMap::new();
    for (x, c) in crossings.iter().enumerate() {
        for (s, &a) in c.iter().enumerate() {
            ends.entry(a).or_default().push((x, s));
        }
    }
    let joined = |x: usize, s: usize| -> usize {
        // 0-smoothing pairs a with b and c with d; 1-smoothing pairs a with d and b with c
        let table = if bits[x] { [3, 2, 1, 0] } else { [1, 0, 3, 2] };
        table[s]
    };
    let mut seen = BTreeSet::new();
    let mut circles = BTreeSet::new();
    for (&start, _) in &ends {
        if seen.contains(&start) {
            continue;
        }
        let mut circle = Vec::new();
        let mut strand = start;
        let mut entered = ends[&start][0];
        loop {
            if !seen.insert(strand) {
                break;
            }
            circle.push(strand);
            let pair = &ends[&strand];
            let exit = if pair[0] == entered { pair[1] } else { pair[0] };
            let next_slot = joined(exit.0, exit.1);
            strand = crossings[exit.0][next_slot];
            entered = (exit.0, next_slot);
        }
        circle.sort_unstable();
        circles.insert(circle);
    }
    circles
}

pub fn big(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
}

/// Rank over the rationals by Bareiss fraction-free elimination.
pub fn rational_rank(rows: &[Vec<BigInt>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..n {
        let Some(p) = (rank..m).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(rank, p);
        for r in rank + 1..m {
            for c in col + 1..n {
                let v = (&a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c]) / &prev;
                a[r][c] = v;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
        if rank == m {
            break;
        }
    }
    rank
}

/// Rank over the field with two elements.
pub fn f2_rank(rows: &[Vec<i64>]) -> usize {
    let n = rows.first().map_or(0, Vec::len);
    let words = n.div_ceil(64).max(1);
    let mut a: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| {
            let mut w = vec![0u64; words];
            for (c, v) in r.iter().enumerate() {
                if v.rem_euclid(2) == 1 {
                    w[c / 64] |= 1 << (c % 64);
                }
            }
            w
        })
        .collect();
    let mut rank = 0;
    for col in 0..n {
        let bit = |row: &Vec<u64>| row[col / 64] >> (col % 64) & 1 == 1;
        let Some(p) = (rank..a.len()).find(|&r| bit(&a[r])) else { continue };
        a.swap(rank, p);
        let pivot = a[rank].clone();
        for r in 0..a.len() {
            if r != rank && bit(&a[r]) {
                for (x, y) in a[r].iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else { return BigInt::zero() };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for r in k + 1..n {
            for c in k + 1..n {
                a[r][c] = (&a[k][k] * &a[r][c] - &a[r][k] * &a[k][c]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        BigInt::one()
    } else {
        sign * &a[n - 1][n - 1]
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..1u32 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
        .collect()
}

/// Invariant factors as quotients of determinantal divisors. Exponential;
/// meant for matrices of side at most 5.
pub fn invariant_factors_by_minors(a: &[Vec<BigInt>]) -> Vec<BigInt> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut divisors = vec![BigInt::one()];
    for k in 1..=m.min(n) {
        let mut g = BigInt::zero();
        for rows in subsets(m, k) {
            for cols in subsets(n, k) {
                let minor = rows
                    .iter()
                    .map(|&r| cols.iter().map(|&c| a[r][c].clone()).collect())
                    .collect();
                g = g.gcd(&det(minor));
            }
        }
        if g.is_zero() {
            break;
        }
        divisors.push(g);
    }
    divisors.windows(2).map(|w| (&w[1] / &w[0]).abs()).collect()
}

pub fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

/// Stirling numbers of the second kind.
pub fn stirling2(n: u64, k: u64) -> u64 {
    match (n, k) {
        (0, 0) => 1,
        (_, 0) | (0, _) => 0,
        _ => k * stirling2(n - 1, k) + stirling2(n - 1, k - 1),
    }
}

/// Chains `1̄ > v_1 > ... > v_d > 0̄` in the n-cube: ordered partitions of the
/// n coordinates into `d + 1` nonempty blocks.
pub fn cube_chains(n: u64, d: u64) -> u64 {
    factorial(d + 1) * stirling2(n, d + 1)
}
