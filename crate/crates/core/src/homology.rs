//! Integral homology of chain complexes and the graded Euler characteristic.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::{differential, d_squared_check, BigradedComplex, ChainComplex};
use crate::error::{Error, Result};
use crate::pd::LinkDiagram;
use crate::poly::{Coefficient, LaurentPolynomial};
use crate::snf::{smith_normal_form, SmithForm};

/// A finitely generated abelian group `Z^free ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Group {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl Group {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join("+"))
        }
    }
}

#[derive(Serialize, Deserialize)]
struct GroupEntry {
    h: i64,
    q: i64,
    free_rank: usize,
    torsion: Vec<Coefficient>,
}

/// Nonzero groups `Kh^{h,q}`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HomologyTable {
    pub entries: BTreeMap<(i64, i64), Group>,
}

impl HomologyTable {
    pub fn get(&self, h: i64, q: i64) -> Group {
        self.entries.get(&(h, q)).cloned().unwrap_or_default()
    }

    pub fn torsion_count(&self) -> usize {
        self.entries.values().map(|g| g.torsion.len()).sum()
    }

    pub fn total_free_rank(&self) -> usize {
        self.entries.values().map(|g| g.free_rank).sum()
    }

    /// Grid with homological degree across and quantum degree down (highest first).
    pub fn render(&self) -> String {
        if self.entries.is_empty() {
            return "0\n".into();
        }
        let hs: Vec<i64> = {
            let lo = self.entries.keys().map(|k| k.0).min().unwrap();
            let hi = self.entries.keys().map(|k| k.0).max().unwrap();
            (lo..=hi).collect()
        };
        let mut qs: Vec<i64> = self.entries.keys().map(|k| k.1).collect();
        qs.sort_unstable();
        qs.dedup();
        qs.reverse();

        let cell = |h: i64, q: i64| match self.entries.get(&(h, q)) {
            Some(g) => g.to_string(),
            None => ".".into(),
        };
        let mut rows = vec![std::iter::once("q\\h".to_string())
            .chain(hs.iter().map(|h| h.to_string()))
            .collect::<Vec<_>>()];
        for &q in &qs {
            rows.push(
                std::iter::once(q.to_string())
                    .chain(hs.iter().map(|&h| cell(h, q)))
                    .collect(),
            );
        }
        let widths: Vec<usize> = (0..=hs.len())
            .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap())
            .collect();
        let mut out = String::new();
        for r in rows {
            let line: Vec<String> = r
                .iter()
                .zip(&widths)
                .map(|(s, w)| format!("{s:>w$}"))
                .collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        }
        out
    }
}

impl Serialize for HomologyTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.entries.iter().map(|(&(h, q), g)| GroupEntry {
            h,
            q,
            free_rank: g.free_rank,
            torsion: g.torsion.iter().map(Coefficient::from).collect(),
        }))
    }
}

impl<'de> Deserialize<'de> for HomologyTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw: Vec<GroupEntry> = Vec::deserialize(d)?;
        let mut entries = BTreeMap::new();
        for e in raw {
            let torsion = e
                .torsion
                .into_iter()
                .map(Coefficient::into_bigint)
                .collect::<std::result::Result<_, _>>()
                .map_err(D::Error::custom)?;
            entries.insert((e.h, e.q), Group {
                free_rank: e.free_rank,
                torsion,
            });
        }
        Ok(HomologyTable { entries })
    }
}

/// Homology in every degree of a single-graded complex; zero groups omitted.
pub fn chain_homology<B: Sync>(c: &ChainComplex<B>) -> Result<BTreeMap<i64, Group>> {
    let failures = c.d_squared_failures();
    if !failures.is_empty() {
        return Err(Error::Complex(format!("d∘d ≠ 0 leaving degrees {failures:?}")));
    }
    let forms: BTreeMap<i64, SmithForm> = c
        .maps
        .par_iter()
        .map(|(&k, m)| (k, smith_normal_form(m)))
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    Ok(assemble(c, &forms))
}

fn assemble<B>(c: &ChainComplex<B>, forms: &BTreeMap<i64, SmithForm>) -> BTreeMap<i64, Group> {
    c.bases
        .iter()
        .filter_map(|(&k, basis)| {
            let outgoing = forms.get(&k).map_or(0, |f| f.rank);
            let incoming = forms.get(&(k - c.step));
            let group = Group {
                free_rank: basis.len() - outgoing - incoming.map_or(0, |f| f.rank),
                torsion: incoming.map(SmithForm::torsion).unwrap_or_default(),
            };
            (!group.is_zero()).then_some((k, group))
        })
        .collect()
}

/// Khovanov homology from the bigraded complex.
pub fn homology(c: &BigradedComplex) -> Result<HomologyTable> {
    if !d_squared_check(c) {
        return Err(Error::Complex("Khovanov differential does not square to zero".into()));
    }
    // one flat job list so the pool sees every matrix at once
    let jobs: Vec<(i64, i64, &crate::matrix::SparseMatrix)> = c
        .blocks
        .iter()
        .flat_map(|(&q, b)| b.maps.iter().map(move |(&h, m)| (q, h, m)))
        .collect();
    let forms: Vec<(i64, i64, SmithForm)> = jobs
        .into_par_iter()
        .map(|(q, h, m)| (q, h, smith_normal_form(m)))
        .collect();
    let mut by_block: BTreeMap<i64, BTreeMap<i64, SmithForm>> = BTreeMap::new();
    for (q, h, f) in forms {
        by_block.entry(q).or_default().insert(h, f);
    }

    let mut entries = BTreeMap::new();
    for (&q, block) in &c.blocks {
        let empty = BTreeMap::new();
        let forms = by_block.get(&q).unwrap_or(&empty);
        for (h, g) in assemble(block, forms) {
            entries.insert((h, q), g);
        }
    }
    Ok(HomologyTable { entries })
}

/// `Σ (-1)^h q^j rank Kh^{h,j}`.
pub fn graded_euler(h: &HomologyTable) -> LaurentPolynomial {
    LaurentPolynomial::from_terms(h.entries.iter().map(|(&(i, j), g)| {
        let r = g.free_rank as i64;
        (j, if i.rem_euclid(2) == 0 { r } else { -r })
    }))
}

/// Euler characteristic straight from the generators.
pub fn chain_euler(c: &BigradedComplex) -> LaurentPolynomial {
    LaurentPolynomial::from_terms(c.blocks.iter().flat_map(|(&q, b)| {
        b.bases.iter().map(move |(&h, basis)| {
            let r = basis.len() as i64;
            (q, if h.rem_euclid(2) == 0 { r } else { -r })
        })
    }))
}

/// Jones polynomial as `χ(Kh) / (q + q^-1)`.
pub fn jones(d: &LinkDiagram, cap: usize) -> Result<LaurentPolynomial> {
    let chi = graded_euler(&homology(&differential(d, cap)?)?);
    chi.div_exact(&LaurentPolynomial::q_plus_q_inv())
        .ok_or_else(|| Error::Divisibility(chi.to_string()))
}
