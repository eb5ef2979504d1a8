//! The bigraded Khovanov chain complex.
//!
//! Generators are labeled resolutions `(D_L(u), x)` with
//!
//! ```text
//! gr_h = -n₋ + |u|
//! gr_q = n₊ - 2n₋ + |u| + #{x₊ circles} - #{x₋ circles}
//! ```
//!
//! and the differential sends `(D_L(v), y)` to every `(D_L(u), x)` covering it,
//! with sign `(-1)^(v_1 + ... + v_{i-1})` where `i` is the flipped coordinate.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cube::{label_masks, labelings, EdgeMap, Label, LabeledConfiguration, Tracer, Vertex};
use crate::error::{Error, Result};
use crate::matrix::SparseMatrix;
use crate::pd::LinkDiagram;

pub const DEFAULT_CUBE_CAP: usize = 16;

/// Compact handle on a generator: cube vertex plus labels in circle-id order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorKey {
    pub vertex: Vertex,
    /// Bit `k` set means circle `k` carries `x₋`.
    pub labels: u64,
    pub circles: u8,
}

impl GeneratorKey {
    pub fn label(&self, k: usize) -> Label {
        if self.labels >> k & 1 == 1 {
            Label::Minus
        } else {
            Label::Plus
        }
    }

    pub fn label_string(&self) -> String {
        (0..self.circles as usize).map(|k| self.label(k).to_string()).collect()
    }
}

impl fmt::Display for GeneratorKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.vertex, self.label_string())
    }
}

impl Serialize for GeneratorKey {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GeneratorKey {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let s = String::deserialize(d)?;
        let (v, l) = s
            .split_once(':')
            .ok_or_else(|| D::Error::custom(format!("generator {s:?} lacks ':'")))?;
        let vertex: Vertex = v.parse().map_err(D::Error::custom)?;
        let mut labels = 0;
        for (k, b) in l.bytes().enumerate() {
            match b {
                b'+' => {}
                b'-' => labels |= 1 << k,
                _ => return Err(D::Error::custom(format!("bad label in {s:?}"))),
            }
        }
        Ok(GeneratorKey {
            vertex,
            labels,
            circles: l.len() as u8,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledGenerator {
    pub gen: LabeledConfiguration,
    pub gr_h: i64,
    pub gr_q: i64,
}

/// A cochain complex (`step = 1`) or chain complex (`step = -1`) of free
/// abelian groups. `maps[k]` goes from degree `k` to degree `k + step`, with
/// rows indexing the target basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainComplex<B> {
    pub step: i64,
    pub bases: BTreeMap<i64, Vec<B>>,
    pub maps: BTreeMap<i64, SparseMatrix>,
}

impl<B> ChainComplex<B> {
    pub fn rank(&self, degree: i64) -> usize {
        self.bases.get(&degree).map_or(0, Vec::len)
    }

    pub fn map(&self, degree: i64) -> SparseMatrix {
        self.maps
            .get(&degree)
            .cloned()
            .unwrap_or_else(|| SparseMatrix::zero(self.rank(degree + self.step), self.rank(degree)))
    }

    /// Degrees `k` where `maps[k + step] * maps[k]` is nonzero.
    pub fn d_squared_failures(&self) -> Vec<i64> {
        self.maps
            .iter()
            .filter_map(|(&k, first)| {
                let second = self.maps.get(&(k + self.step))?;
                (!second.mul(first).is_zero()).then_some(k)
            })
            .collect()
    }
}

/// One cochain complex per quantum grading.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BigradedComplex {
    pub n_plus: usize,
    pub n_minus: usize,
    pub blocks: BTreeMap<i64, ChainComplex<GeneratorKey>>,
}

impl BigradedComplex {
    pub fn generator_count(&self) -> usize {
        self.blocks.values().flat_map(|b| b.bases.values()).map(Vec::len).sum()
    }

    /// Bidegree of a generator.
    pub fn grading(&self, g: &GeneratorKey) -> (i64, i64) {
        gradings(self.n_plus, self.n_minus, g)
    }
}

fn gradings(n_plus: usize, n_minus: usize, g: &GeneratorKey) -> (i64, i64) {
    let (np, nm) = (n_plus as i64, n_minus as i64);
    let u = g.vertex.weight() as i64;
    let minus = g.labels.count_ones() as i64;
    let plus = g.circles as i64 - minus;
    (-nm + u, np - 2 * nm + u + plus - minus)
}

/// `(-1)^{s₀}` for the cube edge `lower -> upper`.
pub fn s0_sign(upper: Vertex, lower: Vertex) -> Result<i64> {
    let flipped = upper.mask() ^ lower.mask();
    if upper.len() != lower.len() || !lower.le(&upper) || flipped.count_ones() != 1 {
        return Err(Error::Bit(format!("{lower} -> {upper} is not a cube edge")));
    }
    let before = lower.mask() & (flipped - 1);
    Ok(if before.count_ones() % 2 == 0 { 1 } else { -1 })
}

fn check_cap(d: &LinkDiagram, cap: usize) -> Result<()> {
    let n = d.crossing_count();
    if n > cap {
        return Err(Error::Resource(format!(
            "{n} crossings exceed the cube cap of {cap}"
        )));
    }
    if d.strand_count() + d.unknots() > 64 {
        return Err(Error::Resource("more than 64 circles per resolution".into()));
    }
    Ok(())
}

/// Every generator with both gradings, ordered by vertex then label vector.
pub fn generators(d: &LinkDiagram, cap: usize) -> Result<Vec<LabeledGenerator>> {
    check_cap(d, cap)?;
    let tracer = Tracer::new(d);
    let key = crate::cube::diagram_key(d);
    let per_vertex: Vec<Vec<LabeledGenerator>> = Vertex::all(d.crossing_count())
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|u| {
            let config = tracer.configuration(key, u);
            labelings(&config)
                .into_iter()
                .map(|gen| {
                    let g = GeneratorKey {
                        vertex: u,
                        labels: gen.mask(),
                        circles: gen.config.circles.len() as u8,
                    };
                    let (gr_h, gr_q) = gradings(d.n_plus(), d.n_minus(), &g);
                    LabeledGenerator { gen, gr_h, gr_q }
                })
                .collect()
        })
        .collect();
    Ok(per_vertex.into_iter().flatten().collect())
}

/// Builds the signed differential, block-diagonal in the quantum grading.
pub fn differential(d: &LinkDiagram, cap: usize) -> Result<BigradedComplex> {
    check_cap(d, cap)?;
    let n = d.crossing_count();
    let tracer = Tracer::new(d);
    let vertices: Vec<Vertex> = Vertex::all(n).collect();
    let circles: Vec<_> = vertices.par_iter().map(|&u| tracer.circles(u)).collect();
    let position: HashMap<u64, usize> = vertices
        .iter()
        .enumerate()
        .map(|(k, u)| (u.mask(), k))
        .collect();

    let mut bases: BTreeMap<i64, BTreeMap<i64, Vec<GeneratorKey>>> = BTreeMap::new();
    let mut index: HashMap<(u64, u64), usize> = HashMap::new();
    for (u, c) in vertices.iter().zip(&circles) {
        for labels in label_masks(c.ids.len()) {
            let g = GeneratorKey {
                vertex: *u,
                labels,
                circles: c.ids.len() as u8,
            };
            let (h, q) = gradings(d.n_plus(), d.n_minus(), &g);
            let basis = bases.entry(q).or_default().entry(h).or_default();
            index.insert((u.mask(), labels), basis.len());
            basis.push(g);
        }
    }

    let entries: Vec<Vec<(i64, i64, usize, usize, i64)>> = vertices
        .par_iter()
        .enumerate()
        .map(|(k, &u)| -> Result<Vec<_>> {
            let mut out = Vec::new();
            for i in u.zeros() {
                let v = u.with(i, true);
                let target = &circles[position[&v.mask()]];
                let edge = EdgeMap::new(&tracer, i, &circles[k], target)?;
                let sign = s0_sign(v, u)?;
                for y in label_masks(circles[k].ids.len()) {
                    let g = GeneratorKey {
                        vertex: u,
                        labels: y,
                        circles: circles[k].ids.len() as u8,
                    };
                    let (h, q) = gradings(d.n_plus(), d.n_minus(), &g);
                    let col = index[&(u.mask(), y)];
                    for x in edge.targets(y) {
                        out.push((q, h, index[&(v.mask(), x)], col, sign));
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let mut triplets: BTreeMap<(i64, i64), Vec<(usize, usize, i64)>> = BTreeMap::new();
    for (q, h, r, c, s) in entries.into_iter().flatten() {
        triplets.entry((q, h)).or_default().push((r, c, s));
    }

    let blocks = bases
        .into_iter()
        .map(|(q, bases)| {
            let maps = bases
                .keys()
                .filter_map(|&h| {
                    let t = triplets.remove(&(q, h))?;
                    let rows = bases.get(&(h + 1)).map_or(0, Vec::len);
                    Some((h, SparseMatrix::from_triplets(rows, bases[&h].len(), t)))
                })
                .collect();
            (q, ChainComplex { step: 1, bases, maps })
        })
        .collect();

    Ok(BigradedComplex {
        n_plus: d.n_plus(),
        n_minus: d.n_minus(),
        blocks,
    })
}

/// True iff every consecutive product of differentials vanishes.
pub fn d_squared_check(c: &BigradedComplex) -> bool {
    c.blocks.values().all(|b| b.d_squared_failures().is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pd::parse_pd;

    fn v(s: &str) -> Vertex {
        s.parse().unwrap()
    }

    #[test]
    fn s0_examples() {
        assert_eq!(s0_sign(v("100"), v("000")).unwrap(), 1);
        assert_eq!(s0_sign(v("001"), v("000")).unwrap(), 1);
        assert_eq!(s0_sign(v("110"), v("100")).unwrap(), -1);
        assert_eq!(s0_sign(v("1101"), v("1100")).unwrap(), 1);
        assert!(s0_sign(v("110"), v("000")).is_err());
        assert!(s0_sign(v("100"), v("100")).is_err());
        assert!(s0_sign(v("010"), v("100")).is_err());
    }

    #[test]
    fn unknot_generators() {
        let d = parse_pd("U").unwrap();
        let g = generators(&d, DEFAULT_CUBE_CAP).unwrap();
        let grades: Vec<(i64, i64)> = g.iter().map(|g| (g.gr_h, g.gr_q)).collect();
        assert_eq!(grades, [(0, 1), (0, -1)]);
        let c = differential(&d, DEFAULT_CUBE_CAP).unwrap();
        assert!(c.blocks.values().all(|b| b.maps.is_empty()));
        assert!(d_squared_check(&c));
    }

    #[test]
    fn hopf_counts_and_square() {
        let d = parse_pd("X(4,2,1,3) X(2,4,3,1)").unwrap();
        assert_eq!(generators(&d, DEFAULT_CUBE_CAP).unwrap().len(), 12);
        let c = differential(&d, DEFAULT_CUBE_CAP).unwrap();
        assert_eq!(c.generator_count(), 12);
        assert!(d_squared_check(&c));

        // (00, ++) sits at q = 2 - 0 + 0 + 2 = 4 and maps to both merges with coefficient +1
        let block = &c.blocks[&4];
        assert_eq!(block.bases[&0].len(), 1);
        let m = block.map(0);
        let targets: Vec<String> = m.entries.iter().map(|e| block.bases[&1][e.0].to_string()).collect();
        assert_eq!(targets, ["01:+", "10:+"]);
        assert!(m.entries.iter().all(|e| e.2 == 1));
    }

    #[test]
    fn sign_flip_is_detected() {
        let d = parse_pd("X(4,2,1,3) X(2,4,3,1)").unwrap();
        let mut c = differential(&d, DEFAULT_CUBE_CAP).unwrap();
        // q = 4 holds the full square 00:++ -> {01:+, 10:+} -> {11:+-, 11:-+}
        let block = c.blocks.get_mut(&4).unwrap();
        assert_eq!(block.maps.len(), 2);
        block.maps.get_mut(&0).unwrap().entries[0].2 *= -1;
        assert!(!d_squared_check(&c));
    }

    #[test]
    fn cap_is_enforced() {
        let d = parse_pd("X(4,2,5,1) X(6,4,1,3) X(2,6,3,5)").unwrap();
        assert!(matches!(differential(&d, 2), Err(Error::Resource(_))));
        assert!(matches!(generators(&d, 2), Err(Error::Resource(_))));
    }

    #[test]
    fn generator_key_text() {
        let g: GeneratorKey = serde_json::from_str("\"010:+-+\"").unwrap();
        assert_eq!(g.labels, 0b010);
        assert_eq!(serde_json::to_string(&g).unwrap(), "\"010:+-+\"");
    }
}
