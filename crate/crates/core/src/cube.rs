//! Resolution configurations over the cube `{0,1}^n` of a link diagram.
//!
//! At crossing `X(a,b,c,d)` the 0-resolution joins the strands at slots
//! `(a,b)` and `(c,d)`; the 1-resolution joins `(a,d)` and `(b,c)`. The
//! 0-resolution is the one carrying a surgery arc, running between the two
//! resolved strands. Circles are named by the smallest strand id on them.

use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::pd::{ArcId, LinkDiagram};

/// Largest cube dimension a [`Vertex`] can address.
pub const MAX_DIMENSION: usize = 64;

/// A vertex `u` of the cube `{0,1}^n`; coordinate `i` is the resolution of crossing `i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Vertex {
    bits: u64,
    len: u8,
}

impl Vertex {
    pub fn zero(len: usize) -> Vertex {
        assert!(len <= MAX_DIMENSION, "cube dimension {len} exceeds {MAX_DIMENSION}");
        Vertex { bits: 0, len: len as u8 }
    }

    pub fn ones(len: usize) -> Vertex {
        let mut v = Vertex::zero(len);
        v.bits = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
        v
    }

    pub fn from_bits(bits: &[u8]) -> Result<Vertex> {
        if bits.len() > MAX_DIMENSION {
            return Err(Error::Resource(format!(
                "cube dimension {} exceeds {MAX_DIMENSION}",
                bits.len()
            )));
        }
        let mut v = Vertex::zero(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            match b {
                0 => {}
                1 => v.bits |= 1 << i,
                _ => return Err(Error::Bit(format!("coordinate {i} is {b}, not 0 or 1"))),
            }
        }
        Ok(v)
    }

    /// Bit `i` of `mask` becomes coordinate `i`.
    pub fn from_mask(mask: u64, len: usize) -> Vertex {
        let mut v = Vertex::zero(len);
        v.bits = mask & Vertex::ones(len).bits;
        v
    }

    pub fn mask(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits >> i & 1 == 1
    }

    pub fn with(&self, i: usize, value: bool) -> Vertex {
        assert!(i < self.len());
        let bits = if value { self.bits | 1 << i } else { self.bits & !(1 << i) };
        Vertex { bits, ..*self }
    }

    /// `|u|`, the number of 1-coordinates.
    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn zeros(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.get(i)).collect()
    }

    /// Coordinate-wise `self <= other`.
    pub fn le(&self, other: &Vertex) -> bool {
        self.len == other.len && self.bits & !other.bits == 0
    }

    /// All `2^len` vertices in lexicographic order.
    pub fn all(len: usize) -> impl Iterator<Item = Vertex> {
        assert!(len < MAX_DIMENSION);
        let mut all: Vec<Vertex> = (0..1u64 << len).map(|m| Vertex::from_mask(m, len)).collect();
        all.sort();
        all.into_iter()
    }

    fn lex_key(&self) -> u64 {
        if self.len == 0 {
            0
        } else {
            self.bits.reverse_bits() >> (64 - self.len as u32)
        }
    }
}

impl Ord for Vertex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len
            .cmp(&other.len)
            .then_with(|| self.lex_key().cmp(&other.lex_key()))
    }
}

impl PartialOrd for Vertex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Vertex({self})")
    }
}

impl std::str::FromStr for Vertex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Vertex> {
        let bits: Vec<u8> = s
            .bytes()
            .map(|b| match b {
                b'0' => Ok(0),
                b'1' => Ok(1),
                _ => Err(Error::Bit(format!("'{}' in vertex {s:?}", b as char))),
            })
            .collect::<Result<_>>()?;
        Vertex::from_bits(&bits)
    }
}

impl Serialize for Vertex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Vertex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Label {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Label {
    /// Contribution to the quantum grading.
    pub fn weight(self) -> i64 {
        match self {
            Label::Plus => 1,
            Label::Minus => -1,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Plus => "+",
            Label::Minus => "-",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Circle {
    pub id: ArcId,
    pub strands: Vec<ArcId>,
}

/// A surgery arc sits at a 0-resolved crossing; `ends` are the circles its
/// two endpoints lie on (equal when both ends touch the same circle).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurgeryArc {
    pub crossing: usize,
    pub ends: [ArcId; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResolutionConfiguration {
    pub diagram: u64,
    pub vertex: Vertex,
    pub circles: Vec<Circle>,
    pub arcs: Vec<SurgeryArc>,
}

impl ResolutionConfiguration {
    /// Number of surgery arcs.
    pub fn index(&self) -> usize {
        self.arcs.len()
    }

    pub fn circle_ids(&self) -> Vec<ArcId> {
        self.circles.iter().map(|c| c.id).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum EdgeType {
    Merge { inputs: [ArcId; 2], output: ArcId },
    Split { input: ArcId, outputs: [ArcId; 2] },
}

/// Stable fingerprint tying configurations to the diagram they came from.
pub fn diagram_key(d: &LinkDiagram) -> u64 {
    let mut h = DefaultHasher::new();
    d.to_pd_string().hash(&mut h);
    h.finish()
}

/// Dense strand indexing plus union-find circle tracing for one diagram.
#[derive(Debug, Clone)]
pub(crate) struct Tracer {
    /// Strand ids in increasing order, free loops last.
    pub ids: Vec<ArcId>,
    /// Dense strand index at each crossing slot.
    pub slots: Vec<[usize; 4]>,
}

/// Circles at one vertex: dense strand -> circle index, circles ordered by id.
#[derive(Debug, Clone)]
pub(crate) struct Circles {
    pub circle_of: Vec<usize>,
    pub ids: Vec<ArcId>,
    pub rep: Vec<usize>,
}

impl Tracer {
    pub fn new(d: &LinkDiagram) -> Tracer {
        let mut ids = d.strands();
        ids.extend(d.free_loop_ids());
        let index: BTreeMap<ArcId, usize> = ids.iter().enumerate().map(|(k, &a)| (a, k)).collect();
        let slots = d
            .crossings()
            .iter()
            .map(|c| c.incident.map(|a| index[&a]))
            .collect();
        Tracer { ids, slots }
    }

    pub fn circles(&self, u: Vertex) -> Circles {
        let n = self.ids.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut join = |a: usize, b: usize| {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        };
        for (i, s) in self.slots.iter().enumerate() {
            if u.get(i) {
                join(s[0], s[3]);
                join(s[1], s[2]);
            } else {
                join(s[0], s[1]);
                join(s[2], s[3]);
            }
        }

        let mut circle_of = vec![usize::MAX; n];
        let mut root_circle = vec![usize::MAX; n];
        let mut ids = Vec::new();
        let mut rep = Vec::new();
        for k in 0..n {
            let r = find(&mut parent, k);
            if root_circle[r] == usize::MAX {
                root_circle[r] = ids.len();
                ids.push(self.ids[k]);
                rep.push(k);
            }
            circle_of[k] = root_circle[r];
        }
        Circles { circle_of, ids, rep }
    }

    pub fn configuration(&self, key: u64, u: Vertex) -> ResolutionConfiguration {
        let circles = self.circles(u);
        let mut strands = vec![Vec::new(); circles.ids.len()];
        for (k, &c) in circles.circle_of.iter().enumerate() {
            strands[c].push(self.ids[k]);
        }
        let arcs = u
            .zeros()
            .into_iter()
            .map(|i| SurgeryArc {
                crossing: i,
                ends: [
                    circles.ids[circles.circle_of[self.slots[i][0]]],
                    circles.ids[circles.circle_of[self.slots[i][2]]],
                ],
            })
            .collect();
        ResolutionConfiguration {
            diagram: key,
            vertex: u,
            circles: circles
                .ids
                .iter()
                .zip(strands)
                .map(|(&id, strands)| Circle { id, strands })
                .collect(),
            arcs,
        }
    }
}

/// How labels travel along the cube edge `u -> u + e_i`, in circle indices.
#[derive(Debug, Clone)]
pub(crate) struct EdgeMap {
    pub kind: EdgeKind,
    /// Circles untouched by the surgery: (index at u, index at v).
    pub carried: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum EdgeKind {
    Merge { inputs: [usize; 2], output: usize },
    Split { input: usize, outputs: [usize; 2] },
}

impl EdgeMap {
    pub fn new(tracer: &Tracer, i: usize, at_u: &Circles, at_v: &Circles) -> Result<EdgeMap> {
        let s = tracer.slots[i];
        let (a, b) = (at_u.circle_of[s[0]], at_u.circle_of[s[2]]);
        let (c, d) = (at_v.circle_of[s[0]], at_v.circle_of[s[1]]);
        let kind = match (a != b, c != d) {
            (true, false) if at_v.ids.len() + 1 == at_u.ids.len() => EdgeKind::Merge {
                inputs: [a.min(b), a.max(b)],
                output: c,
            },
            (false, true) if at_v.ids.len() == at_u.ids.len() + 1 => EdgeKind::Split {
                input: a,
                outputs: [c.min(d), c.max(d)],
            },
            _ => {
                return Err(Error::topology(format!(
                    "surgery at crossing {i} neither merges nor splits circles"
                )))
            }
        };
        let touched: &[usize] = match &kind {
            EdgeKind::Merge { inputs, .. } => inputs,
            EdgeKind::Split { input, .. } => std::slice::from_ref(input),
        };
        let carried = (0..at_u.ids.len())
            .filter(|k| !touched.contains(k))
            .map(|k| (k, at_v.circle_of[at_u.rep[k]]))
            .collect();
        Ok(EdgeMap { kind, carried })
    }

    /// Labelings at `v` reached from labeling `y` at `u` (bit set = x₋).
    pub fn targets(&self, y: u64) -> Vec<u64> {
        let mut base = 0u64;
        for &(from, to) in &self.carried {
            base |= (y >> from & 1) << to;
        }
        let minus = |k: usize| y >> k & 1 == 1;
        match self.kind {
            EdgeKind::Merge { inputs: [p, q], output } => match (minus(p), minus(q)) {
                (false, false) => vec![base],
                (true, true) => vec![],
                _ => vec![base | 1 << output],
            },
            EdgeKind::Split { input, outputs: [p, q] } => {
                if minus(input) {
                    vec![base | 1 << p | 1 << q]
                } else {
                    vec![base | 1 << q, base | 1 << p]
                }
            }
        }
    }
}

fn check_len(d: &LinkDiagram, u: &Vertex) -> Result<()> {
    if u.len() != d.crossing_count() {
        return Err(Error::Dimension {
            expected: d.crossing_count(),
            actual: u.len(),
        });
    }
    Ok(())
}

/// `D_L(u)`: resolve every crossing per `u`, with arcs at the 0-resolved crossings.
pub fn resolve(d: &LinkDiagram, u: Vertex) -> Result<ResolutionConfiguration> {
    check_len(d, &u)?;
    Ok(Tracer::new(d).configuration(diagram_key(d), u))
}

pub fn edge_type(d: &LinkDiagram, u: Vertex, i: usize) -> Result<EdgeType> {
    check_len(d, &u)?;
    if i >= u.len() {
        return Err(Error::Bit(format!("crossing {i} out of range")));
    }
    if u.get(i) {
        return Err(Error::Bit(format!("coordinate {i} of {u} is already 1")));
    }
    let tracer = Tracer::new(d);
    let (at_u, at_v) = (tracer.circles(u), tracer.circles(u.with(i, true)));
    Ok(match EdgeMap::new(&tracer, i, &at_u, &at_v)?.kind {
        EdgeKind::Merge { inputs, output } => EdgeType::Merge {
            inputs: inputs.map(|k| at_u.ids[k]),
            output: at_v.ids[output],
        },
        EdgeKind::Split { input, outputs } => EdgeType::Split {
            input: at_u.ids[input],
            outputs: outputs.map(|k| at_v.ids[k]),
        },
    })
}

/// `s_A(D_L(u))`: surger along the arcs at the crossings in `arcs`.
pub fn surgery(d: &LinkDiagram, u: Vertex, arcs: &[usize]) -> Result<ResolutionConfiguration> {
    check_len(d, &u)?;
    let mut v = u;
    for &i in arcs {
        if i >= u.len() || u.get(i) {
            return Err(Error::Bit(format!("crossing {i} carries no surgery arc at {u}")));
        }
        v = v.with(i, true);
    }
    resolve(d, v)
}

/// `s(D)`, surgery along every arc.
pub fn maximal_surgery(d: &LinkDiagram, u: Vertex) -> Result<ResolutionConfiguration> {
    surgery(d, u, &u.zeros())
}

/// Drops the circles that no arc touches.
pub fn core(c: &ResolutionConfiguration) -> ResolutionConfiguration {
    let touched: BTreeSet<ArcId> = c.arcs.iter().flat_map(|a| a.ends).collect();
    ResolutionConfiguration {
        circles: c
            .circles
            .iter()
            .filter(|z| touched.contains(&z.id))
            .cloned()
            .collect(),
        ..c.clone()
    }
}

pub fn is_basic(c: &ResolutionConfiguration) -> bool {
    core(c) == *c
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LabeledConfiguration {
    pub config: ResolutionConfiguration,
    pub labels: BTreeMap<ArcId, Label>,
}

impl LabeledConfiguration {
    pub fn new(
        config: ResolutionConfiguration,
        labels: BTreeMap<ArcId, Label>,
    ) -> Result<LabeledConfiguration> {
        let ids: BTreeSet<ArcId> = config.circles.iter().map(|c| c.id).collect();
        if !labels.keys().copied().eq(ids.iter().copied()) {
            return Err(Error::Bit("labels must cover exactly the circles".into()));
        }
        Ok(LabeledConfiguration { config, labels })
    }

    /// Label vector in circle-id order, `x₋` as a set bit.
    pub fn from_mask(config: ResolutionConfiguration, mask: u64) -> LabeledConfiguration {
        let labels = config
            .circles
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let l = if mask >> k & 1 == 1 { Label::Minus } else { Label::Plus };
                (c.id, l)
            })
            .collect();
        LabeledConfiguration { config, labels }
    }

    pub fn mask(&self) -> u64 {
        self.labels
            .values()
            .enumerate()
            .map(|(k, l)| u64::from(*l == Label::Minus) << k)
            .sum()
    }
}

/// Every labeling of `c`, labels read as a vector in circle order with `x₊ < x₋`.
pub fn labelings(c: &ResolutionConfiguration) -> Vec<LabeledConfiguration> {
    label_masks(c.circles.len())
        .into_iter()
        .map(|m| LabeledConfiguration::from_mask(c.clone(), m))
        .collect()
}

/// `0..2^k` sorted as label vectors (bit 0 is the first coordinate).
pub(crate) fn label_masks(k: usize) -> Vec<u64> {
    let mut masks: Vec<u64> = (0..1u64 << k).collect();
    masks.sort_by_key(|m| Vertex::from_mask(*m, k));
    masks
}

/// The covering relation `(E,y) < (D,x)` between labeled configurations.
///
/// Circles are compared as strand sets, so the test works directly from the
/// two configurations: a surgery along one arc either splits one circle of
/// `E` into two circles of `D` or merges two into one.
pub fn covers(e: &LabeledConfiguration, dd: &LabeledConfiguration) -> Result<bool> {
    if e.config.diagram != dd.config.diagram || e.config.vertex.len() != dd.config.vertex.len() {
        return Err(Error::DiagramMismatch);
    }
    let (u, v) = (e.config.vertex, dd.config.vertex);
    if !u.le(&v) || v.weight() != u.weight() + 1 {
        return Ok(false);
    }

    let strands = |c: &LabeledConfiguration| -> BTreeMap<Vec<ArcId>, Label> {
        c.config
            .circles
            .iter()
            .map(|z| (z.strands.clone(), c.labels[&z.id]))
            .collect()
    };
    let (before, after) = (strands(e), strands(dd));

    let mut old = Vec::new();
    for (z, y) in &before {
        match after.get(z) {
            Some(x) if x != y => return Ok(false),
            Some(_) => {}
            None => old.push(*y),
        }
    }
    let new: Vec<Label> = after
        .iter()
        .filter(|(z, _)| !before.contains_key(*z))
        .map(|(_, x)| *x)
        .collect();

    use Label::{Minus, Plus};
    Ok(match (old.as_slice(), new.as_slice()) {
        // split
        ([Minus], [Minus, Minus]) => true,
        ([Plus], [a, b]) => a != b,
        // merge
        ([Plus, Plus], [Plus]) => true,
        ([a, b], [Minus]) => a != b,
        _ => false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pd::parse_pd;

    fn hopf() -> LinkDiagram {
        parse_pd("X(4,2,1,3) X(2,4,3,1)").unwrap()
    }

    fn v(s: &str) -> Vertex {
        s.parse().unwrap()
    }

    #[test]
    fn vertex_order_is_lexicographic() {
        let order: Vec<String> = Vertex::all(3).map(|u| u.to_string()).collect();
        assert_eq!(order, ["000", "001", "010", "011", "100", "101", "110", "111"]);
        assert_eq!(v("0110").weight(), 2);
        assert!(v("010").le(&v("110")));
        assert!(!v("010").le(&v("101")));
    }

    #[test]
    fn hopf_resolutions() {
        let d = hopf();
        let c = resolve(&d, v("00")).unwrap();
        assert_eq!((c.circles.len(), c.arcs.len()), (2, 2));
        let c = resolve(&d, v("01")).unwrap();
        assert_eq!((c.circles.len(), c.arcs.len()), (1, 1));
        assert!(matches!(resolve(&d, v("0")), Err(Error::Dimension { .. })));
    }

    #[test]
    fn hopf_edges() {
        let d = hopf();
        assert!(matches!(edge_type(&d, v("00"), 1).unwrap(), EdgeType::Merge { .. }));
        assert!(matches!(edge_type(&d, v("01"), 0).unwrap(), EdgeType::Split { .. }));
        assert!(matches!(edge_type(&d, v("01"), 1), Err(Error::Bit(_))));
    }

    #[test]
    fn surgery_and_core() {
        let d = parse_pd("X(4,2,5,1) X(6,4,1,3) X(2,6,3,5)").unwrap();
        let u = v("000");
        assert_eq!(surgery(&d, u, &[]).unwrap(), resolve(&d, u).unwrap());
        assert_eq!(maximal_surgery(&d, u).unwrap(), resolve(&d, v("111")).unwrap());
        assert!(matches!(surgery(&d, v("010"), &[1]), Err(Error::Bit(_))));

        let top = resolve(&d, v("111")).unwrap();
        assert!(top.arcs.is_empty());
        assert!(core(&top).circles.is_empty());
        let c = resolve(&d, v("010")).unwrap();
        assert_eq!(c.arcs.iter().map(|a| a.crossing).collect::<Vec<_>>(), [0, 2]);
        assert!(is_basic(&core(&c)));
    }

    #[test]
    fn free_loops_are_separate_circles() {
        let d = parse_pd("X(4,2,1,3) X(2,4,3,1) U U").unwrap();
        let c = resolve(&d, v("00")).unwrap();
        assert_eq!(c.circle_ids(), [1, 2, 5, 6]);
        assert_eq!(core(&c).circles.len(), 2);
    }

    fn labeled(d: &LinkDiagram, u: &str, labels: &str) -> LabeledConfiguration {
        let c = resolve(d, v(u)).unwrap();
        let mask = labels
            .bytes()
            .enumerate()
            .map(|(k, b)| u64::from(b == b'-') << k)
            .sum();
        LabeledConfiguration::from_mask(c, mask)
    }

    #[test]
    fn covering_rules() {
        let d = hopf();
        assert!(covers(&labeled(&d, "00", "++"), &labeled(&d, "10", "+")).unwrap());
        assert!(!covers(&labeled(&d, "00", "++"), &labeled(&d, "10", "-")).unwrap());
        assert!(covers(&labeled(&d, "00", "+-"), &labeled(&d, "10", "-")).unwrap());
        assert!(!covers(&labeled(&d, "00", "--"), &labeled(&d, "10", "+")).unwrap());
        assert!(!covers(&labeled(&d, "00", "--"), &labeled(&d, "10", "-")).unwrap());
        // split
        assert!(covers(&labeled(&d, "10", "+"), &labeled(&d, "11", "+-")).unwrap());
        assert!(covers(&labeled(&d, "10", "+"), &labeled(&d, "11", "-+")).unwrap());
        assert!(!covers(&labeled(&d, "10", "+"), &labeled(&d, "11", "++")).unwrap());
        assert!(covers(&labeled(&d, "10", "-"), &labeled(&d, "11", "--")).unwrap());
        // index must go up by one
        assert!(!covers(&labeled(&d, "10", "+"), &labeled(&d, "10", "+")).unwrap());
        assert!(!covers(&labeled(&d, "00", "++"), &labeled(&d, "11", "++")).unwrap());

        let other = parse_pd("X(4,2,1,3) X(3,1,2,4)").unwrap();
        assert_eq!(
            covers(&labeled(&d, "00", "++"), &labeled(&other, "10", "+")),
            Err(Error::DiagramMismatch)
        );
    }

    #[test]
    fn label_mask_round_trip() {
        let d = hopf();
        let l = labeled(&d, "00", "+-");
        assert_eq!(l.mask(), 0b10);
        assert_eq!(labelings(&l.config).len(), 4);
    }
}
