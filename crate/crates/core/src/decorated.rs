//! Decorated resolution configurations `(D, x, y)` and the boundary
//! combinatorics of their moduli spaces.
//!
//! `D` is `D_L(u)` keeping only the arcs at a chosen set `S` of 0-resolved
//! crossings, so `s(D) = D_L(u + S)`. The triple is decorated when
//! `(D, y) < (s(D), x)`, i.e. some sequence of single surgeries carries the
//! labeling `y` to `x` under the Frobenius rule.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::complex::{generators, s0_sign, DEFAULT_CUBE_CAP};
use crate::cube::{diagram_key, label_masks, Circles, EdgeMap, Label, ResolutionConfiguration, Tracer, Vertex};
use crate::error::{Error, Result};
use crate::flow::FlowCategorySkeleton;
use crate::pd::LinkDiagram;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecoratedConfiguration {
    /// `D`: every circle of `D_L(u)`, arcs only at the chosen crossings.
    pub config: ResolutionConfiguration,
    /// `s(D)`, carrying no arcs.
    pub surgered: ResolutionConfiguration,
    /// Labels of `s(D)`, bit `k` set for `x₋` on its `k`-th circle.
    pub x: u64,
    /// Labels of `D`.
    pub y: u64,
}

impl DecoratedConfiguration {
    pub fn index(&self) -> usize {
        self.config.arcs.len()
    }

    pub fn crossings(&self) -> Vec<usize> {
        self.config.arcs.iter().map(|a| a.crossing).collect()
    }
}

fn label_string(mask: u64, circles: usize) -> String {
    (0..circles)
        .map(|k| if mask >> k & 1 == 1 { Label::Minus } else { Label::Plus }.to_string())
        .collect()
}

impl fmt::Display for DecoratedConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{} -> {}:{} via {:?}",
            self.config.vertex,
            label_string(self.y, self.config.circles.len()),
            self.surgered.vertex,
            label_string(self.x, self.surgered.circles.len()),
            self.crossings()
        )
    }
}

/// Circles and edge maps over the faces `u + T`, `T ⊆ S`, met while searching.
struct Interval<'a> {
    tracer: &'a Tracer,
    circles: HashMap<u64, Circles>,
}

impl<'a> Interval<'a> {
    fn new(tracer: &'a Tracer) -> Self {
        Interval {
            tracer,
            circles: HashMap::new(),
        }
    }

    fn circles(&mut self, w: Vertex) -> &Circles {
        let tracer = self.tracer;
        self.circles.entry(w.mask()).or_insert_with(|| tracer.circles(w))
    }

    fn edge(&mut self, w: Vertex, i: usize) -> Result<EdgeMap> {
        let from = self.circles(w).clone();
        let to = self.circles(w.with(i, true)).clone();
        EdgeMap::new(self.tracer, i, &from, &to)
    }

    /// Labelings of `u + S` reachable from `y` at `u` by surgeries inside `S`.
    fn reach(&mut self, u: Vertex, bits: &[usize], y: u64) -> Result<BTreeSet<u64>> {
        let mut layer: BTreeMap<u64, BTreeSet<u64>> = BTreeMap::from([(u.mask(), [y].into())]);
        for _ in 0..bits.len() {
            let mut next: BTreeMap<u64, BTreeSet<u64>> = BTreeMap::new();
            for (w, labels) in layer {
                let w = Vertex::from_mask(w, u.len());
                for &i in bits.iter().filter(|&&i| !w.get(i)) {
                    let edge = self.edge(w, i)?;
                    let out = next.entry(w.with(i, true).mask()).or_default();
                    for &z in &labels {
                        out.extend(edge.targets(z));
                    }
                }
            }
            layer = next;
        }
        Ok(layer.into_values().next().unwrap_or_default())
    }
}

fn check_vertex(d: &LinkDiagram, u: Vertex) -> Result<()> {
    if u.len() != d.crossing_count() {
        return Err(Error::Dimension {
            expected: d.crossing_count(),
            actual: u.len(),
        });
    }
    Ok(())
}

/// All decorated configurations over `D_L(u)` of index `k`, ordered by arc
/// set, then `y`, then `x`.
pub fn decorated_configs(d: &LinkDiagram, u: Vertex, k: usize) -> Result<Vec<DecoratedConfiguration>> {
    check_vertex(d, u)?;
    let zeros = u.zeros();
    if k > zeros.len() {
        return Err(Error::Dimension {
            expected: zeros.len(),
            actual: k,
        });
    }
    if d.crossing_count() > DEFAULT_CUBE_CAP.max(64) {
        return Err(Error::Resource("too many crossings".into()));
    }
    let tracer = Tracer::new(d);
    let key = diagram_key(d);
    let base = tracer.configuration(key, u);
    let y_count = base.circles.len();

    let mut subsets: Vec<Vec<usize>> = (0..1u64 << zeros.len())
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..zeros.len()).filter(|&j| m >> j & 1 == 1).map(|j| zeros[j]).collect())
        .collect();
    subsets.sort();

    let per_subset: Vec<Vec<DecoratedConfiguration>> = subsets
        .par_iter()
        .map(|bits| -> Result<Vec<_>> {
            let mut interval = Interval::new(&tracer);
            let top = bits.iter().fold(u, |w, &i| w.with(i, true));
            let mut config = base.clone();
            config.arcs.retain(|a| bits.contains(&a.crossing));
            let mut surgered = tracer.configuration(key, top);
            surgered.arcs.clear();

            let mut out = Vec::new();
            for y in label_masks(y_count) {
                let mut xs: Vec<u64> = interval.reach(u, bits, y)?.into_iter().collect();
                xs.sort_by_key(|&x| Vertex::from_mask(x, surgered.circles.len()));
                out.extend(xs.into_iter().map(|x| DecoratedConfiguration {
                    config: config.clone(),
                    surgered: surgered.clone(),
                    x,
                    y,
                }));
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(per_subset.into_iter().flatten().collect())
}

/// One boundary point of an index-2 moduli space: the broken flow through
/// the intermediate labeled configuration `(E, z)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundaryChain {
    /// Vertex of `E`, one surgery above `D`.
    pub via: Vertex,
    /// Crossing surgered first.
    pub first: usize,
    /// Labels of `E`.
    pub z: u64,
    /// Product of the s₀ signs of the two cube edges.
    pub sign: i64,
}

/// Intermediate chains `(D,y) < (E,z) < (s(D),x)` of an index-2 configuration.
pub fn interval_boundary(d: &LinkDiagram, dc: &DecoratedConfiguration) -> Result<Vec<BoundaryChain>> {
    if dc.index() != 2 {
        return Err(Error::Index {
            expected: 2,
            actual: dc.index(),
        });
    }
    if dc.config.diagram != diagram_key(d) {
        return Err(Error::DiagramMismatch);
    }
    let u = dc.config.vertex;
    check_vertex(d, u)?;
    let tracer = Tracer::new(d);
    let mut interval = Interval::new(&tracer);
    let bits = dc.crossings();
    let top = bits.iter().fold(u, |w, &i| w.with(i, true));

    let mut out = Vec::new();
    for (first, second) in [(bits[0], bits[1]), (bits[1], bits[0])] {
        let mid = u.with(first, true);
        let lower = interval.edge(u, first)?;
        let upper = interval.edge(mid, second)?;
        let sign = s0_sign(mid, u)? * s0_sign(top, mid)?;
        let mut zs: Vec<u64> = lower.targets(dc.y);
        zs.sort_unstable();
        for z in zs {
            if upper.targets(z).contains(&dc.x) {
                out.push(BoundaryChain {
                    via: mid,
                    first,
                    z,
                    sign,
                });
            }
        }
    }
    Ok(out)
}

/// The flow-category skeleton of the Khovanov complex: one object per
/// generator `"u:labels"` graded by `gr_h`, and one framed point from
/// `(D_L(v), x)` down to `(D_L(u), y)` for each nonzero differential entry,
/// signed by s₀.
pub fn khovanov_skeleton(d: &LinkDiagram, cap: usize) -> Result<FlowCategorySkeleton> {
    let gens = generators(d, cap)?;
    let name = |v: Vertex, mask: u64, circles: usize| format!("{v}:{}", label_string(mask, circles));
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut objects = Vec::with_capacity(gens.len());
    for (k, g) in gens.iter().enumerate() {
        let n = name(g.gen.config.vertex, g.gen.mask(), g.gen.config.circles.len());
        ids.insert(n.clone(), k);
        objects.push((n, g.gr_h));
    }

    let tracer = Tracer::new(d);
    let vertices: Vec<Vertex> = Vertex::all(d.crossing_count()).collect();
    let moduli: Vec<((usize, usize), Vec<i64>)> = vertices
        .par_iter()
        .map(|&u| -> Result<Vec<_>> {
            let mut interval = Interval::new(&tracer);
            let at_u = interval.circles(u).ids.len();
            let mut out = Vec::new();
            for i in u.zeros() {
                let v = u.with(i, true);
                let at_v = interval.circles(v).ids.len();
                let edge = interval.edge(u, i)?;
                let sign = s0_sign(v, u)?;
                for y in label_masks(at_u) {
                    let lower = ids[&name(u, y, at_u)];
                    for x in edge.targets(y) {
                        out.push(((ids[&name(v, x, at_v)], lower), vec![sign]));
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    FlowCategorySkeleton::new(objects, moduli, [])
}
