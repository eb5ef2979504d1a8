//! Combinatorial skeletons of framed flow categories.
//!
//! A skeleton keeps the graded objects, the signed points of every
//! 0-dimensional moduli space `Mor(a,b)` (`μ(a) - μ(b) = 1`), and the partial
//! order they generate. A compactified moduli space `M̄(a,b)` is represented
//! only by its stratification: the chains `a = a_1 > a_2 > ... > a_k = b`, a
//! chain with `k - 2` breaks being a stratum of codimension `k - 2`.
//!
//! Face labels follow the grading of the break: the codimension-1 stratum
//! `a > m > b` lies on face `μ(m) - μ(b)` of `M̄(a,b)`, one of
//! `μ(a) - μ(b) - 1` faces.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::complex::{s0_sign, ChainComplex};
use crate::cube::Vertex;
use crate::error::{Error, Result};
use crate::matrix::SparseMatrix;

pub type ObjectId = usize;

pub const DEFAULT_FLOW_CAP: usize = 10;
pub const SKELETON_SCHEMA: &str = "khovanov-skeleton/1";

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Chain(pub Vec<ObjectId>);

impl Chain {
    pub fn source(&self) -> ObjectId {
        self.0[0]
    }

    pub fn target(&self) -> ObjectId {
        *self.0.last().unwrap()
    }

    pub fn breaks(&self) -> &[ObjectId] {
        &self.0[1..self.0.len() - 1]
    }

    pub fn codimension(&self) -> usize {
        self.0.len() - 2
    }

    fn without(&self, k: usize) -> Chain {
        let mut v = self.0.clone();
        v.remove(k);
        Chain(v)
    }

    fn keeping(&self, keep: &[ObjectId]) -> Chain {
        let (a, b) = (self.source(), self.target());
        let mut v = vec![a];
        v.extend(self.breaks().iter().filter(|m| keep.contains(m)));
        v.push(b);
        Chain(v)
    }

    fn concat(&self, rest: &Chain) -> Chain {
        debug_assert_eq!(self.target(), rest.source());
        let mut v = self.0.clone();
        v.extend_from_slice(&rest.0[1..]);
        Chain(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowCategorySkeleton {
    names: Vec<String>,
    index: Vec<i64>,
    moduli: BTreeMap<(ObjectId, ObjectId), Vec<i64>>,
    relations: BTreeSet<(ObjectId, ObjectId)>,
    below: Vec<Vec<u64>>,
}

impl FlowCategorySkeleton {
    /// `moduli` gives the signed points of each index-1 `Mor(a,b)`;
    /// `relations` adds `a > b` for higher-index pairs whose moduli are
    /// nonempty without any broken flow witnessing it.
    pub fn new(
        objects: Vec<(String, i64)>,
        moduli: impl IntoIterator<Item = ((ObjectId, ObjectId), Vec<i64>)>,
        relations: impl IntoIterator<Item = (ObjectId, ObjectId)>,
    ) -> Result<Self> {
        let n = objects.len();
        let (names, index): (Vec<String>, Vec<i64>) = objects.into_iter().unzip();
        if names.iter().collect::<BTreeSet<_>>().len() != n {
            return Err(Error::Skeleton("object names must be unique".into()));
        }

        let mut collected: BTreeMap<(ObjectId, ObjectId), Vec<i64>> = BTreeMap::new();
        for ((a, b), points) in moduli {
            if a >= n || b >= n {
                return Err(Error::Skeleton(format!("morphism ({a},{b}) names no object")));
            }
            if index[a] - index[b] != 1 {
                return Err(Error::Skeleton(format!(
                    "Mor({}, {}) must join objects whose indices differ by 1",
                    names[a], names[b]
                )));
            }
            if let Some(p) = points.iter().find(|p| p.abs() != 1) {
                return Err(Error::Skeleton(format!(
                    "framed point of Mor({}, {}) has sign {p}",
                    names[a], names[b]
                )));
            }
            collected.entry((a, b)).or_default().extend(points);
        }
        collected.retain(|_, p| !p.is_empty());

        let mut extra = BTreeSet::new();
        for (a, b) in relations {
            if a >= n || b >= n || index[a] <= index[b] {
                return Err(Error::Skeleton(format!(
                    "relation ({a},{b}) must go from higher to lower index"
                )));
            }
            extra.insert((a, b));
        }

        let words = n.div_ceil(64).max(1);
        let mut down: Vec<Vec<ObjectId>> = vec![Vec::new(); n];
        for &(a, b) in collected.keys().chain(extra.iter()) {
            down[a].push(b);
        }
        let mut order: Vec<ObjectId> = (0..n).collect();
        order.sort_by_key(|&a| index[a]);
        let mut below = vec![vec![0u64; words]; n];
        for &a in &order {
            let mut set = vec![0u64; words];
            for &b in &down[a] {
                set[b / 64] |= 1 << (b % 64);
                for (w, x) in set.iter_mut().zip(&below[b]) {
                    *w |= x;
                }
            }
            below[a] = set;
        }

        Ok(FlowCategorySkeleton {
            names,
            index,
            moduli: collected,
            relations: extra,
            below,
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, a: ObjectId) -> &str {
        &self.names[a]
    }

    /// `μ(a)`.
    pub fn index(&self, a: ObjectId) -> i64 {
        self.index[a]
    }

    pub fn find(&self, name: &str) -> Option<ObjectId> {
        self.names.iter().position(|n| n == name)
    }

    pub fn points(&self, a: ObjectId, b: ObjectId) -> &[i64] {
        self.moduli.get(&(a, b)).map_or(&[], Vec::as_slice)
    }

    /// The framed count `#Mor(a,b)`.
    pub fn signed_count(&self, a: ObjectId, b: ObjectId) -> i64 {
        self.points(a, b).iter().sum()
    }

    /// Index-1 pairs with nonempty moduli, in order.
    pub fn morphisms(&self) -> impl Iterator<Item = (ObjectId, ObjectId, &[i64])> {
        self.moduli.iter().map(|(&(a, b), p)| (a, b, p.as_slice()))
    }

    /// Strict order `a > b`.
    pub fn greater(&self, a: ObjectId, b: ObjectId) -> bool {
        self.below[a][b / 64] >> (b % 64) & 1 == 1
    }

    /// Every chain from `a` down to `b`, in lexicographic order.
    pub fn strata(&self, a: ObjectId, b: ObjectId) -> Vec<Chain> {
        if !self.greater(a, b) {
            return Vec::new();
        }
        let between: Vec<ObjectId> = (0..self.len())
            .filter(|&m| self.greater(a, m) && self.greater(m, b))
            .collect();
        let mut out = Vec::new();
        let mut path = vec![a];
        self.extend_chains(&between, b, &mut path, &mut out);
        out.sort();
        out
    }

    fn extend_chains(&self, between: &[ObjectId], b: ObjectId, path: &mut Vec<ObjectId>, out: &mut Vec<Chain>) {
        let last = *path.last().unwrap();
        let mut done = path.clone();
        done.push(b);
        out.push(Chain(done));
        for &m in between {
            if self.greater(last, m) {
                path.push(m);
                self.extend_chains(between, b, path, out);
                path.pop();
            }
        }
    }

    pub fn chain_name(&self, c: &Chain) -> String {
        c.0.iter().map(|&x| self.names[x].as_str()).collect::<Vec<_>>().join(" > ")
    }

    pub fn to_file(&self) -> SkeletonFile {
        SkeletonFile {
            schema: SKELETON_SCHEMA.into(),
            objects: self
                .names
                .iter()
                .zip(&self.index)
                .map(|(name, &index)| ObjectEntry {
                    name: name.clone(),
                    index,
                })
                .collect(),
            morphisms: self
                .moduli
                .iter()
                .map(|(&(a, b), points)| MorphismEntry {
                    source: self.names[a].clone(),
                    target: self.names[b].clone(),
                    points: points.clone(),
                })
                .collect(),
            relations: self
                .relations
                .iter()
                .map(|&(a, b)| RelationEntry {
                    source: self.names[a].clone(),
                    target: self.names[b].clone(),
                })
                .collect(),
        }
    }

    pub fn from_file(file: &SkeletonFile) -> Result<Self> {
        if file.schema != SKELETON_SCHEMA {
            return Err(Error::Skeleton(format!(
                "unsupported schema {:?}, expected {SKELETON_SCHEMA:?}",
                file.schema
            )));
        }
        let ids: BTreeMap<&str, ObjectId> = file
            .objects
            .iter()
            .enumerate()
            .map(|(k, o)| (o.name.as_str(), k))
            .collect();
        let id = |name: &str| {
            ids.get(name)
                .copied()
                .ok_or_else(|| Error::Skeleton(format!("unknown object {name:?}")))
        };
        let moduli = file
            .morphisms
            .iter()
            .map(|m| Ok(((id(&m.source)?, id(&m.target)?), m.points.clone())))
            .collect::<Result<Vec<_>>>()?;
        let relations = file
            .relations
            .iter()
            .map(|r| Ok((id(&r.source)?, id(&r.target)?)))
            .collect::<Result<Vec<_>>>()?;
        let objects = file.objects.iter().map(|o| (o.name.clone(), o.index)).collect();
        FlowCategorySkeleton::new(objects, moduli, relations)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("skeleton serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SkeletonFile =
            serde_json::from_str(text).map_err(|e| Error::Skeleton(e.to_string()))?;
        Self::from_file(&file)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SkeletonFile {
    pub schema: String,
    pub objects: Vec<ObjectEntry>,
    pub morphisms: Vec<MorphismEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relations: Vec<RelationEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectEntry {
    pub name: String,
    pub index: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismEntry {
    pub source: String,
    pub target: String,
    pub points: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationEntry {
    pub source: String,
    pub target: String,
}

/// The flow category `C(n)` of `f_n(x) = Σ 3x_i² - 2x_i³`: objects `{0,1}^n`
/// graded by weight, one point per cube edge framed by the s₀ sign.
pub fn cube_flow_category(n: usize, cap: usize) -> Result<FlowCategorySkeleton> {
    if n == 0 {
        return Err(Error::Skeleton("the cube category needs n >= 1".into()));
    }
    if n > cap {
        return Err(Error::Resource(format!("cube dimension {n} exceeds the cap of {cap}")));
    }
    let vertices: Vec<Vertex> = Vertex::all(n).collect();
    let position: BTreeMap<u64, ObjectId> =
        vertices.iter().enumerate().map(|(k, v)| (v.mask(), k)).collect();
    let objects = vertices
        .iter()
        .map(|v| (v.to_string(), v.weight() as i64))
        .collect();
    let mut moduli = Vec::new();
    for (a, u) in vertices.iter().enumerate() {
        for i in (0..n).filter(|&i| u.get(i)) {
            let v = u.with(i, false);
            moduli.push(((a, position[&v.mask()]), vec![s0_sign(*u, v)?]));
        }
    }
    FlowCategorySkeleton::new(objects, moduli, [])
}

/// The stratification of one `M̄(a,b)` with its face labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacePoset {
    pub source: ObjectId,
    pub target: ObjectId,
    /// `k(a,b) = μ(a) - μ(b) - 1`: the dimension and the number of face indices.
    pub dimension: usize,
    pub strata: BTreeSet<Chain>,
    /// Face index of every codimension-1 stratum.
    pub labels: BTreeMap<Chain, usize>,
    /// Strata of the factors `M̄(a,m)` and `M̄(m,b)` for each break `m`.
    pub factors: BTreeMap<(ObjectId, ObjectId), BTreeSet<Chain>>,
    index: BTreeMap<ObjectId, i64>,
    names: BTreeMap<ObjectId, String>,
}

impl FacePoset {
    pub fn name(&self, c: &Chain) -> String {
        c.0.iter().map(|x| self.names[x].as_str()).collect::<Vec<_>>().join(" > ")
    }

    /// Σ over strata of `(-1)^dim`.
    pub fn euler(&self) -> i64 {
        self.strata
            .iter()
            .map(|c| if (self.dimension - c.codimension()) % 2 == 0 { 1 } else { -1 })
            .sum()
    }

    pub fn strata_by_codimension(&self) -> Vec<usize> {
        let mut counts = vec![0; self.dimension + 1];
        for c in &self.strata {
            counts[c.codimension()] += 1;
        }
        counts
    }
}

pub fn face_poset(fc: &FlowCategorySkeleton, a: ObjectId, b: ObjectId) -> Result<FacePoset> {
    if !fc.greater(a, b) {
        return Err(Error::Skeleton(format!("{} is not above {}", fc.name(a), fc.name(b))));
    }
    let strata: BTreeSet<Chain> = fc.strata(a, b).into_iter().collect();
    let labels = strata
        .iter()
        .filter(|c| c.codimension() == 1)
        .map(|c| (c.clone(), (fc.index(c.0[1]) - fc.index(b)) as usize))
        .collect();
    let mut factors = BTreeMap::new();
    let mut involved: BTreeSet<ObjectId> = [a, b].into();
    for c in &strata {
        involved.extend(c.breaks());
    }
    for &m in involved.iter().filter(|&&m| m != a && m != b) {
        factors.insert((a, m), fc.strata(a, m).into_iter().collect());
        factors.insert((m, b), fc.strata(m, b).into_iter().collect());
    }
    Ok(FacePoset {
        source: a,
        target: b,
        dimension: (fc.index(a) - fc.index(b) - 1) as usize,
        strata,
        labels,
        factors,
        index: involved.iter().map(|&m| (m, fc.index(m))).collect(),
        names: involved.iter().map(|&m| (m, fc.name(m).to_string())).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaceReport {
    pub source: String,
    pub target: String,
    pub dimension: usize,
    pub strata_by_codimension: Vec<usize>,
    pub euler: i64,
}

impl fmt::Display for FaceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "M({}, {}): dimension {}, strata by codimension {:?}, Euler count {}",
            self.source, self.target, self.dimension, self.strata_by_codimension, self.euler
        )
    }
}

/// Checks the ⟨k⟩-manifold face axioms on the stratification poset:
///
/// * closure: every coarsening of a stratum is a stratum, and the top cell is present;
/// * corners: a codimension-d stratum lies in exactly d codimension-1 faces,
///   each carrying the label of its break grading;
/// * covering: the labeled faces exhaust the boundary;
/// * intersections: `∂_i ∩ ∂_j` is the union of codimension-2 strata breaking
///   at gradings `i` and `j`, hence a face of both;
/// * gluing: the face through `m` is exactly the image of `M̄(a,m) × M̄(m,b)`,
///   so each boundary stratum comes from a unique sequence of broken flows.
pub fn verify_face_axioms(fp: &FacePoset) -> Result<FaceReport> {
    let violation = |axiom: &str, c: &Chain| Error::AxiomViolation {
        axiom: axiom.into(),
        stratum: fp.name(c),
    };
    let (a, b) = (fp.source, fp.target);
    let top = Chain(vec![a, b]);
    if !fp.strata.contains(&top) {
        return Err(violation("closure", &top));
    }

    for c in &fp.strata {
        if c.source() != a || c.target() != b {
            return Err(violation("closure", c));
        }
        for k in 1..c.0.len() - 1 {
            if !fp.strata.contains(&c.without(k)) {
                return Err(violation("closure", c));
            }
        }

        // corners and covering
        let mut faces = BTreeSet::new();
        for &m in c.breaks() {
            let facet = Chain(vec![a, m, b]);
            let label = fp.labels.get(&facet).ok_or_else(|| violation("covering", c))?;
            let expected = (fp.index[&m] - fp.index[&b]) as usize;
            if *label != expected || !(1..=fp.dimension).contains(label) {
                return Err(violation("face labels", &facet));
            }
            faces.insert(*label);
        }
        if faces.len() != c.codimension() {
            return Err(violation("corners", c));
        }

        // intersections
        let breaks = c.breaks();
        for x in 0..breaks.len() {
            for y in x + 1..breaks.len() {
                if !fp.strata.contains(&c.keeping(&[breaks[x], breaks[y]])) {
                    return Err(violation("intersections", c));
                }
            }
        }
    }

    for (facet, _) in fp.labels.iter() {
        if !fp.strata.contains(facet) || facet.codimension() != 1 {
            return Err(violation("face labels", facet));
        }
    }

    // gluing
    let mut through: BTreeMap<ObjectId, BTreeSet<&Chain>> = BTreeMap::new();
    for c in &fp.strata {
        for &m in c.breaks() {
            through.entry(m).or_default().insert(c);
        }
    }
    for (facet, _) in fp.labels.iter() {
        let m = facet.0[1];
        let (Some(left), Some(right)) = (fp.factors.get(&(a, m)), fp.factors.get(&(m, b))) else {
            return Err(violation("gluing", facet));
        };
        let image: BTreeSet<Chain> = left
            .iter()
            .flat_map(|p| right.iter().map(move |s| p.concat(s)))
            .collect();
        let present = through.get(&m).cloned().unwrap_or_default();
        if let Some(missing) = image.iter().find(|c| !present.contains(c)) {
            return Err(violation("gluing", missing));
        }
        if let Some(extra) = present.iter().find(|c| !image.contains(c)) {
            return Err(violation("gluing", extra));
        }
    }

    Ok(FaceReport {
        source: fp.names[&a].clone(),
        target: fp.names[&b].clone(),
        dimension: fp.dimension,
        strata_by_codimension: fp.strata_by_codimension(),
        euler: fp.euler(),
    })
}

/// The Floer complex: `C_j` free on index-`j` objects, `∂[a] = Σ #Mor(a,b) [b]`.
pub fn floer_complex(fc: &FlowCategorySkeleton) -> Result<ChainComplex<String>> {
    let mut bases: BTreeMap<i64, Vec<String>> = BTreeMap::new();
    let mut position = vec![0; fc.len()];
    for a in 0..fc.len() {
        let basis = bases.entry(fc.index(a)).or_default();
        position[a] = basis.len();
        basis.push(fc.name(a).to_string());
    }
    if let (Some(&lo), Some(&hi)) = (bases.keys().next(), bases.keys().next_back()) {
        for j in lo..=hi {
            bases.entry(j).or_default();
        }
    }

    let mut triplets: BTreeMap<i64, Vec<(usize, usize, i64)>> = BTreeMap::new();
    for (a, b, points) in fc.morphisms() {
        let count: i64 = points.iter().sum();
        triplets
            .entry(fc.index(a))
            .or_default()
            .push((position[b], position[a], count));
    }
    let maps = triplets
        .into_iter()
        .map(|(j, t)| (j, SparseMatrix::from_triplets(bases[&(j - 1)].len(), bases[&j].len(), t)))
        .collect();

    let complex = ChainComplex { step: -1, bases, maps };
    let failures = complex.d_squared_failures();
    if !failures.is_empty() {
        return Err(Error::Complex(format!(
            "signed counts are incoherent: ∂∘∂ ≠ 0 leaving degrees {failures:?}"
        )));
    }
    Ok(complex)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BrokenFlow {
    pub via: String,
    /// `#Mor(a,b)` and `#Mor(b,c)`.
    pub counts: [i64; 2],
    pub signed: i64,
    /// Boundary points contributed: `|Mor(a,b)| · |Mor(b,c)|`.
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairReport {
    pub source: String,
    pub target: String,
    pub broken: Vec<BrokenFlow>,
    pub signed_sum: i64,
    pub boundary_points: usize,
    pub balanced: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct BoundaryReport {
    pub pairs: Vec<PairReport>,
}

impl BoundaryReport {
    pub fn all_balanced(&self) -> bool {
        self.pairs.iter().all(|p| p.balanced)
    }

    pub fn flagged(&self) -> impl Iterator<Item = &PairReport> {
        self.pairs.iter().filter(|p| !p.balanced)
    }
}

/// For every index-2 pair `(a,c)`, the broken flows `a > b > c` bounding the
/// one-dimensional `M̄(a,c)`: their signed count must vanish and their number
/// must be even.
pub fn d_squared_from_boundary(fc: &FlowCategorySkeleton) -> BoundaryReport {
    let mut down: Vec<Vec<ObjectId>> = vec![Vec::new(); fc.len()];
    for (a, b, _) in fc.morphisms() {
        down[a].push(b);
    }

    let mut pairs = Vec::new();
    for a in 0..fc.len() {
        let mut by_target: BTreeMap<ObjectId, Vec<BrokenFlow>> = BTreeMap::new();
        for &b in &down[a] {
            for &c in &down[b] {
                let counts = [fc.signed_count(a, b), fc.signed_count(b, c)];
                by_target.entry(c).or_default().push(BrokenFlow {
                    via: fc.name(b).to_string(),
                    counts,
                    signed: counts[0] * counts[1],
                    points: fc.points(a, b).len() * fc.points(b, c).len(),
                });
            }
        }
        for (c, broken) in by_target {
            let signed_sum = broken.iter().map(|f| f.signed).sum();
            let boundary_points = broken.iter().map(|f| f.points).sum();
            pairs.push(PairReport {
                source: fc.name(a).to_string(),
                target: fc.name(c).to_string(),
                balanced: signed_sum == 0 && boundary_points % 2 == 0,
                broken,
                signed_sum,
                boundary_points,
            });
        }
    }
    BoundaryReport { pairs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::chain_homology;

    fn circle() -> FlowCategorySkeleton {
        FlowCategorySkeleton::new(
            vec![("max".into(), 1), ("min".into(), 0)],
            [((0, 1), vec![1, -1])],
            [],
        )
        .unwrap()
    }

    #[test]
    fn interval_and_point() {
        let c1 = cube_flow_category(1, DEFAULT_FLOW_CAP).unwrap();
        let (top, bottom) = (c1.find("1").unwrap(), c1.find("0").unwrap());
        assert_eq!(c1.strata(top, bottom), [Chain(vec![top, bottom])]);
        let fp = face_poset(&c1, top, bottom).unwrap();
        assert_eq!(verify_face_axioms(&fp).unwrap().strata_by_codimension, [1]);

        let c2 = cube_flow_category(2, DEFAULT_FLOW_CAP).unwrap();
        let fp = face_poset(&c2, c2.find("11").unwrap(), c2.find("00").unwrap()).unwrap();
        let report = verify_face_axioms(&fp).unwrap();
        assert_eq!(report.strata_by_codimension, [1, 2]);
        assert_eq!(report.euler, 1);
    }

    #[test]
    fn hexagon() {
        let c3 = cube_flow_category(3, DEFAULT_FLOW_CAP).unwrap();
        let fp = face_poset(&c3, c3.find("111").unwrap(), c3.find("000").unwrap()).unwrap();
        let report = verify_face_axioms(&fp).unwrap();
        assert_eq!(report.strata_by_codimension, [1, 6, 6]);
        assert_eq!(report.euler, 1);
    }

    #[test]
    fn corrupted_posets_are_caught() {
        let c3 = cube_flow_category(3, DEFAULT_FLOW_CAP).unwrap();
        let fp = face_poset(&c3, c3.find("111").unwrap(), c3.find("000").unwrap()).unwrap();
        for victim in fp.strata.iter() {
            let mut broken = fp.clone();
            broken.strata.remove(victim);
            assert!(
                matches!(verify_face_axioms(&broken), Err(Error::AxiomViolation { .. })),
                "deleting {} went unnoticed",
                fp.name(victim)
            );
        }
        let mut relabeled = fp.clone();
        let facet = relabeled.labels.keys().next().unwrap().clone();
        *relabeled.labels.get_mut(&facet).unwrap() += 1;
        assert!(verify_face_axioms(&relabeled).is_err());
    }

    #[test]
    fn circle_morse_homology() {
        let h = chain_homology(&floer_complex(&circle()).unwrap()).unwrap();
        assert_eq!(h.len(), 2);
        assert_eq!((h[&0].free_rank, h[&1].free_rank), (1, 1));
        let report = d_squared_from_boundary(&circle());
        assert!(report.pairs.is_empty());
    }

    #[test]
    fn interval_cube_is_acyclic() {
        let c1 = cube_flow_category(1, DEFAULT_FLOW_CAP).unwrap();
        let f = floer_complex(&c1).unwrap();
        assert_eq!(f.map(1).to_dense(), [[1]]);
        assert!(chain_homology(&f).unwrap().is_empty());
    }

    #[test]
    fn square_boundary_balances() {
        let c2 = cube_flow_category(2, DEFAULT_FLOW_CAP).unwrap();
        let report = d_squared_from_boundary(&c2);
        assert_eq!(report.pairs.len(), 1);
        let pair = &report.pairs[0];
        assert_eq!(pair.broken.len(), 2);
        let signs: BTreeSet<i64> = pair.broken.iter().map(|f| f.signed).collect();
        assert_eq!(signs, [-1, 1].into());
        assert!(report.all_balanced());
    }

    #[test]
    fn incoherent_signs() {
        let mut file = cube_flow_category(2, DEFAULT_FLOW_CAP).unwrap().to_file();
        file.morphisms[0].points = vec![-file.morphisms[0].points[0]];
        let bad = FlowCategorySkeleton::from_file(&file).unwrap();
        assert!(matches!(floer_complex(&bad), Err(Error::Complex(_))));
        assert_eq!(d_squared_from_boundary(&bad).flagged().count(), 1);
    }

    #[test]
    fn validation() {
        assert!(cube_flow_category(0, 10).is_err());
        assert!(matches!(cube_flow_category(11, 10), Err(Error::Resource(_))));
        let bad_index = FlowCategorySkeleton::new(
            vec![("a".into(), 2), ("b".into(), 0)],
            [((0, 1), vec![1])],
            [],
        );
        assert!(bad_index.is_err());
        let bad_sign =
            FlowCategorySkeleton::new(vec![("a".into(), 1), ("b".into(), 0)], [((0, 1), vec![2])], []);
        assert!(bad_sign.is_err());
        let dup = FlowCategorySkeleton::new(vec![("a".into(), 1), ("a".into(), 0)], [], []);
        assert!(dup.is_err());
    }

    #[test]
    fn json_round_trip() {
        let c2 = cube_flow_category(2, DEFAULT_FLOW_CAP).unwrap();
        assert_eq!(FlowCategorySkeleton::from_json(&c2.to_json()).unwrap(), c2);
        let with_relation = FlowCategorySkeleton::new(
            vec![("a".into(), 2), ("b".into(), 0)],
            [],
            [(0, 1)],
        )
        .unwrap();
        assert!(with_relation.greater(0, 1));
        assert_eq!(FlowCategorySkeleton::from_json(&with_relation.to_json()).unwrap(), with_relation);
        assert!(FlowCategorySkeleton::from_json("{\"schema\":\"other\",\"objects\":[],\"morphisms\":[]}").is_err());
    }
}
