//! Planar diagram (PD) codes for oriented links.
//!
//! A crossing `X(a,b,c,d)` lists its four incident strand arcs counterclockwise,
//! starting from the incoming under-strand. The under-strand therefore runs
//! `a -> c`; the over-strand runs `d -> b` at a positive crossing and `b -> d`
//! at a negative one. Orientation of over-strands is propagated along each
//! component from its under-passages. Components that never pass under
//! anything are oriented by strand-number succession, or by an explicit
//! `O(k,a)` term ("strand `a` runs into crossing `k`", `k` 1-based).
//!
//! The byte-level grammar is documented in `docs/pd-format.md`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type ArcId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        s.value() as i8
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;

    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Sign::Positive),
            -1 => Ok(Sign::Negative),
            _ => Err(format!("crossing sign must be +1 or -1, got {v}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Crossing {
    pub id: usize,
    pub incident: [ArcId; 4],
}

impl fmt::Display for Crossing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.incident;
        write!(f, "X({a},{b},{c},{d})")
    }
}

/// `O(k,a)`: strand `a` runs into crossing `k` (0-based here, 1-based in text).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrientationOverride {
    pub crossing: usize,
    pub strand: ArcId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinkDiagram {
    crossings: Vec<Crossing>,
    strand_count: usize,
    signs: Vec<Sign>,
    n_plus: usize,
    n_minus: usize,
    unknots: usize,
    overrides: Vec<OrientationOverride>,
    components: usize,
}

impl LinkDiagram {
    /// Validates and orients a diagram from raw crossing tuples.
    pub fn new(
        incident: Vec<[ArcId; 4]>,
        unknots: usize,
        overrides: Vec<OrientationOverride>,
    ) -> Result<Self> {
        if incident.is_empty() && unknots == 0 {
            return Err(Error::topology(
                "empty diagram; write U for a crossingless unknot",
            ));
        }

        let crossings: Vec<Crossing> = incident
            .into_iter()
            .enumerate()
            .map(|(id, incident)| Crossing { id, incident })
            .collect();

        let occurrences = occurrences(&crossings)?;
        let (over_entry, knotted_components) = orient(&crossings, &occurrences, &overrides)?;
        check_planar(&crossings, &occurrences)?;

        let signs: Vec<Sign> = over_entry
            .iter()
            .map(|&slot| if slot == 3 { Sign::Positive } else { Sign::Negative })
            .collect();
        let n_plus = signs.iter().filter(|s| **s == Sign::Positive).count();

        Ok(LinkDiagram {
            n_minus: signs.len() - n_plus,
            n_plus,
            signs,
            strand_count: occurrences.len(),
            crossings,
            unknots,
            overrides,
            components: knotted_components + unknots,
        })
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn strand_count(&self) -> usize {
        self.strand_count
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn n_plus(&self) -> usize {
        self.n_plus
    }

    pub fn n_minus(&self) -> usize {
        self.n_minus
    }

    pub fn writhe(&self) -> i64 {
        self.n_plus as i64 - self.n_minus as i64
    }

    /// Number of crossingless `U` components.
    pub fn unknots(&self) -> usize {
        self.unknots
    }

    pub fn overrides(&self) -> &[OrientationOverride] {
        &self.overrides
    }

    /// Number of link components, including crossingless ones.
    pub fn component_count(&self) -> usize {
        self.components
    }

    /// Sorted strand-arc identifiers.
    pub fn strands(&self) -> Vec<ArcId> {
        let mut ids: Vec<ArcId> = self
            .crossings
            .iter()
            .flat_map(|c| c.incident)
            .collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    /// Synthetic strand ids standing in for the crossingless components.
    /// They sit above every real strand id so circle ids stay canonical.
    pub fn free_loop_ids(&self) -> Vec<ArcId> {
        let top = self
            .crossings
            .iter()
            .flat_map(|c| c.incident)
            .max()
            .unwrap_or(0);
        (1..=self.unknots as ArcId).map(|k| top + k).collect()
    }

    /// Switches every crossing. Orientation is kept, so `n_plus` and `n_minus` swap.
    pub fn mirror(&self) -> LinkDiagram {
        let incident = self
            .crossings
            .iter()
            .zip(&self.signs)
            .map(|(c, s)| {
                let [a, b, cc, d] = c.incident;
                match s {
                    // over-strand d -> b becomes the under-strand
                    Sign::Positive => [d, a, b, cc],
                    Sign::Negative => [b, cc, d, a],
                }
            })
            .collect();
        LinkDiagram::new(incident, self.unknots, self.overrides.clone())
            .expect("mirror of a valid diagram is valid")
    }

    /// Reorders the crossings; `order[k]` is the old index of the new k-th crossing.
    pub fn permute_crossings(&self, order: &[usize]) -> Result<LinkDiagram> {
        let n = self.crossing_count();
        let mut seen = vec![false; n];
        if order.len() != n {
            return Err(Error::Dimension {
                expected: n,
                actual: order.len(),
            });
        }
        for &k in order {
            if k >= n || std::mem::replace(&mut seen[k], true) {
                return Err(Error::Bit(format!("{order:?} is not a permutation")));
            }
        }
        let mut inverse = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            inverse[old] = new;
        }
        let incident = order.iter().map(|&k| self.crossings[k].incident).collect();
        let overrides = self
            .overrides
            .iter()
            .map(|o| OrientationOverride {
                crossing: inverse[o.crossing],
                strand: o.strand,
            })
            .collect();
        LinkDiagram::new(incident, self.unknots, overrides)
    }

    pub fn to_pd_string(&self) -> String {
        let mut terms: Vec<String> = self.crossings.iter().map(|c| c.to_string()).collect();
        terms.extend(std::iter::repeat_n("U".to_string(), self.unknots));
        terms.extend(
            self.overrides
                .iter()
                .map(|o| format!("O({},{})", o.crossing + 1, o.strand)),
        );
        terms.join(" ")
    }
}

impl fmt::Display for LinkDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_pd_string())
    }
}

impl std::str::FromStr for LinkDiagram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_pd(s)
    }
}

type Slot = (usize, usize);

fn occurrences(crossings: &[Crossing]) -> Result<BTreeMap<ArcId, [Slot; 2]>> {
    let mut seen: BTreeMap<ArcId, Vec<Slot>> = BTreeMap::new();
    for c in crossings {
        for (s, &arc) in c.incident.iter().enumerate() {
            if arc == 0 {
                return Err(Error::topology("strand ids must be positive"));
            }
            seen.entry(arc).or_default().push((c.id, s));
        }
    }
    // overused strands first: they name the offending term more directly
    let bad = seen
        .iter()
        .filter(|(_, slots)| slots.len() > 2)
        .chain(seen.iter().filter(|(_, slots)| slots.len() < 2))
        .next();
    if let Some((arc, slots)) = bad {
        return Err(Error::topology(format!(
            "strand {arc} appears {} times, expected exactly twice",
            slots.len()
        )));
    }
    Ok(seen.into_iter().map(|(arc, s)| (arc, [s[0], s[1]])).collect())
}

fn other_end(occ: &BTreeMap<ArcId, [Slot; 2]>, arc: ArcId, at: Slot) -> Slot {
    let [p, q] = occ[&arc];
    if p == at {
        q
    } else {
        p
    }
}

/// Returns, per crossing, the slot (1 or 3) where the over-strand enters,
/// plus the number of components that meet at least one crossing.
fn orient(
    crossings: &[Crossing],
    occ: &BTreeMap<ArcId, [Slot; 2]>,
    overrides: &[OrientationOverride],
) -> Result<(Vec<usize>, usize)> {
    for o in overrides {
        let valid = crossings
            .get(o.crossing)
            .is_some_and(|c| c.incident.contains(&o.strand));
        if !valid {
            return Err(Error::topology(format!(
                "O({},{}) does not name a strand at that crossing",
                o.crossing + 1,
                o.strand
            )));
        }
    }

    let mut over_entry = vec![usize::MAX; crossings.len()];
    let mut done: BTreeMap<ArcId, bool> = occ.keys().map(|&a| (a, false)).collect();
    let mut components = 0;

    for &start in occ.keys() {
        if done[&start] {
            continue;
        }
        components += 1;

        // Walk the component once in an arbitrary direction, recording the
        // slot through which each strand enters the next crossing.
        let origin = occ[&start][0];
        let mut arcs = Vec::new();
        let mut entries: Vec<Slot> = Vec::new();
        let (mut arc, mut from) = (start, origin);
        loop {
            done.insert(arc, true);
            arcs.push(arc);
            let (x, s) = other_end(occ, arc, from);
            entries.push((x, s));
            from = (x, s ^ 2);
            arc = crossings[x].incident[s ^ 2];
            if arc == start && from == origin {
                break;
            }
            if arcs.len() > 2 * occ.len() {
                return Err(Error::topology("strand walk does not close up"));
            }
        }

        let forward_votes = entries.iter().filter(|(_, s)| *s == 0).count();
        let reverse_votes = entries.iter().filter(|(_, s)| *s == 2).count();
        let forward = match (forward_votes > 0, reverse_votes > 0) {
            (true, true) => {
                return Err(Error::topology(format!(
                    "inconsistent orientation on the component through strand {start}"
                )))
            }
            (true, false) => Some(true),
            (false, true) => Some(false),
            (false, false) => None,
        };
        let forward = resolve_direction(&arcs, &entries, overrides, forward)?;

        for &(x, s) in &entries {
            let s = if forward { s } else { s ^ 2 };
            if s % 2 == 1 {
                over_entry[x] = s;
            }
        }
    }

    Ok((over_entry, components))
}

fn resolve_direction(
    arcs: &[ArcId],
    entries: &[Slot],
    overrides: &[OrientationOverride],
    from_passages: Option<bool>,
) -> Result<bool> {
    let mut decided = from_passages;
    for o in overrides {
        // in the forward walk, arcs[p] enters crossing entries[p].0
        let enters = (0..arcs.len()).any(|p| arcs[p] == o.strand && entries[p].0 == o.crossing);
        let leaves = (0..arcs.len()).any(|p| {
            let prev = (p + arcs.len() - 1) % arcs.len();
            arcs[p] == o.strand && entries[prev].0 == o.crossing
        });
        let wanted = match (enters, leaves) {
            (true, false) => true,
            (false, true) => false,
            (false, false) => continue,
            (true, true) => {
                return Err(Error::topology(format!(
                    "O({},{}) is ambiguous: the strand both enters and leaves that crossing",
                    o.crossing + 1,
                    o.strand
                )))
            }
        };
        match decided {
            Some(d) if d != wanted => {
                return Err(Error::topology(format!(
                    "O({},{}) contradicts the orientation of its component",
                    o.crossing + 1,
                    o.strand
                )))
            }
            _ => decided = Some(wanted),
        }
    }
    if let Some(d) = decided {
        return Ok(d);
    }

    let lo = *arcs.iter().min().unwrap();
    let hi = *arcs.iter().max().unwrap();
    let succ = |x: ArcId, y: ArcId| y == x + 1 || (x == hi && y == lo);
    let n = arcs.len();
    let fwd = (0..n).filter(|&p| succ(arcs[p], arcs[(p + 1) % n])).count();
    let rev = (0..n).filter(|&p| succ(arcs[(p + 1) % n], arcs[p])).count();
    match fwd.cmp(&rev) {
        std::cmp::Ordering::Greater => Ok(true),
        std::cmp::Ordering::Less => Ok(false),
        std::cmp::Ordering::Equal => Err(Error::topology(format!(
                "orientation of the component through strand {lo} is ambiguous; add an O(k,{lo}) term"
        ))),
    }
}

/// Genus-zero check on the 4-valent diagram graph via its face count.
fn check_planar(crossings: &[Crossing], occ: &BTreeMap<ArcId, [Slot; 2]>) -> Result<()> {
    let n = crossings.len();
    if n == 0 {
        return Ok(());
    }

    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    for [(x, _), (y, _)] in occ.values() {
        let (rx, ry) = (find(&mut parent, *x), find(&mut parent, *y));
        parent[rx] = ry;
    }
    let graph_components = (0..n).filter(|&x| find(&mut parent, x) == x).count();

    let mut seen = vec![[false; 4]; n];
    let mut faces = 0;
    for x in 0..n {
        for s in 0..4 {
            if seen[x][s] {
                continue;
            }
            faces += 1;
            let (mut cx, mut cs) = (x, s);
            while !seen[cx][cs] {
                seen[cx][cs] = true;
                let (nx, ns) = other_end(occ, crossings[cx].incident[cs], (cx, cs));
                cx = nx;
                cs = (ns + 1) % 4;
            }
        }
    }

    if faces != n + 2 * graph_components {
        return Err(Error::topology(format!(
            "diagram is not planar ({faces} faces, expected {})",
            n + 2 * graph_components
        )));
    }
    Ok(())
}

/// Parses a PD document into a validated, oriented diagram.
pub fn parse_pd(text: &str) -> Result<LinkDiagram> {
    let mut crossings = Vec::new();
    let mut unknots = 0;
    let mut overrides = Vec::new();

    for (index, line) in text.lines().enumerate() {
        let mut cur = Cursor {
            bytes: line.as_bytes(),
            pos: 0,
            line: index + 1,
        };
        cur.skip_ws();
        if cur.peek() == Some(b'%') {
            continue;
        }
        while !cur.at_end() {
            match cur.bump() {
                Some(b'X') => {
                    let v = cur.arguments(4)?;
                    crossings.push([v[0], v[1], v[2], v[3]]);
                }
                Some(b'U') => unknots += 1,
                Some(b'O') => {
                    let v = cur.arguments(2)?;
                    overrides.push(OrientationOverride {
                        crossing: v[0] as usize - 1,
                        strand: v[1],
                    });
                }
                _ => return Err(cur.error_before("expected X(..), U or O(..)")),
            }
            if !cur.at_end() && !cur.at_ws() {
                return Err(cur.error("expected whitespace between terms"));
            }
            cur.skip_ws();
        }
    }

    LinkDiagram::new(crossings, unknots, overrides)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
    line: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek();
        self.pos += 1;
        b
    }

    fn at_end(&self) -> bool {
        self.pos >= self.bytes.len()
    }

    fn at_ws(&self) -> bool {
        matches!(self.peek(), Some(b' ' | b'\t' | b'\r'))
    }

    fn skip_ws(&mut self) {
        while self.at_ws() {
            self.pos += 1;
        }
    }

    fn error(&self, message: &str) -> Error {
        Error::Syntax {
            line: self.line,
            column: self.pos + 1,
            message: message.to_string(),
        }
    }

    fn error_before(&mut self, message: &str) -> Error {
        self.pos -= 1;
        self.error(message)
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", b as char)))
        }
    }

    fn integer(&mut self) -> Result<ArcId> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        let digits = &self.bytes[start..self.pos];
        if digits.is_empty() {
            return Err(self.error("expected a positive integer"));
        }
        if digits[0] == b'0' {
            self.pos = start;
            return Err(self.error("integers must be positive without leading zeros"));
        }
        std::str::from_utf8(digits)
            .ok()
            .and_then(|s| s.parse::<ArcId>().ok())
            .ok_or_else(|| {
                self.pos = start;
                self.error("integer out of range")
            })
    }

    fn arguments(&mut self, count: usize) -> Result<Vec<ArcId>> {
        self.expect(b'(')?;
        let mut out = Vec::with_capacity(count);
        for k in 0..count {
            self.skip_ws();
            out.push(self.integer()?);
            self.skip_ws();
            self.expect(if k + 1 == count { b')' } else { b',' })?;
        }
        Ok(out)
    }
}
