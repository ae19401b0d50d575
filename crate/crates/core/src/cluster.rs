//! Cluster triangulations: maximal planar graphs on the directions `1..=m`
//! that contain the Hamilton polygon `1, 2, ..., m`, realized as a polygon
//! with a triangulation on each of its two sides.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::cube::{check_dimension, Direction, SignVector, MIN_DIMENSION};
use crate::error::{Error, Result};

/// Unordered direction pair, stored as `(min, max)` of the 1-based values.
pub type Chord = (usize, usize);

fn chord(a: usize, b: usize) -> Chord {
    (a.min(b), a.max(b))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Inner,
    Outer,
}

/// One vertex figure: polygon edges `{i, succ(i)}` plus non-crossing diagonals
/// on the inner and outer side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterGraph {
    m: usize,
    inner: BTreeSet<Chord>,
    outer: BTreeSet<Chord>,
    /// `rotation[i - 1]`: neighbors of `i` in cyclic order.
    rotation: Vec<Vec<usize>>,
}

impl ClusterGraph {
    /// Range-checks labels only; call [`ClusterGraph::violations`] for the
    /// structural invariants.
    pub fn from_diagonals(
        m: usize,
        inner: impl IntoIterator<Item = Chord>,
        outer: impl IntoIterator<Item = Chord>,
    ) -> Result<Self> {
        check_dimension(m, MIN_DIMENSION)?;
        let collect = |it: &mut dyn Iterator<Item = Chord>| -> Result<BTreeSet<Chord>> {
            it.map(|(a, b)| {
                if a == 0 || b == 0 || a > m || b > m || a == b {
                    Err(Error::InvalidStrategy(format!("bad diagonal {a}-{b} for m={m}")))
                } else {
                    Ok(chord(a, b))
                }
            })
            .collect()
        };
        let inner = collect(&mut inner.into_iter())?;
        let outer = collect(&mut outer.into_iter())?;
        let rotation = (1..=m).map(|i| rotation_at(m, i, &inner, &outer)).collect();
        Ok(Self { m, inner, outer, rotation })
    }

    /// The double fan: inner diagonals from vertex 1, outer diagonals from vertex m.
    pub fn double_fan(m: usize) -> Result<Self> {
        check_dimension(m, MIN_DIMENSION)?;
        Self::from_diagonals(m, (3..m).map(|t| (1, t)), (2..m - 1).map(|t| (m, t)))
    }

    pub fn dimension(&self) -> usize {
        self.m
    }

    pub fn inner(&self) -> &BTreeSet<Chord> {
        &self.inner
    }

    pub fn outer(&self) -> &BTreeSet<Chord> {
        &self.outer
    }

    /// Neighbors of `i` in rotation order.
    pub fn rotation(&self, i: Direction) -> &[usize] {
        &self.rotation[i.index()]
    }

    pub fn degree(&self, i: Direction) -> usize {
        self.rotation[i.index()].len()
    }

    pub fn neighbor_set(&self, i: Direction) -> BTreeSet<usize> {
        self.rotation[i.index()].iter().copied().collect()
    }

    pub fn is_polygon_edge(&self, a: usize, b: usize) -> bool {
        let (a, b) = chord(a, b);
        b == a + 1 || (a == 1 && b == self.m)
    }

    /// Polygon edges followed by diagonals, deduplicated.
    pub fn edges(&self) -> BTreeSet<Chord> {
        let mut all: BTreeSet<Chord> = (1..=self.m).map(|i| chord(i, i % self.m + 1)).collect();
        all.extend(self.inner.iter().copied());
        all.extend(self.outer.iter().copied());
        all
    }

    /// Relabels every direction `t` to `t + shift` (cyclically).
    pub fn rotated(&self, shift: usize) -> Self {
        let m = self.m;
        let map = |(a, b): &Chord| ((a - 1 + shift) % m + 1, (b - 1 + shift) % m + 1);
        Self::from_diagonals(m, self.inner.iter().map(map), self.outer.iter().map(map))
            .expect("relabeling preserves ranges")
    }

    /// Faces traced from the rotation system, as vertex cycles.
    pub fn faces(&self) -> Result<Vec<Vec<usize>>> {
        let mut darts: HashMap<(usize, usize), bool> = HashMap::new();
        for u in 1..=self.m {
            for &w in &self.rotation[u - 1] {
                darts.insert((u, w), false);
            }
        }
        let mut faces = Vec::new();
        let mut keys: Vec<_> = darts.keys().copied().collect();
        keys.sort_unstable();
        for start in keys {
            if darts[&start] {
                continue;
            }
            let mut face = Vec::new();
            let mut dart = start;
            loop {
                match darts.get_mut(&dart) {
                    Some(used) if !*used => *used = true,
                    Some(_) => break,
                    None => {
                        return Err(Error::InvalidStrategy(format!(
                            "rotation system is not symmetric at {}-{}",
                            dart.0, dart.1
                        )))
                    }
                }
                face.push(dart.0);
                let (u, w) = dart;
                let around = &self.rotation[w - 1];
                let pos = around.iter().position(|&x| x == u).ok_or_else(|| {
                    Error::InvalidStrategy(format!("rotation at {w} misses neighbor {u}"))
                })?;
                dart = (w, around[(pos + 1) % around.len()]);
            }
            if dart != start {
                return Err(Error::InvalidStrategy("face trace did not close".into()));
            }
            faces.push(face);
        }
        Ok(faces)
    }

    /// Every violated structural invariant; empty means valid.
    pub fn violations(&self) -> Vec<ClusterViolation> {
        let m = self.m;
        let mut out = Vec::new();
        let edges = self.edges();
        if edges.len() != 3 * m - 6 {
            out.push(ClusterViolation::EdgeCount { found: edges.len(), expected: 3 * m - 6 });
        }
        for (side, set) in [(Side::Inner, &self.inner), (Side::Outer, &self.outer)] {
            if set.len() != m - 3 {
                out.push(ClusterViolation::DiagonalCount { side, found: set.len(), expected: m - 3 });
            }
            for &(a, b) in set {
                if self.is_polygon_edge(a, b) {
                    out.push(ClusterViolation::PolygonEdgeAsDiagonal { side, chord: (a, b) });
                }
            }
            let chords: Vec<_> = set.iter().copied().collect();
            for (x, &c1) in chords.iter().enumerate() {
                for &c2 in &chords[x + 1..] {
                    if chords_cross(c1, c2) {
                        out.push(ClusterViolation::Crossing { side, first: c1, second: c2 });
                    }
                }
            }
        }
        for shared in self.inner.intersection(&self.outer) {
            out.push(ClusterViolation::SharedDiagonal { chord: *shared });
        }
        for i in Direction::all(m) {
            let degree = self.neighbor_set(i).len();
            if degree < 3 || degree > m - 1 {
                out.push(ClusterViolation::Degree { vertex: i.get(), degree });
            }
        }
        match self.faces() {
            Ok(faces) => {
                let non_triangles = faces.iter().filter(|f| f.len() != 3).count();
                if faces.len() != 2 * m - 4 || non_triangles > 0 {
                    out.push(ClusterViolation::FaceTrace { faces: faces.len(), non_triangles });
                }
            }
            Err(e) => out.push(ClusterViolation::Rotation { detail: e.to_string() }),
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.violations().is_empty()
    }
}

/// Rotation at `i`: `succ(i)`, inner neighbors by increasing forward distance,
/// `pred(i)`, outer neighbors by decreasing forward distance.
fn rotation_at(m: usize, i: usize, inner: &BTreeSet<Chord>, outer: &BTreeSet<Chord>) -> Vec<usize> {
    let dist = |t: usize| (t + m - i) % m;
    let side = |set: &BTreeSet<Chord>| -> Vec<usize> {
        let mut nb: Vec<usize> = set
            .iter()
            .filter_map(|&(a, b)| if a == i { Some(b) } else if b == i { Some(a) } else { None })
            .collect();
        nb.sort_unstable_by_key(|&t| dist(t));
        nb
    };
    let mut rot = vec![i % m + 1];
    rot.extend(side(inner));
    rot.push((i + m - 2) % m + 1);
    let mut out_nb = side(outer);
    out_nb.reverse();
    rot.extend(out_nb);
    rot
}

/// Chords of a convex polygon with vertices in label order cross iff their
/// endpoints interleave.
fn chords_cross((a, b): Chord, (c, d): Chord) -> bool {
    if a == c || a == d || b == c || b == d {
        return false;
    }
    let inside = |x: usize| a < x && x < b;
    inside(c) != inside(d)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "invariant", rename_all = "kebab-case")]
pub enum ClusterViolation {
    EdgeCount { found: usize, expected: usize },
    DiagonalCount { side: Side, found: usize, expected: usize },
    PolygonEdgeAsDiagonal { side: Side, chord: Chord },
    Crossing { side: Side, first: Chord, second: Chord },
    SharedDiagonal { chord: Chord },
    Degree { vertex: usize, degree: usize },
    FaceTrace { faces: usize, non_triangles: usize },
    Rotation { detail: String },
}

impl ClusterViolation {
    pub fn tag(&self) -> &'static str {
        match self {
            ClusterViolation::EdgeCount { .. } => "edge-count",
            ClusterViolation::DiagonalCount { .. } => "diagonal-count",
            ClusterViolation::PolygonEdgeAsDiagonal { .. } => "polygon-edge-as-diagonal",
            ClusterViolation::Crossing { .. } => "crossing",
            ClusterViolation::SharedDiagonal { .. } => "shared-diagonal",
            ClusterViolation::Degree { .. } => "degree",
            ClusterViolation::FaceTrace { .. } => "face-trace",
            ClusterViolation::Rotation { .. } => "rotation",
        }
    }
}

impl fmt::Display for ClusterViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {:?}", self.tag(), self)
    }
}

#[derive(Clone, Debug)]
enum Assignment {
    Uniform,
    PerVertex(Vec<u32>),
}

/// Assignment of a cluster triangulation to every cube vertex.
#[derive(Clone, Debug)]
pub struct ClusterStrategy {
    name: String,
    m: usize,
    clusters: Vec<ClusterGraph>,
    assignment: Assignment,
}

impl ClusterStrategy {
    /// Same cluster at every vertex.
    pub fn uniform(cluster: ClusterGraph, name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            m: cluster.dimension(),
            clusters: vec![cluster],
            assignment: Assignment::Uniform,
        }
    }

    /// The default strategy: uniform double fan.
    pub fn double_fan(m: usize) -> Result<Self> {
        Ok(Self::uniform(ClusterGraph::double_fan(m)?, "double-fan"))
    }

    /// `index[v.bits()]` selects the cluster of `v` from `clusters`.
    pub fn per_vertex(
        name: impl Into<String>,
        m: usize,
        clusters: Vec<ClusterGraph>,
        index: Vec<u32>,
    ) -> Result<Self> {
        check_dimension(m, MIN_DIMENSION)?;
        if index.len() != 1 << m {
            return Err(Error::InvalidStrategy(format!(
                "assignment covers {} of {} vertices",
                index.len(),
                1usize << m
            )));
        }
        if let Some(bad) = index.iter().find(|&&x| x as usize >= clusters.len()) {
            return Err(Error::InvalidStrategy(format!("cluster index {bad} out of range")));
        }
        if let Some(c) = clusters.iter().find(|c| c.dimension() != m) {
            return Err(Error::InvalidStrategy(format!(
                "cluster of dimension {} in strategy for m={m}",
                c.dimension()
            )));
        }
        Ok(Self { name: name.into(), m, clusters, assignment: Assignment::PerVertex(index) })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.m
    }

    pub fn is_uniform(&self) -> bool {
        matches!(self.assignment, Assignment::Uniform)
    }

    /// Distinct clusters referenced by the assignment.
    pub fn clusters(&self) -> &[ClusterGraph] {
        &self.clusters
    }

    pub fn cluster_index(&self, v: SignVector) -> usize {
        match &self.assignment {
            Assignment::Uniform => 0,
            Assignment::PerVertex(index) => index[v.bits() as usize] as usize,
        }
    }

    /// `T(v)`.
    pub fn cluster(&self, v: SignVector) -> &ClusterGraph {
        &self.clusters[self.cluster_index(v)]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LinkFailureKind {
    NeighborSet,
    Rotation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkFailure {
    pub v: String,
    pub direction: usize,
    pub kind: LinkFailureKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClusterFailure {
    pub cluster: usize,
    pub example_vertex: String,
    pub vertices: usize,
    pub violation: ClusterViolation,
}

/// Outcome of [`validate_strategy`]; failures are entries, not errors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrategyReport {
    pub m: usize,
    pub strategy: String,
    pub clusters_checked: usize,
    pub link_pairs_checked: usize,
    pub cluster_failures: Vec<ClusterFailure>,
    pub link_failures: Vec<LinkFailure>,
}

impl StrategyReport {
    pub fn passed(&self) -> bool {
        self.cluster_failures.is_empty() && self.link_failures.is_empty()
    }

    pub(crate) fn into_result(self) -> Result<()> {
        if self.passed() {
            return Ok(());
        }
        let first = self
            .cluster_failures
            .first()
            .map(|f| format!("cluster {} at {}: {}", f.cluster, f.example_vertex, f.violation))
            .or_else(|| {
                self.link_failures.first().map(|f| {
                    format!("link condition ({:?}) at v={} i={}", f.kind, f.v, f.direction)
                })
            })
            .unwrap_or_default();
        Err(Error::InvalidStrategy(format!(
            "{} cluster and {} link failures; first: {first}",
            self.cluster_failures.len(),
            self.link_failures.len()
        )))
    }
}

/// Equal as cyclic sequences, up to rotation and reflection.
pub fn cyclically_equivalent(a: &[usize], b: &[usize]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    let n = a.len();
    let matches = |seq: &mut dyn Iterator<Item = usize>| {
        let seq: Vec<usize> = seq.collect();
        (0..n).any(|shift| (0..n).all(|x| seq[(x + shift) % n] == a[x]))
    };
    matches(&mut b.iter().copied()) || matches(&mut b.iter().rev().copied())
}

/// Checks every cluster's invariants and the link condition across every
/// cube edge `{v, v ⊕ e_i}`: the neighbors of `i` in `T(v)` and `T(v ⊕ e_i)`
/// agree as sets and, up to reflection, as cyclic orders.
pub fn validate_strategy(s: &ClusterStrategy, m: usize) -> StrategyReport {
    let mut report = StrategyReport {
        m,
        strategy: s.name.clone(),
        clusters_checked: s.clusters.len(),
        link_pairs_checked: 0,
        cluster_failures: Vec::new(),
        link_failures: Vec::new(),
    };
    if s.m != m {
        report.cluster_failures.push(ClusterFailure {
            cluster: 0,
            example_vertex: String::new(),
            vertices: 0,
            violation: ClusterViolation::Rotation {
                detail: format!("strategy is for m={}, requested m={m}", s.m),
            },
        });
        return report;
    }

    let mut users: Vec<(Option<SignVector>, usize)> = vec![(None, 0); s.clusters.len()];
    for v in SignVector::all(m) {
        let entry = &mut users[s.cluster_index(v)];
        entry.0.get_or_insert(v);
        entry.1 += 1;
    }
    for (idx, cluster) in s.clusters.iter().enumerate() {
        let (Some(example), count) = users[idx] else { continue };
        for violation in cluster.violations() {
            report.cluster_failures.push(ClusterFailure {
                cluster: idx,
                example_vertex: example.to_string(),
                vertices: count,
                violation,
            });
        }
    }

    let mut cache: HashMap<(usize, usize, usize), Option<LinkFailureKind>> = HashMap::new();
    for v in SignVector::all(m) {
        for i in Direction::all(m) {
            if v.is_plus(i) {
                continue;
            }
            report.link_pairs_checked += 1;
            let (a, b) = (s.cluster_index(v), s.cluster_index(v.flip(i)));
            if a == b {
                continue;
            }
            let outcome = *cache.entry((a.min(b), a.max(b), i.get())).or_insert_with(|| {
                let (ca, cb) = (&s.clusters[a], &s.clusters[b]);
                if ca.neighbor_set(i) != cb.neighbor_set(i) {
                    Some(LinkFailureKind::NeighborSet)
                } else if !cyclically_equivalent(ca.rotation(i), cb.rotation(i)) {
                    Some(LinkFailureKind::Rotation)
                } else {
                    None
                }
            });
            if let Some(kind) = outcome {
                report.link_failures.push(LinkFailure { v: v.to_string(), direction: i.get(), kind });
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(v: usize) -> Direction {
        Direction::new(v, 24).unwrap()
    }

    fn degrees(c: &ClusterGraph) -> Vec<usize> {
        Direction::all(c.dimension()).map(|i| c.degree(i)).collect()
    }

    #[test]
    fn double_fan_small_cases() {
        let c = ClusterGraph::double_fan(4).unwrap();
        assert_eq!(c.inner().iter().copied().collect::<Vec<_>>(), vec![(1, 3)]);
        assert_eq!(c.outer().iter().copied().collect::<Vec<_>>(), vec![(2, 4)]);
        assert_eq!(degrees(&c), vec![3; 4]);
        assert_eq!(c.edges().len(), 6);
        assert!(c.is_valid());

        let c = ClusterGraph::double_fan(5).unwrap();
        assert_eq!(c.edges().len(), 9);
        assert_eq!(degrees(&c), vec![4, 3, 4, 3, 4]);

        let c = ClusterGraph::double_fan(6).unwrap();
        let faces = c.faces().unwrap();
        assert_eq!(faces.len(), 8);
        assert!(faces.iter().all(|f| f.len() == 3));

        assert!(ClusterGraph::double_fan(3).is_err());
    }

    #[test]
    fn double_fan_rotation_order() {
        let c = ClusterGraph::double_fan(6).unwrap();
        // vertex 3: succ 4, inner {1}, pred 2, outer {6}
        assert_eq!(c.rotation(d(3)), &[4, 1, 2, 6]);
        // vertex 1: succ 2, inner 3,4,5, pred 6
        assert_eq!(c.rotation(d(1)), &[2, 3, 4, 5, 6]);
        // vertex 6: succ 1, pred 5, outer 4,3,2 by decreasing forward distance
        assert_eq!(c.rotation(d(6)), &[1, 5, 4, 3, 2]);
    }

    #[test]
    fn double_fan_invariants_all_dimensions() {
        for m in 4..=24 {
            let c = ClusterGraph::double_fan(m).unwrap();
            assert!(c.violations().is_empty(), "m={m}: {:?}", c.violations());
            let mut deg = degrees(&c);
            assert_eq!(deg.iter().sum::<usize>(), 6 * m - 12);
            assert_eq!((deg[0], deg[m - 1], deg[1], deg[m - 2]), (m - 1, m - 1, 3, 3));
            deg.sort_unstable();
            let mut expected = vec![3, 3, m - 1, m - 1];
            expected.extend(std::iter::repeat_n(4, m - 4));
            expected.sort_unstable();
            assert_eq!(deg, expected, "m={m}");
        }
    }

    #[test]
    fn violations_are_tagged() {
        // missing a diagonal: edge count and diagonal count fail
        let c = ClusterGraph::from_diagonals(5, [(1, 3)], [(5, 2), (5, 3)]).unwrap();
        let tags: Vec<_> = c.violations().iter().map(|v| v.tag()).collect();
        assert!(tags.contains(&"edge-count"));
        assert!(tags.contains(&"diagonal-count"));

        // crossing chords on one side
        let c = ClusterGraph::from_diagonals(5, [(1, 3), (2, 4)], [(5, 2), (5, 3)]).unwrap();
        assert!(c.violations().iter().any(|v| v.tag() == "crossing"));

        // same diagonal on both sides
        let c = ClusterGraph::from_diagonals(5, [(1, 3), (1, 4)], [(1, 3), (1, 4)]).unwrap();
        assert!(c.violations().iter().any(|v| v.tag() == "shared-diagonal"));

        assert!(ClusterGraph::from_diagonals(5, [(1, 6)], []).is_err());
    }

    #[test]
    fn uniform_strategy_passes() {
        for m in 4..=8 {
            let s = ClusterStrategy::double_fan(m).unwrap();
            let r = validate_strategy(&s, m);
            assert!(r.passed(), "{r:?}");
            assert_eq!(r.link_pairs_checked, m << (m - 1));
            assert!(SignVector::all(m).all(|v| s.cluster(v) == &s.clusters()[0]));
        }
    }

    fn parity_strategy(m: usize) -> ClusterStrategy {
        let base = ClusterGraph::double_fan(m).unwrap();
        let shifted = base.rotated(1);
        let index = SignVector::all(m).map(|v| v.parity()).collect();
        ClusterStrategy::per_vertex("parity", m, vec![base, shifted], index).unwrap()
    }

    #[test]
    fn parity_strategy_link_condition() {
        // Every triangulation on four vertices is K4, so nothing can differ.
        assert!(validate_strategy(&parity_strategy(4), 4).passed());

        let r = validate_strategy(&parity_strategy(5), 5);
        assert!(!r.passed());
        assert!(r.cluster_failures.is_empty());
        assert!(r.link_failures.iter().any(|f| f.kind == LinkFailureKind::NeighborSet));
    }

    #[test]
    fn wrong_edge_count_strategy_fails() {
        let bad = ClusterGraph::from_diagonals(5, [(1, 3)], [(5, 2), (5, 3)]).unwrap();
        let s = ClusterStrategy::uniform(bad, "bad");
        let r = validate_strategy(&s, 5);
        assert!(!r.passed());
        assert!(r.cluster_failures.iter().any(|f| f.violation.tag() == "edge-count"));
        assert_eq!(r.cluster_failures[0].vertices, 32);
    }

    #[test]
    fn cyclic_equivalence() {
        assert!(cyclically_equivalent(&[1, 2, 3, 4], &[3, 4, 1, 2]));
        assert!(cyclically_equivalent(&[1, 2, 3, 4], &[4, 3, 2, 1]));
        assert!(!cyclically_equivalent(&[1, 2, 3, 4], &[1, 3, 2, 4]));
        assert!(!cyclically_equivalent(&[1, 2, 3], &[1, 2, 3, 4]));
    }
}
