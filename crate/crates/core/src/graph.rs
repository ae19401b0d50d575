//! Typed graphs: vertex labels, edge kinds, adjacency and census.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cube::{Direction, SignVector};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Cube,
    Prime,
    Ccc,
    DoublePrime,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Cube => "cube",
            Stage::Prime => "prime",
            Stage::Ccc => "ccc",
            Stage::DoublePrime => "double-prime",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Stage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cube" => Ok(Stage::Cube),
            "prime" => Ok(Stage::Prime),
            "ccc" => Ok(Stage::Ccc),
            "double-prime" => Ok(Stage::DoublePrime),
            other => Err(Error::Parse(format!("unknown stage `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    /// Cube-direction edge between clusters.
    Long,
    /// Cluster edge between consecutive directions.
    Medium,
    /// Remaining cluster triangulation edge.
    Extra,
    /// Edge of a cut-edge cycle.
    Short,
}

impl EdgeKind {
    pub const ALL: [EdgeKind; 4] = [EdgeKind::Long, EdgeKind::Medium, EdgeKind::Extra, EdgeKind::Short];

    pub fn name(self) -> &'static str {
        match self {
            EdgeKind::Long => "long",
            EdgeKind::Medium => "medium",
            EdgeKind::Extra => "extra",
            EdgeKind::Short => "short",
        }
    }
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EdgeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EdgeKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown edge kind `{s}`")))
    }
}

/// Vertex `(v, i)` of the vertex-truncated graph: the cut of the direction-`i`
/// edge at cube vertex `v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeVertex {
    pub v: SignVector,
    pub i: Direction,
}

/// Vertex `(v, i, j)` of the edge-truncated graph: the port toward `j` on the
/// short cycle `(v, i)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DoublePrimeVertex {
    pub v: SignVector,
    pub i: Direction,
    pub j: Direction,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexLabel {
    Cube(SignVector),
    Prime(PrimeVertex),
    DoublePrime(DoublePrimeVertex),
}

impl VertexLabel {
    pub fn sign_vector(&self) -> SignVector {
        match self {
            VertexLabel::Cube(v) => *v,
            VertexLabel::Prime(p) => p.v,
            VertexLabel::DoublePrime(p) => p.v,
        }
    }

    /// Cycle direction for prime and double-prime labels.
    pub fn direction(&self) -> Option<Direction> {
        match self {
            VertexLabel::Cube(_) => None,
            VertexLabel::Prime(p) => Some(p.i),
            VertexLabel::DoublePrime(p) => Some(p.i),
        }
    }
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexLabel::Cube(v) => write!(f, "{}", v.to_bit_string()),
            VertexLabel::Prime(p) => write!(f, "{}:d{}", p.v.to_bit_string(), p.i),
            VertexLabel::DoublePrime(p) => {
                write!(f, "{}:d{}:p{}", p.v.to_bit_string(), p.i, p.j)
            }
        }
    }
}

impl FromStr for VertexLabel {
    type Err = Error;

    /// `b<bits>`, `b<bits>:d<i>` or `b<bits>:d<i>:p<j>`; the sign vector may
    /// also be written with `-`/`+` glyphs.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split(':');
        let v: SignVector = parts.next().unwrap_or_default().parse()?;
        let m = v.dimension();
        let mut field = |prefix: char| -> Result<Option<Direction>> {
            match parts.next() {
                None => Ok(None),
                Some(p) => {
                    let digits = p
                        .strip_prefix(prefix)
                        .ok_or_else(|| Error::Parse(format!("expected `{prefix}` field in `{s}`")))?;
                    let value = digits
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad number in `{s}`")))?;
                    Direction::new(value, m).map(Some)
                }
            }
        };
        let i = field('d')?;
        let j = field('p')?;
        if parts.next().is_some() {
            return Err(Error::Parse(format!("trailing fields in label `{s}`")));
        }
        Ok(match (i, j) {
            (None, _) => VertexLabel::Cube(v),
            (Some(i), None) => VertexLabel::Prime(PrimeVertex { v, i }),
            (Some(i), Some(j)) => VertexLabel::DoublePrime(DoublePrimeVertex { v, i, j }),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TypedEdge {
    pub u: usize,
    pub v: usize,
    pub kind: EdgeKind,
    /// Cube direction, set for `Long` edges only.
    pub direction: Option<Direction>,
}

/// Minimal read-only graph interface used by the expansion and spectral code.
pub trait GraphView {
    fn vertex_count(&self) -> usize;
    fn edge_count(&self) -> usize;
    fn endpoints(&self, edge: usize) -> (usize, usize);
    /// `(neighbor, edge id)` pairs.
    fn neighbors(&self, v: usize) -> &[(usize, usize)];

    fn degree(&self, v: usize) -> usize {
        self.neighbors(v).len()
    }

    fn max_degree(&self) -> usize {
        (0..self.vertex_count()).map(|v| self.degree(v)).max().unwrap_or(0)
    }
}

pub fn is_connected<G: GraphView + ?Sized>(g: &G) -> bool {
    let n = g.vertex_count();
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    let mut reached = 1;
    while let Some(u) = queue.pop_front() {
        for &(w, _) in g.neighbors(u) {
            if !seen[w] {
                seen[w] = true;
                reached += 1;
                queue.push_back(w);
            }
        }
    }
    reached == n
}

fn adjacency(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> Vec<Vec<(usize, usize)>> {
    let mut adj = vec![Vec::new(); n];
    for (e, (u, v)) in edges.enumerate() {
        adj[u].push((v, e));
        adj[v].push((u, e));
    }
    adj
}

/// Plain undirected graph on `0..n`, used for calibration graphs.
#[derive(Clone, Debug)]
pub struct SimpleGraph {
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<(usize, usize)>>,
}

impl SimpleGraph {
    pub fn from_edges(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let adj = adjacency(n, edges.iter().copied());
        Self { edges, adj }
    }

    pub fn cycle(n: usize) -> Self {
        Self::from_edges(n, (0..n).map(|v| (v, (v + 1) % n)).collect())
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Self::from_edges(n, edges)
    }
}

impl GraphView for SimpleGraph {
    fn vertex_count(&self) -> usize {
        self.adj.len()
    }
    fn edge_count(&self) -> usize {
        self.edges.len()
    }
    fn endpoints(&self, edge: usize) -> (usize, usize) {
        self.edges[edge]
    }
    fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }
}

/// A labeled graph with kind-tagged edges.
///
/// Vertex ids follow label order and edge ids follow `(min id, max id)` order,
/// so two graphs with the same labels and edges are identical id for id.
#[derive(Clone, Debug)]
pub struct TypedGraph {
    stage: Stage,
    m: usize,
    labels: Vec<VertexLabel>,
    index: HashMap<VertexLabel, usize>,
    edges: Vec<TypedEdge>,
    adj: Vec<Vec<(usize, usize)>>,
}

impl PartialEq for TypedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.stage == other.stage
            && self.m == other.m
            && self.labels == other.labels
            && self.edges == other.edges
    }
}

impl Eq for TypedGraph {}

impl TypedGraph {
    /// Builds from labels and label-addressed edges; labels are sorted and
    /// edges deduplicated only if fully identical.
    pub fn from_labels(
        stage: Stage,
        m: usize,
        mut labels: Vec<VertexLabel>,
        edges: Vec<(VertexLabel, VertexLabel, EdgeKind)>,
    ) -> Result<Self> {
        labels.sort_unstable();
        labels.dedup();
        let index: HashMap<VertexLabel, usize> =
            labels.iter().enumerate().map(|(id, l)| (*l, id)).collect();
        let lookup = |l: &VertexLabel| {
            index.get(l).copied().ok_or_else(|| Error::UnknownLabel(l.to_string()))
        };
        let id_edges = edges
            .iter()
            .map(|(a, b, k)| Ok((lookup(a)?, lookup(b)?, *k)))
            .collect::<Result<Vec<_>>>()?;
        Self::assemble(stage, m, labels, index, id_edges)
    }

    /// Builds from labels already in sorted order and id-addressed edges.
    pub(crate) fn from_ids(
        stage: Stage,
        m: usize,
        labels: Vec<VertexLabel>,
        edges: Vec<(usize, usize, EdgeKind)>,
    ) -> Result<Self> {
        debug_assert!(labels.windows(2).all(|w| w[0] < w[1]));
        let index = labels.iter().enumerate().map(|(id, l)| (*l, id)).collect();
        Self::assemble(stage, m, labels, index, edges)
    }

    fn assemble(
        stage: Stage,
        m: usize,
        labels: Vec<VertexLabel>,
        index: HashMap<VertexLabel, usize>,
        edges: Vec<(usize, usize, EdgeKind)>,
    ) -> Result<Self> {
        let mut typed = Vec::with_capacity(edges.len());
        for (a, b, kind) in edges {
            if a == b {
                return Err(Error::Precondition(format!("self-loop at {}", labels[a])));
            }
            let (u, v) = (a.min(b), a.max(b));
            let direction = if kind == EdgeKind::Long {
                let diff = labels[u].sign_vector().bits() ^ labels[v].sign_vector().bits();
                if diff.count_ones() != 1 {
                    return Err(Error::Precondition(format!(
                        "long edge {} -- {} does not cross one cube direction",
                        labels[u], labels[v]
                    )));
                }
                Some(Direction::from_index(diff.trailing_zeros() as usize))
            } else {
                None
            };
            typed.push(TypedEdge { u, v, kind, direction });
        }
        typed.sort_unstable_by_key(|e| (e.u, e.v, e.kind));
        typed.dedup();
        if let Some(w) = typed.windows(2).find(|w| (w[0].u, w[0].v) == (w[1].u, w[1].v)) {
            return Err(Error::Precondition(format!(
                "parallel edges {} -- {}",
                labels[w[0].u], labels[w[0].v]
            )));
        }
        let adj = adjacency(labels.len(), typed.iter().map(|e| (e.u, e.v)));
        Ok(Self { stage, m, labels, index, edges: typed, adj })
    }

    pub fn stage(&self) -> Stage {
        self.stage
    }

    pub fn dimension(&self) -> usize {
        self.m
    }

    pub fn labels(&self) -> &[VertexLabel] {
        &self.labels
    }

    pub fn label(&self, id: usize) -> &VertexLabel {
        &self.labels[id]
    }

    pub fn id_of(&self, label: &VertexLabel) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn edges(&self) -> &[TypedEdge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> &TypedEdge {
        &self.edges[id]
    }

    /// Edge id between `u` and `v`, if adjacent.
    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        self.adj[u].iter().find(|(w, _)| *w == v).map(|&(_, e)| e)
    }

    pub fn expect_stage(&self, expected: Stage) -> Result<()> {
        if self.stage != expected {
            return Err(Error::WrongStage { expected: expected.name(), found: self.stage.name() });
        }
        Ok(())
    }

    pub fn census(&self) -> Census {
        let mut edges_by_kind = BTreeMap::new();
        let mut long_by_direction = vec![0; self.m];
        for e in &self.edges {
            *edges_by_kind.entry(e.kind).or_insert(0) += 1;
            if let Some(d) = e.direction {
                long_by_direction[d.index()] += 1;
            }
        }
        let mut degree_histogram = BTreeMap::new();
        for a in &self.adj {
            *degree_histogram.entry(a.len()).or_insert(0) += 1;
        }
        Census {
            stage: self.stage,
            m: self.m,
            vertices: self.labels.len(),
            edges: self.edges.len(),
            edges_by_kind,
            degree_histogram,
            long_by_direction,
        }
    }

    /// Kinds of the edges incident to `v`, sorted.
    pub fn kind_profile(&self, v: usize) -> Vec<EdgeKind> {
        let mut kinds: Vec<_> = self.adj[v].iter().map(|&(_, e)| self.edges[e].kind).collect();
        kinds.sort_unstable();
        kinds
    }
}

impl GraphView for TypedGraph {
    fn vertex_count(&self) -> usize {
        self.labels.len()
    }
    fn edge_count(&self) -> usize {
        self.edges.len()
    }
    fn endpoints(&self, edge: usize) -> (usize, usize) {
        (self.edges[edge].u, self.edges[edge].v)
    }
    fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }
}

/// Vertex and edge counts of a typed graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Census {
    pub stage: Stage,
    pub m: usize,
    pub vertices: usize,
    pub edges: usize,
    pub edges_by_kind: BTreeMap<EdgeKind, usize>,
    pub degree_histogram: BTreeMap<usize, usize>,
    pub long_by_direction: Vec<usize>,
}

impl Census {
    pub fn count(&self, kind: EdgeKind) -> usize {
        self.edges_by_kind.get(&kind).copied().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_grammar() {
        let l: VertexLabel = "b0110:d2:p3".parse().unwrap();
        assert_eq!(l.to_string(), "b0110:d2:p3");
        match l {
            VertexLabel::DoublePrime(p) => {
                assert_eq!(p.v.bits(), 0b0110);
                assert_eq!((p.i.get(), p.j.get()), (2, 3));
            }
            _ => panic!("wrong variant"),
        }
        let l: VertexLabel = "-++-:d4".parse().unwrap();
        assert_eq!(l.to_string(), "b0110:d4");
        assert!("b0110:d5".parse::<VertexLabel>().is_err());
        assert!("b0110:x1".parse::<VertexLabel>().is_err());
        assert!("b0110:d1:p2:q3".parse::<VertexLabel>().is_err());
    }

    #[test]
    fn rejects_parallel_edges() {
        let v = |s: &str| s.parse::<VertexLabel>().unwrap();
        let labels = vec![v("b0000:d1"), v("b0000:d2")];
        let edges = vec![
            (labels[0], labels[1], EdgeKind::Medium),
            (labels[1], labels[0], EdgeKind::Extra),
        ];
        assert!(TypedGraph::from_labels(Stage::Prime, 4, labels, edges).is_err());
    }

    #[test]
    fn calibration_graphs() {
        let c = SimpleGraph::cycle(6);
        assert_eq!(c.edge_count(), 6);
        assert!(is_connected(&c));
        let k = SimpleGraph::complete(5);
        assert_eq!(k.edge_count(), 10);
        assert_eq!(k.max_degree(), 4);
        let two = SimpleGraph::from_edges(4, vec![(0, 1), (2, 3)]);
        assert!(!is_connected(&two));
    }
}
