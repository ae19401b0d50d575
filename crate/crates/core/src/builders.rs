//! Builders for the vertex-truncated graph, its cube-connected-cycles
//! spanning subgraph, and the edge-truncated graph.

use serde::Serialize;

use crate::cluster::{validate_strategy, ClusterStrategy};
use crate::cube::{check_dimension, Direction, SignVector, MIN_DIMENSION};
use crate::error::Result;
use crate::graph::{DoublePrimeVertex, EdgeKind, PrimeVertex, Stage, TypedGraph, VertexLabel};

fn prime_id(m: usize, v: SignVector, i: Direction) -> usize {
    v.bits() as usize * m + i.index()
}

fn prime_labels(m: usize) -> Vec<VertexLabel> {
    SignVector::all(m)
        .flat_map(|v| Direction::all(m).map(move |i| VertexLabel::Prime(PrimeVertex { v, i })))
        .collect()
}

/// Long and medium edges on the `(v, i)` vertex set.
fn ccc_edges(m: usize) -> Vec<(usize, usize, EdgeKind)> {
    let mut edges = Vec::with_capacity((3 * m) << (m - 1));
    for v in SignVector::all(m) {
        for i in Direction::all(m) {
            if !v.is_plus(i) {
                edges.push((prime_id(m, v, i), prime_id(m, v.flip(i), i), EdgeKind::Long));
            }
            edges.push((prime_id(m, v, i), prime_id(m, v, i.succ(m)), EdgeKind::Medium));
        }
    }
    edges
}

/// Vertex truncation: `m 2^m` vertices `(v, i)`, long edges across the cube,
/// medium edges along the Hamilton polygon and extra edges for the remaining
/// diagonals of each cluster `T(v)`.
pub fn build_cg_prime(m: usize, strategy: &ClusterStrategy) -> Result<TypedGraph> {
    check_dimension(m, MIN_DIMENSION)?;
    validate_strategy(strategy, m).into_result()?;
    let mut edges = ccc_edges(m);
    for v in SignVector::all(m) {
        let t = strategy.cluster(v);
        for &(a, b) in t.inner().iter().chain(t.outer()) {
            let (a, b) = (Direction::from_index(a - 1), Direction::from_index(b - 1));
            edges.push((prime_id(m, v, a), prime_id(m, v, b), EdgeKind::Extra));
        }
    }
    TypedGraph::from_ids(Stage::Prime, m, prime_labels(m), edges)
}

/// Cube-connected cycles: the long and medium edges only. Needs no strategy.
pub fn build_ccc(m: usize) -> Result<TypedGraph> {
    check_dimension(m, 3)?;
    TypedGraph::from_ids(Stage::Ccc, m, prime_labels(m), ccc_edges(m))
}

/// Dense ids for `(v, i, j)`: clusters of `6m - 12` vertices, cycles in
/// direction order, ports sorted by `j` inside a cycle.
pub(crate) struct PortIndex {
    m: usize,
    /// `cycle_base[v * m + i - 1]`, one past the end at index `2^m * m`.
    cycle_base: Vec<usize>,
    /// Sorted ports of cycle `c`.
    ports: Vec<Vec<usize>>,
}

impl PortIndex {
    pub(crate) fn new(m: usize, strategy: &ClusterStrategy) -> Self {
        let cycles = m << m;
        let mut cycle_base = Vec::with_capacity(cycles + 1);
        let mut ports = Vec::with_capacity(cycles);
        let mut next = 0;
        for v in SignVector::all(m) {
            let t = strategy.cluster(v);
            for i in Direction::all(m) {
                cycle_base.push(next);
                let mut p = t.rotation(i).to_vec();
                p.sort_unstable();
                next += p.len();
                ports.push(p);
            }
        }
        cycle_base.push(next);
        Self { m, cycle_base, ports }
    }

    pub(crate) fn len(&self) -> usize {
        self.cycle_base[self.cycle_base.len() - 1]
    }

    pub(crate) fn id(&self, v: SignVector, i: Direction, j: usize) -> usize {
        let c = prime_id(self.m, v, i);
        let offset = self.ports[c].binary_search(&j).expect("port is a cluster neighbor");
        self.cycle_base[c] + offset
    }

    pub(crate) fn labels(&self) -> Vec<VertexLabel> {
        let mut out = Vec::with_capacity(self.len());
        for v in SignVector::all(self.m) {
            for i in Direction::all(self.m) {
                for &j in &self.ports[prime_id(self.m, v, i)] {
                    let j = Direction::from_index(j - 1);
                    out.push(VertexLabel::DoublePrime(DoublePrimeVertex { v, i, j }));
                }
            }
        }
        out
    }
}

/// Edge truncation: each `(v, i)` becomes a short cycle whose ports `(v, i, j)`
/// follow the rotation of `T(v)` around `i`; cluster edges `{i, j}` become
/// `{(v,i,j), (v,j,i)}` and long edges join equal ports across the cube edge.
pub fn build_cg_doubleprime(m: usize, strategy: &ClusterStrategy) -> Result<TypedGraph> {
    check_dimension(m, MIN_DIMENSION)?;
    validate_strategy(strategy, m).into_result()?;
    let ports = PortIndex::new(m, strategy);
    let n = ports.len();
    let mut edges = Vec::with_capacity(2 * n);
    for v in SignVector::all(m) {
        let t = strategy.cluster(v);
        for i in Direction::all(m) {
            let ring = t.rotation(i);
            for (x, &j) in ring.iter().enumerate() {
                let here = ports.id(v, i, j);
                let next = ports.id(v, i, ring[(x + 1) % ring.len()]);
                edges.push((here, next, EdgeKind::Short));
                if i.get() < j {
                    let jd = Direction::from_index(j - 1);
                    let kind = if jd == i.succ(m) || i == jd.succ(m) {
                        EdgeKind::Medium
                    } else {
                        EdgeKind::Extra
                    };
                    edges.push((here, ports.id(v, jd, i.get()), kind));
                }
                if !v.is_plus(i) {
                    edges.push((here, ports.id(v.flip(i), i, j), EdgeKind::Long));
                }
            }
        }
    }
    TypedGraph::from_ids(Stage::DoublePrime, m, ports.labels(), edges)
}

/// One prism facet: the `k` parallel long edges of cube edge `{lower, upper}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrismClass {
    pub direction: usize,
    /// Endpoint with coordinate `direction` equal to `-`.
    pub lower: String,
    pub upper: String,
    pub k: usize,
    pub edges: Vec<usize>,
    /// Short-cycle lengths at the two ends.
    pub end_cycles: (usize, usize),
}

/// Parallel classes of long edges, ordered by `(lower bits, direction)`.
pub fn prism_classes(g: &TypedGraph) -> Result<Vec<PrismClass>> {
    g.expect_stage(Stage::DoublePrime)?;
    let m = g.dimension();
    let mut classes: Vec<Option<PrismClass>> = vec![None; m << m];
    let mut cycle_len = vec![0usize; m << m];
    for label in g.labels() {
        let VertexLabel::DoublePrime(p) = label else { unreachable!() };
        cycle_len[prime_id(m, p.v, p.i)] += 1;
    }
    for (id, e) in g.edges().iter().enumerate() {
        let Some(dir) = e.direction else { continue };
        let (a, b) = (g.label(e.u).sign_vector(), g.label(e.v).sign_vector());
        let (lower, upper) = if a.is_plus(dir) { (b, a) } else { (a, b) };
        let slot = &mut classes[prime_id(m, lower, dir)];
        let class = slot.get_or_insert_with(|| PrismClass {
            direction: dir.get(),
            lower: lower.to_string(),
            upper: upper.to_string(),
            k: 0,
            edges: Vec::new(),
            end_cycles: (cycle_len[prime_id(m, lower, dir)], cycle_len[prime_id(m, upper, dir)]),
        });
        class.k += 1;
        class.edges.push(id);
    }
    Ok(classes.into_iter().flatten().collect())
}
