//! Canonical paths on the edge-truncated graph and per-edge path counting.
//!
//! A path from `s` in cycle `(v, i)` to `t` in cycle `(w, j)` sweeps the
//! coordinates `i, i+1, ..., i-1`. For coordinate `k` it takes the long edge
//! at the current vertex if the current cluster differs from `w` in `k`, then
//! walks short edges to the port `succ(k)` and crosses the medium edge into
//! cycle `succ(k)`. After the sweep the path sits in cycle `(w, i)`; it then
//! walks medium edges to `(w, j)` and finishes along the short cycle.
//!
//! Short walks take the shorter arc; ties go in rotation order.

use std::collections::BTreeMap;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::builders::prism_classes;
use crate::cluster::ClusterStrategy;
use crate::cube::Direction;
use crate::error::{Error, Result};
use crate::graph::{DoublePrimeVertex, EdgeKind, GraphView, Stage, TypedGraph, VertexLabel};

/// Exact counting refuses dimensions above this unless overridden.
pub const DEFAULT_EXACT_MAX_M: usize = 7;

/// Precomputed lookups for walking the edge-truncated graph.
pub struct Router<'g> {
    graph: &'g TypedGraph,
    m: usize,
    bits: Vec<u32>,
    dir: Vec<u8>,
    ring_pos: Vec<u32>,
    long_nbr: Vec<u32>,
    long_edge: Vec<u32>,
    me_nbr: Vec<u32>,
    me_edge: Vec<u32>,
    /// Per cycle `v * m + i - 1`.
    ring_start: Vec<u32>,
    ring_len: Vec<u32>,
    medium_port: Vec<u32>,
    /// Vertex ids in rotation order, cycles concatenated.
    ring: Vec<u32>,
    /// `ring_edge[start + p]` joins ring positions `p` and `p + 1`.
    ring_edge: Vec<u32>,
}

/// One edge traversal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Step {
    pub from: usize,
    pub to: usize,
    pub edge: usize,
    pub kind: EdgeKind,
}

impl<'g> Router<'g> {
    /// Fails if `graph` is not the edge-truncated graph of `strategy`.
    pub fn new(graph: &'g TypedGraph, strategy: &ClusterStrategy) -> Result<Self> {
        graph.expect_stage(Stage::DoublePrime)?;
        let m = graph.dimension();
        if strategy.dimension() != m {
            return Err(Error::InvalidStrategy(format!(
                "strategy for m={} used with graph for m={m}",
                strategy.dimension()
            )));
        }
        let n = graph.vertex_count();
        let mismatch = |what: String| Error::InvalidStrategy(format!("graph/strategy mismatch: {what}"));

        let mut bits = vec![0; n];
        let mut dir = vec![0; n];
        let mut long_nbr = vec![u32::MAX; n];
        let mut long_edge = vec![u32::MAX; n];
        let mut me_nbr = vec![u32::MAX; n];
        let mut me_edge = vec![u32::MAX; n];
        for (id, label) in graph.labels().iter().enumerate() {
            let VertexLabel::DoublePrime(p) = label else { unreachable!() };
            bits[id] = p.v.bits();
            dir[id] = p.i.get() as u8;
            for &(w, e) in graph.neighbors(id) {
                match graph.edge(e).kind {
                    EdgeKind::Long => (long_nbr[id], long_edge[id]) = (w as u32, e as u32),
                    EdgeKind::Medium | EdgeKind::Extra => (me_nbr[id], me_edge[id]) = (w as u32, e as u32),
                    EdgeKind::Short => {}
                }
            }
            if long_nbr[id] == u32::MAX || me_nbr[id] == u32::MAX {
                return Err(mismatch(format!("{label} lacks a long or cluster edge")));
            }
        }

        let cycles = m << m;
        let mut ring_start = Vec::with_capacity(cycles);
        let mut ring_len = Vec::with_capacity(cycles);
        let mut medium_port = Vec::with_capacity(cycles);
        let mut ring = Vec::with_capacity(n);
        let mut ring_edge = Vec::with_capacity(n);
        let mut ring_pos = vec![u32::MAX; n];
        for v in crate::cube::SignVector::all(m) {
            let t = strategy.cluster(v);
            for i in Direction::all(m) {
                let start = ring.len();
                ring_start.push(start as u32);
                let order = t.rotation(i);
                ring_len.push(order.len() as u32);
                let ids = order
                    .iter()
                    .map(|&j| {
                        let j = Direction::new(j, m)?;
                        let label = VertexLabel::DoublePrime(DoublePrimeVertex { v, i, j });
                        graph.id_of(&label).ok_or_else(|| mismatch(format!("missing {label}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                for (p, &id) in ids.iter().enumerate() {
                    let next = ids[(p + 1) % ids.len()];
                    let e = graph
                        .edge_between(id, next)
                        .filter(|&e| graph.edge(e).kind == EdgeKind::Short)
                        .ok_or_else(|| mismatch(format!("no short edge after {}", graph.label(id))))?;
                    ring_pos[id] = p as u32;
                    ring.push(id as u32);
                    ring_edge.push(e as u32);
                }
                let port = order.iter().position(|&j| j == i.succ(m).get()).ok_or_else(|| {
                    mismatch(format!("cycle ({v},{i}) lacks the medium port"))
                })?;
                medium_port.push(ids[port] as u32);
            }
        }
        Ok(Self {
            graph,
            m,
            bits,
            dir,
            ring_pos,
            long_nbr,
            long_edge,
            me_nbr,
            me_edge,
            ring_start,
            ring_len,
            medium_port,
            ring,
            ring_edge,
        })
    }

    pub fn graph(&self) -> &TypedGraph {
        self.graph
    }

    pub fn dimension(&self) -> usize {
        self.m
    }

    fn cycle(&self, x: usize) -> usize {
        self.bits[x] as usize * self.m + self.dir[x] as usize - 1
    }

    fn short_walk(&self, from: usize, to: usize, emit: &mut impl FnMut(Step)) {
        let c = self.cycle(from);
        let start = self.ring_start[c] as usize;
        let len = self.ring_len[c] as usize;
        let (mut p, q) = (self.ring_pos[from] as usize, self.ring_pos[to] as usize);
        let forward = (q + len - p) % len;
        if forward == 0 {
            return;
        }
        if 2 * forward <= len {
            for _ in 0..forward {
                let next = (p + 1) % len;
                emit(self.step(start + p, start + next, self.ring_edge[start + p]));
                p = next;
            }
        } else {
            for _ in 0..len - forward {
                let prev = (p + len - 1) % len;
                emit(self.step(start + p, start + prev, self.ring_edge[start + prev]));
                p = prev;
            }
        }
    }

    fn step(&self, from_slot: usize, to_slot: usize, edge: u32) -> Step {
        Step {
            from: self.ring[from_slot] as usize,
            to: self.ring[to_slot] as usize,
            edge: edge as usize,
            kind: EdgeKind::Short,
        }
    }

    /// Short walk to the medium port of the current cycle, then the medium edge.
    fn advance(&self, cur: usize, emit: &mut impl FnMut(Step)) -> usize {
        let port = self.medium_port[self.cycle(cur)] as usize;
        self.short_walk(cur, port, emit);
        let next = self.me_nbr[port] as usize;
        emit(Step { from: port, to: next, edge: self.me_edge[port] as usize, kind: EdgeKind::Medium });
        next
    }

    /// Emits the canonical path from `s` to `t` step by step.
    pub fn walk(&self, s: usize, t: usize, mut emit: impl FnMut(Step)) {
        if s == t {
            return;
        }
        let m = self.m;
        let target = self.bits[t];
        let mut k = self.dir[s] as usize;
        let mut cur = s;
        for _ in 0..m {
            if (self.bits[cur] ^ target) >> (k - 1) & 1 == 1 {
                let next = self.long_nbr[cur] as usize;
                emit(Step { from: cur, to: next, edge: self.long_edge[cur] as usize, kind: EdgeKind::Long });
                cur = next;
            }
            cur = self.advance(cur, &mut emit);
            k = k % m + 1;
        }
        while k != self.dir[t] as usize {
            cur = self.advance(cur, &mut emit);
            k = k % m + 1;
        }
        self.short_walk(cur, t, &mut emit);
    }

    fn path_length(&self, s: usize, t: usize) -> usize {
        let mut len = 0;
        self.walk(s, t, |_| len += 1);
        len
    }

    /// The canonical path as a trace of labels and kinds.
    pub fn canonical_path(&self, s: &VertexLabel, t: &VertexLabel) -> Result<PathTrace> {
        let lookup = |l: &VertexLabel| {
            self.graph.id_of(l).ok_or_else(|| Error::UnknownLabel(l.to_string()))
        };
        let (s, t) = (lookup(s)?, lookup(t)?);
        Ok(self.trace(s, t))
    }

    pub fn trace(&self, s: usize, t: usize) -> PathTrace {
        let label = |id: usize| match self.graph.label(id) {
            VertexLabel::DoublePrime(p) => *p,
            _ => unreachable!(),
        };
        let mut trace = PathTrace { vertices: vec![label(s)], kinds: Vec::new(), edges: Vec::new() };
        self.walk(s, t, |step| {
            trace.vertices.push(label(step.to));
            trace.kinds.push(step.kind);
            trace.edges.push(step.edge);
        });
        trace
    }

    fn count_sources(&self, sources: std::ops::Range<usize>) -> (Vec<u64>, u64) {
        let n = self.graph.vertex_count();
        let mut counts = vec![0u64; self.graph.edge_count()];
        let mut steps = 0u64;
        for s in sources {
            for t in 0..n {
                self.walk(s, t, |step| {
                    counts[step.edge] += 1;
                    steps += 1;
                });
            }
        }
        (counts, steps)
    }

    fn count_pairs(&self, pairs: &[(u32, u32)]) -> (Vec<u64>, u64) {
        let mut counts = vec![0u64; self.graph.edge_count()];
        let mut steps = 0u64;
        for &(s, t) in pairs {
            self.walk(s as usize, t as usize, |step| {
                counts[step.edge] += 1;
                steps += 1;
            });
        }
        (counts, steps)
    }
}

fn merge((mut a, sa): (Vec<u64>, u64), (b, sb): (Vec<u64>, u64)) -> (Vec<u64>, u64) {
    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
    (a, sa + sb)
}

/// A routed path: vertices, and the kind and edge id of each step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathTrace {
    pub vertices: Vec<DoublePrimeVertex>,
    pub kinds: Vec<EdgeKind>,
    pub edges: Vec<usize>,
}

impl PathTrace {
    pub fn len(&self) -> usize {
        self.kinds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kinds.is_empty()
    }

    pub fn count(&self, kind: EdgeKind) -> usize {
        self.kinds.iter().filter(|k| **k == kind).count()
    }

    /// Directions of the long steps, in path order.
    pub fn long_directions(&self) -> Vec<Direction> {
        self.kinds
            .iter()
            .enumerate()
            .filter(|(_, k)| **k == EdgeKind::Long)
            .map(|(x, _)| self.vertices[x].i)
            .collect()
    }

    /// Checks the trace against `g`: adjacency, kinds, no extra edges, at most
    /// one long step per direction in sweep order, and the length bounds.
    pub fn check(&self, g: &TypedGraph) -> std::result::Result<(), String> {
        let m = g.dimension();
        if self.vertices.len() != self.kinds.len() + 1 || self.edges.len() != self.kinds.len() {
            return Err("trace arrays have inconsistent lengths".into());
        }
        for (x, w) in self.vertices.windows(2).enumerate() {
            let id = |p: &DoublePrimeVertex| {
                g.id_of(&VertexLabel::DoublePrime(*p)).ok_or_else(|| format!("unknown vertex {p:?}"))
            };
            let (a, b) = (id(&w[0])?, id(&w[1])?);
            let e = g.edge_between(a, b).ok_or_else(|| format!("step {x} is not an edge"))?;
            if e != self.edges[x] || g.edge(e).kind != self.kinds[x] {
                return Err(format!("step {x} has the wrong edge or kind"));
            }
        }
        if self.count(EdgeKind::Extra) > 0 {
            return Err("extra edge used".into());
        }
        let longs = self.long_directions();
        if let Some(first) = self.vertices.first() {
            let start = first.i.index();
            let sweep_pos: Vec<usize> = longs.iter().map(|d| (d.index() + m - start) % m).collect();
            if sweep_pos.windows(2).any(|w| w[0] >= w[1]) {
                return Err("long directions repeat or leave sweep order".into());
            }
        }
        if self.count(EdgeKind::Medium) > 2 * m || longs.len() > m || self.len() > 2 * m * (m + 1) {
            return Err("path too long".into());
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum PhiMode {
    Exact,
    Sampled { samples: u64, seed: u64, with_replacement: bool },
}

/// Per-edge path counts.
///
/// In sampled mode `counts` are raw sample hits; the estimate of `φ(e)` is
/// `counts[e] * n² / samples`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiTable {
    pub counts: Vec<u64>,
    pub kinds: Vec<EdgeKind>,
    pub n: usize,
    pub total_pairs: u64,
    pub total_steps: u64,
    pub mode: PhiMode,
}

impl PhiTable {
    pub fn is_exact(&self) -> bool {
        self.mode == PhiMode::Exact
    }

    /// Raw max count per kind; absent kinds map to 0.
    pub fn max_by_kind(&self) -> BTreeMap<EdgeKind, u64> {
        let mut out: BTreeMap<EdgeKind, u64> = EdgeKind::ALL.iter().map(|k| (*k, 0)).collect();
        for (c, k) in self.counts.iter().zip(&self.kinds) {
            let slot = out.get_mut(k).expect("all kinds present");
            *slot = (*slot).max(*c);
        }
        out
    }

    pub fn max(&self) -> u64 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    /// Max over the given kinds.
    pub fn max_over(&self, kinds: &[EdgeKind]) -> u64 {
        self.counts
            .iter()
            .zip(&self.kinds)
            .filter(|(_, k)| kinds.contains(k))
            .map(|(c, _)| *c)
            .max()
            .unwrap_or(0)
    }

    /// `n² / samples` in sampled mode, 1 when exact.
    pub fn scale(&self) -> f64 {
        match self.mode {
            PhiMode::Exact => 1.0,
            PhiMode::Sampled { samples, .. } => (self.n as f64).powi(2) / samples as f64,
        }
    }

    pub fn estimate(&self, edge: usize) -> f64 {
        self.counts[edge] as f64 * self.scale()
    }
}

fn table(router: &Router<'_>, (counts, total_steps): (Vec<u64>, u64), total_pairs: u64, mode: PhiMode) -> PhiTable {
    let g = router.graph();
    PhiTable {
        counts,
        kinds: g.edges().iter().map(|e| e.kind).collect(),
        n: g.vertex_count(),
        total_pairs,
        total_steps,
        mode,
    }
}

/// Routes every ordered pair (including `s = t`) and counts edge usage.
///
/// Sources are split into chunks counted independently and summed, so the
/// result does not depend on the number of worker threads.
pub fn phi_exact(router: &Router<'_>, max_m: usize) -> Result<PhiTable> {
    let m = router.dimension();
    if m > max_m {
        return Err(Error::BudgetExceeded(format!(
            "exact counting at m={m} exceeds the limit m<={max_m}; use sampled mode"
        )));
    }
    let n = router.graph().vertex_count();
    let chunk = n.div_ceil(64).max(1);
    let starts: Vec<usize> = (0..n).step_by(chunk).collect();
    let merged = starts
        .into_par_iter()
        .map(|lo| router.count_sources(lo..(lo + chunk).min(n)))
        .reduce(|| (vec![0; router.graph().edge_count()], 0), merge);
    Ok(table(router, merged, (n * n) as u64, PhiMode::Exact))
}

/// Routes `samples` seeded random ordered pairs. Without replacement,
/// `samples` must not exceed `n²`; `samples = n²` reproduces [`phi_exact`].
pub fn phi_sampled(router: &Router<'_>, samples: u64, seed: u64, with_replacement: bool) -> Result<PhiTable> {
    if samples == 0 {
        return Err(Error::Precondition("sample count must be at least 1".into()));
    }
    let n = router.graph().vertex_count() as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(u32, u32)> = if with_replacement {
        (0..samples)
            .map(|_| (rng.gen_range(0..n) as u32, rng.gen_range(0..n) as u32))
            .collect()
    } else {
        if samples > n * n {
            return Err(Error::Precondition(format!(
                "{samples} samples without replacement exceed {} pairs",
                n * n
            )));
        }
        index::sample(&mut rng, (n * n) as usize, samples as usize)
            .into_iter()
            .map(|x| ((x as u64 / n) as u32, (x as u64 % n) as u32))
            .collect()
    };
    let chunk = pairs.len().div_ceil(64).max(1);
    let merged = pairs
        .par_chunks(chunk)
        .map(|c| router.count_pairs(c))
        .reduce(|| (vec![0; router.graph().edge_count()], 0), merge);
    Ok(table(router, merged, samples, PhiMode::Sampled { samples, seed, with_replacement }))
}

/// Per-kind maxima, per-direction and per-class long totals.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhiSummary {
    #[serde(flatten)]
    pub mode: PhiMode,
    pub estimate: bool,
    pub n: usize,
    pub total_pairs: u64,
    pub total_steps: u64,
    pub scale: f64,
    pub phi_max: BTreeMap<EdgeKind, u64>,
    pub long_by_direction: Vec<u64>,
    pub long_by_class: Vec<u64>,
}

pub fn summarize(g: &TypedGraph, phi: &PhiTable) -> Result<PhiSummary> {
    let classes = prism_classes(g)?;
    let mut long_by_direction = vec![0; g.dimension()];
    let long_by_class = classes
        .iter()
        .map(|c| {
            let total: u64 = c.edges.iter().map(|&e| phi.counts[e]).sum();
            long_by_direction[c.direction - 1] += total;
            total
        })
        .collect();
    Ok(PhiSummary {
        mode: phi.mode,
        estimate: !phi.is_exact(),
        n: phi.n,
        total_pairs: phi.total_pairs,
        total_steps: phi.total_steps,
        scale: phi.scale(),
        phi_max: phi.max_by_kind(),
        long_by_direction,
        long_by_class,
    })
}

/// Mean path length over all ordered pairs from one source; used by the demo.
pub fn mean_path_length_from(router: &Router<'_>, s: usize) -> f64 {
    let n = router.graph().vertex_count();
    let total: usize = (0..n).map(|t| router.path_length(s, t)).sum();
    total as f64 / n as f64
}
