//! Edge expansion, Sinclair's canonical-path bound, and vertex separators.

mod minor;
mod report;
mod spectral;

pub use minor::{contract_to_cube, contract_to_prime};
pub use report::{full_report, ExpansionReport, ReportMode, SeparatorSummary};
pub use spectral::{cheeger_lower, SpectralOptions, SpectralResult};

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::cluster::ClusterStrategy;
use crate::cube::Direction;
use crate::error::{Error, Result};
use crate::graph::{GraphView, Stage, TypedGraph};
use crate::routing::PhiTable;

/// Exact rational used for bounds.
pub type Rational = Ratio<u128>;

/// Largest vertex count accepted by [`expansion_bruteforce`].
pub const BRUTEFORCE_MAX_VERTICES: usize = 24;

/// Edges with exactly one endpoint in `s`.
pub fn edge_boundary<G: GraphView + ?Sized>(g: &G, s: &[usize]) -> Vec<usize> {
    let mut member = vec![false; g.vertex_count()];
    for &v in s {
        member[v] = true;
    }
    (0..g.edge_count())
        .filter(|&e| {
            let (u, v) = g.endpoints(e);
            member[u] != member[v]
        })
        .collect()
}

/// Exact edge expansion by enumerating every nonempty `S` with
/// `|S| <= |V|/2`. Ties resolve to the smallest bitmask.
pub fn expansion_bruteforce<G: GraphView + ?Sized + Sync>(g: &G) -> Result<(Rational, Vec<usize>)> {
    let n = g.vertex_count();
    if n > BRUTEFORCE_MAX_VERTICES {
        return Err(Error::BudgetExceeded(format!(
            "brute-force expansion on {n} vertices (limit {BRUTEFORCE_MAX_VERTICES})"
        )));
    }
    if n < 2 {
        return Err(Error::Precondition("expansion needs at least two vertices".into()));
    }
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |acc, &(w, _)| acc | 1 << w))
        .collect();
    let half = n / 2;
    let full: u64 = 1 << n;
    let block = (full / 256).max(1);
    // (boundary, size, mask); compare boundary/size by cross multiplication
    type Candidate = Option<(u64, u64, u64)>;
    let better = |a: Candidate, b: Candidate| -> Candidate {
        match (a, b) {
            (Some(x), Some(y)) => {
                let (lhs, rhs) = (x.0 * y.1, y.0 * x.1);
                if lhs < rhs || (lhs == rhs && x.2 < y.2) {
                    a
                } else {
                    b
                }
            }
            _ => a.or(b),
        }
    };
    let best = (0..full.div_ceil(block))
        .into_par_iter()
        .map(|chunk| {
            let mut best = None;
            for mask in (chunk * block).max(1)..((chunk + 1) * block).min(full) {
                let size = mask.count_ones() as usize;
                if size > half {
                    continue;
                }
                let mask32 = mask as u32;
                let mut boundary = 0;
                let mut rest = mask32;
                while rest != 0 {
                    let v = rest.trailing_zeros() as usize;
                    boundary += (adj[v] & !mask32).count_ones() as u64;
                    rest &= rest - 1;
                }
                best = better(Some((boundary, size as u64, mask)), best);
            }
            best
        })
        .reduce(|| None, better);
    let (boundary, size, mask) = best.expect("n >= 2 gives a nonempty candidate");
    let witness = (0..n).filter(|v| mask >> v & 1 == 1).collect();
    Ok((Rational::new(boundary as u128, size as u128), witness))
}

/// Lower bound on edge expansion from canonical-path congestion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SinclairBound {
    pub value: Rational,
    /// Set when the congestion came from a sampled table.
    pub estimate: bool,
}

/// `n / (2 φ_max)`. For sampled tables `φ_max` is the scaled estimate and the
/// result is flagged.
pub fn sinclair_bound(phi: &PhiTable) -> Result<SinclairBound> {
    let max = phi.max();
    if phi.counts.is_empty() || max == 0 {
        return Err(Error::EmptyTable);
    }
    let n = phi.n as u128;
    let value = match phi.mode {
        crate::routing::PhiMode::Exact => Rational::new(n, 2 * max as u128),
        // n / (2 * max * n² / N) = N / (2 * max * n)
        crate::routing::PhiMode::Sampled { samples, .. } => {
            Rational::new(samples as u128, 2 * max as u128 * n)
        }
    };
    Ok(SinclairBound { value, estimate: !phi.is_exact() })
}

/// `n / (2 φ_max)` for a given maximum load.
pub fn sinclair_from_max(n: u64, phi_max: u64) -> Result<Rational> {
    if phi_max == 0 {
        return Err(Error::EmptyTable);
    }
    Ok(Rational::new(n as u128, 2 * phi_max as u128))
}

/// `(c / d) X n`: every separator of a `d`-regular graph with expansion `X`
/// and balance constant `c` has at least this many vertices.
pub fn separator_lower_bound(expansion: Rational, n: u64, c: Rational, d: u64) -> Result<Rational> {
    check_balance_constant(c)?;
    if d == 0 {
        return Err(Error::Precondition("regularity must be positive".into()));
    }
    Ok(c / Rational::from_integer(d as u128) * expansion * Rational::from_integer(n as u128))
}

pub(crate) fn check_balance_constant(c: Rational) -> Result<()> {
    if c <= Rational::from_integer(0) || c >= Rational::new(1, 2) {
        return Err(Error::Precondition(format!("balance constant {c} not in (0, 1/2)")));
    }
    Ok(())
}

/// `1 / (12 (m - 2))`.
pub fn stated_expansion_target(m: usize) -> Rational {
    Rational::new(1, 12 * (m as u128 - 2))
}

/// `1 / (24 (m - 2))`, what `φ_max <= 2n²/2^m` yields through Sinclair's bound.
pub fn safe_expansion_target(m: usize) -> Rational {
    Rational::new(1, 24 * (m as u128 - 2))
}

/// Partition `(A, B, C)` of the vertex set; `C` separates `A` from `B`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparatorCertificate {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub c: Vec<usize>,
    #[serde(serialize_with = "crate::io::serialize_ratio")]
    pub balance: Rational,
}

impl SeparatorCertificate {
    pub fn size(&self) -> usize {
        self.c.len()
    }
}

/// Verifies non-adjacency of `A` and `B` and `c n <= |A| <= |B| <= (1-c) n`.
/// Errors only if the sets do not partition the vertex set.
pub fn verify_separator<G: GraphView + ?Sized>(g: &G, cert: &SeparatorCertificate) -> Result<bool> {
    let n = g.vertex_count();
    let mut part = vec![u8::MAX; n];
    for (tag, set) in [(0u8, &cert.a), (1, &cert.b), (2, &cert.c)] {
        for &v in set {
            if v >= n {
                return Err(Error::NotAPartition(format!("vertex {v} out of range")));
            }
            if part[v] != u8::MAX {
                return Err(Error::NotAPartition(format!("vertex {v} appears twice")));
            }
            part[v] = tag;
        }
    }
    if let Some(v) = part.iter().position(|&p| p == u8::MAX) {
        return Err(Error::NotAPartition(format!("vertex {v} is uncovered")));
    }
    if check_balance_constant(cert.balance).is_err() {
        return Ok(false);
    }
    let separated = (0..g.edge_count()).all(|e| {
        let (u, v) = g.endpoints(e);
        part[u].min(part[v]) != 0 || part[u].max(part[v]) != 1
    });
    Ok(separated && balanced(n, cert.a.len(), cert.b.len(), cert.balance))
}

fn balanced(n: usize, a: usize, b: usize, c: Rational) -> bool {
    let n = Rational::from_integer(n as u128);
    let (a, b) = (Rational::from_integer(a as u128), Rational::from_integer(b as u128));
    c * n <= a && a <= b && b <= (Rational::from_integer(1) - c) * n
}

/// Removes one end of every direction-`i` long edge: `C` is the set of
/// endpoints with coordinate `i` equal to `side`, `A` the other vertices on
/// that side, `B` the whole opposite side. Long edges are the only edges
/// between the two cube halves, so `C` separates them.
pub fn direction_separator(
    g: &TypedGraph,
    i: Direction,
    plus_side: bool,
    balance: Rational,
) -> Result<SeparatorCertificate> {
    g.expect_stage(Stage::DoublePrime)?;
    check_balance_constant(balance)?;
    let m = g.dimension();
    if i.get() > m {
        return Err(Error::DirectionOutOfRange { value: i.get(), m });
    }
    let n = g.vertex_count();
    let mut in_c = vec![false; n];
    for e in g.edges() {
        if e.direction == Some(i) {
            for v in [e.u, e.v] {
                if g.label(v).sign_vector().is_plus(i) == plus_side {
                    in_c[v] = true;
                }
            }
        }
    }
    let (mut a, mut b, mut c) = (Vec::new(), Vec::new(), Vec::new());
    for (v, &cut) in in_c.iter().enumerate() {
        if cut {
            c.push(v);
        } else if g.label(v).sign_vector().is_plus(i) == plus_side {
            a.push(v);
        } else {
            b.push(v);
        }
    }
    let cert = SeparatorCertificate { a, b, c, balance };
    if !verify_separator(g, &cert)? {
        return Err(Error::Balance { a: cert.a.len(), b: cert.b.len(), c: cert.c.len(), n });
    }
    Ok(cert)
}

/// Direction with the smallest cluster degree (first on ties) across all clusters.
pub fn min_degree_direction(strategy: &ClusterStrategy) -> Direction {
    let m = strategy.dimension();
    Direction::all(m)
        .min_by_key(|&i| strategy.clusters().iter().map(|c| c.degree(i)).max().unwrap_or(0))
        .expect("m >= 4")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::build_cg_doubleprime;
    use crate::graph::SimpleGraph;

    fn third() -> Rational {
        Rational::new(1, 3)
    }

    #[test]
    fn boundary_examples() {
        let c6 = SimpleGraph::cycle(6);
        assert_eq!(edge_boundary(&c6, &[0, 1, 2]).len(), 2);
        assert!(edge_boundary(&c6, &[0, 1, 2, 3, 4, 5]).is_empty());

        let s = ClusterStrategy::double_fan(4).unwrap();
        let g = build_cg_doubleprime(4, &s).unwrap();
        assert_eq!(edge_boundary(&g, &[17]).len(), 4);
    }

    /// Oracle independent of the bitmask enumeration: recursive subsets with
    /// explicit boundary counting through `edge_boundary`.
    fn expansion_oracle(g: &SimpleGraph) -> Rational {
        fn rec(g: &SimpleGraph, next: usize, s: &mut Vec<usize>, best: &mut Option<Rational>) {
            let n = g.vertex_count();
            if !s.is_empty() && s.len() <= n / 2 {
                let r = Rational::new(edge_boundary(g, s).len() as u128, s.len() as u128);
                if best.is_none_or(|b| r < b) {
                    *best = Some(r);
                }
            }
            for v in next..n {
                s.push(v);
                rec(g, v + 1, s, best);
                s.pop();
            }
        }
        let mut best = None;
        rec(g, 0, &mut Vec::new(), &mut best);
        best.unwrap()
    }

    #[test]
    fn bruteforce_examples() {
        let (x, w) = expansion_bruteforce(&SimpleGraph::complete(4)).unwrap();
        assert_eq!(x, Rational::from_integer(2));
        assert_eq!(Rational::new(edge_boundary(&SimpleGraph::complete(4), &w).len() as u128, w.len() as u128), x);

        let (x, w) = expansion_bruteforce(&SimpleGraph::cycle(8)).unwrap();
        assert_eq!(x, Rational::new(1, 2));
        assert_eq!(w.len(), 4);

        let (x, _) = expansion_bruteforce(&SimpleGraph::complete(2)).unwrap();
        assert_eq!(x, Rational::from_integer(1));

        for g in [SimpleGraph::cycle(7), SimpleGraph::complete(5), SimpleGraph::from_edges(6, vec![(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)])] {
            assert_eq!(expansion_bruteforce(&g).unwrap().0, expansion_oracle(&g));
        }
        assert!(expansion_bruteforce(&SimpleGraph::cycle(25)).is_err());
    }

    #[test]
    fn sinclair_arithmetic() {
        assert_eq!(sinclair_from_max(576, 20736).unwrap(), Rational::new(1, 72));
        assert_eq!(Rational::new(1, 72), safe_expansion_target(5));
        assert_eq!(sinclair_from_max(1000, 500).unwrap(), Rational::from_integer(1));
        assert!(sinclair_from_max(576, 20737).unwrap() < sinclair_from_max(576, 20736).unwrap());
        assert!(sinclair_from_max(10, 0).is_err());
    }

    #[test]
    fn separator_bound_arithmetic() {
        let v = separator_lower_bound(Rational::new(1, 72), 576, third(), 4).unwrap();
        assert_eq!(v, Rational::new(2, 3));
        assert_eq!(separator_lower_bound(Rational::from_integer(0), 576, third(), 4).unwrap(), Rational::from_integer(0));
        assert!(separator_lower_bound(Rational::new(1, 72), 576, Rational::new(1, 2), 4).is_err());
    }

    #[test]
    fn direction_separator_m5() {
        let s = ClusterStrategy::double_fan(5).unwrap();
        let g = build_cg_doubleprime(5, &s).unwrap();
        let i = Direction::new(2, 5).unwrap();
        let cert = direction_separator(&g, i, false, third()).unwrap();
        assert_eq!((cert.c.len(), cert.a.len(), cert.b.len()), (48, 240, 288));
        assert!(verify_separator(&g, &cert).unwrap());
        assert_eq!(min_degree_direction(&s), i);
    }

    #[test]
    fn direction_separator_m4_and_mutations() {
        let s = ClusterStrategy::double_fan(4).unwrap();
        let g = build_cg_doubleprime(4, &s).unwrap();
        let cert = direction_separator(&g, Direction::new(1, 4).unwrap(), false, third()).unwrap();
        assert_eq!(cert.size(), 24);

        // moving a C vertex into A exposes its long edge into B
        let mut moved = cert.clone();
        let v = moved.c.pop().unwrap();
        moved.a.push(v);
        assert!(!verify_separator(&g, &moved).unwrap());

        let mut empty_a = cert.clone();
        empty_a.c.append(&mut empty_a.a);
        assert!(!verify_separator(&g, &empty_a).unwrap());

        let mut overlap = cert.clone();
        overlap.a.push(cert.b[0]);
        assert!(verify_separator(&g, &overlap).is_err());
    }

    #[test]
    fn removing_separator_disconnects_halves() {
        let s = ClusterStrategy::double_fan(5).unwrap();
        let g = build_cg_doubleprime(5, &s).unwrap();
        for i in Direction::all(5) {
            for side in [false, true] {
                let cert = direction_separator(&g, i, side, third()).unwrap();
                let mut in_c = vec![false; g.vertex_count()];
                cert.c.iter().for_each(|&v| in_c[v] = true);
                for e in g.edges() {
                    if in_c[e.u] || in_c[e.v] {
                        continue;
                    }
                    let (a, b) = (g.label(e.u).sign_vector(), g.label(e.v).sign_vector());
                    assert_eq!(a.is_plus(i), b.is_plus(i));
                }
            }
        }
    }
}
