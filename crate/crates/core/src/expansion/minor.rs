//! Minor relations: contract short edges of the edge-truncated graph to get
//! the vertex-truncated graph, then contract clusters to get the cube.

use std::collections::BTreeSet;

use crate::builders::build_cg_prime;
use crate::cluster::ClusterStrategy;
use crate::cube::build_hypercube;
use crate::error::{Error, Result};
use crate::graph::{EdgeKind, GraphView, PrimeVertex, Stage, TypedGraph, VertexLabel};

fn contract(
    g: &TypedGraph,
    stage: Stage,
    contracted: &[EdgeKind],
    map: impl Fn(&VertexLabel) -> VertexLabel,
) -> Result<TypedGraph> {
    let labels: BTreeSet<VertexLabel> = g.labels().iter().map(&map).collect();
    let mut edges = BTreeSet::new();
    for e in g.edges() {
        if contracted.contains(&e.kind) {
            continue;
        }
        let (a, b) = (map(g.label(e.u)), map(g.label(e.v)));
        if a == b {
            return Err(Error::LabelMismatch(format!("{} edge became a loop at {a}", e.kind)));
        }
        edges.insert((a.min(b), a.max(b), e.kind));
    }
    TypedGraph::from_labels(stage, g.dimension(), labels.into_iter().collect(), edges.into_iter().collect())
}

fn first_difference(a: &TypedGraph, b: &TypedGraph) -> String {
    if a.labels() != b.labels() {
        return format!("vertex sets differ ({} vs {} vertices)", a.vertex_count(), b.vertex_count());
    }
    match a.edges().iter().zip(b.edges()).position(|(x, y)| x != y) {
        Some(at) => format!(
            "edge {at}: {} {}--{} vs {} {}--{}",
            a.edge(at).kind,
            a.label(a.edge(at).u),
            a.label(a.edge(at).v),
            b.edge(at).kind,
            b.label(b.edge(at).u),
            b.label(b.edge(at).v)
        ),
        None => format!("edge counts differ ({} vs {})", a.edges().len(), b.edges().len()),
    }
}

/// Contracts every short cycle `(v, i, *)` to `(v, i)` and merges the parallel
/// long edges; the result must equal [`build_cg_prime`] for the same strategy.
pub fn contract_to_prime(g: &TypedGraph, strategy: &ClusterStrategy) -> Result<TypedGraph> {
    g.expect_stage(Stage::DoublePrime)?;
    let contracted = contract(g, Stage::Prime, &[EdgeKind::Short], |l| match l {
        VertexLabel::DoublePrime(p) => VertexLabel::Prime(PrimeVertex { v: p.v, i: p.i }),
        other => *other,
    })?;
    let reference = build_cg_prime(g.dimension(), strategy)?;
    if contracted != reference {
        return Err(Error::LabelMismatch(first_difference(&contracted, &reference)));
    }
    Ok(contracted)
}

/// Contracts every cluster `(v, *)` to `v`; the result must equal the m-cube.
pub fn contract_to_cube(g: &TypedGraph) -> Result<TypedGraph> {
    g.expect_stage(Stage::Prime)?;
    let contracted = contract(g, Stage::Cube, &[EdgeKind::Medium, EdgeKind::Extra], |l| {
        VertexLabel::Cube(l.sign_vector())
    })?;
    let reference = build_hypercube(g.dimension())?;
    if contracted != reference {
        return Err(Error::LabelMismatch(first_difference(&contracted, &reference)));
    }
    Ok(contracted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::build_cg_doubleprime;
    use crate::cluster::ClusterGraph;

    #[test]
    fn round_trips() {
        for m in 4..=6 {
            let s = ClusterStrategy::double_fan(m).unwrap();
            let g2 = build_cg_doubleprime(m, &s).unwrap();
            let g1 = contract_to_prime(&g2, &s).unwrap();
            assert_eq!(g1, build_cg_prime(m, &s).unwrap());
            let g0 = contract_to_cube(&g1).unwrap();
            assert_eq!(g0, build_hypercube(m).unwrap());
            assert_eq!(g0.census().long_by_direction, vec![1 << (m - 1); m]);
        }
    }

    #[test]
    fn kinds_survive_contraction() {
        let s = ClusterStrategy::double_fan(5).unwrap();
        let g2 = build_cg_doubleprime(5, &s).unwrap();
        let g1 = contract_to_prime(&g2, &s).unwrap();
        let c2 = g2.census();
        let c1 = g1.census();
        assert_eq!(c1.count(EdgeKind::Medium), c2.count(EdgeKind::Medium));
        assert_eq!(c1.count(EdgeKind::Extra), c2.count(EdgeKind::Extra));
        assert_eq!(c1.count(EdgeKind::Long), 80);
        assert_eq!(g1.vertex_count(), 160);
    }

    #[test]
    fn mismatch_is_reported() {
        let s = ClusterStrategy::double_fan(5).unwrap();
        let g2 = build_cg_doubleprime(5, &s).unwrap();
        let other = ClusterStrategy::uniform(ClusterGraph::double_fan(5).unwrap().rotated(1), "rotated");
        assert!(matches!(contract_to_prime(&g2, &other), Err(Error::LabelMismatch(_))));
        assert!(contract_to_cube(&g2).is_err());
    }
}
