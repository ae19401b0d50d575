//! Text formats: edge lists, DOT, strategy files and φ tables.
//!
//! All formats are ASCII, newline-terminated and space separated (CSV for φ).

use std::fmt::Write as _;

use serde::Serializer;

use crate::cluster::{Chord, ClusterGraph, ClusterStrategy};
use crate::cube::SignVector;
use crate::error::{Error, Result};
use crate::expansion::Rational;
use crate::graph::{EdgeKind, Stage, TypedGraph, VertexLabel};
use crate::routing::PhiTable;

pub fn serialize_ratio<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Parses `p/q`, an integer, or a decimal such as `0.25`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("bad rational `{s}`"));
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: u128 = p.trim().parse().map_err(|_| bad())?;
        let q: u128 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    let (whole, frac) = s.split_once('.').unwrap_or((s, ""));
    if frac.len() > 18 || (whole.is_empty() && frac.is_empty()) {
        return Err(bad());
    }
    let whole: u128 = if whole.is_empty() { 0 } else { whole.parse().map_err(|_| bad())? };
    let frac_num: u128 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
    let den = 10u128.pow(frac.len() as u32);
    Ok(Rational::new(whole * den + frac_num, den))
}

/// `<kind> <label_u> <label_v>` per edge, in edge-id order.
pub fn write_edge_list(g: &TypedGraph) -> String {
    let mut out = String::new();
    for e in g.edges() {
        writeln!(out, "{} {} {}", e.kind, g.label(e.u), g.label(e.v)).unwrap();
    }
    out
}

/// Inverse of [`write_edge_list`]. The stage is inferred from the labels:
/// sign vectors only → cube, `:p` ports → double-prime, otherwise prime if
/// any extra edge is present and cube-connected cycles if not.
pub fn parse_edge_list(text: &str) -> Result<TypedGraph> {
    let mut edges = Vec::new();
    let mut labels = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [kind, u, v] = fields[..] else {
            return Err(Error::Parse(format!("line {}: expected 3 fields", lineno + 1)));
        };
        let kind: EdgeKind = kind.parse()?;
        let (u, v): (VertexLabel, VertexLabel) = (u.parse()?, v.parse()?);
        labels.extend([u, v]);
        edges.push((u, v, kind));
    }
    let first = labels.first().ok_or_else(|| Error::Parse("empty edge list".into()))?;
    let m = first.sign_vector().dimension();
    let stage = match first {
        VertexLabel::Cube(_) => Stage::Cube,
        VertexLabel::DoublePrime(_) => Stage::DoublePrime,
        VertexLabel::Prime(_) if edges.iter().any(|e| e.2 == EdgeKind::Extra) => Stage::Prime,
        VertexLabel::Prime(_) => Stage::Ccc,
    };
    if labels.iter().any(|l| std::mem::discriminant(l) != std::mem::discriminant(first) || l.sign_vector().dimension() != m) {
        return Err(Error::Parse("mixed label kinds or dimensions".into()));
    }
    TypedGraph::from_labels(stage, m, labels, edges)
}

pub fn write_dot(g: &TypedGraph) -> String {
    let mut out = String::new();
    writeln!(out, "graph \"{}_m{}\" {{", g.stage(), g.dimension()).unwrap();
    for (id, l) in g.labels().iter().enumerate() {
        writeln!(out, "  {id} [label=\"{l}\"];").unwrap();
    }
    for e in g.edges() {
        match e.direction {
            Some(d) => writeln!(out, "  {} -- {} [kind={}, direction={}];", e.u, e.v, e.kind, d),
            None => writeln!(out, "  {} -- {} [kind={}];", e.u, e.v, e.kind),
        }
        .unwrap();
    }
    out.push_str("}\n");
    out
}

#[derive(serde::Serialize)]
struct JsonEdge {
    u: usize,
    v: usize,
    kind: EdgeKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    direction: Option<usize>,
}

#[derive(serde::Serialize)]
struct JsonGraph {
    stage: String,
    m: usize,
    vertices: Vec<String>,
    edges: Vec<JsonEdge>,
}

/// Vertex labels in id order and edges as id pairs.
pub fn write_json(g: &TypedGraph) -> String {
    let doc = JsonGraph {
        stage: g.stage().to_string(),
        m: g.dimension(),
        vertices: g.labels().iter().map(|l| l.to_string()).collect(),
        edges: g
            .edges()
            .iter()
            .map(|e| JsonEdge { u: e.u, v: e.v, kind: e.kind, direction: e.direction.map(|d| d.get()) })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("graph serializes");
    out.push('\n');
    out
}

fn chords_text(set: &std::collections::BTreeSet<Chord>) -> String {
    set.iter().map(|(a, b)| format!("{a}-{b}")).collect::<Vec<_>>().join(",")
}

fn cluster_line(key: &str, c: &ClusterGraph) -> String {
    format!("cluster {key} inner={} outer={}\n", chords_text(c.inner()), chords_text(c.outer()))
}

/// `m=<m>` header, then either one `cluster *` line or one line per vertex.
pub fn write_strategy(s: &ClusterStrategy) -> String {
    let mut out = format!("m={}\n", s.dimension());
    if s.is_uniform() {
        out.push_str(&cluster_line("*", &s.clusters()[0]));
    } else {
        for v in SignVector::all(s.dimension()) {
            out.push_str(&cluster_line(&v.to_string(), s.cluster(v)));
        }
    }
    out
}

fn parse_chords(field: &str, prefix: &str) -> Result<Vec<Chord>> {
    let body = field
        .strip_prefix(prefix)
        .ok_or_else(|| Error::Parse(format!("expected `{prefix}...`, found `{field}`")))?;
    body.split(',')
        .filter(|p| !p.is_empty())
        .map(|pair| {
            let (a, b) = pair.split_once('-').ok_or_else(|| Error::Parse(format!("bad chord `{pair}`")))?;
            let num = |x: &str| x.parse::<usize>().map_err(|_| Error::Parse(format!("bad chord `{pair}`")));
            Ok((num(a)?, num(b)?))
        })
        .collect()
}

/// Parses a strategy file. Lines starting with `#` are comments. The result
/// is not validated; run [`crate::cluster::validate_strategy`].
pub fn parse_strategy(text: &str, name: &str) -> Result<ClusterStrategy> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Parse("empty strategy file".into()))?;
    let m: usize = header
        .strip_prefix("m=")
        .and_then(|x| x.trim().parse().ok())
        .ok_or_else(|| Error::Parse(format!("expected `m=<int>` header, found `{header}`")))?;
    crate::cube::check_dimension(m, crate::cube::MIN_DIMENSION)?;

    let mut uniform = None;
    let mut clusters: Vec<ClusterGraph> = Vec::new();
    let mut index = vec![u32::MAX; 1 << m];
    for line in lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let ["cluster", key, inner, outer] = fields[..] else {
            return Err(Error::Parse(format!("bad strategy line `{line}`")));
        };
        let c = ClusterGraph::from_diagonals(m, parse_chords(inner, "inner=")?, parse_chords(outer, "outer=")?)?;
        if key == "*" {
            if uniform.is_some() || !clusters.is_empty() {
                return Err(Error::Parse("`cluster *` must be the only cluster line".into()));
            }
            uniform = Some(c);
            continue;
        }
        if uniform.is_some() {
            return Err(Error::Parse("`cluster *` must be the only cluster line".into()));
        }
        let v: SignVector = key.parse()?;
        if v.dimension() != m {
            return Err(Error::Parse(format!("vertex `{key}` has wrong dimension")));
        }
        if index[v.bits() as usize] != u32::MAX {
            return Err(Error::Parse(format!("vertex `{key}` listed twice")));
        }
        let slot = match clusters.iter().position(|x| *x == c) {
            Some(p) => p,
            None => {
                clusters.push(c);
                clusters.len() - 1
            }
        };
        index[v.bits() as usize] = slot as u32;
    }
    if let Some(c) = uniform {
        return Ok(ClusterStrategy::uniform(c, name));
    }
    if let Some(missing) = index.iter().position(|&x| x == u32::MAX) {
        return Err(Error::Parse(format!(
            "strategy does not cover vertex {}",
            SignVector::new(missing as u32, m)?
        )));
    }
    ClusterStrategy::per_vertex(name, m, clusters, index)
}

/// `edge_id,kind,label_u,label_v,count` with a header row. Counts are raw;
/// sampled tables are scaled by `n²/samples` in the summary.
pub fn write_phi_csv(g: &TypedGraph, phi: &PhiTable) -> String {
    let mut out = String::from("edge_id,kind,label_u,label_v,count\n");
    for (id, e) in g.edges().iter().enumerate() {
        writeln!(out, "{id},{},{},{},{}", e.kind, g.label(e.u), g.label(e.v), phi.counts[id]).unwrap();
    }
    out
}
