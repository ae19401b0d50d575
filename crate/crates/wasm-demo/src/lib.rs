//! Browser bindings. Each exported function returns a JSON string; the
//! `*_json` functions hold the logic so they can be tested natively.

use ncc_core::expansion::{full_report, Rational, ReportMode, SpectralOptions};
use ncc_core::graph::{EdgeKind, VertexLabel};
use ncc_core::routing::Router;
use ncc_core::{build_cg_doubleprime, ClusterStrategy, Direction};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest dimension the page accepts.
pub const DEMO_MAX_M: usize = 10;
/// Largest dimension counted exactly; above this the bounds are sampled.
pub const DEMO_EXACT_MAX_M: usize = 6;
const DEMO_SPECTRAL_MAX_M: usize = 7;

fn check_m(m: usize) -> Result<(), String> {
    if (4..=DEMO_MAX_M).contains(&m) {
        Ok(())
    } else {
        Err(format!("m must be between 4 and {DEMO_MAX_M}"))
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("demo output serializes")
}

#[derive(Serialize)]
struct ClusterView {
    m: usize,
    inner: Vec<(usize, usize)>,
    outer: Vec<(usize, usize)>,
    rotation: Vec<Vec<usize>>,
    degree: Vec<usize>,
    faces: usize,
}

pub fn cluster_json(m: usize) -> Result<String, String> {
    check_m(m)?;
    let s = ClusterStrategy::double_fan(m).map_err(|e| e.to_string())?;
    let c = &s.clusters()[0];
    let dirs: Vec<Direction> = Direction::all(m).collect();
    Ok(to_json(&ClusterView {
        m,
        inner: c.inner().iter().copied().collect(),
        outer: c.outer().iter().copied().collect(),
        rotation: dirs.iter().map(|&i| c.rotation(i).to_vec()).collect(),
        degree: dirs.iter().map(|&i| c.degree(i)).collect(),
        faces: c.faces().map_err(|e| e.to_string())?.len(),
    }))
}

#[derive(Serialize)]
struct RouteView {
    vertices: Vec<String>,
    kinds: Vec<EdgeKind>,
    long: usize,
    medium: usize,
    short: usize,
    long_directions: Vec<usize>,
}

pub fn route_json(m: usize, from: &str, to: &str) -> Result<String, String> {
    check_m(m)?;
    let s = ClusterStrategy::double_fan(m).map_err(|e| e.to_string())?;
    let g = build_cg_doubleprime(m, &s).map_err(|e| e.to_string())?;
    let router = Router::new(&g, &s).map_err(|e| e.to_string())?;
    let parse = |x: &str| x.trim().parse::<VertexLabel>().map_err(|e| e.to_string());
    let trace = router.canonical_path(&parse(from)?, &parse(to)?).map_err(|e| e.to_string())?;
    Ok(to_json(&RouteView {
        vertices: trace.vertices.iter().map(|&v| VertexLabel::DoublePrime(v).to_string()).collect(),
        long: trace.count(EdgeKind::Long),
        medium: trace.count(EdgeKind::Medium),
        short: trace.count(EdgeKind::Short),
        long_directions: trace.long_directions().iter().map(|d| d.get()).collect(),
        kinds: trace.kinds,
    }))
}

/// Exact counts up to [`DEMO_EXACT_MAX_M`], `samples` seeded pairs above.
pub fn bounds_json(m: usize, samples: u32, seed: u32) -> Result<String, String> {
    check_m(m)?;
    let s = ClusterStrategy::double_fan(m).map_err(|e| e.to_string())?;
    let mode = if m <= DEMO_EXACT_MAX_M {
        ReportMode::Exact { max_m: DEMO_EXACT_MAX_M }
    } else {
        if samples == 0 {
            return Err("sample count must be positive".into());
        }
        ReportMode::Sampled { samples: samples.into(), seed: seed.into() }
    };
    let spectral = (m <= DEMO_SPECTRAL_MAX_M).then(SpectralOptions::default);
    let r = full_report(m, &s, mode, Rational::new(1, 3), spectral).map_err(|e| e.to_string())?;
    Ok(r.to_json())
}

#[wasm_bindgen]
pub fn cluster(m: usize) -> Result<String, JsError> {
    cluster_json(m).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn route(m: usize, from: &str, to: &str) -> Result<String, JsError> {
    route_json(m, from, to).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn bounds(m: usize, samples: u32, seed: u32) -> Result<String, JsError> {
    bounds_json(m, samples, seed).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> serde_json::Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn cluster_view_is_a_triangulation() {
        for m in 4..=DEMO_MAX_M {
            let v = parse(&cluster_json(m).unwrap());
            let diagonals = v["inner"].as_array().unwrap().len() + v["outer"].as_array().unwrap().len();
            assert_eq!(diagonals, 2 * m - 6);
            // m polygon edges and 2m-6 diagonals on a sphere: 2m-4 triangles
            assert_eq!(v["faces"], 2 * m - 4);
            let degrees: usize = v["degree"].as_array().unwrap().iter().map(|d| d.as_u64().unwrap() as usize).sum();
            assert_eq!(degrees, 2 * (3 * m - 6));
        }
        assert!(cluster_json(3).is_err());
        assert!(cluster_json(DEMO_MAX_M + 1).is_err());
    }

    #[test]
    fn route_view_matches_hand_trace() {
        let v = parse(&route_json(4, "b0000:d1:p2", "b1000:d1:p2").unwrap());
        assert_eq!(v["vertices"].as_array().unwrap().len(), 10);
        assert_eq!(v["long"], 1);
        assert_eq!(v["medium"], 4);
        assert_eq!(v["short"], 4);
        assert_eq!(v["long_directions"], serde_json::json!([1]));
        assert!(route_json(4, "b0000:d1:p9", "b0000:d1:p2").is_err());
        assert!(route_json(4, "garbage", "b0000:d1:p2").is_err());
    }

    #[test]
    fn bounds_switch_to_sampling() {
        let exact = parse(&bounds_json(5, 0, 0).unwrap());
        assert_eq!(exact["mode"], "exact");
        assert_eq!(exact["n"], 576);
        assert!(exact["lambda2"].as_f64().unwrap() > 0.0);
        let sampled = parse(&bounds_json(8, 500, 3).unwrap());
        assert_eq!(sampled["mode"], "sampled");
        assert_eq!(sampled["seed"], 3);
        assert!(sampled["lambda2"].is_null());
        assert!(bounds_json(8, 0, 3).is_err());
    }
}
