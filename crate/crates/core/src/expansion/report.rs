use std::collections::BTreeMap;

use serde::Serialize;

use super::{
    cheeger_lower, direction_separator, min_degree_direction, safe_expansion_target,
    separator_lower_bound, sinclair_bound, stated_expansion_target, Rational, SpectralOptions,
};
use crate::builders::build_cg_doubleprime;
use crate::cluster::ClusterStrategy;
use crate::error::{Error, Result};
use crate::graph::{EdgeKind, GraphView};
use crate::io::serialize_ratio;
use crate::routing::{phi_exact, phi_sampled, Router};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportMode {
    Exact { max_m: usize },
    Sampled { samples: u64, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Load {
    Count(u64),
    Estimate(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparatorSummary {
    pub direction: usize,
    pub size: usize,
    /// `[|A|, |B|]`.
    pub balance: [usize; 2],
}

/// Everything one run establishes about the edge-truncated graph for one `m`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpansionReport {
    pub m: usize,
    pub n: usize,
    pub strategy: String,
    pub mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    pub estimate: bool,
    pub phi_max: BTreeMap<EdgeKind, Load>,
    #[serde(serialize_with = "serialize_ratio")]
    pub sinclair_lower: Rational,
    /// `1/(12(m-2))`.
    #[serde(serialize_with = "serialize_ratio")]
    pub stated_target: Rational,
    /// `1/(24(m-2))`.
    #[serde(serialize_with = "serialize_ratio")]
    pub safe_target: Rational,
    pub cheeger_lower: Option<f64>,
    pub lambda2: Option<f64>,
    pub separator: SeparatorSummary,
    #[serde(serialize_with = "serialize_ratio")]
    pub balance_constant: Rational,
    #[serde(serialize_with = "serialize_ratio")]
    pub separator_lower_bound: Rational,
}

impl ExpansionReport {
    pub fn meets_safe_target(&self) -> bool {
        self.sinclair_lower >= self.safe_target
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Builds the edge-truncated graph, counts path loads, and assembles the
/// Sinclair, Cheeger and separator figures. `spectral = None` skips the
/// eigenvalue computation.
pub fn full_report(
    m: usize,
    strategy: &ClusterStrategy,
    mode: ReportMode,
    balance: Rational,
    spectral: Option<SpectralOptions>,
) -> Result<ExpansionReport> {
    let g = build_cg_doubleprime(m, strategy)?;
    let router = Router::new(&g, strategy)?;
    let phi = match mode {
        ReportMode::Exact { max_m } => phi_exact(&router, max_m)?,
        ReportMode::Sampled { samples, seed } => phi_sampled(&router, samples, seed, true)?,
    };
    let n = g.vertex_count();
    let estimate = !phi.is_exact();
    let phi_max = phi
        .max_by_kind()
        .into_iter()
        .map(|(k, c)| {
            let load = if estimate { Load::Estimate(c as f64 * phi.scale()) } else { Load::Count(c) };
            (k, load)
        })
        .collect();
    let sinclair = sinclair_bound(&phi)?.value;
    let direction = min_degree_direction(strategy);
    let cert = direction_separator(&g, direction, false, balance)?;
    let regularity = g.max_degree() as u64;
    let (cheeger, lambda2) = match spectral {
        Some(opts) => match cheeger_lower(&g, opts) {
            Ok(r) => (Some(r.cheeger_lower), Some(r.lambda2)),
            Err(Error::NoConvergence(_)) => (None, None),
            Err(e) => return Err(e),
        },
        None => (None, None),
    };
    let (seed, samples) = match mode {
        ReportMode::Sampled { samples, seed } => (Some(seed), Some(samples)),
        ReportMode::Exact { .. } => (None, None),
    };
    Ok(ExpansionReport {
        m,
        n,
        strategy: strategy.name().to_string(),
        mode: if estimate { "sampled" } else { "exact" },
        seed,
        samples,
        estimate,
        phi_max,
        sinclair_lower: sinclair,
        stated_target: stated_expansion_target(m),
        safe_target: safe_expansion_target(m),
        cheeger_lower: cheeger,
        lambda2,
        separator: SeparatorSummary {
            direction: direction.get(),
            size: cert.size(),
            balance: [cert.a.len(), cert.b.len()],
        },
        balance_constant: balance,
        separator_lower_bound: separator_lower_bound(sinclair, n as u64, balance, regularity)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_report_m5() {
        let s = ClusterStrategy::double_fan(5).unwrap();
        let r = full_report(5, &s, ReportMode::Exact { max_m: 7 }, Rational::new(1, 3), None).unwrap();
        assert_eq!(r.n, 576);
        assert!(r.meets_safe_target());
        assert_eq!(r.separator.size, 48);
        assert!(r.separator_lower_bound <= Rational::from_integer(r.separator.size as u128));
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["n"], 576);
        assert_eq!(json["stated_target"], "1/36");
        assert_eq!(json["safe_target"], "1/72");
        assert_eq!(json["mode"], "exact");
        assert!(json.get("seed").is_none());
        assert_eq!(json["phi_max"]["extra"], 0);
        assert_eq!(json["separator"]["balance"][0], 240);
    }

    #[test]
    fn sampled_report_is_flagged() {
        let s = ClusterStrategy::double_fan(4).unwrap();
        let mode = ReportMode::Sampled { samples: 2000, seed: 9 };
        let r = full_report(4, &s, mode, Rational::new(1, 3), None).unwrap();
        assert!(r.estimate);
        assert_eq!(r.seed, Some(9));
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["mode"], "sampled");
        assert_eq!(json["seed"], 9);
    }
}
