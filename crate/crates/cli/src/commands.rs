use ncc_core::cluster::ClusterStrategy;
use ncc_core::expansion::{
    cheeger_lower, contract_to_cube, contract_to_prime, direction_separator, full_report,
    min_degree_direction, verify_separator, Rational, ReportMode, SpectralOptions,
};
use ncc_core::graph::{is_connected, EdgeKind, GraphView, Stage, TypedGraph, VertexLabel};
use ncc_core::io::{parse_edge_list, write_dot, write_edge_list, write_json, write_phi_csv};
use ncc_core::routing::{phi_exact, phi_sampled, summarize, Router};
use ncc_core::{
    build_ccc, build_cg_doubleprime, build_cg_prime, build_hypercube, f_vector_ncc, prism_classes,
    validate_strategy, Direction,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::config::{Mode, RunConfig, StrategySource};
use crate::failure::Failure;
use crate::Format;

/// Pairs checked by `verify` when the graph is too large for all pairs.
const VERIFY_ROUTE_SAMPLES: usize = 20_000;
const VERIFY_ROUTE_SEED: u64 = 1;

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

pub fn build(stage: Stage, m: usize, source: &StrategySource) -> Result<TypedGraph, Failure> {
    Ok(match stage {
        Stage::Cube => build_hypercube(m)?,
        Stage::Ccc => build_ccc(m)?,
        Stage::Prime => build_cg_prime(m, &source.load(m)?)?,
        Stage::DoublePrime => build_cg_doubleprime(m, &source.load(m)?)?,
    })
}

pub fn generate(stage: Stage, m: usize, source: &StrategySource, format: Format) -> Result<(), Failure> {
    let g = build(stage, m, source)?;
    let text = match format {
        Format::Edges => write_edge_list(&g),
        Format::Dot => write_dot(&g),
        Format::Json => write_json(&g),
    };
    print!("{text}");
    Ok(())
}

pub fn route(m: usize, source: &StrategySource, from: &str, to: &str) -> Result<(), Failure> {
    let strategy = source.load(m)?;
    let g = build_cg_doubleprime(m, &strategy)?;
    let router = Router::new(&g, &strategy)?;
    let parse = |s: &str| s.parse::<VertexLabel>().map_err(Failure::from);
    let trace = router.canonical_path(&parse(from)?, &parse(to)?)?;
    println!("{}", VertexLabel::DoublePrime(trace.vertices[0]));
    for (kind, v) in trace.kinds.iter().zip(&trace.vertices[1..]) {
        println!("{kind} {}", VertexLabel::DoublePrime(*v));
    }
    Ok(())
}

pub fn phi(cfg: &RunConfig) -> Result<(), Failure> {
    let strategy = cfg.strategy.load(cfg.m)?;
    let g = build_cg_doubleprime(cfg.m, &strategy)?;
    let router = Router::new(&g, &strategy)?;
    let table = match cfg.mode {
        Mode::Exact => phi_exact(&router, cfg.exact_max_m)?,
        Mode::Sampled { samples, seed } => phi_sampled(&router, samples, seed, true)?,
    };
    let summary = summarize(&g, &table)?;
    let mut text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    text.push('\n');
    cfg.write_output("phi.csv", &write_phi_csv(&g, &table))?;
    cfg.write_output("phi_summary.json", &text)?;
    print!("{text}");
    Ok(())
}

pub fn separator(
    m: usize,
    source: &StrategySource,
    direction: Option<usize>,
    plus_side: bool,
    c: Rational,
) -> Result<(), Failure> {
    if c <= Rational::from_integer(0) || c >= Rational::new(1, 2) {
        return Err(Failure::usage(format!("balance constant {c} must lie in (0, 1/2)")));
    }
    let strategy = source.load(m)?;
    let g = build_cg_doubleprime(m, &strategy)?;
    let i = match direction {
        Some(d) => Direction::new(d, m)?,
        None => min_degree_direction(&strategy),
    };
    let cert = direction_separator(&g, i, plus_side, c)?;
    let labels: Vec<String> = cert.c.iter().map(|&v| g.label(v).to_string()).collect();
    let out = json!({
        "m": m,
        "n": g.vertex_count(),
        "strategy": strategy.name(),
        "direction": i.get(),
        "side": if plus_side { "+" } else { "-" },
        "balance_constant": c.to_string(),
        "size": cert.size(),
        "a": cert.a.len(),
        "b": cert.b.len(),
        "valid": verify_separator(&g, &cert)?,
        "separator": labels,
    });
    print!("{}", pretty(&out));
    Ok(())
}

type Check<'a> = (&'static str, Box<dyn FnOnce() -> Result<(), String> + 'a>);

fn expect(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn strategy_checks<'a>(m: usize, strategy: &'a ClusterStrategy, g: &'a TypedGraph) -> Vec<Check<'a>> {
    let n = g.vertex_count();
    let pow = 1usize << m;
    vec![
        ("census-prime", Box::new(move || {
            let c = build_cg_prime(m, strategy).map_err(|e| e.to_string())?.census();
            expect(
                c.vertices == m * pow
                    && c.count(EdgeKind::Long) == m * pow / 2
                    && c.count(EdgeKind::Medium) == m * pow
                    && c.count(EdgeKind::Extra) == (2 * m - 6) * pow,
                || format!("{c:?}"),
            )
        })),
        ("census-double-prime", Box::new(move || {
            let c = g.census();
            expect(c.vertices == (6 * m - 12) * pow, || format!("{} vertices", c.vertices))?;
            expect(c.edges == 2 * n, || format!("{} edges", c.edges))
        })),
        ("four-regular", Box::new(move || {
            let c = g.census();
            expect(c.degree_histogram.keys().eq([&4]), || format!("degrees {:?}", c.degree_histogram))
        })),
        ("connected", Box::new(move || expect(is_connected(g), || "graph is disconnected".into()))),
        ("prism-classes", Box::new(move || {
            let classes = prism_classes(g).map_err(|e| e.to_string())?;
            expect(classes.len() == m * pow / 2, || format!("{} classes", classes.len()))?;
            let total: usize = classes.iter().map(|c| c.k).sum();
            expect(total == n / 2, || format!("long edges {total} != n/2"))?;
            match classes.iter().find(|c| c.end_cycles != (c.k, c.k)) {
                Some(c) => Err(format!("class {}/{} joins cycles {:?}", c.lower, c.direction, c.end_cycles)),
                None => Ok(()),
            }
        })),
        ("contraction", Box::new(move || {
            let prime = contract_to_prime(g, strategy).map_err(|e| e.to_string())?;
            let cube = contract_to_cube(&prime).map_err(|e| e.to_string())?;
            expect(cube == build_hypercube(m).map_err(|e| e.to_string())?, || "cube mismatch".into())
        })),
        ("edge-list-round-trip", Box::new(move || {
            let back = parse_edge_list(&write_edge_list(g)).map_err(|e| e.to_string())?;
            expect(&back == g, || "re-parsed graph differs".into())
        })),
        ("routing-paths", Box::new(move || {
            let router = Router::new(g, strategy).map_err(|e| e.to_string())?;
            let check = |s: usize, t: usize| {
                router.trace(s, t).check(g).map_err(|e| format!("{} -> {}: {e}", g.label(s), g.label(t)))
            };
            if n * n <= VERIFY_ROUTE_SAMPLES * 20 {
                (0..n).try_for_each(|s| (0..n).try_for_each(|t| check(s, t)))
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(VERIFY_ROUTE_SEED);
                (0..VERIFY_ROUTE_SAMPLES).try_for_each(|_| check(rng.gen_range(0..n), rng.gen_range(0..n)))
            }
        })),
        ("separator", Box::new(move || {
            let i = min_degree_direction(strategy);
            let cert = direction_separator(g, i, false, Rational::new(1, 3)).map_err(|e| e.to_string())?;
            expect(verify_separator(g, &cert).map_err(|e| e.to_string())?, || "certificate rejected".into())
        })),
    ]
}

pub fn verify(m: usize, source: &StrategySource) -> Result<(), Failure> {
    let strategy = source.load(m)?;
    let mut failed = Vec::new();
    let mut report = |name: &'static str, r: Result<(), String>| match r {
        Ok(()) => println!("PASS {name}"),
        Err(e) => {
            println!("FAIL {name}: {e}");
            failed.push(name);
        }
    };

    report("f-vector", {
        let f = f_vector_ncc(m)?;
        let q = build_hypercube(m)?;
        expect(
            f.satisfies_euler()
                && f.satisfies_double_counting()
                && f.f0 == q.vertex_count() as u64
                && f.f1 == q.edge_count() as u64,
            || format!("{f:?}"),
        )
    });
    report("census-cube", {
        let q = build_hypercube(m)?;
        expect(q.vertex_count() == 1 << m && q.edge_count() == m << (m - 1), || {
            format!("{} vertices, {} edges", q.vertex_count(), q.edge_count())
        })
    });

    let sr = validate_strategy(&strategy, m);
    let strategy_ok = sr.passed();
    report("strategy-valid", {
        let mut tags: Vec<String> = sr.cluster_failures.iter().map(|f| f.violation.tag().to_string()).collect();
        tags.extend(sr.link_failures.iter().map(|f| {
            let kind = serde_json::to_value(f.kind).expect("kind serializes");
            format!("link-{}", kind.as_str().unwrap_or_default())
        }));
        tags.dedup();
        expect(strategy_ok, || tags.join(", "))
    });

    if strategy_ok {
        let g = build_cg_doubleprime(m, &strategy)?;
        for (name, check) in strategy_checks(m, &strategy, &g) {
            report(name, check());
        }
    } else {
        println!("SKIP graph checks: strategy is invalid");
    }

    match failed.first() {
        None => Ok(()),
        Some(first) => Err(Failure::invariant(first, format!("{} check(s) failed: {}", failed.len(), failed.join(", ")))),
    }
}

pub fn report(cfg: &RunConfig, spectral_tol: Option<f64>) -> Result<(), Failure> {
    let strategy = cfg.strategy.load(cfg.m)?;
    let mode = match cfg.mode {
        Mode::Exact => ReportMode::Exact { max_m: cfg.exact_max_m },
        Mode::Sampled { samples, seed } => ReportMode::Sampled { samples, seed },
    };
    let spectral = spectral_tol.map(|tol| SpectralOptions { tol, ..SpectralOptions::default() });
    let r = full_report(cfg.m, &strategy, mode, cfg.balance, spectral)?;
    let mut text = r.to_json();
    text.push('\n');
    cfg.write_output("report.json", &text)?;
    print!("{text}");
    Ok(())
}

pub fn spectral(m: usize, source: &StrategySource, tol: f64, max_iter: usize, seed: u64) -> Result<(), Failure> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Failure::usage("--tol must be positive"));
    }
    let strategy = source.load(m)?;
    let g = build_cg_doubleprime(m, &strategy)?;
    let r = cheeger_lower(&g, SpectralOptions { tol, max_iter, seed })?;
    let out = json!({
        "m": m,
        "n": g.vertex_count(),
        "strategy": strategy.name(),
        "seed": seed,
        "tol": tol,
        "lambda2": r.lambda2,
        "cheeger_lower": r.cheeger_lower,
        "iterations": r.iterations,
    });
    print!("{}", pretty(&out));
    Ok(())
}
