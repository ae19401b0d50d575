//! Cheeger lower bound `λ₂ / 2` from the combinatorial Laplacian.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{is_connected, GraphView};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        Self { tol: 1e-9, max_iter: 1_000_000, seed: 0x5eed }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectralResult {
    pub lambda2: f64,
    pub cheeger_lower: f64,
    pub iterations: usize,
}

/// Power iteration on `2Δ·I - L` restricted to the complement of the
/// constant vector. The Rayleigh quotient converges to `2Δ - λ₂`; iteration
/// stops once successive estimates differ by less than `tol`.
pub fn cheeger_lower<G: GraphView + ?Sized>(g: &G, opts: SpectralOptions) -> Result<SpectralResult> {
    let n = g.vertex_count();
    if n < 2 {
        return Err(Error::Precondition("spectral bound needs at least two vertices".into()));
    }
    if !is_connected(g) {
        return Err(Error::Disconnected);
    }
    let shift = 2.0 * g.max_degree() as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    deflate(&mut x);
    normalize(&mut x);
    let mut y = vec![0.0; n];
    let mut prev = f64::NAN;
    for iter in 1..=opts.max_iter {
        // y = (2Δ - deg) x + A x
        for v in 0..n {
            let mut acc = (shift - g.degree(v) as f64) * x[v];
            for &(w, _) in g.neighbors(v) {
                acc += x[w];
            }
            y[v] = acc;
        }
        deflate(&mut y);
        let mu: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        normalize(&mut y);
        std::mem::swap(&mut x, &mut y);
        if (mu - prev).abs() < opts.tol {
            let lambda2 = (shift - mu).max(0.0);
            return Ok(SpectralResult { lambda2, cheeger_lower: lambda2 / 2.0, iterations: iter });
        }
        prev = mu;
    }
    Err(Error::NoConvergence(opts.max_iter))
}

fn deflate(x: &mut [f64]) {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    x.iter_mut().for_each(|v| *v -= mean);
}

fn normalize(x: &mut [f64]) {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::SimpleGraph;

    #[test]
    fn cycle_spectrum() {
        for n in 4..=12 {
            let r = cheeger_lower(&SimpleGraph::cycle(n), SpectralOptions::default()).unwrap();
            let exact = 2.0 - 2.0 * (2.0 * std::f64::consts::PI / n as f64).cos();
            assert!((r.lambda2 - exact).abs() < 1e-6, "C_{n}: {} vs {exact}", r.lambda2);
        }
        let r = cheeger_lower(&SimpleGraph::cycle(8), SpectralOptions::default()).unwrap();
        assert!((r.cheeger_lower - 0.29289).abs() < 1e-4);
    }

    #[test]
    fn complete_graph() {
        let r = cheeger_lower(&SimpleGraph::complete(6), SpectralOptions::default()).unwrap();
        assert!((r.lambda2 - 6.0).abs() < 1e-9);
        assert!((r.cheeger_lower - 3.0).abs() < 1e-9);
    }

    #[test]
    fn disconnected_is_an_error() {
        let g = SimpleGraph::from_edges(4, vec![(0, 1), (2, 3)]);
        assert_eq!(cheeger_lower(&g, SpectralOptions::default()), Err(Error::Disconnected));
    }

    #[test]
    fn iteration_cap() {
        let opts = SpectralOptions { tol: 0.0, max_iter: 5, ..Default::default() };
        assert_eq!(cheeger_lower(&SimpleGraph::cycle(10), opts), Err(Error::NoConvergence(5)));
    }
}
