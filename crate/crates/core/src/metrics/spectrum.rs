//! Largest-magnitude adjacency eigenvalues.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::DirectedGraph;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Operator {
    /// The directed adjacency matrix; its spectrum is complex in general.
    #[default]
    Directed,
    /// `A` with every edge made mutual, as a 0/1 symmetric matrix.
    Symmetrized,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    /// Magnitudes, largest first.
    pub magnitudes: Vec<f64>,
    pub operator: Operator,
    /// `None` when computed by a dense solver, else the Krylov dimension.
    pub krylov_dim: Option<usize>,
}

fn symmetric_edges(g: &DirectedGraph) -> Vec<(usize, usize)> {
    let mut e: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .flat_map(|&(u, v)| [(u, v), (v, u)])
        .collect();
    e.sort_unstable();
    e.dedup();
    e
}

fn operator_edges(g: &DirectedGraph, op: Operator) -> Vec<(usize, usize)> {
    match op {
        Operator::Directed => g.edges().to_vec(),
        Operator::Symmetrized => symmetric_edges(g),
    }
}

fn top_k(mut mags: Vec<f64>, k: usize) -> Vec<f64> {
    mags.sort_by(|a, b| b.total_cmp(a));
    mags.truncate(k);
    mags
}

fn dense(n: usize, edges: &[(usize, usize)], op: Operator, k: usize) -> Vec<f64> {
    let mut a = DMatrix::<f64>::zeros(n, n);
    for &(u, v) in edges {
        a[(u, v)] = 1.0;
    }
    let mags = match op {
        Operator::Symmetrized => a.symmetric_eigenvalues().iter().map(|x| x.abs()).collect(),
        Operator::Directed => a.complex_eigenvalues().iter().map(|z| z.norm()).collect(),
    };
    top_k(mags, k)
}

/// Arnoldi with full reorthogonalization from a seeded start vector; the
/// Ritz values of the Hessenberg projection estimate the outer spectrum.
fn krylov(n: usize, edges: &[(usize, usize)], k: usize, dim: usize, seed: u64) -> Vec<f64> {
    let matvec = |x: &[f64], y: &mut [f64]| {
        y.fill(0.0);
        for &(u, v) in edges {
            y[u] += x[v];
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    let mut start: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let norm = start.iter().map(|x| x * x).sum::<f64>().sqrt();
    start.iter_mut().for_each(|x| *x /= norm);
    q.push(start);

    let mut h = DMatrix::<f64>::zeros(dim, dim);
    let mut m = dim;
    let mut w = vec![0.0; n];
    for j in 0..dim {
        matvec(&q[j], &mut w);
        for _ in 0..2 {
            for (i, qi) in q.iter().enumerate() {
                let c: f64 = qi.iter().zip(&w).map(|(a, b)| a * b).sum();
                h[(i, j)] += c;
                w.iter_mut().zip(qi).for_each(|(x, y)| *x -= c * y);
            }
        }
        let beta = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if j + 1 == dim {
            break;
        }
        if beta < 1e-12 {
            // invariant subspace found; its eigenvalues are exact
            m = j + 1;
            break;
        }
        h[(j + 1, j)] = beta;
        q.push(w.iter().map(|x| x / beta).collect());
    }
    let h = h.view((0, 0), (m, m)).into_owned();
    top_k(h.complex_eigenvalues().iter().map(|z| z.norm()).collect(), k)
}

/// The `k` largest eigenvalue magnitudes. Graphs up to `dense_limit` nodes
/// use a dense solver; larger ones a Krylov estimate of dimension
/// `max(4k, 80)`.
pub fn top_eigenvalues(g: &DirectedGraph, k: usize, op: Operator, dense_limit: usize, seed: u64) -> Spectrum {
    let n = g.node_count();
    let edges = operator_edges(g, op);
    if n <= dense_limit {
        return Spectrum {
            magnitudes: dense(n, &edges, op, k),
            operator: op,
            krylov_dim: None,
        };
    }
    let dim = (4 * k).max(80).min(n);
    Spectrum {
        magnitudes: krylov(n, &edges, k, dim, seed),
        operator: op,
        krylov_dim: Some(dim),
    }
}
