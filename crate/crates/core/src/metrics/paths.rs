//! Connectivity, cores, shortest paths and betweenness.

use std::collections::VecDeque;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::DirectedGraph;

use super::degree::Histogram;

/// Component id per node, by Tarjan's algorithm (iterative).
pub fn strongly_connected_components(g: &DirectedGraph) -> Vec<usize> {
    const UNSEEN: usize = usize::MAX;
    let n = g.node_count();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack = Vec::new();
    let mut call: Vec<(usize, usize)> = Vec::new();
    let (mut next, mut ncomp) = (0usize, 0usize);

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        while let Some(&mut (v, ref mut i)) = call.last_mut() {
            if *i == 0 && index[v] == UNSEEN {
                index[v] = next;
                low[v] = next;
                next += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            let out = g.out_neighbors(v);
            if *i < out.len() {
                let w = out[*i];
                *i += 1;
                if index[w] == UNSEEN {
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    comp[w] = ncomp;
                    if w == v {
                        break;
                    }
                }
                ncomp += 1;
            }
        }
    }
    comp
}

/// Histogram of strongly connected component sizes.
pub fn scc_sizes(g: &DirectedGraph) -> Histogram {
    let comp = strongly_connected_components(g);
    let mut sizes = vec![0u64; comp.iter().max().map_or(0, |c| c + 1)];
    for c in comp {
        sizes[c] += 1;
    }
    let mut h = Histogram::new();
    for s in sizes {
        *h.entry(s).or_insert(0) += 1;
    }
    h
}

/// Core number of every node in the symmetrized simple graph, by bucket
/// peeling.
pub fn core_numbers(g: &DirectedGraph) -> Vec<u32> {
    let n = g.node_count();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            let mut s: Vec<usize> = g
                .out_neighbors(v)
                .iter()
                .chain(g.in_neighbors(v))
                .copied()
                .collect();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect();
    let mut deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    let maxd = deg.iter().copied().max().unwrap_or(0);

    // nodes sorted by degree, with bucket starts
    let mut bin = vec![0usize; maxd + 2];
    for &d in &deg {
        bin[d + 1] += 1;
    }
    for d in 1..bin.len() {
        bin[d] += bin[d - 1];
    }
    let mut pos = vec![0usize; n];
    let mut vert = vec![0usize; n];
    {
        let mut fill = bin.clone();
        for v in 0..n {
            pos[v] = fill[deg[v]];
            vert[pos[v]] = v;
            fill[deg[v]] += 1;
        }
    }
    for i in 0..n {
        let v = vert[i];
        for &u in &adj[v] {
            if deg[u] > deg[v] {
                let du = deg[u];
                let pu = pos[u];
                let pw = bin[du];
                let w = vert[pw];
                if u != w {
                    vert.swap(pu, pw);
                    pos[u] = pw;
                    pos[w] = pu;
                }
                bin[du] += 1;
                deg[u] -= 1;
            }
        }
    }
    deg.into_iter().map(|d| d as u32).collect()
}

pub fn kcore_histogram(g: &DirectedGraph) -> Histogram {
    let mut h = Histogram::new();
    for c in core_numbers(g) {
        *h.entry(c as u64).or_insert(0) += 1;
    }
    h
}

/// Sources to run from: all nodes when `n <= threshold`, else a seeded
/// sample of `samples` distinct nodes, sorted.
pub fn pick_sources(n: usize, threshold: usize, samples: usize, seed: u64) -> (Vec<usize>, bool) {
    if n <= threshold || samples >= n {
        return ((0..n).collect(), false);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = sample(&mut rng, n, samples).into_vec();
    s.sort_unstable();
    (s, true)
}

fn bfs_from(g: &DirectedGraph, s: usize, dist: &mut [u32], queue: &mut VecDeque<usize>, hist: &mut Vec<u64>) {
    const FAR: u32 = u32::MAX;
    dist.fill(FAR);
    dist[s] = 0;
    queue.clear();
    queue.push_back(s);
    while let Some(v) = queue.pop_front() {
        let d = dist[v] + 1;
        for &w in g.out_neighbors(v) {
            if dist[w] == FAR {
                dist[w] = d;
                if hist.len() <= d as usize {
                    hist.resize(d as usize + 1, 0);
                }
                hist[d as usize] += 1;
                queue.push_back(w);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathLengths {
    /// Distance -> number of (source, reachable target) pairs.
    pub histogram: Histogram,
    pub sources: usize,
    pub sampled: bool,
}

/// Histogram of finite shortest-path lengths from every (or a sample of)
/// source to every node it reaches.
pub fn shortest_path_lengths(g: &DirectedGraph, sources: &[usize], sampled: bool) -> PathLengths {
    let n = g.node_count();
    let counts = sources
        .par_iter()
        .fold(
            || (vec![0u32; n], VecDeque::new(), Vec::<u64>::new()),
            |(mut dist, mut q, mut hist), &s| {
                bfs_from(g, s, &mut dist, &mut q, &mut hist);
                (dist, q, hist)
            },
        )
        .map(|(_, _, h)| h)
        .reduce(Vec::new, |mut a, b| {
            if a.len() < b.len() {
                a.resize(b.len(), 0);
            }
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            a
        });
    PathLengths {
        histogram: counts
            .into_iter()
            .enumerate()
            .filter(|&(_, c)| c > 0)
            .map(|(d, c)| (d as u64, c))
            .collect(),
        sources: sources.len(),
        sampled,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Betweenness {
    /// Normalized by `(n-1)(n-2)`, one score per node.
    pub scores: Vec<f64>,
    pub pivots: usize,
    pub sampled: bool,
}

struct BrandesScratch {
    sigma: Vec<f64>,
    dist: Vec<i64>,
    delta: Vec<f64>,
    order: Vec<usize>,
    queue: VecDeque<usize>,
}

impl BrandesScratch {
    fn new(n: usize) -> Self {
        BrandesScratch {
            sigma: vec![0.0; n],
            dist: vec![-1; n],
            delta: vec![0.0; n],
            order: Vec::with_capacity(n),
            queue: VecDeque::new(),
        }
    }

    fn accumulate(&mut self, g: &DirectedGraph, s: usize, into: &mut [f64]) {
        self.sigma.fill(0.0);
        self.dist.fill(-1);
        self.delta.fill(0.0);
        self.order.clear();
        self.sigma[s] = 1.0;
        self.dist[s] = 0;
        self.queue.push_back(s);
        while let Some(v) = self.queue.pop_front() {
            self.order.push(v);
            for &w in g.out_neighbors(v) {
                if self.dist[w] < 0 {
                    self.dist[w] = self.dist[v] + 1;
                    self.queue.push_back(w);
                }
                if self.dist[w] == self.dist[v] + 1 {
                    self.sigma[w] += self.sigma[v];
                }
            }
        }
        for &w in self.order.iter().rev() {
            for &v in g.in_neighbors(w) {
                if self.dist[v] >= 0 && self.dist[v] + 1 == self.dist[w] {
                    self.delta[v] += self.sigma[v] / self.sigma[w] * (1.0 + self.delta[w]);
                }
            }
            if w != s {
                into[w] += self.delta[w];
            }
        }
    }
}

const PIVOT_CHUNK: usize = 16;

/// Directed betweenness by dependency accumulation over `pivots`. With a
/// strict subset of pivots the sums are scaled by `n / pivots`. Chunks are
/// summed in a fixed order so the result does not depend on thread count.
pub fn betweenness(g: &DirectedGraph, pivots: &[usize], sampled: bool) -> Betweenness {
    let n = g.node_count();
    let partials: Vec<Vec<f64>> = pivots
        .par_chunks(PIVOT_CHUNK)
        .map(|chunk| {
            let mut scratch = BrandesScratch::new(n);
            let mut acc = vec![0.0; n];
            for &s in chunk {
                scratch.accumulate(g, s, &mut acc);
            }
            acc
        })
        .collect();
    let mut scores = vec![0.0; n];
    for p in partials {
        for (x, y) in scores.iter_mut().zip(p) {
            *x += y;
        }
    }
    let mut scale = if n > 2 { 1.0 / ((n - 1) as f64 * (n - 2) as f64) } else { 0.0 };
    if !pivots.is_empty() && pivots.len() < n {
        scale *= n as f64 / pivots.len() as f64;
    }
    for x in &mut scores {
        *x *= scale;
    }
    Betweenness {
        scores,
        pivots: pivots.len(),
        sampled,
    }
}
