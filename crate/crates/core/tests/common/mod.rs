//! Random graphs, exhaustive enumeration and brute-force metric oracles.
#![allow(dead_code)]

use std::collections::{BTreeMap, VecDeque};

use d2k_core::DirectedGraph;
use rand::Rng;

pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> DirectedGraph {
    let mut e = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(p) {
                e.push((u, v));
            }
        }
    }
    DirectedGraph::from_dense_edges(n, e).unwrap()
}

/// Every simple digraph on `n` labeled nodes.
pub fn all_digraphs(n: usize) -> impl Iterator<Item = DirectedGraph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
        .collect();
    let k = pairs.len();
    (0u64..1 << k).map(move |mask| {
        let e = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p);
        DirectedGraph::from_dense_edges(n, e).unwrap()
    })
}

pub fn assert_simple(g: &DirectedGraph) {
    let mut seen = std::collections::HashSet::new();
    for &(u, v) in g.edges() {
        assert_ne!(u, v, "self-loop {u}");
        assert!(seen.insert((u, v)), "parallel edge {u}->{v}");
    }
}

/// Classifies a triple by dyad counts and orientation rules.
pub fn triad_class(g: &DirectedGraph, t: [usize; 3]) -> &'static str {
    let e = |a: usize, b: usize| g.has_edge(t[a], t[b]);
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let (mut m, mut a) = (0, 0);
    for &(x, y) in &pairs {
        match (e(x, y), e(y, x)) {
            (true, true) => m += 1,
            (false, false) => {}
            _ => a += 1,
        }
    }
    let outd = |x: usize| (0..3).filter(|&y| y != x && e(x, y)).count();
    let ind = |x: usize| (0..3).filter(|&y| y != x && e(y, x)).count();
    let third = || {
        pairs
            .iter()
            .find(|&&(x, y)| e(x, y) && e(y, x))
            .map(|&(x, y)| 3 - x - y)
            .unwrap()
    };
    match (m, a) {
        (0, 0) => "003",
        (0, 1) => "012",
        (1, 0) => "102",
        (0, 2) if (0..3).any(|x| outd(x) == 2) => "021D",
        (0, 2) if (0..3).any(|x| ind(x) == 2) => "021U",
        (0, 2) => "021C",
        (1, 1) if ind(third()) == 0 => "111D",
        (1, 1) => "111U",
        (0, 3) if (0..3).all(|x| outd(x) == 1) => "030C",
        (0, 3) => "030T",
        (2, 0) => "201",
        (1, 2) => match (outd(third()), ind(third())) {
            (2, 0) => "120D",
            (0, 2) => "120U",
            _ => "120C",
        },
        (2, 1) => "210",
        (3, 0) => "300",
        _ => unreachable!(),
    }
}

pub fn brute_triads(g: &DirectedGraph) -> BTreeMap<String, u64> {
    let n = g.node_count();
    let mut m = BTreeMap::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                *m.entry(triad_class(g, [a, b, c]).to_string()).or_insert(0) += 1;
            }
        }
    }
    m
}

pub enum Shared {
    TwoPath,
    Outgoing,
    Incoming,
}

pub fn brute_dsp(g: &DirectedGraph, kind: Shared) -> BTreeMap<u64, u64> {
    let n = g.node_count();
    let mut h = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let k = (0..n)
                .filter(|&w| w != i && w != j)
                .filter(|&w| match kind {
                    Shared::TwoPath => g.has_edge(i, w) && g.has_edge(w, j),
                    Shared::Outgoing => g.has_edge(i, w) && g.has_edge(j, w),
                    Shared::Incoming => g.has_edge(w, i) && g.has_edge(w, j),
                })
                .count() as u64;
            *h.entry(k).or_insert(0) += 1;
        }
    }
    h
}

/// All-pairs directed distances by repeated relaxation.
pub fn distances(g: &DirectedGraph) -> Vec<Vec<Option<u32>>> {
    let n = g.node_count();
    let mut d = vec![vec![None; n]; n];
    for v in 0..n {
        d[v][v] = Some(0);
    }
    for &(u, v) in g.edges() {
        d[u][v] = Some(1);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                    if d[i][j].map_or(true, |c| a + b < c) {
                        d[i][j] = Some(a + b);
                    }
                }
            }
        }
    }
    d
}

/// `(node, |H2| / |H1|)` from the distance matrix, following edges forward
/// (`out`) or backward.
pub fn brute_expansion(g: &DirectedGraph, out: bool) -> Vec<(usize, f64)> {
    let d = distances(g);
    let n = g.node_count();
    let dist = |a: usize, b: usize| if out { d[a][b] } else { d[b][a] };
    (0..n)
        .filter_map(|v| {
            let h1 = (0..n).filter(|&w| dist(v, w) == Some(1)).count();
            let h2 = (0..n).filter(|&w| dist(v, w) == Some(2)).count();
            (h1 > 0).then(|| (v, h2 as f64 / h1 as f64))
        })
        .collect()
}

fn path_counts(g: &DirectedGraph, s: usize) -> (Vec<Option<u32>>, Vec<f64>) {
    let n = g.node_count();
    let mut dist = vec![None; n];
    let mut sigma = vec![0.0; n];
    dist[s] = Some(0);
    sigma[s] = 1.0;
    let mut q = VecDeque::from([s]);
    let mut order = Vec::new();
    while let Some(v) = q.pop_front() {
        order.push(v);
        for &w in g.out_neighbors(v) {
            if dist[w].is_none() {
                dist[w] = Some(dist[v].unwrap() + 1);
                q.push_back(w);
            }
        }
    }
    for &v in &order {
        if v == s {
            continue;
        }
        sigma[v] = g
            .in_neighbors(v)
            .iter()
            .filter(|&&u| dist[u].is_some() && dist[u].unwrap() + 1 == dist[v].unwrap())
            .map(|&u| sigma[u])
            .sum();
    }
    (dist, sigma)
}

/// `sum_{s != v != t} sigma_st(v) / sigma_st`, normalized by `(n-1)(n-2)`,
/// with `sigma_st(v) = sigma_sv * sigma_vt` when `v` is on a shortest path.
pub fn brute_betweenness(g: &DirectedGraph) -> Vec<f64> {
    let n = g.node_count();
    let counts: Vec<_> = (0..n).map(|s| path_counts(g, s)).collect();
    let mut b = vec![0.0; n];
    for s in 0..n {
        for t in 0..n {
            let Some(dst) = counts[s].0[t] else { continue };
            if s == t {
                continue;
            }
            for v in 0..n {
                if v == s || v == t {
                    continue;
                }
                if let (Some(a), Some(c)) = (counts[s].0[v], counts[v].0[t]) {
                    if a + c == dst {
                        b[v] += counts[s].1[v] * counts[v].1[t] / counts[s].1[t];
                    }
                }
            }
        }
    }
    if n > 2 {
        let k = ((n - 1) * (n - 2)) as f64;
        b.iter_mut().for_each(|x| *x /= k);
    } else {
        b.iter_mut().for_each(|x| *x = 0.0);
    }
    b
}

/// Core numbers by repeatedly deleting all nodes of degree < k.
pub fn brute_cores(g: &DirectedGraph) -> Vec<u32> {
    let n = g.node_count();
    let adj: Vec<Vec<bool>> = (0..n)
        .map(|u| (0..n).map(|v| g.has_edge(u, v) || g.has_edge(v, u)).collect())
        .collect();
    let mut core = vec![0u32; n];
    for k in 1..=n as u32 {
        let mut alive: Vec<bool> = vec![true; n];
        loop {
            let drop: Vec<usize> = (0..n)
                .filter(|&v| alive[v])
                .filter(|&v| ((0..n).filter(|&w| alive[w] && adj[v][w]).count() as u32) < k)
                .collect();
            if drop.is_empty() {
                break;
            }
            for v in drop {
                alive[v] = false;
            }
        }
        for v in 0..n {
            if alive[v] {
                core[v] = k;
            }
        }
    }
    core
}

/// SCC sizes from mutual reachability.
pub fn brute_scc_sizes(g: &DirectedGraph) -> BTreeMap<u64, u64> {
    let d = distances(g);
    let n = g.node_count();
    let mut done = vec![false; n];
    let mut h = BTreeMap::new();
    for v in 0..n {
        if done[v] {
            continue;
        }
        let members: Vec<usize> = (0..n)
            .filter(|&w| d[v][w].is_some() && d[w][v].is_some())
            .collect();
        for &w in &members {
            done[w] = true;
        }
        *h.entry(members.len() as u64).or_insert(0) += 1;
    }
    h
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * a.abs().max(b.abs())
}
