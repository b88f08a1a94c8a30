//! Dyad and triad census.

use std::collections::BTreeMap;

use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::graph::DirectedGraph;
use crate::targets::{extract_uman, UmanTargets};

pub const TRIAD_LABELS: [&str; 16] = [
    "003", "012", "102", "021D", "021U", "021C", "111D", "111U", "030T", "030C", "201", "120D",
    "120U", "120C", "210", "300",
];

// Triad class (index into TRIAD_LABELS) for every 6-bit link code; see
// `tricode` for the bit layout.
const TRITYPES: [u8; 64] = [
    0, 1, 1, 2, 1, 3, 5, 7, 1, 5, 4, 6, 2, 7, 6, 10, 1, 5, 3, 7, 4, 8, 8, 12, 5, 9, 8, 13, 6, 13,
    11, 14, 1, 4, 5, 6, 5, 8, 9, 13, 3, 8, 8, 11, 7, 12, 13, 14, 2, 6, 7, 10, 6, 11, 13, 14, 7, 13,
    12, 14, 10, 14, 14, 15,
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyadCensus {
    pub mutual: u64,
    pub asymmetric: u64,
    pub null: u64,
}

pub fn dyad_census(g: &DirectedGraph) -> DyadCensus {
    let UmanTargets {
        mutual,
        asymmetric,
        null,
        ..
    } = extract_uman(g);
    DyadCensus {
        mutual,
        asymmetric,
        null,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "BTreeMap<String, u64>", try_from = "BTreeMap<String, u64>")]
pub struct TriadCensus(pub [u64; 16]);

impl TriadCensus {
    pub fn get(&self, label: &str) -> Option<u64> {
        TRIAD_LABELS
            .iter()
            .position(|&l| l == label)
            .map(|i| self.0[i])
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }
}

impl From<TriadCensus> for BTreeMap<String, u64> {
    fn from(t: TriadCensus) -> Self {
        TRIAD_LABELS
            .iter()
            .zip(t.0)
            .map(|(l, c)| (l.to_string(), c))
            .collect()
    }
}

impl TryFrom<BTreeMap<String, u64>> for TriadCensus {
    type Error = String;

    fn try_from(m: BTreeMap<String, u64>) -> Result<Self, String> {
        let mut out = [0; 16];
        for (k, c) in m {
            let i = TRIAD_LABELS
                .iter()
                .position(|&l| l == k)
                .ok_or_else(|| format!("unknown triad class {k:?}"))?;
            out[i] = c;
        }
        Ok(TriadCensus(out))
    }
}

#[inline]
fn link(g: &DirectedGraph, a: usize, b: usize) -> usize {
    g.has_edge(a, b) as usize
}

fn tricode(g: &DirectedGraph, v: usize, u: usize, w: usize) -> usize {
    link(g, v, u)
        | link(g, u, v) << 1
        | link(g, v, w) << 2
        | link(g, w, v) << 3
        | link(g, u, w) << 4
        | link(g, w, u) << 5
}

fn choose3(n: u64) -> u64 {
    if n < 3 {
        0
    } else {
        n * (n - 1) / 2 * (n - 2) / 3
    }
}

/// Triad census by the subquadratic linked-triple scan: only triples with
/// at least one connected dyad are visited, and the empty class is
/// obtained by subtraction.
pub fn triad_census(g: &DirectedGraph) -> TriadCensus {
    let n = g.node_count();
    let nbrs: Vec<Vec<usize>> = (0..n)
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
    let adjacent = |a: usize, b: usize| g.has_edge(a, b) || g.has_edge(b, a);

    let mut census = [0u64; 16];
    let mut union = FxHashSet::default();
    for v in 0..n {
        for &u in nbrs[v].iter().filter(|&&u| u > v) {
            union.clear();
            union.extend(nbrs[u].iter().chain(&nbrs[v]).copied());
            union.remove(&u);
            union.remove(&v);
            let class = if g.has_edge(u, v) && g.has_edge(v, u) { 2 } else { 1 };
            census[class] += (n - union.len() - 2) as u64;
            for &w in &union {
                if u < w || (v < w && w < u && !adjacent(v, w)) {
                    census[TRITYPES[tricode(g, v, u, w)] as usize] += 1;
                }
            }
        }
    }
    let linked: u64 = census.iter().sum();
    census[0] = choose3(n as u64) - linked;
    TriadCensus(census)
}
