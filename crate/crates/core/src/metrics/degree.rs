//! Degree distributions and degree-correlation profiles.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::graph::{DirectedGraph, Side};

/// Sparse histogram: value -> number of occurrences.
pub type Histogram = BTreeMap<u64, u64>;

pub fn degree_histogram(g: &DirectedGraph, side: Side) -> Histogram {
    let mut h = Histogram::new();
    for v in 0..g.node_count() {
        *h.entry(degree(g, side, v) as u64).or_insert(0) += 1;
    }
    h
}

#[inline]
fn degree(g: &DirectedGraph, side: Side, v: usize) -> usize {
    match side {
        Side::In => g.in_degree(v),
        Side::Out => g.out_degree(v),
    }
}

/// Exact accumulator for a mean of integers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalMean {
    pub sum: u64,
    pub count: u64,
}

impl RationalMean {
    pub fn mean(&self) -> f64 {
        self.sum as f64 / self.count as f64
    }

    /// Exact equality of the two means, by cross-multiplication.
    pub fn same_value(&self, other: &RationalMean) -> bool {
        self.sum as u128 * other.count as u128 == other.sum as u128 * self.count as u128
    }
}

/// For every degree `d` on `node_side`, the mean `neighbor_side` degree of
/// the neighbors reached along `node_side` edges (out-neighbors when
/// `node_side` is out). Nodes without such edges contribute nothing.
pub fn avg_neighbor_degree(
    g: &DirectedGraph,
    node_side: Side,
    neighbor_side: Side,
) -> BTreeMap<u32, RationalMean> {
    let mut acc: BTreeMap<u32, RationalMean> = BTreeMap::new();
    for v in 0..g.node_count() {
        let nbrs = match node_side {
            Side::Out => g.out_neighbors(v),
            Side::In => g.in_neighbors(v),
        };
        if nbrs.is_empty() {
            continue;
        }
        let e = acc.entry(nbrs.len() as u32).or_default();
        for &w in nbrs {
            e.sum += degree(g, neighbor_side, w) as u64;
            e.count += 1;
        }
    }
    acc
}

/// Profiles for all four side combinations, keyed like "out-in".
pub fn neighbor_degree_profiles(g: &DirectedGraph) -> BTreeMap<String, BTreeMap<u32, RationalMean>> {
    let mut out = BTreeMap::new();
    for a in [Side::In, Side::Out] {
        for b in [Side::In, Side::Out] {
            out.insert(format!("{a}-{b}"), avg_neighbor_degree(g, a, b));
        }
    }
    out
}

/// One cell of the edge-level degree correlation: edges `u -> v` with
/// `d_out(u) = out_degree` and `d_in(v) = in_degree`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CorrelationCell {
    pub out_degree: u32,
    pub in_degree: u32,
    pub edges: u64,
}

pub fn degree_correlation(g: &DirectedGraph) -> Vec<CorrelationCell> {
    let mut acc: BTreeMap<(u32, u32), u64> = BTreeMap::new();
    for &(u, v) in g.edges() {
        *acc.entry((g.out_degree(u) as u32, g.in_degree(v) as u32))
            .or_insert(0) += 1;
    }
    acc.into_iter()
        .map(|((out_degree, in_degree), edges)| CorrelationCell {
            out_degree,
            in_degree,
            edges,
        })
        .collect()
}
