//! Dyad-wise shared partners and neighborhood expansion.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::{DirectedGraph, Side};

use super::degree::Histogram;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DspVariant {
    /// `i -> w -> j`
    IndependentTwoPaths,
    /// `i -> w` and `j -> w`
    Outgoing,
    /// `w -> i` and `w -> j`
    Incoming,
}

impl DspVariant {
    pub const ALL: [DspVariant; 3] = [
        DspVariant::IndependentTwoPaths,
        DspVariant::Outgoing,
        DspVariant::Incoming,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DspVariant::IndependentTwoPaths => "two_path",
            DspVariant::Outgoing => "outgoing",
            DspVariant::Incoming => "incoming",
        }
    }
}

/// Histogram over ordered pairs `i != j` of their shared-partner count.
/// Bin 0 holds the pairs with no shared partner.
pub fn dsp(g: &DirectedGraph, variant: DspVariant) -> Histogram {
    let n = g.node_count();
    let (first, second): (fn(&DirectedGraph, usize) -> &[usize], fn(&DirectedGraph, usize) -> &[usize]) =
        match variant {
            DspVariant::IndependentTwoPaths => (DirectedGraph::out_neighbors, DirectedGraph::out_neighbors),
            DspVariant::Outgoing => (DirectedGraph::out_neighbors, DirectedGraph::in_neighbors),
            DspVariant::Incoming => (DirectedGraph::in_neighbors, DirectedGraph::out_neighbors),
        };
    let counts: Vec<u64> = (0..n)
        .into_par_iter()
        .fold(
            || (vec![0u32; n], Vec::new(), Vec::<u64>::new()),
            |(mut shared, mut touched, mut hist), i| {
                for &w in first(g, i) {
                    for &j in second(g, w) {
                        if j != i {
                            if shared[j] == 0 {
                                touched.push(j);
                            }
                            shared[j] += 1;
                        }
                    }
                }
                for &j in &touched {
                    let k = shared[j] as usize;
                    if hist.len() <= k {
                        hist.resize(k + 1, 0);
                    }
                    hist[k] += 1;
                    shared[j] = 0;
                }
                touched.clear();
                (shared, touched, hist)
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

    let mut h = Histogram::new();
    let nonzero: u64 = counts.iter().sum();
    let ordered = (n as u64) * (n as u64).saturating_sub(1);
    h.insert(0, ordered - nonzero);
    for (k, &c) in counts.iter().enumerate().skip(1) {
        if c > 0 {
            h.insert(k as u64, c);
        }
    }
    h
}

pub fn without_zero_bin(h: &Histogram) -> Histogram {
    h.iter().filter(|(&k, _)| k > 0).map(|(&k, &c)| (k, c)).collect()
}

/// `|H2| / |H1|` per node with nonempty first hop, where `H1` are the
/// neighbors along `direction` and `H2` the nodes at exact distance two
/// (neither `v` nor in `H1`). Returned as `(node, ratio)` in node order.
pub fn expansion(g: &DirectedGraph, direction: Side) -> Vec<(usize, f64)> {
    let step = match direction {
        Side::Out => DirectedGraph::out_neighbors,
        Side::In => DirectedGraph::in_neighbors,
    };
    let n = g.node_count();
    (0..n)
        .into_par_iter()
        .map_init(
            || vec![usize::MAX; n],
            |mark, v| {
                let h1 = step(g, v);
                if h1.is_empty() {
                    return None;
                }
                // stamp with v so the scratch needs no reset
                mark[v] = v;
                for &w in h1 {
                    mark[w] = v;
                }
                let mut h2 = 0usize;
                for &w in h1 {
                    for &x in step(g, w) {
                        if mark[x] != v {
                            mark[x] = v;
                            h2 += 1;
                        }
                    }
                }
                Some((v, h2 as f64 / h1.len() as f64))
            },
        )
        .flatten()
        .collect()
}
