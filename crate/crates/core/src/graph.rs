//! Simple directed graphs and their bipartite in/out split.
//!
//! Every node `v` of a digraph corresponds to two bipartite nodes, `v_out`
//! and `v_in`. A directed edge `u -> v` is the bipartite edge
//! `(u_out, v_in)`, and a self-loop `v -> v` would be the forbidden pair
//! `(v_out, v_in)`, called a non-chord.

use std::fmt;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("node {node} out of range for graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0} -> {1}")]
    DuplicateEdge(usize, usize),
    #[error("edge {0} -> {1} does not exist")]
    MissingEdge(usize, usize),
    #[error("dyad state is undefined for identical nodes ({0}, {0})")]
    IdenticalDyad(usize),
    #[error("bipartite edge joins two {0} nodes ({1} and {2})")]
    SameSide(Side, usize, usize),
    #[error("bipartite edge ({0}_out, {0}_in) lies on a non-chord")]
    NonChordEdge(usize),
    #[error("parallel bipartite edge ({0}_out, {1}_in)")]
    ParallelBipartiteEdge(usize, usize),
}

/// Which half of the bipartite split a node or degree belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    In,
    Out,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::In => Side::Out,
            Side::Out => Side::In,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::In => f.write_str("in"),
            Side::Out => f.write_str("out"),
        }
    }
}

#[inline]
pub(crate) fn pair_key(u: usize, v: usize) -> u64 {
    ((u as u64) << 32) | v as u64
}

#[inline]
pub(crate) fn unpack_key(key: u64) -> (usize, usize) {
    ((key >> 32) as usize, (key & 0xffff_ffff) as usize)
}

/// A simple directed graph over dense node ids `0..n`.
///
/// Edges are kept in insertion order next to per-node in/out adjacency and a
/// hash index, so membership tests and random edge picks are O(1).
#[derive(Clone, Debug, Default)]
pub struct DirectedGraph {
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    index: FxHashMap<u64, usize>,
    labels: Option<Vec<u64>>,
}

/// State of an unordered node pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dyad {
    Mutual,
    Asymmetric,
    Null,
}

impl DirectedGraph {
    pub fn new(n: usize) -> Self {
        DirectedGraph {
            out_adj: vec![Vec::new(); n],
            in_adj: vec![Vec::new(); n],
            edges: Vec::new(),
            index: FxHashMap::default(),
            labels: None,
        }
    }

    /// Builds a graph from dense ids, rejecting anything that is not simple.
    pub fn from_dense_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let edges: Vec<(usize, usize)> = edges.into_iter().collect();
        let (mut outd, mut ind) = (vec![0usize; n], vec![0usize; n]);
        for &(u, v) in &edges {
            if u < n && v < n {
                outd[u] += 1;
                ind[v] += 1;
            }
        }
        let mut g = DirectedGraph {
            out_adj: outd.into_iter().map(Vec::with_capacity).collect(),
            in_adj: ind.into_iter().map(Vec::with_capacity).collect(),
            edges: Vec::with_capacity(edges.len()),
            index: FxHashMap::with_capacity_and_hasher(edges.len(), Default::default()),
            labels: None,
        };
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Ingests raw `(source, target)` pairs with arbitrary ids.
    ///
    /// Ids are remapped to `0..n` in order of first appearance, self-loops
    /// and repeated ordered pairs are dropped. Nodes that only ever appear
    /// in a self-loop are not kept. The original ids are retained as labels.
    pub fn from_edge_list(pairs: &[(u64, u64)]) -> Self {
        let mut ids: FxHashMap<u64, usize> = FxHashMap::default();
        let mut labels = Vec::new();
        let mut g = DirectedGraph::new(0);
        let mut intern = |x: u64, g: &mut DirectedGraph, labels: &mut Vec<u64>| -> usize {
            *ids.entry(x).or_insert_with(|| {
                labels.push(x);
                g.out_adj.push(Vec::new());
                g.in_adj.push(Vec::new());
                labels.len() - 1
            })
        };
        let mut dropped_loops = 0usize;
        let mut dropped_dups = 0usize;
        for &(a, b) in pairs {
            if a == b {
                dropped_loops += 1;
                continue;
            }
            let u = intern(a, &mut g, &mut labels);
            let v = intern(b, &mut g, &mut labels);
            if g.has_edge(u, v) {
                dropped_dups += 1;
                continue;
            }
            g.insert_unchecked(u, v);
        }
        if dropped_loops + dropped_dups > 0 {
            log::info!(
                "ingestion dropped {} self-loops and {} duplicate edges",
                dropped_loops,
                dropped_dups
            );
        }
        g.labels = Some(labels);
        g
    }

    pub fn node_count(&self) -> usize {
        self.out_adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out_adj[v]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.in_adj[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_adj[v].len()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_adj[v].len()
    }

    /// Per-node `(d_in, d_out)`.
    pub fn degree_pairs(&self) -> Vec<(u32, u32)> {
        (0..self.node_count())
            .map(|v| (self.in_degree(v) as u32, self.out_degree(v) as u32))
            .collect()
    }

    /// Edges in insertion order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.index.contains_key(&pair_key(u, v))
    }

    /// Original id of `v` when the graph came from ingestion, else `v` itself.
    pub fn label(&self, v: usize) -> u64 {
        match &self.labels {
            Some(l) => l[v],
            None => v as u64,
        }
    }

    pub fn labels(&self) -> Option<&[u64]> {
        self.labels.as_deref()
    }

    fn check_node(&self, v: usize) -> Result<(), GraphError> {
        if v >= self.node_count() {
            return Err(GraphError::NodeOutOfRange {
                node: v,
                n: self.node_count(),
            });
        }
        Ok(())
    }

    fn insert_unchecked(&mut self, u: usize, v: usize) {
        self.index.insert(pair_key(u, v), self.edges.len());
        self.edges.push((u, v));
        self.out_adj[u].push(v);
        self.in_adj[v].push(u);
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        self.check_node(u)?;
        self.check_node(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if self.has_edge(u, v) {
            return Err(GraphError::DuplicateEdge(u, v));
        }
        self.insert_unchecked(u, v);
        Ok(())
    }

    /// Removes `u -> v`. The last edge takes the removed edge's slot.
    pub fn remove_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        let pos = self
            .index
            .remove(&pair_key(u, v))
            .ok_or(GraphError::MissingEdge(u, v))?;
        self.edges.swap_remove(pos);
        if let Some(&(a, b)) = self.edges.get(pos) {
            self.index.insert(pair_key(a, b), pos);
        }
        remove_value(&mut self.out_adj[u], v);
        remove_value(&mut self.in_adj[v], u);
        Ok(())
    }

    pub fn dyad(&self, u: usize, v: usize) -> Result<Dyad, GraphError> {
        self.check_node(u)?;
        self.check_node(v)?;
        if u == v {
            return Err(GraphError::IdenticalDyad(u));
        }
        Ok(match (self.has_edge(u, v), self.has_edge(v, u)) {
            (true, true) => Dyad::Mutual,
            (false, false) => Dyad::Null,
            _ => Dyad::Asymmetric,
        })
    }

    /// Sorted edge list, handy for order-insensitive comparisons.
    pub fn sorted_edges(&self) -> Vec<(usize, usize)> {
        let mut e = self.edges.clone();
        e.sort_unstable();
        e
    }
}

fn remove_value(list: &mut Vec<usize>, x: usize) {
    if let Some(i) = list.iter().position(|&y| y == x) {
        list.swap_remove(i);
    }
}

/// Same node count and same edge set; labels and edge order are ignored.
impl PartialEq for DirectedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.node_count() == other.node_count()
            && self.edge_count() == other.edge_count()
            && self.edges.iter().all(|&(u, v)| other.has_edge(u, v))
    }
}

impl Eq for DirectedGraph {}

/// One node of the bipartite split.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BipNode {
    pub node: usize,
    pub side: Side,
}

impl BipNode {
    pub fn out(node: usize) -> Self {
        BipNode {
            node,
            side: Side::Out,
        }
    }

    pub fn inn(node: usize) -> Self {
        BipNode {
            node,
            side: Side::In,
        }
    }

    /// The other half of the same original node.
    pub fn partner(self) -> Self {
        BipNode {
            node: self.node,
            side: self.side.opposite(),
        }
    }
}

impl fmt::Display for BipNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.node, self.side)
    }
}

/// Undirected bipartite image of a digraph.
///
/// Edges are stored as given; [`BipartiteGraph::validate`] checks that each
/// joins an out-node to an in-node, avoids non-chords, and is not repeated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    n_orig: usize,
    edges: Vec<(BipNode, BipNode)>,
    non_chords: Vec<usize>,
}

impl BipartiteGraph {
    /// Assembles a bipartite graph without checking its invariants.
    pub fn from_parts(
        n_orig: usize,
        edges: Vec<(BipNode, BipNode)>,
        mut non_chords: Vec<usize>,
    ) -> Self {
        non_chords.sort_unstable();
        non_chords.dedup();
        BipartiteGraph {
            n_orig,
            edges,
            non_chords,
        }
    }

    pub fn n_orig(&self) -> usize {
        self.n_orig
    }

    pub fn edges(&self) -> &[(BipNode, BipNode)] {
        &self.edges
    }

    /// Original nodes `v` whose pair `(v_in, v_out)` is forbidden.
    pub fn non_chords(&self) -> &[usize] {
        &self.non_chords
    }

    pub fn is_non_chord(&self, v: usize) -> bool {
        self.non_chords.binary_search(&v).is_ok()
    }

    /// Edges as `(out node, in node)` pairs of original ids, checking every
    /// invariant on the way.
    pub fn oriented_edges(&self) -> Result<Vec<(usize, usize)>, GraphError> {
        let out = self.oriented_unique_unchecked()?;
        let mut seen = rustc_hash::FxHashSet::with_capacity_and_hasher(out.len(), Default::default());
        for &(u, v) in &out {
            if !seen.insert(pair_key(u, v)) {
                return Err(GraphError::ParallelBipartiteEdge(u, v));
            }
        }
        Ok(out)
    }

    /// Every check of [`Self::oriented_edges`] except parallel edges.
    fn oriented_unique_unchecked(&self) -> Result<Vec<(usize, usize)>, GraphError> {
        let mut out = Vec::with_capacity(self.edges.len());
        for &(a, b) in &self.edges {
            for x in [a, b] {
                if x.node >= self.n_orig {
                    return Err(GraphError::NodeOutOfRange {
                        node: x.node,
                        n: self.n_orig,
                    });
                }
            }
            if a.side == b.side {
                return Err(GraphError::SameSide(a.side, a.node, b.node));
            }
            let (o, i) = if a.side == Side::Out { (a, b) } else { (b, a) };
            // (v_out, v_in) would collapse to a self-loop whether or not v
            // was recorded as a non-chord.
            if o.node == i.node {
                return Err(GraphError::NonChordEdge(o.node));
            }
            out.push((o.node, i.node));
        }
        Ok(out)
    }

    pub fn validate(&self) -> Result<(), GraphError> {
        self.oriented_edges().map(|_| ())
    }
}

/// Splits every node into `v_in`/`v_out`; nodes with both degrees positive
/// get a non-chord.
pub fn to_bipartite(g: &DirectedGraph) -> BipartiteGraph {
    let edges = g
        .edges()
        .iter()
        .map(|&(u, v)| (BipNode::out(u), BipNode::inn(v)))
        .collect();
    let non_chords = (0..g.node_count())
        .filter(|&v| g.in_degree(v) > 0 && g.out_degree(v) > 0)
        .collect();
    BipartiteGraph::from_parts(g.node_count(), edges, non_chords)
}

/// Inverse of [`to_bipartite`]: `(u_out, v_in)` becomes `u -> v`.
pub fn collapse_bipartite(b: &BipartiteGraph) -> Result<DirectedGraph, GraphError> {
    // parallel edges surface as duplicates while building the graph
    let edges = b.oriented_unique_unchecked()?;
    DirectedGraph::from_dense_edges(b.n_orig(), edges).map_err(|e| match e {
        GraphError::DuplicateEdge(u, v) => GraphError::ParallelBipartiteEdge(u, v),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle3() -> DirectedGraph {
        DirectedGraph::from_dense_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn ingestion_drops_loops_and_duplicates() {
        let g = DirectedGraph::from_edge_list(&[(0, 1), (1, 0), (1, 1), (0, 1)]);
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edge_count(), 2);
        assert!(g.has_edge(0, 1));
        assert!(g.has_edge(1, 0));
    }

    #[test]
    fn ingestion_of_nothing() {
        let g = DirectedGraph::from_edge_list(&[]);
        assert_eq!(g.node_count(), 0);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn ingestion_remaps_sparse_ids_by_first_appearance() {
        let g = DirectedGraph::from_edge_list(&[(900, 7), (7, 42), (3, 3), (42, 900)]);
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.labels().unwrap(), &[900, 7, 42]);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 2) && g.has_edge(2, 0));
    }

    #[test]
    fn add_edge_rejects_non_simple() {
        let mut g = DirectedGraph::new(2);
        assert_eq!(g.add_edge(1, 1), Err(GraphError::SelfLoop(1)));
        g.add_edge(0, 1).unwrap();
        assert_eq!(g.add_edge(0, 1), Err(GraphError::DuplicateEdge(0, 1)));
        assert!(matches!(
            g.add_edge(0, 5),
            Err(GraphError::NodeOutOfRange { node: 5, n: 2 })
        ));
    }

    #[test]
    fn remove_edge_keeps_index_consistent() {
        let mut g = DirectedGraph::from_dense_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        g.remove_edge(0, 1).unwrap();
        assert!(!g.has_edge(0, 1));
        assert_eq!(g.edge_count(), 3);
        for &(u, v) in g.edges() {
            assert!(g.has_edge(u, v));
        }
        g.remove_edge(3, 0).unwrap();
        g.remove_edge(1, 2).unwrap();
        g.remove_edge(2, 3).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.remove_edge(2, 3), Err(GraphError::MissingEdge(2, 3)));
    }

    #[test]
    fn dyad_states() {
        let g = DirectedGraph::from_dense_edges(3, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(g.dyad(0, 1).unwrap(), Dyad::Mutual);
        let g = DirectedGraph::from_dense_edges(3, [(0, 1)]).unwrap();
        assert_eq!(g.dyad(0, 1).unwrap(), Dyad::Asymmetric);
        assert_eq!(g.dyad(1, 0).unwrap(), Dyad::Asymmetric);
        assert_eq!(g.dyad(0, 2).unwrap(), Dyad::Null);
        assert_eq!(g.dyad(2, 2), Err(GraphError::IdenticalDyad(2)));
    }

    #[test]
    fn cycle_to_bipartite() {
        let b = to_bipartite(&cycle3());
        assert_eq!(b.edges().len(), 3);
        assert_eq!(b.non_chords(), &[0, 1, 2]);
        b.validate().unwrap();
        assert_eq!(collapse_bipartite(&b).unwrap(), cycle3());
    }

    #[test]
    fn single_edge_has_no_non_chords() {
        let g = DirectedGraph::from_dense_edges(2, [(0, 1)]).unwrap();
        let b = to_bipartite(&g);
        assert_eq!(b.edges(), &[(BipNode::out(0), BipNode::inn(1))]);
        assert!(b.non_chords().is_empty());
    }

    #[test]
    fn collapse_rejects_broken_bipartite_graphs() {
        let b = BipartiteGraph::from_parts(2, vec![(BipNode::out(1), BipNode::inn(1))], vec![1]);
        assert_eq!(collapse_bipartite(&b), Err(GraphError::NonChordEdge(1)));
        let b = BipartiteGraph::from_parts(2, vec![(BipNode::out(0), BipNode::out(1))], vec![]);
        assert!(matches!(collapse_bipartite(&b), Err(GraphError::SameSide(..))));
        let e = (BipNode::inn(1), BipNode::out(0));
        let b = BipartiteGraph::from_parts(2, vec![e, e], vec![]);
        assert_eq!(
            collapse_bipartite(&b),
            Err(GraphError::ParallelBipartiteEdge(0, 1))
        );
    }

    #[test]
    fn degree_conservation() {
        let g = cycle3();
        let din: usize = (0..3).map(|v| g.in_degree(v)).sum();
        let dout: usize = (0..3).map(|v| g.out_degree(v)).sum();
        assert_eq!(din, 3);
        assert_eq!(dout, 3);
    }
}
