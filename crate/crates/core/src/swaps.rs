//! Edge rewiring moves on realizations.
//!
//! A double swap replaces `(a,b), (c,d)` with `(a,d), (c,b)`; it keeps every
//! in- and out-degree, and keeps the JDAM when `a, c` share an out-cell or
//! `b, d` share an in-cell. A C6 swap reverses a directed triangle. Swaps
//! are only applied when the result stays simple.

use rand::Rng;
use rustc_hash::FxHashSet;
use thiserror::Error;

use crate::graph::{pair_key, BipNode, BipartiteGraph, DirectedGraph, GraphError, Side};
use crate::targets::{CellKey, Mode};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SwapKind {
    /// Double swap that must preserve cell-pair counts in `mode`.
    JdamDouble(Mode),
    /// Double swap that must preserve all in/out degrees.
    DegreeDouble,
    /// Reversal of a directed 3-cycle.
    C6Reverse,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwapProposal {
    pub kind: SwapKind,
    pub remove: Vec<(usize, usize)>,
    pub add: Vec<(usize, usize)>,
}

impl SwapProposal {
    /// `(a,b), (c,d) -> (a,d), (c,b)`.
    pub fn double(kind: SwapKind, (a, b): (usize, usize), (c, d): (usize, usize)) -> Self {
        SwapProposal {
            kind,
            remove: vec![(a, b), (c, d)],
            add: vec![(a, d), (c, b)],
        }
    }

    /// Reverses the cycle `a -> b -> c -> a`.
    pub fn reverse_triangle(a: usize, b: usize, c: usize) -> Self {
        SwapProposal {
            kind: SwapKind::C6Reverse,
            remove: vec![(a, b), (b, c), (c, a)],
            add: vec![(b, a), (c, b), (a, c)],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SwapOutcome {
    Applied,
    Rejected(Rejection),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rejection {
    SelfLoop,
    ParallelEdge,
    /// The removed and added edges do not preserve what `kind` promises.
    BreaksInvariant,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SwapError {
    #[error("proposal removes edge {0} -> {1}, which is absent")]
    MissingEdge(usize, usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn preserves_degrees(remove: &[(usize, usize)], add: &[(usize, usize)]) -> bool {
    let mut outs: Vec<usize> = remove.iter().map(|e| e.0).collect();
    let mut ins: Vec<usize> = remove.iter().map(|e| e.1).collect();
    let mut outs2: Vec<usize> = add.iter().map(|e| e.0).collect();
    let mut ins2: Vec<usize> = add.iter().map(|e| e.1).collect();
    for v in [&mut outs, &mut ins, &mut outs2, &mut ins2] {
        v.sort_unstable();
    }
    outs == outs2 && ins == ins2
}

fn cell_pairs(
    mode: Mode,
    degrees: &dyn Fn(usize) -> (u32, u32),
    edges: &[(usize, usize)],
) -> Option<Vec<(CellKey, CellKey)>> {
    let mut pairs = Vec::with_capacity(edges.len());
    for &(u, v) in edges {
        let a = CellKey::of_node(mode, Side::Out, degrees(u))?;
        let b = CellKey::of_node(mode, Side::In, degrees(v))?;
        pairs.push((a, b));
    }
    pairs.sort_unstable();
    Some(pairs)
}

fn kind_holds(
    kind: SwapKind,
    degrees: &dyn Fn(usize) -> (u32, u32),
    remove: &[(usize, usize)],
    add: &[(usize, usize)],
) -> bool {
    if !preserves_degrees(remove, add) {
        return false;
    }
    match kind {
        SwapKind::DegreeDouble | SwapKind::C6Reverse => true,
        SwapKind::JdamDouble(mode) => {
            let before = cell_pairs(mode, degrees, remove);
            before.is_some() && before == cell_pairs(mode, degrees, add)
        }
    }
}

/// Applies `p` to `g` if the result is simple and `p.kind`'s invariant holds.
pub fn apply_swap(g: &mut DirectedGraph, p: &SwapProposal) -> Result<SwapOutcome, SwapError> {
    for &(u, v) in &p.remove {
        if !g.has_edge(u, v) {
            return Err(SwapError::MissingEdge(u, v));
        }
    }
    let degrees = |v: usize| (g.in_degree(v) as u32, g.out_degree(v) as u32);
    if !kind_holds(p.kind, &degrees, &p.remove, &p.add) {
        return Ok(SwapOutcome::Rejected(Rejection::BreaksInvariant));
    }
    let removed: FxHashSet<u64> = p.remove.iter().map(|&(u, v)| pair_key(u, v)).collect();
    let mut added = FxHashSet::default();
    for &(u, v) in &p.add {
        if u == v {
            return Ok(SwapOutcome::Rejected(Rejection::SelfLoop));
        }
        let k = pair_key(u, v);
        if (g.has_edge(u, v) && !removed.contains(&k)) || !added.insert(k) {
            return Ok(SwapOutcome::Rejected(Rejection::ParallelEdge));
        }
    }
    for &(u, v) in &p.remove {
        g.remove_edge(u, v)?;
    }
    for &(u, v) in &p.add {
        g.add_edge(u, v)?;
    }
    Ok(SwapOutcome::Applied)
}

/// One random degree-preserving double swap attempt.
pub fn random_double_swap<R: Rng>(g: &mut DirectedGraph, rng: &mut R) -> bool {
    let m = g.edge_count();
    if m < 2 {
        return false;
    }
    let e1 = g.edges()[rng.gen_range(0..m)];
    let e2 = g.edges()[rng.gen_range(0..m)];
    if e1 == e2 {
        return false;
    }
    let p = SwapProposal::double(SwapKind::DegreeDouble, e1, e2);
    matches!(apply_swap(g, &p), Ok(SwapOutcome::Applied))
}

/// Looks for a directed triangle through up to `probes` random edges and
/// reverses the first one whose reversal stays simple.
pub fn random_c6_swap<R: Rng>(g: &mut DirectedGraph, rng: &mut R, probes: usize) -> bool {
    let m = g.edge_count();
    if m < 3 {
        return false;
    }
    for _ in 0..probes {
        let (a, b) = g.edges()[rng.gen_range(0..m)];
        let closing = g
            .out_neighbors(b)
            .iter()
            .copied()
            .find(|&c| c != a && g.has_edge(c, a));
        if let Some(c) = closing {
            let p = SwapProposal::reverse_triangle(a, b, c);
            if matches!(apply_swap(g, &p), Ok(SwapOutcome::Applied)) {
                return true;
            }
        }
    }
    false
}

/// Every bipartite graph reachable from `b` by one JDAM-preserving double
/// swap.
///
/// With `allow_non_chords`, swaps may place edges on non-chords (self-loops
/// in the directed view); otherwise non-chords are permanent blockers.
pub fn enumerate_jdam_swaps(
    b: &BipartiteGraph,
    mode: Mode,
    allow_non_chords: bool,
) -> Result<Vec<BipartiteGraph>, GraphError> {
    let edges = oriented_allowing_loops(b, allow_non_chords)?;
    let n = b.n_orig();
    let mut deg = vec![(0u32, 0u32); n];
    for &(u, v) in &edges {
        deg[u].1 += 1;
        deg[v].0 += 1;
    }
    let present: FxHashSet<u64> = edges.iter().map(|&(u, v)| pair_key(u, v)).collect();
    let out_cell = |v: usize| CellKey::of_node(mode, Side::Out, deg[v]);
    let in_cell = |v: usize| CellKey::of_node(mode, Side::In, deg[v]);

    let mut seen = FxHashSet::default();
    let mut result = Vec::new();
    for i in 0..edges.len() {
        for j in i + 1..edges.len() {
            let (a, bb) = edges[i];
            let (c, d) = edges[j];
            if a == c || bb == d {
                continue;
            }
            if out_cell(a) != out_cell(c) && in_cell(bb) != in_cell(d) {
                continue;
            }
            let new1 = (a, d);
            let new2 = (c, bb);
            if present.contains(&pair_key(new1.0, new1.1)) || present.contains(&pair_key(new2.0, new2.1)) {
                continue;
            }
            if !allow_non_chords && (new1.0 == new1.1 || new2.0 == new2.1) {
                continue;
            }
            let mut next: Vec<(usize, usize)> = edges
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != i && k != j)
                .map(|(_, &e)| e)
                .chain([new1, new2])
                .collect();
            next.sort_unstable();
            if seen.insert(next.clone()) {
                result.push(BipartiteGraph::from_parts(
                    n,
                    next.into_iter()
                        .map(|(u, v)| (BipNode::out(u), BipNode::inn(v)))
                        .collect(),
                    b.non_chords().to_vec(),
                ));
            }
        }
    }
    Ok(result)
}

fn oriented_allowing_loops(b: &BipartiteGraph, allow_non_chords: bool) -> Result<Vec<(usize, usize)>, GraphError> {
    if !allow_non_chords {
        return b.oriented_edges();
    }
    let mut out = Vec::with_capacity(b.edges().len());
    for &(x, y) in b.edges() {
        if x.side == y.side {
            return Err(GraphError::SameSide(x.side, x.node, y.node));
        }
        let (o, i) = if x.side == Side::Out { (x, y) } else { (y, x) };
        out.push((o.node, i.node));
    }
    Ok(out)
}

/// Sorted `(out, in)` edge list; a canonical form for comparing bipartite
/// graphs with the same node set.
pub fn canonical_edges(b: &BipartiteGraph) -> Vec<(usize, usize)> {
    let mut e: Vec<(usize, usize)> = b
        .edges()
        .iter()
        .map(|&(x, y)| if x.side == Side::Out { (x.node, y.node) } else { (y.node, x.node) })
        .collect();
    e.sort_unstable();
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::to_bipartite;
    use crate::targets::{extract_d2k, extract_dds};

    fn graph(n: usize, e: &[(usize, usize)]) -> DirectedGraph {
        DirectedGraph::from_dense_edges(n, e.iter().copied()).unwrap()
    }

    #[test]
    fn same_cell_double_swap_keeps_jdam() {
        // 0 and 2 both have out-degree 1.
        let mut g = graph(4, &[(0, 1), (2, 3)]);
        let before = extract_d2k(&g, Mode::D2k);
        let p = SwapProposal::double(SwapKind::JdamDouble(Mode::D2k), (0, 1), (2, 3));
        assert_eq!(apply_swap(&mut g, &p).unwrap(), SwapOutcome::Applied);
        assert!(g.has_edge(0, 3) && g.has_edge(2, 1));
        assert_eq!(extract_d2k(&g, Mode::D2k), before);
    }

    #[test]
    fn parallel_edge_is_rejected() {
        let mut g = graph(4, &[(0, 1), (2, 3), (0, 3)]);
        let p = SwapProposal::double(SwapKind::DegreeDouble, (0, 1), (2, 3));
        assert_eq!(
            apply_swap(&mut g, &p).unwrap(),
            SwapOutcome::Rejected(Rejection::ParallelEdge)
        );
        assert_eq!(g, graph(4, &[(0, 1), (2, 3), (0, 3)]));
    }

    #[test]
    fn self_loop_is_rejected() {
        let mut g = graph(3, &[(0, 1), (1, 2)]);
        let p = SwapProposal::double(SwapKind::DegreeDouble, (0, 1), (1, 2));
        assert_eq!(
            apply_swap(&mut g, &p).unwrap(),
            SwapOutcome::Rejected(Rejection::SelfLoop)
        );
    }

    #[test]
    fn missing_edge_is_an_error() {
        let mut g = graph(3, &[(0, 1)]);
        let p = SwapProposal::double(SwapKind::DegreeDouble, (0, 1), (1, 2));
        assert_eq!(apply_swap(&mut g, &p), Err(SwapError::MissingEdge(1, 2)));
    }

    #[test]
    fn jdam_swap_across_cells_is_rejected() {
        // 0 has out-degree 2, 3 has out-degree 1; 1 has in-degree 1, 4 has 2.
        let mut g = graph(5, &[(0, 1), (0, 4), (3, 4), (2, 4)]);
        let p = SwapProposal::double(SwapKind::JdamDouble(Mode::D2k), (0, 1), (3, 4));
        assert_eq!(
            apply_swap(&mut g, &p).unwrap(),
            SwapOutcome::Rejected(Rejection::BreaksInvariant)
        );
    }

    #[test]
    fn triangle_reversal() {
        let mut g = graph(3, &[(0, 1), (1, 2), (2, 0)]);
        let dds = extract_dds(&g);
        let p = SwapProposal::reverse_triangle(0, 1, 2);
        assert_eq!(apply_swap(&mut g, &p).unwrap(), SwapOutcome::Applied);
        assert_eq!(g, graph(3, &[(1, 0), (2, 1), (0, 2)]));
        assert_eq!(extract_dds(&g), dds);
    }

    #[test]
    fn triangle_has_no_jdam_swap_neighbors() {
        let g = graph(3, &[(0, 1), (1, 2), (2, 0)]);
        let nbrs = enumerate_jdam_swaps(&to_bipartite(&g), Mode::D2k, false).unwrap();
        assert!(nbrs.is_empty());
        // With self-loops allowed, swaps exist but none is the reversal.
        let nbrs = enumerate_jdam_swaps(&to_bipartite(&g), Mode::D2k, true).unwrap();
        assert!(!nbrs.is_empty());
        let rev = canonical_edges(&to_bipartite(&graph(3, &[(1, 0), (2, 1), (0, 2)])));
        assert!(nbrs.iter().all(|b| canonical_edges(b) != rev));
    }

    #[test]
    fn neighbors_keep_targets() {
        let g = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2), (3, 1)]);
        let t = extract_d2k(&g, Mode::D2k);
        let nbrs = enumerate_jdam_swaps(&to_bipartite(&g), Mode::D2k, false).unwrap();
        assert!(!nbrs.is_empty());
        for b in nbrs {
            let h = crate::graph::collapse_bipartite(&b).unwrap();
            assert_eq!(extract_d2k(&h, Mode::D2k), t);
        }
    }
}
