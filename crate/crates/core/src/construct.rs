//! Construction of simple digraphs with an exact 2K target.
//!
//! Works on the bipartite split. Edges are added one at a time between an
//! out-cell and an in-cell whose JDAM entry is below target. When a chosen
//! endpoint has no free stub, a neighbor switch moves one of its edges to a
//! same-cell node that still has stubs; if no switch exists, that same-cell
//! node takes the new edge instead. The result is collapsed back into a
//! directed graph.
//!
//! Bookkeeping per cell pair is a set `P` of addable node pairs, kept at
//! least as large as the number of edges still missing, and per cell a
//! roster of nodes with free stubs. Each added edge costs O(d_max).

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::graph::{pair_key, unpack_key, BipNode, BipartiteGraph, DirectedGraph, Side};
use crate::realizability::{check, MalformedTargets, RealizabilityReport};
use crate::targets::{CellKey, D2KTargets};

const NONE: u32 = u32::MAX;

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error("target is not realizable ({} violations)", .0.violations.len())]
    Unrealizable(RealizabilityReport),
    #[error(transparent)]
    Malformed(#[from] MalformedTargets),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("construction invariant broken: {0}")]
    Internal(String),
}

/// Result of trying to free a stub on a saturated node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SwitchOutcome {
    /// The edge to this neighbor moved to the substitute.
    Switched(BipNode),
    /// Every neighbor of the saturated node is already adjacent to the
    /// substitute or is the substitute's own partner.
    Infeasible,
}

/// What happened while adding one edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AddOutcome {
    /// The edge actually added, `(out node, in node)`.
    pub edge: (BipNode, BipNode),
    /// The originally picked pair.
    pub picked: (BipNode, BipNode),
    pub switches: u8,
    pub substituted_out: bool,
    pub substituted_in: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ConstructionStats {
    pub edges_added: u64,
    pub switches: u64,
    pub substitutions: u64,
}

#[derive(Debug)]
struct PairState {
    out_cell: u32,
    in_cell: u32,
    target: u64,
    current: u64,
    candidates: Vec<u64>,
}

/// Per bipartite node bookkeeping, one cache-aligned record.
#[derive(Clone, Copy, Debug)]
#[repr(C, align(32))]
struct Node {
    /// Adjacency lives in `adj[start..start + target]`, first `deg` in use.
    start: u32,
    deg: u32,
    target: u32,
    cell: u32,
    roster_pos: u32,
    stamp: u32,
    /// Original node id.
    orig: u32,
    partner: u32,
}

/// Mutable state of one construction run.
///
/// Bipartite nodes are flattened to `0..2n`, out nodes first. Within a side
/// nodes are ordered by cell, so filling one cell pair touches two
/// contiguous blocks.
#[derive(Debug)]
pub struct ConstructionState {
    n: usize,
    nodes: Vec<Node>,
    /// `v` -> flat index of `v_out`, `n + v` -> flat index of `v_in`.
    flat_of: Vec<u32>,
    adj: Vec<u32>,
    edge_count: u64,
    epoch: u32,
    cells: Vec<CellKey>,
    roster: Vec<Vec<u32>>,
    pairs: Vec<PairState>,
    pair_index: FxHashMap<(u32, u32), u32>,
    /// Per out node `v`: `(w, pair, position)` of every candidate `(v, w)`.
    slots: Vec<Vec<(u32, u32, u32)>>,
    rng: ChaCha8Rng,
    stats: ConstructionStats,
}

impl ConstructionState {
    /// Sets up nodes, stubs, cells, rosters and candidate sets for `t`.
    pub fn new(t: &D2KTargets, seed: u64) -> Result<Self, ConstructError> {
        let report = check(t)?;
        if !report.realizable {
            return Err(ConstructError::Unrealizable(report));
        }
        let n = t.n();
        if n >= NONE as usize / 2 || 2 * t.edge_count() >= NONE as u64 {
            return Err(ConstructError::Precondition(format!(
                "{n} nodes and {} edges is too many",
                t.edge_count()
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mode = t.mode();

        let mut cells: Vec<CellKey> = t.cell_sizes().into_keys().collect();
        cells.sort();
        let cell_id: FxHashMap<CellKey, u32> =
            cells.iter().enumerate().map(|(i, &k)| (k, i as u32)).collect();

        let blank = Node {
            start: 0,
            deg: 0,
            target: 0,
            cell: NONE,
            roster_pos: NONE,
            stamp: 0,
            orig: 0,
            partner: 0,
        };
        let mut nodes = vec![blank; 2 * n];
        let mut flat_of = vec![0u32; 2 * n];
        let mut members: Vec<Vec<u32>> = vec![Vec::new(); cells.len()];
        for (base, side) in [(0, Side::Out), (n, Side::In)] {
            let cell = |v: usize| CellKey::of_node(mode, side, t.dds()[v]);
            let mut order: Vec<(u32, usize)> = (0..n)
                .map(|v| (cell(v).map_or(NONE, |k| cell_id[&k]), v))
                .collect();
            order.sort_unstable();
            for (i, &(c, v)) in order.iter().enumerate() {
                let x = base + i;
                nodes[x].orig = v as u32;
                flat_of[base + v] = x as u32;
                if c != NONE {
                    nodes[x].target = cell(v).unwrap().degree();
                    nodes[x].cell = c;
                    members[c as usize].push(x as u32);
                }
            }
        }
        let mut next = 0u32;
        for x in 0..2 * n {
            let v = nodes[x].orig as usize;
            nodes[x].partner = if x < n { flat_of[n + v] } else { flat_of[v] };
            nodes[x].start = next;
            next += nodes[x].target;
        }
        for m in &mut members {
            m.shuffle(&mut rng);
            for (i, &x) in m.iter().enumerate() {
                nodes[x as usize].roster_pos = i as u32;
            }
        }

        let mut pairs = Vec::new();
        let mut pair_index = FxHashMap::default();
        let mut slots: Vec<Vec<(u32, u32, u32)>> = vec![Vec::new(); n];
        for (a, b, target) in t.jdam_entries() {
            if a.side != Side::Out {
                continue;
            }
            let (oc, ic) = (cell_id[&a], cell_id[&b]);
            let pid = pairs.len() as u32;
            // Walk the out x in grid by diagonals so every out node gets about
            // target / |out cell| candidates. Each out node has at most one
            // forbidden partner, so this stops after target + |out cell| steps.
            let (xs, ys) = (&members[oc as usize], &members[ic as usize]);
            let mut candidates = Vec::with_capacity(target as usize);
            'scan: for k in 0..ys.len() {
                for (i, &x) in xs.iter().enumerate() {
                    if candidates.len() as u64 == target {
                        break 'scan;
                    }
                    let y = ys[(i + k) % ys.len()];
                    if nodes[x as usize].partner == y {
                        continue;
                    }
                    let (v, w) = (x as usize, y as usize - n);
                    slots[v].push((w as u32, pid, candidates.len() as u32));
                    candidates.push(pair_key(v, w));
                }
            }
            pairs.push(PairState {
                out_cell: oc,
                in_cell: ic,
                target,
                current: 0,
                candidates,
            });
            pair_index.insert((oc, ic), pid);
        }

        Ok(ConstructionState {
            n,
            nodes,
            flat_of,
            adj: vec![NONE; next as usize],
            edge_count: 0,
            epoch: 0,
            cells,
            roster: members,
            pairs,
            pair_index,
            slots,
            rng,
            stats: ConstructionStats::default(),
        })
    }

    pub fn stats(&self) -> ConstructionStats {
        self.stats
    }

    /// Cell pairs `(out cell, in cell)` with a positive target.
    pub fn cell_pairs(&self) -> Vec<(CellKey, CellKey)> {
        self.pairs
            .iter()
            .map(|p| (self.cells[p.out_cell as usize], self.cells[p.in_cell as usize]))
            .collect()
    }

    pub fn current_jdam(&self, out_cell: CellKey, in_cell: CellKey) -> u64 {
        self.pair_id(out_cell, in_cell)
            .map_or(0, |p| self.pairs[p as usize].current)
    }

    pub fn free_stubs(&self, b: BipNode) -> u32 {
        self.free(self.flat(b))
    }

    pub fn has_edge(&self, a: BipNode, b: BipNode) -> bool {
        a.side != b.side && self.linked(self.flat(a), self.flat(b))
    }

    pub fn neighbors(&self, b: BipNode) -> Vec<BipNode> {
        self.nbrs(self.flat(b))
            .iter()
            .map(|&y| self.bip(y))
            .collect()
    }

    /// Candidate set size for a cell pair.
    pub fn candidate_count(&self, out_cell: CellKey, in_cell: CellKey) -> usize {
        self.pair_id(out_cell, in_cell)
            .map_or(0, |p| self.pairs[p as usize].candidates.len())
    }

    fn pair_id(&self, out_cell: CellKey, in_cell: CellKey) -> Option<u32> {
        let oc = self.cells.binary_search(&out_cell).ok()? as u32;
        let ic = self.cells.binary_search(&in_cell).ok()? as u32;
        self.pair_index.get(&(oc, ic)).copied()
    }

    #[inline]
    fn flat(&self, b: BipNode) -> u32 {
        match b.side {
            Side::Out => self.flat_of[b.node],
            Side::In => self.flat_of[self.n + b.node],
        }
    }

    #[inline]
    fn bip(&self, x: u32) -> BipNode {
        let v = self.nodes[x as usize].orig as usize;
        if (x as usize) < self.n {
            BipNode::out(v)
        } else {
            BipNode::inn(v)
        }
    }

    #[inline]
    fn partner(&self, x: u32) -> u32 {
        self.nodes[x as usize].partner
    }

    #[inline]
    fn key(&self, a: u32, b: u32) -> u64 {
        let n = self.n as u32;
        let (o, i) = if a < n { (a, b) } else { (b, a) };
        pair_key(o as usize, (i - n) as usize)
    }

    #[inline]
    fn free(&self, x: u32) -> u32 {
        let node = &self.nodes[x as usize];
        node.target - node.deg
    }

    /// Scans the out endpoint's adjacency, at most `d_max` entries.
    #[inline]
    fn linked(&self, a: u32, b: u32) -> bool {
        let (o, i) = if a < self.n as u32 { (a, b) } else { (b, a) };
        self.nbrs(o).contains(&i)
    }

    #[inline]
    fn nbrs(&self, x: u32) -> &[u32] {
        let node = &self.nodes[x as usize];
        &self.adj[node.start as usize..(node.start + node.deg) as usize]
    }

    fn pair_of_edge(&self, a: u32, b: u32) -> Option<u32> {
        let n = self.n as u32;
        let (o, i) = if a < n { (a, b) } else { (b, a) };
        self.pair_index
            .get(&(self.nodes[o as usize].cell, self.nodes[i as usize].cell))
            .copied()
    }

    fn roster_insert(&mut self, x: u32) {
        let node = &mut self.nodes[x as usize];
        if node.roster_pos != NONE {
            return;
        }
        let r = &mut self.roster[node.cell as usize];
        node.roster_pos = r.len() as u32;
        r.push(x);
    }

    fn roster_remove(&mut self, x: u32) {
        let node = &mut self.nodes[x as usize];
        let pos = node.roster_pos;
        if pos == NONE {
            return;
        }
        node.roster_pos = NONE;
        let r = &mut self.roster[node.cell as usize];
        r.swap_remove(pos as usize);
        if let Some(&moved) = r.get(pos as usize) {
            self.nodes[moved as usize].roster_pos = pos;
        }
    }

    fn slot(&self, v: usize, w: usize) -> Option<usize> {
        self.slots[v].iter().position(|s| s.0 as usize == w)
    }

    fn candidate_insert(&mut self, pid: u32, key: u64) {
        let (v, w) = unpack_key(key);
        if self.slot(v, w).is_some() {
            return;
        }
        let c = &mut self.pairs[pid as usize].candidates;
        self.slots[v].push((w as u32, pid, c.len() as u32));
        c.push(key);
    }

    fn candidate_remove(&mut self, key: u64) {
        let (v, w) = unpack_key(key);
        let Some(i) = self.slot(v, w) else {
            return;
        };
        let (_, pid, pos) = self.slots[v].swap_remove(i);
        let c = &mut self.pairs[pid as usize].candidates;
        c.swap_remove(pos as usize);
        if let Some(&moved) = c.get(pos as usize) {
            let (mv, mw) = unpack_key(moved);
            let j = self.slot(mv, mw).expect("every candidate has a slot");
            self.slots[mv][j].2 = pos;
        }
    }

    fn link(&mut self, a: u32, b: u32) {
        self.edge_count += 1;
        for (x, y) in [(a, b), (b, a)] {
            let node = &mut self.nodes[x as usize];
            self.adj[(node.start + node.deg) as usize] = y;
            node.deg += 1;
            if node.deg == node.target {
                self.roster_remove(x);
            }
        }
    }

    fn unlink(&mut self, a: u32, b: u32) {
        self.edge_count -= 1;
        for (x, y) in [(a, b), (b, a)] {
            let node = &mut self.nodes[x as usize];
            let (s, d) = (node.start as usize, node.deg as usize);
            if let Some(i) = self.adj[s..s + d].iter().position(|&z| z == y) {
                self.adj.swap(s + i, s + d - 1);
                node.deg -= 1;
            }
            self.roster_insert(x);
        }
    }

    /// Places an edge directly, as if an earlier iteration had added it.
    #[cfg(test)]
    pub(crate) fn force_edge(&mut self, a: BipNode, b: BipNode) {
        let (x, y) = (self.flat(a), self.flat(b));
        assert!(self.free(x) > 0 && self.free(y) > 0 && !self.has_edge(a, b));
        let pid = self.pair_of_edge(x, y).expect("cell pair has a target");
        self.link(x, y);
        self.candidate_remove(self.key(x, y));
        self.pairs[pid as usize].current += 1;
    }

    /// Frees a stub on saturated `v` by moving one of its edges `(v, t)` to
    /// `(v_sub, t)`, where `v_sub` is a same-cell node with a free stub.
    ///
    /// The JDAM is unchanged. `P` gives up `(v_sub, t)` and gains `(v, t)`.
    pub fn neighbor_switch(&mut self, v: BipNode, v_sub: BipNode) -> Result<SwitchOutcome, ConstructError> {
        let (x, xs) = (self.flat(v), self.flat(v_sub));
        self.switch_flat(x, xs)
            .map(|t| t.map_or(SwitchOutcome::Infeasible, |t| SwitchOutcome::Switched(self.bip(t))))
    }

    fn switch_flat(&mut self, x: u32, xs: u32) -> Result<Option<u32>, ConstructError> {
        let cell = self.nodes[x as usize].cell;
        if x == xs || cell == NONE || cell != self.nodes[xs as usize].cell {
            return Err(ConstructError::Precondition(format!(
                "{} and {} are not distinct members of one cell",
                self.bip(x),
                self.bip(xs)
            )));
        }
        if self.free(x) != 0 || self.free(xs) == 0 {
            return Err(ConstructError::Precondition(format!(
                "switch needs saturated {} and free {}",
                self.bip(x),
                self.bip(xs)
            )));
        }
        let forbidden = self.partner(xs);
        if self.epoch == u32::MAX {
            self.nodes.iter_mut().for_each(|node| node.stamp = 0);
            self.epoch = 0;
        }
        self.epoch += 1;
        let node = self.nodes[xs as usize];
        for i in node.start..node.start + node.deg {
            self.nodes[self.adj[i as usize] as usize].stamp = self.epoch;
        }
        let ok = |t: u32| t != forbidden && self.nodes[t as usize].stamp != self.epoch;
        let count = self.nbrs(x).iter().filter(|&&t| ok(t)).count();
        if count == 0 {
            return Ok(None);
        }
        let r = self.rng.gen_range(0..count);
        let t = self.nbrs(x).iter().copied().filter(|&t| ok(t)).nth(r).unwrap();
        self.unlink(x, t);
        self.link(xs, t);
        let pid = self
            .pair_of_edge(x, t)
            .ok_or_else(|| ConstructError::Internal("switched edge has no cell pair".into()))?;
        self.candidate_remove(self.key(xs, t));
        self.candidate_insert(pid, self.key(x, t));
        self.stats.switches += 1;
        Ok(Some(t))
    }

    /// Adds one edge to the cell pair `(out_cell, in_cell)`, picking a random
    /// candidate from its `P`.
    pub fn add_next_edge(&mut self, out_cell: CellKey, in_cell: CellKey) -> Result<AddOutcome, ConstructError> {
        let pid = self.pair_id(out_cell, in_cell).ok_or_else(|| {
            ConstructError::Precondition(format!("no target for ({out_cell}, {in_cell})"))
        })?;
        self.add_next_in_pair(pid)
    }

    fn add_next_in_pair(&mut self, pid: u32) -> Result<AddOutcome, ConstructError> {
        let p = &self.pairs[pid as usize];
        if p.current >= p.target {
            return Err(ConstructError::Precondition("cell pair already at target".into()));
        }
        if p.candidates.is_empty() {
            return Err(ConstructError::Internal(format!(
                "candidate set of ({}, {}) ran dry with {} edges missing",
                self.cells[p.out_cell as usize],
                self.cells[p.in_cell as usize],
                p.target - p.current
            )));
        }
        let key = p.candidates[self.rng.gen_range(0..p.candidates.len())];
        let (v, w) = unpack_key(key);
        self.add_picked(pid, v as u32, (self.n + w) as u32)
    }

    fn substitute(&self, x: u32) -> Result<u32, ConstructError> {
        self.roster[self.nodes[x as usize].cell as usize]
            .first()
            .copied()
            .ok_or_else(|| ConstructError::Internal(format!("cell of {} has no free stubs", self.bip(x))))
    }

    fn add_picked(&mut self, pid: u32, x: u32, y: u32) -> Result<AddOutcome, ConstructError> {
        let picked = (self.bip(x), self.bip(y));
        let mut out = AddOutcome {
            edge: picked,
            picked,
            switches: 0,
            substituted_out: false,
            substituted_in: false,
        };
        let mut ends = [x, y];
        for (i, end) in ends.iter_mut().enumerate() {
            if self.free(*end) > 0 {
                continue;
            }
            let sub = self.substitute(*end)?;
            match self.switch_flat(*end, sub)? {
                Some(_) => out.switches += 1,
                None => {
                    *end = sub;
                    self.stats.substitutions += 1;
                    if i == 0 {
                        out.substituted_out = true;
                    } else {
                        out.substituted_in = true;
                    }
                }
            }
        }
        let [u, v] = ends;
        // Both substitutes failing their switch cannot leave a non-chord
        // between them; this guards that argument at runtime.
        if self.partner(u) == v {
            return Err(ConstructError::Internal(format!(
                "substitutes {} and {} form a non-chord",
                self.bip(u),
                self.bip(v)
            )));
        }
        if self.linked(u, v) {
            return Err(ConstructError::Internal(format!(
                "edge ({}, {}) already present",
                self.bip(u),
                self.bip(v)
            )));
        }
        if self.free(u) == 0 || self.free(v) == 0 {
            return Err(ConstructError::Internal("endpoint without free stub".into()));
        }
        self.link(u, v);
        self.candidate_remove(self.key(u, v));
        self.pairs[pid as usize].current += 1;
        self.stats.edges_added += 1;
        out.edge = (self.bip(u), self.bip(v));
        Ok(out)
    }

    /// Runs every cell pair to its target, in a seeded random order.
    pub fn run(&mut self) -> Result<(), ConstructError> {
        let mut order: Vec<u32> = (0..self.pairs.len() as u32).collect();
        order.shuffle(&mut self.rng);
        let expected: u64 = self.pairs.iter().map(|p| p.target).sum();
        let before = self.stats.edges_added;
        for pid in order {
            while self.pairs[pid as usize].current < self.pairs[pid as usize].target {
                self.add_next_in_pair(pid)?;
            }
        }
        let added = self.stats.edges_added - before;
        let placed: u64 = self.pairs.iter().map(|p| p.current).sum();
        if placed != expected || added > expected {
            return Err(ConstructError::Internal(format!(
                "placed {placed} of {expected} edges in {added} iterations"
            )));
        }
        if self.edge_count != expected {
            return Err(ConstructError::Internal(format!(
                "{} edges for a target of {expected}",
                self.edge_count
            )));
        }
        Ok(())
    }

    pub fn to_bipartite(&self) -> BipartiteGraph {
        let mut edges = Vec::with_capacity(self.edge_count as usize);
        for v in 0..self.n {
            let mut nbrs: Vec<u32> = self.nbrs(self.flat_of[v]).iter().map(|&y| self.nodes[y as usize].orig).collect();
            nbrs.sort_unstable();
            for w in nbrs {
                edges.push((BipNode::out(v), BipNode::inn(w as usize)));
            }
        }
        let non_chords = (0..self.n)
            .filter(|&v| {
                self.nodes[self.flat_of[v] as usize].target > 0 && self.nodes[self.flat_of[self.n + v] as usize].target > 0
            })
            .collect();
        BipartiteGraph::from_parts(self.n, edges, non_chords)
    }

    /// Collapsed directed graph, in the same edge order as collapsing
    /// [`Self::to_bipartite`].
    pub fn to_directed(&self) -> Result<DirectedGraph, crate::graph::GraphError> {
        let mut edges = Vec::with_capacity(self.edge_count as usize);
        let mut nbrs = Vec::new();
        for v in 0..self.n {
            nbrs.clear();
            nbrs.extend(self.nbrs(self.flat_of[v]).iter().map(|&y| self.nodes[y as usize].orig as usize));
            nbrs.sort_unstable();
            edges.extend(nbrs.iter().map(|&w| (v, w)));
        }
        DirectedGraph::from_dense_edges(self.n, edges)
    }
}

/// Builds a simple digraph whose 2K target (in `t`'s mode) is exactly `t`.
///
/// Node `v` of the output has degrees `t.dds()[v]`. Deterministic in
/// `(t, seed)`.
pub fn generate(t: &D2KTargets, seed: u64) -> Result<DirectedGraph, ConstructError> {
    generate_with_stats(t, seed).map(|(g, _)| g)
}

pub fn generate_with_stats(
    t: &D2KTargets,
    seed: u64,
) -> Result<(DirectedGraph, ConstructionStats), ConstructError> {
    let mut state = ConstructionState::new(t, seed)?;
    state.run()?;
    let stats = state.stats();
    if stats.edges_added != t.edge_count() {
        return Err(ConstructError::Internal(format!(
            "{} iterations for {} edges",
            stats.edges_added,
            t.edge_count()
        )));
    }
    let g = state
        .to_directed()
        .map_err(|e| ConstructError::Internal(e.to_string()))?;
    Ok((g, stats))
}
