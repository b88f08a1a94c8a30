//! Target distributions measured from a graph: sizes (0K), dyad census
//! (UMAN), directed degree sequence (1K) and the joint degree-attribute
//! matrix over bipartite cells (2K, in two partition modes).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{DirectedGraph, Side};

/// How nodes are partitioned into cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Cells keyed by a single one-sided degree.
    D2k,
    /// Cells keyed by the full `(d_in, d_out)` pair of the node.
    D2km,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::D2k => f.write_str("d2k"),
            Mode::D2km => f.write_str("d2km"),
        }
    }
}

/// Degree descriptor of a cell. Serializes as `3` or `[2, 5]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Degree(u32),
    Pair(u32, u32),
}

/// A part of the bipartite node partition.
///
/// Ordering is lexicographic on `(side, label)`, which fixes the canonical
/// iteration and serialization order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CellKey {
    pub side: Side,
    pub label: Label,
}

impl CellKey {
    pub fn new(side: Side, label: Label) -> Self {
        CellKey { side, label }
    }

    pub fn degree_cell(side: Side, degree: u32) -> Self {
        CellKey::new(side, Label::Degree(degree))
    }

    pub fn pair_cell(side: Side, d_in: u32, d_out: u32) -> Self {
        CellKey::new(side, Label::Pair(d_in, d_out))
    }

    /// Bipartite degree of every node in this cell.
    pub fn degree(&self) -> u32 {
        match (self.label, self.side) {
            (Label::Degree(d), _) => d,
            (Label::Pair(d_in, _), Side::In) => d_in,
            (Label::Pair(_, d_out), Side::Out) => d_out,
        }
    }

    /// Cell of a node with the given degrees on `side`, or `None` when the
    /// node has no stubs on that side.
    pub fn of_node(mode: Mode, side: Side, (d_in, d_out): (u32, u32)) -> Option<CellKey> {
        let deg = match side {
            Side::In => d_in,
            Side::Out => d_out,
        };
        if deg == 0 {
            return None;
        }
        Some(match mode {
            Mode::D2k => CellKey::degree_cell(side, deg),
            Mode::D2km => CellKey::pair_cell(side, d_in, d_out),
        })
    }

    pub fn matches_mode(&self, mode: Mode) -> bool {
        matches!(
            (mode, self.label),
            (Mode::D2k, Label::Degree(_)) | (Mode::D2km, Label::Pair(_, _))
        )
    }
}

impl fmt::Display for CellKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.label {
            Label::Degree(d) => write!(f, "{{{},{}}}", d, self.side),
            Label::Pair(i, o) => write!(f, "{{({},{}),{}}}", i, o, self.side),
        }
    }
}

pub type CellPair = (CellKey, CellKey);

/// Directed degree sequence plus the joint degree-attribute matrix.
///
/// `jdam` holds both orientations of every nonzero entry. Non-chord counts
/// `f` are derived from the degree sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct D2KTargets {
    mode: Mode,
    dds: Vec<(u32, u32)>,
    jdam: BTreeMap<CellPair, u64>,
    f: BTreeMap<CellPair, u64>,
}

impl D2KTargets {
    /// Builds targets from unordered JDAM entries; each `(a, b, count)` is
    /// mirrored to `(b, a)`. Conflicting duplicates leave the matrix
    /// asymmetric, which [`crate::realizability::check`] reports.
    pub fn from_entries<I>(mode: Mode, dds: Vec<(u32, u32)>, entries: I) -> Self
    where
        I: IntoIterator<Item = (CellKey, CellKey, u64)>,
    {
        let mut jdam = BTreeMap::new();
        for (a, b, count) in entries {
            if count == 0 {
                continue;
            }
            jdam.insert((a, b), count);
            if a != b {
                jdam.entry((b, a)).or_insert(count);
            }
        }
        Self::from_matrix(mode, dds, jdam)
    }

    /// Builds targets from a full matrix, stored as given.
    pub fn from_matrix(mode: Mode, dds: Vec<(u32, u32)>, mut jdam: BTreeMap<CellPair, u64>) -> Self {
        jdam.retain(|_, c| *c > 0);
        let f = non_chord_counts(mode, &dds);
        D2KTargets { mode, dds, jdam, f }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn n(&self) -> usize {
        self.dds.len()
    }

    pub fn dds(&self) -> &[(u32, u32)] {
        &self.dds
    }

    pub fn jdam(&self, a: CellKey, b: CellKey) -> u64 {
        self.jdam.get(&(a, b)).copied().unwrap_or(0)
    }

    /// Every stored entry, both orientations, in canonical order.
    pub fn jdam_entries(&self) -> impl Iterator<Item = (CellKey, CellKey, u64)> + '_ {
        self.jdam.iter().map(|(&(a, b), &c)| (a, b, c))
    }

    /// One entry per unordered pair, `a <= b`.
    pub fn canonical_entries(&self) -> Vec<(CellKey, CellKey, u64)> {
        self.jdam_entries().filter(|(a, b, _)| a <= b).collect()
    }

    pub fn f(&self, a: CellKey, b: CellKey) -> u64 {
        self.f.get(&(a, b)).copied().unwrap_or(0)
    }

    pub fn f_entries(&self) -> impl Iterator<Item = (CellKey, CellKey, u64)> + '_ {
        self.f.iter().map(|(&(a, b), &c)| (a, b, c))
    }

    pub fn is_symmetric(&self) -> bool {
        self.jdam
            .iter()
            .all(|(&(a, b), &c)| self.jdam.get(&(b, a)) == Some(&c))
    }

    /// Number of nodes in each cell induced by the degree sequence.
    pub fn cell_sizes(&self) -> BTreeMap<CellKey, u64> {
        let mut sizes = BTreeMap::new();
        for &d in &self.dds {
            for side in [Side::In, Side::Out] {
                if let Some(k) = CellKey::of_node(self.mode, side, d) {
                    *sizes.entry(k).or_insert(0) += 1;
                }
            }
        }
        sizes
    }

    /// `(Σ jdam) / 2`.
    pub fn edge_count(&self) -> u64 {
        self.jdam.values().sum::<u64>() / 2
    }

    pub fn d_max(&self) -> u32 {
        self.dds.iter().map(|&(i, o)| i.max(o)).max().unwrap_or(0)
    }

    /// Maps D2Km cells onto their one-sided D2K cells and sums entries.
    pub fn coarsen(&self) -> D2KTargets {
        if self.mode == Mode::D2k {
            return self.clone();
        }
        let flat = |k: CellKey| CellKey::degree_cell(k.side, k.degree());
        let mut jdam = BTreeMap::new();
        for (&(a, b), &c) in &self.jdam {
            *jdam.entry((flat(a), flat(b))).or_insert(0) += c;
        }
        D2KTargets::from_matrix(Mode::D2k, self.dds.clone(), jdam)
    }

    /// Equality with the degree sequence compared as a multiset.
    pub fn equivalent(&self, other: &D2KTargets) -> bool {
        let mut a = self.dds.clone();
        let mut b = other.dds.clone();
        a.sort_unstable();
        b.sort_unstable();
        self.mode == other.mode && a == b && self.jdam == other.jdam
    }
}

fn non_chord_counts(mode: Mode, dds: &[(u32, u32)]) -> BTreeMap<CellPair, u64> {
    let mut f = BTreeMap::new();
    for &d in dds {
        if let (Some(a), Some(b)) = (
            CellKey::of_node(mode, Side::In, d),
            CellKey::of_node(mode, Side::Out, d),
        ) {
            *f.entry((a, b)).or_insert(0) += 1;
            *f.entry((b, a)).or_insert(0) += 1;
        }
    }
    f
}

/// Measures the 2K target of `g` in the given partition mode.
pub fn extract_d2k(g: &DirectedGraph, mode: Mode) -> D2KTargets {
    let dds = g.degree_pairs();
    let mut jdam: BTreeMap<CellPair, u64> = BTreeMap::new();
    for &(u, v) in g.edges() {
        // Both endpoints have a positive degree on the relevant side.
        let a = CellKey::of_node(mode, Side::Out, dds[u]).expect("source has out-degree");
        let b = CellKey::of_node(mode, Side::In, dds[v]).expect("target has in-degree");
        *jdam.entry((a, b)).or_insert(0) += 1;
        *jdam.entry((b, a)).or_insert(0) += 1;
    }
    D2KTargets::from_matrix(mode, dds, jdam)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TargetError {
    #[error("dyad counts sum to {got}, expected n(n-1)/2 = {expected}")]
    DyadSum { got: u64, expected: u64 },
    #[error("edge count {m} exceeds n(n-1) = {max}")]
    TooManyEdges { m: u64, max: u64 },
    #[error("in-degree sum {sum_in} differs from out-degree sum {sum_out}")]
    DegreeSums { sum_in: u64, sum_out: u64 },
    #[error("node {node} has degree {degree} > n-1 = {max}")]
    DegreeTooLarge { node: usize, degree: u32, max: u64 },
}

/// Dyad census target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UmanTargets {
    pub n: usize,
    pub mutual: u64,
    pub asymmetric: u64,
    pub null: u64,
}

impl UmanTargets {
    pub fn validate(&self) -> Result<(), TargetError> {
        let expected = pairs(self.n as u64);
        let got = self.mutual + self.asymmetric + self.null;
        if got != expected {
            return Err(TargetError::DyadSum { got, expected });
        }
        Ok(())
    }
}

/// Node and edge count target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeTargets {
    pub n: usize,
    pub m: u64,
}

impl SizeTargets {
    pub fn validate(&self) -> Result<(), TargetError> {
        let max = 2 * pairs(self.n as u64);
        if self.m > max {
            return Err(TargetError::TooManyEdges { m: self.m, max });
        }
        Ok(())
    }
}

/// Directed degree sequence target.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DdsTargets {
    pub dds: Vec<(u32, u32)>,
}

impl DdsTargets {
    pub fn n(&self) -> usize {
        self.dds.len()
    }

    pub fn edge_count(&self) -> u64 {
        self.dds.iter().map(|&(_, o)| o as u64).sum()
    }

    pub fn validate(&self) -> Result<(), TargetError> {
        let sum_in: u64 = self.dds.iter().map(|&(i, _)| i as u64).sum();
        let sum_out = self.edge_count();
        if sum_in != sum_out {
            return Err(TargetError::DegreeSums { sum_in, sum_out });
        }
        let max = (self.n() as u64).saturating_sub(1);
        for (node, &(i, o)) in self.dds.iter().enumerate() {
            let degree = i.max(o);
            if degree as u64 > max {
                return Err(TargetError::DegreeTooLarge { node, degree, max });
            }
        }
        Ok(())
    }
}

pub(crate) fn pairs(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

pub fn extract_uman(g: &DirectedGraph) -> UmanTargets {
    let mut mutual = 0u64;
    let mut asymmetric = 0u64;
    for &(u, v) in g.edges() {
        if g.has_edge(v, u) {
            if u < v {
                mutual += 1;
            }
        } else {
            asymmetric += 1;
        }
    }
    let n = g.node_count();
    UmanTargets {
        n,
        mutual,
        asymmetric,
        null: pairs(n as u64) - mutual - asymmetric,
    }
}

pub fn extract_size(g: &DirectedGraph) -> SizeTargets {
    SizeTargets {
        n: g.node_count(),
        m: g.edge_count() as u64,
    }
}

pub fn extract_dds(g: &DirectedGraph) -> DdsTargets {
    DdsTargets {
        dds: g.degree_pairs(),
    }
}
