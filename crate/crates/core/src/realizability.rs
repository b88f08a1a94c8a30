//! Graphicality test for 2K targets.
//!
//! A target is realizable as a simple digraph iff
//!  I.   no JDAM entry joins two cells on the same side,
//!  II.  every positive entry plus its non-chord count fits in the complete
//!       bipartite graph between the two cells,
//!  III. each cell's stub total divided by its degree is an integer equal
//!       to the number of nodes the degree sequence puts in that cell.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::targets::{CellKey, D2KTargets};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Condition {
    I,
    II,
    III,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "condition")]
pub enum Violation {
    /// Edges between two cells of the same side.
    #[serde(rename = "I")]
    SameSide { a: CellKey, b: CellKey, count: u64 },
    /// `jdam + f > |V_a| * |V_b|`.
    #[serde(rename = "II")]
    Capacity {
        a: CellKey,
        b: CellKey,
        jdam: u64,
        non_chords: u64,
        capacity: u64,
    },
    /// Stub total of a cell disagrees with the degree sequence.
    #[serde(rename = "III")]
    Consistency {
        cell: CellKey,
        stubs: u64,
        degree: u32,
        nodes_in_dds: u64,
    },
}

impl Violation {
    pub fn condition(&self) -> Condition {
        match self {
            Violation::SameSide { .. } => Condition::I,
            Violation::Capacity { .. } => Condition::II,
            Violation::Consistency { .. } => Condition::III,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SameSide { a, b, count } => {
                write!(f, "I: jdam({a},{b}) = {count} joins cells on the same side")
            }
            Violation::Capacity {
                a,
                b,
                jdam,
                non_chords,
                capacity,
            } => write!(
                f,
                "II: jdam({a},{b}) + f = {jdam} + {non_chords} exceeds |V_a|*|V_b| = {capacity}"
            ),
            Violation::Consistency {
                cell,
                stubs,
                degree,
                nodes_in_dds,
            } => write!(
                f,
                "III: cell {cell} has {stubs} stubs at degree {degree}, \
                 but the degree sequence holds {nodes_in_dds} such nodes"
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RealizabilityReport {
    pub realizable: bool,
    pub violations: Vec<Violation>,
}

/// Structural problems that make a target meaningless rather than merely
/// non-graphical.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum MalformedTargets {
    #[error("jdam is not symmetric at ({0}, {1})")]
    Asymmetric(CellKey, CellKey),
    #[error("cell {cell} does not use {mode} labels")]
    WrongLabel { cell: CellKey, mode: crate::targets::Mode },
}

pub fn check(t: &D2KTargets) -> Result<RealizabilityReport, MalformedTargets> {
    let mode = t.mode();
    for (a, b, c) in t.jdam_entries() {
        for k in [a, b] {
            if !k.matches_mode(mode) {
                return Err(MalformedTargets::WrongLabel { cell: k, mode });
            }
        }
        if t.jdam(b, a) != c {
            return Err(MalformedTargets::Asymmetric(a, b));
        }
    }

    let sizes = t.cell_sizes();
    let size = |k: &CellKey| sizes.get(k).copied().unwrap_or(0);
    let mut violations = Vec::new();
    let mut stubs: BTreeMap<CellKey, u64> = BTreeMap::new();

    for (a, b, count) in t.jdam_entries() {
        *stubs.entry(a).or_insert(0) += count;
        if a > b {
            continue;
        }
        if a.side == b.side {
            violations.push(Violation::SameSide { a, b, count });
            continue;
        }
        let non_chords = t.f(a, b);
        let capacity = size(&a) * size(&b);
        if count + non_chords > capacity {
            violations.push(Violation::Capacity {
                a,
                b,
                jdam: count,
                non_chords,
                capacity,
            });
        }
    }

    for &cell in sizes.keys() {
        stubs.entry(cell).or_insert(0);
    }
    for (cell, stubs) in stubs {
        let degree = cell.degree();
        let nodes_in_dds = size(&cell);
        let consistent = degree > 0
            && stubs % degree as u64 == 0
            && stubs / degree as u64 == nodes_in_dds;
        if !consistent {
            violations.push(Violation::Consistency {
                cell,
                stubs,
                degree,
                nodes_in_dds,
            });
        }
    }

    Ok(RealizabilityReport {
        realizable: violations.is_empty(),
        violations,
    })
}
