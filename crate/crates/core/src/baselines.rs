//! Reference generators: directed ER with a fixed edge count (D0K), fixed
//! dyad census (UMAN), and fixed directed degree sequence (D1K).

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashSet;
use thiserror::Error;

use crate::graph::{pair_key, DirectedGraph};
use crate::swaps::{random_c6_swap, random_double_swap};
use crate::targets::{pairs, DdsTargets, SizeTargets, TargetError, UmanTargets};

/// Probability that a randomization attempt is a triangle reversal.
pub const C6_PROBABILITY: f64 = 0.1;
const C6_PROBES: usize = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BaselineError {
    #[error(transparent)]
    Target(#[from] TargetError),
    #[error("degree sequence is not digraphical: node {node} needs {needed} targets, {available} available")]
    NotGraphical {
        node: usize,
        needed: u32,
        available: usize,
    },
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Distinct random items by rejection; `draw` must be uniform over the
/// universe.
fn sample_distinct<R: Rng>(
    rng: &mut R,
    k: u64,
    mut draw: impl FnMut(&mut R) -> u64,
) -> (Vec<u64>, FxHashSet<u64>) {
    let mut seen = FxHashSet::default();
    let mut order = Vec::with_capacity(k as usize);
    while (order.len() as u64) < k {
        let x = draw(rng);
        if seen.insert(x) {
            order.push(x);
        }
    }
    (order, seen)
}

/// Uniform simple digraph with exactly `t.m` edges.
pub fn gen_d0k(t: &SizeTargets, seed: u64) -> Result<DirectedGraph, BaselineError> {
    t.validate()?;
    let n = t.n;
    let total = 2 * pairs(n as u64);
    let mut rng = rng_for(seed);
    let mut g = DirectedGraph::new(n);
    let draw = |rng: &mut ChaCha8Rng| loop {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v {
            return pair_key(u, v);
        }
    };
    if t.m <= total / 2 {
        let (order, _) = sample_distinct(&mut rng, t.m, draw);
        for k in order {
            let (u, v) = crate::graph::unpack_key(k);
            g.add_edge(u, v).expect("distinct non-loop pairs");
        }
    } else {
        let (_, absent) = sample_distinct(&mut rng, total - t.m, draw);
        for u in 0..n {
            for v in 0..n {
                if u != v && !absent.contains(&pair_key(u, v)) {
                    g.add_edge(u, v).expect("distinct non-loop pairs");
                }
            }
        }
    }
    Ok(g)
}

/// Uniform simple digraph with the given mutual/asymmetric/null counts.
pub fn gen_uman(t: &UmanTargets, seed: u64) -> Result<DirectedGraph, BaselineError> {
    t.validate()?;
    let n = t.n;
    let total = pairs(n as u64);
    let linked = t.mutual + t.asymmetric;
    let mut rng = rng_for(seed);
    let draw = |rng: &mut ChaCha8Rng| loop {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v {
            return pair_key(u.min(v), u.max(v));
        }
    };
    let mut chosen: Vec<u64> = if linked <= total / 2 {
        sample_distinct(&mut rng, linked, draw).0
    } else {
        let (_, null) = sample_distinct(&mut rng, total - linked, draw);
        let mut rest = Vec::with_capacity(linked as usize);
        for u in 0..n {
            for v in u + 1..n {
                let k = pair_key(u, v);
                if !null.contains(&k) {
                    rest.push(k);
                }
            }
        }
        rest
    };
    chosen.shuffle(&mut rng);

    let mut g = DirectedGraph::new(n);
    for (i, &k) in chosen.iter().enumerate() {
        let (u, v) = crate::graph::unpack_key(k);
        if (i as u64) < t.mutual {
            g.add_edge(u, v).expect("fresh dyad");
            g.add_edge(v, u).expect("fresh dyad");
        } else if rng.gen_bool(0.5) {
            g.add_edge(u, v).expect("fresh dyad");
        } else {
            g.add_edge(v, u).expect("fresh dyad");
        }
    }
    Ok(g)
}

/// Simple digraph with per-node `(d_in, d_out)` equal to `t.dds`.
///
/// A Kleitman-Wang construction (each node, largest out-degree first, sends
/// its edges to the nodes with the largest remaining `(in, out)` demand)
/// certifies graphicality; then `swap_rounds` randomization attempts are
/// made (default `10 m`), each a degree-preserving double swap or, with
/// probability [`C6_PROBABILITY`], a triangle reversal.
pub fn gen_d1k(t: &DdsTargets, seed: u64, swap_rounds: Option<u64>) -> Result<DirectedGraph, BaselineError> {
    t.validate()?;
    let n = t.n();
    let mut rng = rng_for(seed);
    let mut tiebreak: Vec<u32> = (0..n as u32).collect();
    tiebreak.shuffle(&mut rng);

    let mut in_rem: Vec<u32> = t.dds.iter().map(|d| d.0).collect();
    let mut out_rem: Vec<u32> = t.dds.iter().map(|d| d.1).collect();
    // Keyed by remaining (in, out) demand; only nodes still needing in-edges.
    let mut demand: BTreeSet<(u32, u32, u32, usize)> = (0..n)
        .filter(|&v| in_rem[v] > 0)
        .map(|v| (in_rem[v], out_rem[v], tiebreak[v], v))
        .collect();

    let mut order: Vec<usize> = (0..n).filter(|&v| out_rem[v] > 0).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(out_rem[v]), tiebreak[v]));

    let mut g = DirectedGraph::new(n);
    let mut picked = Vec::new();
    for v in order {
        let need = out_rem[v];
        picked.clear();
        picked.extend(
            demand
                .iter()
                .rev()
                .filter(|e| e.3 != v)
                .take(need as usize)
                .copied(),
        );
        if picked.len() < need as usize {
            return Err(BaselineError::NotGraphical {
                node: v,
                needed: need,
                available: picked.len(),
            });
        }
        if in_rem[v] > 0 {
            demand.remove(&(in_rem[v], out_rem[v], tiebreak[v], v));
        }
        out_rem[v] = 0;
        if in_rem[v] > 0 {
            demand.insert((in_rem[v], 0, tiebreak[v], v));
        }
        for &entry in &picked {
            let w = entry.3;
            demand.remove(&entry);
            in_rem[w] -= 1;
            if in_rem[w] > 0 {
                demand.insert((in_rem[w], out_rem[w], tiebreak[w], w));
            }
            g.add_edge(v, w).expect("each target picked once per source");
        }
    }
    if let Some(&(_, _, _, node)) = demand.iter().next() {
        return Err(BaselineError::NotGraphical {
            node,
            needed: in_rem[node],
            available: 0,
        });
    }

    let rounds = swap_rounds.unwrap_or(10 * g.edge_count() as u64);
    for _ in 0..rounds {
        if rng.gen_bool(C6_PROBABILITY) {
            random_c6_swap(&mut g, &mut rng, C6_PROBES);
        } else {
            random_double_swap(&mut g, &mut rng);
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::targets::{extract_dds, extract_uman};

    #[test]
    fn d0k_complete_and_empty() {
        let g = gen_d0k(&SizeTargets { n: 3, m: 6 }, 4).unwrap();
        assert_eq!(g.edge_count(), 6);
        let g = gen_d0k(&SizeTargets { n: 10, m: 0 }, 4).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (10, 0));
        assert!(gen_d0k(&SizeTargets { n: 3, m: 7 }, 0).is_err());
    }

    #[test]
    fn d0k_dense_branch_is_exact() {
        for seed in 0..20 {
            let g = gen_d0k(&SizeTargets { n: 7, m: 40 }, seed).unwrap();
            assert_eq!(g.edge_count(), 40);
        }
    }

    #[test]
    fn uman_extremes() {
        let full = UmanTargets {
            n: 3,
            mutual: 3,
            asymmetric: 0,
            null: 0,
        };
        assert_eq!(gen_uman(&full, 1).unwrap().edge_count(), 6);
        let tour = UmanTargets {
            n: 3,
            mutual: 0,
            asymmetric: 3,
            null: 0,
        };
        let g = gen_uman(&tour, 1).unwrap();
        assert_eq!(extract_uman(&g), tour);
        let bad = UmanTargets {
            n: 3,
            mutual: 3,
            asymmetric: 1,
            null: 0,
        };
        assert!(gen_uman(&bad, 0).is_err());
    }

    #[test]
    fn d1k_forced_shapes() {
        let t = DdsTargets {
            dds: vec![(1, 1), (1, 1), (1, 1)],
        };
        let g = gen_d1k(&t, 9, None).unwrap();
        assert_eq!(extract_dds(&g), t);
        let t = DdsTargets {
            dds: vec![(0, 2), (1, 0), (1, 0)],
        };
        let g = gen_d1k(&t, 9, None).unwrap();
        assert_eq!(g.sorted_edges(), vec![(0, 1), (0, 2)]);
        assert!(gen_d1k(&DdsTargets { dds: vec![(2, 2)] }, 0, None).is_err());
    }

    #[test]
    fn d1k_reports_non_graphical_sequences() {
        // Both sequences have matching sums; only the second needs a loop.
        let t = DdsTargets {
            dds: vec![(0, 2), (0, 2), (2, 0), (2, 0), (0, 0)],
        };
        assert!(gen_d1k(&t, 0, Some(0)).is_ok());
        let t = DdsTargets {
            dds: vec![(2, 2), (2, 2), (0, 0)],
        };
        assert!(matches!(
            gen_d1k(&t, 0, Some(0)),
            Err(BaselineError::NotGraphical { .. })
        ));
    }

    #[test]
    fn d0k_pair_frequency_matches_inclusion_probability() {
        let t = SizeTargets { n: 4, m: 5 };
        let mut hits = [[0u32; 4]; 4];
        let runs = 10_000;
        for seed in 0..runs {
            for &(u, v) in gen_d0k(&t, seed).unwrap().edges() {
                hits[u][v] += 1;
            }
        }
        for u in 0..4 {
            for v in 0..4 {
                if u != v {
                    let freq = hits[u][v] as f64 / runs as f64;
                    assert!((freq - 5.0 / 12.0).abs() < 0.02, "({u},{v}) at {freq}");
                }
            }
        }
    }

    #[test]
    fn uman_round_trips_random_censuses() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for seed in 0..100 {
            let n = rng.gen_range(0..40usize);
            let total = pairs(n as u64);
            let mutual = rng.gen_range(0..=total);
            let asymmetric = rng.gen_range(0..=total - mutual);
            let t = UmanTargets {
                n,
                mutual,
                asymmetric,
                null: total - mutual - asymmetric,
            };
            let g = gen_uman(&t, seed).unwrap();
            assert_eq!(extract_uman(&g), t);
        }
    }
}
