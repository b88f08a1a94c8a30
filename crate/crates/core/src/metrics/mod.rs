//! Measurements used to compare synthetic graphs with measured ones.

pub mod census;
pub mod degree;
pub mod neighborhood;
pub mod paths;
pub mod spectrum;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::graph::{DirectedGraph, Side};

pub use census::{dyad_census, triad_census, DyadCensus, TriadCensus, TRIAD_LABELS};
pub use degree::{
    avg_neighbor_degree, degree_correlation, degree_histogram, neighbor_degree_profiles, CorrelationCell,
    Histogram, RationalMean,
};
pub use neighborhood::{dsp, expansion, without_zero_bin, DspVariant};
pub use paths::{
    betweenness, core_numbers, kcore_histogram, pick_sources, scc_sizes, shortest_path_lengths,
    strongly_connected_components, Betweenness, PathLengths,
};
pub use spectrum::{top_eigenvalues, Operator, Spectrum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Degree,
    DegreeCorrelation,
    AvgNeighborDegree,
    DyadCensus,
    TriadCensus,
    Dsp,
    Expansion,
    ShortestPaths,
    Scc,
    Kcore,
    Betweenness,
    Eigenvalues,
}

impl Metric {
    pub const ALL: [Metric; 12] = [
        Metric::Degree,
        Metric::DegreeCorrelation,
        Metric::AvgNeighborDegree,
        Metric::DyadCensus,
        Metric::TriadCensus,
        Metric::Dsp,
        Metric::Expansion,
        Metric::ShortestPaths,
        Metric::Scc,
        Metric::Kcore,
        Metric::Betweenness,
        Metric::Eigenvalues,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Degree => "degree",
            Metric::DegreeCorrelation => "degree_correlation",
            Metric::AvgNeighborDegree => "avg_neighbor_degree",
            Metric::DyadCensus => "dyad_census",
            Metric::TriadCensus => "triad_census",
            Metric::Dsp => "dsp",
            Metric::Expansion => "expansion",
            Metric::ShortestPaths => "shortest_paths",
            Metric::Scc => "scc",
            Metric::Kcore => "kcore",
            Metric::Betweenness => "betweenness",
            Metric::Eigenvalues => "eigenvalues",
        }
    }

    /// Parses a comma-separated list, or "all".
    pub fn parse_list(s: &str) -> Result<BTreeSet<Metric>, UnknownMetric> {
        if s.trim() == "all" {
            return Ok(Metric::ALL.into_iter().collect());
        }
        s.split(',')
            .map(str::trim)
            .filter(|x| !x.is_empty())
            .map(str::parse)
            .collect()
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("unknown metric {0:?}")]
pub struct UnknownMetric(pub String);

impl FromStr for Metric {
    type Err = UnknownMetric;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| UnknownMetric(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsConfig {
    /// Above this node count, BFS and betweenness use sampled sources.
    pub exact_threshold: usize,
    pub sample_sources: usize,
    pub eigen_k: usize,
    pub dense_eigen_limit: usize,
    pub operator: Operator,
    pub seed: u64,
}

impl Default for MetricsConfig {
    fn default() -> Self {
        MetricsConfig {
            exact_threshold: 5000,
            sample_sources: 100,
            eigen_k: 20,
            dense_eigen_limit: 2000,
            operator: Operator::Directed,
            seed: 1,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DegreeHistograms {
    #[serde(rename = "in")]
    pub in_degree: Histogram,
    #[serde(rename = "out")]
    pub out_degree: Histogram,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DspHistograms {
    pub two_path: Histogram,
    pub outgoing: Histogram,
    pub incoming: Histogram,
}

impl DspHistograms {
    pub fn get(&self, v: DspVariant) -> &Histogram {
        match v {
            DspVariant::IndependentTwoPaths => &self.two_path,
            DspVariant::Outgoing => &self.outgoing,
            DspVariant::Incoming => &self.incoming,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ExpansionValues {
    #[serde(rename = "in")]
    pub in_ratios: Vec<f64>,
    #[serde(rename = "out")]
    pub out_ratios: Vec<f64>,
}

/// Every requested measurement of one graph; unrequested ones are `None`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub n: usize,
    pub m: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub degree: Option<DegreeHistograms>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub degree_correlation: Option<Vec<CorrelationCell>>,
    /// Keyed "node_side-neighbor_side", then by degree.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub avg_neighbor_degree: Option<BTreeMap<String, BTreeMap<u32, RationalMean>>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub dyad_census: Option<DyadCensus>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub triad_census: Option<TriadCensus>,
    /// Full histograms over ordered pairs, zero bin included.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub dsp: Option<DspHistograms>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub expansion: Option<ExpansionValues>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub shortest_paths: Option<PathLengths>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub scc: Option<Histogram>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub kcore: Option<Histogram>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub betweenness: Option<Betweenness>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub eigenvalues: Option<Spectrum>,
    /// Interpretation choices behind the measurements present.
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub notes: BTreeMap<String, String>,
}

impl CensusReport {
    pub fn metrics(&self) -> BTreeSet<Metric> {
        let present = [
            (Metric::Degree, self.degree.is_some()),
            (Metric::DegreeCorrelation, self.degree_correlation.is_some()),
            (Metric::AvgNeighborDegree, self.avg_neighbor_degree.is_some()),
            (Metric::DyadCensus, self.dyad_census.is_some()),
            (Metric::TriadCensus, self.triad_census.is_some()),
            (Metric::Dsp, self.dsp.is_some()),
            (Metric::Expansion, self.expansion.is_some()),
            (Metric::ShortestPaths, self.shortest_paths.is_some()),
            (Metric::Scc, self.scc.is_some()),
            (Metric::Kcore, self.kcore.is_some()),
            (Metric::Betweenness, self.betweenness.is_some()),
            (Metric::Eigenvalues, self.eigenvalues.is_some()),
        ];
        present.into_iter().filter(|p| p.1).map(|p| p.0).collect()
    }
}

/// Computes the selected metrics.
pub fn measure(g: &DirectedGraph, which: &BTreeSet<Metric>, cfg: &MetricsConfig) -> CensusReport {
    let mut r = CensusReport {
        n: g.node_count(),
        m: g.edge_count(),
        ..Default::default()
    };
    let n = g.node_count();
    for &metric in which {
        match metric {
            Metric::Degree => {
                r.degree = Some(DegreeHistograms {
                    in_degree: degree_histogram(g, Side::In),
                    out_degree: degree_histogram(g, Side::Out),
                })
            }
            Metric::DegreeCorrelation => r.degree_correlation = Some(degree_correlation(g)),
            Metric::AvgNeighborDegree => r.avg_neighbor_degree = Some(neighbor_degree_profiles(g)),
            Metric::DyadCensus => r.dyad_census = Some(dyad_census(g)),
            Metric::TriadCensus => r.triad_census = Some(triad_census(g)),
            Metric::Dsp => {
                r.dsp = Some(DspHistograms {
                    two_path: dsp(g, DspVariant::IndependentTwoPaths),
                    outgoing: dsp(g, DspVariant::Outgoing),
                    incoming: dsp(g, DspVariant::Incoming),
                })
            }
            Metric::Expansion => {
                let ratios = |side| expansion(g, side).into_iter().map(|p| p.1).collect();
                r.expansion = Some(ExpansionValues {
                    in_ratios: ratios(Side::In),
                    out_ratios: ratios(Side::Out),
                });
                r.notes.insert(
                    "expansion".into(),
                    "second hop = nodes at exact distance 2, excluding the node and its first hop".into(),
                );
            }
            Metric::ShortestPaths => {
                let (src, sampled) = pick_sources(n, cfg.exact_threshold, cfg.sample_sources, cfg.seed);
                r.shortest_paths = Some(shortest_path_lengths(g, &src, sampled));
            }
            Metric::Scc => r.scc = Some(scc_sizes(g)),
            Metric::Kcore => {
                r.kcore = Some(kcore_histogram(g));
                r.notes
                    .insert("kcore".into(), "core numbers of the symmetrized simple graph".into());
            }
            Metric::Betweenness => {
                let (src, sampled) =
                    pick_sources(n, cfg.exact_threshold, cfg.sample_sources, cfg.seed.wrapping_add(1));
                r.betweenness = Some(betweenness(g, &src, sampled));
            }
            Metric::Eigenvalues => {
                r.eigenvalues = Some(top_eigenvalues(
                    g,
                    cfg.eigen_k,
                    cfg.operator,
                    cfg.dense_eigen_limit,
                    cfg.seed,
                ));
            }
        }
    }
    r
}

/// Every metric with the given configuration.
pub fn structural_suite(g: &DirectedGraph, cfg: &MetricsConfig) -> CensusReport {
    measure(g, &Metric::ALL.into_iter().collect(), cfg)
}
