//! Distances between the measurements of an original graph and of an
//! ensemble of synthetic graphs.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::metrics::{without_zero_bin, CensusReport, Histogram, Metric, RationalMean, TRIAD_LABELS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceKind {
    /// Largest absolute difference between the two empirical CDFs.
    CdfSup,
    /// Largest relative error over matched entries.
    MaxRelative,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub kind: DistanceKind,
    pub mean: f64,
    pub std: f64,
    /// One distance per synthetic instance, in input order.
    pub values: Vec<f64>,
}

impl Summary {
    fn new(kind: DistanceKind, values: Vec<f64>) -> Self {
        let k = values.len() as f64;
        let (mean, std) = if values.is_empty() {
            (0.0, 0.0)
        } else {
            let mean = values.iter().sum::<f64>() / k;
            let var = values.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / k;
            (mean, var.sqrt())
        };
        Summary { kind, mean, std, values }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub v: u32,
    pub instances: usize,
    /// Metric -> component (e.g. "in", "two_path") -> distance summary.
    pub metrics: BTreeMap<Metric, BTreeMap<String, Summary>>,
}

impl CompareReport {
    pub fn to_json(&self) -> String {
        crate::io::canonical_json(self)
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CompareError {
    #[error("metric {metric} missing from {which}")]
    Missing { metric: Metric, which: String },
}

/// `sup |F_a - F_b|` for two weighted histograms.
pub fn histogram_cdf_distance(a: &Histogram, b: &Histogram) -> f64 {
    let ta: u64 = a.values().sum();
    let tb: u64 = b.values().sum();
    match (ta, tb) {
        (0, 0) => return 0.0,
        (0, _) | (_, 0) => return 1.0,
        _ => {}
    }
    let keys: BTreeSet<u64> = a.keys().chain(b.keys()).copied().collect();
    let (mut ca, mut cb, mut best) = (0u64, 0u64, 0.0f64);
    for k in keys {
        ca += a.get(&k).copied().unwrap_or(0);
        cb += b.get(&k).copied().unwrap_or(0);
        // exact when the cumulative counts agree
        if ca * tb != cb * ta {
            best = best.max((ca as f64 / ta as f64 - cb as f64 / tb as f64).abs());
        }
    }
    best
}

/// `sup |F_a - F_b|` for two samples (two-sample Kolmogorov-Smirnov).
pub fn sample_cdf_distance(a: &[f64], b: &[f64]) -> f64 {
    match (a.len(), b.len()) {
        (0, 0) => return 0.0,
        (0, _) | (_, 0) => return 1.0,
        _ => {}
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len(), b.len());
    let (mut i, mut j, mut best) = (0, 0, 0.0f64);
    while i < na || j < nb {
        let x = match (a.get(i), b.get(j)) {
            (Some(&p), Some(&q)) => p.min(q),
            (Some(&p), None) => p,
            (None, Some(&q)) => q,
            (None, None) => unreachable!(),
        };
        while i < na && a[i] <= x {
            i += 1;
        }
        while j < nb && b[j] <= x {
            j += 1;
        }
        if i * nb != j * na {
            best = best.max((i as f64 / na as f64 - j as f64 / nb as f64).abs());
        }
    }
    best
}

/// `|g - o| / |o|`, with a zero reference giving 0 for an exact match and
/// 1 otherwise.
pub fn relative_error(o: f64, g: f64) -> f64 {
    if o == g {
        0.0
    } else if o == 0.0 {
        1.0
    } else {
        (g - o).abs() / o.abs()
    }
}

/// Largest relative error over the union of keys; a missing key reads 0.
pub fn max_relative_error<K: Ord + Clone>(o: &BTreeMap<K, f64>, g: &BTreeMap<K, f64>) -> f64 {
    o.keys()
        .chain(g.keys())
        .map(|k| {
            relative_error(
                o.get(k).copied().unwrap_or(0.0),
                g.get(k).copied().unwrap_or(0.0),
            )
        })
        .fold(0.0, f64::max)
}

enum Component {
    Hist(Histogram),
    Samples(Vec<f64>),
    Values(BTreeMap<String, f64>),
}

fn means(m: &BTreeMap<u32, RationalMean>) -> BTreeMap<String, f64> {
    m.iter().map(|(d, r)| (d.to_string(), r.mean())).collect()
}

fn components(r: &CensusReport, metric: Metric) -> Option<Vec<(String, Component)>> {
    use Component::*;
    let out = match metric {
        Metric::Degree => {
            let d = r.degree.as_ref()?;
            vec![
                ("in".into(), Hist(d.in_degree.clone())),
                ("out".into(), Hist(d.out_degree.clone())),
            ]
        }
        Metric::DegreeCorrelation => {
            let c = r.degree_correlation.as_ref()?;
            let cells = c
                .iter()
                .map(|x| (format!("{},{}", x.out_degree, x.in_degree), x.edges as f64))
                .collect();
            vec![("jdam".into(), Values(cells))]
        }
        Metric::AvgNeighborDegree => r
            .avg_neighbor_degree
            .as_ref()?
            .iter()
            .map(|(k, m)| (k.clone(), Values(means(m))))
            .collect(),
        Metric::DyadCensus => {
            let d = r.dyad_census.as_ref()?;
            let v = [("mutual", d.mutual), ("asymmetric", d.asymmetric), ("null", d.null)]
                .into_iter()
                .map(|(k, c)| (k.to_string(), c as f64))
                .collect();
            vec![("counts".into(), Values(v))]
        }
        Metric::TriadCensus => {
            let t = r.triad_census.as_ref()?;
            let v = TRIAD_LABELS
                .iter()
                .zip(t.0)
                .map(|(l, c)| (l.to_string(), c as f64))
                .collect();
            vec![("counts".into(), Values(v))]
        }
        Metric::Dsp => {
            let d = r.dsp.as_ref()?;
            let mut v = Vec::new();
            for (name, h) in [("two_path", &d.two_path), ("outgoing", &d.outgoing), ("incoming", &d.incoming)] {
                v.push((name.to_string(), Hist(h.clone())));
                v.push((format!("{name}_nonzero"), Hist(without_zero_bin(h))));
            }
            v
        }
        Metric::Expansion => {
            let e = r.expansion.as_ref()?;
            vec![
                ("in".into(), Samples(e.in_ratios.clone())),
                ("out".into(), Samples(e.out_ratios.clone())),
            ]
        }
        Metric::ShortestPaths => vec![("lengths".into(), Hist(r.shortest_paths.as_ref()?.histogram.clone()))],
        Metric::Scc => vec![("sizes".into(), Hist(r.scc.as_ref()?.clone()))],
        Metric::Kcore => vec![("cores".into(), Hist(r.kcore.as_ref()?.clone()))],
        Metric::Betweenness => vec![("scores".into(), Samples(r.betweenness.as_ref()?.scores.clone()))],
        Metric::Eigenvalues => {
            let v = r
                .eigenvalues
                .as_ref()?
                .magnitudes
                .iter()
                .enumerate()
                .map(|(i, x)| (format!("{:03}", i + 1), *x))
                .collect();
            vec![("magnitudes".into(), Values(v))]
        }
    };
    Some(out)
}

fn distance(a: &Component, b: &Component) -> (DistanceKind, f64) {
    match (a, b) {
        (Component::Hist(x), Component::Hist(y)) => (DistanceKind::CdfSup, histogram_cdf_distance(x, y)),
        (Component::Samples(x), Component::Samples(y)) => (DistanceKind::CdfSup, sample_cdf_distance(x, y)),
        (Component::Values(x), Component::Values(y)) => (DistanceKind::MaxRelative, max_relative_error(x, y)),
        _ => unreachable!("components of one metric share a shape"),
    }
}

/// Distances from `original` to each of `generated` for every metric in
/// `which`, summarized as mean and standard deviation over instances.
pub fn compare(
    original: &CensusReport,
    generated: &[CensusReport],
    which: &BTreeSet<Metric>,
) -> Result<CompareReport, CompareError> {
    let mut metrics = BTreeMap::new();
    for &metric in which {
        let base = components(original, metric).ok_or(CompareError::Missing {
            metric,
            which: "original".into(),
        })?;
        let mut per_component: BTreeMap<String, (DistanceKind, Vec<f64>)> = BTreeMap::new();
        for (i, g) in generated.iter().enumerate() {
            let comps = components(g, metric).ok_or_else(|| CompareError::Missing {
                metric,
                which: format!("instance {i}"),
            })?;
            let comps: BTreeMap<String, Component> = comps.into_iter().collect();
            for (name, a) in &base {
                let (kind, d) = match comps.get(name) {
                    Some(b) => distance(a, b),
                    None => (DistanceKind::MaxRelative, 1.0),
                };
                per_component
                    .entry(name.clone())
                    .or_insert((kind, Vec::new()))
                    .1
                    .push(d);
            }
        }
        if generated.is_empty() {
            for (name, a) in &base {
                let kind = distance(a, a).0;
                per_component.insert(name.clone(), (kind, Vec::new()));
            }
        }
        metrics.insert(
            metric,
            per_component
                .into_iter()
                .map(|(k, (kind, v))| (k, Summary::new(kind, v)))
                .collect(),
        );
    }
    Ok(CompareReport {
        v: crate::io::SCHEMA_VERSION,
        instances: generated.len(),
        metrics,
    })
}
