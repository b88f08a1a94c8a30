//! Edge-list text files and the JSON target/metrics files.

use std::fmt;
use std::fs;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::DirectedGraph;
use crate::metrics::{CensusReport, MetricsConfig};
use crate::targets::{
    extract_d2k, extract_dds, extract_size, extract_uman, CellKey, D2KTargets, DdsTargets, Mode,
    SizeTargets, TargetError, UmanTargets,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema version {0} (expected {SCHEMA_VERSION})")]
    Version(u32),
    #[error("invalid target file: {0}")]
    Schema(String),
    #[error(transparent)]
    Target(#[from] TargetError),
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> IoError + '_ {
    move |source| IoError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Reads `source target` pairs, one per line. Blank lines and lines whose
/// first non-blank character is `#` are skipped.
pub fn parse_edge_list<R: Read>(reader: R) -> Result<Vec<(u64, u64)>, IoError> {
    let mut out = Vec::new();
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| IoError::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let mut fields = t.split_whitespace();
        let mut id = |what: &str| -> Result<u64, IoError> {
            let f = fields.next().ok_or_else(|| IoError::Parse {
                line: line_no,
                message: format!("missing {what} id"),
            })?;
            f.parse().map_err(|_| IoError::Parse {
                line: line_no,
                message: format!("{what} id {f:?} is not a non-negative integer"),
            })
        };
        let pair = (id("source")?, id("target")?);
        if let Some(extra) = fields.next() {
            return Err(IoError::Parse {
                line: line_no,
                message: format!("unexpected extra field {extra:?}"),
            });
        }
        out.push(pair);
    }
    Ok(out)
}

/// Reads and cleans an edge list into a simple digraph.
pub fn read_edge_list(path: &Path) -> Result<DirectedGraph, IoError> {
    let f = fs::File::open(path).map_err(io_err(path))?;
    Ok(DirectedGraph::from_edge_list(&parse_edge_list(f)?))
}

/// Writes a `# Nodes: n Edges: m` header and the edges in sorted order,
/// using original labels when the graph carries them.
pub fn write_edge_list<W: Write>(g: &DirectedGraph, w: W) -> io::Result<()> {
    let mut w = BufWriter::new(w);
    writeln!(w, "# Nodes: {} Edges: {}", g.node_count(), g.edge_count())?;
    for (u, v) in g.sorted_edges() {
        writeln!(w, "{}\t{}", g.label(u), g.label(v))?;
    }
    w.flush()
}

pub fn save_edge_list(g: &DirectedGraph, path: &Path) -> Result<(), IoError> {
    let f = fs::File::create(path).map_err(io_err(path))?;
    write_edge_list(g, f).map_err(io_err(path))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    D0k,
    Uman,
    D1k,
    D2k,
    D2km,
}

impl Model {
    pub const ALL: [Model; 5] = [Model::D0k, Model::Uman, Model::D1k, Model::D2k, Model::D2km];

    pub fn name(self) -> &'static str {
        match self {
            Model::D0k => "d0k",
            Model::Uman => "uman",
            Model::D1k => "d1k",
            Model::D2k => "d2k",
            Model::D2km => "d2km",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Model::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown model {s:?} (expected d0k, uman, d1k, d2k or d2km)"))
    }
}

/// A target of any model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TargetFile {
    D0k(SizeTargets),
    Uman(UmanTargets),
    D1k(DdsTargets),
    D2k(D2KTargets),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JdamEntry {
    a: CellKey,
    b: CellKey,
    count: u64,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTarget {
    v: u32,
    model: Option<Model>,
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mutual: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    asymmetric: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    null: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dds: Option<Vec<(u32, u32)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    jdam: Option<Vec<JdamEntry>>,
}

fn require<T>(field: Option<T>, name: &str, model: Model) -> Result<T, IoError> {
    field.ok_or_else(|| IoError::Schema(format!("{model} target needs field {name:?}")))
}

fn forbid<T>(field: &Option<T>, name: &str, model: Model) -> Result<(), IoError> {
    match field {
        Some(_) => Err(IoError::Schema(format!("{model} target has unexpected field {name:?}"))),
        None => Ok(()),
    }
}

impl TargetFile {
    pub fn extract(g: &DirectedGraph, model: Model) -> TargetFile {
        match model {
            Model::D0k => TargetFile::D0k(extract_size(g)),
            Model::Uman => TargetFile::Uman(extract_uman(g)),
            Model::D1k => TargetFile::D1k(extract_dds(g)),
            Model::D2k => TargetFile::D2k(extract_d2k(g, Mode::D2k)),
            Model::D2km => TargetFile::D2k(extract_d2k(g, Mode::D2km)),
        }
    }

    pub fn model(&self) -> Model {
        match self {
            TargetFile::D0k(_) => Model::D0k,
            TargetFile::Uman(_) => Model::Uman,
            TargetFile::D1k(_) => Model::D1k,
            TargetFile::D2k(t) => match t.mode() {
                Mode::D2k => Model::D2k,
                Mode::D2km => Model::D2km,
            },
        }
    }

    pub fn n(&self) -> usize {
        match self {
            TargetFile::D0k(t) => t.n,
            TargetFile::Uman(t) => t.n,
            TargetFile::D1k(t) => t.n(),
            TargetFile::D2k(t) => t.n(),
        }
    }

    fn to_raw(&self) -> RawTarget {
        let mut r = RawTarget {
            v: SCHEMA_VERSION,
            model: Some(self.model()),
            n: self.n(),
            ..Default::default()
        };
        match self {
            TargetFile::D0k(t) => r.m = Some(t.m),
            TargetFile::Uman(t) => {
                r.mutual = Some(t.mutual);
                r.asymmetric = Some(t.asymmetric);
                r.null = Some(t.null);
            }
            TargetFile::D1k(t) => r.dds = Some(t.dds.clone()),
            TargetFile::D2k(t) => {
                r.dds = Some(t.dds().to_vec());
                r.jdam = Some(
                    t.canonical_entries()
                        .into_iter()
                        .map(|(a, b, count)| JdamEntry { a, b, count })
                        .collect(),
                );
            }
        }
        r
    }

    fn from_raw(r: RawTarget) -> Result<TargetFile, IoError> {
        if r.v != SCHEMA_VERSION {
            return Err(IoError::Version(r.v));
        }
        let model = r
            .model
            .ok_or_else(|| IoError::Schema("missing field \"model\"".into()))?;
        if model != Model::D0k {
            forbid(&r.m, "m", model)?;
        }
        if model != Model::Uman {
            forbid(&r.mutual, "mutual", model)?;
            forbid(&r.asymmetric, "asymmetric", model)?;
            forbid(&r.null, "null", model)?;
        }
        if !matches!(model, Model::D1k | Model::D2k | Model::D2km) {
            forbid(&r.dds, "dds", model)?;
        }
        if !matches!(model, Model::D2k | Model::D2km) {
            forbid(&r.jdam, "jdam", model)?;
        }
        let dds_of = |dds: Option<Vec<(u32, u32)>>| -> Result<Vec<(u32, u32)>, IoError> {
            let dds = require(dds, "dds", model)?;
            if dds.len() != r.n {
                return Err(IoError::Schema(format!("n = {} but dds has {} entries", r.n, dds.len())));
            }
            Ok(dds)
        };
        let t = match model {
            Model::D0k => {
                let t = SizeTargets {
                    n: r.n,
                    m: require(r.m, "m", model)?,
                };
                t.validate()?;
                TargetFile::D0k(t)
            }
            Model::Uman => {
                let t = UmanTargets {
                    n: r.n,
                    mutual: require(r.mutual, "mutual", model)?,
                    asymmetric: require(r.asymmetric, "asymmetric", model)?,
                    null: require(r.null, "null", model)?,
                };
                t.validate()?;
                TargetFile::Uman(t)
            }
            Model::D1k => {
                let t = DdsTargets { dds: dds_of(r.dds)? };
                t.validate()?;
                TargetFile::D1k(t)
            }
            Model::D2k | Model::D2km => {
                let mode = if model == Model::D2k { Mode::D2k } else { Mode::D2km };
                let dds = dds_of(r.dds)?;
                let entries = require(r.jdam, "jdam", model)?;
                let mut seen = std::collections::BTreeSet::new();
                for e in &entries {
                    if e.a > e.b {
                        return Err(IoError::Schema(format!("jdam entry ({}, {}) is not in canonical order", e.a, e.b)));
                    }
                    if !seen.insert((e.a, e.b)) {
                        return Err(IoError::Schema(format!("duplicate jdam entry ({}, {})", e.a, e.b)));
                    }
                    if !e.a.matches_mode(mode) || !e.b.matches_mode(mode) {
                        return Err(IoError::Schema(format!("jdam entry ({}, {}) does not use {mode} labels", e.a, e.b)));
                    }
                }
                TargetFile::D2k(D2KTargets::from_entries(
                    mode,
                    dds,
                    entries.into_iter().map(|e| (e.a, e.b, e.count)),
                ))
            }
        };
        Ok(t)
    }

    /// Canonical JSON: sorted keys, cells in canonical order.
    pub fn to_json(&self) -> String {
        canonical_json(&self.to_raw())
    }

    pub fn from_json(s: &str) -> Result<TargetFile, IoError> {
        TargetFile::from_raw(serde_json::from_str(s)?)
    }

    pub fn save(&self, path: &Path) -> Result<(), IoError> {
        fs::write(path, self.to_json()).map_err(io_err(path))
    }

    pub fn load(path: &Path) -> Result<TargetFile, IoError> {
        TargetFile::from_json(&fs::read_to_string(path).map_err(io_err(path))?)
    }
}

/// Serializes through a `serde_json::Value`, whose maps keep keys sorted.
pub(crate) fn canonical_json<T: Serialize>(x: &T) -> String {
    let v = serde_json::to_value(x).expect("in-memory serialization cannot fail");
    let mut s = serde_json::to_string(&v).expect("value serialization cannot fail");
    s.push('\n');
    s
}

/// Measurements of one graph, with the configuration that produced them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsFile {
    pub v: u32,
    pub source: String,
    pub config: MetricsConfig,
    pub report: CensusReport,
}

impl MetricsFile {
    pub fn new(source: impl Into<String>, config: MetricsConfig, report: CensusReport) -> Self {
        MetricsFile {
            v: SCHEMA_VERSION,
            source: source.into(),
            config,
            report,
        }
    }

    pub fn to_json(&self) -> String {
        canonical_json(self)
    }

    pub fn from_json(s: &str) -> Result<MetricsFile, IoError> {
        let m: MetricsFile = serde_json::from_str(s)?;
        if m.v != SCHEMA_VERSION {
            return Err(IoError::Version(m.v));
        }
        Ok(m)
    }

    pub fn save(&self, path: &Path) -> Result<(), IoError> {
        fs::write(path, self.to_json()).map_err(io_err(path))
    }

    pub fn load(path: &Path) -> Result<MetricsFile, IoError> {
        MetricsFile::from_json(&fs::read_to_string(path).map_err(io_err(path))?)
    }
}

fn pairs_csv(h: &crate::metrics::Histogram) -> String {
    h.iter().map(|(v, c)| format!("{v},{c}\n")).collect()
}

/// One CSV per measurement present in `r`, named `<metric>.csv` in `dir`.
pub fn write_metrics_csv(r: &CensusReport, dir: &Path) -> Result<Vec<String>, IoError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut files: Vec<(String, String)> = Vec::new();
    let rows = |name: &str, h: &crate::metrics::Histogram| {
        h.iter().map(|(v, c)| format!("{name},{v},{c}\n")).collect::<String>()
    };
    if let Some(d) = &r.degree {
        files.push((
            "degree".into(),
            "side,value,count\n".to_string() + &rows("in", &d.in_degree) + &rows("out", &d.out_degree),
        ));
    }
    if let Some(c) = &r.degree_correlation {
        let mut s = String::from("out_degree,in_degree,edges\n");
        for x in c {
            s.push_str(&format!("{},{},{}\n", x.out_degree, x.in_degree, x.edges));
        }
        files.push(("degree_correlation".into(), s));
    }
    if let Some(p) = &r.avg_neighbor_degree {
        let mut s = String::from("profile,degree,sum,count,mean\n");
        for (k, m) in p {
            for (d, a) in m {
                s.push_str(&format!("{k},{d},{},{},{}\n", a.sum, a.count, a.mean()));
            }
        }
        files.push(("avg_neighbor_degree".into(), s));
    }
    if let Some(d) = &r.dyad_census {
        files.push((
            "dyad_census".into(),
            format!("class,count\nmutual,{}\nasymmetric,{}\nnull,{}\n", d.mutual, d.asymmetric, d.null),
        ));
    }
    if let Some(t) = &r.triad_census {
        let mut s = String::from("class,count\n");
        for (l, c) in crate::metrics::TRIAD_LABELS.iter().zip(t.0) {
            s.push_str(&format!("{l},{c}\n"));
        }
        files.push(("triad_census".into(), s));
    }
    if let Some(d) = &r.dsp {
        let mut s = String::from("variant,value,count\n");
        for (name, h) in [("two_path", &d.two_path), ("outgoing", &d.outgoing), ("incoming", &d.incoming)] {
            s.push_str(&rows(name, h));
        }
        files.push(("dsp".into(), s));
    }
    if let Some(e) = &r.expansion {
        let mut s = String::from("direction,ratio\n");
        for (name, xs) in [("in", &e.in_ratios), ("out", &e.out_ratios)] {
            for x in xs {
                s.push_str(&format!("{name},{x}\n"));
            }
        }
        files.push(("expansion".into(), s));
    }
    if let Some(p) = &r.shortest_paths {
        files.push(("shortest_paths".into(), "length,pairs\n".to_string() + &pairs_csv(&p.histogram)));
    }
    if let Some(h) = &r.scc {
        files.push(("scc".into(), "size,components\n".to_string() + &pairs_csv(h)));
    }
    if let Some(h) = &r.kcore {
        files.push(("kcore".into(), "core,nodes\n".to_string() + &pairs_csv(h)));
    }
    if let Some(b) = &r.betweenness {
        let mut s = String::from("node,score\n");
        for (v, x) in b.scores.iter().enumerate() {
            s.push_str(&format!("{v},{x}\n"));
        }
        files.push(("betweenness".into(), s));
    }
    if let Some(e) = &r.eigenvalues {
        let mut s = String::from("rank,magnitude\n");
        for (i, x) in e.magnitudes.iter().enumerate() {
            s.push_str(&format!("{},{x}\n", i + 1));
        }
        files.push(("eigenvalues".into(), s));
    }
    let mut written = Vec::new();
    for (name, body) in files {
        let path = dir.join(format!("{name}.csv"));
        fs::write(&path, body).map_err(io_err(&path))?;
        written.push(name);
    }
    Ok(written)
}
