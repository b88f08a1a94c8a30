use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use d2k_core::baselines::{gen_d0k, gen_d1k, gen_uman, BaselineError};
use d2k_core::compare::compare;
use d2k_core::io::{read_edge_list, save_edge_list, write_metrics_csv, MetricsFile, Model, TargetFile};
use d2k_core::metrics::{measure, CensusReport, Metric, MetricsConfig, Operator};
use d2k_core::{check, ConstructError, DirectedGraph};
use rayon::prelude::*;

#[derive(Parser)]
#[command(name = "d2k", version, about = "Directed dK-series targets, generators and metrics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Measure a target from an edge list.
    Extract {
        input: PathBuf,
        #[arg(long)]
        model: Model,
        /// Target file to write (stdout if omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Test a d2k/d2km target for realizability (exit 0 yes, 2 no).
    Check { target: PathBuf },
    /// Build graphs from a target, one file per seed.
    Generate {
        target: PathBuf,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(short, long, default_value = ".")]
        out_dir: PathBuf,
        /// Randomization attempts for d1k (default 10 m).
        #[arg(long)]
        swap_rounds: Option<u64>,
    },
    /// Compute metrics of an edge list.
    Measure {
        graph: PathBuf,
        #[command(flatten)]
        opts: MeasureOpts,
        /// Metrics file to write (stdout if omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write one CSV per metric into this directory.
        #[arg(long)]
        csv_dir: Option<PathBuf>,
    },
    /// Distances between an original graph and synthetic ones. Inputs are
    /// edge lists, or metrics files when they end in `.json`.
    Compare {
        original: PathBuf,
        #[arg(required = true)]
        generated: Vec<PathBuf>,
        #[command(flatten)]
        opts: MeasureOpts,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct MeasureOpts {
    /// Comma-separated metric names, or "all".
    #[arg(long, default_value = "all")]
    metrics: String,
    #[arg(long, default_value_t = 100)]
    sample_sources: usize,
    /// Graphs with more nodes use sampled BFS/betweenness sources.
    #[arg(long, default_value_t = 5000)]
    exact_threshold: usize,
    #[arg(long, default_value_t = 20)]
    eigen_k: usize,
    /// Eigenvalues of the symmetrized adjacency instead of the directed one.
    #[arg(long)]
    symmetrized: bool,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

impl MeasureOpts {
    fn config(&self) -> MetricsConfig {
        MetricsConfig {
            exact_threshold: self.exact_threshold,
            sample_sources: self.sample_sources,
            eigen_k: self.eigen_k,
            operator: if self.symmetrized {
                Operator::Symmetrized
            } else {
                Operator::Directed
            },
            seed: self.seed,
            ..Default::default()
        }
    }
}

enum Failure {
    Unrealizable(String),
    Other(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

type Outcome = Result<(), Failure>;

fn emit(text: &str, output: Option<&Path>) -> anyhow::Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_graph(p: &Path) -> anyhow::Result<DirectedGraph> {
    read_edge_list(p).with_context(|| format!("reading {}", p.display()))
}

fn load_target(p: &Path) -> anyhow::Result<TargetFile> {
    TargetFile::load(p).with_context(|| format!("loading {}", p.display()))
}

fn cmd_extract(input: &Path, model: Model, output: Option<&Path>) -> Outcome {
    let g = load_graph(input)?;
    let t = TargetFile::extract(&g, model);
    let detail = match &t {
        TargetFile::D2k(t) => format!(", {} cells", t.cell_sizes().len()),
        _ => String::new(),
    };
    log::info!("{model}: n = {}, m = {}{detail}", g.node_count(), g.edge_count());
    emit(&t.to_json(), output)?;
    Ok(())
}

fn cmd_check(target: &Path) -> Outcome {
    let t = match load_target(target)? {
        TargetFile::D2k(t) => t,
        other => {
            return Err(anyhow!("check applies to d2k and d2km targets, not {}", other.model()).into())
        }
    };
    let report = check(&t).context("malformed target")?;
    if report.realizable {
        println!("realizable");
        return Ok(());
    }
    Err(Failure::Unrealizable(violations_text(&report)))
}

fn violations_text(r: &d2k_core::RealizabilityReport) -> String {
    let mut text = String::from("not realizable:\n");
    for v in &r.violations {
        text.push_str(&format!("  {v}\n"));
    }
    text
}

fn realize(t: &TargetFile, seed: u64, swap_rounds: Option<u64>) -> Result<DirectedGraph, Failure> {
    match t {
        TargetFile::D0k(t) => gen_d0k(t, seed).map_err(|e| Failure::Other(e.into())),
        TargetFile::Uman(t) => gen_uman(t, seed).map_err(|e| Failure::Other(e.into())),
        TargetFile::D1k(t) => gen_d1k(t, seed, swap_rounds).map_err(|e| match e {
            BaselineError::NotGraphical { .. } => Failure::Unrealizable(format!("{e}\n")),
            other => Failure::Other(other.into()),
        }),
        TargetFile::D2k(t) => d2k_core::generate(t, seed).map_err(|e| match e {
            ConstructError::Unrealizable(r) => Failure::Unrealizable(violations_text(&r)),
            other => Failure::Other(other.into()),
        }),
    }
}

fn cmd_generate(target: &Path, seed: u64, count: u64, out_dir: &Path, swap_rounds: Option<u64>) -> Outcome {
    let t = load_target(target)?;
    if let TargetFile::D2k(d) = &t {
        let report = check(d).context("malformed target")?;
        if !report.realizable {
            return Err(Failure::Unrealizable(violations_text(&report)));
        }
    }
    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let model = t.model();
    let results: Vec<Result<PathBuf, Failure>> = (0..count)
        .into_par_iter()
        .map(|i| {
            let s = seed + i;
            let g = realize(&t, s, swap_rounds)?;
            let path = out_dir.join(format!("{model}_seed{s}.txt"));
            save_edge_list(&g, &path).map_err(|e| Failure::Other(e.into()))?;
            Ok(path)
        })
        .collect();
    for r in results {
        let path = r?;
        log::info!("wrote {}", path.display());
    }
    Ok(())
}

fn report_for(p: &Path, which: &std::collections::BTreeSet<Metric>, cfg: &MetricsConfig) -> anyhow::Result<CensusReport> {
    if p.extension().is_some_and(|e| e == "json") {
        let f = MetricsFile::load(p).with_context(|| format!("loading {}", p.display()))?;
        return Ok(f.report);
    }
    Ok(measure(&load_graph(p)?, which, cfg))
}

fn cmd_measure(graph: &Path, opts: &MeasureOpts, output: Option<&Path>, csv_dir: Option<&Path>) -> Outcome {
    let which = Metric::parse_list(&opts.metrics).map_err(anyhow::Error::from)?;
    let cfg = opts.config();
    let g = load_graph(graph)?;
    let report = measure(&g, &which, &cfg);
    if let Some(dir) = csv_dir {
        write_metrics_csv(&report, dir).map_err(anyhow::Error::from)?;
    }
    let f = MetricsFile::new(graph.display().to_string(), cfg, report);
    emit(&f.to_json(), output)?;
    Ok(())
}

fn cmd_compare(original: &Path, generated: &[PathBuf], opts: &MeasureOpts, output: Option<&Path>) -> Outcome {
    let which = Metric::parse_list(&opts.metrics).map_err(anyhow::Error::from)?;
    let cfg = opts.config();
    let base = report_for(original, &which, &cfg)?;
    let ensemble = generated
        .par_iter()
        .map(|p| report_for(p, &which, &cfg))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let c = compare(&base, &ensemble, &which).map_err(anyhow::Error::from)?;
    for (metric, comps) in &c.metrics {
        for (name, s) in comps {
            eprintln!("{metric}.{name}: {:.6} +/- {:.6}", s.mean, s.std);
        }
    }
    emit(&c.to_json(), output)?;
    Ok(())
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("D2K_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| anyhow!("D2K_THREADS must be a positive integer, got {v:?}"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring thread pool")?;
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    configure_threads()?;
    match cli.command {
        Command::Extract { input, model, output } => cmd_extract(&input, model, output.as_deref()),
        Command::Check { target } => cmd_check(&target),
        Command::Generate {
            target,
            seed,
            count,
            out_dir,
            swap_rounds,
        } => cmd_generate(&target, seed, count, &out_dir, swap_rounds),
        Command::Measure {
            graph,
            opts,
            output,
            csv_dir,
        } => cmd_measure(&graph, &opts, output.as_deref(), csv_dir.as_deref()),
        Command::Compare {
            original,
            generated,
            opts,
            output,
        } => cmd_compare(&original, &generated, &opts, output.as_deref()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Unrealizable(text)) => {
            eprint!("{text}");
            ExitCode::from(2)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
