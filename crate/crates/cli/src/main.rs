// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::thread;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use powergraph::classify;
use powergraph::corpus::Manifest;
use powergraph::graph::io::{
    digraph_to_dot, digraph_to_json, graph_from_json, graph_to_dot, graph_to_json,
};
use powergraph::groups::{build_group, directed_power_graph, power_graph, GroupSpec};
use powergraph::reconstruct::reconstruct;
use powergraph::verify::{brute_force_certify, certify, Status, Verdict};
use powergraph::{UndirectedGraph, VertexSet};

#[derive(Parser)]
#[command(name = "powergraph", version, about = "Power graphs of finite groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a group and write its power graph and/or directed power graph.
    Gen {
        #[arg(long)]
        spec: GroupSpec,
        #[command(flatten)]
        out: Output,
        #[arg(long)]
        digraph_out: Option<PathBuf>,
    },
    /// Closed-twin classes, closures and class kinds of a graph.
    Classify {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Rebuild the directed power graph from an undirected one.
    Reconstruct {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Reconstruct and certify against the group's own directed power graph.
    Verify {
        #[arg(long, required_unless_present = "corpus", conflicts_with = "corpus")]
        spec: Option<GroupSpec>,
        /// Use this graph instead of generating one from the spec.
        #[arg(long = "in", requires = "spec")]
        input: Option<PathBuf>,
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Also run the exhaustive search with this many assignments at most.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// N[X] and the closure N[N[X]] of a vertex set, or a seeded check of
    /// the closure laws on random subsets.
    Closure {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_delimiter = ',', required_unless_present = "seed")]
        set: Option<Vec<usize>>,
        #[arg(long, conflicts_with = "set")]
        seed: Option<u64>,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Output {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn rejected() -> ExitCode {
    ExitCode::from(2)
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn read_graph(path: &Path) -> Result<UndirectedGraph> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    graph_from_json(&text).with_context(|| format!("in {}", path.display()))
}

fn class_colouring(g: &UndirectedGraph) -> Vec<usize> {
    let p = g.n_classes();
    (0..g.vertex_count()).map(|v| p.class_of(v)).collect()
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Gen {
            spec,
            out,
            digraph_out,
        } => {
            let group = build_group(&spec)?;
            let d = directed_power_graph(&group);
            let g = d.underlying();
            let (gtext, dtext) = match out.format {
                Format::Json => (graph_to_json(&g), digraph_to_json(&d)),
                Format::Dot => {
                    let colours = class_colouring(&g);
                    (
                        graph_to_dot(&g, Some(&colours)),
                        digraph_to_dot(&d, Some(&colours)),
                    )
                }
            };
            if out.out.is_some() || digraph_out.is_none() {
                emit(out.out.as_deref(), &gtext)?;
            }
            if let Some(p) = digraph_out {
                emit(Some(&p), &dtext)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Classify { input, out } => {
            let g = read_graph(&input)?;
            let report = classify::report(&g)?;
            let text = match out.format {
                Format::Json => to_json(&report),
                Format::Dot => graph_to_dot(&g, Some(&class_colouring(&g))),
            };
            emit(out.out.as_deref(), &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Reconstruct { input, out } => {
            let g = read_graph(&input)?;
            let d = match reconstruct(&g) {
                Ok(d) => d,
                Err(e) => {
                    eprintln!("not a power graph: {}", e.0);
                    return Ok(rejected());
                }
            };
            let text = match out.format {
                Format::Json => digraph_to_json(&d),
                Format::Dot => digraph_to_dot(&d, Some(&class_colouring(&g))),
            };
            emit(out.out.as_deref(), &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            spec,
            input,
            corpus,
            budget,
            out,
        } => match (spec, corpus) {
            (Some(spec), None) => {
                let report = verify_one(&spec, input.as_deref(), budget)?;
                emit(out.as_deref(), &to_json(&report))?;
                Ok(if report.passed() {
                    ExitCode::SUCCESS
                } else {
                    rejected()
                })
            }
            (None, Some(manifest)) => {
                let specs = Manifest::load(&manifest)?.specs()?;
                let summary = verify_corpus(&specs, budget)?;
                emit(out.as_deref(), &to_json(&summary))?;
                Ok(if summary.failed == 0 {
                    ExitCode::SUCCESS
                } else {
                    rejected()
                })
            }
            _ => bail!("give exactly one of --spec and --corpus"),
        },
        Command::Closure {
            input,
            set,
            seed,
            samples,
            out,
        } => {
            let g = read_graph(&input)?;
            let text = match (set, seed) {
                (Some(set), _) => to_json(&closure_query(&g, &set)?),
                (None, Some(seed)) => to_json(&closure_sampling(&g, seed, samples)),
                (None, None) => bail!("give --set or --seed"),
            };
            emit(out.as_deref(), &text)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

#[derive(Serialize)]
struct VerifyReport {
    spec: String,
    n: usize,
    verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    brute_force: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

impl VerifyReport {
    fn passed(&self) -> bool {
        self.error.is_none()
            && self.verdict.is_pass()
            && self.brute_force.as_ref().is_none_or(Verdict::is_pass)
    }
}

fn verify_one(spec: &GroupSpec, input: Option<&Path>, budget: Option<u64>) -> Result<VerifyReport> {
    let group = build_group(spec)?;
    let oracle = directed_power_graph(&group);
    let g = match input {
        Some(path) => read_graph(path)?,
        None => power_graph(&group),
    };
    if g.vertex_count() != group.order() {
        bail!(
            "graph has {} vertices but {spec} has order {}",
            g.vertex_count(),
            group.order()
        );
    }
    let mut report = VerifyReport {
        spec: spec.to_string(),
        n: g.vertex_count(),
        verdict: Verdict {
            status: Status::Fail,
            witness: None,
            blocks_compared: 0,
            permutations_tried: None,
        },
        brute_force: None,
        error: None,
    };
    let rebuilt = match reconstruct(&g) {
        Ok(d) => d,
        Err(e) => {
            report.error = Some(format!("not a power graph: {}", e.0));
            return Ok(report);
        }
    };
    report.verdict = certify(&rebuilt, &oracle, &g)?;
    if let Some(budget) = budget {
        let partition = g.n_classes();
        match brute_force_certify(&rebuilt, &oracle, &partition, budget) {
            Ok(v) => report.brute_force = Some(v),
            Err(e) => report.error = Some(e.to_string()),
        }
    }
    Ok(report)
}

#[derive(Serialize)]
struct CorpusSummary {
    total: usize,
    passed: usize,
    failed: usize,
    results: Vec<CorpusEntry>,
}

#[derive(Serialize)]
struct CorpusEntry {
    spec: String,
    n: usize,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
}

fn verify_corpus(specs: &[GroupSpec], budget: Option<u64>) -> Result<CorpusSummary> {
    let workers = thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(specs.len().max(1));
    let chunk = specs.len().div_ceil(workers).max(1);
    let results: Vec<Result<VerifyReport>> = thread::scope(|s| {
        let handles: Vec<_> = specs
            .chunks(chunk)
            .map(|part| {
                s.spawn(move || {
                    part.iter()
                        .map(|spec| verify_one(spec, None, budget))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    let mut entries = Vec::with_capacity(specs.len());
    for (spec, result) in specs.iter().zip(results) {
        let report = result.with_context(|| format!("while verifying {spec}"))?;
        let detail = report.error.clone().or_else(|| {
            report
                .verdict
                .witness
                .as_ref()
                .map(|w| serde_json::to_string(w).expect("serializable"))
        });
        entries.push(CorpusEntry {
            spec: report.spec.clone(),
            n: report.n,
            status: if report.passed() { "PASS" } else { "FAIL" },
            detail,
        });
    }
    let passed = entries.iter().filter(|e| e.status == "PASS").count();
    Ok(CorpusSummary {
        total: entries.len(),
        passed,
        failed: entries.len() - passed,
        results: entries,
    })
}

#[derive(Serialize)]
struct ClosureReport {
    set: Vec<usize>,
    neighbourhood: Vec<usize>,
    closure: Vec<usize>,
}

fn closure_query(g: &UndirectedGraph, set: &[usize]) -> Result<ClosureReport> {
    let n = g.vertex_count();
    if let Some(&v) = set.iter().find(|&&v| v >= n) {
        bail!("vertex {v} out of range for a graph on {n} vertices");
    }
    let x = VertexSet::from_vertices(n, set.iter().copied());
    Ok(ClosureReport {
        set: x.to_vec(),
        neighbourhood: g.set_neighbourhood(&x).to_vec(),
        closure: g.closure(&x).to_vec(),
    })
}

#[derive(Serialize)]
struct SamplingReport {
    seed: u64,
    samples: usize,
    violations: Vec<Violation>,
}

#[derive(Serialize)]
struct Violation {
    a: Vec<usize>,
    b: Vec<usize>,
    laws: Vec<&'static str>,
}

fn random_subset(rng: &mut ChaCha8Rng, n: usize) -> VertexSet {
    let p: f64 = rng.random();
    VertexSet::from_vertices(n, (0..n).filter(|_| rng.random_bool(p)))
}

fn closure_sampling(g: &UndirectedGraph, seed: u64, samples: usize) -> SamplingReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = g.vertex_count();
    let mut violations = Vec::new();
    for _ in 0..samples {
        let a = random_subset(&mut rng, n);
        let b = random_subset(&mut rng, n);
        let laws = g.closure_law_violations(&a, &b);
        if !laws.is_empty() {
            violations.push(Violation {
                a: a.to_vec(),
                b: b.to_vec(),
                laws,
            });
        }
    }
    SamplingReport {
        seed,
        samples,
        violations,
    }
}
