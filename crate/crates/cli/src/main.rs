use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use pseudodisk::experiments::{
    self, counterexample_growth, default_disk_spec, default_ratio_spec, kgood_linearity, random_vc_instances,
    ratio_experiment, shallow_edge_growth, vc_scan, ExperimentOutput,
};
use pseudodisk::gallery::{build_good_pair_graph, euler_bound_check, GoodPairGraph};
use pseudodisk::generators::{
    counterexample_instance, fig4_abstract_pattern, gen_instance, star_fixture, weighted_star_fixture, GenSpec,
    WeightScheme,
};
use pseudodisk::solvers::{domset_pipeline_with, solve_hitting_set, PipelineOptions, DEFAULT_EPSILON};
use pseudodisk::{Error, FamilyKind, Hypergraph, Instance, Method};
use serde::Serialize;

/// Seed used when `--seed` is not given.
const DEFAULT_SEED: u64 = 20_140_601;

#[derive(Parser)]
#[command(name = "pseudodisk", version, about = "Pseudo-disk hypergraphs: counting, shattering, domination")]
struct Cli {
    /// Worker threads. Output does not depend on this.
    #[arg(long, global = true, env = "PSEUDODISK_THREADS", default_value_t = 1)]
    threads: usize,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Artifact path; written atomically. Without it only the summary is printed.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Clone)]
struct Source {
    /// Instance or abstract hypergraph JSON file.
    #[arg(long = "in", conflicts_with = "fixture")]
    input: Option<PathBuf>,
    /// Named fixture: star, star-weighted, fig4, counterexample:N.
    #[arg(long)]
    fixture: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance or write out a fixture.
    Gen(GenArgs),
    /// Count edges of cardinality at most k.
    Count {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Search for shattered sets of sizes 4 and 5.
    Vc {
        #[command(flatten)]
        source: Source,
        /// Scan this many random disk instances instead of an input.
        #[arg(long)]
        random: Option<usize>,
    },
    /// List k-good pairs of the whole ground set.
    Goodpairs {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Minimum-weight dominating (hitting) set.
    Domset {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
        method: MethodArg,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        epsilon: f64,
    },
    /// Build the 2-good-pair graph and check its Euler edge bound.
    Gallery {
        #[command(flatten)]
        source: Source,
        /// Random induced subgraphs to check.
        #[arg(long, default_value_t = 20)]
        samples: usize,
        /// Treat every element as well behaved and every edge as a range.
        #[arg(long = "abstract")]
        abstract_: bool,
    },
    /// Run an experiment and write its records.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Exact,
    Greedy,
    #[value(name = "lp_round", alias = "lp-round")]
    LpRound,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Exact => Method::Exact,
            MethodArg::Greedy => Method::Greedy,
            MethodArg::LpRound => Method::LpRound,
        }
    }
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, conflicts_with_all = ["n", "kind"])]
    fixture: Option<String>,
    #[arg(long, value_enum, default_value_t = KindArg::Disk)]
    kind: KindArg,
    #[arg(long, default_value_t = 100)]
    n: usize,
    /// Region side; defaults to the harness density.
    #[arg(long)]
    side: Option<f64>,
    #[arg(long, default_value_t = experiments::DEFAULT_RMIN)]
    rmin: f64,
    #[arg(long, default_value_t = experiments::DEFAULT_RMAX)]
    rmax: f64,
    /// unit, uniform01 or exponential.
    #[arg(long, default_value = "unit")]
    weights: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Disk,
    Circle,
    Homothet,
}

#[derive(Clone, Copy, ValueEnum)]
enum Experiment {
    Shallow,
    Counterexample,
    Kgood,
    Ratio,
    Vc,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    experiment: Experiment,
    /// Comma-separated sizes.
    #[arg(long, value_delimiter = ',')]
    n_list: Option<Vec<usize>>,
    /// Largest k (shallow) or comma-separated k values (kgood).
    #[arg(long, value_delimiter = ',')]
    k: Option<Vec<usize>>,
    #[arg(long, default_value_t = experiments::DEFAULT_TRIALS)]
    trials: usize,
    /// Instances for the vc experiment.
    #[arg(long, default_value_t = 100)]
    instances: usize,
}

enum Input {
    Geometric(Instance),
    Abstract(Hypergraph),
}

impl Input {
    fn hypergraph(&self) -> pseudodisk::Result<Hypergraph> {
        match self {
            Input::Geometric(inst) => inst.hypergraph(),
            Input::Abstract(h) => Ok(h.clone()),
        }
    }
}

fn fixture(name: &str, seed: u64) -> anyhow::Result<Input> {
    Ok(match name {
        "star" => Input::Geometric(Instance::new(star_fixture())),
        "star-weighted" => Input::Geometric(Instance::new(weighted_star_fixture(10.0)?)),
        "fig4" => Input::Abstract(fig4_abstract_pattern()),
        other => match other.strip_prefix("counterexample:") {
            Some(n) => {
                let n: usize = n.parse().map_err(|_| Error::InvalidInput(format!("bad fixture size `{n}`")))?;
                Input::Geometric(counterexample_instance(n, seed)?)
            }
            None => return Err(Error::InvalidInput(format!("unknown fixture `{other}`")).into()),
        },
    })
}

fn load(source: &Source, seed: u64) -> anyhow::Result<Input> {
    match (&source.input, &source.fixture) {
        (_, Some(name)) => fixture(name, seed),
        (Some(path), None) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let value: serde_json::Value = serde_json::from_str(&text).map_err(Error::from)?;
            if value.get("edges").is_some() {
                Ok(Input::Abstract(Hypergraph::from_json(&text)?))
            } else {
                Ok(Input::Geometric(Instance::from_json(&text)?))
            }
        }
        (None, None) => Err(Error::InvalidInput("one of --in or --fixture is required".into()).into()),
    }
}

/// Writes `contents` next to `path` and renames it into place.
fn write_atomic(path: &Path, contents: &str) -> anyhow::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating file in {}", dir.display()))?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn csv_unsupported(what: &str) -> anyhow::Error {
    Error::InvalidInput(format!("--format csv is not available for {what}")).into()
}

struct Output {
    summary: String,
    artifact: String,
    /// Extra file written beside the artifact: (suffix, contents).
    companion: Option<(&'static str, String)>,
}

fn run(cli: &Cli) -> anyhow::Result<Output> {
    let seed = cli.seed;
    let csv = cli.format == Format::Csv;
    match &cli.command {
        Command::Gen(args) => {
            if csv {
                return Err(csv_unsupported("gen"));
            }
            let inst = match &args.fixture {
                Some(name) => match fixture(name, seed)? {
                    Input::Geometric(inst) => inst,
                    Input::Abstract(h) => {
                        return Ok(Output {
                            summary: format!("abstract hypergraph: n={} edges={}", h.n(), h.edge_count()),
                            artifact: h.to_json()? + "\n",
                            companion: None,
                        })
                    }
                },
                None => {
                    let kind = match args.kind {
                        KindArg::Disk => FamilyKind::Disk,
                        KindArg::Circle => FamilyKind::CircleBoundary,
                        KindArg::Homothet => FamilyKind::Homothet,
                    };
                    let weights: WeightScheme = args.weights.parse()?;
                    let side = args.side.unwrap_or_else(|| default_disk_spec(args.n.max(1), seed).side);
                    let spec = GenSpec::disks(args.n, side, args.rmin, args.rmax, seed)
                        .with_kind(kind)
                        .with_weights(weights);
                    gen_instance(&spec)?
                }
            };
            let ranges = inst.ranges.as_ref().map_or(String::new(), |r| format!(" ranges={}", r.len()));
            Ok(Output {
                summary: format!("generated {} {} members{ranges}", inst.family.len(), inst.family.kind()),
                artifact: inst.to_json()? + "\n",
                companion: None,
            })
        }
        Command::Count { source, k } => {
            let h = load(source, seed)?.hypergraph()?;
            let count = h.count_edges_at_most(*k)?;
            let profile = h.profile();
            let artifact = if csv {
                let mut s = String::from("cardinality,edges,at_most\n");
                for (c, e) in profile.iter() {
                    writeln!(s, "{c},{e},{}", profile.at_most(c))?;
                }
                s
            } else {
                #[derive(Serialize)]
                struct CountDoc {
                    n: usize,
                    edges: usize,
                    empty_trace: bool,
                    k: usize,
                    at_most_k: usize,
                    profile: Vec<(usize, usize)>,
                }
                json(&CountDoc {
                    n: h.n(),
                    edges: h.edge_count(),
                    empty_trace: h.has_empty_trace(),
                    k: *k,
                    at_most_k: count,
                    profile: profile.iter().collect(),
                })?
            };
            Ok(Output { summary: format!("edges≤{k}: {count}"), artifact, companion: None })
        }
        Command::Vc { source, random } => {
            if csv {
                return Err(csv_unsupported("vc"));
            }
            let instances = match random {
                Some(count) => random_vc_instances(*count, seed)?,
                None => vec![(
                    source.fixture.clone().unwrap_or_else(|| "input".into()),
                    load(source, seed)?.hypergraph()?,
                )],
            };
            let report = vc_scan(&instances)?;
            let summary = if instances.len() == 1 {
                let row = &report.rows[0];
                format!(
                    "shattered set of size 4 {}; size 5: {}",
                    if row.shattered_4.is_some() { "found" } else { "not found" },
                    if row.shattered_5.is_some() { "found" } else { "none" }
                )
            } else {
                format!(
                    "{} instances: size-4 shattered in {}; size 5: {}",
                    report.rows.len(),
                    report.size_4_hits,
                    if report.size_5_hits == 0 { "none".to_string() } else { report.size_5_hits.to_string() }
                )
            };
            Ok(Output { summary, artifact: json(&report)?, companion: None })
        }
        Command::Goodpairs { source, k } => {
            if csv {
                return Err(csv_unsupported("goodpairs"));
            }
            let h = load(source, seed)?.hypergraph()?;
            let all: Vec<usize> = (0..h.n()).collect();
            let pairs: Vec<(usize, usize)> = h.k_good_pairs(&all, *k)?.into_iter().collect();
            #[derive(Serialize)]
            struct PairsDoc<'a> {
                k: usize,
                n: usize,
                count: usize,
                pairs: &'a [(usize, usize)],
            }
            let doc = PairsDoc { k: *k, n: h.n(), count: pairs.len(), pairs: &pairs };
            Ok(Output {
                summary: format!("{k}-good pairs: {} (n={})", pairs.len(), h.n()),
                artifact: json(&doc)?,
                companion: None,
            })
        }
        Command::Domset { source, method, epsilon } => {
            let mut opts = PipelineOptions::new((*method).into(), seed);
            opts.epsilon = *epsilon;
            let result = match load(source, seed)? {
                Input::Geometric(inst) if inst.ranges.is_none() => domset_pipeline_with(&inst.family, &opts)?,
                input => solve_hitting_set(&input.hypergraph()?, &opts)?,
            };
            let weight = result.total_weight;
            let summary = format!("weight={weight} chosen=[{}]", result.chosen_labels.join(", "));
            let artifact = if csv {
                let mut s = String::from("id,label\n");
                for (id, label) in result.chosen.iter().zip(&result.chosen_labels) {
                    writeln!(s, "{id},{label}")?;
                }
                s
            } else {
                json(&result)?
            };
            Ok(Output { summary, artifact, companion: None })
        }
        Command::Gallery { source, samples, abstract_ } => {
            if csv {
                return Err(csv_unsupported("gallery"));
            }
            let input = load(source, seed)?;
            let graph = match (&input, abstract_) {
                (Input::Geometric(inst), false) => build_good_pair_graph(&inst.family, inst.range_family())?,
                (_, true) | (Input::Abstract(_), _) => GoodPairGraph::from_hypergraph(&input.hypergraph()?),
            };
            let report = euler_bound_check(&graph, *samples, seed);
            let bound = report.bound.map_or("n/a".to_string(), |b| b.to_string());
            Ok(Output {
                summary: format!(
                    "K={} edges={} bound={bound} violations={}",
                    report.k_size,
                    report.edge_count,
                    report.violations.len()
                ),
                artifact: json(&report)?,
                companion: None,
            })
        }
        Command::Bench(args) => bench(args, seed, csv),
    }
}

fn bench(args: &BenchArgs, seed: u64, csv: bool) -> anyhow::Result<Output> {
    let n_list = args.n_list.clone();
    let out: ExperimentOutput = match args.experiment {
        Experiment::Shallow => {
            let n_list = n_list.unwrap_or_else(|| experiments::DEFAULT_N_LIST.to_vec());
            let k_max = args.k.as_ref().and_then(|k| k.last().copied()).unwrap_or(experiments::DEFAULT_K_MAX);
            shallow_edge_growth(&n_list, k_max, args.trials, &default_disk_spec(n_list[0].max(1), seed), seed)?
        }
        Experiment::Counterexample => counterexample_growth(&n_list.unwrap_or_else(|| vec![5, 10, 20]), seed)?,
        Experiment::Kgood => {
            let m_list = n_list.unwrap_or_else(|| vec![100, 200, 400, 800]);
            let k_list = args.k.clone().unwrap_or_else(|| vec![2, 3]);
            kgood_linearity(&m_list, &k_list, args.trials, &default_disk_spec(m_list[0].max(1), seed), seed)?
        }
        Experiment::Ratio => {
            let n_list = n_list.unwrap_or_else(|| vec![50, 100, 200, 400]);
            ratio_experiment(&n_list, args.trials, &default_ratio_spec(n_list[0].max(1), seed), seed)?
        }
        Experiment::Vc => {
            if csv {
                return Err(csv_unsupported("the vc experiment"));
            }
            let report = vc_scan(&random_vc_instances(args.instances, seed)?)?;
            return Ok(Output {
                summary: format!(
                    "vc: {} instances, size-4 shattered in {}, size-5 shattered in {}",
                    report.rows.len(),
                    report.size_4_hits,
                    report.size_5_hits
                ),
                artifact: json(&report)?,
                companion: None,
            });
        }
    };
    let passed = out.windows.iter().filter(|w| w.passed).count();
    let summary = format!(
        "{}: {} records, {passed}/{} windows passed",
        out.experiment,
        out.records.len(),
        out.windows.len()
    );
    if csv {
        Ok(Output { summary, artifact: out.to_csv()?, companion: Some((".manifest.json", json(&out.manifest())?)) })
    } else {
        let mut doc = out.manifest();
        doc["records"] = serde_json::to_value(&out.records)?;
        Ok(Output { summary, artifact: json(&doc)?, companion: None })
    }
}

fn exit_code(err: &anyhow::Error) -> (u8, &'static str) {
    match err.downcast_ref::<Error>() {
        Some(Error::InvalidInput(_) | Error::Degenerate(_) | Error::Json(_) | Error::Csv(_)) => (2, "invalid_input"),
        Some(Error::Infeasible(_)) => (3, "infeasible"),
        Some(Error::NodeLimit { .. } | Error::ResourceLimit(_)) => (4, "resource_limit"),
        Some(Error::Io(_)) => (2, "io"),
        Some(_) => (1, "internal"),
        None if err.downcast_ref::<std::io::Error>().is_some() => (2, "io"),
        None => (1, "internal"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = (|| -> anyhow::Result<String> {
        if cli.threads == 0 {
            bail!(Error::InvalidInput("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global()?;
        let output = run(&cli)?;
        if let Some(path) = &cli.out {
            write_atomic(path, &output.artifact)?;
            if let Some((suffix, contents)) = &output.companion {
                let mut name = path.as_os_str().to_owned();
                name.push(suffix);
                write_atomic(Path::new(&name), contents)?;
            }
        }
        Ok(output.summary)
    })();
    match result {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            let (code, kind) = exit_code(&err);
            let doc = serde_json::json!({ "error": kind, "message": format!("{err:#}"), "exit_code": code });
            eprintln!("{doc}");
            ExitCode::from(code)
        }
    }
}
