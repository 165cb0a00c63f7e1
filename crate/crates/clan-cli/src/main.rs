//! `clan`: command-line driver for clan embeddings, distributions, routing
//! simulation, girth instances, and verification.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use clan_embed::io::{self, num, HostEmbedding};
use clan_embed::mwu::{build_with_oracle, UltrametricOracle};
use clan_embed::routing::{routing_experiment, LabelMode, Pairs};
use clan_embed::spanning::{hierarchical_petal_decomposition_detailed, spanning_clan_embed_with, SpanParams, SpanResult};
use clan_embed::ultra::{clan_embed_probability, clan_embed_ultrametric, ClanParams, Mode, Variant};
use clan_embed::verify::{gen_girth_instance, path_distortion_eval, verify_clan_distortion, GirthKind, Host};
use clan_embed::{Error, Measure, MeasureKind, MetricSpace, Result, WeightedGraph};

/// Stack for the worker thread; the recursive builders go deep on long paths.
const STACK_BYTES: usize = 512 << 20;

#[derive(Parser, Debug)]
#[command(name = "clan", version, about = "Clan embeddings into ultrametrics and spanning trees")]
struct Cli {
    /// worker threads for parallel sections (0 = hardware count)
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
#[group(required = true, multiple = false)]
struct ModeArgs {
    /// distortion parameter k ≥ 1
    #[arg(long)]
    k: Option<usize>,
    /// target expected clan size 1+eps, eps in (0,1]
    #[arg(long)]
    eps: Option<f64>,
}

impl ModeArgs {
    fn mode(self) -> Mode<f64> {
        match (self.k, self.eps) {
            (Some(k), _) => Mode::K(k),
            (_, Some(e)) => Mode::Eps(e),
            _ => unreachable!("clap enforces exactly one of --k and --eps"),
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum VariantArg {
    Standard,
    Balanced,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum LabelArg {
    Exact,
    Approx2,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum KindArg {
    Dense,
    Epsilon,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// clan embedding of a metric into an ultrametric
    EmbedUltra {
        #[arg(long)]
        graph: Option<PathBuf>,
        /// dense distance matrix CSV; overrides the graph metric
        #[arg(long)]
        metric: Option<PathBuf>,
        #[command(flatten)]
        mode: ModeArgs,
        #[arg(long, value_enum, default_value = "standard")]
        variant: VariantArg,
        /// "id value" lines; all values ≥ 1 selects the ge1 builder, a
        /// probability measure selects the wrapper; default all ones
        #[arg(long)]
        measure: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        verify: bool,
    },
    /// spanning clan embedding of a graph into a tree
    EmbedSpan {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        mode: ModeArgs,
        #[arg(long, default_value_t = 0)]
        root: usize,
        /// ge1 measure for the direct builder, or a probability measure for
        /// the wrapper; default uniform probability
        #[arg(long)]
        measure: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        verify: bool,
    },
    /// uniform distribution of ultrametric clan embeddings
    BuildDist {
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        metric: Option<PathBuf>,
        #[command(flatten)]
        mode: ModeArgs,
        #[arg(long)]
        slack: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// per-round weights, one row per round
        #[arg(long)]
        log_weights: Option<PathBuf>,
    },
    /// draw one member of a distribution
    Sample {
        #[arg(long)]
        dist: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// compact routing simulation over sampled spanning clan trees
    RouteSim {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        mode: ModeArgs,
        #[arg(long, value_enum, default_value = "approx2")]
        labels: LabelArg,
        /// "all" or a number of random ordered pairs per sample
        #[arg(long, default_value = "all")]
        pairs: String,
        #[arg(long, default_value_t = 1)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// random large-girth graph
    GenGirth {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        n: usize,
        /// required for the epsilon kind
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// domination and distortion check of an embedding
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        emb: PathBuf,
        #[arg(long)]
        bound: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// cheapest copy sequence along a point sequence in an ultrametric
    PathDist {
        #[arg(long)]
        emb: PathBuf,
        #[arg(long)]
        seq: PathBuf,
        /// adds the graph path length and the ratio to the report
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write_stdout(&e.to_string());
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("usage error").trim_start_matches("error: ");
            report_error("usage", first);
            return ExitCode::from(1);
        }
    };
    let threads = cli.threads;
    let worker = std::thread::Builder::new().stack_size(STACK_BYTES).spawn(move || {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
        run(cli.command)
    });
    let outcome = match worker {
        Ok(handle) => handle.join().unwrap_or_else(|_| Err(Error::invalid("worker thread panicked"))),
        Err(e) => Err(Error::Io(e)),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            report_error(kind(&e), &e.to_string());
            ExitCode::from(if e.is_defect() { 2 } else { 1 })
        }
    }
}

fn kind(e: &Error) -> &'static str {
    match e {
        Error::NotFound(_) => "not_found",
        Error::Parse { .. } => "parse",
        Error::Invalid(_) => "invalid",
        Error::Defect(_) => "defect",
        Error::Io(_) => "io",
    }
}

/// One JSON object on one line.
fn report_error(kind: &str, message: &str) {
    eprintln!("{}", json!({"error": kind, "message": message}));
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(Error::Io),
        None => write_stdout(text),
    }
}

/// A closed pipe on stdout is not an error.
fn write_stdout(text: &str) -> Result<()> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Error::Io(e)),
        _ => Ok(()),
    }
}

fn emit_json(out: Option<&Path>, v: &Value) -> Result<()> {
    emit(out, &io::to_json_string(v))
}

fn load_metric(graph: Option<&Path>, metric: Option<&Path>) -> Result<MetricSpace<f64>> {
    let from_graph = graph.map(WeightedGraph::<f64>::load).transpose()?;
    match (metric, from_graph) {
        (Some(p), g) => {
            let m = MetricSpace::load_csv(p)?;
            if let Some(g) = g {
                if g.n() != m.n() {
                    return Err(Error::invalid(format!("metric has {} points, graph has {}", m.n(), g.n())));
                }
            }
            Ok(m)
        }
        (None, Some(g)) => Ok(MetricSpace::from_graph(&g)),
        (None, None) => Err(Error::invalid("one of --graph and --metric is required")),
    }
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::EmbedUltra { graph, metric, mode, variant, measure, out, verify } => {
            let m = load_metric(graph.as_deref(), metric.as_deref())?;
            let mu = match measure {
                Some(p) => Measure::load(p, m.n())?,
                None => Measure::ones(m.n()),
            };
            let params = ClanParams {
                mode: mode.mode(),
                variant: match variant {
                    VariantArg::Standard => Variant::Standard,
                    VariantArg::Balanced => Variant::Balanced,
                },
                verify,
            };
            let (u, emb) = match mu.kind() {
                MeasureKind::Ge1 => clan_embed_ultrametric(&m, &m.points(), &mu, &params)?,
                MeasureKind::Probability => clan_embed_probability(&m, &mu, &params)?,
            };
            emit_json(out.as_deref(), &io::ultra_value(&u, &emb))
        }
        Command::EmbedSpan { graph, mode, root, measure, out, verify } => {
            let g = WeightedGraph::<f64>::load(graph)?;
            let mode = mode.mode();
            let r: SpanResult<f64> = match measure {
                Some(p) => {
                    let mu = Measure::load(p, g.n())?;
                    match mu.kind() {
                        MeasureKind::Ge1 => {
                            mode.validate()?;
                            let params = SpanParams { k: mode.internal_k(g.n()), verify };
                            hierarchical_petal_decomposition_detailed(&g, root, &mu, params)?
                        }
                        MeasureKind::Probability => spanning_clan_embed_with(&g, &mu, root, mode, verify)?,
                    }
                }
                None => spanning_clan_embed_with(&g, &Measure::uniform(g.n()), root, mode, verify)?,
            };
            emit_json(out.as_deref(), &io::tree_value(&r.tree, &r.embedding))
        }
        Command::BuildDist { graph, metric, mode, slack, out, log_weights } => {
            let m = load_metric(graph.as_deref(), metric.as_deref())?;
            let oracle = UltrametricOracle::new(&m, mode.mode())?;
            let (dist, log) = build_with_oracle(&oracle, slack, log_weights.is_some())?;
            if let (Some(p), Some(log)) = (log_weights.as_deref(), log) {
                emit(Some(p), &log.to_csv())?;
            }
            emit_json(out.as_deref(), &io::distribution_value(&dist))
        }
        Command::Sample { dist, seed, out } => {
            let d = io::load_distribution::<f64>(dist)?;
            let member = clan_embed::sample(&d, seed)?;
            emit_json(out.as_deref(), &io::ultra_value(&member.0, &member.1))
        }
        Command::RouteSim { graph, mode, labels, pairs, samples, seed, out } => {
            let g = WeightedGraph::<f64>::load(graph)?;
            let pairs = match pairs.as_str() {
                "all" => Pairs::All,
                s => Pairs::Sampled(
                    s.parse().map_err(|_| Error::invalid(format!("--pairs must be \"all\" or a count, got \"{s}\"")))?,
                ),
            };
            let labels = match labels {
                LabelArg::Exact => LabelMode::Exact,
                LabelArg::Approx2 => LabelMode::Approx2,
            };
            let r = routing_experiment(&g, mode.mode(), labels, pairs, samples, seed)?;
            let v = json!({
                "stretch": {"mean": num(r.stretch.mean), "p99": num(r.stretch.p99), "max": num(r.stretch.max)},
                "table_words": {"mean": num(r.table_words_mean), "max": r.table_words_max},
                "label_words_max": r.label_words_max,
                "header_words": r.header_words,
                "clan_mean": num(r.clan_mean),
                "samples": r.samples,
            });
            emit_json(out.as_deref(), &v)
        }
        Command::GenGirth { kind, n, eps, seed, out } => {
            let (kind, eps) = match kind {
                KindArg::Dense => (GirthKind::Dense, eps.unwrap_or(1.0)),
                KindArg::Epsilon => {
                    (GirthKind::Epsilon, eps.ok_or_else(|| Error::invalid("--eps is required for the epsilon kind"))?)
                }
            };
            let inst = gen_girth_instance::<f64>(kind, n, eps, seed)?;
            emit(out.as_deref(), &inst.graph.to_text())
        }
        Command::Verify { graph, emb, bound, out } => {
            let g = WeightedGraph::<f64>::load(graph)?;
            let host = io::load_embedding::<f64>(emb)?;
            let m = MetricSpace::from_graph(&g);
            if host.embedding().n() != g.n() {
                return Err(Error::invalid(format!("embedding has {} points, graph has {}", host.embedding().n(), g.n())));
            }
            let report = match &host {
                HostEmbedding::Ultrametric(u, e) => verify_clan_distortion(&m, Host::Ultrametric(u), e, bound)?,
                HostEmbedding::Tree(t, e) => {
                    t.check_spanning(&g)?;
                    verify_clan_distortion(&m, Host::Tree(t), e, bound)?
                }
            };
            let worst = report.worst_pair.map(|(a, b)| json!([a, b]));
            let violation = report.domination_violation.map(|(a, b)| json!([a, b]));
            let v = json!({
                "dominating_ok": report.dominating_ok,
                "max_distortion_ratio": num(report.max_distortion_ratio),
                "bound": num(report.bound),
                "distortion_ok": report.distortion_ok,
                "worst_pair": worst,
                "domination_violation": violation,
            });
            emit_json(out.as_deref(), &v)?;
            report.ensure()
        }
        Command::PathDist { emb, seq, graph, out } => {
            let host = io::load_embedding::<f64>(emb)?;
            let HostEmbedding::Ultrametric(u, e) = &host else {
                return Err(Error::invalid("path distortion needs an ultrametric embedding"));
            };
            let text = std::fs::read_to_string(&seq).map_err(|err| match err.kind() {
                std::io::ErrorKind::NotFound => Error::NotFound(seq.display().to_string()),
                _ => Error::Io(err),
            })?;
            let ids = text
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| Error::Parse { line: 0, msg: format!("\"{t}\" is not a point id") }))
                .collect::<Result<Vec<_>>>()?;
            let (cost, copies) = path_distortion_eval(u, e, &ids)?;
            let mut v = json!({"cost": num(cost), "copies": copies});
            if let Some(gp) = graph {
                let g = WeightedGraph::<f64>::load(gp)?;
                let m = MetricSpace::from_graph(&g);
                if m.n() != e.n() {
                    return Err(Error::invalid("graph and embedding differ in point count"));
                }
                let length = ids.windows(2).map(|w| m.d(w[0], w[1])).sum::<f64>();
                v["path_length"] = num(length);
                v["ratio"] = if length > 0.0 { num(cost / length) } else { Value::Null };
            }
            emit_json(out.as_deref(), &v)
        }
    }
}
