use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cascade_net::analysis::{
    build_ipt, classify_strong, community_rows, degree_histogram, degree_priority, navigate, sampled_mean_distance,
    StrongPredicate, COMMUNITY_HEADER,
};
use cascade_net::cascade::{attack_curve, degree_order, injury_set, random_prefix, CurveConfig, CURVE_HEADER};
use cascade_net::experiment::{self, builtin, builtin_specs, parse_spec, run_to_dir, with_seed};
use cascade_net::netgraph;
use cascade_net::{
    Aggregate, AttackStrategy, Error, GenParams, Graph, LogBase, Model, NodeId, NodeSet, RngStream,
    ThresholdAssignment, ThresholdMode,
};

#[derive(Parser)]
#[command(name = "cascade-net", version, about = "Threshold cascades on homophyly and classic random networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph and write it in netgraph v1 format.
    Gen(GenArgs),
    /// Attack curve: infection and injury fractions for k = 1..kmax.
    Cascade(CascadeArgs),
    /// Injury fractions only (thresholds play no role).
    Injure(InjureArgs),
    /// Structural reports over a colored graph.
    Analyze(AnalyzeArgs),
    /// Print a navigation walk between two nodes.
    Navigate(NavigateArgs),
    /// Run an experiment spec or a builtin figure pipeline.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    model: Model,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0.0)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    d: usize,
    #[arg(long, default_value_t = 0.0)]
    a: f64,
    #[arg(long, default_value_t = 0)]
    d1: usize,
    #[arg(long, default_value_t = 0)]
    d2: usize,
    #[arg(long, default_value = "natural")]
    log_base: LogBase,
    #[arg(long)]
    allow_parallel: bool,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CascadeArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    attack: AttackStrategy,
    #[arg(long)]
    kmax: usize,
    /// `random` or `uniform:PHI`.
    #[arg(long)]
    threshold: ThresholdMode,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[arg(long, default_value = "max")]
    agg: Aggregate,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct InjureArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    attack: AttackStrategy,
    #[arg(long)]
    kmax: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Report {
    Communities,
    Degrees,
    Priority,
    Ipt,
    Strong,
    Distances,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum)]
    report: Report,
    /// Thresholds for the strong report.
    #[arg(long, default_value = "random")]
    threshold: ThresholdMode,
    /// Strong report: require every member, not just the seed, to resist.
    #[arg(long)]
    all_members: bool,
    /// Distances report: number of sampled node pairs.
    #[arg(long, default_value_t = 1000)]
    pairs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct NavigateArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    src: u32,
    #[arg(long)]
    dst: u32,
    /// Accepted for interface compatibility; navigation is deterministic.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, conflicts_with = "builtin", required_unless_present_any = ["builtin", "list"])]
    spec: Option<PathBuf>,
    #[arg(long)]
    builtin: Option<String>,
    /// List builtin spec names and exit.
    #[arg(long)]
    list: bool,
    /// Overrides the spec's master seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long)]
    svg: bool,
}

fn read_graph(path: &Path) -> Result<Graph, Error> {
    netgraph::read_graph(BufReader::new(File::open(path)?))
}

fn csv_out(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<(), Error> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{}", header.join(","))?;
    for r in rows {
        writeln!(w, "{}", r.join(","))?;
    }
    w.flush()?;
    Ok(())
}

fn gen(a: GenArgs) -> Result<(), Error> {
    let params = GenParams {
        model: a.model,
        n: a.n,
        p: a.p,
        d: if a.model == Model::Overlap && a.d == 0 { a.d1 + a.d2 } else { a.d },
        a: a.a,
        d1: a.d1,
        d2: a.d2,
        log_base: a.log_base,
        allow_parallel: a.allow_parallel,
        master_seed: a.seed,
    };
    let g = cascade_net::generators::generate(&params)?;
    let mut w = BufWriter::new(File::create(&a.out)?);
    netgraph::write_graph(&g, &mut w)?;
    w.flush()?;
    Ok(())
}

fn cascade(a: CascadeArgs) -> Result<(), Error> {
    let g = read_graph(&a.graph)?;
    let cfg = CurveConfig {
        strategy: a.attack,
        ks: CurveConfig::up_to(a.kmax),
        thresholds: a.threshold,
        trials: a.trials,
        agg: a.agg,
        master_seed: a.seed,
        attack_stream: experiment::attack_stream(0),
    };
    let rows = attack_curve(&g, &cfg)?;
    csv_out(&a.out, &CURVE_HEADER, rows.iter().map(|r| r.fields().to_vec()))
}

fn injure(a: InjureArgs) -> Result<(), Error> {
    let g = read_graph(&a.graph)?;
    let n = g.n();
    if a.kmax > n {
        return Err(Error::Param(format!("kmax {} exceeds n={n}", a.kmax)));
    }
    let order = match a.attack {
        AttackStrategy::TopDegree => degree_order(&g),
        AttackStrategy::RandomUniform => {
            random_prefix(n, a.kmax, &mut RngStream::new(a.seed, experiment::attack_stream(0)))
        }
    };
    let rows = (1..=a.kmax).map(|k| {
        let s = NodeSet::from_ids(n, order[..k].iter().copied());
        let injured = injury_set(&g, &s).len();
        vec![k.to_string(), a.attack.to_string(), injured.to_string(), format!("{:.6}", injured as f64 / n as f64)]
    });
    csv_out(&a.out, &["k", "strategy", "injury_count", "injury_fraction"], rows)
}

fn analyze(a: AnalyzeArgs) -> Result<(), Error> {
    let g = read_graph(&a.graph)?;
    match a.report {
        Report::Communities => {
            let rows = community_rows(&g)?;
            csv_out(&a.out, &COMMUNITY_HEADER, rows.iter().map(|r| r.fields().to_vec()))
        }
        Report::Degrees => {
            let hist = degree_histogram(&g);
            let n = g.n() as f64;
            let mut tail: usize = hist.iter().sum();
            let mut rows = Vec::new();
            for (k, &count) in hist.iter().enumerate() {
                if count > 0 {
                    rows.push(vec![
                        k.to_string(),
                        count.to_string(),
                        format!("{:.6}", count as f64 / n),
                        format!("{:.6}", tail as f64 / n),
                    ]);
                }
                tail -= count;
            }
            csv_out(&a.out, &["degree", "count", "fraction", "ccdf"], rows)
        }
        Report::Priority => {
            let mut rows = Vec::with_capacity(g.n());
            for v in g.node_ids() {
                let dp = degree_priority(&g, v)?;
                let list: Vec<String> = dp.dp.iter().map(|d| d.to_string()).collect();
                rows.push(vec![
                    v.to_string(),
                    u8::from(g.node(v).is_seed).to_string(),
                    g.degree(v).to_string(),
                    dp.len().to_string(),
                    dp.first().to_string(),
                    dp.second().to_string(),
                    u8::from(dp.first_color_is_own).to_string(),
                    list.join(" "),
                ]);
            }
            csv_out(&a.out, &["node", "is_seed", "degree", "length", "d1", "d2", "first_is_own", "dp"], rows)
        }
        Report::Ipt => {
            let t = build_ipt(&g)?;
            let rows = t.parent.iter().enumerate().map(|(c, p)| {
                vec![c.to_string(), p.map(|p| p.0.to_string()).unwrap_or_default(), t.depth[c].to_string()]
            });
            csv_out(&a.out, &["color", "parent", "depth"], rows)
        }
        Report::Strong => {
            let thr = ThresholdAssignment::assign(&g, a.threshold, &mut RngStream::new(a.seed, 0))?;
            let predicate = if a.all_members { StrongPredicate::AllMembers } else { StrongPredicate::SeedOnly };
            let class = classify_strong(&g, &thr, predicate)?;
            let seeds = community_rows(&g)?;
            let rows = class.strong.iter().zip(&seeds).map(|(&s, row)| {
                vec![row.color.0.to_string(), row.seed.to_string(), row.size.to_string(), u8::from(s).to_string()]
            });
            csv_out(&a.out, &["color", "seed_id", "size", "strong"], rows)
        }
        Report::Distances => {
            let mean = sampled_mean_distance(&g, a.pairs, &mut RngStream::new(a.seed, 0));
            let mut rows = vec![
                vec!["nodes".to_string(), g.n().to_string()],
                vec!["sampled_pairs".to_string(), a.pairs.to_string()],
                vec!["mean_distance".to_string(), mean.map(|m| format!("{m:.6}")).unwrap_or_default()],
            ];
            if g.is_colored() {
                let communities = community_rows(&g)?;
                let max_diam = communities.iter().map(|c| c.diameter).max().unwrap_or(0);
                let disconnected = communities.iter().filter(|c| !c.connected).count();
                rows.push(vec!["max_community_diameter".to_string(), max_diam.to_string()]);
                rows.push(vec!["disconnected_communities".to_string(), disconnected.to_string()]);
            }
            csv_out(&a.out, &["metric", "value"], rows)
        }
    }
}

fn navigate_cmd(a: NavigateArgs) -> Result<(), Error> {
    let g = read_graph(&a.graph)?;
    let path = navigate(&g, NodeId(a.src), NodeId(a.dst))?;
    let ids: Vec<String> = path.iter().map(|v| v.to_string()).collect();
    let mut out = io::stdout().lock();
    writeln!(out, "{}", ids.join(" "))?;
    Ok(())
}

fn experiment_cmd(a: ExperimentArgs) -> Result<(), Error> {
    if a.list {
        for s in builtin_specs() {
            println!("{}", s.name);
        }
        return Ok(());
    }
    let spec = match (&a.spec, &a.builtin) {
        (Some(path), _) => parse_spec(&std::fs::read_to_string(path)?)?,
        (None, Some(name)) => builtin(name).ok_or_else(|| Error::Param(format!("unknown builtin spec `{name}`")))?,
        (None, None) => unreachable!("clap requires --spec or --builtin"),
    };
    let spec = match a.seed {
        Some(seed) => with_seed(spec, seed),
        None => spec,
    };
    experiment::configure_threads()?;
    for path in run_to_dir(&spec, &a.out, a.svg)? {
        println!("{}", path.display());
    }
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Param(_) | Error::Parse { .. } => 2,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Cascade(a) => cascade(a),
        Command::Injure(a) => injure(a),
        Command::Analyze(a) => analyze(a),
        Command::Navigate(a) => navigate_cmd(a),
        Command::Experiment(a) => experiment_cmd(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cascade-net: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
