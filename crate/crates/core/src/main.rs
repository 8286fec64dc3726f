use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use noc_topo::analysis::{build_cdg, is_deadlock_free, AnalysisError};
use noc_topo::io::{
    comparison_rows, metrics_row, parse_adjacency_matrix, shortest_path_lines, sim_row, to_json_pretty, write_csv,
    IoError,
};
use noc_topo::routing::{router_for, validate_routing, RoutingError, RoutingKind};
use noc_topo::sim::{compare_families, simulate, SimConfig, Switching, TrafficPattern};
use noc_topo::topology::{build_topology, params_for, BuildConfig, Family, NodeId, ParamFamily, Size, Topology};
use noc_topo::Error;

const EXIT_ERROR: u8 = 1;
const EXIT_UNREACHABLE: u8 = 3;

#[derive(Parser)]
#[command(name = "noc-topo", version, about = "Network-on-chip topology builder, analyzer, router and simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a topology and write it as JSON.
    Build {
        #[command(flatten)]
        topo: TopoArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Diameter, average hops and deadlock check of a built or loaded topology.
    Analyze {
        #[command(flatten)]
        topo: TopoArgs,
        /// Topology JSON written by `build`; replaces --family/--rows/--cols.
        #[arg(long)]
        input: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Trace every endpoint pair and compare against BFS.
    Validate {
        #[command(flatten)]
        topo: TopoArgs,
        #[arg(long)]
        routing: Option<String>,
        /// Also write the per-pair rows as CSV here.
        #[arg(long)]
        pairs_csv: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run the flit-level simulator on one topology.
    Simulate {
        #[command(flatten)]
        topo: TopoArgs,
        #[arg(long)]
        routing: Option<String>,
        #[command(flatten)]
        sim: SimArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Compare D2DMoT, MoT and an IP-matched mesh at several sizes.
    Compare {
        /// D2DMoT side lengths, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "4,8")]
        sizes: Vec<u32>,
        #[command(flatten)]
        sim: SimArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Shortest path on a directed adjacency-matrix file.
    ShortestPath {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        src: u32,
        #[arg(long)]
        dst: u32,
    },
    /// Closed-form parameters of a family.
    Params {
        #[arg(long)]
        family: String,
        #[arg(long)]
        rows: u32,
        #[arg(long, default_value_t = 1)]
        cols: u32,
    },
}

#[derive(Args)]
struct TopoArgs {
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    rows: Option<u32>,
    #[arg(long)]
    cols: Option<u32>,
    /// Replacement augmentation links as `a-b,c-d,...`.
    #[arg(long, value_delimiter = ',')]
    extra_links: Option<Vec<String>>,
}

#[derive(Args)]
struct SimArgs {
    #[arg(long, default_value = "uniform")]
    traffic: String,
    /// Packets per IP core per 100 cycles.
    #[arg(long, default_value_t = 1.0)]
    injection: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    flits: u32,
    #[arg(long, default_value = "saf")]
    switching: String,
    #[arg(long, default_value_t = 8)]
    buffer_depth: u32,
    #[arg(long, default_value_t = 1)]
    cycles_per_hop: u32,
    #[arg(long, default_value_t = 200)]
    warmup: u64,
    #[arg(long, default_value_t = 1000)]
    measure: u64,
}

#[derive(Args)]
struct OutArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

struct Failure {
    exit: u8,
    code: String,
    message: String,
}

impl<E: Into<Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        let e = e.into();
        let exit = match &e {
            Error::Analysis(AnalysisError::Unreachable { .. }) => EXIT_UNREACHABLE,
            _ => EXIT_ERROR,
        };
        Failure { exit, code: e.code().to_string(), message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { exit: EXIT_ERROR, code: "InvalidArgument".into(), message: message.into() }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", json!({ "error": f.code, "message": f.message }));
            ExitCode::from(f.exit)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Build { topo, out } => {
            let t = topo.build()?;
            emit(&out, t.to_json() + "\n")
        }
        Command::Analyze { topo, input, out } => {
            let t = match input {
                Some(path) => Topology::from_json(&read(&path)?)?,
                None => topo.build()?,
            };
            let row = metrics_row(&t)?;
            emit(&out, render(out.format, &[row])?)
        }
        Command::Validate { topo, routing, pairs_csv, out } => {
            let t = topo.build()?;
            let kind = routing_kind(routing.as_deref(), t.family())?;
            let r = router_for(kind, &t)?;
            let report = validate_routing(&r, &t);
            let deadlock_free = build_cdg(&t, &r).ok().map(|cdg| is_deadlock_free(&cdg));
            if let Some(path) = pairs_csv {
                let file = fs::File::create(&path).map_err(IoError::from)?;
                write_csv(&report.rows, file)?;
            }
            emit(&out, render(out.format, &[report.summary(deadlock_free)])?)
        }
        Command::Simulate { topo, routing, sim, out } => {
            let t = topo.build()?;
            let kind = routing_kind(routing.as_deref(), t.family())?;
            let r = router_for(kind, &t)?;
            let (traffic, cfg) = sim.parse()?;
            let stats = simulate(&t, &r, &traffic, &cfg)?;
            emit(&out, render(out.format, &[sim_row(&t, &cfg, &stats)])?)
        }
        Command::Compare { sizes, sim, out } => {
            let (traffic, cfg) = sim.parse()?;
            let rows = compare_families(&sizes, &traffic, &cfg)?;
            emit(&out, render(out.format, &comparison_rows(&rows))?)
        }
        Command::ShortestPath { matrix, src, dst } => {
            let m = parse_adjacency_matrix(&read(&matrix)?)?;
            let mut text = m.summary_lines();
            text += &format!("Input starting vertex = {src}\nInput destination = {dst}\n");
            match m.shortest_path(src, dst) {
                Ok(p) => {
                    text += &shortest_path_lines(&p);
                    emit_stdout(text)
                }
                Err(e @ AnalysisError::Unreachable { .. }) => {
                    text += &format!("No path from {src} to {dst}\n");
                    emit_stdout(text)?;
                    Err(e.into())
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Params { family, rows, cols } => {
            let f = ParamFamily::parse(&family).ok_or_else(|| usage(format!("unknown family {family:?}")))?;
            let p = params_for(f, Size::new(rows, cols))?;
            emit_stdout(to_json_pretty(&p)? + "\n")
        }
    }
}

impl TopoArgs {
    fn build(&self) -> Result<Topology, Failure> {
        let name = self.family.as_deref().ok_or_else(|| usage("--family is required"))?;
        let family = Family::parse(name).ok_or_else(|| usage(format!("unknown or unbuildable family {name:?}")))?;
        let rows = self.rows.ok_or_else(|| usage("--rows is required"))?;
        let cols = match family {
            Family::BinaryTree => self.cols.unwrap_or(1),
            _ => self.cols.unwrap_or(rows),
        };
        let extra_links = match &self.extra_links {
            None => None,
            Some(pairs) => Some(pairs.iter().map(|p| parse_pair(p)).collect::<Result<Vec<_>, _>>()?),
        };
        Ok(build_topology(family, Size::new(rows, cols), &BuildConfig { extra_links })?)
    }
}

fn parse_pair(s: &str) -> Result<(NodeId, NodeId), Failure> {
    let (a, b) = s.split_once('-').ok_or_else(|| usage(format!("link {s:?} is not a-b")))?;
    let id = |v: &str| v.trim().parse().map(NodeId).map_err(|_| usage(format!("bad node id in {s:?}")));
    Ok((id(a)?, id(b)?))
}

impl SimArgs {
    fn parse(&self) -> Result<(TrafficPattern, SimConfig), Failure> {
        let traffic =
            TrafficPattern::parse(&self.traffic).ok_or_else(|| usage(format!("unknown traffic {:?}", self.traffic)))?;
        let switching =
            Switching::parse(&self.switching).ok_or_else(|| usage(format!("unknown switching {:?}", self.switching)))?;
        let cfg = SimConfig {
            flits_per_packet: self.flits,
            cycles_per_hop: self.cycles_per_hop,
            injection: self.injection,
            warmup: self.warmup,
            measure: self.measure,
            seed: self.seed,
            switching,
            buffer_depth: self.buffer_depth,
            ..SimConfig::default()
        };
        cfg.validate()?;
        Ok((traffic, cfg))
    }
}

fn routing_kind(name: Option<&str>, family: Family) -> Result<RoutingKind, Failure> {
    match name {
        None => Ok(RoutingKind::native(family)),
        Some(n) => RoutingKind::parse(n).ok_or_else(|| {
            Failure::from(RoutingError::UnsupportedTopology { router: n.to_string(), family })
        }),
    }
}

fn render<T: serde::Serialize>(format: Format, rows: &[T]) -> Result<String, IoError> {
    match format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_csv(rows, &mut buf)?;
            Ok(String::from_utf8(buf).expect("csv output is utf-8"))
        }
        Format::Json if rows.len() == 1 => Ok(to_json_pretty(&rows[0])? + "\n"),
        Format::Json => Ok(to_json_pretty(rows)? + "\n"),
    }
}

fn read(path: &PathBuf) -> Result<String, IoError> {
    Ok(fs::read_to_string(path)?)
}

fn emit(out: &OutArgs, text: String) -> Result<(), Failure> {
    match &out.out {
        Some(path) => fs::write(path, text).map_err(IoError::from)?,
        None => emit_stdout(text)?,
    }
    Ok(())
}

fn emit_stdout(text: String) -> Result<(), Failure> {
    io::stdout().write_all(text.as_bytes()).map_err(IoError::from)?;
    Ok(())
}
