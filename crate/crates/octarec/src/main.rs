use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use octarec::core::network::SurfaceKind;
use octarec::core::Partition;
use octarec::run::threads_from_env;
use octarec::{Dump, Engine, Format, RunConfig, Target};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SurfaceArg {
    Steepest,
    Walls,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Text,
    Json,
    Latex,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DumpArg {
    Surface,
    Network,
    Dimer,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RestrictArg {
    Bs,
}

/// Exact octahedron-recurrence polynomials of a partition.
#[derive(Debug, Parser)]
#[command(name = "octarec", version)]
struct Args {
    /// Parts, e.g. 3,2,1
    #[arg(long, required_unless_present = "compare", value_parser = parse_partition)]
    partition: Option<Partition>,
    #[arg(long, value_enum, default_value = "steepest")]
    surface: SurfaceArg,
    /// Every box (and every square for pyramids); the default
    #[arg(long, conflicts_with_all = ["cell", "pyramid"])]
    all: bool,
    /// One box a,b
    #[arg(long = "box", value_parser = parse_pair)]
    cell: Option<(u32, u32)>,
    /// Pyramid a,b,m
    #[arg(long, value_parser = parse_triple, conflicts_with = "cell")]
    pyramid: Option<(u32, u32, u32)>,
    /// Comma separated: recurrence,transfer,paths,dimers
    #[arg(long, default_value = "recurrence", value_parser = parse_engines)]
    engines: Engines,
    #[arg(long, value_enum)]
    restrict: Option<RestrictArg>,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    /// Extra columns beyond the diagram on each side
    #[arg(long, default_value_t = octarec::core::octahedron::DEFAULT_MARGIN)]
    margin: u32,
    /// Run every engine on all partitions of size at most 6
    #[arg(long)]
    compare: bool,
    #[arg(long, value_enum)]
    dump: Option<DumpArg>,
}

fn numbers(s: &str, n: usize) -> Result<Vec<u32>, String> {
    let v: Vec<u32> = s
        .split(',')
        .map(|x| x.trim().parse::<u32>().map_err(|e| format!("{}: {}", x, e)))
        .collect::<Result<_, _>>()?;
    if v.len() != n || v.contains(&0) {
        return Err(format!("expected {} positive integers", n));
    }
    Ok(v)
}

fn parse_pair(s: &str) -> Result<(u32, u32), String> {
    let v = numbers(s, 2)?;
    Ok((v[0], v[1]))
}

fn parse_triple(s: &str) -> Result<(u32, u32, u32), String> {
    let v = numbers(s, 3)?;
    Ok((v[0], v[1], v[2]))
}

#[derive(Clone, Debug)]
struct Engines(Vec<Engine>);

fn parse_partition(s: &str) -> Result<Partition, String> {
    s.parse()
        .map_err(|e: octarec::core::DiagramError| e.to_string())
}

fn parse_engines(s: &str) -> Result<Engines, String> {
    let mut out: Vec<Engine> = Vec::new();
    for name in s.split(',') {
        let e = Engine::parse(name.trim()).ok_or_else(|| format!("unknown engine {}", name))?;
        if !out.contains(&e) {
            out.push(e);
        }
    }
    Ok(Engines(out))
}

fn main() -> ExitCode {
    let args = Args::parse();
    let threads = threads_from_env();
    let outcome = if args.compare {
        octarec::compare(6, args.margin, threads)
    } else {
        let mut cfg = RunConfig::new(args.partition.expect("required by clap"));
        cfg.surface = match args.surface {
            SurfaceArg::Steepest => SurfaceKind::Steepest,
            SurfaceArg::Walls => SurfaceKind::Walls,
        };
        cfg.target = match (args.cell, args.pyramid) {
            (Some((a, b)), _) => Target::Box(a, b),
            (_, Some((a, b, m))) => Target::Pyramid(a, b, m),
            _ => Target::All,
        };
        cfg.engines = args.engines.0;
        cfg.restrict = args.restrict.is_some();
        cfg.format = match args.format {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
            FormatArg::Latex => Format::Latex,
        };
        cfg.margin = args.margin;
        cfg.dump = args.dump.map(|d| match d {
            DumpArg::Surface => Dump::Surface,
            DumpArg::Network => Dump::Network,
            DumpArg::Dimer => Dump::Dimer,
        });
        cfg.threads = threads;
        octarec::run(&cfg)
    };
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    ExitCode::from(outcome.code as u8)
}
