//! Configuration and execution of a CLI run.

use std::fmt::Write as _;

use octarec_core::bessenrodt_stanley::Restriction;
use octarec_core::network::{lgv_value, transfer_value, SurfaceKind};
use octarec_core::octahedron::{SteepestSystem, WallSystem};
use octarec_core::{Cell, EngineError, LaurentPoly, Partition, VarTable};
use serde_json::{json, Value};

use crate::formats::{partition_to_json, poly_to_json, poly_to_latex, table_to_json, SCHEMA};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Engine {
    Recurrence,
    Transfer,
    Paths,
    Dimers,
}

impl Engine {
    pub const ALL: [Engine; 4] = [
        Engine::Recurrence,
        Engine::Transfer,
        Engine::Paths,
        Engine::Dimers,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Engine::Recurrence => "recurrence",
            Engine::Transfer => "transfer",
            Engine::Paths => "paths",
            Engine::Dimers => "dimers",
        }
    }

    pub fn parse(s: &str) -> Option<Engine> {
        Engine::ALL.into_iter().find(|e| e.name() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    All,
    Box(u32, u32),
    Pyramid(u32, u32, u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dump {
    Surface,
    Network,
    Dimer,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub partition: Partition,
    pub surface: SurfaceKind,
    pub target: Target,
    pub engines: Vec<Engine>,
    pub restrict: bool,
    pub format: Format,
    pub margin: u32,
    pub dump: Option<Dump>,
    pub threads: usize,
}

impl RunConfig {
    pub fn new(partition: Partition) -> Self {
        RunConfig {
            partition,
            surface: SurfaceKind::Steepest,
            target: Target::All,
            engines: vec![Engine::Recurrence],
            restrict: false,
            format: Format::Text,
            margin: octarec_core::octahedron::DEFAULT_MARGIN,
            dump: None,
            threads: 1,
        }
    }
}

/// Exit status plus the two output streams.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(msg: impl Into<String>) -> Self {
        Outcome {
            code: 2,
            stdout: String::new(),
            stderr: msg.into() + "\n",
        }
    }

    fn failure(msg: impl Into<String>) -> Self {
        Outcome {
            code: 1,
            stdout: String::new(),
            stderr: msg.into() + "\n",
        }
    }
}

/// Pool size from OCTAREC_THREADS, else the available parallelism.
pub fn threads_from_env() -> usize {
    std::env::var("OCTAREC_THREADS")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .filter(|&n: &usize| n > 0)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
}

#[derive(Clone, Debug)]
enum System {
    Steepest(SteepestSystem),
    Walls(WallSystem),
}

impl System {
    fn table(&self) -> &VarTable {
        match self {
            System::Steepest(s) => &s.table,
            System::Walls(s) => &s.table,
        }
    }

    fn squares(&self) -> Vec<(u32, u32, u32)> {
        match self {
            System::Steepest(s) => {
                let mut v: Vec<_> = s.star.cells().map(|c| (c.a, c.b, 1)).collect();
                v.extend(s.pyramid_squares());
                v.sort();
                v
            }
            System::Walls(s) => {
                let mut v = Vec::new();
                for c in s.lam.cells() {
                    let n = s.lam.square_at(c.a, c.b).map(|q| q.size).unwrap_or(1);
                    v.extend((1..=n).map(|m| (c.a, c.b, m)));
                }
                v
            }
        }
    }

    fn valid(&self, a: u32, b: u32, m: u32) -> bool {
        match self {
            System::Steepest(s) => s.star.fits_square(a, b, m),
            System::Walls(s) => s.lam.fits_square(a, b, m),
        }
    }

    /// None when the engine does not cover this entry.
    fn compute(
        &mut self,
        e: Engine,
        a: u32,
        b: u32,
        m: u32,
    ) -> Option<Result<LaurentPoly, EngineError>> {
        match self {
            System::Steepest(s) => {
                let inner = s.lam.contains(Cell::new(a, b));
                match (e, m) {
                    (Engine::Recurrence, 1) => Some(s.p(a, b)),
                    (Engine::Recurrence, _) => Some(s.pyramid(a, b, m)),
                    (Engine::Transfer, 1) if inner => Some(s.transfer(a, b, Default::default())),
                    (Engine::Paths, 1) if inner => Some(s.path_value(a, b)),
                    (Engine::Paths, m) if m > 1 && s.lam.fits_square(a, b, m) => {
                        Some(s.lgv_network(a, b, m).and_then(|n| lgv_value(&n)))
                    }
                    (Engine::Dimers, 1) if inner => Some(s.dimer_value(a, b)),
                    _ => None,
                }
            }
            System::Walls(s) => match (e, m) {
                (Engine::Recurrence, _) => Some(s.q(a, b, m)),
                (Engine::Transfer, 1) => {
                    let pt = s.point(Cell::new(a, b));
                    Some(transfer_value(
                        s.solver.surface(),
                        s.solver.data(),
                        pt.j,
                        pt.k,
                    ))
                }
                (Engine::Paths, 1) => Some(
                    s.network(a, b)
                        .map(|n| &n.partition_function(n.source(), n.sink()) * &n.boundary_factor),
                ),
                (Engine::Paths, _) => Some(s.lgv_network(a, b, m).and_then(|n| lgv_value(&n))),
                _ => None,
            },
        }
    }
}

/// One computed (a, b, m) with the engines that produced it.
#[derive(Clone, Debug)]
pub struct Entry {
    pub a: u32,
    pub b: u32,
    pub m: u32,
    pub values: Vec<(&'static str, LaurentPoly)>,
}

impl Entry {
    pub fn value(&self) -> &LaurentPoly {
        &self.values[0].1
    }

    pub fn agree(&self) -> bool {
        self.values.iter().all(|(_, v)| v == self.value())
    }

    fn label(&self, letter: char) -> String {
        if self.m == 1 {
            format!("{}[{},{}]", letter, self.a, self.b)
        } else {
            format!("{}[{},{},{}]", letter, self.a, self.b, self.m)
        }
    }
}

fn compute_entry(
    sys: &mut System,
    engines: &[Engine],
    restriction: Option<&Restriction>,
    (a, b, m): (u32, u32, u32),
) -> Result<Entry, String> {
    let mut values = Vec::new();
    for &e in engines {
        if let Some(r) = sys.compute(e, a, b, m) {
            let v =
                r.map_err(|err| format!("{} failed at ({},{},{}): {}", e.name(), a, b, m, err))?;
            values.push((e.name(), v));
        }
    }
    if let Some(r) = restriction {
        for (name, v) in &mut values {
            *v = r
                .specialize(v)
                .map_err(|err| format!("{} at ({},{},{}): {}", name, a, b, m, err))?;
        }
        let direct = if m == 1 {
            r.bs_direct(a, b)
        } else {
            r.bs_pyramid_direct(a, b, m)
        };
        values.push(("subdiagrams", direct.map_err(|err| err.to_string())?));
    }
    Ok(Entry { a, b, m, values })
}

/// Computes every requested entry, fanned out over `threads` workers; results keep input order.
fn compute_all(
    sys: &System,
    engines: &[Engine],
    restriction: Option<&Restriction>,
    squares: &[(u32, u32, u32)],
    threads: usize,
) -> Result<Vec<Entry>, String> {
    let threads = threads.clamp(1, squares.len().max(1));
    let mut slots: Vec<Option<Result<Entry, String>>> = vec![None; squares.len()];
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|w| {
                let mut local = sys.clone();
                scope.spawn(move || {
                    (w..squares.len())
                        .step_by(threads)
                        .map(|i| {
                            (
                                i,
                                compute_entry(&mut local, engines, restriction, squares[i]),
                            )
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, r) in h.join().expect("worker panicked") {
                slots[i] = Some(r);
            }
        }
    });
    slots
        .into_iter()
        .map(|s| s.expect("every slot filled"))
        .collect()
}

fn build_system(lam: &Partition, kind: SurfaceKind, margin: u32) -> Result<System, EngineError> {
    Ok(match kind {
        SurfaceKind::Steepest => System::Steepest(SteepestSystem::new(lam, margin)?),
        SurfaceKind::Walls => System::Walls(WallSystem::new(lam, margin)?),
    })
}

fn surface_name(kind: SurfaceKind) -> &'static str {
    match kind {
        SurfaceKind::Steepest => "steepest",
        SurfaceKind::Walls => "walls",
    }
}

fn validate(cfg: &RunConfig) -> Result<(), String> {
    if cfg.engines.is_empty() {
        return Err("at least one engine is required".into());
    }
    if cfg.partition.is_empty() {
        return Err("the partition must be nonempty".into());
    }
    if cfg.surface == SurfaceKind::Walls {
        if cfg.engines.contains(&Engine::Dimers) {
            return Err("the dimers engine needs the steepest surface".into());
        }
        if cfg.restrict {
            return Err("--restrict bs needs the steepest surface".into());
        }
    }
    Ok(())
}

pub fn run(cfg: &RunConfig) -> Outcome {
    if let Err(msg) = validate(cfg) {
        return Outcome::usage(msg);
    }
    let mut sys = match build_system(&cfg.partition, cfg.surface, cfg.margin) {
        Ok(s) => s,
        Err(e) => return Outcome::usage(e.to_string()),
    };
    let squares = match cfg.target {
        Target::All => sys.squares(),
        Target::Box(a, b) => vec![(a, b, 1)],
        Target::Pyramid(a, b, m) => vec![(a, b, m)],
    };
    for &(a, b, m) in &squares {
        if m == 0 || !sys.valid(a, b, m) {
            return Outcome::usage(format!(
                "({},{},{}) does not fit {}",
                a, b, m, cfg.partition
            ));
        }
    }
    if let Some(d) = cfg.dump {
        return dump(&sys, d, cfg.target);
    }
    let restriction = match (&mut sys, cfg.restrict) {
        (System::Steepest(s), true) => Some(Restriction::for_system(s)),
        _ => None,
    };
    let entries = match compute_all(
        &sys,
        &cfg.engines,
        restriction.as_ref(),
        &squares,
        cfg.threads,
    ) {
        Ok(e) => e,
        Err(msg) => return Outcome::failure(msg),
    };
    if let Some(e) = entries.iter().find(|e| e.values.is_empty()) {
        return Outcome::usage(format!(
            "no selected engine covers ({},{},{})",
            e.a, e.b, e.m
        ));
    }
    let table = sys.table();
    let letter = if cfg.surface == SurfaceKind::Walls {
        'q'
    } else {
        'p'
    };
    let stdout = match render(cfg, &entries, table, letter) {
        Ok(s) => s,
        Err(msg) => return Outcome::failure(msg),
    };
    let mut out = Outcome {
        code: 0,
        stdout,
        stderr: String::new(),
    };
    if let Some(e) = entries.iter().find(|e| !e.agree()) {
        out.code = 1;
        let _ = writeln!(out.stderr, "mismatch at ({},{},{})", e.a, e.b, e.m);
        for (name, v) in &e.values {
            let _ = writeln!(
                out.stderr,
                "  {}: {}",
                name,
                v.render(table).unwrap_or_default()
            );
        }
    }
    out
}

fn render(
    cfg: &RunConfig,
    entries: &[Entry],
    table: &VarTable,
    letter: char,
) -> Result<String, String> {
    let mut s = String::new();
    match cfg.format {
        Format::Text => {
            let _ = writeln!(
                s,
                "partition {} surface {}",
                cfg.partition,
                surface_name(cfg.surface)
            );
            for e in entries {
                let v = e.value().render(table).map_err(|x| x.to_string())?;
                let engines: Vec<&str> = e.values.iter().map(|x| x.0).collect();
                let tag = if e.agree() { "" } else { " MISMATCH" };
                let _ = writeln!(
                    s,
                    "{} = {}  [{}]{}",
                    e.label(letter),
                    v,
                    engines.join(","),
                    tag
                );
            }
        }
        Format::Latex => {
            for e in entries {
                let v = poly_to_latex(e.value(), table).map_err(|x| x.to_string())?;
                let idx = if e.m == 1 {
                    format!("{},{}", e.a, e.b)
                } else {
                    format!("{},{},{}", e.a, e.b, e.m)
                };
                let _ = writeln!(s, "{}_{{{}}} = {} \\\\", letter, idx, v);
            }
        }
        Format::Json => {
            let mut list = Vec::new();
            for e in entries {
                let engines: Vec<&str> = e.values.iter().map(|x| x.0).collect();
                let mut obj = json!({
                    "a": e.a,
                    "b": e.b,
                    "m": e.m,
                    "value": poly_to_json(e.value(), table).map_err(|x| x.to_string())?,
                    "engines": engines,
                    "agree": e.agree(),
                });
                if !e.agree() {
                    let mut per = serde_json::Map::new();
                    for (name, v) in &e.values {
                        per.insert(
                            (*name).to_string(),
                            poly_to_json(v, table).map_err(|x| x.to_string())?,
                        );
                    }
                    obj["values"] = Value::Object(per);
                }
                list.push(obj);
            }
            let doc = json!({
                "schema": SCHEMA,
                "partition": partition_to_json(&cfg.partition),
                "surface": surface_name(cfg.surface),
                "restricted": cfg.restrict,
                "variables": table_to_json(table),
                "entries": list,
            });
            s = serde_json::to_string_pretty(&doc).map_err(|x| x.to_string())? + "\n";
        }
    }
    Ok(s)
}

fn dump(sys: &System, d: Dump, target: Target) -> Outcome {
    let (a, b) = match target {
        Target::Box(a, b) | Target::Pyramid(a, b, _) => (a, b),
        Target::All => (1, 1),
    };
    let text = match (sys, d) {
        (System::Steepest(s), Dump::Surface) => {
            octarec_core::surfaces::dump(s.solver.surface(), s.solver.data(), &s.table)
        }
        (System::Walls(s), Dump::Surface) => {
            octarec_core::surfaces::dump(s.solver.surface(), s.solver.data(), &s.table)
        }
        (System::Steepest(s), Dump::Network) => s.network(a, b).and_then(|n| n.dump(&s.table)),
        (System::Walls(s), Dump::Network) => s.network(a, b).and_then(|n| n.dump(&s.table)),
        (System::Steepest(s), Dump::Dimer) => s.dimer_graph(a, b).and_then(|g| g.dump(&s.table)),
        (System::Walls(_), Dump::Dimer) => {
            return Outcome::usage("dimer graphs need the steepest surface")
        }
    };
    match text {
        Ok(stdout) => Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Outcome::usage(e.to_string()),
    }
}

/// All engines on every partition of size ≤ `max`, both surfaces.
pub fn compare(max: u32, margin: u32, threads: usize) -> Outcome {
    let mut out = Outcome {
        code: 0,
        stdout: String::new(),
        stderr: String::new(),
    };
    for lam in Partition::all_up_to(max) {
        if lam.is_empty() {
            continue;
        }
        for kind in [SurfaceKind::Steepest, SurfaceKind::Walls] {
            let engines: Vec<Engine> = match kind {
                SurfaceKind::Steepest => Engine::ALL.to_vec(),
                SurfaceKind::Walls => vec![Engine::Recurrence, Engine::Transfer, Engine::Paths],
            };
            let result = build_system(&lam, kind, margin)
                .map_err(|e| e.to_string())
                .and_then(|sys| compute_all(&sys, &engines, None, &sys.squares(), threads));
            let status = match result {
                Ok(entries) => match entries.iter().find(|e| !e.agree()) {
                    None => format!("ok {}", entries.len()),
                    Some(e) => {
                        out.code = 1;
                        format!("mismatch at ({},{},{})", e.a, e.b, e.m)
                    }
                },
                Err(msg) => {
                    out.code = 1;
                    format!("error {}", msg)
                }
            };
            let _ = writeln!(out.stdout, "{} {} {}", lam, surface_name(kind), status);
        }
    }
    out
}
