mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use hjelmslev::appendix;
use hjelmslev::arcsearch::{classify, resume, Checkpoint, SearchOptions, Status};
use hjelmslev::canon::{canonical_form, ColoredGraph};
use hjelmslev::codes::{code_report, parse_arc_file};
use hjelmslev::geometry::Geometry;
use hjelmslev::ring::{ring, RingName};
use hjelmslev::table1::{self, RunConfig, Scope, Verdict};

use report::{write_json, Completeness, Envelope};

const EXIT_MISMATCH: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_USAGE: u8 = 3;

#[derive(Parser)]
#[command(name = "phg", version, about = "Arcs in projective Hjelmslev geometries over small chain rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect the built-in chain rings.
    Ring {
        #[command(subcommand)]
        action: RingAction,
    },
    /// Build PHG(k,R) and print its parameters.
    Geom {
        #[command(subcommand)]
        action: GeomAction,
    },
    /// Classify complete (n,u)-arcs up to equivalence.
    Search(SearchArgs),
    /// Check an arc file or the bundled reference arcs.
    Verify(VerifyArgs),
    /// Reproduce the table of maximal arcs.
    Table1(Table1Args),
    /// Check the structure of the hyperovals of PHG(2,Z4).
    Prop7(ReportArg),
    /// Canonical form of a colored graph in DIMACS-like text.
    Canon(CanonArgs),
}

#[derive(Subcommand)]
enum RingAction {
    List,
    Show { name: RingName },
}

#[derive(Subcommand)]
enum GeomAction {
    Build {
        #[arg(long)]
        ring: RingName,
        #[arg(long)]
        dim: usize,
        /// Also write the binary geometry cache here.
        #[arg(long)]
        cache: Option<PathBuf>,
        #[command(flatten)]
        report: ReportArg,
    },
}

#[derive(Args)]
struct ReportArg {
    /// Write a JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct JobsArg {
    /// Worker threads.
    #[arg(long, env = "PHG_JOBS", default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    ring: RingName,
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    u: usize,
    /// Allow each point at most once.
    #[arg(long)]
    sets_only: bool,
    /// Skip subtrees that cannot reach this size; smaller complete arcs are lost.
    #[arg(long, default_value_t = 0)]
    min_size: usize,
    /// Only classify arcs of maximum size.
    #[arg(long)]
    maximal_only: bool,
    /// Report every complete class, not only the largest.
    #[arg(long)]
    all_complete: bool,
    #[command(flatten)]
    jobs: JobsArg,
    /// Depth at which the search tree is split into tasks.
    #[arg(long, default_value_t = 3)]
    split_depth: usize,
    #[arg(long)]
    node_budget: Option<u64>,
    /// Seconds.
    #[arg(long)]
    time_budget: Option<f64>,
    /// Resumed from when present; written when a budget runs out.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    #[command(flatten)]
    report: ReportArg,
}

#[derive(Args)]
#[group(required = true, multiple = false, id = "source")]
struct VerifySource {
    #[arg(long)]
    arc_file: Option<PathBuf>,
    /// Check all bundled reference arcs.
    #[arg(long)]
    appendix: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    source: VerifySource,
    /// Overrides the `u=` header of the arc file.
    #[arg(long, requires = "arc_file")]
    u: Option<usize>,
    #[command(flatten)]
    report: ReportArg,
}

#[derive(Args)]
struct Table1Args {
    #[arg(long, default_value = "small")]
    scope: Scope,
    /// Per-cell time budget in seconds.
    #[arg(long)]
    cell_budget: Option<f64>,
    #[arg(long)]
    checkpoint_dir: Option<PathBuf>,
    #[command(flatten)]
    jobs: JobsArg,
    #[command(flatten)]
    report: ReportArg,
}

#[derive(Args)]
struct CanonArgs {
    #[arg(long)]
    dimacs: PathBuf,
    #[command(flatten)]
    report: ReportArg,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let env = Envelope::new();
    match cli.command {
        Command::Ring { action: RingAction::List } => {
            println!("{:<5} {:>5} {:>3} {:>3} {:>5}  presentation", "name", "order", "q", "m", "char");
            for name in RingName::ALL {
                let r = ring(name);
                println!(
                    "{:<5} {:>5} {:>3} {:>3} {:>5}  {}",
                    name.as_str(),
                    r.size,
                    r.q,
                    r.m,
                    r.characteristic(),
                    r.presentation.text
                );
            }
            Ok(0)
        }
        Command::Ring { action: RingAction::Show { name } } => {
            print!("{}", ring(name).show());
            Ok(0)
        }
        Command::Geom { action: GeomAction::Build { ring: name, dim, cache, report } } => {
            let geom = Geometry::build(ring(name), dim)?;
            let summary = geom.summary();
            println!("{}", serde_json::to_string_pretty(&summary)?);
            if let Some(path) = cache {
                let file = std::fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                geom.write_cache(std::io::BufWriter::new(file))?;
            }
            if let Some(path) = report.report {
                write_json(&path, &env.wrap(Some(&geom.ring), Some(dim), None, Completeness::Final, summary))?;
            }
            Ok(0)
        }
        Command::Search(args) => search(&env, args),
        Command::Verify(args) => verify(&env, args),
        Command::Table1(args) => table(&env, args),
        Command::Prop7(report) => {
            let r = hjelmslev::prop7::run()?;
            for c in &r.checks {
                let mark = if c.ok { "ok" } else { "MISMATCH" };
                println!("{mark:<8} {}: expected {}, got {}", c.field, c.expected, c.actual);
            }
            let ok = r.ok();
            if let Some(path) = report.report {
                let z4 = ring(RingName::Z4);
                write_json(&path, &env.wrap(Some(&z4), Some(2), Some(2), Completeness::Final, &r))?;
            }
            Ok(if ok { 0 } else { EXIT_MISMATCH })
        }
        Command::Canon(args) => {
            let text = std::fs::read_to_string(&args.dimacs).with_context(|| format!("reading {}", args.dimacs.display()))?;
            let g = ColoredGraph::from_dimacs(&text)?;
            let c = canonical_form(&g);
            println!("vertices {}", g.n());
            println!("aut_order {}", c.aut_order);
            println!("generators {}", c.aut_generators.len());
            println!("canonical_form {}", to_hex(&c.canonical_form));
            if let Some(path) = args.report.report {
                write_json(&path, &env.wrap(None, None, None, Completeness::Final, &c))?;
            }
            Ok(0)
        }
    }
}

fn to_hex(b: &[u8]) -> String {
    b.iter().map(|x| format!("{x:02x}")).collect()
}

fn search(env: &Envelope, a: SearchArgs) -> anyhow::Result<u8> {
    if a.u < 2 {
        bail!("--u must be at least 2");
    }
    let geom = Geometry::build(ring(a.ring), a.dim)?;
    let opts = SearchOptions {
        sets_only: a.sets_only,
        min_size: a.min_size,
        maximal_only: a.maximal_only,
        jobs: a.jobs.jobs.max(1),
        split_depth: a.split_depth,
        node_budget: a.node_budget,
        time_budget: a.time_budget.map(Duration::from_secs_f64),
        keep_all_complete: a.all_complete,
        ..SearchOptions::default()
    };
    let existing = a.checkpoint.as_ref().filter(|p| p.exists());
    let result = match existing {
        Some(path) => {
            let cp = Checkpoint::load(path)?;
            if cp.u != a.u {
                bail!("checkpoint {} is for u={}, not u={}", path.display(), cp.u, a.u);
            }
            resume(&geom, &cp, &opts)?
        }
        None => classify(&geom, a.u, &opts)?,
    };
    match (&result.checkpoint, &a.checkpoint) {
        (Some(cp), Some(path)) => {
            cp.save(path)?;
            eprintln!("budget exhausted; checkpoint written to {}", path.display());
        }
        (Some(_), None) => eprintln!("budget exhausted; pass --checkpoint to keep the unexplored frontier"),
        (None, Some(path)) if path.exists() => std::fs::remove_file(path)?,
        _ => {}
    }
    let status = match result.status {
        Status::Final => Completeness::Final,
        Status::BudgetExhausted => Completeness::BudgetExhausted,
    };
    print_search(&geom, &result);
    if let Some(path) = &a.report.report {
        write_json(path, &env.wrap(Some(&geom.ring), Some(a.dim), Some(a.u), status, &result))?;
    }
    Ok(if status == Completeness::Final { 0 } else { EXIT_BUDGET })
}

fn print_search(geom: &Geometry, r: &hjelmslev::arcsearch::ClassificationResult) {
    let status = match r.status {
        Status::Final => "final",
        Status::BudgetExhausted => "budget-exhausted (partial)",
    };
    println!("PHG({},{}) u={}: {status}, {} nodes", geom.k, geom.ring.name, r.u, r.nodes);
    match r.m_u {
        Some(m) => println!(
            "largest complete arc: n={m}, {} classes ({} nondegenerate)",
            r.total_at_max, r.nondegenerate_at_max
        ),
        None => println!("no complete arc found"),
    }
    if r.census_exhaustive {
        for (n, e) in &r.census {
            println!("  complete n={n}: {} classes ({} nondegenerate)", e.total, e.nondegenerate);
        }
    } else {
        println!("  census of smaller complete arcs not exhaustive (pruned search)");
    }
    for c in &r.classes_at_max {
        let flag = if c.degenerate { " degenerate" } else { "" };
        println!("  g={}{flag}: {}", c.aut_order, c.coordinates.join(","));
    }
}

fn verify(env: &Envelope, a: VerifyArgs) -> anyhow::Result<u8> {
    if a.source.appendix {
        let outcomes = appendix::verify_all();
        let mut ok = true;
        for o in &outcomes {
            println!("{} {}", if o.ok() { "ok      " } else { "MISMATCH" }, o.title);
            for c in o.mismatches() {
                println!("    {}: expected {}, got {}", c.field, c.expected, c.actual);
            }
            ok &= o.ok();
        }
        if let Some(path) = &a.report.report {
            write_json(path, &env.wrap(None, None, None, Completeness::Final, &outcomes))?;
        }
        return Ok(if ok { 0 } else { EXIT_MISMATCH });
    }
    let path = a.source.arc_file.expect("clap enforces one source");
    verify_file(env, &path, a.u, a.report.report.as_deref())
}

#[derive(serde::Serialize)]
struct ArcVerification {
    n: usize,
    u: usize,
    max_load: u16,
    valid: bool,
    complete: bool,
    #[serde(serialize_with = "hjelmslev::report::biguint_string")]
    aut_order: hjelmslev::BigUint,
    code: hjelmslev::codes::CodeReport,
}

fn verify_file(env: &Envelope, path: &Path, u: Option<usize>, report: Option<&Path>) -> anyhow::Result<u8> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file = parse_arc_file(&text)?;
    let u = u.or(file.u).context("no u given: add a `u=` header or pass --u")?;
    let geom = Geometry::build(ring(file.ring), file.k)?;
    let arc = file.resolve(&geom)?;
    let lab = hjelmslev::canon::canonical_labeling(&hjelmslev::arcsearch::arc_graph(&geom, &arc, u));
    let result = ArcVerification {
        n: arc.n(),
        u,
        max_load: arc.max_load(),
        valid: arc.is_valid(u),
        complete: arc.is_valid(u) && hjelmslev::arcsearch::addable_points(&geom, &arc, u).is_empty(),
        aut_order: lab.group_order(),
        code: code_report(&geom, &arc),
    };
    let valid = result.valid;
    let wrapped = env.wrap(Some(&geom.ring), Some(geom.k), Some(u), Completeness::Final, result);
    println!("{}", serde_json::to_string_pretty(&wrapped)?);
    if let Some(p) = report {
        write_json(p, &wrapped)?;
    }
    Ok(if valid { 0 } else { EXIT_MISMATCH })
}

fn table(env: &Envelope, a: Table1Args) -> anyhow::Result<u8> {
    let cells = table1::selected(a.scope);
    let cfg = RunConfig {
        jobs: a.jobs.jobs.max(1),
        cell_budget: a.cell_budget.map(Duration::from_secs_f64),
        checkpoint_dir: a.checkpoint_dir,
    };
    let outcomes = table1::run(&cells, &cfg, |o| {
        let mark = match o.verdict {
            Verdict::Match => "ok      ",
            Verdict::Mismatch => "MISMATCH",
            Verdict::BudgetExhausted => "BUDGET  ",
        };
        println!("{mark} PHG({},{}) u={}: {} [{:.1}s]", o.k, o.ring, o.u, o.diff(), o.seconds);
    })?;
    let mismatch = outcomes.iter().any(|o| o.verdict == Verdict::Mismatch);
    let budget = outcomes.iter().any(|o| o.verdict == Verdict::BudgetExhausted);
    let status = if budget { Completeness::BudgetExhausted } else { Completeness::Final };
    if let Some(path) = &a.report.report {
        write_json(path, &env.wrap(None, None, None, status, &outcomes))?;
    }
    Ok(if mismatch {
        EXIT_MISMATCH
    } else if budget {
        EXIT_BUDGET
    } else {
        0
    })
}
