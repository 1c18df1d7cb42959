use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use qtorus_cli::emit::to_json;
use qtorus_cli::run::{flux_histogram, parse_tiling};
use qtorus_cli::{emit, load_store, run, ExperimentConfig, Format, Task};
use qtorus_core::flipgraph::to_dot;
use qtorus_core::tiling::DEFAULT_CAP;
use qtorus_core::{
    base_tiling, build_flip_graph, forcing_spectrum, load_or_enumerate, named_tilings, EnumerateOptions, ForcingSolver,
    Homology, SpectrumOptions, Torus, TorusSpec,
};

#[derive(Parser)]
#[command(name = "qtorus", version, about = "Domino tilings of quadriculated tori")]
struct Cli {
    #[command(flatten)]
    store: StoreArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct StoreArgs {
    /// Directory for cached tiling stores.
    #[arg(long, global = true, env = "QTORUS_CACHE_DIR", default_value = ".qtorus-cache")]
    cache_dir: PathBuf,
    /// Enumerate from scratch without reading or writing the cache.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Refuse instances with more tilings than this.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: usize,
}

impl StoreArgs {
    fn dir(&self) -> Option<PathBuf> {
        (!self.no_cache).then(|| self.cache_dir.clone())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print vertices, edges and faces as JSON.
    Torus { spec: TorusSpec },
    /// Count the tilings and write them to the cache.
    Enumerate { spec: TorusSpec },
    /// Flip-graph component statistics.
    Components {
        spec: TorusSpec,
        /// Also write the flip graph in DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Largest store the DOT export accepts.
        #[arg(long, default_value_t = 5000)]
        dot_limit: usize,
    },
    /// Flux of one tiling relative to the base tiling.
    Flux {
        spec: TorusSpec,
        #[arg(long)]
        tiling: String,
        /// Reference tiling instead of the base tiling.
        #[arg(long)]
        base: Option<String>,
    },
    /// Tilings and components per flux class.
    FluxHistogram {
        spec: TorusSpec,
        #[arg(long)]
        json: bool,
    },
    /// Named tilings (singletons, flux families) with hex encodings and fluxes.
    Families { spec: TorusSpec },
    /// Forcing spectrum over every tiling.
    Spectrum {
        spec: TorusSpec,
        /// Solve every tiling instead of one per translation orbit.
        #[arg(long)]
        no_orbits: bool,
    },
    /// Forcing number and a minimum forcing set of one tiling.
    Forcing {
        spec: TorusSpec,
        #[arg(long)]
        tiling: String,
    },
    /// Run a task over a list or sweep of tori and write a report.
    Run(RunArgs),
    /// `run` with the verify task.
    Verify(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// `T(n,m,r)` specs and/or sweep tokens such as `n=1..6 m=2..8 r=*`.
    targets: Vec<String>,
    /// JSON experiment config; flags given here override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    task: Option<Task>,
    #[arg(long, conflicts_with = "non_bipartite")]
    bipartite: bool,
    #[arg(long)]
    non_bipartite: bool,
    #[arg(long)]
    simple_only: bool,
    /// Report path; without it the JSON report goes to stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    spectrum_limit: Option<usize>,
}

fn print_json(value: &impl serde::Serialize) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn build_config(args: RunArgs, store: &StoreArgs, task: Option<Task>) -> anyhow::Result<(ExperimentConfig, Format)> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig { cap: store.cap, ..Default::default() },
    };
    if let Some(t) = task.or(args.task) {
        cfg.task = t;
    }
    let (specs, sweep): (Vec<String>, Vec<String>) = args.targets.into_iter().partition(|t| !t.contains('='));
    cfg.specs.extend(specs);
    if !sweep.is_empty() {
        if cfg.sweep.is_some() {
            bail!("a sweep is given both in the config and on the command line");
        }
        cfg.sweep = Some(sweep.join(" ").parse()?);
    }
    cfg.filters.bipartite |= args.bipartite;
    cfg.filters.non_bipartite |= args.non_bipartite;
    cfg.filters.simple_only |= args.simple_only;
    if args.output.is_some() {
        cfg.output = args.output;
    }
    if cfg.cache_dir.is_none() {
        cfg.cache_dir = store.dir();
    }
    if args.threads.is_some() {
        cfg.threads = args.threads;
    }
    if let Some(l) = args.spectrum_limit {
        cfg.spectrum_limit = l;
    }
    Ok((cfg, args.format))
}

fn run_command(args: RunArgs, store: &StoreArgs, task: Option<Task>) -> anyhow::Result<bool> {
    let (cfg, format) = build_config(args, store, task)?;
    let report = run(&cfg)?;
    match &cfg.output {
        Some(path) => {
            for p in emit(&report, format, path)? {
                eprintln!("wrote {}", p.display());
            }
        }
        None => print!("{}", to_json(&report)),
    }
    for inst in &report.instances {
        eprintln!(
            "{:<14} {:>6} {:>8.1?}",
            inst.spec,
            if inst.passed() { "ok" } else { "FAILED" },
            inst.wall_time
        );
    }
    for (spec, msg) in report.failures() {
        eprintln!("{spec}: {msg}");
    }
    eprintln!(
        "{} instances, {} checks, {}",
        report.instances.len(),
        report.check_count(),
        if report.passed() { "all passed" } else { "FAILURES" }
    );
    Ok(report.passed())
}

fn main() -> ExitCode {
    match real_main() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn real_main() -> anyhow::Result<bool> {
    let cli = Cli::parse();
    let s = &cli.store;
    let setup = |spec: TorusSpec| -> anyhow::Result<(Torus, qtorus_core::TilingStore)> {
        let torus = Torus::new(spec);
        let (store, _) = load_store(&torus, s.dir().as_deref(), s.cap)?;
        Ok((torus, store))
    };
    match cli.command {
        Command::Torus { spec } => print_json(&Torus::new(spec).to_json())?,
        Command::Enumerate { spec } => {
            let torus = Torus::new(spec);
            let dir = s.dir().context("enumerate writes the cache; drop --no-cache")?;
            let (store, status) = load_or_enumerate(&torus, &dir, EnumerateOptions { cap: s.cap })?;
            print_json(&json!({
                "spec": spec.to_string(),
                "tilings": store.len(),
                "cache": status,
                "cache_dir": dir,
            }))?;
        }
        Command::Components { spec, dot, dot_limit } => {
            let (torus, store) = setup(spec)?;
            let graph = build_flip_graph(&torus, &store);
            if let Some(path) = dot {
                if store.len() > dot_limit {
                    bail!("{spec} has {} tilings, above the DOT limit of {dot_limit}", store.len());
                }
                fs::write(&path, to_dot(&torus, &store, &graph))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            let summary = graph.summary();
            print_json(&json!({
                "spec": spec.to_string(),
                "tilings": summary.tilings,
                "components": summary.components,
                "singletons": summary.singletons,
                "largest_component": summary.largest_component,
                "sizes": summary.sizes,
            }))?;
        }
        Command::Flux { spec, tiling, base } => {
            let torus = Torus::new(spec);
            let t = parse_tiling(&torus, &tiling)?;
            let base = match base {
                Some(hex) => parse_tiling(&torus, &hex)?,
                None => base_tiling(&torus)?,
            };
            let f = Homology::new(&torus)?.flux(&torus, &t, &base)?;
            print_json(&f)?;
        }
        Command::FluxHistogram { spec, json } => {
            let (torus, store) = setup(spec)?;
            let graph = build_flip_graph(&torus, &store);
            let rows = flux_histogram(&torus, &store, &graph)?;
            if json {
                print_json(&rows)?;
            } else {
                println!("{:>10} {:>10} {:>10}", "flux", "tilings", "components");
                for r in rows {
                    println!("{:>10} {:>10} {:>10}", format!("({},{})", r.a, r.b), r.tilings, r.components);
                }
            }
        }
        Command::Families { spec } => print_json(&named_tilings(&Torus::new(spec))?)?,
        Command::Spectrum { spec, no_orbits } => {
            let (torus, store) = setup(spec)?;
            let start = Instant::now();
            let opts = SpectrumOptions { use_orbits: !no_orbits, ..Default::default() };
            let report = forcing_spectrum(&torus, &store, opts)?;
            let s = &report.spectrum;
            print_json(&json!({
                "spec": spec.to_string(),
                "tilings": store.len(),
                "spectrum": s.values(),
                "gaps": s.gaps(),
                "counts": s.counts,
                "solved": report.solved,
                "wall_time_ms": start.elapsed().as_millis(),
            }))?;
        }
        Command::Forcing { spec, tiling } => {
            let torus = Torus::new(spec);
            let t = parse_tiling(&torus, &tiling)?;
            print_json(&ForcingSolver::new(&torus)?.solve(&t)?)?;
        }
        Command::Run(args) => return run_command(args, s, None),
        Command::Verify(args) => return run_command(args, s, Some(Task::Verify)),
    }
    Ok(true)
}
