use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;

use qtorus_core::flipgraph::{neighbors, FaceMasks};
use qtorus_core::{
    base_tiling, build_flip_graph, enumerate_tilings, forcing_spectrum, four_singletons,
    load_or_enumerate, verify_two_components, CacheStatus, EnumerateOptions, Error, FlipGraph,
    FluxClass, Homology, LadderMaps, SpectrumOptions, SpectrumReport, Tiling, TilingStore, Torus,
    TorusSpec,
};

use crate::config::{ExperimentConfig, Target, Task};
use crate::report::{Check, FluxRow, InstanceRecord, SpectrumRecord, VerificationReport};

/// Known counts `(n, m, r, tilings, components, singletons)`.
const GOLDEN_COUNTS: [(u32, u32, u32, usize, usize, usize); 3] =
    [(3, 4, 1, 80, 12, 8), (4, 4, 2, 260, 11, 4), (4, 4, 4, 272, 17, 12)];

/// Known forcing spectra `(n, m, r, tilings, values)`.
const GOLDEN_SPECTRA: [(u32, u32, u32, usize, &[u32]); 2] =
    [(3, 10, 1, 18656, &[3, 5, 6, 7, 8]), (4, 10, 10, 537636, &[4, 6, 7, 8, 9, 10])];

/// The forcing solver packs vertices into 128-bit masks.
const FORCING_VERTEX_LIMIT: usize = 128;

/// Runs every target, in parallel, and merges the records in target order.
/// Per-instance failures are recorded, never propagated.
pub fn run(config: &ExperimentConfig) -> anyhow::Result<VerificationReport> {
    let targets = config.targets();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads.unwrap_or(0))
        .build()?;
    let instances = pool.install(|| targets.par_iter().map(|t| run_target(config, t)).collect());
    Ok(VerificationReport::new(config, instances))
}

fn run_target(config: &ExperimentConfig, target: &Target) -> InstanceRecord {
    let start = Instant::now();
    let mut rec = InstanceRecord::new(target.label());
    match target {
        Target::Invalid { error, .. } => rec.error = Some(error.clone()),
        Target::Spec(spec) => {
            if let Err(e) = run_instance(config, *spec, &mut rec) {
                rec.error = Some(e.to_string());
            }
        }
    }
    rec.wall_time = start.elapsed();
    rec
}

/// Store for `torus`, through the cache when a directory is given.
pub fn load_store(
    torus: &Torus,
    cache_dir: Option<&Path>,
    cap: usize,
) -> qtorus_core::Result<(TilingStore, Option<CacheStatus>)> {
    let opts = EnumerateOptions { cap };
    match cache_dir {
        Some(dir) => load_or_enumerate(torus, dir, opts).map(|(s, status)| (s, Some(status))),
        None => enumerate_tilings(torus, opts).map(|s| (s, None)),
    }
}

fn run_instance(config: &ExperimentConfig, spec: TorusSpec, rec: &mut InstanceRecord) -> qtorus_core::Result<()> {
    let torus = Torus::new(spec);
    rec.bipartite = Some(spec.is_bipartite());
    rec.simple = Some(torus.is_simple());
    let (store, cache) = load_store(&torus, config.cache_dir.as_deref(), config.cap)?;
    rec.cache = cache;
    rec.tilings = Some(store.len());
    if config.task == Task::Enumerate {
        return Ok(());
    }
    let graph = build_flip_graph(&torus, &store);
    rec.components = Some(graph.summary());
    match config.task {
        Task::Enumerate | Task::Components => {}
        Task::FluxHistogram => rec.flux_histogram = Some(flux_histogram(&torus, &store, &graph)?),
        Task::Spectrum => {
            let report = forcing_spectrum(&torus, &store, SpectrumOptions::default())?;
            rec.spectrum = Some(SpectrumRecord::from(&report.spectrum));
        }
        Task::Verify => verify_instance(config, &torus, &store, &graph, rec)?,
    }
    Ok(())
}

fn fluxes(torus: &Torus, store: &TilingStore) -> qtorus_core::Result<Vec<FluxClass>> {
    let h = Homology::new(torus)?;
    let base = base_tiling(torus)?;
    (0..store.len())
        .into_par_iter()
        .map(|i| h.flux(torus, &store.tiling(i), &base))
        .collect()
}

/// Tilings and components per flux class, ordered by class.
pub fn flux_histogram(torus: &Torus, store: &TilingStore, graph: &FlipGraph) -> qtorus_core::Result<Vec<FluxRow>> {
    let flux = fluxes(torus, store)?;
    let mut rows: BTreeMap<FluxClass, (usize, BTreeSet<usize>)> = BTreeMap::new();
    for (i, f) in flux.iter().enumerate() {
        let row = rows.entry(*f).or_default();
        row.0 += 1;
        row.1.insert(graph.component_of(i));
    }
    Ok(rows
        .into_iter()
        .map(|(f, (tilings, comps))| FluxRow { a: f.a, b: f.b, tilings, components: comps.len() })
        .collect())
}

fn hex_of(store: &TilingStore, idx: usize) -> String {
    store.tiling(idx).to_hex()
}

/// Runs every claim that applies to the instance and appends the outcomes.
pub fn verify_instance(
    config: &ExperimentConfig,
    torus: &Torus,
    store: &TilingStore,
    graph: &FlipGraph,
    rec: &mut InstanceRecord,
) -> qtorus_core::Result<()> {
    let spec = torus.spec();
    let key = (spec.n(), spec.m(), spec.r());
    let summary = graph.summary();
    if let Some(g) = GOLDEN_COUNTS.iter().find(|g| (g.0, g.1, g.2) == key) {
        let want = (g.3, g.4, g.5);
        let got = (summary.tilings, summary.components, summary.singletons);
        let detail = format!("tilings/components/singletons {got:?}, expected {want:?}");
        rec.checks.push(if got == want {
            Check::pass("golden-counts", detail)
        } else {
            Check::fail("golden-counts", detail, Vec::new())
        });
    }
    if store.is_empty() {
        return Ok(());
    }
    let simple = torus.is_simple();

    if !spec.is_bipartite() && simple {
        rec.checks.push(match verify_two_components(torus, store, graph) {
            Ok(r) => Check::pass(
                "two-isomorphic-components",
                format!("components of size {} swapped by {:?}", r.sizes[0], r.automorphism),
            ),
            Err(Error::ClaimViolated { claim, detail, .. }) => {
                Check::fail("two-isomorphic-components", format!("{claim}: {detail}"), Vec::new())
            }
            Err(e) => return Err(e),
        });
    }

    if spec.is_bipartite() {
        let flux = fluxes(torus, store)?;
        rec.checks.push(check_flux_invariance(torus, store, &flux));
        if simple {
            rec.checks.push(check_flux_ladder_criterion(torus, store, graph, &flux));
        }
        if spec.n() >= 3 && spec.m() >= 3 {
            rec.checks.push(match four_singletons(torus) {
                Ok(ts) => Check::pass("four-singletons", format!("{} flip-free tilings", ts.len())),
                Err(Error::ClaimViolated { claim, detail, .. }) => {
                    Check::fail("four-singletons", format!("{claim}: {detail}"), Vec::new())
                }
                Err(e) => return Err(e),
            });
        }
        rec.checks.push(check_component_lower_bound(spec, &summary));
    }

    let golden = GOLDEN_SPECTRA.iter().find(|g| (g.0, g.1, g.2) == key);
    let forcing_feasible = torus.vertex_count() <= FORCING_VERTEX_LIMIT;
    let interval_claim = !spec.is_bipartite() && simple && store.len() <= config.spectrum_limit;
    if forcing_feasible && (golden.is_some() || interval_claim) {
        let report = forcing_spectrum(torus, store, SpectrumOptions::default())?;
        let record = SpectrumRecord::from(&report.spectrum);
        if let Some(g) = golden {
            let detail = format!("{} tilings, spectrum {:?}, expected {} and {:?}", store.len(), record.values, g.3, g.4);
            rec.checks.push(if store.len() == g.3 && record.values == g.4 {
                Check::pass("golden-spectrum", detail)
            } else {
                Check::fail("golden-spectrum", detail, Vec::new())
            });
        }
        if interval_claim {
            let detail = format!("spectrum {:?}", record.values);
            rec.checks.push(if record.interval {
                Check::pass("forcing-interval", detail)
            } else {
                Check::fail("forcing-interval", format!("{detail} has gaps {:?}", record.gaps), Vec::new())
            });
        }
        rec.checks.push(check_forcing_lipschitz(torus, store, &report));
        rec.spectrum = Some(record);
    }
    Ok(())
}

fn flip_edges(torus: &Torus, store: &TilingStore) -> Vec<(usize, usize)> {
    let masks = FaceMasks::new(torus);
    (0..store.len())
        .into_par_iter()
        .flat_map_iter(|i| neighbors(&masks, store, i).into_iter().filter(move |&j| j > i).map(move |j| (i, j)))
        .collect()
}

fn check_flux_invariance(torus: &Torus, store: &TilingStore, flux: &[FluxClass]) -> Check {
    let edges = flip_edges(torus, store);
    match edges.iter().find(|&&(i, j)| flux[i] != flux[j]) {
        None => Check::pass("flux-flip-invariant", format!("{} flip edges", edges.len())),
        Some(&(i, j)) => Check::fail(
            "flux-flip-invariant",
            format!("flip changes flux {} -> {}", flux[i], flux[j]),
            vec![hex_of(store, i), hex_of(store, j)],
        ),
    }
}

/// Two tilings share a component iff they have the same flux and the same
/// set of ladders. Checked exactly by grouping on that key: each component
/// must carry one key, and no key may appear in two components.
fn check_flux_ladder_criterion(torus: &Torus, store: &TilingStore, graph: &FlipGraph, flux: &[FluxClass]) -> Check {
    const CLAIM: &str = "flux-ladder-criterion";
    let maps = LadderMaps::new(torus);
    let ladders: Vec<BTreeSet<Vec<usize>>> = (0..store.len())
        .into_par_iter()
        .map(|i| maps.ladder_set(torus, &store.tiling(i)))
        .collect();
    let mut first_of_component: HashMap<usize, usize> = HashMap::new();
    let mut first_of_key: HashMap<(FluxClass, &BTreeSet<Vec<usize>>), usize> = HashMap::new();
    for i in 0..store.len() {
        let c = graph.component_of(i);
        let rep = *first_of_component.entry(c).or_insert(i);
        if flux[rep] != flux[i] || ladders[rep] != ladders[i] {
            return Check::fail(
                CLAIM,
                "two tilings in one component differ in flux or ladders",
                vec![hex_of(store, rep), hex_of(store, i)],
            );
        }
        let other = *first_of_key.entry((flux[i], &ladders[i])).or_insert(i);
        if graph.component_of(other) != c {
            return Check::fail(
                CLAIM,
                "tilings with equal flux and ladders lie in different components",
                vec![hex_of(store, other), hex_of(store, i)],
            );
        }
    }
    Check::pass(CLAIM, format!("{} components, {} distinct keys", first_of_component.len(), first_of_key.len()))
}

/// At least `2*floor(n/2) - 1` components with a flip, and for
/// `T(2a, 2b, 2b)` with `a, b >= 2` at least `2a + 2b - 3`.
fn check_component_lower_bound(spec: TorusSpec, summary: &qtorus_core::ComponentSummary) -> Check {
    let (n, m) = (spec.n() as usize, spec.m() as usize);
    let mut bound = (2 * (n / 2)).saturating_sub(1);
    if spec.r() == spec.m() && n % 2 == 0 && m % 2 == 0 && n >= 4 && m >= 4 {
        bound = bound.max(n + m - 3);
    }
    let with_flips = summary.components - summary.singletons;
    let detail = format!("{with_flips} non-singleton components, lower bound {bound}");
    if with_flips >= bound {
        Check::pass("component-lower-bound", detail)
    } else {
        Check::fail("component-lower-bound", detail, Vec::new())
    }
}

fn check_forcing_lipschitz(torus: &Torus, store: &TilingStore, report: &SpectrumReport) -> Check {
    let f = &report.forcing;
    let edges = flip_edges(torus, store);
    match edges.iter().find(|&&(i, j)| f[i].abs_diff(f[j]) > 1) {
        None => Check::pass("forcing-flip-lipschitz", format!("{} flip edges", edges.len())),
        Some(&(i, j)) => Check::fail(
            "forcing-flip-lipschitz",
            format!("flip changes forcing number {} -> {}", f[i], f[j]),
            vec![hex_of(store, i), hex_of(store, j)],
        ),
    }
}

/// Parses a hex tiling and checks it is a perfect matching of `torus`.
pub fn parse_tiling(torus: &Torus, hex: &str) -> qtorus_core::Result<Tiling> {
    let t = Tiling::from_hex(torus.edge_count(), hex)?;
    t.validate(torus)?;
    Ok(t)
}
