pub mod cache;
pub mod error;
pub mod families;
pub mod flipgraph;
pub mod forcing;
pub mod homology;
pub mod ladder;
pub mod tiling;
pub mod torus;

pub use error::{Error, Result};
pub use tiling::{
    base_tiling, canonical_horizontal, count_completions, enumerate_tilings, EnumerateOptions,
    Tiling, TilingStore,
};
pub use torus::{cycle_structure, dual_params, EdgeKind, IcycleDecomposition, Torus, TorusSpec};
pub use flipgraph::{
    build_flip_graph, flips_of, verify_two_components, ComponentSummary, FaceMasks, FlipGraph,
    Translation, TwoComponentReport,
};
pub use homology::{flux, flux_separates, homology_class, tiling_chain, Chain1, FluxClass, Homology};
pub use ladder::{find_ladders, ladder_partition, same_component_criterion, Ladder, LadderDirection, LadderMaps};
pub use families::{
    diagonal_singletons, four_singletons, horizontal_flux_family, named_tilings,
    vertical_flux_family, EdgeFamilySets, NamedTiling,
};
pub use forcing::{
    forcing_number, forcing_spectrum, is_integer_interval, translation_orbits, ForcingResult,
    ForcingSolver, Spectrum, SpectrumOptions, SpectrumReport,
};
pub use cache::{load_or_enumerate, read_cache, write_cache, CacheStatus};
