use thiserror::Error;

use crate::torus::TorusSpec;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid torus parameters (n={n}, m={m}, r={r}): {reason}")]
    InvalidSpec {
        n: i64,
        m: i64,
        r: i64,
        reason: &'static str,
    },

    #[error("cannot parse torus spec {0:?}; expected T(n,m,r)")]
    SpecSyntax(String),

    #[error("{spec}: {what} requires {requirement}")]
    Precondition {
        spec: TorusSpec,
        what: &'static str,
        requirement: &'static str,
    },

    #[error("{spec}: tiling store exceeded the cap of {cap} tilings")]
    StoreOverflow { spec: TorusSpec, cap: usize },

    #[error("{spec}: {edges} edges exceed the supported maximum of {max}")]
    TooManyEdges {
        spec: TorusSpec,
        edges: usize,
        max: usize,
    },

    #[error("tiling is not a perfect matching of {spec}: {reason}")]
    InvalidTiling { spec: TorusSpec, reason: String },

    #[error("tiling is not present in the store of {0}")]
    NotInStore(TorusSpec),

    #[error("1-chain is not closed (boundary nonzero at vertex {vertex})")]
    NotClosed { vertex: usize },

    #[error("bad tiling encoding: {0}")]
    Encoding(String),

    #[error("cache for {spec} is corrupt: {reason}")]
    CacheCorrupt { spec: TorusSpec, reason: String },

    #[error("{spec}: claim violated: {claim}: {detail}")]
    ClaimViolated {
        spec: TorusSpec,
        claim: &'static str,
        detail: String,
    },

    #[error("spectrum is empty")]
    EmptySpectrum,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
