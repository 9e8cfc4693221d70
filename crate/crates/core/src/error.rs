use thiserror::Error;

use crate::graph::IndexVector;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("vertex id {id} out of range (graph has {count} vertices)")]
    VertexOutOfRange { id: usize, count: usize },

    #[error("index arity {found} does not match dimension {expected}")]
    Arity { expected: usize, found: usize },

    #[error("graph is disconnected")]
    Disconnected,

    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("lattice basis is singular or has the wrong shape")]
    SingularBasis,

    #[error("edge endpoint {0:?} matches no vertex class")]
    NoMatchingVertex(Vec<f64>),

    #[error("edge endpoint {0:?} matches more than one vertex class")]
    AmbiguousVertex(Vec<f64>),

    #[error("cycle is not chained at step {0}")]
    BrokenCycle(usize),

    #[error("graph has {count} spanning trees, above the enumeration cap {cap}")]
    CapExceeded { count: String, cap: u64 },

    #[error("form does not have the same fluxes as the index form")]
    NotInFluxClass,

    #[error("gauge potential inconsistent on edge {0}")]
    GaugeInconsistent(usize),

    #[error("form values do not generate Z^d (flux rank {rank}, dimension {dim})")]
    NotGenerating { rank: usize, dim: usize },

    #[error("no {0} support values form a unimodular basis")]
    NoUnimodularSubset(usize),

    #[error("form is not minimal: support {given} edges, a form with {found} edges exists")]
    NotMinimal {
        given: usize,
        found: usize,
        smaller: Vec<IndexVector>,
    },

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("grid size {0} must be even and at least 2")]
    BadGrid(usize),

    #[error("quasimomentum has {found} components, graph dimension is {expected}")]
    QuasimomentumDim { expected: usize, found: usize },

    #[error("operation requires zero potential")]
    NonzeroPotential,

    #[error("edge {0} of the decoration has a nonzero index")]
    DecorationIndex(usize),

    #[error("form has empty support")]
    EmptySupport,

    #[error("{0}")]
    Numerical(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
