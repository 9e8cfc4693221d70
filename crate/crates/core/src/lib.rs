//! Minimal forms and fiber operators of periodic discrete graphs.
//!
//! A periodic graph is described by its finite fundamental graph with
//! integer edge indices ([`graph`]). From it the crate computes the
//! minimal-form invariant ([`trees`], [`forms`]), assembles fiber
//! Laplacian and Schrödinger matrices and sweeps band structures
//! ([`spectral`]), and checks band-localization, spectral-measure and
//! effective-mass estimates ([`estimates`]). [`builders`] produces the
//! standard example lattices.

pub mod builders;
pub mod error;
pub mod estimates;
pub mod forms;
pub mod graph;
pub mod lattice;
pub mod report;
pub mod spectral;
pub mod trees;

pub use builders::{
    finite_graph, make_decorated, make_hexagonal, make_kagome, make_lattice, make_triangular,
    realize_periodic, realize_periodic_with_cap,
};
pub use error::{Error, Result};
pub use estimates::{
    dirichlet_localization, effective_form, effective_form_bounds, effective_mass,
    localization_intervals, measure_bound_check, support_subgraphs, DirichletResult, EffectiveMass,
    LocalizationResult, MeasureBound, SupportSplit,
};
pub use forms::{
    basic_cycles, beta_t, flux, flux_kernel_dim, gauge_potential, in_flux_class, index_form,
    normalize_basis, spanning_tree, BasisChange, Cycle, GaugePotential, OneForm, SpanningTree,
    Step,
};
pub use graph::{
    index_from_positions, parse_graph, serialize_graph, validate, Edge, FundamentalGraph,
    IndexVector, ValidationReport,
};
pub use spectral::{
    band_sweep, fiber_matrix, hermitian_eigenvalues, verify_gauge_equivalence, BandStructure,
    FiberMatrix, Quasimomentum,
};
pub use spectral::{Band, SweepOptions};
pub use trees::{
    count_spanning_trees, enumerate_spanning_trees, for_each_spanning_tree, minimal_form,
    minimal_form_with_cap, MinimalFormResult, DEFAULT_TREE_CAP,
};
