//! Standard example graphs and the inverse construction from a finite graph
//! with an integer form.
//!
//! Vertex numbering and edge order are fixed, so tree-search tie-breaks and
//! every downstream report are reproducible.

use crate::error::{Error, Result};
use crate::forms::OneForm;
use crate::graph::{validate, Edge, FundamentalGraph, IndexVector};
use crate::trees::{minimal_form_with_cap, DEFAULT_TREE_CAP};

/// `Z^d`: one vertex with loops `e_1, …, e_d`.
pub fn make_lattice(d: usize) -> Result<FundamentalGraph> {
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    let edges = (0..d)
        .map(|k| Edge::new(0, 0, IndexVector::unit(d, k)))
        .collect();
    FundamentalGraph::new(d, 1, edges)
}

/// Triangular lattice: one vertex with loops `(1,0)`, `(0,1)`, `(1,1)`.
pub fn make_triangular() -> FundamentalGraph {
    FundamentalGraph::new(
        2,
        1,
        vec![
            Edge::new(0, 0, [1, 0]),
            Edge::new(0, 0, [0, 1]),
            Edge::new(0, 0, [1, 1]),
        ],
    )
    .expect("fixed graph")
}

/// Hexagonal lattice: two vertices joined by three edges `0 → 1` with
/// indices `(0,0)`, `(1,0)`, `(0,1)`.
pub fn make_hexagonal() -> FundamentalGraph {
    FundamentalGraph::new(
        2,
        2,
        vec![
            Edge::new(0, 1, [0, 0]),
            Edge::new(0, 1, [1, 0]),
            Edge::new(0, 1, [0, 1]),
        ],
    )
    .expect("fixed graph")
}

/// Kagome lattice with vertices `v1, v2, v3` numbered `0, 1, 2`.
///
/// The first three edges form the triangle inside the fundamental cell
/// (index zero); the other three cross cell boundaries.
pub fn make_kagome() -> FundamentalGraph {
    FundamentalGraph::new(
        2,
        3,
        vec![
            Edge::new(2, 0, [0, 0]),
            Edge::new(0, 1, [0, 0]),
            Edge::new(1, 2, [0, 0]),
            Edge::new(1, 0, [0, 1]),
            Edge::new(2, 1, [1, -1]),
            Edge::new(0, 2, [-1, 0]),
        ],
    )
    .expect("fixed graph")
}

/// `Z^d` with a copy of the finite graph `g1` attached to every lattice
/// vertex at `glue`. The indices of `g1` must all be zero.
pub fn make_decorated(d: usize, g1: &FundamentalGraph, glue: usize) -> Result<FundamentalGraph> {
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    if glue >= g1.num_vertices() {
        return Err(Error::VertexOutOfRange {
            id: glue,
            count: g1.num_vertices(),
        });
    }
    if !g1.is_connected() {
        return Err(Error::Disconnected);
    }
    if let Some(id) = g1.edges().iter().position(|e| !e.index.is_zero()) {
        return Err(Error::DecorationIndex(id));
    }
    let mut edges: Vec<Edge> = g1
        .edges()
        .iter()
        .map(|e| Edge::new(e.tail, e.head, IndexVector::zero(d)))
        .collect();
    edges.extend((0..d).map(|k| Edge::new(glue, glue, IndexVector::unit(d, k))));
    FundamentalGraph::new(d, g1.num_vertices(), edges)?.with_potential(g1.potential().to_vec())
}

/// Finite graph with no periodic structure (dimension 0), used as input to
/// [`make_decorated`] and [`realize_periodic`].
pub fn finite_graph(num_vertices: usize, pairs: &[(usize, usize)]) -> Result<FundamentalGraph> {
    let edges = pairs
        .iter()
        .map(|&(u, v)| Edge::new(u, v, IndexVector::zero(0)))
        .collect();
    FundamentalGraph::new(0, num_vertices, edges)
}

/// Periodic graph whose fundamental graph is `finite` (indices ignored)
/// with the values of `m` as edge indices.
///
/// Requires the fluxes of `m` to generate `Z^d` and `m` to be minimal among
/// forms with the same fluxes; otherwise the fiber matrices built from `m`
/// would not come from any periodic graph with that invariant.
pub fn realize_periodic(finite: &FundamentalGraph, m: &OneForm) -> Result<FundamentalGraph> {
    realize_periodic_with_cap(finite, m, DEFAULT_TREE_CAP)
}

pub fn realize_periodic_with_cap(
    finite: &FundamentalGraph,
    m: &OneForm,
    cap: u64,
) -> Result<FundamentalGraph> {
    let d = m.dim();
    if d == 0 {
        return Err(Error::NotGenerating { rank: 0, dim: 0 });
    }
    if m.len() != finite.num_edges() {
        return Err(Error::Numerical(format!(
            "form has {} values, graph has {} edges",
            m.len(),
            finite.num_edges()
        )));
    }
    if !finite.is_connected() {
        return Err(Error::Disconnected);
    }
    let g = finite.with_indices(d, m.values().to_vec())?;
    let report = validate(&g);
    if !report.flux_surjective {
        return Err(Error::NotGenerating {
            rank: report.flux_rank,
            dim: d,
        });
    }
    let best = minimal_form_with_cap(&g, m, cap)?;
    let given = m.support().len();
    if best.invariant < given {
        return Err(Error::NotMinimal {
            given,
            found: best.invariant,
            smaller: best.form.values().to_vec(),
        });
    }
    Ok(g)
}
