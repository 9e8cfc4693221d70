//! Ingestion of a periodic graph from embedded coordinates.

use nalgebra::{DMatrix, DVector};

use super::{Edge, FundamentalGraph, IndexVector};
use crate::error::{Error, Result};

/// Tolerance for recognising lattice coordinates as integers.
pub const COORD_TOL: f64 = 1e-9;

/// Splits lattice coordinates into integer and fractional parts, snapping
/// values within [`COORD_TOL`] of an integer onto it.
fn split(coords: &[f64]) -> (Vec<i64>, Vec<f64>) {
    coords
        .iter()
        .map(|&c| {
            let r = c.round();
            let int = if (c - r).abs() < COORD_TOL {
                r
            } else {
                c.floor()
            };
            (int as i64, (c - int).max(0.0))
        })
        .unzip()
}

struct Frame {
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    dim: usize,
}

impl Frame {
    fn new(basis: &[Vec<f64>]) -> Result<Self> {
        let dim = basis.len();
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if basis.iter().any(|a| a.len() != dim) {
            return Err(Error::SingularBasis);
        }
        // columns are the lattice vectors
        let a = DMatrix::from_fn(dim, dim, |i, j| basis[j][i]);
        let lu = a.lu();
        let det = lu.determinant();
        let scale: f64 = basis
            .iter()
            .map(|v| v.iter().map(|x| x * x).sum::<f64>().sqrt())
            .product();
        if !det.is_finite() || det.abs() <= 1e-12 * scale.max(1.0) {
            return Err(Error::SingularBasis);
        }
        Ok(Self { lu, dim })
    }

    fn coords(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim {
            return Err(Error::Arity {
                expected: self.dim,
                found: x.len(),
            });
        }
        let sol = self
            .lu
            .solve(&DVector::from_column_slice(x))
            .ok_or(Error::SingularBasis)?;
        Ok(sol.iter().copied().collect())
    }
}

/// Builds the fundamental graph of a periodic graph given in coordinates.
///
/// `positions` lists one representative point per vertex class, `basis` the
/// lattice vectors and `raw_edges` one representative per edge class as a
/// pair of endpoint points. Each endpoint is matched to the unique vertex
/// class it is congruent to modulo the lattice; the edge index is the
/// difference of the integer parts of head and tail.
pub fn index_from_positions(
    positions: &[Vec<f64>],
    basis: &[Vec<f64>],
    raw_edges: &[(Vec<f64>, Vec<f64>)],
) -> Result<FundamentalGraph> {
    let frame = Frame::new(basis)?;
    let dim = frame.dim;
    let fractions = positions
        .iter()
        .map(|p| frame.coords(p).map(|c| split(&c).1))
        .collect::<Result<Vec<_>>>()?;

    let locate = |x: &[f64]| -> Result<(usize, Vec<i64>)> {
        let c = frame.coords(x)?;
        let mut found = None;
        for (v, frac) in fractions.iter().enumerate() {
            let shift: Vec<f64> = c.iter().zip(frac).map(|(a, b)| a - b).collect();
            if shift.iter().all(|s| (s - s.round()).abs() < COORD_TOL) {
                if found.is_some() {
                    return Err(Error::AmbiguousVertex(x.to_vec()));
                }
                found = Some((v, shift.iter().map(|s| s.round() as i64).collect()));
            }
        }
        found.ok_or_else(|| Error::NoMatchingVertex(x.to_vec()))
    };

    let mut edges = Vec::with_capacity(raw_edges.len());
    for (from, to) in raw_edges {
        let (u, nu) = locate(from)?;
        let (v, nv) = locate(to)?;
        let index = &IndexVector::new(nv) - &IndexVector::new(nu);
        edges.push(Edge::new(u, v, index));
    }
    FundamentalGraph::new(dim, positions.len(), edges)
}
