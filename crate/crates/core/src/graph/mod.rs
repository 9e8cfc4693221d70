//! Fundamental graphs of periodic graphs.
//!
//! A periodic graph is never materialized. It is carried by its finite
//! quotient: `num_vertices` vertex classes and one oriented representative
//! per unoriented edge class, each labelled with its integer index vector.
//! The reversed orientation is implied and carries the negated index.

mod embed;
mod pgraph;
mod validate;

use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

pub use embed::{index_from_positions, COORD_TOL};
pub use pgraph::{parse_graph, serialize_graph};
pub use validate::{validate, ValidationReport};

use crate::error::{Error, Result};

/// Integer vector in `Z^d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IndexVector(Vec<i64>);

impl IndexVector {
    pub fn new(entries: Vec<i64>) -> Self {
        Self(entries)
    }

    pub fn zero(dim: usize) -> Self {
        Self(vec![0; dim])
    }

    /// Standard basis vector `e_k` of `Z^dim`.
    pub fn unit(dim: usize, k: usize) -> Self {
        let mut v = vec![0; dim];
        v[k] = 1;
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// `<n, theta>` for a real vector `theta` of the same length.
    pub fn dot(&self, theta: &[f64]) -> f64 {
        self.0.iter().zip(theta).map(|(&n, &t)| n as f64 * t).sum()
    }

    pub fn norm_sq(&self) -> i64 {
        self.0.iter().map(|x| x * x).sum()
    }
}

impl From<Vec<i64>> for IndexVector {
    fn from(v: Vec<i64>) -> Self {
        Self(v)
    }
}

impl<const N: usize> From<[i64; N]> for IndexVector {
    fn from(v: [i64; N]) -> Self {
        Self(v.to_vec())
    }
}

impl fmt::Display for IndexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl Neg for &IndexVector {
    type Output = IndexVector;
    fn neg(self) -> IndexVector {
        IndexVector(self.0.iter().map(|x| -x).collect())
    }
}

impl Neg for IndexVector {
    type Output = IndexVector;
    fn neg(self) -> IndexVector {
        -&self
    }
}

impl Add for &IndexVector {
    type Output = IndexVector;
    fn add(self, rhs: &IndexVector) -> IndexVector {
        debug_assert_eq!(self.dim(), rhs.dim());
        IndexVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &IndexVector {
    type Output = IndexVector;
    fn sub(self, rhs: &IndexVector) -> IndexVector {
        debug_assert_eq!(self.dim(), rhs.dim());
        IndexVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl AddAssign<&IndexVector> for IndexVector {
    fn add_assign(&mut self, rhs: &IndexVector) {
        for (a, b) in self.0.iter_mut().zip(&rhs.0) {
            *a += b;
        }
    }
}

impl SubAssign<&IndexVector> for IndexVector {
    fn sub_assign(&mut self, rhs: &IndexVector) {
        for (a, b) in self.0.iter_mut().zip(&rhs.0) {
            *a -= b;
        }
    }
}

/// Oriented representative of an unoriented edge class.
#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub index: IndexVector,
}

impl Edge {
    pub fn new(tail: usize, head: usize, index: impl Into<IndexVector>) -> Self {
        Self {
            tail,
            head,
            index: index.into(),
        }
    }

    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }

    /// Endpoints in the direction of travel.
    pub fn oriented(&self, forward: bool) -> (usize, usize) {
        if forward {
            (self.tail, self.head)
        } else {
            (self.head, self.tail)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FundamentalGraph {
    dim: usize,
    potential: Vec<f64>,
    edges: Vec<Edge>,
}

impl FundamentalGraph {
    /// Checks vertex ranges and index arity. Connectivity is reported by
    /// [`validate`], not enforced here.
    pub fn new(dim: usize, num_vertices: usize, edges: Vec<Edge>) -> Result<Self> {
        for e in &edges {
            for id in [e.tail, e.head] {
                if id >= num_vertices {
                    return Err(Error::VertexOutOfRange {
                        id,
                        count: num_vertices,
                    });
                }
            }
            if e.index.dim() != dim {
                return Err(Error::Arity {
                    expected: dim,
                    found: e.index.dim(),
                });
            }
        }
        Ok(Self {
            dim,
            potential: vec![0.0; num_vertices],
            edges,
        })
    }

    pub fn with_potential(mut self, potential: Vec<f64>) -> Result<Self> {
        if potential.len() != self.num_vertices() {
            return Err(Error::VertexOutOfRange {
                id: potential.len(),
                count: self.num_vertices(),
            });
        }
        self.potential = potential;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_vertices(&self) -> usize {
        self.potential.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> &Edge {
        &self.edges[id]
    }

    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    pub fn has_zero_potential(&self) -> bool {
        self.potential.iter().all(|&q| q == 0.0)
    }

    /// `β = #E − #V + 1`, meaningful for connected graphs.
    pub fn betti(&self) -> usize {
        (self.num_edges() + 1).saturating_sub(self.num_vertices())
    }

    /// Vertex degrees counting oriented edges leaving each vertex, so a loop
    /// contributes 2.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.num_vertices()];
        for e in &self.edges {
            deg[e.tail] += 1;
            deg[e.head] += 1;
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// Same graph with the edge list reversed. Used to probe tie-breaking.
    pub fn with_reversed_edge_order(&self) -> Self {
        let mut g = self.clone();
        g.edges.reverse();
        g
    }

    /// Replaces every edge index; `indices` is indexed by edge id.
    pub fn with_indices(&self, dim: usize, indices: Vec<IndexVector>) -> Result<Self> {
        assert_eq!(indices.len(), self.num_edges());
        let edges = self
            .edges
            .iter()
            .zip(indices)
            .map(|(e, index)| Edge::new(e.tail, e.head, index))
            .collect();
        FundamentalGraph::new(dim, self.num_vertices(), edges)?
            .with_potential(self.potential.clone())
    }

    /// Adjacency lists of `(edge id, neighbour, forward)` for each vertex.
    /// Loops appear twice, once per orientation.
    pub fn incidence(&self) -> Vec<Vec<(usize, usize, bool)>> {
        let mut adj = vec![Vec::new(); self.num_vertices()];
        for (id, e) in self.edges.iter().enumerate() {
            adj[e.tail].push((id, e.head, true));
            adj[e.head].push((id, e.tail, false));
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        let n = self.num_vertices();
        if n == 0 {
            return false;
        }
        let adj = self.incidence();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &(_, u, _) in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == n
    }

    /// Structural equality up to flipping an edge together with negating its
    /// index. Edge order and potentials must match.
    pub fn same_structure(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.potential == other.potential
            && self.edges.len() == other.edges.len()
            && self.edges.iter().zip(&other.edges).all(|(a, b)| {
                (a.tail == b.tail && a.head == b.head && a.index == b.index)
                    || (a.tail == b.head && a.head == b.tail && a.index == -&b.index)
            })
    }
}
