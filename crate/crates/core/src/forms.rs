//! 1-forms on a fundamental graph and the cycle-space machinery around them:
//! fluxes, spanning trees and their basic cycles, gauge potentials and
//! lattice-basis normalization.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{Edge, FundamentalGraph, IndexVector};
use crate::lattice;

/// Antisymmetric `Z^d`-valued function on oriented edges, stored by its
/// value on each edge's stored orientation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneForm {
    dim: usize,
    values: Vec<IndexVector>,
}

impl OneForm {
    pub fn new(dim: usize, values: Vec<IndexVector>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| v.dim() != dim) {
            return Err(Error::Arity {
                expected: dim,
                found: v.dim(),
            });
        }
        Ok(Self { dim, values })
    }

    /// The index form `τ`: the stored edge indices.
    pub fn index_form(g: &FundamentalGraph) -> Self {
        Self {
            dim: g.dim(),
            values: g.edges().iter().map(|e| e.index.clone()).collect(),
        }
    }

    pub fn zero(g: &FundamentalGraph) -> Self {
        Self {
            dim: g.dim(),
            values: vec![IndexVector::zero(g.dim()); g.num_edges()],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[IndexVector] {
        &self.values
    }

    pub fn value(&self, edge: usize) -> &IndexVector {
        &self.values[edge]
    }

    /// Value on `edge` traversed forward (stored orientation) or backward.
    pub fn oriented(&self, edge: usize, forward: bool) -> IndexVector {
        if forward {
            self.values[edge].clone()
        } else {
            -&self.values[edge]
        }
    }

    /// Edge ids with nonzero value.
    pub fn support(&self) -> Vec<usize> {
        (0..self.values.len())
            .filter(|&e| !self.values[e].is_zero())
            .collect()
    }

    /// `#supp` counted over oriented edges.
    pub fn support_size(&self) -> usize {
        2 * self.support().len()
    }

    pub(crate) fn check_on(&self, g: &FundamentalGraph) -> Result<()> {
        if self.dim != g.dim() {
            return Err(Error::Arity {
                expected: g.dim(),
                found: self.dim,
            });
        }
        if self.values.len() != g.num_edges() {
            return Err(Error::Numerical(format!(
                "form has {} values, graph has {} edges",
                self.values.len(),
                g.num_edges()
            )));
        }
        Ok(())
    }

    /// Applies an integer matrix to every value.
    pub fn transformed(&self, u: &[Vec<i64>]) -> Self {
        Self {
            dim: u.len(),
            values: self
                .values
                .iter()
                .map(|v| IndexVector::new(lattice::mat_vec(u, v.entries())))
                .collect(),
        }
    }
}

pub fn index_form(g: &FundamentalGraph) -> OneForm {
    OneForm::index_form(g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Step {
    pub edge: usize,
    pub forward: bool,
}

/// Closed walk given as a sequence of oriented edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    pub steps: Vec<Step>,
}

impl Cycle {
    pub fn reversed(&self) -> Self {
        Self {
            steps: self
                .steps
                .iter()
                .rev()
                .map(|s| Step {
                    edge: s.edge,
                    forward: !s.forward,
                })
                .collect(),
        }
    }

    /// Checks head-to-tail chaining and closure.
    pub fn check(&self, g: &FundamentalGraph) -> Result<()> {
        let Some(first) = self.steps.first() else {
            return Ok(());
        };
        let start = g.edge(first.edge).oriented(first.forward).0;
        let mut at = start;
        for (i, s) in self.steps.iter().enumerate() {
            if s.edge >= g.num_edges() {
                return Err(Error::BrokenCycle(i));
            }
            let (from, to) = g.edge(s.edge).oriented(s.forward);
            if from != at {
                return Err(Error::BrokenCycle(i));
            }
            at = to;
        }
        if at != start {
            return Err(Error::BrokenCycle(self.steps.len()));
        }
        Ok(())
    }
}

/// Flux of `form` through `cycle`: the signed sum of its values.
pub fn flux(g: &FundamentalGraph, form: &OneForm, cycle: &Cycle) -> Result<IndexVector> {
    cycle.check(g)?;
    let mut total = IndexVector::zero(form.dim());
    for s in &cycle.steps {
        if s.forward {
            total += form.value(s.edge);
        } else {
            total -= form.value(s.edge);
        }
    }
    Ok(total)
}

/// Spanning tree with its cotree and a parent structure rooted at vertex 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningTree {
    /// Tree edge ids, ascending.
    pub tree_edges: Vec<usize>,
    /// Remaining edge ids in edge order; loops always land here.
    pub cotree: Vec<usize>,
    /// For each vertex other than the root: `(edge, parent vertex)`.
    parent: Vec<Option<(usize, usize)>>,
    depth: Vec<usize>,
}

impl SpanningTree {
    /// Builds a tree from an edge set, checking that it spans and is acyclic.
    pub fn from_edges(g: &FundamentalGraph, tree_edges: &[usize]) -> Result<Self> {
        let n = g.num_vertices();
        let mut in_tree = vec![false; g.num_edges()];
        for &e in tree_edges {
            if e >= g.num_edges() || in_tree[e] || g.edge(e).is_loop() {
                return Err(Error::Numerical(format!("edge {e} cannot be a tree edge")));
            }
            in_tree[e] = true;
        }
        if tree_edges.len() + 1 != n {
            return Err(Error::Numerical(format!(
                "a spanning tree on {n} vertices needs {} edges, got {}",
                n.saturating_sub(1),
                tree_edges.len()
            )));
        }
        let adj = g.incidence();
        let mut parent = vec![None; n];
        let mut depth = vec![0; n];
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for &(e, u, _) in &adj[v] {
                if in_tree[e] && !seen[u] {
                    seen[u] = true;
                    parent[u] = Some((e, v));
                    depth[u] = depth[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Disconnected);
        }
        let mut sorted = tree_edges.to_vec();
        sorted.sort_unstable();
        Ok(Self {
            tree_edges: sorted,
            cotree: (0..g.num_edges()).filter(|&e| !in_tree[e]).collect(),
            parent,
            depth,
        })
    }

    pub fn contains(&self, edge: usize) -> bool {
        self.tree_edges.binary_search(&edge).is_ok()
    }

    pub fn parent(&self, v: usize) -> Option<(usize, usize)> {
        self.parent[v]
    }

    /// Oriented steps along the tree from `from` to `to`.
    pub fn path(&self, g: &FundamentalGraph, from: usize, to: usize) -> Vec<Step> {
        let step_to_parent = |v: usize| {
            let (e, _) = self.parent[v].expect("non-root vertex has a parent");
            Step {
                edge: e,
                forward: g.edge(e).tail == v,
            }
        };
        let (mut a, mut b) = (from, to);
        let mut up = Vec::new();
        let mut down = Vec::new();
        while self.depth[a] > self.depth[b] {
            up.push(step_to_parent(a));
            a = self.parent[a].unwrap().1;
        }
        while self.depth[b] > self.depth[a] {
            down.push(step_to_parent(b));
            b = self.parent[b].unwrap().1;
        }
        while a != b {
            up.push(step_to_parent(a));
            a = self.parent[a].unwrap().1;
            down.push(step_to_parent(b));
            b = self.parent[b].unwrap().1;
        }
        up.extend(down.into_iter().rev().map(|s| Step {
            edge: s.edge,
            forward: !s.forward,
        }));
        up
    }
}

/// Breadth-first spanning tree rooted at vertex 0, exploring edges in
/// stored order.
pub fn spanning_tree(g: &FundamentalGraph) -> Result<SpanningTree> {
    let n = g.num_vertices();
    if n == 0 {
        return Err(Error::Disconnected);
    }
    let adj = g.incidence();
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut edges = Vec::with_capacity(n - 1);
    let mut queue = VecDeque::from([0]);
    while let Some(v) = queue.pop_front() {
        for &(e, u, _) in &adj[v] {
            if !seen[u] {
                seen[u] = true;
                edges.push(e);
                queue.push_back(u);
            }
        }
    }
    if edges.len() + 1 != n {
        return Err(Error::Disconnected);
    }
    SpanningTree::from_edges(g, &edges)
}

/// One cycle per cotree edge `e = (u, v)`: `e` itself followed by the tree
/// path from `v` back to `u`. Ordered like the cotree.
pub fn basic_cycles(g: &FundamentalGraph, t: &SpanningTree) -> Vec<Cycle> {
    t.cotree
        .iter()
        .map(|&e| {
            let Edge { tail, head, .. } = *g.edge(e);
            let mut steps = vec![Step {
                edge: e,
                forward: true,
            }];
            steps.extend(t.path(g, head, tail));
            Cycle { steps }
        })
        .collect()
}

/// Fluxes of `form` through the basic cycles of `t`, in cotree order.
pub fn basic_fluxes(g: &FundamentalGraph, form: &OneForm, t: &SpanningTree) -> Vec<IndexVector> {
    basic_cycles(g, t)
        .iter()
        .map(|c| flux(g, form, c).expect("basic cycles are chained"))
        .collect()
}

/// Number of basic cycles of `t` with nonzero flux.
pub fn beta_t(g: &FundamentalGraph, form: &OneForm, t: &SpanningTree) -> usize {
    basic_fluxes(g, form, t)
        .iter()
        .filter(|f| !f.is_zero())
        .count()
}

/// Whether `b` has the same flux as the index form on every cycle. Checking
/// the basic cycles of one tree suffices since they span the cycle space.
pub fn in_flux_class(g: &FundamentalGraph, b: &OneForm) -> bool {
    if b.check_on(g).is_err() {
        return false;
    }
    let Ok(t) = spanning_tree(g) else {
        return false;
    };
    let tau = OneForm::index_form(g);
    basic_fluxes(g, b, &t) == basic_fluxes(g, &tau, &t)
}

/// `β − rank` of the basic-cycle flux matrix.
pub fn flux_kernel_dim(g: &FundamentalGraph, form: &OneForm) -> Result<usize> {
    let t = spanning_tree(g)?;
    let rows: Vec<Vec<i64>> = basic_fluxes(g, form, &t)
        .into_iter()
        .map(|f| f.entries().to_vec())
        .collect();
    Ok(t.cotree.len() - lattice::rank(&rows))
}

/// `w(v)` for every vertex: the sum of `τ − b` along any path from vertex 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugePotential {
    pub w: Vec<IndexVector>,
}

pub fn gauge_potential(g: &FundamentalGraph, b: &OneForm) -> Result<GaugePotential> {
    b.check_on(g)?;
    if !in_flux_class(g, b) {
        return Err(Error::NotInFluxClass);
    }
    let t = spanning_tree(g)?;
    let tau = OneForm::index_form(g);
    let diff = |e: usize, forward: bool| {
        let d = tau.value(e) - b.value(e);
        if forward {
            d
        } else {
            -d
        }
    };

    let n = g.num_vertices();
    let mut w: Vec<Option<IndexVector>> = vec![None; n];
    w[0] = Some(IndexVector::zero(g.dim()));
    // parents precede children in BFS order, so walk vertices by depth
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| t.depth[v]);
    for v in order.into_iter().skip(1) {
        let (e, p) = t.parent(v).expect("non-root vertex has a parent");
        let forward = g.edge(e).tail == p;
        let wp = w[p].clone().expect("parent assigned first");
        w[v] = Some(&wp + &diff(e, forward));
    }
    let w: Vec<IndexVector> = w.into_iter().map(Option::unwrap).collect();

    for (id, e) in g.edges().iter().enumerate() {
        if &w[e.head] - &w[e.tail] != diff(id, true) {
            return Err(Error::GaugeInconsistent(id));
        }
    }
    Ok(GaugePotential { w })
}

/// Result of re-expressing a graph in a lattice basis adapted to a form.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisChange {
    pub graph: FundamentalGraph,
    pub form: OneForm,
    /// Unimodular matrix acting on index vectors; quasimomenta transform by
    /// its inverse transpose.
    pub u: Vec<Vec<i64>>,
    /// Support edges whose values became `e_1 .. e_d`.
    pub chosen: Vec<usize>,
}

fn combinations(n: usize, k: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    fn rec(
        start: usize,
        n: usize,
        k: usize,
        cur: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if cur.len() == k {
            return visit(cur);
        }
        for i in start..n {
            cur.push(i);
            if rec(i + 1, n, k, cur, visit) {
                return true;
            }
            cur.pop();
        }
        false
    }
    rec(0, n, k, &mut Vec::with_capacity(k), &mut visit);
}

/// Changes the lattice basis so that `d` support values of `m` become the
/// standard basis of `Z^d`. The first `d`-subset of support edges (in edge
/// order) whose values have determinant ±1 is used.
pub fn normalize_basis(g: &FundamentalGraph, m: &OneForm) -> Result<BasisChange> {
    m.check_on(g)?;
    let d = g.dim();
    let support = m.support();
    let rows: Vec<Vec<i64>> = support
        .iter()
        .map(|&e| m.value(e).entries().to_vec())
        .collect();
    if !lattice::generates_lattice(&rows, d) {
        return Err(Error::NotGenerating {
            rank: lattice::rank(&rows),
            dim: d,
        });
    }

    let mut found = None;
    combinations(support.len(), d, |pick| {
        // columns are the picked values
        let b: Vec<Vec<i64>> = (0..d)
            .map(|i| pick.iter().map(|&s| rows[s][i]).collect())
            .collect();
        if let Some(inv) = lattice::unimodular_inverse(&b) {
            found = Some((inv, pick.iter().map(|&s| support[s]).collect::<Vec<_>>()));
            true
        } else {
            false
        }
    });
    let (u, chosen) = found.ok_or(Error::NoUnimodularSubset(d))?;

    let form = m.transformed(&u);
    let tau = OneForm::index_form(g).transformed(&u);
    let graph = g.with_indices(d, tau.values)?;
    Ok(BasisChange {
        graph,
        form,
        u,
        chosen,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> FundamentalGraph {
        FundamentalGraph::new(
            1,
            3,
            vec![
                Edge::new(0, 1, [0]),
                Edge::new(1, 2, [0]),
                Edge::new(2, 0, [1]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn loops_only_graph_has_empty_tree() {
        let g = FundamentalGraph::new(2, 1, vec![Edge::new(0, 0, [1, 0]), Edge::new(0, 0, [0, 1])])
            .unwrap();
        let t = spanning_tree(&g).unwrap();
        assert!(t.tree_edges.is_empty());
        assert_eq!(t.cotree, vec![0, 1]);
        let cycles = basic_cycles(&g, &t);
        assert_eq!(cycles[0].steps.len(), 1);
        assert_eq!(beta_t(&g, &OneForm::index_form(&g), &t), 2);
    }

    #[test]
    fn triangle_cycle_and_flux() {
        let g = triangle();
        let t = spanning_tree(&g).unwrap();
        assert_eq!(t.tree_edges.len(), 2);
        assert_eq!(t.cotree.len(), 1);
        let c = &basic_cycles(&g, &t)[0];
        assert_eq!(c.steps.len(), 3);
        let tau = OneForm::index_form(&g);
        let f = flux(&g, &tau, c).unwrap();
        assert_eq!(f.entries().iter().map(|x| x.abs()).sum::<i64>(), 1);
        assert_eq!(flux(&g, &tau, &c.reversed()).unwrap(), -f);
    }

    #[test]
    fn broken_chain_rejected() {
        let g = triangle();
        let c = Cycle {
            steps: vec![
                Step {
                    edge: 0,
                    forward: true,
                },
                Step {
                    edge: 2,
                    forward: true,
                },
            ],
        };
        assert!(matches!(
            flux(&g, &OneForm::index_form(&g), &c),
            Err(Error::BrokenCycle(_))
        ));
    }

    #[test]
    fn disconnected_tree_error() {
        let g = FundamentalGraph::new(1, 2, vec![Edge::new(0, 0, [1])]).unwrap();
        assert_eq!(spanning_tree(&g), Err(Error::Disconnected));
    }

    #[test]
    fn flux_class_membership() {
        let g = triangle();
        let tau = OneForm::index_form(&g);
        assert!(in_flux_class(&g, &tau));
        // move the unit of flux onto another edge of the triangle
        let moved = OneForm::new(1, vec![[1].into(), [0].into(), [0].into()]).unwrap();
        assert!(in_flux_class(&g, &moved));
        let broken = OneForm::new(1, vec![[1].into(), [0].into(), [1].into()]).unwrap();
        assert!(!in_flux_class(&g, &broken));
    }

    #[test]
    fn gauge_potential_of_index_form_vanishes() {
        let g = triangle();
        let w = gauge_potential(&g, &OneForm::index_form(&g)).unwrap();
        assert!(w.w.iter().all(IndexVector::is_zero));
        let broken = OneForm::new(1, vec![[1].into(), [0].into(), [1].into()]).unwrap();
        assert_eq!(gauge_potential(&g, &broken), Err(Error::NotInFluxClass));
    }

    #[test]
    fn normalize_rejects_doubled_loop() {
        let g = FundamentalGraph::new(1, 1, vec![Edge::new(0, 0, [2])]).unwrap();
        let err = normalize_basis(&g, &OneForm::index_form(&g)).unwrap_err();
        assert_eq!(err, Error::NotGenerating { rank: 1, dim: 1 });
    }

    #[test]
    fn normalize_needs_unimodular_subset() {
        // values 2 and 3 generate Z but neither alone is a basis
        let g =
            FundamentalGraph::new(1, 1, vec![Edge::new(0, 0, [2]), Edge::new(0, 0, [3])]).unwrap();
        let err = normalize_basis(&g, &OneForm::index_form(&g)).unwrap_err();
        assert_eq!(err, Error::NoUnimodularSubset(1));
    }
}
