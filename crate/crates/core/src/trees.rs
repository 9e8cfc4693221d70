//! Spanning-tree counting and enumeration, and the minimal-form search
//! built on top of them.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::forms::{basic_fluxes, OneForm, SpanningTree};
use crate::graph::{FundamentalGraph, IndexVector};
use crate::lattice;

/// Default bound on the number of trees an exhaustive search may visit.
pub const DEFAULT_TREE_CAP: u64 = 1_000_000;

/// Number of spanning trees by Kirchhoff's theorem: the determinant of the
/// Laplacian of the loop-free underlying multigraph with vertex 0 deleted.
pub fn count_spanning_trees(g: &FundamentalGraph) -> Result<BigInt> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.num_vertices();
    let mut lap = vec![vec![0i64; n]; n];
    for e in g.edges().iter().filter(|e| !e.is_loop()) {
        lap[e.tail][e.tail] += 1;
        lap[e.head][e.head] += 1;
        lap[e.tail][e.head] -= 1;
        lap[e.head][e.tail] -= 1;
    }
    let minor: Vec<Vec<i64>> = lap[1..].iter().map(|r| r[1..].to_vec()).collect();
    Ok(lattice::determinant(&minor))
}

fn check_cap(g: &FundamentalGraph, cap: u64) -> Result<BigInt> {
    let total = count_spanning_trees(g)?;
    if total > BigInt::from(cap) {
        return Err(Error::CapExceeded {
            count: total.to_string(),
            cap,
        });
    }
    Ok(total)
}

/// Union-find without path compression, so unions can be undone. Each
/// vertex carries the potential difference to its parent, which makes the
/// potential difference of two vertices in one component available without
/// walking the forest edges.
struct RollbackForest {
    parent: Vec<usize>,
    rank: Vec<u32>,
    offset: Vec<IndexVector>,
    history: Vec<(usize, usize, bool)>,
}

impl RollbackForest {
    fn new(n: usize, dim: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
            offset: vec![IndexVector::zero(dim); n],
            history: Vec::new(),
        }
    }

    /// Root of `v` and `P(v) − P(root)`.
    fn find(&self, mut v: usize) -> (usize, IndexVector) {
        let mut acc = self.offset[v].clone();
        while self.parent[v] != v {
            v = self.parent[v];
            acc += &self.offset[v];
        }
        (v, acc)
    }

    fn connected(&self, a: usize, b: usize) -> bool {
        self.find(a).0 == self.find(b).0
    }

    /// Joins the components of `tail` and `head` by an edge along which the
    /// potential increases by `value`.
    fn union(&mut self, tail: usize, head: usize, value: &IndexVector) {
        let (rt, ot) = self.find(tail);
        let (rh, oh) = self.find(head);
        debug_assert_ne!(rt, rh);
        // P(rh) − P(rt) = value + ot − oh
        let mut delta = value + &ot;
        delta -= &oh;
        let (child, root, off) = if self.rank[rt] < self.rank[rh] {
            (rt, rh, -delta)
        } else {
            (rh, rt, delta)
        };
        self.parent[child] = root;
        self.offset[child] = off;
        let bumped = self.rank[root] == self.rank[child];
        if bumped {
            self.rank[root] += 1;
        }
        self.history.push((child, root, bumped));
    }

    fn undo(&mut self) {
        let (child, root, bumped) = self.history.pop().expect("undo without union");
        self.parent[child] = child;
        self.offset[child] = IndexVector::zero(self.offset[child].dim());
        if bumped {
            self.rank[root] -= 1;
        }
    }
}

/// Include/exclude search over the non-loop edges in edge order. An edge
/// whose endpoints are already joined is forced out; an edge may only be
/// excluded while the remaining edges still connect the graph, so every
/// branch ends in a spanning tree.
struct TreeSearch<'a> {
    g: &'a FundamentalGraph,
    form: &'a OneForm,
    candidates: Vec<usize>,
    forest: RollbackForest,
    excluded: Vec<bool>,
    in_tree: Vec<usize>,
    /// Non-loop edges decided to lie outside the tree, in decision order.
    outside: Vec<usize>,
    adj: Vec<Vec<(usize, usize, bool)>>,
}

enum Visit {
    Continue,
    Prune,
}

impl<'a> TreeSearch<'a> {
    fn new(g: &'a FundamentalGraph, form: &'a OneForm) -> Self {
        Self {
            g,
            form,
            candidates: (0..g.num_edges())
                .filter(|&e| !g.edge(e).is_loop())
                .collect(),
            forest: RollbackForest::new(g.num_vertices(), form.dim()),
            excluded: vec![false; g.num_edges()],
            in_tree: Vec::with_capacity(g.num_vertices()),
            outside: Vec::new(),
            adj: g.incidence(),
        }
    }

    fn still_connected(&self) -> bool {
        let n = self.g.num_vertices();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &(e, u, _) in &self.adj[v] {
                if !self.excluded[e] && !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == n
    }

    /// Whether the basic cycle of an outside edge has nonzero flux; `None`
    /// while its endpoints are not yet joined.
    fn outside_flux_nonzero(&self, e: usize) -> Option<bool> {
        let edge = self.g.edge(e);
        let (rt, pt) = self.forest.find(edge.tail);
        let (rh, ph) = self.forest.find(edge.head);
        if rt != rh {
            return None;
        }
        // flux = x(e) − (P(head) − P(tail))
        Some(&ph - &pt != *self.form.value(e))
    }

    fn nonzero_outside(&self) -> usize {
        self.outside
            .iter()
            .filter(|&&e| self.outside_flux_nonzero(e) == Some(true))
            .count()
    }

    fn run(&mut self, pos: usize, visit: &mut dyn FnMut(&Self, bool) -> Visit) {
        if let Visit::Prune = visit(self, pos == self.candidates.len()) {
            return;
        }
        if pos == self.candidates.len() {
            return;
        }
        let e = self.candidates[pos];
        let edge = self.g.edge(e);
        if self.forest.connected(edge.tail, edge.head) {
            self.outside.push(e);
            self.run(pos + 1, visit);
            self.outside.pop();
            return;
        }

        self.forest.union(edge.tail, edge.head, self.form.value(e));
        self.in_tree.push(e);
        self.run(pos + 1, visit);
        self.in_tree.pop();
        self.forest.undo();

        self.excluded[e] = true;
        if self.still_connected() {
            self.outside.push(e);
            self.run(pos + 1, visit);
            self.outside.pop();
        }
        self.excluded[e] = false;
    }
}

/// Calls `visit` with the tree-edge ids of every spanning tree, in the
/// deterministic include-first order of the search.
pub fn for_each_spanning_tree(
    g: &FundamentalGraph,
    cap: u64,
    mut visit: impl FnMut(&[usize]),
) -> Result<()> {
    check_cap(g, cap)?;
    let zero = OneForm::new(0, vec![IndexVector::zero(0); g.num_edges()])?;
    let mut search = TreeSearch::new(g, &zero);
    search.run(0, &mut |s, leaf| {
        if leaf {
            visit(&s.in_tree);
        }
        Visit::Continue
    });
    Ok(())
}

pub fn enumerate_spanning_trees(g: &FundamentalGraph, cap: u64) -> Result<Vec<SpanningTree>> {
    let mut trees = Vec::new();
    let mut err = None;
    for_each_spanning_tree(g, cap, |edges| {
        if err.is_none() {
            match SpanningTree::from_edges(g, edges) {
                Ok(t) => trees.push(t),
                Err(e) => err = Some(e),
            }
        }
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(trees),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinimalFormResult {
    pub form: OneForm,
    pub tree: SpanningTree,
    /// Half the oriented support size of `form`.
    pub invariant: usize,
    pub betti: usize,
    pub dim: usize,
    /// Complete trees reached by the search (pruned branches excluded).
    pub trees_examined: u64,
    pub tree_total: BigInt,
}

pub fn minimal_form(g: &FundamentalGraph, x: &OneForm) -> Result<MinimalFormResult> {
    minimal_form_with_cap(g, x, DEFAULT_TREE_CAP)
}

/// Exhaustive search for a spanning tree with the fewest basic cycles of
/// nonzero `x`-flux. A branch is abandoned once its already-determined
/// nonzero count reaches the incumbent, so the first minimal tree in
/// enumeration order wins. The returned form is `x`'s basic-cycle flux on
/// the cotree edges of that tree and zero on the tree.
pub fn minimal_form_with_cap(
    g: &FundamentalGraph,
    x: &OneForm,
    cap: u64,
) -> Result<MinimalFormResult> {
    x.check_on(g)?;
    let tree_total = check_cap(g, cap)?;

    let loop_count = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(id, e)| e.is_loop() && !x.value(*id).is_zero())
        .count();

    let mut best: Option<(usize, Vec<usize>)> = None;
    let mut examined = 0u64;
    let mut search = TreeSearch::new(g, x);
    search.run(0, &mut |s, leaf| {
        let count = loop_count + s.nonzero_outside();
        if let Some((incumbent, _)) = &best {
            if count >= *incumbent {
                return Visit::Prune;
            }
        }
        if leaf {
            examined += 1;
            best = Some((count, s.in_tree.clone()));
        }
        Visit::Continue
    });

    let (invariant, edges) = best.ok_or(Error::Disconnected)?;
    let tree = SpanningTree::from_edges(g, &edges)?;
    let mut values = vec![IndexVector::zero(x.dim()); g.num_edges()];
    for (&e, f) in tree.cotree.iter().zip(basic_fluxes(g, x, &tree)) {
        values[e] = f;
    }
    let form = OneForm::new(x.dim(), values)?;
    debug_assert_eq!(form.support().len(), invariant);

    Ok(MinimalFormResult {
        form,
        tree,
        invariant,
        betti: g.betti(),
        dim: g.dim(),
        trees_examined: examined,
        tree_total,
    })
}
