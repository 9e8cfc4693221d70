//! Band localization, spectral-measure bounds, Dirichlet bracketing and the
//! effective mass tensor at the bottom of the spectrum.

use std::fmt::Write;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::forms::OneForm;
use crate::graph::{Edge, FundamentalGraph, IndexVector};
use crate::report::fmt_real;
use crate::spectral::{
    fiber_matrix, hermitian_eigenvalues, BandStructure, FiberMatrix, Quasimomentum,
};
use crate::trees::MinimalFormResult;

/// Slack allowed when comparing grid band edges against bounds.
pub const CONTAINMENT_TOL: f64 = 1e-9;
/// Step of the finite-difference Hessian.
pub const FD_STEP: f64 = 1e-4;
/// Required agreement between the perturbative and finite-difference Hessians.
pub const FD_AGREEMENT: f64 = 1e-6;
const SOLVE_TOL: f64 = 1e-10;

/// Partition of the fundamental graph by the support of a form.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportSplit {
    /// All vertices, edges outside the support (zero index), original potential.
    pub off_support: FundamentalGraph,
    /// All vertices, support edges carrying the form's values, zero potential.
    pub on_support: FundamentalGraph,
    pub degrees: Vec<usize>,
    pub support_degrees: Vec<usize>,
}

impl SupportSplit {
    pub fn support_degree_max(&self) -> usize {
        self.support_degrees.iter().copied().max().unwrap_or(0)
    }
}

pub fn support_subgraphs(g: &FundamentalGraph, m: &OneForm) -> Result<SupportSplit> {
    m.check_on(g)?;
    let d = g.dim();
    let (mut off, mut on) = (Vec::new(), Vec::new());
    for (id, e) in g.edges().iter().enumerate() {
        if m.value(id).is_zero() {
            off.push(Edge::new(e.tail, e.head, IndexVector::zero(d)));
        } else {
            on.push(Edge::new(e.tail, e.head, m.value(id).clone()));
        }
    }
    let n = g.num_vertices();
    let off_support = FundamentalGraph::new(d, n, off)?.with_potential(g.potential().to_vec())?;
    let on_support = FundamentalGraph::new(d, n, on)?;
    Ok(SupportSplit {
        degrees: g.degrees(),
        support_degrees: on_support.degrees(),
        off_support,
        on_support,
    })
}

/// Eigenvalues of the Schrödinger operator of a graph with its periodic
/// structure forgotten.
fn finite_spectrum(g: &FundamentalGraph) -> Result<Vec<f64>> {
    let zero = OneForm::zero(g);
    hermitian_eigenvalues(&fiber_matrix(g, &zero, &Quasimomentum::zero(g.dim()))?)
}

fn band_within(bands: &BandStructure, n: usize, lo: f64, hi: f64) -> bool {
    let b = &bands.bands[n];
    b.lambda_min >= lo - CONTAINMENT_TOL && b.lambda_max <= hi + CONTAINMENT_TOL
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalizationResult {
    /// Ascending eigenvalues of the operator on the off-support subgraph.
    pub mu: Vec<f64>,
    pub kappa_m_plus: usize,
    pub intervals: Vec<(f64, f64)>,
    pub contained: Vec<bool>,
}

impl LocalizationResult {
    pub fn all_contained(&self) -> bool {
        self.contained.iter().all(|&c| c)
    }
}

/// Band `n` lies in `[μ_n, μ_n + 2κ^m_+]`, where `μ_n` are the eigenvalues of
/// the operator restricted to the edges outside `supp m` and `κ^m_+` is the
/// largest vertex degree inside the support. Containment is checked
/// against `bands`, which must come from the same graph and potential.
pub fn localization_intervals(
    g: &FundamentalGraph,
    m: &OneForm,
    bands: &BandStructure,
) -> Result<LocalizationResult> {
    let split = support_subgraphs(g, m)?;
    let mu = finite_spectrum(&split.off_support)?;
    let kappa_m_plus = split.support_degree_max();
    let width = 2.0 * kappa_m_plus as f64;
    let intervals: Vec<(f64, f64)> = mu.iter().map(|&x| (x, x + width)).collect();
    let contained = intervals
        .iter()
        .enumerate()
        .map(|(n, &(lo, hi))| band_within(bands, n, lo, hi))
        .collect();
    Ok(LocalizationResult {
        mu,
        kappa_m_plus,
        intervals,
        contained,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasureBound {
    pub sum_bands: f64,
    pub measure: f64,
    /// `4·I`.
    pub bound: usize,
    pub measure_le_sum: bool,
    pub sum_le_bound: bool,
}

impl MeasureBound {
    pub fn ok(&self) -> bool {
        self.measure_le_sum && self.sum_le_bound
    }

    pub fn line(&self) -> String {
        format!(
            "sum_bands={} measure={} bound_4I={} ok={}",
            fmt_real(self.sum_bands),
            fmt_real(self.measure),
            self.bound,
            self.ok()
        )
    }
}

/// `measure ≤ Σ band lengths ≤ 4I`.
pub fn measure_bound_check(bands: &BandStructure, inv: &MinimalFormResult) -> MeasureBound {
    let sum_bands = bands.sum_of_lengths();
    let bound = 4 * inv.invariant;
    MeasureBound {
        sum_bands,
        measure: bands.measure,
        bound,
        measure_le_sum: bands.measure <= sum_bands + CONTAINMENT_TOL,
        sum_le_bound: sum_bands <= bound as f64 + CONTAINMENT_TOL,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DirichletResult {
    /// Vertices covering every edge in the support of the index form.
    pub cover: Vec<usize>,
    pub mu: Vec<f64>,
    pub mu_dirichlet: Vec<f64>,
    pub kappa_plus: usize,
    pub intervals: Vec<(f64, f64)>,
    pub contained: Vec<bool>,
}

impl DirichletResult {
    pub fn all_contained(&self) -> bool {
        self.contained.iter().all(|&c| c)
    }
}

/// Greedy vertex cover of the given edges: repeatedly take the vertex
/// touching the most uncovered edges, smallest id on ties.
pub fn greedy_cover(g: &FundamentalGraph, edges: &[usize]) -> Vec<usize> {
    let mut uncovered: Vec<usize> = edges.to_vec();
    let mut cover = Vec::new();
    while !uncovered.is_empty() {
        let mut hits = vec![0usize; g.num_vertices()];
        for &e in &uncovered {
            let edge = g.edge(e);
            hits[edge.tail] += 1;
            if !edge.is_loop() {
                hits[edge.head] += 1;
            }
        }
        let best = (0..hits.len())
            .max_by(|&a, &b| hits[a].cmp(&hits[b]).then(b.cmp(&a)))
            .expect("nonempty graph");
        cover.push(best);
        uncovered.retain(|&e| g.edge(e).tail != best && g.edge(e).head != best);
    }
    cover.sort_unstable();
    cover
}

/// Bracketing of the Laplacian bands through the index form: with `V_τ` a
/// vertex cover of `supp τ` and `r = #V_τ`, band `n ≤ ν − r` lies in
/// `[μ_n, μ^D_n]` and the remaining bands in `[μ_n, 2κ_+]`. Here `μ` are the
/// eigenvalues on the subgraph off `supp τ` and `μ^D` those of the
/// Laplacian with Dirichlet condition on `V_τ`.
pub fn dirichlet_localization(
    g: &FundamentalGraph,
    bands: &BandStructure,
) -> Result<DirichletResult> {
    if !g.has_zero_potential() {
        return Err(Error::NonzeroPotential);
    }
    let tau = OneForm::index_form(g);
    let support = tau.support();
    if support.is_empty() {
        return Err(Error::EmptySupport);
    }
    let cover = greedy_cover(g, &support);
    let mu = finite_spectrum(&support_subgraphs(g, &tau)?.off_support)?;

    // edges touching the cover are the only θ-dependent ones, so the
    // interior block is the same at every θ
    let full = fiber_matrix(g, &tau, &Quasimomentum::zero(g.dim()))?;
    let interior: Vec<usize> = (0..g.num_vertices())
        .filter(|v| !cover.contains(v))
        .collect();
    let block = DMatrix::from_fn(interior.len(), interior.len(), |i, j| {
        full.0[(interior[i], interior[j])]
    });
    let mu_dirichlet = if interior.is_empty() {
        Vec::new()
    } else {
        hermitian_eigenvalues(&FiberMatrix(block))?
    };

    let kappa_plus = g.max_degree();
    let intervals: Vec<(f64, f64)> = mu
        .iter()
        .enumerate()
        .map(|(n, &lo)| {
            let hi = mu_dirichlet
                .get(n)
                .copied()
                .unwrap_or(2.0 * kappa_plus as f64);
            (lo, hi)
        })
        .collect();
    let contained = intervals
        .iter()
        .enumerate()
        .map(|(n, &(lo, hi))| band_within(bands, n, lo, hi))
        .collect();
    Ok(DirichletResult {
        cover,
        mu,
        mu_dirichlet,
        kappa_plus,
        intervals,
        contained,
    })
}

/// Real combinatorial Laplacian (loops cancel).
fn laplacian(g: &FundamentalGraph) -> DMatrix<f64> {
    let n = g.num_vertices();
    let mut l = DMatrix::zeros(n, n);
    for e in g.edges().iter().filter(|e| !e.is_loop()) {
        l[(e.tail, e.tail)] += 1.0;
        l[(e.head, e.head)] += 1.0;
        l[(e.tail, e.head)] -= 1.0;
        l[(e.head, e.tail)] -= 1.0;
    }
    l
}

/// Second-order coefficient `μ(ω)` of the first band function along `ω`:
/// `λ(εω) = ε² μ(ω) + O(ε³)`. Homogeneous of degree 2 in `ω`, so any vector
/// may be passed; for unit `ω` this is the effective form.
///
/// With `ψ₁ = i p`, the first-order eigenvector correction solves
/// `L p = r`, `r(v) = Σ_{e=(v,u)} <m(e), ω>`, and
/// `ν μ(ω) = ½ Σ_{oriented e=(v,u)} |p(v) − p(u) − <m(e), ω>|²`.
pub fn effective_form(g: &FundamentalGraph, m: &OneForm, omega: &[f64]) -> Result<f64> {
    m.check_on(g)?;
    if !g.has_zero_potential() {
        return Err(Error::NonzeroPotential);
    }
    if omega.len() != g.dim() {
        return Err(Error::QuasimomentumDim {
            expected: g.dim(),
            found: omega.len(),
        });
    }
    let n = g.num_vertices();
    let along: Vec<f64> = m.values().iter().map(|v| v.dot(omega)).collect();

    let mut rhs: DVector<f64> = DVector::zeros(n);
    for (e, x) in g.edges().iter().zip(&along) {
        rhs[e.tail] += x;
        rhs[e.head] -= x;
    }
    // right side is orthogonal to the constant kernel vector
    let mean = rhs.sum() / n as f64;
    let scale = rhs.amax().max(1.0);
    if mean.abs() * (n as f64).sqrt() > SOLVE_TOL * scale {
        return Err(Error::Numerical(format!(
            "right side not orthogonal to kernel: {mean:e}"
        )));
    }
    rhs.add_scalar_mut(-mean);

    let lap = laplacian(g);
    let eig = SymmetricEigen::new(lap.clone()).eigenvalues;
    let mut sorted: Vec<f64> = eig.iter().copied().collect();
    sorted.sort_by(f64::total_cmp);
    if n > 1 && sorted[1] <= SOLVE_TOL {
        return Err(Error::Disconnected);
    }
    let p = if n == 1 {
        DVector::zeros(1)
    } else {
        let pinv = lap
            .clone()
            .pseudo_inverse(SOLVE_TOL)
            .map_err(|e| Error::Numerical(e.to_string()))?;
        &pinv * &rhs
    };
    let residual = (&lap * &p - &rhs).amax();
    if residual > SOLVE_TOL * scale * n as f64 {
        return Err(Error::Numerical(format!(
            "first-order solve residual {residual:e}"
        )));
    }

    let total: f64 = g
        .edges()
        .iter()
        .zip(&along)
        .map(|(e, x)| {
            let r = p[e.tail] - p[e.head] - x;
            r * r
        })
        .sum();
    Ok(total / n as f64)
}

/// `[1/(ν² d), (1/2ν) Σ_{e ∈ supp m} <m(e), ω>²]` with the sum over both
/// orientations; `μ(ω)` lies here for unit `ω` when some `d` support values
/// of `m` form the standard basis.
pub fn effective_form_bounds(g: &FundamentalGraph, m: &OneForm, omega: &[f64]) -> (f64, f64) {
    let nu = g.num_vertices() as f64;
    let d = g.dim() as f64;
    let sum: f64 = m.values().iter().map(|v| 2.0 * v.dot(omega).powi(2)).sum();
    (1.0 / (nu * nu * d), sum / (2.0 * nu))
}

/// Lowest eigenvalue of the fiber Laplacian at `θ`.
fn first_band(g: &FundamentalGraph, m: &OneForm, theta: &[f64]) -> Result<f64> {
    let eig = hermitian_eigenvalues(&fiber_matrix(g, m, &Quasimomentum(theta.to_vec()))?)?;
    Ok(eig[0])
}

/// Second derivative of `λ₁(tω)` at `t = 0` by the five-point stencil.
pub fn fd_second_derivative(
    g: &FundamentalGraph,
    m: &OneForm,
    omega: &[f64],
    h: f64,
) -> Result<f64> {
    let at = |t: f64| {
        let theta: Vec<f64> = omega.iter().map(|w| w * t).collect();
        first_band(g, m, &theta)
    };
    let (f2m, f1m, f0, f1p, f2p) = (at(-2.0 * h)?, at(-h)?, at(0.0)?, at(h)?, at(2.0 * h)?);
    Ok((-f2p + 16.0 * f1p - 30.0 * f0 + 16.0 * f1m - f2m) / (12.0 * h * h))
}

/// Hessian of the first band function at `θ = 0` by finite differences.
pub fn fd_hessian(g: &FundamentalGraph, m: &OneForm, h: f64) -> Result<DMatrix<f64>> {
    let d = g.dim();
    let unit = |i: usize| -> Vec<f64> { (0..d).map(|k| f64::from(k == i)).collect() };
    let diag: Vec<f64> = (0..d)
        .map(|i| fd_second_derivative(g, m, &unit(i), h))
        .collect::<Result<_>>()?;
    let mut hess = DMatrix::from_diagonal(&DVector::from_vec(diag.clone()));
    for i in 0..d {
        for j in i + 1..d {
            let w: Vec<f64> = (0..d).map(|k| f64::from(k == i || k == j)).collect();
            let both = fd_second_derivative(g, m, &w, h)?;
            let v = (both - diag[i] - diag[j]) / 2.0;
            hess[(i, j)] = v;
            hess[(j, i)] = v;
        }
    }
    Ok(hess)
}

#[derive(Clone, Debug, PartialEq)]
pub struct EffectiveMass {
    /// `M_ij = ∂²λ(0)/∂θ_i∂θ_j` from the perturbation formula.
    pub hessian: DMatrix<f64>,
    /// Same Hessian by finite differences.
    pub hessian_fd: DMatrix<f64>,
    /// `m = M⁻¹`.
    pub mass: DMatrix<f64>,
    pub mass_eigenvalues: Vec<f64>,
    /// `Σ_{e ∈ supp m} ‖m(e)‖²` over both orientations.
    pub c_m: i64,
    pub lower: f64,
    pub upper: f64,
    pub bounds_ok: bool,
    /// `ν/(2d)`, reported when the support has exactly `d` edges.
    pub sharpened_lower: Option<f64>,
    pub sharpened_ok: Option<bool>,
}

impl EffectiveMass {
    pub fn ok(&self) -> bool {
        self.bounds_ok && self.sharpened_ok.unwrap_or(true)
    }

    pub fn line(&self) -> String {
        let lo = self
            .sharpened_lower
            .map_or(self.lower, |s| s.max(self.lower));
        format!(
            "M={} m={} bounds=[{},{}] ok={}",
            fmt_matrix(&self.hessian),
            fmt_matrix(&self.mass),
            fmt_real(lo),
            fmt_real(self.upper),
            self.ok()
        )
    }
}

pub fn fmt_matrix(m: &DMatrix<f64>) -> String {
    let mut out = String::from("[");
    for i in 0..m.nrows() {
        if i > 0 {
            out.push(',');
        }
        out.push('[');
        for j in 0..m.ncols() {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&fmt_real(m[(i, j)]));
        }
        out.push(']');
    }
    out.push(']');
    out
}

/// Effective mass tensor at the bottom of the Laplacian spectrum.
///
/// `m` should be a minimal form; the upper bound `ν² d / 2` presumes a
/// lattice basis in which `d` of its support values are the standard basis
/// (see [`crate::forms::normalize_basis`]).
pub fn effective_mass(g: &FundamentalGraph, m: &OneForm) -> Result<EffectiveMass> {
    let d = g.dim();
    let unit = |i: usize| -> Vec<f64> { (0..d).map(|k| f64::from(k == i)).collect() };
    let diag: Vec<f64> = (0..d)
        .map(|i| effective_form(g, m, &unit(i)))
        .collect::<Result<_>>()?;
    let mut hessian = DMatrix::zeros(d, d);
    for i in 0..d {
        hessian[(i, i)] = 2.0 * diag[i];
        for j in i + 1..d {
            let w: Vec<f64> = (0..d).map(|k| f64::from(k == i || k == j)).collect();
            let v = effective_form(g, m, &w)? - diag[i] - diag[j];
            hessian[(i, j)] = v;
            hessian[(j, i)] = v;
        }
    }

    let hessian_fd = fd_hessian(g, m, FD_STEP)?;
    let gap = (&hessian - &hessian_fd).amax();
    if gap > FD_AGREEMENT {
        return Err(Error::Numerical(format!(
            "perturbative and finite-difference Hessians differ by {gap:e}"
        )));
    }

    let h_eig = SymmetricEigen::new(hessian.clone()).eigenvalues;
    if h_eig.iter().any(|&x| x <= 0.0) {
        return Err(Error::Numerical("Hessian is not positive definite".into()));
    }
    let mass = hessian
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Numerical("Hessian is singular".into()))?;
    let mass = (&mass + mass.transpose()) * 0.5;
    let mut mass_eigenvalues: Vec<f64> = SymmetricEigen::new(mass.clone())
        .eigenvalues
        .iter()
        .copied()
        .collect();
    mass_eigenvalues.sort_by(f64::total_cmp);

    let nu = g.num_vertices() as f64;
    let c_m: i64 = m.values().iter().map(|v| 2 * v.norm_sq()).sum();
    let lower = nu / c_m as f64;
    let upper = nu * nu * d as f64 / 2.0;
    let within = |lo: f64| {
        mass_eigenvalues
            .iter()
            .all(|&x| x >= lo - CONTAINMENT_TOL && x <= upper + CONTAINMENT_TOL)
    };
    let bounds_ok = within(lower);
    let (sharpened_lower, sharpened_ok) = if m.support().len() == d {
        let s = nu / (2.0 * d as f64);
        (Some(s), Some(within(s)))
    } else {
        (None, None)
    };

    Ok(EffectiveMass {
        hessian,
        hessian_fd,
        mass,
        mass_eigenvalues,
        c_m,
        lower,
        upper,
        bounds_ok,
        sharpened_lower,
        sharpened_ok,
    })
}

/// Localization table, one row per band:
/// `n mu interval_lo interval_hi band_lo band_hi contained`.
pub fn localization_table(
    mu: &[f64],
    intervals: &[(f64, f64)],
    bands: &BandStructure,
    contained: &[bool],
) -> String {
    let mut out = String::from("n mu interval_lo interval_hi band_lo band_hi contained\n");
    for (n, ((&m, &(lo, hi)), &c)) in mu.iter().zip(intervals).zip(contained).enumerate() {
        let b = &bands.bands[n];
        writeln!(
            out,
            "{} {} {} {} {} {} {}",
            n + 1,
            fmt_real(m),
            fmt_real(lo),
            fmt_real(hi),
            fmt_real(b.lambda_min),
            fmt_real(b.lambda_max),
            c
        )
        .unwrap();
    }
    out
}

/// Eigenvalues of the fiber operator on the support subgraph alone.
pub fn magnetic_part_eigenvalues(split: &SupportSplit, theta: &Quasimomentum) -> Result<Vec<f64>> {
    let form = OneForm::index_form(&split.on_support);
    hermitian_eigenvalues(&fiber_matrix(&split.on_support, &form, theta)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{make_kagome, make_lattice};
    use crate::spectral::{band_sweep, SweepOptions};

    #[test]
    fn lattice_split() {
        let g = make_lattice(2).unwrap();
        let s = support_subgraphs(&g, &OneForm::index_form(&g)).unwrap();
        assert_eq!(s.off_support.num_edges(), 0);
        assert_eq!(s.on_support.num_edges(), 2);
        assert_eq!(s.support_degree_max(), 4);
    }

    #[test]
    fn kagome_split_is_two_triangles() {
        let g = make_kagome();
        let s = support_subgraphs(&g, &OneForm::index_form(&g)).unwrap();
        assert_eq!(s.off_support.num_edges(), 3);
        assert_eq!(s.on_support.num_edges(), 3);
        assert_eq!(s.support_degree_max(), 2);
        let mu = finite_spectrum(&s.off_support).unwrap();
        for (a, b) in mu.iter().zip([0.0, 3.0, 3.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn chain_effective_form_is_one() {
        let g = make_lattice(1).unwrap();
        let tau = OneForm::index_form(&g);
        assert!((effective_form(&g, &tau, &[1.0]).unwrap() - 1.0).abs() < 1e-14);
        assert!((effective_form(&g, &tau, &[-2.0]).unwrap() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn effective_form_rejects_potential() {
        let g = make_lattice(1).unwrap().with_potential(vec![1.0]).unwrap();
        assert_eq!(
            effective_form(&g, &OneForm::index_form(&g), &[1.0]),
            Err(Error::NonzeroPotential)
        );
    }

    #[test]
    fn greedy_cover_prefers_busy_vertex() {
        let g = make_kagome();
        let cover = greedy_cover(&g, &OneForm::index_form(&g).support());
        assert_eq!(cover.len(), 2);
    }

    #[test]
    fn chain_dirichlet() {
        let g = make_lattice(1).unwrap();
        let bands = band_sweep(&g, &OneForm::index_form(&g), SweepOptions::default()).unwrap();
        let r = dirichlet_localization(&g, &bands).unwrap();
        assert_eq!(r.cover, vec![0]);
        assert!(r.mu_dirichlet.is_empty());
        assert_eq!(r.intervals, vec![(0.0, 4.0)]);
        assert!(r.all_contained());
    }
}
