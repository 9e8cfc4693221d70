//! Fiber matrices, their spectra, and torus sweeps.
//!
//! For a 1-form `b` the fiber Schrödinger matrix at quasimomentum `θ` is
//!
//! ```text
//! H(θ)_vv = κ_v + Q(v) − Σ_{oriented loops at v} cos<b(e), θ>
//! H(θ)_uv = −Σ_{e = (u, v)} exp(−i <b(e), θ>)        (u ≠ v)
//! ```
//!
//! Sweeping `θ` over a uniform grid of the torus gives inner approximations
//! of the spectral bands.

use std::f64::consts::PI;
use std::fmt::Write;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::forms::{gauge_potential, OneForm};
use crate::graph::{FundamentalGraph, IndexVector};
use crate::report::fmt_real;

/// Entrywise tolerance on `M − M*`.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Default absolute tolerance for declaring a band flat.
pub const FLAT_TOL: f64 = 1e-9;
/// Agreement required between gauge-equivalent fiber matrices.
pub const GAUGE_TOL: f64 = 1e-10;
pub const DEFAULT_GRID: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct Quasimomentum(pub Vec<f64>);

impl Quasimomentum {
    pub fn zero(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }

    /// The corner `(π, …, π)`.
    pub fn corner(dim: usize) -> Self {
        Self(vec![PI; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|t| -t).collect())
    }

    /// Transform of a quasimomentum under a change of lattice basis that
    /// maps index vectors by the integer matrix `u`: `θ' = u⁻ᵀ θ`, given
    /// `u_inv = u⁻¹`. Keeps `<u n, θ'> = <n, θ>`.
    pub fn transformed(&self, u_inv: &[Vec<i64>]) -> Self {
        let d = self.dim();
        Self(
            (0..d)
                .map(|i| (0..d).map(|j| u_inv[j][i] as f64 * self.0[j]).sum())
                .collect(),
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiberMatrix(pub DMatrix<Complex64>);

impl FiberMatrix {
    pub fn size(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    /// Largest entrywise deviation from Hermitian symmetry.
    pub fn hermitian_defect(&self) -> f64 {
        let m = &self.0;
        let n = m.nrows();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn max_entry_diff(&self, other: &Self) -> f64 {
        (&self.0 - &other.0)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

pub fn fiber_matrix(
    g: &FundamentalGraph,
    b: &OneForm,
    theta: &Quasimomentum,
) -> Result<FiberMatrix> {
    b.check_on(g)?;
    if theta.dim() != g.dim() {
        return Err(Error::QuasimomentumDim {
            expected: g.dim(),
            found: theta.dim(),
        });
    }
    let n = g.num_vertices();
    let deg = g.degrees();
    let mut m = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for v in 0..n {
        m[(v, v)] = Complex64::new(deg[v] as f64 + g.potential()[v], 0.0);
    }
    for (id, e) in g.edges().iter().enumerate() {
        let phase = b.value(id).dot(theta.as_slice());
        if e.is_loop() {
            // both orientations contribute cos<b, θ>
            m[(e.tail, e.tail)] -= Complex64::new(2.0 * phase.cos(), 0.0);
        } else {
            let z = Complex64::from_polar(1.0, -phase);
            m[(e.tail, e.head)] -= z;
            m[(e.head, e.tail)] -= z.conj();
        }
    }
    Ok(FiberMatrix(m))
}

/// Ascending eigenvalues of a Hermitian matrix, repeated by multiplicity.
pub fn hermitian_eigenvalues(m: &FiberMatrix) -> Result<Vec<f64>> {
    let scale = m.0.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let defect = m.hermitian_defect();
    if defect > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian(defect));
    }
    let mut eig: Vec<f64> =
        m.0.clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

/// Number of oriented edges whose exponential `exp(i<b(e), θ>)` is not
/// identically 1, i.e. the number of `θ`-dependent coefficients.
pub fn theta_dependent_count(b: &OneForm) -> usize {
    b.support_size()
}

/// Grid coordinates `π(2k − n)/n`, `k = 0..n`, which contain `−π` and `0`
/// exactly.
pub fn grid_axis(grid_n: usize) -> Vec<f64> {
    (0..grid_n)
        .map(|k| PI * (2.0 * k as f64 - grid_n as f64) / grid_n as f64)
        .collect()
}

/// All grid points in lexicographic order (first coordinate slowest).
pub fn grid_points(dim: usize, grid_n: usize) -> Result<Vec<Quasimomentum>> {
    if grid_n < 2 || !grid_n.is_multiple_of(2) {
        return Err(Error::BadGrid(grid_n));
    }
    let axis = grid_axis(grid_n);
    let total = grid_n.pow(dim as u32);
    Ok((0..total)
        .map(|mut flat| {
            let mut theta = vec![0.0; dim];
            for j in (0..dim).rev() {
                theta[j] = axis[flat % grid_n];
                flat /= grid_n;
            }
            Quasimomentum(theta)
        })
        .collect())
}

/// Eigenvalues at every grid point, in grid order.
pub fn sample_grid(
    g: &FundamentalGraph,
    b: &OneForm,
    grid_n: usize,
) -> Result<Vec<(Quasimomentum, Vec<f64>)>> {
    b.check_on(g)?;
    grid_points(g.dim(), grid_n)?
        .into_par_iter()
        .map(|theta| {
            let eig = hermitian_eigenvalues(&fiber_matrix(g, b, &theta)?)?;
            Ok((theta, eig))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Band {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub argmin: Quasimomentum,
    pub argmax: Quasimomentum,
    pub flat: bool,
}

impl Band {
    pub fn length(&self) -> f64 {
        self.lambda_max - self.lambda_min
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BandStructure {
    pub grid_n: usize,
    pub bands: Vec<Band>,
    /// Lebesgue measure of the union of the bands.
    pub measure: f64,
}

impl BandStructure {
    pub fn sum_of_lengths(&self) -> f64 {
        self.bands.iter().map(Band::length).sum()
    }

    pub fn from_samples(
        grid_n: usize,
        samples: &[(Quasimomentum, Vec<f64>)],
        flat_tol: f64,
    ) -> Self {
        let nu = samples.first().map_or(0, |s| s.1.len());
        let mut bands: Vec<Band> = Vec::with_capacity(nu);
        for n in 0..nu {
            let (mut lo, mut hi) = (&samples[0], &samples[0]);
            for s in samples {
                if s.1[n] < lo.1[n] {
                    lo = s;
                }
                if s.1[n] > hi.1[n] {
                    hi = s;
                }
            }
            bands.push(Band {
                lambda_min: lo.1[n],
                lambda_max: hi.1[n],
                argmin: lo.0.clone(),
                argmax: hi.0.clone(),
                flat: hi.1[n] - lo.1[n] < flat_tol,
            });
        }
        let measure = union_measure(bands.iter().map(|b| (b.lambda_min, b.lambda_max)));
        Self {
            grid_n,
            bands,
            measure,
        }
    }

    /// One line per band, `n lambda_min lambda_max flat`, then `measure=`.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for (i, b) in self.bands.iter().enumerate() {
            writeln!(
                out,
                "{} {} {} {}",
                i + 1,
                fmt_real(b.lambda_min),
                fmt_real(b.lambda_max),
                b.flat
            )
            .unwrap();
        }
        writeln!(out, "measure={}", fmt_real(self.measure)).unwrap();
        out
    }
}

/// Length of the union of closed intervals.
pub fn union_measure(intervals: impl IntoIterator<Item = (f64, f64)>) -> f64 {
    let mut iv: Vec<(f64, f64)> = intervals.into_iter().collect();
    iv.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut total = 0.0;
    let mut current: Option<(f64, f64)> = None;
    for (lo, hi) in iv {
        current = match current {
            Some((clo, chi)) if lo <= chi => Some((clo, chi.max(hi))),
            Some((clo, chi)) => {
                total += chi - clo;
                Some((lo, hi))
            }
            None => Some((lo, hi)),
        };
    }
    if let Some((lo, hi)) = current {
        total += hi - lo;
    }
    total
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepOptions {
    pub grid_n: usize,
    pub flat_tol: f64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            grid_n: DEFAULT_GRID,
            flat_tol: FLAT_TOL,
        }
    }
}

/// Per-band minima and maxima over the uniform torus grid, using the
/// graph's potential.
pub fn band_sweep(g: &FundamentalGraph, b: &OneForm, opts: SweepOptions) -> Result<BandStructure> {
    let samples = sample_grid(g, b, opts.grid_n)?;
    Ok(BandStructure::from_samples(
        opts.grid_n,
        &samples,
        opts.flat_tol,
    ))
}

/// CSV with header `theta_1..theta_d,lambda_1..lambda_nu`, one row per
/// grid point.
pub fn bands_csv(dim: usize, samples: &[(Quasimomentum, Vec<f64>)]) -> String {
    let nu = samples.first().map_or(0, |s| s.1.len());
    let mut header: Vec<String> = (1..=dim).map(|j| format!("theta_{j}")).collect();
    header.extend((1..=nu).map(|n| format!("lambda_{n}")));
    let mut out = header.join(",");
    out.push('\n');
    for (theta, eig) in samples {
        let row: Vec<String> = theta.0.iter().chain(eig).map(|&x| fmt_real(x)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// `D M D*` for the diagonal phase `D_vv = exp(i<w(v), θ>)`.
pub fn phase_conjugate(m: &FiberMatrix, w: &[IndexVector], theta: &Quasimomentum) -> FiberMatrix {
    let phases: Vec<Complex64> = w
        .iter()
        .map(|wv| Complex64::from_polar(1.0, wv.dot(theta.as_slice())))
        .collect();
    let n = m.size();
    FiberMatrix(DMatrix::from_fn(n, n, |i, j| {
        phases[i] * m.0[(i, j)] * phases[j].conj()
    }))
}

/// Checks that two members of the index form's flux class give unitarily
/// equivalent fiber matrices at every sample: sorted spectra agree, and the
/// diagonal phase built from the difference of their gauge potentials maps
/// one matrix onto the other entrywise.
pub fn verify_gauge_equivalence(
    g: &FundamentalGraph,
    b1: &OneForm,
    b2: &OneForm,
    samples: &[Quasimomentum],
) -> Result<bool> {
    let w1 = gauge_potential(g, b1)?;
    let w2 = gauge_potential(g, b2)?;
    let shift: Vec<IndexVector> = w2.w.iter().zip(&w1.w).map(|(a, b)| a - b).collect();
    for theta in samples {
        let m1 = fiber_matrix(g, b1, theta)?;
        let m2 = fiber_matrix(g, b2, theta)?;
        let e1 = hermitian_eigenvalues(&m1)?;
        let e2 = hermitian_eigenvalues(&m2)?;
        if e1.iter().zip(&e2).any(|(a, b)| (a - b).abs() > GAUGE_TOL) {
            return Ok(false);
        }
        if phase_conjugate(&m2, &shift, theta).max_entry_diff(&m1) > GAUGE_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}
