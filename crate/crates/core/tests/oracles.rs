//! Worked examples checked against independent computations.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use perigraph_core::spectral::{grid_points, SweepOptions};
use perigraph_core::*;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

/// Spanning trees by checking every (ν−1)-subset of non-loop edges.
fn brute_force_tree_count(g: &FundamentalGraph) -> u64 {
    let edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .filter(|e| !e.is_loop())
        .map(|e| (e.tail, e.head))
        .collect();
    let need = g.num_vertices() - 1;
    let mut count = 0;
    for mask in 0u32..(1 << edges.len()) {
        if mask.count_ones() as usize != need {
            continue;
        }
        let mut comp: Vec<usize> = (0..g.num_vertices()).collect();
        let mut acyclic = true;
        for (i, &(u, v)) in edges.iter().enumerate() {
            if mask & (1 << i) == 0 {
                continue;
            }
            let (cu, cv) = (comp[u], comp[v]);
            if cu == cv {
                acyclic = false;
                break;
            }
            comp.iter_mut().filter(|c| **c == cv).for_each(|c| *c = cu);
        }
        count += u64::from(acyclic);
    }
    count
}

/// Five-vertex graph with β = 3: bottom 0, left 1, right 2,
/// top 3, center 4.
fn five_vertex_graph() -> FundamentalGraph {
    finite_graph(5, &[(0, 2), (0, 1), (3, 2), (3, 1), (3, 4), (1, 4), (4, 2)]).unwrap()
}

fn triangle() -> FundamentalGraph {
    finite_graph(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
}

fn suite() -> Vec<FundamentalGraph> {
    vec![
        make_lattice(1).unwrap(),
        make_lattice(2).unwrap(),
        make_lattice(3).unwrap(),
        make_triangular(),
        make_hexagonal(),
        make_kagome(),
        make_decorated(2, &triangle(), 0).unwrap(),
        five_vertex_graph(),
    ]
}

#[test]
fn tree_counts_match_brute_force() {
    for g in suite() {
        let oracle = brute_force_tree_count(&g);
        assert_eq!(count_spanning_trees(&g).unwrap(), BigInt::from(oracle));
        assert_eq!(
            enumerate_spanning_trees(&g, DEFAULT_TREE_CAP)
                .unwrap()
                .len() as u64,
            oracle
        );
    }
    assert_eq!(
        count_spanning_trees(&make_kagome()).unwrap(),
        BigInt::from(12)
    );
    assert_eq!(count_spanning_trees(&triangle()).unwrap(), BigInt::from(3));
    assert_eq!(
        count_spanning_trees(&make_lattice(4).unwrap()).unwrap(),
        BigInt::from(1)
    );
}

#[test]
fn five_vertex_graph_shape() {
    let g = five_vertex_graph();
    assert_eq!(g.betti(), 3);
    let t = SpanningTree::from_edges(&g, &[0, 4, 5, 6]).unwrap();
    assert_eq!(t.cotree, vec![1, 2, 3]);
    assert_eq!(basic_cycles(&g, &t).len(), 3);
}

#[test]
fn enumeration_cap_is_enforced() {
    let err = enumerate_spanning_trees(&make_kagome(), 11).unwrap_err();
    assert_eq!(
        err,
        Error::CapExceeded {
            count: "12".into(),
            cap: 11
        }
    );
}

#[test]
fn invariants_of_builders() {
    for (g, inv, betti) in [
        (make_lattice(2).unwrap(), 2, 2),
        (make_lattice(3).unwrap(), 3, 3),
        (make_triangular(), 3, 3),
        (make_hexagonal(), 2, 2),
        (make_kagome(), 3, 4),
    ] {
        let r = minimal_form(&g, &OneForm::index_form(&g)).unwrap();
        assert_eq!((r.invariant, r.betti), (inv, betti));
        assert!(in_flux_class(&g, &r.form));
        for &e in &r.tree.tree_edges {
            assert!(r.form.value(e).is_zero());
        }
    }
}

#[test]
fn minimal_form_of_lattice_is_index_form() {
    let g = make_lattice(3).unwrap();
    let r = minimal_form(&g, &OneForm::index_form(&g)).unwrap();
    assert_eq!(r.form, OneForm::index_form(&g));
}

#[test]
fn kagome_minimal_form_values() {
    let g = make_kagome();
    let r = minimal_form(&g, &OneForm::index_form(&g)).unwrap();
    let mut values: Vec<Vec<i64>> = r
        .form
        .support()
        .iter()
        .map(|&e| {
            let v = r.form.value(e).entries().to_vec();
            // compare up to orientation
            if v.iter().find(|x| **x != 0).is_some_and(|x| *x < 0) {
                v.iter().map(|x| -x).collect()
            } else {
                v
            }
        })
        .collect();
    values.sort();
    assert_eq!(values, vec![vec![0, 1], vec![1, -1], vec![1, 0]]);
}

#[test]
fn flux_kernel_dimensions() {
    let k = make_kagome();
    assert_eq!(flux_kernel_dim(&k, &OneForm::index_form(&k)).unwrap(), 2);
    let h = make_hexagonal();
    assert_eq!(flux_kernel_dim(&h, &OneForm::index_form(&h)).unwrap(), 0);
    let z = make_lattice(3).unwrap();
    assert_eq!(flux_kernel_dim(&z, &OneForm::index_form(&z)).unwrap(), 0);
}

#[test]
fn gauge_potential_of_index_form_vanishes() {
    let g = make_kagome();
    let w = gauge_potential(&g, &OneForm::index_form(&g)).unwrap();
    assert!(w.w.iter().all(IndexVector::is_zero));

    let m = minimal_form(&g, &OneForm::index_form(&g)).unwrap().form;
    let w = gauge_potential(&g, &m).unwrap();
    assert!(w.w[0].is_zero());
    for (id, e) in g.edges().iter().enumerate() {
        assert_eq!(&w.w[e.head] - &w.w[e.tail], &e.index - m.value(id));
    }
}

#[test]
fn flipped_loop_leaves_flux_class() {
    let g = make_lattice(2).unwrap();
    let mut values = OneForm::index_form(&g).values().to_vec();
    values[0] = -&values[0];
    let b = OneForm::new(2, values).unwrap();
    assert!(!in_flux_class(&g, &b));
    assert_eq!(gauge_potential(&g, &b), Err(Error::NotInFluxClass));
}

#[test]
fn normalize_examples() {
    let t = make_triangular();
    let r = normalize_basis(&t, &OneForm::index_form(&t)).unwrap();
    assert_eq!(r.u, vec![vec![1, 0], vec![0, 1]]);
    assert_eq!(r.chosen, vec![0, 1]);

    let one = FundamentalGraph::new(1, 1, vec![Edge::new(0, 0, [2])]).unwrap();
    assert!(matches!(
        normalize_basis(&one, &OneForm::index_form(&one)),
        Err(Error::NotGenerating { .. })
    ));

    let k = make_kagome();
    let m = minimal_form(&k, &OneForm::index_form(&k)).unwrap().form;
    let r = normalize_basis(&k, &m).unwrap();
    for (i, &e) in r.chosen.iter().enumerate() {
        assert_eq!(r.form.value(e), &IndexVector::unit(2, i));
    }
    assert_eq!(r.form.support().len(), 3);
}

#[test]
fn lattice_dispersion() {
    let g = make_lattice(2).unwrap();
    let tau = OneForm::index_form(&g);
    for theta in grid_points(2, 8).unwrap() {
        let (a, b) = (theta.0[0], theta.0[1]);
        let m = fiber_matrix(&g, &tau, &theta).unwrap();
        assert!(close(
            m.0[(0, 0)].re,
            4.0 - 2.0 * a.cos() - 2.0 * b.cos(),
            1e-14
        ));
    }
    let bands = band_sweep(&g, &tau, SweepOptions::default()).unwrap();
    assert!(close(bands.bands[0].lambda_min, 0.0, 1e-14));
    assert!(close(bands.bands[0].lambda_max, 8.0, 1e-14));
    assert!(close(bands.measure, 8.0, 1e-14));
}

#[test]
fn hexagonal_dispersion() {
    let g = make_hexagonal();
    let tau = OneForm::index_form(&g);
    let m = fiber_matrix(&g, &tau, &Quasimomentum::zero(2)).unwrap();
    let expect =
        DMatrix::from_row_slice(2, 2, &[3.0, -3.0, -3.0, 3.0]).map(|x| Complex64::new(x, 0.0));
    assert!((&m.0 - expect).iter().all(|z| z.norm() < 1e-14));
    for theta in grid_points(2, 10).unwrap() {
        let (a, b) = (theta.0[0], theta.0[1]);
        let s = (Complex64::new(1.0, 0.0)
            + Complex64::from_polar(1.0, a)
            + Complex64::from_polar(1.0, b))
        .norm();
        let e = hermitian_eigenvalues(&fiber_matrix(&g, &tau, &theta).unwrap()).unwrap();
        assert!(close(e[0], 3.0 - s, 1e-12) && close(e[1], 3.0 + s, 1e-12));
    }
    let bands = band_sweep(&g, &tau, SweepOptions::default()).unwrap();
    assert!(close(bands.bands[0].lambda_min, 0.0, 0.05));
    assert!(close(bands.bands[1].lambda_max, 6.0, 0.05));
}

#[test]
fn kagome_fiber_at_zero_and_flat_band() {
    let g = make_kagome();
    let tau = OneForm::index_form(&g);
    let m = fiber_matrix(&g, &tau, &Quasimomentum::zero(2)).unwrap();
    let expect = DMatrix::from_fn(3, 3, |i, j| {
        Complex64::new(if i == j { 4.0 } else { -2.0 }, 0.0)
    });
    assert!((&m.0 - expect).iter().all(|z| z.norm() < 1e-14));
    assert_eq!(
        hermitian_eigenvalues(&m)
            .unwrap()
            .iter()
            .map(|x| x.round() as i64)
            .collect::<Vec<_>>(),
        vec![0, 6, 6]
    );
    for theta in grid_points(2, 12).unwrap() {
        let e = hermitian_eigenvalues(&fiber_matrix(&g, &tau, &theta).unwrap()).unwrap();
        assert!(close(e[2], 6.0, 1e-9));
        assert!(close(e.iter().sum::<f64>(), 12.0, 1e-12));
    }
    let bands = band_sweep(&g, &tau, SweepOptions::default()).unwrap();
    assert!(bands.bands[2].flat);
    assert!(!bands.bands[0].flat);
}

#[test]
fn triangular_dispersion() {
    let g = make_triangular();
    let tau = OneForm::index_form(&g);
    for theta in grid_points(2, 6).unwrap() {
        let (a, b) = (theta.0[0], theta.0[1]);
        let expect = 6.0 - 2.0 * (a.cos() + b.cos() + (a + b).cos());
        let m = fiber_matrix(&g, &tau, &theta).unwrap();
        assert!(close(m.0[(0, 0)].re, expect, 1e-13));
    }
    // the maximum 9 sits at (2π/3, 2π/3), on a grid divisible by 3
    let bands = band_sweep(
        &g,
        &tau,
        SweepOptions {
            grid_n: 6,
            ..SweepOptions::default()
        },
    )
    .unwrap();
    assert!(close(bands.bands[0].lambda_max, 9.0, 1e-12));
}

#[test]
fn kagome_localization_example() {
    let g = make_kagome();
    let m = minimal_form(&g, &OneForm::index_form(&g)).unwrap().form;
    let bands = band_sweep(&g, &m, SweepOptions::default()).unwrap();
    let r = localization_intervals(&g, &m, &bands).unwrap();
    assert_eq!(r.kappa_m_plus, 2);
    for ((lo, hi), (elo, ehi)) in r.intervals.iter().zip([(0.0, 4.0), (3.0, 7.0), (3.0, 7.0)]) {
        assert!(close(*lo, elo, 1e-12) && close(*hi, ehi, 1e-12));
    }
    assert!(r.all_contained());
}

#[test]
fn chain_effective_form() {
    let g = make_lattice(1).unwrap();
    assert!(close(
        effective_form(&g, &OneForm::index_form(&g), &[1.0]).unwrap(),
        1.0,
        1e-14
    ));
}

#[test]
fn lattice_effective_mass() {
    let g = make_lattice(2).unwrap();
    let em = effective_mass(&g, &OneForm::index_form(&g)).unwrap();
    assert!((&em.hessian - DMatrix::identity(2, 2) * 2.0).amax() < 1e-12);
    assert!((&em.mass - DMatrix::identity(2, 2) * 0.5).amax() < 1e-12);
    assert_eq!(em.c_m, 4);
    assert!(close(em.lower, 0.25, 1e-15) && close(em.upper, 1.0, 1e-15));
    assert!(em.ok());
}

/// Hessians of the closed-form lowest bands at θ = 0.
#[test]
fn effective_mass_matches_closed_forms() {
    let hex = make_hexagonal();
    let em = effective_mass(&hex, &OneForm::index_form(&hex)).unwrap();
    let expect = DMatrix::from_row_slice(2, 2, &[2.0, -1.0, -1.0, 2.0]) / 3.0;
    assert!((&em.hessian - expect).amax() < 1e-12);

    let tri = make_triangular();
    let em = effective_mass(&tri, &OneForm::index_form(&tri)).unwrap();
    let expect = DMatrix::from_row_slice(2, 2, &[4.0, 2.0, 2.0, 4.0]);
    assert!((&em.hessian - expect).amax() < 1e-12);
}

#[test]
fn effective_form_bounds_hold_for_normalized_kagome() {
    let g = make_kagome();
    let m = minimal_form(&g, &OneForm::index_form(&g)).unwrap().form;
    let b = normalize_basis(&g, &m).unwrap();
    for k in 0..16 {
        let a = PI * k as f64 / 8.0;
        let w = [a.cos(), a.sin()];
        let mu = effective_form(&b.graph, &b.form, &w).unwrap();
        let (lo, hi) = effective_form_bounds(&b.graph, &b.form, &w);
        assert!(
            mu >= lo - 1e-12 && mu <= hi + 1e-12,
            "{mu} not in [{lo},{hi}]"
        );
    }
}

#[test]
fn dirichlet_on_decorated_lattice() {
    let g = make_decorated(2, &triangle(), 0).unwrap();
    let bands = band_sweep(&g, &OneForm::index_form(&g), SweepOptions::default()).unwrap();
    let r = dirichlet_localization(&g, &bands).unwrap();
    assert_eq!(r.cover, vec![0]);
    assert_eq!(r.mu_dirichlet.len(), 2);
    assert!(r.all_contained());
}

#[test]
fn measure_bound_examples() {
    for (g, measure, bound) in [(make_kagome(), 6.0, 12), (make_triangular(), 9.0, 12)] {
        let tau = OneForm::index_form(&g);
        let inv = minimal_form(&g, &tau).unwrap();
        let bands = band_sweep(
            &g,
            &tau,
            SweepOptions {
                grid_n: 66,
                ..SweepOptions::default()
            },
        )
        .unwrap();
        let r = measure_bound_check(&bands, &inv);
        assert_eq!(r.bound, bound);
        assert!(close(r.measure, measure, 0.05));
        assert!(r.ok());
    }
}

#[test]
fn realize_kagome_round_trip() {
    let k = make_kagome();
    let m = minimal_form(&k, &OneForm::index_form(&k)).unwrap().form;
    let pairs: Vec<(usize, usize)> = k.edges().iter().map(|e| (e.tail, e.head)).collect();
    let g = realize_periodic(&finite_graph(3, &pairs).unwrap(), &m).unwrap();
    assert!(validate(&g).is_valid());
    assert_eq!(
        minimal_form(&g, &OneForm::index_form(&g))
            .unwrap()
            .invariant,
        3
    );
}

#[test]
fn coordinate_index_example() {
    // hexagonal lattice from positions
    let basis = vec![vec![1.0, 0.0], vec![0.5, 3f64.sqrt() / 2.0]];
    let a = vec![0.0, 0.0];
    let b = vec![0.5, 3f64.sqrt() / 6.0];
    let pos = vec![a.clone(), b.clone()];
    let shift = |p: &[f64], i: f64, j: f64| -> Vec<f64> {
        vec![
            p[0] + i * basis[0][0] + j * basis[1][0],
            p[1] + i * basis[0][1] + j * basis[1][1],
        ]
    };
    let raw = vec![
        (a.clone(), b.clone()),
        (shift(&a, 1.0, 0.0), shift(&b, 1.0, -1.0)),
        (shift(&a, 0.0, 2.0), shift(&b, -1.0, 1.0)),
    ];
    let g = index_from_positions(&pos, &basis, &raw).unwrap();
    let idx: Vec<IndexVector> = g.edges().iter().map(|e| e.index.clone()).collect();
    assert_eq!(
        idx,
        vec![
            IndexVector::from([0, 0]),
            IndexVector::from([0, -1]),
            IndexVector::from([-1, -1])
        ]
    );
    assert!(g.edges().iter().all(|e| (e.tail, e.head) == (0, 1)));
}
