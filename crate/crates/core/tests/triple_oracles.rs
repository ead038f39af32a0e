//! Oracle checks on builder output: Green exactness and its linear response,
//! density ranks, conjugate spectra, serialization and the continuum DtN limit.

use boundary_triples::extensions::{krein_hypotheses, verify_model, BoundaryParameter, VerifyOptions};
use boundary_triples::models::{
    analytic_dtn_1d, convection_diffusion_1d, elliptic_2d, load_model, model_from_json, model_to_json, save_model,
    sturm_liouville_1d, synthetic_pair, Coefficients1D, Grid2D,
};
use boundary_triples::numcore::{norm, pencil_eigenvalues, zeros, ComplexMatrix, DEFAULT_RANK_TOL};
use boundary_triples::triple::{
    check_density, dirichlet_pencil, gamma, gamma_tilde, green_defect, weyl_identity_check, RawTriple,
};
use boundary_triples::{c64, Side, TripleModel, WeightedSpace};

fn models() -> Vec<TripleModel> {
    vec![
        sturm_liouville_1d(&Coefficients1D::new(12, |x| 1.0 + x, |x| 2.0 * x)).unwrap(),
        convection_diffusion_1d(&Coefficients1D::laplacian(12).with_convection(|x| x - 0.5).with_potential(|x| c64(1.0, x))).unwrap(),
        elliptic_2d(&Grid2D::unit_square(5, 4).with_size(2.0, 1.0)).unwrap(),
        elliptic_2d(&Grid2D::unit_square(4, 4).with_convection(|x, _| x, |_, y| -y)).unwrap(),
        synthetic_pair(11, 7, 3).unwrap(),
    ]
}

#[test]
fn green_defect_is_exact_and_responds_linearly() {
    for m in models() {
        assert!(green_defect(&m) < 1e-12, "{}", m.kind());
    }
    let base = synthetic_pair(5, 6, 2).unwrap();
    let perturbed = |t: f64| {
        let mut raw = base.to_raw();
        raw.op_t[(2, 3)] += c64(t, 0.0);
        green_defect(&TripleModel::assemble(raw).unwrap())
    };
    let (d1, d2) = (perturbed(1e-6), perturbed(2e-6));
    assert!((d2 / d1 - 2.0).abs() < 1e-3, "{d1} {d2}");
}

#[test]
fn zero_model_has_zero_green_defect() {
    let (n, m) = (3, 2);
    let z = zeros(n, n + m);
    let zg = zeros(m, n + m);
    let raw = RawTriple {
        kind: "zero".into(),
        space_h: WeightedSpace::identity(n),
        space_g: WeightedSpace::identity(m),
        embed: z.clone(),
        embed_t: z.clone(),
        op_t: z.clone(),
        op_tt: z,
        g0: zg.clone(),
        g1: zg.clone(),
        g0t: zg.clone(),
        g1t: zg,
        symmetric: true,
        lambda0: None,
    };
    assert_eq!(green_defect(&TripleModel::assemble(raw).unwrap()), 0.0);
}

#[test]
fn density_ranks() {
    for m in models() {
        let d = check_density(&m, DEFAULT_RANK_TOL);
        assert!(d.condition_d && d.condition_dd, "{}: {d:?}", m.kind());
    }
    let lap = sturm_liouville_1d(&Coefficients1D::laplacian(8)).unwrap();
    let mut raw = lap.to_raw();
    raw.g1 = raw.g0.clone();
    let d = check_density(&TripleModel::assemble(raw).unwrap(), DEFAULT_RANK_TOL);
    assert!(d.condition_d && !d.condition_dd);
    assert_eq!(d.rank_stack, 2);
}

#[test]
fn tilde_spectrum_is_the_conjugate() {
    for m in models() {
        let (a, e) = dirichlet_pencil(&m, Side::Plain);
        let (at, et) = dirichlet_pencil(&m, Side::Tilde);
        let p = pencil_eigenvalues(&a, &e).unwrap();
        let t = pencil_eigenvalues(&at, &et).unwrap();
        assert_eq!(p.finite.len(), t.finite.len());
        for z in &p.finite {
            assert!(t.distance(z.conj()) < 1e-8 * z.norm().max(1.0), "{}: {z}", m.kind());
        }
    }
}

#[test]
fn weyl_pairs_with_the_tilde_weyl_function() {
    for m in models() {
        for z in [c64(-1.0, 0.0), c64(0.5, 1.5)] {
            let w = gamma(&m, z).unwrap().weyl;
            let wt = gamma_tilde(&m, z.conj()).unwrap().weyl;
            let star = boundary_triples::numcore::weighted_adjoint(&wt, m.space_g(), m.space_g()).unwrap();
            assert!(norm(&(&w - &star)) < 1e-10 * norm(&w), "{}", m.kind());
        }
    }
}

#[test]
fn swapped_boundary_maps_invert_the_weyl_function() {
    let m = synthetic_pair(9, 6, 2).unwrap();
    let s = m.swapped().unwrap();
    let z = c64(0.3, 0.7);
    let w = gamma(&m, z).unwrap().weyl;
    let ws = gamma(&s, z).unwrap().weyl;
    let want = -w.try_inverse().unwrap();
    assert!(norm(&(&ws - &want)) < 1e-10 * norm(&want));
    assert!(weyl_identity_check(&s, z, c64(-1.0, 2.0)).unwrap().worst() < 1e-10);
}

#[test]
fn one_dimensional_dtn_approaches_the_analytic_map() {
    for lam in [c64(-1.0, 0.0), c64(2.0, 3.0), c64(-30.0, 0.0)] {
        let exact = analytic_dtn_1d(lam).unwrap();
        let err = |n: usize| {
            let m = sturm_liouville_1d(&Coefficients1D::laplacian(n)).unwrap();
            norm(&(gamma(&m, lam).unwrap().weyl - &exact)) / norm(&exact)
        };
        let (e1, e2) = (err(32), err(64));
        assert!(e2 < 2e-3, "{lam}: {e2}");
        assert!((e1 / e2).log2() > 1.8, "{lam}: {e1} {e2}");
    }
}

#[test]
fn fine_grid_dtn_matches_the_analytic_map_entrywise() {
    let lam = c64(-1.0, 0.0);
    let exact = analytic_dtn_1d(lam).unwrap();
    let m = sturm_liouville_1d(&Coefficients1D::laplacian(256)).unwrap();
    let w = gamma(&m, lam).unwrap().weyl;
    for (a, b) in w.iter().zip(exact.iter()) {
        assert!((a - b).norm() < 1e-3, "{a} vs {b}");
    }
}

#[test]
fn two_dimensional_dtn_settles_under_refinement() {
    // The boundary space changes with the grid, so compare (M φ, φ)_G for the trace of 1 + xy.
    let functional = |n: usize| {
        let grid = Grid2D::unit_square(n, n);
        let model = elliptic_2d(&grid).unwrap();
        let pts = grid.boundary_points();
        let phi = ComplexMatrix::from_fn(pts.len(), 1, |i, _| c64(1.0 + pts[i].0 * pts[i].1, 0.0));
        let w = gamma(&model, c64(-1.0, 0.0)).unwrap().weyl;
        model.space_g().inner(&(&w * &phi), &phi)
    };
    let (f4, f8, f16) = (functional(4), functional(8), functional(16));
    let (d1, d2) = ((f8 - f4).norm(), (f16 - f8).norm());
    assert!(f16.im.abs() < 1e-12 && f16.re < 0.0);
    assert!(d1 / d2 >= 2.0, "differences {d1:.3e} then {d2:.3e}");
}

#[test]
fn json_file_round_trip_preserves_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cd1d.json");
    let m = convection_diffusion_1d(&Coefficients1D::laplacian(8).with_convection(|_| 1.0)).unwrap();
    save_model(&m, &path).unwrap();
    let back = load_model(&path).unwrap();
    assert_eq!(model_to_json(&m).unwrap(), model_to_json(&back).unwrap());
    let opts = VerifyOptions::default();
    let (r1, r2) = (verify_model(&m, &opts), verify_model(&back, &opts));
    assert_eq!(r1.entries, r2.entries);
}

#[test]
fn synthetic_models_are_reproducible_by_seed() {
    let a = model_to_json(&synthetic_pair(42, 5, 2).unwrap()).unwrap();
    let b = model_to_json(&synthetic_pair(42, 5, 2).unwrap()).unwrap();
    let c = model_to_json(&synthetic_pair(43, 5, 2).unwrap()).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert!(model_from_json(&a).unwrap().lambda0().is_some());
}

#[test]
fn krein_hypotheses_hold_away_from_the_spectrum() {
    for m in models() {
        let p = BoundaryParameter::scalar(c64(0.5, 0.0), m.m());
        let h = krein_hypotheses(&m, &p, c64(0.0, 3.0));
        assert!(h.all_hold, "{}: {h:?}", m.kind());
        assert_eq!(h.items.len(), 6);
    }
}

#[test]
fn inline_matrix_parameters_work_with_weighted_boundaries() {
    let m = elliptic_2d(&Grid2D::unit_square(3, 3)).unwrap();
    let b = ComplexMatrix::from_fn(m.m(), m.m(), |i, j| if i == j { c64(1.0, 0.0) } else { c64(0.0, 0.01 * (i as f64 - j as f64)) });
    let p = BoundaryParameter::single(b, "x").unwrap();
    let pt = p.adjoint(m.space_g()).unwrap();
    let d = boundary_triples::extensions::adjoint_duality_check(&m, &p, &pt, c64(1.0, 1.0)).unwrap();
    assert!(d.defect < 1e-10);
}
