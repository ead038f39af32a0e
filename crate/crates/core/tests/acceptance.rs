//! Acceptance criteria 1-10, one line each. Runs without the libtest harness so
//! the lines are always printed; exits non-zero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::Instant;

use boundary_triples::extensions::{
    adjoint_duality_check, bs_test, default_probes, default_thetas, eigenvalue_search, krein_resolvent_matrix,
    restricted_solve, robin_pencil, symmetric_suite, BoundaryParameter, Region, SearchOptions,
};
use boundary_triples::models::{
    analytic_dtn_1d, convection_diffusion_1d, elliptic_2d, sturm_liouville_1d, synthetic_pair, Coefficients1D, Grid2D,
};
use boundary_triples::numcore::{identity, norm, pencil_eigenvalues, pencil_eigenvector, ComplexMatrix};
use boundary_triples::triple::{
    check_maximality, dirichlet_pencil, gamma, gamma_shift_check, gamma_star_check, green_defect,
    weyl_identity_check, weyl_representation_check,
};
use boundary_triples::{c64, Side, TripleModel};
use num_complex::Complex64;

const GREEN_TOL: f64 = 1e-12;
const MAXIMALITY_TOL: f64 = 1e-10;
const IDENTITY_TOL: f64 = 1e-10;
const KREIN_TOL: f64 = 1e-9;
const PENCIL_MATCH_TOL: f64 = 1e-7;
const OVERLAP_TOL: f64 = 1e-8;
const DUALITY_TOL: f64 = 1e-9;
const SELF_ADJOINT_TOL: f64 = 1e-10;
const REAL_TOL: f64 = 1e-8;
const PSD_TOL: f64 = 1e-12;
const CONJUGATE_TOL: f64 = 1e-11;
const MIN_ORDER: f64 = 1.9;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn cd1d(n: usize) -> TripleModel {
    convection_diffusion_1d(&Coefficients1D::laplacian(n).with_convection(|_| 1.0)).unwrap()
}

fn builtin_models() -> Vec<(String, TripleModel)> {
    let mut v = vec![
        ("sl1d N=16".to_string(), sturm_liouville_1d(&Coefficients1D::laplacian(16)).unwrap()),
        ("cd1d N=32".to_string(), cd1d(32)),
        ("elliptic2d 12x12".to_string(), elliptic_2d(&Grid2D::unit_square(12, 12)).unwrap()),
    ];
    for seed in 1..=5 {
        v.push((format!("synthetic n=8 m=3 seed={seed}"), synthetic_pair(seed, 8, 3).unwrap()));
    }
    v
}

fn worst<I: IntoIterator<Item = Result<f64, String>>>(items: I) -> Result<f64, String> {
    let mut w: f64 = 0.0;
    for x in items {
        w = w.max(x?);
    }
    Ok(w)
}

fn criterion_1(models: &[(String, TripleModel)]) -> Outcome {
    let (name, d) = models
        .iter()
        .map(|(n, m)| (n.as_str(), green_defect(m)))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    outcome(d < GREEN_TOL, format!("worst green defect {d:.2e} ({name}), tol {GREEN_TOL:e}"))
}

fn criterion_2(models: &[(String, TripleModel)]) -> Outcome {
    let mut pass = true;
    let mut worst_defect: f64 = 0.0;
    for (name, m) in models {
        let Some(l0) = m.lambda0() else {
            return outcome(false, format!("{name}: no certified lambda0"));
        };
        let c = check_maximality(m, l0);
        pass &= c.ok && c.defect_adjoint < MAXIMALITY_TOL;
        worst_defect = worst_defect.max(c.defect_adjoint);
    }
    outcome(pass, format!("worst adjoint defect {worst_defect:.2e}, tol {MAXIMALITY_TOL:e}"))
}

fn probe_pairs() -> Vec<(Complex64, Complex64)> {
    let p = default_probes();
    (0..p.len()).map(|i| (p[i], p[(i + 1) % p.len()])).collect()
}

fn criterion_3(models: &[(String, TripleModel)]) -> Outcome {
    let r = worst(models.iter().flat_map(|(name, m)| {
        probe_pairs().into_iter().map(move |(z, nu)| {
            let a = gamma_star_check(m, z).map_err(|e| format!("{name} at {z}: {e}"))?.worst();
            let b = gamma_shift_check(m, z, nu).map_err(|e| format!("{name} at {z}: {e}"))?.worst();
            Ok(a.max(b))
        })
    }));
    match r {
        Ok(d) => outcome(d < IDENTITY_TOL, format!("worst gamma defect {d:.2e}, tol {IDENTITY_TOL:e}")),
        Err(e) => outcome(false, e),
    }
}

fn criterion_4(models: &[(String, TripleModel)]) -> Outcome {
    let r = worst(models.iter().flat_map(|(name, m)| {
        let l0 = m.lambda0().unwrap_or(c64(-1.0, 0.0));
        probe_pairs().into_iter().map(move |(z, mu)| {
            let a = weyl_identity_check(m, z, mu).map_err(|e| format!("{name} at {z}: {e}"))?.worst();
            let b = weyl_representation_check(m, z, l0).map_err(|e| format!("{name} at {z}: {e}"))?.worst();
            Ok(a.max(b))
        })
    }));
    match r {
        Ok(d) => outcome(d < IDENTITY_TOL, format!("worst Weyl defect {d:.2e}, tol {IDENTITY_TOL:e}")),
        Err(e) => outcome(false, e),
    }
}

fn criterion_5(models: &[(String, TripleModel)]) -> Outcome {
    let start = Instant::now();
    let r = worst(models.iter().flat_map(|(name, m)| {
        let pts: Vec<(Complex64, Complex64)> = default_thetas()
            .into_iter()
            .flat_map(|t| default_probes().into_iter().map(move |z| (t, z)))
            .collect();
        pts.into_iter().map(move |(theta, z)| {
            let p = BoundaryParameter::scalar(theta, m.m());
            let k = krein_resolvent_matrix(m, &p, z).map_err(|e| format!("{name} theta={theta} at {z}: {e}"))?;
            let d = restricted_solve(m, Side::Plain, &p, z, &identity(m.n()))
                .map_err(|e| format!("{name} theta={theta} at {z}: {e}"))?
                .u;
            let mut w: f64 = 0.0;
            for j in 0..d.ncols() {
                w = w.max((k.column(j) - d.column(j)).norm() / d.column(j).norm());
            }
            Ok(w)
        })
    }));
    let secs = start.elapsed().as_secs_f64();
    match r {
        Ok(d) => outcome(
            d < KREIN_TOL,
            format!("worst column deviation {d:.2e}, tol {KREIN_TOL:e}, {secs:.1} s"),
        ),
        Err(e) => outcome(false, e),
    }
}

/// Search around the five lowest Robin eigenvalues; returns (match, 1 - overlap).
fn completeness(model: &TripleModel) -> Result<(f64, f64, usize), String> {
    let p = BoundaryParameter::scalar(c64(1.0, 0.0), model.m());
    let (a, e) = robin_pencil(model, Side::Plain, &p).map_err(|e| e.to_string())?;
    let spec = pencil_eigenvalues(&a, &e).map_err(|e| e.to_string())?;
    let mut lowest = spec.finite.clone();
    lowest.sort_by(|x, y| x.norm().total_cmp(&y.norm()));
    lowest.truncate(5);
    let region = Region::around(&lowest, 1.0).map_err(|e| e.to_string())?;
    let found = eigenvalue_search(model, &p, region, &SearchOptions::default()).map_err(|e| e.to_string())?;
    if !found.complete() || found.roots.len() < 5 {
        return Err(format!(
            "{} roots, {} pencil eigenvalues unmatched",
            found.roots.len(),
            found.unmatched_pencil.len()
        ));
    }
    let mut dist: f64 = 0.0;
    let mut gap: f64 = 0.0;
    for r in &found.roots {
        dist = dist.max(r.pencil_distance);
        let bs = bs_test(model, &p, r.value(), 1e-8).map_err(|e| e.to_string())?;
        let target = spec.nearest(r.value()).unwrap();
        let v = model.embed() * pencil_eigenvector(&a, &e, target);
        let u: ComplexMatrix = bs.eigenvectors.columns(0, 1).into_owned();
        let h = model.space_h();
        let ov = h.inner(&u, &v).norm() / (h.vec_norm(&u) * h.vec_norm(&v));
        gap = gap.max(1.0 - ov);
    }
    Ok((dist, gap, found.roots.len()))
}

fn criterion_6() -> Outcome {
    let sl = sturm_liouville_1d(&Coefficients1D::laplacian(16)).unwrap();
    let cd = cd1d(16);
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, m) in [("sl1d", &sl), ("cd1d", &cd)] {
        match completeness(m) {
            Ok((d, g, k)) => {
                pass &= d < PENCIL_MATCH_TOL && g < OVERLAP_TOL;
                parts.push(format!("{name}: {k} roots, match {d:.1e}, 1-overlap {g:.1e}"));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("{name}: {e}"));
            }
        }
    }
    outcome(pass, format!("{}; tol {PENCIL_MATCH_TOL:e} / {OVERLAP_TOL:e}", parts.join("; ")))
}

fn criterion_7() -> Outcome {
    let cd = cd1d(32);
    let z = c64(1.0, 1.0);
    let mut pairs: Vec<BoundaryParameter> = default_thetas().into_iter().map(|t| BoundaryParameter::scalar(t, 2)).collect();
    let b = ComplexMatrix::from_row_slice(2, 2, &[c64(0.5, 0.2), c64(-1.0, 0.3), c64(0.1, 0.0), c64(2.0, -1.0)]);
    pairs.push(BoundaryParameter::single(b, "matrix").unwrap());
    let dual = worst(pairs.iter().map(|p| {
        let pt = p.adjoint(cd.space_g()).map_err(|e| e.to_string())?;
        adjoint_duality_check(&cd, p, &pt, z).map(|d| d.defect).map_err(|e| e.to_string())
    }));

    let sl = sturm_liouville_1d(&Coefficients1D::laplacian(16)).unwrap();
    let h = ComplexMatrix::from_row_slice(2, 2, &[c64(1.0, 0.0), c64(0.3, 0.4), c64(0.3, -0.4), c64(0.5, 0.0)]);
    let herm = BoundaryParameter::single(h, "hermitian").unwrap();
    let sa = adjoint_duality_check(&sl, &herm, &herm, z).map(|d| d.defect).map_err(|e| e.to_string());
    let region = Region::new(-20.0, 120.0, -2.0, 2.0).unwrap();
    let real = eigenvalue_search(&sl, &herm, region, &SearchOptions::default())
        .map(|r| (r.roots.iter().map(|x| x.lambda[1].abs() / x.value().norm().max(1.0)).fold(0.0, f64::max), r.roots.len()))
        .map_err(|e| e.to_string());
    match (dual, sa, real) {
        (Ok(d), Ok(s), Ok((im, k))) => outcome(
            d < DUALITY_TOL && s < SELF_ADJOINT_TOL && im < REAL_TOL && k > 0,
            format!(
                "cd1d duality {d:.2e} (tol {DUALITY_TOL:e}); sl1d self-adjoint {s:.2e} (tol {SELF_ADJOINT_TOL:e}); {k} roots, max |Im| {im:.1e} (tol {REAL_TOL:e})"
            ),
        ),
        (d, s, r) => outcome(false, format!("{d:?} {s:?} {r:?}")),
    }
}

fn criterion_8(models: &[(String, TripleModel)]) -> Outcome {
    let mut pass = true;
    let mut psd: f64 = 0.0;
    let mut conj: f64 = 0.0;
    let mut count = 0;
    for (name, m) in models.iter().filter(|(_, m)| m.is_symmetric()) {
        let report = match symmetric_suite(m, &default_probes()) {
            Ok(r) => r,
            Err(e) => return outcome(false, format!("{name}: {e}")),
        };
        count += 1;
        for e in &report.entries {
            let d = e.defect.unwrap_or(f64::INFINITY);
            if e.name.starts_with("weyl imaginary part positive") {
                psd = psd.max(d);
                pass &= d <= PSD_TOL;
            } else if e.name.starts_with("weyl conjugate symmetry") {
                conj = conj.max(d);
                pass &= d < CONJUGATE_TOL;
            }
        }
    }
    outcome(
        pass && count > 0,
        format!("{count} symmetric models; negative part of Im M/Im λ {psd:.1e} (tol {PSD_TOL:e}); M(λ̄) vs M(λ)* {conj:.2e} (tol {CONJUGATE_TOL:e})"),
    )
}

fn orders(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

fn criterion_9() -> Outcome {
    let ns = [16, 32, 64, 128];
    let lam = c64(-1.0, 0.0);
    let exact = analytic_dtn_1d(lam).unwrap();
    let mut dtn = Vec::new();
    let mut eig = Vec::new();
    for &n in &ns {
        let m = sturm_liouville_1d(&Coefficients1D::laplacian(n)).unwrap();
        let w = gamma(&m, lam).unwrap().weyl;
        dtn.push(norm(&(w - &exact)) / norm(&exact));
        let (a, e) = dirichlet_pencil(&m, Side::Plain);
        let low = pencil_eigenvalues(&a, &e).unwrap().finite.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
        eig.push((low - std::f64::consts::PI.powi(2)).abs());
    }
    let (od, oe) = (orders(&dtn), orders(&eig));
    let min = od.iter().chain(&oe).copied().fold(f64::INFINITY, f64::min);
    outcome(
        min >= MIN_ORDER,
        format!(
            "DtN errors {:.1e}..{:.1e} orders {:?}; eigenvalue errors {:.1e}..{:.1e} orders {:?}; min {min:.2} (need {MIN_ORDER})",
            dtn[0],
            dtn[3],
            od.iter().map(|o| (o * 100.0).round() / 100.0).collect::<Vec<_>>(),
            eig[0],
            eig[3],
            oe.iter().map(|o| (o * 100.0).round() / 100.0).collect::<Vec<_>>()
        ),
    )
}

fn criterion_10() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_btriple");
    let run = || {
        Command::new(bin)
            .args(["verify", "--model", "cd1d N=16", "--no-timestamp"])
            .output()
            .expect("btriple runs")
    };
    let (a, b) = (run(), run());
    let same = a.stdout == b.stdout && !a.stdout.is_empty();
    outcome(
        same && a.status.code() == Some(0),
        format!("{} bytes, identical = {same}, exit {:?}", a.stdout.len(), a.status.code()),
    )
}

type Check<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() -> ExitCode {
    let start = Instant::now();
    let models = builtin_models();
    let checks: Vec<Check<'_>> = vec![
        ("Green exactness", Box::new(|| criterion_1(&models))),
        ("maximality certificate", Box::new(|| criterion_2(&models))),
        ("gamma-field identities", Box::new(|| criterion_3(&models))),
        ("Weyl identities", Box::new(|| criterion_4(&models))),
        ("Krein formula vs direct solve", Box::new(|| criterion_5(&models))),
        ("Birman-Schwinger completeness", Box::new(criterion_6)),
        ("duality and self-adjointness", Box::new(criterion_7)),
        ("symmetric suite", Box::new(|| criterion_8(&models))),
        ("continuum convergence", Box::new(criterion_9)),
        ("determinism", Box::new(criterion_10)),
    ];
    let mut failed = 0;
    for (k, (name, check)) in checks.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!("criterion {:>2} {:<32} {}  {}", k + 1, name, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} of {} passed in {:.1} s", checks.len() - failed, checks.len(), start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
