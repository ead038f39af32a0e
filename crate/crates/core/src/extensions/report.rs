//! Verification suites collecting every identity check into one report.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::duality::adjoint_duality_check;
use super::krein::{bs_test, krein_resolvent_matrix};
use super::param::BoundaryParameter;
use super::robin::{restricted_solve, resolvent_identity_check, robin_pencil};
use super::search::{eigenvalue_search, Region, SearchOptions};
use crate::error::{Error, Result};
use crate::numcore::{
    hermitian_eigenvalues, identity, norm, pencil_eigenvalues, pencil_eigenvector, weighted_adjoint, ComplexMatrix,
    PencilSpectrum, DEFAULT_RANK_TOL,
};
use crate::triple::{
    check_density, check_maximality, dirichlet_pencil, gamma, gamma_shift_check, gamma_star_check, green_defect,
    minimal_operators, weyl_identity_check, weyl_representation_check, DensityReport, IdentityDefect,
    MaximalityCertificate, Side, Stacked, TripleModel, GREEN_TOL,
};

pub const REPORT_VERSION: u32 = 1;

/// One checked identity.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ReportEntry {
    pub name: String,
    /// The identity or condition being checked, as a formula.
    pub anchor: String,
    pub defect: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    pub detail: String,
}

impl ReportEntry {
    fn measured(name: impl Into<String>, anchor: &str, defect: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        ReportEntry {
            name: name.into(),
            anchor: anchor.into(),
            defect: Some(defect),
            tolerance,
            pass: defect <= tolerance,
            detail: detail.into(),
        }
    }

    fn failed(name: impl Into<String>, anchor: &str, tolerance: f64, err: &Error) -> Self {
        ReportEntry {
            name: name.into(),
            anchor: anchor.into(),
            defect: None,
            tolerance,
            pass: false,
            detail: format!("{}: {err}", err.reason()),
        }
    }

    fn skipped(name: impl Into<String>, anchor: &str, tolerance: f64, why: impl Into<String>) -> Self {
        ReportEntry {
            name: name.into(),
            anchor: anchor.into(),
            defect: None,
            tolerance,
            pass: true,
            detail: format!("skipped: {}", why.into()),
        }
    }

    fn from_result(name: impl Into<String>, anchor: &str, tolerance: f64, r: Result<f64>, detail: impl Into<String>) -> Self {
        match r {
            Ok(d) => Self::measured(name, anchor, d, tolerance, detail),
            Err(e) => Self::failed(name, anchor, tolerance, &e),
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ModelDescriptor {
    pub kind: String,
    pub n: usize,
    pub m: usize,
    pub dim_d: usize,
    pub dim_dt: usize,
    pub symmetric: bool,
    pub green_defect: f64,
}

impl From<&TripleModel> for ModelDescriptor {
    fn from(model: &TripleModel) -> Self {
        ModelDescriptor {
            kind: model.kind().to_string(),
            n: model.n(),
            m: model.m(),
            dim_d: model.dim_d(),
            dim_dt: model.dim_dt(),
            symmetric: model.is_symmetric(),
            green_defect: model.metadata().green_defect,
        }
    }
}

#[derive(Clone, Debug, Serialize, Default)]
pub struct Certificates {
    pub lambda0: Option<[f64; 2]>,
    pub maximality: Option<MaximalityCertificate>,
    pub density: Option<DensityReport>,
    pub probes_used: Vec<[f64; 2]>,
    pub probes_flagged: Vec<[f64; 2]>,
    /// Condition number of the Dirichlet stack at each used probe.
    pub stack_conditions: Vec<f64>,
    pub thetas: Vec<[f64; 2]>,
    pub search_region: Option<Region>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub version: u32,
    pub suite: String,
    pub model: ModelDescriptor,
    pub entries: Vec<ReportEntry>,
    pub certificates: Certificates,
    pub pass: bool,
    /// Seconds since the Unix epoch; `None` for reproducible output.
    pub generated_at: Option<u64>,
}

impl VerificationReport {
    fn new(suite: &str, model: &TripleModel, entries: Vec<ReportEntry>, certificates: Certificates) -> Self {
        let pass = entries.iter().all(|e| e.pass);
        VerificationReport {
            version: REPORT_VERSION,
            suite: suite.into(),
            model: model.into(),
            entries,
            certificates,
            pass,
            generated_at: None,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }

    pub fn entry(&self, name: &str) -> Option<&ReportEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

/// Tolerances of the full suite.
#[derive(Clone, Copy, Debug, Serialize, serde::Deserialize)]
pub struct Tolerances {
    pub green: f64,
    /// γ-field and Weyl identities.
    pub identity: f64,
    pub krein: f64,
    pub duality: f64,
    pub self_adjoint: f64,
    pub pairing: f64,
    pub preimage: f64,
    pub conjugate_spectrum: f64,
    pub weyl_conjugate: f64,
    pub psd: f64,
    pub pencil_match: f64,
    pub overlap: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            green: GREEN_TOL,
            identity: 1e-10,
            krein: 1e-9,
            duality: 1e-9,
            self_adjoint: 1e-10,
            pairing: 1e-11,
            preimage: 1e-11,
            conjugate_spectrum: 1e-8,
            weyl_conjugate: 1e-11,
            psd: 1e-12,
            pencil_match: 1e-7,
            overlap: 1e-8,
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub probes: Vec<Complex64>,
    pub thetas: Vec<Complex64>,
    /// Probes closer than this to the spectrum of `A0` (or its conjugate) are not used.
    pub margin: f64,
    /// Run the Birman–Schwinger completeness check when `n + m` is at most this.
    pub completeness_limit: usize,
    pub tolerances: Tolerances,
}

/// The standard probe points `{-1, 2i, 1+i, -3-i, 0.5i}`.
pub fn default_probes() -> Vec<Complex64> {
    vec![
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, 2.0),
        Complex64::new(1.0, 1.0),
        Complex64::new(-3.0, -1.0),
        Complex64::new(0.0, 0.5),
    ]
}

/// Robin parameters `θ ∈ {0.3, 1, 1+i}`.
pub fn default_thetas() -> Vec<Complex64> {
    vec![Complex64::new(0.3, 0.0), Complex64::new(1.0, 0.0), Complex64::new(1.0, 1.0)]
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            probes: default_probes(),
            thetas: default_thetas(),
            margin: 1e-3,
            completeness_limit: 40,
            tolerances: Tolerances::default(),
        }
    }
}

fn fmt_z(z: Complex64) -> String {
    if z.im >= 0.0 {
        format!("{}+{}i", z.re, z.im)
    } else {
        format!("{}-{}i", z.re, -z.im)
    }
}

/// Splits probes into usable points and points too close to `σ(A0)` or `σ(Ã0)`.
fn filter_probes(model: &TripleModel, a0: &PencilSpectrum, probes: &[Complex64], margin: f64) -> (Vec<(Complex64, f64)>, Vec<Complex64>) {
    let mut used = Vec::new();
    let mut flagged = Vec::new();
    for &z in probes {
        let far = a0.distance(z) >= margin && a0.distance(z.conj()) >= margin;
        let plain = Stacked::dirichlet(model.side(Side::Plain), z);
        let tilde_ok = [z, z.conj()]
            .iter()
            .all(|&w| Stacked::dirichlet(model.side(Side::Tilde), w).is_ok());
        let plain_conj = Stacked::dirichlet(model.side(Side::Plain), z.conj()).is_ok();
        match plain {
            Ok(s) if far && tilde_ok && plain_conj => used.push((z, s.condition())),
            _ => flagged.push(z),
        }
    }
    (used, flagged)
}

fn a0_spectrum(model: &TripleModel) -> Result<PencilSpectrum> {
    let (a, e) = dirichlet_pencil(model, Side::Plain);
    pencil_eigenvalues(&a, &e)
}

/// Greedy pairwise matching distance between two eigenvalue lists, relative to `max(1, |λ|)`.
fn spectrum_mismatch(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut free: Vec<bool> = vec![true; b.len()];
    let mut worst: f64 = 0.0;
    for &x in a {
        let best = b
            .iter()
            .enumerate()
            .filter(|(j, _)| free[*j])
            .min_by(|(_, u), (_, v)| (*u - x).norm().total_cmp(&(*v - x).norm()));
        match best {
            Some((j, &y)) => {
                free[j] = false;
                worst = worst.max((y - x).norm() / x.norm().max(1.0));
            }
            None => return f64::INFINITY,
        }
    }
    worst
}

/// Per-probe γ-field and Weyl checks.
fn probe_entries(model: &TripleModel, z: Complex64, next: Complex64, lambda0: Option<Complex64>, tol: &Tolerances) -> Vec<ReportEntry> {
    let at = fmt_z(z);
    let mut out = Vec::new();
    let preimage = gamma(model, z).map(|s| {
        let v = model.side(Side::Plain);
        let bc = norm(&(v.g0 * &s.preimage - identity(model.m())));
        let op = norm(&(v.op * &s.preimage - v.embed * &s.preimage * z));
        let scale = norm(v.op).max(1.0) * norm(&s.preimage).max(1.0);
        bc.max(op / scale)
    });
    out.push(ReportEntry::from_result(
        format!("gamma preimage at {at}"),
        "Γ0 f_j = e_j and (T - λι) f_j = 0 for the columns of γ(λ)",
        tol.preimage,
        preimage,
        "",
    ));
    out.push(ReportEntry::from_result(
        format!("gamma adjoint at {at}"),
        "γ(λ)* = Γ̃1 (Ã0 - λ̄)^{-1} and γ̃(λ)* = Γ1 (A0 - λ̄)^{-1}",
        tol.identity,
        gamma_star_check(model, z).map(|d| d.worst()),
        "",
    ));
    out.push(ReportEntry::from_result(
        format!("gamma shift at {at}"),
        "γ(λ) = (I + (λ - ν)(A0 - λ)^{-1}) γ(ν)",
        tol.identity,
        gamma_shift_check(model, z, next).map(|d| d.worst()),
        format!("ν = {}", fmt_z(next)),
    ));
    out.push(ReportEntry::from_result(
        format!("weyl identity at {at}"),
        "M(λ) - M̃(μ)* = (λ - μ̄) γ̃(μ)* γ(λ) and M(λ)* - M̃(μ) = (λ̄ - μ) γ(λ)* γ̃(μ)",
        tol.identity,
        weyl_identity_check(model, z, next).map(|d| d.worst()),
        format!("μ = {}", fmt_z(next)),
    ));
    out.push(ReportEntry::from_result(
        format!("weyl conjugate pairing at {at}"),
        "M(λ) = M̃(λ̄)*",
        tol.identity,
        weyl_identity_check(model, z, z.conj()).map(|d| d.d1.relative),
        "",
    ));
    match lambda0 {
        Some(l0) => out.push(ReportEntry::from_result(
            format!("weyl representation at {at}"),
            "M(λ) = M̃(λ0)* + γ̃(λ0)* (λ - λ̄0)(I + (λ - λ0)(A0 - λ)^{-1}) γ(λ0)",
            tol.identity,
            weyl_representation_check(model, z, l0).map(|d| d.worst()),
            format!("λ0 = {}", fmt_z(l0)),
        )),
        None => out.push(ReportEntry {
            name: format!("weyl representation at {at}"),
            anchor: "M(λ) = M̃(λ0)* + γ̃(λ0)* (λ - λ̄0)(I + (λ - λ0)(A0 - λ)^{-1}) γ(λ0)".into(),
            defect: None,
            tolerance: tol.identity,
            pass: false,
            detail: "no certified λ0".into(),
        }),
    }
    out
}

fn krein_entry(model: &TripleModel, theta: Complex64, z: Complex64, tol: f64) -> ReportEntry {
    let name = format!("krein vs direct theta={} at {}", fmt_z(theta), fmt_z(z));
    let anchor = "(A_{B1B2} - λ)^{-1} = (A0 - λ)^{-1} + γ(λ) B1 (I - B2 M(λ) B1)^{-1} B2 γ̃(λ̄)*";
    let p = BoundaryParameter::scalar(theta, model.m());
    let direct = restricted_solve(model, Side::Plain, &p, z, &identity(model.n()));
    let krein = krein_resolvent_matrix(model, &p, z);
    match (direct, krein) {
        (Ok(d), Ok(k)) => {
            let mut worst: f64 = 0.0;
            for j in 0..d.u.ncols() {
                let dc = d.u.column(j);
                let diff = (k.column(j) - dc).norm();
                worst = worst.max(diff / dc.norm().max(f64::MIN_POSITIVE));
            }
            let mut e = ReportEntry::measured(name, anchor, worst, tol, format!("boundary residual {:.2e}", d.boundary_residual));
            e.pass &= d.boundary_residual <= 1e-10;
            e
        }
        (Err(Error::RestrictedSingular { .. }), Err(Error::BirmanSchwinger { .. })) => {
            ReportEntry::skipped(name, anchor, tol, "λ is an eigenvalue of A_{B1B2}; both paths refuse")
        }
        (Err(e), _) | (_, Err(e)) => ReportEntry::failed(name, anchor, tol, &e),
    }
}

/// H-inner-product overlap `|(u, v)| / (‖u‖ ‖v‖)`.
fn overlap(model: &TripleModel, u: &ComplexMatrix, v: &ComplexMatrix) -> f64 {
    let h = model.space_h();
    h.inner(u, v).norm() / (h.vec_norm(u) * h.vec_norm(v))
}

/// Birman–Schwinger roots against the Robin pencil, `θ = 1`, around the lowest five eigenvalues.
fn completeness_entries(model: &TripleModel, tol: &Tolerances, certs: &mut Certificates) -> Vec<ReportEntry> {
    let anchor = "λ ∈ σ_p(A_{B1B2}) ⟺ ker(I - B2 M(λ) B1) ≠ {0}, eigenvectors γ(λ) B1 φ";
    let name = "birman-schwinger completeness";
    let param = BoundaryParameter::scalar(Complex64::new(1.0, 0.0), model.m());
    let mut run = || -> Result<(ReportEntry, ReportEntry)> {
        let (ra, re) = robin_pencil(model, Side::Plain, &param)?;
        let robin = pencil_eigenvalues(&ra, &re)?;
        let mut lowest = robin.finite.clone();
        lowest.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
        lowest.truncate(5);
        if lowest.is_empty() {
            return Ok((
                ReportEntry::skipped(name, anchor, tol.pencil_match, "Robin pencil has no finite eigenvalues"),
                ReportEntry::skipped("birman-schwinger eigenvectors", anchor, tol.overlap, "no eigenvalues"),
            ));
        }
        let spread = lowest.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let region = Region::around(&lowest, 0.5_f64.max(0.05 * spread))?;
        certs.search_region = Some(region);
        let found = eigenvalue_search(model, &param, region, &SearchOptions::default())?;
        let worst = found.roots.iter().map(|r| r.pencil_distance).fold(0.0, f64::max);
        let mut e1 = ReportEntry::measured(
            name,
            anchor,
            worst,
            tol.pencil_match,
            format!(
                "{} root(s), {} pencil eigenvalue(s) in region, {} unmatched",
                found.roots.len(),
                found.pencil_in_region.len(),
                found.unmatched_pencil.len()
            ),
        );
        e1.pass &= found.complete() && !found.roots.is_empty();
        let mut worst_overlap: f64 = 0.0;
        let mut worst_residual: f64 = 0.0;
        for r in &found.roots {
            let bs = bs_test(model, &param, r.value(), 1e-8)?;
            worst_residual = worst_residual.max(bs.operator_residual).max(bs.boundary_residual);
            if bs.kernel_dim == 1 {
                let target = robin.nearest(r.value()).unwrap_or(r.value());
                let v = model.embed() * pencil_eigenvector(&ra, &re, target);
                let u = bs.eigenvectors.columns(0, 1).into_owned();
                let v = ComplexMatrix::from_column_slice(v.nrows(), 1, v.as_slice());
                worst_overlap = worst_overlap.max(1.0 - overlap(model, &u, &v));
            }
        }
        let mut e2 = ReportEntry::measured(
            "birman-schwinger eigenvectors",
            anchor,
            worst_overlap,
            tol.overlap,
            format!("1 - overlap with pencil eigenvectors; worst residual {worst_residual:.2e}"),
        );
        e2.pass &= worst_residual <= 1e-9;
        Ok((e1, e2))
    };
    match run() {
        Ok((a, b)) => vec![a, b],
        Err(e) => vec![ReportEntry::failed(name, anchor, tol.pencil_match, &e)],
    }
}

/// Checks that only make sense for a symmetric model (`T̃ = T`, `Γ̃ = Γ`).
fn symmetric_entries(model: &TripleModel, probes: &[(Complex64, f64)], tol: &Tolerances) -> Vec<ReportEntry> {
    let g = model.space_g();
    let h = model.space_h();
    let per_probe: Vec<Vec<ReportEntry>> = probes
        .par_iter()
        .map(|&(z, _)| {
            let at = fmt_z(z);
            let mut out = Vec::new();
            let pair = gamma(model, z).and_then(|s| Ok((gamma(model, z.conj())?, s)));
            let (sc, s) = match pair {
                Ok(p) => p,
                Err(e) => {
                    out.push(ReportEntry::failed(format!("symmetric weyl at {at}"), "M(λ̄) = M(λ)*", tol.weyl_conjugate, &e));
                    return out;
                }
            };
            let m_star = weighted_adjoint(&s.weyl, g, g).expect("square");
            let d = IdentityDefect::of(&sc.weyl, &m_star);
            out.push(ReportEntry::measured(format!("weyl conjugate symmetry at {at}"), "M(λ̄) = M(λ)*", d.relative, tol.weyl_conjugate, ""));
            let im_m = (&s.weyl - &m_star) * Complex64::new(0.0, -0.5);
            if z.im != 0.0 {
                let gs = weighted_adjoint(&s.gamma, h, g).expect("shape");
                let rhs = (&gs * &s.gamma) * Complex64::new(z.im, 0.0);
                let d = IdentityDefect::of(&im_m, &rhs);
                out.push(ReportEntry::measured(
                    format!("imaginary part of weyl at {at}"),
                    "Im M(λ) = Im λ · γ(λ)* γ(λ)",
                    d.relative,
                    tol.identity,
                    "",
                ));
                let x = g.to_orthonormal_frame(&(&im_m / Complex64::new(z.im, 0.0)));
                let ev = hermitian_eigenvalues(&x);
                let min = ev.first().copied().unwrap_or(0.0);
                let scale = norm(&x).max(1.0);
                out.push(ReportEntry::measured(
                    format!("weyl imaginary part positive at {at}"),
                    "Im M(λ) / Im λ ≥ 0",
                    (-min / scale).max(0.0),
                    tol.psd,
                    format!("smallest eigenvalue {min:.6e}"),
                ));
            } else {
                let d = norm(&im_m) / norm(&s.weyl).max(f64::MIN_POSITIVE);
                out.push(ReportEntry::measured(format!("weyl hermitian at {at}"), "M(λ) = M(λ)* for real λ", d, tol.psd, ""));
            }
            out.push(ReportEntry::from_result(
                format!("symmetric gamma adjoint at {at}"),
                "γ(λ)* = Γ1 (A0 - λ̄)^{-1}",
                tol.identity,
                gamma_star_check(model, z).map(|d| d.plain.relative),
                "",
            ));
            out
        })
        .collect();
    let mut out: Vec<ReportEntry> = per_probe.into_iter().flatten().collect();

    let witness = probes.iter().map(|p| p.0).find(|z| z.im != 0.0);
    for theta in [0.3, 1.0] {
        let p = BoundaryParameter::scalar(Complex64::new(theta, 0.0), model.m());
        let name = format!("self-adjoint robin theta={theta}");
        let anchor = "A_B = A_B* for B = B*";
        match witness {
            Some(z) => out.push(ReportEntry::from_result(
                name,
                anchor,
                tol.self_adjoint,
                adjoint_duality_check(model, &p, &p, z).map(|d| d.defect),
                format!("at {}", fmt_z(z)),
            )),
            None => out.push(ReportEntry::skipped(name, anchor, tol.self_adjoint, "no non-real probe")),
        }
    }
    let p = BoundaryParameter::scalar(Complex64::new(1.0, 0.0), model.m());
    let real_spectrum = robin_pencil(model, Side::Plain, &p)
        .and_then(|(a, e)| pencil_eigenvalues(&a, &e))
        .map(|s| s.finite.iter().map(|z| z.im.abs() / z.norm().max(1.0)).fold(0.0, f64::max));
    out.push(ReportEntry::from_result(
        "real robin spectrum theta=1",
        "σ(A_B) ⊂ ℝ for B = B*",
        tol.conjugate_spectrum,
        real_spectrum,
        "max |Im λ| / max(1, |λ|) over the Robin pencil",
    ));
    out
}

/// Appendix-style checks for a symmetric model. Refuses non-symmetric models.
pub fn symmetric_suite(model: &TripleModel, probes: &[Complex64]) -> Result<VerificationReport> {
    if !model.is_symmetric() {
        return Err(Error::Contract(format!("model '{}' is not flagged symmetric", model.kind())));
    }
    let tol = Tolerances::default();
    let a0 = a0_spectrum(model)?;
    let (used, flagged) = filter_probes(model, &a0, probes, 1e-3);
    let entries = symmetric_entries(model, &used, &tol);
    let certs = Certificates {
        lambda0: model.lambda0().map(|z| [z.re, z.im]),
        probes_used: used.iter().map(|(z, _)| [z.re, z.im]).collect(),
        probes_flagged: flagged.iter().map(|z| [z.re, z.im]).collect(),
        stack_conditions: used.iter().map(|(_, c)| *c).collect(),
        ..Default::default()
    };
    Ok(VerificationReport::new("symmetric", model, entries, certs))
}

/// The full suite: Green, density, maximality, γ and Weyl identities, Krein against
/// direct solves, resolvent identity, duality, Birman–Schwinger completeness on small
/// models and the symmetric checks when the model is symmetric.
pub fn verify_model(model: &TripleModel, opts: &VerifyOptions) -> VerificationReport {
    let tol = &opts.tolerances;
    let mut certs = Certificates {
        thetas: opts.thetas.iter().map(|z| [z.re, z.im]).collect(),
        ..Default::default()
    };
    let mut entries = Vec::new();

    entries.push(ReportEntry::measured(
        "green identity",
        "ι̃^H W_H T - T̃^H W_H ι = Γ̃0^H W_G Γ1 - Γ̃1^H W_G Γ0",
        green_defect(model),
        tol.green,
        "",
    ));

    let density = check_density(model, DEFAULT_RANK_TOL);
    let m = model.m();
    entries.push(ReportEntry::measured(
        "condition D",
        "rank Γ0 = rank Γ̃0 = m",
        (2 * m - density.rank_g0.min(m) - density.rank_g0t.min(m)) as f64,
        0.0,
        format!("rank Γ0 = {}, rank Γ̃0 = {}, m = {m}", density.rank_g0, density.rank_g0t),
    ));
    entries.push(ReportEntry::measured(
        "condition DD",
        "rank [Γ0; Γ1] = rank [Γ̃0; Γ̃1] = 2m, implied by condition D",
        if density.condition_d && !density.condition_dd { 1.0 } else { 0.0 },
        0.0,
        format!(
            "stacked ranks {} and {}; ordinary = {}",
            density.rank_stack, density.rank_stack_t, density.ordinary
        ),
    ));
    certs.density = Some(density);

    let lambda0 = model
        .lambda0()
        .filter(|&z| check_maximality(model, z).ok)
        .or_else(|| super::super::models::certify_lambda0(model, crate::models::default_lambda0_candidates()).map(|c| Complex64::new(c.lambda0[0], c.lambda0[1])));
    let cert = check_maximality(model, lambda0.unwrap_or(Complex64::new(-1.0, 0.0)));
    let mut max_entry = ReportEntry::measured(
        "maximality",
        "Ã0 = A0* with λ0 ∈ ρ(A0) and λ̄0 ∈ ρ(Ã0)",
        cert.defect_adjoint,
        super::super::triple::MAXIMALITY_TOL,
        format!(
            "λ0 = {}+{}i, rcond {:.2e} / {:.2e}",
            cert.lambda0[0], cert.lambda0[1], cert.rcond_plain, cert.rcond_tilde
        ),
    );
    max_entry.pass &= cert.ok;
    entries.push(max_entry);
    certs.lambda0 = lambda0.map(|z| [z.re, z.im]);
    certs.maximality = Some(cert);

    entries.push(ReportEntry::measured(
        "minimal operators pairing",
        "(S f, g) = (f, S̃ g) on ker Γ̃0 ∩ ker Γ̃1 and ker Γ0 ∩ ker Γ1",
        minimal_operators(model, DEFAULT_RANK_TOL).pairing_defect,
        tol.pairing,
        "",
    ));

    let a0 = match a0_spectrum(model) {
        Ok(s) => s,
        Err(e) => {
            entries.push(ReportEntry::failed("dirichlet spectrum", "det([T; Γ0] - λ[ι; 0]) = 0", 0.0, &e));
            return VerificationReport::new("full", model, entries, certs);
        }
    };
    let conj = {
        let (a, e) = dirichlet_pencil(model, Side::Tilde);
        pencil_eigenvalues(&a, &e).map(|s| s.finite.iter().map(|z| z.conj()).collect::<Vec<_>>())
    };
    entries.push(ReportEntry::from_result(
        "tilde spectrum is conjugate",
        "σ(Ã0) = conj σ(A0)",
        tol.conjugate_spectrum,
        conj.map(|c| spectrum_mismatch(&a0.finite, &c)),
        format!("{} finite eigenvalue(s)", a0.finite.len()),
    ));

    let (used, flagged) = filter_probes(model, &a0, &opts.probes, opts.margin);
    certs.probes_used = used.iter().map(|(z, _)| [z.re, z.im]).collect();
    certs.probes_flagged = flagged.iter().map(|z| [z.re, z.im]).collect();
    certs.stack_conditions = used.iter().map(|(_, c)| *c).collect();
    if used.is_empty() {
        entries.push(ReportEntry {
            name: "probe points".into(),
            anchor: "λ ∈ ρ(A0) ∩ conj ρ(Ã0)".into(),
            defect: None,
            tolerance: opts.margin,
            pass: false,
            detail: "every probe lies too close to the spectrum".into(),
        });
        return VerificationReport::new("full", model, entries, certs);
    }

    let k = used.len();
    let per_probe: Vec<Vec<ReportEntry>> = (0..k)
        .into_par_iter()
        .map(|i| {
            let z = used[i].0;
            let next = used[(i + 1) % k].0;
            let mut out = probe_entries(model, z, next, lambda0, tol);
            for &theta in &opts.thetas {
                out.push(krein_entry(model, theta, z, tol.krein));
            }
            out
        })
        .collect();
    entries.extend(per_probe.into_iter().flatten());

    if let Some(&theta) = opts.thetas.first() {
        let p = BoundaryParameter::scalar(theta, m);
        let (z, nu) = (used[0].0, used[(1) % k].0);
        let name = format!("robin resolvent identity theta={}", fmt_z(theta));
        let anchor = "R(λ) - R(ν) = (λ - ν) R(λ) R(ν)";
        if k < 2 {
            entries.push(ReportEntry::skipped(name, anchor, tol.krein, "needs two probes"));
        } else {
            entries.push(ReportEntry::from_result(name, anchor, tol.krein, resolvent_identity_check(model, &p, z, nu), ""));
        }
    }

    let z = used[0].0;
    for &theta in &opts.thetas {
        let p = BoundaryParameter::scalar(theta, m);
        let name = format!("adjoint duality theta={}", fmt_z(theta));
        let anchor = "A_{B1B2} = (Ã_{B1'B2'})* for B1'B2' = (B1B2)*";
        let r = p
            .adjoint(model.space_g())
            .and_then(|pt| adjoint_duality_check(model, &p, &pt, z))
            .map(|d| d.defect);
        entries.push(ReportEntry::from_result(name, anchor, tol.duality, r, format!("at {}", fmt_z(z))));
    }

    if model.n() + m <= opts.completeness_limit {
        entries.extend(completeness_entries(model, tol, &mut certs));
    }

    if model.is_symmetric() {
        entries.extend(symmetric_entries(model, &used, tol));
    }

    VerificationReport::new("full", model, entries, certs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{convection_diffusion_1d, sturm_liouville_1d, Coefficients1D};
    use crate::numcore::c64;

    #[test]
    fn symmetric_suite_passes_on_sturm_liouville() {
        let model = sturm_liouville_1d(&Coefficients1D::new(10, |x| 1.0 + x * x, |x| x)).unwrap();
        let r = symmetric_suite(&model, &default_probes()).unwrap();
        assert!(r.pass, "{:?}", r.failures().collect::<Vec<_>>());
        assert!(r.entries.iter().any(|e| e.name.starts_with("weyl imaginary part positive")));
    }

    #[test]
    fn symmetric_suite_refuses_convection() {
        let model = convection_diffusion_1d(&Coefficients1D::laplacian(8).with_convection(|_| 1.0)).unwrap();
        assert!(matches!(symmetric_suite(&model, &default_probes()), Err(Error::Contract(_))));
    }

    #[test]
    fn probes_on_the_spectrum_are_flagged() {
        let model = sturm_liouville_1d(&Coefficients1D::laplacian(8)).unwrap();
        let a0 = a0_spectrum(&model).unwrap();
        let opts = VerifyOptions {
            probes: vec![a0.finite[0], c64(0.0, 1.0), c64(-1.0, 0.0)],
            ..Default::default()
        };
        let r = verify_model(&model, &opts);
        assert_eq!(r.certificates.probes_flagged.len(), 1);
        assert!(r.pass, "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn spectrum_mismatch_pairs_greedily() {
        let a = [c64(1.0, 0.0), c64(2.0, 1.0)];
        let b = [c64(2.0, 1.0), c64(1.0, 1e-9)];
        assert!(spectrum_mismatch(&a, &b) < 2e-9);
        assert!(spectrum_mismatch(&a, &b[..1]).is_infinite());
    }
}
