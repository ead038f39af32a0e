//! Birman–Schwinger test and the Krein-type resolvent formula
//! `(A_{B1B2} - λ)^{-1} = (A0 - λ)^{-1} + γ(λ) B1 (I - B2 M(λ) B1)^{-1} B2 γ̃(λ̄)*`.

use num_complex::Complex64;
use serde::Serialize;

use super::param::BoundaryParameter;
use super::robin::boundary_residual;
use crate::error::{Error, Result};
use crate::numcore::{eigenvalues, identity, norm, null_basis_below, rank, singular_values, ComplexMatrix, LuSolver, DEFAULT_RANK_TOL};
use crate::triple::{Side, Stacked, TripleModel, RESOLVENT_MIN_RCOND};

/// Data at one point: `γ(λ)` preimages, `M(λ)` and `K = I - B2 M(λ) B1`.
fn norm2(a: &ComplexMatrix) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

struct BsData {
    stacked: Stacked,
    preimage: ComplexMatrix,
    weyl: ComplexMatrix,
    k: ComplexMatrix,
}

fn bs_data(model: &TripleModel, param: &BoundaryParameter, lambda: Complex64) -> Result<BsData> {
    param.check_dim(model.m())?;
    let view = model.side(Side::Plain);
    let stacked = Stacked::dirichlet(view, lambda)?;
    let preimage = stacked.solve_boundary(&identity(model.m()))?;
    let weyl = view.g1 * &preimage;
    let k = identity(model.m()) - &param.b2 * &weyl * &param.b1;
    Ok(BsData {
        stacked,
        preimage,
        weyl,
        k,
    })
}

/// `I - B2 M(λ) B1`.
pub fn birman_schwinger_matrix(model: &TripleModel, param: &BoundaryParameter, lambda: Complex64) -> Result<ComplexMatrix> {
    Ok(bs_data(model, param, lambda)?.k)
}

/// `det(I - B2 M(λ) B1)`.
pub fn bs_determinant(model: &TripleModel, param: &BoundaryParameter, lambda: Complex64) -> Result<Complex64> {
    let k = birman_schwinger_matrix(model, param, lambda)?;
    Ok(LuSolver::new(k)?.determinant())
}

#[derive(Clone, Debug)]
pub struct BsResult {
    pub lambda: Complex64,
    pub is_eigenvalue: bool,
    pub kernel_dim: usize,
    /// Eigenvectors `f = γ(λ) B1 φ` in `H`, normalized in the `W_H` norm (columns).
    pub eigenvectors: ComplexMatrix,
    /// Their carrier preimages.
    pub carrier: ComplexMatrix,
    /// Smallest singular value of `K = I - B2 M(λ) B1` relative to `max(1, ‖B2 M B1‖, ‖K‖)`.
    pub sigma_min: f64,
    /// `‖(T - λι) f‖ / (‖T‖ ‖f‖)`, worst over the kernel.
    pub operator_residual: f64,
    /// Residual of `B1 B2 Γ1 f = Γ0 f`, worst over the kernel.
    pub boundary_residual: f64,
    /// Both residuals at most `1e-9`.
    pub verified: bool,
}

/// λ is an eigenvalue of `A_{B1B2}` iff `ker(I - B2 M(λ) B1) ≠ {0}`; eigenvectors are
/// reconstructed as `γ(λ) B1 φ`.
pub fn bs_test(model: &TripleModel, param: &BoundaryParameter, lambda: Complex64, tol: f64) -> Result<BsResult> {
    let data = bs_data(model, param, lambda)?;
    let view = model.side(Side::Plain);
    let sv = singular_values(&data.k);
    let bmb = identity(model.m()) - &data.k;
    // A 1x1 K is never small relative to itself, so scale by the two terms instead.
    let scale = sv.first().copied().unwrap_or(0.0).max(norm2(&bmb)).max(1.0);
    let sigma_min = sv.last().map_or(1.0, |&lo| lo / scale);
    let kernel = null_basis_below(&data.k, tol * scale);
    let kernel_dim = if data.k.nrows() == 0 { 0 } else { kernel.ncols() };
    let mut carrier = &data.preimage * (&param.b1 * kernel.columns(0, kernel_dim));
    let mut eigenvectors = view.embed * &carrier;
    for j in 0..kernel_dim {
        let nrm = model.space_h().vec_norm(&eigenvectors.columns(j, 1).into_owned());
        if nrm > 0.0 {
            carrier.column_mut(j).scale_mut(1.0 / nrm);
            eigenvectors.column_mut(j).scale_mut(1.0 / nrm);
        }
    }
    let tnorm = norm(view.op).max(1.0);
    let mut operator_residual: f64 = 0.0;
    for j in 0..kernel_dim {
        let f = carrier.column(j).into_owned();
        let r = view.op * &f - view.embed * &f * lambda;
        operator_residual = operator_residual.max(r.norm() / (tnorm * f.norm()));
    }
    let boundary_residual = if kernel_dim == 0 {
        0.0
    } else {
        boundary_residual(model, Side::Plain, param, &carrier)
    };
    Ok(BsResult {
        lambda,
        is_eigenvalue: kernel_dim > 0,
        kernel_dim,
        eigenvectors,
        carrier,
        sigma_min,
        operator_residual,
        boundary_residual,
        verified: operator_residual <= 1e-9 && boundary_residual <= 1e-9,
    })
}

/// Right-hand side of the Krein formula applied to the columns of `h`.
///
/// `γ̃(λ̄)* h` is evaluated as `Γ1 (A0 - λ)^{-1} h`.
pub fn krein_resolvent(model: &TripleModel, param: &BoundaryParameter, lambda: Complex64, h: &ComplexMatrix) -> Result<ComplexMatrix> {
    if h.nrows() != model.n() {
        return Err(Error::shape("right-hand side", format!("{} rows", model.n()), format!("{} rows", h.nrows())));
    }
    let data = bs_data(model, param, lambda)?;
    let view = model.side(Side::Plain);
    let f0 = data.stacked.solve_interior(h)?;
    let base = view.embed * &f0;
    if model.m() == 0 {
        return Ok(base);
    }
    let lu = LuSolver::new(data.k)?;
    if lu.rcond() < RESOLVENT_MIN_RCOND {
        return Err(Error::BirmanSchwinger {
            lambda,
            rcond: lu.rcond(),
        });
    }
    let gt_star_h = view.g1 * &f0;
    let inner = lu.solve(&(&param.b2 * gt_star_h))?;
    let gamma = view.embed * &data.preimage;
    Ok(base + gamma * (&param.b1 * inner))
}

/// Krein formula as an `n × n` matrix.
pub fn krein_resolvent_matrix(model: &TripleModel, param: &BoundaryParameter, lambda: Complex64) -> Result<ComplexMatrix> {
    krein_resolvent(model, param, lambda, &identity(model.n()))
}

/// Residual of `B1 B2 Γ1 f = Γ0 f` for the carrier vector assembled by the Krein formula.
pub fn krein_boundary_residual(model: &TripleModel, param: &BoundaryParameter, lambda: Complex64, h: &ComplexMatrix) -> Result<f64> {
    let data = bs_data(model, param, lambda)?;
    let view = model.side(Side::Plain);
    let f0 = data.stacked.solve_interior(h)?;
    let lu = LuSolver::new(data.k)?;
    let inner = lu.solve(&(&param.b2 * (view.g1 * &f0)))?;
    let f = f0 + &data.preimage * (&param.b1 * inner);
    Ok(boundary_residual(model, Side::Plain, param, &f))
}

#[derive(Clone, Debug, Serialize)]
pub struct HypothesisItem {
    pub item: String,
    pub statement: String,
    pub holds: bool,
    pub reason: String,
}

/// Finite-dimensional form of the solvability hypotheses behind the Krein formula.
#[derive(Clone, Debug, Serialize)]
pub struct KreinHypotheses {
    pub lambda: [f64; 2],
    pub resolvent_point: bool,
    pub rcond_stack: f64,
    /// `min |1 - μ|` over the eigenvalues `μ` of `B2 M(λ) B1`.
    pub distance_to_one: f64,
    pub rank_g0: usize,
    pub items: Vec<HypothesisItem>,
    pub all_hold: bool,
}

pub fn krein_hypotheses(model: &TripleModel, param: &BoundaryParameter, lambda: Complex64) -> KreinHypotheses {
    let m = model.m();
    let rank_g0 = rank(model.g0(), DEFAULT_RANK_TOL);
    let data = bs_data(model, param, lambda);
    let (resolvent_point, rcond_stack, distance_to_one, scale) = match &data {
        Ok(d) => {
            let prod = &param.b2 * &d.weyl * &param.b1;
            let dist = eigenvalues(&prod)
                .map(|ev| ev.iter().map(|mu| (Complex64::new(1.0, 0.0) - mu).norm()).fold(f64::INFINITY, f64::min))
                .unwrap_or(0.0);
            (true, d.stacked.rcond(), dist, norm(&prod).max(1.0))
        }
        Err(Error::NotResolventPoint { rcond, .. }) => (false, *rcond, 0.0, 1.0),
        Err(_) => (false, 0.0, 0.0, 1.0),
    };
    let cond_i = resolvent_point && (m == 0 || distance_to_one > 1e-10 * scale);
    let automatic = |item: &str, statement: &str| HypothesisItem {
        item: item.into(),
        statement: statement.into(),
        holds: rank_g0 == m,
        reason: format!(
            "B1, B2 and M(λ) are everywhere defined matrices and rank Γ0 = {rank_g0} = m, so the range/domain inclusion is automatic"
        ),
    };
    let items = vec![
        HypothesisItem {
            item: "resolvent point".into(),
            statement: "λ ∈ ρ(A0)".into(),
            holds: resolvent_point,
            reason: format!("reciprocal condition of the Dirichlet stack {rcond_stack:.3e}"),
        },
        HypothesisItem {
            item: "(i)".into(),
            statement: "1 ∈ ρ(B2 M(λ) B1)".into(),
            holds: cond_i,
            reason: format!("distance from 1 to the spectrum of B2 M(λ) B1 is {distance_to_one:.3e}"),
        },
        automatic("(ii)", "ran γ̃(λ̄)* ⊂ dom B2"),
        automatic("(iii)", "ran(M(λ) B1) ⊂ dom B2"),
        automatic("(iv)", "B2 M(λ) B1 closable with everywhere defined closure"),
        automatic("(v)", "ran B1 ⊂ ran Γ0"),
    ];
    let all_hold = items.iter().all(|i| i.holds);
    KreinHypotheses {
        lambda: [lambda.re, lambda.im],
        resolvent_point,
        rcond_stack,
        distance_to_one,
        rank_g0,
        items,
        all_hold,
    }
}
