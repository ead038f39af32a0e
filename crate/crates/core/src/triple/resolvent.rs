use num_complex::Complex64;

use super::model::{Side, SideView, TripleModel};
use crate::error::{Error, Result};
use crate::numcore::{
    identity, null_basis, relative_defect, vstack, weighted_adjoint, zeros, ComplexMatrix, LuSolver,
};

/// Resolvent-set membership threshold on the reciprocal condition of a stacked system.
pub const RESOLVENT_MIN_RCOND: f64 = 1e-12;
/// Tolerance on `‖Ã0 - A0*‖ / scale` for the maximality certificate.
pub const MAXIMALITY_TOL: f64 = 1e-10;

/// Factorized square system `[op - λ·embed; bottom]` acting on carrier vectors.
#[derive(Clone, Debug)]
pub struct Stacked {
    lu: LuSolver,
    n: usize,
    m: usize,
    lambda: Complex64,
}

impl Stacked {
    pub fn factor(view: SideView<'_>, lambda: Complex64, bottom: &ComplexMatrix) -> Result<Self> {
        let top = view.op - view.embed * lambda;
        let n = top.nrows();
        let m = bottom.nrows();
        let lu = LuSolver::new(vstack(&[&top, bottom]))?;
        Ok(Stacked { lu, n, m, lambda })
    }

    /// The Dirichlet stack `[op - λ·embed; Γ0]`; fails when λ is not a resolvent point.
    pub fn dirichlet(view: SideView<'_>, lambda: Complex64) -> Result<Self> {
        let s = Self::factor(view, lambda, view.g0)?;
        if s.rcond() < RESOLVENT_MIN_RCOND {
            return Err(Error::NotResolventPoint {
                lambda,
                rcond: s.rcond(),
            });
        }
        Ok(s)
    }

    pub fn rcond(&self) -> f64 {
        self.lu.rcond()
    }

    pub fn condition(&self) -> f64 {
        self.lu.condition()
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    /// Carrier solution of `[op - λ·embed; bottom] f = [h; 0]`.
    pub fn solve_interior(&self, h: &ComplexMatrix) -> Result<ComplexMatrix> {
        let mut rhs = zeros(self.n + self.m, h.ncols());
        rhs.view_mut((0, 0), (self.n, h.ncols())).copy_from(h);
        self.lu.solve(&rhs)
    }

    /// Carrier solution of `[op - λ·embed; bottom] f = [0; φ]`.
    pub fn solve_boundary(&self, phi: &ComplexMatrix) -> Result<ComplexMatrix> {
        let mut rhs = zeros(self.n + self.m, phi.ncols());
        rhs.view_mut((self.n, 0), (self.m, phi.ncols())).copy_from(phi);
        self.lu.solve(&rhs)
    }
}

/// Result of a Dirichlet-type resolvent solve.
#[derive(Clone, Debug)]
pub struct ResolventSolution {
    /// Carrier vector `f` with `(T - λι) f = h` and `Γ0 f = 0`.
    pub f_dom: ComplexMatrix,
    /// `u = ι f = (A0 - λ)^{-1} h`.
    pub u: ComplexMatrix,
    pub condition: f64,
}

/// `(A0 - λ)^{-1} h` through the stacked Dirichlet system.
pub fn a0_resolvent(model: &TripleModel, lambda: Complex64, h: &ComplexMatrix) -> Result<ResolventSolution> {
    side_resolvent(model, Side::Plain, lambda, h)
}

/// `(A0 - λ)^{-1} h` on the plain side or `(Ã0 - λ)^{-1} h` on the tilde side.
pub fn side_resolvent(model: &TripleModel, side: Side, lambda: Complex64, h: &ComplexMatrix) -> Result<ResolventSolution> {
    if h.nrows() != model.n() {
        return Err(Error::shape("resolvent right-hand side", format!("{} rows", model.n()), format!("{} rows", h.nrows())));
    }
    let view = model.side(side);
    let s = Stacked::dirichlet(view, lambda)?;
    let f_dom = s.solve_interior(h)?;
    let u = view.embed * &f_dom;
    Ok(ResolventSolution {
        f_dom,
        u,
        condition: s.condition(),
    })
}

/// The full `n × n` matrix of `(A0 - λ)^{-1}` (or its tilde counterpart).
pub fn resolvent_matrix(model: &TripleModel, side: Side, lambda: Complex64) -> Result<ComplexMatrix> {
    Ok(side_resolvent(model, side, lambda, &identity(model.n()))?.u)
}

/// Matrix of `A0 = T ↾ ker Γ0` (or `Ã0`) acting on `H`.
///
/// The carrier preimage of `u ∈ H` inside `ker Γ0` is `[ι; Γ0]^{-1} [u; 0]`.
pub fn dirichlet_operator(model: &TripleModel, side: Side) -> Result<ComplexMatrix> {
    let v = model.side(side);
    let lu = LuSolver::new(vstack(&[v.embed, v.g0]))?;
    if lu.rcond() < RESOLVENT_MIN_RCOND {
        return Err(Error::Singular {
            context: "stacked map [embed; G0]".into(),
            rcond: lu.rcond(),
        });
    }
    let n = model.n();
    let mut rhs = zeros(n + model.m(), n);
    rhs.view_mut((0, 0), (n, n)).copy_from(&identity(n));
    Ok(v.op * lu.solve(&rhs)?)
}

/// Generalized eigenvalue pencil `([op; Γ0], [embed; 0])` of the Dirichlet-type operator.
pub fn dirichlet_pencil(model: &TripleModel, side: Side) -> (ComplexMatrix, ComplexMatrix) {
    let v = model.side(side);
    let a = vstack(&[v.op, v.g0]);
    let e = vstack(&[v.embed, &zeros(model.m(), v.embed.ncols())]);
    (a, e)
}

/// Certificate for the maximality condition `A0* = Ã0`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct MaximalityCertificate {
    pub ok: bool,
    pub lambda0: [f64; 2],
    pub defect_adjoint: f64,
    pub rcond_plain: f64,
    pub rcond_tilde: f64,
}

/// Two invertibility checks (plain stack at λ0, tilde stack at conj λ0) plus the
/// adjoint defect `‖Ã0 - A0*‖ / max(‖A0‖, ‖Ã0‖)`.
pub fn check_maximality(model: &TripleModel, lambda0: Complex64) -> MaximalityCertificate {
    let rc = |side, z| {
        Stacked::factor(model.side(side), z, model.side(side).g0)
            .map(|s| s.rcond())
            .unwrap_or(0.0)
    };
    let rcond_plain = rc(Side::Plain, lambda0);
    let rcond_tilde = rc(Side::Tilde, lambda0.conj());
    let defect_adjoint = match (
        dirichlet_operator(model, Side::Plain),
        dirichlet_operator(model, Side::Tilde),
    ) {
        (Ok(a0), Ok(a0t)) => {
            let a0_star = weighted_adjoint(&a0, model.space_h(), model.space_h()).expect("square");
            relative_defect(&(&a0t - &a0_star), &[&a0, &a0t])
        }
        _ => f64::INFINITY,
    };
    let ok = rcond_plain >= RESOLVENT_MIN_RCOND
        && rcond_tilde >= RESOLVENT_MIN_RCOND
        && defect_adjoint <= MAXIMALITY_TOL;
    MaximalityCertificate {
        ok,
        lambda0: [lambda0.re, lambda0.im],
        defect_adjoint,
        rcond_plain,
        rcond_tilde,
    }
}

/// Restrictions `S = T̃ ↾ (ker Γ̃0 ∩ ker Γ̃1)` and `S̃ = T ↾ (ker Γ0 ∩ ker Γ1)`.
#[derive(Clone, Debug)]
pub struct MinimalOperators {
    /// Orthonormal carrier basis of `dom S` (tilde carrier).
    pub dom_s: ComplexMatrix,
    /// Orthonormal carrier basis of `dom S̃` (plain carrier).
    pub dom_st: ComplexMatrix,
    /// `T̃` applied to `dom_s`.
    pub s_matrix: ComplexMatrix,
    /// `T` applied to `dom_st`.
    pub st_matrix: ComplexMatrix,
    /// Relative defect of `(S f, g) = (f, S̃ g)` over the basis vectors.
    pub pairing_defect: f64,
}

pub fn minimal_operators(model: &TripleModel, tol: f64) -> MinimalOperators {
    let dom_s = null_basis(&vstack(&[model.g0t(), model.g1t()]), tol);
    let dom_st = null_basis(&vstack(&[model.g0(), model.g1()]), tol);
    let s_matrix = model.op_tt() * &dom_s;
    let st_matrix = model.op_t() * &dom_st;
    let wh = model.space_h().gram();
    // entry (j, i): (S f_i, ι g_j) and (ι̃ f_i, S̃ g_j)
    let lhs = (model.embed() * &dom_st).adjoint() * wh * &s_matrix;
    let rhs = st_matrix.adjoint() * wh * (model.embed_t() * &dom_s);
    let pairing_defect = relative_defect(&(&lhs - &rhs), &[&lhs, &rhs]);
    MinimalOperators {
        dom_s,
        dom_st,
        s_matrix,
        st_matrix,
        pairing_defect,
    }
}
