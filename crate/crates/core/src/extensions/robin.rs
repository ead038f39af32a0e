//! Direct solves for `A_{B1B2} = T ↾ {f : B1 B2 Γ1 f = Γ0 f}`.

use num_complex::Complex64;

use super::param::BoundaryParameter;
use crate::error::{Error, Result};
use crate::numcore::{identity, norm, vstack, zeros, ComplexMatrix};
use crate::triple::{Side, Stacked, TripleModel, RESOLVENT_MIN_RCOND};

/// Boundary rows `Γ0 - B1 B2 Γ1` of the restricted stack on one side.
pub fn restricted_rows(model: &TripleModel, side: Side, param: &BoundaryParameter) -> Result<ComplexMatrix> {
    param.check_dim(model.m())?;
    let v = model.side(side);
    Ok(v.g0 - param.product() * v.g1)
}

/// Factorized `[op - λ·embed; Γ0 - B1 B2 Γ1]`.
pub fn restricted_stack(model: &TripleModel, side: Side, param: &BoundaryParameter, lambda: Complex64) -> Result<Stacked> {
    let rows = restricted_rows(model, side, param)?;
    let s = Stacked::factor(model.side(side), lambda, &rows)?;
    if s.rcond() < RESOLVENT_MIN_RCOND {
        return Err(Error::RestrictedSingular {
            lambda,
            rcond: s.rcond(),
        });
    }
    Ok(s)
}

#[derive(Clone, Debug)]
pub struct RobinSolution {
    /// Carrier vector `f` with `(T - λι) f = h` and `B1 B2 Γ1 f = Γ0 f`.
    pub f_dom: ComplexMatrix,
    /// `u = ι f = (A_{B1B2} - λ)^{-1} h`.
    pub u: ComplexMatrix,
    pub condition: f64,
    /// `‖B1 B2 Γ1 f - Γ0 f‖` relative to the two terms.
    pub boundary_residual: f64,
}

/// `(A_{B1B2} - λ)^{-1} h` on the plain side.
pub fn ab_resolvent_direct(model: &TripleModel, param: &BoundaryParameter, lambda: Complex64, h: &ComplexMatrix) -> Result<RobinSolution> {
    restricted_solve(model, Side::Plain, param, lambda, h)
}

/// `(A_{B1B2} - λ)^{-1} h` (plain) or `(Ã_{B1B2} - λ)^{-1} h` (tilde).
pub fn restricted_solve(
    model: &TripleModel,
    side: Side,
    param: &BoundaryParameter,
    lambda: Complex64,
    h: &ComplexMatrix,
) -> Result<RobinSolution> {
    if h.nrows() != model.n() {
        return Err(Error::shape("right-hand side", format!("{} rows", model.n()), format!("{} rows", h.nrows())));
    }
    let s = restricted_stack(model, side, param, lambda)?;
    let f_dom = s.solve_interior(h)?;
    let v = model.side(side);
    let u = v.embed * &f_dom;
    Ok(RobinSolution {
        boundary_residual: boundary_residual(model, side, param, &f_dom),
        f_dom,
        u,
        condition: s.condition(),
    })
}

/// Residual of `B1 B2 Γ1 f = Γ0 f` for carrier vectors `f` (columns), relative to
/// `max(‖B1B2‖ ‖Γ1‖, ‖Γ0‖) ‖f‖`.
pub fn boundary_residual(model: &TripleModel, side: Side, param: &BoundaryParameter, f_dom: &ComplexMatrix) -> f64 {
    let v = model.side(side);
    let b = param.product();
    let r = &b * (v.g1 * f_dom) - v.g0 * f_dom;
    let scale = (norm(&b) * norm(v.g1)).max(norm(v.g0)) * norm(f_dom);
    if scale == 0.0 {
        norm(&r)
    } else {
        norm(&r) / scale
    }
}

/// The full matrix of the restricted resolvent on either side.
pub fn restricted_resolvent_matrix(model: &TripleModel, side: Side, param: &BoundaryParameter, lambda: Complex64) -> Result<ComplexMatrix> {
    Ok(restricted_solve(model, side, param, lambda, &identity(model.n()))?.u)
}

/// Generalized eigenvalue pencil `([op; Γ0 - B1B2Γ1], [embed; 0])` of `A_{B1B2}`.
pub fn robin_pencil(model: &TripleModel, side: Side, param: &BoundaryParameter) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let v = model.side(side);
    let rows = restricted_rows(model, side, param)?;
    let a = vstack(&[v.op, &rows]);
    let e = vstack(&[v.embed, &zeros(model.m(), v.embed.ncols())]);
    Ok((a, e))
}

/// Defect of `R(λ) - R(ν) = (λ - ν) R(λ) R(ν)` for the restricted resolvent.
pub fn resolvent_identity_check(model: &TripleModel, param: &BoundaryParameter, lambda: Complex64, nu: Complex64) -> Result<f64> {
    let rl = restricted_resolvent_matrix(model, Side::Plain, param, lambda)?;
    let rn = restricted_resolvent_matrix(model, Side::Plain, param, nu)?;
    let lhs = &rl - &rn;
    let rhs = (&rl * &rn) * (lambda - nu);
    let scale = norm(&rl).max(norm(&rn)).max(norm(&rhs));
    Ok(if scale == 0.0 { 0.0 } else { norm(&(&lhs - &rhs)) / scale })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::synthetic_pair;
    use crate::numcore::{c64, identity, norm};
    use crate::triple::resolvent_matrix;

    #[test]
    fn dirichlet_parameter_reproduces_a0() {
        let model = synthetic_pair(2, 5, 2).unwrap();
        let z = c64(0.3, -0.8);
        let r = restricted_resolvent_matrix(&model, Side::Plain, &BoundaryParameter::dirichlet(2), z).unwrap();
        let r0 = resolvent_matrix(&model, Side::Plain, z).unwrap();
        assert!(norm(&(&r - &r0)) < 1e-12 * norm(&r0));
    }

    #[test]
    fn direct_solution_satisfies_the_boundary_condition() {
        let model = synthetic_pair(4, 6, 3).unwrap();
        let p = BoundaryParameter::scalar(c64(0.5, -0.2), 3);
        let s = restricted_solve(&model, Side::Plain, &p, c64(1.0, 1.0), &identity(6)).unwrap();
        assert!(s.boundary_residual < 1e-12);
        assert!(resolvent_identity_check(&model, &p, c64(1.0, 1.0), c64(-2.0, 0.5)).unwrap() < 1e-10);
    }
}
