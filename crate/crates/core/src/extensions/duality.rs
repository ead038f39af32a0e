use num_complex::Complex64;
use serde::Serialize;

use super::param::BoundaryParameter;
use super::robin::restricted_resolvent_matrix;
use crate::error::{Error, Result};
use crate::numcore::{norm, relative_defect, weighted_adjoint};
use crate::triple::{Side, Stacked, TripleModel};

/// Pairing tolerance for `(B1B2 φ, ψ) = (φ, B1'B2' ψ)`.
pub const PAIRING_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct DualityDefect {
    /// `‖(A_{B1B2} - λ)^{-1} - ((Ã_{B1'B2'} - λ̄)^{-1})*‖ / scale`.
    pub defect: f64,
    /// Relative defect of the pairing precondition.
    pub pairing_defect: f64,
}

/// Checks `A_{B1B2} = (Ã_{B1'B2'})*` through the two resolvents at `λ` and `λ̄`.
///
/// `param_t` acts on the tilde side and must satisfy `B1'B2' = (B1B2)*` in `W_G`.
pub fn adjoint_duality_check(
    model: &TripleModel,
    param: &BoundaryParameter,
    param_t: &BoundaryParameter,
    lambda: Complex64,
) -> Result<DualityDefect> {
    param.check_dim(model.m())?;
    param_t.check_dim(model.m())?;
    let g = model.space_g();
    let b = param.product();
    let bt = param_t.product();
    let b_star = weighted_adjoint(&b, g, g)?;
    let diff = &bt - &b_star;
    let pairing_defect = norm(&diff) / norm(&b).max(1.0);
    if pairing_defect > PAIRING_TOL {
        return Err(Error::Contract(format!(
            "boundary parameters do not pair: ‖B1'B2' - (B1B2)*‖ = {pairing_defect:.3e}"
        )));
    }
    Stacked::dirichlet(model.side(Side::Plain), lambda)?;
    let r = restricted_resolvent_matrix(model, Side::Plain, param, lambda)?;
    let rt = restricted_resolvent_matrix(model, Side::Tilde, param_t, lambda.conj())?;
    let rt_star = weighted_adjoint(&rt, model.space_h(), model.space_h())?;
    Ok(DualityDefect {
        defect: relative_defect(&(&r - &rt_star), &[&r, &rt]),
        pairing_defect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{convection_diffusion_1d, Coefficients1D};
    use crate::numcore::c64;

    fn cd1d() -> TripleModel {
        convection_diffusion_1d(&Coefficients1D::laplacian(12).with_convection(|x| 1.0 - x).with_potential(|x| c64(0.0, x))).unwrap()
    }

    #[test]
    fn adjoint_parameters_give_adjoint_operators() {
        let model = cd1d();
        let p = BoundaryParameter::scalar(c64(1.0, 1.0), 2);
        let pt = p.adjoint(model.space_g()).unwrap();
        let d = adjoint_duality_check(&model, &p, &pt, c64(0.5, 1.0)).unwrap();
        assert!(d.defect < 1e-10, "{d:?}");
    }

    #[test]
    fn unpaired_parameters_are_refused() {
        let model = cd1d();
        let p = BoundaryParameter::scalar(c64(1.0, 1.0), 2);
        let err = adjoint_duality_check(&model, &p, &p, c64(0.5, 1.0)).unwrap_err();
        assert!(matches!(err, Error::Contract(_)));
    }
}
