//! Constructors producing triples whose Green identity holds exactly.
//!
//! Every non-symmetric constructor fixes the plain side `(ι, T, Γ0, Γ1)` and
//! the tilde carrier `(ι̃, Γ̃0)`, then solves the Green matrix identity for the
//! unique `(T̃, Γ̃1)`; see [`complete_tilde_side`].

mod analytic;
mod grid1d;
mod grid2d;
mod io;
mod rng;
mod synthetic;

pub use analytic::analytic_dtn_1d;
pub use grid1d::{convection_diffusion_1d, sturm_liouville_1d, Coefficients1D};
pub use grid2d::{elliptic_2d, Grid2D, MAX_2D_UNKNOWNS};
pub use io::{load_model, model_from_json, model_to_json, save_model, MODEL_FORMAT_VERSION};
pub use rng::ModelRng;
pub use synthetic::synthetic_pair;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numcore::{vstack, ComplexMatrix, LuSolver, WeightedSpace};
use crate::triple::{check_maximality, MaximalityCertificate, TripleModel};

/// Solves `ι̃^H W_H T - T̃^H W_H ι = Γ̃0^H W_G Γ1 - Γ̃1^H W_G Γ0` for `(T̃, Γ̃1)`.
///
/// With `Y = ι̃^H W_H T - Γ̃0^H W_G Γ1` and `[P, Q] = Y Φ^{-1}` where
/// `Φ = [ι; Γ0]` (blocks of widths n and m), the solution is
/// `T̃ = W_H^{-1} P^H` and `Γ̃1 = -W_G^{-1} Q^H`.
#[allow(clippy::too_many_arguments)]
pub fn complete_tilde_side(
    space_h: &WeightedSpace,
    space_g: &WeightedSpace,
    embed: &ComplexMatrix,
    op_t: &ComplexMatrix,
    g0: &ComplexMatrix,
    g1: &ComplexMatrix,
    embed_t: &ComplexMatrix,
    g0t: &ComplexMatrix,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let n = space_h.dim();
    let m = space_g.dim();
    let phi = vstack(&[embed, g0]);
    let lu = LuSolver::new(phi.adjoint())?;
    if lu.rcond() < 1e-12 {
        return Err(Error::Generation(format!(
            "stacked map [embed; G0] is numerically singular (rcond {:.3e})",
            lu.rcond()
        )));
    }
    let y = embed_t.adjoint() * space_h.gram() * op_t - g0t.adjoint() * space_g.gram() * g1;
    // Y Φ^{-1} = (Φ^{-H} Y^H)^H
    let pq = lu.solve(&y.adjoint())?.adjoint();
    let p = pq.columns(0, n).into_owned();
    let q = pq.columns(n, m).into_owned();
    let op_tt = space_h.solve_gram(&p.adjoint());
    let g1t = -space_g.solve_gram(&q.adjoint());
    Ok((op_tt, g1t))
}

/// Certifies condition (M) at the first admissible candidate.
pub fn certify_lambda0(
    model: &TripleModel,
    candidates: impl IntoIterator<Item = Complex64>,
) -> Option<MaximalityCertificate> {
    candidates
        .into_iter()
        .map(|z| check_maximality(model, z))
        .find(|c| c.ok)
}

/// Default candidate points: `-1` first, then a fixed ladder off the real axis.
pub(crate) fn default_lambda0_candidates() -> Vec<Complex64> {
    let mut out = vec![Complex64::new(-1.0, 0.0)];
    for k in 1..32 {
        let r = 0.5 * k as f64;
        let angle = 0.37 + 1.1 * k as f64;
        out.push(Complex64::from_polar(r, angle));
    }
    out
}

fn certified(model: TripleModel) -> Result<TripleModel> {
    let cert = certify_lambda0(&model, default_lambda0_candidates())
        .ok_or_else(|| Error::Generation("no λ0 certifying condition (M) among 32 candidates".into()))?;
    Ok(model.with_lambda0(Complex64::new(cert.lambda0[0], cert.lambda0[1])))
}

/// Three-point derivative weights at `at` for the nodes `xs` (Lagrange interpolation).
pub(crate) fn derivative_weights(xs: [f64; 3], at: f64) -> [f64; 3] {
    let mut w = [0.0; 3];
    for j in 0..3 {
        let denom: f64 = (0..3).filter(|&l| l != j).map(|l| xs[j] - xs[l]).product();
        let mut num = 0.0;
        for k in (0..3).filter(|&k| k != j) {
            num += (0..3)
                .filter(|&l| l != j && l != k)
                .map(|l| at - xs[l])
                .product::<f64>();
        }
        w[j] = num / denom;
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_weights_are_exact_on_quadratics() {
        let xs = [0.0, 0.05, 0.15];
        let w = derivative_weights(xs, 0.05);
        let f = |x: f64| 3.0 * x * x - 2.0 * x + 1.0;
        let approx: f64 = (0..3).map(|j| w[j] * f(xs[j])).sum();
        assert!((approx - (6.0 * 0.05 - 2.0)).abs() < 1e-12);
        let centered = derivative_weights([-1.0, 0.0, 1.0], 0.0);
        assert!((centered[0] + 0.5).abs() < 1e-15 && centered[1].abs() < 1e-15 && (centered[2] - 0.5).abs() < 1e-15);
    }
}
