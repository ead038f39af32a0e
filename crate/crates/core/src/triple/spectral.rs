use num_complex::Complex64;

use super::model::{Side, TripleModel};
use super::resolvent::{resolvent_matrix, Stacked};
use crate::error::Result;
use crate::numcore::{identity, norm, relative_defect, weighted_adjoint, ComplexMatrix};

/// γ-field and Weyl function evaluated at one point.
///
/// Both matrices are stored in the coordinates of `H` and `G`: `gamma` maps
/// boundary data `φ` to `ι f` with `f ∈ ker(T - λ)`, `Γ0 f = φ`, and
/// `weyl = Γ1 ∘ (Γ0 ↾ ker(T - λ))^{-1}`. Use [`SpectralSample::weyl_orthonormal`]
/// for frame-independent symmetry tests.
#[derive(Clone, Debug)]
pub struct SpectralSample {
    pub point: Complex64,
    pub gamma: ComplexMatrix,
    pub weyl: ComplexMatrix,
    /// Carrier preimages `f_j` of the unit boundary data (columns).
    pub preimage: ComplexMatrix,
    /// Condition number of the stacked system that produced the sample.
    pub cond_stack: f64,
    pub side: Side,
}

impl SpectralSample {
    /// Weyl matrix written in a `W_G`-orthonormal frame of the boundary space.
    pub fn weyl_orthonormal(&self, model: &TripleModel) -> ComplexMatrix {
        model.space_g().to_orthonormal_frame(&self.weyl)
    }
}

fn sample(model: &TripleModel, side: Side, point: Complex64) -> Result<SpectralSample> {
    let view = model.side(side);
    let stacked = Stacked::dirichlet(view, point)?;
    let preimage = stacked.solve_boundary(&identity(model.m()))?;
    Ok(SpectralSample {
        point,
        gamma: view.embed * &preimage,
        weyl: view.g1 * &preimage,
        preimage,
        cond_stack: stacked.condition().max(1.0),
        side,
    })
}

/// `γ(λ)` and `M(λ)`.
pub fn gamma(model: &TripleModel, lambda: Complex64) -> Result<SpectralSample> {
    sample(model, Side::Plain, lambda)
}

/// `γ̃(μ)` and `M̃(μ)`.
pub fn gamma_tilde(model: &TripleModel, mu: Complex64) -> Result<SpectralSample> {
    sample(model, Side::Tilde, mu)
}

pub fn sample_side(model: &TripleModel, side: Side, point: Complex64) -> Result<SpectralSample> {
    sample(model, side, point)
}

/// Relative and absolute residual of one matrix identity.
#[derive(Clone, Copy, Debug, Default, PartialEq, serde::Serialize)]
pub struct IdentityDefect {
    pub relative: f64,
    pub absolute: f64,
}

impl IdentityDefect {
    pub fn of(lhs: &ComplexMatrix, rhs: &ComplexMatrix) -> Self {
        let residual = lhs - rhs;
        IdentityDefect {
            relative: relative_defect(&residual, &[lhs, rhs]),
            absolute: norm(&residual),
        }
    }
}

/// An identity together with its mirror on the other side of the pair.
#[derive(Clone, Copy, Debug, Default, PartialEq, serde::Serialize)]
pub struct PairDefect {
    pub plain: IdentityDefect,
    pub mirror: IdentityDefect,
}

impl PairDefect {
    pub fn worst(&self) -> f64 {
        self.plain.relative.max(self.mirror.relative)
    }
}

fn gamma_adjoint(model: &TripleModel, s: &SpectralSample) -> ComplexMatrix {
    weighted_adjoint(&s.gamma, model.space_h(), model.space_g()).expect("gamma has shape n x m")
}

/// `γ(λ)* = Γ̃1 (Ã0 - λ̄)^{-1}` and `γ̃(λ)* = Γ1 (A0 - λ̄)^{-1}`.
pub fn gamma_star_check(model: &TripleModel, lambda: Complex64) -> Result<PairDefect> {
    let n = model.n();
    let side_check = |side: Side| -> Result<IdentityDefect> {
        let s = sample(model, side, lambda)?;
        let lhs = gamma_adjoint(model, &s);
        let other = model.side(side.other());
        let stacked = Stacked::dirichlet(other, lambda.conj())?;
        let rhs = other.g1 * stacked.solve_interior(&identity(n))?;
        Ok(IdentityDefect::of(&lhs, &rhs))
    };
    Ok(PairDefect {
        plain: side_check(Side::Plain)?,
        mirror: side_check(Side::Tilde)?,
    })
}

/// `γ(λ) = (I + (λ - ν)(A0 - λ)^{-1}) γ(ν)` and the tilde mirror.
pub fn gamma_shift_check(model: &TripleModel, lambda: Complex64, nu: Complex64) -> Result<PairDefect> {
    let n = model.n();
    let side_check = |side: Side| -> Result<IdentityDefect> {
        let at_lambda = sample(model, side, lambda)?;
        let at_nu = sample(model, side, nu)?;
        let r = resolvent_matrix(model, side, lambda)?;
        let rhs = (identity(n) + r * (lambda - nu)) * &at_nu.gamma;
        Ok(IdentityDefect::of(&at_lambda.gamma, &rhs))
    };
    Ok(PairDefect {
        plain: side_check(Side::Plain)?,
        mirror: side_check(Side::Tilde)?,
    })
}

/// Defects of `M(λ) - M̃(μ)* = (λ - μ̄) γ̃(μ)* γ(λ)` (d1) and
/// `M(λ)* - M̃(μ) = (λ̄ - μ) γ(λ)* γ̃(μ)` (d2).
#[derive(Clone, Copy, Debug, Default, PartialEq, serde::Serialize)]
pub struct WeylDefects {
    pub d1: IdentityDefect,
    pub d2: IdentityDefect,
}

impl WeylDefects {
    pub fn worst(&self) -> f64 {
        self.d1.relative.max(self.d2.relative)
    }
}

pub fn weyl_identity_check(model: &TripleModel, lambda: Complex64, mu: Complex64) -> Result<WeylDefects> {
    let g = model.space_g();
    let s = gamma(model, lambda)?;
    let st = gamma_tilde(model, mu)?;
    let m_star = weighted_adjoint(&s.weyl, g, g)?;
    let mt_star = weighted_adjoint(&st.weyl, g, g)?;
    let gs_star = gamma_adjoint(model, &s);
    let gt_star = gamma_adjoint(model, &st);

    let lhs1 = &s.weyl - &mt_star;
    let rhs1 = (&gt_star * &s.gamma) * (lambda - mu.conj());
    let lhs2 = &m_star - &st.weyl;
    let rhs2 = (&gs_star * &st.gamma) * (lambda.conj() - mu);
    // Scale by the operands, not by the (possibly cancelling) differences.
    let d = |lhs: &ComplexMatrix, rhs: &ComplexMatrix, a: &ComplexMatrix, b: &ComplexMatrix| {
        let residual = lhs - rhs;
        IdentityDefect {
            relative: relative_defect(&residual, &[a, b, rhs]),
            absolute: norm(&residual),
        }
    };
    Ok(WeylDefects {
        d1: d(&lhs1, &rhs1, &s.weyl, &mt_star),
        d2: d(&lhs2, &rhs2, &m_star, &st.weyl),
    })
}

/// `M(λ) = M̃(λ0)* + γ̃(λ0)* (λ - λ̄0)(I + (λ - λ0)(A0 - λ)^{-1}) γ(λ0)`
/// and the mirror `M̃(λ) = M(λ0)* + γ(λ0)* (λ - λ̄0)(I + (λ - λ0)(Ã0 - λ)^{-1}) γ̃(λ0)`.
pub fn weyl_representation_check(model: &TripleModel, lambda: Complex64, lambda0: Complex64) -> Result<PairDefect> {
    let n = model.n();
    let g = model.space_g();
    let side_check = |side: Side| -> Result<IdentityDefect> {
        let at_lambda = sample(model, side, lambda)?;
        let at_l0 = sample(model, side, lambda0)?;
        let other_l0 = sample(model, side.other(), lambda0)?;
        let other_weyl_star = weighted_adjoint(&other_l0.weyl, g, g)?;
        let other_gamma_star = gamma_adjoint(model, &other_l0);
        let r = resolvent_matrix(model, side, lambda)?;
        let shifted = (identity(n) + r * (lambda - lambda0)) * &at_l0.gamma;
        let rhs = &other_weyl_star + (other_gamma_star * shifted) * (lambda - lambda0.conj());
        Ok(IdentityDefect::of(&at_lambda.weyl, &rhs))
    };
    Ok(PairDefect {
        plain: side_check(Side::Plain)?,
        mirror: side_check(Side::Tilde)?,
    })
}
