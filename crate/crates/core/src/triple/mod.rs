//! Finite triples for adjoint pairs, their validators, and the γ-field / Weyl
//! function machinery built on stacked Dirichlet solves.

mod model;
mod resolvent;
mod spectral;

pub use model::{
    check_density, green_defect, DensityReport, ModelMetadata, RawTriple, Side, SideView,
    TripleModel, GREEN_TOL,
};
pub use resolvent::{
    a0_resolvent, check_maximality, dirichlet_operator, dirichlet_pencil, minimal_operators,
    resolvent_matrix, side_resolvent, MaximalityCertificate, MinimalOperators,
    ResolventSolution, Stacked, MAXIMALITY_TOL, RESOLVENT_MIN_RCOND,
};
pub use spectral::{
    gamma, gamma_shift_check, gamma_star_check, gamma_tilde, sample_side, weyl_identity_check,
    weyl_representation_check, IdentityDefect, PairDefect, SpectralSample, WeylDefects,
};

/// Builds a validated model; alias of [`TripleModel::build`].
pub fn build(raw: RawTriple) -> crate::Result<TripleModel> {
    TripleModel::build(raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::{c64, identity, zeros, ComplexMatrix, WeightedSpace};

    /// Smallest hand-made pair: n = 1, m = 1, carrier (interior value, boundary value).
    fn tiny(raw_g1: f64) -> RawTriple {
        // T f = 2 f_1 - f_0 on H = C with unit weight; Γ0 f = f_0.
        let embed = ComplexMatrix::from_row_slice(1, 2, &[c64(1.0, 0.0), c64(0.0, 0.0)]);
        let op = ComplexMatrix::from_row_slice(1, 2, &[c64(2.0, 0.0), c64(-1.0, 0.0)]);
        let g0 = ComplexMatrix::from_row_slice(1, 2, &[c64(0.0, 0.0), c64(1.0, 0.0)]);
        // Green: ι^H T - T^H ι = Γ0^H Γ1 - Γ1^H Γ0 holds for Γ1 = (1, c) with c real.
        let g1 = ComplexMatrix::from_row_slice(1, 2, &[c64(raw_g1, 0.0), c64(0.5, 0.0)]);
        RawTriple {
            kind: "tiny".into(),
            space_h: WeightedSpace::identity(1),
            space_g: WeightedSpace::identity(1),
            embed: embed.clone(),
            embed_t: embed,
            op_t: op.clone(),
            op_tt: op,
            g0: g0.clone(),
            g1: g1.clone(),
            g0t: g0,
            g1t: g1,
            symmetric: true,
            lambda0: None,
        }
    }

    #[test]
    fn tiny_model_is_valid() {
        let m = TripleModel::build(tiny(1.0)).unwrap();
        assert!(m.metadata().green_defect < 1e-15);
        assert!(m.is_symmetric());
        // A0 = 2, M(λ) = Γ1 γ(λ): f_1 = f_0 / (2 - λ)
        let s = gamma(&m, c64(1.0, 0.0)).unwrap();
        assert!((s.weyl[(0, 0)] - c64(1.5, 0.0)).norm() < 1e-14);
        assert!((s.gamma[(0, 0)] - c64(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn tiny_model_rejects_wrong_normal_derivative() {
        match TripleModel::build(tiny(2.0)) {
            Err(crate::Error::Invariant { invariant, defect, .. }) => {
                assert_eq!(invariant, "green identity");
                assert!(defect > 0.1);
            }
            other => panic!("expected invariant error, got {other:?}"),
        }
    }

    #[test]
    fn zero_model_has_zero_green_defect() {
        let mut raw = tiny(1.0);
        for mat in [&mut raw.op_t, &mut raw.op_tt, &mut raw.g0, &mut raw.g1, &mut raw.g0t, &mut raw.g1t, &mut raw.embed, &mut raw.embed_t] {
            *mat = zeros(mat.nrows(), mat.ncols());
        }
        let m = TripleModel::assemble(raw).unwrap();
        assert_eq!(green_defect(&m), 0.0);
    }

    #[test]
    fn carrier_dimension_must_be_n_plus_m() {
        let mut raw = tiny(1.0);
        raw.op_t = zeros(1, 3);
        assert!(matches!(TripleModel::assemble(raw), Err(crate::Error::Shape { .. })));
    }

    #[test]
    fn resolvent_at_eigenvalue_is_refused() {
        let m = TripleModel::build(tiny(1.0)).unwrap();
        let err = a0_resolvent(&m, c64(2.0, 0.0), &identity(1)).unwrap_err();
        assert!(matches!(err, crate::Error::NotResolventPoint { .. }));
        let ok = a0_resolvent(&m, c64(0.0, 0.0), &identity(1)).unwrap();
        assert!((ok.u[(0, 0)] - c64(0.5, 0.0)).norm() < 1e-15);
    }
}
