use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numcore::{ensure_finite, identity, weighted_adjoint, zeros, ComplexMatrix, WeightedSpace};

/// Boundary condition `B1 B2 Γ1 f = Γ0 f` on the boundary space.
///
/// The single-parameter form `B Γ1 f = Γ0 f` is `B1 = I`, `B2 = B`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryParameter {
    pub b1: ComplexMatrix,
    pub b2: ComplexMatrix,
    pub label: String,
}

impl BoundaryParameter {
    pub fn new(b1: ComplexMatrix, b2: ComplexMatrix, label: impl Into<String>) -> Result<Self> {
        let m = b1.nrows();
        for (mat, name) in [(&b1, "B1"), (&b2, "B2")] {
            if mat.shape() != (m, m) {
                return Err(Error::shape(
                    format!("boundary parameter {name}"),
                    format!("{m}x{m}"),
                    format!("{}x{}", mat.nrows(), mat.ncols()),
                ));
            }
            ensure_finite(mat, name)?;
        }
        Ok(BoundaryParameter {
            b1,
            b2,
            label: label.into(),
        })
    }

    /// `B1 = I`, `B2 = b`.
    pub fn single(b: ComplexMatrix, label: impl Into<String>) -> Result<Self> {
        Self::new(identity(b.nrows()), b, label)
    }

    /// Robin family `B = θ I`.
    pub fn scalar(theta: Complex64, m: usize) -> Self {
        BoundaryParameter {
            b1: identity(m),
            b2: identity(m) * theta,
            label: format!("theta*I (theta = {} + {}i)", theta.re, theta.im),
        }
    }

    /// `B = 0`: the Dirichlet-type operator `A0` itself.
    pub fn dirichlet(m: usize) -> Self {
        BoundaryParameter {
            b1: identity(m),
            b2: zeros(m, m),
            label: "dirichlet".into(),
        }
    }

    pub fn dim(&self) -> usize {
        self.b1.nrows()
    }

    /// `B = B1 B2`.
    pub fn product(&self) -> ComplexMatrix {
        &self.b1 * &self.b2
    }

    /// Factored adjoint `(B2*, B1*)`, whose product is `(B1 B2)*` in the `W_G` inner product.
    pub fn adjoint(&self, space_g: &WeightedSpace) -> Result<Self> {
        Ok(BoundaryParameter {
            b1: weighted_adjoint(&self.b2, space_g, space_g)?,
            b2: weighted_adjoint(&self.b1, space_g, space_g)?,
            label: format!("adjoint of {}", self.label),
        })
    }

    pub(crate) fn check_dim(&self, m: usize) -> Result<()> {
        if self.dim() != m {
            return Err(Error::shape("boundary parameter", format!("{m}x{m}"), format!("{0}x{0}", self.dim())));
        }
        Ok(())
    }
}

/// Plain description of a parameter for reports.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ParameterSummary {
    pub label: String,
    pub dim: usize,
    pub b1_norm: f64,
    pub b2_norm: f64,
}

impl From<&BoundaryParameter> for ParameterSummary {
    fn from(p: &BoundaryParameter) -> Self {
        ParameterSummary {
            label: p.label.clone(),
            dim: p.dim(),
            b1_norm: p.b1.norm(),
            b2_norm: p.b2.norm(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::{c64, norm};

    #[test]
    fn factored_adjoint_multiplies_to_the_adjoint_product() {
        let g = WeightedSpace::diagonal(&[1.0, 3.0]).unwrap();
        let b1 = ComplexMatrix::from_row_slice(2, 2, &[c64(1.0, 1.0), c64(0.0, 2.0), c64(1.0, 0.0), c64(-1.0, 0.5)]);
        let b2 = ComplexMatrix::from_row_slice(2, 2, &[c64(0.5, 0.0), c64(1.0, -1.0), c64(0.0, 0.0), c64(2.0, 0.0)]);
        let p = BoundaryParameter::new(b1, b2, "x").unwrap();
        let q = p.adjoint(&g).unwrap();
        let want = weighted_adjoint(&p.product(), &g, &g).unwrap();
        assert!(norm(&(q.product() - want)) < 1e-13);
    }

    #[test]
    fn shape_errors() {
        assert!(BoundaryParameter::new(identity(2), identity(3), "bad").is_err());
        assert!(BoundaryParameter::scalar(c64(1.0, 0.0), 2).check_dim(3).is_err());
    }
}
