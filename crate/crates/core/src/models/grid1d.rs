//! Cell-centred finite volumes on `(0, 1)`.
//!
//! The carrier is `[f_0, f_1, ..., f_N, f_{N+1}]`: the two boundary values at
//! `x = 0` and `x = 1` bracket the `N` cell averages at `x_i = (i - 1/2) h`,
//! `h = 1/N`. Fluxes through interior faces use `p/h`, through the boundary
//! faces `p/(h/2)`. `Γ0` reads the boundary values and `Γ1` is the inward
//! conormal flux `2p(0)/h (f_1 - f_0)`, `2p(1)/h (f_N - f_{N+1})`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::{certified, complete_tilde_side, derivative_weights};
use crate::error::{Error, Result};
use crate::numcore::{c64, zeros, WeightedSpace};
use crate::triple::{RawTriple, TripleModel};

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type ComplexFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// Coefficients of `-(p f')' + b f' + (q + c) f` on `(0, 1)` with `N` cells.
#[derive(Clone)]
pub struct Coefficients1D {
    pub n: usize,
    p: RealFn,
    q: RealFn,
    b: Option<RealFn>,
    c: Option<ComplexFn>,
}

impl fmt::Debug for Coefficients1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Coefficients1D")
            .field("n", &self.n)
            .field("convection", &self.b.is_some())
            .field("complex_potential", &self.c.is_some())
            .finish()
    }
}

impl Coefficients1D {
    pub fn new(
        n: usize,
        p: impl Fn(f64) -> f64 + Send + Sync + 'static,
        q: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Coefficients1D {
            n,
            p: Arc::new(p),
            q: Arc::new(q),
            b: None,
            c: None,
        }
    }

    /// `p ≡ 1`, `q ≡ 0`.
    pub fn laplacian(n: usize) -> Self {
        Self::new(n, |_| 1.0, |_| 0.0)
    }

    pub fn with_convection(mut self, b: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.b = Some(Arc::new(b));
        self
    }

    /// Extra (possibly complex) potential `c`, added to `q`.
    pub fn with_potential(mut self, c: impl Fn(f64) -> Complex64 + Send + Sync + 'static) -> Self {
        self.c = Some(Arc::new(c));
        self
    }

    pub fn h(&self) -> f64 {
        1.0 / self.n as f64
    }

    /// Cell centres `x_1, ..., x_N`.
    pub fn centers(&self) -> Vec<f64> {
        let h = self.h();
        (1..=self.n).map(|i| (i as f64 - 0.5) * h).collect()
    }

    fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::Contract(format!("1D grid needs N >= 3 cells, got {}", self.n)));
        }
        let h = self.h();
        let mut points: Vec<f64> = (0..=self.n).map(|k| k as f64 * h).collect();
        points.extend(self.centers());
        for x in points {
            let p = (self.p)(x);
            if !(p.is_finite() && p > 0.0) {
                return Err(Error::Contract(format!("diffusion coefficient p({x}) = {p} is not positive")));
            }
            let q = (self.q)(x);
            let b = self.b.as_ref().map_or(0.0, |b| b(x));
            let c = self.c.as_ref().map_or(c64(0.0, 0.0), |c| c(x));
            if !(q.is_finite() && b.is_finite() && c.re.is_finite() && c.im.is_finite()) {
                return Err(Error::NonFinite(format!("1D coefficients at x = {x}")));
            }
        }
        Ok(())
    }

    fn is_symmetric(&self) -> bool {
        let h = self.h();
        let no_convection = self
            .b
            .as_ref()
            .is_none_or(|b| self.centers().iter().all(|&x| b(x) == 0.0));
        let real_potential = self
            .c
            .as_ref()
            .is_none_or(|c| (0..=self.n).map(|k| k as f64 * h).chain(self.centers()).all(|x| c(x).im == 0.0));
        no_convection && real_potential
    }
}

/// Symmetric Sturm–Liouville model `-(p f')' + q f`. Convection and complex
/// potential in `coeffs`, if any, are rejected.
pub fn sturm_liouville_1d(coeffs: &Coefficients1D) -> Result<TripleModel> {
    if !coeffs.is_symmetric() {
        return Err(Error::Contract(
            "sturm_liouville_1d needs b = 0 and a real potential; use convection_diffusion_1d".into(),
        ));
    }
    build_1d(coeffs, "sl1d")
}

/// Convection–diffusion model `-(p f')' + b f' + (q + c) f` and its formal adjoint.
///
/// With `b ≡ 0` and real `c` the output equals [`sturm_liouville_1d`] entrywise.
pub fn convection_diffusion_1d(coeffs: &Coefficients1D) -> Result<TripleModel> {
    build_1d(coeffs, "cd1d")
}

fn build_1d(coeffs: &Coefficients1D, kind: &str) -> Result<TripleModel> {
    coeffs.validate()?;
    let n = coeffs.n;
    let h = coeffs.h();
    let d = n + 2;
    let p = |x: f64| (coeffs.p)(x);
    let centers = coeffs.centers();

    let mut embed = zeros(n, d);
    let mut op = zeros(n, d);
    for i in 1..=n {
        let row = i - 1;
        embed[(row, i)] = c64(1.0, 0.0);
        let x = centers[row];
        // face coefficients (already divided by the cell width h)
        let west = if i == 1 { p(0.0) / (0.5 * h) } else { p(x - 0.5 * h) / h } / h;
        let east = if i == n { p(1.0) / (0.5 * h) } else { p(x + 0.5 * h) / h } / h;
        let potential = c64((coeffs.q)(x), 0.0) + coeffs.c.as_ref().map_or(c64(0.0, 0.0), |c| c(x));
        op[(row, i - 1)] -= c64(west, 0.0);
        op[(row, i + 1)] -= c64(east, 0.0);
        op[(row, i)] += c64(west + east, 0.0) + potential;
        if let Some(b) = &coeffs.b {
            let bx = b(x);
            let (cols, xs) = if i == 1 {
                ([0, 1, 2], [0.0, x, x + h])
            } else if i == n {
                ([n - 1, n, n + 1], [x - h, x, 1.0])
            } else {
                ([i - 1, i, i + 1], [x - h, x, x + h])
            };
            let w = derivative_weights(xs, x);
            for (col, wk) in cols.into_iter().zip(w) {
                op[(row, col)] += c64(bx * wk, 0.0);
            }
        }
    }

    let mut g0 = zeros(2, d);
    g0[(0, 0)] = c64(1.0, 0.0);
    g0[(1, n + 1)] = c64(1.0, 0.0);
    let mut g1 = zeros(2, d);
    let left = 2.0 * p(0.0) / h;
    let right = 2.0 * p(1.0) / h;
    g1[(0, 1)] = c64(left, 0.0);
    g1[(0, 0)] = c64(-left, 0.0);
    g1[(1, n)] = c64(right, 0.0);
    g1[(1, n + 1)] = c64(-right, 0.0);

    let space_h = WeightedSpace::diagonal(&vec![h; n])?;
    let space_g = WeightedSpace::identity(2);
    let symmetric = coeffs.is_symmetric();
    let (op_tt, g1t) = if symmetric {
        (op.clone(), g1.clone())
    } else {
        complete_tilde_side(&space_h, &space_g, &embed, &op, &g0, &g1, &embed, &g0)?
    };
    let model = TripleModel::build(RawTriple {
        kind: kind.into(),
        space_h,
        space_g,
        embed_t: embed.clone(),
        embed,
        op_t: op,
        op_tt,
        g0t: g0.clone(),
        g0,
        g1,
        g1t,
        symmetric,
        lambda0: None,
    })?;
    certified(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::{pencil_eigenvalues, rank, vstack};
    use crate::triple::{check_density, check_maximality, dirichlet_pencil, gamma, Side};

    #[test]
    fn laplacian_model_is_exact_and_certified() {
        let m = sturm_liouville_1d(&Coefficients1D::laplacian(16)).unwrap();
        assert!(m.metadata().green_defect < 1e-13);
        assert!(m.is_symmetric());
        assert_eq!(m.lambda0(), Some(c64(-1.0, 0.0)));
        let cert = check_maximality(&m, c64(-1.0, 0.0));
        assert!(cert.ok && cert.defect_adjoint < 1e-11);
        let dens = check_density(&m, 1e-10);
        assert!(dens.condition_d && dens.condition_dd);
        assert_eq!(rank(&vstack(&[m.g0(), m.g1()]), 1e-10), 4);
    }

    #[test]
    fn weyl_is_negative_definite_below_the_spectrum() {
        let m = sturm_liouville_1d(&Coefficients1D::laplacian(32)).unwrap();
        let s = gamma(&m, c64(-1.0, 0.0)).unwrap();
        let ev = crate::numcore::hermitian_eigenvalues(&s.weyl);
        assert!(ev[1] < 0.0, "{ev:?}");
        assert!((s.weyl[(0, 1)] - s.weyl[(1, 0)]).norm() < 1e-12);
    }

    #[test]
    fn constant_potential_shifts_dirichlet_spectrum() {
        let base = sturm_liouville_1d(&Coefficients1D::laplacian(16)).unwrap();
        let shifted = sturm_liouville_1d(&Coefficients1D::new(16, |_| 1.0, |_| 5.0)).unwrap();
        let (a, e) = dirichlet_pencil(&base, Side::Plain);
        let (a5, e5) = dirichlet_pencil(&shifted, Side::Plain);
        let l0 = pencil_eigenvalues(&a, &e).unwrap().finite;
        let l5 = pencil_eigenvalues(&a5, &e5).unwrap().finite;
        assert_eq!(l0.len(), 16);
        for (x, y) in l0.iter().zip(&l5) {
            assert!((y - x - 5.0).norm() < 1e-9 * (1.0 + x.norm()));
        }
        assert!((l0[0].re - std::f64::consts::PI.powi(2)).abs() < 0.05);
    }

    #[test]
    fn convection_free_reduction_is_entrywise() {
        let sl = sturm_liouville_1d(&Coefficients1D::new(12, |x| 1.0 + x, |x| x * x)).unwrap();
        let cd = convection_diffusion_1d(
            &Coefficients1D::new(12, |x| 1.0 + x, |x| x * x).with_convection(|_| 0.0),
        )
        .unwrap();
        assert_eq!(sl.op_t(), cd.op_t());
        assert_eq!(sl.op_tt(), cd.op_tt());
        assert_eq!(sl.g1t(), cd.g1t());
        assert!(cd.is_symmetric());
    }

    #[test]
    fn convection_model_pairs_with_its_adjoint() {
        let m = convection_diffusion_1d(&Coefficients1D::laplacian(32).with_convection(|_| 1.0)).unwrap();
        assert!(!m.is_symmetric());
        assert!(m.metadata().green_defect < 1e-12);
        let cert = check_maximality(&m, c64(-1.0, 0.0));
        assert!(cert.ok && cert.defect_adjoint < 1e-11, "{cert:?}");
    }

    #[test]
    fn rejects_bad_coefficients() {
        assert!(sturm_liouville_1d(&Coefficients1D::laplacian(2)).is_err());
        assert!(sturm_liouville_1d(&Coefficients1D::new(8, |x| x - 0.5, |_| 0.0)).is_err());
        assert!(sturm_liouville_1d(&Coefficients1D::laplacian(8).with_convection(|_| 1.0)).is_err());
    }
}
