use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numcore::ComplexMatrix;

/// Exact Dirichlet-to-Neumann matrix of `-f'' = λ f` on `(0, 1)` with inward conormals.
///
/// With `t = sqrt(-λ)` the solution taking boundary values `(1, 0)` is
/// `sinh(t(1 - x)) / sinh t`, so
/// `M(λ) = [[-t coth t, t / sinh t], [t / sinh t, -t coth t]]`.
/// At `λ = 0` this is `[[-1, 1], [1, -1]]`; near zero a series is used.
pub fn analytic_dtn_1d(lambda: Complex64) -> Result<ComplexMatrix> {
    if !(lambda.re.is_finite() && lambda.im.is_finite()) {
        return Err(Error::NonFinite("analytic_dtn_1d argument".into()));
    }
    let pi2 = std::f64::consts::PI.powi(2);
    let k = (lambda.re.max(0.0) / pi2).sqrt().round();
    if k >= 1.0 {
        let pole = k * k * pi2;
        if (lambda - pole).norm() <= 1e-10 * pole {
            return Err(Error::Pole { lambda });
        }
    }
    let t2 = -lambda;
    let (diag, off) = if t2.norm() < 1e-3 {
        let t4 = t2 * t2;
        (
            -(1.0 + t2 / 3.0 - t4 / 45.0),
            1.0 - t2 / 6.0 + t4 * (7.0 / 360.0),
        )
    } else {
        let t = t2.sqrt();
        if t.re > 30.0 {
            // coth t = 1 + 2e^{-2t}/(1 - e^{-2t}), 1/sinh t = 2e^{-t}/(1 - e^{-2t})
            let e1 = (-t).exp();
            let e2 = e1 * e1;
            (-t * (1.0 + 2.0 * e2 / (1.0 - e2)), t * 2.0 * e1 / (1.0 - e2))
        } else {
            let s = t.sinh();
            (-t * t.cosh() / s, t / s)
        }
    };
    Ok(ComplexMatrix::from_row_slice(2, 2, &[diag, off, off, diag]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::c64;

    #[test]
    fn zero_limit_matches_linear_solutions() {
        // f = α + βx: Γ0 f = (α, α + β), inward derivatives (β, -β).
        let m = analytic_dtn_1d(c64(0.0, 0.0)).unwrap();
        let want = [c64(-1.0, 0.0), c64(1.0, 0.0), c64(1.0, 0.0), c64(-1.0, 0.0)];
        for (a, b) in m.iter().zip(want.iter()) {
            assert!((a - b).norm() < 1e-15);
        }
        // series and closed form agree across the switch
        let a = analytic_dtn_1d(c64(-0.99e-3, 0.0)).unwrap();
        let b = analytic_dtn_1d(c64(-1.01e-3, 0.0)).unwrap();
        assert!((a[(0, 0)] - b[(0, 0)]).norm() < 1e-5);
        assert!((a[(0, 1)] - b[(0, 1)]).norm() < 1e-5);
    }

    #[test]
    fn value_at_minus_one() {
        let m = analytic_dtn_1d(c64(-1.0, 0.0)).unwrap();
        let coth = 1.0f64.cosh() / 1.0f64.sinh();
        assert!((m[(0, 0)].re + coth).abs() < 1e-14);
        assert!((m[(1, 0)].re - 1.0 / 1.0f64.sinh()).abs() < 1e-14);
        assert_eq!(m[(0, 1)], m[(1, 0)]);
    }

    #[test]
    fn poles_and_large_arguments() {
        let pi2 = std::f64::consts::PI.powi(2);
        assert!(matches!(analytic_dtn_1d(c64(pi2, 0.0)), Err(Error::Pole { .. })));
        assert!(matches!(analytic_dtn_1d(c64(4.0 * pi2, 0.0)), Err(Error::Pole { .. })));
        let far = analytic_dtn_1d(c64(-1e6, 0.0)).unwrap();
        assert!((far[(0, 0)].re + 1000.0).abs() < 1e-9);
        assert!(far[(0, 1)].norm() < 1e-300);
    }
}
