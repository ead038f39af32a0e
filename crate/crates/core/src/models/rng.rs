//! Seeded random draws for synthetic models.
//!
//! The stream is xoshiro256++ seeded through SplitMix64 (`seed_from_u64`).
//! Uniforms use the top 53 bits of each output, `u = (x >> 11) · 2^-53`;
//! a standard normal is one Box–Muller cosine branch,
//! `sqrt(-2 ln(1 - u1)) · cos(2π u2)`, consuming two uniforms; a complex
//! Gaussian is `(g_re + i g_im) / sqrt(2)`. Any implementation of these three
//! steps reproduces the same matrices for the same seed.

use num_complex::Complex64;
use rand::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::numcore::ComplexMatrix;

pub struct ModelRng {
    inner: Xoshiro256PlusPlus,
}

impl ModelRng {
    pub fn new(seed: u64) -> Self {
        ModelRng {
            inner: Xoshiro256PlusPlus::seed_from_u64(seed),
        }
    }

    pub fn uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn normal(&mut self) -> f64 {
        let u1 = self.uniform();
        let u2 = self.uniform();
        (-2.0 * (1.0 - u1).ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    pub fn complex_normal(&mut self) -> Complex64 {
        let re = self.normal();
        let im = self.normal();
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }

    /// Row-major fill with complex Gaussian entries.
    pub fn matrix(&mut self, rows: usize, cols: usize) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out[(i, j)] = self.complex_normal();
            }
        }
        out
    }

    /// Hermitian positive definite `A^H A + I`.
    pub fn hpd(&mut self, n: usize) -> ComplexMatrix {
        let a = self.matrix(n, n);
        let g = a.adjoint() * &a + ComplexMatrix::identity(n, n);
        (&g + g.adjoint()).scale(0.5)
    }
}
