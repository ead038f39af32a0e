//! Finite weighted-matrix realizations of boundary triples for adjoint pairs.
//!
//! A [`TripleModel`] stores `T`, `T̃` and the boundary maps `Γ0, Γ1, Γ̃0, Γ̃1`
//! on finite carriers, with the Green identity
//! `(Tf, g) - (f, T̃g) = (Γ1 f, Γ̃0 g) - (Γ0 f, Γ̃1 g)` holding to machine
//! precision. On top of it the crate computes γ-fields and Weyl functions,
//! solves Robin-type problems `B1 B2 Γ1 f = Γ0 f` both directly and through the
//! Krein formula, and locates eigenvalues with the Birman–Schwinger principle.
//!
//! ```
//! use boundary_triples::{models, triple, c64};
//!
//! let model = models::sturm_liouville_1d(&models::Coefficients1D::laplacian(16))?;
//! let sample = triple::gamma(&model, c64(-1.0, 0.0))?;
//! assert!(sample.weyl[(0, 0)].re < 0.0);
//! # Ok::<(), boundary_triples::Error>(())
//! ```

pub mod cli;
pub mod error;
pub mod extensions;
pub mod models;
pub mod numcore;
pub mod triple;

pub use error::{Error, Result};
pub use numcore::{c64, ComplexMatrix, WeightedSpace};
pub use triple::{Side, TripleModel};
