//! Robin eigenvalues of a non-self-adjoint operator located as zeros of the
//! Birman–Schwinger determinant, each checked against the generalized pencil.

use boundary_triples::extensions::{eigenvalue_search, BoundaryParameter, Region, SearchOptions};
use boundary_triples::models::{convection_diffusion_1d, Coefficients1D};
use boundary_triples::{c64, Result};

fn main() -> Result<()> {
    let model = convection_diffusion_1d(&Coefficients1D::laplacian(48).with_convection(|_| 4.0))?;
    let param = BoundaryParameter::scalar(c64(1.0, 0.5), model.m());
    let region = Region::new(-5.0, 120.0, -4.0, 4.0)?;
    let found = eigenvalue_search(&model, &param, region, &SearchOptions::default())?;
    for r in &found.roots {
        println!(
            "lambda = {:>12.6} {:+.6}i  kernel dim {}  pencil distance {:.1e}",
            r.lambda[0], r.lambda[1], r.multiplicity, r.pencil_distance
        );
    }
    for w in &found.warnings {
        println!("note: {w}");
    }
    println!("complete: {}", found.complete());
    Ok(())
}
