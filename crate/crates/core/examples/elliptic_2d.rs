//! Dirichlet-to-Neumann matrix of a 2D elliptic operator on a rectangle: shape,
//! symmetry and the sign of its imaginary part.

use boundary_triples::models::{elliptic_2d, Grid2D};
use boundary_triples::numcore::{hermitian_eigenvalues, norm};
use boundary_triples::triple::{gamma, green_defect};
use boundary_triples::{c64, Result};

fn main() -> Result<()> {
    let grid = Grid2D::unit_square(10, 6).with_size(2.0, 1.0);
    let model = elliptic_2d(&grid)?;
    println!("{} cells, {} boundary unknowns, green defect {:.1e}", model.n(), model.m(), green_defect(&model));

    let lambda = c64(-2.0, 0.0);
    let m = gamma(&model, lambda)?.weyl_orthonormal(&model);
    println!("M(-2) asymmetry {:.1e}", norm(&(&m - m.adjoint())) / norm(&m));
    let ev = hermitian_eigenvalues(&m);
    println!("eigenvalues of M(-2) lie in [{:.3}, {:.3}]", ev[0], ev[ev.len() - 1]);

    let z = c64(3.0, 1.0);
    let mz = gamma(&model, z)?.weyl_orthonormal(&model);
    let im = (&mz - mz.adjoint()) * c64(0.0, -0.5);
    println!("smallest eigenvalue of Im M(3+i): {:.3e}", hermitian_eigenvalues(&im)[0]);
    Ok(())
}
