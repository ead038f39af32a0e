//! Discrete Dirichlet-to-Neumann matrix of `-u''` on [0, 1] against the exact one,
//! showing second-order convergence under grid refinement.

use boundary_triples::models::{analytic_dtn_1d, sturm_liouville_1d, Coefficients1D};
use boundary_triples::numcore::norm;
use boundary_triples::triple::gamma;
use boundary_triples::{c64, Result};

fn main() -> Result<()> {
    let lambda = c64(-1.0, 0.0);
    let exact = analytic_dtn_1d(lambda)?;
    println!("exact M(-1) =\n{exact:.6}");
    let mut last: Option<f64> = None;
    for n in [8, 16, 32, 64, 128] {
        let model = sturm_liouville_1d(&Coefficients1D::laplacian(n))?;
        let err = norm(&(gamma(&model, lambda)?.weyl - &exact)) / norm(&exact);
        match last {
            Some(prev) => println!("N = {n:4}  error {err:.3e}  order {:.2}", (prev / err).log2()),
            None => println!("N = {n:4}  error {err:.3e}"),
        }
        last = Some(err);
    }
    Ok(())
}
