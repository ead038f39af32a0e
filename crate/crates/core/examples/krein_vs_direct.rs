//! Robin resolvent of a convection-diffusion operator computed twice: by a direct
//! solve of the restricted system and by the Krein formula.

use boundary_triples::extensions::{krein_resolvent_matrix, restricted_resolvent_matrix, BoundaryParameter};
use boundary_triples::models::{convection_diffusion_1d, Coefficients1D};
use boundary_triples::numcore::norm;
use boundary_triples::{c64, Result, Side};

fn main() -> Result<()> {
    let coeffs = Coefficients1D::laplacian(32).with_convection(|x| 1.0 + x).with_potential(|x| c64(x, 0.5));
    let model = convection_diffusion_1d(&coeffs)?;
    for theta in [c64(0.5, 0.0), c64(2.0, -1.0), c64(-3.0, 0.0)] {
        let param = BoundaryParameter::scalar(theta, model.m());
        for lambda in [c64(-1.0, 0.0), c64(4.0, 2.0), c64(30.0, -0.5)] {
            let direct = restricted_resolvent_matrix(&model, Side::Plain, &param, lambda)?;
            let krein = krein_resolvent_matrix(&model, &param, lambda)?;
            let dev = norm(&(&krein - &direct)) / norm(&direct);
            println!("theta {theta:>8.2}  lambda {lambda:>8.2}  relative deviation {dev:.2e}");
        }
    }
    Ok(())
}
