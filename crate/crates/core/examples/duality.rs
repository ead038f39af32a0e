//! Adjoint duality for a convection model and self-adjointness of real Robin
//! conditions for a Sturm–Liouville model.

use boundary_triples::extensions::{adjoint_duality_check, robin_pencil, BoundaryParameter};
use boundary_triples::models::{convection_diffusion_1d, sturm_liouville_1d, Coefficients1D};
use boundary_triples::numcore::{identity, pencil_eigenvalues};
use boundary_triples::{c64, ComplexMatrix, Result, Side};

fn main() -> Result<()> {
    let cd = convection_diffusion_1d(&Coefficients1D::laplacian(24).with_convection(|x| 2.0 - x))?;
    let b = identity(2) * c64(0.7, 0.2) + ComplexMatrix::from_fn(2, 2, |i, j| c64((i + 2 * j) as f64 * 0.1, 0.0));
    let param = BoundaryParameter::single(b, "coupled")?;
    let dual = param.adjoint(cd.space_g())?;
    let d = adjoint_duality_check(&cd, &param, &dual, c64(1.0, 2.0))?;
    println!("A_B vs (Ã_B*)*: defect {:.2e}, pairing {:.2e}", d.defect, d.pairing_defect);

    let sl = sturm_liouville_1d(&Coefficients1D::new(24, |x| 1.0 + x * x, |x| 3.0 * x))?;
    let theta = BoundaryParameter::scalar(c64(0.8, 0.0), 2);
    let self_dual = adjoint_duality_check(&sl, &theta, &theta, c64(0.0, 1.0))?;
    println!("real theta on the symmetric model: defect {:.2e}", self_dual.defect);
    let (a, e) = robin_pencil(&sl, Side::Plain, &theta)?;
    let spec = pencil_eigenvalues(&a, &e)?;
    let worst = spec.finite.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    println!("{} eigenvalues, largest |Im| {worst:.1e}", spec.finite.len());
    Ok(())
}
