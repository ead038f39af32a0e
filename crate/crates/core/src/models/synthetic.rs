use super::{certified, complete_tilde_side, ModelRng};
use crate::error::{Error, Result};
use crate::numcore::{ComplexMatrix, LuSolver, WeightedSpace};
use crate::triple::{RawTriple, TripleModel};

fn invertible_stack(rng: &mut ModelRng, n: usize, m: usize) -> Result<ComplexMatrix> {
    for _ in 0..16 {
        let phi = rng.matrix(n + m, n + m);
        if LuSolver::new(phi.clone())?.rcond() > 1e-8 {
            return Ok(phi);
        }
    }
    Err(Error::Generation("could not draw an invertible stacked map".into()))
}

/// Random adjoint pair with exact Green identity, deterministic per seed.
///
/// Draws `W_H`, `W_G`, the stacked maps `[ι; Γ0]`, `[ι̃; Γ̃0]`, `T` and `Γ1`, in
/// that order, then solves for `(T̃, Γ̃1)` and certifies condition (M).
pub fn synthetic_pair(seed: u64, n: usize, m: usize) -> Result<TripleModel> {
    if n == 0 {
        return Err(Error::Contract("synthetic_pair needs n >= 1".into()));
    }
    let mut rng = ModelRng::new(seed);
    let space_h = WeightedSpace::new(rng.hpd(n))?;
    let space_g = WeightedSpace::new(rng.hpd(m))?;
    let phi = invertible_stack(&mut rng, n, m)?;
    let psi = invertible_stack(&mut rng, n, m)?;
    let op_t = rng.matrix(n, n + m);
    let g1 = rng.matrix(m, n + m);

    let embed = phi.rows(0, n).into_owned();
    let g0 = phi.rows(n, m).into_owned();
    let embed_t = psi.rows(0, n).into_owned();
    let g0t = psi.rows(n, m).into_owned();
    let (op_tt, g1t) = complete_tilde_side(&space_h, &space_g, &embed, &op_t, &g0, &g1, &embed_t, &g0t)?;

    let model = TripleModel::build(RawTriple {
        kind: "synthetic".into(),
        space_h,
        space_g,
        embed,
        embed_t,
        op_t,
        op_tt,
        g0,
        g1,
        g0t,
        g1t,
        symmetric: false,
        lambda0: None,
    })?;
    certified(model)
}
