use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numcore::{
    ensure_finite, ensure_shape, rank, relative_defect, vstack, ComplexMatrix, WeightedSpace,
    DEFAULT_RANK_TOL,
};

/// Green identity defects above this (relative) are rejected by [`TripleModel::build`].
pub const GREEN_TOL: f64 = 1e-12;

/// Which half of the adjoint pair an operation acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plain,
    Tilde,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Plain => Side::Tilde,
            Side::Tilde => Side::Plain,
        }
    }
}

/// Raw matrices of a triple, before any validation.
#[derive(Clone, Debug)]
pub struct RawTriple {
    pub kind: String,
    pub space_h: WeightedSpace,
    pub space_g: WeightedSpace,
    pub embed: ComplexMatrix,
    pub embed_t: ComplexMatrix,
    pub op_t: ComplexMatrix,
    pub op_tt: ComplexMatrix,
    pub g0: ComplexMatrix,
    pub g1: ComplexMatrix,
    pub g0t: ComplexMatrix,
    pub g1t: ComplexMatrix,
    pub symmetric: bool,
    pub lambda0: Option<Complex64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelMetadata {
    pub kind: String,
    pub green_defect: f64,
    /// Point at which condition (M) was certified, if any.
    pub lambda0: Option<Complex64>,
    pub symmetric: bool,
}

/// Borrowed view of one side of the pair: carrier embedding, operator and boundary maps.
#[derive(Clone, Copy, Debug)]
pub struct SideView<'a> {
    pub side: Side,
    pub embed: &'a ComplexMatrix,
    pub op: &'a ComplexMatrix,
    pub g0: &'a ComplexMatrix,
    pub g1: &'a ComplexMatrix,
}

/// Finite realization of a triple `{G, (Γ0, Γ1), (Γ̃0, Γ̃1)}` for an adjoint pair.
///
/// Elements of `dom T` live in a carrier space of dimension `n + m`; `embed`
/// maps a carrier vector to its value in `H`, `op_t` applies `T`, and `g0`,
/// `g1` take boundary data. The tilde side is stored the same way.
#[derive(Clone, Debug)]
pub struct TripleModel {
    space_h: WeightedSpace,
    space_g: WeightedSpace,
    embed: ComplexMatrix,
    embed_t: ComplexMatrix,
    op_t: ComplexMatrix,
    op_tt: ComplexMatrix,
    g0: ComplexMatrix,
    g1: ComplexMatrix,
    g0t: ComplexMatrix,
    g1t: ComplexMatrix,
    meta: ModelMetadata,
}

impl TripleModel {
    /// Structural checks only (shapes, finiteness). The Green defect is computed and
    /// stored but not enforced; use [`TripleModel::build`] for a validated model.
    pub fn assemble(raw: RawTriple) -> Result<Self> {
        let n = raw.space_h.dim();
        let m = raw.space_g.dim();
        let d = raw.op_t.ncols();
        let dt = raw.op_tt.ncols();
        if d != n + m || dt != n + m {
            return Err(Error::shape(
                "triple carrier dimensions",
                format!("dim_D = dim_Dt = n + m = {}", n + m),
                format!("dim_D = {d}, dim_Dt = {dt}"),
            ));
        }
        let fields: [(&ComplexMatrix, usize, usize, &str); 8] = [
            (&raw.embed, n, d, "embed"),
            (&raw.op_t, n, d, "T"),
            (&raw.g0, m, d, "G0"),
            (&raw.g1, m, d, "G1"),
            (&raw.embed_t, n, dt, "embed_t"),
            (&raw.op_tt, n, dt, "Tt"),
            (&raw.g0t, m, dt, "G0t"),
            (&raw.g1t, m, dt, "G1t"),
        ];
        for (mat, r, c, name) in fields {
            ensure_shape(mat, r, c, name)?;
            ensure_finite(mat, name)?;
        }
        let mut model = TripleModel {
            space_h: raw.space_h,
            space_g: raw.space_g,
            embed: raw.embed,
            embed_t: raw.embed_t,
            op_t: raw.op_t,
            op_tt: raw.op_tt,
            g0: raw.g0,
            g1: raw.g1,
            g0t: raw.g0t,
            g1t: raw.g1t,
            meta: ModelMetadata {
                kind: raw.kind,
                green_defect: 0.0,
                lambda0: raw.lambda0,
                symmetric: raw.symmetric,
            },
        };
        model.meta.green_defect = green_defect(&model);
        Ok(model)
    }

    /// Validated construction: the Green identity, injectivity of the stacked maps
    /// `[ι; Γ0]`, `[ι̃; Γ̃0]` and full rank of `Γ0`, `Γ̃0` are all enforced.
    pub fn build(raw: RawTriple) -> Result<Self> {
        let model = Self::assemble(raw)?;
        let defect = model.meta.green_defect;
        if defect.is_nan() || defect > GREEN_TOL {
            return Err(Error::Invariant {
                invariant: "green identity",
                defect,
                tolerance: GREEN_TOL,
            });
        }
        let (n, m) = (model.n(), model.m());
        for side in [Side::Plain, Side::Tilde] {
            let v = model.side(side);
            let stack = vstack(&[v.embed, v.g0]);
            let r = rank(&stack, DEFAULT_RANK_TOL);
            if r != n + m {
                return Err(Error::Invariant {
                    invariant: if side == Side::Plain {
                        "stacked map [embed; G0] injective"
                    } else {
                        "stacked map [embed_t; G0t] injective"
                    },
                    defect: (n + m - r) as f64,
                    tolerance: 0.0,
                });
            }
            let rg = rank(v.g0, DEFAULT_RANK_TOL);
            if rg != m {
                return Err(Error::Invariant {
                    invariant: if side == Side::Plain { "rank G0 = m" } else { "rank G0t = m" },
                    defect: (m - rg) as f64,
                    tolerance: 0.0,
                });
            }
        }
        Ok(model)
    }

    pub fn n(&self) -> usize {
        self.space_h.dim()
    }

    pub fn m(&self) -> usize {
        self.space_g.dim()
    }

    pub fn dim_d(&self) -> usize {
        self.op_t.ncols()
    }

    pub fn dim_dt(&self) -> usize {
        self.op_tt.ncols()
    }

    pub fn space_h(&self) -> &WeightedSpace {
        &self.space_h
    }

    pub fn space_g(&self) -> &WeightedSpace {
        &self.space_g
    }

    pub fn embed(&self) -> &ComplexMatrix {
        &self.embed
    }

    pub fn embed_t(&self) -> &ComplexMatrix {
        &self.embed_t
    }

    pub fn op_t(&self) -> &ComplexMatrix {
        &self.op_t
    }

    pub fn op_tt(&self) -> &ComplexMatrix {
        &self.op_tt
    }

    pub fn g0(&self) -> &ComplexMatrix {
        &self.g0
    }

    pub fn g1(&self) -> &ComplexMatrix {
        &self.g1
    }

    pub fn g0t(&self) -> &ComplexMatrix {
        &self.g0t
    }

    pub fn g1t(&self) -> &ComplexMatrix {
        &self.g1t
    }

    pub fn metadata(&self) -> &ModelMetadata {
        &self.meta
    }

    pub fn kind(&self) -> &str {
        &self.meta.kind
    }

    pub fn lambda0(&self) -> Option<Complex64> {
        self.meta.lambda0
    }

    pub fn with_lambda0(mut self, lambda0: Complex64) -> Self {
        self.meta.lambda0 = Some(lambda0);
        self
    }

    pub fn with_kind(mut self, kind: impl Into<String>) -> Self {
        self.meta.kind = kind.into();
        self
    }

    pub fn side(&self, side: Side) -> SideView<'_> {
        match side {
            Side::Plain => SideView {
                side,
                embed: &self.embed,
                op: &self.op_t,
                g0: &self.g0,
                g1: &self.g1,
            },
            Side::Tilde => SideView {
                side,
                embed: &self.embed_t,
                op: &self.op_tt,
                g0: &self.g0t,
                g1: &self.g1t,
            },
        }
    }

    /// The symmetric flag is set and both sides coincide entrywise.
    pub fn is_symmetric(&self) -> bool {
        self.meta.symmetric
            && self.op_t == self.op_tt
            && self.embed == self.embed_t
            && self.g0 == self.g0t
            && self.g1 == self.g1t
    }

    /// Back to raw form, e.g. for deliberate corruption in tests or re-validation.
    pub fn to_raw(&self) -> RawTriple {
        RawTriple {
            kind: self.meta.kind.clone(),
            space_h: self.space_h.clone(),
            space_g: self.space_g.clone(),
            embed: self.embed.clone(),
            embed_t: self.embed_t.clone(),
            op_t: self.op_t.clone(),
            op_tt: self.op_tt.clone(),
            g0: self.g0.clone(),
            g1: self.g1.clone(),
            g0t: self.g0t.clone(),
            g1t: self.g1t.clone(),
            symmetric: self.meta.symmetric,
            lambda0: self.meta.lambda0,
        }
    }

    /// The triple `{G, (Γ1, -Γ0), (Γ̃1, -Γ̃0)}`, whose Dirichlet-type operator is `T ↾ ker Γ1`.
    ///
    /// Green's identity is preserved by the swap; the stacked-injectivity and rank
    /// invariants are re-checked, and the certified point is dropped.
    pub fn swapped(&self) -> Result<Self> {
        let mut raw = self.to_raw();
        raw.g0 = self.g1.clone();
        raw.g1 = -self.g0.clone();
        raw.g0t = self.g1t.clone();
        raw.g1t = -self.g0t.clone();
        raw.kind = format!("{}-swapped", self.meta.kind);
        raw.lambda0 = None;
        Self::build(raw)
    }
}

/// Relative residual of the Green matrix identity
/// `ι̃^H W_H T - T̃^H W_H ι = Γ̃0^H W_G Γ1 - Γ̃1^H W_G Γ0`.
pub fn green_defect(model: &TripleModel) -> f64 {
    let wh = model.space_h.gram();
    let wg = model.space_g.gram();
    let a = model.embed_t.adjoint() * wh * &model.op_t;
    let b = model.op_tt.adjoint() * wh * &model.embed;
    let c = model.g0t.adjoint() * wg * &model.g1;
    let d = model.g1t.adjoint() * wg * &model.g0;
    let residual = (&a - &b) - (&c - &d);
    relative_defect(&residual, &[&a, &b, &c, &d])
}

/// Rank facts standing in for the density conditions.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct DensityReport {
    pub rank_g0: usize,
    pub rank_g0t: usize,
    pub rank_stack: usize,
    pub rank_stack_t: usize,
    pub condition_d: bool,
    pub condition_dd: bool,
    /// Both `(Γ0, Γ1)` and `(Γ̃0, Γ̃1)` map onto `G × G`. In finite dimensions this
    /// coincides with `condition_dd` and is informational only.
    pub ordinary: bool,
}

pub fn check_density(model: &TripleModel, tol: f64) -> DensityReport {
    let m = model.m();
    let rank_g0 = rank(&model.g0, tol);
    let rank_g0t = rank(&model.g0t, tol);
    let rank_stack = rank(&vstack(&[&model.g0, &model.g1]), tol);
    let rank_stack_t = rank(&vstack(&[&model.g0t, &model.g1t]), tol);
    let condition_d = rank_g0 == m && rank_g0t == m;
    let condition_dd = rank_stack == 2 * m && rank_stack_t == 2 * m;
    DensityReport {
        rank_g0,
        rank_g0t,
        rank_stack,
        rank_stack_t,
        condition_d,
        condition_dd,
        ordinary: condition_dd,
    }
}
