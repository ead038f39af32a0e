//! Cell-centred finite volumes on a rectangle `(0, lx) × (0, ly)`.
//!
//! Cells are numbered `j·nx + i`. Boundary unknowns follow the cells, one per
//! boundary face except at the four corner cells, whose two outer faces share a
//! single unknown placed at the corner. Order: bottom (by `i`, both bottom
//! corners), right (by `j`, top-right corner last), top (by `i`, top-left corner
//! first), left (by `j`, corners excluded). `W_H` holds the cell areas and `W_G`
//! the boundary lengths (`hx + hy` at a corner). `Γ1` is the inward conormal
//! flux `a_face / (h/2) · (f_cell - f_face)`, length-averaged over merged faces.
//!
//! Sharing the corner unknown keeps `[Γ0; Γ1]` of full rank `2m`: with two
//! separate faces on one cell, both flux rows would see the same cell value.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::{certified, complete_tilde_side, derivative_weights};
use crate::error::{Error, Result};
use crate::numcore::{c64, zeros, WeightedSpace};
use crate::triple::{RawTriple, TripleModel};

/// Refuses grids with more carrier unknowns than this.
pub const MAX_2D_UNKNOWNS: usize = 20000;

type Field = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
type ComplexField = Arc<dyn Fn(f64, f64) -> Complex64 + Send + Sync>;

/// Structured grid with diagonal diffusion `diag(a_xx, a_yy)`, convection
/// `(b_x, b_y)` and potential `c`.
#[derive(Clone)]
pub struct Grid2D {
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
    a_xx: Field,
    a_yy: Field,
    b_x: Option<Field>,
    b_y: Option<Field>,
    c: Option<ComplexField>,
}

impl fmt::Debug for Grid2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid2D")
            .field("nx", &self.nx)
            .field("ny", &self.ny)
            .field("lx", &self.lx)
            .field("ly", &self.ly)
            .finish()
    }
}

impl Grid2D {
    /// Laplacian on the unit square with `nx × ny` cells.
    pub fn unit_square(nx: usize, ny: usize) -> Self {
        Grid2D {
            nx,
            ny,
            lx: 1.0,
            ly: 1.0,
            a_xx: Arc::new(|_, _| 1.0),
            a_yy: Arc::new(|_, _| 1.0),
            b_x: None,
            b_y: None,
            c: None,
        }
    }

    pub fn with_size(mut self, lx: f64, ly: f64) -> Self {
        self.lx = lx;
        self.ly = ly;
        self
    }

    pub fn with_diffusion(
        mut self,
        a_xx: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        a_yy: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.a_xx = Arc::new(a_xx);
        self.a_yy = Arc::new(a_yy);
        self
    }

    pub fn with_convection(
        mut self,
        b_x: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        b_y: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.b_x = Some(Arc::new(b_x));
        self.b_y = Some(Arc::new(b_y));
        self
    }

    pub fn with_potential(mut self, c: impl Fn(f64, f64) -> Complex64 + Send + Sync + 'static) -> Self {
        self.c = Some(Arc::new(c));
        self
    }

    pub fn hx(&self) -> f64 {
        self.lx / self.nx as f64
    }

    pub fn hy(&self) -> f64 {
        self.ly / self.ny as f64
    }

    pub fn cells(&self) -> usize {
        self.nx * self.ny
    }

    /// Number of boundary unknowns, `2(nx + ny) - 4`.
    pub fn boundary_faces(&self) -> usize {
        2 * (self.nx + self.ny) - 4
    }

    /// Locations of the boundary unknowns in boundary order; corners sit at the vertex.
    pub fn boundary_points(&self) -> Vec<(f64, f64)> {
        let (hx, hy) = (self.hx(), self.hy());
        let (nx, ny) = (self.nx, self.ny);
        let xc = |i: usize| match i {
            0 => 0.0,
            i if i == nx - 1 => self.lx,
            i => (i as f64 + 0.5) * hx,
        };
        let yc = |j: usize| match j {
            0 => 0.0,
            j if j == ny - 1 => self.ly,
            j => (j as f64 + 0.5) * hy,
        };
        let mut out = Vec::with_capacity(self.boundary_faces());
        out.extend((0..nx).map(|i| (xc(i), 0.0)));
        out.extend((1..ny).map(|j| (self.lx, yc(j))));
        out.extend((0..nx - 1).map(|i| (xc(i), self.ly)));
        out.extend((1..ny - 1).map(|j| (0.0, (j as f64 + 0.5) * hy)));
        out
    }

    /// Boundary lengths carried by each unknown.
    pub fn boundary_weights(&self) -> Vec<f64> {
        let (hx, hy) = (self.hx(), self.hy());
        let (nx, ny) = (self.nx, self.ny);
        let corner = hx + hy;
        let mut w = Vec::with_capacity(self.boundary_faces());
        w.extend((0..nx).map(|i| if i == 0 || i == nx - 1 { corner } else { hx }));
        w.extend((1..ny).map(|j| if j == ny - 1 { corner } else { hy }));
        w.extend((0..nx - 1).map(|i| if i == 0 { corner } else { hx }));
        w.extend((1..ny - 1).map(|_| hy));
        w
    }

    fn validate(&self) -> Result<()> {
        if self.nx < 3 || self.ny < 3 {
            return Err(Error::Contract(format!("2D grid needs at least 3x3 cells, got {}x{}", self.nx, self.ny)));
        }
        if !(self.lx > 0.0 && self.ly > 0.0 && self.lx.is_finite() && self.ly.is_finite()) {
            return Err(Error::Contract("rectangle sides must be positive".into()));
        }
        let total = self.cells() + self.boundary_faces();
        if total > MAX_2D_UNKNOWNS {
            return Err(Error::Contract(format!(
                "2D grid has {total} unknowns, above the dense limit {MAX_2D_UNKNOWNS}"
            )));
        }
        let (hx, hy) = (self.hx(), self.hy());
        for j in 0..=2 * self.ny {
            for i in 0..=2 * self.nx {
                let (x, y) = (0.5 * i as f64 * hx, 0.5 * j as f64 * hy);
                let (axx, ayy) = ((self.a_xx)(x, y), (self.a_yy)(x, y));
                if !(axx.is_finite() && ayy.is_finite() && axx > 0.0 && ayy > 0.0) {
                    return Err(Error::Contract(format!("diffusion not positive definite at ({x}, {y})")));
                }
            }
        }
        Ok(())
    }

    fn is_symmetric(&self) -> bool {
        let (hx, hy) = (self.hx(), self.hy());
        let centers = || {
            (0..self.ny).flat_map(move |j| (0..self.nx).map(move |i| ((i as f64 + 0.5) * hx, (j as f64 + 0.5) * hy)))
        };
        let still = |b: &Option<Field>| b.as_ref().is_none_or(|b| centers().all(|(x, y)| b(x, y) == 0.0));
        let real = self.c.as_ref().is_none_or(|c| centers().all(|(x, y)| c(x, y).im == 0.0));
        still(&self.b_x) && still(&self.b_y) && real
    }
}

/// Elliptic model `-∇·(A∇f) + b·∇f + c f` on the grid, with its formal adjoint
/// on the tilde side. The Weyl matrix is the discrete Dirichlet-to-Neumann map.
pub fn elliptic_2d(grid: &Grid2D) -> Result<TripleModel> {
    grid.validate()?;
    let (nx, ny) = (grid.nx, grid.ny);
    let (hx, hy) = (grid.hx(), grid.hy());
    let n = grid.cells();
    let m = grid.boundary_faces();
    let d = n + m;
    let cell = |i: usize, j: usize| j * nx + i;
    let bottom = |i: usize| n + i;
    let right = |j: usize| if j == 0 { n + nx - 1 } else { n + nx + j - 1 };
    let top = |i: usize| if i == nx - 1 { n + nx + ny - 2 } else { n + nx + ny - 1 + i };
    let left = |j: usize| match j {
        0 => n,
        j if j == ny - 1 => n + nx + ny - 1,
        j => n + 2 * nx + ny - 2 + j - 1,
    };

    let mut embed = zeros(n, d);
    let mut op = zeros(n, d);
    let mut g1 = zeros(m, d);
    for j in 0..ny {
        for i in 0..nx {
            let row = cell(i, j);
            embed[(row, row)] = c64(1.0, 0.0);
            let (x, y) = ((i as f64 + 0.5) * hx, (j as f64 + 0.5) * hy);
            // (neighbour column, face coefficient / cell width)
            let west = if i == 0 {
                (left(j), (grid.a_xx)(0.0, y) / (0.5 * hx) / hx)
            } else {
                (cell(i - 1, j), (grid.a_xx)(x - 0.5 * hx, y) / hx / hx)
            };
            let east = if i == nx - 1 {
                (right(j), (grid.a_xx)(grid.lx, y) / (0.5 * hx) / hx)
            } else {
                (cell(i + 1, j), (grid.a_xx)(x + 0.5 * hx, y) / hx / hx)
            };
            let south = if j == 0 {
                (bottom(i), (grid.a_yy)(x, 0.0) / (0.5 * hy) / hy)
            } else {
                (cell(i, j - 1), (grid.a_yy)(x, y - 0.5 * hy) / hy / hy)
            };
            let north = if j == ny - 1 {
                (top(i), (grid.a_yy)(x, grid.ly) / (0.5 * hy) / hy)
            } else {
                (cell(i, j + 1), (grid.a_yy)(x, y + 0.5 * hy) / hy / hy)
            };
            for (col, k) in [west, east, south, north] {
                op[(row, col)] -= c64(k, 0.0);
                op[(row, row)] += c64(k, 0.0);
            }
            if let Some(c) = &grid.c {
                op[(row, row)] += c(x, y);
            }
            if let Some(b) = &grid.b_x {
                let xs = [
                    if i == 0 { 0.0 } else { x - hx },
                    x,
                    if i == nx - 1 { grid.lx } else { x + hx },
                ];
                let w = derivative_weights(xs, x);
                for (col, wk) in [west.0, row, east.0].into_iter().zip(w) {
                    op[(row, col)] += c64(b(x, y) * wk, 0.0);
                }
            }
            if let Some(b) = &grid.b_y {
                let ys = [
                    if j == 0 { 0.0 } else { y - hy },
                    y,
                    if j == ny - 1 { grid.ly } else { y + hy },
                ];
                let w = derivative_weights(ys, y);
                for (col, wk) in [south.0, row, north.0].into_iter().zip(w) {
                    op[(row, col)] += c64(b(x, y) * wk, 0.0);
                }
            }
        }
    }

    let weights = grid.boundary_weights();
    // Face flux times face length, divided by the length of the unknown it feeds.
    let mut flux = |face: usize, cell_col: usize, coeff: f64, len: f64| {
        let r = face - n;
        let k = c64(coeff * len / weights[r], 0.0);
        g1[(r, cell_col)] += k;
        g1[(r, face)] -= k;
    };
    for i in 0..nx {
        let x = (i as f64 + 0.5) * hx;
        flux(bottom(i), cell(i, 0), (grid.a_yy)(x, 0.0) / (0.5 * hy), hx);
        flux(top(i), cell(i, ny - 1), (grid.a_yy)(x, grid.ly) / (0.5 * hy), hx);
    }
    for j in 0..ny {
        let y = (j as f64 + 0.5) * hy;
        flux(right(j), cell(nx - 1, j), (grid.a_xx)(grid.lx, y) / (0.5 * hx), hy);
        flux(left(j), cell(0, j), (grid.a_xx)(0.0, y) / (0.5 * hx), hy);
    }
    let mut g0 = zeros(m, d);
    for r in 0..m {
        g0[(r, n + r)] = c64(1.0, 0.0);
    }

    let space_h = WeightedSpace::diagonal(&vec![hx * hy; n])?;
    let space_g = WeightedSpace::diagonal(&weights)?;
    let symmetric = grid.is_symmetric();
    let (op_tt, g1t) = if symmetric {
        (op.clone(), g1.clone())
    } else {
        complete_tilde_side(&space_h, &space_g, &embed, &op, &g0, &g1, &embed, &g0)?
    };
    let model = TripleModel::build(RawTriple {
        kind: "elliptic2d".into(),
        space_h,
        space_g,
        embed_t: embed.clone(),
        embed,
        op_t: op,
        op_tt,
        g0t: g0.clone(),
        g0,
        g1,
        g1t,
        symmetric,
        lambda0: None,
    })?;
    certified(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::{hermitian_eigenvalues, norm};
    use crate::triple::{gamma, weyl_identity_check};

    #[test]
    fn laplacian_dtn_is_hermitian_and_negative() {
        let model = elliptic_2d(&Grid2D::unit_square(8, 8)).unwrap();
        assert!(model.metadata().green_defect < 1e-12);
        assert!(model.is_symmetric());
        let s = gamma(&model, c64(-1.0, 0.0)).unwrap();
        let w = s.weyl_orthonormal(&model);
        assert!(norm(&(&w - w.adjoint())) < 1e-10 * norm(&w));
        assert!(hermitian_eigenvalues(&w).last().unwrap() < &0.0);
    }

    #[test]
    fn convection_breaks_hermitian_symmetry_only() {
        let model = elliptic_2d(&Grid2D::unit_square(6, 5).with_convection(|_, _| 1.0, |_, _| -0.5)).unwrap();
        assert!(!model.is_symmetric());
        let s = gamma(&model, c64(-1.0, 0.0)).unwrap();
        let w = s.weyl_orthonormal(&model);
        assert!(norm(&(&w - w.adjoint())) > 1e-3);
        let d = weyl_identity_check(&model, c64(-1.0, 0.0), c64(0.0, 2.0)).unwrap();
        assert!(d.worst() < 1e-10, "{d:?}");
    }

    #[test]
    fn corner_sharing_gives_full_stacked_rank() {
        let grid = Grid2D::unit_square(5, 4);
        let model = elliptic_2d(&grid).unwrap();
        assert_eq!(model.m(), 14);
        let total: f64 = grid.boundary_weights().iter().sum();
        assert!((total - 4.0).abs() < 1e-14);
        let d = crate::triple::check_density(&model, crate::numcore::DEFAULT_RANK_TOL);
        assert!(d.condition_d && d.condition_dd, "{d:?}");
    }

    #[test]
    fn size_guard_refuses_huge_grids() {
        let err = elliptic_2d(&Grid2D::unit_square(150, 150)).unwrap_err();
        assert!(matches!(err, Error::Contract(_)));
        assert!(elliptic_2d(&Grid2D::unit_square(2, 5)).is_err());
    }
}
