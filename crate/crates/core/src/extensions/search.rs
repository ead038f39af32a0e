//! Root finding for `d(λ) = det(I - B2 M(λ) B1)` inside a rectangle.
//!
//! The poles at the eigenvalues of `A0` are cancelled first. A grid scan of the
//! result gives seeds (local minima); Newton iterations use its log-derivative,
//! with `d'/d` from central differences with step `1e-6 (1 + |λ|)`.
//! Seeds run in parallel and are merged in seed order; a sequential second
//! pass repeats every seed with the roots found so far deflated.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::krein::{bs_determinant, bs_test};
use super::param::BoundaryParameter;
use super::robin::robin_pencil;
use crate::error::{Error, Result};
use crate::numcore::{pencil_eigenvalues, sort_lex, PencilSpectrum};
use crate::triple::{dirichlet_pencil, Side, TripleModel};

/// Axis-aligned rectangle `[re_min, re_max] × [im_min, im_max]` in the complex plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Region {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Region {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let ok = [re_min, re_max, im_min, im_max].iter().all(|v| v.is_finite()) && re_min < re_max && im_min <= im_max;
        if !ok {
            return Err(Error::Contract(format!(
                "region [{re_min}, {re_max}] x [{im_min}, {im_max}] is empty or not finite"
            )));
        }
        Ok(Region {
            re_min,
            re_max,
            im_min,
            im_max,
        })
    }

    pub fn contains(&self, z: Complex64, slack: f64) -> bool {
        z.re >= self.re_min - slack && z.re <= self.re_max + slack && z.im >= self.im_min - slack && z.im <= self.im_max + slack
    }

    fn diameter(&self) -> f64 {
        (self.re_max - self.re_min).hypot(self.im_max - self.im_min)
    }

    /// Smallest rectangle containing `points`, padded by `pad` on every side.
    pub fn around(points: &[Complex64], pad: f64) -> Result<Self> {
        let f = |sel: fn(&Complex64) -> f64, init: f64, op: fn(f64, f64) -> f64| points.iter().map(sel).fold(init, op);
        Self::new(
            f(|z| z.re, f64::INFINITY, f64::min) - pad,
            f(|z| z.re, f64::NEG_INFINITY, f64::max) + pad,
            f(|z| z.im, f64::INFINITY, f64::min) - pad,
            f(|z| z.im, f64::NEG_INFINITY, f64::max) + pad,
        )
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SearchOptions {
    /// The scan uses about `grid²` points on near-square cells.
    pub grid: usize,
    /// Newton stops when `|step| <= newton_tol · (1 + |λ|)`.
    pub newton_tol: f64,
    pub max_iter: usize,
    /// Minimum distance to the spectrum of `A0` for scan points and roots.
    pub margin: f64,
    /// Relative singular-value tolerance for the kernel of `I - B2 M B1`.
    pub kernel_tol: f64,
    /// Maximum distance between a root and its pencil eigenvalue.
    pub match_tol: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            grid: 48,
            newton_tol: 1e-13,
            max_iter: 80,
            margin: 1e-3,
            kernel_tol: 1e-8,
            match_tol: 1e-7,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Root {
    pub lambda: [f64; 2],
    /// Dimension of `ker(I - B2 M(λ) B1)` (geometric multiplicity).
    pub multiplicity: usize,
    /// Smallest relative singular value of `I - B2 M(λ) B1`.
    pub bs_residual: f64,
    /// Distance to the nearest eigenvalue of the Robin pencil.
    pub pencil_distance: f64,
    pub pencil_match: bool,
    pub newton_iterations: usize,
}

impl Root {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.lambda[0], self.lambda[1])
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchResult {
    pub region: Region,
    pub roots: Vec<Root>,
    /// Pencil eigenvalues inside the region and away from the spectrum of `A0`.
    pub pencil_in_region: Vec<[f64; 2]>,
    /// Those not matched by any root.
    pub unmatched_pencil: Vec<[f64; 2]>,
    pub seeds: usize,
    /// Scan points skipped for lying within `margin` of the spectrum of `A0`.
    pub flagged_points: usize,
    pub warnings: Vec<String>,
}

impl SearchResult {
    /// Every root matches the pencil and every pencil eigenvalue in the region is found.
    pub fn complete(&self) -> bool {
        self.unmatched_pencil.is_empty() && self.roots.iter().all(|r| r.pencil_match)
    }
}

struct Det<'a> {
    model: &'a TripleModel,
    param: &'a BoundaryParameter,
    a0: &'a PencilSpectrum,
    margin: f64,
}

impl Det<'_> {
    fn eval(&self, z: Complex64) -> Option<Complex64> {
        if self.a0.distance(z) < self.margin {
            return None;
        }
        bs_determinant(self.model, self.param, z).ok().filter(|d| d.re.is_finite() && d.im.is_finite())
    }

    /// `log |d(z) ∏ (z - p)|` over the eigenvalues `p` of `A0`. Cancelling the poles keeps
    /// zeros next to them visible on a coarse scan.
    fn log_abs(&self, z: Complex64) -> Option<f64> {
        let d = self.eval(z)?;
        Some(d.norm().ln() + self.a0.finite.iter().map(|&p| (z - p).norm().ln()).sum::<f64>())
    }

    /// Log-derivative of `d(z) ∏ (z - p)`, or `None` off the resolvent set. `Some(inf)`
    /// flags an exact zero.
    fn log_derivative(&self, z: Complex64) -> Option<Complex64> {
        let d0 = self.eval(z)?;
        if d0 == Complex64::new(0.0, 0.0) {
            return Some(Complex64::new(f64::INFINITY, 0.0));
        }
        let delta = 1e-6 * (1.0 + z.norm());
        let dp = self.eval(z + delta)?;
        let dm = self.eval(z - delta)?;
        let poles: Complex64 = self.a0.finite.iter().map(|&p| (z - p).inv()).sum();
        Some((dp - dm) / (2.0 * delta * d0) + poles)
    }
}

fn newton(det: &Det<'_>, start: Complex64, known: &[Complex64], region: &Region, opts: &SearchOptions) -> Option<(Complex64, usize)> {
    let mut z = start;
    let cap = region.diameter().max(1e-3);
    for it in 1..=opts.max_iter {
        let mut g = det.log_derivative(z)?;
        if g.re.is_infinite() {
            return Some((z, it));
        }
        for r in known {
            g -= (z - r).inv();
        }
        if g.norm() == 0.0 || !g.re.is_finite() || !g.im.is_finite() {
            return None;
        }
        let mut step = g.inv();
        if step.norm() > cap {
            step *= cap / step.norm();
        }
        z -= step;
        if !region.contains(z, 0.5 * cap) {
            return None;
        }
        if step.norm() <= opts.newton_tol * (1.0 + z.norm()) {
            return Some((z, it));
        }
    }
    None
}

fn same_root(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= 1e-6 * (1.0 + a.norm())
}

/// Seeds are the local minima of `|d ∏ (z - p)|` on a scan of cell centres. The scan
/// spends `grid²` points on roughly square cells, so long thin regions along the real
/// axis are resolved where the eigenvalues are.
fn scan_seeds(det: &Det<'_>, region: &Region, grid: usize) -> (Vec<Complex64>, usize) {
    let (nx, ny) = scan_shape(region, grid.max(3));
    let hx = (region.re_max - region.re_min) / nx as f64;
    let hy = (region.im_max - region.im_min) / ny as f64;
    let points: Vec<Complex64> = (0..nx * ny)
        .map(|k| {
            let (i, j) = (k % nx, k / nx);
            Complex64::new(region.re_min + (i as f64 + 0.5) * hx, region.im_min + (j as f64 + 0.5) * hy)
        })
        .collect();
    let values: Vec<Option<f64>> = points.par_iter().map(|&z| det.log_abs(z)).collect();
    let flagged = values.iter().filter(|v| v.is_none()).count();
    let mut seeds = Vec::new();
    for k in 0..nx * ny {
        let Some(v) = values[k] else { continue };
        let (i, j) = ((k % nx) as isize, (k / nx) as isize);
        let mut is_min = true;
        for dj in -1..=1 {
            for di in -1..=1 {
                let (a, b) = (i + di, j + dj);
                if (di, dj) == (0, 0) || a < 0 || b < 0 || a >= nx as isize || b >= ny as isize {
                    continue;
                }
                if let Some(w) = values[(b as usize) * nx + a as usize] {
                    if w < v {
                        is_min = false;
                    }
                }
            }
        }
        if is_min {
            seeds.push(points[k]);
        }
    }
    (seeds, flagged)
}

fn scan_shape(region: &Region, grid: usize) -> (usize, usize) {
    let w = region.re_max - region.re_min;
    let h = region.im_max - region.im_min;
    if !(w > 0.0 && h > 0.0) {
        return (grid, grid);
    }
    let aspect = (w / h).sqrt();
    let nx = ((grid as f64 * aspect).round() as usize).clamp(3, grid * grid / 3);
    let ny = (grid * grid).div_ceil(nx).max(3);
    (nx, ny)
}

/// Eigenvalues of `A_{B1B2}` in `region ∩ ρ(A0)` via the Birman–Schwinger determinant,
/// each cross-checked against the Robin pencil.
pub fn eigenvalue_search(model: &TripleModel, param: &BoundaryParameter, region: Region, opts: &SearchOptions) -> Result<SearchResult> {
    param.check_dim(model.m())?;
    let (a, e) = dirichlet_pencil(model, Side::Plain);
    let a0 = pencil_eigenvalues(&a, &e)?;
    let det = Det {
        model,
        param,
        a0: &a0,
        margin: opts.margin,
    };
    let mut warnings = Vec::new();
    let touching: Vec<Complex64> = a0.finite.iter().copied().filter(|&z| region.contains(z, opts.margin)).collect();
    if !touching.is_empty() {
        warnings.push(format!(
            "region contains {} eigenvalue(s) of A0; scan points within {:.1e} of them are skipped",
            touching.len(),
            opts.margin
        ));
    }

    let (seeds, flagged_points) = scan_seeds(&det, &region, opts.grid);
    let first: Vec<Option<(Complex64, usize)>> = seeds.par_iter().map(|&s| newton(&det, s, &[], &region, opts)).collect();

    let mut found: Vec<(Complex64, usize)> = Vec::new();
    let accept = |z: Complex64, it: usize, found: &mut Vec<(Complex64, usize)>| {
        if region.contains(z, 1e-9 * (1.0 + z.norm()))
            && a0.distance(z) >= opts.margin
            && !found.iter().any(|&(w, _)| same_root(w, z))
        {
            found.push((z, it));
            true
        } else {
            false
        }
    };
    for (z, it) in first.into_iter().flatten() {
        accept(z, it, &mut found);
    }
    for _round in 0..3 {
        let mut added = false;
        for &s in &seeds {
            let known: Vec<Complex64> = found.iter().map(|&(z, _)| z).collect();
            if let Some((z, it)) = newton(&det, s, &known, &region, opts) {
                added |= accept(z, it, &mut found);
            }
        }
        if !added {
            break;
        }
    }

    let (ra, re) = robin_pencil(model, Side::Plain, param)?;
    let robin = pencil_eigenvalues(&ra, &re)?;
    let mut values: Vec<Complex64> = found.iter().map(|&(z, _)| z).collect();
    sort_lex(&mut values);
    let mut roots = Vec::with_capacity(values.len());
    for z in values {
        let it = found.iter().find(|&&(w, _)| w == z).map_or(0, |&(_, it)| it);
        let bs = bs_test(model, param, z, opts.kernel_tol)?;
        if !bs.is_eigenvalue {
            warnings.push(format!(
                "Newton limit {} + {}i has trivial kernel (relative σ_min {:.2e}); discarded",
                z.re, z.im, bs.sigma_min
            ));
            continue;
        }
        let pencil_distance = robin.distance(z);
        roots.push(Root {
            lambda: [z.re, z.im],
            multiplicity: bs.kernel_dim,
            bs_residual: bs.sigma_min,
            pencil_distance,
            pencil_match: pencil_distance <= opts.match_tol,
            newton_iterations: it,
        });
    }

    let pencil_in_region: Vec<Complex64> = robin
        .finite
        .iter()
        .copied()
        .filter(|&z| region.contains(z, 0.0) && a0.distance(z) >= opts.margin)
        .collect();
    let unmatched_pencil = pencil_in_region
        .iter()
        .filter(|&&z| !roots.iter().any(|r| (r.value() - z).norm() <= opts.match_tol))
        .map(|z| [z.re, z.im])
        .collect();
    if roots.is_empty() {
        warnings.push(format!("no root converged from {} seed(s)", seeds.len()));
    }
    Ok(SearchResult {
        region,
        roots,
        pencil_in_region: pencil_in_region.iter().map(|z| [z.re, z.im]).collect(),
        unmatched_pencil,
        seeds: seeds.len(),
        flagged_points,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extensions::robin::robin_pencil;
    use crate::models::{sturm_liouville_1d, Coefficients1D};
    use crate::numcore::{c64, pencil_eigenvalues};
    use crate::triple::Side;

    #[test]
    fn region_validation() {
        assert!(Region::new(1.0, 0.0, -1.0, 1.0).is_err());
        assert!(Region::new(0.0, 1.0, 0.0, f64::NAN).is_err());
        let r = Region::around(&[c64(1.0, 0.0), c64(3.0, -1.0)], 0.5).unwrap();
        assert!(r.contains(c64(3.4, -1.4), 0.0));
        assert!(!r.contains(c64(3.6, 0.0), 0.0));
    }

    #[test]
    fn finds_every_robin_eigenvalue_in_the_region() {
        let model = sturm_liouville_1d(&Coefficients1D::laplacian(16)).unwrap();
        let p = BoundaryParameter::scalar(c64(1.0, 0.0), 2);
        let region = Region::new(0.0, 60.0, -1.0, 1.0).unwrap();
        let found = eigenvalue_search(&model, &p, region, &SearchOptions::default()).unwrap();
        assert!(found.complete(), "{found:?}");
        let (a, e) = robin_pencil(&model, Side::Plain, &p).unwrap();
        let want: Vec<_> = pencil_eigenvalues(&a, &e).unwrap().finite.into_iter().filter(|z| region.contains(*z, 0.0)).collect();
        assert_eq!(found.roots.len(), want.len());
        for r in &found.roots {
            assert!(r.lambda[1].abs() < 1e-8);
            assert!(r.pencil_distance < 1e-7);
        }
    }

    #[test]
    fn finds_a_root_sitting_next_to_a_dirichlet_eigenvalue() {
        // N = 4: the Robin eigenvalue near 55.19 lies 0.56 from the A0 eigenvalue 54.63.
        let model = sturm_liouville_1d(&Coefficients1D::laplacian(4)).unwrap();
        let p = BoundaryParameter::scalar(c64(1.0, 0.0), 2);
        let region = Region::new(-1.0, 58.0, -2.8, 2.8).unwrap();
        let found = eigenvalue_search(&model, &p, region, &SearchOptions::default()).unwrap();
        assert!(found.complete(), "{found:?}");
        assert_eq!(found.roots.len(), 4);
    }

    #[test]
    fn scan_cells_are_near_square() {
        let thin = Region::new(0.0, 200.0, -1.0, 1.0).unwrap();
        let (nx, ny) = scan_shape(&thin, 48);
        assert_eq!((nx, ny), (480, 5));
        let w = 200.0 / nx as f64;
        let h = 2.0 / ny as f64;
        assert!(w / h < 1.2 && h / w < 1.2);
        assert_eq!(scan_shape(&Region::new(0.0, 1.0, 0.0, 1.0).unwrap(), 48), (48, 48));
        let (nx, ny) = scan_shape(&Region::new(0.0, 1e6, 0.0, 1e-6).unwrap(), 3);
        assert!(nx >= 3 && ny >= 3);
    }
}

