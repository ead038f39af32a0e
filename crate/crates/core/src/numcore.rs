//! Dense complex linear algebra over weighted inner-product spaces.
//!
//! Every adjoint in this crate is taken with respect to a Gram matrix: for
//! `A : (C^k, W_in) -> (C^r, W_out)` the weighted adjoint is
//! `A* = W_in^{-1} A^H W_out`, so that `(Ax, y)_out = (x, A*y)_in` with
//! `(x, y) = y^H W x`.
//!
//! Factorizations are backed by nalgebra (LU with partial pivoting, SVD,
//! Cholesky, complex Schur). Generalized eigenvalues of a pencil `(A, E)` are
//! obtained by a shift-invert reduction to an ordinary eigenproblem.

use nalgebra::linalg::{Cholesky, Schur, SymmetricEigen, LU};
use nalgebra::{DMatrix, Dyn};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;

/// Relative rank / null-space tolerance used when a caller does not supply one.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;
/// `solve` refuses matrices whose reciprocal condition number falls below this.
pub const SOLVE_MIN_RCOND: f64 = 1e-14;

#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

pub fn zeros(r: usize, c: usize) -> ComplexMatrix {
    ComplexMatrix::zeros(r, c)
}

pub fn is_finite(a: &ComplexMatrix) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub(crate) fn ensure_finite(a: &ComplexMatrix, what: &str) -> Result<()> {
    if is_finite(a) {
        Ok(())
    } else {
        Err(Error::NonFinite(what.to_string()))
    }
}

pub(crate) fn ensure_shape(a: &ComplexMatrix, rows: usize, cols: usize, what: &str) -> Result<()> {
    if a.nrows() == rows && a.ncols() == cols {
        Ok(())
    } else {
        Err(Error::shape(
            what,
            format!("{rows}x{cols}"),
            format!("{}x{}", a.nrows(), a.ncols()),
        ))
    }
}

/// Frobenius norm.
pub fn norm(a: &ComplexMatrix) -> f64 {
    a.norm()
}

/// Maximum absolute column sum.
pub fn norm1(a: &ComplexMatrix) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `‖residual‖ / max(‖terms‖)`, or zero when every term vanishes.
pub fn relative_defect(residual: &ComplexMatrix, terms: &[&ComplexMatrix]) -> f64 {
    let scale = terms.iter().map(|t| norm(t)).fold(0.0, f64::max);
    let r = norm(residual);
    if scale == 0.0 {
        r
    } else {
        r / scale
    }
}

/// Stack matrices with equal column counts on top of each other.
pub fn vstack(blocks: &[&ComplexMatrix]) -> ComplexMatrix {
    let cols = blocks.first().map_or(0, |b| b.ncols());
    let rows = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = zeros(rows, cols);
    let mut r0 = 0;
    for b in blocks {
        assert_eq!(b.ncols(), cols, "vstack: column mismatch");
        out.view_mut((r0, 0), (b.nrows(), cols)).copy_from(*b);
        r0 += b.nrows();
    }
    out
}

/// A finite-dimensional complex inner-product space `(C^dim, (x, y) = y^H G x)`.
#[derive(Clone, Debug)]
pub struct WeightedSpace {
    gram: ComplexMatrix,
    chol: Cholesky<Complex64, Dyn>,
}

impl WeightedSpace {
    pub fn new(gram: ComplexMatrix) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::shape("gram", "square", format!("{}x{}", gram.nrows(), gram.ncols())));
        }
        ensure_finite(&gram, "gram")?;
        let scale = norm(&gram);
        let asym = norm(&(&gram - gram.adjoint()));
        if asym > 1e-14 * scale {
            return Err(Error::Gram(format!("not Hermitian (defect {:.3e})", asym / scale.max(f64::MIN_POSITIVE))));
        }
        let chol = Cholesky::new(gram.clone())
            .ok_or_else(|| Error::Gram("not positive definite".into()))?;
        if gram.nrows() > 0 {
            let min_eig = hermitian_eigenvalues(&gram)[0];
            if min_eig <= 0.0 {
                return Err(Error::Gram(format!("smallest eigenvalue {min_eig:.3e} is not positive")));
            }
        }
        Ok(WeightedSpace { gram, chol })
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(identity(dim)).expect("identity is a valid Gram matrix")
    }

    /// Diagonal Gram matrix from positive weights (quadrature weights, cell areas, arc lengths).
    pub fn diagonal(weights: &[f64]) -> Result<Self> {
        let d = nalgebra::DVector::from_iterator(weights.len(), weights.iter().map(|&w| c64(w, 0.0)));
        Self::new(ComplexMatrix::from_diagonal(&d))
    }

    pub fn dim(&self) -> usize {
        self.gram.nrows()
    }

    pub fn gram(&self) -> &ComplexMatrix {
        &self.gram
    }

    /// `(x, y) = y^H G x` for column vectors `x`, `y`.
    pub fn inner(&self, x: &ComplexMatrix, y: &ComplexMatrix) -> Complex64 {
        (y.adjoint() * &self.gram * x)[(0, 0)]
    }

    pub fn vec_norm(&self, x: &ComplexMatrix) -> f64 {
        self.inner(x, x).re.max(0.0).sqrt()
    }

    /// `G^{-1} b`.
    pub fn solve_gram(&self, b: &ComplexMatrix) -> ComplexMatrix {
        self.chol.solve(b)
    }

    /// Matrix of the operator `a` (acting on this space) in a `G`-orthonormal frame:
    /// with `G = L L^H`, returns `L^H a L^{-H}`. Hermitian iff `a` is self-adjoint in this space.
    pub fn to_orthonormal_frame(&self, a: &ComplexMatrix) -> ComplexMatrix {
        let l = self.chol.l();
        let lh = l.adjoint();
        // a L^{-H} = (L^{-1} a^H)^H
        let x = l
            .solve_lower_triangular(&a.adjoint())
            .expect("Cholesky factor is nonsingular")
            .adjoint();
        lh * x
    }
}

/// Adjoint of `a : (C^{w_in.dim}, w_in) -> (C^{w_out.dim}, w_out)`.
pub fn weighted_adjoint(a: &ComplexMatrix, w_out: &WeightedSpace, w_in: &WeightedSpace) -> Result<ComplexMatrix> {
    ensure_shape(a, w_out.dim(), w_in.dim(), "weighted_adjoint")?;
    Ok(w_in.solve_gram(&(a.adjoint() * w_out.gram())))
}

/// LU factorization with a 1-norm reciprocal condition estimate.
#[derive(Clone, Debug)]
pub struct LuSolver {
    lu: LU<Complex64, Dyn, Dyn>,
    rcond: f64,
    dim: usize,
}

impl LuSolver {
    pub fn new(a: ComplexMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::shape("lu", "square", format!("{}x{}", a.nrows(), a.ncols())));
        }
        ensure_finite(&a, "lu")?;
        let anorm = norm1(&a);
        let dim = a.nrows();
        let lu = a.lu();
        let rcond = if dim == 0 {
            1.0
        } else {
            match lu.try_inverse() {
                Some(inv) if is_finite(&inv) && anorm > 0.0 => 1.0 / (anorm * norm1(&inv)),
                _ => 0.0,
            }
        };
        Ok(LuSolver { lu, rcond, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rcond(&self) -> f64 {
        self.rcond
    }

    pub fn condition(&self) -> f64 {
        if self.rcond > 0.0 {
            1.0 / self.rcond
        } else {
            f64::INFINITY
        }
    }

    pub fn solve(&self, b: &ComplexMatrix) -> Result<ComplexMatrix> {
        if b.nrows() != self.dim() {
            return Err(Error::shape("lu solve", format!("{} rows", self.dim()), format!("{} rows", b.nrows())));
        }
        self.lu.solve(b).ok_or_else(|| Error::Singular {
            context: "lu solve".into(),
            rcond: self.rcond,
        })
    }

    pub fn determinant(&self) -> Complex64 {
        self.lu.determinant()
    }
}

/// Solves `A x = b` column by column; refuses numerically singular `A`.
pub fn solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !a.is_square() {
        return Err(Error::shape("solve", "square A", format!("{}x{}", a.nrows(), a.ncols())));
    }
    if b.nrows() != a.nrows() {
        return Err(Error::shape("solve", format!("b with {} rows", a.nrows()), format!("{} rows", b.nrows())));
    }
    let lu = LuSolver::new(a.clone())?;
    if lu.rcond() < SOLVE_MIN_RCOND {
        return Err(Error::Singular {
            context: "solve".into(),
            rcond: lu.rcond(),
        });
    }
    lu.solve(b)
}

/// Singular values (descending) and the full right singular basis `V` (columns).
fn full_svd(a: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let (r, c) = a.shape();
    // Pad with zero rows so that V is square even for wide matrices.
    let k = r.max(c);
    let mut padded = zeros(k, c);
    padded.view_mut((0, 0), (r, c)).copy_from(a);
    let svd = padded.svd(false, true);
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let v_t = svd.v_t.expect("V requested");
    let sv: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let mut v = zeros(c, order.len());
    for (dst, &src) in order.iter().enumerate() {
        for row in 0..c {
            v[(row, dst)] = v_t[(src, row)].conj();
        }
    }
    (sv, v)
}

pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = a.singular_values().iter().copied().collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

/// Numerical rank: number of singular values above `tol * σ_max`.
pub fn rank(a: &ComplexMatrix, tol: f64) -> usize {
    let sv = singular_values(a);
    let smax = sv.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * smax).count()
}

/// Orthonormal (Euclidean) basis of the numerical null space, as columns.
pub fn null_basis(a: &ComplexMatrix, tol: f64) -> ComplexMatrix {
    let smax = singular_values(a).first().copied().unwrap_or(0.0);
    null_basis_below(a, tol * smax)
}

/// Right singular vectors whose singular values are at most `cutoff`.
pub fn null_basis_below(a: &ComplexMatrix, cutoff: f64) -> ComplexMatrix {
    let c = a.ncols();
    if c == 0 {
        return zeros(0, 0);
    }
    if a.nrows() == 0 {
        return identity(c);
    }
    let (sv, v) = full_svd(a);
    let keep: Vec<usize> = (0..c).filter(|&j| sv[j] <= cutoff).collect();
    let mut out = zeros(c, keep.len());
    for (dst, &j) in keep.iter().enumerate() {
        out.set_column(dst, &v.column(j));
    }
    out
}

/// Smallest singular value relative to the largest, and the corresponding right singular vector.
pub fn smallest_singular(a: &ComplexMatrix) -> (f64, ComplexMatrix) {
    let (sv, v) = full_svd(a);
    let last = sv.len() - 1;
    let smax = sv[0];
    let rel = if smax == 0.0 { 0.0 } else { sv[last] / smax };
    (rel, v.columns(last, 1).into_owned())
}

/// Eigenvalues of a general complex square matrix via the complex Schur form.
pub fn eigenvalues(a: &ComplexMatrix) -> Result<Vec<Complex64>> {
    if !a.is_square() {
        return Err(Error::shape("eigenvalues", "square", format!("{}x{}", a.nrows(), a.ncols())));
    }
    ensure_finite(a, "eigenvalues")?;
    let n = a.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    // Exactly repeated eigenvalues can stall the iteration at machine epsilon;
    // a slightly looser deflation threshold still gives backward-stable values.
    let schur = [f64::EPSILON, 1e-15, 1e-14]
        .into_iter()
        .find_map(|eps| Schur::try_new(a.clone(), eps, 200 * n.max(10)))
        .ok_or_else(|| Error::Convergence(format!("complex Schur iteration on a {n}x{n} matrix")))?;
    let (_, t) = schur.unpack();
    Ok(t.diagonal().iter().copied().collect())
}

/// Eigenvalues (ascending) of a Hermitian matrix.
pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Vec<f64> {
    if a.nrows() == 0 {
        return Vec::new();
    }
    let h = (a + a.adjoint()).scale(0.5);
    let mut ev: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Generalized eigenvalues of the pencil `(A, E)`.
#[derive(Clone, Debug, Default)]
pub struct PencilSpectrum {
    /// Finite eigenvalues, sorted lexicographically by (re, im).
    pub finite: Vec<Complex64>,
    /// Number of infinite eigenvalues.
    pub infinite: usize,
    /// Shift used for the reduction; zero when the infinite part was deflated directly.
    pub shift: Complex64,
}

impl PencilSpectrum {
    /// Distance from `z` to the nearest finite eigenvalue (infinity when there is none).
    pub fn distance(&self, z: Complex64) -> f64 {
        self.finite.iter().map(|&l| (l - z).norm()).fold(f64::INFINITY, f64::min)
    }

    pub fn nearest(&self, z: Complex64) -> Option<Complex64> {
        self.finite
            .iter()
            .copied()
            .min_by(|a, b| (a - z).norm().total_cmp(&(b - z).norm()))
    }
}

pub(crate) fn sort_lex(v: &mut [Complex64]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Finite generalized eigenvalues `λ` with `det(A - λE) = 0`.
///
/// With a shift `σ` for which `A - σE` is well conditioned, the eigenvalues `ν`
/// of `C = (A - σE)^{-1} E` satisfy `λ = σ + 1/ν`; `ν ≈ 0` marks an infinite
/// eigenvalue.
pub fn pencil_eigenvalues(a: &ComplexMatrix, e: &ComplexMatrix) -> Result<PencilSpectrum> {
    if !a.is_square() || a.shape() != e.shape() {
        return Err(Error::shape(
            "pencil_eigenvalues",
            format!("square A and E of equal shape, A is {}x{}", a.nrows(), a.ncols()),
            format!("E {}x{}", e.nrows(), e.ncols()),
        ));
    }
    ensure_finite(a, "pencil A")?;
    ensure_finite(e, "pencil E")?;
    let n = a.nrows();
    if n == 0 {
        return Ok(PencilSpectrum::default());
    }
    let enorm = norm(e);
    if enorm == 0.0 {
        return Ok(PencilSpectrum {
            finite: Vec::new(),
            infinite: n,
            shift: c64(0.0, 0.0),
        });
    }
    if let Some(spec) = deflated_pencil(a, e)? {
        return Ok(spec);
    }
    // Deterministic shift ladder: unit-modulus directions at growing radii.
    let dirs = [c64(0.3, 0.9), c64(-0.55, 0.7), c64(0.8, -0.45), c64(-0.2, -0.95)];
    let scale = (norm(a) / enorm).max(1.0);
    let mut chosen = None;
    'outer: for k in 0..12 {
        let radius = 0.7 * 10f64.powf(k as f64 / 3.0);
        for d in dirs {
            let sigma = d * radius.min(10.0 * scale);
            let lu = LuSolver::new(a - e * sigma)?;
            if lu.rcond() > 1e-10 {
                chosen = Some((sigma, lu));
                break 'outer;
            }
        }
    }
    let (sigma, lu) = chosen.ok_or_else(|| {
        Error::Convergence("no admissible shift for the pencil (singular pencil?)".into())
    })?;
    let cmat = lu.solve(e)?;
    let nus = eigenvalues(&cmat)?;
    let cut = 1e-10 * norm(&cmat);
    let mut finite = Vec::new();
    let mut infinite = 0;
    for nu in nus {
        if nu.norm() <= cut {
            infinite += 1;
        } else {
            finite.push(sigma + nu.inv());
        }
    }
    sort_lex(&mut finite);
    Ok(PencilSpectrum {
        finite,
        infinite,
        shift: sigma,
    })
}

/// Removes the infinite eigenvalues of an index-one pencil before the Schur step.
///
/// With `E = U diag(Σ, 0) V^H`, the pencil becomes `[[A11 - λΣ, A12], [A21, A22]]`;
/// when `A22` is invertible the finite eigenvalues are those of
/// `Σ^{-1} (A11 - A12 A22^{-1} A21)`. Returns `None` when `A22` is singular.
fn deflated_pencil(a: &ComplexMatrix, e: &ComplexMatrix) -> Result<Option<PencilSpectrum>> {
    let n = a.nrows();
    let svd = e.clone().svd(true, true);
    let (u, v_t) = (svd.u.expect("U requested"), svd.v_t.expect("V requested"));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let smax = svd.singular_values[order[0]];
    let r = order.iter().filter(|&&i| svd.singular_values[i] > 1e-12 * smax).count();
    let us = ComplexMatrix::from_fn(n, n, |i, k| u[(i, order[k])]);
    let vs = ComplexMatrix::from_fn(n, n, |i, k| v_t[(order[k], i)].conj());
    let at = us.adjoint() * a * &vs;
    let mut reduced = at.view((0, 0), (r, r)).into_owned();
    if r < n {
        let lu = LuSolver::new(at.view((r, r), (n - r, n - r)).into_owned())?;
        if lu.rcond() < 1e-10 {
            return Ok(None);
        }
        let x = lu.solve(&at.view((r, 0), (n - r, r)).into_owned())?;
        reduced -= at.view((0, r), (r, n - r)) * x;
    }
    for (i, mut row) in reduced.row_iter_mut().enumerate() {
        row /= c64(svd.singular_values[order[i]], 0.0);
    }
    let mut finite = eigenvalues(&reduced)?;
    sort_lex(&mut finite);
    Ok(Some(PencilSpectrum {
        finite,
        infinite: n - r,
        shift: c64(0.0, 0.0),
    }))
}

/// Unit (Euclidean) null vector of `A - λE`, taken as the smallest right singular vector.
pub fn pencil_eigenvector(a: &ComplexMatrix, e: &ComplexMatrix, lambda: Complex64) -> ComplexMatrix {
    smallest_singular(&(a - e * lambda)).1
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_xoshiro::Xoshiro256PlusPlus;

    fn random(rng: &mut Xoshiro256PlusPlus, r: usize, c: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(r, c, |_, _| c64(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
    }

    fn random_hpd(rng: &mut Xoshiro256PlusPlus, n: usize) -> WeightedSpace {
        let a = random(rng, n, n);
        let g = a.adjoint() * &a + identity(n);
        WeightedSpace::new((&g + g.adjoint()).scale(0.5)).unwrap()
    }

    fn real(rows: &[&[f64]]) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows.len(), rows[0].len(), |i, j| c64(rows[i][j], 0.0))
    }

    #[test]
    fn adjoint_identity_case() {
        let w = WeightedSpace::identity(2);
        let a = identity(2);
        assert_eq!(weighted_adjoint(&a, &w, &w).unwrap(), identity(2));
    }

    #[test]
    fn adjoint_plain_conjugate_transpose() {
        let w = WeightedSpace::identity(2);
        let a = real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let b = weighted_adjoint(&a, &w, &w).unwrap();
        assert_eq!(b, real(&[&[0.0, 0.0], &[1.0, 0.0]]));
    }

    #[test]
    fn adjoint_satisfies_weighted_pairing() {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(11);
        let w_out = random_hpd(&mut rng, 3);
        let w_in = random_hpd(&mut rng, 2);
        let a = random(&mut rng, 3, 2);
        let b = weighted_adjoint(&a, &w_out, &w_in).unwrap();
        assert_eq!(b.shape(), (2, 3));
        for _ in 0..10 {
            let x = random(&mut rng, 2, 1);
            let y = random(&mut rng, 3, 1);
            let lhs = w_out.inner(&(&a * &x), &y);
            let rhs = w_in.inner(&x, &(&b * &y));
            assert!((lhs - rhs).norm() < 1e-13, "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn adjoint_rejects_bad_shape() {
        let w2 = WeightedSpace::identity(2);
        let w3 = WeightedSpace::identity(3);
        assert!(matches!(weighted_adjoint(&identity(2), &w3, &w2), Err(Error::Shape { .. })));
    }

    #[test]
    fn gram_validation() {
        assert!(WeightedSpace::new(real(&[&[1.0, 2.0], &[0.0, 1.0]])).is_err());
        assert!(WeightedSpace::new(real(&[&[1.0, 0.0], &[0.0, -1.0]])).is_err());
        assert!(WeightedSpace::diagonal(&[0.5, 2.0]).is_ok());
        assert!(WeightedSpace::diagonal(&[0.5, 0.0]).is_err());
    }

    #[test]
    fn solve_small_cases() {
        let e1 = real(&[&[1.0], &[0.0], &[0.0]]);
        assert_eq!(solve(&identity(3), &e1).unwrap(), e1);
        let a = real(&[&[2.0, 0.0], &[0.0, 4.0]]);
        let x = solve(&a, &real(&[&[2.0], &[8.0]])).unwrap();
        assert!((x - real(&[&[1.0], &[2.0]])).norm() < 1e-15);
    }

    #[test]
    fn solve_round_trip_20() {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(5);
        let a = random(&mut rng, 20, 20) + identity(20).scale(3.0);
        let x0 = random(&mut rng, 20, 2);
        let x = solve(&a, &(&a * &x0)).unwrap();
        assert!((x - &x0).norm() / x0.norm() < 1e-11);
    }

    #[test]
    fn solve_refuses_singular() {
        let a = real(&[&[1.0, 2.0], &[2.0, 4.0]]);
        match solve(&a, &real(&[&[1.0], &[1.0]])) {
            Err(Error::Singular { rcond, .. }) => assert!(rcond < 1e-14),
            other => panic!("expected singularity error, got {other:?}"),
        }
    }

    #[test]
    fn null_basis_cases() {
        let a = real(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let k = null_basis(&a, DEFAULT_RANK_TOL);
        assert_eq!(k.ncols(), 1);
        assert!((k[(0, 0)].norm()) < 1e-15 && (k[(1, 0)].norm() - 1.0).abs() < 1e-15);
        assert_eq!(null_basis(&identity(3), DEFAULT_RANK_TOL).ncols(), 0);
    }

    #[test]
    fn null_basis_of_rank_one_outer_product() {
        let u = real(&[&[1.0], &[2.0], &[-1.0]]);
        let v = real(&[&[0.5], &[-1.0], &[3.0]]);
        let a = &u * v.transpose();
        let k = null_basis(&a, DEFAULT_RANK_TOL);
        assert_eq!(k.ncols(), 2);
        // orthogonal to v (the null space of u v^T is v-perp for real v)
        assert!((v.transpose() * &k).norm() < 1e-14);
        assert!((k.adjoint() * &k - identity(2)).norm() < 1e-14);
        assert!((&a * &k).norm() < 1e-14);
    }

    #[test]
    fn rank_cases() {
        assert_eq!(rank(&identity(3), DEFAULT_RANK_TOL), 3);
        assert_eq!(rank(&zeros(3, 4), DEFAULT_RANK_TOL), 0);
        let wide = real(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]);
        assert_eq!(rank(&wide, DEFAULT_RANK_TOL), 2);
        assert_eq!(null_basis(&wide, DEFAULT_RANK_TOL).ncols(), 1);
    }

    #[test]
    fn pencil_diagonal() {
        let spec = pencil_eigenvalues(&real(&[&[1.0, 0.0], &[0.0, 2.0]]), &identity(2)).unwrap();
        assert_eq!(spec.infinite, 0);
        assert!((spec.finite[0] - c64(1.0, 0.0)).norm() < 1e-13);
        assert!((spec.finite[1] - c64(2.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn pencil_singular_e_has_infinite_eigenvalue() {
        let spec = pencil_eigenvalues(&identity(2), &real(&[&[1.0, 0.0], &[0.0, 0.0]])).unwrap();
        assert_eq!(spec.infinite, 1);
        assert_eq!(spec.finite.len(), 1);
        assert!((spec.finite[0] - c64(1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn complex_eigenvalues_of_rotation() {
        let ev = eigenvalues(&real(&[&[0.0, -1.0], &[1.0, 0.0]])).unwrap();
        let mut ev = ev;
        sort_lex(&mut ev);
        assert!((ev[0] - c64(0.0, -1.0)).norm() < 1e-14);
        assert!((ev[1] - c64(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn orthonormal_frame_preserves_self_adjointness() {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(3);
        let w = random_hpd(&mut rng, 4);
        let a = random(&mut rng, 4, 4);
        let sa = &a + weighted_adjoint(&a, &w, &w).unwrap();
        let f = w.to_orthonormal_frame(&sa);
        assert!((&f - f.adjoint()).norm() < 1e-12 * f.norm());
    }
}
