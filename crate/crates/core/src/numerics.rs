//! Dense linear-algebra substrate.
//!
//! Complex matrices are plain `nalgebra` dynamic matrices over `Complex64`.
//! The module adds what the orbit computations need on top of them: Kronecker
//! products, fixed real coordinatizations of the Hermitian and anti-Hermitian
//! matrix spaces, and a tolerance-governed rank/kernel routine.
//!
//! Basis ordering, used everywhere a `d x d` matrix is mapped to `d^2` reals:
//! first the `d` diagonal slots, then for each pair `j < k` in lexicographic
//! order two slots (the "real" and the "imaginary" off-diagonal direction).

use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type RealMatrix = DMatrix<f64>;

pub const DEFAULT_RELATIVE_CUTOFF: f64 = 1e-9;
pub const DEFAULT_MIN_GAP_WARN: f64 = 1e4;

/// Environment variable overriding the default relative rank cutoff.
pub const TOL_ENV_VAR: &str = "LU_ORBIT_TOL";

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Numerical rank policy: singular values above `relative_cutoff * sigma_max`
/// count towards the rank; a gap below `min_gap_warn` is flagged as ambiguous.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TolerancePolicy {
    relative_cutoff: f64,
    min_gap_warn: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        Self {
            relative_cutoff: DEFAULT_RELATIVE_CUTOFF,
            min_gap_warn: DEFAULT_MIN_GAP_WARN,
        }
    }
}

impl TolerancePolicy {
    pub fn new(relative_cutoff: f64, min_gap_warn: f64) -> Result<Self> {
        if !(relative_cutoff > 0.0 && relative_cutoff < 1.0) {
            return Err(Error::InvalidTolerance(format!(
                "relative cutoff must lie in (0, 1), got {relative_cutoff}"
            )));
        }
        if !(min_gap_warn.is_finite() && min_gap_warn > 0.0) {
            return Err(Error::InvalidTolerance(format!(
                "gap warning threshold must be positive, got {min_gap_warn}"
            )));
        }
        Ok(Self {
            relative_cutoff,
            min_gap_warn,
        })
    }

    pub fn with_relative_cutoff(relative_cutoff: f64) -> Result<Self> {
        Self::new(relative_cutoff, DEFAULT_MIN_GAP_WARN)
    }

    /// Default policy, with the cutoff taken from `LU_ORBIT_TOL` when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(TOL_ENV_VAR) {
            Ok(raw) => {
                let cutoff: f64 = raw.trim().parse().map_err(|_| {
                    Error::InvalidTolerance(format!("{TOL_ENV_VAR}=`{raw}` is not a number"))
                })?;
                Self::with_relative_cutoff(cutoff)
            }
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn relative_cutoff(&self) -> f64 {
        self.relative_cutoff
    }

    pub fn min_gap_warn(&self) -> f64 {
        self.min_gap_warn
    }
}

/// Outcome of a numerical rank/kernel computation.
#[derive(Debug, Clone)]
pub struct RankReport<T: ComplexField<RealField = f64>> {
    pub rank: usize,
    /// Orthonormal basis of the numerical null space (right singular vectors).
    pub kernel_basis: Vec<DVector<T>>,
    /// Descending; one entry per column of the input.
    pub singular_values: Vec<f64>,
    /// Smallest retained over largest discarded singular value.
    pub gap: f64,
    pub gap_warning: bool,
    /// Largest `|M x| / max(sigma_max, scale)` over the kernel basis.
    pub max_residual: f64,
}

impl<T: ComplexField<RealField = f64>> RankReport<T> {
    pub fn nullity(&self) -> usize {
        self.kernel_basis.len()
    }
}

pub fn ensure_finite(m: &ComplexMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

pub fn identity(d: usize) -> ComplexMatrix {
    ComplexMatrix::identity(d, d)
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    ensure_finite(a)?;
    ensure_finite(b)?;
    Ok(a.kronecker(b))
}

/// Kronecker product of a list of factors; the empty product is `[1]`.
pub fn kron_all<'a, I>(factors: I) -> Result<ComplexMatrix>
where
    I: IntoIterator<Item = &'a ComplexMatrix>,
{
    let mut acc = ComplexMatrix::from_element(1, 1, ONE);
    for f in factors {
        acc = kron(&acc, f)?;
    }
    Ok(acc)
}

/// Commutator `a b - b a`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a * b - b * a
}

pub fn frobenius_norm(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest entrywise deviation `|m - m†|`.
pub fn hermiticity_residual(m: &ComplexMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for r in 0..n {
        for c in r..n {
            worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    worst
}

/// Largest entrywise deviation `|m + m†|`.
pub fn antihermiticity_residual(m: &ComplexMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for r in 0..n {
        for c in r..n {
            worst = worst.max((m[(r, c)] + m[(c, r)].conj()).norm());
        }
    }
    worst
}

/// `|u† u - I|_F`, or infinity for non-square input.
pub fn unitarity_defect(u: &ComplexMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    frobenius_norm(&(u.adjoint() * u - identity(u.nrows())))
}

pub fn ensure_hermitian(m: &ComplexMatrix, tol: f64) -> Result<()> {
    ensure_finite(m)?;
    let residual = hermiticity_residual(m);
    if residual > tol {
        return Err(Error::NotHermitian { residual });
    }
    Ok(())
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Vec<f64> {
    let mut eig: Vec<f64> = h.clone().symmetric_eigenvalues().iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    eig
}

/// `(m + m†) / 2`.
pub fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()).scale(0.5)
}

fn matrix_unit(d: usize, r: usize, c: usize) -> ComplexMatrix {
    let mut e = ComplexMatrix::zeros(d, d);
    e[(r, c)] = ONE;
    e
}

/// Orthonormal basis of `u(d)` under `<A, B> = Re tr(A† B)`.
///
/// Order: `i E_jj` for each `j`, then for each `j < k`
/// `(E_jk - E_kj)/√2` followed by `i (E_jk + E_kj)/√2`.
pub fn antihermitian_basis(d: usize) -> Result<Vec<ComplexMatrix>> {
    if d == 0 {
        return Err(Error::InvalidArgument("basis dimension must be at least 1".into()));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut basis = Vec::with_capacity(d * d);
    for j in 0..d {
        basis.push(matrix_unit(d, j, j) * I);
    }
    for j in 0..d {
        for k in (j + 1)..d {
            let ejk = matrix_unit(d, j, k);
            let ekj = matrix_unit(d, k, j);
            basis.push((&ejk - &ekj).scale(s));
            basis.push((&ejk + &ekj) * Complex64::new(0.0, s));
        }
    }
    Ok(basis)
}

/// Coordinates of an anti-Hermitian matrix in [`antihermitian_basis`] order.
pub(crate) fn antihermitian_coords(a: &ComplexMatrix) -> Vec<f64> {
    let d = a.nrows();
    let r2 = std::f64::consts::SQRT_2;
    let mut out = Vec::with_capacity(d * d);
    for j in 0..d {
        out.push(a[(j, j)].im);
    }
    for j in 0..d {
        for k in (j + 1)..d {
            let z = a[(j, k)];
            out.push(r2 * z.re);
            out.push(r2 * z.im);
        }
    }
    out
}

/// Inverse of [`antihermitian_coords`].
pub(crate) fn antihermitian_from_coords(coords: &[f64], d: usize) -> ComplexMatrix {
    debug_assert_eq!(coords.len(), d * d);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut a = ComplexMatrix::zeros(d, d);
    for j in 0..d {
        a[(j, j)] = Complex64::new(0.0, coords[j]);
    }
    let mut idx = d;
    for j in 0..d {
        for k in (j + 1)..d {
            let z = Complex64::new(coords[idx] * s, coords[idx + 1] * s);
            a[(j, k)] = z;
            a[(k, j)] = -z.conj();
            idx += 2;
        }
    }
    a
}

/// Isometric coordinates of a Hermitian matrix, with no hermiticity check.
/// Only the diagonal and the strict upper triangle are read.
pub(crate) fn hermitian_coords_unchecked(h: &ComplexMatrix, out: &mut [f64]) {
    let d = h.nrows();
    let r2 = std::f64::consts::SQRT_2;
    for j in 0..d {
        out[j] = h[(j, j)].re;
    }
    let mut idx = d;
    for j in 0..d {
        for k in (j + 1)..d {
            let z = h[(j, k)];
            out[idx] = r2 * z.re;
            out[idx + 1] = r2 * z.im;
            idx += 2;
        }
    }
}

/// Real coordinates of a Hermitian `D x D` matrix: the diagonal, then
/// `√2 Re` and `√2 Im` of each strictly-upper entry. The map is an isometry
/// from the Frobenius norm to the Euclidean norm.
pub fn hermitian_to_real_coords(h: &ComplexMatrix) -> Result<DVector<f64>> {
    ensure_hermitian(h, 1e-12)?;
    let d = h.nrows();
    let mut out = DVector::zeros(d * d);
    hermitian_coords_unchecked(h, out.as_mut_slice());
    Ok(out)
}

/// Inverse of [`hermitian_to_real_coords`].
pub fn real_coords_to_hermitian(coords: &DVector<f64>) -> Result<ComplexMatrix> {
    let len = coords.len();
    let d = (len as f64).sqrt().round() as usize;
    if d * d != len || d == 0 {
        return Err(Error::InvalidArgument(format!(
            "coordinate vector length {len} is not a positive square"
        )));
    }
    if coords.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut h = ComplexMatrix::zeros(d, d);
    for j in 0..d {
        h[(j, j)] = Complex64::new(coords[j], 0.0);
    }
    let mut idx = d;
    for j in 0..d {
        for k in (j + 1)..d {
            let z = Complex64::new(coords[idx] * s, coords[idx + 1] * s);
            h[(j, k)] = z;
            h[(k, j)] = z.conj();
            idx += 2;
        }
    }
    Ok(h)
}

/// Numerical rank, singular spectrum and an orthonormal kernel basis.
///
/// Works for real and complex matrices. Wide inputs are padded with zero rows
/// so that a full set of right singular vectors is always available.
pub fn kernel<T>(m: &DMatrix<T>, tol: &TolerancePolicy) -> Result<RankReport<T>>
where
    T: ComplexField<RealField = f64>,
{
    kernel_with_scale(m, tol, 0.0)
}

/// [`kernel`] with the cutoff measured against `max(sigma_max, scale)`.
///
/// `scale` is the magnitude the matrix entries are computed from; it keeps
/// pure rounding noise (a matrix that should be zero) at rank 0. When every
/// singular value is discarded the reported gap is the threshold over the
/// largest singular value, or infinity for an exact zero matrix.
pub fn kernel_with_scale<T>(m: &DMatrix<T>, tol: &TolerancePolicy, scale: f64) -> Result<RankReport<T>>
where
    T: ComplexField<RealField = f64>,
{
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return Err(Error::EmptyMatrix { rows, cols });
    }
    if m.iter().any(|x| !x.clone().is_finite()) {
        return Err(Error::NonFinite);
    }

    let work = if rows < cols {
        let mut padded = DMatrix::<T>::zeros(cols, cols);
        padded.view_mut((0, 0), (rows, cols)).copy_from(m);
        padded
    } else {
        m.clone()
    };

    let svd = nalgebra::SVD::try_new(work, false, true, f64::EPSILON, 0).ok_or(Error::SvdFailed)?;
    let v_t = svd.v_t.as_ref().ok_or(Error::SvdFailed)?;
    let singular_values: Vec<f64> = svd.singular_values.iter().copied().collect();

    let sigma_max = singular_values[0];
    let reference = sigma_max.max(scale);
    let threshold = tol.relative_cutoff * reference;
    let rank = if sigma_max > 0.0 {
        singular_values.iter().take_while(|&&s| s > threshold).count()
    } else {
        0
    };

    let gap = if sigma_max == 0.0 || rank == cols {
        f64::INFINITY
    } else if rank == 0 {
        threshold / sigma_max
    } else {
        let discarded = singular_values[rank];
        if discarded > 0.0 {
            singular_values[rank - 1] / discarded
        } else {
            f64::INFINITY
        }
    };

    let kernel_basis: Vec<DVector<T>> = (rank..cols)
        .map(|j| v_t.row(j).adjoint().into_owned())
        .collect();

    let max_residual = if reference > 0.0 {
        kernel_basis
            .iter()
            .map(|x| (m * x).norm() / reference)
            .fold(0.0, f64::max)
    } else {
        0.0
    };

    Ok(RankReport {
        rank,
        kernel_basis,
        singular_values,
        gap,
        gap_warning: gap < tol.min_gap_warn,
        max_residual,
    })
}

/// Row-major `{re, im}` pair of nested arrays, the interchange form of a
/// complex matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let rows = |f: fn(&Complex64) -> f64| {
            (0..m.nrows())
                .map(|r| (0..m.ncols()).map(|c| f(&m[(r, c)])).collect())
                .collect()
        };
        Self {
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let rows = self.re.len();
        if rows == 0 || self.im.len() != rows {
            return Err(Error::InvalidArgument(
                "matrix needs the same non-zero number of `re` and `im` rows".into(),
            ));
        }
        let cols = self.re[0].len();
        let ragged = self
            .re
            .iter()
            .chain(self.im.iter())
            .any(|row| row.len() != cols);
        if cols == 0 || ragged {
            return Err(Error::InvalidArgument("matrix rows have inconsistent lengths".into()));
        }
        let m = ComplexMatrix::from_fn(rows, cols, |r, c| {
            Complex64::new(self.re[r][c], self.im[r][c])
        });
        ensure_finite(&m)?;
        Ok(m)
    }
}

/// Largest sine of the principal angles between two subspaces, each given by
/// an orthonormal basis. Returns 1 when the dimensions differ.
pub fn max_principal_sine(a: &[DVector<f64>], b: &[DVector<f64>]) -> f64 {
    if a.len() != b.len() {
        return 1.0;
    }
    a.iter()
        .map(|x| {
            let mut r = x.clone();
            for y in b {
                r -= y * y.dot(x);
            }
            r.norm()
        })
        .fold(0.0, f64::max)
        .min(1.0)
}
