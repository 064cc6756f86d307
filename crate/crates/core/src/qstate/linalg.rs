//! Dense complex linear-algebra kernels used by the state and metric code.
//!
//! Matrices are small (Hilbert dimension at most [`MAX_DIM`]), so everything is
//! dense `DMatrix<Complex64>` and Hermitian problems go through nalgebra's
//! symmetric eigensolver.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix.
pub type CMatrix = DMatrix<Complex64>;
/// Dense complex column vector.
pub type CVector = DVector<Complex64>;

/// Largest supported Hilbert-space dimension.
pub const MAX_DIM: usize = 16;

/// Hermiticity tolerance accepted by the eigensolver.
pub const HERMITIAN_INPUT_TOL: f64 = 1e-8;

/// Eigenvalues in `[-PSD_CLAMP_TOL, 0)` are treated as roundoff and clamped to zero.
pub const PSD_CLAMP_TOL: f64 = 1e-10;

/// Positive eigenvalues below this fraction of the spectral radius are roundoff
/// from rank-deficient inputs. Left in place, their square roots (~1e-8) would
/// leak into fidelities of pure states.
const SQRT_NOISE_FLOOR: f64 = 1e-14;

/// Eigen-decomposition of a Hermitian matrix.
///
/// Eigenvalues are sorted in descending order; column `k` of `eigenvectors`
/// belongs to `eigenvalues[k]`.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V f(Λ) V†` for a real function of the eigenvalues.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.dim();
        let mut out = CMatrix::zeros(n, n);
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let w = f(lambda);
            if w == 0.0 {
                continue;
            }
            let v = self.eigenvectors.column(k);
            for j in 0..n {
                let vj = v[j].conj() * w;
                for i in 0..n {
                    out[(i, j)] += v[i] * vj;
                }
            }
        }
        out
    }

    /// Orthogonal projector onto the span of the eigenvectors selected by `keep`.
    pub fn projector(&self, keep: impl Fn(f64) -> bool) -> CMatrix {
        self.map(|l| if keep(l) { 1.0 } else { 0.0 })
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.map(|l| l)
    }
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Largest entrywise modulus of `m - m†`.
pub fn hermitian_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `(m + m†) / 2`.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

fn check_square(m: &CMatrix) -> Result<usize> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::dims(format!(
            "matrix is {}x{}, expected square",
            n,
            m.ncols()
        )));
    }
    if n == 0 {
        return Err(Error::degenerate("empty matrix"));
    }
    if n > MAX_DIM {
        return Err(Error::dims(format!(
            "dimension {n} exceeds maximum {MAX_DIM}"
        )));
    }
    Ok(n)
}

/// Eigen-decomposes a Hermitian matrix.
///
/// Fails with [`Error::NumericalDomain`] if `m` deviates from Hermitian by more
/// than [`HERMITIAN_INPUT_TOL`], or if it contains non-finite entries.
pub fn eigendecompose_hermitian(m: &CMatrix) -> Result<Spectrum> {
    let n = check_square(m)?;
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::domain("matrix has non-finite entries"));
    }
    let defect = hermitian_defect(m);
    if defect > HERMITIAN_INPUT_TOL {
        return Err(Error::domain(format!(
            "matrix is not Hermitian (max |M - M†| = {defect:.3e})"
        )));
    }
    let eig = SymmetricEigen::new(hermitian_part(m));

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut eigenvectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// Principal square root of a positive-semidefinite Hermitian matrix.
///
/// Eigenvalues in `[-1e-10, 0)` are clamped to zero; anything more negative is
/// a [`Error::NumericalDomain`] failure.
pub fn sqrt_psd(m: &CMatrix) -> Result<CMatrix> {
    let spectrum = eigendecompose_hermitian(m)?;
    sqrt_of_spectrum(&spectrum)
}

pub(crate) fn sqrt_of_spectrum(spectrum: &Spectrum) -> Result<CMatrix> {
    let roots = psd_roots(&spectrum.eigenvalues)?;
    let n = spectrum.dim();
    let mut out = CMatrix::zeros(n, n);
    for (k, &r) in roots.iter().enumerate() {
        if r == 0.0 {
            continue;
        }
        let v = spectrum.eigenvectors.column(k);
        for j in 0..n {
            let vj = v[j].conj() * r;
            for i in 0..n {
                out[(i, j)] += v[i] * vj;
            }
        }
    }
    Ok(out)
}

/// Square roots of a PSD spectrum, with the clamping rules of [`sqrt_psd`].
pub(crate) fn psd_roots(eigenvalues: &[f64]) -> Result<Vec<f64>> {
    let scale = eigenvalues.iter().fold(0.0_f64, |acc, l| acc.max(l.abs()));
    let floor = SQRT_NOISE_FLOOR * scale;
    eigenvalues
        .iter()
        .map(|&l| {
            if l < -PSD_CLAMP_TOL {
                Err(Error::domain(format!(
                    "matrix is not positive semidefinite (eigenvalue {l:.3e})"
                )))
            } else if l <= floor {
                Ok(0.0)
            } else {
                Ok(l.sqrt())
            }
        })
        .collect()
}
