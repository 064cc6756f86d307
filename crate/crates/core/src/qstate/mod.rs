//! Finite-dimensional quantum states on composite Hilbert spaces.
//!
//! Subsystems are ordered signal (or return mode) first, idler second. A
//! composite basis index is the mixed-radix number whose most significant
//! digit belongs to the first subsystem, matching the Kronecker product.

pub mod linalg;

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use linalg::{
    eigendecompose_hermitian, hermitian_defect, hermitian_part, kron, trace, CMatrix, CVector,
    MAX_DIM,
};

pub use linalg::{sqrt_psd, Spectrum};

/// Tolerance for the Hermitian, unit-trace, PSD and normalization invariants.
pub const STATE_TOL: f64 = 1e-9;

fn check_dims(dims: &[usize], len: usize) -> Result<()> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::dims(format!(
            "invalid subsystem dimensions {dims:?}"
        )));
    }
    let total = dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d));
    match total {
        Some(t) if t == len => {}
        _ => {
            return Err(Error::dims(format!(
                "subsystem dimensions {dims:?} do not multiply to {len}"
            )))
        }
    }
    if len > MAX_DIM {
        return Err(Error::dims(format!(
            "dimension {len} exceeds maximum {MAX_DIM}"
        )));
    }
    Ok(())
}

/// Normalized state vector with its subsystem structure.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: CVector,
    dims: Vec<usize>,
}

impl PureState {
    /// Builds a state from unnormalized amplitudes, dividing by their norm.
    pub fn new(amplitudes: impl Into<Vec<Complex64>>, dims: &[usize]) -> Result<Self> {
        let amps = CVector::from_vec(amplitudes.into());
        check_dims(dims, amps.len())?;
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::degenerate("amplitudes must be finite"));
        }
        let norm = amps.norm();
        if norm == 0.0 {
            return Err(Error::degenerate("zero amplitude vector"));
        }
        Ok(Self {
            amplitudes: amps.unscale(norm),
            dims: dims.to_vec(),
        })
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        if self.dims != other.dims {
            return Err(Error::dims(format!(
                "inner product of {:?} and {:?} states",
                self.dims, other.dims
            )));
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// Copy with amplitudes replaced; the caller guarantees the norm is unchanged.
    pub(crate) fn with_amplitudes(&self, amplitudes: CVector) -> Self {
        Self {
            amplitudes,
            dims: self.dims.clone(),
        }
    }
}

/// `pure_state(amplitudes, dims)`: normalized [`PureState`].
pub fn pure_state(amplitudes: impl Into<Vec<Complex64>>, dims: &[usize]) -> Result<PureState> {
    PureState::new(amplitudes, dims)
}

/// The maximally entangled signal-idler pair `(|00⟩ + |11⟩)/√2`.
pub fn bell_phi_plus() -> PureState {
    let a = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let z = Complex64::new(0.0, 0.0);
    PureState {
        amplitudes: CVector::from_vec(vec![a, z, z, a]),
        dims: vec![2, 2],
    }
}

/// Trace-one positive-semidefinite Hermitian operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: CMatrix,
    dims: Vec<usize>,
}

impl DensityOperator {
    /// Validates `matrix` against the density-operator invariants.
    ///
    /// The stored matrix is the Hermitian part of the input.
    pub fn new(matrix: CMatrix, dims: &[usize]) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::dims(format!(
                "density matrix is {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        check_dims(dims, matrix.nrows())?;
        let defect = hermitian_defect(&matrix);
        if defect.is_nan() || defect > STATE_TOL {
            return Err(Error::domain(format!(
                "operator is not Hermitian (max |M - M†| = {defect:.3e})"
            )));
        }
        let matrix = hermitian_part(&matrix);
        let tr = trace(&matrix).re;
        if tr.is_nan() || (tr - 1.0).abs() > STATE_TOL {
            return Err(Error::domain(format!("operator trace is {tr}, expected 1")));
        }
        let spectrum = eigendecompose_hermitian(&matrix)?;
        let min = spectrum.eigenvalues.last().copied().unwrap_or(0.0);
        if min < -STATE_TOL {
            return Err(Error::domain(format!(
                "operator is not positive semidefinite (eigenvalue {min:.3e})"
            )));
        }
        Ok(Self {
            matrix,
            dims: dims.to_vec(),
        })
    }

    /// Real diagonal state `diag(values)` on a single subsystem.
    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let diag =
            CVector::from_iterator(values.len(), values.iter().map(|&v| Complex64::new(v, 0.0)));
        Self::new(CMatrix::from_diagonal(&diag), &[values.len()])
    }

    /// `I/n` on the given subsystem structure.
    pub fn maximally_mixed(dims: &[usize]) -> Result<Self> {
        let n: usize = dims.iter().product();
        Self::new(CMatrix::identity(n, n).unscale(n as f64), dims)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        trace(&self.matrix).re
    }

    /// `Tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn spectrum(&self) -> Result<Spectrum> {
        eigendecompose_hermitian(&self.matrix)
    }

    /// Convex combination `w·self + (1-w)·other`.
    pub fn mix(&self, w: f64, other: &DensityOperator) -> Result<Self> {
        if self.dims != other.dims {
            return Err(Error::dims(format!(
                "cannot mix {:?} and {:?} operators",
                self.dims, other.dims
            )));
        }
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::degenerate(format!(
                "mixing weight {w} outside [0, 1]"
            )));
        }
        Self::new(
            self.matrix.scale(w) + other.matrix.scale(1.0 - w),
            &self.dims,
        )
    }

    /// Conjugation `U ρ U†`.
    pub fn conjugate_by(&self, unitary: &CMatrix) -> Result<Self> {
        if unitary.nrows() != self.dim() || unitary.ncols() != self.dim() {
            return Err(Error::dims("unitary does not match operator dimension"));
        }
        Self::new(unitary * &self.matrix * unitary.adjoint(), &self.dims)
    }
}

/// Rank-one projector `|ψ⟩⟨ψ|`.
pub fn density_from_pure(psi: &PureState) -> DensityOperator {
    let a = psi.amplitudes();
    DensityOperator {
        matrix: a * a.adjoint(),
        dims: psi.dims.clone(),
    }
}

/// Tensor product `a ⊗ b` with subsystem lists concatenated.
pub fn tensor(a: &DensityOperator, b: &DensityOperator) -> Result<DensityOperator> {
    let dims: Vec<usize> = a.dims.iter().chain(&b.dims).copied().collect();
    DensityOperator::new(kron(&a.matrix, &b.matrix), &dims)
}

/// Reduced state on the subsystems listed in `keep` (in their original order).
pub fn partial_trace(rho: &DensityOperator, keep: &[usize]) -> Result<DensityOperator> {
    let dims = rho.dims();
    if keep.is_empty() {
        return Err(Error::dims(
            "partial trace must keep at least one subsystem",
        ));
    }
    let mut kept = vec![false; dims.len()];
    for &k in keep {
        if k >= dims.len() || kept[k] {
            return Err(Error::dims(format!(
                "invalid subsystem index {k} for dimensions {dims:?}"
            )));
        }
        kept[k] = true;
    }

    // Per full basis index: (index within kept subsystems, index within traced ones).
    let n = rho.dim();
    let split: Vec<(usize, usize)> = (0..n)
        .map(|idx| {
            let mut rem = idx;
            let (mut k_idx, mut k_scale, mut t_idx, mut t_scale) = (0, 1, 0, 1);
            for (s, &d) in dims.iter().enumerate().rev() {
                let digit = rem % d;
                rem /= d;
                if kept[s] {
                    k_idx += digit * k_scale;
                    k_scale *= d;
                } else {
                    t_idx += digit * t_scale;
                    t_scale *= d;
                }
            }
            (k_idx, t_idx)
        })
        .collect();

    let out_dims: Vec<usize> = dims
        .iter()
        .enumerate()
        .filter(|(s, _)| kept[*s])
        .map(|(_, &d)| d)
        .collect();
    let m: usize = out_dims.iter().product();
    let mut out = CMatrix::zeros(m, m);
    for (i, &(ki, ti)) in split.iter().enumerate() {
        for (j, &(kj, tj)) in split.iter().enumerate() {
            if ti == tj {
                out[(ki, kj)] += rho.matrix[(i, j)];
            }
        }
    }
    DensityOperator::new(out, &out_dims)
}
