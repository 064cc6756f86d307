//! Random matrices and states for property tests and benchmarks.
//!
//! Mixed states are drawn from the induced (Ginibre) ensemble, unitaries from
//! the Haar measure via a phase-corrected QR factorization.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::qstate::linalg::{hermitian_part, trace, CMatrix, CVector};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// `rows x cols` matrix of i.i.d. standard complex normal entries.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    DMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    hermitian_part(&ginibre(rng, n, n))
}

/// Random density matrix `G G† / Tr(G G†)` with `G` of shape `n x rank`.
///
/// `rank = None` gives a full-rank state.
pub fn random_density_matrix<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    rank: Option<usize>,
) -> CMatrix {
    let k = rank.unwrap_or(n).clamp(1, n);
    let g = ginibre(rng, n, k);
    let m = hermitian_part(&(&g * g.adjoint()));
    let tr = trace(&m).re;
    m.unscale(tr)
}

/// Haar-random normalized vector.
pub fn random_pure_amplitudes<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVector {
    let v = CVector::from_fn(n, |_, _| gaussian(rng));
    let norm = v.norm();
    v.unscale(norm)
}

/// Haar-random `n x n` unitary.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let qr = ginibre(rng, n, n).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    q
}

/// Random rank-`k` orthogonal projector (`k` may be 0 or `n`).
pub fn random_projector<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> CMatrix {
    let u = random_unitary(rng, n);
    let cols = u.columns(0, k.min(n));
    hermitian_part(&(cols * cols.adjoint()))
}
