//! Test-only oracles that do not share code paths with the library kernels.
#![allow(clippy::needless_range_loop)]
#![allow(dead_code)]

use qradar::qstate::linalg::CMatrix;

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Eigenvalues of a Hermitian matrix `A + iB` via the real embedding
/// `[[A, -B], [B, A]]`, whose spectrum is that of `A + iB` with each value doubled.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let n = m.nrows();
    let mut big = vec![vec![0.0; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            let z = m[(i, j)];
            big[i][j] = z.re;
            big[i + n][j + n] = z.re;
            big[i][j + n] = -z.im;
            big[i + n][j] = z.im;
        }
    }
    jacobi_eigenvalues(big).into_iter().step_by(2).collect()
}

/// `Σ|λ|` of a Hermitian matrix via the Jacobi oracle.
pub fn trace_norm(m: &CMatrix) -> f64 {
    hermitian_eigenvalues(m).iter().map(|l| l.abs()).sum()
}

/// Fidelity of two pure states from their amplitude vectors, `|⟨a|b⟩|²`.
pub fn pure_overlap(a: &[num_complex::Complex64], b: &[num_complex::Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.conj() * y)
        .sum::<num_complex::Complex64>()
        .norm_sqr()
}
