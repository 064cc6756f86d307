//! Binary hypothesis test between "no target" (H0) and "target" (H1).
//!
//! The optimal test projects onto the positive eigenspace of the
//! prior-weighted difference `π₁ρ₁ − π₀ρ₀`. The same construction with a
//! free threshold `ρ₁ − tρ₀` traces out the quantum Neyman–Pearson ROC.

mod montecarlo;

pub use montecarlo::{
    derive_seed, empirical_error, run_empirical, simulate_trials, simulate_trials_with,
    EmpiricalRun, Hypothesis, TrialOutcome, BATCH_TRIALS,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{clamp_checked, Priors};
use crate::parallel::{try_map_slice, Execution};
use crate::qstate::linalg::{
    eigendecompose_hermitian, hermitian_defect, hermitian_part, max_abs_diff, trace, CMatrix,
};
use crate::qstate::DensityOperator;

/// Eigenvalues of the decision operator within this distance of zero go to H0.
pub const TIE_TOL: f64 = 1e-10;

/// Two-outcome projective measurement `{Π₀, Π₁}` with `Π₀ + Π₁ = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryMeasurement {
    project_h1: CMatrix,
    project_h0: CMatrix,
}

impl BinaryMeasurement {
    /// Builds the measurement from its "target present" projector.
    pub fn from_projector(project_h1: CMatrix) -> Result<Self> {
        let n = project_h1.nrows();
        if project_h1.ncols() != n || n == 0 {
            return Err(Error::dims("projector must be a non-empty square matrix"));
        }
        if hermitian_defect(&project_h1) > 1e-9 {
            return Err(Error::domain("projector is not Hermitian"));
        }
        let p1 = hermitian_part(&project_h1);
        if max_abs_diff(&(&p1 * &p1), &p1) > 1e-8 {
            return Err(Error::domain("projector is not idempotent"));
        }
        let p0 = CMatrix::identity(n, n) - &p1;
        Ok(Self {
            project_h1: p1,
            project_h0: p0,
        })
    }

    /// Decide H1 on the eigenvectors of `decision` with eigenvalue above [`TIE_TOL`].
    fn positive_part_of(decision: &CMatrix) -> Result<Self> {
        let spectrum = eigendecompose_hermitian(decision)?;
        let p1 = spectrum.projector(|l| l > TIE_TOL);
        let p0 = spectrum.projector(|l| l <= TIE_TOL);
        Ok(Self {
            project_h1: p1,
            project_h0: p0,
        })
    }

    pub fn project_h1(&self) -> &CMatrix {
        &self.project_h1
    }

    pub fn project_h0(&self) -> &CMatrix {
        &self.project_h0
    }

    pub fn dim(&self) -> usize {
        self.project_h1.nrows()
    }

    /// `π₀·Tr(Π₁ρ₀) + π₁·Tr(Π₀ρ₁)`.
    pub fn error_probability(
        &self,
        rho0: &DensityOperator,
        rho1: &DensityOperator,
        priors: Priors,
    ) -> Result<f64> {
        priors.validate()?;
        let false_alarm = born_probability(self, rho0)?;
        let miss = 1.0 - born_probability(self, rho1)?;
        Ok(priors.h0 * false_alarm + priors.h1 * miss)
    }
}

fn same_space(a: &DensityOperator, b: &DensityOperator) -> Result<()> {
    if a.dims() != b.dims() {
        return Err(Error::dims(format!(
            "hypotheses on {:?} and {:?}",
            a.dims(),
            b.dims()
        )));
    }
    Ok(())
}

/// Minimum-error measurement for the given priors.
pub fn helstrom_measurement(
    rho0: &DensityOperator,
    rho1: &DensityOperator,
    priors: Priors,
) -> Result<BinaryMeasurement> {
    priors.validate()?;
    same_space(rho0, rho1)?;
    let decision = rho1.matrix().scale(priors.h1) - rho0.matrix().scale(priors.h0);
    BinaryMeasurement::positive_part_of(&decision)
}

/// Probability of the "target present" outcome, `Tr(Π₁ρ)`.
pub fn born_probability(m: &BinaryMeasurement, rho: &DensityOperator) -> Result<f64> {
    if m.dim() != rho.dim() {
        return Err(Error::dims(format!(
            "measurement of dimension {} applied to state of dimension {}",
            m.dim(),
            rho.dim()
        )));
    }
    let p = trace(&(m.project_h1() * rho.matrix())).re;
    clamp_checked(p, 0.0, 1.0, "Born probability")
}

/// One operating point of the threshold test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RocPoint {
    pub threshold: f64,
    pub p_false_alarm: f64,
    pub p_detection: f64,
}

/// Operating point for the test that decides H1 on the positive eigenspace of `ρ₁ − tρ₀`.
pub fn roc_point(
    rho0: &DensityOperator,
    rho1: &DensityOperator,
    threshold: f64,
) -> Result<RocPoint> {
    same_space(rho0, rho1)?;
    if !(threshold.is_finite() && threshold >= 0.0) {
        return Err(Error::degenerate(format!(
            "ROC threshold {threshold} must be finite and nonnegative"
        )));
    }
    let decision = rho1.matrix() - rho0.matrix().scale(threshold);
    let m = BinaryMeasurement::positive_part_of(&decision)?;
    Ok(RocPoint {
        threshold,
        p_false_alarm: born_probability(&m, rho0)?,
        p_detection: born_probability(&m, rho1)?,
    })
}

/// ROC curve over an ascending list of thresholds.
pub fn roc_sweep(
    rho0: &DensityOperator,
    rho1: &DensityOperator,
    thresholds: &[f64],
) -> Result<Vec<RocPoint>> {
    roc_sweep_with(rho0, rho1, thresholds, Execution::default())
}

pub fn roc_sweep_with(
    rho0: &DensityOperator,
    rho1: &DensityOperator,
    thresholds: &[f64],
    exec: Execution,
) -> Result<Vec<RocPoint>> {
    same_space(rho0, rho1)?;
    if let Some(&bad) = thresholds.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
        return Err(Error::degenerate(format!(
            "ROC threshold {bad} must be finite and nonnegative"
        )));
    }
    if thresholds.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::degenerate("ROC thresholds must be ascending"));
    }
    try_map_slice(exec, thresholds, |&t| roc_point(rho0, rho1, t))
}
