//! Distinguishability of two density operators: trace distance, Uhlmann
//! fidelity and the Helstrom minimum error probability.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qstate::linalg::{eigendecompose_hermitian, psd_roots, sqrt_psd, CMatrix};
use crate::qstate::DensityOperator;

/// Roundoff window tolerated outside a closed range before failing.
pub const CLAMP_TOL: f64 = 1e-9;

/// Prior probabilities of the two hypotheses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Priors {
    pub h0: f64,
    pub h1: f64,
}

impl Priors {
    pub const EQUAL: Priors = Priors { h0: 0.5, h1: 0.5 };

    pub fn new(h0: f64, h1: f64) -> Result<Self> {
        let p = Priors { h0, h1 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.h0.is_finite()
            && self.h1.is_finite()
            && self.h0 >= 0.0
            && self.h1 >= 0.0
            && (self.h0 + self.h1 - 1.0).abs() <= CLAMP_TOL;
        if ok {
            Ok(())
        } else {
            Err(Error::degenerate(format!(
                "priors ({}, {}) must be nonnegative and sum to 1",
                self.h0, self.h1
            )))
        }
    }

    pub fn is_equal(&self) -> bool {
        self.h0 == 0.5 && self.h1 == 0.5
    }
}

impl Default for Priors {
    fn default() -> Self {
        Priors::EQUAL
    }
}

/// Clamps roundoff into `[lo, hi]`; anything further out is a bug upstream.
pub(crate) fn clamp_checked(x: f64, lo: f64, hi: f64, what: &str) -> Result<f64> {
    if x >= lo && x <= hi {
        Ok(x)
    } else if x >= lo - CLAMP_TOL && x < lo {
        Ok(lo)
    } else if x > hi && x <= hi + CLAMP_TOL {
        Ok(hi)
    } else {
        Err(Error::domain(format!("{what} = {x} outside [{lo}, {hi}]")))
    }
}

fn same_space(a: &DensityOperator, b: &DensityOperator) -> Result<()> {
    if a.dims() != b.dims() {
        return Err(Error::dims(format!(
            "operators on {:?} and {:?} are not comparable",
            a.dims(),
            b.dims()
        )));
    }
    Ok(())
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
pub(crate) fn hermitian_trace_norm(m: &CMatrix) -> Result<f64> {
    let spectrum = eigendecompose_hermitian(m)?;
    Ok(spectrum.eigenvalues.iter().map(|l| l.abs()).sum())
}

/// `½‖a − b‖₁`.
pub fn trace_distance(a: &DensityOperator, b: &DensityOperator) -> Result<f64> {
    same_space(a, b)?;
    let norm = hermitian_trace_norm(&(a.matrix() - b.matrix()))?;
    clamp_checked(0.5 * norm, 0.0, 1.0, "trace distance")
}

/// Uhlmann fidelity `(Tr √(√a · b · √a))²`.
pub fn fidelity(a: &DensityOperator, b: &DensityOperator) -> Result<f64> {
    same_space(a, b)?;
    let root_a = sqrt_psd(a.matrix())?;
    let inner = &root_a * b.matrix() * &root_a;
    let inner = (&inner + inner.adjoint()).scale(0.5);
    // Tr √M is the sum of the square roots of M's eigenvalues
    let spectrum = eigendecompose_hermitian(&inner)?;
    let root_trace: f64 = psd_roots(&spectrum.eigenvalues)?.iter().sum();
    clamp_checked(root_trace * root_trace, 0.0, 1.0, "fidelity")
}

/// Minimum error probability `½(1 − ‖π₁b − π₀a‖₁)` for discriminating `a`
/// (H0) from `b` (H1).
///
/// With equal priors this is computed as `½(1 − trace_distance(a, b))`.
pub fn helstrom_error(a: &DensityOperator, b: &DensityOperator, priors: Priors) -> Result<f64> {
    priors.validate()?;
    same_space(a, b)?;
    let pe = if priors.is_equal() {
        0.5 * (1.0 - trace_distance(a, b)?)
    } else {
        let weighted = b.matrix().scale(priors.h1) - a.matrix().scale(priors.h0);
        0.5 * (1.0 - hermitian_trace_norm(&weighted)?)
    };
    clamp_checked(pe, 0.0, priors.h0.min(priors.h1), "Helstrom error")
}

/// All three metrics for one hypothesis pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistinguishabilityReport {
    pub trace_distance: f64,
    pub fidelity: f64,
    pub helstrom_error: f64,
    pub priors: Priors,
}

impl DistinguishabilityReport {
    pub fn compute(a: &DensityOperator, b: &DensityOperator, priors: Priors) -> Result<Self> {
        Ok(Self {
            trace_distance: trace_distance(a, b)?,
            fidelity: fidelity(a, b)?,
            helstrom_error: helstrom_error(a, b, priors)?,
            priors,
        })
    }

    /// `1 − √F ≤ D ≤ √(1 − F)` within `tol`.
    pub fn satisfies_fuchs_van_de_graaf(&self, tol: f64) -> bool {
        let root_f = self.fidelity.sqrt();
        let d = self.trace_distance;
        1.0 - root_f <= d + tol && d <= (1.0 - self.fidelity).sqrt() + tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{hypothesis_h1, TargetParams};
    use crate::qstate::{bell_phi_plus, density_from_pure};
    use std::f64::consts::PI;

    fn pure_pair(phi: f64) -> (DensityOperator, DensityOperator) {
        let a = density_from_pure(&bell_phi_plus());
        let b = hypothesis_h1(&TargetParams::new(phi, 1.0, 0.5).unwrap()).unwrap();
        (a, b)
    }

    fn basis_pair() -> (DensityOperator, DensityOperator) {
        (
            DensityOperator::diagonal(&[1.0, 0.0]).unwrap(),
            DensityOperator::diagonal(&[0.0, 1.0]).unwrap(),
        )
    }

    #[test]
    fn identical_states() {
        let (a, _) = pure_pair(0.0);
        let mixed = DensityOperator::diagonal(&[0.2, 0.3, 0.5]).unwrap();
        for rho in [a, mixed] {
            assert!(trace_distance(&rho, &rho).unwrap().abs() < 1e-12);
            assert!((fidelity(&rho, &rho).unwrap() - 1.0).abs() < 1e-9);
            assert!((helstrom_error(&rho, &rho, Priors::EQUAL).unwrap() - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn orthogonal_states() {
        let (a, b) = basis_pair();
        assert!((trace_distance(&a, &b).unwrap() - 1.0).abs() < 1e-15);
        assert!(fidelity(&a, &b).unwrap().abs() < 1e-15);
        assert!(helstrom_error(&a, &b, Priors::EQUAL).unwrap().abs() < 1e-15);
    }

    #[test]
    fn quarter_turn_bell_pair() {
        let (a, b) = pure_pair(PI / 2.0);
        let d = trace_distance(&a, &b).unwrap();
        assert!((d - (PI / 4.0).sin()).abs() < 1e-12);
        let pe = helstrom_error(&a, &b, Priors::EQUAL).unwrap();
        assert!((pe - 0.5 * (1.0 - (PI / 4.0).sin())).abs() < 1e-12);
        assert!((pe - 0.1464).abs() < 1e-4);
    }

    #[test]
    fn pure_fidelity_matches_overlap() {
        for phi in [PI / 3.0, PI / 2.0, PI] {
            let (a, b) = pure_pair(phi);
            let f = fidelity(&a, &b).unwrap();
            assert!(
                (f - (phi / 2.0).cos().powi(2)).abs() < 1e-8,
                "phi={phi} f={f}"
            );
        }
    }

    #[test]
    fn weighted_priors() {
        let (a, b) = basis_pair();
        let skew = Priors::new(0.8, 0.2).unwrap();
        assert!(helstrom_error(&a, &b, skew).unwrap().abs() < 1e-15);
        // identical states: guess the likelier hypothesis, err with the smaller prior
        assert!((helstrom_error(&a, &a, skew).unwrap() - 0.2).abs() < 1e-12);
    }

    #[test]
    fn invalid_priors_rejected() {
        let (a, b) = basis_pair();
        for (p0, p1) in [(0.6, 0.6), (-0.1, 1.1), (f64::NAN, 0.5)] {
            assert!(matches!(
                helstrom_error(&a, &b, Priors { h0: p0, h1: p1 }),
                Err(Error::DegenerateInput(_))
            ));
        }
    }

    #[test]
    fn dimension_mismatch() {
        let (a, _) = basis_pair();
        let (b, _) = pure_pair(0.0);
        assert!(matches!(
            trace_distance(&a, &b),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(fidelity(&a, &b), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn clamp_window() {
        assert_eq!(clamp_checked(-5e-10, 0.0, 1.0, "x").unwrap(), 0.0);
        assert_eq!(clamp_checked(1.0 + 5e-10, 0.0, 1.0, "x").unwrap(), 1.0);
        assert!(matches!(
            clamp_checked(1.1, 0.0, 1.0, "x"),
            Err(Error::NumericalDomain(_))
        ));
    }

    #[test]
    fn report_bundle() {
        let (a, b) = pure_pair(PI / 2.0);
        let r = DistinguishabilityReport::compute(&a, &b, Priors::EQUAL).unwrap();
        assert!(r.satisfies_fuchs_van_de_graaf(1e-7));
        assert_eq!(r.priors, Priors::EQUAL);
    }
}
