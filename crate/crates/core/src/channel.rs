//! Target interaction and background noise.
//!
//! Both hypotheses live on the same 4-dimensional return-mode ⊗ idler space.
//! Under H0 the return mode holds only background noise and the idler holds
//! its reduced Bell-pair state `I/2`. Under H1 the return mode is, with
//! probability η, the phase-shifted signal still entangled with the idler;
//! otherwise the H0 state.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qstate::{bell_phi_plus, density_from_pure, tensor, DensityOperator, PureState};

/// Physical parameters of the target and its surroundings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TargetParams {
    phase: f64,
    reflectivity: f64,
    noise_excitation: f64,
}

/// Reduces an angle to `[0, 2π)`.
pub fn reduce_phase(phi: f64) -> f64 {
    let r = phi.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

fn check_excitation(p: f64) -> Result<()> {
    if (0.0..1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::degenerate(format!(
            "noise excitation probability {p} outside [0, 1)"
        )))
    }
}

impl TargetParams {
    pub fn new(phase: f64, reflectivity: f64, noise_excitation: f64) -> Result<Self> {
        if !phase.is_finite() {
            return Err(Error::degenerate(format!("phase {phase} is not finite")));
        }
        if !(0.0..=1.0).contains(&reflectivity) {
            return Err(Error::degenerate(format!(
                "reflectivity {reflectivity} outside [0, 1]"
            )));
        }
        check_excitation(noise_excitation)?;
        Ok(Self {
            phase: reduce_phase(phase),
            reflectivity,
            noise_excitation,
        })
    }

    /// Target-induced phase in `[0, 2π)`.
    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn reflectivity(&self) -> f64 {
        self.reflectivity
    }

    pub fn noise_excitation(&self) -> f64 {
        self.noise_excitation
    }
}

/// Multiplies every amplitude whose signal qubit is `|1⟩` by `e^{iφ}`.
pub fn apply_signal_phase(psi: &PureState, phi: f64) -> Result<PureState> {
    if psi.dims() != [2, 2] {
        return Err(Error::dims(format!(
            "signal phase needs a [2, 2] signal-idler state, got {:?}",
            psi.dims()
        )));
    }
    let rotor = Complex64::from_polar(1.0, phi);
    let mut amps = psi.amplitudes().clone();
    // signal is the most significant digit: indices 2 and 3 carry |1⟩_S
    amps[2] *= rotor;
    amps[3] *= rotor;
    Ok(psi.with_amplitudes(amps))
}

/// Single-mode noise `diag(1-p, p)`.
pub fn noise_state(p: f64) -> Result<DensityOperator> {
    check_excitation(p)?;
    DensityOperator::diagonal(&[1.0 - p, p])
}

/// No-target hypothesis `ρ_noise ⊗ I/2` (return mode first).
pub fn hypothesis_h0(p: f64) -> Result<DensityOperator> {
    let idler = DensityOperator::maximally_mixed(&[2])?;
    tensor(&noise_state(p)?, &idler)
}

/// Target hypothesis `η|ψ′⟩⟨ψ′| + (1-η)ρ₀`, with `|ψ′⟩ = (|00⟩ + e^{iφ}|11⟩)/√2`.
pub fn hypothesis_h1(params: &TargetParams) -> Result<DensityOperator> {
    let returned = density_from_pure(&apply_signal_phase(&bell_phi_plus(), params.phase)?);
    let h0 = hypothesis_h0(params.noise_excitation)?;
    returned.mix(params.reflectivity, &h0)
}
