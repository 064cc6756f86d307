//! Simulation toolkit for entangled-photon (quantum illumination) radar.
//!
//! A Bell pair is split into a transmitted signal and a retained idler. The
//! target imprints a phase on the returning signal; background noise competes
//! with it. The crate builds the two hypothesis states, measures how well they
//! can be told apart, realizes the optimal measurement by Monte Carlo and
//! evaluates the accompanying link-budget formulas.
//!
//! - [`qstate`]: pure and mixed states, tensor products, partial traces and
//!   the Hermitian eigen/square-root kernels.
//! - [`channel`]: phase imprint, noise state and the H0/H1 operators.
//! - [`metrics`]: trace distance, fidelity and the Helstrom error.
//! - [`detector`]: Helstrom measurement, seeded Monte Carlo trials, ROC sweeps.
//! - [`linkbudget`]: dBm, photon energetics, thermal occupancy, SNR, EMI.
//! - [`scenario`]: scenario files, the end-to-end run and report output.

pub mod channel;
pub mod detector;
pub mod error;
pub mod linkbudget;
pub mod metrics;
pub mod parallel;
pub mod qstate;
pub mod random;
pub mod scenario;

pub use error::{Error, Result};
pub use parallel::Execution;
