//! Scenario files: a flat TOML document with one optional `[link_budget]` table.
//!
//! ```toml
//! phase_rad = 3.141592653589793
//! reflectivity = 0.5
//! noise_excitation = 0.5        # or: frequency_hz + temperature_k
//! env_phase_rad = 0.0           # default 0
//! priors = [0.5, 0.5]           # default equal
//! trials = 100000               # default 0 (analytic only)
//! seed = 7                      # default 0
//! roc_thresholds = [0.0, 0.5, 1.0, 2.0]
//!
//! [link_budget]
//! power_w = 1e-16
//! noise_power_w = 1e-15
//! frequency_hz = 1e10
//! ```
//!
//! Unknown keys are rejected. Angles are radians.

mod report;

pub use report::{
    emit_report, roc_csv, run_scenario, run_scenario_with, DetectionReport, ReportFormat,
    RunOptions,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linkbudget::{occupancy_to_excitation, thermal_occupancy, LinkBudgetInputs};
use crate::metrics::Priors;

/// Where the noise-mode excitation probability comes from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseSpec {
    Excitation(f64),
    Thermal {
        frequency_hz: f64,
        temperature_k: f64,
    },
}

/// A validated detection scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub phase_rad: f64,
    pub reflectivity: f64,
    pub noise: NoiseSpec,
    pub env_phase_rad: f64,
    pub priors: Priors,
    pub trials: u64,
    pub seed: u64,
    pub roc_thresholds: Option<Vec<f64>>,
    pub link_budget: Option<LinkBudgetInputs>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    phase_rad: Option<f64>,
    reflectivity: Option<f64>,
    noise_excitation: Option<f64>,
    frequency_hz: Option<f64>,
    temperature_k: Option<f64>,
    env_phase_rad: Option<f64>,
    priors: Option<Vec<f64>>,
    trials: Option<u64>,
    seed: Option<u64>,
    roc_thresholds: Option<Vec<f64>>,
    link_budget: Option<LinkBudgetInputs>,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before
        .rfind('\n')
        .map_or(before.len(), |nl| before.len() - nl - 1)
        + 1;
    (line, column)
}

fn required(value: Option<f64>, field: &str) -> Result<f64> {
    value.ok_or_else(|| Error::validation(field, "required field is missing"))
}

fn finite(value: f64, field: &str) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::validation(
            field,
            format!("must be finite, got {value}"),
        ))
    }
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let raw: RawScenario = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((0, 0), |s| line_col(text, s.start));
        Error::Parse {
            line,
            column,
            message: e.message().to_string(),
        }
    })?;
    let scenario = Scenario::from_raw(raw)?;
    Ok(scenario)
}

impl Scenario {
    fn from_raw(raw: RawScenario) -> Result<Self> {
        let noise = match (raw.noise_excitation, raw.frequency_hz, raw.temperature_k) {
            (Some(p), None, None) => NoiseSpec::Excitation(p),
            (None, Some(f), Some(t)) => NoiseSpec::Thermal {
                frequency_hz: f,
                temperature_k: t,
            },
            (Some(_), _, _) => {
                return Err(Error::validation(
                    "noise_excitation",
                    "give either noise_excitation or frequency_hz/temperature_k, not both",
                ))
            }
            (None, Some(_), None) => {
                return Err(Error::validation(
                    "temperature_k",
                    "required together with frequency_hz",
                ))
            }
            (None, None, Some(_)) => {
                return Err(Error::validation(
                    "frequency_hz",
                    "required together with temperature_k",
                ))
            }
            (None, None, None) => {
                return Err(Error::validation(
                    "noise_excitation",
                    "one of noise_excitation or frequency_hz/temperature_k is required",
                ))
            }
        };
        let priors = match raw.priors.as_deref() {
            None => Priors::EQUAL,
            Some(&[h0, h1]) => Priors { h0, h1 },
            Some(other) => {
                return Err(Error::validation(
                    "priors",
                    format!("expected two values, got {}", other.len()),
                ))
            }
        };
        let scenario = Scenario {
            phase_rad: required(raw.phase_rad, "phase_rad")?,
            reflectivity: required(raw.reflectivity, "reflectivity")?,
            noise,
            env_phase_rad: raw.env_phase_rad.unwrap_or(0.0),
            priors,
            trials: raw.trials.unwrap_or(0),
            seed: raw.seed.unwrap_or(0),
            roc_thresholds: raw.roc_thresholds,
            link_budget: raw.link_budget,
        };
        scenario.validate()?;
        Ok(scenario)
    }

    /// Checks every field-level constraint, naming the offending field.
    pub fn validate(&self) -> Result<()> {
        finite(self.phase_rad, "phase_rad")?;
        finite(self.env_phase_rad, "env_phase_rad")?;
        if !(0.0..=1.0).contains(&self.reflectivity) {
            return Err(Error::validation(
                "reflectivity",
                format!("must lie in [0, 1], got {}", self.reflectivity),
            ));
        }
        match self.noise {
            NoiseSpec::Excitation(p) => {
                if !(0.0..1.0).contains(&p) {
                    return Err(Error::validation(
                        "noise_excitation",
                        format!("must lie in [0, 1), got {p}"),
                    ));
                }
            }
            NoiseSpec::Thermal {
                frequency_hz,
                temperature_k,
            } => {
                for (name, v) in [
                    ("frequency_hz", frequency_hz),
                    ("temperature_k", temperature_k),
                ] {
                    if !(v.is_finite() && v > 0.0) {
                        return Err(Error::validation(
                            name,
                            format!("must be finite and positive, got {v}"),
                        ));
                    }
                }
            }
        }
        self.priors
            .validate()
            .map_err(|e| Error::validation("priors", e.to_string()))?;
        if let Some(ts) = &self.roc_thresholds {
            if ts.is_empty() {
                return Err(Error::validation(
                    "roc_thresholds",
                    "list is empty; omit the key to skip the ROC sweep",
                ));
            }
            if let Some(t) = ts.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
                return Err(Error::validation(
                    "roc_thresholds",
                    format!("thresholds must be finite and nonnegative, got {t}"),
                ));
            }
            if ts.windows(2).any(|w| w[0] > w[1]) {
                return Err(Error::validation(
                    "roc_thresholds",
                    "thresholds must be ascending",
                ));
            }
        }
        if let Some(lb) = &self.link_budget {
            lb.validate()?;
        }
        Ok(())
    }

    /// Mean thermal photon number, when the noise is given as a thermal bath.
    pub fn thermal_occupancy(&self) -> Result<Option<f64>> {
        match self.noise {
            NoiseSpec::Excitation(_) => Ok(None),
            NoiseSpec::Thermal {
                frequency_hz,
                temperature_k,
            } => thermal_occupancy(frequency_hz, temperature_k).map(Some),
        }
    }

    /// Excitation probability of the noise mode.
    pub fn noise_excitation(&self) -> Result<f64> {
        match self.noise {
            NoiseSpec::Excitation(p) => Ok(p),
            NoiseSpec::Thermal { .. } => {
                let nbar = self.thermal_occupancy()?.unwrap_or(0.0);
                occupancy_to_excitation(nbar)
            }
        }
    }

    /// Target phase after removing the known environmental offset.
    pub fn effective_phase(&self) -> f64 {
        self.phase_rad - self.env_phase_rad
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field_of(e: Error) -> String {
        match e {
            Error::Validation { field, .. } => field,
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn minimal_document_gets_defaults() {
        let s = parse_scenario("phase_rad = 2.5\nreflectivity = 1.0\nnoise_excitation = 0.5\n")
            .unwrap();
        assert_eq!(s.phase_rad, 2.5);
        assert_eq!(s.noise, NoiseSpec::Excitation(0.5));
        assert_eq!(s.env_phase_rad, 0.0);
        assert_eq!(s.priors, Priors::EQUAL);
        assert_eq!(s.trials, 0);
        assert_eq!(s.seed, 0);
        assert!(s.roc_thresholds.is_none());
        assert!(s.link_budget.is_none());
    }

    #[test]
    fn noise_sources_are_exclusive() {
        let doc = "phase_rad = 1\nreflectivity = 1\nnoise_excitation = 0.5\nfrequency_hz = 1e10\ntemperature_k = 290\n";
        assert_eq!(
            field_of(parse_scenario(doc).unwrap_err()),
            "noise_excitation"
        );
        let doc = "phase_rad = 1\nreflectivity = 1\nfrequency_hz = 1e10\n";
        assert_eq!(field_of(parse_scenario(doc).unwrap_err()), "temperature_k");
        let doc = "phase_rad = 1\nreflectivity = 1\n";
        assert_eq!(
            field_of(parse_scenario(doc).unwrap_err()),
            "noise_excitation"
        );
    }

    #[test]
    fn thermal_noise_derives_excitation() {
        let s = parse_scenario(
            "phase_rad = 1\nreflectivity = 1\nfrequency_hz = 1e10\ntemperature_k = 290\n",
        )
        .unwrap();
        let nbar = thermal_occupancy(1e10, 290.0).unwrap();
        let expected = occupancy_to_excitation(nbar).unwrap();
        assert_eq!(s.noise_excitation().unwrap(), expected);
        assert!((expected - 0.99835).abs() < 1e-5);
    }

    #[test]
    fn range_violations_name_the_field() {
        let base = "phase_rad = 1\nnoise_excitation = 0.5\n";
        assert_eq!(
            field_of(parse_scenario(&format!("{base}reflectivity = 1.5\n")).unwrap_err()),
            "reflectivity"
        );
        assert_eq!(
            field_of(
                parse_scenario("phase_rad = 1\nreflectivity = 1\nnoise_excitation = 1.0\n")
                    .unwrap_err()
            ),
            "noise_excitation"
        );
        let doc = format!("{base}reflectivity = 1\npriors = [0.7, 0.7]\n");
        assert_eq!(field_of(parse_scenario(&doc).unwrap_err()), "priors");
        let doc = format!("{base}reflectivity = 1\npriors = [1.0]\n");
        assert_eq!(field_of(parse_scenario(&doc).unwrap_err()), "priors");
        let doc = format!("{base}reflectivity = 1\nroc_thresholds = [1.0, 0.5]\n");
        assert_eq!(
            field_of(parse_scenario(&doc).unwrap_err()),
            "roc_thresholds"
        );
        let doc = format!("{base}reflectivity = 1\nphase_rad = nan\n");
        assert!(parse_scenario(&doc).is_err());
        let doc = format!("{base}reflectivity = 1\n[link_budget]\nwavelength_m = 0.0\n");
        assert_eq!(
            field_of(parse_scenario(&doc).unwrap_err()),
            "link_budget.wavelength_m"
        );
        assert_eq!(
            field_of(parse_scenario("reflectivity = 1\nnoise_excitation = 0.5\n").unwrap_err()),
            "phase_rad"
        );
    }

    #[test]
    fn malformed_documents_report_position() {
        match parse_scenario("phase_rad = 1\nreflectivity = = 1\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        match parse_scenario("phase_rad = 1\nreflectivity = 1\nnoise_excitation = 0.5\nbogus = 3\n")
        {
            Err(Error::Parse { line, message, .. }) => {
                assert_eq!(line, 4);
                assert!(message.contains("bogus"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_scenario(
                "phase_rad = 1\nreflectivity = 1\nnoise_excitation = 0.5\ntrials = -5\n"
            ),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_scenario("phase_rad = \"pi\"\nreflectivity = 1\nnoise_excitation = 0.5\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn effective_phase_subtracts_environment() {
        let s = parse_scenario(
            "phase_rad = 2.0\nenv_phase_rad = 0.5\nreflectivity = 1\nnoise_excitation = 0\n",
        )
        .unwrap();
        assert_eq!(s.effective_phase(), 1.5);
    }
}
