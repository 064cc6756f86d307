//! Closed-form power, photon and EMI calculators.
//!
//! All decibel formulas use base-10 logarithms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact SI physical constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// J·s
    pub planck_h: f64,
    /// J/K
    pub boltzmann_kb: f64,
}

pub const SI: PhysicalConstants = PhysicalConstants {
    planck_h: 6.626_070_15e-34,
    boltzmann_kb: 1.380_649e-23,
};

/// dBm reference power, 1 mW.
pub const REFERENCE_POWER_W: f64 = 1e-3;

/// Below this `hν/k_BT` the occupancy uses its Laurent series.
pub const SERIES_CROSSOVER: f64 = 1e-6;

/// Occupancies below this are reported as exactly zero.
pub const OCCUPANCY_FLOOR: f64 = 1e-100;

fn positive(value: f64, name: &str) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::degenerate(format!(
            "{name} must be finite and positive, got {value}"
        )))
    }
}

/// `10·log₁₀(P / 1 mW)`.
pub fn watts_to_dbm(p: f64) -> Result<f64> {
    Ok(10.0 * (positive(p, "power")? / REFERENCE_POWER_W).log10())
}

/// `1 mW · 10^(x/10)`.
pub fn dbm_to_watts(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::degenerate(format!(
            "power level {x} dBm is not finite"
        )));
    }
    Ok(REFERENCE_POWER_W * 10f64.powf(x / 10.0))
}

/// `E = h·f`.
pub fn photon_energy(f: f64) -> Result<f64> {
    Ok(SI.planck_h * positive(f, "frequency")?)
}

/// Photons per second carried by power `p` at frequency `f`.
pub fn photon_rate(p: f64, f: f64) -> Result<f64> {
    Ok(positive(p, "power")? / photon_energy(f)?)
}

/// Bose–Einstein mean photon number `1/(e^{hν/k_BT} − 1)`.
pub fn thermal_occupancy(f: f64, t: f64) -> Result<f64> {
    let x =
        SI.planck_h * positive(f, "frequency")? / (SI.boltzmann_kb * positive(t, "temperature")?);
    let n = if x < SERIES_CROSSOVER {
        1.0 / x - 0.5 + x / 12.0
    } else {
        1.0 / x.exp_m1()
    };
    Ok(if n < OCCUPANCY_FLOOR { 0.0 } else { n })
}

/// Qubit excitation probability `n̄/(1 + n̄)` equivalent to a thermal occupancy.
///
/// For `n̄ ≫ 1` this approaches 1 and the two-level noise model saturates.
pub fn occupancy_to_excitation(nbar: f64) -> Result<f64> {
    if !(nbar.is_finite() && nbar >= 0.0) {
        return Err(Error::degenerate(format!(
            "mean photon number must be finite and nonnegative, got {nbar}"
        )));
    }
    Ok(nbar / (1.0 + nbar))
}

pub fn snr(p_signal: f64, p_noise: f64) -> Result<f64> {
    Ok(positive(p_signal, "signal power")? / positive(p_noise, "noise power")?)
}

/// Detection range gain `improvement^{1/4}` from a sensitivity improvement factor.
pub fn range_multiplier(sensitivity_improvement: f64) -> Result<f64> {
    Ok(positive(sensitivity_improvement, "sensitivity improvement")?.powf(0.25))
}

/// `20·log₁₀(d/λ)` dB. Negative when the shield is thinner than a wavelength.
pub fn shielding_effectiveness(thickness_m: f64, wavelength_m: f64) -> Result<f64> {
    Ok(20.0
        * (positive(thickness_m, "shield thickness")? / positive(wavelength_m, "wavelength")?)
            .log10())
}

/// `N_ext / N_isolated`.
pub fn isolation_factor(n_ext: f64, n_isolated: f64) -> Result<f64> {
    Ok(positive(n_ext, "external noise")? / positive(n_isolated, "isolated noise")?)
}

/// `20·log₁₀(A_stop / A_pass)` dB. Negative when the stopband amplitude is the smaller one.
pub fn stopband_attenuation(a_stop: f64, a_pass: f64) -> Result<f64> {
    Ok(20.0
        * (positive(a_stop, "stopband amplitude")? / positive(a_pass, "passband amplitude")?)
            .log10())
}

/// Engineering inputs; every calculator runs only when its inputs are present.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkBudgetInputs {
    pub power_w: Option<f64>,
    pub frequency_hz: Option<f64>,
    pub temperature_k: Option<f64>,
    pub noise_power_w: Option<f64>,
    pub sensitivity_improvement: Option<f64>,
    pub shield_thickness_m: Option<f64>,
    pub wavelength_m: Option<f64>,
    pub amplitude_stop: Option<f64>,
    pub amplitude_pass: Option<f64>,
    pub noise_ext: Option<f64>,
    pub noise_isolated: Option<f64>,
}

impl LinkBudgetInputs {
    /// Names the first field that is present but not strictly positive.
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("power_w", self.power_w),
            ("frequency_hz", self.frequency_hz),
            ("temperature_k", self.temperature_k),
            ("noise_power_w", self.noise_power_w),
            ("sensitivity_improvement", self.sensitivity_improvement),
            ("shield_thickness_m", self.shield_thickness_m),
            ("wavelength_m", self.wavelength_m),
            ("amplitude_stop", self.amplitude_stop),
            ("amplitude_pass", self.amplitude_pass),
            ("noise_ext", self.noise_ext),
            ("noise_isolated", self.noise_isolated),
        ];
        for (name, value) in fields {
            if let Some(v) = value {
                if !(v.is_finite() && v > 0.0) {
                    return Err(Error::validation(
                        format!("link_budget.{name}"),
                        format!("must be finite and strictly positive, got {v}"),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Calculator outputs; `None` where the inputs were not supplied.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LinkBudgetReport {
    pub power_dbm: Option<f64>,
    pub noise_power_dbm: Option<f64>,
    pub photon_energy_j: Option<f64>,
    pub photon_rate_per_s: Option<f64>,
    pub thermal_occupancy: Option<f64>,
    pub thermal_excitation: Option<f64>,
    pub snr: Option<f64>,
    pub range_multiplier: Option<f64>,
    pub shielding_effectiveness_db: Option<f64>,
    pub isolation_factor: Option<f64>,
    pub stopband_attenuation_db: Option<f64>,
}

fn both<T>(a: Option<T>, b: Option<T>) -> Option<(T, T)> {
    a.zip(b)
}

impl LinkBudgetReport {
    pub fn evaluate(inputs: &LinkBudgetInputs) -> Result<(Self, Vec<String>)> {
        inputs.validate()?;
        let mut warnings = Vec::new();
        let thermal = match both(inputs.frequency_hz, inputs.temperature_k) {
            Some((f, t)) => Some(thermal_occupancy(f, t)?),
            None => None,
        };
        let report = LinkBudgetReport {
            power_dbm: inputs.power_w.map(watts_to_dbm).transpose()?,
            noise_power_dbm: inputs.noise_power_w.map(watts_to_dbm).transpose()?,
            photon_energy_j: inputs.frequency_hz.map(photon_energy).transpose()?,
            photon_rate_per_s: both(inputs.power_w, inputs.frequency_hz)
                .map(|(p, f)| photon_rate(p, f))
                .transpose()?,
            thermal_occupancy: thermal,
            thermal_excitation: thermal.map(occupancy_to_excitation).transpose()?,
            snr: both(inputs.power_w, inputs.noise_power_w)
                .map(|(s, n)| snr(s, n))
                .transpose()?,
            range_multiplier: inputs
                .sensitivity_improvement
                .map(range_multiplier)
                .transpose()?,
            shielding_effectiveness_db: both(inputs.shield_thickness_m, inputs.wavelength_m)
                .map(|(d, l)| shielding_effectiveness(d, l))
                .transpose()?,
            isolation_factor: both(inputs.noise_ext, inputs.noise_isolated)
                .map(|(e, i)| isolation_factor(e, i))
                .transpose()?,
            stopband_attenuation_db: both(inputs.amplitude_stop, inputs.amplitude_pass)
                .map(|(s, p)| stopband_attenuation(s, p))
                .transpose()?,
        };
        if let Some((d, l)) = both(inputs.shield_thickness_m, inputs.wavelength_m) {
            if d < l {
                warnings.push(format!(
                    "shield thickness {d} m is below the wavelength {l} m: 20·log10(d/λ) is negative in this sub-wavelength regime"
                ));
            }
        }
        if let Some((s, p)) = both(inputs.amplitude_stop, inputs.amplitude_pass) {
            if s < p {
                warnings.push(format!(
                    "stopband amplitude {s} is below passband amplitude {p}: attenuation reported as a negative dB value"
                ));
            }
        }
        if let Some(nbar) = thermal {
            if nbar > 1.0 {
                warnings.push(format!(
                    "thermal occupancy {nbar:.4} exceeds 1: the two-level noise model saturates near excitation 1"
                ));
            }
        }
        Ok((report, warnings))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn dbm_conversions() {
        assert_eq!(watts_to_dbm(1e-13).unwrap(), -100.0);
        assert_eq!(watts_to_dbm(1e-3).unwrap(), 0.0);
        assert!((watts_to_dbm(1e-16).unwrap() + 130.0).abs() < 1e-12);
        assert!(rel(dbm_to_watts(-100.0).unwrap(), 1e-13) < 1e-15);
        assert_eq!(dbm_to_watts(0.0).unwrap(), 1e-3);
        for bad in [0.0, -1.0, f64::NAN] {
            assert!(matches!(watts_to_dbm(bad), Err(Error::DegenerateInput(_))));
        }
        assert!(dbm_to_watts(f64::INFINITY).is_err());
    }

    #[test]
    fn photon_energetics() {
        let e = photon_energy(1e10).unwrap();
        assert!(rel(e, 6.626_070_15e-24) < 1e-15);
        assert!(rel(e, 6.63e-24) < 0.006);
        assert!(rel(photon_energy(0.5e10).unwrap(), e / 2.0) < 1e-15);
        assert_eq!(photon_energy(1.0).unwrap(), 6.626_070_15e-34);
        assert!(rel(photon_rate(1e-16, 1e10).unwrap(), 1.5093e7) < 1e-4);
        assert!(
            rel(
                photon_rate(2e-16, 1e10).unwrap(),
                2.0 * photon_rate(1e-16, 1e10).unwrap()
            ) < 1e-15
        );
        assert!(rel(photon_rate(6.626_070_15e-24, 1e10).unwrap(), 1.0) < 1e-15);
        assert!(photon_energy(0.0).is_err());
        assert!(photon_rate(1.0, -1.0).is_err());
    }

    #[test]
    fn thermal_occupancy_values() {
        // 50-digit reference: 603.76209248577703892140149893089...
        let n = thermal_occupancy(1e10, 290.0).unwrap();
        assert!(rel(n, 603.762_092_485_777) < 1e-9);
        assert_eq!(thermal_occupancy(1e10, 1e-3).unwrap(), 0.0);

        // hν/k_BT = ln 2 gives exactly one photon
        let t = SI.planck_h * 1e10 / (SI.boltzmann_kb * std::f64::consts::LN_2);
        assert!((thermal_occupancy(1e10, t).unwrap() - 1.0).abs() < 1e-12);
        assert!(thermal_occupancy(0.0, 1.0).is_err());
        assert!(thermal_occupancy(1.0, -1.0).is_err());
    }

    #[test]
    fn series_matches_exact_at_crossover() {
        let x = SERIES_CROSSOVER;
        let series = 1.0 / x - 0.5 + x / 12.0;
        let exact = 1.0 / x.exp_m1();
        assert!(rel(series, exact) < 1e-10);
        // 50-digit reference at x = 1e-6: 999999.50000008333333333333194...
        assert!(rel(series, 999_999.500_000_083) < 1e-15);
    }

    #[test]
    fn excitation_map() {
        assert_eq!(occupancy_to_excitation(0.0).unwrap(), 0.0);
        assert_eq!(occupancy_to_excitation(1.0).unwrap(), 0.5);
        assert!((occupancy_to_excitation(603.9).unwrap() - 0.99835).abs() < 1e-5);
        assert!(occupancy_to_excitation(-1.0).is_err());
    }

    #[test]
    fn ratios() {
        // 1e-16 and 1e-15 are not representable; the correctly rounded quotient is 1 ulp below 0.1
        assert!((snr(1e-16, 1e-15).unwrap() - 0.1).abs() <= f64::EPSILON * 0.1);
        assert_eq!(snr(3e-9, 3e-9).unwrap(), 1.0);
        assert_eq!(snr(2e-16, 1e-16).unwrap(), 2.0);
        assert!((range_multiplier(100.0).unwrap() - 3.1623).abs() < 1e-4);
        assert_eq!(range_multiplier(1.0).unwrap(), 1.0);
        assert_eq!(range_multiplier(16.0).unwrap(), 2.0);
        assert!(range_multiplier(0.0).is_err());
        assert_eq!(isolation_factor(100.0, 1.0).unwrap(), 100.0);
        assert_eq!(isolation_factor(7.0, 7.0).unwrap(), 1.0);
        assert!((isolation_factor(5e-3, 2.5e-4).unwrap() - 20.0).abs() < 1e-12);
    }

    #[test]
    fn emi_decibels() {
        assert_eq!(shielding_effectiveness(0.03, 0.03).unwrap(), 0.0);
        assert!((shielding_effectiveness(0.3, 0.03).unwrap() - 20.0).abs() < 1e-12);
        assert!((shielding_effectiveness(0.0003, 0.03).unwrap() + 40.0).abs() < 1e-12);
        assert_eq!(stopband_attenuation(2.5, 2.5).unwrap(), 0.0);
        assert_eq!(stopband_attenuation(10.0, 1.0).unwrap(), 20.0);
        assert!((stopband_attenuation(0.01, 1.0).unwrap() + 40.0).abs() < 1e-12);
        assert!(stopband_attenuation(0.0, 1.0).is_err());
    }

    #[test]
    fn report_flags_questionable_regimes() {
        let inputs = LinkBudgetInputs {
            shield_thickness_m: Some(0.001),
            wavelength_m: Some(0.03),
            amplitude_stop: Some(0.01),
            amplitude_pass: Some(1.0),
            frequency_hz: Some(1e10),
            temperature_k: Some(290.0),
            ..Default::default()
        };
        let (report, warnings) = LinkBudgetReport::evaluate(&inputs).unwrap();
        assert_eq!(warnings.len(), 3);
        assert!(report.shielding_effectiveness_db.unwrap() < 0.0);
        assert!(report.snr.is_none());
    }

    #[test]
    fn report_rejects_nonpositive_inputs() {
        let inputs = LinkBudgetInputs {
            power_w: Some(-1.0),
            ..Default::default()
        };
        match LinkBudgetReport::evaluate(&inputs) {
            Err(Error::Validation { field, .. }) => assert_eq!(field, "link_budget.power_w"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
