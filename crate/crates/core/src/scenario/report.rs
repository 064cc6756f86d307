use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::Scenario;
use crate::channel::{hypothesis_h0, hypothesis_h1, reduce_phase, TargetParams};
use crate::detector::{roc_sweep_with, run_empirical, RocPoint, TrialOutcome};
use crate::error::{Error, Result};
use crate::linkbudget::LinkBudgetReport;
use crate::metrics::DistinguishabilityReport;
use crate::parallel::Execution;

/// Identifies the structured report layout.
pub const REPORT_SCHEMA: &str = "qradar.detection-report/1";

/// Everything computed for one scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionReport {
    pub schema: String,
    pub scenario: Scenario,
    /// `phase_rad − env_phase_rad`, reduced to `[0, 2π)`.
    pub effective_phase_rad: f64,
    pub noise_excitation: f64,
    pub thermal_occupancy: Option<f64>,
    pub trace_distance: f64,
    pub fidelity: f64,
    pub helstrom_error: f64,
    pub empirical_error: Option<f64>,
    pub trials_h0: Option<TrialOutcome>,
    pub trials_h1: Option<TrialOutcome>,
    pub roc: Option<Vec<RocPoint>>,
    pub link_budget: Option<LinkBudgetReport>,
    pub warnings: Vec<String>,
}

/// Scheduling knobs for the Monte Carlo stage. They never change the results.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    pub execution: Execution,
    pub partitions: Option<u64>,
}

pub fn run_scenario(s: &Scenario) -> Result<DetectionReport> {
    run_scenario_with(s, RunOptions::default())
}

pub fn run_scenario_with(s: &Scenario, opts: RunOptions) -> Result<DetectionReport> {
    let ctx = |stage: &str| {
        format!(
            "scenario (phase {} rad, reflectivity {}, seed {}) failed during {stage}",
            s.phase_rad, s.reflectivity, s.seed
        )
    };
    s.validate().map_err(|e| e.context(ctx("validation")))?;

    let mut warnings = Vec::new();
    let thermal = s
        .thermal_occupancy()
        .map_err(|e| e.context(ctx("noise model")))?;
    let p = s
        .noise_excitation()
        .map_err(|e| e.context(ctx("noise model")))?;
    if let Some(nbar) = thermal {
        if nbar > 1.0 {
            warnings.push(format!(
                "thermal occupancy {nbar:.4} maps to excitation {p:.6}: the two-level noise model saturates for occupancy far above 1"
            ));
        }
    }

    let params = TargetParams::new(s.effective_phase(), s.reflectivity, p)
        .map_err(|e| e.context(ctx("target model")))?;
    let rho0 = hypothesis_h0(p).map_err(|e| e.context(ctx("H0 construction")))?;
    let rho1 = hypothesis_h1(&params).map_err(|e| e.context(ctx("H1 construction")))?;
    let metrics = DistinguishabilityReport::compute(&rho0, &rho1, s.priors)
        .map_err(|e| e.context(ctx("metric evaluation")))?;

    let (empirical_error, trials_h0, trials_h1) = if s.trials > 0 {
        let run = run_empirical(
            &rho0,
            &rho1,
            s.priors,
            s.trials,
            s.seed,
            opts.execution,
            opts.partitions,
        )
        .map_err(|e| e.context(ctx("Monte Carlo")))?;
        (Some(run.error), run.h0, run.h1)
    } else {
        (None, None, None)
    };

    let roc = s
        .roc_thresholds
        .as_deref()
        .map(|ts| roc_sweep_with(&rho0, &rho1, ts, opts.execution))
        .transpose()
        .map_err(|e| e.context(ctx("ROC sweep")))?;

    let link_budget = match &s.link_budget {
        Some(inputs) => {
            let (report, lb_warnings) =
                LinkBudgetReport::evaluate(inputs).map_err(|e| e.context(ctx("link budget")))?;
            warnings.extend(lb_warnings);
            Some(report)
        }
        None => None,
    };

    Ok(DetectionReport {
        schema: REPORT_SCHEMA.to_string(),
        scenario: s.clone(),
        effective_phase_rad: reduce_phase(s.effective_phase()),
        noise_excitation: p,
        thermal_occupancy: thermal,
        trace_distance: metrics.trace_distance,
        fidelity: metrics.fidelity,
        helstrom_error: metrics.helstrom_error,
        empirical_error,
        trials_h0,
        trials_h1,
        roc,
        link_budget,
        warnings,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    Table,
    #[default]
    Structured,
}

/// Renders a report as pretty JSON (shortest round-trip floats) or as a text table.
pub fn emit_report(r: &DetectionReport, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Structured => {
            let mut out = serde_json::to_string_pretty(r)
                .map_err(|e| Error::domain(format!("report is not serializable: {e}")))?;
            out.push('\n');
            Ok(out)
        }
        ReportFormat::Table => Ok(table(r)),
    }
}

/// ROC points as CSV with a `threshold,p_false_alarm,p_detection` header.
pub fn roc_csv(points: &[RocPoint]) -> String {
    let mut out = String::from("threshold,p_false_alarm,p_detection\n");
    for p in points {
        let _ = writeln!(out, "{},{},{}", p.threshold, p.p_false_alarm, p.p_detection);
    }
    out
}

/// `%g`-style rendering with six significant digits.
fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').unwrap_or((&sci, "0"));
    let exp: i32 = exp.parse().unwrap_or(0);
    if (-5..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        let fixed = format!("{x:.decimals$}");
        if fixed.contains('.') {
            fixed
                .trim_end_matches('0')
                .trim_end_matches('.')
                .to_string()
        } else {
            fixed
        }
    } else {
        let m = if mantissa.contains('.') {
            mantissa.trim_end_matches('0').trim_end_matches('.')
        } else {
            mantissa
        };
        format!("{m}e{exp}")
    }
}

fn table(r: &DetectionReport) -> String {
    let mut out = String::new();
    let mut row = |k: &str, v: String| {
        let _ = writeln!(out, "{k:<28} {v}");
    };
    let s = &r.scenario;
    row("phase_rad", sig6(s.phase_rad));
    row("env_phase_rad", sig6(s.env_phase_rad));
    row("effective_phase_rad", sig6(r.effective_phase_rad));
    row("reflectivity", sig6(s.reflectivity));
    row("noise_excitation", sig6(r.noise_excitation));
    if let Some(n) = r.thermal_occupancy {
        row("thermal_occupancy", sig6(n));
    }
    row(
        "priors",
        format!("{} / {}", sig6(s.priors.h0), sig6(s.priors.h1)),
    );
    row("trace_distance", sig6(r.trace_distance));
    row("fidelity", sig6(r.fidelity));
    row("helstrom_error", sig6(r.helstrom_error));
    if let Some(e) = r.empirical_error {
        row("empirical_error", sig6(e));
        row("trials", s.trials.to_string());
        row("seed", s.seed.to_string());
    }
    for o in [r.trials_h0, r.trials_h1].into_iter().flatten() {
        row(
            &format!("counts_{:?}", o.true_hypothesis).to_lowercase(),
            format!(
                "decide_h1 {} / decide_h0 {} of {}",
                o.decide_h1_count, o.decide_h0_count, o.trials
            ),
        );
    }
    if let Some(lb) = &r.link_budget {
        let fields = [
            ("power_dbm", lb.power_dbm),
            ("noise_power_dbm", lb.noise_power_dbm),
            ("photon_energy_j", lb.photon_energy_j),
            ("photon_rate_per_s", lb.photon_rate_per_s),
            ("lb_thermal_occupancy", lb.thermal_occupancy),
            ("lb_thermal_excitation", lb.thermal_excitation),
            ("snr", lb.snr),
            ("range_multiplier", lb.range_multiplier),
            ("shielding_effectiveness_db", lb.shielding_effectiveness_db),
            ("isolation_factor", lb.isolation_factor),
            ("stopband_attenuation_db", lb.stopband_attenuation_db),
        ];
        for (k, v) in fields {
            if let Some(v) = v {
                row(k, sig6(v));
            }
        }
    }
    if let Some(points) = &r.roc {
        let _ = writeln!(
            out,
            "\n{:>12} {:>14} {:>14}",
            "threshold", "p_false_alarm", "p_detection"
        );
        for p in points {
            let _ = writeln!(
                out,
                "{:>12} {:>14} {:>14}",
                sig6(p.threshold),
                sig6(p.p_false_alarm),
                sig6(p.p_detection)
            );
        }
    }
    if !r.warnings.is_empty() {
        let _ = writeln!(out, "\nwarnings:");
        for w in &r.warnings {
            let _ = writeln!(out, "  - {w}");
        }
    }
    out
}
