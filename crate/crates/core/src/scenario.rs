//! Scenario runner behind the `lambdawg` command-line tool: a strict flat
//! key-value config schema (TOML), dispatch to the integrators, analytics,
//! observables and the mode oracle, CSV emission with a fixed header and 15
//! significant digits, one-line JSON summaries, and presets that expand each
//! built-in figure into fully explicit scenarios.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analytic::{self, AnalyticError};
use crate::dde::{self, DdeError};
use crate::model::{
    Channel, ChannelParams, FrequencyShift, ModelError, SingleAtomConfig, TwoAtomConfig,
};
use crate::observables::{self, ObservablesError};
use crate::oracle::{self, AtomGeometry, ModeGrid, OracleError};
use crate::trajectory::Trajectory;

pub const FIGURES: [&str; 9] = [
    "fig2a", "fig2b", "fig3a", "fig3b", "fig4a", "fig4b", "fig5a", "fig5b", "fig6",
];

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("mode {mode:?} is missing required keys: {keys}")]
    MissingKeys { mode: String, keys: String },
    #[error("unknown mode {0:?}; expected one of single, two-atom, oracle-single, oracle-two, bound-state, output-field, figure")]
    UnknownMode(String),
    #[error("unknown figure {0:?}; expected one of fig2a, fig2b, fig3a, fig3b, fig4a, fig4b, fig5a, fig5b, fig6")]
    UnknownFigure(String),
    #[error("invalid value for {key}: {reason}")]
    InvalidValue { key: &'static str, reason: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Dde(#[from] DdeError),
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
    #[error(transparent)]
    Observables(#[from] ObservablesError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl ScenarioError {
    /// Process exit code: 1 for bad input, 2 for a numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            ScenarioError::Dde(DdeError::Diverged { .. })
            | ScenarioError::Oracle(OracleError::NormDrift { .. })
            | ScenarioError::Oracle(OracleError::NonFinite { .. })
            | ScenarioError::Analytic(AnalyticError::Pole { .. })
            | ScenarioError::Observables(ObservablesError::TailNotDecayed { .. }) => 2,
            _ => 1,
        }
    }
}

/// Flat scenario schema. Unknown keys are rejected outright; which keys are
/// required depends on the mode. All quantities are in units of the
/// reference decay rate.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Scenario {
    /// single | two-atom | oracle-single | oracle-two | bound-state |
    /// output-field | figure
    pub mode: Option<String>,
    /// Figure preset name, for mode = "figure".
    pub figure: Option<String>,
    /// Output file stem (CSV artifacts are written as `<output>.csv`).
    pub output: Option<String>,

    pub gamma_g: Option<f64>,
    pub gamma_xi: Option<f64>,
    pub phi_k: Option<f64>,
    pub phi_q: Option<f64>,
    pub tau_k: Option<f64>,
    pub tau_q: Option<f64>,
    pub reflectivity: Option<f64>,

    /// none | smooth-step | sinusoid
    pub shift_kind: Option<String>,
    pub shift_amp: Option<f64>,
    pub shift_t0: Option<f64>,
    pub shift_w: Option<f64>,
    pub shift_omega: Option<f64>,

    pub t_max: Option<f64>,
    pub dt: Option<f64>,

    pub x1: Option<f64>,
    pub x2: Option<f64>,
    pub v_k: Option<f64>,
    pub v_q: Option<f64>,
    pub k0: Option<f64>,
    pub q0: Option<f64>,

    pub n_modes: Option<usize>,
    pub window: Option<f64>,

    pub omega0: Option<f64>,
    pub detector_offset: Option<f64>,

    pub ce_re: Option<f64>,
    pub ce_im: Option<f64>,
    pub ce1_re: Option<f64>,
    pub ce1_im: Option<f64>,
    pub ce2_re: Option<f64>,
    pub ce2_im: Option<f64>,
}

impl Scenario {
    pub fn from_toml(text: &str) -> Result<Self, ScenarioError> {
        toml::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string()))
    }
}

/// One-line JSON summary attached to every emitted series.
#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub series: String,
    pub csv: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steady_state_prediction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_state_energy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_state_alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_population: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_population_atom1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_population_atom2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub integrated_flux: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_norm_drift: Option<f64>,
}

impl Summary {
    fn new(series: &str, csv_file: &str) -> Self {
        Self {
            series: series.to_string(),
            csv: csv_file.to_string(),
            steady_state_prediction: None,
            bound_state_energy: None,
            bound_state_alpha: None,
            final_population: None,
            final_population_atom1: None,
            final_population_atom2: None,
            integrated_flux: None,
            max_norm_drift: None,
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("summary serializes")
    }
}

/// One emitted series: a CSV body plus its summary.
#[derive(Debug, Clone)]
pub struct SeriesOutput {
    pub name: String,
    pub file_name: String,
    pub csv: String,
    pub summary: Summary,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareLevel {
    pub n_modes: usize,
    pub window: f64,
    pub max_discrepancy: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareReport {
    pub series: String,
    pub csv: String,
    pub levels: Vec<CompareLevel>,
    /// True when the discrepancy shrinks at every refinement.
    pub monotone: bool,
    pub max_norm_drift: f64,
}

#[derive(Debug, Clone)]
pub struct CompareOutput {
    pub report: CompareReport,
    pub file_name: String,
    pub csv: String,
}

// ---------------------------------------------------------------------------
// key collection

struct Keys {
    missing: Vec<&'static str>,
}

impl Keys {
    fn new() -> Self {
        Self { missing: Vec::new() }
    }

    fn require(&mut self, value: Option<f64>, name: &'static str) -> f64 {
        match value {
            Some(v) => v,
            None => {
                self.missing.push(name);
                0.0
            }
        }
    }

    fn finish(self, mode: &str) -> Result<(), ScenarioError> {
        if self.missing.is_empty() {
            Ok(())
        } else {
            Err(ScenarioError::MissingKeys {
                mode: mode.to_string(),
                keys: self.missing.join(", "),
            })
        }
    }
}

fn shift_from(scenario: &Scenario) -> Result<FrequencyShift, ScenarioError> {
    let kind = scenario.shift_kind.as_deref().unwrap_or("none");
    let need = |v: Option<f64>, key: &'static str| {
        v.ok_or(ScenarioError::InvalidValue {
            key,
            reason: format!("required for shift_kind = {kind:?}"),
        })
    };
    match kind {
        "none" => Ok(FrequencyShift::None),
        "smooth-step" => Ok(FrequencyShift::smooth_step(
            need(scenario.shift_amp, "shift_amp")?,
            need(scenario.shift_t0, "shift_t0")?,
            need(scenario.shift_w, "shift_w")?,
        )?),
        "sinusoid" => Ok(FrequencyShift::sinusoid(
            need(scenario.shift_amp, "shift_amp")?,
            need(scenario.shift_omega, "shift_omega")?,
            need(scenario.shift_t0, "shift_t0")?,
        )?),
        other => Err(ScenarioError::InvalidValue {
            key: "shift_kind",
            reason: format!("unknown kind {other:?}"),
        }),
    }
}

/// Apply an explicit carrier override to a direct-specified channel, checking
/// that it reproduces the configured phase modulo full turns.
fn override_carrier(
    channel: &mut ChannelParams,
    carrier: Option<f64>,
    key: &'static str,
) -> Result<(), ScenarioError> {
    let Some(carrier) = carrier else {
        return Ok(());
    };
    let implied = carrier * channel.velocity * channel.delay;
    let turns = (implied - channel.phase) / std::f64::consts::TAU;
    if (turns - turns.round()).abs() > 1e-9 {
        return Err(ScenarioError::InvalidValue {
            key,
            reason: format!(
                "carrier implies phase {implied}, which differs from the configured phase {} by a non-integer number of turns",
                channel.phase
            ),
        });
    }
    channel.carrier = carrier;
    Ok(())
}

fn single_config(scenario: &Scenario, mode: &str) -> Result<SingleAtomConfig, ScenarioError> {
    let mut keys = Keys::new();
    let gamma_g = keys.require(scenario.gamma_g, "gamma_g");
    let gamma_xi = keys.require(scenario.gamma_xi, "gamma_xi");
    let phi_k = keys.require(scenario.phi_k, "phi_k");
    let phi_q = keys.require(scenario.phi_q, "phi_q");
    let tau_k = keys.require(scenario.tau_k, "tau_k");
    let tau_q = keys.require(scenario.tau_q, "tau_q");
    keys.finish(mode)?;

    let v_k = scenario.v_k.unwrap_or(1.0);
    let v_q = scenario.v_q.unwrap_or(1.0);
    let mut channel_k = ChannelParams::direct(gamma_g, phi_k, tau_k, v_k)?;
    let mut channel_q = ChannelParams::direct(gamma_xi, phi_q, tau_q, v_q)?;
    override_carrier(&mut channel_k, scenario.k0, "k0")?;
    override_carrier(&mut channel_q, scenario.q0, "q0")?;

    Ok(SingleAtomConfig::new(
        channel_k,
        channel_q,
        scenario.reflectivity.unwrap_or(1.0),
        shift_from(scenario)?,
        Complex64::new(scenario.ce_re.unwrap_or(1.0), scenario.ce_im.unwrap_or(0.0)),
    )?)
}

fn two_atom_config(scenario: &Scenario, mode: &str) -> Result<TwoAtomConfig, ScenarioError> {
    let mut keys = Keys::new();
    let gamma_g = keys.require(scenario.gamma_g, "gamma_g");
    let gamma_xi = keys.require(scenario.gamma_xi, "gamma_xi");
    let x1 = keys.require(scenario.x1, "x1");
    let x2 = keys.require(scenario.x2, "x2");
    let k0 = keys.require(scenario.k0, "k0");
    let q0 = keys.require(scenario.q0, "q0");
    keys.finish(mode)?;

    Ok(TwoAtomConfig::new(
        x1,
        x2,
        gamma_g,
        gamma_xi,
        scenario.v_k.unwrap_or(1.0),
        scenario.v_q.unwrap_or(1.0),
        k0,
        q0,
        scenario.reflectivity.unwrap_or(1.0),
        [
            Complex64::new(scenario.ce1_re.unwrap_or(1.0), scenario.ce1_im.unwrap_or(0.0)),
            Complex64::new(scenario.ce2_re.unwrap_or(0.0), scenario.ce2_im.unwrap_or(0.0)),
        ],
    )?)
}

fn time_controls(scenario: &Scenario) -> (f64, f64) {
    (scenario.t_max.unwrap_or(30.0), scenario.dt.unwrap_or(1e-3))
}

fn grid_controls(scenario: &Scenario) -> (usize, f64) {
    (scenario.n_modes.unwrap_or(4001), scenario.window.unwrap_or(40.0))
}

// ---------------------------------------------------------------------------
// CSV emission

fn fmt(x: f64) -> String {
    format!("{x:.14e}")
}

fn single_csv(traj: &Trajectory) -> String {
    let mut out = String::from("t,re_ce,im_ce,pop\n");
    for i in 0..traj.len() {
        let c = traj.amplitude(0, i);
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt(traj.time(i)),
            fmt(c.re),
            fmt(c.im),
            fmt(c.norm_sqr())
        );
    }
    out
}

fn two_atom_csv(traj: &Trajectory) -> Result<String, ScenarioError> {
    let (plus, minus) = dde::symmetric_antisymmetric(traj)?;
    let mut out = String::from("t,pop1,pop2,pop_sym,pop_antisym\n");
    for i in 0..traj.len() {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            fmt(traj.time(i)),
            fmt(traj.population(0, i)),
            fmt(traj.population(1, i)),
            fmt(plus[i].norm_sqr()),
            fmt(minus[i].norm_sqr())
        );
    }
    Ok(out)
}

fn field_csv(field_k: &observables::OutputField, field_q: &observables::OutputField) -> String {
    let mut out = String::from("t_bar,intensity_k,intensity_q\n");
    for i in 0..field_k.len() {
        let _ = writeln!(
            out,
            "{},{},{}",
            fmt(field_k.time(i)),
            fmt(field_k.intensity(i)),
            fmt(field_q.intensity(i))
        );
    }
    out
}

// ---------------------------------------------------------------------------
// summary helpers

/// Bound-state prediction for the summary: among all energy roots, the
/// normalizable one with the largest excited-state occupation.
fn dominant_bound_state(
    omega0: f64,
    channel_k: &ChannelParams,
    channel_q: &ChannelParams,
) -> Option<(f64, f64)> {
    let roots = analytic::bound_state_energy(omega0, channel_k, channel_q);
    roots
        .into_iter()
        .filter_map(|e| {
            analytic::bound_state_population(e, omega0, channel_k, channel_q)
                .ok()
                .map(|bs| (e, bs.alpha))
        })
        .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
}

fn annotate_single_summary(summary: &mut Summary, config: &SingleAtomConfig, omega0: f64) {
    summary.steady_state_prediction = analytic::steady_state_population(config).ok();
    if config.reflectivity >= 1.0 {
        if let Some((energy, alpha)) =
            dominant_bound_state(omega0, &config.channel_k, &config.channel_q)
        {
            summary.bound_state_energy = Some(energy);
            summary.bound_state_alpha = Some(alpha);
        }
    }
}

// ---------------------------------------------------------------------------
// runners

fn run_single(scenario: &Scenario, name: &str) -> Result<SeriesOutput, ScenarioError> {
    let config = single_config(scenario, "single")?;
    let (t_max, dt) = time_controls(scenario);
    let traj = dde::integrate_single(&config, t_max, dt)?;
    let file_name = format!("{name}.csv");
    let mut summary = Summary::new(name, &file_name);
    annotate_single_summary(&mut summary, &config, scenario.omega0.unwrap_or(0.0));
    summary.final_population = Some(traj.population(0, traj.len() - 1));
    Ok(SeriesOutput {
        name: name.to_string(),
        file_name,
        csv: single_csv(&traj),
        summary,
    })
}

fn run_two_atom(scenario: &Scenario, name: &str) -> Result<SeriesOutput, ScenarioError> {
    let config = two_atom_config(scenario, "two-atom")?;
    let (t_max, dt) = time_controls(scenario);
    let traj = dde::integrate_two_atom(&config, t_max, dt)?;
    let file_name = format!("{name}.csv");
    let mut summary = Summary::new(name, &file_name);
    summary.final_population_atom1 = Some(traj.population(0, traj.len() - 1));
    summary.final_population_atom2 = Some(traj.population(1, traj.len() - 1));
    Ok(SeriesOutput {
        name: name.to_string(),
        file_name,
        csv: two_atom_csv(&traj)?,
        summary,
    })
}

fn run_oracle_single(scenario: &Scenario, name: &str) -> Result<SeriesOutput, ScenarioError> {
    let config = single_config(scenario, "oracle-single")?;
    let geometry = AtomGeometry::from_single_config(&config)?;
    let (n_modes, window) = grid_controls(scenario);
    let grid = ModeGrid::for_single(&geometry, n_modes, window)?;
    let (t_max, dt) = time_controls(scenario);
    let dt = dt.min(0.08 / window);
    let (traj, _) = oracle::evolve_modes_single(&geometry, &grid, t_max, dt)?;
    let file_name = format!("{name}.csv");
    let mut summary = Summary::new(name, &file_name);
    annotate_single_summary(&mut summary, &config, scenario.omega0.unwrap_or(0.0));
    summary.final_population = Some(traj.population(0, traj.len() - 1));
    summary.max_norm_drift = Some(traj.error_bound);
    Ok(SeriesOutput {
        name: name.to_string(),
        file_name,
        csv: single_csv(&traj),
        summary,
    })
}

fn run_oracle_two(scenario: &Scenario, name: &str) -> Result<SeriesOutput, ScenarioError> {
    let config = two_atom_config(scenario, "oracle-two")?;
    let (n_modes, window) = grid_controls(scenario);
    let grid = ModeGrid::for_two(&config, n_modes, window)?;
    let (t_max, dt) = time_controls(scenario);
    let dt = dt.min(0.08 / window);
    let (traj, _) = oracle::evolve_modes_two(&config, &grid, t_max, dt)?;
    let file_name = format!("{name}.csv");
    let mut summary = Summary::new(name, &file_name);
    summary.final_population_atom1 = Some(traj.population(0, traj.len() - 1));
    summary.final_population_atom2 = Some(traj.population(1, traj.len() - 1));
    summary.max_norm_drift = Some(traj.error_bound);
    Ok(SeriesOutput {
        name: name.to_string(),
        file_name,
        csv: two_atom_csv(&traj)?,
        summary,
    })
}

fn run_bound_state(scenario: &Scenario, name: &str) -> Result<SeriesOutput, ScenarioError> {
    let config = single_config(scenario, "bound-state")?;
    let omega0 = scenario.omega0.unwrap_or(0.0);
    let roots = analytic::bound_state_energy(omega0, &config.channel_k, &config.channel_q);
    let mut csv = String::from("energy,alpha,residual\n");
    for &energy in &roots {
        match analytic::bound_state_population(energy, omega0, &config.channel_k, &config.channel_q)
        {
            Ok(bs) => {
                let _ = writeln!(csv, "{},{},{}", fmt(energy), fmt(bs.alpha), fmt(bs.residual));
            }
            Err(_) => {
                let _ = writeln!(csv, "{},,{}", fmt(energy), fmt(0.0));
            }
        }
    }
    let file_name = format!("{name}.csv");
    let mut summary = Summary::new(name, &file_name);
    annotate_single_summary(&mut summary, &config, omega0);
    Ok(SeriesOutput {
        name: name.to_string(),
        file_name,
        csv,
        summary,
    })
}

fn run_output_field(scenario: &Scenario, name: &str) -> Result<SeriesOutput, ScenarioError> {
    let config = single_config(scenario, "output-field")?;
    let (t_max, dt) = time_controls(scenario);
    let d = scenario.detector_offset.unwrap_or(0.0);
    let traj = dde::integrate_single(&config, t_max, dt)?;
    let field_k = observables::output_field(&traj, &config, Channel::K, d, None)?;
    let field_q = observables::output_field(&traj, &config, Channel::Q, d, None)?;
    let file_name = format!("{name}.csv");
    let mut summary = Summary::new(name, &file_name);
    annotate_single_summary(&mut summary, &config, scenario.omega0.unwrap_or(0.0));
    summary.final_population = Some(traj.population(0, traj.len() - 1));
    summary.integrated_flux = observables::integrated_flux(&field_k, &field_q, &config).ok();
    Ok(SeriesOutput {
        name: name.to_string(),
        file_name,
        csv: field_csv(&field_k, &field_q),
        summary,
    })
}

/// Run a parsed scenario, producing one or more CSV series with summaries.
pub fn run_scenario(scenario: &Scenario) -> Result<Vec<SeriesOutput>, ScenarioError> {
    let mode = scenario.mode.as_deref().ok_or_else(|| ScenarioError::MissingKeys {
        mode: "<none>".to_string(),
        keys: "mode".to_string(),
    })?;
    let default_name = scenario.output.clone().unwrap_or_else(|| mode.replace('-', "_"));
    match mode {
        "single" => Ok(vec![run_single(scenario, &default_name)?]),
        "two-atom" => Ok(vec![run_two_atom(scenario, &default_name)?]),
        "oracle-single" => Ok(vec![run_oracle_single(scenario, &default_name)?]),
        "oracle-two" => Ok(vec![run_oracle_two(scenario, &default_name)?]),
        "bound-state" => Ok(vec![run_bound_state(scenario, &default_name)?]),
        "output-field" => Ok(vec![run_output_field(scenario, &default_name)?]),
        "figure" => {
            let figure = scenario.figure.as_deref().ok_or_else(|| ScenarioError::MissingKeys {
                mode: mode.to_string(),
                keys: "figure".to_string(),
            })?;
            let mut outputs = Vec::new();
            for (series, sub) in figure_preset(figure)? {
                let sub_mode = sub.mode.as_deref().expect("presets carry a mode");
                let output = match sub_mode {
                    "single" => run_single(&sub, &series)?,
                    "output-field" => run_output_field(&sub, &series)?,
                    other => unreachable!("unexpected preset mode {other}"),
                };
                outputs.push(output);
            }
            Ok(outputs)
        }
        other => Err(ScenarioError::UnknownMode(other.to_string())),
    }
}

/// Cross-validate the delay integrator against the mode oracle on the same
/// scenario at three successive grid refinements (modes and window doubled
/// together, so the mode spacing stays fixed).
pub fn run_compare(scenario: &Scenario) -> Result<CompareOutput, ScenarioError> {
    let config = single_config(scenario, "compare")?;
    if config.reflectivity < 1.0 {
        return Err(ScenarioError::InvalidValue {
            key: "reflectivity",
            reason: "mode-resolved comparison requires a perfect mirror".to_string(),
        });
    }
    let geometry = AtomGeometry::from_single_config(&config)?;
    let (t_max, dt) = time_controls(scenario);
    let dde_traj = dde::integrate_single(&config, t_max, dt)?;

    let (base_modes, base_window) = grid_controls(scenario);
    let mut levels = Vec::new();
    let mut base_csv = String::new();
    let mut max_drift = 0.0f64;
    for level in 0..3u32 {
        let n_modes = (base_modes - 1) * (1 << level) + 1;
        let window = base_window * f64::from(1 << level);
        let grid = ModeGrid::for_single(&geometry, n_modes, window)?;
        let oracle_dt = dt.min(0.08 / window);
        let (oracle_traj, _) = oracle::evolve_modes_single(&geometry, &grid, t_max, oracle_dt)?;
        max_drift = max_drift.max(oracle_traj.error_bound);

        let mut max_disc = 0.0f64;
        for i in 0..oracle_traj.len() {
            let t = oracle_traj.time(i);
            let diff = (dde_traj.sample(0, t) - oracle_traj.amplitude(0, i)).norm();
            max_disc = max_disc.max(diff);
        }
        if level == 0 {
            let mut out = String::from("t,re_dde,im_dde,re_oracle,im_oracle,abs_diff\n");
            for i in 0..oracle_traj.len() {
                let t = oracle_traj.time(i);
                let d = dde_traj.sample(0, t);
                let o = oracle_traj.amplitude(0, i);
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    fmt(t),
                    fmt(d.re),
                    fmt(d.im),
                    fmt(o.re),
                    fmt(o.im),
                    fmt((d - o).norm())
                );
            }
            base_csv = out;
        }
        levels.push(CompareLevel {
            n_modes,
            window,
            max_discrepancy: max_disc,
        });
    }
    let monotone = levels[1].max_discrepancy < levels[0].max_discrepancy
        && levels[2].max_discrepancy < levels[1].max_discrepancy;
    let name = scenario.output.clone().unwrap_or_else(|| "compare".to_string());
    let file_name = format!("{name}.csv");
    Ok(CompareOutput {
        report: CompareReport {
            series: name,
            csv: file_name.clone(),
            levels,
            monotone,
            max_norm_drift: max_drift,
        },
        file_name,
        csv: base_csv,
    })
}

// ---------------------------------------------------------------------------
// figure presets

fn preset_base() -> Scenario {
    Scenario {
        mode: Some("single".to_string()),
        figure: None,
        output: None,
        gamma_g: Some(1.0),
        gamma_xi: Some(1.0),
        phi_k: Some(std::f64::consts::TAU),
        phi_q: Some(std::f64::consts::TAU),
        tau_k: Some(1.0),
        tau_q: Some(1.0),
        reflectivity: Some(1.0),
        shift_kind: Some("none".to_string()),
        shift_amp: None,
        shift_t0: None,
        shift_w: None,
        shift_omega: None,
        t_max: Some(30.0),
        dt: Some(1e-3),
        x1: None,
        x2: None,
        v_k: Some(1.0),
        v_q: Some(1.0),
        k0: None,
        q0: None,
        n_modes: None,
        window: None,
        omega0: Some(0.0),
        detector_offset: Some(0.0),
        ce_re: Some(1.0),
        ce_im: Some(0.0),
        ce1_re: None,
        ce1_im: None,
        ce2_re: None,
        ce2_im: None,
    }
}

/// Expand a named figure into fully explicit scenarios, one per plotted
/// series. Presets only fill in literal parameter values; they run through
/// the same machinery as user configs.
pub fn figure_preset(name: &str) -> Result<Vec<(String, Scenario)>, ScenarioError> {
    let tau = std::f64::consts::TAU;
    let phase_series = |tau_delay: f64, t_max: f64| -> Vec<(String, Scenario)> {
        [("2pi", tau), ("halfpi", 0.5 * std::f64::consts::PI), ("pi", std::f64::consts::PI)]
            .into_iter()
            .map(|(label, phi_k)| {
                let mut s = preset_base();
                s.phi_k = Some(phi_k);
                s.tau_k = Some(tau_delay);
                s.tau_q = Some(tau_delay);
                s.t_max = Some(t_max);
                (format!("{name}_phik_{label}"), s)
            })
            .collect()
    };
    let out = match name {
        "fig2a" => phase_series(1.0, 30.0),
        "fig2b" => phase_series(0.1, 10.0),
        "fig3a" => [(1.5, 1.5, "1p5_1p5"), (0.4, 1.0, "0p4_1p0"), (0.2, 0.5, "0p2_0p5")]
            .into_iter()
            .map(|(tau_k, tau_q, label)| {
                let mut s = preset_base();
                s.tau_k = Some(tau_k);
                s.tau_q = Some(tau_q);
                (format!("fig3a_tau_{label}"), s)
            })
            .collect(),
        "fig3b" => [(0.3, "0p3"), (1.0, "1p0"), (3.0, "3p0")]
            .into_iter()
            .map(|(gamma_xi, label)| {
                let mut s = preset_base();
                s.gamma_xi = Some(gamma_xi);
                s.tau_k = Some(0.4);
                s.tau_q = Some(1.0);
                (format!("fig3b_gxi_{label}"), s)
            })
            .collect(),
        "fig4a" => {
            let mut s = preset_base();
            s.mode = Some("output-field".to_string());
            s.tau_k = Some(0.1);
            s.tau_q = Some(0.5);
            s.t_max = Some(10.0);
            vec![("fig4a".to_string(), s)]
        }
        "fig4b" => {
            let mut s = preset_base();
            s.mode = Some("output-field".to_string());
            s.phi_q = Some(0.5 * std::f64::consts::PI);
            s.tau_k = Some(0.1);
            s.tau_q = Some(0.1);
            s.t_max = Some(10.0);
            vec![("fig4b".to_string(), s)]
        }
        "fig5a" => {
            let mut s = preset_base();
            s.mode = Some("output-field".to_string());
            s.tau_k = Some(1.0);
            s.tau_q = Some(2.0);
            s.shift_kind = Some("smooth-step".to_string());
            s.shift_amp = Some(2.0);
            s.shift_t0 = Some(25.0);
            s.shift_w = Some(0.2);
            s.t_max = Some(60.0);
            vec![("fig5a".to_string(), s)]
        }
        "fig5b" => {
            let mut s = preset_base();
            s.mode = Some("output-field".to_string());
            s.tau_k = Some(0.1);
            s.tau_q = Some(0.2);
            s.shift_kind = Some("sinusoid".to_string());
            s.shift_amp = Some(2.0);
            s.shift_omega = Some(20.0);
            s.shift_t0 = Some(10.0);
            s.t_max = Some(30.0);
            vec![("fig5b".to_string(), s)]
        }
        "fig6" => {
            let mut out = Vec::new();
            for (r, label) in [(1.0, "r100"), (0.8, "r080"), (0.0, "r000")] {
                let mut s = preset_base();
                s.tau_k = Some(0.1);
                s.tau_q = Some(0.5);
                s.reflectivity = Some(r);
                s.t_max = Some(20.0);
                out.push((format!("fig6a_{label}"), s.clone()));
                s.mode = Some("output-field".to_string());
                out.push((format!("fig6bc_{label}"), s));
            }
            out
        }
        other => return Err(ScenarioError::UnknownFigure(other.to_string())),
    };
    Ok(out)
}

// ---------------------------------------------------------------------------
// file output

/// Write each series atomically (temp file + rename) under `outdir`,
/// creating it if needed. Returns the written paths.
pub fn write_series(outdir: &Path, outputs: &[SeriesOutput]) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(outdir)?;
    let mut paths = Vec::with_capacity(outputs.len());
    for output in outputs {
        paths.push(write_atomic(outdir, &output.file_name, &output.csv)?);
    }
    Ok(paths)
}

pub fn write_atomic(outdir: &Path, file_name: &str, contents: &str) -> io::Result<PathBuf> {
    fs::create_dir_all(outdir)?;
    let path = outdir.join(file_name);
    let tmp = outdir.join(format!("{file_name}.tmp"));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, &path)?;
    Ok(path)
}
