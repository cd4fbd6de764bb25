//! Brute-force validation backend: direct Runge-Kutta integration of the
//! discretized-mode Schrödinger equations in the rotating frame.
//!
//! Each waveguide channel is replaced by an odd number of modes on a wave
//! number window centered on the channel carrier, with sine-profile
//! couplings `sqrt(gamma v / pi) sin(mu x)` evaluated at the emitter
//! position. This evolution is unitary, so its norm is tracked and any
//! drift beyond tolerance aborts the run. It knows nothing about the delay
//! equations and serves as the independent ground truth for them. Only a
//! perfect mirror has a mode-sum realization; imperfect mirrors are out of
//! scope here.

use num_complex::Complex64;
use thiserror::Error;

use crate::model::{SingleAtomConfig, TwoAtomConfig};
use crate::trajectory::{Trajectory, TrajectoryMeta};

/// Maximum tolerated drift of the conserved norm over a run.
pub const NORM_DRIFT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("mode count {0} must be an odd integer >= 3")]
    BadModeCount(usize),
    #[error("invalid {quantity}: {value} ({constraint})")]
    InvalidParameter {
        quantity: &'static str,
        value: f64,
        constraint: &'static str,
    },
    #[error("mode-resolved runs require a perfect mirror, got reflectivity {0}")]
    ImperfectMirror(f64),
    #[error("channel delays imply different emitter positions: {x_k} vs {x_q}")]
    InconsistentGeometry { x_k: f64, x_q: f64 },
    #[error("step {dt} is too coarse for the frequency window {half_width}: need dt * W < 0.1")]
    StepTooLarge { dt: f64, half_width: f64 },
    #[error("horizon {t_max} reaches the revival time {poincare} of the discrete grid")]
    RevivalRisk { t_max: f64, poincare: f64 },
    #[error("need a finite positive step and t_max >= dt")]
    BadTimeGrid,
    #[error("norm drifted by {drift} at t = {t}; refine the step or grid")]
    NormDrift { t: f64, drift: f64 },
    #[error("non-finite amplitude at t = {t}")]
    NonFinite { t: f64 },
}

fn require(
    ok: bool,
    quantity: &'static str,
    value: f64,
    constraint: &'static str,
) -> Result<(), OracleError> {
    if ok {
        Ok(())
    } else {
        Err(OracleError::InvalidParameter {
            quantity,
            value,
            constraint,
        })
    }
}

/// Geometry of a single emitter for mode-resolved runs: position, bare
/// rates, group velocities and carriers of both channels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomGeometry {
    pub x0: f64,
    pub gamma_g: f64,
    pub gamma_xi: f64,
    pub v_k: f64,
    pub v_q: f64,
    pub k0: f64,
    pub q0: f64,
    pub initial: Complex64,
}

impl AtomGeometry {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        x0: f64,
        gamma_g: f64,
        gamma_xi: f64,
        v_k: f64,
        v_q: f64,
        k0: f64,
        q0: f64,
        initial: Complex64,
    ) -> Result<Self, OracleError> {
        require(x0.is_finite() && x0 >= 0.0, "x0", x0, "must be finite and >= 0")?;
        require(
            gamma_g.is_finite() && gamma_g >= 0.0,
            "gamma_g",
            gamma_g,
            "must be finite and >= 0",
        )?;
        require(
            gamma_xi.is_finite() && gamma_xi >= 0.0,
            "gamma_xi",
            gamma_xi,
            "must be finite and >= 0",
        )?;
        require(v_k.is_finite() && v_k > 0.0, "v_k", v_k, "must be finite and > 0")?;
        require(v_q.is_finite() && v_q > 0.0, "v_q", v_q, "must be finite and > 0")?;
        require(k0.is_finite(), "k0", k0, "must be finite")?;
        require(q0.is_finite(), "q0", q0, "must be finite")?;
        let norm = initial.norm();
        require(norm.is_finite() && norm <= 1.0 + 1e-12, "initial norm", norm, "must be <= 1")?;
        Ok(Self {
            x0,
            gamma_g,
            gamma_xi,
            v_k,
            v_q,
            k0,
            q0,
            initial,
        })
    }

    /// Recover the geometry from a delay-equation config. The mirror must be
    /// perfect and both active channels must place the emitter at the same
    /// distance `v * delay / 2` from the mirror.
    pub fn from_single_config(config: &SingleAtomConfig) -> Result<Self, OracleError> {
        if config.reflectivity < 1.0 {
            return Err(OracleError::ImperfectMirror(config.reflectivity));
        }
        let x_k = config.channel_k.mirror_distance();
        let x_q = config.channel_q.mirror_distance();
        let x0 = if config.channel_k.gamma > 0.0 && config.channel_q.gamma > 0.0 {
            if (x_k - x_q).abs() > 1e-9 * x_k.abs().max(x_q.abs()).max(1.0) {
                return Err(OracleError::InconsistentGeometry { x_k, x_q });
            }
            x_k
        } else if config.channel_k.gamma > 0.0 {
            x_k
        } else {
            x_q
        };
        Self::new(
            x0,
            config.channel_k.gamma,
            config.channel_q.gamma,
            config.channel_k.velocity,
            config.channel_q.velocity,
            config.channel_k.carrier,
            config.channel_q.carrier,
            config.initial,
        )
    }
}

/// Discretized wave-number window of one channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelModes {
    pub n_modes: usize,
    /// Window center; the model's carrier wave number.
    pub carrier: f64,
    pub velocity: f64,
    /// Frequency half-width of the window, so detunings span [-W, W].
    pub half_width: f64,
    /// Wave-number spacing.
    pub spacing: f64,
    pub wavenumbers: Vec<f64>,
}

impl ChannelModes {
    pub fn new(
        carrier: f64,
        velocity: f64,
        half_width: f64,
        n_modes: usize,
    ) -> Result<Self, OracleError> {
        if n_modes < 3 || n_modes.is_multiple_of(2) {
            return Err(OracleError::BadModeCount(n_modes));
        }
        require(
            velocity.is_finite() && velocity > 0.0,
            "velocity",
            velocity,
            "must be finite and > 0",
        )?;
        require(
            half_width.is_finite() && half_width > 0.0,
            "half_width",
            half_width,
            "must be finite and > 0",
        )?;
        require(carrier.is_finite(), "carrier", carrier, "must be finite")?;
        let spacing = 2.0 * half_width / velocity / (n_modes - 1) as f64;
        let mid = (n_modes / 2) as isize;
        let wavenumbers = (0..n_modes)
            .map(|j| carrier + (j as isize - mid) as f64 * spacing)
            .collect();
        Ok(Self {
            n_modes,
            carrier,
            velocity,
            half_width,
            spacing,
            wavenumbers,
        })
    }

    /// Lift the carrier by whole half-periods `pi / x0` of the coupling
    /// profile until the window sits at strictly positive wave numbers.
    /// This changes every sampled coupling by at most a global sign, so the
    /// emitter dynamics are untouched, but it keeps the sine modes linearly
    /// independent for real-space reconstruction.
    fn lifted(carrier: f64, velocity: f64, half_width: f64, x0: f64) -> f64 {
        if x0 <= 0.0 {
            return carrier;
        }
        let floor = 1.25 * half_width / velocity;
        if carrier >= floor {
            return carrier;
        }
        let step = std::f64::consts::PI / x0;
        let lifts = ((floor - carrier) / step).ceil();
        carrier + lifts * step
    }

    fn poincare_time(&self) -> f64 {
        2.0 * std::f64::consts::PI / (self.spacing * self.velocity)
    }
}

/// Mode windows of both channels.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeGrid {
    pub k: ChannelModes,
    pub q: ChannelModes,
}

impl ModeGrid {
    pub fn new(k: ChannelModes, q: ChannelModes) -> Self {
        Self { k, q }
    }

    /// Grid for a single emitter, with carriers lifted to keep both windows
    /// at positive wave numbers.
    pub fn for_single(
        geometry: &AtomGeometry,
        n_modes: usize,
        half_width: f64,
    ) -> Result<Self, OracleError> {
        let k0 = ChannelModes::lifted(geometry.k0, geometry.v_k, half_width, geometry.x0);
        let q0 = ChannelModes::lifted(geometry.q0, geometry.v_q, half_width, geometry.x0);
        Ok(Self {
            k: ChannelModes::new(k0, geometry.v_k, half_width, n_modes)?,
            q: ChannelModes::new(q0, geometry.v_q, half_width, n_modes)?,
        })
    }

    /// Grid for two emitters. Carriers are taken verbatim: a shift that
    /// preserves both self phases would generally break the inter-emitter
    /// phases, so callers wanting positive windows should choose carriers
    /// accordingly.
    pub fn for_two(config: &TwoAtomConfig, n_modes: usize, half_width: f64) -> Result<Self, OracleError> {
        Ok(Self {
            k: ChannelModes::new(config.k0, config.v_k, half_width, n_modes)?,
            q: ChannelModes::new(config.q0, config.v_q, half_width, n_modes)?,
        })
    }
}

/// Snapshot of the full discretized system.
#[derive(Debug, Clone)]
pub struct ModeState {
    pub atoms: Vec<Complex64>,
    pub modes_k: Vec<Complex64>,
    pub modes_q: Vec<Complex64>,
}

impl ModeState {
    /// Conserved norm: atomic populations plus the mode populations with
    /// their wave-number measure.
    pub fn norm(&self, grid: &ModeGrid) -> f64 {
        let atoms: f64 = self.atoms.iter().map(|c| c.norm_sqr()).sum();
        let k: f64 = self.modes_k.iter().map(|c| c.norm_sqr()).sum::<f64>() * grid.k.spacing;
        let q: f64 = self.modes_q.iter().map(|c| c.norm_sqr()).sum::<f64>() * grid.q.spacing;
        atoms + k + q
    }
}

struct ModeSystem {
    n_atoms: usize,
    nk: usize,
    detune_k: Vec<f64>,
    detune_q: Vec<f64>,
    couple_k: Vec<Vec<f64>>,
    couple_q: Vec<Vec<f64>>,
    dk: f64,
    dq: f64,
}

#[inline]
fn times_neg_i(z: Complex64) -> Complex64 {
    Complex64::new(z.im, -z.re)
}

impl ModeSystem {
    fn build(grid: &ModeGrid, positions: &[f64], gamma_g: f64, gamma_xi: f64) -> Self {
        let sample = |modes: &ChannelModes, gamma: f64| -> Vec<Vec<f64>> {
            let scale = (gamma * modes.velocity / std::f64::consts::PI).sqrt();
            positions
                .iter()
                .map(|&x| modes.wavenumbers.iter().map(|&mu| scale * (mu * x).sin()).collect())
                .collect()
        };
        Self {
            n_atoms: positions.len(),
            nk: grid.k.n_modes,
            detune_k: grid
                .k
                .wavenumbers
                .iter()
                .map(|&mu| (mu - grid.k.carrier) * grid.k.velocity)
                .collect(),
            detune_q: grid
                .q
                .wavenumbers
                .iter()
                .map(|&mu| (mu - grid.q.carrier) * grid.q.velocity)
                .collect(),
            couple_k: sample(&grid.k, gamma_g),
            couple_q: sample(&grid.q, gamma_xi),
            dk: grid.k.spacing,
            dq: grid.q.spacing,
        }
    }

    fn deriv(&self, y: &[Complex64], out: &mut [Complex64]) {
        let na = self.n_atoms;
        let (atoms, rest) = y.split_at(na);
        let (ck, cq) = rest.split_at(self.nk);
        let (datoms, drest) = out.split_at_mut(na);
        let (dck, dcq) = drest.split_at_mut(self.nk);

        let mut acc = [Complex64::default(); 2];
        for (j, (&c, dc)) in ck.iter().zip(dck.iter_mut()).enumerate() {
            let mut drive = Complex64::default();
            for a in 0..na {
                let g = self.couple_k[a][j];
                acc[a] += c * g;
                drive += atoms[a] * g;
            }
            *dc = times_neg_i(c * self.detune_k[j] + drive);
        }
        let mut atom_sum = [Complex64::default(); 2];
        for a in 0..na {
            atom_sum[a] = acc[a] * self.dk;
            acc[a] = Complex64::default();
        }
        for (j, (&c, dc)) in cq.iter().zip(dcq.iter_mut()).enumerate() {
            let mut drive = Complex64::default();
            for a in 0..na {
                let g = self.couple_q[a][j];
                acc[a] += c * g;
                drive += atoms[a] * g;
            }
            *dc = times_neg_i(c * self.detune_q[j] + drive);
        }
        for a in 0..na {
            datoms[a] = times_neg_i(atom_sum[a] + acc[a] * self.dq);
        }
    }
}

fn validate_grid_controls(grid: &ModeGrid, t_max: f64, dt: f64) -> Result<usize, OracleError> {
    if !(dt.is_finite() && dt > 0.0 && t_max.is_finite() && t_max >= dt) {
        return Err(OracleError::BadTimeGrid);
    }
    for modes in [&grid.k, &grid.q] {
        if dt * modes.half_width >= 0.1 {
            return Err(OracleError::StepTooLarge {
                dt,
                half_width: modes.half_width,
            });
        }
        let poincare = modes.poincare_time();
        if t_max >= poincare {
            return Err(OracleError::RevivalRisk { t_max, poincare });
        }
    }
    let steps = t_max / dt;
    if steps > 5e8 {
        return Err(OracleError::BadTimeGrid);
    }
    let rounded = steps.round();
    let n = if (steps - rounded).abs() < 1e-9 {
        rounded as usize
    } else {
        steps.ceil() as usize
    };
    Ok(n.max(1))
}

fn evolve(
    system: &ModeSystem,
    atom_inits: &[Complex64],
    grid: &ModeGrid,
    t_max: f64,
    dt: f64,
) -> Result<(Vec<Vec<Complex64>>, ModeState, f64), OracleError> {
    let n_steps = validate_grid_controls(grid, t_max, dt)?;
    let na = system.n_atoms;
    let dim = na + grid.k.n_modes + grid.q.n_modes;

    let mut y = vec![Complex64::default(); dim];
    y[..na].copy_from_slice(atom_inits);
    let mut k1 = vec![Complex64::default(); dim];
    let mut k2 = vec![Complex64::default(); dim];
    let mut k3 = vec![Complex64::default(); dim];
    let mut k4 = vec![Complex64::default(); dim];
    let mut stage = vec![Complex64::default(); dim];

    let state_of = |y: &[Complex64]| ModeState {
        atoms: y[..na].to_vec(),
        modes_k: y[na..na + grid.k.n_modes].to_vec(),
        modes_q: y[na + grid.k.n_modes..].to_vec(),
    };
    let norm0 = state_of(&y).norm(grid);

    let mut rows: Vec<Vec<Complex64>> = (0..na).map(|_| Vec::with_capacity(n_steps + 1)).collect();
    for (a, row) in rows.iter_mut().enumerate() {
        row.push(y[a]);
    }

    let mut max_drift = 0.0f64;
    for step in 0..n_steps {
        let half = 0.5 * dt;
        system.deriv(&y, &mut k1);
        for i in 0..dim {
            stage[i] = y[i] + k1[i] * half;
        }
        system.deriv(&stage, &mut k2);
        for i in 0..dim {
            stage[i] = y[i] + k2[i] * half;
        }
        system.deriv(&stage, &mut k3);
        for i in 0..dim {
            stage[i] = y[i] + k3[i] * dt;
        }
        system.deriv(&stage, &mut k4);
        for i in 0..dim {
            y[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (dt / 6.0);
        }
        for (a, row) in rows.iter_mut().enumerate() {
            row.push(y[a]);
        }

        if step % 16 == 15 || step + 1 == n_steps {
            let t = (step + 1) as f64 * dt;
            let norm = state_of(&y).norm(grid);
            if !norm.is_finite() {
                return Err(OracleError::NonFinite { t });
            }
            let drift = (norm - norm0).abs();
            max_drift = max_drift.max(drift);
            if drift > NORM_DRIFT_TOL {
                return Err(OracleError::NormDrift { t, drift });
            }
        }
    }
    Ok((rows, state_of(&y), max_drift))
}

/// Evolve a single emitter against the discretized mode bath and return its
/// excitation series together with the final field state.
pub fn evolve_modes_single(
    geometry: &AtomGeometry,
    grid: &ModeGrid,
    t_max: f64,
    dt: f64,
) -> Result<(Trajectory, ModeState), OracleError> {
    let system = ModeSystem::build(grid, &[geometry.x0], geometry.gamma_g, geometry.gamma_xi);
    let (rows, state, drift) = evolve(&system, &[geometry.initial], grid, t_max, dt)?;
    let traj = Trajectory::new(
        0.0,
        dt,
        rows,
        TrajectoryMeta::ModeOracleSingle {
            geometry: *geometry,
            n_modes: grid.k.n_modes,
            half_width: grid.k.half_width,
        },
        drift,
    )
    .expect("oracle grid is valid");
    Ok((traj, state))
}

/// Evolve two emitters sharing the discretized mode bath.
pub fn evolve_modes_two(
    config: &TwoAtomConfig,
    grid: &ModeGrid,
    t_max: f64,
    dt: f64,
) -> Result<(Trajectory, ModeState), OracleError> {
    if config.reflectivity < 1.0 {
        return Err(OracleError::ImperfectMirror(config.reflectivity));
    }
    let system = ModeSystem::build(
        grid,
        &[config.x1, config.x2],
        config.gamma_g,
        config.gamma_xi,
    );
    let (rows, state, drift) = evolve(&system, &config.initial, grid, t_max, dt)?;
    let traj = Trajectory::new(
        0.0,
        dt,
        rows,
        TrajectoryMeta::ModeOracleTwo {
            config: config.clone(),
            n_modes: grid.k.n_modes,
            half_width: grid.k.half_width,
        },
        drift,
    )
    .expect("oracle grid is valid");
    Ok((traj, state))
}

/// Reconstruct the real-space field of both channels at the given positions:
/// `psi(x) = sqrt(2/pi) * sum_j c_j sin(mu_j x) * dmu`.
pub fn realspace_field(
    state: &ModeState,
    grid: &ModeGrid,
    xs: &[f64],
) -> (Vec<Complex64>, Vec<Complex64>) {
    let project = |modes: &ChannelModes, amps: &[Complex64]| -> Vec<Complex64> {
        let scale = (2.0 / std::f64::consts::PI).sqrt() * modes.spacing;
        xs.iter()
            .map(|&x| {
                let mut sum = Complex64::default();
                for (c, &mu) in amps.iter().zip(&modes.wavenumbers) {
                    sum += c * (mu * x).sin();
                }
                sum * scale
            })
            .collect()
    };
    (
        project(&grid.k, &state.modes_k),
        project(&grid.q, &state.modes_q),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ChannelParams;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn decoupled_geometry() -> AtomGeometry {
        AtomGeometry::new(0.5, 0.0, 0.0, 1.0, 1.0, 10.0, 10.0, Complex64::new(0.8, 0.1)).unwrap()
    }

    #[test]
    fn decoupled_emitter_stays_put() {
        let geom = decoupled_geometry();
        let grid = ModeGrid::for_single(&geom, 201, 10.0).unwrap();
        let (traj, state) = evolve_modes_single(&geom, &grid, 2.0, 5e-3).unwrap();
        for i in 0..traj.len() {
            assert_abs_diff_eq!(traj.amplitude(0, i).re, 0.8, epsilon = 1e-12);
            assert_abs_diff_eq!(traj.amplitude(0, i).im, 0.1, epsilon = 1e-12);
        }
        assert!(state.modes_k.iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn norm_is_conserved_for_a_coupled_run() {
        let geom =
            AtomGeometry::new(0.5, 1.0, 1.0, 1.0, 1.0, 2.0 * PI, 2.0 * PI, Complex64::new(1.0, 0.0))
                .unwrap();
        let grid = ModeGrid::for_single(&geom, 1001, 20.0).unwrap();
        let (traj, state) = evolve_modes_single(&geom, &grid, 5.0, 4e-3).unwrap();
        assert!(traj.error_bound < NORM_DRIFT_TOL);
        assert_abs_diff_eq!(state.norm(&grid), 1.0, epsilon = 1e-6);
    }

    #[test]
    fn grid_validations() {
        let geom = decoupled_geometry();
        assert!(matches!(
            ModeGrid::for_single(&geom, 200, 10.0),
            Err(OracleError::BadModeCount(200))
        ));
        let grid = ModeGrid::for_single(&geom, 201, 10.0).unwrap();
        assert!(matches!(
            evolve_modes_single(&geom, &grid, 1.0, 0.02),
            Err(OracleError::StepTooLarge { .. })
        ));
        // spacing * v = 0.1 -> revival near t = 62.8
        assert!(matches!(
            evolve_modes_single(&geom, &grid, 100.0, 5e-3),
            Err(OracleError::RevivalRisk { .. })
        ));
    }

    #[test]
    fn window_lifting_preserves_the_feedback_phase() {
        let geom =
            AtomGeometry::new(0.5, 1.0, 1.0, 1.0, 1.0, 2.0 * PI, 2.0 * PI, Complex64::new(1.0, 0.0))
                .unwrap();
        let grid = ModeGrid::for_single(&geom, 801, 40.0).unwrap();
        assert!(grid.k.wavenumbers[0] > 0.0, "window still reaches k <= 0");
        // lifted carrier differs from the input by a multiple of pi / x0
        let lift = (grid.k.carrier - geom.k0) / (PI / geom.x0);
        assert_abs_diff_eq!(lift, lift.round(), epsilon = 1e-9);
    }

    #[test]
    fn realspace_field_vanishes_at_the_mirror_and_for_vacuum() {
        let geom =
            AtomGeometry::new(0.5, 1.0, 1.0, 1.0, 1.0, 2.0 * PI, 2.0 * PI, Complex64::new(1.0, 0.0))
                .unwrap();
        let grid = ModeGrid::for_single(&geom, 801, 20.0).unwrap();
        let (_, state) = evolve_modes_single(&geom, &grid, 3.0, 4e-3).unwrap();
        let (psi_k, psi_q) = realspace_field(&state, &grid, &[0.0, 1.7]);
        assert_eq!(psi_k[0], Complex64::default());
        assert_eq!(psi_q[0], Complex64::default());
        assert!(psi_k[1].norm() > 0.0);

        let vacuum = ModeState {
            atoms: vec![Complex64::new(1.0, 0.0)],
            modes_k: vec![Complex64::default(); grid.k.n_modes],
            modes_q: vec![Complex64::default(); grid.q.n_modes],
        };
        let (psi_k, _) = realspace_field(&vacuum, &grid, &[0.3, 2.0]);
        assert!(psi_k.iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn geometry_recovery_checks_consistency() {
        let cfg = SingleAtomConfig::ideal(
            ChannelParams::new(1.0, 2.0 * PI, 1.0).unwrap(),
            ChannelParams::new(1.0, 2.0 * PI, 0.5).unwrap(),
        )
        .unwrap();
        assert!(matches!(
            AtomGeometry::from_single_config(&cfg),
            Err(OracleError::InconsistentGeometry { .. })
        ));
        let cfg = SingleAtomConfig::ideal(
            ChannelParams::new(1.0, 2.0 * PI, 1.0).unwrap(),
            ChannelParams::disabled(),
        )
        .unwrap();
        let geom = AtomGeometry::from_single_config(&cfg).unwrap();
        assert_abs_diff_eq!(geom.x0, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn decoupled_pair_stays_put() {
        let cfg = TwoAtomConfig::new(
            0.3,
            0.9,
            0.0,
            0.0,
            1.0,
            1.0,
            10.0,
            10.0,
            1.0,
            [Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.5)],
        )
        .unwrap();
        let grid = ModeGrid::for_two(&cfg, 201, 10.0).unwrap();
        let (traj, _) = evolve_modes_two(&cfg, &grid, 2.0, 5e-3).unwrap();
        for i in 0..traj.len() {
            assert_abs_diff_eq!(traj.amplitude(0, i).re, 0.6, epsilon = 1e-12);
            assert_abs_diff_eq!(traj.amplitude(1, i).im, 0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn coincident_emitters_conserve_the_antisymmetric_amplitude() {
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        let cfg = TwoAtomConfig::new(
            0.5,
            0.5,
            1.0,
            1.0,
            1.0,
            1.0,
            16.0 * PI,
            16.0 * PI,
            1.0,
            [Complex64::new(inv, 0.0), Complex64::new(-inv, 0.0)],
        )
        .unwrap();
        let grid = ModeGrid::for_two(&cfg, 801, 20.0).unwrap();
        let (traj, _) = evolve_modes_two(&cfg, &grid, 5.0, 4e-3).unwrap();
        let diff0 = traj.amplitude(0, 0) - traj.amplitude(1, 0);
        for i in 0..traj.len() {
            let diff = traj.amplitude(0, i) - traj.amplitude(1, i);
            assert!((diff - diff0).norm() < 1e-6);
        }
    }
}
