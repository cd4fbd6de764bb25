//! Detector-plane output fields and radiated-probability bookkeeping.
//!
//! A detector sits a distance `d` past the emitter. In retarded time
//! `t_bar = t - d/v` the field of a channel is
//!
//! ```text
//! psi(t_bar) = sqrt(gamma / 2 v) e^{i mu0 d}
//!              * [ c(t_bar) - r e^{i phase} c(t_bar - delay) ],
//! ```
//!
//! the direct wave minus the mirror image, with the image active once the
//! round trip has elapsed. Everything is reported against `t_bar`, so `d`
//! only contributes the constant carrier phase and may be left at zero.

use num_complex::Complex64;
use thiserror::Error;

use crate::interp;
use crate::model::{Channel, SingleAtomConfig};
use crate::trajectory::Trajectory;

/// Absolute flux allowed in the trailing 5% of the retarded grid before the
/// horizon is deemed too short.
pub const FLUX_TAIL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ObservablesError {
    #[error("detector offset must be finite and >= 0, got {0}")]
    BadOffset(f64),
    #[error("output fields need a single-emitter trajectory, found {0} rows")]
    WrongShape(usize),
    #[error("fields do not share one retarded-time grid")]
    MismatchedGrids,
    #[error("flux needs one k-channel and one q-channel field")]
    MismatchedChannels,
    #[error("trailing 5% of the grid still carries {tail:.3e} of flux; extend the horizon")]
    TailNotDecayed { tail: f64 },
}

/// Output field of one channel on a retarded-time grid.
#[derive(Debug, Clone)]
pub struct OutputField {
    pub channel: Channel,
    pub detector_offset: f64,
    /// Set when a requested horizon exceeded the trajectory and was clamped.
    pub truncated: bool,
    t0: f64,
    dt: f64,
    amplitudes: Vec<Complex64>,
    /// Emitter amplitude sampled on the same retarded grid.
    atom_samples: Vec<Complex64>,
    gamma: f64,
    velocity: f64,
}

impl OutputField {
    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.dt
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.time(i)).collect()
    }

    pub fn amplitude(&self, i: usize) -> Complex64 {
        self.amplitudes[i]
    }

    pub fn atom_sample(&self, i: usize) -> Complex64 {
        self.atom_samples[i]
    }

    /// Natural intensity prefactor `gamma / 2 v` of this channel.
    pub fn prefactor(&self) -> f64 {
        0.5 * self.gamma / self.velocity
    }

    pub fn intensity(&self, i: usize) -> f64 {
        self.amplitudes[i].norm_sqr()
    }

    pub fn intensities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|c| c.norm_sqr()).collect()
    }

    /// Intensities divided by the channel prefactor, for cross-channel
    /// comparison.
    pub fn normalized_intensities(&self) -> Vec<f64> {
        let scale = 1.0 / self.prefactor();
        self.amplitudes.iter().map(|c| c.norm_sqr() * scale).collect()
    }
}

/// Point evaluation of the output field at an arbitrary retarded time.
/// Causality makes it vanish for `t_bar < 0`, before the direct front
/// reaches the detector.
pub fn field_amplitude_at(
    traj: &Trajectory,
    config: &SingleAtomConfig,
    channel: Channel,
    d: f64,
    t_bar: f64,
) -> Result<Complex64, ObservablesError> {
    check_field_inputs(traj, d)?;
    let ch = config.channel(channel);
    let snap = interp::NODE_SNAP * traj.dt();
    if t_bar < -snap {
        return Ok(Complex64::default());
    }
    let r = config.mirror_amplitude();
    let prefactor = Complex64::from_polar((0.5 * ch.gamma / ch.velocity).sqrt(), ch.carrier * d);
    let direct = traj.sample(0, t_bar);
    let image = traj.sample(0, t_bar - ch.delay);
    Ok(prefactor * (direct - r * Complex64::cis(ch.phase) * image))
}

fn check_field_inputs(traj: &Trajectory, d: f64) -> Result<(), ObservablesError> {
    if traj.num_atoms() != 1 {
        return Err(ObservablesError::WrongShape(traj.num_atoms()));
    }
    if !(d.is_finite() && d >= 0.0) {
        return Err(ObservablesError::BadOffset(d));
    }
    Ok(())
}

/// Output field of one channel on the trajectory's grid, optionally clamped
/// to an explicit retarded horizon. A horizon beyond the trajectory marks
/// the field as truncated.
pub fn output_field(
    traj: &Trajectory,
    config: &SingleAtomConfig,
    channel: Channel,
    d: f64,
    t_bar_end: Option<f64>,
) -> Result<OutputField, ObservablesError> {
    check_field_inputs(traj, d)?;
    let ch = config.channel(channel);
    let dt = traj.dt();
    let (len, truncated) = match t_bar_end {
        None => (traj.len(), false),
        Some(end) => {
            let wanted = (end / dt).round() as i64 + 1;
            let wanted = wanted.max(1) as usize;
            (wanted.min(traj.len()), wanted > traj.len())
        }
    };
    let r = config.mirror_amplitude();
    let feedback = r * Complex64::cis(ch.phase);
    let prefactor = Complex64::from_polar((0.5 * ch.gamma / ch.velocity).sqrt(), ch.carrier * d);
    let mut amplitudes = Vec::with_capacity(len);
    let mut atom_samples = Vec::with_capacity(len);
    for i in 0..len {
        let direct = traj.amplitude(0, i);
        let image = traj.sample(0, traj.time(i) - ch.delay);
        amplitudes.push(prefactor * (direct - feedback * image));
        atom_samples.push(direct);
    }
    Ok(OutputField {
        channel,
        detector_offset: d,
        truncated,
        t0: traj.t0(),
        dt,
        amplitudes,
        atom_samples,
        gamma: ch.gamma,
        velocity: ch.velocity,
    })
}

fn trapezoid(values: impl ExactSizeIterator<Item = f64> + Clone, dt: f64) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let sum: f64 = values.clone().sum();
    let mut iter = values;
    let first = iter.next().unwrap();
    let last = iter.last().unwrap();
    (sum - 0.5 * (first + last)) * dt
}

/// Total probability radiated into the environment:
///
/// ```text
/// flux = int dt [ v_k |psi_k|^2 + v_q |psi_q|^2 ]
///      + (1 - R) (gamma_g + gamma_xi)/2 * int dt |c(t)|^2
/// ```
///
/// The first term is the probability current past the detector; the second
/// is what an imperfect mirror transmits out the back and is zero for R = 1.
/// Closed systems conserve probability, so for a fully decayed emitter this
/// tends to 1 and for a trapped one to 1 minus the bound-state weight.
/// Both fields must share one grid whose trailing 5% carries less than
/// [`FLUX_TAIL_TOL`] of flux.
pub fn integrated_flux(
    field_k: &OutputField,
    field_q: &OutputField,
    config: &SingleAtomConfig,
) -> Result<f64, ObservablesError> {
    if field_k.channel != Channel::K || field_q.channel != Channel::Q {
        return Err(ObservablesError::MismatchedChannels);
    }
    if field_k.t0.to_bits() != field_q.t0.to_bits()
        || field_k.dt.to_bits() != field_q.dt.to_bits()
        || field_k.len() != field_q.len()
    {
        return Err(ObservablesError::MismatchedGrids);
    }
    let n = field_k.len();
    if n < 2 {
        return Ok(0.0);
    }
    let transmission =
        (1.0 - config.reflectivity) * 0.5 * (config.channel_k.gamma + config.channel_q.gamma);
    let integrand = |i: usize| {
        field_k.velocity * field_k.intensity(i)
            + field_q.velocity * field_q.intensity(i)
            + transmission * field_k.atom_samples[i].norm_sqr()
    };
    let total = trapezoid((0..n).map(integrand), field_k.dt);
    let tail_start = n - (n / 20).max(2);
    let tail = trapezoid((tail_start..n).map(integrand), field_k.dt);
    if tail > FLUX_TAIL_TOL {
        return Err(ObservablesError::TailNotDecayed { tail });
    }
    Ok(total)
}
