//! Parameter records for the emitter–waveguide system.
//!
//! Everything is expressed in units of a reference decay rate: times are
//! measured in inverse rates, group velocities default to 1, and all phases
//! are in radians. A decay channel is specified either directly by its
//! `(gamma, phase, delay)` triple or through the geometry `(x0, v, mu0)` of
//! an emitter sitting a distance `x0` from the mirror that terminates the
//! waveguide.

use num_complex::Complex64;
use thiserror::Error;

/// Validation failure for a parameter record.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid {quantity}: {value} ({constraint})")]
    InvalidParameter {
        quantity: &'static str,
        value: f64,
        constraint: &'static str,
    },
    #[error("sampled shift table needs at least two finite, strictly increasing times")]
    BadSampleTable,
    #[error("initial amplitudes exceed unit norm: total {0}")]
    ExcessiveNorm(f64),
}

fn require(
    ok: bool,
    quantity: &'static str,
    value: f64,
    constraint: &'static str,
) -> Result<(), ModelError> {
    if ok {
        Ok(())
    } else {
        Err(ModelError::InvalidParameter {
            quantity,
            value,
            constraint,
        })
    }
}

/// Which of the two decay channels a quantity refers to.
///
/// `K` couples the excited state to the ground state, `Q` couples it to the
/// metastable lower state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    K,
    Q,
}

impl std::fmt::Display for Channel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Channel::K => write!(f, "k"),
            Channel::Q => write!(f, "q"),
        }
    }
}

/// One decay channel: rate, feedback phase, round-trip delay, group velocity
/// and carrier wave number.
///
/// The `(gamma, phase, delay)` triple is the canonical parametrization; the
/// carrier is kept so mode-resolved runs can reconstruct the geometry. Both
/// constructors maintain `phase = carrier * velocity * delay`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    /// Decay rate in units of the reference rate. Zero disables the channel.
    pub gamma: f64,
    /// Feedback phase picked up over one mirror round trip (radians).
    pub phase: f64,
    /// Mirror round-trip time, in inverse rate units.
    pub delay: f64,
    /// Group velocity (simulation units).
    pub velocity: f64,
    /// Carrier wave number of the channel.
    pub carrier: f64,
}

impl ChannelParams {
    /// Channel from its canonical `(gamma, phase, delay)` triple with the
    /// given group velocity. The carrier is derived so that
    /// `phase = carrier * velocity * delay` (zero when the delay vanishes).
    pub fn direct(gamma: f64, phase: f64, delay: f64, velocity: f64) -> Result<Self, ModelError> {
        require(
            gamma.is_finite() && gamma >= 0.0,
            "gamma",
            gamma,
            "must be finite and >= 0",
        )?;
        require(phase.is_finite(), "phase", phase, "must be finite")?;
        require(
            delay.is_finite() && delay >= 0.0,
            "delay",
            delay,
            "must be finite and >= 0",
        )?;
        require(
            velocity.is_finite() && velocity > 0.0,
            "velocity",
            velocity,
            "must be finite and > 0",
        )?;
        let carrier = if delay > 0.0 {
            phase / (velocity * delay)
        } else {
            0.0
        };
        Ok(Self {
            gamma,
            phase,
            delay,
            velocity,
            carrier,
        })
    }

    /// Channel from `(gamma, phase, delay)` with unit group velocity.
    pub fn new(gamma: f64, phase: f64, delay: f64) -> Result<Self, ModelError> {
        Self::direct(gamma, phase, delay, 1.0)
    }

    /// Channel from the emitter geometry: distance `x0` to the mirror, group
    /// velocity and carrier wave number. The delay is the full round trip
    /// `2 x0 / v` and the phase is `2 mu0 x0`.
    pub fn from_geometry(
        x0: f64,
        velocity: f64,
        carrier: f64,
        gamma: f64,
    ) -> Result<Self, ModelError> {
        require(
            x0.is_finite() && x0 >= 0.0,
            "x0",
            x0,
            "must be finite and >= 0",
        )?;
        require(
            velocity.is_finite() && velocity > 0.0,
            "velocity",
            velocity,
            "must be finite and > 0",
        )?;
        require(carrier.is_finite(), "carrier", carrier, "must be finite")?;
        require(
            gamma.is_finite() && gamma >= 0.0,
            "gamma",
            gamma,
            "must be finite and >= 0",
        )?;
        Ok(Self {
            gamma,
            phase: 2.0 * carrier * x0,
            delay: 2.0 * x0 / velocity,
            velocity,
            carrier,
        })
    }

    /// A switched-off channel.
    pub fn disabled() -> Self {
        Self {
            gamma: 0.0,
            phase: 0.0,
            delay: 0.0,
            velocity: 1.0,
            carrier: 0.0,
        }
    }

    /// Emitter–mirror distance implied by the delay.
    pub fn mirror_distance(&self) -> f64 {
        0.5 * self.velocity * self.delay
    }
}

/// Time-dependent frequency shift applied to the excited state.
///
/// The shift enters the equation of motion as an extra `-i shift(t)` on the
/// excitation amplitude. `SmoothStep` ramps from 0 to `amplitude` around the
/// onset time; `Sinusoid` oscillates after the onset and is zero before it;
/// `Sampled` linearly interpolates a table and is zero outside of it.
#[derive(Debug, Clone, PartialEq)]
pub enum FrequencyShift {
    None,
    SmoothStep {
        amplitude: f64,
        onset: f64,
        width: f64,
    },
    Sinusoid {
        amplitude: f64,
        onset: f64,
        angular_frequency: f64,
    },
    Sampled {
        times: Vec<f64>,
        values: Vec<f64>,
    },
}

impl FrequencyShift {
    pub fn smooth_step(amplitude: f64, onset: f64, width: f64) -> Result<Self, ModelError> {
        require(amplitude.is_finite(), "shift amplitude", amplitude, "must be finite")?;
        require(onset.is_finite(), "shift onset", onset, "must be finite")?;
        require(
            width.is_finite() && width > 0.0,
            "shift width",
            width,
            "must be finite and > 0",
        )?;
        Ok(Self::SmoothStep {
            amplitude,
            onset,
            width,
        })
    }

    pub fn sinusoid(amplitude: f64, angular_frequency: f64, onset: f64) -> Result<Self, ModelError> {
        require(amplitude.is_finite(), "shift amplitude", amplitude, "must be finite")?;
        require(onset.is_finite(), "shift onset", onset, "must be finite")?;
        require(
            angular_frequency.is_finite(),
            "shift angular frequency",
            angular_frequency,
            "must be finite",
        )?;
        Ok(Self::Sinusoid {
            amplitude,
            onset,
            angular_frequency,
        })
    }

    /// Tabulated shift. Times must be finite and strictly increasing, with at
    /// least two samples.
    pub fn sampled(times: Vec<f64>, values: Vec<f64>) -> Result<Self, ModelError> {
        if times.len() < 2 || times.len() != values.len() {
            return Err(ModelError::BadSampleTable);
        }
        let finite = times.iter().chain(values.iter()).all(|v| v.is_finite());
        let increasing = times.windows(2).all(|w| w[0] < w[1]);
        if !finite || !increasing {
            return Err(ModelError::BadSampleTable);
        }
        Ok(Self::Sampled { times, values })
    }

    /// Evaluate the shift at time `t`.
    pub fn value(&self, t: f64) -> f64 {
        match self {
            Self::None => 0.0,
            Self::SmoothStep {
                amplitude,
                onset,
                width,
            } => 0.5 * amplitude * (1.0 + ((t - onset) / width).tanh()),
            Self::Sinusoid {
                amplitude,
                onset,
                angular_frequency,
            } => {
                if t >= *onset {
                    amplitude * (angular_frequency * (t - onset)).sin()
                } else {
                    0.0
                }
            }
            Self::Sampled { times, values } => {
                let first = times[0];
                let last = times[times.len() - 1];
                if t < first || t > last {
                    return 0.0;
                }
                // partition_point gives the first index with times[i] > t
                let hi = times.partition_point(|&x| x <= t);
                if hi == times.len() {
                    return values[values.len() - 1];
                }
                let lo = hi - 1;
                let frac = (t - times[lo]) / (times[hi] - times[lo]);
                values[lo] + frac * (values[hi] - values[lo])
            }
        }
    }

    pub fn is_none(&self) -> bool {
        matches!(self, Self::None)
    }

    /// Upper bound on |shift| over any interval, used for step-error bounds.
    pub(crate) fn max_abs(&self) -> f64 {
        match self {
            Self::None => 0.0,
            Self::SmoothStep { amplitude, .. } | Self::Sinusoid { amplitude, .. } => {
                amplitude.abs()
            }
            Self::Sampled { values, .. } => values.iter().fold(0.0, |m, v| m.max(v.abs())),
        }
    }
}

/// A single emitter coupled to the waveguide through two channels, behind a
/// mirror of reflectivity `R`.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleAtomConfig {
    pub channel_k: ChannelParams,
    pub channel_q: ChannelParams,
    /// Mirror reflectivity, in [0, 1]. 1 is a perfect mirror, 0 removes the
    /// delayed feedback entirely.
    pub reflectivity: f64,
    pub shift: FrequencyShift,
    /// Excitation amplitude at t = 0; the field starts in vacuum.
    pub initial: Complex64,
}

impl SingleAtomConfig {
    pub fn new(
        channel_k: ChannelParams,
        channel_q: ChannelParams,
        reflectivity: f64,
        shift: FrequencyShift,
        initial: Complex64,
    ) -> Result<Self, ModelError> {
        require(
            reflectivity.is_finite() && (0.0..=1.0).contains(&reflectivity),
            "reflectivity",
            reflectivity,
            "must lie in [0, 1]",
        )?;
        let norm = initial.norm();
        if !norm.is_finite() || norm > 1.0 + 1e-12 {
            return Err(ModelError::ExcessiveNorm(norm * norm));
        }
        Ok(Self {
            channel_k,
            channel_q,
            reflectivity,
            shift,
            initial,
        })
    }

    /// Perfect-mirror config with unit initial excitation and no shift.
    pub fn ideal(channel_k: ChannelParams, channel_q: ChannelParams) -> Result<Self, ModelError> {
        Self::new(
            channel_k,
            channel_q,
            1.0,
            FrequencyShift::None,
            Complex64::new(1.0, 0.0),
        )
    }

    pub fn channel(&self, which: Channel) -> &ChannelParams {
        match which {
            Channel::K => &self.channel_k,
            Channel::Q => &self.channel_q,
        }
    }

    /// Complex amplitude for backward reflection off the mirror,
    /// `r = R + i sqrt(R (1 - R))`, so that `|r|^2 = R`.
    pub fn mirror_amplitude(&self) -> Complex64 {
        let r = self.reflectivity;
        Complex64::new(r, (r * (1.0 - r)).sqrt())
    }

    /// Combined bare decay rate of both channels.
    pub fn total_gamma(&self) -> f64 {
        self.channel_k.gamma + self.channel_q.gamma
    }

    /// Smallest strictly positive round-trip delay, if any.
    pub fn min_nonzero_delay(&self) -> Option<f64> {
        [self.channel_k.delay, self.channel_q.delay]
            .into_iter()
            .filter(|d| *d > 0.0)
            .fold(None, |acc, d| Some(acc.map_or(d, |a: f64| a.min(d))))
    }
}

/// Two identical emitters at positions `x1 <= x2`, sharing the waveguide
/// channels. Delays and phases for the self, direct and mirror-image photon
/// paths are derived from the geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoAtomConfig {
    pub x1: f64,
    pub x2: f64,
    pub gamma_g: f64,
    pub gamma_xi: f64,
    pub v_k: f64,
    pub v_q: f64,
    pub k0: f64,
    pub q0: f64,
    pub reflectivity: f64,
    /// Excitation amplitudes of the two emitters at t = 0.
    pub initial: [Complex64; 2],
}

impl TwoAtomConfig {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        x1: f64,
        x2: f64,
        gamma_g: f64,
        gamma_xi: f64,
        v_k: f64,
        v_q: f64,
        k0: f64,
        q0: f64,
        reflectivity: f64,
        initial: [Complex64; 2],
    ) -> Result<Self, ModelError> {
        require(
            x1.is_finite() && x1 >= 0.0,
            "x1",
            x1,
            "must be finite and >= 0",
        )?;
        require(x2.is_finite() && x2 >= x1, "x2", x2, "must satisfy x2 >= x1")?;
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
        require(
            v_k.is_finite() && v_k > 0.0,
            "v_k",
            v_k,
            "must be finite and > 0",
        )?;
        require(
            v_q.is_finite() && v_q > 0.0,
            "v_q",
            v_q,
            "must be finite and > 0",
        )?;
        require(k0.is_finite(), "k0", k0, "must be finite")?;
        require(q0.is_finite(), "q0", q0, "must be finite")?;
        require(
            reflectivity.is_finite() && (0.0..=1.0).contains(&reflectivity),
            "reflectivity",
            reflectivity,
            "must lie in [0, 1]",
        )?;
        let norm = initial[0].norm_sqr() + initial[1].norm_sqr();
        if !norm.is_finite() || norm > 1.0 + 1e-12 {
            return Err(ModelError::ExcessiveNorm(norm));
        }
        Ok(Self {
            x1,
            x2,
            gamma_g,
            gamma_xi,
            v_k,
            v_q,
            k0,
            q0,
            reflectivity,
            initial,
        })
    }

    pub fn gamma(&self, channel: Channel) -> f64 {
        match channel {
            Channel::K => self.gamma_g,
            Channel::Q => self.gamma_xi,
        }
    }

    pub fn velocity(&self, channel: Channel) -> f64 {
        match channel {
            Channel::K => self.v_k,
            Channel::Q => self.v_q,
        }
    }

    pub fn carrier(&self, channel: Channel) -> f64 {
        match channel {
            Channel::K => self.k0,
            Channel::Q => self.q0,
        }
    }

    fn position(&self, atom: usize) -> f64 {
        if atom == 0 {
            self.x1
        } else {
            self.x2
        }
    }

    /// Round trip of atom `atom` (0 or 1) to the mirror and back.
    pub fn delay_self(&self, channel: Channel, atom: usize) -> f64 {
        2.0 * self.position(atom) / self.velocity(channel)
    }

    /// Direct propagation time between the two emitters.
    pub fn delay_minus(&self, channel: Channel) -> f64 {
        (self.x2 - self.x1) / self.velocity(channel)
    }

    /// Propagation time between the emitters via the mirror.
    pub fn delay_plus(&self, channel: Channel) -> f64 {
        (self.x2 + self.x1) / self.velocity(channel)
    }

    pub fn phase_self(&self, channel: Channel, atom: usize) -> f64 {
        2.0 * self.position(atom) * self.carrier(channel)
    }

    pub fn phase_minus(&self, channel: Channel) -> f64 {
        (self.x2 - self.x1) * self.carrier(channel)
    }

    pub fn phase_plus(&self, channel: Channel) -> f64 {
        (self.x2 + self.x1) * self.carrier(channel)
    }

    /// Complex mirror reflection amplitude, as for the single emitter.
    pub fn mirror_amplitude(&self) -> Complex64 {
        let r = self.reflectivity;
        Complex64::new(r, (r * (1.0 - r)).sqrt())
    }

    /// Smallest strictly positive delay among all self/direct/mirror paths.
    pub fn min_nonzero_delay(&self) -> Option<f64> {
        let mut delays = Vec::with_capacity(8);
        for channel in [Channel::K, Channel::Q] {
            delays.push(self.delay_self(channel, 0));
            delays.push(self.delay_self(channel, 1));
            delays.push(self.delay_minus(channel));
            delays.push(self.delay_plus(channel));
        }
        delays
            .into_iter()
            .filter(|d| *d > 0.0)
            .fold(None, |acc, d| Some(acc.map_or(d, |a: f64| a.min(d))))
    }
}
