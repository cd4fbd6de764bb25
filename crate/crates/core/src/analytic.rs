//! Closed-form and semi-analytic results for the single emitter behind a
//! perfect mirror: the iterated piecewise series solution, the
//! Laplace-domain amplitude with its long-time limit, and the emitter-photon
//! bound state that carries the trapped population.

use num_complex::Complex64;
use thiserror::Error;

use crate::model::{ChannelParams, SingleAtomConfig};

/// Residual below which the steady-state interference condition is
/// considered satisfied.
pub const STEADY_CONDITION_TOL: f64 = 1e-12;
/// Residual required of a bound-state energy root.
pub const BOUND_STATE_RESIDUAL_TOL: f64 = 1e-12;
/// Denominator magnitude below which the Laplace amplitude is treated as a
/// pole.
pub const LAPLACE_POLE_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticError {
    #[error("requires a perfect mirror (reflectivity 1), got {0}")]
    ImperfectMirror(f64),
    #[error("requires a static emitter (no frequency shift)")]
    ShiftPresent,
    #[error("series solution needs equal channel delays, got {tau_k} and {tau_q}")]
    DistinctDelays { tau_k: f64, tau_q: f64 },
    #[error("series solution degenerates at zero delay; use the exponential closed form")]
    ZeroDelay,
    #[error("Laplace denominator vanishes at s = {s}: pole")]
    Pole { s: Complex64 },
    #[error("energy {energy} is not a root: residual {residual}")]
    NotARoot { energy: f64, residual: f64 },
    #[error("root at {energy} is not a normalizable bound state (occupation denominator {denominator})")]
    InvalidRoot { energy: f64, denominator: f64 },
}

fn require_ideal(config: &SingleAtomConfig) -> Result<(), AnalyticError> {
    if config.reflectivity < 1.0 {
        return Err(AnalyticError::ImperfectMirror(config.reflectivity));
    }
    if !config.shift.is_none() {
        return Err(AnalyticError::ShiftPresent);
    }
    Ok(())
}

/// Piecewise series solution of the quasi-degenerate problem (both channels
/// share one delay `tau`, perfect mirror, no shift):
///
/// ```text
/// c(t) = sum_n A^n (t - n tau)^n / n! * exp(-(G/2)(t - n tau)),  t >= n tau
/// A    = (gamma_g e^{i phi_k} + gamma_xi e^{i phi_q}) / 2,  G = gamma_g + gamma_xi
/// ```
///
/// Terms are evaluated through a log-magnitude recurrence so the factorial
/// never overflows; the step functions truncate the sum at `n = t / tau`.
/// The result is scaled by the configured initial amplitude.
pub fn series_solution(config: &SingleAtomConfig, t: f64) -> Result<Complex64, AnalyticError> {
    require_ideal(config)?;
    let tau_k = config.channel_k.delay;
    let tau_q = config.channel_q.delay;
    if tau_k != tau_q {
        return Err(AnalyticError::DistinctDelays { tau_k, tau_q });
    }
    if tau_k == 0.0 {
        return Err(AnalyticError::ZeroDelay);
    }
    let tau = tau_k;
    if t < 0.0 {
        return Ok(Complex64::default());
    }

    let g_total = config.total_gamma();
    let a = (Complex64::from_polar(config.channel_k.gamma, config.channel_k.phase)
        + Complex64::from_polar(config.channel_q.gamma, config.channel_q.phase))
        * 0.5;
    let ln_a = a.norm().ln(); // -inf when the feedback terms cancel exactly
    let arg_a = a.arg();

    let n_max = (t / tau + 1e-9).floor() as usize;
    let mut sum = Complex64::default();
    let mut ln_factorial = 0.0;
    for n in 0..=n_max {
        if n > 0 {
            ln_factorial += (n as f64).ln();
        }
        let u = t - n as f64 * tau;
        if u < 0.0 {
            break;
        }
        let term = if n == 0 {
            Complex64::new((-0.5 * g_total * u).exp(), 0.0)
        } else if u == 0.0 || ln_a == f64::NEG_INFINITY {
            continue;
        } else {
            let log_mag = n as f64 * (ln_a + u.ln()) - ln_factorial - 0.5 * g_total * u;
            if log_mag < -745.0 {
                continue;
            }
            Complex64::from_polar(log_mag.exp(), n as f64 * arg_a)
        };
        sum += term;
    }
    Ok(sum * config.initial)
}

/// Whether the instantaneous and retarded decay rates balance, i.e.
/// `(gamma_g/2)(1 - e^{i phi_k}) + (gamma_xi/2)(1 - e^{i phi_q}) = 0` within
/// [`STEADY_CONDITION_TOL`]. For two active channels this requires both
/// phases to be multiples of 2π; a disabled channel drops its constraint.
pub fn steady_state_condition(phi_k: f64, phi_q: f64, gamma_g: f64, gamma_xi: f64) -> bool {
    let one = Complex64::new(1.0, 0.0);
    let residual = (one - Complex64::cis(phi_k)) * (0.5 * gamma_g)
        + (one - Complex64::cis(phi_q)) * (0.5 * gamma_xi);
    residual.norm() < STEADY_CONDITION_TOL
}

/// Long-time excited population behind a perfect mirror. When the balance
/// condition holds this is `(1 + (gamma_g tau_k + gamma_xi tau_q)/2)^{-2}`
/// scaled by the initial population; otherwise the emitter decays completely
/// and the result is 0.
pub fn steady_state_population(config: &SingleAtomConfig) -> Result<f64, AnalyticError> {
    require_ideal(config)?;
    if !steady_state_condition(
        config.channel_k.phase,
        config.channel_q.phase,
        config.channel_k.gamma,
        config.channel_q.gamma,
    ) {
        return Ok(0.0);
    }
    let weighted =
        config.channel_k.gamma * config.channel_k.delay + config.channel_q.gamma * config.channel_q.delay;
    let amp = 1.0 / (1.0 + 0.5 * weighted);
    Ok(amp * amp * config.initial.norm_sqr())
}

/// Laplace transform of the excitation amplitude,
/// `c(0) / [s + (gamma_g/2)(1 - e^{i phi_k - s tau_k}) + (gamma_xi/2)(1 - e^{i phi_q - s tau_q})]`.
pub fn laplace_amplitude(config: &SingleAtomConfig, s: Complex64) -> Result<Complex64, AnalyticError> {
    require_ideal(config)?;
    let one = Complex64::new(1.0, 0.0);
    let k = &config.channel_k;
    let q = &config.channel_q;
    let denom = s
        + (one - (Complex64::new(0.0, k.phase) - s * k.delay).exp()) * (0.5 * k.gamma)
        + (one - (Complex64::new(0.0, q.phase) - s * q.delay).exp()) * (0.5 * q.gamma);
    if denom.norm() < LAPLACE_POLE_TOL {
        return Err(AnalyticError::Pole { s });
    }
    Ok(config.initial / denom)
}

/// Long-time amplitude limit `lim_{s -> 0} s c~(s)`, evaluated in closed
/// form: `c(0) / (1 + (gamma_g tau_k + gamma_xi tau_q)/2)` when the balance
/// condition holds, zero otherwise.
pub fn final_value(config: &SingleAtomConfig) -> Result<Complex64, AnalyticError> {
    require_ideal(config)?;
    if !steady_state_condition(
        config.channel_k.phase,
        config.channel_q.phase,
        config.channel_k.gamma,
        config.channel_q.gamma,
    ) {
        return Ok(Complex64::default());
    }
    let weighted =
        config.channel_k.gamma * config.channel_k.delay + config.channel_q.gamma * config.channel_q.delay;
    Ok(config.initial / (1.0 + 0.5 * weighted))
}

/// Closed-form photon amplitude of the bound state in one channel, as a
/// function of wave number:
/// `strength * sin(mu x0) / (offset - (mu - carrier) * velocity)`.
///
/// On resonance the coupling zero cancels the energy pole; `eval` takes the
/// limit there instead of dividing by zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonProfile {
    pub strength: f64,
    pub x0: f64,
    pub carrier: f64,
    pub velocity: f64,
    /// Bound-state energy relative to the bare transition.
    pub offset: f64,
}

impl PhotonProfile {
    pub fn eval(&self, mu: f64) -> f64 {
        let numer = (mu * self.x0).sin();
        let denom = self.offset - (mu - self.carrier) * self.velocity;
        if denom.abs() < 1e-12 * self.velocity.max(1.0) {
            if numer.abs() < 1e-9 {
                // 0/0 at the resonant pole: l'Hopital limit
                return -self.strength * self.x0 * (mu * self.x0).cos() / self.velocity;
            }
            return f64::INFINITY * numer.signum() * self.strength.signum();
        }
        self.strength * numer / denom
    }
}

/// A bound state of the coupled emitter-field system: the energy root, the
/// excited-state occupation `alpha`, and the photon amplitudes of both
/// channels in closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundState {
    pub energy: f64,
    /// Excited-state occupation of the normalized bound state, in (0, 1].
    pub alpha: f64,
    /// Residual of the energy equation at `energy`.
    pub residual: f64,
    pub beta: PhotonProfile,
    pub gamma: PhotonProfile,
}

fn energy_equation(omega0: f64, k: &ChannelParams, q: &ChannelParams, energy: f64) -> f64 {
    let arg_k = (energy - omega0 + k.carrier * k.velocity) * k.delay;
    let arg_q = (energy - omega0 + q.carrier * q.velocity) * q.delay;
    energy - omega0
        + 0.5 * k.gamma / k.velocity * arg_k.sin()
        + 0.5 * q.gamma / q.velocity * arg_q.sin()
}

fn energy_equation_slope(omega0: f64, k: &ChannelParams, q: &ChannelParams, energy: f64) -> f64 {
    let arg_k = (energy - omega0 + k.carrier * k.velocity) * k.delay;
    let arg_q = (energy - omega0 + q.carrier * q.velocity) * q.delay;
    1.0 + 0.5 * k.gamma / k.velocity * k.delay * arg_k.cos()
        + 0.5 * q.gamma / q.velocity * q.delay * arg_q.cos()
}

const BRACKET_SCAN: usize = 10_000;

/// All real roots of the transcendental bound-state energy equation
///
/// ```text
/// E = omega0 - (gamma_g / 2 v_k) sin[(E - omega0 + k0 v_k) tau_k]
///            - (gamma_xi / 2 v_q) sin[(E - omega0 + q0 v_q) tau_q]
/// ```
///
/// The right-hand side is bounded, so every root lies within
/// `|E - omega0| <= gamma_g/(2 v_k) + gamma_xi/(2 v_q)`. That interval is
/// scanned with 10^4 uniform brackets; each sign change is bisected and then
/// polished with Newton steps until the residual is below
/// [`BOUND_STATE_RESIDUAL_TOL`]. Roots the scan cannot bracket (tangencies)
/// are not reported.
pub fn bound_state_energy(omega0: f64, channel_k: &ChannelParams, channel_q: &ChannelParams) -> Vec<f64> {
    let bound = 0.5 * channel_k.gamma / channel_k.velocity + 0.5 * channel_q.gamma / channel_q.velocity;
    if bound == 0.0 {
        // decoupled emitter: the bare transition is the only eigenvalue
        return vec![omega0];
    }
    let f = |e: f64| energy_equation(omega0, channel_k, channel_q, e);
    let lo = omega0 - bound * (1.0 + 1e-9);
    let hi = omega0 + bound * (1.0 + 1e-9);
    let step = (hi - lo) / BRACKET_SCAN as f64;

    let mut roots: Vec<f64> = Vec::new();
    let mut push_root = |root: f64| {
        let tol = 1e-9 * bound.max(1.0);
        if roots.iter().all(|r| (r - root).abs() > tol) {
            roots.push(root);
        }
    };

    let mut a = lo;
    let mut fa = f(a);
    for i in 1..=BRACKET_SCAN {
        let b = lo + step * i as f64;
        let fb = f(b);
        if fa == 0.0 {
            push_root(polish(f, a, omega0, channel_k, channel_q));
        } else if fa * fb < 0.0 {
            let root = bisect_then_newton(f, a, b, fa, omega0, channel_k, channel_q);
            push_root(root);
        }
        a = b;
        fa = fb;
    }
    if fa == 0.0 {
        push_root(polish(f, a, omega0, channel_k, channel_q));
    }
    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    roots
}

fn bisect_then_newton(
    f: impl Fn(f64) -> f64,
    mut a: f64,
    mut b: f64,
    mut fa: f64,
    omega0: f64,
    k: &ChannelParams,
    q: &ChannelParams,
) -> f64 {
    for _ in 0..60 {
        let mid = 0.5 * (a + b);
        let fm = f(mid);
        if fm == 0.0 {
            return polish(f, mid, omega0, k, q);
        }
        if fa * fm < 0.0 {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
    }
    polish(f, 0.5 * (a + b), omega0, k, q)
}

fn polish(
    f: impl Fn(f64) -> f64,
    mut x: f64,
    omega0: f64,
    k: &ChannelParams,
    q: &ChannelParams,
) -> f64 {
    for _ in 0..20 {
        let fx = f(x);
        if fx.abs() < 1e-16 {
            break;
        }
        let slope = energy_equation_slope(omega0, k, q, x);
        if slope.abs() < 1e-12 {
            break;
        }
        let next = x - fx / slope;
        if !next.is_finite() {
            break;
        }
        if (next - x).abs() <= f64::EPSILON * x.abs().max(1.0) {
            x = next;
            break;
        }
        x = next;
    }
    x
}

/// Occupation and photon content of a verified bound-state root:
///
/// ```text
/// alpha = { 1 + (gamma_g tau_k / 2) cos[(E - omega0 + k0 v_k) tau_k]
///             + (gamma_xi tau_q / 2) cos[(E - omega0 + q0 v_q) tau_q] }^{-1}
/// ```
///
/// Roots whose occupation denominator is not at least 1 describe
/// non-normalizable continuum resonances rather than bound states (the
/// principal-value normalization behind the formula only converges when the
/// coupling zero sits on the energy pole) and are rejected.
pub fn bound_state_population(
    energy: f64,
    omega0: f64,
    channel_k: &ChannelParams,
    channel_q: &ChannelParams,
) -> Result<BoundState, AnalyticError> {
    let residual = energy_equation(omega0, channel_k, channel_q, energy).abs();
    if residual > 1e-8 {
        return Err(AnalyticError::NotARoot { energy, residual });
    }
    let arg_k = (energy - omega0 + channel_k.carrier * channel_k.velocity) * channel_k.delay;
    let arg_q = (energy - omega0 + channel_q.carrier * channel_q.velocity) * channel_q.delay;
    let denominator = 1.0
        + 0.5 * channel_k.gamma * channel_k.delay * arg_k.cos()
        + 0.5 * channel_q.gamma * channel_q.delay * arg_q.cos();
    if denominator <= 0.0 || denominator < 1.0 - 1e-12 {
        return Err(AnalyticError::InvalidRoot {
            energy,
            denominator,
        });
    }
    let alpha = 1.0 / denominator;
    let profile = |ch: &ChannelParams| PhotonProfile {
        strength: (ch.gamma * ch.velocity / std::f64::consts::PI).sqrt() * alpha,
        x0: ch.mirror_distance(),
        carrier: ch.carrier,
        velocity: ch.velocity,
        offset: energy - omega0,
    };
    Ok(BoundState {
        energy,
        alpha,
        residual,
        beta: profile(channel_k),
        gamma: profile(channel_q),
    })
}
