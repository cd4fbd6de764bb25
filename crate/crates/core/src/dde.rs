//! Fixed-step method-of-steps integrator for the retarded equations of
//! motion of one or two emitters in front of the mirror.
//!
//! The excitation amplitude obeys a linear delay differential equation: an
//! instantaneous damping term per channel plus mirror-reflected feedback
//! terms evaluated one round trip in the past. Integration uses classical
//! four-stage Runge-Kutta on a uniform grid; delayed lookups at the stage
//! times are served from a dense history ring via cubic Hermite
//! interpolation with the stored node derivatives. The delayed terms switch
//! on inclusively, i.e. a term with delay `tau` is already active at
//! `t = tau`, and the history before t = 0 is identically zero with the
//! configured amplitude at t = 0.

use num_complex::Complex64;
use thiserror::Error;

use crate::interp::{self, GridPos};
use crate::model::{Channel, FrequencyShift, SingleAtomConfig, TwoAtomConfig};
use crate::trajectory::{Trajectory, TrajectoryMeta};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DdeError {
    #[error("step {dt} exceeds a tenth of the smallest active delay {min_delay}; delayed lookups would extrapolate")]
    StepTooLarge { dt: f64, min_delay: f64 },
    #[error("need a finite positive step and t_max >= dt")]
    BadTimeGrid,
    #[error("integration diverged at t = {t}: non-finite amplitude")]
    Diverged { t: f64 },
    #[error("expected a two-atom trajectory, found {rows} row(s)")]
    RowCount { rows: usize },
}

/// One-sided data at a derivative discontinuity: the solution value and the
/// left and right limits of its derivative.
struct KinkRecord<const N: usize> {
    time: f64,
    value: [Complex64; N],
    left: [Complex64; N],
    right: [Complex64; N],
}

/// Dense ring of past node values and derivatives on the integration grid,
/// plus one-sided records at the tracked derivative kinks so interpolation
/// never smooths across a corner.
///
/// Retains at least the largest delay plus an interpolation stencil. Lookups
/// before the grid start return zero; a lookup exactly at the start returns
/// the initial value.
pub(crate) struct HistoryBuffer<const N: usize> {
    t0: f64,
    dt: f64,
    capacity: usize,
    len: usize,
    values: Vec<[Complex64; N]>,
    derivs: Vec<[Complex64; N]>,
    kinks: Vec<KinkRecord<N>>,
}

impl<const N: usize> HistoryBuffer<N> {
    pub(crate) fn new(t0: f64, dt: f64, capacity: usize) -> Self {
        let capacity = capacity.max(2);
        Self {
            t0,
            dt,
            capacity,
            len: 0,
            values: vec![[Complex64::default(); N]; capacity],
            derivs: vec![[Complex64::default(); N]; capacity],
            kinks: Vec::new(),
        }
    }

    fn snap(&self) -> f64 {
        interp::NODE_SNAP * self.dt
    }

    pub(crate) fn push(&mut self, value: [Complex64; N]) {
        let slot = self.len % self.capacity;
        self.values[slot] = value;
        self.derivs[slot] = [Complex64::default(); N];
        self.len += 1;
    }

    pub(crate) fn set_derivative(&mut self, node: usize, d: [Complex64; N]) {
        debug_assert!(node < self.len && node + self.capacity >= self.len);
        self.derivs[node % self.capacity] = d;
    }

    /// Record a kink. Must be pushed in time order as stepping passes them.
    pub(crate) fn push_kink(
        &mut self,
        time: f64,
        value: [Complex64; N],
        left: [Complex64; N],
        right: [Complex64; N],
    ) {
        debug_assert!(self.kinks.last().is_none_or(|k| k.time < time));
        self.kinks.push(KinkRecord {
            time,
            value,
            left,
            right,
        });
    }

    fn node_value(&self, node: usize) -> &[Complex64; N] {
        debug_assert!(node + self.capacity >= self.len, "history slot evicted");
        &self.values[node % self.capacity]
    }

    fn node_deriv(&self, node: usize) -> &[Complex64; N] {
        debug_assert!(node + self.capacity >= self.len, "history slot evicted");
        &self.derivs[node % self.capacity]
    }

    /// Interpolate component `comp` of the stored history at time `t`.
    pub(crate) fn lookup(&self, t: f64, comp: usize) -> Complex64 {
        match interp::locate(self.t0, self.dt, self.len, t) {
            GridPos::Before => Complex64::default(),
            GridPos::Node(i) => self.node_value(i)[comp],
            GridPos::Interval(i, theta) => self.interval_lookup(i, theta, comp),
            GridPos::After => {
                debug_assert!(false, "delayed lookup past the stored history");
                self.node_value(self.len - 1)[comp]
            }
        }
    }

    fn interval_lookup(&self, i: usize, theta: f64, comp: usize) -> Complex64 {
        let snap = self.snap();
        let t_lo = self.t0 + i as f64 * self.dt;
        let t_hi = t_lo + self.dt;
        let t = t_lo + theta * self.dt;

        let first = self.kinks.partition_point(|k| k.time < t_lo - snap);
        // fast path: no kink touches this interval
        if first >= self.kinks.len() || self.kinks[first].time > t_hi + snap {
            return interp::hermite(
                self.node_value(i)[comp],
                self.node_value(i + 1)[comp],
                self.node_deriv(i)[comp],
                self.node_deriv(i + 1)[comp],
                self.dt,
                theta,
            );
        }

        // piecewise interpolation between node and kink breakpoints, using
        // the one-sided derivatives on each segment
        let mut a_time = t_lo;
        let mut a_value = self.node_value(i)[comp];
        let mut a_deriv = self.node_deriv(i)[comp];
        for kink in &self.kinks[first..] {
            if kink.time > t_hi + snap {
                break;
            }
            if kink.time <= t_lo + snap {
                // kink sits on the left node: start from its right limit
                a_deriv = kink.right[comp];
                continue;
            }
            if kink.time >= t_hi - snap {
                // kink sits on the right node: finish with its left limit
                return segment(a_time, a_value, a_deriv, t_hi, kink.value[comp], kink.left[comp], t);
            }
            if t <= kink.time {
                return segment(a_time, a_value, a_deriv, kink.time, kink.value[comp], kink.left[comp], t);
            }
            a_time = kink.time;
            a_value = kink.value[comp];
            a_deriv = kink.right[comp];
        }
        segment(
            a_time,
            a_value,
            a_deriv,
            t_hi,
            self.node_value(i + 1)[comp],
            self.node_deriv(i + 1)[comp],
            t,
        )
    }
}

fn segment(
    a_time: f64,
    a_value: Complex64,
    a_deriv: Complex64,
    b_time: f64,
    b_value: Complex64,
    b_deriv: Complex64,
    t: f64,
) -> Complex64 {
    let h = b_time - a_time;
    if h <= 0.0 {
        return b_value;
    }
    let theta = ((t - a_time) / h).clamp(0.0, 1.0);
    interp::hermite(a_value, b_value, a_deriv, b_deriv, h, theta)
}

/// One mirror- or direct-path feedback term `coeff * y_src(t - delay)`.
struct DelayedTerm {
    dst: usize,
    src: usize,
    delay: f64,
    coeff: Complex64,
}

/// Linear delay system with an instantaneous coupling matrix (zero-delay
/// terms folded in), delayed feedback terms, and an optional diagonal
/// frequency shift.
struct DelaySystem<const N: usize> {
    instant: [[Complex64; N]; N],
    delayed: Vec<DelayedTerm>,
    shift: FrequencyShift,
}

impl<const N: usize> DelaySystem<N> {
    /// Evaluate the right-hand side at time `t`. With `left_limit` set, a
    /// delayed term whose lookup lands exactly on the history start is taken
    /// as still switched off: that is the left limit of the feedback jump,
    /// which is what a stage ending on the switch-on time must see.
    fn rhs(
        &self,
        t: f64,
        y: &[Complex64; N],
        hist: &HistoryBuffer<N>,
        out: &mut [Complex64; N],
        left_limit: bool,
    ) {
        let shift = self.shift.value(t);
        for (i, out_i) in out.iter_mut().enumerate() {
            let mut acc = Complex64::default();
            for (j, yj) in y.iter().enumerate() {
                acc += self.instant[i][j] * yj;
            }
            // the shift enters as -i * shift(t) * y
            acc += Complex64::new(0.0, -shift) * y[i];
            *out_i = acc;
        }
        let onset_snap = interp::NODE_SNAP * hist.dt;
        for term in &self.delayed {
            let when = t - term.delay;
            if left_limit && when <= onset_snap {
                continue;
            }
            out[term.dst] += term.coeff * hist.lookup(when, term.src);
        }
    }

    /// Crude Lipschitz constant of the right-hand side, for the declared
    /// error bound.
    fn rate_scale(&self) -> f64 {
        let mut per_row = [0.0f64; N];
        for (row, coeffs) in per_row.iter_mut().zip(&self.instant) {
            *row = coeffs.iter().map(|c| c.norm()).sum();
        }
        for term in &self.delayed {
            per_row[term.dst] += term.coeff.norm();
        }
        let max_row = per_row.iter().fold(0.0f64, |m, v| m.max(*v));
        max_row + self.shift.max_abs()
    }

    fn min_delay(&self) -> Option<f64> {
        self.delayed
            .iter()
            .map(|t| t.delay)
            .fold(None, |acc, d| Some(acc.map_or(d, |a: f64| a.min(d))))
    }

    fn max_delay(&self) -> f64 {
        self.delayed.iter().map(|t| t.delay).fold(0.0, f64::max)
    }
}

fn add_channel_terms(
    delayed: &mut Vec<DelayedTerm>,
    instant: &mut Complex64,
    dst: usize,
    src: usize,
    coeff: Complex64,
    delay: f64,
) {
    if coeff.norm_sqr() == 0.0 {
        return;
    }
    if delay == 0.0 {
        // zero-delay path acts instantaneously instead of via the history
        *instant += coeff;
    } else {
        delayed.push(DelayedTerm {
            dst,
            src,
            delay,
            coeff,
        });
    }
}

/// Times at which the solution loses a derivative: the switch-on of each
/// feedback term propagates the initial jump, each round trip smoothing it
/// by one order, and a non-smooth frequency shift seeds its own chain. Only
/// the first few generations matter for a fourth-order step.
fn discontinuity_times(
    delays: &[f64],
    shift: &FrequencyShift,
    t_max: f64,
    dt: f64,
) -> Vec<f64> {
    const MAX_LEVEL: u32 = 4;
    let mut queue: Vec<(f64, u32)> = vec![(0.0, 0)];
    match shift {
        FrequencyShift::Sinusoid { onset, .. } => queue.push((*onset, 1)),
        FrequencyShift::Sampled { times, .. } => {
            queue.extend(times.iter().map(|&t| (t, 1)));
        }
        _ => {}
    }
    let mut found = Vec::new();
    while let Some((t, level)) = queue.pop() {
        if t > 0.0 && t <= t_max {
            found.push(t);
        }
        if level < MAX_LEVEL {
            for &delay in delays {
                let child = t + delay;
                if child <= t_max {
                    queue.push((child, level + 1));
                }
            }
        }
    }
    found.sort_by(|a, b| a.partial_cmp(b).unwrap());
    found.dedup_by(|a, b| (*a - *b).abs() <= interp::NODE_SNAP * dt);
    found
}

fn step_count(t_max: f64, dt: f64) -> Result<usize, DdeError> {
    if !(dt.is_finite() && dt > 0.0 && t_max.is_finite() && t_max >= dt) {
        return Err(DdeError::BadTimeGrid);
    }
    let steps = t_max / dt;
    if steps > 5e8 {
        return Err(DdeError::BadTimeGrid);
    }
    let rounded = steps.round();
    let n = if (steps - rounded).abs() < 1e-9 {
        rounded as usize
    } else {
        steps.ceil() as usize
    };
    Ok(n.max(1))
}

fn integrate<const N: usize>(
    system: &DelaySystem<N>,
    y0: [Complex64; N],
    t_max: f64,
    dt: f64,
) -> Result<(Vec<[Complex64; N]>, f64), DdeError> {
    let n_steps = step_count(t_max, dt)?;
    if let Some(min_delay) = system.min_delay() {
        if dt > min_delay / 10.0 * (1.0 + 1e-12) {
            return Err(DdeError::StepTooLarge { dt, min_delay });
        }
    }

    let span = (system.max_delay() / dt).ceil() as usize + 4;
    let mut hist = HistoryBuffer::<N>::new(0.0, dt, span.min(n_steps + 1));
    hist.push(y0);

    let delays: Vec<f64> = system.delayed.iter().map(|t| t.delay).collect();
    let kinks = discontinuity_times(&delays, &system.shift, t_max, dt);
    let snap = interp::NODE_SNAP * dt;
    let mut next_kink = 0usize;

    let mut series = Vec::with_capacity(n_steps + 1);
    series.push(y0);

    let mut y = y0;
    let mut k1 = [Complex64::default(); N];
    let mut k2 = [Complex64::default(); N];
    let mut k3 = [Complex64::default(); N];
    let mut k4 = [Complex64::default(); N];
    let mut stage = [Complex64::default(); N];
    let mut bounds: Vec<f64> = Vec::with_capacity(4);

    for step in 0..n_steps {
        let t_start = step as f64 * dt;
        let t_stop = (step + 1) as f64 * dt;

        // split the step at kinks that fall strictly inside it, so every
        // Runge-Kutta substep sees a smooth right-hand side
        bounds.clear();
        bounds.push(t_start);
        while next_kink < kinks.len() && kinks[next_kink] < t_stop - snap {
            let kink = kinks[next_kink];
            if kink > t_start + snap {
                bounds.push(kink);
            }
            next_kink += 1;
        }
        bounds.push(t_stop);

        for sub in 0..bounds.len() - 1 {
            let a = bounds[sub];
            let b = bounds[sub + 1];
            let h = b - a;
            system.rhs(a, &y, &hist, &mut k1, false);
            if sub == 0 {
                hist.set_derivative(step, k1);
            }
            for i in 0..N {
                stage[i] = y[i] + k1[i] * (0.5 * h);
            }
            system.rhs(a + 0.5 * h, &stage, &hist, &mut k2, false);
            for i in 0..N {
                stage[i] = y[i] + k2[i] * (0.5 * h);
            }
            system.rhs(a + 0.5 * h, &stage, &hist, &mut k3, false);
            for i in 0..N {
                stage[i] = y[i] + k3[i] * h;
            }
            // the stage on the right boundary must see the left limit of
            // any feedback term switching on exactly there
            system.rhs(a + h, &stage, &hist, &mut k4, true);
            for i in 0..N {
                y[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (h / 6.0);
            }
            if sub + 1 < bounds.len() - 1 {
                // landed on a mid-step kink: store its one-sided derivatives
                system.rhs(b, &y, &hist, &mut k1, true);
                system.rhs(b, &y, &hist, &mut k2, false);
                hist.push_kink(b, y, k1, k2);
            }
        }

        if y.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(DdeError::Diverged { t: t_stop });
        }
        hist.push(y);
        series.push(y);

        // kinks riding exactly on this node keep their one-sided record too
        while next_kink < kinks.len() && kinks[next_kink] <= t_stop + snap {
            system.rhs(t_stop, &y, &hist, &mut k1, true);
            system.rhs(t_stop, &y, &hist, &mut k2, false);
            hist.push_kink(t_stop, y, k1, k2);
            next_kink += 1;
        }
    }

    // Global O(dt^4) bound with a crude fifth power of the rate scale, plus
    // an accumulated round-off floor.
    let l = system.rate_scale();
    let error_bound = t_max * l.powi(5) * dt.powi(4) / 30.0 + n_steps as f64 * 1e-16;
    Ok((series, error_bound))
}

fn to_rows<const N: usize>(series: Vec<[Complex64; N]>) -> Vec<Vec<Complex64>> {
    (0..N)
        .map(|atom| series.iter().map(|s| s[atom]).collect())
        .collect()
}

/// Integrate the single-emitter equation of motion up to `t_max`.
///
/// Each channel contributes `-gamma/2 * c(t)` instantaneously and
/// `+ r * gamma/2 * e^{i phase} * c(t - delay)` once the round trip has
/// elapsed, with `r` the complex mirror reflection amplitude; a configured
/// frequency shift adds `-i shift(t) c(t)`. Channels with zero delay are
/// folded into the instantaneous coefficient.
pub fn integrate_single(
    config: &SingleAtomConfig,
    t_max: f64,
    dt: f64,
) -> Result<Trajectory, DdeError> {
    let r = config.mirror_amplitude();
    let mut instant = Complex64::default();
    let mut delayed = Vec::new();
    for which in [Channel::K, Channel::Q] {
        let ch = config.channel(which);
        if ch.gamma == 0.0 {
            continue;
        }
        instant -= Complex64::new(0.5 * ch.gamma, 0.0);
        let coeff = r * Complex64::from_polar(0.5 * ch.gamma, ch.phase);
        add_channel_terms(&mut delayed, &mut instant, 0, 0, coeff, ch.delay);
    }
    let system = DelaySystem::<1> {
        instant: [[instant]],
        delayed,
        shift: config.shift.clone(),
    };
    let (series, error_bound) = integrate(&system, [config.initial], t_max, dt)?;
    Ok(Trajectory::new(
        0.0,
        dt,
        to_rows(series),
        TrajectoryMeta::SingleAtom(config.clone()),
        error_bound,
    )
    .expect("integration grid is valid"))
}

/// Integrate the coupled two-emitter equations up to `t_max`.
///
/// Per channel, each emitter sees its own damping and mirror feedback plus
/// two cross terms from the other emitter: a direct path with delay
/// `(x2 - x1)/v` (no mirror bounce, hence no factor `r`) entering with a
/// minus sign, and a mirror path with delay `(x2 + x1)/v` carrying `r`.
pub fn integrate_two_atom(
    config: &TwoAtomConfig,
    t_max: f64,
    dt: f64,
) -> Result<Trajectory, DdeError> {
    let r = config.mirror_amplitude();
    let mut instant = [[Complex64::default(); 2]; 2];
    let mut delayed = Vec::new();
    for channel in [Channel::K, Channel::Q] {
        let gamma = config.gamma(channel);
        if gamma == 0.0 {
            continue;
        }
        let half = 0.5 * gamma;
        #[allow(clippy::needless_range_loop)] // two coupled slots per row
        for atom in 0..2 {
            let other = 1 - atom;
            instant[atom][atom] -= Complex64::new(half, 0.0);
            let self_coeff = r * Complex64::from_polar(half, config.phase_self(channel, atom));
            add_channel_terms(
                &mut delayed,
                &mut instant[atom][atom],
                atom,
                atom,
                self_coeff,
                config.delay_self(channel, atom),
            );
            let direct_coeff = -Complex64::from_polar(half, config.phase_minus(channel));
            add_channel_terms(
                &mut delayed,
                &mut instant[atom][other],
                atom,
                other,
                direct_coeff,
                config.delay_minus(channel),
            );
            let mirror_coeff = r * Complex64::from_polar(half, config.phase_plus(channel));
            add_channel_terms(
                &mut delayed,
                &mut instant[atom][other],
                atom,
                other,
                mirror_coeff,
                config.delay_plus(channel),
            );
        }
    }
    let system = DelaySystem::<2> {
        instant,
        delayed,
        shift: FrequencyShift::None,
    };
    let (series, error_bound) = integrate(&system, config.initial, t_max, dt)?;
    Ok(Trajectory::new(
        0.0,
        dt,
        to_rows(series),
        TrajectoryMeta::TwoAtom(config.clone()),
        error_bound,
    )
    .expect("integration grid is valid"))
}

/// Project a two-emitter trajectory onto the symmetric and antisymmetric
/// superpositions, `(c1 +/- c2) / sqrt(2)`. The pointwise norm identity
/// `|p+|^2 + |p-|^2 = |c1|^2 + |c2|^2` holds by construction.
pub fn symmetric_antisymmetric(
    traj: &Trajectory,
) -> Result<(Vec<Complex64>, Vec<Complex64>), DdeError> {
    if traj.num_atoms() != 2 {
        return Err(DdeError::RowCount {
            rows: traj.num_atoms(),
        });
    }
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let plus = traj
        .row(0)
        .iter()
        .zip(traj.row(1))
        .map(|(a, b)| (a + b) * inv_sqrt2)
        .collect();
    let minus = traj
        .row(0)
        .iter()
        .zip(traj.row(1))
        .map(|(a, b)| (a - b) * inv_sqrt2)
        .collect();
    Ok((plus, minus))
}
