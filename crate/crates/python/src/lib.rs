//! Python bindings for the core simulator: parameter records, the delay
//! integrators, analytic results, detector fields and the mode oracle.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use lambdawg_core as core;
use lambdawg_core::{Channel, DdeError, OracleError};

fn value_err(err: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(err.to_string())
}

fn dde_err(err: DdeError) -> PyErr {
    match err {
        DdeError::Diverged { .. } => PyRuntimeError::new_err(err.to_string()),
        _ => PyValueError::new_err(err.to_string()),
    }
}

fn oracle_err(err: OracleError) -> PyErr {
    match err {
        OracleError::NormDrift { .. } | OracleError::NonFinite { .. } => {
            PyRuntimeError::new_err(err.to_string())
        }
        _ => PyValueError::new_err(err.to_string()),
    }
}

fn parse_channel(tag: &str) -> PyResult<Channel> {
    match tag {
        "k" | "K" => Ok(Channel::K),
        "q" | "Q" => Ok(Channel::Q),
        other => Err(PyValueError::new_err(format!(
            "unknown channel {other:?}; expected \"k\" or \"q\""
        ))),
    }
}

/// One decay channel: rate, feedback phase, round-trip delay, group
/// velocity and carrier wave number.
#[pyclass(name = "ChannelParams", module = "lambdawg", from_py_object)]
#[derive(Clone)]
struct PyChannelParams {
    inner: core::ChannelParams,
}

#[pymethods]
impl PyChannelParams {
    #[new]
    #[pyo3(signature = (gamma, phase, delay, velocity = 1.0))]
    fn new(gamma: f64, phase: f64, delay: f64, velocity: f64) -> PyResult<Self> {
        Ok(Self {
            inner: core::ChannelParams::direct(gamma, phase, delay, velocity).map_err(value_err)?,
        })
    }

    /// Channel from the emitter geometry: mirror distance, group velocity,
    /// carrier wave number and bare rate.
    #[staticmethod]
    fn from_geometry(x0: f64, velocity: f64, carrier: f64, gamma: f64) -> PyResult<Self> {
        Ok(Self {
            inner: core::ChannelParams::from_geometry(x0, velocity, carrier, gamma)
                .map_err(value_err)?,
        })
    }

    #[staticmethod]
    fn disabled() -> Self {
        Self {
            inner: core::ChannelParams::disabled(),
        }
    }

    #[getter]
    fn gamma(&self) -> f64 {
        self.inner.gamma
    }

    #[getter]
    fn phase(&self) -> f64 {
        self.inner.phase
    }

    #[getter]
    fn delay(&self) -> f64 {
        self.inner.delay
    }

    #[getter]
    fn velocity(&self) -> f64 {
        self.inner.velocity
    }

    #[getter]
    fn carrier(&self) -> f64 {
        self.inner.carrier
    }

    fn __repr__(&self) -> String {
        format!(
            "ChannelParams(gamma={}, phase={}, delay={}, velocity={})",
            self.inner.gamma, self.inner.phase, self.inner.delay, self.inner.velocity
        )
    }
}

/// Time-dependent frequency shift applied to the excited state.
#[pyclass(name = "FrequencyShift", module = "lambdawg", from_py_object)]
#[derive(Clone)]
struct PyFrequencyShift {
    inner: core::FrequencyShift,
}

#[pymethods]
impl PyFrequencyShift {
    #[staticmethod]
    fn none() -> Self {
        Self {
            inner: core::FrequencyShift::None,
        }
    }

    #[staticmethod]
    fn smooth_step(amplitude: f64, onset: f64, width: f64) -> PyResult<Self> {
        Ok(Self {
            inner: core::FrequencyShift::smooth_step(amplitude, onset, width).map_err(value_err)?,
        })
    }

    #[staticmethod]
    fn sinusoid(amplitude: f64, angular_frequency: f64, onset: f64) -> PyResult<Self> {
        Ok(Self {
            inner: core::FrequencyShift::sinusoid(amplitude, angular_frequency, onset)
                .map_err(value_err)?,
        })
    }

    #[staticmethod]
    fn sampled(times: Vec<f64>, values: Vec<f64>) -> PyResult<Self> {
        Ok(Self {
            inner: core::FrequencyShift::sampled(times, values).map_err(value_err)?,
        })
    }

    fn value(&self, t: f64) -> f64 {
        self.inner.value(t)
    }
}

/// A single emitter coupled through two channels, behind a mirror of
/// reflectivity R.
#[pyclass(name = "SingleAtomConfig", module = "lambdawg", from_py_object)]
#[derive(Clone)]
struct PySingleAtomConfig {
    inner: core::SingleAtomConfig,
}

#[pymethods]
impl PySingleAtomConfig {
    #[new]
    #[pyo3(signature = (channel_k, channel_q, reflectivity = 1.0, shift = None, initial = Complex64::new(1.0, 0.0)))]
    fn new(
        channel_k: PyChannelParams,
        channel_q: PyChannelParams,
        reflectivity: f64,
        shift: Option<PyFrequencyShift>,
        initial: Complex64,
    ) -> PyResult<Self> {
        let shift = shift.map_or(core::FrequencyShift::None, |s| s.inner);
        Ok(Self {
            inner: core::SingleAtomConfig::new(
                channel_k.inner,
                channel_q.inner,
                reflectivity,
                shift,
                initial,
            )
            .map_err(value_err)?,
        })
    }

    #[getter]
    fn channel_k(&self) -> PyChannelParams {
        PyChannelParams {
            inner: self.inner.channel_k,
        }
    }

    #[getter]
    fn channel_q(&self) -> PyChannelParams {
        PyChannelParams {
            inner: self.inner.channel_q,
        }
    }

    #[getter]
    fn reflectivity(&self) -> f64 {
        self.inner.reflectivity
    }

    /// Complex reflection amplitude r with |r|^2 = R.
    fn mirror_amplitude(&self) -> Complex64 {
        self.inner.mirror_amplitude()
    }
}

/// Two emitters at x1 <= x2 sharing the waveguide channels.
#[pyclass(name = "TwoAtomConfig", module = "lambdawg", from_py_object)]
#[derive(Clone)]
struct PyTwoAtomConfig {
    inner: core::TwoAtomConfig,
}

#[pymethods]
impl PyTwoAtomConfig {
    #[new]
    #[pyo3(signature = (
        x1, x2, gamma_g, gamma_xi, k0, q0,
        v_k = 1.0, v_q = 1.0, reflectivity = 1.0,
        initial = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
    ))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        x1: f64,
        x2: f64,
        gamma_g: f64,
        gamma_xi: f64,
        k0: f64,
        q0: f64,
        v_k: f64,
        v_q: f64,
        reflectivity: f64,
        initial: (Complex64, Complex64),
    ) -> PyResult<Self> {
        Ok(Self {
            inner: core::TwoAtomConfig::new(
                x1,
                x2,
                gamma_g,
                gamma_xi,
                v_k,
                v_q,
                k0,
                q0,
                reflectivity,
                [initial.0, initial.1],
            )
            .map_err(value_err)?,
        })
    }
}

/// Excitation amplitudes on a uniform time grid, one row per emitter.
#[pyclass(name = "Trajectory", module = "lambdawg", from_py_object)]
#[derive(Clone)]
struct PyTrajectory {
    inner: core::Trajectory,
}

#[pymethods]
impl PyTrajectory {
    #[getter]
    fn dt(&self) -> f64 {
        self.inner.dt()
    }

    #[getter]
    fn t_end(&self) -> f64 {
        self.inner.t_end()
    }

    #[getter]
    fn num_atoms(&self) -> usize {
        self.inner.num_atoms()
    }

    /// Declared bound on the accumulated integration error.
    #[getter]
    fn error_bound(&self) -> f64 {
        self.inner.error_bound
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn times(&self) -> Vec<f64> {
        self.inner.times()
    }

    #[pyo3(signature = (atom = 0))]
    fn amplitudes(&self, atom: usize) -> PyResult<Vec<Complex64>> {
        if atom >= self.inner.num_atoms() {
            return Err(PyValueError::new_err("atom index out of range"));
        }
        Ok(self.inner.row(atom).to_vec())
    }

    #[pyo3(signature = (atom = 0))]
    fn populations(&self, atom: usize) -> PyResult<Vec<f64>> {
        if atom >= self.inner.num_atoms() {
            return Err(PyValueError::new_err("atom index out of range"));
        }
        Ok(self.inner.populations(atom))
    }

    /// Cubic interpolation of a row at an arbitrary time.
    #[pyo3(signature = (t, atom = 0))]
    fn sample(&self, t: f64, atom: usize) -> PyResult<Complex64> {
        if atom >= self.inner.num_atoms() {
            return Err(PyValueError::new_err("atom index out of range"));
        }
        Ok(self.inner.sample(atom, t))
    }
}

/// A bound state: energy root, excited-state occupation and the closed-form
/// photon amplitudes of both channels.
#[pyclass(name = "BoundState", module = "lambdawg", from_py_object)]
#[derive(Clone)]
struct PyBoundState {
    inner: core::BoundState,
}

#[pymethods]
impl PyBoundState {
    #[getter]
    fn energy(&self) -> f64 {
        self.inner.energy
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha
    }

    #[getter]
    fn residual(&self) -> f64 {
        self.inner.residual
    }

    /// Photon amplitude of one channel at wave number mu.
    fn photon_amplitude(&self, channel: &str, mu: f64) -> PyResult<f64> {
        let profile = match parse_channel(channel)? {
            Channel::K => &self.inner.beta,
            Channel::Q => &self.inner.gamma,
        };
        Ok(profile.eval(mu))
    }

    fn __repr__(&self) -> String {
        format!(
            "BoundState(energy={}, alpha={})",
            self.inner.energy, self.inner.alpha
        )
    }
}

/// Output field of one channel on a retarded-time grid.
#[pyclass(name = "OutputField", module = "lambdawg", from_py_object)]
#[derive(Clone)]
struct PyOutputField {
    inner: core::OutputField,
}

#[pymethods]
impl PyOutputField {
    #[getter]
    fn channel(&self) -> String {
        self.inner.channel.to_string()
    }

    #[getter]
    fn truncated(&self) -> bool {
        self.inner.truncated
    }

    /// Natural intensity prefactor gamma / 2 v of the channel.
    #[getter]
    fn prefactor(&self) -> f64 {
        self.inner.prefactor()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn times(&self) -> Vec<f64> {
        self.inner.times()
    }

    fn amplitudes(&self) -> Vec<Complex64> {
        (0..self.inner.len()).map(|i| self.inner.amplitude(i)).collect()
    }

    fn intensities(&self) -> Vec<f64> {
        self.inner.intensities()
    }

    fn normalized_intensities(&self) -> Vec<f64> {
        self.inner.normalized_intensities()
    }
}

/// A finished mode-resolved run: the emitter trajectory plus the final
/// field state for real-space reconstruction.
#[pyclass(name = "ModeRun", module = "lambdawg")]
struct PyModeRun {
    trajectory: core::Trajectory,
    state: core::ModeState,
    grid: core::ModeGrid,
}

#[pymethods]
impl PyModeRun {
    #[getter]
    fn trajectory(&self) -> PyTrajectory {
        PyTrajectory {
            inner: self.trajectory.clone(),
        }
    }

    /// Worst observed drift of the conserved norm.
    #[getter]
    fn norm_drift(&self) -> f64 {
        self.trajectory.error_bound
    }

    /// Final-state norm (atomic plus field populations).
    fn norm(&self) -> f64 {
        self.state.norm(&self.grid)
    }

    /// Real-space field of both channels at the given positions.
    fn realspace_field(&self, xs: Vec<f64>) -> (Vec<Complex64>, Vec<Complex64>) {
        core::realspace_field(&self.state, &self.grid, &xs)
    }
}

#[pyfunction]
fn integrate_single(config: PySingleAtomConfig, t_max: f64, dt: f64) -> PyResult<PyTrajectory> {
    Ok(PyTrajectory {
        inner: core::integrate_single(&config.inner, t_max, dt).map_err(dde_err)?,
    })
}

#[pyfunction]
fn integrate_two_atom(config: PyTwoAtomConfig, t_max: f64, dt: f64) -> PyResult<PyTrajectory> {
    Ok(PyTrajectory {
        inner: core::integrate_two_atom(&config.inner, t_max, dt).map_err(dde_err)?,
    })
}

/// Symmetric and antisymmetric projections (c1 +/- c2)/sqrt(2) of a
/// two-emitter trajectory.
#[pyfunction]
fn symmetric_antisymmetric(traj: PyTrajectory) -> PyResult<(Vec<Complex64>, Vec<Complex64>)> {
    core::symmetric_antisymmetric(&traj.inner).map_err(dde_err)
}

#[pyfunction]
fn series_solution(config: PySingleAtomConfig, t: f64) -> PyResult<Complex64> {
    core::series_solution(&config.inner, t).map_err(value_err)
}

#[pyfunction]
fn steady_state_condition(phi_k: f64, phi_q: f64, gamma_g: f64, gamma_xi: f64) -> bool {
    core::steady_state_condition(phi_k, phi_q, gamma_g, gamma_xi)
}

#[pyfunction]
fn steady_state_population(config: PySingleAtomConfig) -> PyResult<f64> {
    core::steady_state_population(&config.inner).map_err(value_err)
}

#[pyfunction]
fn laplace_amplitude(config: PySingleAtomConfig, s: Complex64) -> PyResult<Complex64> {
    core::laplace_amplitude(&config.inner, s).map_err(value_err)
}

#[pyfunction]
fn final_value(config: PySingleAtomConfig) -> PyResult<Complex64> {
    core::final_value(&config.inner).map_err(value_err)
}

#[pyfunction]
fn bound_state_energy(
    omega0: f64,
    channel_k: PyChannelParams,
    channel_q: PyChannelParams,
) -> Vec<f64> {
    core::bound_state_energy(omega0, &channel_k.inner, &channel_q.inner)
}

#[pyfunction]
fn bound_state_population(
    energy: f64,
    omega0: f64,
    channel_k: PyChannelParams,
    channel_q: PyChannelParams,
) -> PyResult<PyBoundState> {
    Ok(PyBoundState {
        inner: core::bound_state_population(energy, omega0, &channel_k.inner, &channel_q.inner)
            .map_err(value_err)?,
    })
}

#[pyfunction]
#[pyo3(signature = (traj, config, channel, detector_offset = 0.0, t_bar_end = None))]
fn output_field(
    traj: PyTrajectory,
    config: PySingleAtomConfig,
    channel: &str,
    detector_offset: f64,
    t_bar_end: Option<f64>,
) -> PyResult<PyOutputField> {
    let channel = parse_channel(channel)?;
    Ok(PyOutputField {
        inner: core::output_field(&traj.inner, &config.inner, channel, detector_offset, t_bar_end)
            .map_err(value_err)?,
    })
}

#[pyfunction]
#[pyo3(signature = (traj, config, channel, detector_offset, t_bar))]
fn field_amplitude_at(
    traj: PyTrajectory,
    config: PySingleAtomConfig,
    channel: &str,
    detector_offset: f64,
    t_bar: f64,
) -> PyResult<Complex64> {
    let channel = parse_channel(channel)?;
    core::field_amplitude_at(&traj.inner, &config.inner, channel, detector_offset, t_bar)
        .map_err(value_err)
}

/// Total probability radiated into the environment (detector flux plus
/// mirror transmission loss).
#[pyfunction]
fn integrated_flux(
    field_k: PyOutputField,
    field_q: PyOutputField,
    config: PySingleAtomConfig,
) -> PyResult<f64> {
    core::integrated_flux(&field_k.inner, &field_q.inner, &config.inner).map_err(value_err)
}

/// Evolve a single emitter against the discretized mode bath.
#[pyfunction]
#[pyo3(signature = (config, t_max, dt, n_modes = 4001, window = 40.0))]
fn evolve_modes_single(
    config: PySingleAtomConfig,
    t_max: f64,
    dt: f64,
    n_modes: usize,
    window: f64,
) -> PyResult<PyModeRun> {
    let geometry = core::AtomGeometry::from_single_config(&config.inner).map_err(oracle_err)?;
    let grid = core::ModeGrid::for_single(&geometry, n_modes, window).map_err(oracle_err)?;
    let (trajectory, state) =
        core::evolve_modes_single(&geometry, &grid, t_max, dt).map_err(oracle_err)?;
    Ok(PyModeRun {
        trajectory,
        state,
        grid,
    })
}

/// Evolve two emitters against the discretized mode bath.
#[pyfunction]
#[pyo3(signature = (config, t_max, dt, n_modes = 4001, window = 40.0))]
fn evolve_modes_two(
    config: PyTwoAtomConfig,
    t_max: f64,
    dt: f64,
    n_modes: usize,
    window: f64,
) -> PyResult<PyModeRun> {
    let grid = core::ModeGrid::for_two(&config.inner, n_modes, window).map_err(oracle_err)?;
    let (trajectory, state) =
        core::evolve_modes_two(&config.inner, &grid, t_max, dt).map_err(oracle_err)?;
    Ok(PyModeRun {
        trajectory,
        state,
        grid,
    })
}

#[pymodule]
fn lambdawg(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyChannelParams>()?;
    m.add_class::<PyFrequencyShift>()?;
    m.add_class::<PySingleAtomConfig>()?;
    m.add_class::<PyTwoAtomConfig>()?;
    m.add_class::<PyTrajectory>()?;
    m.add_class::<PyBoundState>()?;
    m.add_class::<PyOutputField>()?;
    m.add_class::<PyModeRun>()?;
    m.add_function(wrap_pyfunction!(integrate_single, m)?)?;
    m.add_function(wrap_pyfunction!(integrate_two_atom, m)?)?;
    m.add_function(wrap_pyfunction!(symmetric_antisymmetric, m)?)?;
    m.add_function(wrap_pyfunction!(series_solution, m)?)?;
    m.add_function(wrap_pyfunction!(steady_state_condition, m)?)?;
    m.add_function(wrap_pyfunction!(steady_state_population, m)?)?;
    m.add_function(wrap_pyfunction!(laplace_amplitude, m)?)?;
    m.add_function(wrap_pyfunction!(final_value, m)?)?;
    m.add_function(wrap_pyfunction!(bound_state_energy, m)?)?;
    m.add_function(wrap_pyfunction!(bound_state_population, m)?)?;
    m.add_function(wrap_pyfunction!(output_field, m)?)?;
    m.add_function(wrap_pyfunction!(field_amplitude_at, m)?)?;
    m.add_function(wrap_pyfunction!(integrated_flux, m)?)?;
    m.add_function(wrap_pyfunction!(evolve_modes_single, m)?)?;
    m.add_function(wrap_pyfunction!(evolve_modes_two, m)?)?;
    Ok(())
}
