//! Non-Markovian spontaneous emission of Λ-type emitters in a
//! mirror-terminated 1D waveguide.
//!
//! A three-level emitter in the Λ configuration decays through two
//! transition channels into a semi-infinite waveguide. The mirror at the end
//! of the line feeds each emitted wave back after one round trip, turning
//! the equations of motion into delay differential equations whose
//! interference of instantaneous and retarded decay can trap excitation in
//! an emitter-photon bound state.
//!
//! The crate provides
//!
//! - [`model`]: parameter records and the time-dependent frequency shift,
//! - [`dde`]: a fixed-step method-of-steps integrator for one or two
//!   emitters with dense history interpolation,
//! - [`analytic`]: the piecewise series solution, Laplace-domain amplitude,
//!   steady-state population and the bound-state solver,
//! - [`observables`]: detector-plane output fields and radiated-probability
//!   bookkeeping,
//! - [`oracle`]: a discretized-mode Schrödinger integrator used as
//!   independent ground truth for everything above,
//! - [`scenario`]: the config-file schema, CSV emission and figure presets
//!   behind the `lambdawg` command-line tool.

pub mod analytic;
pub mod dde;
mod interp;
pub mod model;
pub mod observables;
pub mod oracle;
pub mod scenario;
pub mod trajectory;

pub use analytic::{
    bound_state_energy, bound_state_population, final_value, laplace_amplitude, series_solution,
    steady_state_condition, steady_state_population, AnalyticError, BoundState, PhotonProfile,
};
pub use dde::{integrate_single, integrate_two_atom, symmetric_antisymmetric, DdeError};
pub use model::{
    Channel, ChannelParams, FrequencyShift, ModelError, SingleAtomConfig, TwoAtomConfig,
};
pub use observables::{
    field_amplitude_at, integrated_flux, output_field, ObservablesError, OutputField,
};
pub use oracle::{
    evolve_modes_single, evolve_modes_two, realspace_field, AtomGeometry, ChannelModes, ModeGrid,
    ModeState, OracleError,
};
pub use trajectory::{Trajectory, TrajectoryError, TrajectoryMeta};
