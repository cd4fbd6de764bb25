//! Excitation-amplitude time series, the exchange format between the delay
//! integrator, the analytic results, the observables, and the mode oracle.

use num_complex::Complex64;
use thiserror::Error;

use crate::interp;
use crate::model::{SingleAtomConfig, TwoAtomConfig};
use crate::oracle::AtomGeometry;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TrajectoryError {
    #[error("trajectory needs at least one row of samples")]
    Empty,
    #[error("trajectory rows must be non-empty and of equal length")]
    RaggedRows,
    #[error("trajectory step must be positive and finite")]
    BadStep,
    #[error("expected a trajectory with {expected} row(s), found {found}")]
    RowCount { expected: usize, found: usize },
}

/// Which computation produced a trajectory, with a copy of its inputs.
#[derive(Debug, Clone)]
pub enum TrajectoryMeta {
    SingleAtom(SingleAtomConfig),
    TwoAtom(TwoAtomConfig),
    ModeOracleSingle {
        geometry: AtomGeometry,
        n_modes: usize,
        half_width: f64,
    },
    ModeOracleTwo {
        config: TwoAtomConfig,
        n_modes: usize,
        half_width: f64,
    },
}

/// Complex excitation amplitudes on a uniform time grid, one row per emitter.
#[derive(Debug, Clone)]
pub struct Trajectory {
    t0: f64,
    dt: f64,
    rows: Vec<Vec<Complex64>>,
    pub meta: TrajectoryMeta,
    /// Declared bound on the accumulated integration error of the amplitudes.
    pub error_bound: f64,
}

impl Trajectory {
    pub fn new(
        t0: f64,
        dt: f64,
        rows: Vec<Vec<Complex64>>,
        meta: TrajectoryMeta,
        error_bound: f64,
    ) -> Result<Self, TrajectoryError> {
        if rows.is_empty() {
            return Err(TrajectoryError::Empty);
        }
        let len = rows[0].len();
        if len == 0 || rows.iter().any(|r| r.len() != len) {
            return Err(TrajectoryError::RaggedRows);
        }
        if !(dt.is_finite() && dt > 0.0) || !t0.is_finite() {
            return Err(TrajectoryError::BadStep);
        }
        Ok(Self {
            t0,
            dt,
            rows,
            meta,
            error_bound,
        })
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Number of grid points per row.
    pub fn len(&self) -> usize {
        self.rows[0].len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees at least one sample
    }

    pub fn num_atoms(&self) -> usize {
        self.rows.len()
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.dt
    }

    pub fn t_end(&self) -> f64 {
        self.time(self.len() - 1)
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.time(i)).collect()
    }

    pub fn row(&self, atom: usize) -> &[Complex64] {
        &self.rows[atom]
    }

    pub fn amplitude(&self, atom: usize, i: usize) -> Complex64 {
        self.rows[atom][i]
    }

    pub fn population(&self, atom: usize, i: usize) -> f64 {
        self.rows[atom][i].norm_sqr()
    }

    pub fn populations(&self, atom: usize) -> Vec<f64> {
        self.rows[atom].iter().map(|c| c.norm_sqr()).collect()
    }

    /// Cubic interpolation of a row at an arbitrary time. Times before the
    /// grid return zero (the emitter history is empty before t0); times past
    /// the end clamp to the final sample.
    pub fn sample(&self, atom: usize, t: f64) -> Complex64 {
        interp::sample_uniform_cubic(&self.rows[atom], self.t0, self.dt, t)
    }

    /// Largest deviation of any amplitude above the initial norm, minus the
    /// declared error bound. Negative or zero for a well-behaved decay.
    pub fn norm_excess(&self) -> f64 {
        let initial: f64 = self
            .rows
            .iter()
            .map(|r| r[0].norm_sqr())
            .sum::<f64>()
            .sqrt();
        let max = self
            .rows
            .iter()
            .flat_map(|r| r.iter())
            .map(|c| c.norm())
            .fold(0.0f64, f64::max);
        max - initial - self.error_bound
    }
}
