//! Mild-solution machinery: existence times, the Duhamel operator, plain
//! and Gevrey-weighted Picard iteration, the time marcher and restarts.

mod constants;
mod duhamel;
mod evolve;
mod existence;
mod picard;

pub use constants::{calibrate_constants, Calibration, ConstantsTable};
pub use duhamel::{duhamel_bilinear, linear_trajectory};
pub use evolve::{
    evolve, glue_continue, AbortReason, Checkpoint, DiagnosticsTrace, EnergyLedger, EvolveOptions,
    EvolveResult, TraceRow,
};
pub use existence::{existence_time, largest_time_under, ExistenceTime, STRICT_WEIGHTED_CAP};
pub use picard::{picard_solve, weighted_picard_solve, BallCheck, PicardConfig, PicardReport};

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::SpectralField;

/// Uniform nodes `t_j = j·T/(n−1)`, `j = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    horizon: f64,
    nodes: usize,
}

impl TimeGrid {
    pub fn new(horizon: f64, nodes: usize) -> Result<Self> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "T",
                value: horizon,
                reason: "must be positive and finite",
            });
        }
        if nodes < 2 {
            return Err(Error::InvalidParameter {
                name: "n_nodes",
                value: nodes as f64,
                reason: "need at least 2 nodes",
            });
        }
        Ok(TimeGrid { horizon, nodes })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn len(&self) -> usize {
        self.nodes
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        self.horizon / (self.nodes - 1) as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        if j + 1 == self.nodes {
            self.horizon
        } else {
            j as f64 * self.step()
        }
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.nodes).map(|j| self.node(j)).collect()
    }
}

/// Fields sampled on a [`TimeGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: TimeGrid,
    pub states: Vec<SpectralField>,
}

impl Trajectory {
    pub fn new(times: TimeGrid, states: Vec<SpectralField>) -> Result<Self> {
        if states.len() != times.len() {
            return Err(Error::TimeGridMismatch);
        }
        if let Some(first) = states.first() {
            if states.iter().any(|s| s.grid() != first.grid()) {
                return Err(Error::GridMismatch);
            }
        }
        Ok(Trajectory { times, states })
    }

    /// `a·self`.
    pub fn scaled(&self, a: f64) -> Self {
        Trajectory {
            times: self.times,
            states: self.states.iter().map(|s| s.scaled(a)).collect(),
        }
    }

    /// Largest value of `norm` over the nodes.
    pub fn sup<F: Fn(&SpectralField) -> f64>(&self, norm: F) -> f64 {
        self.states.iter().map(norm).fold(0.0, f64::max)
    }

    /// `max_j norm(self_j − other_j)`.
    pub fn sup_distance<F: Fn(&SpectralField) -> f64>(&self, other: &Trajectory, norm: F) -> f64 {
        self.states
            .iter()
            .zip(&other.states)
            .map(|(a, b)| norm(&(a - b)))
            .fold(0.0, f64::max)
    }
}
