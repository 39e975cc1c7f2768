//! Sudden quenches: initial band states, their evolution under a
//! post-quench Floquet system, and the observables built on the Loschmidt
//! amplitude `𝒢_k(t) = ⟨ψ_0(k)|ψ_t(k)⟩`.

mod critical;
mod evolve;
mod initial;
mod rate;
mod session;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::MomentumGrid;
use crate::su2::Spinor;

pub use critical::{critical_structure, fit_dynamical_phase, CriticalFamily, CriticalStructure, PhaseFit};
pub use evolve::{
    band_overlaps, dtop, dynamical_phase, dynamical_phase_from_overlaps, energy_expectation,
    evolve_continuous, evolve_stroboscopic, loschmidt_field, pgp_field, pgp_from_samples,
    BandOverlap, DtopValue, LoschmidtSample, PgpField, DTOP_RESIDUAL, UNDEFINED_PHASE,
};
pub use initial::{
    flat_nontrivial_spinor, flat_trivial_spinor, lower_band_fidelity, prepare_initial, InitialSpec,
    ADIABATIC_FIDELITY, DEFAULT_RAMP_STEPS, PATH_GAP_MIN,
};
pub use rate::{detect_cusps, rate_function, rate_function_continuum, RateSample, LN_CLAMP};
pub use session::{plateaus, time_grid, DtopSample, Plateau, Quench, QuenchTrace, MAX_DTOP_POINTS};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuenchError {
    #[error("invalid initial state specification: {0}")]
    InvalidSpec(String),
    #[error("adiabatic path point {index} has gap {gap:.3e}")]
    PathCrossesBoundary { index: usize, gap: f64 },
    #[error("adiabatic ramp reached fidelity {fidelity:.6} at k = {worst_k:.6}")]
    AdiabaticFailure { worst_k: f64, fidelity: f64 },
    #[error("post-quench system is gapless (gap {gap:.3e})")]
    Gapless { gap: f64 },
    #[error("geometric phase undefined at {} momenta (|𝒢| < 1e-9)", .indices.len())]
    UndefinedPhase { indices: Vec<usize> },
    #[error("dynamical winding did not quantize up to {points} momenta (residual {residual:.3e})")]
    UnwrapFailure { points: usize, residual: f64 },
    #[error("oscillation amplitude {amplitude:.3e} too small to identify a frequency")]
    FitDegenerate { amplitude: f64 },
    #[error("{0}")]
    BadInput(String),
}

/// Normalized spinors on a momentum grid, `|ψ(k)⟩`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentumField {
    pub grid: MomentumGrid,
    pub spinors: Vec<Spinor>,
    /// Pre-normalization norms, when produced from a lattice state.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

impl MomentumField {
    pub fn new(grid: MomentumGrid, spinors: Vec<Spinor>) -> Self {
        assert_eq!(grid.count(), spinors.len(), "field must match its grid");
        MomentumField {
            grid,
            spinors,
            weights: None,
        }
    }

    pub fn momenta(&self) -> Vec<f64> {
        self.grid.points().collect()
    }

    /// Multiplies every spinor by one unit complex number.
    pub fn with_global_phase(&self, phase: f64) -> Self {
        let c = Complex64::from_polar(1.0, phase);
        MomentumField {
            grid: self.grid,
            spinors: self.spinors.iter().map(|s| s.scale(c)).collect(),
            weights: self.weights.clone(),
        }
    }

    pub fn max_abs_diff(&self, other: &MomentumField) -> f64 {
        self.spinors
            .iter()
            .zip(&other.spinors)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }

    pub fn max_norm_defect(&self) -> f64 {
        self.spinors
            .iter()
            .map(|s| (s.norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}
