use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{MomentumField, QuenchError};
use crate::floquet::{floquet_mode, ops_matrix, walk_unitary, TimeFrame, WalkParams};
use crate::grid::{Angle, MomentumGrid};
use crate::su2::Spinor;
use crate::topology::analytic_region;

/// Smallest gap tolerated anywhere along an adiabatic path.
pub const PATH_GAP_MIN: f64 = 1e-3;
/// Worst-case per-mode fidelity an adiabatic ramp must reach.
pub const ADIABATIC_FIDELITY: f64 = 0.999;
pub const DEFAULT_RAMP_STEPS: usize = 200;

/// How the pre-quench state `|ψ_0(k)⟩` is obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialSpec {
    /// Lower band of the flat system `(θ1, π)`; the site-local state
    /// `|0, ↓_y⟩` in the standard frame.
    FlatTrivial { theta1: Angle, frame: TimeFrame },
    /// Lower band of the flat system `(π, θ2)`; the two-site state
    /// `(|0,↑⟩ − i|−1,↓⟩)/√2` in the standard frame.
    FlatNontrivial { theta2: Angle, frame: TimeFrame },
    /// Exact gauge-fixed lower band of any system.
    ExactLowerBand(WalkParams),
    /// Ramp from the lower band of `path[0]` through the remaining points,
    /// `steps_per_leg` walk steps per segment.
    Adiabatic {
        path: Vec<WalkParams>,
        steps_per_leg: usize,
    },
}

/// Lower band of `(θ1, π)` in the standard frame, for `cos(θ1/2) > 0`.
pub fn flat_trivial_spinor() -> Spinor {
    Spinor::down_y()
}

/// Lower band of `(π, θ2)` in the standard frame, for `cos(θ2/2) > 0`.
pub fn flat_nontrivial_spinor(k: f64) -> Spinor {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    Spinor::new(h, Complex64::new(0.0, -1.0) * Complex64::from_polar(1.0, k) * h)
}

impl InitialSpec {
    pub fn flat_trivial(theta1: impl Into<Angle>) -> Self {
        InitialSpec::FlatTrivial {
            theta1: theta1.into(),
            frame: TimeFrame::Standard,
        }
    }

    pub fn flat_nontrivial(theta2: impl Into<Angle>) -> Self {
        InitialSpec::FlatNontrivial {
            theta2: theta2.into(),
            frame: TimeFrame::Standard,
        }
    }

    /// Ramp with the default number of micro-steps per leg.
    pub fn adiabatic(path: Vec<WalkParams>) -> Self {
        InitialSpec::Adiabatic {
            path,
            steps_per_leg: DEFAULT_RAMP_STEPS,
        }
    }

    /// The system whose lower band this state approximates.
    pub fn target(&self) -> WalkParams {
        match self {
            InitialSpec::FlatTrivial { theta1, frame } => WalkParams::new(*theta1, PI, *frame),
            InitialSpec::FlatNontrivial { theta2, frame } => WalkParams::new(PI, *theta2, *frame),
            InitialSpec::ExactLowerBand(p) => *p,
            InitialSpec::Adiabatic { path, .. } => *path.last().expect("validated path"),
        }
    }

    /// Parameters of every micro-step of the ramp, in order. Empty unless
    /// adiabatic.
    pub fn ramp_schedule(&self) -> Vec<WalkParams> {
        match self {
            InitialSpec::Adiabatic { path, steps_per_leg } => path
                .windows(2)
                .flat_map(|leg| {
                    let (a, b) = (leg[0], leg[1]);
                    (1..=*steps_per_leg).map(move |j| a.lerp(&b, j as f64 / *steps_per_leg as f64))
                })
                .collect(),
            _ => Vec::new(),
        }
    }

    /// The non-ramped state a ramp starts from.
    pub fn seed(&self) -> InitialSpec {
        match self {
            InitialSpec::Adiabatic { path, .. } => {
                let p0 = path[0];
                if p0.theta2.is_pi() {
                    InitialSpec::FlatTrivial { theta1: p0.theta1, frame: p0.frame }
                } else if p0.theta1.is_pi() {
                    InitialSpec::FlatNontrivial { theta2: p0.theta2, frame: p0.frame }
                } else {
                    InitialSpec::ExactLowerBand(p0)
                }
            }
            other => other.clone(),
        }
    }

    pub fn validate(&self) -> Result<(), QuenchError> {
        let InitialSpec::Adiabatic { path, steps_per_leg } = self else {
            return Ok(());
        };
        if path.is_empty() || *steps_per_leg == 0 {
            return Err(QuenchError::InvalidSpec("adiabatic path needs points and steps".into()));
        }
        if path.iter().any(|p| p.frame != path[0].frame) {
            return Err(QuenchError::InvalidSpec("adiabatic path mixes time frames".into()));
        }
        // The gap test alone can step over a closing line between samples.
        let mut region = None;
        let points = std::iter::once(path[0]).chain(self.ramp_schedule());
        for (index, p) in points.enumerate() {
            let gap = p.spectral_gap();
            let here = analytic_region(p.theta1, p.theta2);
            if gap < PATH_GAP_MIN || (index > 0 && here != region) {
                return Err(QuenchError::PathCrossesBoundary { index, gap });
            }
            region = here;
        }
        Ok(())
    }

    /// `|ψ_0(k)⟩` at a single momentum.
    pub fn spinor_at(&self, k: f64) -> Spinor {
        match self {
            InitialSpec::FlatTrivial { frame, .. } | InitialSpec::FlatNontrivial { frame, .. } => {
                let std = match self {
                    InitialSpec::FlatTrivial { .. } => flat_trivial_spinor(),
                    _ => flat_nontrivial_spinor(k),
                };
                let conj = self.target().with_frame(*frame).frame_conjugator();
                ops_matrix(&conj, k) * std
            }
            InitialSpec::ExactLowerBand(p) => floquet_mode(p, k).n.lower_eigenvector(),
            InitialSpec::Adiabatic { .. } => self
                .ramp_schedule()
                .iter()
                .fold(self.seed().spinor_at(k), |psi, p| walk_unitary(p, k) * psi),
        }
    }
}

/// Fidelity `|⟨u⁻(k)|ψ(k)⟩|²` to the lower band of `p`, per grid point.
pub fn lower_band_fidelity(field: &MomentumField, p: &WalkParams) -> Vec<f64> {
    field
        .grid
        .points()
        .zip(&field.spinors)
        .map(|(k, s)| floquet_mode(p, k).n.lower_eigenvector().inner(s).norm_sqr())
        .collect()
}

pub fn prepare_initial(spec: &InitialSpec, grid: MomentumGrid) -> Result<MomentumField, QuenchError> {
    spec.validate()?;
    let spinors: Vec<Spinor> = (0..grid.count())
        .into_par_iter()
        .map(|j| spec.spinor_at(grid.point(j)))
        .collect();
    let field = MomentumField::new(grid, spinors);
    if matches!(spec, InitialSpec::Adiabatic { .. }) {
        let fid = lower_band_fidelity(&field, &spec.target());
        let (worst, &fidelity) = fid
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("nonempty grid");
        if fidelity < ADIABATIC_FIDELITY {
            return Err(QuenchError::AdiabaticFailure {
                worst_k: grid.point(worst),
                fidelity,
            });
        }
    }
    Ok(field)
}
