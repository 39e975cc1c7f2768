use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{MomentumField, QuenchError};
use crate::floquet::{floquet_mode, walk_unitary, FloquetMode, WalkParams};
use crate::grid::{wrap_phase, MomentumGrid};
use crate::su2::Spinor;
use crate::topology::GAP_TOL;

/// `|𝒢_k|` below which the geometric phase is treated as undefined.
pub const UNDEFINED_PHASE: f64 = 1e-9;
/// Largest distance of the raw winding from an integer that still counts.
pub const DTOP_RESIDUAL: f64 = 0.05;

fn map_field(psi0: &MomentumField, f: impl Fn(f64, &Spinor) -> Spinor + Sync) -> MomentumField {
    let spinors = psi0
        .spinors
        .par_iter()
        .enumerate()
        .map(|(j, s)| f(psi0.grid.point(j), s))
        .collect();
    MomentumField {
        grid: psi0.grid,
        spinors,
        weights: psi0.weights.clone(),
    }
}

/// `e^{−iH_F(k)t}|ψ_0(k)⟩` from the spectral decomposition at each `k`.
pub fn evolve_continuous(psi0: &MomentumField, p: &WalkParams, t: f64) -> MomentumField {
    map_field(psi0, |k, s| floquet_mode(p, k).propagator(t) * *s)
}

/// `steps` applications of the walk unitary at each `k`.
pub fn evolve_stroboscopic(psi0: &MomentumField, p: &WalkParams, steps: usize) -> MomentumField {
    map_field(psi0, |k, s| {
        let u = walk_unitary(p, k);
        (0..steps).fold(*s, |acc, _| u * acc)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoschmidtSample {
    pub k: f64,
    pub g: Complex64,
    pub r: f64,
    pub phi: f64,
}

impl LoschmidtSample {
    pub fn new(k: f64, g: Complex64) -> Self {
        LoschmidtSample {
            k,
            g,
            r: g.norm(),
            phi: g.arg(),
        }
    }
}

pub fn loschmidt_field(psi0: &MomentumField, psit: &MomentumField) -> Result<Vec<LoschmidtSample>, QuenchError> {
    if psi0.grid != psit.grid {
        return Err(QuenchError::BadInput("fields live on different grids".into()));
    }
    Ok(psi0
        .spinors
        .iter()
        .zip(&psit.spinors)
        .enumerate()
        .map(|(j, (a, b))| LoschmidtSample::new(psi0.grid.point(j), a.inner(b)))
        .collect())
}

/// Populations of the post-quench bands, `|ψ_0⟩ = g|u⁻⟩ + e|u⁺⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandOverlap {
    pub k: f64,
    pub g_amp2: f64,
    pub e_amp2: f64,
    pub eps_f: f64,
}

impl BandOverlap {
    /// `|g|² − |e|²`, the amplitude of `Im 𝒢_k(t)`.
    pub fn imbalance(&self) -> f64 {
        self.g_amp2 - self.e_amp2
    }
}

pub(crate) fn overlap_at(k: f64, psi: &Spinor, mode: &FloquetMode) -> BandOverlap {
    BandOverlap {
        k,
        g_amp2: mode.n.lower_eigenvector().inner(psi).norm_sqr(),
        e_amp2: mode.n.upper_eigenvector().inner(psi).norm_sqr(),
        eps_f: mode.epsilon,
    }
}

pub fn band_overlaps(psi0: &MomentumField, p: &WalkParams) -> Result<Vec<BandOverlap>, QuenchError> {
    let gap = p.spectral_gap();
    if gap < GAP_TOL {
        return Err(QuenchError::Gapless { gap });
    }
    Ok(psi0
        .spinors
        .par_iter()
        .enumerate()
        .map(|(j, s)| {
            let k = psi0.grid.point(j);
            overlap_at(k, s, &floquet_mode(p, k))
        })
        .collect())
}

/// `⟨ψ|H_F(k)|ψ⟩ = ε ⟨ψ|n·σ|ψ⟩`.
pub fn energy_expectation(psi: &Spinor, mode: &FloquetMode) -> f64 {
    mode.epsilon * psi.bloch_expectation(&mode.n)
}

/// `φ^dyn_k(t) = −t⟨ψ_t(k)|H_F(k)|ψ_t(k)⟩`, evaluated on the evolved state.
pub fn dynamical_phase(psi0: &MomentumField, p: &WalkParams, t: f64) -> Vec<f64> {
    psi0.spinors
        .par_iter()
        .enumerate()
        .map(|(j, s)| {
            let mode = floquet_mode(p, psi0.grid.point(j));
            let psit = mode.propagator(t) * *s;
            -t * energy_expectation(&psit, &mode)
        })
        .collect()
}

/// `φ^dyn_k(t) = ε_k t (|g_k|² − |e_k|²)`.
pub fn dynamical_phase_from_overlaps(overlaps: &[BandOverlap], t: f64) -> Vec<f64> {
    overlaps.iter().map(|o| o.eps_f * t * o.imbalance()).collect()
}

/// Geometric phase per momentum; `None` where `|𝒢_k| < 1e−9`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PgpField {
    pub grid: MomentumGrid,
    pub values: Vec<Option<f64>>,
}

impl PgpField {
    pub fn undefined(&self) -> Vec<usize> {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(j, v)| v.is_none().then_some(j))
            .collect()
    }

    /// Values on the closed half zone `[0, π]`.
    pub fn half_zone(&self) -> Result<Vec<f64>, QuenchError> {
        let idx = self.grid.half_zone_indices();
        let bad: Vec<usize> = idx.iter().copied().filter(|&j| self.values[j].is_none()).collect();
        if !bad.is_empty() {
            return Err(QuenchError::UndefinedPhase { indices: bad });
        }
        Ok(idx.iter().map(|&j| self.values[j].expect("checked")).collect())
    }
}

/// `arg 𝒢_k − φ^dyn_k` reduced to `(−π, π]`.
pub fn pgp_from_samples(samples: &[LoschmidtSample], dynamical: &[f64]) -> Vec<Option<f64>> {
    samples
        .iter()
        .zip(dynamical)
        .map(|(s, d)| (s.r >= UNDEFINED_PHASE).then(|| wrap_phase(s.phi - d)))
        .collect()
}

pub fn pgp_field(psi0: &MomentumField, p: &WalkParams, t: f64) -> PgpField {
    let psit = evolve_continuous(psi0, p, t);
    let samples = loschmidt_field(psi0, &psit).expect("same grid");
    let dynamical = dynamical_phase(psi0, p, t);
    PgpField {
        grid: psi0.grid,
        values: pgp_from_samples(&samples, &dynamical),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DtopValue {
    pub omega: i32,
    pub raw: f64,
    /// Largest single unwrapped step between neighboring momenta.
    pub max_step: f64,
    pub points: usize,
}

/// Winding `(1/2π) Σ Δφ^G` of the geometric phase sampled over `[0, π]`.
pub fn dtop(pgp: &[f64]) -> Result<DtopValue, QuenchError> {
    if pgp.len() < 64 {
        return Err(QuenchError::BadInput(format!(
            "need at least 64 half-zone points, got {}",
            pgp.len()
        )));
    }
    let mut total = 0.0;
    let mut max_step: f64 = 0.0;
    for w in pgp.windows(2) {
        let d = wrap_phase(w[1] - w[0]);
        max_step = max_step.max(d.abs());
        total += d;
    }
    let raw = total / (2.0 * PI);
    let residual = (raw - raw.round()).abs();
    if residual >= DTOP_RESIDUAL {
        return Err(QuenchError::UnwrapFailure {
            points: pgp.len(),
            residual,
        });
    }
    Ok(DtopValue {
        omega: raw.round() as i32,
        raw,
        max_step,
        points: pgp.len(),
    })
}
