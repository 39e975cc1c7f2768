use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::critical::{critical_structure, CriticalStructure};
use super::evolve::{dtop, energy_expectation, DtopValue, LoschmidtSample, UNDEFINED_PHASE};
use super::rate::{rate_from_moduli, RateSample};
use super::{prepare_initial, InitialSpec, MomentumField, QuenchError};
use crate::floquet::{floquet_mode, walk_unitary, FloquetMode, WalkParams};
use crate::grid::{wrap_phase, MomentumGrid};
use crate::su2::{Spinor, Unitary2};
use crate::topology::GAP_TOL;

/// Finest half-zone refinement tried before a DTOP evaluation gives up.
pub const MAX_DTOP_POINTS: usize = 1 << 16;
const DEFAULT_POINTS: usize = 1024;

/// Per-momentum data of one grid size, evaluated once.
struct ModeTable {
    grid: MomentumGrid,
    psi0: Vec<Spinor>,
    modes: Vec<FloquetMode>,
    unitaries: Vec<Unitary2>,
    /// `⟨ψ_0|n_f·σ|ψ_0⟩ = |e|² − |g|²`.
    polarization: Vec<f64>,
}

impl ModeTable {
    fn build(spec: &InitialSpec, post: &WalkParams, grid: MomentumGrid) -> Self {
        let rows: Vec<(Spinor, FloquetMode, Unitary2)> = (0..grid.count())
            .into_par_iter()
            .map(|j| {
                let k = grid.point(j);
                let u = walk_unitary(post, k);
                let mode = floquet_mode(post, k);
                (spec.spinor_at(k), mode, u)
            })
            .collect();
        let polarization = rows.iter().map(|(s, m, _)| s.bloch_expectation(&m.n)).collect();
        let mut psi0 = Vec::with_capacity(rows.len());
        let mut modes = Vec::with_capacity(rows.len());
        let mut unitaries = Vec::with_capacity(rows.len());
        for (s, m, u) in rows {
            psi0.push(s);
            modes.push(m);
            unitaries.push(u);
        }
        ModeTable {
            grid,
            psi0,
            modes,
            unitaries,
            polarization,
        }
    }

    /// `𝒢_k(t) = cos εt − i sin εt ⟨n·σ⟩` and `φ^dyn = −εt⟨n·σ⟩`.
    fn continuous(&self, j: usize, t: f64) -> (Complex64, f64) {
        let eps = self.modes[j].epsilon;
        let pol = self.polarization[j];
        let (s, c) = (eps * t).sin_cos();
        (Complex64::new(c, -s * pol), -eps * t * pol)
    }

    fn stroboscopic(&self, j: usize, steps: usize) -> (Complex64, f64) {
        let psi0 = self.psi0[j];
        let psin = self.unitaries[j].pow(steps) * psi0;
        let g = psi0.inner(&psin);
        (g, -(steps as f64) * energy_expectation(&psin, &self.modes[j]))
    }
}

/// One quench `ψ_0 → post` with cached per-momentum tables.
pub struct Quench {
    pub initial: InitialSpec,
    pub post: WalkParams,
    base_points: usize,
    tables: Mutex<BTreeMap<usize, Arc<OnceLock<ModeTable>>>>,
}

/// DTOP at one time, or the reason the sample was skipped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DtopSample {
    pub t: f64,
    pub value: Option<DtopValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

impl DtopSample {
    pub fn omega(&self) -> Option<i32> {
        self.value.map(|v| v.omega)
    }
}

/// A maximal run of samples sharing one DTOP value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Plateau {
    pub start: f64,
    pub end: f64,
    pub value: i32,
}

/// Groups consecutive defined samples into plateaus; skipped samples do not
/// break a run.
pub fn plateaus(samples: &[DtopSample]) -> Vec<Plateau> {
    let mut out: Vec<Plateau> = Vec::new();
    for s in samples {
        let Some(w) = s.omega() else { continue };
        match out.last_mut() {
            Some(last) if last.value == w => last.end = s.t,
            _ => out.push(Plateau { start: s.t, end: s.t, value: w }),
        }
    }
    out
}

/// Everything a quench run reports, on a common time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuenchTrace {
    pub times: Vec<f64>,
    /// Half-zone momenta `[0, π]` of the PGP rows.
    pub momenta: Vec<f64>,
    /// `pgp[i][j]` is `φ^G` at `times[i]`, `momenta[j]`.
    pub pgp: Vec<Vec<Option<f64>>>,
    pub dtop: Vec<DtopSample>,
    pub lambda: Vec<RateSample>,
    pub critical: CriticalStructure,
}

impl QuenchTrace {
    pub fn critical_times(&self) -> Vec<f64> {
        self.critical.times()
    }
}

impl Quench {
    /// Validates the initial state (including the ramp fidelity) and the
    /// post-quench gap.
    pub fn new(initial: InitialSpec, post: WalkParams) -> Result<Self, QuenchError> {
        let gap = post.spectral_gap();
        if gap < GAP_TOL {
            return Err(QuenchError::Gapless { gap });
        }
        let q = Quench {
            initial,
            post,
            base_points: DEFAULT_POINTS,
            tables: Mutex::new(BTreeMap::new()),
        };
        prepare_initial(&q.initial, MomentumGrid::new(DEFAULT_POINTS).expect("even"))?;
        Ok(q)
    }

    /// Momentum count of the base grid; must be even and at least 128.
    pub fn with_base_points(mut self, m: usize) -> Result<Self, QuenchError> {
        if m < 128 || m % 2 == 1 || m > MAX_DTOP_POINTS {
            return Err(QuenchError::BadInput(format!("unsupported base grid {m}")));
        }
        self.base_points = m;
        Ok(self)
    }

    pub fn base_points(&self) -> usize {
        self.base_points
    }

    pub fn base_grid(&self) -> MomentumGrid {
        MomentumGrid::new(self.base_points).expect("validated")
    }

    fn table(&self, m: usize) -> Arc<OnceLock<ModeTable>> {
        let cell = {
            let mut map = self.tables.lock().expect("table cache poisoned");
            map.entry(m).or_default().clone()
        };
        cell.get_or_init(|| {
            ModeTable::build(&self.initial, &self.post, MomentumGrid::new(m).expect("even"))
        });
        cell
    }

    pub fn initial_field(&self, m: usize) -> MomentumField {
        let cell = self.table(m);
        let t = cell.get().expect("initialized");
        MomentumField::new(t.grid, t.psi0.clone())
    }

    /// `𝒢_k(t)` on the full `m`-point grid.
    pub fn loschmidt(&self, t: f64, m: usize) -> Vec<LoschmidtSample> {
        let cell = self.table(m);
        let tab = cell.get().expect("initialized");
        (0..m)
            .map(|j| LoschmidtSample::new(tab.grid.point(j), tab.continuous(j, t).0))
            .collect()
    }

    fn half_zone_phases(
        &self,
        m: usize,
        eval: &(dyn Fn(&ModeTable, usize) -> (Complex64, f64) + Sync),
    ) -> Vec<Option<f64>> {
        let cell = self.table(m);
        let tab = cell.get().expect("initialized");
        tab.grid
            .half_zone_indices()
            .into_iter()
            .map(|j| {
                let (g, dynamical) = eval(tab, j);
                (g.norm() >= UNDEFINED_PHASE).then(|| wrap_phase(g.arg() - dynamical))
            })
            .collect()
    }

    /// `φ^G` on the half zone of the `m`-point grid at continuous time `t`.
    pub fn pgp_half_zone(&self, t: f64, m: usize) -> Vec<Option<f64>> {
        self.half_zone_phases(m, &|tab, j| tab.continuous(j, t))
    }

    /// `φ^G` on the half zone after `steps` walk steps.
    pub fn pgp_half_zone_steps(&self, steps: usize, m: usize) -> Vec<Option<f64>> {
        self.half_zone_phases(m, &|tab, j| tab.stroboscopic(j, steps))
    }

    fn refined_dtop(&self, phases: impl Fn(usize) -> Vec<Option<f64>>) -> Result<DtopValue, QuenchError> {
        let mut m = self.base_points;
        loop {
            let values = phases(m);
            let bad: Vec<usize> = values
                .iter()
                .enumerate()
                .filter_map(|(j, v)| v.is_none().then_some(j))
                .collect();
            if !bad.is_empty() {
                return Err(QuenchError::UndefinedPhase { indices: bad });
            }
            let pgp: Vec<f64> = values.into_iter().map(|v| v.expect("checked")).collect();
            let result = dtop(&pgp);
            match result {
                Ok(d) if d.max_step < PI / 2.0 => return Ok(d),
                _ if m >= MAX_DTOP_POINTS => {
                    let residual = match result {
                        Ok(d) => (d.raw - d.raw.round()).abs(),
                        Err(QuenchError::UnwrapFailure { residual, .. }) => residual,
                        Err(e) => return Err(e),
                    };
                    return Err(QuenchError::UnwrapFailure { points: pgp.len(), residual });
                }
                _ => m *= 2,
            }
        }
    }

    /// DTOP at continuous time `t`, refining the momentum grid as needed.
    pub fn dtop_at(&self, t: f64) -> Result<DtopValue, QuenchError> {
        self.refined_dtop(|m| self.pgp_half_zone(t, m))
    }

    /// DTOP after an integer number of walk steps.
    pub fn dtop_at_step(&self, steps: usize) -> Result<DtopValue, QuenchError> {
        self.refined_dtop(|m| self.pgp_half_zone_steps(steps, m))
    }

    pub fn dtop_scan(&self, times: &[f64]) -> Vec<DtopSample> {
        times
            .par_iter()
            .map(|&t| match self.dtop_at(t) {
                Ok(v) => DtopSample { t, value: Some(v), skipped: None },
                Err(e) => DtopSample { t, value: None, skipped: Some(e.to_string()) },
            })
            .collect()
    }

    pub fn dtop_steps(&self, steps: usize) -> Vec<DtopSample> {
        (0..=steps)
            .into_par_iter()
            .map(|n| match self.dtop_at_step(n) {
                Ok(v) => DtopSample { t: n as f64, value: Some(v), skipped: None },
                Err(e) => DtopSample { t: n as f64, value: None, skipped: Some(e.to_string()) },
            })
            .collect()
    }

    /// `λ(t)` on the `m`-point grid.
    pub fn rate_at(&self, t: f64, m: usize) -> RateSample {
        let cell = self.table(m);
        let tab = cell.get().expect("initialized");
        rate_from_moduli(t, (0..m).map(|j| tab.continuous(j, t).0.norm()))
    }

    pub fn rate(&self, t: f64) -> RateSample {
        self.rate_at(t, self.base_points)
    }

    pub fn critical_structure(&self, horizon: f64) -> CriticalStructure {
        critical_structure(&self.initial, &self.post, horizon).expect("validated quench")
    }

    /// PGP, DTOP and `λ` at every time in `times` on the base grid.
    pub fn trace(&self, times: &[f64]) -> QuenchTrace {
        let m = self.base_points;
        let pgp = times.par_iter().map(|&t| self.pgp_half_zone(t, m)).collect();
        let lambda = times.par_iter().map(|&t| self.rate_at(t, m)).collect();
        let horizon = times.iter().copied().fold(0.0, f64::max);
        QuenchTrace {
            times: times.to_vec(),
            momenta: self.base_grid().half_zone_points(),
            pgp,
            dtop: self.dtop_scan(times),
            lambda,
            critical: self.critical_structure(horizon),
        }
    }
}

/// `0, dt, 2dt, …` up to and including `horizon` (within rounding).
pub fn time_grid(dt: f64, horizon: f64) -> Vec<f64> {
    let n = (horizon / dt + 1e-9).floor() as usize;
    (0..=n).map(|i| i as f64 * dt).collect()
}
